from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:  # fall back to the pure-Python kernels
    ext_modules = []
else:
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("condisc._kernels", ["src/condisc/_kernels.pyx"], extra_compile_args=["-O3"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
