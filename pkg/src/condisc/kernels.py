"""Kernel dispatch: the compiled extension when importable, else pure Python.

Set ``CONDISC_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and the parity tests).
"""

import os

from . import _kernels_py

BACKEND = "python"

if os.environ.get("CONDISC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py
else:
    _impl = _kernels_py

rg_normalize = _impl.rg_normalize
rg_partitions = _impl.rg_partitions
meet = _impl.meet
refines = _impl.refines
uf_labels = _impl.uf_labels

__all__ = ["BACKEND", "rg_normalize", "rg_partitions", "meet", "refines", "uf_labels"]
