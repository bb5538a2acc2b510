# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot kernels. Semantics mirror ``_kernels_py`` exactly."""

from libc.stdlib cimport malloc, free


def rg_normalize(labels):
    seen = {}
    cdef list out = []
    cdef Py_ssize_t nxt = 0
    for x in labels:
        y = seen.get(x)
        if y is None:
            y = nxt
            seen[x] = y
            nxt += 1
        out.append(y)
    return tuple(out)


def rg_partitions(int n):
    if n == 0:
        return [()]
    cdef int *a = <int *> malloc(n * sizeof(int))
    cdef int *m = <int *> malloc(n * sizeof(int))
    cdef int i, j, top
    cdef list out = []
    try:
        for i in range(n):
            a[i] = 0
            m[i] = 0
        out.append(tuple([a[j] for j in range(n)]))
        while True:
            i = n - 1
            while i > 0 and a[i] == m[i] + 1:
                i -= 1
            if i == 0:
                return out
            a[i] += 1
            top = m[i] if m[i] > a[i] else a[i]
            for j in range(i + 1, n):
                a[j] = 0
                m[j] = top
            out.append(tuple([a[j] for j in range(n)]))
    finally:
        free(a)
        free(m)


def meet(a, b):
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t i
    seen = {}
    cdef list out = []
    cdef Py_ssize_t nxt = 0
    for i in range(n):
        key = (a[i], b[i])
        y = seen.get(key)
        if y is None:
            y = nxt
            seen[key] = y
            nxt += 1
        out.append(y)
    return tuple(out)


def refines(a, b):
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t i
    image = {}
    for i in range(n):
        prev = image.setdefault(a[i], b[i])
        if prev != b[i]:
            return False
    return True


cdef inline Py_ssize_t _find(Py_ssize_t *parent, Py_ssize_t x):
    cdef Py_ssize_t root = x
    cdef Py_ssize_t nxt
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


def uf_labels(Py_ssize_t n, us, vs):
    cdef Py_ssize_t *parent = <Py_ssize_t *> malloc((n + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *lab = <Py_ssize_t *> malloc((n + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t i, k, m, ru, rv, r, count
    cdef list out
    try:
        for i in range(n):
            parent[i] = i
            lab[i] = -1
        m = len(us)
        for k in range(m):
            ru = _find(parent, us[k])
            rv = _find(parent, vs[k])
            if ru != rv:
                if ru < rv:
                    parent[rv] = ru
                else:
                    parent[ru] = rv
        out = []
        count = 0
        for i in range(n):
            r = _find(parent, i)
            if lab[r] < 0:
                lab[r] = count
                count += 1
            out.append(lab[r])
        return tuple(out), count
    finally:
        free(parent)
        free(lab)
