"""Pure-Python versions of the hot kernels.

These are the reference implementations; ``_kernels.pyx`` must agree with
them element for element.
"""


def rg_normalize(labels):
    """Relabel blocks in first-occurrence order (restricted growth form)."""
    seen = {}
    out = []
    for x in labels:
        y = seen.get(x)
        if y is None:
            y = len(seen)
            seen[x] = y
        out.append(y)
    return tuple(out)


def rg_partitions(n):
    """All restricted growth strings of length ``n`` in lexicographic order."""
    if n == 0:
        return [()]
    a = [0] * n
    # m[i] = max(a[0..i-1]); a[i] may range over 0..m[i]+1
    m = [0] * n
    out = [tuple(a)]
    while True:
        i = n - 1
        while i > 0 and a[i] == m[i] + 1:
            i -= 1
        if i == 0:
            return out
        a[i] += 1
        top = max(m[i], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            m[j] = top
        out.append(tuple(a))


def meet(a, b):
    """Common refinement of two partitions given as label sequences."""
    return rg_normalize(list(zip(a, b)))


def refines(a, b):
    """True iff every block of ``a`` lies inside a block of ``b``."""
    image = {}
    for x, y in zip(a, b):
        prev = image.setdefault(x, y)
        if prev != y:
            return False
    return True


def uf_labels(n, us, vs):
    """Connected components of ``n`` nodes under the edges ``us[k]--vs[k]``.

    Returns ``(labels, count)`` with labels in first-occurrence order.
    """
    parent = list(range(n))

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for u, v in zip(us, vs):
        ru, rv = find(u), find(v)
        if ru != rv:
            if ru < rv:
                parent[rv] = ru
            else:
                parent[ru] = rv
    labels = rg_normalize([find(x) for x in range(n)])
    count = (max(labels) + 1) if n else 0
    return labels, count
