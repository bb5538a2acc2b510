"""Brute-force oracles used by the tests. Deliberately naive and independent
of the library's kernels."""

import itertools


def equivalence_relations(n):
    """Every equivalence relation on range(n), as frozensets of ordered pairs.

    Enumerates all sets of unordered pairs and keeps the transitive ones.
    """
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = []
    for mask in range(1 << len(pairs)):
        rel = {(i, i) for i in range(n)}
        for k, (i, j) in enumerate(pairs):
            if mask >> k & 1:
                rel.add((i, j))
                rel.add((j, i))
        if all((a, c) in rel for (a, b) in rel for (b2, c) in rel if b == b2):
            out.append(frozenset(rel))
    return out


def relation_of(labels):
    n = len(labels)
    return frozenset((i, j) for i in range(n) for j in range(n) if labels[i] == labels[j])


def closure_classes(n, pairs):
    """Equivalence classes of the relation generated by ``pairs`` via
    repeated transitive closure (no union-find)."""
    rel = {(i, i) for i in range(n)}
    for a, b in pairs:
        rel.add((a, b))
        rel.add((b, a))
    changed = True
    while changed:
        changed = False
        new = {(a, c) for (a, b) in rel for (b2, c) in rel if b == b2} - rel
        if new:
            rel |= new
            changed = True
    classes = {frozenset(b for (a, b) in rel if a == x) for x in range(n)}
    return classes


def all_functions(n, k):
    return list(itertools.product(range(k), repeat=n))


def component_count(n, pairs):
    """Connected components of the undirected graph on range(n), by BFS."""
    adj = [[] for _ in range(n)]
    for a, b in pairs:
        adj[a].append(b)
        adj[b].append(a)
    seen, count = [False] * n, 0
    for s in range(n):
        if seen[s]:
            continue
        count += 1
        seen[s] = True
        stack = [s]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
    return count


def diagram_limit_families(dg):
    """Compatible families of a set-valued diagram, by brute force."""
    out = []
    for fam in itertools.product(*(range(s.size) for s in dg.value_sets)):
        if all(dg.value_maps[u].table[fam[a]] == fam[b] for u, (a, b) in enumerate(dg.index.arrows)):
            out.append(fam)
    return out


def diagram_colimit_size(dg):
    """Size of the colimit of a set-valued diagram via ``closure_classes``."""
    offsets, total = [], 0
    for s in dg.value_sets:
        offsets.append(total)
        total += s.size
    pairs = [
        (offsets[a] + x, offsets[b] + y)
        for u, (a, b) in enumerate(dg.index.arrows)
        for x, y in enumerate(dg.value_maps[u].table)
    ]
    return len(closure_classes(total, pairs))
