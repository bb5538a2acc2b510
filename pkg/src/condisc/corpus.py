"""Deterministic test corpora shared by the test-suite and ``condisc verify``."""

from __future__ import annotations

import itertools
import random

from . import smallcat as sc
from .finsetcat import FinSet


def small_posets(max_objects: int = 3) -> list[sc.FinCat]:
    """Every partial order on ``0..n-1`` (``n ≤ max_objects``) that is a
    linear extension of the natural order, i.e. ``a ≤ b`` implies ``a ≤ b``
    as integers. This covers every poset up to isomorphism."""
    out = [sc.empty_category()]
    for n in range(1, max_objects + 1):
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
        seen = set()
        for mask in range(1 << len(pairs)):
            rel = {p for k, p in enumerate(pairs) if mask >> k & 1}
            closed = {(a, c) for (a, b) in rel for (b2, c) in rel if b == b2}
            if not closed <= rel:
                continue
            key = frozenset(rel)
            if key in seen:
                continue
            seen.add(key)
            out.append(sc.poset_category(n, rel))
    return out


def category_corpus() -> list[tuple[str, sc.FinCat]]:
    cats = [(f"poset{k}", c) for k, c in enumerate(small_posets(3))]
    cats += [
        ("chain4", sc.chain(4)),
        ("diamond", sc.poset_category(4, {(0, 1), (0, 2), (1, 3), (2, 3)})),
        ("vee4", sc.poset_category(4, {(0, 3), (1, 3), (2, 3)})),
        ("parallel_pair", sc.parallel_pair()),
        ("endo2", sc.endomap_monoid(2)),
        ("discrete2", sc.discrete_category(2)),
    ]
    return cats


def diagram_corpus(c: sc.FinCat, seed: int = 0, random_count: int = 2) -> list[sc.SetDiagram]:
    rng = random.Random(seed)
    out = [sc.constant_diagram(c, FinSet(2))]
    out += [sc.representable_diagram(c, x) for x in c.objects]
    if c.num_objects >= 2:
        out.append(sc.coproduct_diagram(sc.representable_diagram(c, 0), sc.representable_diagram(c, c.num_objects - 1)))
    thin = all(len(c.hom(a, b)) <= 1 for a in c.objects for b in c.objects)
    if thin and c.num_objects:
        for _ in range(random_count):
            heights = [rng.randrange(c.num_objects) for _ in range(rng.randint(1, 4))]
            out.append(sc.downset_diagram(c, heights))
    return out


def functor_corpus(max_objects: int = 4, seed: int = 0, cap: int | None = None):
    """Functors between corpus categories with at most ``max_objects`` objects."""
    cats = [(n, c) for n, c in category_corpus() if c.num_objects <= max_objects]
    out = []
    for (n1, c1), (n2, c2) in itertools.product(cats, repeat=2):
        if c1.num_objects > 3 and c2.num_objects > 3:
            continue
        if len(c1.arrows) * max(1, len(c2.arrows)) > 200:
            continue
        for f in sc.enumerate_functors(c1, c2):
            out.append((f"{n1}->{n2}", f))
    rng = random.Random(seed)
    if cap is not None and len(out) > cap:
        keep = sorted(rng.sample(range(len(out)), cap))
        out = [out[i] for i in keep]
    return out
