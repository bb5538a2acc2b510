"""Comparing the colimit over discrete quotients with the colimit over
arrows into finite sets.

Arrows ``S -> F`` into finite sets are represented by the surjective ones
onto ``{0..k-1}``: every arrow factors through its image, so this
subcategory is initial in the full one (checked by
:func:`surjection_inclusion_initial` on small instances). A surjection is
an ordered partition of the top level.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..errors import BoundExceeded
from ..finsetcat import FinMap, FinSet, Partition, enumerate_partitions, partition_le
from ..quotients import dq_diagram
from ..smallcat import (
    FinCat,
    FunctorData,
    SetDiagram,
    comma_category,
    is_connected,
    is_initial_functor,
    opposite,
    opposite_functor,
    poset_category,
    restriction_comparison,
    thin_functor,
)
from ..tower import Tower, finite_map_as_tower_map, finite_set_tower
from .base import DEFAULT_BUDGET, TowerPresheaf

KAN_TOP_BOUND = 5


def ordered_surjections(n: int) -> list[tuple[int, ...]]:
    """All surjections ``range(n) -> range(k)``, grouped by partition."""
    out = []
    for p in enumerate_partitions(n):
        for perm in itertools.permutations(range(p.num_blocks)):
            out.append(tuple(perm[b] for b in p.block_of))
    return out


@dataclass(frozen=True)
class SurjCategory:
    category: FinCat
    objects: tuple[tuple[int, ...], ...]
    partitions: tuple[Partition, ...]

    def size_of(self, o: int) -> int:
        return self.partitions[o].num_blocks

    def arrow_map(self, a: int, b: int) -> FinMap:
        """The unique map ``[k_a] -> [k_b]`` under the source."""
        ua, ub = self.objects[a], self.objects[b]
        table = [0] * self.size_of(a)
        for x, y in zip(ua, ub):
            table[x] = y
        return FinMap(FinSet(self.size_of(a)), FinSet(self.size_of(b)), tuple(table))


def surjection_category(t: Tower, bound: int = KAN_TOP_BOUND) -> SurjCategory:
    if t.top_size > bound:
        raise BoundExceeded("surjection_category", t.top_size, bound)
    objs = tuple(ordered_surjections(t.top_size))
    parts = tuple(Partition.from_labels(u) for u in objs)
    cat = poset_category(len(objs), lambda a, b: partition_le(parts[a], parts[b]))
    return SurjCategory(cat, objs, parts)


def presheaf_diagram_on_surj(X: TowerPresheaf, sc: SurjCategory, budget: int = DEFAULT_BUDGET):
    """``(S -> [k]) |-> X([k])`` over the opposite of the surjection category."""
    values = [X.elements(finite_set_tower(sc.size_of(o)), budget) for o in range(len(sc.objects))]
    index = [{x: i for i, x in enumerate(v)} for v in values]
    op = opposite(sc.category)
    maps = []
    for (a, b) in sc.category.arrows:
        h = finite_map_as_tower_map(sc.arrow_map(a, b))
        # the opposite arrow runs b -> a
        maps.append(FinMap(FinSet(len(values[b])), FinSet(len(values[a])),
                           tuple(index[a][X.restrict(h, y)] for y in values[b])))
    return SetDiagram(op, tuple(FinSet(len(v)) for v in values), tuple(maps)), values


def projection_functor(t: Tower, sc: SurjCategory):
    """``pi``: each discrete quotient goes to its projection, read as a surjection."""
    qd = dq_diagram(t)
    position = {u: i for i, u in enumerate(sc.objects)}
    obj_map = [position[Partition.from_labels(q.thread_labels()).block_of] for q in qd.quotients]
    return thin_functor(qd.diagram.index, sc.category, obj_map), qd


def factorization_conditions(pi: FunctorData) -> tuple[bool, bool]:
    """The two conditions making ``pi`` initial, checked directly.

    (1) every object receives an arrow from the image of ``pi``;
    (2) two such arrows ``pi(a) -> d``, ``pi(b) -> d`` are joined by a zigzag
    in the comma category, witnessed by a common ``pi(c)`` below both.
    """
    c, d = pi.src, pi.dst
    first = all(any(d.hom(pi(x), o) for x in c.objects) for o in d.objects)
    second = True
    for o in d.objects:
        over = [x for x in c.objects if d.hom(pi(x), o)]
        for a, b in itertools.combinations(over, 2):
            if not any(c.hom(z, a) and c.hom(z, b) for z in over):
                second = False
    return first, second


@dataclass
class KanReport:
    tower: str
    presheaf: str
    dq_objects: int
    comma_objects: int
    initial: bool
    factorization: tuple[bool, bool]
    dq_colimit_size: int
    comma_colimit_size: int
    bijective: bool

    @property
    def ok(self) -> bool:
        return self.initial and all(self.factorization) and self.bijective

    def to_json(self) -> dict:
        return {
            "tower": self.tower, "presheaf": self.presheaf, "dq_objects": self.dq_objects,
            "comma_objects": self.comma_objects, "initial": self.initial,
            "factorization": list(self.factorization), "dq_colimit_size": self.dq_colimit_size,
            "comma_colimit_size": self.comma_colimit_size, "bijective": self.bijective,
        }


def kan_comparison(X: TowerPresheaf, t: Tower, budget: int = DEFAULT_BUDGET,
                   bound: int = KAN_TOP_BOUND) -> KanReport:
    sc = surjection_category(t, bound)
    pi, qd = projection_functor(t, sc)
    initial = is_initial_functor(pi)
    dg, _ = presheaf_diagram_on_surj(X, sc, budget)
    rep = restriction_comparison(opposite_functor(pi), dg, "colimit", precondition=initial)
    return KanReport(
        t.name, X.spec(), len(qd.quotients), len(sc.objects), initial, factorization_conditions(pi),
        rep.comparison.dom.size, rep.comparison.cod.size, rep.bijective,
    )


def surjection_inclusion_initial(t: Tower, max_target: int | None = None) -> bool:
    """Initiality of surjections inside all arrows ``S_D -> [k]``, ``k <= max_target``."""
    n = t.top_size
    max_target = n if max_target is None else max_target
    # objects carry their declared codomain size
    full_objs = []
    for k in range(max_target + 1):
        full_objs.extend((k, u) for u in itertools.product(range(k), repeat=n))
    arrows, index = [], {}
    for i, (ki, ui) in enumerate(full_objs):
        for j, (kj, uj) in enumerate(full_objs):
            for g in itertools.product(range(kj), repeat=ki):
                if all(g[x] == y for x, y in zip(ui, uj)):
                    index[(i, j, g)] = len(arrows)
                    arrows.append((i, j, g))
    ids = tuple(index[(i, i, tuple(range(k)))] for i, (k, _) in enumerate(full_objs))
    comp = {}
    by_src: dict = {}
    for a in arrows:
        by_src.setdefault(a[0], []).append(a)
    for f in arrows:
        i, j, g = f
        for h in by_src.get(j, ()):
            _, k, g2 = h
            comp[(index[h], index[f])] = index[(i, k, tuple(g2[v] for v in g))]
    full = FinCat(len(full_objs), tuple((i, j) for i, j, _ in arrows), ids, comp)
    surj = [i for i, (k, u) in enumerate(full_objs) if set(u) == set(range(k))]
    sub_arrows = [a for a in range(len(arrows)) if arrows[a][0] in surj and arrows[a][1] in surj]
    pos = {o: p for p, o in enumerate(surj)}
    sub_index = {a: p for p, a in enumerate(sub_arrows)}
    sub = FinCat(
        len(surj), tuple((pos[arrows[a][0]], pos[arrows[a][1]]) for a in sub_arrows),
        tuple(sub_index[ids[o]] for o in surj),
        {(sub_index[g], sub_index[f]): sub_index[h] for (g, f), h in comp.items() if g in sub_index and f in sub_index},
    )
    inc = FunctorData(sub, full, tuple(surj), tuple(sub_arrows))
    return all(is_connected(comma_category(inc, "left", o).category) for o in full.objects)
