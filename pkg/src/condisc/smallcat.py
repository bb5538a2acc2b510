"""Finite categories, functors, natural transformations and the checks built
on them: comma categories, connectedness, initial/final functors, limits and
colimits of set-valued diagrams, and adjunction laws.

Arrows are integers. ``comp[(g, f)]`` is ``g ∘ f`` (``f`` first).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from . import kernels
from .errors import (
    BoundExceeded,
    LeftNotFullyFaithful,
    PreconditionUnchecked,
    WitnessNotIso,
)
from .finsetcat import FinMap, FinSet

DEFAULT_COMMA_BOUND = 20000


@dataclass(frozen=True, eq=False)
class FinCat:
    num_objects: int
    arrows: tuple[tuple[int, int], ...]
    ids: tuple[int, ...]
    comp: dict = field(repr=False)
    object_labels: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        homs: dict = {}
        for k, (a, b) in enumerate(self.arrows):
            homs.setdefault((a, b), []).append(k)
        object.__setattr__(self, "_homs", homs)

    @property
    def objects(self) -> range:
        return range(self.num_objects)

    def hom(self, a: int, b: int) -> list[int]:
        return self._homs.get((a, b), [])

    def src(self, f: int) -> int:
        return self.arrows[f][0]

    def dst(self, f: int) -> int:
        return self.arrows[f][1]

    def compose(self, g: int, f: int) -> int:
        """``g ∘ f``."""
        return self.comp[(g, f)]

    def then(self, f: int, g: int) -> int:
        return self.comp[(g, f)]

    def is_iso(self, f: int) -> bool:
        return self.inverse(f) is not None

    def inverse(self, f: int) -> int | None:
        a, b = self.arrows[f]
        for g in self.hom(b, a):
            if self.comp[(g, f)] == self.ids[a] and self.comp[(f, g)] == self.ids[b]:
                return g
        return None

    def label(self, obj: int):
        return self.object_labels[obj] if self.object_labels else obj

    def to_json(self) -> dict:
        return {
            "objects": self.num_objects,
            "arrows": [list(a) for a in self.arrows],
            "identities": list(self.ids),
            "composition": sorted([g, f, h] for (g, f), h in self.comp.items()),
        }

    @classmethod
    def from_json(cls, data: dict) -> FinCat:
        return cls(
            int(data["objects"]),
            tuple(tuple(a) for a in data["arrows"]),
            tuple(data["identities"]),
            {(g, f): h for g, f, h in data["composition"]},
        )


def validate_category(c: FinCat) -> list[str]:
    """All associativity/identity violations; empty list means valid."""
    problems = []
    if len(c.ids) != c.num_objects:
        return [f"expected {c.num_objects} identities, got {len(c.ids)}"]
    for a, i in enumerate(c.ids):
        if c.arrows[i] != (a, a):
            problems.append(f"identity {i} of object {a} has type {c.arrows[i]}")
    for f, (a, b) in enumerate(c.arrows):
        for g in (g for cc in c.objects for g in c.hom(b, cc)):
            h = c.comp.get((g, f))
            if h is None:
                problems.append(f"missing composite {g}∘{f}")
            elif c.arrows[h] != (a, c.dst(g)):
                problems.append(f"composite {g}∘{f}={h} has wrong type")
        if problems:
            continue
        if c.comp.get((c.ids[b], f)) != f or c.comp.get((f, c.ids[a])) != f:
            problems.append(f"identity law fails at arrow {f}")
    if problems:
        return problems
    for f, (a, b) in enumerate(c.arrows):
        for d in c.objects:
            for g in c.hom(b, d):
                for e in c.objects:
                    for h in c.hom(d, e):
                        if c.comp[(h, c.comp[(g, f)])] != c.comp[(c.comp[(h, g)], f)]:
                            problems.append(f"associativity fails at ({h},{g},{f})")
    return problems


# -- constructors ----------------------------------------------------------


def empty_category() -> FinCat:
    return FinCat(0, (), (), {})


def discrete_category(n: int, labels=None) -> FinCat:
    return FinCat(n, tuple((a, a) for a in range(n)), tuple(range(n)), {(a, a): a for a in range(n)}, labels)


def poset_category(n: int, leq: Callable[[int, int], bool] | Iterable[tuple[int, int]], labels=None) -> FinCat:
    """Thin category with one arrow per pair ``a ≤ b``.

    ``leq`` is a predicate or a set of generating pairs; the reflexive
    transitive closure is taken.
    """
    if callable(leq):
        rel = {(a, b) for a in range(n) for b in range(n) if a == b or leq(a, b)}
    else:
        rel = set(leq) | {(a, a) for a in range(n)}
    up = [set() for _ in range(n)]
    for a, b in rel:
        up[a].add(b)
    # Warshall closure
    for k in range(n):
        for a in range(n):
            if k in up[a]:
                up[a] |= up[k]
    arrows = tuple(sorted((a, b) for a in range(n) for b in up[a]))
    index = {p: k for k, p in enumerate(arrows)}
    ids = tuple(index[(a, a)] for a in range(n))
    by_src: dict = {}
    for (a, b) in arrows:
        by_src.setdefault(a, []).append(b)
    comp = {}
    for (a, b), f in index.items():
        for c in by_src.get(b, ()):
            comp[(index[(b, c)], f)] = index[(a, c)]
    return FinCat(n, arrows, ids, comp, labels)


def monoid_category(mult: Sequence[Sequence[int]], unit: int) -> FinCat:
    """One-object category; ``mult[g][f]`` is ``g ∘ f``."""
    n = len(mult)
    comp = {(g, f): mult[g][f] for g in range(n) for f in range(n)}
    return FinCat(1, tuple((0, 0) for _ in range(n)), (unit,), comp)


def endomap_monoid(k: int) -> FinCat:
    """All self-maps of a ``k``-element set under composition (non-commutative for k ≥ 2)."""
    maps = list(itertools.product(range(k), repeat=k))
    index = {m: i for i, m in enumerate(maps)}
    mult = [[index[tuple(g[f[x]] for x in range(k))] for f in maps] for g in maps]
    return monoid_category(mult, index[tuple(range(k))])


def parallel_pair() -> FinCat:
    """``a ⇉ b``: arrows 0=id_a, 1=id_b, 2=u, 3=v."""
    arrows = ((0, 0), (1, 1), (0, 1), (0, 1))
    comp = {(0, 0): 0, (1, 1): 1, (2, 0): 2, (3, 0): 3, (1, 2): 2, (1, 3): 3}
    return FinCat(2, arrows, (0, 1), comp, ("a", "b"))


def opposite(c: FinCat) -> FinCat:
    arrows = tuple((b, a) for (a, b) in c.arrows)
    comp = {(f, g): h for (g, f), h in c.comp.items()}
    return FinCat(c.num_objects, arrows, c.ids, comp, c.object_labels)


# -- functors and natural transformations -----------------------------------


@dataclass(frozen=True, eq=False)
class FunctorData:
    src: FinCat
    dst: FinCat
    obj_map: tuple[int, ...]
    arrow_map: tuple[int, ...]

    def __call__(self, obj: int) -> int:
        return self.obj_map[obj]

    def arrow(self, f: int) -> int:
        return self.arrow_map[f]


def functor_violations(f: FunctorData) -> list[str]:
    c, d = f.src, f.dst
    out = []
    if len(f.obj_map) != c.num_objects or len(f.arrow_map) != len(c.arrows):
        return ["object or arrow map has the wrong length"]
    for u, (a, b) in enumerate(c.arrows):
        if d.arrows[f.arrow_map[u]] != (f.obj_map[a], f.obj_map[b]):
            out.append(f"arrow {u} sent to an arrow of the wrong type")
    if out:
        return out
    for a in c.objects:
        if f.arrow_map[c.ids[a]] != d.ids[f.obj_map[a]]:
            out.append(f"identity of {a} not preserved")
    for (g, h), k in c.comp.items():
        if f.arrow_map[k] != d.comp[(f.arrow_map[g], f.arrow_map[h])]:
            out.append(f"composite {g}∘{h} not preserved")
    return out


def identity_functor(c: FinCat) -> FunctorData:
    return FunctorData(c, c, tuple(c.objects), tuple(range(len(c.arrows))))


def compose_functors(f: FunctorData, g: FunctorData) -> FunctorData:
    """``g ∘ f`` (``f`` first)."""
    return FunctorData(
        f.src, g.dst,
        tuple(g.obj_map[x] for x in f.obj_map),
        tuple(g.arrow_map[u] for u in f.arrow_map),
    )


def opposite_functor(f: FunctorData) -> FunctorData:
    return FunctorData(opposite(f.src), opposite(f.dst), f.obj_map, f.arrow_map)


def thin_functor(src: FinCat, dst: FinCat, obj_map: Sequence[int]) -> FunctorData:
    """Functor into a thin category: each arrow goes to the unique arrow of its type."""
    arrow_map = []
    for a, b in src.arrows:
        hom = dst.hom(obj_map[a], obj_map[b])
        if len(hom) != 1:
            raise ValueError(f"no unique arrow {obj_map[a]}→{obj_map[b]} in target")
        arrow_map.append(hom[0])
    return FunctorData(src, dst, tuple(obj_map), tuple(arrow_map))


def enumerate_functors(c: FinCat, d: FinCat, limit: int = 100000) -> list[FunctorData]:
    """Every functor ``c → d`` (brute force over object and arrow assignments)."""
    out = []
    non_id = [u for u in range(len(c.arrows)) if u not in set(c.ids)]
    for obj_map in itertools.product(range(d.num_objects), repeat=c.num_objects):
        choices = [d.hom(obj_map[c.src(u)], obj_map[c.dst(u)]) for u in non_id]
        for picks in itertools.product(*choices):
            arrow_map = [0] * len(c.arrows)
            for a in c.objects:
                arrow_map[c.ids[a]] = d.ids[obj_map[a]]
            for u, v in zip(non_id, picks):
                arrow_map[u] = v
            f = FunctorData(c, d, tuple(obj_map), tuple(arrow_map))
            if not functor_violations(f):
                out.append(f)
                if len(out) > limit:
                    raise BoundExceeded("enumerate_functors", len(out), limit)
    return out


@dataclass(frozen=True, eq=False)
class NatTransData:
    src_functor: FunctorData
    dst_functor: FunctorData
    components: tuple[int, ...]


def naturality_violations(alpha: NatTransData) -> list[str]:
    f, g = alpha.src_functor, alpha.dst_functor
    d = f.dst
    out = []
    for x in f.src.objects:
        comp = alpha.components[x]
        if d.arrows[comp] != (f(x), g(x)):
            out.append(f"component at {x} has the wrong type")
    if out:
        return out
    for u, (a, b) in enumerate(f.src.arrows):
        lhs = d.comp[(alpha.components[b], f.arrow(u))]
        rhs = d.comp[(g.arrow(u), alpha.components[a])]
        if lhs != rhs:
            out.append(f"naturality square fails at arrow {u}")
    return out


def identity_nat(f: FunctorData) -> NatTransData:
    return NatTransData(f, f, tuple(f.dst.ids[f(x)] for x in f.src.objects))


# -- comma categories and connectedness --------------------------------------


@dataclass(frozen=True, eq=False)
class CommaCategory:
    category: FinCat
    # (source object X, target object Y, structure arrow) per comma object
    labels: tuple[tuple[int, int, int], ...]


def comma_category(f: FunctorData, side: str = "left", at: int | None = None,
                   bound: int = DEFAULT_COMMA_BOUND) -> CommaCategory:
    """``side='left'``: objects are arrows ``F(X) → Y``; ``side='right'``:
    arrows ``Y → F(X)``. With ``at`` the target ``Y`` is fixed and the
    ``Y``-component of morphisms is the identity."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    c, d = f.src, f.dst
    targets = [at] if at is not None else list(d.objects)
    objs = []
    for x in c.objects:
        for y in targets:
            arrows = d.hom(f(x), y) if side == "left" else d.hom(y, f(x))
            for u in arrows:
                objs.append((x, y, u))
    if len(objs) > bound:
        raise BoundExceeded("comma_category", len(objs), bound)
    arrows = []
    for i, (x, y, u) in enumerate(objs):
        for j, (x2, y2, u2) in enumerate(objs):
            ys = [d.ids[y]] if at is not None else d.hom(y, y2)
            for a in c.hom(x, x2):
                fa = f.arrow(a)
                for b in ys:
                    if side == "left":
                        ok = d.comp[(b, u)] == d.comp[(u2, fa)]
                    else:
                        ok = d.comp[(fa, u)] == d.comp[(u2, b)]
                    if ok:
                        arrows.append((i, j, a, b))
    index = {arr: k for k, arr in enumerate(arrows)}
    ids = tuple(index[(i, i, c.ids[x], d.ids[y])] for i, (x, y, _) in enumerate(objs))
    by_src: dict = {}
    for arr in arrows:
        by_src.setdefault(arr[0], []).append(arr)
    comp = {}
    for first in arrows:
        i, j, a, b = first
        for second in by_src.get(j, ()):
            _, k, a2, b2 = second
            comp[(index[second], index[first])] = index[(i, k, c.comp[(a2, a)], d.comp[(b2, b)])]
    cat = FinCat(len(objs), tuple((i, j) for (i, j, _, _) in arrows), ids, comp, tuple(objs))
    return CommaCategory(cat, tuple(objs))


def is_connected(c: FinCat) -> bool:
    """Nonempty with a single component; the empty category is not connected."""
    if c.num_objects == 0:
        return False
    us = [a for a, _ in c.arrows]
    vs = [b for _, b in c.arrows]
    _, count = kernels.uf_labels(c.num_objects, us, vs)
    return count == 1


def is_initial_functor(f: FunctorData, bound: int = DEFAULT_COMMA_BOUND) -> bool:
    return all(is_connected(comma_category(f, "left", d, bound).category) for d in f.dst.objects)


def is_final_functor(f: FunctorData, bound: int = DEFAULT_COMMA_BOUND) -> bool:
    return all(is_connected(comma_category(f, "right", d, bound).category) for d in f.dst.objects)


# -- set-valued diagrams -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class SetDiagram:
    index: FinCat
    value_sets: tuple[FinSet, ...]
    value_maps: tuple[FinMap, ...]


def diagram_violations(dg: SetDiagram) -> list[str]:
    c = dg.index
    out = []
    for u, (a, b) in enumerate(c.arrows):
        m = dg.value_maps[u]
        if m.dom.size != dg.value_sets[a].size or m.cod.size != dg.value_sets[b].size:
            out.append(f"map of arrow {u} has the wrong type")
    if out:
        return out
    for a in c.objects:
        if dg.value_maps[c.ids[a]] != FinMap.identity(dg.value_sets[a]):
            out.append(f"identity of {a} not sent to an identity")
    for (g, f), h in c.comp.items():
        if dg.value_maps[f].then(dg.value_maps[g]) != dg.value_maps[h]:
            out.append(f"composite {g}∘{f} not preserved")
    return out


def restrict_diagram(f: FunctorData, dg: SetDiagram) -> SetDiagram:
    """``dg ∘ f``."""
    return SetDiagram(
        f.src,
        tuple(dg.value_sets[f(x)] for x in f.src.objects),
        tuple(dg.value_maps[f.arrow(u)] for u in range(len(f.src.arrows))),
    )


@dataclass(frozen=True)
class LimitResult:
    apex: FinSet
    legs: tuple[FinMap, ...]
    families: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ColimitResult:
    apex: FinSet
    legs: tuple[FinMap, ...]
    offsets: tuple[int, ...]
    labels: tuple[int, ...]


def set_limit(dg: SetDiagram) -> LimitResult:
    """Compatible families, found by backtracking object by object."""
    c = dg.index
    n = c.num_objects
    # arrow u is checked once both endpoints are assigned
    checks: list[list[int]] = [[] for _ in range(n)]
    for u, (a, b) in enumerate(c.arrows):
        checks[max(a, b)].append(u)
    families = []
    current = [0] * n

    def extend(k):
        if k == n:
            families.append(tuple(current))
            return
        for x in range(dg.value_sets[k].size):
            current[k] = x
            ok = True
            for u in checks[k]:
                a, b = c.arrows[u]
                if dg.value_maps[u].table[current[a]] != current[b]:
                    ok = False
                    break
            if ok:
                extend(k + 1)

    extend(0)
    apex = FinSet(len(families))
    legs = tuple(FinMap(apex, dg.value_sets[o], tuple(fam[o] for fam in families)) for o in range(n))
    return LimitResult(apex, legs, tuple(families))


def set_colimit(dg: SetDiagram) -> ColimitResult:
    """Disjoint union modulo the relation generated by the value maps."""
    c = dg.index
    offsets = []
    total = 0
    for s in dg.value_sets:
        offsets.append(total)
        total += s.size
    us, vs = [], []
    for u, (a, b) in enumerate(c.arrows):
        table = dg.value_maps[u].table
        oa, ob = offsets[a], offsets[b]
        for x, y in enumerate(table):
            us.append(oa + x)
            vs.append(ob + y)
    labels, count = kernels.uf_labels(total, us, vs)
    apex = FinSet(count)
    legs = tuple(
        FinMap(s, apex, labels[offsets[o]:offsets[o] + s.size]) for o, s in enumerate(dg.value_sets)
    )
    return ColimitResult(apex, legs, tuple(offsets), tuple(labels))


@dataclass(frozen=True)
class ComparisonReport:
    kind: str
    precondition_holds: bool
    bijective: bool
    comparison: FinMap

    @property
    def ok(self) -> bool:
        return self.bijective or not self.precondition_holds


def restriction_comparison(f: FunctorData, dg: SetDiagram, kind: str = "limit", *,
                           precondition: bool | None = None) -> ComparisonReport:
    """Canonical map ``lim dg → lim(dg∘f)`` or ``colim(dg∘f) → colim dg``.

    ``precondition`` must be the caller's result of :func:`is_initial_functor`
    (limits) or :func:`is_final_functor` (colimits).
    """
    if precondition is None:
        raise PreconditionUnchecked(
            "pass precondition=is_initial_functor(f) or is_final_functor(f)"
        )
    rd = restrict_diagram(f, dg)
    if kind == "limit":
        big, small = set_limit(dg), set_limit(rd)
        index = {fam: k for k, fam in enumerate(small.families)}
        table = tuple(index[tuple(fam[f(x)] for x in f.src.objects)] for fam in big.families)
        cmp = FinMap(big.apex, small.apex, table)
    elif kind == "colimit":
        big, small = set_colimit(dg), set_colimit(rd)
        table = [0] * small.apex.size
        for x in f.src.objects:
            for e in range(rd.value_sets[x].size):
                table[small.legs[x].table[e]] = big.legs[f(x)].table[e]
        cmp = FinMap(small.apex, big.apex, tuple(table))
    else:
        raise ValueError("kind must be 'limit' or 'colimit'")
    return ComparisonReport(kind, bool(precondition), cmp.is_bijective(), cmp)


# -- adjunctions -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AdjunctionData:
    left: FunctorData   # C → D
    right: FunctorData  # D → C
    unit: NatTransData  # Id_C ⇒ R∘L
    counit: NatTransData  # L∘R ⇒ Id_D


def adjunction_violations(adj: AdjunctionData) -> list[str]:
    left, right = adj.left, adj.right
    c, d = left.src, left.dst
    out = []
    for name, fn in (("left", left), ("right", right)):
        out += [f"{name}: {v}" for v in functor_violations(fn)]
    if out:
        return out
    out += [f"unit: {v}" for v in naturality_violations(adj.unit)]
    out += [f"counit: {v}" for v in naturality_violations(adj.counit)]
    if out:
        return out
    for x in c.objects:
        lx = left(x)
        composite = d.comp[(adj.counit.components[lx], left.arrow(adj.unit.components[x]))]
        if composite != d.ids[lx]:
            out.append(f"triangle ε_L∘L(η) fails at {x}")
    for y in d.objects:
        ry = right(y)
        composite = c.comp[(right.arrow(adj.counit.components[y]), adj.unit.components[ry])]
        if composite != c.ids[ry]:
            out.append(f"triangle R(ε)∘η_R fails at {y}")
    return out


def check_adjunction(adj: AdjunctionData) -> bool:
    return not adjunction_violations(adj)


def is_fully_faithful(f: FunctorData) -> bool:
    c = f.src
    for a in c.objects:
        for b in c.objects:
            image = [f.arrow(u) for u in c.hom(a, b)]
            if len(set(image)) != len(image) or len(image) != len(f.dst.hom(f(a), f(b))):
                return False
    return True


def in_essential_image(f: FunctorData, x: int) -> bool:
    """Brute force: some ``y`` with an isomorphism ``F(y) ≅ x``."""
    d = f.dst
    return any(d.is_iso(u) for y in f.src.objects for u in d.hom(f(y), x))


def counit_detects_essential_image(adj: AdjunctionData, x: int) -> bool:
    if not is_fully_faithful(adj.left):
        raise LeftNotFullyFaithful("left adjoint hom-maps are not all bijections")
    return adj.left.dst.is_iso(adj.counit.components[x])


def find_natural_isos(f: FunctorData, g: FunctorData) -> list[NatTransData]:
    """All natural isomorphisms ``f ⇒ g``, by exhaustive search."""
    d = f.dst
    choices = [[u for u in d.hom(f(x), g(x)) if d.is_iso(u)] for x in f.src.objects]
    out = []
    for comps in itertools.product(*choices):
        alpha = NatTransData(f, g, tuple(comps))
        if not naturality_violations(alpha):
            out.append(alpha)
    return out


def unit_iso_from_counterpart(adj: AdjunctionData, witness: NatTransData) -> bool:
    """Given a natural iso ``R∘L ⇒ Id``, check the unit is iso and L fully faithful."""
    c = adj.left.src
    if any(not c.is_iso(u) for u in witness.components) or naturality_violations(witness):
        raise WitnessNotIso("witness is not a natural isomorphism")
    unit_iso = all(c.is_iso(u) for u in adj.unit.components)
    return unit_iso and is_fully_faithful(adj.left)


def poset_adjunction(c: FinCat, d: FinCat, left_map: Sequence[int], right_map: Sequence[int]) -> AdjunctionData:
    """Galois connection between thin categories as adjunction data."""
    left = thin_functor(c, d, left_map)
    right = thin_functor(d, c, right_map)
    rl = compose_functors(left, right)
    lr = compose_functors(right, left)
    unit_comps = []
    for x in c.objects:
        hom = c.hom(x, rl(x))
        if not hom:
            raise ValueError(f"no unit arrow at {x}: not a Galois connection")
        unit_comps.append(hom[0])
    counit_comps = []
    for y in d.objects:
        hom = d.hom(lr(y), y)
        if not hom:
            raise ValueError(f"no counit arrow at {y}: not a Galois connection")
        counit_comps.append(hom[0])
    return AdjunctionData(
        left, right,
        NatTransData(identity_functor(c), rl, tuple(unit_comps)),
        NatTransData(lr, identity_functor(d), tuple(counit_comps)),
    )


def chain(n: int) -> FinCat:
    return poset_category(n, lambda a, b: a <= b)


def chain_galois_connection(m: int, n: int, embed: Sequence[int]) -> AdjunctionData:
    """Monotone ``embed: [m] → [n]`` with ``embed[0] == 0`` and its right adjoint."""
    right = [max(c for c in range(m) if embed[c] <= y) for y in range(n)]
    return poset_adjunction(chain(m), chain(n), embed, right)


def identity_adjunction(c: FinCat) -> AdjunctionData:
    i = identity_functor(c)
    return AdjunctionData(i, i, identity_nat(i), identity_nat(i))


def representable_diagram(c: FinCat, x: int) -> SetDiagram:
    """``Hom(x, -)`` as a set-valued diagram on ``c``."""
    homs = [c.hom(x, y) for y in c.objects]
    pos = [{f: k for k, f in enumerate(h)} for h in homs]
    maps = []
    for u, (a, b) in enumerate(c.arrows):
        table = tuple(pos[b][c.comp[(u, f)]] for f in homs[a])
        maps.append(FinMap(FinSet(len(homs[a])), FinSet(len(homs[b])), table))
    return SetDiagram(c, tuple(FinSet(len(h)) for h in homs), tuple(maps))


def constant_diagram(c: FinCat, s: FinSet) -> SetDiagram:
    return SetDiagram(c, tuple(s for _ in c.objects), tuple(FinMap.identity(s) for _ in c.arrows))


def coproduct_diagram(d1: SetDiagram, d2: SetDiagram) -> SetDiagram:
    """Objectwise disjoint union of two diagrams on the same index."""
    sets, maps = [], []
    for a in d1.index.objects:
        sets.append(FinSet(d1.value_sets[a].size + d2.value_sets[a].size))
    for u, (a, b) in enumerate(d1.index.arrows):
        shift = d1.value_sets[b].size
        table = d1.value_maps[u].table + tuple(y + shift for y in d2.value_maps[u].table)
        maps.append(FinMap(sets[a], sets[b], table))
    return SetDiagram(d1.index, tuple(sets), tuple(maps))


def downset_diagram(c: FinCat, heights: Sequence[int]) -> SetDiagram:
    """On a thin category: ``y ↦ {e : heights[e] ≤ y}`` with inclusions.

    Element ``e`` is "born" at object ``heights[e]`` and persists along arrows.
    """
    members = [[e for e, h in enumerate(heights) if c.hom(h, y)] for y in c.objects]
    pos = [{e: k for k, e in enumerate(m)} for m in members]
    maps = []
    for u, (a, b) in enumerate(c.arrows):
        maps.append(FinMap(FinSet(len(members[a])), FinSet(len(members[b])),
                           tuple(pos[b][e] for e in members[a])))
    return SetDiagram(c, tuple(FinSet(len(m)) for m in members), tuple(maps))
