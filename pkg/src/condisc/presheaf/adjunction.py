"""Unit, counit and the adjunction laws between finite sets and presheaves.

``L(Y)`` is the presheaf of locally constant maps into ``Y`` and ``U(X)``
is the value at the point. The counit glues constant pieces over the
fibres of a locally constant map.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from ..errors import ProductPreservationFailed, ValueNotInUnderlying
from ..finsetcat import FinMap, FinSet, all_maps
from ..locconst import LocConstMap, all_locconst, constant_map, decomposition_map, lc_postcompose, lc_pullback
from ..tower import Tower, TowerMap, finite_map_as_tower_map, finite_set_tower, point
from ..kernels import rg_normalize
from .base import DEFAULT_BUDGET, PresheafMorphism, TowerPresheaf, underlying, validate_morphism
from .builtin import LocConstPresheaf


def unit_component(Y: FinSet) -> tuple:
    """``y -> the constant map at y``, as elements of ``L(Y)(point)``."""
    return tuple((y,) for y in range(Y.size))


def underlying_index(X: TowerPresheaf, budget: int = DEFAULT_BUDGET) -> tuple[list, FinSet]:
    u = underlying(X, budget)
    return u, FinSet(len(u))


def counit_component(X: TowerPresheaf, S: Tower, f: LocConstMap, budget: int = DEFAULT_BUDGET,
                     check_products: bool = True, u: Sequence | None = None):
    """The element of ``X(S)`` obtained by gluing constant pieces over ``f``.

    ``f`` takes values in indices of the sorted underlying set of ``X``.
    With ``check_products`` the fibre decomposition is first verified to
    be a product decomposition of ``X(S)``.
    """
    if u is None:
        u = underlying(X, budget)
    if f.target.size != len(u):
        raise ValueNotInUnderlying(f"target of size {f.target.size} is not the underlying set of size {len(u)}")
    if f.src != S:
        raise ValueError("map is not defined on the given tower")
    if check_products and len(set(f.table)) > 1:
        # the check depends only on the fibre partition, so remember successes
        key = (S, f.level, rg_normalize(f.table))
        seen = X.__dict__.setdefault("_product_checked", set())
        if key not in seen:
            decomposition_map(X, f, budget)
            seen.add(key)
    return X.glue_constant(S, f, u, budget)


def check_counit_natural_in_S(X: TowerPresheaf, g: TowerMap, f: LocConstMap, budget: int = DEFAULT_BUDGET,
                              check_products: bool = True, u: Sequence | None = None) -> bool:
    """``X(g)(eps_S(f)) == eps_T(f . g)`` for ``g : T -> S``."""
    if u is None:
        u = underlying(X, budget)
    top = counit_component(X, g.dst, f, budget, check_products, u)
    return X.restrict(g, top) == counit_component(X, g.src, lc_pullback(f, g), budget, check_products, u)


def morphism_on_underlying(alpha: PresheafMorphism, budget: int = DEFAULT_BUDGET) -> FinMap:
    cached = alpha.__dict__.get("_on_underlying")
    if cached is None:
        us, ut = underlying(alpha.src, budget), underlying(alpha.dst, budget)
        index = {x: i for i, x in enumerate(ut)}
        cached = FinMap(FinSet(len(us)), FinSet(len(ut)), tuple(index[alpha(point(0), x)] for x in us))
        alpha.__dict__["_on_underlying"] = cached
    return cached


def check_counit_natural_in_X(alpha: PresheafMorphism, S: Tower, f: LocConstMap,
                              budget: int = DEFAULT_BUDGET, validate_on: Sequence[TowerMap] = (),
                              check_products: bool = True) -> bool:
    """``alpha_S(eps_X(f)) == eps_Y(U(alpha) . f)``.

    ``alpha`` is first validated along ``validate_on``; a failing square
    raises NotANaturalTransformation.
    """
    validate_morphism(alpha, validate_on, budget)
    lhs = alpha(S, counit_component(alpha.src, S, f, budget, check_products))
    rhs = counit_component(alpha.dst, S, lc_postcompose(f, morphism_on_underlying(alpha, budget)), budget,
                           check_products)
    return lhs == rhs


def check_unit_natural(g: FinMap) -> bool:
    """``L(g)_point . eta_Y == eta_Z . g``."""
    ey, ez = unit_component(g.dom), unit_component(g.cod)
    return all(tuple(g.table[v] for v in ey[y]) == ez[g.table[y]] for y in range(g.dom.size))


def unit_is_bijective(Y: FinSet) -> bool:
    eta = unit_component(Y)
    target = LocConstPresheaf(Y).elements(point(0))
    return sorted(eta) == target and len(set(eta)) == Y.size


def check_first_triangle(Y: FinSet, towers: Iterable[Tower], budget: int = DEFAULT_BUDGET,
                         check_products: bool = True) -> list[str]:
    """``eps_{L(Y)} . L(eta_Y) = id`` on every locally constant map."""
    LY = LocConstPresheaf(Y)
    u = underlying(LY, budget)
    eta = unit_component(Y)
    to_index = FinMap(Y, FinSet(len(u)), tuple(u.index(e) for e in eta))
    out = []
    for t in towers:
        for f in all_locconst(t, Y, budget):
            if counit_component(LY, t, lc_postcompose(f, to_index), budget, check_products, u) != f.thread_values():
                out.append(f"first triangle fails on {t!r} at {f.thread_values()}")
    return out


def check_second_triangle(X: TowerPresheaf, budget: int = DEFAULT_BUDGET) -> list[str]:
    """``U(eps_X) . eta_{U(X)} = id`` on the underlying set."""
    u = underlying(X, budget)
    pt = point(0)
    out = []
    for i, x in enumerate(u):
        f = constant_map(pt, FinSet(len(u)), i)
        if counit_component(X, pt, f, budget) != x:
            out.append(f"second triangle fails at {x!r}")
    return out


def check_triangles(obj, towers: Sequence[Tower] = (), budget: int = DEFAULT_BUDGET) -> bool:
    """First triangle for a finite set, second triangle for a presheaf."""
    if isinstance(obj, FinSet):
        return not check_first_triangle(obj, towers, budget)
    return not check_second_triangle(obj, budget)


# -- hom-set transposes -------------------------------------------------------------


def transpose_to_presheaf(phi: FinMap, X: TowerPresheaf, budget: int = DEFAULT_BUDGET) -> PresheafMorphism:
    """``phi : Y -> U(X)`` (as indices) to ``L(Y) -> X``, i.e. ``eps_X . L(phi)``."""
    LY = LocConstPresheaf(phi.dom)

    def component(t, x):
        f = LY.as_map(t, x)
        return counit_component(X, t, lc_postcompose(f, phi), budget)

    return PresheafMorphism(LY, X, component, name=f"transpose{phi.table}")


def transpose_to_set(psi: PresheafMorphism, budget: int = DEFAULT_BUDGET) -> FinMap:
    """``psi : L(Y) -> X`` to ``U(psi) . eta_Y``."""
    Y = psi.src.target
    u = underlying(psi.dst, budget)
    index = {x: i for i, x in enumerate(u)}
    return FinMap(Y, FinSet(len(u)), tuple(index[psi(point(0), e)] for e in unit_component(Y)))


def transposes_round_trip(Y: FinSet, X: TowerPresheaf, towers: Sequence[Tower], limit: int = 64,
                          budget: int = DEFAULT_BUDGET) -> bool:
    u = underlying(X, budget)
    maps = itertools.islice(all_maps(Y, FinSet(len(u))), limit)
    LY = LocConstPresheaf(Y)
    for phi in maps:
        psi = transpose_to_presheaf(phi, X, budget)
        if transpose_to_set(psi, budget) != phi:
            return False
        # and back again on every sampled tower
        again = transpose_to_presheaf(transpose_to_set(psi, budget), X, budget)
        for t in towers:
            for x in LY.elements(t, budget):
                if again(t, x) != psi(t, x):
                    return False
    return True


# -- finite levels and equalizers ------------------------------------------------------


def finite_level_comparison(X: TowerPresheaf, Y: FinSet, budget: int = DEFAULT_BUDGET) -> dict:
    """The map ``X(Y) -> X(point)^Y`` given by restricting to each point.

    Raises ProductPreservationFailed when it is not a bijection.
    """
    F = finite_set_tower(Y.size)
    pt = point(0)
    incs = [TowerMap(pt, F, 0, ((y,),)) for y in range(Y.size)]
    comparison, seen = {}, set()
    for x in X.elements(F, budget):
        key = tuple(X.restrict(i, x) for i in incs)
        if key in seen:
            raise ProductPreservationFailed(f"{X.spec()}: X(Y) -> X(*)^Y is not injective", witness=key)
        seen.add(key)
        comparison[x] = key
    size = len(underlying(X, budget)) ** Y.size
    if len(comparison) != size:
        raise ProductPreservationFailed(
            f"{X.spec()}: X(Y) has {len(comparison)} elements, X(*)^Y has {size}", witness=len(comparison)
        )
    return comparison


def finite_level_natural(X: TowerPresheaf, h: FinMap, budget: int = DEFAULT_BUDGET) -> bool:
    """Naturality of the comparison against ``h : Y -> Y'``."""
    cy = finite_level_comparison(X, h.dom, budget)
    cz = finite_level_comparison(X, h.cod, budget)
    g = finite_map_as_tower_map(h)
    for x, key in cz.items():
        if cy[X.restrict(g, x)] != tuple(key[h.table[y]] for y in range(h.dom.size)):
            return False
    return True


def product_tower(a: Tower, b: Tower) -> tuple[Tower, TowerMap, TowerMap]:
    """Levelwise product of two towers of the same depth, with projections."""
    if a.depth != b.depth:
        raise ValueError("towers of different depth")
    sizes = tuple(x * y for x, y in zip(a.sizes, b.sizes))
    trans = tuple(
        tuple(a.transitions[n][i // b.sizes[n + 1]] * b.sizes[n] + b.transitions[n][i % b.sizes[n + 1]]
              for i in range(sizes[n + 1]))
        for n in range(a.depth)
    )
    p = Tower(sizes, trans, name=f"{a.name}x{b.name}")
    p1 = TowerMap(p, a, 0, tuple(tuple(i // b.sizes[n] for i in range(sizes[n])) for n in range(a.depth + 1)))
    p2 = TowerMap(p, b, 0, tuple(tuple(i % b.sizes[n] for i in range(sizes[n])) for n in range(a.depth + 1)))
    return p, p1, p2


def equalizer_check(X: TowerPresheaf, g: TowerMap, budget: int = DEFAULT_BUDGET) -> tuple[bool, object]:
    """Whether ``X(S) -> X(T) => X(T x_S T)`` is an equalizer for surjective ``g : T -> S``."""
    from ..tower import clopen_subtower

    T = g.src
    if len(set(g.thread_map)) != g.dst.top_size:
        raise ValueError("map is not surjective on threads")
    prod, p1, p2 = product_tower(T, T)
    n = T.top_size
    pairs = {i * n + j for i in range(n) for j in range(n) if g.thread_map[i] == g.thread_map[j]}
    fib = clopen_subtower(prod, prod.depth, pairs)
    q1, q2 = fib.inclusion.then(p1), fib.inclusion.then(p2)
    image = {}
    for x in X.elements(g.dst, budget):
        y = X.restrict(g, x)
        if y in image:
            return False, {"not_injective": [image[y], x]}
        image[y] = x
    for y in X.elements(T, budget):
        if X.restrict(q1, y) == X.restrict(q2, y) and y not in image:
            return False, {"not_descended": y}
    return True, None


def all_counits(X: TowerPresheaf, S: Tower, budget: int = DEFAULT_BUDGET) -> list:
    """The counit on every locally constant map into the underlying set."""
    u = underlying(X, budget)
    maps = all_locconst(S, FinSet(len(u)), budget)
    return [(f, counit_component(X, S, f, budget)) for f in maps]

