"""The presheaf interface and presheaf morphisms.

A presheaf assigns to every tower a finite set of hashable, sortable
elements and to every tower map a restriction function going backwards.
Enumeration always runs under a budget so that fast-growing value sets
surface as BoundExceeded instead of hanging.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from ..errors import BoundExceeded, NotANaturalTransformation, ProductPreservationFailed
from ..tower import SubTower, Tower, TowerMap, point

DEFAULT_BUDGET = 10_000


class TowerPresheaf:
    """Base class. Subclasses implement ``_enumerate`` and ``restrict``."""

    name = "presheaf"

    def spec(self) -> str:
        return self.name

    def cardinality(self, t: Tower) -> int | None:
        """Exact size of ``X(t)`` when it can be computed without enumerating."""
        return None

    def _enumerate(self, t: Tower) -> Iterable:
        raise NotImplementedError

    def elements(self, t: Tower, budget: int = DEFAULT_BUDGET) -> list:
        n = self.cardinality(t)
        if n is not None and n > budget:
            raise BoundExceeded(f"{self.name} at {t!r}", n, budget)
        out = []
        for x in self._enumerate(t):
            out.append(x)
            if len(out) > budget:
                raise BoundExceeded(f"{self.name} at {t!r}", len(out), budget)
        return sorted(out)

    def contains(self, t: Tower, x) -> bool:
        return x in self.elements(t)

    def restrict(self, f: TowerMap, x):
        """``X(f)(x)`` for ``x`` in ``X(f.dst)``."""
        raise NotImplementedError

    def composition_exact(self, f: TowerMap, g: TowerMap) -> bool:
        """Whether ``X(f . g)`` is promised to equal ``X(f) . X(g)``."""
        return True

    def glue(self, t: Tower, pieces: Sequence[tuple[SubTower, object]], budget: int = DEFAULT_BUDGET):
        """The element of ``X(t)`` restricting to the given pieces.

        The default searches ``X(t)``; it raises ProductPreservationFailed
        when no element, or more than one, matches.
        """
        if len(pieces) == 1 and pieces[0][0].tower == t:
            return pieces[0][1]
        want = tuple(x for _, x in pieces)
        hits = [x for x in self.elements(t, budget) if tuple(self.restrict(s.inclusion, x) for s, _ in pieces) == want]
        if len(hits) != 1:
            raise ProductPreservationFailed(f"{len(hits)} elements glue the given pieces", witness=want)
        return hits[0]

    def glue_constant(self, t: Tower, f, u: Sequence, budget: int = DEFAULT_BUDGET):
        """Glue the constant pieces ``u[f(j)]`` over the fibres of ``f``.

        Subclasses with a direct formula override this; the default goes
        through clopen fibres and :meth:`glue`.
        """
        from ..locconst import lc_fibres

        fibres = lc_fibres(f)
        if len(fibres) == 1:
            return self.restrict(terminal_map(t), u[fibres[0][0]])
        pieces = [(sub, self.restrict(terminal_map(sub.tower), u[v])) for v, sub in fibres]
        return self.glue(t, pieces, budget)

    def distinguished(self, t: Tower) -> list[tuple[str, object]]:
        """Named elements worth testing first as witnesses."""
        return []

    def describe(self, t: Tower, x) -> str | None:
        for label, y in self.distinguished(t):
            if y == x:
                return label
        return None

    def __repr__(self):
        return f"<{self.spec()}>"


def terminal_map(t: Tower) -> TowerMap:
    """The unique map to the one-point tower."""
    return TowerMap(t, point(0), 0, ((0,) * t.sizes[0],))


def underlying(X: TowerPresheaf, budget: int = DEFAULT_BUDGET) -> list:
    cached = X.__dict__.get("_underlying")
    if cached is None:
        cached = X.__dict__["_underlying"] = X.elements(point(0), budget)
    return list(cached)


def functoriality_violations(X: TowerPresheaf, pairs: Iterable[tuple[TowerMap, TowerMap]],
                             budget: int = DEFAULT_BUDGET) -> list[str]:
    """Check ``X(g . f) = X(f) . X(g)`` for composable ``f`` then ``g``.

    Pairs outside the presheaf's declared scope are skipped.
    """
    out = []
    for f, g in pairs:
        if not X.composition_exact(f, g):
            continue
        fg = f.then(g)
        for x in X.elements(g.dst, budget):
            if X.restrict(fg, x) != X.restrict(f, X.restrict(g, x)):
                out.append(f"{X.spec()}: composite restriction differs at {x!r}")
                break
    return out


def check_product_preservation(X: TowerPresheaf, t: Tower, pieces: Sequence[SubTower],
                               budget: int = DEFAULT_BUDGET) -> tuple[bool, object]:
    """Whether restricting to the pieces is a bijection ``X(t) -> prod X(t_i)``.

    Returns ``(ok, witness)``; the witness is a colliding pair or the
    shortfall in the image count.
    """
    whole = X.elements(t, budget)
    expected = 1
    for sub in pieces:
        expected *= len(X.elements(sub.tower, budget))
    seen: dict = {}
    for x in whole:
        key = tuple(X.restrict(sub.inclusion, x) for sub in pieces)
        if key in seen:
            return False, {"collision": [seen[key], x]}
        seen[key] = x
    if len(seen) != expected:
        return False, {"image_size": len(seen), "product_size": expected}
    return True, None


# -- morphisms --------------------------------------------------------------------


class PresheafMorphism:
    def __init__(self, src: TowerPresheaf, dst: TowerPresheaf, component: Callable[[Tower, object], object],
                 name: str = "morphism"):
        self.src = src
        self.dst = dst
        self._component = component
        self.name = name

    def __call__(self, t: Tower, x):
        return self._component(t, x)

    def at_point(self, budget: int = DEFAULT_BUDGET) -> dict:
        return {x: self(point(0), x) for x in underlying(self.src, budget)}


def identity_morphism(X: TowerPresheaf) -> PresheafMorphism:
    return PresheafMorphism(X, X, lambda t, x: x, name="identity")


def compose_morphisms(a: PresheafMorphism, b: PresheafMorphism) -> PresheafMorphism:
    return PresheafMorphism(a.src, b.dst, lambda t, x: b(t, a(t, x)), name=f"{b.name}.{a.name}")


def validate_morphism(alpha: PresheafMorphism, maps: Iterable[TowerMap], budget: int = DEFAULT_BUDGET) -> None:
    """Raise NotANaturalTransformation if a naturality square fails."""
    for f in maps:
        for x in alpha.src.elements(f.dst, budget):
            left = alpha(f.src, alpha.src.restrict(f, x))
            right = alpha.dst.restrict(f, alpha(f.dst, x))
            if left != right:
                raise NotANaturalTransformation(
                    f"{alpha.name}: square along {f.src!r} -> {f.dst!r} fails at {x!r}"
                )


def sample_maps(towers: Sequence[Tower]) -> list[TowerMap]:
    """Identities, clopen inclusions, level projections and point maps."""
    from ..tower import clopen_subtower, level_map_to_finite, point_map

    out = []
    for t in towers:
        out.append(TowerMap.identity(t))
        out.append(terminal_map(t))
        for n in range(t.depth + 1):
            out.append(level_map_to_finite(t, n, range(t.sizes[n]), t.sizes[n]))
            if t.sizes[n] > 1:
                out.append(clopen_subtower(t, n, {0}).inclusion)
        if t.top_size:
            out.append(point_map(t, t.top_size - 1))
    return out

