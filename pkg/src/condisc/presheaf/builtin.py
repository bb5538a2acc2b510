"""Built-in presheaves: locally constant maps, aligned tower maps, and a
constant presheaf that deliberately breaks product preservation."""

from __future__ import annotations

import itertools
from functools import lru_cache

from ..errors import RestrictionUndefined, TowerMismatch
from ..finsetcat import FinMap, FinSet
from ..locconst import LocConstMap, from_thread_values
from ..tower import Tower, stabilization
from .base import DEFAULT_BUDGET, PresheafMorphism, TowerPresheaf


class LocConstPresheaf(TowerPresheaf):
    """``S -> LocConst(S, Y)``; an element is the tuple of values on threads."""

    def __init__(self, target: FinSet | int):
        self.target = FinSet(target) if isinstance(target, int) else target
        self.name = f"locconst:{self.target.size}"

    def cardinality(self, t):
        return self.target.size ** t.top_size

    def _enumerate(self, t):
        return itertools.product(range(self.target.size), repeat=t.top_size)

    def contains(self, t, x):
        return len(x) == t.top_size and all(0 <= v < self.target.size for v in x)

    def restrict(self, f, x):
        return tuple(x[j] for j in f.thread_map)

    def glue(self, t, pieces, budget=DEFAULT_BUDGET):
        out: list = [None] * t.top_size
        for sub, x in pieces:
            for j, v in zip(sub.thread_inclusion, x):
                out[j] = v
        if any(v is None for v in out):
            return super().glue(t, pieces, budget)
        return tuple(out)

    def glue_constant(self, t, f, u, budget=DEFAULT_BUDGET):
        # the restriction of (y,) to any piece is constant at y
        return tuple(u[v][0] for v in f.thread_values())

    def as_map(self, t: Tower, x) -> LocConstMap:
        return from_thread_values(t, self.target, x)

    def from_map(self, f: LocConstMap):
        return f.thread_values()


class ConstantPresheafNaive(TowerPresheaf):
    """Every tower gets ``Y`` and every restriction is the identity."""

    def __init__(self, target: FinSet | int):
        self.target = FinSet(target) if isinstance(target, int) else target
        self.name = f"const:{self.target.size}"

    def cardinality(self, t):
        return self.target.size

    def _enumerate(self, t):
        return range(self.target.size)

    def contains(self, t, x):
        return 0 <= x < self.target.size

    def restrict(self, f, x):
        return x


class TowerHomPresheaf(TowerPresheaf):
    """Level-aligned maps into a fixed tower ``M`` with a one-point base.

    ``X(T)`` consists of compatible families ``h_n : T_n -> M_n`` for
    ``n <= s``, where ``s`` is the smaller of ``M``'s depth and the level
    at which ``T`` stabilizes. A finite set therefore only sees ``M_0``, so
    the underlying set is a point while ``X(M)`` contains the identity.
    Restriction extends a family upward along the least-child section of
    ``M`` and reads it back along the threads of the source. Levels above
    the span are forgotten, so restricting through a tower whose span is
    below both ends can differ from restricting directly; such pairs are
    reported by :meth:`composition_exact`.
    """

    def __init__(self, model: Tower, label: str | None = None):
        if model.sizes[0] != 1:
            raise TowerMismatch("the model tower must have a one-point base level")
        self.model = model
        self.name = f"towerhom:{label or model.name or 'custom'}"
        m = model
        self._children = [
            [[c for c, p in enumerate(m.transitions[n]) if p == x] for x in range(m.sizes[n])]
            for n in range(m.depth)
        ]
        self._section = [[ch[0] for ch in level] for level in self._children]

    def span(self, t: Tower) -> int:
        return min(stabilization(t), self.model.depth)

    def cardinality(self, t):
        s = self.span(t)
        kids_t = [
            [[c for c, p in enumerate(t.transitions[n]) if p == x] for x in range(t.sizes[n])]
            for n in range(s)
        ]

        @lru_cache(maxsize=None)
        def count(n, x, m):
            if n == s:
                return 1
            total = 1
            for c in kids_t[n][x]:
                total *= sum(count(n + 1, c, mc) for mc in self._children[n][m])
            return total

        out = 1
        for x in range(t.sizes[0]):
            out *= count(0, x, 0)
        return out

    def _enumerate(self, t):
        s = self.span(t)

        def extend(prefix):
            n = len(prefix) - 1
            if n == s:
                yield tuple(prefix)
                return
            below = prefix[-1]
            options = [self._children[n][below[p]] for p in t.transitions[n]]
            for row in itertools.product(*options):
                yield from extend(prefix + [tuple(row)])

        yield from extend([(0,) * t.sizes[0]])

    def contains(self, t, x):
        s = self.span(t)
        if len(x) != s + 1 or any(len(x[n]) != t.sizes[n] for n in range(s + 1)):
            return False
        if any(v != 0 for v in x[0]):
            return False
        m = self.model
        for n in range(s):
            for c, p in enumerate(t.transitions[n]):
                if not 0 <= x[n + 1][c] < m.sizes[n + 1] or m.transitions[n][x[n + 1][c]] != x[n][p]:
                    return False
        return True

    def _thread_values(self, t: Tower, h, upto: int):
        """Per thread of ``t``, the extended values at model levels ``0..upto``."""
        s = len(h) - 1
        rows = []
        for n in range(upto + 1):
            if n <= s:
                rows.append(tuple(h[n][x] for x in t.project_table(n)))
            else:
                sec = self._section[n - 1]
                rows.append(tuple(sec[v] for v in rows[-1]))
        return rows

    def restrict(self, f, x):
        src = f.src
        s_new = self.span(src)
        vals = self._thread_values(f.dst, x, s_new)
        out = []
        for n in range(s_new + 1):
            table: list = [None] * src.sizes[n]
            proj = src.project_table(n)
            row = vals[n]
            for i, j in enumerate(f.thread_map):
                v = row[j]
                c = proj[i]
                if table[c] is None:
                    table[c] = v
                elif table[c] != v:
                    raise RestrictionUndefined(
                        f"{self.name}: threads through element {c} of level {n} disagree"
                    )
            out.append(tuple(table))
        return tuple(out)

    def composition_exact(self, f, g):
        return self.span(f.dst) >= min(self.span(f.src), self.span(g.dst))

    def identity_element(self, t: Tower):
        s = self.span(t)
        m = self.model
        if t.sizes[: s + 1] == m.sizes[: s + 1] and t.transitions[:s] == m.transitions[:s]:
            return tuple(tuple(range(t.sizes[n])) for n in range(s + 1))
        return None

    def distinguished(self, t):
        x = self.identity_element(t)
        return [] if x is None else [("identity tower map", x)]


# -- morphisms between built-ins ---------------------------------------------------


def target_map_morphism(X: LocConstPresheaf, Y: LocConstPresheaf, h: FinMap) -> PresheafMorphism:
    """``LocConst(-, h)`` for a map of targets."""
    if h.dom.size != X.target.size or h.cod.size != Y.target.size:
        raise ValueError("map does not match the targets")
    return PresheafMorphism(X, Y, lambda t, x: tuple(h.table[v] for v in x), name=f"post{h.table}")


def parse_presheaf(spec: str, depth: int, tower_resolver=None) -> TowerPresheaf:
    """Build a presheaf from ``locconst:k``, ``const:k`` or ``towerhom:<tower>``."""
    kind, _, arg = spec.partition(":")
    if kind == "locconst":
        return LocConstPresheaf(int(arg))
    if kind == "const":
        return ConstantPresheafNaive(int(arg))
    if kind == "towerhom":
        if tower_resolver is None:
            from ..tower import standard_towers

            tower_resolver = standard_towers
        return TowerHomPresheaf(tower_resolver(arg, depth), label=arg)
    raise ValueError(f"unknown presheaf spec {spec!r}")


def presheaf_corpus(depth: int = 3) -> list[TowerPresheaf]:
    from ..tower import cantor, eventually_constant, point

    return [
        LocConstPresheaf(1),
        LocConstPresheaf(2),
        LocConstPresheaf(3),
        TowerHomPresheaf(point(depth), label="point"),
        TowerHomPresheaf(cantor(depth), label="cantor"),
        TowerHomPresheaf(eventually_constant(2, depth), label="eventually_constant:2"),
    ]

