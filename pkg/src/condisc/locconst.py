"""Locally constant maps out of towers.

A map is stored as a table on one level, pushed down to the lowest level
it factors through at construction time, so two maps are equal exactly
when their stored data is equal.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Sequence

from .errors import BoundExceeded, ProductPreservationFailed
from .finsetcat import FinMap, FinSet
from .quotients import DiscreteQuotient, descend_labels, make_quotient
from .tower import SubTower, Tower, TowerMap, clopen_subtower


@dataclass(frozen=True)
class LocConstMap:
    src: Tower
    target: FinSet
    level: int
    table: tuple[int, ...]

    def __post_init__(self):
        table = tuple(map(int, self.table))
        if len(table) != self.src.sizes[self.level]:
            raise ValueError("table length differs from the level size")
        if table and (min(table) < 0 or max(table) >= self.target.size):
            raise ValueError("table value outside the target")
        level, table = descend_labels(self.src, self.level, table)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "table", table)

    def __call__(self, j: int) -> int:
        return lc_eval(self, j)

    def thread_values(self) -> tuple[int, ...]:
        return tuple(self.table[x] for x in self.src.project_table(self.level))

    def to_json(self) -> dict:
        return {"level": self.level, "table": list(self.table), "target": self.target.to_json()}

    @classmethod
    def from_json(cls, src: Tower, data) -> LocConstMap:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(src, FinSet.from_json(data["target"]), int(data["level"]), tuple(data["table"]))


def lc_eval(f: LocConstMap, j) -> int:
    """Value at a thread, given by index or by a Thread."""
    coords = getattr(j, "coords", None)
    if coords is not None:
        return f.table[coords[f.level]]
    return f.table[f.src.project_table(f.level)[j]]


def from_thread_values(src: Tower, target: FinSet, values: Sequence[int]) -> LocConstMap:
    return LocConstMap(src, target, src.depth, tuple(values))


def constant_map(src: Tower, target: FinSet, value: int) -> LocConstMap:
    return LocConstMap(src, target, 0, (value,) * src.sizes[0])


def lc_fibres(f: LocConstMap) -> list[tuple[int, SubTower]]:
    """Nonempty fibres in increasing order of value."""
    out = []
    for v in sorted(set(f.table)):
        out.append((v, clopen_subtower(f.src, f.level, {x for x, w in enumerate(f.table) if w == v})))
    return out


def lc_factor_minimal(f: LocConstMap) -> tuple[DiscreteQuotient, FinMap]:
    """The coarsest quotient ``q`` and injective ``g`` with ``f = g . proj_q``."""
    q = make_quotient(f.src, f.level, f.table)
    g = [0] * q.size
    for x, b in enumerate(q.partition.block_of):
        g[b] = f.table[x]
    return q, FinMap(q.blocks, f.target, tuple(g))


def lc_restrict(f: LocConstMap, sub: SubTower) -> LocConstMap:
    if sub.parent != f.src:
        raise ValueError("subtower is not a piece of the map's source")
    return lc_pullback(f, sub.inclusion)


def lc_pullback(f: LocConstMap, g: TowerMap) -> LocConstMap:
    """``f . g`` for a tower map ``g`` into ``f.src``."""
    if g.dst != f.src:
        raise ValueError("tower map does not land in the map's source")
    m = g.level_maps[f.level]
    return LocConstMap(g.src, f.target, g.src_level(f.level), tuple(f.table[y] for y in m))


def lc_postcompose(f: LocConstMap, h: FinMap) -> LocConstMap:
    if h.dom.size != f.target.size:
        raise ValueError("map does not start at the target")
    return LocConstMap(f.src, h.cod, f.level, tuple(h.table[v] for v in f.table))


def all_locconst(src: Tower, target: FinSet, bound: int = 10_000) -> list[LocConstMap]:
    """Every locally constant map, ordered by thread values."""
    count = target.size ** src.top_size
    if count > bound:
        raise BoundExceeded("all_locconst", count, bound)
    return [from_thread_values(src, target, v) for v in itertools.product(range(target.size), repeat=src.top_size)]


# -- extensionality -------------------------------------------------------------


def decomposition_map(X, f: LocConstMap, budget: int = 10_000):
    """Restriction of ``X(src)`` to the product over the fibres of ``f``.

    Raises ProductPreservationFailed when the map is not a bijection.
    """
    fibres = lc_fibres(f)
    whole = X.elements(f.src, budget)
    pieces = [X.elements(sub.tower, budget) for _, sub in fibres]
    expected = 1
    for p in pieces:
        expected *= len(p)
    images = {}
    for x in whole:
        key = tuple(X.restrict(sub.inclusion, x) for _, sub in fibres)
        if key in images:
            raise ProductPreservationFailed("restriction to the fibres is not injective", witness=(images[key], x))
        images[key] = x
    if len(images) != expected:
        raise ProductPreservationFailed(
            f"restriction to the fibres hits {len(images)} of {expected} families", witness=len(images)
        )
    return fibres, images


def presheaf_ext_check(X, f: LocConstMap, x, y, budget: int = 10_000) -> bool:
    """Whether ``x`` and ``y`` restrict identically to every fibre of ``f``.

    When they do, they must be equal; a violation raises AssertionError.
    """
    fibres, _ = decomposition_map(X, f, budget)
    agree = all(X.restrict(sub.inclusion, x) == X.restrict(sub.inclusion, y) for _, sub in fibres)
    if agree and x != y:
        raise AssertionError("distinct elements agree on every fibre")
    return agree

