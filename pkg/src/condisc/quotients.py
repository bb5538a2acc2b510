"""Discrete quotients of a tower.

At truncation depth ``D`` every discrete quotient is a partition of some
level, and the canonical representative lives at the lowest level it can
be pushed down to. Comparison lifts both sides to a common level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import BoundExceeded, TowerMismatch
from .finsetcat import (
    DEFAULT_ENUMERATION_BOUND,
    FinMap,
    FinSet,
    Order,
    Partition,
    enumerate_partitions,
    partition_compare,
    partition_meet,
)
from .smallcat import SetDiagram, poset_category
from .tower import Tower


@dataclass(frozen=True)
class DiscreteQuotient:
    tower: Tower
    level: int
    partition: Partition

    def __post_init__(self):
        if not 0 <= self.level <= self.tower.depth:
            raise ValueError(f"level {self.level} outside 0..{self.tower.depth}")
        if len(self.partition.block_of) != self.tower.sizes[self.level]:
            raise ValueError("partition ground differs from the level")

    @property
    def size(self) -> int:
        return self.partition.num_blocks

    @property
    def blocks(self) -> FinSet:
        return FinSet(self.partition.num_blocks)

    def thread_labels(self) -> tuple[int, ...]:
        """Block of each thread."""
        p = self.partition.block_of
        return tuple(p[x] for x in self.tower.project_table(self.level))

    def lifted(self, m: int) -> Partition:
        """The same quotient written as a partition of level ``m``."""
        return self.partition.pullback(self.tower.project(self.level, m))

    def to_json(self) -> dict:
        return {"level": self.level, "partition": self.partition.to_json()}

    @classmethod
    def from_json(cls, tower: Tower, data) -> DiscreteQuotient:
        return cls(tower, int(data["level"]), Partition(tuple(data["partition"])))

    def __lt__(self, other):
        return (self.level, self.partition) < (other.level, other.partition)


def descend_labels(t: Tower, level: int, labels: Sequence) -> tuple[int, tuple]:
    """Push a labelling of level ``level`` down as far as it goes.

    A labelling descends past ``t_{n-1}`` when every fibre of that
    transition is labelled constantly. Returns the final level and labels.
    """
    labels = tuple(labels)
    n = level
    while n > 0:
        trans = t.transitions[n - 1]
        below: list = [None] * t.sizes[n - 1]
        ok = True
        for x, y in enumerate(trans):
            if below[y] is None:
                below[y] = (labels[x],)
            elif below[y][0] != labels[x]:
                ok = False
                break
        if not ok:
            break
        labels = tuple(b[0] for b in below)
        n -= 1
    return n, labels


def dq_canonicalize(q: DiscreteQuotient) -> DiscreteQuotient:
    n, labels = descend_labels(q.tower, q.level, q.partition.block_of)
    if n == q.level:
        return q
    return DiscreteQuotient(q.tower, n, Partition.from_labels(labels))


def make_quotient(t: Tower, level: int, labels: Sequence) -> DiscreteQuotient:
    return dq_canonicalize(DiscreteQuotient(t, level, Partition.from_labels(labels)))


def is_canonical(q: DiscreteQuotient) -> bool:
    return dq_canonicalize(q) == q


def _lift_pair(a: DiscreteQuotient, b: DiscreteQuotient):
    if a.tower != b.tower:
        raise TowerMismatch("quotients of different towers")
    m = max(a.level, b.level)
    return m, a.lifted(m), b.lifted(m)


def dq_compare(a: DiscreteQuotient, b: DiscreteQuotient) -> Order:
    """``LE`` means ``a`` is finer than ``b``."""
    _, pa, pb = _lift_pair(a, b)
    return partition_compare(pa, pb)


def dq_le(a: DiscreteQuotient, b: DiscreteQuotient) -> bool:
    return dq_compare(a, b) in (Order.LE, Order.EQ)


def dq_inf(a: DiscreteQuotient, b: DiscreteQuotient) -> DiscreteQuotient:
    m, pa, pb = _lift_pair(a, b)
    return dq_canonicalize(DiscreteQuotient(a.tower, m, partition_meet(pa, pb)))


def trivial_quotient(t: Tower) -> DiscreteQuotient:
    return DiscreteQuotient(t, 0, Partition.indiscrete(t.sizes[0]))


def finest_quotient(t: Tower) -> DiscreteQuotient:
    return make_quotient(t, t.depth, range(t.top_size))


def dq_induced_map(a: DiscreteQuotient, b: DiscreteQuotient) -> FinMap:
    """Blocks of ``a`` to blocks of ``b`` when ``a`` refines ``b``."""
    if not dq_le(a, b):
        raise ValueError("first quotient does not refine the second")
    table = [0] * a.size
    for x, y in zip(a.thread_labels(), b.thread_labels()):
        table[x] = y
    return FinMap(a.blocks, b.blocks, tuple(table))


def dq_projection(q: DiscreteQuotient):
    """The locally constant map from the tower onto the blocks of ``q``."""
    from .locconst import LocConstMap

    return LocConstMap(q.tower, q.blocks, q.level, q.partition.block_of)


def dq_enumerate(t: Tower, bound: int = DEFAULT_ENUMERATION_BOUND) -> list[DiscreteQuotient]:
    if t.top_size > bound:
        raise BoundExceeded("dq_enumerate", t.top_size, bound)
    out = {dq_canonicalize(DiscreteQuotient(t, t.depth, p)) for p in enumerate_partitions(t.top_size, bound)}
    return sorted(out)


def level_quotients(t: Tower) -> list[DiscreteQuotient]:
    """The discrete partition of each level, canonicalized and deduplicated.

    These form a chain that is initial in the full quotient poset.
    """
    seen = []
    for n in range(t.depth + 1):
        q = make_quotient(t, n, range(t.sizes[n]))
        if q not in seen:
            seen.append(q)
    return seen


@dataclass(frozen=True)
class QuotientDiagram:
    quotients: tuple[DiscreteQuotient, ...]
    diagram: SetDiagram
    threads: FinSet
    legs: tuple[FinMap, ...]

    def cone_commutes(self) -> bool:
        dg = self.diagram
        return all(
            self.legs[a].then(dg.value_maps[u]) == self.legs[b]
            for u, (a, b) in enumerate(dg.index.arrows)
        )


def dq_diagram(t: Tower, quotients: Sequence[DiscreteQuotient] | None = None,
               bound: int = DEFAULT_ENUMERATION_BOUND) -> QuotientDiagram:
    """The quotient poset as a diagram of block sets, with its thread cone.

    There is an arrow ``a -> b`` when ``a`` refines ``b``.
    """
    qs = tuple(dq_enumerate(t, bound) if quotients is None else quotients)
    labels = [q.thread_labels() for q in qs]
    tops = [Partition.from_labels(l) for l in labels]
    n = len(qs)
    index = poset_category(n, lambda a, b: partition_compare(tops[a], tops[b]) in (Order.LE, Order.EQ))
    maps = []
    for a, b in index.arrows:
        table = [0] * qs[a].size
        for x, y in zip(labels[a], labels[b]):
            table[x] = y
        maps.append(FinMap(qs[a].blocks, qs[b].blocks, tuple(table)))
    threads = FinSet(t.top_size)
    legs = tuple(FinMap(threads, q.blocks, l) for q, l in zip(qs, labels))
    dg = SetDiagram(index, tuple(q.blocks for q in qs), tuple(maps))
    return QuotientDiagram(qs, dg, threads, legs)


def hasse_edges(qs: Sequence[DiscreteQuotient]) -> list[tuple[int, int]]:
    """Covering pairs ``(a, b)``: ``a`` strictly finer than ``b`` with nothing between."""
    n = len(qs)
    lt = [[dq_compare(qs[a], qs[b]) is Order.LE for b in range(n)] for a in range(n)]
    return [
        (a, b)
        for a in range(n)
        for b in range(n)
        if lt[a][b] and not any(lt[a][c] and lt[c][b] for c in range(n))
    ]
