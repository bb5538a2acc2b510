"""Finite sets, maps between them, (co)products and the partition lattice.

Elements of a :class:`FinSet` of size ``n`` are the integers ``0..n-1``.
Partitions are stored in restricted-growth form, so equality and the
enumeration order are plain tuple comparisons.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import kernels
from .errors import BoundExceeded, GroundMismatch, NotComparable

DEFAULT_ENUMERATION_BOUND = 10


@dataclass(frozen=True)
class FinSet:
    size: int
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("size must be non-negative")
        if self.labels is not None:
            labels = tuple(self.labels)
            object.__setattr__(self, "labels", labels)
            if len(labels) != self.size or len(set(labels)) != self.size:
                raise ValueError("labels must be distinct and one per element")

    def __iter__(self):
        return iter(range(self.size))

    def __len__(self):
        return self.size

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def to_json(self) -> dict:
        out: dict = {"size": self.size}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, data) -> FinSet:
        if isinstance(data, int):
            return cls(data)
        return cls(int(data["size"]), data.get("labels"))


@dataclass(frozen=True)
class FinMap:
    dom: FinSet
    cod: FinSet
    table: tuple[int, ...]

    def __post_init__(self):
        table = tuple(int(x) for x in self.table)
        object.__setattr__(self, "table", table)
        if len(table) != self.dom.size:
            raise ValueError(f"table length {len(table)} != domain size {self.dom.size}")
        for x in table:
            if not 0 <= x < self.cod.size:
                raise ValueError(f"table entry {x} outside codomain of size {self.cod.size}")

    def __call__(self, x: int) -> int:
        return self.table[x]

    @classmethod
    def identity(cls, s: FinSet) -> FinMap:
        return cls(s, s, tuple(range(s.size)))

    def then(self, other: FinMap) -> FinMap:
        """Diagrammatic composite: first ``self``, then ``other``."""
        if self.cod.size != other.dom.size:
            raise ValueError("maps are not composable")
        return FinMap(self.dom, other.cod, tuple(other.table[x] for x in self.table))

    def __matmul__(self, other: FinMap) -> FinMap:
        # g @ f == g after f
        return other.then(self)

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def is_surjective(self) -> bool:
        return len(set(self.table)) == self.cod.size

    def is_bijective(self) -> bool:
        return self.dom.size == self.cod.size and self.is_injective()

    def image(self) -> frozenset[int]:
        return frozenset(self.table)


def all_maps(dom: FinSet, cod: FinSet) -> Iterable[FinMap]:
    for table in itertools.product(range(cod.size), repeat=dom.size):
        yield FinMap(dom, cod, table)


def product_with_projections(factors: Sequence[FinSet]) -> tuple[FinSet, list[FinMap]]:
    """Cartesian product; element ``k`` is the ``k``-th tuple in lexicographic order."""
    factors = list(factors)
    tuples = list(itertools.product(*(range(f.size) for f in factors)))
    prod = FinSet(len(tuples))
    projections = [
        FinMap(prod, f, tuple(t[i] for t in tuples)) for i, f in enumerate(factors)
    ]
    return prod, projections


def product_pairing(prod: FinSet, projections: Sequence[FinMap], legs: Sequence[FinMap]) -> FinMap:
    """The unique map into the product with the given components."""
    if len(legs) != len(projections):
        raise ValueError("one leg per factor required")
    if not legs:
        raise ValueError("pairing into the empty product needs a domain; use a constant map")
    dom = legs[0].dom
    index = {
        tuple(p.table[k] for p in projections): k for k in range(prod.size)
    }
    return FinMap(dom, prod, tuple(index[tuple(l.table[a] for l in legs)] for a in range(dom.size)))


def coproduct_with_inclusions(summands: Sequence[FinSet]) -> tuple[FinSet, list[FinMap]]:
    total = sum(s.size for s in summands)
    coprod = FinSet(total)
    inclusions = []
    offset = 0
    for s in summands:
        inclusions.append(FinMap(s, coprod, tuple(range(offset, offset + s.size))))
        offset += s.size
    return coprod, inclusions


def copairing(coprod: FinSet, inclusions: Sequence[FinMap], legs: Sequence[FinMap], cod: FinSet) -> FinMap:
    table = [0] * coprod.size
    for inc, leg in zip(inclusions, legs):
        for a in range(inc.dom.size):
            table[inc.table[a]] = leg.table[a]
    return FinMap(coprod, cod, tuple(table))


class Order(enum.Enum):
    LE = "le"
    GE = "ge"
    EQ = "eq"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True, order=True)
class Partition:
    """A set partition of ``0..n-1`` in restricted-growth form."""

    block_of: tuple[int, ...]

    def __post_init__(self):
        labels = tuple(int(x) for x in self.block_of)
        if kernels.rg_normalize(labels) != labels:
            raise ValueError(f"{labels} is not in restricted-growth form")
        object.__setattr__(self, "block_of", labels)

    @classmethod
    def from_labels(cls, labels: Iterable) -> Partition:
        return cls(kernels.rg_normalize(list(labels)))

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> Partition:
        labels: list = [None] * n
        for b, block in enumerate(blocks):
            for x in block:
                if labels[x] is not None:
                    raise ValueError(f"element {x} in two blocks")
                labels[x] = b
        if any(l is None for l in labels):
            raise ValueError("blocks do not cover the ground set")
        return cls.from_labels(labels)

    @classmethod
    def discrete(cls, n: int) -> Partition:
        return cls(tuple(range(n)))

    @classmethod
    def indiscrete(cls, n: int) -> Partition:
        return cls((0,) * n)

    @property
    def ground(self) -> FinSet:
        return FinSet(len(self.block_of))

    @property
    def num_blocks(self) -> int:
        return max(self.block_of) + 1 if self.block_of else 0

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for x, b in enumerate(self.block_of):
            out[b].append(x)
        return out

    def projection(self) -> FinMap:
        return FinMap(self.ground, FinSet(self.num_blocks), self.block_of)

    def pullback(self, f: FinMap) -> Partition:
        """Partition of ``f.dom`` whose blocks are preimages of blocks."""
        return Partition.from_labels(self.block_of[y] for y in f.table)

    def to_json(self) -> list[int]:
        return list(self.block_of)

    def __str__(self):
        return "{" + ", ".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks()) + "}"


def bell_number(n: int) -> int:
    # Bell triangle; independent of the enumeration kernel
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def enumerate_partitions(ground: FinSet | int, bound: int = DEFAULT_ENUMERATION_BOUND) -> list[Partition]:
    n = ground if isinstance(ground, int) else ground.size
    if n > bound:
        raise BoundExceeded("enumerate_partitions", n, bound)
    return [Partition(p) for p in kernels.rg_partitions(n)]


def _check_ground(p: Partition, q: Partition):
    if len(p.block_of) != len(q.block_of):
        raise GroundMismatch(f"ground sizes {len(p.block_of)} and {len(q.block_of)} differ")


def partition_meet(p: Partition, q: Partition) -> Partition:
    _check_ground(p, q)
    return Partition(kernels.meet(p.block_of, q.block_of))


def partition_le(p: Partition, q: Partition) -> bool:
    _check_ground(p, q)
    return kernels.refines(p.block_of, q.block_of)


def partition_compare(p: Partition, q: Partition) -> Order:
    _check_ground(p, q)
    if p == q:
        return Order.EQ
    if kernels.refines(p.block_of, q.block_of):
        return Order.LE
    if kernels.refines(q.block_of, p.block_of):
        return Order.GE
    return Order.INCOMPARABLE


def induced_quotient_map(p: Partition, q: Partition) -> FinMap:
    """The map from blocks of ``p`` to blocks of ``q`` when ``p`` refines ``q``."""
    if partition_compare(p, q) not in (Order.LE, Order.EQ):
        raise NotComparable(f"{p} does not refine {q}")
    table = [0] * p.num_blocks
    for x, b in enumerate(p.block_of):
        table[b] = q.block_of[x]
    return FinMap(FinSet(p.num_blocks), FinSet(q.num_blocks), tuple(table))
