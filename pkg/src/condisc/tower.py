"""Truncated sequential towers of finite sets with surjective transitions.

A tower of depth ``D`` has levels ``S_0 .. S_D`` and transitions
``t_n : S_{n+1} -> S_n``. Because transitions are surjective, a thread
(a compatible choice of one element per level) is determined by its top
coordinate, so threads are indexed by ``range(|S_D|)``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import IncompatibleCone, InvalidTower, TowerMismatch
from .finsetcat import FinMap, FinSet, Partition, partition_le


class TowerViolation(NamedTuple):
    level: int
    element: int | None
    message: str


@dataclass(frozen=True)
class Tower:
    sizes: tuple[int, ...]
    transitions: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        object.__setattr__(self, "transitions", tuple(tuple(int(x) for x in t) for t in self.transitions))

    @property
    def depth(self) -> int:
        return len(self.sizes) - 1

    @property
    def levels(self) -> tuple[FinSet, ...]:
        return tuple(FinSet(s) for s in self.sizes)

    @property
    def top_size(self) -> int:
        return self.sizes[-1]

    @property
    def is_empty(self) -> bool:
        return self.sizes[-1] == 0

    def transition(self, n: int) -> FinMap:
        return FinMap(FinSet(self.sizes[n + 1]), FinSet(self.sizes[n]), self.transitions[n])

    @cached_property
    def _down(self) -> tuple[tuple[int, ...], ...]:
        # _down[n][j]: image of top element j at level n
        cur = tuple(range(self.top_size))
        rows = [cur]
        for n in range(self.depth - 1, -1, -1):
            t = self.transitions[n]
            cur = tuple(t[x] for x in cur)
            rows.append(cur)
        return tuple(reversed(rows))

    def project_table(self, n: int, m: int | None = None) -> tuple[int, ...]:
        """Table of the composite transition ``S_m -> S_n`` (``m`` defaults to the top)."""
        if m is None:
            return self._down[n]
        if not 0 <= n <= m <= self.depth:
            raise ValueError(f"cannot project from level {m} to level {n}")
        cur = tuple(range(self.sizes[m]))
        for k in range(m - 1, n - 1, -1):
            t = self.transitions[k]
            cur = tuple(t[x] for x in cur)
        return cur

    def project(self, n: int, m: int | None = None) -> FinMap:
        m = self.depth if m is None else m
        return FinMap(FinSet(self.sizes[m]), FinSet(self.sizes[n]), self.project_table(n, m))

    def truncate(self, d: int) -> Tower:
        if not 0 <= d <= self.depth:
            raise ValueError(f"truncation depth {d} outside 0..{self.depth}")
        return Tower(self.sizes[: d + 1], self.transitions[:d], name=self.name)

    def to_json(self) -> dict:
        return {"name": self.name, "levels": list(self.sizes), "transitions": [list(t) for t in self.transitions]}

    @classmethod
    def from_json(cls, data) -> Tower:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            t = cls(tuple(data["levels"]), tuple(tuple(x) for x in data["transitions"]), name=data.get("name", ""))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidTower(f"malformed tower JSON: {exc}") from exc
        problems = validate_tower(t)
        if problems:
            raise InvalidTower("; ".join(f"level {p.level}, element {p.element}: {p.message}" for p in problems))
        return t

    def __repr__(self):
        label = f"{self.name}:" if self.name else ""
        return f"Tower({label}{list(self.sizes)})"


def validate_tower(t: Tower) -> list[TowerViolation]:
    out = []
    if not t.sizes:
        return [TowerViolation(0, None, "a tower needs at least one level")]
    if len(t.transitions) != t.depth:
        return [TowerViolation(t.depth, None, f"expected {t.depth} transitions, got {len(t.transitions)}")]
    for n, s in enumerate(t.sizes):
        if s < 0:
            out.append(TowerViolation(n, None, "negative size"))
    if out:
        return out
    for k, table in enumerate(t.transitions):
        if len(table) != t.sizes[k + 1]:
            out.append(TowerViolation(k + 1, None, f"transition has {len(table)} entries for {t.sizes[k + 1]} elements"))
            continue
        for j, x in enumerate(table):
            if not 0 <= x < t.sizes[k]:
                out.append(TowerViolation(k + 1, j, f"image {x} outside level {k} of size {t.sizes[k]}"))
        missed = sorted(set(range(t.sizes[k])) - set(table))
        for x in missed:
            out.append(TowerViolation(k, x, "not hit by the transition from above"))
    return out


def require_valid(t: Tower) -> Tower:
    problems = validate_tower(t)
    if problems:
        p = problems[0]
        raise InvalidTower(f"level {p.level}, element {p.element}: {p.message}")
    return t


# -- threads ------------------------------------------------------------------


@dataclass(frozen=True)
class Thread:
    coords: tuple[int, ...]

    @property
    def top(self) -> int:
        return self.coords[-1]


class ThreadSet:
    """Threads of a tower, indexed by their top coordinate."""

    def __init__(self, tower: Tower):
        self.tower = tower
        self.finset = FinSet(tower.top_size)

    def __len__(self):
        return self.finset.size

    def __iter__(self):
        return iter(range(self.finset.size))

    def coords(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.tower._down)

    def coord(self, j: int, n: int) -> int:
        return self.tower._down[n][j]

    def thread(self, j: int) -> Thread:
        return Thread(self.coords(j))

    def index_of(self, coords: Sequence[int]) -> int:
        """Top-coordinate index of a thread given all its coordinates."""
        t = self.tower
        if len(coords) != t.depth + 1:
            raise ValueError("wrong number of coordinates")
        for n in range(t.depth):
            if t.transitions[n][coords[n + 1]] != coords[n]:
                raise ValueError(f"coordinates incompatible at level {n}")
        return coords[-1]


def thread_set(t: Tower) -> ThreadSet:
    return ThreadSet(t)


# -- maps between towers ------------------------------------------------------


@dataclass(frozen=True)
class TowerMap:
    """A level-aligned map of towers.

    ``level_maps[n]`` goes from source level ``min(n + offset, src.depth)``
    to target level ``n`` for every target level.
    """

    src: Tower
    dst: Tower
    offset: int
    level_maps: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "level_maps", tuple(tuple(int(x) for x in m) for m in self.level_maps))

    def src_level(self, n: int) -> int:
        return min(n + self.offset, self.src.depth)

    @cached_property
    def thread_map(self) -> tuple[int, ...]:
        d = self.dst.depth
        down = self.src.project_table(self.src_level(d))
        top = self.level_maps[d]
        return tuple(top[x] for x in down)

    @classmethod
    def identity(cls, t: Tower) -> TowerMap:
        return cls(t, t, 0, tuple(tuple(range(s)) for s in t.sizes))

    def then(self, other: TowerMap) -> TowerMap:
        """Diagrammatic composite: ``self`` first, then ``other``."""
        if other.src != self.dst:
            raise TowerMismatch("tower maps are not composable")
        offset = self.offset + other.offset
        maps = []
        for n in range(other.dst.depth + 1):
            b = other.src_level(n)
            a = self.src_level(b)
            a_full = min(n + offset, self.src.depth)
            down = self.src.project_table(a, a_full)
            f, g = self.level_maps[b], other.level_maps[n]
            maps.append(tuple(g[f[x]] for x in down))
        return TowerMap(self.src, other.dst, offset, tuple(maps))

    def same_threads(self, other: TowerMap) -> bool:
        return self.src == other.src and self.dst == other.dst and self.thread_map == other.thread_map

    def to_json(self) -> dict:
        return {"offset": self.offset, "level_maps": [list(m) for m in self.level_maps]}


def tower_map_violations(f: TowerMap) -> list[str]:
    out = []
    if len(f.level_maps) != f.dst.depth + 1:
        return [f"expected {f.dst.depth + 1} level maps, got {len(f.level_maps)}"]
    if f.offset < 0:
        return ["negative offset"]
    for n, m in enumerate(f.level_maps):
        s = f.src_level(n)
        if len(m) != f.src.sizes[s] or any(not 0 <= y < f.dst.sizes[n] for y in m):
            out.append(f"level map {n} is not a map S_{s} -> T_{n}")
    if out:
        return out
    for n in range(f.dst.depth):
        lo, hi = f.src_level(n), f.src_level(n + 1)
        down = f.src.project_table(lo, hi)
        t = f.dst.transitions[n]
        upper, lower = f.level_maps[n + 1], f.level_maps[n]
        for x in range(f.src.sizes[hi]):
            if t[upper[x]] != lower[down[x]]:
                out.append(f"square at target level {n} fails at source element {x}")
                break
    return out


def finite_set_tower(size: int, name: str = "") -> Tower:
    return Tower((size,), (), name=name or f"finite:{size}")


def finite_map_as_tower_map(f: FinMap) -> TowerMap:
    return TowerMap(finite_set_tower(f.dom.size), finite_set_tower(f.cod.size), 0, (f.table,))


def level_map_to_finite(t: Tower, level: int, table: Sequence[int], size: int) -> TowerMap:
    """The tower map ``t -> finite set`` factoring through level ``level``."""
    return TowerMap(t, finite_set_tower(size), level, (tuple(table),))


def point_map(t: Tower, j: int) -> TowerMap:
    """The map from the one-point tower picking thread ``j``."""
    coords = thread_set(t).coords(j)
    return TowerMap(finite_set_tower(1), t, 0, tuple((c,) for c in coords))


# -- clopen subtowers -----------------------------------------------------------


@dataclass(frozen=True)
class SubTower:
    tower: Tower
    inclusion: TowerMap
    elements: tuple[tuple[int, ...], ...]
    empty: bool

    @property
    def parent(self) -> Tower:
        return self.inclusion.dst

    @property
    def thread_inclusion(self) -> tuple[int, ...]:
        return self.inclusion.thread_map


def clopen_subtower(t: Tower, level: int, subset: Iterable[int]) -> SubTower:
    """The subtower of threads whose level-``level`` coordinate lies in ``subset``."""
    subset = frozenset(subset)
    if not 0 <= level <= t.depth:
        raise ValueError(f"level {level} outside 0..{t.depth}")
    if any(not 0 <= x < t.sizes[level] for x in subset):
        raise ValueError("subset element outside the level")
    down = t.project_table(level)
    tops = [j for j in range(t.top_size) if down[j] in subset]
    # a level's elements are the images of the surviving threads
    elements = []
    for n in range(t.depth + 1):
        row = t._down[n]
        elements.append(tuple(sorted({row[j] for j in tops})))
    index = [{x: i for i, x in enumerate(e)} for e in elements]
    transitions = tuple(
        tuple(index[k][t.transitions[k][x]] for x in elements[k + 1]) for k in range(t.depth)
    )
    sub = Tower(tuple(len(e) for e in elements), transitions, name=f"{t.name}|{level}")
    inc = TowerMap(sub, t, 0, tuple(elements))
    return SubTower(sub, inc, tuple(elements), empty=not tops)


def decompose(t: Tower, level: int, labels: Sequence[int] | Partition) -> list[SubTower]:
    """Clopen pieces of ``t`` along a partition of level ``level``, one per block."""
    if isinstance(labels, Partition):
        p = labels
    else:
        p = Partition.from_labels(labels)
    if len(p.block_of) != t.sizes[level]:
        raise ValueError("partition ground differs from the level")
    return [clopen_subtower(t, level, block) for block in p.blocks()]


def stabilization(t: Tower) -> int:
    """Least level from which every transition upward is a bijection."""
    s = t.depth
    while s > 0 and t.sizes[s - 1] == t.sizes[s]:
        s -= 1
    return s


# -- standard towers ------------------------------------------------------------


def cantor(depth: int) -> Tower:
    return Tower(
        tuple(2**n for n in range(depth + 1)),
        tuple(tuple(j // 2 for j in range(2 ** (n + 1))) for n in range(depth)),
        name="cantor",
    )


def point(depth: int = 0) -> Tower:
    return Tower((1,) * (depth + 1), ((0,),) * depth, name="point")


def eventually_constant(k: int, depth: int) -> Tower:
    """Levels grow by one element until size ``k``, then stay constant."""
    if k < 1:
        raise ValueError("k must be positive")
    sizes = tuple(min(n + 1, k) for n in range(depth + 1))
    trans = tuple(tuple(min(j, sizes[n] - 1) for j in range(sizes[n + 1])) for n in range(depth))
    return Tower(sizes, trans, name=f"eventually_constant:{k}")


def random_tower(rng: random.Random, sizes: Sequence[int], name: str = "random") -> Tower:
    """A random tower with the given (non-decreasing, positive) level sizes."""
    trans = []
    for n in range(len(sizes) - 1):
        lo, hi = sizes[n], sizes[n + 1]
        if hi < lo or lo < 1:
            raise ValueError("sizes must be positive and non-decreasing")
        table = list(range(lo)) + [rng.randrange(lo) for _ in range(hi - lo)]
        rng.shuffle(table)
        trans.append(tuple(table))
    return Tower(tuple(sizes), tuple(trans), name=name)


def standard_towers(name: str, depth: int) -> Tower:
    """Resolve ``cantor``, ``point`` or ``eventually_constant:k``."""
    if name == "cantor":
        return cantor(depth)
    if name == "point":
        return point(depth)
    if name.startswith("eventually_constant"):
        _, _, k = name.partition(":")
        if not k:
            k = name[name.find("(") + 1 : name.rfind(")")] if "(" in name else ""
        return eventually_constant(int(k), depth)
    raise ValueError(f"unknown tower name {name!r}")


def tower_corpus(max_depth: int = 3, seed: int = 0) -> list[Tower]:
    rng = random.Random(seed)
    out = [point(0), point(2), cantor(1), cantor(2), eventually_constant(3, 2), finite_set_tower(2)]
    if max_depth >= 3:
        out.append(cantor(3))
    out.append(random_tower(rng, (1, 2, 3, 5)))
    out.append(random_tower(rng, (2, 3, 3, 6)))
    return out


# -- limit cones ----------------------------------------------------------------


@dataclass(frozen=True)
class Cone:
    """A family of maps from ``apex`` into the block sets of some quotients.

    ``quotients`` holds ``(level, Partition)`` pairs; ``legs[i]`` maps the
    apex to the blocks of ``quotients[i]``.
    """

    apex: FinSet
    quotients: tuple[tuple[int, Partition], ...]
    legs: tuple[FinMap, ...]


@dataclass(frozen=True)
class ConeCheck:
    ok: bool
    factorization: FinMap | None = None
    witness: object = None

    def __bool__(self):
        return self.ok


def _top_labels(t: Tower, level: int, p: Partition) -> tuple[int, ...]:
    # keeps the block numbering of p, unlike Partition.pullback
    return tuple(p.block_of[x] for x in t.project_table(level))


def verify_limit_cone(t: Tower, test_cones: Iterable[Cone]) -> ConeCheck:
    """Check that every cone factors uniquely through the threads of ``t``.

    Raises IncompatibleCone if a family fails to commute with the induced
    maps between comparable quotients.
    """
    threads = range(t.top_size)
    factorizations = []
    for c_idx, cone in enumerate(test_cones):
        labels = [_top_labels(t, lvl, p) for lvl, p in cone.quotients]
        tops = [Partition.from_labels(l) for l in labels]
        for i, li in enumerate(labels):
            if cone.legs[i].cod.size != cone.quotients[i][1].num_blocks:
                raise IncompatibleCone(f"cone {c_idx}: leg {i} has the wrong codomain")
            for k, lk in enumerate(labels):
                if i == k or not partition_le(tops[i], tops[k]):
                    continue
                induced = dict(zip(li, lk))
                for a in range(cone.apex.size):
                    if induced[cone.legs[i].table[a]] != cone.legs[k].table[a]:
                        raise IncompatibleCone(f"cone {c_idx}: legs {i} and {k} disagree at {a}")
        table = []
        for a in range(cone.apex.size):
            hits = [j for j in threads if all(l[j] == leg.table[a] for l, leg in zip(labels, cone.legs))]
            if len(hits) != 1:
                return ConeCheck(False, witness={"cone": c_idx, "apex_element": a, "threads": hits})
            table.append(hits[0])
        factorizations.append(FinMap(cone.apex, FinSet(t.top_size), tuple(table)))
    return ConeCheck(True, factorization=factorizations[-1] if factorizations else None)


def random_compatible_cone(t: Tower, rng: random.Random, quotients, apex_size: int = 3) -> Cone:
    """Compose a random map into the top level with the quotient projections."""
    u = [rng.randrange(t.top_size) for _ in range(apex_size)]
    apex = FinSet(apex_size)
    legs = []
    for lvl, p in quotients:
        top = _top_labels(t, lvl, p)
        legs.append(FinMap(apex, FinSet(p.num_blocks), tuple(top[j] for j in u)))
    return Cone(apex, tuple(quotients), tuple(legs))
