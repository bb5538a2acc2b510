"""The two discreteness oracles.

Both produce a :class:`DiscretenessReport` with a verdict per truncation
depth. A pass is only ever relative to the enumerated fragment; a fail
always carries a witness.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

from .. import kernels
from ..errors import BoundExceeded
from ..finsetcat import FinSet
from ..locconst import all_locconst
from ..quotients import dq_enumerate, dq_induced_map, dq_le, level_quotients
from ..tower import Tower, finite_map_as_tower_map, finite_set_tower, level_map_to_finite
from .adjunction import counit_component
from .base import DEFAULT_BUDGET, TowerPresheaf, underlying

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
FULL_DQ_MAX = 4


def jsonable(x):
    if isinstance(x, (tuple, list)):
        return [jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    return x


@dataclass
class DiscretenessReport:
    oracle: str
    presheaf: str
    tower: str
    depth: int
    verdict: str
    witness: dict | None = None
    stats: list = field(default_factory=list)
    budget: int = DEFAULT_BUDGET

    def to_json(self) -> dict:
        out = {"oracle": self.oracle, "presheaf": self.presheaf, "tower": self.tower,
               "depth": self.depth, "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        out["stats"] = jsonable(self.stats)
        if self.verdict == INCONCLUSIVE:
            out["budget"] = self.budget
        return out


def aggregate(results: list[tuple[str, dict | None]]) -> tuple[str, dict | None]:
    """Any fail wins (deepest witness), then any inconclusive, else pass."""
    fails = [w for v, w in results if v == FAIL]
    if fails:
        return FAIL, fails[-1]
    if any(v == INCONCLUSIVE for v, _ in results):
        return INCONCLUSIVE, None
    return PASS, None


def _surjectivity(X: TowerPresheaf, t: Tower, image: set, budget: int, stats: dict):
    """Return ``(surjective or None, witness)``."""
    card = X.cardinality(t)
    stats["target_size"] = card
    for label, w in X.distinguished(t):
        if w not in image:
            return False, {"kind": "not_hit", "label": label, "element": w}
    if card is not None and len(image) == card:
        return True, None
    try:
        elements = X.elements(t, budget)
    except BoundExceeded:
        if card is not None:
            return False, {"kind": "not_hit", "label": None, "element": None, "missing": card - len(image)}
        return None, None
    stats["target_size"] = len(elements)
    for x in elements:
        if x not in image:
            return False, {"kind": "not_hit", "label": X.describe(t, x), "element": x}
    return True, None


def _quotients_for(t: Tower, full_dq_max: int):
    if t.top_size <= full_dq_max:
        return dq_enumerate(t), "full"
    return level_quotients(t), "level-chain"


@dataclass
class ColimitData:
    """Generators of the colimit, their classes and the cocone into ``X(t)``."""

    quotients: list
    values: list
    offsets: list
    labels: list
    count: int
    projections: list

    def generator(self, g: int) -> tuple[int, object]:
        k = bisect_right(self.offsets, g) - 1
        return k, self.values[k][g - self.offsets[k]]

    def representatives(self) -> list[int]:
        reps: list = [None] * self.count
        for g, c in enumerate(self.labels):
            if reps[c] is None:
                reps[c] = g
        return reps

    def class_of(self, k: int, x, index: list[dict]) -> int:
        return self.labels[self.offsets[k] + index[k][x]]


def colimit_data(X: TowerPresheaf, t: Tower, budget: int = DEFAULT_BUDGET,
                 full_dq_max: int = FULL_DQ_MAX) -> ColimitData:
    """Raises BoundExceeded when some finite value set is over budget."""
    qs, _ = _quotients_for(t, full_dq_max)
    values = [X.elements(finite_set_tower(q.size), budget) for q in qs]
    offsets, total, index = [], 0, []
    for vals in values:
        offsets.append(total)
        index.append({x: i for i, x in enumerate(vals)})
        total += len(vals)
    us, vs = [], []
    for a in range(len(qs)):
        for b in range(len(qs)):
            if a == b or not dq_le(qs[a], qs[b]):
                continue
            h = finite_map_as_tower_map(dq_induced_map(qs[a], qs[b]))
            for i, y in enumerate(values[b]):
                us.append(offsets[b] + i)
                vs.append(offsets[a] + index[a][X.restrict(h, y)])
    labels, count = kernels.uf_labels(total, us, vs)
    projections = [level_map_to_finite(t, q.level, q.partition.block_of, q.size) for q in qs]
    return ColimitData(qs, values, offsets, list(labels), count, projections)


def colimit_at(X: TowerPresheaf, t: Tower, budget: int = DEFAULT_BUDGET, full_dq_max: int = FULL_DQ_MAX):
    """Colimit of ``X`` over the quotients of ``t`` and the cocone map into ``X(t)``.

    Returns ``(verdict, witness, stats)``.
    """
    qs, kind = _quotients_for(t, full_dq_max)
    stats: dict = {"depth": t.depth, "index": kind, "objects": len(qs)}
    try:
        data = colimit_data(X, t, budget, full_dq_max)
    except BoundExceeded as exc:
        stats["exhausted"] = exc.what
        return INCONCLUSIVE, None, stats
    stats["generators"] = data.offsets[-1] + len(data.values[-1])
    stats["colimit_size"] = data.count
    image: dict = {}
    for g in data.representatives():
        k, x = data.generator(g)
        y = X.restrict(data.projections[k], x)
        if y in image:
            stats["injective"] = False
            return FAIL, {"kind": "collapsed", "generators": [list(image[y]), [k, x]], "image": y}, stats
        image[y] = (k, x)
    stats["injective"] = True
    stats["image_size"] = len(image)
    surjective, witness = _surjectivity(X, t, set(image), budget, stats)
    stats["surjective"] = surjective
    if surjective is None:
        return INCONCLUSIVE, None, stats
    if not surjective:
        return FAIL, witness, stats
    return PASS, None, stats


def colimit_condition_report(X: TowerPresheaf, t: Tower, depth: int | None = None,
                             budget: int = DEFAULT_BUDGET, full_dq_max: int = FULL_DQ_MAX) -> DiscretenessReport:
    depth = t.depth if depth is None else depth
    results, stats = [], []
    for d in range(depth + 1):
        verdict, witness, st = colimit_at(X, t.truncate(d), budget, full_dq_max)
        st["verdict"] = verdict
        if witness is not None:
            witness = dict(witness, depth=d)
        results.append((verdict, witness))
        stats.append(st)
    verdict, witness = aggregate(results)
    return DiscretenessReport("colimit", X.spec(), t.name, depth, verdict, witness, stats, budget)


def counit_at(X: TowerPresheaf, t: Tower, budget: int = DEFAULT_BUDGET):
    """Bijectivity of the counit ``LocConst(t, U(X)) -> X(t)``."""
    stats: dict = {"depth": t.depth}
    try:
        u = underlying(X, budget)
        maps = all_locconst(t, FinSet(len(u)), budget)
    except BoundExceeded as exc:
        stats["exhausted"] = exc.what
        return INCONCLUSIVE, None, stats
    stats["source_size"] = len(maps)
    image: dict = {}
    for f in maps:
        y = counit_component(X, t, f, budget, check_products=False, u=u)
        if y in image:
            stats["injective"] = False
            return FAIL, {"kind": "collapsed", "maps": [image[y], f.thread_values()], "image": y}, stats
        image[y] = f.thread_values()
    stats["injective"] = True
    stats["image_size"] = len(image)
    surjective, witness = _surjectivity(X, t, set(image), budget, stats)
    stats["surjective"] = surjective
    if surjective is None:
        return INCONCLUSIVE, None, stats
    if not surjective:
        return FAIL, witness, stats
    return PASS, None, stats


def counit_iso_report(X: TowerPresheaf, t: Tower, depth: int | None = None,
                      budget: int = DEFAULT_BUDGET) -> DiscretenessReport:
    """Raises ProductPreservationFailed when gluing is impossible."""
    depth = t.depth if depth is None else depth
    results, stats = [], []
    for d in range(depth + 1):
        verdict, witness, st = counit_at(X, t.truncate(d), budget)
        st["verdict"] = verdict
        if witness is not None:
            witness = dict(witness, depth=d)
        results.append((verdict, witness))
        stats.append(st)
    verdict, witness = aggregate(results)
    return DiscretenessReport("counit", X.spec(), t.name, depth, verdict, witness, stats, budget)


def verdicts_agree(a: DiscretenessReport, b: DiscretenessReport) -> bool | None:
    """``None`` when either side is inconclusive."""
    if INCONCLUSIVE in (a.verdict, b.verdict):
        return None
    return a.verdict == b.verdict
