"""The invariant suite behind ``condisc verify``.

Each check returns ``(checked, failures)``. Randomness comes only from the
seed, and results carry no timings, so equal seeds give equal output.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from . import corpus
from . import smallcat as sc
from .errors import ProductPreservationFailed
from .finsetcat import FinMap, FinSet, all_maps, bell_number, enumerate_partitions, partition_le, partition_meet
from .locconst import all_locconst, lc_factor_minimal, presheaf_ext_check
from .modules import check_counit_linearity, module_corpus, module_presheaf_corpus, theorem_c_report
from .presheaf import (
    LocConstPresheaf,
    TowerHomPresheaf,
    check_counit_natural_in_S,
    check_counit_natural_in_X,
    check_first_triangle,
    check_second_triangle,
    colimit_condition_report,
    counit_iso_report,
    kan_comparison,
    presheaf_corpus,
    target_map_morphism,
    underlying,
)
from .presheaf.adjunction import check_unit_natural, unit_is_bijective
from .presheaf.base import TowerPresheaf, check_product_preservation, functoriality_violations, sample_maps
from .quotients import dq_enumerate, dq_inf, dq_induced_map, dq_le, level_quotients
from .tower import cantor, decompose, random_compatible_cone, tower_corpus, verify_limit_cone

MAX_FAILURES = 5


@dataclass
class CheckResult:
    name: str
    checked: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "checked": self.checked, "failures": self.failures[:MAX_FAILURES]}


class BrokenPresheaf(LocConstPresheaf):
    """Locally constant maps whose restrictions forget the last thread."""

    def __init__(self):
        super().__init__(2)
        self.name = "broken:locconst:2"

    def restrict(self, f, x):
        out = super().restrict(f, x)
        if f.src.top_size > 1 and f.src != f.dst:
            return out[:-1] + (0,)
        return out


def _towers(max_top: int = 6):
    return [t for t in tower_corpus(3) if t.top_size <= max_top]


def check_partition_lattice(seed: int, extra):
    failures, checked = [], 0
    for n in range(7):
        checked += 1
        if len(enumerate_partitions(n)) != bell_number(n):
            failures.append(f"partition count wrong at {n}")
    ps = enumerate_partitions(4)
    for p, q in itertools.product(ps, repeat=2):
        checked += 1
        m = partition_meet(p, q)
        lower = [r for r in ps if partition_le(r, p) and partition_le(r, q)]
        if not partition_le(m, p) or not partition_le(m, q) or not all(partition_le(r, m) for r in lower):
            failures.append(f"meet is not the greatest lower bound at {p.block_of}, {q.block_of}")
    return checked, failures


def check_quotient_lattice(seed: int, extra):
    failures, checked = [], 0
    for t in _towers(5):
        qs = dq_enumerate(t)
        for a, b in itertools.product(qs, repeat=2):
            checked += 1
            m = dq_inf(a, b)
            if not (dq_le(m, a) and dq_le(m, b)):
                failures.append(f"{t!r}: inf is not a lower bound")
                continue
            ga, gb = dq_induced_map(m, a), dq_induced_map(m, b)
            if dq_le(a, b):
                ab = dq_induced_map(a, b)
                if ga.then(ab) != gb:
                    failures.append(f"{t!r}: induced maps do not commute")
    return checked, failures


def check_limit_cones(seed: int, extra):
    rng = random.Random(seed)
    failures, checked = [], 0
    for t in _towers(6):
        qs = dq_enumerate(t) if t.top_size <= 4 else level_quotients(t)
        pairs = [(q.level, q.partition) for q in qs]
        cones = []
        for _ in range(20):
            cones.append(random_compatible_cone(t, rng, pairs, apex_size=rng.randint(1, 4)))
        checked += len(cones)
        res = verify_limit_cone(t, cones)
        if not res:
            failures.append(f"{t!r}: cone without unique factorization {res.witness}")
    return checked, failures


def check_adjunction_laws(seed: int, extra):
    rng = random.Random(seed)
    failures, checked = [], 0
    towers = _towers(4)
    for n in range(1, 4):
        checked += 1
        if not unit_is_bijective(FinSet(n)):
            failures.append(f"unit not bijective at {n}")
        for g in all_maps(FinSet(n), FinSet(2)):
            checked += 1
            if not check_unit_natural(g):
                failures.append(f"unit not natural along {g.table}")
    for n in (1, 2, 3):
        bad = check_first_triangle(FinSet(n), towers)
        checked += 1
        failures.extend(bad)
    for X in presheaf_corpus(3):
        checked += 1
        failures.extend(check_second_triangle(X))
    maps = sample_maps(towers)
    for X in [LocConstPresheaf(2), LocConstPresheaf(3)]:
        n = len(underlying(X))
        for g in maps:
            for f in all_locconst(g.dst, FinSet(n))[:8]:
                checked += 1
                if not check_counit_natural_in_S(X, g, f):
                    failures.append(f"{X.spec()}: counit not natural along {g.src!r} -> {g.dst!r}")
    for _ in range(40):
        ny, nz = rng.randint(1, 3), rng.randint(1, 3)
        h = FinMap(FinSet(ny), FinSet(nz), tuple(rng.randrange(nz) for _ in range(ny)))
        beta = target_map_morphism(LocConstPresheaf(ny), LocConstPresheaf(nz), h)
        t = rng.choice(towers)
        f = rng.choice(all_locconst(t, FinSet(ny)))
        checked += 1
        if not check_counit_natural_in_X(beta, t, f, validate_on=maps[:6]):
            failures.append(f"counit not natural in the presheaf along {h.table}")
    return checked, failures


def _presheaves(extra):
    return [X for X in presheaf_corpus(3)] + list(extra)


def check_functoriality(seed: int, extra):
    failures, checked = [], 0
    maps = sample_maps(_towers(4))
    pairs = [(f, g) for f in maps for g in maps if f.dst == g.src]
    for X in _presheaves(extra):
        checked += len(pairs)
        failures.extend(functoriality_violations(X, pairs))
    return checked, failures


def check_products_and_extensionality(seed: int, extra):
    failures, checked = [], 0
    for X in [LocConstPresheaf(1), LocConstPresheaf(2), LocConstPresheaf(3)] + list(extra):
        for t in _towers(4):
            for level in range(1, t.depth + 1):
                pieces = decompose(t, level, range(t.sizes[level]))
                checked += 1
                ok, witness = check_product_preservation(X, t, pieces)
                if not ok:
                    failures.append(f"{X.spec()}: products not preserved on {t!r} at level {level}: {witness}")
                    continue
                els = X.elements(t)
                if len(els) > 256:
                    continue
                f = all_locconst(t, FinSet(t.sizes[level]))[-1]
                for x, y in itertools.combinations(els, 2):
                    checked += 1
                    if presheaf_ext_check(X, f, x, y):
                        failures.append(f"{X.spec()}: distinct elements agree on fibres")
    return checked, failures


def check_minimal_factorization(seed: int, extra):
    failures, checked = [], 0
    for t in _towers(5):
        qs = dq_enumerate(t)
        for f in all_locconst(t, FinSet(2)):
            checked += 1
            q, g = lc_factor_minimal(f)
            labels = q.thread_labels()
            if tuple(g.table[c] for c in labels) != f.thread_values():
                failures.append(f"{t!r}: factorization does not reproduce the map")
            coarser = [p for p in qs if dq_le(q, p) and p != q
                       and len({(lab, v) for lab, v in zip(p.thread_labels(), f.thread_values())}) == p.size]
            if coarser:
                failures.append(f"{t!r}: a coarser quotient also factors the map")
    return checked, failures


def check_oracle_agreement(seed: int, extra):
    failures, checked = [], 0
    for X in _presheaves(extra):
        for t in _towers(6):
            checked += 1
            try:
                a = counit_iso_report(X, t)
            except ProductPreservationFailed as exc:
                failures.append(f"{X.spec()} on {t!r}: {exc}")
                continue
            b = colimit_condition_report(X, t)
            if a.verdict != b.verdict:
                failures.append(f"{X.spec()} on {t!r}: counit {a.verdict}, colimit {b.verdict}")
    for d in range(1, 4):
        checked += 2
        if colimit_condition_report(LocConstPresheaf(2), cantor(d)).verdict != "pass":
            failures.append(f"locconst:2 does not pass on cantor depth {d}")
        rep = colimit_condition_report(TowerHomPresheaf(cantor(d), label="cantor"), cantor(d))
        if rep.verdict != "fail" or (rep.witness or {}).get("label") != "identity tower map":
            failures.append(f"towerhom:cantor does not fail with the identity at depth {d}")
    return checked, failures


def check_kan(seed: int, extra):
    failures, checked = [], 0
    for t in tower_corpus(3):
        if t.top_size > 4:
            continue
        for X in _presheaves(extra):
            checked += 1
            rep = kan_comparison(X, t)
            if not rep.ok:
                failures.append(f"{X.spec()} on {t!r}: {rep.to_json()}")
    return checked, failures


def check_category_engine(seed: int, extra):
    failures, checked = [], 0
    for name, f in corpus.functor_corpus(seed=seed, cap=120):
        checked += 1
        initial, final = sc.is_initial_functor(f), sc.is_final_functor(f)
        op = sc.opposite_functor(f)
        if initial != sc.is_final_functor(op) or final != sc.is_initial_functor(op):
            failures.append(f"{name}: duality fails")
        for dg in corpus.diagram_corpus(f.dst, seed=seed, random_count=1):
            if initial and not sc.restriction_comparison(f, dg, "limit", precondition=True).bijective:
                failures.append(f"{name}: limit restriction not bijective")
            if final and not sc.restriction_comparison(f, dg, "colimit", precondition=True).bijective:
                failures.append(f"{name}: colimit restriction not bijective")
    for m in range(1, 5):
        for n in range(m, 5):
            for emb in itertools.combinations(range(1, n), m - 1):
                checked += 1
                adj = sc.chain_galois_connection(m, n, (0,) + emb)
                if not sc.check_adjunction(adj) or not sc.is_fully_faithful(adj.left):
                    failures.append(f"chain {m} -> {n}: adjunction laws fail")
    return checked, failures


def check_modules(seed: int, extra):
    failures, checked = [], 0
    for m in module_corpus():
        for t in [cantor(1), cantor(2)]:
            checked += 1
            if not check_counit_linearity(m, t):
                failures.append(f"{m.name}: counit not linear on {t!r}")
    for xm in module_presheaf_corpus(2):
        for t in _towers(4):
            checked += 1
            if not theorem_c_report(xm, t).consistent:
                failures.append(f"{xm.spec()} on {t!r}: module and set verdicts differ")
    return checked, failures


CHECKS = [
    ("partition_lattice", check_partition_lattice),
    ("quotient_lattice", check_quotient_lattice),
    ("limit_cones", check_limit_cones),
    ("functoriality", check_functoriality),
    ("product_preservation", check_products_and_extensionality),
    ("adjunction_laws", check_adjunction_laws),
    ("minimal_factorization", check_minimal_factorization),
    ("oracle_agreement", check_oracle_agreement),
    ("kan_comparison", check_kan),
    ("category_engine", check_category_engine),
    ("module_consistency", check_modules),
]


def run_suite(seed: int = 0, include_broken: bool = False, only: list[str] | None = None) -> list[CheckResult]:
    extra: list[TowerPresheaf] = [BrokenPresheaf()] if include_broken else []
    out = []
    for name, fn in CHECKS:
        if only and name not in only:
            continue
        try:
            checked, failures = fn(seed, extra)
        except Exception as exc:  # a crash is a failed invariant, not a crashed run
            checked, failures = 0, [f"{type(exc).__name__}: {exc}"]
        out.append(CheckResult(name, checked, failures))
    return out
