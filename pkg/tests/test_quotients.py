import itertools
import random

import pytest

from condisc.errors import BoundExceeded, TowerMismatch
from condisc.finsetcat import Order, Partition, bell_number, enumerate_partitions
from condisc.quotients import (
    DiscreteQuotient,
    dq_canonicalize,
    dq_compare,
    dq_diagram,
    dq_enumerate,
    dq_induced_map,
    dq_inf,
    dq_le,
    dq_projection,
    finest_quotient,
    hasse_edges,
    is_canonical,
    level_quotients,
    make_quotient,
    trivial_quotient,
)
from condisc.locconst import lc_fibres
from condisc.smallcat import is_initial_functor, thin_functor
from condisc.tower import (
    Cone,
    cantor,
    eventually_constant,
    point,
    random_compatible_cone,
    random_tower,
    tower_corpus,
    verify_limit_cone,
)
from oracles import relation_of


def thread_relation(q):
    return relation_of(q.thread_labels())


def small_towers(max_top=6):
    return [t for t in tower_corpus() if t.top_size <= max_top]


def test_canonicalize_pullback_round_trip():
    t = cantor(2)
    q0 = DiscreteQuotient(t, 0, Partition.discrete(1))
    lifted = DiscreteQuotient(t, 2, q0.lifted(2))
    assert dq_canonicalize(lifted) == q0
    q1 = DiscreteQuotient(t, 1, Partition.discrete(2))
    assert dq_canonicalize(DiscreteQuotient(t, 2, q1.lifted(2))) == q1


def test_discrete_top_stays():
    t = cantor(3)
    q = DiscreteQuotient(t, 3, Partition.discrete(8))
    assert dq_canonicalize(q) == q


def test_point_tower_canonicalizes_to_level_zero():
    t = point(3)
    for n in range(4):
        q = dq_canonicalize(DiscreteQuotient(t, n, Partition.discrete(1)))
        assert q.level == 0 and q.partition == Partition.indiscrete(1)


def test_canonicalization_preserves_thread_relation_and_is_idempotent():
    for t in small_towers():
        for n in range(t.depth + 1):
            for p in enumerate_partitions(t.sizes[n]):
                q = DiscreteQuotient(t, n, p)
                c = dq_canonicalize(q)
                assert thread_relation(c) == thread_relation(q)
                assert dq_canonicalize(c) == c
                # no lower level represents the same relation
                for m in range(c.level):
                    for r in enumerate_partitions(t.sizes[m]):
                        assert thread_relation(DiscreteQuotient(t, m, r)) != thread_relation(c)


def test_compare_matches_thread_relations():
    for t in small_towers(5):
        qs = dq_enumerate(t)
        for a, b in itertools.product(qs, repeat=2):
            ra, rb = thread_relation(a), thread_relation(b)
            expected = Order.EQ if ra == rb else Order.LE if ra <= rb else Order.GE if rb <= ra else Order.INCOMPARABLE
            assert dq_compare(a, b) is expected


def test_inf_examples_and_oracle():
    t = cantor(2)
    q = make_quotient(t, 1, [0, 1])
    assert dq_inf(q, q) == q
    bottom = finest_quotient(t)
    assert dq_inf(q, bottom) == bottom
    a = make_quotient(t, 2, [0, 0, 1, 1])
    b = make_quotient(t, 2, [0, 1, 0, 1])
    assert a.level == 1 and dq_inf(a, b) == bottom
    for t in small_towers(5):
        qs = dq_enumerate(t)
        for a, b in itertools.product(qs, repeat=2):
            m = dq_inf(a, b)
            assert is_canonical(m)
            assert thread_relation(m) == thread_relation(a) & thread_relation(b)


def test_mismatch():
    with pytest.raises(TowerMismatch):
        dq_compare(trivial_quotient(cantor(1)), trivial_quotient(cantor(2)))


def test_projection_examples():
    t = cantor(2)
    f = dq_projection(trivial_quotient(t))
    assert f.thread_values() == (0, 0, 0, 0)
    g = dq_projection(finest_quotient(t))
    assert g.thread_values() == (0, 1, 2, 3)
    h = dq_projection(make_quotient(t, 1, [0, 1]))
    fibres = lc_fibres(h)
    assert [sub.tower.top_size for _, sub in fibres] == [2, 2]


def test_enumerate_counts():
    assert len(dq_enumerate(point(3))) == 1
    qs = dq_enumerate(cantor(2))
    assert len(qs) == 15 == bell_number(4)
    assert qs == sorted(qs, key=lambda q: (q.level, q.partition))
    assert len(dq_enumerate(eventually_constant(3, 2))) == 5
    assert len(dq_enumerate(eventually_constant(3, 5))) == 5
    with pytest.raises(BoundExceeded):
        dq_enumerate(cantor(4), bound=10)


def test_enumerate_matches_equivalence_relations_on_threads():
    for t in small_towers():
        qs = dq_enumerate(t)
        rels = {thread_relation(q) for q in qs}
        assert len(rels) == len(qs) == bell_number(t.top_size)


def test_poset_is_cofiltered():
    for t in small_towers(5):
        qs = dq_enumerate(t)
        for a, b in itertools.product(qs, repeat=2):
            m = dq_inf(a, b)
            assert dq_le(m, a) and dq_le(m, b)


def test_inf_triangle_commutes():
    for t in small_towers(5):
        qs = dq_enumerate(t)
        for a, b in itertools.product(qs, repeat=2):
            m = dq_inf(a, b)
            pm = dq_projection(m).thread_values()
            for x in (a, b):
                induced = dq_induced_map(m, x)
                assert tuple(induced.table[v] for v in pm) == dq_projection(x).thread_values()


def test_diagram_examples():
    d = dq_diagram(point(2))
    assert d.diagram.index.num_objects == 1 and d.diagram.value_sets[0].size == 1
    d1 = dq_diagram(cantor(1))
    assert d1.diagram.index.num_objects == 2
    assert [leg.table for leg in d1.legs] == [(0, 0), (0, 1)]
    d2 = dq_diagram(cantor(2))
    assert d2.cone_commutes()
    assert len(d2.diagram.index.arrows) == sum(
        1 for a, b in itertools.product(d2.quotients, repeat=2) if dq_le(a, b)
    )


def test_diagram_cone_is_limiting():
    rng = random.Random(2)
    for t in small_towers():
        d = dq_diagram(t)
        qs = [(q.level, q.partition) for q in d.quotients]
        cones = [random_compatible_cone(t, rng, qs, apex_size=2) for _ in range(10)]
        own = Cone(d.threads, tuple(qs), d.legs)
        assert verify_limit_cone(t, cones + [own])


def test_level_chain_is_initial():
    rng = random.Random(0)
    towers = small_towers() + [random_tower(rng, (1, 2, 2, 4)), random_tower(rng, (2, 2, 5))]
    for t in towers:
        full = dq_enumerate(t)
        chain = level_quotients(t)
        d = dq_diagram(t, full)
        f = thin_functor(dq_diagram(t, chain).diagram.index, d.diagram.index, [full.index(q) for q in chain])
        assert is_initial_functor(f)


def test_hasse_edges_cantor1():
    qs = dq_enumerate(cantor(1))
    assert hasse_edges(qs) == [(1, 0)]
