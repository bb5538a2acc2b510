import itertools

import pytest

from condisc.errors import BoundExceeded
from condisc.finsetcat import FinSet
from condisc.locconst import (
    LocConstMap,
    all_locconst,
    constant_map,
    from_thread_values,
    lc_eval,
    lc_factor_minimal,
    lc_fibres,
    lc_pullback,
    lc_restrict,
)
from condisc.quotients import dq_enumerate, dq_le, dq_projection
from condisc.tower import TowerMap, cantor, clopen_subtower, thread_set, tower_corpus


def raw_eval(t, level, table, j):
    """Evaluate declared (pre-canonical) data directly on a thread."""
    return table[thread_set(t).coord(j, level)]


def test_eval_examples():
    t = cantor(2)
    c = constant_map(t, FinSet(3), 2)
    assert [lc_eval(c, j) for j in range(4)] == [2, 2, 2, 2]
    half = LocConstMap(t, FinSet(2), 1, (0, 1))
    ts = thread_set(t)
    for j in range(4):
        assert half(j) == ts.coord(j, 1)
        assert lc_eval(half, ts.thread(j)) == half(j)


def test_canonical_form_evaluates_like_declared_form():
    t = cantor(3)
    for level in range(4):
        for table in itertools.product(range(2), repeat=t.sizes[level]):
            f = LocConstMap(t, FinSet(2), level, table)
            assert f.level <= level
            assert f.thread_values() == tuple(raw_eval(t, level, table, j) for j in range(8))


def test_fibre_examples():
    t = cantor(2)
    c = constant_map(t, FinSet(2), 0)
    fib = lc_fibres(c)
    assert len(fib) == 1 and fib[0][1].tower == t
    inj = LocConstMap(t, FinSet(2), 1, (1, 0))
    assert [v for v, _ in lc_fibres(inj)] == [0, 1]
    f = from_thread_values(t, FinSet(2), (0, 0, 1, 0))
    assert sorted(sub.tower.top_size for _, sub in lc_fibres(f)) == [1, 3]


def test_fibres_partition_threads():
    for t in tower_corpus():
        if t.top_size > 6:
            continue
        for f in all_locconst(t, FinSet(2)):
            fib = lc_fibres(f)
            covered = sorted(j for _, sub in fib for j in sub.thread_inclusion)
            assert covered == list(range(t.top_size))
            for v, sub in fib:
                assert all(f(j) == v for j in sub.thread_inclusion)


def test_factor_examples():
    t = cantor(2)
    q, g = lc_factor_minimal(constant_map(t, FinSet(3), 1))
    assert q.size == 1 and g.dom.size == 1 and g.table == (1,)
    pulled = LocConstMap(t, FinSet(2), 2, (0, 0, 1, 1))
    q, g = lc_factor_minimal(pulled)
    assert q.level == 1
    inj = LocConstMap(t, FinSet(4), 2, (3, 2, 1, 0))
    q, g = lc_factor_minimal(inj)
    assert q.level == 2 and q.size == 4 and g.is_injective()


def test_factorization_is_a_section_and_minimal():
    for t in tower_corpus():
        if t.top_size > 5:
            continue
        qs = dq_enumerate(t)
        for f in all_locconst(t, FinSet(3)):
            q, g = lc_factor_minimal(f)
            assert g.is_injective()
            proj = dq_projection(q).thread_values()
            assert tuple(g.table[b] for b in proj) == f.thread_values()
            fibre_labels = [sub.thread_inclusion for _, sub in lc_fibres(f)]
            assert sorted(fibre_labels) == sorted(
                tuple(j for j in range(t.top_size) if proj[j] == b) for b in range(q.size)
            )
            # any quotient f factors through is finer than q
            vals = f.thread_values()
            for r in qs:
                lab = r.thread_labels()
                factors = all(vals[i] == vals[j] for i in range(len(lab)) for j in range(len(lab)) if lab[i] == lab[j])
                assert factors == dq_le(r, q)


def test_restrict_examples():
    t = cantor(2)
    f = LocConstMap(t, FinSet(2), 1, (0, 1))
    whole = clopen_subtower(t, 0, {0})
    assert lc_restrict(f, whole) == f
    for v, sub in lc_fibres(f):
        r = lc_restrict(f, sub)
        assert r.level == 0 and set(r.table) == {v}
    # a level-2 map restricted to a half only depends on level 1 there
    g = from_thread_values(t, FinSet(2), (0, 1, 1, 1))
    assert g.level == 2
    r = lc_restrict(g, clopen_subtower(t, 1, {1}))
    assert r.level == 0 and r.table == (1,)


def test_restrict_commutes_with_eval():
    for t in tower_corpus():
        if t.top_size > 6:
            continue
        for level in range(t.depth + 1):
            for x in range(t.sizes[level]):
                sub = clopen_subtower(t, level, {x})
                for f in all_locconst(t, FinSet(2)):
                    r = lc_restrict(f, sub)
                    assert r.thread_values() == tuple(f(j) for j in sub.thread_inclusion)


def test_pullback_along_tower_map():
    t = cantor(3)
    shift = TowerMap(t, cantor(2), 1, tuple(tuple(j % (2**n) for j in range(2 ** (n + 1))) for n in range(3)))
    for f in all_locconst(cantor(2), FinSet(2)):
        g = lc_pullback(f, shift)
        assert g.thread_values() == tuple(f(shift.thread_map[j]) for j in range(8))


def test_all_locconst_bound():
    assert len(all_locconst(cantor(2), FinSet(3))) == 81
    with pytest.raises(BoundExceeded):
        all_locconst(cantor(4), FinSet(2), bound=1000)


def test_json_roundtrip():
    t = cantor(2)
    f = LocConstMap(t, FinSet(3, ("a", "b", "c")), 2, (0, 2, 1, 1))
    assert LocConstMap.from_json(t, f.to_json()) == f
