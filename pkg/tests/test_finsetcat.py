import itertools

import pytest
from hypothesis import given, strategies as st

from condisc.errors import BoundExceeded, GroundMismatch, NotComparable
from condisc.finsetcat import (
    FinMap,
    FinSet,
    Order,
    Partition,
    all_maps,
    bell_number,
    copairing,
    coproduct_with_inclusions,
    enumerate_partitions,
    induced_quotient_map,
    partition_compare,
    partition_le,
    partition_meet,
    product_pairing,
    product_with_projections,
)
from oracles import equivalence_relations, relation_of


def test_empty_product_is_terminal():
    prod, projs = product_with_projections([])
    assert prod.size == 1 and projs == []


def test_product_sizes():
    prod, projs = product_with_projections([FinSet(2), FinSet(3)])
    assert prod.size == 6 and len(projs) == 2


def test_product_universal_property_exhaustive():
    factors = [FinSet(2), FinSet(2), FinSet(2)]
    prod, projs = product_with_projections(factors)
    assert prod.size == 8
    dom = FinSet(2)
    for legs in itertools.product(*(list(all_maps(dom, f)) for f in factors)):
        u = product_pairing(prod, projs, legs)
        assert all(u.then(p) == l for p, l in zip(projs, legs))
        # uniqueness: exactly one map into prod has these components
        matches = [v for v in all_maps(dom, prod) if all(v.then(p) == l for p, l in zip(projs, legs))]
        assert matches == [u]


@pytest.mark.parametrize("sizes", [(1,), (2, 3), (3, 1, 2), (0, 2)])
def test_product_universal_property_small(sizes):
    factors = [FinSet(s) for s in sizes]
    prod, projs = product_with_projections(factors)
    for legs in itertools.product(*(list(all_maps(FinSet(1), f)) for f in factors)):
        u = product_pairing(prod, projs, legs)
        assert [u.then(p) for p in projs] == list(legs)


def test_coproducts():
    empty, incs = coproduct_with_inclusions([])
    assert empty.size == 0 and incs == []
    two, _ = coproduct_with_inclusions([FinSet(1), FinSet(1)])
    assert two.size == 2


def test_coproduct_universal_property_exhaustive():
    summands = [FinSet(3), FinSet(2)]
    coprod, incs = coproduct_with_inclusions(summands)
    assert coprod.size == 5
    images = [inc.image() for inc in incs]
    assert images[0].isdisjoint(images[1]) and images[0] | images[1] == frozenset(range(5))
    cod = FinSet(2)
    for legs in itertools.product(*(list(all_maps(s, cod)) for s in summands)):
        u = copairing(coprod, incs, legs, cod)
        matches = [v for v in all_maps(coprod, cod) if all(i.then(v) == l for i, l in zip(incs, legs))]
        assert matches == [u]


@pytest.mark.parametrize("n,expected", [(0, 1), (1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203)])
def test_partition_counts_match_brute_force(n, expected):
    parts = enumerate_partitions(n)
    assert len(parts) == expected == bell_number(n)
    oracle = set(equivalence_relations(n))
    assert {relation_of(p.block_of) for p in parts} == oracle
    assert parts == sorted(parts)


def test_enumeration_bound():
    with pytest.raises(BoundExceeded):
        enumerate_partitions(11)
    assert len(enumerate_partitions(7, bound=7)) == 877


def test_empty_ground_single_partition():
    assert enumerate_partitions(0) == [Partition(())]


def test_meet_examples():
    p = Partition.from_blocks(3, [[0, 1], [2]])
    q = Partition.from_blocks(3, [[0], [1, 2]])
    assert partition_meet(p, q) == Partition.discrete(3)
    assert partition_meet(p, Partition.discrete(3)) == Partition.discrete(3)
    assert partition_meet(p, p) == p


def test_meet_is_relation_intersection():
    for p, q in itertools.product(enumerate_partitions(4), repeat=2):
        assert relation_of(partition_meet(p, q).block_of) == relation_of(p.block_of) & relation_of(q.block_of)


def test_compare_examples():
    p = Partition.from_blocks(4, [[0, 1], [2, 3]])
    q = Partition.from_blocks(4, [[0, 2], [1, 3]])
    assert partition_compare(p, p) is Order.EQ
    assert partition_compare(Partition.discrete(4), p) is Order.LE
    assert partition_compare(p, Partition.discrete(4)) is Order.GE
    assert partition_compare(p, q) is Order.INCOMPARABLE


def test_ground_mismatch():
    with pytest.raises(GroundMismatch):
        partition_meet(Partition.discrete(2), Partition.discrete(3))
    with pytest.raises(GroundMismatch):
        partition_compare(Partition.discrete(2), Partition.discrete(3))


def test_lattice_laws_exhaustive():
    for n in range(6):
        parts = enumerate_partitions(n)
        for p in parts:
            assert partition_meet(p, p) == p
        for p, q in itertools.product(parts, repeat=2):
            m = partition_meet(p, q)
            assert m == partition_meet(q, p)
            assert partition_le(p, q) == (m == p)
            assert partition_le(m, p) and partition_le(m, q)
        if n <= 4:
            for p, q, r in itertools.product(parts, repeat=3):
                assert partition_meet(partition_meet(p, q), r) == partition_meet(p, partition_meet(q, r))
                # greatest lower bound
                if partition_le(r, p) and partition_le(r, q):
                    assert partition_le(r, partition_meet(p, q))


def test_induced_quotient_map_examples():
    p = Partition.from_blocks(3, [[0, 1], [2]])
    assert induced_quotient_map(p, p) == FinMap.identity(FinSet(2))
    assert induced_quotient_map(Partition.discrete(3), p).table == (0, 0, 1)
    with pytest.raises(NotComparable):
        induced_quotient_map(p, Partition.discrete(3))


def test_induced_maps_commute_and_compose():
    for n in range(5):
        parts = enumerate_partitions(n)
        for p, q in itertools.product(parts, repeat=2):
            if not partition_le(p, q):
                continue
            m = induced_quotient_map(p, q)
            assert m.is_surjective()
            assert p.projection().then(m) == q.projection()
        if n <= 4:
            for p, q, r in itertools.product(parts, repeat=3):
                if partition_le(p, q) and partition_le(q, r):
                    assert induced_quotient_map(p, r) == induced_quotient_map(p, q).then(induced_quotient_map(q, r))


@given(st.lists(st.integers(0, 4), max_size=8), st.lists(st.integers(0, 4), max_size=8))
def test_meet_properties_random(a, b):
    n = min(len(a), len(b))
    p, q = Partition.from_labels(a[:n]), Partition.from_labels(b[:n])
    m = partition_meet(p, q)
    assert partition_le(m, p) and partition_le(m, q)
    assert m.num_blocks >= max(p.num_blocks, q.num_blocks)


def test_finmap_composition_laws():
    a, b, c = FinSet(2), FinSet(3), FinSet(2)
    for f in all_maps(a, b):
        assert f.then(FinMap.identity(b)) == f == FinMap.identity(a).then(f)
        for g in all_maps(b, c):
            for h in all_maps(c, a):
                assert f.then(g).then(h) == f.then(g.then(h))


def test_json_roundtrip():
    s = FinSet(3, ("a", "b", "c"))
    assert FinSet.from_json(s.to_json()).labels == ("a", "b", "c")
    p = Partition.from_blocks(4, [[0, 3], [1], [2]])
    assert Partition(tuple(p.to_json())) == p
    with pytest.raises(ValueError):
        Partition((1, 0))
