import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import paf_direct, seq_from_set, units_closure
from propus.errors import DomainError, InvalidSubgroupError, UnknownOrbitError, UnsupportedGroupError
from propus.residue import (
    Block,
    GroupSpec,
    block_to_sequence,
    coincidence_paf_identity,
    cyclic_subgroups,
    is_skew,
    is_symmetric,
    negate_block,
    orbit_representative,
    orbit_union,
    orbits,
    paf,
    paf_rows,
    sequence_to_block,
)

A47 = [1, 2, 6, 7, 12, 14, 15, 18, 22, 23, 24, 25, 29, 32, 33, 35, 40, 41, 45, 46]


@st.composite
def cyclic_blocks(draw, max_v=100):
    v = draw(st.integers(1, max_v))
    elems = draw(st.sets(st.integers(0, v - 1), max_size=v))
    return Block.of(v, elems)


def test_groupspec_basics():
    g = GroupSpec((3, 3))
    assert g.order == 9 and not g.is_cyclic
    assert [g.decode(g.encode(x)) for x in [(0, 0), (1, 2), (2, 1)]] == [(0, 0), (1, 2), (2, 1)]
    assert g.decode(g.neg(g.encode((1, 2)))) == (2, 1)
    with pytest.raises(DomainError):
        GroupSpec((0,))
    with pytest.raises(DomainError):
        g.encode((3, 0))


def test_block_rejects_duplicates_and_range():
    with pytest.raises(DomainError):
        Block.of(5, [1, 1])
    with pytest.raises(DomainError):
        Block.of(5, [5])
    assert Block.of(5, [3, 1]).elements == (1, 3)


def test_negate_block_examples():
    assert negate_block(Block.of(47, [1, 2])).elements == (45, 46)
    a = Block.of(47, A47)
    assert negate_block(a) == a
    assert negate_block(Block.of(7, [])) == Block.of(7, [])
    g = GroupSpec((3, 3))
    b = Block.of(g, [(0, 1), (1, 2)])
    assert negate_block(b).decoded() == [(0, 2), (2, 1)]


def test_block_to_sequence_examples():
    a = block_to_sequence(Block.of(47, A47))
    assert a[:10].tolist() == [1, -1, -1, 1, 1, 1, -1, -1, 1, 1]
    assert block_to_sequence(Block.of(3, [])).tolist() == [1, 1, 1]
    assert block_to_sequence(Block.of(3, [1, 2])).tolist() == [1, -1, -1]
    with pytest.raises(UnsupportedGroupError):
        block_to_sequence(Block.of(GroupSpec((3, 3)), [(0, 1)]))


def test_paf_examples():
    assert paf([1] * 5).tolist() == [5] * 5
    # oracle: direct summation
    assert paf([1, -1, -1]).tolist() == paf_direct([1, -1, -1]) == [3, -1, -1]
    prof = paf(block_to_sequence(Block.of(47, A47)))
    assert prof.tolist() == paf_direct(seq_from_set(47, set(A47)))
    assert prof[0] == 47 and prof.sum() == 49
    assert all(prof[s] == prof[47 - s] for s in range(1, 47))


def test_coincidence_identity_examples():
    assert coincidence_paf_identity(Block.of(3, [1, 2]), 1) == -1
    assert coincidence_paf_identity(Block.of(9, [2, 3, 7]), 0) == 9
    a = Block.of(47, A47)
    oracle = paf_direct(seq_from_set(47, set(A47)))
    assert [coincidence_paf_identity(a, s) for s in range(47)] == oracle


@settings(max_examples=200, deadline=None)
@given(cyclic_blocks())
def test_paf_identities_random(b):
    v, k = b.group.order, len(b)
    seq = block_to_sequence(b)
    assert set(seq.tolist()) <= {-1, 1}
    assert seq.sum() == v - 2 * k
    prof = paf(seq)
    assert prof[0] == v
    assert all(prof[s] == prof[v - s] for s in range(1, v))
    assert prof.sum() == (v - 2 * k) ** 2
    if v % 2:
        assert all((x - v) % 4 == 0 for x in prof)
    assert [coincidence_paf_identity(b, s) for s in range(v)] == prof.tolist()
    assert sequence_to_block(seq) == b


@settings(max_examples=50, deadline=None)
@given(cyclic_blocks(max_v=41))
def test_folded_rows_match_paf(b):
    v = b.group.order
    if v < 3:
        return
    folded = paf_rows(block_to_sequence(b)[None, :])[0]
    assert folded.tolist() == paf(block_to_sequence(b))[1 : (v - 1) // 2 + 1].tolist()
    assert paf_rows(b.indicator()[None, :])[0].tolist() == folded.tolist()


def test_symmetry_and_skew():
    assert is_skew(Block.of(5, [1, 2]))
    assert not is_skew(Block.of(5, [1, 4]))
    assert is_symmetric(Block.of(5, [1, 4]))
    assert not is_skew(Block.of(5, [0, 1]))


def test_orbit_examples():
    o73 = orbits(73, [1, 8, 64])
    assert len(o73) == 24 and all(len(o) == 3 for o in o73)
    assert o73[0].elements == (1, 8, 64)
    o113 = orbits(113, [1, 16, 28, 30, 49, 106, 109])
    assert len(o113) == 16 and all(len(o) == 7 for o in o113)
    assert [o.elements for o in orbits(5, [1])] == [(1,), (2,), (3,), (4,)]
    with pytest.raises(InvalidSubgroupError):
        orbits(73, [1, 2])
    with pytest.raises(InvalidSubgroupError):
        orbits(15, [1, 3])


def test_orbit_union_examples():
    o73 = orbits(73, [1, 8, 64])
    assert len(orbit_union(o73, [1, 2, 3, 6, 7, 9, 18, 42, 43], include_zero=True)) == 28
    o113 = orbits(113, [1, 16, 28, 30, 49, 106, 109])
    assert len(orbit_union(o113, [1, 4, 5, 6, 13, 17, 18, 20])) == 56
    assert orbit_union(o73, [], include_zero=True).elements == (0,)
    with pytest.raises(UnknownOrbitError):
        orbit_union(o73, [8])
    assert orbit_representative(o73, 64) == 1 and orbit_representative(o73, 0) == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 120), st.data())
def test_orbits_partition(v, data):
    units = [u for u in range(1, v) if np.gcd(u, v) == 1]
    gens = data.draw(st.lists(st.sampled_from(units), max_size=2))
    h = units_closure(v, gens)
    orbs = orbits(v, sorted(h))
    seen = [x for o in orbs for x in o.elements]
    assert sorted(seen) == list(range(1, v))
    assert [o.elements[0] for o in orbs] == sorted(o.elements[0] for o in orbs)
    for o in orbs:
        assert {(o.elements[0] * u) % v for u in h} == set(o.elements)


@pytest.mark.parametrize("v", [2, 3, 9, 15, 43, 45, 73])
def test_cyclic_subgroups(v):
    from math import gcd

    want = {tuple(sorted(units_closure(v, [g]))) for g in range(1, v) if gcd(g, v) == 1}
    got = cyclic_subgroups(v)
    assert set(got) == want and len(got) == len(want)
    assert got[0] == (1,) and [len(h) for h in got] == sorted(len(h) for h in got)
    for h in got:
        orbits(v, h)  # each is closed


def test_cyclic_subgroups_v43():
    assert [len(h) for h in cyclic_subgroups(43)] == [1, 2, 3, 6, 7, 14, 21, 42]
    assert (1, 6, 36) in cyclic_subgroups(43)
