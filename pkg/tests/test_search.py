from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import all_families, is_family, symmetric_sets
from propus.corpus import ingest_paper_corpus
from propus.errors import InfeasibleTaskError, InvalidSubgroupError
from propus.params import ParameterSet, enumerate_parameter_sets
from propus.residue import Block, GroupSpec, orbits
from propus.search import (
    Budget,
    _lanes,
    SearchTask,
    count_symmetric_candidates,
    orbit_pool_size,
    paf_join,
    search_cyclic,
    search_orbit,
    symmetric_candidates,
)
from propus.verify import verify_family

P = ParameterSet.parse


def _triples(out):
    return {(f.a.elements, f.b.elements, f.d.elements) for f in out.families}


def test_symmetric_candidates():
    assert [b.elements for b in symmetric_candidates(5, 2)] == [(1, 4), (2, 3)]
    assert sum(1 for _ in symmetric_candidates(25, 10)) == 792 == comb(12, 5)
    assert count_symmetric_candidates(47, 20) == comb(23, 10)
    assert sum(1 for _ in symmetric_candidates(13, 5)) == comb(6, 2)
    assert all(0 in b for b in symmetric_candidates(13, 5))
    assert {frozenset(b.elements) for b in symmetric_candidates(11, 6)} == set(symmetric_sets(11, 6))


def test_exhaustive_v3():
    out = search_cyclic(SearchTask(P("(3;1,1,1,0;0)"), "A", "exhaustive"))
    assert out.exhausted and out.families
    assert all(f.a.elements == (0,) and not f.d.elements for f in out.families)
    assert {f.b.elements for f in out.families} == {(0,), (1,), (2,)}


@pytest.mark.parametrize("v", [3, 5, 7, 9, 11])
def test_exhaustive_equals_bruteforce(v):
    for p in enumerate_parameter_sets(v):
        for side in "AD":
            out = search_cyclic(SearchTask(p, side, "exhaustive"))
            assert out.exhausted
            assert _triples(out) == all_families(v, p.k1, p.k2, p.k4, side), (p, side)


def test_either_is_union_of_sides():
    p = P("(9;3,3,3,3;3)")
    a = _triples(search_cyclic(SearchTask(p, "A", "exhaustive")))
    d = _triples(search_cyclic(SearchTask(p, "D", "exhaustive")))
    both = _triples(search_cyclic(SearchTask(p, "either", "exhaustive")))
    assert both == a | d


def test_paf_join_self_match():
    f = next(e.family for e in ingest_paper_corpus() if e.params.v == 47)
    assert paf_join([f.a], [f.b], [f.d]) == [(0, 0, 0)]
    g = f.group
    assert paf_join([f.a], [f.b], [Block(g, f.d.elements[1:])]) == []


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([7, 9, 11, 13]), st.data())
def test_paf_join_random_pools_sound(v, data):
    g = GroupSpec.cyclic(v)
    p = data.draw(st.sampled_from(enumerate_parameter_sets(v)))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))

    def pool(k, n):
        return [Block(g, tuple(sorted(rng.choice(v, k, replace=False).tolist()))) for _ in range(n)]

    pa = list(symmetric_candidates(v, p.k1))
    pb, pd = pool(p.k2, 60), pool(p.k4, 60)
    for i, j, l in paf_join(pa, pb, pd):
        assert is_family(v, set(pa[i]), set(pb[j]), set(pd[l]))


def test_randomized_finds_and_verifies():
    p = enumerate_parameter_sets(21)[0]
    out = search_cyclic(SearchTask(p, "A", "randomized", seed=3, budget=Budget(max_restarts=50)))
    assert out.families and not out.exhausted
    f = out.families[0]
    rep = verify_family(f)
    assert rep.valid and rep.a_symmetric and f.claimed == p


def test_randomized_d_side():
    p = enumerate_parameter_sets(19)[0]
    out = search_cyclic(SearchTask(p, "D", "randomized", seed=1, budget=Budget(max_restarts=50)))
    assert out.families and verify_family(out.families[0]).d_symmetric


def test_randomized_deterministic_across_workers():
    p = enumerate_parameter_sets(17)[1]
    task = dict(params=p, symmetric_target="either", mode="randomized", seed=11, max_families=3)
    a = search_cyclic(SearchTask(**task, budget=Budget(max_restarts=40, max_steps=3000)))
    b = search_cyclic(SearchTask(**task, budget=Budget(max_restarts=40, max_steps=3000)))
    c = search_cyclic(SearchTask(**task, budget=Budget(max_restarts=40, max_steps=3000), workers=2))
    assert a.families == b.families == c.families
    assert a.restarts == c.restarts and a.nodes == c.nodes


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([v for v in range(3, 26, 2)]), st.integers(0, 10**6), st.sampled_from("AD"), st.data())
def test_randomized_soundness(v, seed, side, data):
    p = data.draw(st.sampled_from(enumerate_parameter_sets(v)))
    out = search_cyclic(SearchTask(p, side, "randomized", seed=seed, budget=Budget(max_restarts=2, max_steps=300)))
    for f in out.families:
        assert verify_family(f).valid and f.claimed == p


def test_lanes_rotate_over_tileable_subgroups():
    p = P("(43;18,21,21,16;33)")
    lanes = _lanes(SearchTask(p, "A", "randomized"), 43)
    assert [(side, h) for side, _, h, _ in lanes] == [("A", None), ("A", (1, 42)), ("A", (1, 6, 36))]
    assert lanes[0][3] == 40 * 43**3 and lanes[2][3] == 20 * 14**3
    plain = _lanes(SearchTask(p, "either", "randomized", multipliers=False), 43)
    assert [(side, h) for side, _, h, _ in plain] == [("A", None), ("D", None)]
    fixed = _lanes(SearchTask(p, "A", "randomized", subgroup=(1, 6, 36), budget=Budget(max_steps=99)), 43)
    assert [(side, h, n) for side, _, h, n in fixed] == [("A", (1, 6, 36), 99)]


def test_multiplier_lane_finds_v31_family():
    p = P("(31;13,13,13,12;20)")
    out = search_cyclic(SearchTask(p, "A", "randomized", seed=4, budget=Budget(max_restarts=12)))
    assert out.families and verify_family(out.families[0]).a_symmetric


def test_exhaustive_workers_agree():
    p = P("(13;6,5,5,4;7)") if P("(13;6,5,5,4;7)") in enumerate_parameter_sets(13) else enumerate_parameter_sets(13)[0]
    one = search_cyclic(SearchTask(p, "either", "exhaustive"))
    two = search_cyclic(SearchTask(p, "either", "exhaustive", workers=2))
    assert one.families == two.families and one.nodes == two.nodes


# ---------------------------------------------------------------- orbit

def _orbit_entries(v):
    return [e for e in ingest_paper_corpus() if e.params.v == v and e.family.subgroup]


def _pools_from(entries, extra=()):
    pools = {"A": [], "B": [], "D": []}
    for e in entries:
        for role, idx in e.family.orbit_indices.items():
            pools[role].append(tuple(idx))
    for role, idx in extra:
        pools[role].append(tuple(idx))
    return pools


def test_orbit_search_recovers_v73_families():
    entries = _orbit_entries(73)
    assert len(entries) == 2
    p = entries[0].params
    out = search_orbit(SearchTask(p, "A", "orbit", subgroup=(1, 8, 64), pools=_pools_from(entries)))
    want = {(e.family.a, e.family.b, e.family.d) for e in entries}
    got = {(f.a, f.b, f.d) for f in out.families}
    assert want <= got
    assert all(verify_family(f).valid for f in out.families)


def test_orbit_search_with_distractors():
    entries = _orbit_entries(113)
    assert len(entries) == 4
    p = entries[0].params
    h = (1, 16, 28, 30, 49, 106, 109)
    rng = np.random.default_rng(5)
    reps = [o.elements[0] for o in orbits(113, h)]
    extra = [("B", sorted(rng.choice(reps, 7, replace=False).tolist())) for _ in range(20)]
    out = search_orbit(SearchTask(p, "A", "orbit", subgroup=h, pools=_pools_from(entries, extra)))
    want = {(e.family.a, e.family.b, e.family.d) for e in entries}
    assert want <= {(f.a, f.b, f.d) for f in out.families}
    assert out.candidates == 4 * 24 * 4


def test_orbit_errors():
    p = P("(73;36,36,36,28;63)")
    with pytest.raises(InvalidSubgroupError):
        search_orbit(SearchTask(p, "A", "orbit", subgroup=(1, 2)))
    # orbits of size 8 cannot make a block of 36 (with or without 0)
    with pytest.raises(InfeasibleTaskError):
        search_orbit(SearchTask(p, "A", "orbit", subgroup=(1, 10, 22, 27, 46, 51, 63, 72)))


def test_orbit_space_accounting():
    # v=13, H={1,3,9}: four orbits of size 3, negation pairs them up
    h = (1, 3, 9)
    for p in enumerate_parameter_sets(13):
        try:
            out = search_orbit(SearchTask(p, "A", "orbit", subgroup=h))
        except InfeasibleTaskError:
            continue
        predicted = 1
        for k, sym in ((p.k1, True), (p.k2, False), (p.k4, False)):
            if sym:
                ways = sum(comb(2, (k - z) // 6) for z in (0, 1) if (k - z) % 6 == 0 and k >= z)
            else:
                ways = sum(comb(4, (k - z) // 3) for z in (0, 1) if (k - z) % 3 == 0 and k >= z)
            predicted *= ways
            assert orbit_pool_size(13, h, k, sym) == ways
        assert out.candidates == predicted and out.exhausted
        for f in out.families:
            assert verify_family(f).valid
