import random

import pytest
from hypothesis import given, settings

from conftest import EX21, EX21_OPTIMUM, STAR4, profiles
from oracles import GraphOracle
from spgraph.generators import random_cycle, random_path, random_pseudotree, random_tree, traversal_profile
from spgraph.profile import Graph, Profile, is_compatible
from spgraph.recognition import (
    STRUCTURES,
    Verdict,
    a_set,
    check_witness,
    recognize_cycle,
    recognize_path,
    recognize_pseudotree,
    recognize_tree,
)

LEAF_EXAMPLE = Profile.from_rankings([(1, 2, 3, 4), (2, 1, 3, 4), (4, 1, 2, 3)])


def test_a_sets():
    assert a_set(LEAF_EXAMPLE, 4) == {1}
    assert a_set(Profile.from_rankings([(1, 2, 3), (2, 1, 3), (1, 2, 3)]), 3) == {1, 2}
    assert a_set(EX21, 4) == {3}
    # a voter ranking k first contributes only its second choice
    assert a_set(Profile.from_rankings([(2, 3, 1), (1, 3, 2)]), 2) == {3}


def test_tree_elimination_certificate():
    res = recognize_tree(LEAF_EXAMPLE)
    assert res.verdict is Verdict.COMPATIBLE
    assert res.certificate.attachment_sets() == {4: {1}, 3: {1, 2}, 2: {1}}
    assert res.witness.edges == {(1, 2), (1, 3), (1, 4)}
    assert check_witness(res, LEAF_EXAMPLE)


def test_tree_rejects_worked_example():
    res = recognize_tree(EX21)
    assert res.verdict is Verdict.INCOMPATIBLE
    assert not res.certificate.complete
    assert not res.compatible


def test_single_ranking_everything_compatible():
    p = Profile.from_rankings([(1, 2, 3, 4, 5)])
    for name, fn in STRUCTURES.items():
        res = fn(p)
        assert res.compatible, name
        assert check_witness(res, p)
    assert recognize_path(p).witness == Graph.path([1, 2, 3, 4, 5])


def test_star_is_a_tree_but_not_an_axis():
    assert recognize_tree(STAR4).compatible
    assert not recognize_path(STAR4).compatible


def test_leaf_example_axis_verdict_matches_exhaustive_search():
    # 4-1-2-3 is an axis for this profile
    res = recognize_path(LEAF_EXAMPLE)
    assert res.compatible == GraphOracle(4, LEAF_EXAMPLE.rankings).path()
    assert res.compatible and check_witness(res, LEAF_EXAMPLE)


def test_restricted_worked_example_is_a_cycle():
    # candidates 1,2,3,5 relabelled as 1,2,3,4
    p = Profile.from_rankings([(1, 2, 3, 4), (1, 3, 2, 4), (2, 4, 3, 1), (3, 4, 2, 1)], labels=["1", "2", "3", "5"])
    res = recognize_cycle(p)
    assert res.compatible
    assert res.witness == Graph.cycle([1, 2, 4, 3])


def test_cycle_on_three_candidates_always_holds():
    p = Profile.from_rankings([(1, 2, 3), (3, 1, 2), (2, 3, 1)])
    assert recognize_cycle(p).witness == Graph.complete(3)


def test_cycle_example_matches_oracle():
    p = Profile.from_rankings([(1, 2, 3, 4), (1, 3, 2, 4), (2, 4, 1, 3)])
    assert recognize_cycle(p).compatible == GraphOracle(4, p.rankings).cycle()


def test_cycle_and_pseudotree_need_three_candidates():
    p = Profile.from_rankings([(1, 2)])
    with pytest.raises(ValueError):
        recognize_cycle(p)
    with pytest.raises(ValueError):
        recognize_pseudotree(p)


def test_pseudotree_worked_example():
    res = recognize_pseudotree(EX21)
    assert res.compatible
    assert res.witness.edges == EX21_OPTIMUM


def test_pseudotree_scans_beyond_last_ranked():
    # every last-ranked candidate has an empty A-set, yet 5 is a leaf
    p = Profile.from_rankings([(2, 3, 1, 5, 4), (5, 2, 4, 1, 3), (1, 4, 2, 5, 3), (3, 1, 2, 5, 4)])
    assert all(not a_set(p, r[-1]) for r in p.rankings)
    assert a_set(p, 5) == {2}
    assert not recognize_tree(p).compatible
    res = recognize_pseudotree(p)
    assert res.compatible and GraphOracle(5, p.rankings).pseudotree()
    assert res.certificate.steps[0].candidate == 5


def test_tree_profile_gives_pseudotree_with_m_edges():
    p = traversal_profile(random_tree(7, 3), 5, 3)
    res = recognize_pseudotree(p)
    assert res.compatible and check_witness(res, p)
    assert len(res.witness.edges) <= 7


@pytest.mark.parametrize(
    "make, fn",
    [
        (random_tree, recognize_tree),
        (random_path, recognize_path),
        (random_cycle, recognize_cycle),
        (random_pseudotree, recognize_pseudotree),
    ],
)
def test_planted_structures_are_found(make, fn):
    rng = random.Random(7)
    for _ in range(60):
        m = rng.randint(3, 14)
        p = traversal_profile(make(m, rng), rng.randint(1, 10), rng)
        res = fn(p)
        assert res.compatible
        assert check_witness(res, p)


@settings(max_examples=250, deadline=None)
@given(profiles(min_m=3, max_m=6, max_n=4))
def test_verdicts_match_exhaustive_search(p):
    oracle = GraphOracle(p.m, p.rankings)
    for name, fn in STRUCTURES.items():
        res = fn(p)
        assert res.compatible == oracle.structure(name), name
        assert check_witness(res, p)


@settings(max_examples=100, deadline=None)
@given(profiles(min_m=3, max_m=7, max_n=4))
def test_hierarchy(p):
    if recognize_path(p).compatible:
        assert recognize_tree(p).compatible
    if recognize_tree(p).compatible:
        assert recognize_pseudotree(p).compatible


@settings(max_examples=100, deadline=None)
@given(profiles(min_m=3, max_m=8, max_n=4))
def test_pseudotree_verdict_ignores_scan_order(p):
    base = recognize_pseudotree(p).verdict
    for seed in range(5):
        res = recognize_pseudotree(p, random.Random(seed))
        assert res.verdict is base
        assert check_witness(res, p)


def test_witnesses_are_compatible():
    rng = random.Random(11)
    for _ in range(200):
        m = rng.randint(3, 9)
        p = Profile.from_rankings(tuple(rng.sample(range(1, m + 1), m)) for _ in range(rng.randint(1, 3)))
        for fn in STRUCTURES.values():
            res = fn(p)
            if res.compatible:
                assert is_compatible(res.witness, p)
