import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from spgraph.ones import circular_order, consecutive_order


def _is_interval(order, s):
    idx = sorted(order.index(x) for x in s)
    return idx[-1] - idx[0] == len(idx) - 1


def _is_arc(order, s):
    n = len(order)
    if len(s) in (0, n):
        return True
    inside = [x in s for x in order]
    # an arc has exactly one entry point going round the circle
    return sum(inside[i] and not inside[i - 1] for i in range(n)) == 1


@st.composite
def families(draw, max_ground=6):
    n = draw(st.integers(1, max_ground))
    ground = list(range(1, n + 1))
    sets = draw(st.lists(st.sets(st.sampled_from(ground), min_size=1), max_size=6))
    return ground, [frozenset(s) for s in sets]


def test_simple_chain():
    order = consecutive_order([1, 2, 3, 4], [{1, 2}, {2, 3}, {3, 4}])
    assert order in ([1, 2, 3, 4], [4, 3, 2, 1])


def test_triangle_of_pairs_is_not_consecutive_but_circular():
    fam = [{1, 2}, {2, 3}, {1, 3}]
    assert consecutive_order([1, 2, 3], fam) is None
    assert circular_order([1, 2, 3], fam) is not None


@settings(max_examples=300)
@given(families())
def test_consecutive_matches_brute_force(case):
    ground, fam = case
    exists = any(all(_is_interval(list(p), s) for s in fam) for p in itertools.permutations(ground))
    order = consecutive_order(ground, fam)
    assert (order is not None) == exists
    if order is not None:
        assert sorted(order) == ground
        assert all(_is_interval(order, s) for s in fam)


@settings(max_examples=300)
@given(families())
def test_circular_matches_brute_force(case):
    ground, fam = case
    exists = any(all(_is_arc(list(p), s) for s in fam) for p in itertools.permutations(ground))
    order = circular_order(ground, fam)
    assert (order is not None) == exists
    if order is not None:
        assert sorted(order) == ground
        assert all(_is_arc(order, s) for s in fam)
