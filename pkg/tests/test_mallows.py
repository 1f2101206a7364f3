import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare

from oracles import mallows_enumeration, naive_kendall, top_two_probability
from spgraph.mallows import (
    MallowsAnalytics,
    MallowsModel,
    distance_counts,
    expected_necessary_edges,
    expected_necessary_edges_uniform,
    first_two_references,
    kendall_tau,
    prob_first_two,
    prob_necessary,
    psi,
    sample_profile,
    sample_rankings,
)


def _distances(draws: np.ndarray, central) -> np.ndarray:
    rank = {c: i for i, c in enumerate(central)}
    pos = np.vectorize(rank.get)(draws)
    m = draws.shape[1]
    return sum((pos[:, i] > pos[:, j]).astype(np.int64) for i, j in itertools.combinations(range(m), 2))


@given(st.permutations(list(range(1, 9))), st.permutations(list(range(1, 9))))
def test_kendall_matches_pair_count(a, b):
    assert kendall_tau(a, b) == naive_kendall(a, b)
    assert kendall_tau(a, b) == kendall_tau(b, a)


def test_kendall_guards():
    assert kendall_tau((1, 2, 3), (3, 2, 1)) == 3
    with pytest.raises(ValueError):
        kendall_tau((1, 2), (1, 2, 3))
    with pytest.raises(ValueError):
        kendall_tau((1, 2, 3), (1, 2, 4))


def test_distance_counts():
    table = distance_counts(6)
    assert table.counts[3] == (1, 2, 2, 1)
    assert table.counts[4] == (1, 3, 5, 6, 5, 3, 1)
    for i in range(7):
        row = table.counts[i]
        assert sum(row) == math.factorial(i)
        assert row == row[::-1]
    assert table(2, -1) == 0 and table(2, 5) == 0
    big = distance_counts(30).counts[30]
    assert sum(big) == math.factorial(30)


@pytest.mark.parametrize("m, theta", [(1, 0.3), (4, 0.0), (5, 0.7), (6, 2.5)])
def test_psi_matches_enumeration(m, theta):
    _, weights = mallows_enumeration(m, theta)
    assert psi(theta, m) == pytest.approx(math.fsum(weights), rel=1e-12)


def test_psi_survives_large_exponents():
    assert psi(800.0, 10) == pytest.approx(1.0)
    assert math.isfinite(math.log(psi(0.0, 30)))


def test_reference_rankings():
    assert first_two_references((3, 1, 4, 2), 4, 2) == ((4, 2, 3, 1), (2, 4, 3, 1))


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("theta", [0.0, 0.4, 1.3])
def test_top_two_matches_enumeration(m, theta):
    central = tuple(reversed(range(1, m + 1))) if m % 2 else None
    model = MallowsModel(m, theta, central)
    analytics = MallowsAnalytics(model)
    for j, k in itertools.combinations(range(1, m + 1), 2):
        expected = top_two_probability(m, theta, j, k, model.central)
        assert abs(analytics.prob_first_two(j, k) - expected) <= 1e-12
        assert prob_first_two(model, k, j) == pytest.approx(expected, abs=1e-12)


def test_pair_count_table():
    model = MallowsModel(5, 0.0)
    analytics = MallowsAnalytics(model)
    perms, _ = mallows_enumeration(5, 0.0)
    for j, k in [(1, 2), (2, 5), (3, 4)]:
        for d in range(11):
            brute = sum(1 for p in perms if {p[0], p[1]} == {j, k} and naive_kendall(model.central, p) == d)
            assert analytics.pair_count(j, k, d) == brute


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 30), st.floats(0, 5))
def test_pair_probabilities_sum_to_one(m, theta):
    total = math.fsum(MallowsAnalytics(MallowsModel(m, theta)).pair_probabilities().values())
    assert abs(total - 1) <= 1e-12


@pytest.mark.parametrize("m", [5, 10, 20])
def test_uniform_closed_form(m):
    analytics = MallowsAnalytics(MallowsModel(m, 0.0))
    probs = analytics.pair_probabilities()
    for n in (1, 2, 7, 50, 300, 1000):
        exact = analytics.expected_necessary_edges(n, probs)
        assert exact == pytest.approx(expected_necessary_edges_uniform(m, n), rel=1e-9)


def test_expectations_behave():
    model = MallowsModel(6, 1.0)
    values = [expected_necessary_edges(model, n) for n in (1, 5, 25, 125)]
    assert values == sorted(values) and values[0] == pytest.approx(1.0)
    assert expected_necessary_edges(MallowsModel(2, 3.0), 4) == 1.0
    assert prob_necessary(model, 1, 2, 1) == pytest.approx(prob_first_two(model, 1, 2))
    with pytest.raises(ValueError):
        expected_necessary_edges(model, 0)


def test_model_validation():
    with pytest.raises(ValueError):
        MallowsModel(4, -0.1)
    with pytest.raises(ValueError):
        MallowsModel(4, 1.0, (1, 2, 3))
    with pytest.raises(ValueError):
        MallowsAnalytics(MallowsModel(4, 1.0)).prob_first_two(2, 2)


# --- sampler ------------------------------------------------------------------

def test_sampler_is_seeded():
    model = MallowsModel(7, 0.8, seed=12)
    assert np.array_equal(sample_rankings(model, 50), sample_rankings(model, 50))
    assert sample_profile(model, 30) == sample_profile(model, 30)
    assert sample_profile(model, 30).n == 30


def test_concentrated_sampler_returns_the_centre():
    central = (4, 2, 7, 1, 6, 3, 5)
    draws = sample_rankings(MallowsModel(7, 50.0, central, seed=1), 10_000)
    assert _distances(draws, central).mean() < 0.01


def test_uniform_sampler_chi_square():
    draws = sample_rankings(MallowsModel(4, 0.0, seed=2), 100_000)
    perms = {p: i for i, p in enumerate(itertools.permutations(range(1, 5)))}
    counts = np.bincount([perms[tuple(r)] for r in draws.tolist()], minlength=24)
    assert chisquare(counts).pvalue > 1e-3


def test_mean_distance_within_three_standard_errors():
    m, theta, n = 5, 0.7, 1_000_000
    perms, weights = mallows_enumeration(m, theta)
    z = math.fsum(weights)
    d = [naive_kendall(tuple(range(1, m + 1)), p) for p in perms]
    mean = math.fsum(w * x for w, x in zip(weights, d)) / z
    var = math.fsum(w * (x - mean) ** 2 for w, x in zip(weights, d)) / z
    sample = _distances(sample_rankings(MallowsModel(m, theta, seed=3), n), tuple(range(1, m + 1)))
    assert abs(sample.mean() - mean) <= 3 * math.sqrt(var / n)


def test_top_two_frequencies():
    model = MallowsModel(5, 0.6, (2, 5, 1, 4, 3), seed=8)
    n = 200_000
    draws = sample_rankings(model, n)
    analytics = MallowsAnalytics(model)
    top = np.sort(draws[:, :2], axis=1)
    for j, k in itertools.combinations(range(1, 6), 2):
        p = analytics.prob_first_two(j, k)
        freq = np.mean((top[:, 0] == j) & (top[:, 1] == k))
        assert abs(freq - p) <= 4 * math.sqrt(p * (1 - p) / n)
