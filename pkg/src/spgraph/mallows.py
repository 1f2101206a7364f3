"""Mallows rankings: sampling and exact necessary-edge analytics.

Distance counts ``N[i][d]`` (permutations of length ``i`` at Kendall
distance ``d`` from a fixed one) are exact Python integers. Probabilities are
evaluated in log space so large ``theta * d`` never underflows mid-sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .profile import Profile, Ranking


@dataclass(frozen=True)
class MallowsModel:
    m: int
    theta: float
    central: tuple[int, ...] | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("m must be positive")
        if not self.theta >= 0:
            raise ValueError(f"theta must be >= 0, got {self.theta}")
        central = tuple(range(1, self.m + 1)) if self.central is None else tuple(self.central)
        if Ranking(central).m != self.m:
            raise ValueError("central ranking has the wrong length")
        object.__setattr__(self, "central", central)


def kendall_tau(a: Sequence[int], b: Sequence[int]) -> int:
    """Number of candidate pairs ordered differently by ``a`` and ``b``."""
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        raise ValueError(f"rankings of different lengths {len(a)} and {len(b)}")
    if sorted(a) != sorted(b):
        raise ValueError("rankings are over different candidates")
    pos = {c: i for i, c in enumerate(b)}
    seq = [pos[c] for c in a]
    return _count_inversions(seq)


def _count_inversions(seq: list[int]) -> int:
    if len(seq) < 2:
        return 0
    mid = len(seq) // 2
    left, right = seq[:mid], seq[mid:]
    inv = _count_inversions(left) + _count_inversions(right)
    left.sort()
    right.sort()
    i = 0
    for x in right:
        while i < len(left) and left[i] <= x:
            i += 1
        inv += len(left) - i
    return inv


@dataclass(frozen=True)
class DistanceCountTable:
    """``counts[i][d]`` for ``0 <= i <= m`` and ``0 <= d <= i(i-1)/2``."""

    m: int
    counts: tuple[tuple[int, ...], ...]

    def __call__(self, i: int, d: int) -> int:
        row = self.counts[i]
        return row[d] if 0 <= d < len(row) else 0


@lru_cache(maxsize=None)
def distance_counts(m: int) -> DistanceCountTable:
    """Fill ``N[i][d] = sum_{s=0}^{min(d, i-1)} N[i-1][d-s]`` from ``N[i][0] = 1``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    rows = [(1,)]
    for i in range(1, m + 1):
        prev = rows[-1]
        top = i * (i - 1) // 2
        row = []
        for d in range(top + 1):
            row.append(sum(prev[d - s] for s in range(min(d, i - 1) + 1) if d - s < len(prev)))
        rows.append(tuple(row))
    return DistanceCountTable(m, tuple(rows))


def _log_weighted_sum(terms) -> float:
    """log of sum_k N_k exp(-theta d_k) for (N_k, theta*d_k) pairs with N_k > 0."""
    terms = [(math.log(c), -e) for c, e in terms if c > 0]
    if not terms:
        return -math.inf
    top = max(lc + le for lc, le in terms)
    return top + math.log(math.fsum(math.exp(lc + le - top) for lc, le in terms))


def log_psi(theta: float, m: int, table: DistanceCountTable | None = None) -> float:
    table = table or distance_counts(m)
    return _log_weighted_sum((c, theta * d) for d, c in enumerate(table.counts[m]))


def psi(theta: float, m: int, table: DistanceCountTable | None = None) -> float:
    """Normalising constant ``sum_d N[m][d] exp(-theta d)``."""
    if theta < 0:
        raise ValueError("theta must be >= 0")
    return math.exp(log_psi(theta, m, table))


def first_two_references(central: Sequence[int], j: int, k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``(j, k, rest)`` and ``(k, j, rest)`` with the rest in central order."""
    rest = tuple(c for c in central if c not in (j, k))
    return (j, k) + rest, (k, j) + rest


class MallowsAnalytics:
    """Pair probabilities for one model, sharing one distance-count table."""

    def __init__(self, model: MallowsModel, table: DistanceCountTable | None = None):
        self.model = model
        self.table = table if table is not None and table.m >= model.m else distance_counts(model.m)
        self.log_psi = log_psi(model.theta, model.m, self.table)

    def pair_count(self, j: int, k: int, d: int) -> int:
        """Permutations with ``{j, k}`` on top at distance ``d`` from the centre."""
        r1, r2 = first_two_references(self.model.central, j, k)
        d1, d2 = kendall_tau(self.model.central, r1), kendall_tau(self.model.central, r2)
        m2 = self.model.m - 2
        return self.table(m2, d - d1) + self.table(m2, d - d2)

    def prob_first_two(self, j: int, k: int) -> float:
        m, theta = self.model.m, self.model.theta
        if j == k:
            raise ValueError("j and k must differ")
        if not (1 <= j <= m and 1 <= k <= m):
            raise ValueError(f"candidates must lie in 1..{m}")
        central = self.model.central
        r1, r2 = first_two_references(central, j, k)
        d1, d2 = kendall_tau(central, r1), kendall_tau(central, r2)
        m2 = m - 2
        top = m * (m - 1) // 2
        terms = []
        for d in range(top + 1):
            count = self.table(m2, d - d1) + self.table(m2, d - d2)
            if count:
                terms.append((count, theta * d))
        return math.exp(_log_weighted_sum(terms) - self.log_psi)

    def pair_probabilities(self) -> dict[tuple[int, int], float]:
        m = self.model.m
        return {(j, k): self.prob_first_two(j, k) for j in range(1, m + 1) for k in range(j + 1, m + 1)}

    def expected_necessary_edges(self, n: int, probs: dict | None = None) -> float:
        if n < 1:
            raise ValueError("n must be >= 1")
        probs = probs or self.pair_probabilities()
        m = self.model.m
        missing = math.fsum(_none_of_n(p, n) for p in probs.values())
        return m * (m - 1) / 2 - missing


def _none_of_n(p: float, n: int) -> float:
    if p >= 1.0:
        return 0.0
    return math.exp(n * math.log1p(-p))


def prob_first_two(model: MallowsModel, j: int, k: int, table: DistanceCountTable | None = None) -> float:
    """Probability that a Mallows draw ranks ``j`` and ``k`` in its top two."""
    return MallowsAnalytics(model, table).prob_first_two(j, k)


def prob_necessary(model: MallowsModel, j: int, k: int, n: int) -> float:
    """Probability that ``{j, k}`` is a necessary edge among ``n`` voters."""
    return 1.0 - _none_of_n(prob_first_two(model, j, k), n)


def expected_necessary_edges(model: MallowsModel, n: int) -> float:
    return MallowsAnalytics(model).expected_necessary_edges(n)


def expected_necessary_edges_uniform(m: int, n: int) -> float:
    """Closed form at ``theta = 0``: ``C(m,2) (1 - exp(-alpha n))``."""
    pairs = m * (m - 1) / 2
    alpha = -math.log1p(-1 / pairs)
    return pairs * -math.expm1(-alpha * n)


# --- sampling -------------------------------------------------------------

def sample_rankings(model: MallowsModel, n: int, rng: np.random.Generator | None = None) -> np.ndarray:
    """``n`` Mallows draws as an ``(n, m)`` array, by repeated insertion.

    The ``i``-th central item is inserted so that it jumps ahead of ``v`` of
    the ``i - 1`` items already placed, with ``P(v) ~ exp(-theta v)``; the
    Kendall distance is the sum of the jumps.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = rng if rng is not None else np.random.default_rng(model.seed)
    m = model.m
    pos = np.zeros((n, m), dtype=np.int64)
    for i in range(1, m):
        w = np.exp(-model.theta * np.arange(i + 1))
        jumps = rng.choice(i + 1, size=n, p=w / w.sum())
        slot = i - jumps
        placed = pos[:, :i]
        placed += placed >= slot[:, None]
        pos[:, i] = slot
    central = np.asarray(model.central)
    return central[np.argsort(pos, axis=1)]


def sample_profile(model: MallowsModel, n: int, rng: np.random.Generator | None = None) -> Profile:
    draws = sample_rankings(model, n, rng)
    return Profile.from_rankings(tuple(int(c) for c in row) for row in draws)
