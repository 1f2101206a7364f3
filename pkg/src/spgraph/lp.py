"""Linear programs over edge variables and a small bounded-variable simplex.

The simplex keeps a dense tableau in a numpy array. In exact mode the array
holds rationals (``gmpy2.mpq`` when installed, ``fractions.Fraction``
otherwise) and every comparison is exact, so integrality of a vertex can be
asserted without tolerances. Float mode uses the same code path with
tolerances.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .profile import Edge, Graph, Profile
from .recognition import ConsistencyError, RecognitionResult, Verdict, recognize_path, recognize_tree

try:
    from gmpy2 import mpq as _rational
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _rational = Fraction

FEAS_TOL = 1e-9
INT_TOL = 1e-6
DEGENERATE_STREAK = 50


class LpStatus(enum.Enum):
    OPTIMAL = "OPTIMAL"
    INFEASIBLE = "INFEASIBLE"
    UNBOUNDED = "UNBOUNDED"


@dataclass(frozen=True)
class LpRow:
    coeffs: tuple[tuple[int, int], ...]
    sense: str
    rhs: int
    name: str = ""

    def __post_init__(self) -> None:
        if self.sense not in (">=", "<=", "="):
            raise ValueError(f"unknown row sense {self.sense!r}")


@dataclass(frozen=True)
class LpModel:
    """Minimization model. The first ``len(pairs)`` variables are edge variables."""

    m: int
    pairs: tuple[Edge, ...]
    names: tuple[str, ...]
    objective: tuple[int, ...]
    rows: tuple[LpRow, ...]
    lower: tuple[int, ...]
    upper: tuple[int | None, ...]

    @property
    def num_vars(self) -> int:
        return len(self.names)

    def index(self, k: int, l: int) -> int:
        return pair_index(self.m, k, l)

    def with_bounds(self, fixed: dict[int, int]) -> "LpModel":
        lower, upper = list(self.lower), list(self.upper)
        for j, v in fixed.items():
            lower[j] = upper[j] = v
        return replace(self, lower=tuple(lower), upper=tuple(upper))

    def traversal_rows(self) -> list[LpRow]:
        return [r for r in self.rows if r.name.startswith("t")]


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    values: tuple = ()
    objective: object = None
    basis: tuple[str, ...] = ()
    exact: bool = True
    pivots: int = 0

    def edge_values(self, model: LpModel) -> dict[Edge, object]:
        return dict(zip(model.pairs, self.values[: len(model.pairs)]))

    def is_integral(self, model: LpModel | None = None) -> bool:
        vals = self.values if model is None else self.values[: len(model.pairs)]
        if self.exact:
            return all(Fraction(v).denominator == 1 for v in vals)
        return all(abs(v - round(v)) <= INT_TOL for v in vals)

    def support(self, model: LpModel) -> Graph:
        cut = 0 if self.exact else INT_TOL
        return Graph(model.m, frozenset(e for e, v in self.edge_values(model).items() if v > cut))


def pair_index(m: int, k: int, l: int) -> int:
    if k > l:
        k, l = l, k
    # pairs enumerated lexicographically: (1,2),(1,3),...,(1,m),(2,3),...
    return (k - 1) * m - (k - 1) * k // 2 + (l - k - 1)


def _edge_vars(m: int) -> tuple[tuple[Edge, ...], tuple[str, ...]]:
    pairs = tuple(itertools.combinations(range(1, m + 1), 2))
    return pairs, tuple(f"x_{k}_{l}" for k, l in pairs)


def traversal_rows(p: Profile) -> list[LpRow]:
    rows = []
    for v, order in enumerate(p.rankings, start=1):
        for k in range(1, p.m):
            c = order[k]
            coeffs = tuple(sorted((pair_index(p.m, order[j], c), 1) for j in range(k)))
            rows.append(LpRow(coeffs, ">=", 1, f"t{v}_{k + 1}"))
    return rows


def _degree_rows(m: int, bound: int | None, z: int | None) -> list[LpRow]:
    rows = []
    for k in range(1, m + 1):
        coeffs = [(pair_index(m, k, l), 1) for l in range(1, m + 1) if l != k]
        if z is None:
            rows.append(LpRow(tuple(coeffs), "<=", bound, f"d{k}"))
        else:
            rows.append(LpRow(tuple(coeffs + [(z, -1)]), "<=", 0, f"d{k}"))
    return rows


def build_lp_sp(p: Profile) -> LpModel:
    """Minimum-edge relaxation: one covering row per (distinct ranking, position)."""
    if p.m < 2:
        raise ValueError("need at least two candidates")
    pairs, names = _edge_vars(p.m)
    n = len(pairs)
    return LpModel(p.m, pairs, names, (1,) * n, tuple(traversal_rows(p)), (0,) * n, (1,) * n)


def build_lp_sp2(p: Profile) -> LpModel:
    """``build_lp_sp`` plus a degree-at-most-2 row per candidate."""
    base = build_lp_sp(p)
    return replace(base, rows=base.rows + tuple(_degree_rows(p.m, 2, None)))


def build_lp_degree(p: Profile) -> LpModel:
    """Min-max-degree relaxation with the auxiliary bound variable ``z`` last."""
    if p.m < 2:
        raise ValueError("need at least two candidates")
    pairs, names = _edge_vars(p.m)
    n = len(pairs)
    rows = traversal_rows(p) + _degree_rows(p.m, None, n)
    return LpModel(
        p.m, pairs, names + ("z",), (0,) * n + (1,), tuple(rows), (0,) * (n + 1), (1,) * n + (None,)
    )


# --- simplex --------------------------------------------------------------

class _Tableau:
    """Bounded-variable primal simplex on ``T x = beta`` with basis ``basis``.

    Nonbasic variables sit at 0 or at their upper bound (``at_upper``).
    Lower bounds are shifted to zero before construction.
    """

    def __init__(self, T, beta, basis, upper, exact: bool):
        self.T = T
        self.beta = beta
        self.basis = basis
        self.upper = upper  # None for +inf
        self.at_upper = [False] * T.shape[1]
        self.exact = exact
        self.zero = _rational(0) if exact else 0.0
        self.tol = 0 if exact else FEAS_TOL
        self.pivots = 0

    def _reduced_costs(self, cost):
        cb = np.array([cost[j] for j in self.basis], dtype=self.T.dtype)
        c = np.array(cost, dtype=self.T.dtype)
        if len(self.basis):
            return c - cb @ self.T
        return c

    def optimize(self, cost, allowed) -> LpStatus:
        d = self._reduced_costs(cost)
        tol = self.tol
        bland = False
        streak = 0
        in_basis = set(self.basis)
        while True:
            q = None
            best = self.zero
            for j in allowed:
                if j in in_basis:
                    continue
                dj = d[j]
                if self.at_upper[j]:
                    if dj > tol and (q is None or not bland and dj > best):
                        q, best = j, dj
                elif dj < -tol and (q is None or not bland and -dj > best):
                    q, best = j, -dj
                if bland and q is not None:
                    break
            if q is None:
                return LpStatus.OPTIMAL
            direction = -1 if self.at_upper[q] else 1
            alpha = self.T[:, q] * direction
            step, leave = self.upper[q], None
            for i in range(len(self.basis)):
                a = alpha[i]
                if a > tol:
                    t = self.beta[i] / a
                elif a < -tol and self.upper[self.basis[i]] is not None:
                    t = (self.upper[self.basis[i]] - self.beta[i]) / (-a)
                else:
                    continue
                if step is None or t < step or (
                    t == step and leave is not None and self.basis[i] < self.basis[leave]
                ):
                    step, leave = t, i
            if step is None:
                return LpStatus.UNBOUNDED
            if not self.exact and step < 0:
                step = 0.0
            streak = streak + 1 if step == 0 else 0
            if streak >= DEGENERATE_STREAK:
                bland = True
            if len(self.basis):
                self.beta = self.beta - alpha * step
            if leave is None:
                self.at_upper[q] = not self.at_upper[q]
                continue
            entering_value = self.upper[q] - step if self.at_upper[q] else step
            out = self.basis[leave]
            self.at_upper[out] = alpha[leave] < 0
            self.at_upper[q] = False
            self._pivot(leave, q)
            self.beta[leave] = entering_value
            in_basis.discard(out)
            in_basis.add(q)
            d = d - d[q] * self.T[leave]
            self.pivots += 1

    def _pivot(self, r: int, q: int) -> None:
        T = self.T
        T[r] = T[r] / T[r, q]
        rows = np.nonzero(T[:, q])[0]
        rows = rows[rows != r]
        if len(rows):
            cols = np.nonzero(T[r])[0]
            T[np.ix_(rows, cols)] -= np.outer(T[rows, q], T[r, cols])
        if not self.exact:
            T[rows, q] = 0.0
        self.basis[r] = q

    def value(self, j: int):
        if j in self.basis:
            return self.beta[self.basis.index(j)]
        return self.upper[j] if self.at_upper[j] else self.zero


def simplex_solve(model: LpModel, exact: bool = True) -> LpSolution:
    """Optimal basic solution of ``model`` by two-phase bounded simplex.

    Entering variables follow the largest reduced cost until a long run of
    degenerate pivots, after which Bland's rule takes over for good.
    """
    num = _rational if exact else float
    dtype = object if exact else float
    nv = model.num_vars
    lower = [num(v) for v in model.lower]
    upper = [None if model.upper[j] is None else num(model.upper[j]) - lower[j] for j in range(nv)]
    if any(u is not None and u < 0 for u in upper):
        return LpSolution(LpStatus.INFEASIBLE, exact=exact)

    rows = model.rows
    R = len(rows)
    n_slack = sum(1 for r in rows if r.sense != "=")
    cols = nv + n_slack
    A = np.full((R, cols), num(0), dtype=dtype)
    rhs = []
    basic_candidate = []
    s = nv
    for i, row in enumerate(rows):
        b = num(row.rhs)
        for j, a in row.coeffs:
            A[i, j] += num(a)
            b -= num(a) * lower[j]
        rhs.append(b)
        if row.sense == "=":
            basic_candidate.append(None)
        else:
            A[i, s] = num(-1 if row.sense == ">=" else 1)
            basic_candidate.append(s)
            s += 1

    # initial basis: slack where it is feasible at zero, artificial otherwise
    basis = []
    artificials = []
    extra_cols = []
    for i in range(R):
        sc = basic_candidate[i]
        if sc is not None and A[i, sc] * rhs[i] >= 0:
            if A[i, sc] < 0:
                A[i] = -A[i]
                rhs[i] = -rhs[i]
            basis.append(sc)
        else:
            if rhs[i] < 0:
                A[i] = -A[i]
                rhs[i] = -rhs[i]
            artificials.append(cols + len(extra_cols))
            extra_cols.append(i)
            basis.append(artificials[-1])
    if extra_cols:
        art = np.full((R, len(extra_cols)), num(0), dtype=dtype)
        for c, i in enumerate(extra_cols):
            art[i, c] = num(1)
        A = np.hstack([A, art])
    total = A.shape[1]
    tab = _Tableau(A, np.array(rhs, dtype=dtype).reshape(R), basis, upper + [None] * (total - nv), exact)

    if artificials:
        phase1 = [num(0)] * total
        for j in artificials:
            phase1[j] = num(1)
        allowed = range(cols)
        tab.optimize(phase1, allowed)
        infeas = sum((tab.value(j) for j in artificials), num(0))
        if infeas > tab.tol * max(1, R):
            return LpSolution(LpStatus.INFEASIBLE, exact=exact, pivots=tab.pivots)
        art_set = set(artificials)
        drop_rows = []
        for r in range(R):
            if tab.basis[r] in art_set:
                candidates = [j for j in range(cols) if j not in tab.basis and abs(tab.T[r, j]) > tab.tol]
                if candidates:
                    j = candidates[0]
                    value = tab.value(j)
                    tab._pivot(r, j)
                    tab.beta[r] = value
                else:
                    drop_rows.append(r)
        keep = [r for r in range(R) if r not in drop_rows]
        tab.T = tab.T[keep][:, :cols]
        tab.beta = tab.beta[keep]
        tab.basis = [tab.basis[r] for r in keep]
        tab.upper = tab.upper[:cols]
        tab.at_upper = tab.at_upper[:cols]

    cost = [num(c) for c in model.objective] + [num(0)] * (cols - nv)
    status = tab.optimize(cost, range(cols))
    if status is not LpStatus.OPTIMAL:
        return LpSolution(status, exact=exact, pivots=tab.pivots)
    values = []
    for j in range(nv):
        v = tab.value(j) + lower[j]
        values.append(Fraction(int(v.numerator), int(v.denominator)) if exact else float(v))
    objective = sum((c * v for c, v in zip(model.objective, values)), Fraction(0) if exact else 0.0)
    names = model.names + tuple(f"s{i}" for i in range(n_slack))
    basis_names = tuple(names[j] for j in tab.basis)
    return LpSolution(status, tuple(values), objective, basis_names, exact, tab.pivots)


# --- LP-based recognition --------------------------------------------------

def _lp_recognize(p: Profile, model: LpModel, structure: str, combinatorial, exact: bool) -> RecognitionResult:
    sol = simplex_solve(model, exact=exact)
    reference = combinatorial(p)
    if sol.status is LpStatus.INFEASIBLE and structure == "axis":
        # degree rows can cut off every graph; that is a plain "no"
        if reference.compatible:
            raise ConsistencyError("axis: degree-bounded relaxation infeasible on an axis-compatible profile")
        return RecognitionResult(Verdict.INCOMPATIBLE, structure, notes={"lp_status": sol.status})
    if sol.status is not LpStatus.OPTIMAL:
        raise ConsistencyError(f"relaxation for a valid profile returned {sol.status.value}")
    integral = sol.is_integral(model)
    value = sol.objective
    hit = integral and (value == p.m - 1 if exact else abs(value - (p.m - 1)) <= INT_TOL)
    if hit != reference.compatible:
        raise ConsistencyError(
            f"{structure}: LP route says {'compatible' if hit else 'incompatible'} "
            f"(value {value}, integral={integral}), combinatorial route disagrees"
        )
    notes = {"lp_value": value, "integral": integral, "solution": sol}
    if not hit:
        return RecognitionResult(Verdict.INCOMPATIBLE, structure, notes=notes)
    return RecognitionResult(Verdict.COMPATIBLE, structure, sol.support(model), reference.certificate, notes)


def lp_tree_recognize(p: Profile, exact: bool = True) -> RecognitionResult:
    """Tree recognition from a vertex of the minimum-edge relaxation.

    Compatible exactly when the vertex is integral with value ``m - 1``. The
    leaf-elimination verdict is computed alongside and any disagreement
    raises :class:`ConsistencyError`.
    """
    if p.m == 1:
        return RecognitionResult(Verdict.COMPATIBLE, "tree", Graph(1))
    return _lp_recognize(p, build_lp_sp(p), "tree", recognize_tree, exact)


def lp_path_recognize(p: Profile, exact: bool = True) -> RecognitionResult:
    if p.m == 1:
        return RecognitionResult(Verdict.COMPATIBLE, "axis", Graph(1))
    return _lp_recognize(p, build_lp_sp2(p), "axis", recognize_path, exact)


def row_activity(model: LpModel, values: Sequence, row: LpRow):
    return sum(a * values[j] for j, a in row.coeffs)
