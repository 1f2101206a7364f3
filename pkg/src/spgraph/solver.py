"""Exact minimum-edge / minimum-max-degree compatible graphs.

Traversal constraints are handled as bitmasks over the ``C(m, 2)`` edge
indices: a graph (also a bitmask) is compatible iff it intersects every
row. Branch-and-bound solves a reduced relaxation at each node in which
fixed variables are substituted out and dominated rows dropped.
"""

from __future__ import annotations

import enum
import itertools
import math
import time
from dataclasses import dataclass, field

from .lp import INT_TOL, LpModel, LpRow, LpStatus, build_lp_degree, build_lp_sp, simplex_solve
from .profile import Edge, Graph, Profile, is_compatible, necessary_edges

BRUTE_FORCE_MAX_M = 7
DEFAULT_TIME_LIMIT = 60.0


class Objective(enum.Enum):
    MIN_EDGES = "edges"
    MIN_MAX_DEGREE = "degree"


@dataclass(frozen=True)
class IlpInstance:
    profile: Profile
    objective: Objective = Objective.MIN_EDGES
    fixed_one: frozenset[Edge] = frozenset()
    fixed_zero: frozenset[Edge] = frozenset()

    def __post_init__(self) -> None:
        if self.fixed_one & self.fixed_zero:
            raise ValueError(f"edges fixed both ways: {sorted(self.fixed_one & self.fixed_zero)}")

    @classmethod
    def from_profile(cls, p: Profile, objective: Objective = Objective.MIN_EDGES) -> "IlpInstance":
        return cls(p, objective, necessary_edges(p))


@dataclass
class SolveReport:
    objective: Objective
    value: int
    witness: Graph
    nodes: int = 0
    root_bound: float | None = None
    wall_time: float = 0.0
    optimal: bool = True
    method: str = "bb"
    extra: dict = field(default_factory=dict)


def objective_value(g: Graph, objective: Objective) -> int:
    return len(g.edges) if objective is Objective.MIN_EDGES else g.max_degree()


# --- bitmask encoding -------------------------------------------------------

class _Encoding:
    def __init__(self, p: Profile):
        self.m = p.m
        self.pairs = list(itertools.combinations(range(1, p.m + 1), 2))
        self.index = {e: i for i, e in enumerate(self.pairs)}
        rows = []
        for order in p.rankings:
            for k in range(1, p.m):
                mask = 0
                for j in range(k):
                    mask |= 1 << self.index[_e(order[j], order[k])]
                rows.append(mask)
        self.rows = prune_rows(rows)
        self.incident = [0] * (p.m + 1)
        for i, (k, l) in enumerate(self.pairs):
            self.incident[k] |= 1 << i
            self.incident[l] |= 1 << i

    def mask(self, edges) -> int:
        out = 0
        for e in edges:
            out |= 1 << self.index[_e(*e)]
        return out

    def graph(self, mask: int) -> Graph:
        return Graph(self.m, frozenset(e for i, e in enumerate(self.pairs) if mask >> i & 1))

    def compatible(self, mask: int) -> bool:
        return all(r & mask for r in self.rows)

    def max_degree(self, mask: int) -> int:
        return max((bin(mask & inc).count("1") for inc in self.incident[1:]), default=0)


def _e(k: int, l: int) -> Edge:
    return (k, l) if k < l else (l, k)


def prune_rows(rows) -> list[int]:
    """Drop duplicate rows and rows containing another row (they are implied)."""
    kept: list[int] = []
    for r in sorted(set(rows), key=lambda x: (bin(x).count("1"), x)):
        if not any(k & r == k for k in kept):
            kept.append(r)
    return kept


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# --- greedy ---------------------------------------------------------------

def greedy_incumbent(p: Profile) -> Graph:
    """Necessary edges, then repeatedly the edge covering most unsatisfied rows.

    Ties prefer edges joining candidates ranked consecutively by more
    voters, then the lexicographically smallest pair.
    """
    enc = _Encoding(p)
    adjacent = [0] * len(enc.pairs)
    for order in p.rankings:
        for a, b in zip(order, order[1:]):
            adjacent[enc.index[_e(a, b)]] += 1
    chosen = enc.mask(necessary_edges(p))
    open_rows = [r for r in enc.rows if not r & chosen]
    while open_rows:
        counts: dict[int, int] = {}
        for r in open_rows:
            for i in _bits(r):
                counts[i] = counts.get(i, 0) + 1
        best = min(counts, key=lambda i: (-counts[i], -adjacent[i], i))
        chosen |= 1 << best
        open_rows = [r for r in open_rows if not r >> best & 1]
    return enc.graph(chosen)


# --- brute force ----------------------------------------------------------

def brute_force(p: Profile, objective: Objective = Objective.MIN_EDGES) -> SolveReport:
    """Exhaustive search over supersets of the necessary edges (``m <= 7``)."""
    if p.m > BRUTE_FORCE_MAX_M:
        raise ValueError(f"brute force is limited to m <= {BRUTE_FORCE_MAX_M}, got {p.m}")
    start = time.perf_counter()
    enc = _Encoding(p)
    base = enc.mask(necessary_edges(p))
    free = [i for i in range(len(enc.pairs)) if not base >> i & 1]
    best = None
    if objective is Objective.MIN_EDGES:
        for size in range(len(free) + 1):
            for combo in itertools.combinations(free, size):
                mask = base
                for i in combo:
                    mask |= 1 << i
                if enc.compatible(mask):
                    best = mask
                    break
            if best is not None:
                break
    else:
        best_key = None
        for size in range(len(free) + 1):
            for combo in itertools.combinations(free, size):
                mask = base
                for i in combo:
                    mask |= 1 << i
                if enc.compatible(mask):
                    key = enc.max_degree(mask)
                    if best_key is None or key < best_key:
                        best, best_key = mask, key
    if p.m == 1:
        best = 0
    g = enc.graph(best)
    return SolveReport(
        objective, objective_value(g, objective), g, wall_time=time.perf_counter() - start, method="brute-force"
    )


# --- branch and bound -------------------------------------------------------

def _relaxation(enc: _Encoding, objective: Objective, one: int, zero: int):
    """Reduced LP for a node, or None when some row is already unsatisfiable.

    Returns ``(model, free_indices, offset)``; the node bound is the LP value
    plus ``offset`` (edge objective) or the LP value itself (degree).
    """
    rows = []
    for r in enc.rows:
        if r & one:
            continue
        r &= ~zero
        if not r:
            return None
        rows.append(r)
    rows = prune_rows(rows)
    used = 0
    for r in rows:
        used |= r
    free = list(_bits(used))
    local = {i: j for j, i in enumerate(free)}
    pairs = tuple(enc.pairs[i] for i in free)
    names = tuple(f"x_{k}_{l}" for k, l in pairs)
    lp_rows = [LpRow(tuple((local[i], 1) for i in _bits(r)), ">=", 1, f"t{n}") for n, r in enumerate(rows)]
    nf = len(free)
    if objective is Objective.MIN_EDGES:
        model = LpModel(enc.m, pairs, names, (1,) * nf, tuple(lp_rows), (0,) * nf, (1,) * nf)
        return model, free, bin(one).count("1")
    z = nf
    for k in range(1, enc.m + 1):
        coeffs = tuple((local[i], 1) for i in _bits(enc.incident[k] & used)) + ((z, -1),)
        fixed_deg = bin(enc.incident[k] & one).count("1")
        lp_rows.append(LpRow(coeffs, "<=", -fixed_deg, f"d{k}"))
    model = LpModel(
        enc.m, pairs, names + ("z",), (0,) * nf + (1,), tuple(lp_rows), (0,) * (nf + 1), (1,) * nf + (None,)
    )
    return model, free, 0


def branch_and_bound(
    inst: IlpInstance, time_limit: float | None = DEFAULT_TIME_LIMIT, exact: bool = False
) -> SolveReport:
    """Depth-first branch-and-bound on the edge variables.

    Lower bounds come from the simplex on each node's relaxation; the
    incumbent starts from the greedy graph and is improved by rounding every
    node's LP solution up (still compatible). Branching takes the most
    fractional variable, exploring the ``x = 1`` child first.
    """
    start = time.perf_counter()
    p, objective = inst.profile, inst.objective
    enc = _Encoding(p)
    if p.m == 1:
        return SolveReport(objective, 0, Graph(1), root_bound=0)
    one0 = enc.mask(inst.fixed_one)
    zero0 = enc.mask(inst.fixed_zero)

    def value_of(mask: int) -> int:
        return bin(mask).count("1") if objective is Objective.MIN_EDGES else enc.max_degree(mask)

    incumbent = None
    greedy = enc.mask(greedy_incumbent(p).edges)
    if not greedy & zero0 and greedy & one0 == one0:
        incumbent = greedy
    elif enc.compatible(~zero0 & ((1 << len(enc.pairs)) - 1)):
        incumbent = ~zero0 & ((1 << len(enc.pairs)) - 1)
    best = value_of(incumbent) if incumbent is not None else math.inf

    nodes = 0
    root_bound = None
    optimal = True
    stack = [(one0, zero0)]
    while stack:
        if time_limit is not None and time.perf_counter() - start > time_limit:
            optimal = False
            break
        one, zero = stack.pop()
        nodes += 1
        relax = _relaxation(enc, objective, one, zero)
        if relax is None:
            continue
        model, free, offset = relax
        sol = simplex_solve(model, exact=exact)
        if sol.status is not LpStatus.OPTIMAL:
            continue
        lp_value = float(sol.objective) + offset
        if root_bound is None:
            root_bound = sol.objective + offset
        bound = math.ceil(lp_value - INT_TOL)
        if bound >= best:
            continue
        xs = [float(v) for v in sol.values[: len(free)]]
        rounded = one
        fractional = None
        for i, v in zip(free, xs):
            if v > INT_TOL:
                rounded |= 1 << i
            if INT_TOL < v < 1 - INT_TOL:
                score = abs(v - 0.5)
                if fractional is None or score < fractional[0] - 1e-12:
                    fractional = (score, i)
        val = value_of(rounded)
        if val < best:
            best, incumbent = val, rounded
        if fractional is None or bound >= best:
            continue
        i = fractional[1]
        stack.append((one, zero | 1 << i))
        stack.append((one | 1 << i, zero))

    if incumbent is None:
        raise ValueError("instance has no compatible graph under the given fixings")
    g = enc.graph(incumbent)
    if not is_compatible(g, p):
        raise AssertionError("branch-and-bound produced an incompatible graph")
    return SolveReport(
        objective,
        objective_value(g, objective),
        g,
        nodes=nodes,
        root_bound=root_bound,
        wall_time=time.perf_counter() - start,
        optimal=optimal,
    )


def solve(p: Profile, objective: Objective = Objective.MIN_EDGES, time_limit: float | None = DEFAULT_TIME_LIMIT) -> SolveReport:
    return branch_and_bound(IlpInstance.from_profile(p, objective), time_limit)


# --- export ---------------------------------------------------------------

def _lp_terms(coeffs, names) -> str:
    out = []
    for j, a in coeffs:
        sign = "-" if a < 0 else "+"
        mag = "" if abs(a) == 1 else f"{abs(a)} "
        out.append(f"{sign} {mag}{names[j]}")
    text = " ".join(out)
    return text[2:] if text.startswith("+ ") else text


def export_model(inst: IlpInstance, fmt: str = "lp") -> str:
    """CPLEX-style LP text of the full model (rows voter-major, position-minor)."""
    if fmt.lower() not in ("lp", "lp-text"):
        raise ValueError(f"unsupported export format {fmt!r}")
    p = inst.profile
    model: LpModel = build_lp_sp(p) if inst.objective is Objective.MIN_EDGES else build_lp_degree(p)
    names = model.names
    obj = [(j, c) for j, c in enumerate(model.objective) if c]
    lines = [
        f"\\ single-peaked graph model, objective {inst.objective.name}, m={p.m}, distinct rankings={len(p.entries)}",
        "Minimize",
        f" obj: {_lp_terms(obj, names)}",
        "Subject To",
    ]
    for row in model.rows:
        lines.append(f" {row.name}: {_lp_terms(row.coeffs, names)} {row.sense} {row.rhs}")
    lines.append("Bounds")
    fixed = {e: 1 for e in inst.fixed_one} | {e: 0 for e in inst.fixed_zero}
    for (k, l), name in zip(model.pairs, names):
        if (k, l) in fixed:
            lines.append(f" {name} = {fixed[(k, l)]}")
        else:
            lines.append(f" 0 <= {name} <= 1")
    if inst.objective is Objective.MIN_MAX_DEGREE:
        lines.append(" z >= 0")
    lines.append("Binary")
    edge_names = names[: len(model.pairs)]
    for i in range(0, len(edge_names), 8):
        lines.append(" " + " ".join(edge_names[i : i + 8]))
    lines.append("End")
    return "\n".join(lines) + "\n"
