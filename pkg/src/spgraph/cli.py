"""Command-line interface: ``spgraph recognize|minimize|mallows``."""

from __future__ import annotations

import argparse
import csv
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .lp import lp_path_recognize, lp_tree_recognize
from .mallows import (
    MallowsAnalytics,
    MallowsModel,
    expected_necessary_edges_uniform,
    sample_profile,
)
from .profile import Profile, SocParseError, necessary_edges, parse_soc, serialize_soc
from .recognition import STRUCTURES, ConsistencyError, RecognitionResult
from .solver import IlpInstance, Objective, branch_and_bound, export_model

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONSISTENCY = 3

AUTO_ORDER = ("axis", "tree", "cycle", "pseudotree")
MIN_CANDIDATES = {"cycle": 3, "pseudotree": 3}
DENSITY_COLUMNS = ("theta", "n", "trials", "mean_density", "mean_necessary_density", "seed", "unproven_count")


class InputError(ValueError):
    """Bad arguments or unreadable input; maps to exit code 2."""


def _read_profile(path: str) -> Profile:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_soc(text)


def _float_grid(text: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"bad number in grid {text!r}") from exc
    if not values or any(not math.isfinite(v) or v < 0 for v in values):
        raise InputError(f"grid {text!r} must hold finite values >= 0")
    return values


def _int_grid(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"bad integer in grid {text!r}") from exc
    if not values or any(v < 1 for v in values):
        raise InputError(f"grid {text!r} must hold positive integers")
    return values


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


# --- recognize --------------------------------------------------------------

def _run_structure(p: Profile, structure: str, verify: bool) -> RecognitionResult | None:
    if p.m < MIN_CANDIDATES.get(structure, 1):
        return None
    result = STRUCTURES[structure](p)
    if verify and structure in ("tree", "axis"):
        # raises ConsistencyError when the LP route disagrees
        (lp_tree_recognize if structure == "tree" else lp_path_recognize)(p)
    return result


def _describe(result: RecognitionResult | None, structure: str, p: Profile) -> str:
    if result is None:
        return f"{structure}: not applicable for m={p.m}"
    if not result.compatible:
        return f"{structure}: INCOMPATIBLE"
    g = result.witness
    return f"{structure}: COMPATIBLE, {len(g.edges)} edges\nedges: {g.edge_list(p.labels)}"


def cmd_recognize(args) -> int:
    p = _read_profile(args.file)
    if args.structure != "auto":
        print(_describe(_run_structure(p, args.structure, args.verify), args.structure, p))
        return EXIT_OK
    first = None
    results = {}
    for structure in AUTO_ORDER:
        results[structure] = _run_structure(p, structure, args.verify)
        if first is None and results[structure] is not None and results[structure].compatible:
            first = structure
            break
    if first is None:
        print("auto: INCOMPATIBLE with axis, tree, cycle and pseudotree")
    else:
        print(f"auto: {first}")
        print(_describe(results[first], first, p))
    fallback = results.get("pseudotree") or _run_structure(p, "pseudotree", False)
    if fallback is not None and fallback.compatible:
        print(f"pseudotree fallback: {len(fallback.witness.edges)} edges")
    return EXIT_OK


# --- minimize ---------------------------------------------------------------

def cmd_minimize(args) -> int:
    p = _read_profile(args.file)
    inst = IlpInstance.from_profile(p, Objective(args.objective))
    if args.engine == "export":
        text = export_model(inst)
        out, close = _open_out(args.out)
        try:
            out.write(text)
        finally:
            if close:
                out.close()
        return EXIT_OK
    report = branch_and_bound(inst, time_limit=args.time_limit)
    print(f"objective: {inst.objective.value}")
    print(f"value: {report.value}")
    print(f"optimal: {'yes' if report.optimal else 'no (time limit)'}")
    print(f"edges: {report.witness.edge_list(p.labels)}")
    print(f"edge count: {len(report.witness.edges)}")
    print(f"nodes: {report.nodes}")
    print(f"time: {report.wall_time:.3f}s")
    return EXIT_OK


# --- mallows ----------------------------------------------------------------

def _trial(job):
    m, theta, n, seed_seq, time_limit = job
    rng = np.random.default_rng(seed_seq)
    p = sample_profile(MallowsModel(m, theta), n, rng)
    report = branch_and_bound(IlpInstance.from_profile(p), time_limit=time_limit)
    pairs = m * (m - 1) / 2
    return len(report.witness.edges) / pairs, len(necessary_edges(p)) / pairs, report.optimal


def density_rows(m, thetas, ns, trials, seed, time_limit=None, jobs=1):
    """One row per ``(theta, n)`` point; trial seeds are spawned from ``seed``."""
    points = [(theta, n) for theta in thetas for n in ns]
    jobs_list = []
    for idx, (theta, n) in enumerate(points):
        children = np.random.SeedSequence(seed, spawn_key=(idx,)).spawn(trials)
        jobs_list.extend((m, theta, n, child, time_limit) for child in children)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_trial, jobs_list, chunksize=max(1, trials // jobs)))
    else:
        outcomes = [_trial(job) for job in jobs_list]
    rows = []
    for idx, (theta, n) in enumerate(points):
        chunk = outcomes[idx * trials : (idx + 1) * trials]
        rows.append({
            "theta": theta,
            "n": n,
            "trials": trials,
            "mean_density": math.fsum(c[0] for c in chunk) / trials,
            "mean_necessary_density": math.fsum(c[1] for c in chunk) / trials,
            "seed": seed,
            "unproven_count": sum(not c[2] for c in chunk),
        })
    return rows


def expected_rows(m, thetas, ns):
    pairs = m * (m - 1) / 2
    rows = []
    for theta in thetas:
        analytics = MallowsAnalytics(MallowsModel(m, theta))
        probs = analytics.pair_probabilities()
        for n in ns:
            value = analytics.expected_necessary_edges(n, probs)
            rows.append({
                "theta": theta,
                "n": n,
                "m": m,
                "expected_necessary_edges": value,
                "expected_necessary_density": value / pairs,
                "uniform_closed_form": expected_necessary_edges_uniform(m, n) if theta == 0 else "",
            })
    return rows


def _write_csv(rows, columns, path):
    out, close = _open_out(path)
    try:
        writer = csv.DictWriter(out, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    finally:
        if close:
            out.close()


def cmd_mallows(args) -> int:
    if args.m < 2:
        raise InputError("--m must be at least 2")
    thetas = _float_grid(args.theta)
    ns = _int_grid(args.n)
    if args.action == "sample":
        if len(thetas) != 1 or len(ns) != 1:
            raise InputError("sample takes a single --theta and a single --n")
        p = sample_profile(MallowsModel(args.m, thetas[0], seed=args.seed), ns[0])
        out, close = _open_out(args.out)
        try:
            out.write(serialize_soc(p, title=f"Mallows m={args.m} theta={thetas[0]} seed={args.seed}"))
        finally:
            if close:
                out.close()
    elif args.action == "expected":
        rows = expected_rows(args.m, thetas, ns)
        _write_csv(rows, list(rows[0]), args.out)
    else:
        if args.trials < 1:
            raise InputError("--trials must be positive")
        rows = density_rows(args.m, thetas, ns, args.trials, args.seed, args.time_limit, args.jobs)
        _write_csv(rows, DENSITY_COLUMNS, args.out)
    return EXIT_OK


# --- wiring -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spgraph", description="Single-peaked preferences on graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    rec = sub.add_parser("recognize", help="test a profile against a graph structure")
    rec.add_argument("file", help=".soc file, or - for stdin")
    rec.add_argument("--structure", choices=[*AUTO_ORDER, "auto"], default="auto")
    rec.add_argument("--verify", action="store_true", help="cross-check tree/axis verdicts with the LP route")
    rec.set_defaults(func=cmd_recognize)

    mini = sub.add_parser("minimize", help="smallest compatible graph")
    mini.add_argument("file", help=".soc file, or - for stdin")
    mini.add_argument("--objective", choices=[o.value for o in Objective], default="edges")
    mini.add_argument("--engine", choices=["bb", "export"], default="bb")
    mini.add_argument("--time-limit", type=float, default=60.0)
    mini.add_argument("--out", help="output path for --engine export (default stdout)")
    mini.set_defaults(func=cmd_minimize)

    mal = sub.add_parser("mallows", help="Mallows sampling and density experiments")
    mal.add_argument("action", choices=["sample", "expected", "density-experiment"])
    mal.add_argument("--m", type=int, default=10)
    mal.add_argument("--n", default="20", help="voter count or comma-separated grid")
    mal.add_argument("--theta", default="0", help="dispersion or comma-separated grid")
    mal.add_argument("--trials", type=int, default=100)
    mal.add_argument("--seed", type=int, default=0)
    mal.add_argument("--time-limit", type=float, default=60.0)
    mal.add_argument("--jobs", type=int, default=1, help="worker processes for density-experiment")
    mal.add_argument("--out", help="output path (default stdout)")
    mal.set_defaults(func=cmd_mallows)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConsistencyError as exc:
        print(f"internal consistency violation: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (InputError, SocParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
