"""Polynomial recognition of single-peakedness on axes, trees, cycles and pseudotrees."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .ones import circular_order, consecutive_order
from .profile import Edge, Graph, Profile, edge, is_compatible

Order = tuple[int, ...]


class Verdict(enum.Enum):
    COMPATIBLE = "COMPATIBLE"
    INCOMPATIBLE = "INCOMPATIBLE"

    def __bool__(self) -> bool:
        return self is Verdict.COMPATIBLE


class ConsistencyError(RuntimeError):
    """Two independent recognition routes disagreed."""


@dataclass(frozen=True)
class EliminationStep:
    candidate: int
    attachment: frozenset[int]
    edge: Edge | None


@dataclass(frozen=True)
class EliminationCertificate:
    steps: tuple[EliminationStep, ...]
    core: tuple[int, ...]
    failed: int | None = None

    @property
    def complete(self) -> bool:
        return self.failed is None and len(self.core) <= 1

    def attachment_sets(self) -> dict[int, frozenset[int]]:
        return {s.candidate: s.attachment for s in self.steps}

    def elimination_order(self) -> list[int]:
        """Removed candidates, first removed first, followed by the core."""
        return [s.candidate for s in self.steps] + list(self.core)


@dataclass(frozen=True)
class RecognitionResult:
    verdict: Verdict
    structure: str
    witness: Graph | None = None
    certificate: EliminationCertificate | None = None
    notes: dict = field(default_factory=dict, compare=False)

    @property
    def compatible(self) -> bool:
        return self.verdict is Verdict.COMPATIBLE


# --- restricted-profile helpers -------------------------------------------

def _restrict(rankings: Iterable[Order], removed: int) -> list[Order]:
    return list(dict.fromkeys(tuple(c for c in r if c != removed) for r in rankings))


def _a_set(rankings: Sequence[Order], k: int) -> frozenset[int]:
    acc: set[int] | None = None
    for r in rankings:
        p = r.index(k)
        mine = {r[1]} if p == 0 else set(r[:p])
        acc = mine if acc is None else acc & mine
        if not acc:
            break
    return frozenset(acc or ())


def a_set(p: Profile, k: int) -> frozenset[int]:
    """Candidates that ``k`` can hang from as a leaf.

    Intersection over voters of the candidates ranked above ``k``; a voter
    ranking ``k`` first contributes only its second choice.
    """
    if p.m < 2:
        raise ValueError("A-sets need at least two candidates")
    return _a_set(p.rankings, k)


# --- trees ----------------------------------------------------------------

def _eliminate_leaves(rankings: list[Order]) -> EliminationCertificate:
    steps = []
    remaining = list(rankings)
    alive = set(remaining[0])
    while len(alive) > 1:
        # the first ranking's last candidate is ranked last by some voter
        k = remaining[0][-1]
        attach = _a_set(remaining, k)
        if not attach:
            return EliminationCertificate(tuple(steps), tuple(sorted(alive)), failed=k)
        steps.append(EliminationStep(k, attach, edge(k, min(attach))))
        alive.discard(k)
        remaining = _restrict(remaining, k)
    return EliminationCertificate(tuple(steps), tuple(alive))


def recognize_tree(p: Profile) -> RecognitionResult:
    cert = _eliminate_leaves(p.rankings)
    if not cert.complete:
        return RecognitionResult(Verdict.INCOMPATIBLE, "tree", certificate=cert)
    witness = Graph(p.m, frozenset(s.edge for s in cert.steps))
    return RecognitionResult(Verdict.COMPATIBLE, "tree", witness, cert)


# --- paths and cycles -----------------------------------------------------

def _prefix_sets(rankings: Iterable[Order], m: int) -> list[frozenset[int]]:
    rows = []
    for r in rankings:
        rows += [frozenset(r[:k]) for k in range(2, m)]
    return rows


def recognize_path(p: Profile) -> RecognitionResult:
    """Axis recognition: every prefix must be an interval of the axis."""
    order = consecutive_order(range(1, p.m + 1), _prefix_sets(p.rankings, p.m))
    if order is None:
        return RecognitionResult(Verdict.INCOMPATIBLE, "axis")
    return RecognitionResult(Verdict.COMPATIBLE, "axis", Graph.path(order), notes={"axis": tuple(order)})


def _cycle_order(rankings: Sequence[Order], candidates: Sequence[int]) -> list[int] | None:
    return circular_order(sorted(candidates), _prefix_sets(rankings, len(candidates)))


def recognize_cycle(p: Profile) -> RecognitionResult:
    if p.m < 3:
        raise ValueError("cycle recognition needs at least 3 candidates")
    order = _cycle_order(p.rankings, range(1, p.m + 1))
    if order is None:
        return RecognitionResult(Verdict.INCOMPATIBLE, "cycle")
    return RecognitionResult(Verdict.COMPATIBLE, "cycle", Graph.cycle(order), notes={"cycle": tuple(order)})


# --- pseudotrees ----------------------------------------------------------

def recognize_pseudotree(p: Profile, rng: random.Random | None = None) -> RecognitionResult:
    """Detach leaves with a nonempty A-set while at least 4 candidates remain,
    then look for a cycle through the rest.

    Candidates are scanned in increasing index order; pass ``rng`` to scan in
    a random order instead (the verdict does not depend on it).
    """
    if p.m < 3:
        raise ValueError("pseudotree recognition needs at least 3 candidates")
    remaining = p.rankings
    alive = list(range(1, p.m + 1))
    steps = []
    while len(alive) >= 4:
        scan = list(alive)
        if rng is not None:
            rng.shuffle(scan)
        for i in scan:
            attach = _a_set(remaining, i)
            if attach:
                break
        else:
            break
        j = rng.choice(sorted(attach)) if rng is not None else min(attach)
        steps.append(EliminationStep(i, attach, edge(i, j)))
        alive.remove(i)
        remaining = _restrict(remaining, i)
    cert = EliminationCertificate(tuple(steps), tuple(alive))
    order = _cycle_order(remaining, alive)
    if order is None:
        return RecognitionResult(Verdict.INCOMPATIBLE, "pseudotree", certificate=cert)
    cycle = zip(order, order[1:] + order[:1])
    witness = Graph(p.m, frozenset(s.edge for s in steps) | frozenset(edge(*e) for e in cycle))
    return RecognitionResult(Verdict.COMPATIBLE, "pseudotree", witness, cert, notes={"cycle": tuple(order)})


STRUCTURES = {
    "axis": recognize_path,
    "tree": recognize_tree,
    "cycle": recognize_cycle,
    "pseudotree": recognize_pseudotree,
}


def check_witness(result: RecognitionResult, p: Profile) -> bool:
    """Soundness predicate: witness is compatible and has the claimed shape."""
    if not result.compatible:
        return True
    g = result.witness
    if g is None or not is_compatible(g, p):
        return False
    shape = {
        "axis": Graph.is_path,
        "tree": Graph.is_tree,
        "cycle": Graph.is_cycle,
        "pseudotree": Graph.is_pseudotree,
    }[result.structure]
    return shape(g)
