"""Max-flow view of tree recognition.

Every eliminated candidate ``k`` gets a unit of supply on ``l_k`` that must
be routed to some ``r_j`` with ``j`` in its attachment set; integral flows of
value ``m - 1`` are exactly the compatible trees that respect the
elimination.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .profile import Edge, Graph, Profile, edge
from .recognition import EliminationCertificate, RecognitionResult, Verdict, _eliminate_leaves

SOURCE = ("s",)
SINK = ("t",)


class IncompleteCertificate(ValueError):
    pass


@dataclass(frozen=True)
class FlowNetwork:
    m: int
    arcs: dict  # (tail, head) -> integer capacity
    root: int | None

    def middle_arcs(self) -> list[tuple[int, int]]:
        """``(k, j)`` for every arc ``l_k -> r_j``."""
        return sorted((u[1], v[1]) for u, v in self.arcs if u[0] == "l" and v[0] == "r")


def build_network(p: Profile, cert: EliminationCertificate) -> FlowNetwork:
    if not cert.complete:
        raise IncompleteCertificate(
            f"elimination stopped at candidate {cert.failed}" if cert.failed else "certificate has a multi-candidate core"
        )
    arcs: dict = {}
    root = cert.core[0] if cert.core else None
    for k in range(1, p.m + 1):
        arcs[(SOURCE, ("l", k))] = 1
        arcs[(("r", k), SINK)] = p.m
    for step in cert.steps:
        for j in step.attachment:
            arcs[(("l", step.candidate), ("r", j))] = 1
    if p.m == 1:
        arcs = {}
    return FlowNetwork(p.m, arcs, root)


def max_flow(net: FlowNetwork) -> tuple[int, dict]:
    """Shortest augmenting paths (Edmonds-Karp). Returns value and arc flows."""
    residual: dict = {}
    adj: dict = {}
    for (u, v), cap in net.arcs.items():
        residual[(u, v)] = residual.get((u, v), 0) + cap
        residual.setdefault((v, u), 0)
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    value = 0
    while SOURCE in adj:
        parent = {SOURCE: None}
        queue = deque([SOURCE])
        while queue and SINK not in parent:
            u = queue.popleft()
            for v in adj[u]:
                if v not in parent and residual[(u, v)] > 0:
                    parent[v] = u
                    queue.append(v)
        if SINK not in parent:
            break
        path = []
        v = SINK
        while parent[v] is not None:
            path.append((parent[v], v))
            v = parent[v]
        push = min(residual[a] for a in path)
        for u, v in path:
            residual[(u, v)] -= push
            residual[(v, u)] += push
        value += push
    flows = {a: cap - residual[a] for a, cap in net.arcs.items()}
    return value, flows


def flow_to_edges(flows: dict) -> frozenset[Edge]:
    return frozenset(
        edge(u[1], v[1]) for (u, v), f in flows.items() if f > 0 and u[0] == "l" and v[0] == "r"
    )


def flow_tree_recognize(p: Profile) -> RecognitionResult:
    cert = _eliminate_leaves(p.rankings)
    if not cert.complete:
        return RecognitionResult(Verdict.INCOMPATIBLE, "tree", certificate=cert)
    net = build_network(p, cert)
    value, flows = max_flow(net)
    if value != p.m - 1:
        return RecognitionResult(Verdict.INCOMPATIBLE, "tree", certificate=cert, notes={"flow": value})
    witness = Graph(p.m, flow_to_edges(flows))
    return RecognitionResult(Verdict.COMPATIBLE, "tree", witness, cert, notes={"flow": value, "flows": flows})
