"""Instance generators: traversals of a known graph and set-cover reductions."""

from __future__ import annotations

import itertools
import random
from typing import Sequence

from .profile import Graph, Profile


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_traversal(g: Graph, rng: random.Random) -> tuple[int, ...]:
    adj = g.adjacency()
    start = rng.randint(1, g.m)
    order = [start]
    seen = {start}
    frontier = set(adj[start])
    while frontier:
        v = rng.choice(sorted(frontier))
        order.append(v)
        seen.add(v)
        frontier.discard(v)
        frontier |= adj[v] - seen
    return tuple(order)


def traversal_profile(g: Graph, n: int, seed=None) -> Profile:
    """``n`` random traversals of ``g``; the profile is compatible with ``g`` by construction."""
    if n < 1:
        raise ValueError("need at least one voter")
    if not g.is_connected():
        raise ValueError("graph is disconnected; it has no traversal")
    rng = _rng(seed)
    return Profile.from_rankings(random_traversal(g, rng) for _ in range(n))


def random_tree(m: int, seed=None) -> Graph:
    """Uniform labelled tree on ``1..m`` via a random Pruefer sequence."""
    rng = _rng(seed)
    if m <= 2:
        return Graph(m, frozenset({(1, 2)}) if m == 2 else frozenset())
    code = [rng.randint(1, m) for _ in range(m - 2)]
    degree = [1] * (m + 1)
    for v in code:
        degree[v] += 1
    edges = set()
    for v in code:
        leaf = min(u for u in range(1, m + 1) if degree[u] == 1)
        edges.add((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = (x for x in range(1, m + 1) if degree[x] == 1)
    edges.add((u, w))
    return Graph(m, frozenset(edges))


def random_path(m: int, seed=None) -> Graph:
    order = list(range(1, m + 1))
    _rng(seed).shuffle(order)
    return Graph.path(order)


def random_cycle(m: int, seed=None) -> Graph:
    order = list(range(1, m + 1))
    _rng(seed).shuffle(order)
    return Graph.cycle(order)


def random_pseudotree(m: int, seed=None) -> Graph:
    """A random tree plus one extra edge (a tree when ``m < 3``)."""
    rng = _rng(seed)
    tree = random_tree(m, rng)
    missing = [e for e in itertools.combinations(range(1, m + 1), 2) if e not in tree.edges]
    if not missing:
        return tree
    return Graph(m, tree.edges | {rng.choice(missing)})


# --- set-cover reductions ---------------------------------------------------

def _check_cover(universe_size: int, sets: Sequence[Sequence[int]]) -> list[frozenset[int]]:
    family = [frozenset(s) for s in sets]
    if not family or any(not s for s in family):
        raise ValueError("set family must be nonempty and contain no empty set")
    universe = set(range(1, universe_size + 1))
    if any(not s <= universe for s in family):
        raise ValueError(f"set elements must lie in 1..{universe_size}")
    uncovered = universe - frozenset().union(*family)
    if uncovered:
        raise ValueError(f"elements {sorted(uncovered)} are not covered by any set")
    return family


def _element_voters(family, universe_size, z, tail=()):
    voters = []
    sets = range(1, len(family) + 1)
    for e in range(1, universe_size + 1):
        inside = [i for i in sets if e in family[i - 1]]
        outside = [i for i in sets if e not in family[i - 1]]
        voters.append(tuple(inside) + (z,) + tuple(outside) + tuple(tail))
    return voters


def _pair_voters(q, z, tail=()):
    voters = []
    for i, j in itertools.combinations(range(1, q + 1), 2):
        rest = tuple(s for s in range(1, q + 1) if s not in (i, j))
        voters.append((i, j) + rest + (z,) + tuple(tail))
    return voters


def setcover_profile_edges(universe_size: int, sets: Sequence[Sequence[int]]) -> Profile:
    """Profile whose minimum edge count is ``q(q-1)/2 + k*`` for ``q`` sets.

    Candidates ``1..q`` stand for the sets and ``q+1`` for the extra
    candidate ``z``; ``k*`` is the minimum cover size.
    """
    family = _check_cover(universe_size, sets)
    q = len(family)
    z = q + 1
    voters = _element_voters(family, universe_size, z) + _pair_voters(q, z)
    labels = [f"S{i}" for i in range(1, q + 1)] + ["z"]
    return Profile.from_rankings(voters, labels)


def setcover_profile_degree(universe_size: int, sets: Sequence[Sequence[int]]) -> Profile:
    """Profile whose minimum maximum degree is ``q + k*``.

    Candidates: sets ``1..q``, ``z = q+1``, and ``t_i = q+1+i``.
    """
    family = _check_cover(universe_size, sets)
    q = len(family)
    z = q + 1
    ts = tuple(range(q + 2, 2 * q + 2))
    S = tuple(range(1, q + 1))
    voters = _element_voters(family, universe_size, z, ts) + _pair_voters(q, z, ts)
    for t in ts:
        voters.append((z, t) + tuple(u for u in ts if u != t) + S)
    voters.append((ts[0],) + S + (z,) + ts[1:])
    labels = [f"S{i}" for i in S] + ["z"] + [f"t{i}" for i in S]
    return Profile.from_rankings(voters, labels)


def min_cover_size(universe_size: int, sets: Sequence[Sequence[int]]) -> int:
    """Smallest number of sets covering ``1..universe_size``, by subset enumeration."""
    family = _check_cover(universe_size, sets)
    universe = frozenset(range(1, universe_size + 1))
    for k in range(1, len(family) + 1):
        for combo in itertools.combinations(family, k):
            if frozenset().union(*combo) == universe:
                return k
    raise AssertionError("unreachable: family covers the universe")
