"""Rankings, profiles and candidate graphs.

Candidates are dense 1-based integers. External labels (as found in PrefLib
files) live in a side table on the profile and never enter the algorithms.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

Edge = tuple[int, int]


class DimensionError(ValueError):
    """Objects built over different candidate counts were combined."""


class SocParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def edge(k: int, l: int) -> Edge:
    """Normalize an unordered pair to ``(min, max)``."""
    if k == l:
        raise ValueError(f"self-loop on candidate {k}")
    return (k, l) if k < l else (l, k)


@dataclass(frozen=True)
class Ranking:
    """A strict complete order; ``order[0]`` is the most preferred candidate."""

    order: tuple[int, ...]

    def __post_init__(self) -> None:
        order = tuple(int(c) for c in self.order)
        object.__setattr__(self, "order", order)
        if sorted(order) != list(range(1, len(order) + 1)):
            raise ValueError(f"ranking {order} is not a permutation of 1..{len(order)}")

    @property
    def m(self) -> int:
        return len(self.order)

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self) -> Iterator[int]:
        return iter(self.order)

    def __getitem__(self, i):
        return self.order[i]

    def positions(self) -> dict[int, int]:
        return {c: p for p, c in enumerate(self.order)}


@dataclass(frozen=True)
class Profile:
    """Rankings over ``m`` candidates with multiplicities.

    Identical rankings passed separately are merged into one entry, keeping
    first-appearance order.
    """

    m: int
    entries: tuple[tuple[Ranking, int], ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError("a profile needs at least one candidate")
        merged: dict[tuple[int, ...], int] = {}
        for r, count in self.entries:
            if not isinstance(r, Ranking):
                r = Ranking(tuple(r))
            if r.m != self.m:
                raise DimensionError(f"ranking of length {r.m} in a profile over {self.m} candidates")
            if int(count) < 1:
                raise ValueError(f"multiplicity must be positive, got {count}")
            merged[r.order] = merged.get(r.order, 0) + int(count)
        object.__setattr__(
            self, "entries", tuple((Ranking(o), c) for o, c in merged.items())
        )
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.m:
                raise DimensionError(f"{len(labels)} labels for {self.m} candidates")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_rankings(
        cls, rankings: Iterable[Sequence[int]], labels: Sequence[str] | None = None
    ) -> "Profile":
        rankings = [tuple(r) for r in rankings]
        if not rankings:
            raise ValueError("empty profile")
        return cls(len(rankings[0]), tuple((r, 1) for r in rankings), labels)

    @property
    def n(self) -> int:
        return sum(c for _, c in self.entries)

    @property
    def rankings(self) -> list[tuple[int, ...]]:
        """Distinct rankings as plain tuples."""
        return [r.order for r, _ in self.entries]

    def label(self, c: int) -> str:
        return self.labels[c - 1] if self.labels else str(c)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``1..m``."""

    m: int
    edges: frozenset[Edge] = frozenset()

    def __post_init__(self) -> None:
        normalized = frozenset(edge(*e) for e in self.edges)
        for k, l in normalized:
            if not (1 <= k <= self.m and 1 <= l <= self.m):
                raise ValueError(f"edge {(k, l)} outside 1..{self.m}")
        object.__setattr__(self, "edges", normalized)

    @classmethod
    def complete(cls, m: int) -> "Graph":
        return cls(m, frozenset(itertools.combinations(range(1, m + 1), 2)))

    @classmethod
    def path(cls, order: Sequence[int]) -> "Graph":
        return cls(len(order), frozenset(zip(order, order[1:])))

    @classmethod
    def cycle(cls, order: Sequence[int]) -> "Graph":
        order = list(order)
        if len(order) < 3:
            raise ValueError("a cycle needs at least 3 vertices")
        return cls(len(order), frozenset(zip(order, order[1:] + order[:1])))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, e) -> bool:
        return edge(*e) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(1, self.m + 1)}
        for k, l in self.edges:
            adj[k].add(l)
            adj[l].add(k)
        return adj

    def degrees(self) -> dict[int, int]:
        return {v: len(nb) for v, nb in self.adjacency().items()}

    def max_degree(self) -> int:
        return max(self.degrees().values(), default=0)

    def is_connected(self) -> bool:
        adj = self.adjacency()
        seen = {1}
        queue = deque([1])
        while queue:
            for w in adj[queue.popleft()]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.m

    def is_tree(self) -> bool:
        return len(self.edges) == self.m - 1 and self.is_connected()

    def is_path(self) -> bool:
        return self.is_tree() and self.max_degree() <= 2

    def is_cycle(self) -> bool:
        return self.m >= 3 and self.is_connected() and all(d == 2 for d in self.degrees().values())

    def is_pseudotree(self) -> bool:
        return len(self.edges) <= self.m and self.is_connected()

    def density(self) -> float:
        pairs = self.m * (self.m - 1) // 2
        return len(self.edges) / pairs if pairs else 1.0

    def edge_list(self, labels: Sequence[str] | None = None) -> str:
        name = (lambda v: labels[v - 1]) if labels else str
        return " ".join(f"{name(k)}-{name(l)}" for k, l in self.sorted_edges())


def _check_dims(g: Graph, m: int) -> None:
    if g.m != m:
        raise DimensionError(f"graph on {g.m} vertices, ranking over {m} candidates")


def is_traversal(g: Graph, r: Ranking | Sequence[int]) -> bool:
    """True iff every prefix of ``r`` induces a connected subgraph of ``g``.

    Each new vertex only has to touch the prefix before it.
    """
    order = r.order if isinstance(r, Ranking) else tuple(r)
    _check_dims(g, len(order))
    adj = g.adjacency()
    seen: set[int] = set()
    for p, c in enumerate(order):
        if p > 0 and adj[c].isdisjoint(seen):
            return False
        seen.add(c)
    return True


def is_compatible(g: Graph, p: Profile) -> bool:
    _check_dims(g, p.m)
    return all(is_traversal(g, r) for r, _ in p.entries)


def necessary_edges(p: Profile) -> frozenset[Edge]:
    """Pairs ranked in the top two positions by some voter."""
    if p.m < 2:
        return frozenset()
    return frozenset(edge(r[0], r[1]) for r, _ in p.entries)


# --- PrefLib .soc ----------------------------------------------------------

_META = re.compile(r"^#\s*([^:]+?)\s*:\s*(.*)$")


def _parse_order(fields: list[str], m: int, lineno: int) -> tuple[int, ...]:
    try:
        order = tuple(int(f) for f in fields)
    except ValueError:
        raise SocParseError(f"non-integer candidate in {fields}", lineno) from None
    if len(order) != m:
        raise SocParseError(f"expected {m} candidates, found {len(order)}", lineno)
    if sorted(order) != list(range(1, m + 1)):
        raise SocParseError(f"ranking {order} is not a permutation of 1..{m}", lineno)
    return order


def _parse_count(text: str, lineno: int) -> int:
    try:
        count = int(text)
    except ValueError:
        raise SocParseError(f"bad multiplicity {text!r}", lineno) from None
    if count < 1:
        raise SocParseError(f"multiplicity must be positive, got {count}", lineno)
    return count


def parse_soc(text: str) -> Profile:
    """Read a complete strict order (.soc) file, PrefLib 2023 or legacy layout."""
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines:
        raise SocParseError("empty file")
    if lines[0][1].startswith("#"):
        return _parse_soc_modern(lines)
    return _parse_soc_legacy(lines)


def _parse_soc_modern(lines: list[tuple[int, str]]) -> Profile:
    meta: dict[str, str] = {}
    names: dict[int, str] = {}
    body: list[tuple[int, str]] = []
    for lineno, ln in lines:
        if ln.startswith("#"):
            hit = _META.match(ln)
            if not hit:
                continue
            key, value = hit.group(1).upper(), hit.group(2).strip()
            if key.startswith("ALTERNATIVE NAME"):
                try:
                    names[int(key.split()[-1])] = value
                except ValueError:
                    raise SocParseError(f"bad alternative name key {key!r}", lineno) from None
            else:
                meta[key] = value
        else:
            body.append((lineno, ln))
    try:
        m = int(meta["NUMBER ALTERNATIVES"])
        n = int(meta["NUMBER VOTERS"])
    except KeyError as exc:
        raise SocParseError(f"missing header '# {exc.args[0]}'", 1) from None
    except ValueError:
        raise SocParseError("non-integer NUMBER ALTERNATIVES / NUMBER VOTERS header", 1) from None
    if m < 1:
        raise SocParseError(f"NUMBER ALTERNATIVES must be positive, got {m}", 1)
    entries = []
    for lineno, ln in body:
        count_text, sep, rest = ln.partition(":")
        if not sep:
            raise SocParseError(f"expected 'count: c1,...,cm', got {ln!r}", lineno)
        count = _parse_count(count_text.strip(), lineno)
        entries.append((_parse_order([f.strip() for f in rest.split(",")], m, lineno), count))
    total = sum(c for _, c in entries)
    if total != n:
        raise SocParseError(f"header announces {n} voters, body has {total}", body[-1][0] if body else 1)
    if not entries:
        raise SocParseError("no rankings in file")
    labels = tuple(names.get(c, str(c)) for c in range(1, m + 1)) if names else None
    return Profile(m, tuple(entries), labels)


def _parse_soc_legacy(lines: list[tuple[int, str]]) -> Profile:
    lineno, first = lines[0]
    try:
        m = int(first)
    except ValueError:
        raise SocParseError(f"expected candidate count, got {first!r}", lineno) from None
    if m < 1 or len(lines) < m + 2:
        raise SocParseError("truncated header", lineno)
    labels: dict[int, str] = {}
    for lineno, ln in lines[1 : m + 1]:
        idx, sep, name = ln.partition(",")
        try:
            labels[int(idx)] = name.strip()
        except ValueError:
            raise SocParseError(f"expected 'index,label', got {ln!r}", lineno) from None
        if not sep:
            raise SocParseError(f"expected 'index,label', got {ln!r}", lineno)
    if sorted(labels) != list(range(1, m + 1)):
        raise SocParseError(f"label table does not cover 1..{m}", lines[m][0])
    lineno, ln = lines[m + 1]
    fields = [f.strip() for f in ln.split(",")]
    if len(fields) != 3:
        raise SocParseError(f"expected 'n,sum_of_counts,num_unique', got {ln!r}", lineno)
    try:
        n, total_declared, unique = (int(f) for f in fields)
    except ValueError:
        raise SocParseError(f"non-integer voter header {ln!r}", lineno) from None
    entries = []
    for lineno, ln in lines[m + 2 :]:
        fields = [f.strip() for f in ln.split(",")]
        count = _parse_count(fields[0], lineno)
        entries.append((_parse_order(fields[1:], m, lineno), count))
    total = sum(c for _, c in entries)
    last = lines[-1][0]
    if total != n or total != total_declared:
        raise SocParseError(f"header announces {n} voters, body has {total}", last)
    if len(entries) != unique:
        raise SocParseError(f"header announces {unique} distinct orders, body has {len(entries)}", last)
    return Profile(m, tuple(entries), tuple(labels[c] for c in range(1, m + 1)))


def serialize_soc(p: Profile, title: str | None = None) -> str:
    """Write ``p`` in the PrefLib 2023 layout (canonical form)."""
    out = []
    if title:
        out.append(f"# TITLE: {title}")
    out += [
        "# DATA TYPE: soc",
        f"# NUMBER ALTERNATIVES: {p.m}",
        f"# NUMBER VOTERS: {p.n}",
        f"# NUMBER UNIQUE ORDERS: {len(p.entries)}",
    ]
    if p.labels:
        out += [f"# ALTERNATIVE NAME {c}: {p.labels[c - 1]}" for c in range(1, p.m + 1)]
    out += [f"{count}: {','.join(map(str, r.order))}" for r, count in p.entries]
    return "\n".join(out) + "\n"
