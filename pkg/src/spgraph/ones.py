"""Consecutive-ones and circular-ones orderings of set families.

``consecutive_order`` arranges a ground set so that every member of a family
is a contiguous block, or reports that no such arrangement exists. It works
on overlap components: two sets overlap when they intersect and neither
contains the other. Inside one component the arrangement of its atoms is
forced up to reversal, so it is built greedily by adding sets in BFS order of
the overlap graph. Components nest inside single atoms of larger ones, which
gives a tree that is expanded top-down.

``circular_order`` complements every set that contains a fixed element,
which turns circular-ones into consecutive-ones.
"""

from __future__ import annotations

from collections import deque
from typing import Hashable, Iterable, Sequence

Block = set


class NotConsecutive(Exception):
    pass


def _overlap(a: frozenset, b: frozenset) -> bool:
    return bool(a & b) and not a <= b and not b <= a


def _components(rows: list[frozenset]) -> list[list[int]]:
    seen = [False] * len(rows)
    comps = []
    for s in range(len(rows)):
        if seen[s]:
            continue
        seen[s] = True
        order = [s]
        queue = deque([s])
        while queue:
            i = queue.popleft()
            for j in range(len(rows)):
                if not seen[j] and _overlap(rows[i], rows[j]):
                    seen[j] = True
                    order.append(j)
                    queue.append(j)
        comps.append(order)
    return comps


def _arrange_component(rows: list[frozenset]) -> list[Block]:
    """Atom sequence of one overlap component; rows come in BFS order."""
    blocks: list[Block] = [set(rows[0])]
    covered = set(rows[0])
    for row in rows[1:]:
        hits = [i for i, b in enumerate(blocks) if b & row]
        a, b = hits[0], hits[-1]
        if hits != list(range(a, b + 1)):
            raise NotConsecutive
        if any(not blocks[i] <= row for i in range(a + 1, b)):
            raise NotConsecutive
        fresh = set(row - covered)
        t = len(blocks) - 1
        if fresh:
            if len(blocks) == 1:
                inner = blocks[0] & row
                blocks = [blocks[0] - row, inner, fresh]
            elif b == t and (blocks[b] <= row or a == b):
                # grow on the right; only the leftmost touched block may be partial
                if a != b and not blocks[b] <= row:
                    raise NotConsecutive
                blocks = blocks[:a] + _split(blocks[a], row, inner_right=True) + blocks[a + 1 :] + [fresh]
            elif a == 0 and (blocks[a] <= row or a == b):
                if a != b and not blocks[a] <= row:
                    raise NotConsecutive
                blocks = [fresh] + blocks[:b] + _split(blocks[b], row, inner_right=False) + blocks[b + 1 :]
            else:
                raise NotConsecutive
            covered |= fresh
        else:
            if a == b:
                # cannot happen for a row overlapping an earlier one
                raise NotConsecutive
            left = _split(blocks[a], row, inner_right=True)
            right = _split(blocks[b], row, inner_right=False)
            blocks = blocks[:a] + left + blocks[a + 1 : b] + right + blocks[b + 1 :]
        blocks = [blk for blk in blocks if blk]
    return blocks


def _split(block: Block, row: frozenset, inner_right: bool) -> list[Block]:
    inside, outside = block & row, block - row
    return [outside, inside] if inner_right else [inside, outside]


def consecutive_order(ground: Sequence[Hashable], family: Iterable[Iterable[Hashable]]) -> list | None:
    """Order ``ground`` so each set of ``family`` is contiguous; None if impossible."""
    ground = list(ground)
    ground_set = set(ground)
    rows = []
    for s in family:
        s = frozenset(s)
        if not s <= ground_set:
            raise ValueError("family member outside the ground set")
        if 1 < len(s) < len(ground_set):
            rows.append(s)
    rows = list(dict.fromkeys(rows))
    rank = {x: i for i, x in enumerate(ground)}

    comps = []
    for comp in _components(rows):
        try:
            blocks = _arrange_component([rows[i] for i in comp])
        except NotConsecutive:
            return None
        union = frozenset().union(*blocks)
        comps.append((union, blocks))
    # containers precede their contents: larger union first, a single-block
    # component before a multi-block one with the same union
    comps.sort(key=lambda c: (-len(c[0]), len(c[1])))

    children: dict[int, list[int]] = {i: [] for i in range(len(comps))}
    roots = []
    for i, (union, _) in enumerate(comps):
        parent = None
        for j in range(i - 1, -1, -1):
            if any(union <= blk for blk in comps[j][1]):
                parent = j
                break
        (children[parent] if parent is not None else roots).append(i)

    def expand(elements: set, kids: list[int]) -> list:
        out = []
        for k in kids:
            out += expand_comp(k)
            elements = elements - comps[k][0]
        return out + sorted(elements, key=rank.__getitem__)

    def expand_comp(i: int) -> list:
        union, blocks = comps[i]
        out = []
        for blk in blocks:
            kids = [k for k in children[i] if comps[k][0] <= blk]
            out += expand(set(blk), kids)
        return out

    order = expand(ground_set, roots)
    if not _all_consecutive(order, rows):
        raise AssertionError("consecutive-ones assembly produced an invalid order")
    return order


def _all_consecutive(order: list, rows: list[frozenset]) -> bool:
    pos = {x: i for i, x in enumerate(order)}
    for row in rows:
        idx = [pos[x] for x in row]
        if max(idx) - min(idx) + 1 != len(row):
            return False
    return True


def circular_order(ground: Sequence[Hashable], family: Iterable[Iterable[Hashable]]) -> list | None:
    """Cyclic order of ``ground`` in which every set is an arc; None if impossible."""
    ground = list(ground)
    if not ground:
        return []
    pivot = ground[0]
    full = frozenset(ground)
    flipped = []
    for s in family:
        s = frozenset(s)
        flipped.append(full - s if pivot in s else s)
    return consecutive_order(ground, flipped)
