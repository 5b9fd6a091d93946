"""Enumeration of non-isomorphic rooted trees.

Trees are generated as canonical level sequences (Beyer and Hedetniemi,
constant amortised time per tree) and relabelled breadth-first so that the
root becomes the seller ``0``.
"""
from __future__ import annotations

from collections import deque
from typing import Iterator

from .network import SocialTree, build_tree

MAX_BUYERS = 9


def level_sequences(n_nodes: int) -> Iterator[list[int]]:
    """Canonical level sequences of all rooted trees on ``n_nodes`` nodes."""
    if n_nodes < 1:
        return
    seq = list(range(n_nodes))
    while True:
        yield list(seq)
        p = n_nodes - 1
        while p > 0 and seq[p] <= 1:
            p -= 1
        if p == 0:
            return
        q = p - 1
        while seq[q] != seq[p] - 1:
            q -= 1
        for i in range(p, n_nodes):
            seq[i] = seq[i - p + q]


def tree_from_level_sequence(seq: list[int]) -> SocialTree:
    """Relabel a preorder level sequence breadth-first (root -> 0)."""
    parent_pos: dict[int, int] = {}
    stack: list[int] = []
    for pos, level in enumerate(seq):
        del stack[level:]
        if stack:
            parent_pos[pos] = stack[-1]
        stack.append(pos)
    children: dict[int, list[int]] = {pos: [] for pos in range(len(seq))}
    for pos, par in parent_pos.items():
        children[par].append(pos)
    label = {}
    queue = deque([0])
    while queue:
        pos = queue.popleft()
        label[pos] = len(label)
        queue.extend(children[pos])
    return build_tree((label[par], label[pos]) for pos, par in parent_pos.items())


def rooted_trees(n_buyers: int) -> Iterator[SocialTree]:
    """All rooted trees with exactly ``n_buyers`` buyers."""
    for seq in level_sequences(n_buyers + 1):
        yield tree_from_level_sequence(seq)


def enumerate_rooted_trees(max_buyers: int) -> Iterator[SocialTree]:
    """All non-isomorphic rooted trees with ``1..max_buyers`` buyers.

    Order is deterministic: by buyer count, then generation order.
    """
    if isinstance(max_buyers, bool) or int(max_buyers) != max_buyers or not 1 <= max_buyers <= MAX_BUYERS:
        raise ValueError(f"max_buyers must be an integer in [1, {MAX_BUYERS}], got {max_buyers!r}")
    for n in range(1, int(max_buyers) + 1):
        yield from rooted_trees(n)
