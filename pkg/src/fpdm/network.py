"""Rooted social networks, diffusion reports and branch structure.

The seller is always node ``0``; buyers are positive integers. A tree built
through :func:`build_tree` has contiguous ids ``0..k``. Trees derived from it
(:func:`effective_tree`) keep the original labels, so they may have gaps.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping

SELLER = 0


class TreeError(ValueError):
    """Raised when an edge list does not describe a valid rooted tree."""


class InfeasibleProfileError(ValueError):
    """Raised when an action profile cannot occur on the given tree."""


@dataclass(frozen=True)
class SocialTree:
    """Immutable rooted tree with the seller at the root.

    Parameters
    ----------
    edges : tuple of (parent, child)
        One edge per buyer, sorted by child id.
    """

    edges: tuple[tuple[int, int], ...]

    @cached_property
    def parent(self) -> dict[int, int]:
        return {c: p for p, c in self.edges}

    @cached_property
    def children(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {SELLER: []}
        for _, c in self.edges:
            out[c] = []
        for p, c in self.edges:
            out[p].append(c)
        return {n: tuple(sorted(cs)) for n, cs in out.items()}

    @cached_property
    def buyers(self) -> tuple[int, ...]:
        return tuple(c for _, c in self.edges)

    @property
    def k(self) -> int:
        return len(self.edges)

    @property
    def nodes(self) -> tuple[int, ...]:
        return (SELLER,) + self.buyers

    @property
    def seller_children(self) -> tuple[int, ...]:
        return self.children[SELLER]

    @cached_property
    def depths(self) -> dict[int, int]:
        out = {SELLER: 0}
        queue = deque([SELLER])
        while queue:
            node = queue.popleft()
            for c in self.children[node]:
                out[c] = out[node] + 1
                queue.append(c)
        return out

    def __contains__(self, node: object) -> bool:
        return node == SELLER or node in self.parent

    def children_of(self, node: int) -> tuple[int, ...]:
        self._require(node)
        return self.children[node]

    def subtree(self, node: int) -> tuple[int, ...]:
        """All nodes below and including ``node``, in breadth-first order."""
        self._require(node)
        out = []
        queue = deque([node])
        while queue:
            n = queue.popleft()
            out.append(n)
            queue.extend(self.children[n])
        return tuple(out)

    def canonical_form(self) -> str:
        """Isomorphism-invariant encoding of the unlabeled rooted shape."""

        def enc(n: int) -> str:
            return "(" + "".join(sorted(enc(c) for c in self.children[n])) + ")"

        return enc(SELLER)

    def _require(self, node: int) -> None:
        if node not in self:
            raise KeyError(f"node {node} is not in the tree")

    def __repr__(self) -> str:
        return f"SocialTree(k={self.k}, edges={list(self.edges)})"


def build_tree(edges: Iterable[tuple[int, int]]) -> SocialTree:
    """Validate an edge list and return a :class:`SocialTree`.

    Ids must be non-negative integers forming exactly ``{0, ..., k}``.

    Raises
    ------
    TreeError
        On a duplicate parent, a cycle, a node unreachable from the seller,
        or non-contiguous ids.
    """
    parents: dict[int, int] = {}
    for edge in edges:
        p, c = edge
        for v in (p, c):
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise TreeError(f"node ids must be non-negative integers, got {v!r}")
        if c == SELLER:
            raise TreeError("the seller (id 0) cannot have a parent")
        if p == c:
            raise TreeError(f"cycle detected: self-loop on node {c}")
        if c in parents:
            raise TreeError(f"duplicate parent for node {c}: {parents[c]} and {p}")
        parents[c] = p

    ids = {SELLER} | set(parents) | set(parents.values())
    missing_parent = sorted(n for n in ids if n != SELLER and n not in parents)
    if missing_parent:
        raise TreeError(f"disconnected node(s) with no parent: {missing_parent}")

    for start in parents:
        seen = {start}
        node = start
        while node != SELLER:
            node = parents[node]
            if node in seen:
                raise TreeError(f"cycle detected through node {node}")
            seen.add(node)

    if ids != set(range(len(ids))):
        raise TreeError(f"node ids must be contiguous 0..{len(ids) - 1}, got {sorted(ids)}")
    return SocialTree(tuple(sorted(((p, c) for c, p in parents.items()), key=lambda e: e[1])))


def tree_from_parents(parents: Mapping[int, int]) -> SocialTree:
    """Build a tree from a ``child -> parent`` map (validated)."""
    return build_tree((p, c) for c, p in parents.items())


@dataclass(frozen=True)
class ActionProfile:
    """Diffusion plan of every buyer.

    ``reports[i]`` is the set of children buyer ``i`` informs, or ``None``
    (nil). A buyer's report only takes effect when she is informed herself;
    :func:`effective_tree` applies that closure. A nil entry on an informed
    buyer means she opts out of the sale.
    """

    reports: tuple[tuple[int, frozenset[int] | None], ...]

    @classmethod
    def truthful(cls, tree: SocialTree) -> "ActionProfile":
        return cls(tuple((b, frozenset(tree.children[b])) for b in tree.buyers))

    @cached_property
    def _map(self) -> dict[int, frozenset[int] | None]:
        return dict(self.reports)

    def report(self, buyer: int) -> frozenset[int] | None:
        return self._map[buyer]

    def as_dict(self) -> dict[int, frozenset[int] | None]:
        return dict(self._map)

    def replace(self, buyer: int, report: Iterable[int] | None) -> "ActionProfile":
        new = None if report is None else frozenset(report)
        return ActionProfile(tuple((b, new if b == buyer else r) for b, r in self.reports))

    def key(self) -> tuple:
        """Sortable, hashable representation."""
        return tuple((b, None if r is None else tuple(sorted(r))) for b, r in self.reports)


def make_profile(
    tree: SocialTree,
    reports: Mapping[int, Iterable[int] | None] | None = None,
    *,
    allow_opt_out: bool = False,
) -> ActionProfile:
    """Complete ``reports`` with truthful entries and validate it.

    Raises
    ------
    InfeasibleProfileError
        If a report names a non-child, a seller neighbour reports nil, or an
        informed buyer reports nil while ``allow_opt_out`` is false.
    """
    reports = dict(reports or {})
    unknown = sorted(set(reports) - set(tree.buyers))
    if unknown:
        raise InfeasibleProfileError(f"reports for unknown buyer(s) {unknown}")
    entries = []
    for b in tree.buyers:
        if b in reports:
            r = reports[b]
            entries.append((b, None if r is None else frozenset(r)))
        else:
            entries.append((b, frozenset(tree.children[b])))
    profile = ActionProfile(tuple(entries))
    validate_profile(tree, profile, allow_opt_out=allow_opt_out)
    return profile


def validate_profile(tree: SocialTree, profile: ActionProfile, *, allow_opt_out: bool = True) -> None:
    if set(profile._map) != set(tree.buyers):
        raise InfeasibleProfileError("profile does not cover exactly the tree's buyers")
    for b, r in profile.reports:
        if r is None:
            if tree.parent[b] == SELLER:
                raise InfeasibleProfileError(
                    f"buyer {b} is a seller neighbour and is always informed; nil is not allowed"
                )
            continue
        extra = r - set(tree.children[b])
        if extra:
            raise InfeasibleProfileError(f"buyer {b} reports non-children {sorted(extra)}")
    if not allow_opt_out:
        informed = _informed(tree, profile)
        out = sorted(b for b in informed if profile.report(b) is None)
        if out:
            raise InfeasibleProfileError(f"informed buyer(s) {out} report nil")


def _informed(tree: SocialTree, profile: ActionProfile) -> list[int]:
    """Buyers who receive the sale information (including opt-outs)."""
    out = []
    queue = deque(tree.seller_children)
    while queue:
        b = queue.popleft()
        out.append(b)
        r = profile.report(b)
        if r is not None:
            queue.extend(sorted(r))
    return out


def effective_tree(tree: SocialTree, actions: ActionProfile | None = None) -> SocialTree:
    """Sub-network of buyers that take part in the sale under ``actions``.

    A buyer hidden by her parent disappears together with her subtree, and so
    does a buyer who opts out. Seller neighbours are always present.
    """
    if actions is None:
        return tree
    parents = {}
    queue = deque(tree.seller_children)
    for b in tree.seller_children:
        parents[b] = SELLER
    while queue:
        b = queue.popleft()
        r = actions.report(b)
        for c in sorted(r or ()):
            if actions.report(c) is None and c in tree.children[b]:
                continue
            parents[c] = b
            queue.append(c)
    return SocialTree(tuple(sorted(((p, c) for c, p in parents.items()), key=lambda e: e[1])))


@dataclass(frozen=True)
class Branch:
    root: int
    members: frozenset[int]
    outside: int

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class BranchDecomposition:
    """Branches ordered by descending size, ties by ascending root id."""

    branches: tuple[Branch, ...]

    def __iter__(self) -> Iterator[Branch]:
        return iter(self.branches)

    def __len__(self) -> int:
        return len(self.branches)

    def __getitem__(self, i: int) -> Branch:
        return self.branches[i]

    @property
    def sizes(self) -> list[int]:
        return [b.size for b in self.branches]

    @property
    def roots(self) -> list[int]:
        return [b.root for b in self.branches]

    @property
    def total(self) -> int:
        return sum(self.sizes)

    def branch_of(self, buyer: int) -> Branch:
        for b in self.branches:
            if buyer in b.members:
                return b
        raise KeyError(f"buyer {buyer} is in no branch")


def branches(effective: SocialTree) -> BranchDecomposition:
    """Split the reachable buyers into the seller-neighbour subtrees."""
    groups = [(root, frozenset(effective.subtree(root))) for root in effective.seller_children]
    total = sum(len(m) for _, m in groups)
    groups.sort(key=lambda g: (-len(g[1]), g[0]))
    return BranchDecomposition(tuple(Branch(r, m, total - len(m)) for r, m in groups))


def depth(effective: SocialTree, node: int) -> int:
    effective._require(node)
    return effective.depths[node]


def path_to(effective: SocialTree, node: int) -> tuple[int, ...]:
    """Buyers strictly between the seller and ``node``, seller side first."""
    effective._require(node)
    path = []
    n = effective.parent.get(node, SELLER)
    while n != SELLER:
        path.append(n)
        n = effective.parent[n]
    return tuple(reversed(path))


def _subsets(items: tuple[int, ...]) -> list[frozenset[int]]:
    # largest first so the truthful report leads
    return [
        frozenset(c)
        for size in range(len(items), -1, -1)
        for c in itertools.combinations(items, size)
    ]


def deviations(tree: SocialTree, buyer: int, *, allow_opt_out: bool = False) -> list[frozenset[int] | None]:
    """Every report available to ``buyer``; the truthful one comes first."""
    out: list[frozenset[int] | None] = list(_subsets(tree.children_of(buyer)))
    if allow_opt_out and tree.parent[buyer] != SELLER:
        out.append(None)
    return out


def enumerate_action_profiles(
    tree: SocialTree,
    deviator: int | None = None,
    *,
    distinct: bool = False,
) -> Iterator[ActionProfile]:
    """Stream diffusion plans on ``tree``.

    With ``deviator`` set, only that buyer's report ranges over subsets of her
    children; everybody else is truthful. Without it, every buyer's report
    ranges independently (a full strategy profile). ``distinct=True`` yields
    one representative per distinct effective tree instead.
    """
    if deviator is not None:
        base = ActionProfile.truthful(tree)
        for r in deviations(tree, deviator):
            yield base.replace(deviator, r)
        return
    options = [_subsets(tree.children[b]) for b in tree.buyers]
    seen: set[tuple[tuple[int, int], ...]] = set()
    for combo in itertools.product(*options):
        profile = ActionProfile(tuple(zip(tree.buyers, combo)))
        if distinct:
            key = effective_tree(tree, profile).edges
            if key in seen:
                continue
            seen.add(key)
        yield profile
