"""Line-oriented instance files and the flat outcome record.

Tree file::

    # comment
    edge 0 1
    edge 1 2

Valuations file: ``<buyer> <value>``. Actions file: ``<buyer> -> 2,3``,
``<buyer> -> nil`` or ``<buyer> ->`` (informs nobody). Buyers absent from an
actions file diffuse truthfully. Floats are written with ``repr`` so they
round-trip exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .network import SELLER, ActionProfile, SocialTree, TreeError, build_tree


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.line = line


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield n, body.split()


def _int(token: str, line: int, what: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise FormatError(f"{what} must be an integer, got {token!r}", line) from None
    if value < 0:
        raise FormatError(f"{what} must be non-negative, got {value}", line)
    return value


@dataclass(frozen=True)
class TreeFile:
    """A parsed tree plus the mapping back to the labels used in the file."""

    tree: SocialTree
    labels: tuple[int, ...]  # canonical id -> file label

    @property
    def ids(self) -> dict[int, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def label(self, node: int) -> int:
        return self.labels[node]


def parse_tree(text: str) -> TreeFile:
    """Parse a tree file; non-contiguous labels are renumbered in sorted order."""
    edges = []
    first_line: dict[int, int] = {}
    for n, tokens in _lines(text):
        if tokens[0] != "edge" or len(tokens) != 3:
            raise FormatError("expected 'edge <parent> <child>'", n)
        p = _int(tokens[1], n, "parent id")
        c = _int(tokens[2], n, "child id")
        first_line.setdefault(c, n)
        edges.append((p, c, n))
    labels = sorted({SELLER} | {p for p, _, _ in edges} | {c for _, c, _ in edges})
    ids = {label: i for i, label in enumerate(labels)}
    seen: dict[int, int] = {}
    for p, c, n in edges:
        if c in seen:
            raise FormatError(f"duplicate parent for node {c} (first given on line {seen[c]})", n)
        seen[c] = n
    try:
        tree = build_tree((ids[p], ids[c]) for p, c, _ in edges)
    except TreeError as exc:
        raise FormatError(str(exc)) from None
    return TreeFile(tree, tuple(labels))


def format_tree(tree_file: TreeFile) -> str:
    tree, label = tree_file.tree, tree_file.label
    return "".join(f"edge {label(p)} {label(c)}\n" for p, c in tree.edges)


def parse_valuations(text: str, tree_file: TreeFile) -> dict[int, float]:
    ids = tree_file.ids
    out: dict[int, float] = {}
    for n, tokens in _lines(text):
        if len(tokens) != 2:
            raise FormatError("expected '<buyer-id> <value>'", n)
        label = _int(tokens[0], n, "buyer id")
        if label not in ids or ids[label] == SELLER:
            raise FormatError(f"unknown buyer {label}", n)
        try:
            value = float(tokens[1])
        except ValueError:
            raise FormatError(f"bad value {tokens[1]!r}", n) from None
        if not 0.0 <= value <= 1.0:
            raise FormatError(f"value {value!r} outside [0, 1]", n)
        if ids[label] in out:
            raise FormatError(f"duplicate valuation for buyer {label}", n)
        out[ids[label]] = value
    return out


def format_valuations(values: Mapping[int, float], tree_file: TreeFile) -> str:
    return "".join(f"{tree_file.label(b)} {float(values[b])!r}\n" for b in sorted(values))


def parse_actions(text: str, tree_file: TreeFile) -> dict[int, frozenset[int] | None]:
    """Return the explicit reports; pass them to :func:`~fpdm.network.make_profile`."""
    ids = tree_file.ids
    out: dict[int, frozenset[int] | None] = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if "->" not in body:
            raise FormatError("expected '<buyer-id> -> <children>|nil'", n)
        head, tail = (s.strip() for s in body.split("->", 1))
        label = _int(head, n, "buyer id")
        if label not in ids or ids[label] == SELLER:
            raise FormatError(f"unknown buyer {label}", n)
        buyer = ids[label]
        if buyer in out:
            raise FormatError(f"duplicate report for buyer {label}", n)
        if tail == "nil":
            out[buyer] = None
            continue
        children = set()
        for tok in filter(None, (t.strip() for t in tail.split(","))):
            c = _int(tok, n, "child id")
            if c not in ids:
                raise FormatError(f"unknown node {c}", n)
            children.add(ids[c])
        out[buyer] = frozenset(children)
    return out


def format_actions(profile: ActionProfile, tree_file: TreeFile) -> str:
    label = tree_file.label
    lines = []
    for b, r in profile.reports:
        if r is None:
            lines.append(f"{label(b)} -> nil")
        else:
            body = ",".join(str(label(c)) for c in sorted(r))
            lines.append(f"{label(b)} -> {body}".rstrip())
    return "".join(line + "\n" for line in lines)


def format_record(items: Iterable[tuple[str, object]]) -> str:
    out = []
    for key, value in items:
        if isinstance(value, float):
            value = repr(value)
        elif value is None:
            value = "none"
        out.append(f"{key} = {value}\n")
    return "".join(out)


def parse_record(text: str) -> dict[str, str]:
    out = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        if " = " not in raw:
            raise FormatError("expected 'key = value'", n)
        key, value = raw.split(" = ", 1)
        out[key.strip()] = value.strip()
    return out
