"""Planted and unrooted plane trees.

A planted plane tree is encoded by its preorder out-degree word: visiting
vertices depth first, left to right, record the number of children of each.
A word ``c_0, ..., c_{n-1}`` encodes a tree iff the partial sums of
``c_i - 1`` stay nonnegative before position ``n-1`` and the total is ``-1``
(the Lukasiewicz condition).

An unrooted plane tree stores, for each vertex, the cyclic sequence of its
neighbors.  Each of its ``2(n-1)`` corners (a vertex together with one of
its incident edge positions) induces a planted tree by reading the cyclic
orders depth first; the lexicographically smallest of those words is the
canonical code, and two unrooted plane trees are equal iff their canonical
codes agree (orientation-preserving equivalence: cyclic orders are never
reflected).

Wire format: one tree per line, the out-degree word comma separated;
unrooted trees carry a ``U:`` prefix in front of their canonical code.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

from .weights import WeightSequence

__all__ = [
    "TreeError",
    "PlantedTree",
    "UnrootedPlaneTree",
    "corner_root",
    "canonicalize",
    "center_classify",
    "split_at_root",
    "join_at_root",
    "tree_weight",
    "degree_weight",
    "code_is_valid",
]


class TreeError(ValueError):
    """A tree encoding (or an operation on one) violates an invariant."""


def code_is_valid(code: Sequence[int]) -> bool:
    walk = 1
    for i, c in enumerate(code):
        if c < 0:
            return False
        walk += c - 1
        if walk <= 0 and i < len(code) - 1:
            return False
    return walk == 0


@dataclass(frozen=True)
class PlantedTree:
    """A planted plane tree as its preorder out-degree word."""

    code: Tuple[int, ...]

    def __post_init__(self):
        code = tuple(int(c) for c in self.code)
        object.__setattr__(self, "code", code)
        if not code:
            raise TreeError("invariant violated: empty out-degree word")
        if not code_is_valid(code):
            raise TreeError(f"invariant violated: {code} is not a Lukasiewicz word")

    @property
    def size(self) -> int:
        return len(self.code)

    @classmethod
    def from_wire(cls, line: str) -> "PlantedTree":
        try:
            code = tuple(int(tok) for tok in line.strip().split(","))
        except ValueError as exc:
            raise TreeError(f"invariant violated: cannot parse wire line {line!r}") from exc
        return cls(code)

    def to_wire(self) -> str:
        return ",".join(str(c) for c in self.code)

    def parents(self) -> list:
        """parents[v] for the preorder vertex numbering; root has parent -1."""
        code = self.code
        parent = [-1] * len(code)
        stack = [0]
        remaining = [code[0]]
        for v in range(1, len(code)):
            while remaining[-1] == 0:
                stack.pop()
                remaining.pop()
            parent[v] = stack[-1]
            remaining[-1] -= 1
            stack.append(v)
            remaining.append(code[v])
        return parent

    def children(self) -> list:
        """children[v] in planted (left-to-right) order."""
        out = [[] for _ in self.code]
        for v, p in enumerate(self.parents()):
            if p >= 0:
                out[p].append(v)
        return out

    def height(self) -> int:
        depth = [0] * self.size
        best = 0
        for v, p in enumerate(self.parents()):
            if p >= 0:
                depth[v] = depth[p] + 1
                if depth[v] > best:
                    best = depth[v]
        return best


def _subtree_end(code: Sequence[int], start: int) -> int:
    budget = 1
    i = start
    while budget > 0:
        budget += code[i] - 1
        i += 1
    return i


def split_at_root(t: PlantedTree) -> Tuple[PlantedTree, PlantedTree]:
    """Split off the fringe subtree at the first child.

    Returns ``(t1, t2)`` where ``t1`` is the subtree planted at the first
    child of the root and ``t2`` is the remaining tree with that subtree
    pruned.  The unrooted-style weight multiplies:
    ``degree_weight(t) = tree_weight(t1) * tree_weight(t2)``.
    """
    if t.size < 2:
        raise TreeError("invariant violated: splitting needs at least two vertices")
    code = t.code
    end = _subtree_end(code, 1)
    t1 = PlantedTree(code[1:end])
    t2 = PlantedTree((code[0] - 1,) + code[end:])
    return t1, t2


def join_at_root(t1: PlantedTree, t2: PlantedTree) -> PlantedTree:
    """Inverse of :func:`split_at_root`: attach ``t1`` as first child of ``t2``'s root."""
    return PlantedTree((t2.code[0] + 1,) + t1.code + t2.code[1:])


def tree_weight(t, w: WeightSequence) -> Fraction:
    """The weight of a tree: out-degree weights for planted trees,
    ``omega_{deg(v)-1}`` over all vertices for unrooted ones."""
    if isinstance(t, PlantedTree):
        total = Fraction(1)
        for c in t.code:
            total *= w.omega(c)
        return total
    if isinstance(t, UnrootedPlaneTree):
        total = Fraction(1)
        for nbrs in t.neighbors:
            total *= w.omega(len(nbrs) - 1)
        return total
    raise TreeError(f"cannot weight object of type {type(t).__name__}")


def degree_weight(t: PlantedTree, w: WeightSequence) -> Fraction:
    """``prod_v omega_{deg(v)-1}`` of a planted tree's underlying graph.

    The root contributes ``omega_{c_0 - 1}``; every other vertex has graph
    degree outdeg + 1, so contributes its usual ``omega_{outdeg}``.
    """
    total = w.omega(t.code[0] - 1)
    for c in t.code[1:]:
        total *= w.omega(c)
    return total


class UnrootedPlaneTree:
    """An unrooted plane tree: cyclic neighbor sequences per vertex."""

    __slots__ = ("neighbors", "_canonical")

    def __init__(self, neighbors: Sequence[Sequence[int]]):
        nbrs = tuple(tuple(int(u) for u in row) for row in neighbors)
        n = len(nbrs)
        if n < 2:
            raise TreeError("invariant violated: unrooted plane trees need at least two vertices")
        edge_count = 0
        for v, row in enumerate(nbrs):
            for u in row:
                if u < 0 or u >= n or u == v:
                    raise TreeError(f"invariant violated: vertex {v} has an invalid neighbor {u}")
                edge_count += 1
        if edge_count != 2 * (n - 1):
            raise TreeError("invariant violated: a tree on n vertices has exactly n-1 edges")
        seen = [False] * n
        stack = [0]
        seen[0] = True
        reached = 1
        while stack:
            v = stack.pop()
            for u in nbrs[v]:
                if v not in nbrs[u]:
                    raise TreeError("invariant violated: adjacency is not symmetric")
                if not seen[u]:
                    seen[u] = True
                    reached += 1
                    stack.append(u)
        if reached != n:
            raise TreeError("invariant violated: the graph is not connected")
        object.__setattr__(self, "neighbors", nbrs)
        object.__setattr__(self, "_canonical", None)

    def __setattr__(self, name, value):
        raise AttributeError("UnrootedPlaneTree is immutable")

    @property
    def n(self) -> int:
        return len(self.neighbors)

    @property
    def size(self) -> int:
        return len(self.neighbors)

    def degrees(self) -> list:
        return [len(row) for row in self.neighbors]

    @classmethod
    def from_planted(cls, t: PlantedTree) -> "UnrootedPlaneTree":
        """Forget the planting: root's children become its cyclic order, every
        other vertex reads (parent, children...) cyclically."""
        if t.size < 2:
            raise TreeError("invariant violated: cannot forget the root of a single vertex")
        children = t.children()
        parent = t.parents()
        rows = []
        for v in range(t.size):
            if parent[v] < 0:
                rows.append(tuple(children[v]))
            else:
                rows.append((parent[v],) + tuple(children[v]))
        return cls(rows)

    def corners(self) -> list:
        """All (vertex, position) corners; there are exactly 2(n-1)."""
        return [(v, i) for v, row in enumerate(self.neighbors) for i in range(len(row))]

    def corner_code(self, v: int, i: int) -> Tuple[int, ...]:
        """Out-degree word of the planted tree rooted at corner (v, i)."""
        nbrs = self.neighbors
        code = []
        first = nbrs[v][i:] + nbrs[v][:i]
        code.append(len(first))
        stack = [(child, v) for child in reversed(first)]
        while stack:
            u, par = stack.pop()
            row = nbrs[u]
            j = row.index(par)
            kids = row[j + 1:] + row[:j]
            code.append(len(kids))
            stack.extend((child, u) for child in reversed(kids))
        return tuple(code)

    @property
    def canonical_code(self) -> Tuple[int, ...]:
        cached = self._canonical
        if cached is None:
            cached = min(self.corner_code(v, i) for v, i in self.corners())
            object.__setattr__(self, "_canonical", cached)
        return cached

    def to_wire(self) -> str:
        return "U:" + ",".join(str(c) for c in self.canonical_code)

    @classmethod
    def from_wire(cls, line: str) -> "UnrootedPlaneTree":
        body = line.strip()
        if not body.startswith("U:"):
            raise TreeError(f"invariant violated: unrooted wire lines start with 'U:', got {line!r}")
        return cls.from_planted(PlantedTree.from_wire(body[2:]))

    def __eq__(self, other):
        if not isinstance(other, UnrootedPlaneTree):
            return NotImplemented
        return self.canonical_code == other.canonical_code

    def __hash__(self):
        return hash(self.canonical_code)

    def __repr__(self):
        return f"UnrootedPlaneTree({self.to_wire()!r})"

    def center_classify(self):
        """Iteratively prune leaves; ('vertex', v) or ('edge', (u, v)) remains."""
        n = self.n
        deg = [len(row) for row in self.neighbors]
        alive = n
        removed = [False] * n
        layer = [v for v in range(n) if deg[v] == 1]
        while alive > 2:
            nxt = []
            for v in layer:
                removed[v] = True
            alive -= len(layer)
            for v in layer:
                for u in self.neighbors[v]:
                    if not removed[u]:
                        deg[u] -= 1
                        if deg[u] == 1:
                            nxt.append(u)
            layer = nxt
        rest = [v for v in range(n) if not removed[v]]
        if len(rest) == 1:
            return ("vertex", rest[0])
        a, b = sorted(rest)
        if b not in self.neighbors[a]:
            raise TreeError("invariant violated: the two central vertices must be adjacent")
        return ("edge", (a, b))


def corner_root(u: UnrootedPlaneTree, corner: int) -> PlantedTree:
    """Plant ``u`` at the given corner index (0 <= corner < 2(n-1))."""
    total = 2 * (u.n - 1)
    if not (0 <= corner < total):
        raise TreeError(f"invariant violated: corner index must lie in [0, {total}), got {corner}")
    v, i = u.corners()[corner]
    return PlantedTree(u.corner_code(v, i))


def canonicalize(u: UnrootedPlaneTree) -> Tuple[int, ...]:
    """Lexicographically smallest corner code; equal iff plane-isomorphic."""
    return u.canonical_code


def center_classify(u: UnrootedPlaneTree):
    return u.center_classify()
