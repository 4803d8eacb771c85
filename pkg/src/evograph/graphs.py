"""Undirected weighted graphs and the generator families used throughout.

Vertices are dense 0-based integers. Edges are unordered pairs with a strictly
positive weight (default 1.0); self-loops, duplicate edges, and weights <= 0
are rejected at construction, so "edge present" is always unambiguous.

Generator layout conventions (experiments rely on these):

* ``clique_wheel(n)``: vertices ``0..n-1`` form the clique, ``n..2n-1`` the
  outer ring (cycle), and clique vertex ``i`` is matched with ring vertex
  ``n + i``.
* ``star(n)`` / ``weighted_star(n, eps)``: vertex 0 is the hub, ``1..n`` are
  the leaves; in the weighted star the edge to leaf 1 carries weight ``eps``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Structurally invalid graph, family parameters, or edge-list text."""


EdgeLike = Sequence  # (u, v) or (u, v, w)


class Graph:
    """Immutable undirected graph with positive edge weights.

    All derived structure (adjacency in CSR form, degrees, per-vertex
    cumulative neighbor weights for sampling) is built once at construction
    and the backing arrays are frozen, so instances are safe to share across
    threads without synchronization.
    """

    def __init__(self, n: int, edges: Iterable[EdgeLike]):
        if not isinstance(n, (int, np.integer)) or n <= 0:
            raise GraphError(f"vertex count must be a positive integer, got {n!r}")
        self.n = int(n)
        self.edges = self._canonicalize(self.n, edges)
        self._build_arrays()

    @staticmethod
    def _canonicalize(n: int, edges: Iterable[EdgeLike]) -> tuple[tuple[int, int, float], ...]:
        seen: set[tuple[int, int]] = set()
        out = []
        for e in edges:
            if len(e) == 2:
                u, v = e
                w = 1.0
            elif len(e) == 3:
                u, v, w = e
            else:
                raise GraphError(f"edge must be (u, v) or (u, v, w), got {e!r}")
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) has endpoint outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u} is not allowed")
            if w < 0.0:
                raise GraphError(f"edge ({u}, {v}) has negative weight {w}")
            if w == 0.0:
                raise GraphError(
                    f"edge ({u}, {v}) has weight 0; omit the edge instead of weighting it 0"
                )
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"duplicate edge ({key[0]}, {key[1]})")
            seen.add(key)
            out.append((key[0], key[1], w))
        out.sort()
        return tuple(out)

    def _build_arrays(self) -> None:
        n, m = self.n, len(self.edges)
        eu = np.empty(m, dtype=np.int64)
        ev = np.empty(m, dtype=np.int64)
        ew = np.empty(m, dtype=np.float64)
        for i, (u, v, w) in enumerate(self.edges):
            eu[i], ev[i], ew[i] = u, v, w
        deg = np.zeros(n, dtype=np.int64)
        np.add.at(deg, eu, 1)
        np.add.at(deg, ev, 1)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        indices = np.empty(2 * m, dtype=np.int64)
        slot_w = np.empty(2 * m, dtype=np.float64)
        fill = indptr[:-1].copy()
        for u, v, w in self.edges:
            indices[fill[u]] = v
            slot_w[fill[u]] = w
            fill[u] += 1
            indices[fill[v]] = u
            slot_w[fill[v]] = w
            fill[v] += 1
        wdeg = np.zeros(n, dtype=np.float64)
        cum_w = np.empty(2 * m, dtype=np.float64)
        for u in range(n):
            a, b = indptr[u], indptr[u + 1]
            block = np.add.accumulate(slot_w[a:b]) if b > a else slot_w[a:b]
            cum_w[a:b] = block
            wdeg[u] = block[-1] if b > a else 0.0
        for arr in (eu, ev, ew, deg, indptr, indices, slot_w, wdeg, cum_w):
            arr.flags.writeable = False
        self.edge_u, self.edge_v, self.edge_w = eu, ev, ew
        self.degree = deg
        self.indptr, self.indices = indptr, indices
        self.slot_weight = slot_w
        self.weighted_degree = wdeg
        self.cum_weight = cum_w

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def is_weighted(self) -> bool:
        """True if any edge weight differs from 1.0."""
        return bool(np.any(self.edge_w != 1.0))

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        a, b = min(u, v), max(u, v)
        i = np.searchsorted(self.edge_u, a)
        while i < self.m and self.edge_u[i] == a:
            if self.edge_v[i] == b:
                return True
            i += 1
        return False

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        tag = "weighted, " if self.is_weighted else ""
        return f"Graph(n={self.n}, {tag}{self.m} edges)"


def is_connected(g: Graph) -> bool:
    """True iff ``g`` is connected (all weights are positive by construction)."""
    if g.n == 1:
        return True
    seen = np.zeros(g.n, dtype=bool)
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        u = stack.pop()
        for v in g.neighbors(u):
            if not seen[v]:
                seen[v] = True
                count += 1
                stack.append(int(v))
    return count == g.n


# ---------------------------------------------------------------------------
# Generator families
# ---------------------------------------------------------------------------

FAMILY_TAGS = ("complete", "cycle", "path", "star", "clique_wheel", "weighted_star", "custom")


@dataclass(frozen=True)
class GraphFamily:
    """A named graph family with its parameters.

    ``n`` is the family size parameter (vertex count for complete/cycle/path,
    leaf count for stars, clique size for the clique wheel). ``eps`` is only
    meaningful for ``weighted_star``.
    """

    tag: str
    n: int
    eps: float | None = None

    def __post_init__(self):
        if self.tag not in FAMILY_TAGS:
            raise GraphError(f"unknown graph family {self.tag!r}; expected one of {FAMILY_TAGS}")


def complete_graph(n: int) -> Graph:
    if n < 2:
        raise GraphError(f"complete graph needs n >= 2, got {n}")
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError(f"cycle needs n >= 3, got {n}")
    return Graph(n, [(u, (u + 1) % n) for u in range(n)])


def path_graph(n: int) -> Graph:
    if n < 2:
        raise GraphError(f"path needs n >= 2, got {n}")
    return Graph(n, [(u, u + 1) for u in range(n - 1)])


def star_graph(n_leaves: int) -> Graph:
    """Star with hub 0 and ``n_leaves`` leaves (``n_leaves + 1`` vertices)."""
    if n_leaves < 1:
        raise GraphError(f"star needs at least 1 leaf, got {n_leaves}")
    return Graph(n_leaves + 1, [(0, i) for i in range(1, n_leaves + 1)])


def weighted_star(n_leaves: int, eps: float) -> Graph:
    """Star whose edge to leaf 1 has weight ``eps``; all other edges weight 1.

    As ``eps`` shrinks, leaf 1 behaves like a source: the hub almost never
    reproduces into it, while it reproduces into the hub with probability 1.
    """
    if n_leaves < 2:
        raise GraphError(f"weighted star needs at least 2 leaves, got {n_leaves}")
    if not eps > 0.0:
        raise GraphError(f"weighted star needs eps > 0, got {eps}")
    edges = [(0, 1, float(eps))] + [(0, i, 1.0) for i in range(2, n_leaves + 1)]
    return Graph(n_leaves + 1, edges)


def clique_wheel(n: int) -> Graph:
    """Clique of size ``n`` plus an outer ``n``-cycle joined by a perfect matching.

    2n vertices, n(n-1)/2 + 2n edges. Clique vertices are 0..n-1, ring
    vertices n..2n-1, and clique vertex i is matched with ring vertex n+i.
    """
    if n < 3:
        raise GraphError(f"clique wheel needs clique size n >= 3, got {n}")
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges += [(n + i, n + (i + 1) % n) for i in range(n)]
    edges += [(i, n + i) for i in range(n)]
    return Graph(2 * n, edges)


def clique_side(n: int) -> tuple[int, ...]:
    """Clique-side vertices of ``clique_wheel(n)``."""
    return tuple(range(n))


def ring_side(n: int) -> tuple[int, ...]:
    """Ring-side vertices of ``clique_wheel(n)``."""
    return tuple(range(n, 2 * n))


def generate(family: GraphFamily) -> Graph:
    """Build the named family member; raises :class:`GraphError` on bad parameters."""
    if family.tag == "complete":
        return complete_graph(family.n)
    if family.tag == "cycle":
        return cycle_graph(family.n)
    if family.tag == "path":
        return path_graph(family.n)
    if family.tag == "star":
        return star_graph(family.n)
    if family.tag == "clique_wheel":
        return clique_wheel(family.n)
    if family.tag == "weighted_star":
        if family.eps is None:
            raise GraphError("weighted_star requires eps")
        return weighted_star(family.n, family.eps)
    raise GraphError(f"family {family.tag!r} has no generator (custom graphs come from edge lists)")


# ---------------------------------------------------------------------------
# Edge-list text format
# ---------------------------------------------------------------------------
#
# One edge per line: "u v" or "u v w" with 0-based indices; '#' starts a
# comment line; blank lines are ignored. Canonical form sorts edges
# lexicographically with u < v and omits unit weights.


def save_edge_list(g: Graph) -> str:
    lines = []
    for u, v, w in g.edges:
        lines.append(f"{u} {v}" if w == 1.0 else f"{u} {v} {w!r}")
    return "\n".join(lines) + "\n"


def load_edge_list(text: str, n: int | None = None) -> Graph:
    """Parse edge-list text into a :class:`Graph`.

    ``n`` defaults to ``max vertex index + 1``; pass it explicitly for graphs
    whose highest-numbered vertices are isolated.
    """
    edges = []
    max_idx = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GraphError(f"line {lineno}: expected 'u v [w]', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise GraphError(f"line {lineno}: bad vertex index in {raw!r}") from exc
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError as exc:
                raise GraphError(f"line {lineno}: bad weight in {raw!r}") from exc
        else:
            w = 1.0
        if u < 0 or v < 0:
            raise GraphError(f"line {lineno}: negative vertex index in {raw!r}")
        edges.append((u, v, w))
        max_idx = max(max_idx, u, v)
    if n is None:
        if max_idx < 0:
            raise GraphError("empty edge list and no explicit vertex count")
        n = max_idx + 1
    try:
        return Graph(n, edges)
    except GraphError:
        raise
