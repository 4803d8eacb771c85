"""Degree-based bounds on the fixation probability of unweighted graphs.

Two families:

* a generic upper bound from the inverse-degree mass around each edge
  (worst over ordered edge endpoints): r^2 / (r^2 + r*Q_u + Q_u*Q_uv/2),
  where Q_u sums 1/deg(x) over neighbors x of u and Q_uv does the same
  over the punctured neighborhoods of both endpoints;
* a sandwich from the worst adjacent-degree ratio lambda: the process is
  dominated below/above by birth-death chains with forward bias r/lambda
  and r*lambda, giving fixation-probability bounds in closed form.

Both apply to connected unweighted graphs only.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph, is_connected
from .moran import MoranError, _biased_walk_fixation


def _require_unweighted(g: Graph) -> None:
    if g.is_weighted:
        raise MoranError("degree-based bounds apply to unweighted graphs only")
    if g.n < 2 or not is_connected(g):
        raise MoranError("graph must be connected")


@dataclass(frozen=True)
class EdgeNeighborhood:
    """Q terms for one ordered edge endpoint pair (u, v)."""

    u: int
    v: int
    q_u: float
    q_uv: float

    def value(self, r: float) -> float:
        return r * r / (r * r + r * self.q_u + self.q_u * self.q_uv / 2.0)


@dataclass(frozen=True)
class GenericUpperBound:
    """Per-ordered-edge Q table; the bound is the max of the edge values."""

    entries: tuple[EdgeNeighborhood, ...]

    def value(self, r: float) -> float:
        return max(e.value(r) for e in self.entries)

    def argmax_edge(self, r: float) -> tuple[int, int]:
        best = max(self.entries, key=lambda e: e.value(r))
        return best.u, best.v


def generic_upper_bound(g: Graph) -> GenericUpperBound:
    """Q_u / Q_uv table over both orientations of every edge."""
    _require_unweighted(g)
    inv_deg = 1.0 / g.degree.astype(np.float64)
    q = np.array([inv_deg[g.neighbors(u)].sum() for u in range(g.n)])
    entries = []
    for u, v, _ in g.edges:
        q_uv = q[u] - inv_deg[v] + q[v] - inv_deg[u]
        entries.append(EdgeNeighborhood(u, v, float(q[u]), float(q_uv)))
        entries.append(EdgeNeighborhood(v, u, float(q[v]), float(q_uv)))
    return GenericUpperBound(tuple(entries))


@dataclass(frozen=True)
class DegreeRatioBounds:
    """Fixation sandwiched between biased-walk values at bias r/lambda and r*lambda."""

    n: int
    lam: float

    def lower(self, r: float) -> float:
        return _biased_walk_fixation(self.n, r / self.lam)

    def upper(self, r: float) -> float:
        return _biased_walk_fixation(self.n, r * self.lam)


def lambda_bounds(g: Graph) -> DegreeRatioBounds:
    """lambda = max over edges of the adjacent-degree ratio (both orientations)."""
    _require_unweighted(g)
    deg = g.degree.astype(np.float64)
    ratios = deg[g.edge_u] / deg[g.edge_v]
    lam = float(np.max(np.maximum(ratios, 1.0 / ratios)))
    return DegreeRatioBounds(n=g.n, lam=lam)
