r"""The simultaneous mutual-influence model and its complete-graph closed forms.

One iteration replaces every fitness by a convex combination of its
neighbors' fitnesses, weighted by fitness and inverse degree:

    r_u(k+1) = r_u(k) + (1/Sigma) * sum_{v ~ u} r_v * (r_v - r_u) / deg(v),

equivalently r(k+1) = P r(k) for the row-stochastic matrix with off-diagonal
entries P_uv = r_v / (deg(v) * Sigma). The map is nonlinear in r. The
potential sum_u r_u / deg(u) never decreases; its exact per-step increment is
(1/Sigma) * sum_{uv in E} (r_u - r_v)^2 / (deg(u) deg(v)), which drives all
adjacent gaps to zero, so on connected graphs the vector converges to a
constant. On the complete graph the mutant/resident class gap contracts by
exactly (n-2)/(n-1) per iteration, giving closed forms and bounds on the
common limit value.

Defined for unweighted graphs (uniform neighbor weights).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .graphs import Graph, is_connected
from .rng import Stream, derive_seed

EXHAUSTIVE_PLACEMENT_CAP = 100_000


class AggregationError(ValueError):
    """Invalid input for the mutual-influence model."""


def _require_usable(g: Graph) -> None:
    if g.is_weighted:
        raise AggregationError("the mutual-influence model uses unweighted graphs")
    if np.any(g.degree == 0):
        raise AggregationError("every vertex needs at least one neighbor")


def _values(r) -> np.ndarray:
    vals = np.asarray(r.values if isinstance(r, FitnessVector) else r, dtype=np.float64)
    if vals.ndim != 1:
        raise AggregationError("fitness vector must be one-dimensional")
    if not np.all(vals > 0.0):
        raise AggregationError("all fitnesses must be strictly positive")
    return vals


@dataclass(frozen=True)
class FitnessVector:
    """Per-vertex fitness at iteration ``k``."""

    values: np.ndarray
    k: int = 0

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64)
        if not np.all(vals > 0.0):
            raise AggregationError("all fitnesses must be strictly positive")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @cached_property
    def sigma(self) -> float:
        """Total fitness of the population."""
        return float(math.fsum(self.values))


def mutant_vector(n: int, mutants, r: float) -> FitnessVector:
    """Initial vector: fitness ``r`` on ``mutants``, 1 elsewhere."""
    vals = np.ones(n)
    for v in mutants:
        if not 0 <= v < n:
            raise AggregationError(f"mutant vertex {v} outside 0..{n - 1}")
        vals[v] = r
    return FitnessVector(vals)


def influence_matrix(g: Graph, r) -> np.ndarray:
    """Row-stochastic influence matrix for the current fitness vector."""
    _require_usable(g)
    vals = _values(r)
    if len(vals) != g.n:
        raise AggregationError(f"fitness vector length {len(vals)} != n = {g.n}")
    sigma = math.fsum(vals)
    weight = vals / (g.degree * sigma)  # column j contribution r_j/(deg_j * Sigma)
    P = np.zeros((g.n, g.n))
    P[g.edge_u, g.edge_v] = weight[g.edge_v]
    P[g.edge_v, g.edge_u] = weight[g.edge_u]
    np.fill_diagonal(P, 1.0 - P.sum(axis=1))
    return P


def aggregate_step(g: Graph, r):
    """One iteration of the mutual-influence update.

    Accepts a :class:`FitnessVector` (returns one with ``k+1``) or a plain
    array (returns an array).
    """
    _require_usable(g)
    vals = _values(r)
    if len(vals) != g.n:
        raise AggregationError(f"fitness vector length {len(vals)} != n = {g.n}")
    sigma = math.fsum(vals)
    new_vals = vals + _edge_flow(g, vals) / sigma
    if isinstance(r, FitnessVector):
        return FitnessVector(new_vals, k=r.k + 1)
    return new_vals


def _edge_flow(g: Graph, vals: np.ndarray) -> np.ndarray:
    """Sigma-scaled update: delta_u = sum_{v ~ u} r_v (r_v - r_u)/deg(v)."""
    ru, rv = vals[g.edge_u], vals[g.edge_v]
    deg = g.degree.astype(np.float64)
    to_u = rv * (rv - ru) / deg[g.edge_v]
    to_v = ru * (ru - rv) / deg[g.edge_u]
    flow = np.bincount(g.edge_u, weights=to_u, minlength=g.n)
    flow += np.bincount(g.edge_v, weights=to_v, minlength=g.n)
    return flow


def potential(g: Graph, r) -> float:
    """sum_u r_u / deg(u); nondecreasing along trajectories."""
    _require_usable(g)
    vals = _values(r)
    return float(math.fsum(vals / g.degree))


def potential_increment(g: Graph, r) -> float:
    """Exact potential gain of one step from ``r``:
    (1/Sigma) * sum_{uv in E} (r_u - r_v)^2 / (deg(u) deg(v))."""
    _require_usable(g)
    vals = _values(r)
    sigma = math.fsum(vals)
    diff = vals[g.edge_u] - vals[g.edge_v]
    deg = g.degree.astype(np.float64)
    terms = diff * diff / (deg[g.edge_u] * deg[g.edge_v])
    return float(math.fsum(terms) / sigma)


def max_adjacent_gap(g: Graph, vals: np.ndarray) -> float:
    return float(np.max(np.abs(vals[g.edge_u] - vals[g.edge_v])))


@dataclass(frozen=True)
class AggregationRun:
    """Trajectory summary of one run to (attempted) convergence."""

    graph: Graph
    initial: np.ndarray
    phi: np.ndarray  # potential at k = 0..k_stop
    max_gap: np.ndarray  # max adjacent |r_u - r_v| at k = 0..k_stop
    min_fitness: np.ndarray
    max_fitness: np.ndarray
    converged: bool
    k_stop: int
    r0_hat: float  # mean of the final vector
    spread: float  # final max - min
    final: np.ndarray


def run_to_convergence(g: Graph, r0, eps: float, max_iters: int = 1_000_000) -> AggregationRun:
    """Iterate until every adjacent gap is below ``eps`` (or ``max_iters``).

    The stopping quantity is max_{uv in E} |r_u - r_v|: it is what the
    potential argument drives to zero, and on connected graphs it bounds how
    far the vector is from constant. ``r0_hat`` is the final vector mean,
    reported together with the final spread.
    """
    _require_usable(g)
    if not eps > 0.0:
        raise AggregationError(f"eps must be > 0, got {eps}")
    if not is_connected(g):
        raise AggregationError("graph must be connected")
    vals = _values(r0).copy()
    if len(vals) != g.n:
        raise AggregationError(f"fitness vector length {len(vals)} != n = {g.n}")
    initial = vals.copy()
    phi, gaps, mins, maxs = [], [], [], []
    converged = False
    k = 0
    while True:
        phi.append(potential(g, vals))
        gap = max_adjacent_gap(g, vals)
        gaps.append(gap)
        mins.append(float(vals.min()))
        maxs.append(float(vals.max()))
        if gap < eps:
            converged = True
            break
        if k >= max_iters:
            break
        vals = vals + _edge_flow(g, vals) / math.fsum(vals)
        k += 1
    return AggregationRun(
        graph=g,
        initial=initial,
        phi=np.array(phi),
        max_gap=np.array(gaps),
        min_fitness=np.array(mins),
        max_fitness=np.array(maxs),
        converged=converged,
        k_stop=k,
        r0_hat=float(vals.mean()),
        spread=float(vals.max() - vals.min()),
        final=vals,
    )


# ---------------------------------------------------------------------------
# Degree of influence
# ---------------------------------------------------------------------------


def round_mutant_count(n: int, alpha: float) -> int:
    """Nearest-integer mutant count for fraction ``alpha``, ties toward more."""
    if not 0.0 <= alpha <= 1.0:
        raise AggregationError(f"alpha must be in [0, 1], got {alpha}")
    return int(math.floor(alpha * n + 0.5))


@dataclass(frozen=True)
class InfluenceResult:
    """Limit fitness and influence aggregated over mutant placements.

    ``f_g`` expresses the mean limit fitness as the convex weight on the
    mutant fitness: r_0 = f * r + (1 - f) * 1. For r = 1 the weight is 0/0;
    it is reported as 0 with ``degenerate_r`` set.
    """

    n: int
    alpha: float
    mutant_count: int
    r: float
    mode: str  # "exhaustive" | "sampled"
    placements: int
    f_g: float
    r_0: float
    eps: float
    per_placement: tuple  # (vertices, r0_S, f_S) triples, placement order
    degenerate_r: bool = False


def degree_of_influence(g: Graph, r: float, alpha: float, *, mode: str = "exhaustive",
                        samples: int | None = None, seed: int = 0, eps: float = 1e-9,
                        max_iters: int = 1_000_000,
                        cap: int = EXHAUSTIVE_PLACEMENT_CAP) -> InfluenceResult:
    """Average the limit fitness over placements of ``alpha*n`` mutants.

    ``exhaustive`` enumerates all subsets of the rounded size (refused above
    ``cap``); ``sampled`` draws ``samples`` distinct subsets uniformly via the
    seeded stream. Placements are processed in lexicographic order so the
    aggregation is reproducible bit for bit.
    """
    _require_usable(g)
    if not is_connected(g):
        raise AggregationError("graph must be connected")
    n = g.n
    m = round_mutant_count(n, alpha)
    if mode == "exhaustive":
        count = math.comb(n, m)
        if count > cap:
            raise AggregationError(
                f"exhaustive mode would enumerate C({n},{m}) = {count} > cap = {cap} placements"
            )
        subsets = [tuple(c) for c in itertools.combinations(range(n), m)]
    elif mode == "sampled":
        if samples is None or samples < 1:
            raise AggregationError("sampled mode needs samples >= 1")
        total = math.comb(n, m)
        if samples > total:
            raise AggregationError(f"cannot draw {samples} distinct subsets of C({n},{m}) = {total}")
        stream = Stream(seed)
        chosen: set[tuple[int, ...]] = set()
        while len(chosen) < samples:
            chosen.add(tuple(sorted(stream.sample_indices(n, m))))
        subsets = sorted(chosen)
    else:
        raise AggregationError(f"unknown placement mode {mode!r}")

    degenerate = r == 1.0
    per = []
    for subset in subsets:
        run = run_to_convergence(g, mutant_vector(n, subset, r).values, eps, max_iters)
        if not run.converged:
            raise AggregationError(
                f"placement {subset} failed to converge within {max_iters} iterations"
            )
        r0_s = run.r0_hat
        f_s = 0.0 if degenerate else (r0_s - 1.0) / (r - 1.0)
        per.append((subset, r0_s, f_s))
    f_g = float(math.fsum(p[2] for p in per) / len(per))
    r_0 = float(math.fsum(p[1] for p in per) / len(per))
    return InfluenceResult(
        n=n, alpha=alpha, mutant_count=m, r=r, mode=mode, placements=len(per),
        f_g=f_g, r_0=r_0, eps=eps, per_placement=tuple(per), degenerate_r=degenerate,
    )


# ---------------------------------------------------------------------------
# Complete-graph closed forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CompleteGraphTrajectory:
    """Two-class trajectory on the complete graph.

    ``delta`` is carried by the exact one-step reduction
    delta(k+1) = delta(k) * (n-2)/(n-1), which the class updates imply
    algebraically; r1 - r2 equals it up to roundoff.
    """

    n: int
    mutants: int
    alpha: float
    r: float
    r1: np.ndarray
    r2: np.ndarray
    delta: np.ndarray
    weighted_mean: np.ndarray  # alpha*r1 + (1-alpha)*r2, nondecreasing

    def first_k_below(self, eps: float) -> int | None:
        """First iteration whose class gap is below ``eps``."""
        hits = np.nonzero(self.delta < eps)[0]
        return int(hits[0]) if hits.size else None


def complete_graph_trajectory(n: int, alpha: float, r: float, k_max: int) -> CompleteGraphTrajectory:
    """Iterate the exact two-class recurrences for ``k_max`` steps."""
    if n < 2:
        raise AggregationError(f"complete graph needs n >= 2, got {n}")
    if not r >= 1.0:
        raise AggregationError(f"mutant fitness must be >= 1, got {r}")
    a_float = alpha * n
    a = round(a_float)
    if abs(a_float - a) > 1e-9 or not 1 <= a <= n - 1:
        raise AggregationError(
            f"alpha*n must be an integer in [1, n-1], got alpha*n = {a_float}"
        )
    alpha_exact = a / n
    r1 = np.empty(k_max + 1)
    r2 = np.empty(k_max + 1)
    delta = np.empty(k_max + 1)
    r1[0], r2[0], delta[0] = r, 1.0, r - 1.0
    q = (n - 2) / (n - 1)
    for k in range(k_max):
        total = a * r1[k] + (n - a) * r2[k]
        r1[k + 1] = r1[k] - delta[k] * (n - a) * r2[k] / ((n - 1) * total)
        r2[k + 1] = r2[k] + delta[k] * a * r1[k] / ((n - 1) * total)
        delta[k + 1] = delta[k] * q
    wmean = alpha_exact * r1 + (1.0 - alpha_exact) * r2
    return CompleteGraphTrajectory(
        n=n, mutants=a, alpha=alpha_exact, r=r, r1=r1, r2=r2, delta=delta, weighted_mean=wmean
    )


@dataclass(frozen=True)
class LimitFitnessBounds:
    """Bounds on the common limit fitness of the complete graph."""

    lower: float
    upper: float
    single_mutant_lower: float | None = None
    single_mutant_upper: float | None = None


def limit_fitness_bounds(n: int, alpha: float, r: float) -> LimitFitnessBounds:
    """Closed-form limit-fitness window for mutant fraction ``alpha``.

    upper = 1 + a(r-1) + a(1-a)/(1+a(r-1)) * (r-1)^2/2, and the lower bound
    is the positive root of x^2 - x(1+a(r-1)) - a(1-a)(r-1)^2/2 = 0 (which
    dominates 1 + a(r-1)). When alpha*n == 1 the dedicated single-mutant
    window [1 + (r-1)/n, 1 + (r^2-1)/(2n)] is exposed as well.
    """
    if not 0.0 <= alpha <= 1.0:
        raise AggregationError(f"alpha must be in [0, 1], got {alpha}")
    if not r >= 1.0:
        raise AggregationError(f"mutant fitness must be >= 1, got {r}")
    base = 1.0 + alpha * (r - 1.0)
    spread_term = alpha * (1.0 - alpha) * (r - 1.0) ** 2
    upper = base + spread_term / (2.0 * base)
    lower = (base + math.sqrt(base * base + 2.0 * spread_term)) / 2.0
    sm_lo = sm_hi = None
    if abs(alpha * n - 1.0) < 1e-9:
        sm_lo = 1.0 + (r - 1.0) / n
        sm_hi = 1.0 + (r * r - 1.0) / (2.0 * n)
    return LimitFitnessBounds(lower=lower, upper=upper,
                              single_mutant_lower=sm_lo, single_mutant_upper=sm_hi)
