r"""The sequential all-or-nothing model: simulation, exact absorption, closed forms.

States are subsets of black (mutant) vertices, encoded as bitmasks. One step
picks a reproducer u with probability fitness(u)/total fitness (black fitness
r, white fitness 1) and copies u's color onto a neighbor v chosen with
probability w_uv / weighted_degree(u). The empty and full states are
absorbing; on connected graphs one of them is reached with probability 1.

The exact solver computes the absorption-at-full probability h(S) for every
state of the 2^n chain. Fixation probability of the graph is the mean of
h over the n single-mutant states.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import _kernels
from .graphs import Graph, is_connected
from .rng import Stream, derive_seed

EXACT_STATE_CAP = 16  # 2^16 states; refuse beyond this by default


class MoranError(ValueError):
    """Invalid configuration or precondition for the sequential model."""


# ---------------------------------------------------------------------------
# Configuration and result types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Placement:
    """Initial mutant placement.

    ``uniform``: one mutant on a vertex drawn uniformly (from ``vertices`` if
    given, else from all vertices), re-drawn each trial. ``set``: the exact
    mutant set ``vertices``.
    """

    kind: str
    vertices: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("uniform", "set"):
            raise MoranError(f"unknown placement kind {self.kind!r}")
        if self.kind == "set" and not self.vertices:
            raise MoranError("set placement needs at least one vertex")

    @staticmethod
    def uniform(vertices=None) -> "Placement":
        vs = None if vertices is None else tuple(int(v) for v in vertices)
        return Placement("uniform", vs)

    @staticmethod
    def vertex(u: int) -> "Placement":
        return Placement("set", (int(u),))

    @staticmethod
    def mutant_set(vertices) -> "Placement":
        return Placement("set", tuple(sorted(int(v) for v in vertices)))


@dataclass(frozen=True)
class MoranConfig:
    r: float
    placement: Placement = field(default_factory=Placement.uniform)
    max_steps: int = 10**9  # cap on state-changing events per trial

    def __post_init__(self):
        if not self.r > 0.0:
            raise MoranError(f"relative fitness must be > 0, got {self.r}")
        if self.max_steps < 1:
            raise MoranError("max_steps must be >= 1")


@dataclass(frozen=True)
class SimulationResult:
    outcome: str  # "fixation" | "extinction" | "truncated"
    steps: int  # state-changing transitions


@dataclass(frozen=True)
class FixationEstimate:
    """Monte Carlo fixation estimate over ``trials`` counted (non-truncated) runs."""

    probability: float
    trials: int
    fixations: int
    std_error: float
    seed: int
    mean_absorption_steps: float
    truncated: int = 0


@dataclass(frozen=True)
class AbsorptionSolution:
    """Absorption-at-full probabilities for every state of the chain."""

    n: int
    h: np.ndarray  # length 2^n, h[0] = 0, h[-1] = 1
    per_vertex: np.ndarray  # h at each single-mutant state
    f_g: float  # mean of per_vertex
    residual: float  # max |h - Ph| over transient states


_OUTCOME_NAMES = {
    _kernels.OUTCOME_EXTINCTION: "extinction",
    _kernels.OUTCOME_FIXATION: "fixation",
    _kernels.OUTCOME_TRUNCATED: "truncated",
}


# ---------------------------------------------------------------------------
# Single-step kernel (didactic path) and the full transition law
# ---------------------------------------------------------------------------


def _check_state(g: Graph, state: int) -> None:
    if state < 0 or state >> g.n:
        raise MoranError(f"state {state:#x} has bits outside 0..{g.n - 1}")


def transition_distribution(g: Graph, state: int, r: float):
    """All one-step transitions from ``state``: (targets, probabilities).

    Targets are bitmask states sorted ascending and include ``state`` itself
    carrying the self-loop mass; probabilities sum to 1. Absorbing states map
    to a point mass on themselves.
    """
    _check_state(g, state)
    n = g.n
    full = (1 << n) - 1
    if state == 0 or state == full:
        return np.array([state], dtype=np.int64), np.array([1.0])
    nb = bin(state).count("1")
    total = r * nb + (n - nb)
    masses: dict[int, float] = {}
    moving = 0.0
    for v in range(n):
        # mass pushed into v by its neighbors of the opposite color
        into_v = 0.0
        for j in range(g.indptr[v], g.indptr[v + 1]):
            u = int(g.indices[j])
            w = g.slot_weight[j] / g.weighted_degree[u]
            if (state >> v) & 1 != (state >> u) & 1:
                into_v += (r if (state >> u) & 1 else 1.0) * w
        if into_v > 0.0:
            target = state ^ (1 << v)
            masses[target] = masses.get(target, 0.0) + into_v / total
            moving += into_v / total
    masses[state] = masses.get(state, 0.0) + (1.0 - moving)
    targets = np.array(sorted(masses), dtype=np.int64)
    probs = np.array([masses[int(t)] for t in targets])
    return targets, probs


def step(g: Graph, state: int, r: float, stream: Stream) -> int:
    """Sample one reproduction event; returns the next state (flips <= 1 bit)."""
    _check_state(g, state)
    n = g.n
    full = (1 << n) - 1
    if state == 0 or state == full:
        return state
    nb = bin(state).count("1")
    total = r * nb + (n - nb)
    x = stream.random() * total
    acc = 0.0
    u = n - 1
    for cand in range(n):
        acc += r if (state >> cand) & 1 else 1.0
        if x < acc:
            u = cand
            break
    a, b = g.indptr[u], g.indptr[u + 1]
    t = stream.random() * g.weighted_degree[u]
    j = a + int(np.searchsorted(g.cum_weight[a:b], t, side="right"))
    j = min(j, b - 1)
    v = int(g.indices[j])
    if (state >> u) & 1:
        return state | (1 << v)
    return state & ~(1 << v)


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------


def _placement_args(g: Graph, placement: Placement):
    n = g.n
    if placement.kind == "uniform":
        cands = placement.vertices if placement.vertices is not None else tuple(range(n))
        for v in cands:
            if not 0 <= v < n:
                raise MoranError(f"placement vertex {v} outside 0..{n - 1}")
        return 0, np.array(cands, dtype=np.int64), np.zeros(n, dtype=np.uint8)
    mask = np.zeros(n, dtype=np.uint8)
    for v in placement.vertices:
        if not 0 <= v < n:
            raise MoranError(f"placement vertex {v} outside 0..{n - 1}")
        mask[v] = 1
    return 1, np.zeros(1, dtype=np.int64), mask


def _require_runnable(g: Graph) -> None:
    if g.n < 2:
        raise MoranError("dynamics need at least 2 vertices")
    if not is_connected(g):
        raise MoranError("graph must be connected")


def simulate_to_absorption(g: Graph, cfg: MoranConfig, stream: Stream) -> SimulationResult:
    """One trial to absorption; self-loop events are skipped, steps count changes."""
    _require_runnable(g)
    mode, cands, mask = _placement_args(g, cfg.placement)
    seed = stream.next_u64()
    outcome, steps = _kernels._run_single(
        g.indptr, g.indices, g.cum_weight, g.weighted_degree, g.is_weighted,
        g.n, float(cfg.r), mode, cands, mask, seed, cfg.max_steps,
    )
    return SimulationResult(_OUTCOME_NAMES[int(outcome)], int(steps))


def estimate_fixation(g: Graph, cfg: MoranConfig, trials: int, master_seed: int) -> FixationEstimate:
    """Monte Carlo fixation probability over independent trials.

    Trial ``t`` runs on the stream derived from (master_seed, t), so the
    result is bit-identical for any thread count. Truncated trials (step cap
    hit) are excluded from the ratio and reported in ``truncated``.
    """
    _require_runnable(g)
    if trials < 1:
        raise MoranError("trials must be >= 1")
    mode, cands, mask = _placement_args(g, cfg.placement)
    outcomes = np.empty(trials, dtype=np.int64)
    steps = np.empty(trials, dtype=np.int64)
    _kernels._run_trials(
        g.indptr, g.indices, g.cum_weight, g.weighted_degree, g.is_weighted,
        g.n, float(cfg.r), mode, cands, mask, trials, master_seed & ((1 << 64) - 1),
        cfg.max_steps, outcomes, steps,
    )
    fixations = int(np.sum(outcomes == _kernels.OUTCOME_FIXATION))
    truncated = int(np.sum(outcomes == _kernels.OUTCOME_TRUNCATED))
    counted = trials - truncated
    if counted == 0:
        raise MoranError("every trial hit the step cap; raise max_steps")
    p = fixations / counted
    se = math.sqrt(p * (1.0 - p) / counted)
    mean_steps = float(np.mean(steps[outcomes != _kernels.OUTCOME_TRUNCATED]))
    return FixationEstimate(
        probability=p,
        trials=counted,
        fixations=fixations,
        std_error=se,
        seed=master_seed,
        mean_absorption_steps=mean_steps,
        truncated=truncated,
    )


def trial_stream(master_seed: int, trial_index: int) -> Stream:
    """The per-trial stream used by :func:`estimate_fixation` (for tests)."""
    return Stream(derive_seed(master_seed, trial_index))


# ---------------------------------------------------------------------------
# Exact absorption probabilities
# ---------------------------------------------------------------------------


def _push_matrix(g: Graph) -> np.ndarray:
    """C[u, v] = mass u pushes into neighbor v per reproduction: w_uv/wdeg(u)."""
    n = g.n
    C = np.zeros((n, n))
    for u, v, w in g.edges:
        C[u, v] = w / g.weighted_degree[u]
        C[v, u] = w / g.weighted_degree[v]
    return C


def exact_fixation(g: Graph, r: float, *, cap: int = EXACT_STATE_CAP,
                   residual_target: float = 1e-12) -> AbsorptionSolution:
    """Solve the 2^n-state absorption system h = P h, h(empty)=0, h(full)=1.

    The self-loop mass cancels from the balance equations, so only the
    per-state gain/loss coefficients are materialized (a sparse system with
    <= 2n entries per state). A sparse LU solve is refined iteratively until
    max |h - Ph| <= residual_target.
    """
    _require_runnable(g)
    if not r > 0.0:
        raise MoranError(f"relative fitness must be > 0, got {r}")
    n = g.n
    if n > cap:
        raise MoranError(
            f"exact solver refuses n = {n} > cap = {cap} (2^n states); "
            f"raise cap explicitly if you really want this"
        )
    size = 1 << n
    full = size - 1
    vbits = np.arange(n)
    states = np.arange(size, dtype=np.int64)
    bits = ((states[:, None] >> vbits) & 1).astype(np.float64)  # (2^n, n)
    in_mass = bits @ _push_matrix(g)  # mass pushed into v by black neighbors
    tot_in = _push_matrix(g).sum(axis=0)

    transient = states[1:full]
    t_index = np.full(size, -1, dtype=np.int64)
    t_index[transient] = np.arange(size - 2)

    rows, cols, data = [], [], []
    rhs = np.zeros(size - 2)
    diag = np.zeros(size - 2)
    for v in range(n):
        bit = (transient >> v) & 1
        # gains: v white, mass r * in_mass
        gmask = bit == 0
        gstas = transient[gmask]
        gcoef = r * in_mass[gstas, v]
        gtgt = gstas | (1 << v)
        diag[t_index[gstas]] += gcoef
        into_full = gtgt == full
        rhs[t_index[gstas[into_full]]] += gcoef[into_full]
        keep = ~into_full
        rows.append(t_index[gstas[keep]])
        cols.append(t_index[gtgt[keep]])
        data.append(gcoef[keep])
        # losses: v black, mass tot_in - in_mass
        lmask = bit == 1
        lstas = transient[lmask]
        lcoef = tot_in[v] - in_mass[lstas, v]
        ltgt = lstas & ~(1 << v)
        diag[t_index[lstas]] += lcoef
        keep = ltgt != 0
        rows.append(t_index[lstas[keep]])
        cols.append(t_index[ltgt[keep]])
        data.append(lcoef[keep])
    off = sp.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(size - 2, size - 2),
    ).tocsc()
    system = sp.diags(diag, format="csc") - off

    popcount = bits.sum(axis=1)[1:full]
    weight = r * popcount + (n - popcount)  # total fitness per transient state

    lu = spla.splu(system)
    h_t = lu.solve(rhs)
    for _ in range(25):
        lin_res = rhs - system @ h_t
        if np.max(np.abs(lin_res) / weight) <= residual_target:
            break
        h_t = h_t + lu.solve(lin_res)
    residual = float(np.max(np.abs(rhs - system @ h_t) / weight))
    if residual > residual_target:
        raise MoranError(f"exact solve stalled at residual {residual:.3e}")

    h = np.zeros(size)
    h[full] = 1.0
    h[transient] = np.clip(h_t, 0.0, 1.0)
    per_vertex = h[1 << vbits]
    return AbsorptionSolution(
        n=n, h=h, per_vertex=per_vertex, f_g=float(per_vertex.mean()), residual=residual
    )


def absorption_csv(sol: AbsorptionSolution) -> str:
    """State dump 'bitmask,h' rows (intended for n <= 8)."""
    if sol.n > 8:
        raise MoranError(f"state dump limited to n <= 8, got n = {sol.n}")
    lines = ["bitmask,h"]
    for s, value in enumerate(sol.h):
        lines.append(f"{s},{value!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def _biased_walk_fixation(n: int, bias: float) -> float:
    """Absorption-at-n probability of the birth-death chain with constant
    forward bias, starting from one: 1 / (1 + sum_{i=1}^{n-1} bias^-i).

    Evaluated via the sum so bias = 1 yields exactly 1/n.
    """
    if n < 1:
        raise MoranError(f"population size must be >= 1, got {n}")
    if not bias > 0.0:
        raise MoranError(f"bias must be > 0, got {bias}")
    acc = 1.0
    term = 1.0
    inv = 1.0 / bias
    for _ in range(n - 1):
        term *= inv
        acc += term
        if acc > 1e300:
            return 0.0
    return 1.0 / acc


def birth_death_fixation(n: int, r: float) -> float:
    """Fixation probability of the fitness-r Moran chain on n exchangeable
    sites: (1 - 1/r) / (1 - r^-n), with the r = 1 limit 1/n taken exactly."""
    return _biased_walk_fixation(n, r)


def expected_hitting_time(m: int, p: float) -> float:
    """Expected steps for the reflecting birth-death chain on 0..m to reach m
    from state 1 (forward probability p, reflection at 0).

    Closed form: (1 + 1/(q-p)) * ((q/p)^m - q/p) / (q/p - 1) - (m-1)/(q-p)
    with q = 1 - p. Undefined at p = 1/2 (zero drift).
    """
    if m < 1:
        raise MoranError(f"target index must be >= 1, got {m}")
    if not 0.0 < p < 1.0:
        raise MoranError(f"forward probability must be in (0, 1), got {p}")
    if p == 0.5:
        raise MoranError("p = 1/2 has zero drift; the closed form does not apply")
    q = 1.0 - p
    ratio = q / p
    return (1.0 + 1.0 / (q - p)) * (ratio**m - ratio) / (ratio - 1.0) - (m - 1) / (q - p)
