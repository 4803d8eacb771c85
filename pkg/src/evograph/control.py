r"""Invasion control on the complete graph: phase-based and continuous stabilizers.

Both mechanisms run the mutual-influence dynamic on the complete graph with
an initial fraction alpha of mutants at fitness r, and force chosen vertices
("stabilizers") back to the healthy fitness 1 until every fitness is at most
1 + delta.

Phase mode lets each phase converge (relative spread below eps) before
resetting beta*n vertices to 1; the phase budget is logarithmic in r - 1 and
independent of n. Continuous mode pins the same beta*n stabilizers at 1 on
every iteration and follows the exact three-class recurrences; the iteration
budget scales like (r/beta) * (n-1) * ln((r-1)/delta).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .aggregation import AggregationError, _edge_flow, round_mutant_count
from .graphs import complete_graph
from .rng import Stream, derive_seed

PHASE_ITERATION_CAP = 10_000_000  # hard per-phase safety; phases converge geometrically

POLICIES = ("highest-fitness", "random", "fixed-prefix")


class ControlError(ValueError):
    """Invalid control configuration or violated theorem hypothesis."""


@dataclass(frozen=True)
class ControlConfig:
    n: int
    alpha: float
    r: float
    beta: float
    delta: float
    mode: str  # "phases" | "continuous"
    eps: float = 1e-4  # phase-convergence tolerance (phase mode only)
    policy: str = "highest-fitness"  # stabilizer choice (phase mode only)
    policy_seed: int = 0

    def __post_init__(self):
        if self.n < 3:
            raise ControlError(f"population size must be >= 3, got {self.n}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ControlError(f"alpha must be in [0, 1], got {self.alpha}")
        if not 0.0 <= self.beta <= 1.0:
            raise ControlError(f"beta must be in [0, 1], got {self.beta}")
        if not self.r >= 1.0:
            raise ControlError(f"mutant fitness must be >= 1, got {self.r}")
        if not self.delta > 0.0:
            raise ControlError(f"delta must be > 0, got {self.delta}")
        if self.mode not in ("phases", "continuous"):
            raise ControlError(f"unknown control mode {self.mode!r}")
        if self.mode == "phases":
            if not self.eps > 0.0:
                raise ControlError(f"eps must be > 0, got {self.eps}")
            root = math.sqrt(self.eps)
            if not self.beta / 2.0 > root:
                raise ControlError(
                    f"phase mode requires beta/2 > sqrt(eps): {self.beta / 2.0} <= {root}"
                )
            if not self.delta > 4.0 / 3.0 * root:
                raise ControlError(
                    f"phase mode requires delta > (4/3)*sqrt(eps): {self.delta} <= {4.0 / 3.0 * root}"
                )
            if self.policy not in POLICIES:
                raise ControlError(f"unknown stabilizer policy {self.policy!r}")


def class_counts(cfg: ControlConfig) -> tuple[int, int, int]:
    """(mutants, stabilizers, residents): alpha*n rounded half-up, beta*n
    floored with a minimum of 1 when beta > 0, remainder to residents."""
    a = round_mutant_count(cfg.n, cfg.alpha)
    b = max(1, math.floor(cfg.beta * cfg.n)) if cfg.beta > 0.0 else 0
    c = cfg.n - a - b
    if c < 0:
        raise ControlError(
            f"class counts overflow the population: mutants {a} + stabilizers {b} > n = {cfg.n}"
        )
    return a, b, c


@dataclass(frozen=True)
class PhaseSummary:
    phase: int
    iterations: int
    limit_estimate: float  # vector mean at phase end
    min_fitness: float
    max_fitness: float


@dataclass(frozen=True)
class ControlReport:
    """Outcome of one control run, with the matching analytic budget.

    ``used <= bound`` is a property to observe, not an assumption; when the
    10x-bound non-termination guard trips, ``guard_tripped`` is set and
    ``healthy`` is False.
    """

    mode: str
    n: int
    alpha: float
    r: float
    beta: float
    delta: float
    mutants: int
    stabilizers: int
    residents: int
    used: int
    bound: float
    healthy: bool
    guard_tripped: bool = False
    eps: float | None = None
    policy: str | None = None
    phases: tuple[PhaseSummary, ...] | None = None
    series_r1: np.ndarray | None = None  # continuous mode: mutant-class fitness
    series_r2: np.ndarray | None = None  # continuous mode: resident-class fitness


# ---------------------------------------------------------------------------
# Analytic budgets
# ---------------------------------------------------------------------------


def phase_bound(cfg: ControlConfig) -> float:
    """Phase budget: 1 + ln((eps + (1+eps)(1+alpha)/2 * (r-1)) / (delta - 4/3 sqrt(eps)))
    / ln(1 / ((1+eps)(1-beta/2))). Callers take the ceiling.

    Requires the phase-mode hypotheses beta/2 > sqrt(eps) and
    delta > (4/3) sqrt(eps); violations raise naming the inequality.
    """
    if cfg.mode != "phases":
        raise ControlError("phase_bound applies to phase-mode configurations")
    eps, alpha, r, beta, delta = cfg.eps, cfg.alpha, cfg.r, cfg.beta, cfg.delta
    numerator = eps + (1.0 + eps) * (1.0 + alpha) / 2.0 * (r - 1.0)
    denominator = delta - 4.0 / 3.0 * math.sqrt(eps)
    shrink = (1.0 + eps) * (1.0 - beta / 2.0)
    return 1.0 + math.log(numerator / denominator) / math.log(1.0 / shrink)


def continuous_bound(n: int, r: float, beta: float, delta: float) -> float:
    """Iteration budget (r/beta) * (n-1) * ln((r-1)/delta); 0 when already healthy."""
    if not 0.0 < beta <= 1.0:
        raise ControlError(f"beta must be in (0, 1], got {beta}")
    if not delta > 0.0:
        raise ControlError(f"delta must be > 0, got {delta}")
    if not r > 1.0 or r - 1.0 <= delta:
        return 0.0
    return (r / beta) * (n - 1) * math.log((r - 1.0) / delta)


# ---------------------------------------------------------------------------
# Phase mode
# ---------------------------------------------------------------------------


def _choose_stabilizers(vec: np.ndarray, b: int, policy: str, policy_seed: int, phase: int) -> np.ndarray:
    if policy == "highest-fitness":
        return np.argsort(-vec, kind="stable")[:b]
    if policy == "fixed-prefix":
        return np.arange(b)
    stream = Stream(derive_seed(policy_seed, phase))
    return np.array(stream.sample_indices(len(vec), b), dtype=np.int64)


def run_phase_control(cfg: ControlConfig) -> ControlReport:
    """Phase mode: converge, check health, reset stabilizers, repeat.

    Each phase runs the full n-vertex dynamic on the complete graph until the
    relative spread (max - min)/min drops below eps — the observable proxy for
    being eps-close to the phase limit. Health (max fitness <= 1 + delta) is
    evaluated at phase ends; stabilizers are inserted only between phases.
    """
    if cfg.mode != "phases":
        raise ControlError("run_phase_control needs a phase-mode configuration")
    a, b, _ = class_counts(cfg)
    g = complete_graph(cfg.n)
    vec = np.ones(cfg.n)
    vec[:a] = cfg.r
    bound = phase_bound(cfg)
    guard = max(1, math.ceil(10.0 * max(bound, 1.0)))
    threshold = 1.0 + cfg.delta
    summaries: list[PhaseSummary] = []
    phases = 0
    healthy = vec.max() <= threshold
    guard_tripped = False
    while not healthy:
        if phases >= guard:
            guard_tripped = True
            break
        if phases >= 1 and b > 0:
            vec[_choose_stabilizers(vec, b, cfg.policy, cfg.policy_seed, phases)] = 1.0
        iters = 0
        while (vec.max() - vec.min()) / vec.min() >= cfg.eps:
            vec = vec + _edge_flow(g, vec) / math.fsum(vec)
            iters += 1
            if iters > PHASE_ITERATION_CAP:
                raise ControlError(f"phase failed to converge within {PHASE_ITERATION_CAP} iterations")
        phases += 1
        summaries.append(PhaseSummary(
            phase=phases, iterations=iters, limit_estimate=float(vec.mean()),
            min_fitness=float(vec.min()), max_fitness=float(vec.max()),
        ))
        healthy = vec.max() <= threshold
    return ControlReport(
        mode="phases", n=cfg.n, alpha=cfg.alpha, r=cfg.r, beta=cfg.beta, delta=cfg.delta,
        mutants=a, stabilizers=b, residents=cfg.n - a - b,
        used=phases, bound=bound, healthy=healthy, guard_tripped=guard_tripped,
        eps=cfg.eps, policy=cfg.policy, phases=tuple(summaries),
    )


# ---------------------------------------------------------------------------
# Continuous mode
# ---------------------------------------------------------------------------


def run_continuous_control(cfg: ControlConfig) -> ControlReport:
    """Continuous mode via the exact three-class recurrences.

    Classes: ``a`` mutants at r1(k), ``b`` stabilizers pinned at 1, ``c``
    residents at r2(k) with r2(0) = 1. Stops at the first k with
    r1(k) <= 1 + delta; r1 is the maximum fitness throughout since
    1 <= r2(k) <= r1(k).
    """
    if cfg.mode != "continuous":
        raise ControlError("run_continuous_control needs a continuous-mode configuration")
    a, b, c = class_counts(cfg)
    n = cfg.n
    if a == 0 or cfg.r - 1.0 <= cfg.delta:
        bound = continuous_bound(n, cfg.r, b / n, cfg.delta) if b > 0 else 0.0
        return ControlReport(
            mode="continuous", n=n, alpha=cfg.alpha, r=cfg.r, beta=cfg.beta, delta=cfg.delta,
            mutants=a, stabilizers=b, residents=c,
            used=0, bound=bound, healthy=True,
            series_r1=np.array([1.0 if a == 0 else cfg.r]), series_r2=np.array([1.0]),
        )
    if b == 0:
        raise ControlError("continuous control with alpha > 0 needs beta > 0 to terminate")
    bound = continuous_bound(n, cfg.r, b / n, cfg.delta)
    guard = max(1, math.ceil(10.0 * max(bound, 1.0)))
    threshold = 1.0 + cfg.delta
    r1s = [cfg.r]
    r2s = [1.0]
    k = 0
    guard_tripped = False
    while r1s[-1] > threshold:
        if k >= guard:
            guard_tripped = True
            break
        r1, r2 = r1s[-1], r2s[-1]
        total = a * r1 + b + c * r2
        scale = (n - 1) * total
        r1s.append(r1 - (c * r2 * (r1 - r2) + b * (r1 - 1.0)) / scale)
        r2s.append(r2 + (a * r1 * (r1 - r2) - b * (r2 - 1.0)) / scale)
        k += 1
    return ControlReport(
        mode="continuous", n=n, alpha=cfg.alpha, r=cfg.r, beta=cfg.beta, delta=cfg.delta,
        mutants=a, stabilizers=b, residents=c,
        used=k, bound=bound, healthy=not guard_tripped, guard_tripped=guard_tripped,
        series_r1=np.array(r1s), series_r2=np.array(r2s),
    )


def continuous_full_matrix_check(cfg: ControlConfig, k_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Reference run of continuous control on the full n-vertex dynamic.

    Stabilizers (last ``b`` vertices) are reset to 1 after every iteration;
    returns the mutant-class and resident-class series for comparison with
    the three-class recurrence.
    """
    a, b, c = class_counts(cfg)
    if c < 1 or a < 1:
        raise ControlError("full-matrix check needs nonempty mutant and resident classes")
    g = complete_graph(cfg.n)
    vec = np.ones(cfg.n)
    vec[:a] = cfg.r
    r1s = [vec[0]]
    r2s = [vec[a]]
    for _ in range(k_max):
        vec = vec + _edge_flow(g, vec) / math.fsum(vec)
        vec[cfg.n - b:] = 1.0
        r1s.append(vec[0])
        r2s.append(vec[a])
    return np.array(r1s), np.array(r2s)
