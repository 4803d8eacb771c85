"""Jitted Monte Carlo kernels for the sequential birth-death process.

A trial samples reproduction events exactly: the reproducer is drawn
proportionally to fitness (two fitness classes, so O(1) via membership
lists), the offspring target proportionally to edge weight. Same-color
events leave the state unchanged and are skipped by rejection, which is
exactly the renormalized state-changing-event law; reported step counts are
state-changing transitions only.

Randomness is counter-based (SplitMix64 over a Weyl sequence): trial ``t``
under ``master`` seed uses the stream ``mix64(master ^ mix64((t+1)*GOLDEN))``,
so results are independent of thread count and schedule.
"""
import numpy as np
from numba import njit, prange

U64 = np.uint64
GOLDEN = U64(0x9E3779B97F4A7C15)
_M1 = U64(0xBF58476D1CE4E5B9)
_M2 = U64(0x94D049BB133111EB)
ONE = U64(1)
_INV53 = 1.0 / 9007199254740992.0

OUTCOME_EXTINCTION = 0
OUTCOME_FIXATION = 1
OUTCOME_TRUNCATED = 2


@njit(cache=True, inline="always")
def _mix64(z):
    z ^= z >> U64(30)
    z *= _M1
    z ^= z >> U64(27)
    z *= _M2
    z ^= z >> U64(31)
    return z


@njit(cache=True, inline="always")
def _u01(seed, ctr):
    z = _mix64(seed + ctr * GOLDEN)
    return (z >> U64(11)) * _INV53


@njit(cache=True, inline="always")
def _trial_seed(master, t):
    return _mix64(master ^ _mix64((U64(t) + ONE) * GOLDEN))


@njit(cache=True)
def _simulate(indptr, indices, cum_w, wdeg, weighted, n, r,
              color, seed, ctr, max_changes):
    """Run one trial to absorption (or the step cap) in place on ``color``.

    Returns (outcome, state_changing_steps). ``ctr`` is the number of draws
    already consumed from this trial's stream (placement draws).
    """
    black = np.empty(n, np.int64)
    white = np.empty(n, np.int64)
    pos = np.empty(n, np.int64)
    nb = 0
    nw = 0
    for v in range(n):
        if color[v] == 1:
            black[nb] = v
            pos[v] = nb
            nb += 1
        else:
            white[nw] = v
            pos[v] = nw
            nw += 1
    steps = np.int64(0)
    while 0 < nb < n and steps < max_changes:
        ctr += ONE
        u1 = _u01(seed, ctr)
        if u1 * (r * nb + (n - nb)) < r * nb:
            ctr += ONE
            u = black[int(_u01(seed, ctr) * nb)]
        else:
            ctr += ONE
            u = white[int(_u01(seed, ctr) * nw)]
        a = indptr[u]
        b = indptr[u + 1]
        ctr += ONE
        u2 = _u01(seed, ctr)
        if weighted:
            target = u2 * wdeg[u]
            lo = a
            hi = b - 1
            while lo < hi:
                mid = (lo + hi) >> 1
                if cum_w[mid] > target:
                    hi = mid
                else:
                    lo = mid + 1
            v = indices[lo]
        else:
            v = indices[a + int(u2 * (b - a))]
        cu = color[u]
        if color[v] == cu:
            continue
        if cu == 1:
            pw = pos[v]
            last = white[nw - 1]
            white[pw] = last
            pos[last] = pw
            nw -= 1
            black[nb] = v
            pos[v] = nb
            nb += 1
            color[v] = 1
        else:
            pb = pos[v]
            last = black[nb - 1]
            black[pb] = last
            pos[last] = pb
            nb -= 1
            white[nw] = v
            pos[v] = nw
            nw += 1
            color[v] = 0
        steps += 1
    if nb == 0:
        return OUTCOME_EXTINCTION, steps
    if nb == n:
        return OUTCOME_FIXATION, steps
    return OUTCOME_TRUNCATED, steps


@njit(cache=True)
def _init_colors(n, mode, candidates, init_mask, seed):
    """Initial coloring for one trial; returns (color, draws consumed)."""
    color = np.zeros(n, np.uint8)
    if mode == 0:
        u = _u01(seed, ONE)
        color[candidates[int(u * len(candidates))]] = 1
        return color, ONE
    for v in range(n):
        color[v] = init_mask[v]
    return color, U64(0)


@njit(cache=True, parallel=True)
def _run_trials(indptr, indices, cum_w, wdeg, weighted, n, r,
                mode, candidates, init_mask, trials, master, max_changes,
                outcomes, steps_out):
    for t in prange(trials):
        seed = _trial_seed(U64(master), t)
        color, ctr = _init_colors(n, mode, candidates, init_mask, seed)
        outcome, steps = _simulate(indptr, indices, cum_w, wdeg, weighted, n, r,
                                   color, seed, ctr, max_changes)
        outcomes[t] = outcome
        steps_out[t] = steps


@njit(cache=True)
def _run_single(indptr, indices, cum_w, wdeg, weighted, n, r,
                mode, candidates, init_mask, seed, max_changes):
    color, ctr = _init_colors(n, mode, candidates, init_mask, U64(seed))
    return _simulate(indptr, indices, cum_w, wdeg, weighted, n, r,
                     color, U64(seed), ctr, max_changes)
