"""Hot numeric kernels, each with a numba and a pure-numpy implementation.

Both implementations of a kernel produce the same results: the fading
generator is counter based (splitmix64 of seed, trial and hop), so a draw
depends only on its coordinates, never on evaluation order or thread count.
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import HAVE_NUMBA, njit, resolve_backend

if HAVE_NUMBA:
    from numba import prange
else:  # pragma: no cover
    prange = range

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30, _S27, _S31, _S11 = np.uint64(30), np.uint64(27), np.uint64(31), np.uint64(11)
_ONE = np.uint64(1)
TWO_M53 = 2.0**-53
_MASK64 = (1 << 64) - 1


def seed_key(seed: int) -> np.uint64:
    """Scramble a user seed (any int, reduced mod 2^64) into a stream key."""
    with np.errstate(over="ignore"):
        return _mix_array(np.array([seed & _MASK64], dtype=np.uint64))[0]


# ---------------------------------------------------------------- splitmix64


@njit(cache=True, inline="always")
def _mix_scalar(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def _mix_array(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(cache=True, parallel=True)
def _bits_numba(key, trial0, n_trials, n_hops):
    out = np.empty((n_trials, n_hops), np.uint64)
    for i in prange(n_trials):
        kt = _mix_scalar(key + np.uint64(trial0 + i + 1) * GOLDEN)
        for h in range(n_hops):
            out[i, h] = _mix_scalar(kt + np.uint64(h + 1) * GOLDEN) >> _S11
    return out


def _bits_numpy(key, trial0, n_trials, n_hops):
    with np.errstate(over="ignore"):
        trials = np.arange(trial0 + 1, trial0 + n_trials + 1, dtype=np.uint64)
        kt = _mix_array(key + trials * GOLDEN)
        hops = np.arange(1, n_hops + 1, dtype=np.uint64) * GOLDEN
        return _mix_array(kt[:, None] + hops[None, :]) >> _S11


def _bits(key, trial0, n_trials, n_hops, backend):
    if resolve_backend(backend) == "numba":
        return _bits_numba(key, np.int64(trial0), n_trials, n_hops)
    return _bits_numpy(key, trial0, n_trials, n_hops)


def fading_gains(seed: int, trial0: int, n_trials: int, n_hops: int, backend=None) -> np.ndarray:
    """|h|^2 draws, Exponential(1), shape (n_trials, n_hops) for trials trial0..trial0+n_trials-1.

    A draw is -ln(u) with u = (m + 1) 2^-53 and m the top 53 bits of the
    mixed counter, so u lies in (0, 1] and the gain is finite.
    """
    m = _bits(seed_key(seed), trial0, n_trials, n_hops, backend)
    return -np.log((m.astype(np.float64) + 1.0) * TWO_M53)


# ------------------------------------------------------------ outage kernel


def _gain_of(m: int) -> float:
    return -math.log((m + 1) * TWO_M53)


def _fails(g, p_s, p_j, d_alpha, theta_sq, noise_floor, gamma_star) -> bool:
    signal = p_s * g / d_alpha
    noise = theta_sq * p_j * g / d_alpha + noise_floor
    return (signal + noise) / noise < gamma_star


def outage_cutoffs(p_s, p_j, d_alpha, theta_sq, noise_floor, gamma_star) -> np.ndarray:
    """Per hop, the smallest 53-bit draw m whose gain gives gamma_D < gamma_star.

    The gain falls as m grows and gamma_D rises with the gain, so a hop is in
    outage exactly when m >= cutoff. Finding the cutoff once per hop turns the
    per-trial test into an integer compare that every backend agrees on.
    """
    top = (1 << 53) - 1
    cuts = np.empty(len(p_s), np.uint64)
    for h, (ps, pj, da) in enumerate(zip(p_s, p_j, d_alpha)):
        lo, hi = 0, top  # m = top gives g = 0, gamma_D = 1: always an outage
        while lo < hi:
            mid = (lo + hi) // 2
            if _fails(_gain_of(mid), ps, pj, da, theta_sq, noise_floor, gamma_star):
                hi = mid
            else:
                lo = mid + 1
        cuts[h] = lo
    return cuts


@njit(cache=True, parallel=True)
def _outage_numba(cuts, key, trial0, n_trials):
    n_hops = cuts.size
    out = np.empty((n_trials, n_hops), np.uint8)
    for i in prange(n_trials):
        kt = _mix_scalar(key + np.uint64(trial0 + i + 1) * GOLDEN)
        for h in range(n_hops):
            out[i, h] = (_mix_scalar(kt + np.uint64(h + 1) * GOLDEN) >> _S11) >= cuts[h]
    return out


def _outage_numpy(cuts, key, trial0, n_trials):
    return (_bits_numpy(key, trial0, n_trials, cuts.size) >= cuts).astype(np.uint8)


def outage_indicators(p_s, p_j, d_alpha, theta_sq, noise_floor, gamma_star, seed, trial0, n_trials, backend=None):
    """1 where a hop's drawn gamma_D is below threshold; shape (n_trials, n_hops)."""
    p_s, p_j, d_alpha = (np.atleast_1d(np.asarray(a, dtype=np.float64)) for a in (p_s, p_j, d_alpha))
    cuts = outage_cutoffs(p_s, p_j, d_alpha, float(theta_sq), float(noise_floor), float(gamma_star))
    key = seed_key(seed)
    if resolve_backend(backend) == "numba":
        return _outage_numba(cuts, key, np.int64(trial0), n_trials)
    return _outage_numpy(cuts, key, trial0, n_trials)


# --------------------------------------------------------- dense dijkstra


@njit(cache=True)
def _dijkstra_numba(w, start, rtol):
    n = w.shape[0]
    dist = np.full(n, np.inf)
    hops = np.full(n, n + 1, np.int64)
    done = np.zeros(n, np.bool_)
    dist[start] = 0.0
    hops[start] = 0
    for _ in range(n):
        u = -1
        best = np.inf
        best_h = n + 1
        for v in range(n):
            if not done[v] and (dist[v] < best or (dist[v] == best and hops[v] < best_h)):
                u = v
                best = dist[v]
                best_h = hops[v]
        if u < 0:
            break
        done[u] = True
        du = dist[u]
        nh = hops[u] + 1
        for v in range(n):
            if done[v]:
                continue
            nd = du + w[u, v]
            tol = rtol * nd
            if nd < dist[v] - tol:
                dist[v] = nd
                hops[v] = nh
            elif abs(nd - dist[v]) <= tol and nh < hops[v]:
                dist[v] = nd
                hops[v] = nh
    return dist, hops


def _dijkstra_numpy(w, start, rtol):
    n = w.shape[0]
    dist = np.full(n, np.inf)
    hops = np.full(n, n + 1, np.int64)
    done = np.zeros(n, bool)
    dist[start] = 0.0
    hops[start] = 0
    with np.errstate(invalid="ignore"):
        for _ in range(n):
            open_dist = np.where(done, np.inf, dist)
            best = open_dist.min()
            if best == np.inf:
                break
            ties = np.flatnonzero(open_dist == best)
            u = ties[np.argmin(hops[ties])]
            done[u] = True
            nd = dist[u] + w[u]
            nh = hops[u] + 1
            tol = rtol * nd
            better = nd < dist - tol
            tie = ~better & (np.abs(nd - dist) <= tol) & (nh < hops)
            update = ~done & (better | tie)
            dist[update] = nd[update]
            hops[update] = nh
    return dist, hops


def dijkstra_dense(weights: np.ndarray, start: int, rtol: float = 1e-12, backend=None):
    """Single-source shortest distances and hop counts on a dense weight matrix.

    ``weights[u, v]`` is ``inf`` where no edge exists. Labels are compared as
    (distance, hops); distances within ``rtol`` count as equal so that
    equal-weight alternatives are decided by hop count. O(n^2).
    """
    w = np.ascontiguousarray(weights, dtype=np.float64)
    if resolve_backend(backend) == "numba":
        return _dijkstra_numba(w, np.int64(start), float(rtol))
    return _dijkstra_numpy(w, int(start), float(rtol))
