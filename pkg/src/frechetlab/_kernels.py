"""Compiled inner loops for the curve metrics.

Row-rolling dynamic programs so memory stays O(n) even for long
polylines.  Free intervals are widened by 1e-12 before clamping so
near-tangent cells do not flicker between reachable and blocked.
"""

import math

import numpy as np
from numba import njit

WIDEN = 1e-12


@njit(cache=True)
def point_segment_interval(a, d, c, eps):
    """Parameters u in [0, 1] with ||a + u*d - c|| <= eps.

    Returns (lo, hi); empty intervals come back with lo > hi.  The
    quadratic falls through to constant handling when the edge vector
    is degenerate.
    """
    qa = 0.0
    qb = 0.0
    qc = -eps * eps
    for k in range(a.shape[0]):
        dk = d[k]
        ak = a[k] - c[k]
        qa += dk * dk
        qb += 2.0 * dk * ak
        qc += ak * ak
    if qa < 1e-15:
        if qc <= 0.0:
            return 0.0, 1.0
        return 1.0, -1.0
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0.0:
        return 1.0, -1.0
    root = math.sqrt(disc)
    lo = (-qb - root) / (2.0 * qa) - WIDEN
    hi = (-qb + root) / (2.0 * qa) + WIDEN
    if lo < 0.0:
        lo = 0.0
    if hi > 1.0:
        hi = 1.0
    if lo > hi:
        return 1.0, -1.0
    return lo, hi


@njit(cache=True)
def decision_kernel(P, Q, eps):
    """Monotone reachability through the free space of two polylines.

    Assumes both endpoint pairs are already within eps and both inputs
    have at least one edge.
    """
    m = P.shape[0] - 1
    n = Q.shape[0] - 1

    bot_lo = np.empty(m)
    bot_hi = np.empty(m)
    corner_ok = True
    for i in range(m):
        lo, hi = point_segment_interval(P[i], P[i + 1] - P[i], Q[0], eps)
        if corner_ok and lo <= 0.0:
            bot_lo[i] = 0.0
            bot_hi[i] = hi
        else:
            bot_lo[i] = 1.0
            bot_hi[i] = -1.0
        corner_ok = corner_ok and lo <= 0.0 and hi >= 1.0

    left_corner_ok = True
    left_lo = 1.0
    left_hi = -1.0
    for j in range(n):
        lo, hi = point_segment_interval(Q[j], Q[j + 1] - Q[j], P[0], eps)
        if left_corner_ok and lo <= 0.0:
            left_lo = 0.0
            left_hi = hi
        else:
            left_lo = 1.0
            left_hi = -1.0
        left_corner_ok = left_corner_ok and lo <= 0.0 and hi >= 1.0

        for i in range(m):
            fr_lo, fr_hi = point_segment_interval(Q[j], Q[j + 1] - Q[j], P[i + 1], eps)
            ft_lo, ft_hi = point_segment_interval(P[i], P[i + 1] - P[i], Q[j + 1], eps)
            bot_nonempty = bot_lo[i] <= bot_hi[i]
            left_nonempty = left_lo <= left_hi

            if bot_nonempty:
                r_lo, r_hi = fr_lo, fr_hi
            elif left_nonempty:
                r_lo = fr_lo if fr_lo > left_lo else left_lo
                r_hi = fr_hi
            else:
                r_lo, r_hi = 1.0, -1.0
            if r_lo > r_hi:
                r_lo, r_hi = 1.0, -1.0

            if left_nonempty:
                t_lo, t_hi = ft_lo, ft_hi
            elif bot_nonempty:
                t_lo = ft_lo if ft_lo > bot_lo[i] else bot_lo[i]
                t_hi = ft_hi
            else:
                t_lo, t_hi = 1.0, -1.0
            if t_lo > t_hi:
                t_lo, t_hi = 1.0, -1.0

            bot_lo[i] = t_lo
            bot_hi[i] = t_hi
            left_lo = r_lo
            left_hi = r_hi

    return bot_hi[m - 1] >= 1.0 or left_hi >= 1.0


@njit(cache=True)
def _vertex_distance(P, Q, i, j):
    s = 0.0
    for k in range(P.shape[1]):
        diff = P[i, k] - Q[j, k]
        s += diff * diff
    return math.sqrt(s)


@njit(cache=True)
def discrete_frechet_kernel(P, Q):
    """Min over monotone index couplings of the max vertex distance."""
    m = P.shape[0]
    n = Q.shape[0]
    prev = np.empty(n)
    cur = np.empty(n)
    prev[0] = _vertex_distance(P, Q, 0, 0)
    for j in range(1, n):
        d = _vertex_distance(P, Q, 0, j)
        prev[j] = prev[j - 1] if prev[j - 1] > d else d
    for i in range(1, m):
        d = _vertex_distance(P, Q, i, 0)
        cur[0] = prev[0] if prev[0] > d else d
        for j in range(1, n):
            best = prev[j]
            if prev[j - 1] < best:
                best = prev[j - 1]
            if cur[j - 1] < best:
                best = cur[j - 1]
            d = _vertex_distance(P, Q, i, j)
            cur[j] = best if best > d else d
        for j in range(n):
            prev[j] = cur[j]
    return prev[n - 1]


@njit(cache=True)
def dtw_kernel(P, Q):
    """Min over monotone warping paths of the summed vertex distances."""
    m = P.shape[0]
    n = Q.shape[0]
    prev = np.empty(n)
    cur = np.empty(n)
    prev[0] = _vertex_distance(P, Q, 0, 0)
    for j in range(1, n):
        prev[j] = prev[j - 1] + _vertex_distance(P, Q, 0, j)
    for i in range(1, m):
        cur[0] = prev[0] + _vertex_distance(P, Q, i, 0)
        for j in range(1, n):
            best = prev[j]
            if prev[j - 1] < best:
                best = prev[j - 1]
            if cur[j - 1] < best:
                best = cur[j - 1]
            cur[j] = best + _vertex_distance(P, Q, i, j)
        for j in range(n):
            prev[j] = cur[j]
    return prev[n - 1]
