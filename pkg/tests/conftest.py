"""Shared strategies and independent oracles for the test suite.

The oracles here recompute expected values by brute force (path
enumeration, dense sampling, subset enumeration) and must stay
independent of the library code paths they validate.
"""

import itertools

import numpy as np
from hypothesis import strategies as st

from frechetlab import Law1D, Polyline

# ---------------------------------------------------------------------------
# strategies


@st.composite
def small_laws(draw, max_atoms=6, denominator=8, atom_pool=40):
    """Law1D with <= max_atoms distinct atoms and weights k/denominator."""
    n = draw(st.integers(1, max_atoms))
    idx = draw(
        st.lists(st.integers(0, atom_pool - 1), min_size=n, max_size=n, unique=True)
    )
    atoms = np.sort(np.array(idx, dtype=float)) * 0.375 - 4.0
    cuts = draw(
        st.lists(st.integers(0, n - 1), min_size=denominator - n, max_size=denominator - n)
    )
    counts = np.ones(n, dtype=int)
    for c in cuts:
        counts[c] += 1
    return Law1D(atoms, counts / denominator)


@st.composite
def small_polylines(draw, dim=2, max_vertices=6, scale=4.0):
    n = draw(st.integers(2, max_vertices))
    coords = draw(
        st.lists(
            st.lists(st.integers(-8, 8), min_size=dim, max_size=dim),
            min_size=n,
            max_size=n,
        )
    )
    v = np.array(coords, dtype=float) * (scale / 8.0)
    # nudge exact duplicates apart so the curve keeps its vertex count
    for i in range(1, len(v)):
        if np.all(v[i] == v[i - 1]):
            v[i, 0] += 0.5
    return Polyline(v)


# ---------------------------------------------------------------------------
# oracles


def brute_discrete_frechet(P, Q):
    """Enumerate every monotone index path; min of the max pair distance."""
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    m, n = len(P), len(Q)
    best = [np.inf]

    def walk(i, j, cur):
        cur = max(cur, float(np.linalg.norm(P[i] - Q[j])))
        if cur >= best[0]:
            return
        if i == m - 1 and j == n - 1:
            best[0] = cur
            return
        if i + 1 < m:
            walk(i + 1, j, cur)
        if j + 1 < n:
            walk(i, j + 1, cur)
        if i + 1 < m and j + 1 < n:
            walk(i + 1, j + 1, cur)

    walk(0, 0, 0.0)
    return best[0]


def brute_dtw(P, Q):
    """Reference DP table filled without the rolling-row trick."""
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    m, n = len(P), len(Q)
    table = np.full((m, n), np.inf)
    for i in range(m):
        for j in range(n):
            d = float(np.linalg.norm(P[i] - Q[j]))
            if i == 0 and j == 0:
                table[i, j] = d
            else:
                prev = np.inf
                if i > 0:
                    prev = min(prev, table[i - 1, j])
                if j > 0:
                    prev = min(prev, table[i, j - 1])
                if i > 0 and j > 0:
                    prev = min(prev, table[i - 1, j - 1])
                table[i, j] = prev + d
    return table[m - 1, n - 1]


def sampled_cell_free(edge_p, edge_q, epsilon, n=400):
    """Dense sampling of one free-space cell; returns the free (s, t) mask."""
    ep = np.asarray(edge_p, dtype=float)
    eq = np.asarray(edge_q, dtype=float)
    s = np.linspace(0.0, 1.0, n)
    ps = ep[0] + s[:, None] * (ep[1] - ep[0])
    qs = eq[0] + s[:, None] * (eq[1] - eq[0])
    dist = np.linalg.norm(ps[:, None, :] - qs[None, :, :], axis=2)
    return s, dist <= epsilon


def tv_by_subset_enumeration(support_masses_p, support_masses_q):
    """sup_A |p(A) - q(A)| over every subset of the union support."""
    n = len(support_masses_p)
    assert n <= 12
    best = 0.0
    for mask in range(1 << n):
        pa = sum(support_masses_p[i] for i in range(n) if mask >> i & 1)
        qa = sum(support_masses_q[i] for i in range(n) if mask >> i & 1)
        best = max(best, abs(pa - qa))
    return best


def levy1_grid_oracle(graph_a, graph_b, n=5000):
    """Dense grid over c of the antidiagonal intersection gap."""
    ca = graph_a.vertices[:, 0] + graph_a.vertices[:, 1]
    cs = np.linspace(ca[0], ca[-1], n)
    return max(
        float(np.linalg.norm(graph_a.intersect_antidiagonal(c) - graph_b.intersect_antidiagonal(c)))
        for c in cs
    )


def subdivide(vertices, k):
    """Insert k-1 evenly spaced vertices on every edge."""
    v = np.asarray(vertices, dtype=float)
    out = [v[0]]
    for a, b in zip(v[:-1], v[1:]):
        for step in range(1, k + 1):
            out.append(a + (step / k) * (b - a))
    return np.array(out)
