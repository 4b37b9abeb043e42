"""Exact brute-force optimal transport for desk-scale instances.

Weights with a small common denominator D are split into D equal-mass
atoms, which turns the transport problem into an assignment problem.
Some permutation matrix is optimal (Birkhoff), so enumerating all D!
permutations gives exact ground truth.  This is an oracle for tests,
not a solver: D is hard-capped at 8 (40320 permutations).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

MAX_SPLIT = 8

_PERM_CACHE: dict[int, np.ndarray] = {}


class OracleError(ValueError):
    """Instance outside what the brute-force oracle can handle."""


def _permutations(n: int) -> np.ndarray:
    """All permutations of range(n) as an (n!, n) int array, lexicographic."""
    if n not in _PERM_CACHE:
        _PERM_CACHE[n] = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    return _PERM_CACHE[n]


@dataclass(frozen=True)
class TransportPlan:
    """Nonnegative matrix with prescribed row/column marginals."""

    matrix: np.ndarray
    row_weights: np.ndarray
    col_weights: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if np.any(m < -1e-15):
            raise ValueError("transport plan has negative entries")
        if not (
            np.allclose(m.sum(axis=1), self.row_weights, atol=1e-12)
            and np.allclose(m.sum(axis=0), self.col_weights, atol=1e-12)
        ):
            raise ValueError("transport plan marginals do not match")


def assignment_bruteforce(cost: np.ndarray) -> tuple[float, tuple[int, ...]]:
    """Exact minimum of mean(C[i, sigma(i)]) over all permutations sigma.

    The cost is divided by n, i.e. every row/column carries mass 1/n.
    Ties are broken toward the lexicographically smallest permutation.
    """
    cost = np.asarray(cost, dtype=float)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise OracleError("cost matrix must be square")
    n = cost.shape[0]
    if n > MAX_SPLIT:
        raise OracleError(f"assignment enumeration capped at n <= {MAX_SPLIT}, got {n}")
    if not np.all(np.isfinite(cost)):
        raise OracleError("cost matrix entries must be finite")
    perms = _permutations(n)
    totals = cost[np.arange(n), perms].sum(axis=1)
    best = int(np.argmin(totals))  # argmin keeps the first (lex smallest) optimum
    return float(totals[best] / n), tuple(int(k) for k in perms[best])


def rationalize(weights, max_den: int = MAX_SPLIT) -> tuple[int, list[int]]:
    """Smallest common denominator D <= max_den with weights = k_i / D.

    Returns (D, split counts).  Fails if no such denominator exists
    within 1e-9 of each weight.
    """
    w = np.asarray(weights, dtype=float)
    for den in range(1, max_den + 1):
        counts = np.rint(w * den)
        if np.all(counts >= 1) and np.all(np.abs(w * den - counts) <= 1e-9 * den):
            if int(counts.sum()) != den:
                continue
            return den, [int(c) for c in counts]
    raise OracleError(f"weights are not rational with denominator <= {max_den}")


def _split_atoms(points: np.ndarray, counts: list[int]) -> tuple[np.ndarray, list[int]]:
    """Repeat each point by its split count; also return the owner index."""
    reps, owner = [], []
    for i, c in enumerate(counts):
        for _ in range(c):
            reps.append(points[i])
            owner.append(i)
    return np.asarray(reps, dtype=float), owner


def _common_denominator(wa, wb, max_den: int) -> int:
    da, ca = rationalize(wa, max_den)
    db, cb = rationalize(wb, max_den)
    den = da * db // math.gcd(da, db)
    if den > max_den:
        raise OracleError(
            f"no common denominator <= {max_den} for the two weight vectors"
        )
    counts = [c * (den // da) for c in ca] + [c * (den // db) for c in cb]
    g = math.gcd(*counts) if counts else 1
    den //= g
    if den > MAX_SPLIT:
        raise OracleError(f"reduced denominator {den} exceeds enumeration cap {MAX_SPLIT}")
    return den


def _as_points(law) -> tuple[np.ndarray, np.ndarray]:
    """Accept Law1D-like (atoms/weights) or DiscreteLawD-like (support/weights)."""
    if hasattr(law, "atoms"):
        pts = np.asarray(law.atoms, dtype=float).reshape(len(law.atoms), 1)
        return pts, np.asarray(law.weights, dtype=float)
    pts = np.asarray(law.support, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    return pts, np.asarray(law.weights, dtype=float)


def solve_equal_weight(xs: np.ndarray, ys: np.ndarray, p: float) -> tuple[float, tuple[int, ...]]:
    """Exact OT cost between two equal-weight atom lists of the same length."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float).T).T
    ys = np.atleast_2d(np.asarray(ys, dtype=float).T).T
    diff = xs[:, None, :] - ys[None, :, :]
    cost = np.linalg.norm(diff, axis=2) ** p
    return assignment_bruteforce(cost)


def exact_ot(mu, nu, p: float = 2.0, max_den: int = MAX_SPLIT) -> tuple[float, TransportPlan]:
    """Kantorovich optimum for cost |x-y|^p by permutation enumeration.

    Returns the optimal cost (the expectation, not its p-th root) and
    the aggregated transport plan on the original atoms.
    """
    if p < 1:
        raise ValueError("cost exponent p must be >= 1")
    pts_a, wa = _as_points(mu)
    pts_b, wb = _as_points(nu)
    if pts_a.shape[1] != pts_b.shape[1]:
        raise OracleError("laws live in different dimensions")
    den = _common_denominator(wa, wb, max_den)
    xs, owner_a = _split_atoms(pts_a, [int(round(w * den)) for w in wa])
    ys, owner_b = _split_atoms(pts_b, [int(round(w * den)) for w in wb])
    cost, perm = solve_equal_weight(xs, ys, p)
    plan = np.zeros((len(wa), len(wb)))
    for i, j in enumerate(perm):
        plan[owner_a[i], owner_b[j]] += 1.0 / den
    return cost, TransportPlan(plan, np.asarray(wa, float), np.asarray(wb, float))


def vertex_couplings(mu, nu, max_den: int = MAX_SPLIT) -> list[list[tuple[float, float, float]]]:
    """All couplings induced by permutations of the equal-mass splitting.

    Each coupling is a list of (x, y, weight) triples with aggregated
    weights.  Only defined for one-dimensional laws.
    """
    pts_a, wa = _as_points(mu)
    pts_b, wb = _as_points(nu)
    if pts_a.shape[1] != 1 or pts_b.shape[1] != 1:
        raise OracleError("vertex couplings are enumerated for 1D laws only")
    den = _common_denominator(wa, wb, max_den)
    xs, _ = _split_atoms(pts_a, [int(round(w * den)) for w in wa])
    ys, _ = _split_atoms(pts_b, [int(round(w * den)) for w in wb])
    out = []
    for perm in itertools.permutations(range(den)):
        agg: dict[tuple[float, float], float] = {}
        for i, j in enumerate(perm):
            key = (float(xs[i, 0]), float(ys[j, 0]))
            agg[key] = agg.get(key, 0.0) + 1.0 / den
        out.append([(x, y, w) for (x, y), w in sorted(agg.items())])
    return out
