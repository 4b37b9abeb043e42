"""Density- and kernel-based comparisons of finitely supported laws.

Total variation, KL/JS, Hellinger and the overlap coefficient, energy
distance, kernel mean discrepancy, debiased entropic transport, and
the factorial-weighted sequence metric.  All expectations are exact
sums over the discrete supports; natural logarithms throughout.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .laws import WEIGHT_ATOL


class DimensionMismatchError(ValueError):
    """The two inputs live in spaces of different dimension."""


class AbsoluteContinuityError(ValueError):
    """KL requires the first support to be contained in the second."""


class ConvergenceError(RuntimeError):
    """Fixed-point iteration hit the iteration cap before stabilizing."""


class DiscreteLawD:
    """Finitely supported law on R^d: distinct points with positive mass."""

    __slots__ = ("support", "weights")

    def __init__(self, support, weights):
        pts = np.asarray(support, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        w = np.asarray(weights, dtype=float)
        if pts.ndim != 2 or w.ndim != 1 or len(pts) != len(w) or len(pts) == 0:
            raise ValueError("support and weights must be nonempty and equally long")
        if not np.all(np.isfinite(pts)):
            raise ValueError("support points must be finite")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        if len(np.unique(pts, axis=0)) != len(pts):
            raise ValueError("support points must be distinct")
        total = w.sum()
        if abs(total - 1.0) > WEIGHT_ATOL:
            raise ValueError(f"weights sum to {total!r}, not 1")
        self.support = pts
        self.weights = w / total

    @property
    def dim(self) -> int:
        return self.support.shape[1]


def _check_dims(p: DiscreteLawD, q: DiscreteLawD):
    if p.dim != q.dim:
        raise DimensionMismatchError(f"law dimensions differ: {p.dim} vs {q.dim}")


def _union_masses(p: DiscreteLawD, q: DiscreteLawD) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    _check_dims(p, q)
    pts = np.unique(np.concatenate([p.support, q.support]), axis=0)
    wp = np.zeros(len(pts))
    wq = np.zeros(len(pts))
    for w_out, law in ((wp, p), (wq, q)):
        for point, w in zip(law.support, law.weights):
            idx = np.flatnonzero(np.all(pts == point, axis=1))[0]
            w_out[idx] = w
    return pts, wp, wq


def total_variation(p: DiscreteLawD, q: DiscreteLawD) -> float:
    """Half the L1 gap of the mass functions, = sup event discrepancy."""
    _, wp, wq = _union_masses(p, q)
    return float(0.5 * np.abs(wp - wq).sum())


def kl(p: DiscreteLawD, q: DiscreteLawD) -> float:
    """Relative entropy of p with respect to q (natural log)."""
    _, wp, wq = _union_masses(p, q)
    bad = (wp > 0) & (wq == 0)
    if np.any(bad):
        raise AbsoluteContinuityError("an atom of p carries no q-mass")
    mask = wp > 0
    return float(np.sum(wp[mask] * np.log(wp[mask] / wq[mask])))


def js(p: DiscreteLawD, q: DiscreteLawD) -> float:
    """Symmetrized divergence against the even mixture; always finite."""
    _, wp, wq = _union_masses(p, q)
    wm = 0.5 * (wp + wq)
    total = 0.0
    for w in (wp, wq):
        mask = w > 0
        total += 0.5 * float(np.sum(w[mask] * np.log(w[mask] / wm[mask])))
    return total


def bhattacharyya_coeff(p: DiscreteLawD, q: DiscreteLawD) -> float:
    _, wp, wq = _union_masses(p, q)
    return float(np.sqrt(wp * wq).sum())


def hellinger(p: DiscreteLawD, q: DiscreteLawD) -> float:
    return math.sqrt(max(1.0 - bhattacharyya_coeff(p, q), 0.0))


def bhattacharyya_distance(p: DiscreteLawD, q: DiscreteLawD) -> float:
    """-log of the overlap coefficient; +inf when the supports are disjoint."""
    bc = bhattacharyya_coeff(p, q)
    if bc == 0.0:
        return math.inf
    return -math.log(min(bc, 1.0))


def _cross_norms(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.linalg.norm(x[:, None, :] - y[None, :, :], axis=2)


def energy_distance(p: DiscreteLawD, q: DiscreteLawD) -> float:
    """sqrt(2 E||X-Y|| - E||X-X'|| - E||Y-Y'||) over exact expectations."""
    _check_dims(p, q)
    exy = float(p.weights @ _cross_norms(p.support, q.support) @ q.weights)
    exx = float(p.weights @ _cross_norms(p.support, p.support) @ p.weights)
    eyy = float(q.weights @ _cross_norms(q.support, q.support) @ q.weights)
    return math.sqrt(max(2.0 * exy - exx - eyy, 0.0))


@dataclass(frozen=True)
class KernelSpec:
    """Gaussian kernel exp(-||x-y||^2 / (2 sigma^2))."""

    bandwidth: float
    kind: str = "gaussian"

    def __post_init__(self):
        if self.kind != "gaussian":
            raise ValueError("only the gaussian kernel is supported")
        if self.bandwidth <= 0:
            raise ValueError("bandwidth must be > 0")

    def gram(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        sq = np.sum((x[:, None, :] - y[None, :, :]) ** 2, axis=2)
        return np.exp(-sq / (2.0 * self.bandwidth**2))


def mmd(p: DiscreteLawD, q: DiscreteLawD, kernel: KernelSpec) -> float:
    """RKHS norm of the gap between kernel mean embeddings."""
    _check_dims(p, q)
    kxx = float(p.weights @ kernel.gram(p.support, p.support) @ p.weights)
    kxy = float(p.weights @ kernel.gram(p.support, q.support) @ q.weights)
    kyy = float(q.weights @ kernel.gram(q.support, q.support) @ q.weights)
    return math.sqrt(max(kxx - 2.0 * kxy + kyy, 0.0))


@dataclass(frozen=True)
class SinkhornConfig:
    """Entropic regularization strength and stopping rule.

    Iteration stops when the sup-norm change of both log-scalings drops
    below stop_tol.  For tiny epsilon the scalings converge like 1/k on
    degenerate instances while the transport cost stabilizes within a
    few iterations, so stop_tol far below 1e-6 mostly buys iterations.
    """

    epsilon: float
    max_iters: int = 100_000
    stop_tol: float = 1e-6

    def __post_init__(self):
        if self.epsilon <= 0 or self.max_iters <= 0 or self.stop_tol <= 0:
            raise ValueError("all Sinkhorn parameters must be positive")


def _sinkhorn_cost(p: DiscreteLawD, q: DiscreteLawD, cfg: SinkhornConfig) -> float:
    """Transport part <plan, cost> of the log-domain fixed point."""
    cost = _cross_norms(p.support, q.support) ** 2
    eps = cfg.epsilon
    log_p = np.log(p.weights)
    log_q = np.log(q.weights)
    f = np.zeros(len(p.weights))
    g = np.zeros(len(q.weights))
    for _ in range(cfg.max_iters):
        # f_i <- -eps * log sum_j exp((g_j - C_ij)/eps + log q_j), then same for g
        f_new = -eps * _logsumexp((g[None, :] - cost) / eps + log_q[None, :], axis=1)
        g_new = -eps * _logsumexp((f_new[:, None] - cost) / eps + log_p[:, None], axis=0)
        delta = max(np.abs(f_new - f).max(), np.abs(g_new - g).max())
        f, g = f_new, g_new
        if delta <= cfg.stop_tol:
            break
    else:
        raise ConvergenceError(f"no convergence within {cfg.max_iters} iterations")
    log_plan = (f[:, None] + g[None, :] - cost) / eps + log_p[:, None] + log_q[None, :]
    plan = np.exp(log_plan)
    return float(np.sum(plan * cost))


def _logsumexp(a: np.ndarray, axis: int) -> np.ndarray:
    hi = np.max(a, axis=axis, keepdims=True)
    out = hi + np.log(np.sum(np.exp(a - hi), axis=axis, keepdims=True))
    return np.squeeze(out, axis=axis)


def entropic_ot(p: DiscreteLawD, q: DiscreteLawD, cfg: SinkhornConfig, cost_exponent: int = 2) -> float:
    """Entropically regularized squared-Euclidean transport cost."""
    if cost_exponent != 2:
        raise ValueError("only the squared-Euclidean cost is supported")
    _check_dims(p, q)
    return _sinkhorn_cost(p, q, cfg)


def sinkhorn_divergence(p: DiscreteLawD, q: DiscreteLawD, cfg: SinkhornConfig) -> float:
    """Debiased regularized cost: the self-terms remove the entropic bias."""
    _check_dims(p, q)
    w_pq = _sinkhorn_cost(p, q, cfg)
    w_pp = _sinkhorn_cost(p, p, cfg)
    w_qq = _sinkhorn_cost(q, q, cfg)
    return w_pq - 0.5 * w_pp - 0.5 * w_qq


def sequence_metric(x, y, p: int) -> tuple[float, float]:
    """Factorial-weighted bounded-difference metric on real sequences.

    value = sum_{n<=p} (1/n!) |x_n - y_n| / (1 + |x_n - y_n|); the
    second return is the exact tail bound sum_{n>p} 1/n! on what the
    truncation can miss.
    """
    if p < 1:
        raise ValueError("truncation depth must be >= 1")
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    if len(xs) < p or len(ys) < p:
        raise ValueError(f"sequences must be defined up to index {p}")
    value = 0.0
    fact = 1.0
    for n in range(1, p + 1):
        fact *= n
        gap = abs(float(xs[n - 1]) - float(ys[n - 1]))
        value += gap / (1.0 + gap) / fact
    remainder = 0.0
    term = 1.0 / fact
    n = p + 1
    while True:
        term /= n
        if remainder + term == remainder:
            break
        remainder += term
        n += 1
    return value, remainder


def law_from_json(text: str) -> DiscreteLawD:
    """JSON law file: {"support": [[...], ...], "weights": [...]}.

    A one-dimensional {"atoms", "weights"} object is also accepted.
    """
    obj = json.loads(text)
    if "support" in obj:
        return DiscreteLawD(obj["support"], obj["weights"])
    return DiscreteLawD([[a] for a in obj["atoms"]], obj["weights"])


def load_law_d(path) -> DiscreteLawD:
    return law_from_json(open(path).read())
