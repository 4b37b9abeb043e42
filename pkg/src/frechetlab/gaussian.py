"""Closed-form quadratic transport between Gaussian laws.

Symmetric matrix square root, the Bures covariance metric, Gaussian
W2, the squared-form score on moment-fitted sample batches, and the
moment lower bound valid for arbitrary laws.

Conventions: sample covariance uses the n-1 denominator; the batch
score reports the squared distance while gaussian_w2 reports the root
(both are exposed to avoid convention bugs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DimensionMismatchError(ValueError):
    """The two inputs live in spaces of different dimension."""


def _check_psd_symmetric(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("covariance must be a square matrix")
    scale = max(float(np.abs(m).max()), 1e-300)
    if np.abs(m - m.T).max() > 1e-10 * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    m = 0.5 * (m + m.T)
    w = np.linalg.eigvalsh(m)
    if w.min() < -1e-8 * max(scale, 1.0):
        raise ValueError(f"matrix is not PSD: smallest eigenvalue {w.min()}")
    return m


@dataclass(frozen=True)
class GaussianLaw:
    """Mean vector and symmetric PSD covariance.

    The covariance is symmetrized at construction and negative
    round-off eigenvalues are tolerated down to -1e-8 of the scale;
    anything lower is rejected as a genuinely non-PSD input.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __init__(self, mean, cov):
        mean = np.asarray(mean, dtype=float).reshape(-1)
        cov = _check_psd_symmetric(cov)
        if cov.shape[0] != mean.shape[0]:
            raise ValueError("mean and covariance dimensions differ")
        if not np.all(np.isfinite(mean)):
            raise ValueError("mean must be finite")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return len(self.mean)


def sym_sqrt(m) -> np.ndarray:
    """Symmetric PSD square root via eigendecomposition.

    Eigenvalues are clamped at zero so round-off negatives do not leak
    into the root.
    """
    m = _check_psd_symmetric(m)
    w, v = np.linalg.eigh(m)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.T


def bures(cov1, cov2) -> float:
    """Squared Bures metric Tr(S1 + S2 - 2 (S1^1/2 S2 S1^1/2)^1/2)."""
    c1 = _check_psd_symmetric(cov1)
    c2 = _check_psd_symmetric(cov2)
    if c1.shape != c2.shape:
        raise DimensionMismatchError("covariance shapes differ")
    r1 = sym_sqrt(c1)
    inner = r1 @ c2 @ r1
    cross = sym_sqrt(0.5 * (inner + inner.T))
    value = float(np.trace(c1) + np.trace(c2) - 2.0 * np.trace(cross))
    if -1e-9 <= value < 0.0:
        value = 0.0
    return value


def gaussian_w2(g1: GaussianLaw, g2: GaussianLaw) -> float:
    """Quadratic transport distance between two Gaussian laws (the root)."""
    if g1.dim != g2.dim:
        raise DimensionMismatchError("Gaussian dimensions differ")
    gap = g1.mean - g2.mean
    return math.sqrt(max(float(gap @ gap) + bures(g1.cov, g2.cov), 0.0))


def gelbrich_bound(mean1, cov1, mean2, cov2) -> float:
    """Moment lower bound on the squared quadratic transport cost.

    Valid for arbitrary laws with these means and covariances; exact
    (and extremal) when both laws are Gaussian.
    """
    m1 = np.asarray(mean1, dtype=float).reshape(-1)
    m2 = np.asarray(mean2, dtype=float).reshape(-1)
    if m1.shape != m2.shape:
        raise DimensionMismatchError("mean dimensions differ")
    gap = m1 - m2
    return float(gap @ gap) + bures(cov1, cov2)


class SampleBatch:
    """n x d matrix of feature samples, n >= 2."""

    __slots__ = ("data",)

    def __init__(self, data):
        data = np.asarray(data, dtype=float)
        if data.ndim == 1:
            data = data.reshape(-1, 1)
        if data.ndim != 2 or data.shape[0] < 2:
            raise ValueError("a batch needs at least two rows")
        if not np.all(np.isfinite(data)):
            raise ValueError("batch entries must be finite")
        self.data = data

    @property
    def dim(self) -> int:
        return self.data.shape[1]


def estimate_gaussian(batch) -> GaussianLaw:
    """Moment-fitted Gaussian of a batch (covariance denominator n-1)."""
    batch = batch if isinstance(batch, SampleBatch) else SampleBatch(batch)
    mean = batch.data.mean(axis=0)
    centered = batch.data - mean
    cov = centered.T @ centered / (batch.data.shape[0] - 1)
    w, v = np.linalg.eigh(0.5 * (cov + cov.T))
    cov = (v * np.clip(w, 0.0, None)) @ v.T
    return GaussianLaw(mean, cov)


def fid(batch_a, batch_b) -> float:
    """Squared Gaussian transport score between moment-fitted batches.

    Equals gaussian_w2(fit(A), fit(B)) ** 2, following the convention
    that this score reports the squared distance.
    """
    ga = estimate_gaussian(batch_a)
    gb = estimate_gaussian(batch_b)
    if ga.dim != gb.dim:
        raise DimensionMismatchError("batch feature dimensions differ")
    gap = ga.mean - gb.mean
    return max(float(gap @ gap) + bures(ga.cov, gb.cov), 0.0)


def load_batch_csv(path) -> SampleBatch:
    """CSV batch file: one row per sample; an optional non-numeric header."""
    rows = []
    for line in open(path):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split(",")
        try:
            rows.append([float(tok) for tok in fields])
        except ValueError:
            if rows:
                raise
            continue  # header row
    if not rows:
        raise ValueError(f"{path}: no samples found")
    return SampleBatch(rows)
