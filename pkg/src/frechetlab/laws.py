"""Finitely supported probability laws on the real line.

Carries the CDF/quantile machinery, coupling-based distances (W_p and
the quadratic mean-deviation law distance, Levy's 1950 curve distances,
the Ky Fan style gap functional, Gini's index), the comonotone /
antimonotone extremal couplings, and bridges to the curve module.

Conventions: `cdf` is the right-continuous P(X <= x); `quantile` is the
left-continuous generalized inverse Q(t) = inf{x : F(x) >= t}.  The
extremal-coupling constructions are stated at atom level, where both
CDF conventions agree.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

WEIGHT_ATOL = 1e-9


class DegenerateLawError(ValueError):
    """A moment needed by the operation vanishes."""


@dataclass(frozen=True)
class Moments:
    """Mean and quadratic mean deviation of a law."""

    mean: float
    deviation: float


class Law1D:
    """Probability law with finitely many atoms on the real line.

    Atoms are sorted and merged at construction; weights must be
    positive and sum to 1 (renormalized when within 1e-9, rejected
    otherwise).
    """

    __slots__ = ("atoms", "weights", "cum")

    def __init__(self, atoms, weights):
        atoms = np.asarray(atoms, dtype=float)
        weights = np.asarray(weights, dtype=float)
        if atoms.ndim != 1 or weights.ndim != 1 or len(atoms) != len(weights):
            raise ValueError("atoms and weights must be 1D sequences of equal length")
        if len(atoms) == 0:
            raise ValueError("a law needs at least one atom")
        if not np.all(np.isfinite(atoms)):
            raise ValueError("atoms must be finite")
        if np.any(weights <= 0):
            raise ValueError("weights must be positive")
        order = np.argsort(atoms, kind="stable")
        atoms, weights = atoms[order], weights[order]
        keep_atoms, keep_weights = [atoms[0]], [weights[0]]
        for a, w in zip(atoms[1:], weights[1:]):
            if a == keep_atoms[-1]:
                keep_weights[-1] += w
            else:
                keep_atoms.append(a)
                keep_weights.append(w)
        atoms = np.array(keep_atoms)
        weights = np.array(keep_weights)
        total = weights.sum()
        if abs(total - 1.0) > WEIGHT_ATOL:
            raise ValueError(f"weights sum to {total!r}, not 1")
        weights = weights / total
        cum = np.cumsum(weights)
        cum[-1] = 1.0
        self.atoms = atoms
        self.weights = weights
        self.cum = cum
        self.atoms.flags.writeable = False
        self.weights.flags.writeable = False
        self.cum.flags.writeable = False

    def __repr__(self):
        return f"Law1D(atoms={self.atoms.tolist()}, weights={self.weights.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, Law1D):
            return NotImplemented
        return np.array_equal(self.atoms, other.atoms) and np.array_equal(
            self.weights, other.weights
        )

    def __hash__(self):
        return hash((self.atoms.tobytes(), self.weights.tobytes()))


def from_samples(values) -> Law1D:
    """Empirical law of a sample list: equal values merged, uniform mass."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("cannot build a law from an empty sample")
    if not np.all(np.isfinite(values)):
        raise ValueError("samples must be finite")
    atoms, counts = np.unique(values, return_counts=True)
    return Law1D(atoms, counts / values.size)


def cdf(law: Law1D, x) -> float | np.ndarray:
    """Right-continuous distribution function P(X <= x)."""
    idx = np.searchsorted(law.atoms, x, side="right")
    padded = np.concatenate([[0.0], law.cum])
    out = padded[idx]
    return float(out) if np.isscalar(x) else out


def quantile(law: Law1D, t) -> float | np.ndarray:
    """Left-continuous generalized inverse Q(t) = inf{x : F(x) >= t}, t in (0, 1]."""
    tarr = np.asarray(t, dtype=float)
    if np.any(tarr <= 0.0) or np.any(tarr > 1.0):
        raise ValueError("quantile level must lie in (0, 1]")
    idx = np.searchsorted(law.cum, tarr, side="left")
    out = law.atoms[idx]
    return float(out) if np.isscalar(t) else out


def moments(law: Law1D) -> Moments:
    mean = float(np.dot(law.weights, law.atoms))
    var = float(np.dot(law.weights, (law.atoms - mean) ** 2))
    return Moments(mean, math.sqrt(max(var, 0.0)))


def _merged_levels(a: Law1D, b: Law1D) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Common probability levels and the two quantile values per level slab.

    Returns (dt, qa, qb): interval lengths of the merged breakpoint grid
    and the constant quantile value of each law on every interval.
    """
    levels = np.unique(np.concatenate([a.cum, b.cum]))
    lows = np.concatenate([[0.0], levels[:-1]])
    dt = levels - lows
    ia = np.minimum(np.searchsorted(a.cum, lows, side="right"), len(a.atoms) - 1)
    ib = np.minimum(np.searchsorted(b.cum, lows, side="right"), len(b.atoms) - 1)
    return dt, a.atoms[ia], b.atoms[ib]


def wasserstein_p(a: Law1D, b: Law1D, p: float) -> float:
    """L^p distance between the quantile functions, exact for finite laws."""
    if p < 1:
        raise ValueError("order p must be >= 1")
    dt, qa, qb = _merged_levels(a, b)
    return float(np.dot(dt, np.abs(qa - qb) ** p) ** (1.0 / p))


def w_infinity(a: Law1D, b: Law1D) -> float:
    """Smallest worst-case displacement: sup_t |Q_a(t) - Q_b(t)|."""
    dt, qa, qb = _merged_levels(a, b)
    gaps = np.abs(qa - qb)[dt > 0]
    return float(gaps.max())


def w1_cdf_area(a: Law1D, b: Law1D) -> float:
    """Area between the two CDFs, the closed form for the order-1 distance."""
    xs = np.unique(np.concatenate([a.atoms, b.atoms]))
    if len(xs) == 1:
        return 0.0
    fa = cdf(a, xs[:-1])
    fb = cdf(b, xs[:-1])
    return float(np.dot(np.abs(fa - fb), np.diff(xs)))


def kolmogorov(a: Law1D, b: Law1D) -> float:
    """sup_x |F_a(x) - F_b(x)|, evaluating both one-sided limits at atoms."""
    xs = np.unique(np.concatenate([a.atoms, b.atoms]))
    at = np.abs(cdf(a, xs) - cdf(b, xs))
    # left limits: F(x-) = F(x) - weight at x
    fa_left = cdf(a, xs) - _weight_at(a, xs)
    fb_left = cdf(b, xs) - _weight_at(b, xs)
    before = np.abs(fa_left - fb_left)
    return float(max(at.max(), before.max()))


def _weight_at(law: Law1D, xs: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(law.atoms, xs)
    out = np.zeros(len(xs))
    mask = (idx < len(law.atoms)) & (law.atoms[np.minimum(idx, len(law.atoms) - 1)] == xs)
    out[mask] = law.weights[idx[mask]]
    return out


# ---------------------------------------------------------------------------
# couplings


class Coupling1D:
    """Joint law on finitely many (x, y) pairs with positive weights."""

    __slots__ = ("xs", "ys", "ws")

    def __init__(self, pairs):
        pairs = [(float(x), float(y), float(w)) for x, y, w in pairs]
        if not pairs:
            raise ValueError("a coupling needs at least one pair")
        agg: dict[tuple[float, float], float] = {}
        for x, y, w in pairs:
            if w <= 0:
                raise ValueError("pair weights must be positive")
            agg[(x, y)] = agg.get((x, y), 0.0) + w
        keys = sorted(agg)
        self.xs = np.array([k[0] for k in keys])
        self.ys = np.array([k[1] for k in keys])
        ws = np.array([agg[k] for k in keys])
        total = ws.sum()
        if abs(total - 1.0) > WEIGHT_ATOL:
            raise ValueError(f"coupling weights sum to {total!r}, not 1")
        self.ws = ws / total

    def pairs(self) -> list[tuple[float, float, float]]:
        return list(zip(self.xs.tolist(), self.ys.tolist(), self.ws.tolist()))

    def x_marginal(self) -> Law1D:
        return _aggregate_marginal(self.xs, self.ws)

    def y_marginal(self) -> Law1D:
        return _aggregate_marginal(self.ys, self.ws)

    def joint_cdf(self, x: float, y: float) -> float:
        """P(X <= x and Y <= y) of the coupling."""
        return float(self.ws[(self.xs <= x) & (self.ys <= y)].sum())


def _aggregate_marginal(values: np.ndarray, ws: np.ndarray) -> Law1D:
    atoms, inverse = np.unique(values, return_inverse=True)
    weights = np.zeros(len(atoms))
    np.add.at(weights, inverse, ws)
    return Law1D(atoms, weights)


def frechet_hoeffding_bounds(a: Law1D, b: Law1D, x: float, y: float) -> tuple[float, float]:
    """Pointwise extremes (H0, H1) of all joint CDFs with margins F_a, F_b."""
    fx, gy = cdf(a, x), cdf(b, y)
    return max(fx + gy - 1.0, 0.0), min(fx, gy)


def monotone_coupling(a: Law1D, b: Law1D) -> Coupling1D:
    """Comonotone coupling: pair equal probability levels of both quantiles.

    Its joint CDF attains the upper bound min(F, G) everywhere.
    """
    dt, qa, qb = _merged_levels(a, b)
    keep = dt > 0
    return Coupling1D(zip(qa[keep], qb[keep], dt[keep]))


def antimonotone_coupling(a: Law1D, b: Law1D) -> Coupling1D:
    """Countermonotone coupling pairing Q_a(t) with Q_b(1 - t).

    Its joint CDF attains the lower bound max(F + G - 1, 0).
    """
    levels = np.unique(np.concatenate([a.cum, 1.0 - b.cum, [0.0], [1.0]]))
    levels = levels[(levels >= 0.0) & (levels <= 1.0)]
    pairs = []
    for lo, hi in zip(levels[:-1], levels[1:]):
        dt = hi - lo
        if dt <= 0:
            continue
        mid = 0.5 * (lo + hi)
        pairs.append((quantile(a, mid), quantile(b, 1.0 - mid), dt))
    return Coupling1D(pairs)


def coupling_cost(c: Coupling1D, alpha: float) -> float:
    """Mean |X - Y|^alpha under the coupling (no root taken)."""
    if alpha < 1:
        raise ValueError("cost exponent alpha must be >= 1")
    return float(np.dot(c.ws, np.abs(c.xs - c.ys) ** alpha))


def correlation(c: Coupling1D) -> float:
    """Linear correlation of the coupled pair, via reduced variables."""
    ax = float(np.dot(c.ws, c.xs))
    ay = float(np.dot(c.ws, c.ys))
    sx = math.sqrt(max(float(np.dot(c.ws, (c.xs - ax) ** 2)), 0.0))
    sy = math.sqrt(max(float(np.dot(c.ws, (c.ys - ay) ** 2)), 0.0))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateLawError("correlation undefined for a point-mass marginal")
    return float(np.dot(c.ws, (c.xs - ax) / sx * (c.ys - ay) / sy))


def frechet_1957_distance(a: Law1D, b: Law1D) -> float:
    """Quadratic mean-deviation distance via extremal correlation.

    Evaluates sqrt((mean gap)^2 + s^2 - 2 s s' rho + s'^2) with rho the
    correlation of the comonotone coupling, rewritten as
    (mean gap)^2 + (s - s')^2 + s s' E(Z - T)^2 so that rho near 1 does
    not cancel; equals the order-2 quantile distance on finite laws.
    A point-mass marginal drops the correlation term entirely.
    """
    ma, mb = moments(a), moments(b)
    inner = (ma.mean - mb.mean) ** 2 + (ma.deviation - mb.deviation) ** 2
    if ma.deviation > 0.0 and mb.deviation > 0.0:
        c = monotone_coupling(a, b)
        z = (c.xs - ma.mean) / ma.deviation
        t = (c.ys - mb.mean) / mb.deviation
        inner += ma.deviation * mb.deviation * float(np.dot(c.ws, (z - t) ** 2))
    return math.sqrt(max(inner, 0.0))


def same_reduced_distance(a: Law1D, b: Law1D) -> float:
    """Closed form sqrt((mean gap)^2 + (deviation gap)^2).

    Only valid when the two reduced (centered, unit-deviation) laws
    coincide; checked within 1e-9 and rejected otherwise.
    """
    ma, mb = moments(a), moments(b)
    if (ma.deviation == 0.0) != (mb.deviation == 0.0):
        raise ValueError("reduced laws differ: one law is a point mass")
    if ma.deviation > 0.0:
        ra = (a.atoms - ma.mean) / ma.deviation
        rb = (b.atoms - mb.mean) / mb.deviation
        if len(ra) != len(rb) or not (
            np.allclose(ra, rb, atol=1e-9) and np.allclose(a.weights, b.weights, atol=1e-9)
        ):
            raise ValueError("reduced laws differ")
    return math.hypot(ma.mean - mb.mean, ma.deviation - mb.deviation)


def monotone_map(a: Law1D, b: Law1D, x: float) -> float:
    """Increasing rearrangement map at an atom of the source law."""
    idx = np.searchsorted(a.atoms, x)
    if idx >= len(a.atoms) or a.atoms[idx] != x:
        raise ValueError(f"{x!r} is not an atom of the source law")
    return quantile(b, cdf(a, x))


def ky_fan_levy(c: Coupling1D) -> float:
    """min over eps >= 0 of eps + P(|X - Y| > eps) under the coupling.

    The objective is piecewise linear with breakpoints exactly at the
    realized gaps, so the minimum over {0} and the gap values is exact.
    """
    gaps = np.abs(c.xs - c.ys)
    best = math.inf
    for eps in np.concatenate([[0.0], np.unique(gaps)]):
        best = min(best, float(eps + c.ws[gaps > eps].sum()))
    return best


def gini_index(a, b, alpha: float) -> float:
    """Dissimilarity index of two sorted, equally long sequences.

    ((1/n) sum |a_h - b_h|^alpha)^(1/alpha); coincides with the order-
    alpha distance between the two empirical laws.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if alpha < 1:
        raise ValueError("order alpha must be >= 1")
    if a.shape != b.shape or a.ndim != 1 or a.size == 0:
        raise ValueError("sequences must be 1D, nonempty and equally long")
    if np.any(np.diff(a) < 0) or np.any(np.diff(b) < 0):
        raise ValueError("sequences must be nondecreasing")
    return float(np.mean(np.abs(a - b) ** alpha) ** (1.0 / alpha))


# ---------------------------------------------------------------------------
# completed CDF graphs and Levy's 1950 distances


@dataclass(frozen=True)
class CdfGraph:
    """Completed CDF staircase: jumps filled with vertical segments.

    The polyline is monotone in x and y, spans y in [0, 1], and meets
    every line x + y = c in the covered range in exactly one point.
    """

    vertices: np.ndarray

    def intersect_antidiagonal(self, c: float) -> np.ndarray:
        """The unique graph point with x + y = c."""
        v = self.vertices
        cs = v[:, 0] + v[:, 1]
        if not cs[0] <= c <= cs[-1]:
            raise ValueError(f"line x+y={c} misses the graph")
        k = int(np.searchsorted(cs, c, side="left"))
        if cs[k] == c:
            return v[k]
        s = (c - cs[k - 1]) / (cs[k] - cs[k - 1])
        return v[k - 1] + s * (v[k] - v[k - 1])


def cdf_graph(law: Law1D, x_lo: float, x_hi: float) -> CdfGraph:
    """Completed graph of the CDF over [x_lo, x_hi] (flat extensions)."""
    if x_lo > law.atoms[0] or x_hi < law.atoms[-1]:
        raise ValueError("graph range must cover the atom range")
    verts = [(x_lo, 0.0)]
    prev = 0.0
    for a, cw in zip(law.atoms, law.cum):
        if (a, prev) != verts[-1]:
            verts.append((a, prev))
        verts.append((a, cw))
        prev = cw
    if verts[-1] != (x_hi, 1.0):
        verts.append((x_hi, 1.0))
    return CdfGraph(np.array(verts))


def _common_graphs(a: Law1D, b: Law1D) -> tuple[CdfGraph, CdfGraph]:
    x_lo = min(a.atoms[0], b.atoms[0]) - 1.0
    x_hi = max(a.atoms[-1], b.atoms[-1]) + 1.0
    return cdf_graph(a, x_lo, x_hi), cdf_graph(b, x_lo, x_hi)


def levy_1950_def1(a: Law1D, b: Law1D) -> float:
    """Max over c of the gap between the c-antidiagonal hits of both graphs.

    |A(c) - A'(c)| is convex in c between graph corners, so the maximum
    over corner values of either graph is exact.
    """
    ga, gb = _common_graphs(a, b)
    corners = np.unique(
        np.concatenate(
            [ga.vertices[:, 0] + ga.vertices[:, 1], gb.vertices[:, 0] + gb.vertices[:, 1]]
        )
    )
    best = 0.0
    for c in corners:
        gap = np.linalg.norm(ga.intersect_antidiagonal(c) - gb.intersect_antidiagonal(c))
        best = max(best, float(gap))
    return best


def _sample_polyline(vertices: np.ndarray, spacing: float) -> np.ndarray:
    pts = [vertices[0]]
    for u, v in zip(vertices[:-1], vertices[1:]):
        seg = np.linalg.norm(v - u)
        if seg == 0:
            continue
        n = max(int(math.ceil(seg / spacing)), 1)
        for k in range(1, n + 1):
            pts.append(u + (k / n) * (v - u))
    return np.array(pts)


def _dist_points_to_polyline(points: np.ndarray, vertices: np.ndarray, metric: str) -> np.ndarray:
    """Per-point distance to a polyline, exact over each segment."""
    best = np.full(len(points), np.inf)
    for u, v in zip(vertices[:-1], vertices[1:]):
        d = v - u
        if metric == "euclidean":
            denom = float(d @ d)
            if denom == 0:
                cand = np.linalg.norm(points - u, axis=1)
            else:
                s = np.clip(((points - u) @ d) / denom, 0.0, 1.0)
                cand = np.linalg.norm(points - (u + s[:, None] * d), axis=1)
            best = np.minimum(best, cand)
        else:  # taxicab: piecewise linear in s, check the kink candidates
            cands = [np.zeros(len(points)), np.ones(len(points))]
            for axis in range(2):
                if d[axis] != 0:
                    cands.append(np.clip((points[:, axis] - u[axis]) / d[axis], 0.0, 1.0))
            for s in cands:
                proj = u + s[:, None] * d
                cand = np.abs(points - proj).sum(axis=1)
                best = np.minimum(best, cand)
    return best


def levy_1950_def2(a: Law1D, b: Law1D, point_metric: str = "euclidean") -> float:
    """Symmetric max point-to-curve distance between the two CDF graphs.

    Approximated by sampling each graph at 1e-4 of its extent; the
    point-to-segment legs are exact under the chosen planar metric
    (euclidean or taxicab).
    """
    if point_metric not in ("euclidean", "taxicab"):
        raise ValueError("point_metric must be 'euclidean' or 'taxicab'")
    ga, gb = _common_graphs(a, b)
    extent = math.hypot(ga.vertices[-1, 0] - ga.vertices[0, 0], 1.0)
    spacing = 1e-4 * extent
    pa = _sample_polyline(ga.vertices, spacing)
    pb = _sample_polyline(gb.vertices, spacing)
    d_ab = _dist_points_to_polyline(pa, gb.vertices, point_metric).max()
    d_ba = _dist_points_to_polyline(pb, ga.vertices, point_metric).max()
    return float(max(d_ab, d_ba))


# ---------------------------------------------------------------------------
# the base-3 staircase function and its inverse


def _ternary_digits(x, digits: int):
    frac = Fraction(x)
    if not 0 <= frac <= 1:
        raise ValueError("argument must lie in [0, 1]")
    out = []
    for _ in range(digits):
        frac *= 3
        d = int(frac)  # floor for nonnegative
        if d == 3:
            d = 2
        frac -= d
        out.append(d)
    return out, frac


def cantor_phi(x, digits: int = 52) -> float:
    """Staircase function constant off the middle-thirds set.

    Reads the ternary digits of x and emits binary digits: a digit 2
    becomes 1, a digit 1 ends the expansion with a final 1.  Exact
    rational digit extraction; truncation error <= 2**-digits.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    trits, rest = _ternary_digits(x, digits)
    numer = 0
    alive = True
    for d in trits:
        numer <<= 1
        if alive and d != 0:
            numer |= 1
        if d == 1:
            alive = False
    if alive and rest == 1:  # tail of repeated 2s: add the full remaining mass
        numer += 1
    return numer / (1 << digits)


def cantor_quantile(t, digits: int = 52) -> Fraction:
    """Inverse construction: binary digits b of t become ternary digits 2b.

    Returns an exact rational so that composing with cantor_phi loses
    nothing beyond the stated truncation.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    frac = Fraction(t)
    if not 0 < frac <= 1:
        raise ValueError("level must lie in (0, 1]")
    q = Fraction(0)
    scale = Fraction(1)
    for _ in range(digits):
        frac *= 2
        bit = int(frac)
        if bit == 2:
            bit = 1
        frac -= bit
        scale /= 3
        q += 2 * bit * scale
    if frac == 1:  # all-ones tail: the ternary tail of 2s sums to scale
        q += scale
    return q


def quantile_graph(law: Law1D, n: int):
    """Planar polyline (t_i, Q(t_i)) at n midpoint levels t_i = (i - 1/2)/n."""
    from .curves import Polyline

    if n < 2:
        raise ValueError("need at least two sample points")
    ts = (np.arange(n) + 0.5) / n
    return Polyline(np.column_stack([ts, quantile(law, ts)]))


# ---------------------------------------------------------------------------
# file formats


def law_to_json(law: Law1D) -> str:
    return json.dumps({"atoms": law.atoms.tolist(), "weights": law.weights.tolist()})


def law_from_json(text: str) -> Law1D:
    obj = json.loads(text)
    return Law1D(obj["atoms"], obj["weights"])


def coupling_to_json(c: Coupling1D) -> str:
    return json.dumps([[x, y, w] for x, y, w in c.pairs()])


def load_law(path) -> Law1D:
    """Read a law file: JSON {"atoms", "weights"} or a CSV sample list."""
    text = open(path).read()
    if str(path).endswith(".json"):
        return law_from_json(text)
    values = [float(line) for line in text.splitlines() if line.strip() and not line.startswith("#")]
    return from_samples(values)
