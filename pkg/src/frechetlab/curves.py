"""Geometric distances between polygonal curves.

Continuous Frechet distance via free-space reachability (decision) and
bracketed bisection (computation), plus the discrete variant, dynamic
time warping, sampled Hausdorff / shortest-distance / max-min bounds,
a closed-curve upper bound over cyclic re-rootings, and an SVG export
of the free-space diagram.

The Euclidean norm is used throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._kernels import decision_kernel, discrete_frechet_kernel, dtw_kernel, point_segment_interval

Interval = Optional[tuple[float, float]]

DEFAULT_TOL = 1e-9
_MAX_BISECT = 200


class DimensionMismatchError(ValueError):
    """The two inputs live in spaces of different dimension."""


class OpenCurveError(ValueError):
    """A closed-curve operation received an open polyline."""


class Polyline:
    """Ordered vertex list in d-dimensional space.

    Consecutive duplicate vertices are collapsed at construction; a
    single repeated point therefore becomes a one-vertex curve.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=float)
        if v.ndim == 1:
            v = v.reshape(-1, 1)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError("vertices must form a nonempty (k, d) array")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertex coordinates must be finite")
        keep = np.ones(len(v), dtype=bool)
        keep[1:] = np.any(v[1:] != v[:-1], axis=1)
        self.vertices = v[keep].copy()
        self.vertices.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"Polyline({self.vertices.tolist()})"

    def is_closed(self) -> bool:
        return len(self.vertices) > 1 and bool(
            np.all(self.vertices[0] == self.vertices[-1])
        )


def as_polyline(obj) -> Polyline:
    return obj if isinstance(obj, Polyline) else Polyline(obj)


def _check_dims(p: Polyline, q: Polyline):
    if p.dim != q.dim:
        raise DimensionMismatchError(f"curve dimensions differ: {p.dim} vs {q.dim}")


def _point_segment_distance(point: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    d = b - a
    denom = float(d @ d)
    if denom == 0.0:
        return float(np.linalg.norm(point - a))
    s = min(max(float((point - a) @ d) / denom, 0.0), 1.0)
    return float(np.linalg.norm(point - (a + s * d)))


def simplify_vertices(v: np.ndarray) -> np.ndarray:
    """Drop interior vertices that lie on the segment of their neighbors.

    Removal keeps the traced curve identical up to reparameterization,
    so every continuous-Frechet quantity is unchanged.  The tolerance
    is a 1e-12 fraction of the coordinate scale.
    """
    if len(v) <= 2:
        return v
    scale = max(1.0, float(np.max(np.abs(v))))
    atol = 1e-12 * scale
    stack = [v[0], v[1]]
    for point in v[2:]:
        while len(stack) >= 2 and _point_segment_distance(stack[-1], stack[-2], point) <= atol:
            stack.pop()
        stack.append(point)
    return np.array(stack)


# ---------------------------------------------------------------------------
# free space


def free_space_cell(edge_p, edge_q, epsilon: float) -> tuple[Interval, Interval, Interval, Interval]:
    """Free intervals on the four boundaries of one free-space cell.

    The cell is parameterized by (s, t) in [0,1]^2 along edge_p and
    edge_q.  Returns (left, right, bottom, top); each entry is a closed
    (lo, hi) interval in [0, 1] or None when empty.  Left/right are
    t-intervals at the edge_p endpoints, bottom/top are s-intervals at
    the edge_q endpoints.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    ep = np.asarray(edge_p, dtype=float)
    eq = np.asarray(edge_q, dtype=float)
    if ep.shape != (2, ep.shape[1]) or eq.shape != (2, eq.shape[1]) or ep.shape[1] != eq.shape[1]:
        raise DimensionMismatchError("edges must be two points each, of equal dimension")

    def iv(a, b, c):
        lo, hi = point_segment_interval(a, b - a, c, epsilon)
        return (lo, hi) if lo <= hi else None

    left = iv(eq[0], eq[1], ep[0])
    right = iv(eq[0], eq[1], ep[1])
    bottom = iv(ep[0], ep[1], eq[0])
    top = iv(ep[0], ep[1], eq[1])
    return left, right, bottom, top


def _decision_prepared(pv: np.ndarray, qv: np.ndarray, epsilon: float) -> bool:
    if np.linalg.norm(pv[0] - qv[0]) > epsilon or np.linalg.norm(pv[-1] - qv[-1]) > epsilon:
        return False
    if len(pv) == 1 and len(qv) == 1:
        return True
    if len(pv) == 1:
        return float(np.linalg.norm(qv - pv[0], axis=1).max()) <= epsilon
    if len(qv) == 1:
        return float(np.linalg.norm(pv - qv[0], axis=1).max()) <= epsilon
    return bool(decision_kernel(pv, qv, epsilon))


def frechet_decision(p, q, epsilon: float) -> bool:
    """Whether the curves admit a matching that never exceeds epsilon."""
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    p, q = as_polyline(p), as_polyline(q)
    _check_dims(p, q)
    return _decision_prepared(simplify_vertices(p.vertices), simplify_vertices(q.vertices), epsilon)


@dataclass(frozen=True)
class CurveDistanceResult:
    """A bracketed distance value: lo <= value <= hi with hi - lo <= tol."""

    value: float
    bracket: tuple[float, float]
    tol: float

    def __post_init__(self):
        lo, hi = self.bracket
        if not (lo - 1e-15 <= self.value <= hi + 1e-15):
            raise ValueError("value must lie inside its bracket")
        if hi - lo > self.tol * max(1.0, hi) + 1e-15:
            raise ValueError("bracket is wider than the requested tolerance")

    def __float__(self):
        return self.value


def frechet_distance(p, q, tol: float = DEFAULT_TOL) -> CurveDistanceResult:
    """Continuous Frechet distance by bisection on the decision procedure.

    The initial bracket is [max endpoint gap, discrete Frechet]; the
    returned value is the feasible upper end of the final bracket.
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    p, q = as_polyline(p), as_polyline(q)
    _check_dims(p, q)
    pv, qv = p.vertices, q.vertices
    lo = max(
        float(np.linalg.norm(pv[0] - qv[0])),
        float(np.linalg.norm(pv[-1] - qv[-1])),
    )
    hi = discrete_frechet(p, q)
    sp, sq = simplify_vertices(pv), simplify_vertices(qv)
    for _ in range(_MAX_BISECT):
        if hi - lo <= tol * max(1.0, hi):
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _decision_prepared(sp, sq, mid):
            hi = mid
        else:
            lo = mid
    return CurveDistanceResult(hi, (lo, hi), tol)


def discrete_frechet(p, q) -> float:
    """Min over monotone vertex couplings of the max vertex distance."""
    p, q = as_polyline(p), as_polyline(q)
    _check_dims(p, q)
    return float(discrete_frechet_kernel(p.vertices, q.vertices))


def dtw(p, q) -> float:
    """Dynamic time warping cost with steps (1,0), (0,1), (1,1)."""
    p, q = as_polyline(p), as_polyline(q)
    _check_dims(p, q)
    return float(dtw_kernel(p.vertices, q.vertices))


# ---------------------------------------------------------------------------
# sampled set distances


def _densify(v: np.ndarray, spacing: float) -> np.ndarray:
    pts = [v[0]]
    for a, b in zip(v[:-1], v[1:]):
        seg = float(np.linalg.norm(b - a))
        n = max(int(math.ceil(seg / spacing)), 1)
        for k in range(1, n + 1):
            pts.append(a + (k / n) * (b - a))
    return np.array(pts)


def _dist_to_polyline(points: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Exact distance from each point to the polyline (min over segments)."""
    if len(v) == 1:
        return np.linalg.norm(points - v[0], axis=1)
    best = np.full(len(points), np.inf)
    for a, b in zip(v[:-1], v[1:]):
        d = b - a
        denom = float(d @ d)
        if denom == 0.0:
            cand = np.linalg.norm(points - a, axis=1)
        else:
            s = np.clip((points - a) @ d / denom, 0.0, 1.0)
            cand = np.linalg.norm(points - (a + s[:, None] * d), axis=1)
        np.minimum(best, cand, out=best)
    return best


def directed_maxmin(p, q, resolution: float) -> float:
    """Directed Hausdorff from p to q on a sampling of p (error <= resolution)."""
    if resolution <= 0:
        raise ValueError("resolution must be > 0")
    p, q = as_polyline(p), as_polyline(q)
    _check_dims(p, q)
    samples = _densify(p.vertices, resolution)
    return float(_dist_to_polyline(samples, q.vertices).max())


def hausdorff(p, q, resolution: float) -> float:
    """Symmetric Hausdorff distance between the curves' point sets."""
    return max(directed_maxmin(p, q, resolution), directed_maxmin(q, p, resolution))


def shortest_distance(p, q, resolution: float) -> float:
    """Min distance between any point of p and any point of q (sampled)."""
    if resolution <= 0:
        raise ValueError("resolution must be > 0")
    p, q = as_polyline(p), as_polyline(q)
    _check_dims(p, q)
    d_pq = _dist_to_polyline(_densify(p.vertices, resolution), q.vertices).min()
    d_qp = _dist_to_polyline(_densify(q.vertices, resolution), p.vertices).min()
    return float(min(d_pq, d_qp))


# ---------------------------------------------------------------------------
# closed curves


def _rotations(v: np.ndarray, shifts_per_edge: int):
    """Candidate re-rootings of a closed vertex cycle.

    Yields the cycle re-rooted at every vertex and at shifts_per_edge
    uniform interior points of every edge.
    """
    cycle = v[:-1]
    k = len(cycle)
    for e in range(k):
        nxt = cycle[(e + 1) % k]
        for s in range(shifts_per_edge + 1):
            f = s / (shifts_per_edge + 1)
            root = cycle[e] + f * (nxt - cycle[e])
            if f == 0.0:
                body = np.concatenate([cycle[e:], cycle[:e], cycle[e : e + 1]])
            else:
                body = np.concatenate([[root], cycle[e + 1 :], cycle[: e + 1], [root]])
            yield body


def _normalize_closed(p: Polyline) -> Polyline:
    """Snap a nearly-closed curve shut; reject genuinely open input."""
    v = p.vertices
    scale = max(1.0, float(np.max(np.abs(v))))
    if len(v) < 3 or float(np.linalg.norm(v[0] - v[-1])) > 1e-9 * scale:
        raise OpenCurveError("closed-curve distance needs closed polylines")
    if np.all(v[0] == v[-1]):
        return p
    return Polyline(np.concatenate([v[:-1], v[:1]]))


def closed_frechet(p, q, tol: float = DEFAULT_TOL, shifts_per_edge: int = 1) -> CurveDistanceResult:
    """Upper bound on the closed-curve Frechet distance.

    Minimizes the open-curve distance over cyclic re-rootings of the
    second curve (all vertices plus shifts_per_edge uniform points per
    edge).  The result brackets the best candidate's distance; the true
    closed-curve value can only be lower.
    """
    if shifts_per_edge < 1:
        raise ValueError("shifts_per_edge must be >= 1")
    p, q = as_polyline(p), as_polyline(q)
    _check_dims(p, q)
    p = _normalize_closed(p)
    q = _normalize_closed(q)
    best = None
    start = p.vertices[0]
    for rot in _rotations(q.vertices, shifts_per_edge):
        if best is not None and float(np.linalg.norm(start - rot[0])) >= best.value:
            continue  # endpoint gap already lower-bounds this candidate
        cand = frechet_distance(p, Polyline(rot), tol)
        if best is None or cand.value < best.value:
            best = cand
    return best


# ---------------------------------------------------------------------------
# free-space diagram object and SVG export


@dataclass(frozen=True)
class FreeSpaceDiagram:
    """Per-cell boundary data of the free-space grid at one epsilon.

    Interval arrays have shape (m, n, 2) holding (lo, hi) with lo > hi
    for empty.  Reachability is stored for the left/bottom boundary of
    every cell, plus the corner flag for the whole diagram.
    """

    epsilon: float
    shape: tuple[int, int]
    left: np.ndarray
    right: np.ndarray
    bottom: np.ndarray
    top: np.ndarray
    reach_left: np.ndarray
    reach_bottom: np.ndarray
    corner_reachable: bool


_EMPTY = (1.0, -1.0)


def _clip_lo(iv, lo_bound):
    lo, hi = iv
    lo = max(lo, lo_bound)
    return (lo, hi) if lo <= hi else _EMPTY


def free_space_diagram(p, q, epsilon: float) -> FreeSpaceDiagram:
    """Materialize the free-space grid (meant for desk-scale inputs)."""
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    p, q = as_polyline(p), as_polyline(q)
    _check_dims(p, q)
    pv, qv = p.vertices, q.vertices
    if len(pv) < 2 or len(qv) < 2:
        raise ValueError("free-space diagram needs at least one edge per curve")
    m, n = len(pv) - 1, len(qv) - 1

    def iv(a, b, c):
        lo, hi = point_segment_interval(a, b - a, c, epsilon)
        return (lo, hi) if lo <= hi else _EMPTY

    left = np.empty((m, n, 2))
    right = np.empty((m, n, 2))
    bottom = np.empty((m, n, 2))
    top = np.empty((m, n, 2))
    for i in range(m):
        for j in range(n):
            left[i, j] = iv(qv[j], qv[j + 1], pv[i])
            right[i, j] = iv(qv[j], qv[j + 1], pv[i + 1])
            bottom[i, j] = iv(pv[i], pv[i + 1], qv[j])
            top[i, j] = iv(pv[i], pv[i + 1], qv[j + 1])

    reach_left = np.full((m, n, 2), _EMPTY, dtype=float)
    reach_bottom = np.full((m, n, 2), _EMPTY, dtype=float)

    ok = float(np.linalg.norm(pv[0] - qv[0])) <= epsilon
    corner_ok = ok
    for i in range(m):  # bottom chain
        lo, hi = bottom[i, 0]
        if corner_ok and lo <= 0.0:
            reach_bottom[i, 0] = (0.0, hi)
        corner_ok = corner_ok and lo <= 0.0 and hi >= 1.0
    corner_ok = ok
    for j in range(n):  # left chain
        lo, hi = left[0, j]
        if corner_ok and lo <= 0.0:
            reach_left[0, j] = (0.0, hi)
        corner_ok = corner_ok and lo <= 0.0 and hi >= 1.0

    last_right, last_top = _EMPTY, _EMPTY
    for j in range(n):
        for i in range(m):
            rl = reach_left[i, j]
            rb = reach_bottom[i, j]
            if rb[0] <= rb[1]:
                rr = tuple(right[i, j])
            elif rl[0] <= rl[1]:
                rr = _clip_lo(tuple(right[i, j]), rl[0])
            else:
                rr = _EMPTY
            if rl[0] <= rl[1]:
                rt = tuple(top[i, j])
            elif rb[0] <= rb[1]:
                rt = _clip_lo(tuple(top[i, j]), rb[0])
            else:
                rt = _EMPTY
            if rr[0] > rr[1]:
                rr = _EMPTY
            if rt[0] > rt[1]:
                rt = _EMPTY
            if i + 1 < m:
                reach_left[i + 1, j] = rr
            elif j == n - 1:
                last_right = rr
            if j + 1 < n:
                reach_bottom[i, j + 1] = rt
            elif i == m - 1:
                last_top = rt
    reachable = (
        float(np.linalg.norm(pv[-1] - qv[-1])) <= epsilon
        and (last_top[1] >= 1.0 or last_right[1] >= 1.0)
    )
    return FreeSpaceDiagram(
        epsilon=float(epsilon),
        shape=(m, n),
        left=left,
        right=right,
        bottom=bottom,
        top=top,
        reach_left=reach_left,
        reach_bottom=reach_bottom,
        corner_reachable=bool(reachable),
    )


def free_space_svg(p, q, epsilon: float, samples_per_cell: int = 4) -> str:
    """Deterministic SVG rendering of the free-space diagram.

    Cells are shaded by the fraction of an interior sample grid that is
    free; free boundary intervals are drawn as green edge segments and
    reachable boundary intervals as thick blue overlays.
    """
    p, q = as_polyline(p), as_polyline(q)
    diagram = free_space_diagram(p, q, epsilon)
    m, n = diagram.shape
    pv, qv = p.vertices, q.vertices
    cell = max(4.0, min(40.0, 800.0 / max(m, n)))
    width, height = m * cell, n * cell

    def x_of(i):
        return i * cell

    def y_of(j):  # flip so the j axis points up
        return height - j * cell

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width:.1f} {height:.1f}" '
        f'width="{width:.1f}" height="{height:.1f}">',
        f'<rect x="0" y="0" width="{width:.1f}" height="{height:.1f}" fill="white"/>',
    ]
    k = samples_per_cell
    offs = (np.arange(k) + 0.5) / k
    for i in range(m):
        a, da = pv[i], pv[i + 1] - pv[i]
        for j in range(n):
            b, db = qv[j], qv[j + 1] - qv[j]
            ps = a + offs[:, None] * da
            qs = b + offs[:, None] * db
            dist = np.linalg.norm(ps[:, None, :] - qs[None, :, :], axis=2)
            frac = float((dist <= epsilon).mean())
            if frac > 0:
                out.append(
                    f'<rect class="free-fill" x="{x_of(i):.2f}" y="{y_of(j + 1):.2f}" '
                    f'width="{cell:.2f}" height="{cell:.2f}" fill="#39a845" '
                    f'fill-opacity="{frac:.3f}"/>'
                )

    def edge_line(cls, x1, y1, x2, y2, stroke, sw):
        out.append(
            f'<line class="{cls}" x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke="{stroke}" stroke-width="{sw}"/>'
        )

    for i in range(m):
        for j in range(n):
            lo, hi = diagram.left[i, j]
            if lo <= hi:
                edge_line("free-edge", x_of(i), y_of(j + lo), x_of(i), y_of(j + hi), "#1b7e27", 1.5)
            lo, hi = diagram.bottom[i, j]
            if lo <= hi:
                edge_line("free-edge", x_of(i + lo), y_of(j), x_of(i + hi), y_of(j), "#1b7e27", 1.5)
            if i == m - 1:
                lo, hi = diagram.right[i, j]
                if lo <= hi:
                    edge_line("free-edge", x_of(m), y_of(j + lo), x_of(m), y_of(j + hi), "#1b7e27", 1.5)
            if j == n - 1:
                lo, hi = diagram.top[i, j]
                if lo <= hi:
                    edge_line("free-edge", x_of(i + lo), y_of(n), x_of(i + hi), y_of(n), "#1b7e27", 1.5)
            lo, hi = diagram.reach_left[i, j]
            if lo <= hi:
                edge_line("reach-edge", x_of(i), y_of(j + lo), x_of(i), y_of(j + hi), "#1f4fd8", 3)
            lo, hi = diagram.reach_bottom[i, j]
            if lo <= hi:
                edge_line("reach-edge", x_of(i + lo), y_of(j), x_of(i + hi), y_of(j), "#1f4fd8", 3)

    grid = []
    for i in range(m + 1):
        grid.append(f"M {x_of(i):.2f} 0 V {height:.2f}")
    for j in range(n + 1):
        grid.append(f"M 0 {y_of(j):.2f} H {width:.2f}")
    out.append(f'<path d="{" ".join(grid)}" stroke="#999" stroke-width="0.5" fill="none"/>')
    marker = "corner-reachable" if diagram.corner_reachable else "corner-blocked"
    color = "#1f4fd8" if diagram.corner_reachable else "#d32f2f"
    out.append(f'<circle class="{marker}" cx="{width:.2f}" cy="0" r="4" fill="{color}"/>')
    out.append("</svg>")
    return "\n".join(out)


# ---------------------------------------------------------------------------
# file format


def load_polyline_csv(path) -> Polyline:
    """CSV curve file: one vertex per row, '#' comment lines ignored."""
    rows = []
    width = None
    for lineno, line in enumerate(open(path), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = [float(tok) for tok in line.split(",")]
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise ValueError(f"{path}:{lineno}: expected {width} columns, got {len(fields)}")
        rows.append(fields)
    if not rows:
        raise ValueError(f"{path}: no vertices found")
    return Polyline(rows)
