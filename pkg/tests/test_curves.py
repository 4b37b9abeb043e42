import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import frechetlab as fl
from frechetlab.curves import simplify_vertices

from conftest import (
    brute_discrete_frechet,
    brute_dtw,
    sampled_cell_free,
    small_polylines,
    subdivide,
)

SEG_A = [[0, 0], [1, 0]]
SEG_OFF = [[0, 1], [1, 1]]


# ---------------------------------------------------------------------------
# polyline type


def test_polyline_collapses_consecutive_duplicates():
    p = fl.Polyline([[0, 0], [0, 0], [1, 1], [1, 1], [1, 1], [2, 2]])
    assert p.vertices.tolist() == [[0, 0], [1, 1], [2, 2]]
    single = fl.Polyline([[3, 4], [3, 4]])
    assert len(single) == 1


def test_polyline_validation():
    with pytest.raises(ValueError):
        fl.Polyline([[0, np.nan]])
    with pytest.raises(ValueError):
        fl.Polyline(np.empty((0, 2)))
    one_d = fl.Polyline([0.0, 1.0, 2.0])
    assert one_d.dim == 1


def test_simplify_removes_exactly_collinear_interior_vertices():
    v = np.array([[0.0], [0.25], [0.5], [1.0]])
    assert simplify_vertices(v).tolist() == [[0.0], [1.0]]
    bent = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]])
    assert simplify_vertices(bent).tolist() == bent.tolist()
    reversal = np.array([[0.0], [1.0], [0.5]])  # back-tracking must survive
    assert simplify_vertices(reversal).tolist() == reversal.tolist()


# ---------------------------------------------------------------------------
# free-space cells


def test_cell_coincident_segments_at_zero_epsilon():
    left, right, bottom, top = fl.free_space_cell(SEG_A, SEG_A, 0.0)
    assert left[1] <= 1e-9 and bottom[1] <= 1e-9
    assert right[0] >= 1 - 1e-9 and top[0] >= 1 - 1e-9
    s, free = sampled_cell_free(SEG_A, SEG_A, 0.0)
    assert np.array_equal(np.nonzero(free)[0], np.nonzero(free)[1])  # diagonal only


def test_cell_offset_segments_below_threshold_is_empty():
    cell = fl.free_space_cell(SEG_A, SEG_OFF, 0.5)
    assert cell == (None, None, None, None)
    _, free = sampled_cell_free(SEG_A, SEG_OFF, 0.5)
    assert not free.any()


def test_cell_offset_segments_at_threshold_degenerates():
    left, right, bottom, top = fl.free_space_cell(SEG_A, SEG_OFF, 1.0)
    for iv, where in ((left, 0.0), (bottom, 0.0), (right, 1.0), (top, 1.0)):
        lo, hi = iv
        assert lo == pytest.approx(where, abs=1e-9)
        assert hi == pytest.approx(where, abs=1e-9)
    s, free = sampled_cell_free(SEG_A, SEG_OFF, 1.0)
    rows, cols = np.nonzero(free)
    assert np.array_equal(rows, cols)  # the free set is the diagonal


def test_cell_dimension_mismatch():
    with pytest.raises(fl.DimensionMismatchError):
        fl.free_space_cell(SEG_A, [[0, 0, 0], [1, 1, 1]], 1.0)


@settings(max_examples=40, deadline=None)
@given(small_polylines(max_vertices=2), small_polylines(max_vertices=2),
       st.floats(0.1, 3.0), st.floats(0.1, 3.0))
def test_cell_intervals_grow_with_epsilon(p, q, e1, e2):
    lo_eps, hi_eps = sorted((e1, e2))
    if len(p) < 2 or len(q) < 2:
        return
    small = fl.free_space_cell(p.vertices, q.vertices, lo_eps)
    big = fl.free_space_cell(p.vertices, q.vertices, hi_eps)
    for iv_small, iv_big in zip(small, big):
        if iv_small is not None:
            assert iv_big is not None
            assert iv_big[0] <= iv_small[0] + 1e-12
            assert iv_big[1] >= iv_small[1] - 1e-12


# ---------------------------------------------------------------------------
# decision


def test_decision_identity_and_segment_pair():
    p = fl.Polyline([[0, 0], [1, 1], [2, 0]])
    assert fl.frechet_decision(p, p, 0.0)
    assert not fl.frechet_decision(SEG_A, SEG_OFF, 0.5)
    assert fl.frechet_decision(SEG_A, SEG_OFF, 1.0)


def test_decision_single_point_curves():
    point = fl.Polyline([[0, 0]])
    arc = fl.Polyline([[1, 0], [0, 1], [-1, 0]])
    assert not fl.frechet_decision(point, arc, 0.99)
    assert fl.frechet_decision(point, arc, 1.0)
    assert fl.frechet_decision(point, point, 0.0)


@settings(max_examples=30, deadline=None)
@given(small_polylines(), small_polylines(), st.floats(0.05, 4.0), st.floats(0.0, 3.0))
def test_decision_monotone_in_epsilon(p, q, eps, bump):
    if fl.frechet_decision(p, q, eps):
        assert fl.frechet_decision(p, q, eps + bump)


# ---------------------------------------------------------------------------
# distance computation


def test_distance_identity_and_worked_segments():
    p = fl.Polyline([[0, 0], [1, 1], [2, 0]])
    assert fl.frechet_distance(p, p).value <= 1e-9
    r = fl.frechet_distance([[0, 0], [1, 0]], [[0, 1], [1, 2]], 1e-9)
    assert r.value == pytest.approx(2.0, abs=1e-6)
    assert r.bracket[0] <= r.value <= r.bracket[1]


@settings(max_examples=30, deadline=None)
@given(small_polylines(), st.lists(st.integers(-5, 5), min_size=2, max_size=2))
def test_distance_translation(p, shift):
    v = np.array(shift, dtype=float)
    moved = fl.Polyline(p.vertices + v)
    r = fl.frechet_distance(p, moved, 1e-9)
    assert r.value == pytest.approx(float(np.linalg.norm(v)), abs=1e-7)


@settings(max_examples=25, deadline=None)
@given(small_polylines(), small_polylines())
def test_distance_symmetry(p, q):
    tol = 1e-6
    d1 = fl.frechet_distance(p, q, tol).value
    d2 = fl.frechet_distance(q, p, tol).value
    assert abs(d1 - d2) <= 2 * tol * max(1.0, d1, d2)


@settings(max_examples=15, deadline=None)
@given(small_polylines(), small_polylines(), small_polylines())
def test_distance_triangle_inequality(p, q, r):
    tol = 1e-6
    dpr = fl.frechet_distance(p, r, tol).value
    dpq = fl.frechet_distance(p, q, tol).value
    dqr = fl.frechet_distance(q, r, tol).value
    assert dpr <= dpq + dqr + 3 * tol * max(1.0, dpr, dpq, dqr)


@settings(max_examples=25, deadline=None)
@given(small_polylines(), st.integers(0, 3), st.floats(0.1, 0.9))
def test_distance_reparameterization_invariance(p, edge, frac):
    q = fl.Polyline([[6, -3], [-4, 2], [5, 5]])
    tol = 1e-9
    base = fl.frechet_distance(p, q, tol).value
    v = p.vertices
    e = min(edge, len(v) - 2)
    inserted = np.insert(v, e + 1, v[e] + frac * (v[e + 1] - v[e]), axis=0)
    again = fl.frechet_distance(fl.Polyline(inserted), q, tol).value
    assert abs(again - base) <= tol * max(1.0, base)


@settings(max_examples=20, deadline=None)
@given(small_polylines(max_vertices=5), small_polylines(max_vertices=5))
def test_distance_bounds_and_bracket(p, q):
    r = fl.frechet_distance(p, q, 1e-9)
    endpoint = max(
        float(np.linalg.norm(p.vertices[0] - q.vertices[0])),
        float(np.linalg.norm(p.vertices[-1] - q.vertices[-1])),
    )
    assert r.value >= endpoint - 1e-12
    assert r.value <= fl.discrete_frechet(p, q) + 1e-12
    assert r.bracket[1] - r.bracket[0] <= 1e-9 * max(1.0, r.bracket[1]) + 1e-15


# ---------------------------------------------------------------------------
# discrete Frechet and DTW


def test_discrete_frechet_examples():
    assert fl.discrete_frechet([[1, 2]], [[4, 6]]) == 5.0
    assert fl.discrete_frechet([[0, 0], [1, 0], [2, 0]], [[0, 1], [1, 1], [2, 1]]) == 1.0
    pair = ([[0, 0], [2, 0]], [[0, 0], [1, 1], [2, 0]])
    assert fl.discrete_frechet(*pair) == pytest.approx(math.sqrt(2))
    assert brute_discrete_frechet(*pair) == pytest.approx(math.sqrt(2))
    assert fl.frechet_distance(*pair, 1e-9).value == pytest.approx(1.0, abs=1e-6)


@settings(max_examples=30, deadline=None)
@given(small_polylines(max_vertices=5), small_polylines(max_vertices=5))
def test_discrete_frechet_matches_bruteforce(p, q):
    assert fl.discrete_frechet(p, q) == pytest.approx(
        brute_discrete_frechet(p.vertices, q.vertices), abs=1e-12
    )


def test_dtw_examples():
    assert fl.dtw([[0], [1]], [[0], [1], [1]]) == 0.0
    assert fl.dtw([[0], [2]], [[1]]) == 2.0
    p = fl.Polyline([[0, 0], [1, 1]])
    assert fl.dtw(p, p) == 0.0


@settings(max_examples=30, deadline=None)
@given(small_polylines(max_vertices=5), small_polylines(max_vertices=5))
def test_dtw_matches_reference_dp(p, q):
    assert fl.dtw(p, q) == pytest.approx(brute_dtw(p.vertices, q.vertices), abs=1e-12)


# ---------------------------------------------------------------------------
# sampled set distances and ordering chains


def test_hausdorff_examples():
    p = fl.Polyline([[0, 0], [1, 1]])
    assert fl.hausdorff(p, p, 0.01) == 0.0
    assert fl.hausdorff(SEG_A, SEG_OFF, 0.01) == pytest.approx(1.0, abs=0.01)


def test_figure_eight_orders_share_their_point_set():
    Qp, R, S, T, P = [0, 0], [1, 1], [1, -1], [-1, -1], [-1, 1]
    eight_a = fl.Polyline([Qp, R, S, Qp, T, P, Qp])
    eight_b = fl.Polyline([Qp, S, R, Qp, T, P, Qp])
    assert fl.hausdorff(eight_a, eight_b, 0.01) <= 0.01
    r = fl.frechet_distance(eight_a, eight_b, 1e-6)
    assert r.value > 0.1


def test_shortest_distance_examples():
    crossing = fl.Polyline([[-1, -1], [1, 1]])
    other = fl.Polyline([[-1, 1], [1, -1]])
    assert fl.shortest_distance(crossing, other, 0.01) <= 0.02
    assert fl.shortest_distance(SEG_A, SEG_OFF, 0.01) == pytest.approx(1.0, abs=0.01)
    assert fl.directed_maxmin(SEG_A, SEG_OFF, 0.01) == pytest.approx(1.0, abs=0.01)


@settings(max_examples=25, deadline=None)
@given(small_polylines(), small_polylines())
def test_ordering_chain(p, q):
    res = 0.05
    lam = fl.shortest_distance(p, q, res)
    mu = fl.directed_maxmin(p, q, res)
    fr = fl.frechet_distance(p, q, 1e-6).value
    assert lam <= mu + 1e-12
    assert mu <= fr + 1e-9
    assert fl.hausdorff(p, q, res) <= fr + res


@settings(max_examples=10, deadline=None)
@given(small_polylines(max_vertices=4), small_polylines(max_vertices=4))
def test_densification_convergence(p, q):
    tol = 1e-9
    base = fl.frechet_distance(p, q, tol).value
    discrete_values = []
    for k in (1, 2, 4):
        pk = fl.Polyline(subdivide(p.vertices, k))
        qk = fl.Polyline(subdivide(q.vertices, k))
        assert fl.frechet_distance(pk, qk, tol).value == pytest.approx(base, abs=1e-6)
        discrete_values.append(fl.discrete_frechet(pk, qk))
    assert discrete_values[0] >= discrete_values[1] - 1e-12
    assert discrete_values[1] >= discrete_values[2] - 1e-12
    assert discrete_values[-1] >= base - 1e-9


# ---------------------------------------------------------------------------
# closed curves


def _ngon(n, radius=1.0, center=(0.0, 0.0), start=0.0):
    th = np.linspace(start, start + 2 * np.pi, n + 1)
    return np.column_stack([center[0] + radius * np.cos(th), center[1] + radius * np.sin(th)])


def test_closed_frechet_reroot_invariance():
    sq = np.array([[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]], dtype=float)
    rerooted = np.array([[1, 1], [0, 1], [0, 0], [1, 0], [1, 1]], dtype=float)
    assert fl.closed_frechet(sq, rerooted, 1e-6).value <= 1e-6


def test_closed_frechet_translation():
    sq = np.array([[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]], dtype=float)
    moved = sq + np.array([3.0, 4.0])
    assert fl.closed_frechet(sq, moved, 1e-6, shifts_per_edge=2).value == pytest.approx(
        5.0, abs=1e-5
    )


def test_closed_frechet_circle_pair():
    c1 = _ngon(128, radius=1.0)
    c2 = _ngon(128, radius=2.0, center=(0.5, 0.0))
    value = fl.closed_frechet(c1, c2, 1e-4).value
    assert 1.45 <= value <= 1.55


def test_closed_frechet_rejects_open_curves():
    with pytest.raises(fl.OpenCurveError):
        fl.closed_frechet([[0, 0], [1, 0]], [[0, 0], [1, 0]])


# ---------------------------------------------------------------------------
# diagram object and SVG export


def test_free_space_diagram_invariants():
    p = fl.Polyline([[0, 0], [1, 1], [2, 0]])
    q = fl.Polyline([[0, 1], [2, 1]])
    d = fl.free_space_diagram(p, q, 0.9)
    for arr in (d.left, d.right, d.bottom, d.top):
        nonempty = arr[..., 0] <= arr[..., 1]
        assert np.all(arr[..., 0][nonempty] >= 0.0)
        assert np.all(arr[..., 1][nonempty] <= 1.0)
    # reachable intervals sit inside the free intervals
    for reach, free in ((d.reach_left, d.left), (d.reach_bottom, d.bottom)):
        mask = reach[..., 0] <= reach[..., 1]
        assert np.all(reach[..., 0][mask] >= free[..., 0][mask] - 1e-12)
        assert np.all(reach[..., 1][mask] <= free[..., 1][mask] + 1e-12)
    assert d.corner_reachable == fl.frechet_decision(p, q, 0.9)


@settings(max_examples=20, deadline=None)
@given(small_polylines(max_vertices=4), small_polylines(max_vertices=4),
       st.floats(0.1, 2.0), st.floats(0.0, 2.0))
def test_free_space_diagram_grows_with_epsilon(p, q, eps, bump):
    d_small = fl.free_space_diagram(p, q, eps)
    d_big = fl.free_space_diagram(p, q, eps + bump)
    for side in ("left", "right", "bottom", "top"):
        small_arr = getattr(d_small, side)
        big_arr = getattr(d_big, side)
        nonempty = small_arr[..., 0] <= small_arr[..., 1]
        assert np.all(big_arr[..., 0][nonempty] <= small_arr[..., 0][nonempty] + 1e-12)
        assert np.all(big_arr[..., 1][nonempty] >= small_arr[..., 1][nonempty] - 1e-12)


def test_svg_single_cell_identity():
    svg = fl.free_space_svg(SEG_A, SEG_A, 0.0)
    assert svg.count('class="free-fill"') == 1
    assert "corner-reachable" in svg
    assert fl.free_space_svg(SEG_A, SEG_A, 0.0) == svg  # deterministic


def test_svg_sinusoid_pair_has_blocked_corner():
    t = np.linspace(0.0, 1.0, 128)
    c1 = np.column_stack([2 * np.pi * t, np.sin(2 * np.pi * t)])
    c2 = np.column_stack([2 * np.pi * t, np.sin(4 * np.pi * t)])
    svg = fl.free_space_svg(c1, c2, 0.9)
    assert "corner-blocked" in svg
    assert "corner-reachable" not in svg


def test_svg_threshold_pair_degenerates_to_diagonal():
    svg = fl.free_space_svg(SEG_A, SEG_OFF, 1.0)
    assert "corner-reachable" in svg
    # only the diagonal s = t is free: exactly k of the k*k samples hit it
    assert 'fill-opacity="0.250"' in svg
    below = fl.free_space_svg(SEG_A, SEG_OFF, 0.99)
    assert 'class="free-fill"' not in below and "corner-blocked" in below


# ---------------------------------------------------------------------------
# file format


def test_load_polyline_csv(tmp_path):
    path = tmp_path / "curve.csv"
    path.write_text("# a comment\n0.0,0.0\n1.0,0.5\n2.0,0.0\n")
    p = fl.load_polyline_csv(path)
    assert p.vertices.tolist() == [[0, 0], [1, 0.5], [2, 0]]
    bad = tmp_path / "bad.csv"
    bad.write_text("0.0,0.0\n1.0\n")
    with pytest.raises(ValueError):
        fl.load_polyline_csv(bad)
    one_col = tmp_path / "one.csv"
    one_col.write_text("0.0\n1.0\n")
    assert fl.load_polyline_csv(one_col).dim == 1
