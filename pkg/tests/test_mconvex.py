import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ostrowski.errors import DomainError
from ostrowski.funlib import builtin, from_expression
from ostrowski.mconvex import (CERTIFIED, VIOLATED, ConvexityGrid, check_m_convex,
                               check_starshaped, in_km, max_m)

SMALL = ConvexityGrid(51, 51)


def square(x):
    return np.asarray(x, dtype=float) ** 2


def neg_square(x):
    return -np.asarray(x, dtype=float) ** 2


def recompute(g, w, m):
    """Independent scalar evaluation of the inequality at a witness."""
    lhs = float(g(np.array([w.t * w.x + (m * (1.0 - w.t)) * w.y]))[0])
    gx, gy = (float(v) for v in g(np.array([w.x, w.y])))
    return lhs, w.t * gx + (m * (1.0 - w.t)) * gy


def test_square_is_convex():
    report = check_m_convex(square, 1.0, 1.0, SMALL)
    assert report.status == CERTIFIED and report.witness is None
    assert report.samples == 51 ** 3


def test_negative_square_is_refuted_with_valid_witness():
    report = check_m_convex(neg_square, 1.0, 1.0, SMALL)
    assert report.status == VIOLATED
    w = report.witness
    assert w.gap > report.tolerance
    assert recompute(neg_square, w, 1.0) == (w.lhs, w.rhs)
    # the largest gap on the grid is the hand-checkable midpoint chord
    worst = report.worst
    assert (worst.x, worst.y, worst.t) == (0.0, 1.0, 0.5)
    assert (worst.lhs, worst.rhs, worst.gap) == (-0.25, -0.5, 0.25)


def test_first_witness_on_minimal_grid_is_the_midpoint_chord():
    report = check_m_convex(neg_square, 1.0, 1.0, ConvexityGrid(2, 3))
    w = report.witness
    assert (w.x, w.y, w.t, w.lhs, w.rhs) == (0.0, 1.0, 0.5, -0.25, -0.5)


def test_endpoint_t_values_never_violate_at_m_one():
    rng = np.random.default_rng(3)
    coeffs = rng.normal(size=6)
    report = check_m_convex(lambda x: np.polyval(coeffs, x), 2.0, 1.0, ConvexityGrid(41, 2))
    assert report.certified


def scan_first_violation(g, b, m, grid, tol):
    xs = np.linspace(0.0, b, grid.points)
    ts = np.linspace(0.0, 1.0, grid.t_points)
    for x in xs:
        for y in xs:
            for t in ts:
                lhs = float(g(np.array([t * x + (m * (1.0 - t)) * y]))[0])
                rhs = t * float(g(np.array([x]))[0]) + (m * (1.0 - t)) * float(g(np.array([y]))[0])
                if lhs - rhs > tol:
                    return (float(x), float(y), float(t))
    return None


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=2, max_size=5), st.sampled_from([0.3, 0.5, 1.0]))
def test_first_witness_follows_canonical_scan_order(coeffs, m):
    g = lambda x: np.polyval(coeffs, x)  # noqa: E731
    grid = ConvexityGrid(7, 5, tolerance=1e-9)
    report = check_m_convex(g, 1.5, m, grid)
    expected = scan_first_violation(g, 1.5, m, grid, 1e-9)
    if expected is None:
        assert report.certified
    else:
        w = report.witness
        assert (w.x, w.y, w.t) == expected
        lhs, rhs = recompute(g, w, m)
        assert lhs - rhs > grid.tolerance


def direct_convexity_certifies(g, b, grid, tol):
    xs = np.linspace(0.0, b, grid.points)
    ts = np.linspace(0.0, 1.0, grid.t_points)
    gx = g(xs)
    lhs = g(ts[None, None, :] * xs[:, None, None] + (1 - ts)[None, None, :] * xs[None, :, None])
    rhs = ts[None, None, :] * gx[:, None, None] + (1 - ts)[None, None, :] * gx[None, :, None]
    return not np.any(lhs - rhs > tol)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=1, max_size=5))
def test_m_one_is_ordinary_convexity(coeffs):
    g = lambda x: np.polyval(coeffs, x)  # noqa: E731
    grid = ConvexityGrid(15, 9, tolerance=1e-9)
    assert check_m_convex(g, 1.0, 1.0, grid).certified == direct_convexity_certifies(g, 1.0, grid, 1e-9)


def planted(x, c=0.6137, w=0.0015, h=0.05):
    # coarse-grid arguments are multiples of 0.01 and all miss the bump
    x = np.asarray(x, dtype=float)
    return x ** 2 + h * np.maximum(0.0, 1.0 - np.abs(x - c) / w)


def test_finer_grids_catch_a_planted_violation():
    coarse = check_m_convex(planted, 1.0, 1.0, ConvexityGrid(11, 11))
    assert coarse.certified
    for points in (101, 201):
        fine = check_m_convex(planted, 1.0, 1.0, ConvexityGrid(points, 11))
        assert fine.status == VIOLATED
        assert abs(fine.worst.t * fine.worst.x + (1 - fine.worst.t) * fine.worst.y - 0.6137) < 0.0015


def test_starshaped_examples():
    grid = ConvexityGrid(101, 101)
    assert check_starshaped(square, 1.0, grid).certified
    report = check_starshaped(lambda x: np.asarray(x) + 1.0, 1.0, grid)
    assert report.status == VIOLATED
    assert (report.witness.x, report.witness.t, report.witness.lhs, report.witness.rhs) == (0.0, 0.0, 1.0, 0.0)
    linear = check_starshaped(lambda x: np.asarray(x, dtype=float), 1.0, grid)
    assert linear.certified and linear.worst.gap <= 1e-15
    assert report.to_dict()["m"] == 0.0


def test_in_km_examples():
    assert in_km(builtin("power", n=2), 1.0, 1.0, SMALL)[0]
    member, report = in_km(from_expression("x^2+1"), 1.0, 1.0, SMALL)
    assert not member and report.certified
    member, report = in_km(from_expression("-x^2"), 1.0, 1.0, SMALL)
    assert not member and report.status == VIOLATED


def test_max_m_examples():
    assert max_m(square, 1.0, SMALL) == 1.0
    assert max_m(lambda x: 2.0 * np.asarray(x), 1.0, SMALL) == 1.0
    assert max_m(neg_square, 1.0, SMALL) == 0.0
    # an affine function is convex, so m = 1 certifies; every m < 1 fails at t = 0
    assert max_m(lambda x: np.asarray(x) + 1.0, 1.0, SMALL) == 1.0
    for m in (0.95, 0.5, 0.05):
        assert not check_m_convex(lambda x: np.asarray(x) + 1.0, 1.0, m, SMALL).certified


def test_convex_through_origin_is_m_convex_for_every_m():
    for m in (0.1, 0.5, 0.9):
        assert check_m_convex(square, 1.0, m, SMALL).certified


def test_validation():
    with pytest.raises(ValueError):
        check_m_convex(square, 1.0, 0.0)
    with pytest.raises(ValueError):
        ConvexityGrid(1, 5)
    with pytest.raises(ValueError):
        ConvexityGrid(tolerance=-1.0)
    with pytest.raises(DomainError):
        check_m_convex(builtin("exp").with_domain(0.0, 0.5), 1.0, 1.0, SMALL)
    with pytest.raises(ValueError):
        max_m(square, 1.0, SMALL, resolution=1.5)


def test_report_serialisation_shape():
    d = check_m_convex(neg_square, 1.0, 1.0, SMALL).to_dict()
    assert set(d) == {"status", "m", "witness", "samples"}
    assert set(d["witness"]) == {"x", "y", "t", "lhs", "rhs", "gap"}
    assert check_m_convex(square, 1.0, 1.0, SMALL).to_dict()["witness"] is None
