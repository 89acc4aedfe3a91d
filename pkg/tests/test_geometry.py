"""Tests for metric profiles, curvature and path lengths."""

import math

import numpy as np
import pytest

from pathlike.errors import DomainError, InvalidProfileError
from pathlike.geometry import (
    ChartPoint,
    MetricProfile,
    flow_lengths,
    gauss_curvature,
    geodesic_residual,
    path_length,
    preset,
)

CURVATURES = [
    ("euclidean", 0.0),
    ("polar", 0.0),
    ("sphere", 1.0),
    ("hyperbolic", -1.0),
]


@pytest.mark.parametrize("name, expected", CURVATURES)
def test_preset_curvature(name, expected):
    """Test constant curvature at 20 sample points."""
    profile = preset(name)
    for x in profile.sample_points(20):
        assert gauss_curvature(profile, x) == pytest.approx(expected, abs=1e-9)


def test_linear_preset_is_flat():
    """Test the linear-vector-field preset."""
    profile = preset("linear", (1.0, 2.0, 3.0, 1.0))
    assert profile.quadratic_f
    assert gauss_curvature(profile, 0.3) == 0.0
    assert float(profile.dh(0.0)) == pytest.approx(math.sqrt(5.0))
    assert float(profile.df(0.0)) == pytest.approx(math.sqrt(10.0))


def test_sphere_curvature_value():
    """Test the curvature printed for the unit sphere at x = 1."""
    assert gauss_curvature(preset("sphere"), 1.0) == pytest.approx(1.0, abs=1e-12)


def test_preset_errors():
    """Test unknown names and dependent linear vectors."""
    with pytest.raises(InvalidProfileError, match="unknown surface"):
        preset("torus")
    with pytest.raises(InvalidProfileError, match="independent"):
        preset("linear", (1.0, 2.0, 2.0, 4.0))
    with pytest.raises(InvalidProfileError, match="four numbers"):
        preset("linear")


def test_custom_profile_with_finite_difference_fallbacks():
    """Test a user profile without second and third derivatives."""
    profile = MetricProfile.custom(
        "cubic",
        h=lambda x: np.asarray(x, dtype=float) + 0.0,
        dh=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        f=lambda x: np.asarray(x, dtype=float) ** 3 / 3.0 + np.asarray(x, dtype=float),
        df=lambda x: np.asarray(x, dtype=float) ** 2 + 1.0,
        domain_x=(-2.0, 2.0),
    )
    # f'' = 2x, f''' = 2: K = -2 / (x^2 + 1)
    assert gauss_curvature(profile, 0.5) == pytest.approx(-2.0 / 1.25, rel=1e-5)


def test_custom_profile_rejects_wrong_derivative():
    """Test the construction-time finite-difference check."""
    with pytest.raises(InvalidProfileError, match="disagrees"):
        MetricProfile.custom(
            "bad",
            h=lambda x: np.asarray(x, dtype=float) + 0.0,
            dh=lambda x: 2.0 + 0.0 * np.asarray(x, dtype=float),
            f=lambda x: np.asarray(x, dtype=float) + 0.0,
            df=lambda x: 1.0 + 0.0 * np.asarray(x, dtype=float),
            domain_x=(-1.0, 1.0),
        )


def test_custom_profile_rejects_decreasing_h():
    """Test that h' must be positive."""
    with pytest.raises(InvalidProfileError, match="strictly increasing"):
        MetricProfile.custom(
            "decreasing",
            h=lambda x: -np.asarray(x, dtype=float),
            dh=lambda x: -1.0 + 0.0 * np.asarray(x, dtype=float),
            f=lambda x: np.asarray(x, dtype=float) + 0.0,
            df=lambda x: 1.0 + 0.0 * np.asarray(x, dtype=float),
            domain_x=(-1.0, 1.0),
        )


def test_flow_lengths_polar():
    """Test h(x1) - h(x0) and f'(x0)(y1 - y0) in polar coordinates."""
    assert flow_lengths(preset("polar"), 1.0, 2.0, 0.0, 0.5) == pytest.approx((1.0, 0.5))


def test_flow_lengths_checks():
    """Test direction and domain checks."""
    polar = preset("polar")
    with pytest.raises(DomainError, match="outside"):
        flow_lengths(polar, -1.0, 1.0, 0.0, 1.0)
    with pytest.raises(DomainError, match="x1 >= x0"):
        flow_lengths(polar, 2.0, 1.0, 0.0, 1.0)


@pytest.mark.parametrize("name", ["euclidean", "polar", "sphere", "hyperbolic"])
def test_geodesic_flow_lines(name):
    """Test that y = const with h(x(s)) linear in s solves the geodesic system."""
    profile = preset(name)
    for x in profile.sample_points(10):
        dh = float(profile.dh(x))
        dx = 1.5 / dh
        ddx = -float(profile.d2h(x)) * dx * dx / dh
        first, second = geodesic_residual(profile, x, dx, ddx, 0.0, 0.0)
        assert abs(first) <= 1e-10 * max(1.0, abs(ddx))
        assert second == 0.0


def test_non_geodesic_jet():
    """Test that a circle of latitude on the sphere is not a geodesic."""
    first, _ = geodesic_residual(preset("sphere"), 1.0, 0.0, 0.0, 1.0, 0.0)
    assert first == pytest.approx(-math.cos(1.0) * math.sin(1.0))


def test_euclidean_length_is_total_time():
    """Test that every path-like curve on the plane has length t."""
    profile = preset("euclidean")
    durations = [0.2, 0.5, 0.1, 0.7]
    assert path_length(profile, (1, 2, 1, 2), durations, ChartPoint(0.0, 0.0)) == pytest.approx(1.5)


def test_polar_example_length():
    """Test the (2,1) path from r = 1 with unit budgets."""
    length = path_length(preset("polar"), (2, 1), (1.0, 1.0), ChartPoint(1.0, 0.0))
    assert length == pytest.approx(2.0)


def test_path_length_is_vectorised():
    """Test a batch of duration vectors."""
    profile = preset("sphere")
    durations = np.array([[0.1, 0.2, 0.3], [0.3, 0.2, 0.1], [0.0, 0.5, 0.0]])
    lengths = path_length(profile, (1, 2, 1), durations, ChartPoint(0.5, 0.0))
    assert lengths.shape == (3,)
    for row, length in zip(durations, lengths):
        assert length == pytest.approx(path_length(profile, (1, 2, 1), row, ChartPoint(0.5, 0.0)))


def test_path_length_errors():
    """Test shape, sign and domain checks."""
    sphere = preset("sphere")
    start = ChartPoint(3.0, 0.0)
    with pytest.raises(DomainError, match="one duration per segment"):
        path_length(sphere, (1, 2), (0.1,), start)
    with pytest.raises(DomainError, match=">= 0"):
        path_length(sphere, (1, 2), (0.1, -0.1), start)
    with pytest.raises(DomainError, match="segment 0 leaves"):
        path_length(sphere, (1, 2), (0.5, 0.1), start)


def test_hyperbolic_chart_swaps_axes():
    """Test that half-plane points map to (height, abscissa)."""
    profile = preset("hyperbolic")
    assert profile.to_profile(ChartPoint(0.0, 1.0)) == (1.0, 0.0)
    assert profile.from_profile(1.0, 0.0) == ChartPoint(0.0, 1.0)
    # Rising from height 1 to 2 is the flow of h = ln y
    assert path_length(profile, (1,), (1.0,), ChartPoint(0.0, 1.0)) == pytest.approx(math.log(2.0))
