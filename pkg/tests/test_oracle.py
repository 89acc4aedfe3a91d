"""Tests for the Monte-Carlo and quadrature oracles."""

import math

import numpy as np
import pytest

from pathlike import oracle
from pathlike.errors import DomainError, QuadratureNotConvergedError
from pathlike.geometry import ChartPoint, preset
from pathlike.length_integral import (
    LengthIntegralInput,
    config_length_integral,
    lemma_Im,
    theorem_length_integral,
)
from pathlike.oracle import (
    McConfig,
    mc_config_integral,
    mc_monomial_integral,
    mc_total_integral,
    permutation_volume_check,
    product_volume,
    quad_config_integral,
    quad_lemma_recursive,
    sample_simplex,
    simplex_durations,
    stream,
)
from pathlike.path_space import Configuration, MultiIndex


def test_mc_config_validation():
    """Test sample counts and seed range."""
    with pytest.raises(DomainError, match="must be >= 1"):
        McConfig(samples=0)
    with pytest.raises(DomainError, match="must be >= 1"):
        McConfig(workers=0)
    with pytest.raises(DomainError, match="64-bit"):
        McConfig(seed=-1)
    with pytest.raises(DomainError, match="64-bit"):
        McConfig(seed=2**64)


def test_chunk_sizes():
    """Test the split of samples into RNG streams."""
    assert McConfig(samples=12, chunk=5).chunk_sizes() == [5, 5, 2]
    assert McConfig(samples=10, chunk=5).chunk_sizes() == [5, 5]


def test_streams_are_keyed():
    """Test that equal keys repeat and distinct keys differ."""
    first = stream(42, 3, 1, 0).random(4)
    again = stream(42, 3, 1, 0).random(4)
    other = stream(42, 3, 1, 1).random(4)
    np.testing.assert_array_equal(first, again)
    assert not np.array_equal(first, other)


def test_sample_simplex_shapes():
    """Test sorted samples inside [0, t]."""
    rng = stream(1, 0)
    points = sample_simplex(4, 2.0, rng, size=100)
    assert points.shape == (100, 4)
    assert np.all(np.diff(points, axis=-1) >= 0)
    assert np.all((points >= 0) & (points <= 2.0))
    assert sample_simplex(3, 1.0, rng).shape == (3,)


def test_zero_dimensional_simplex():
    """Test that n = 0 gives the single duration t."""
    points = sample_simplex(0, 1.5, stream(1, 0), size=5)
    assert points.shape == (5, 0)
    np.testing.assert_array_equal(simplex_durations(points, 1.5), np.full((5, 1), 1.5))


def test_sample_simplex_errors():
    """Test negative dimension and time."""
    with pytest.raises(DomainError):
        sample_simplex(-1, 1.0, stream(1, 0))
    with pytest.raises(DomainError):
        sample_simplex(2, -1.0, stream(1, 0))


def test_durations_sum_to_t():
    """Test the gaps of a simplex sample."""
    points = sample_simplex(5, 3.0, stream(7, 0), size=50)
    durations = simplex_durations(points, 3.0)
    assert durations.shape == (50, 6)
    np.testing.assert_allclose(durations.sum(axis=-1), 3.0, rtol=1e-13)
    assert np.all(durations >= 0)


def test_simplex_sample_mean():
    """Test that each duration averages t / (n + 1)."""
    durations = simplex_durations(sample_simplex(3, 2.0, stream(9, 0), size=40000), 2.0)
    np.testing.assert_allclose(durations.mean(axis=0), 0.5, atol=0.01)


def sphere_input(a=1.0, s=1.0):
    return LengthIntegralInput.from_budget(preset("sphere"), ChartPoint(0.5, 0.0), a, a + s)


def test_polar_two_segment_stratum_is_exact():
    """Test that every (2,1) path from r = 1 has length 2."""
    data = LengthIntegralInput.from_budget(preset("polar"), ChartPoint(1.0, 0.0), 1.0, 2.0)
    result = mc_config_integral(data.profile, Configuration((2, 1)), data, McConfig(samples=500))
    assert result.value == pytest.approx(2.0)
    assert result.std_error == pytest.approx(0.0, abs=1e-12)
    assert result.method == "monte_carlo"


def test_euclidean_stratum_has_no_variance():
    """Test that plane lengths are constant, so the estimate is t times the volume."""
    data = LengthIntegralInput.from_budget(preset("euclidean"), ChartPoint(0.0, 0.0), 1.0, 3.0)
    config = Configuration((1, 2, 1, 2))
    result = mc_config_integral(data.profile, config, data, McConfig(samples=1000))
    exact = config_length_integral(data, config)
    assert result.value == pytest.approx(exact)
    assert result.std_error < 1e-12
    # rounding alone must stay inside the reported error
    assert 0 < result.abs_error_estimate
    assert abs(result.value - exact) <= result.abs_error_estimate


def test_zero_variance_total_is_covered_by_its_estimate():
    """Test the summed plane strata against the closed form with no sampling noise."""
    data = LengthIntegralInput.from_budget(preset("euclidean"), ChartPoint(0.0, 0.0), 0.5, 1.0)
    result = mc_total_integral(data.profile, data, 4, McConfig(samples=1000))
    assert abs(result.value - theorem_length_integral(data).value) <= result.abs_error_estimate


@pytest.mark.parametrize("word", [(1, 2, 1), (2, 1, 2), (1, 2, 1, 2)])
def test_mc_stratum_matches_closed_form(word):
    """Test the sampled stratum integral against the closed form."""
    data = sphere_input(0.8, 1.2)
    config = Configuration(word)
    result = mc_config_integral(data.profile, config, data, McConfig(samples=20000))
    assert abs(result.value - config_length_integral(data, config)) <= 5 * result.std_error + 1e-12


def test_empty_stratum():
    """Test that a zero-volume stratum returns zero without sampling."""
    data = LengthIntegralInput.from_budget(preset("euclidean"), ChartPoint(0.0, 0.0), 1.0, 1.0)
    result = mc_config_integral(data.profile, Configuration((1, 2, 1, 2)), data, McConfig())
    assert result.value == 0.0
    assert result.abs_error_estimate == 0.0


def test_mc_is_independent_of_worker_count():
    """Test bit-identical estimates for one and three workers."""
    data = sphere_input()
    config = Configuration((1, 2, 1))
    serial = mc_config_integral(data.profile, config, data, McConfig(samples=9000, chunk=1000))
    threaded = mc_config_integral(
        data.profile, config, data, McConfig(samples=9000, chunk=1000, workers=3)
    )
    assert serial.value == threaded.value
    assert serial.std_error == threaded.std_error


def test_mc_total_matches_theorem():
    """Test the summed strata against the closed form."""
    data = sphere_input(0.5, 0.5)
    result = mc_total_integral(data.profile, data, 4, McConfig(samples=4000))
    exact = theorem_length_integral(data).value
    assert result.configs_used == 16
    assert abs(result.value - exact) <= 5 * result.std_error + result.tail_bound
    assert result.abs_error_estimate == pytest.approx(3 * result.std_error + result.tail_bound)


def test_mc_total_needs_positive_half_length():
    """Test the truncation argument."""
    with pytest.raises(DomainError):
        mc_total_integral(preset("sphere"), sphere_input(), 0, McConfig())


def test_mc_monomial_integral():
    """Test int l (1 - l) dl = 1/6 on the unit interval."""
    result = mc_monomial_integral(MultiIndex((1, 1)), 1.0, McConfig(samples=20000))
    assert abs(result.value - 1.0 / 6.0) <= 5 * result.std_error


def test_mc_monomial_constant():
    """Test that the zero multi-index returns the simplex volume."""
    result = mc_monomial_integral(MultiIndex((0, 0, 0)), 2.0, McConfig(samples=100))
    assert result.value == pytest.approx(2.0)
    assert result.std_error == 0.0


def test_product_volume():
    """Test vol(Delta_m^s) vol(Delta_{n-1-m}^{t-s})."""
    assert product_volume(2, 0, 1.0, 2.0) == pytest.approx(1.0)
    assert product_volume(3, 1, 1.0, 3.0) == pytest.approx(2.0)


@pytest.mark.parametrize("sigma", [(0, 1, 2), (2, 0, 1), (1, 2, 0)])
def test_permutation_volume_check(sigma):
    """Test that the slice and its permuted image share the product volume."""
    plain, permuted = permutation_volume_check(2, 0, 1.0, 2.0, sigma, McConfig(samples=20000))
    expected = product_volume(2, 0, 1.0, 2.0)
    assert abs(plain.value - expected) <= 5 * plain.std_error
    assert abs(permuted.value - expected) <= 5 * permuted.std_error


def test_identity_permutation_reuses_samples():
    """Test that the identity gives the same estimate twice."""
    plain, permuted = permutation_volume_check(3, 1, 1.0, 2.0, (0, 1, 2, 3), McConfig(samples=2000))
    assert plain.value == permuted.value


def test_permutation_check_errors():
    """Test argument validation."""
    with pytest.raises(DomainError, match="0 <= m < n"):
        permutation_volume_check(2, 2, 1.0, 2.0, (0, 1, 2), McConfig())
    with pytest.raises(DomainError, match="permute"):
        permutation_volume_check(2, 0, 1.0, 2.0, (0, 1, 1), McConfig())


def test_quadrature_lemma_line_term():
    """Test m = 1, lambda = 0, r = 1: (b^2 / 2)(f(K + a) - f(K))."""
    a, b, K = 0.8, 1.3, 0.2
    value = quad_lemma_recursive(1, a, b, 0.0, 0, 0, 1.0, K, np.exp)
    assert value == pytest.approx(b**2 / 2 * (math.exp(K + a) - math.exp(K)), rel=1e-12)


def test_quadrature_lemma_polynomial_term():
    """Test m = 2 with f' = 0: a^3 b^2 / 12."""
    a, b = 0.8, 1.3
    value = quad_lemma_recursive(2, a, b, 1.0, 1, 0, 2.0, 0.0, lambda x: 0.0 * x)
    assert value == pytest.approx(a**3 * b**2 / 12, rel=1e-12)


@pytest.mark.parametrize("m, r", [(1, 0.5), (2, 0.5), (3, 0), (3, 1), (3, 2)])
def test_quadrature_matches_closed_lemma(m, r):
    """Test the nested rules against the closed form with f = sin."""
    args = (m, 0.9, 1.1, 0.7, 1, 2, r, 0.3)
    assert quad_lemma_recursive(*args, np.cos, tol=1e-10) == pytest.approx(
        lemma_Im(*args, np.sin), rel=1e-8
    )


def test_quadrature_raises_the_order():
    """Test that a fractional shift converges once more nodes are added."""
    args = (2, 0.9, 1.1, 0.7, 1, 2, 0.5, 0.3)
    assert quad_lemma_recursive(*args, np.cos) == pytest.approx(
        lemma_Im(*args, np.sin), rel=1e-7
    )


def test_quadrature_depth_four():
    """Test m = 4 with f = identity: a^4 / 3! * b^4 / 4!."""
    a, b = 0.6, 0.7
    value = quad_lemma_recursive(4, a, b, 0.0, 0, 0, 0.0, 0.0, np.ones_like, order=3)
    assert value == pytest.approx(a**4 / 6 * b**4 / 24, rel=1e-12)


def test_quadrature_depth_zero_is_the_base_polynomial():
    """Test I_0 = lam a^k1/k1! b^k2/k2!."""
    assert quad_lemma_recursive(0, 2.0, 3.0, 1.5, 1, 2, 0.0, 0.0, np.cos) == pytest.approx(
        1.5 * 2.0 * 4.5
    )


def test_quadrature_domain():
    """Test depth, side and grid-size checks."""
    with pytest.raises(DomainError, match="0..4"):
        quad_lemma_recursive(5, 1.0, 1.0, 1.0, 0, 0, 0.0, 0.0, np.cos)
    with pytest.raises(DomainError, match="a > 0"):
        quad_lemma_recursive(1, -1.0, 1.0, 1.0, 0, 0, 0.0, 0.0, np.cos)
    with pytest.raises(DomainError, match="points"):
        quad_lemma_recursive(4, 1.0, 1.0, 1.0, 0, 0, 0.0, 0.0, np.cos, order=12)


def test_quadrature_reports_non_convergence():
    """Test that a rough integrand on a capped grid is refused with its estimate."""
    with pytest.raises(QuadratureNotConvergedError) as e:
        quad_lemma_recursive(
            1, 10.0, 1.0, 0.0, 0, 0, 0.0, 0.0, lambda x: np.cos(20 * x), order=2, max_points=100
        )
    assert e.value.error_estimate > 0
    assert math.isfinite(e.value.best_estimate)


@pytest.mark.parametrize(
    "word", [(1, 2), (2, 1), (1, 2, 1), (2, 1, 2), (1, 2, 1, 2), (2, 1, 2, 1, 2), (1, 2, 1, 2, 1, 2, 1)]
)
def test_stratum_quadrature_matches_closed_form(word):
    """Test nested rules on the product of simplices against the stratum formula."""
    data = sphere_input(0.8, 1.2)
    config = Configuration(word)
    result = quad_config_integral(data.profile, config, data)
    assert result.value == pytest.approx(config_length_integral(data, config), rel=1e-6)
    assert result.method == "quadrature"
    assert result.configs_used == 1


def test_stratum_quadrature_longest_plane_stratum():
    """Test |c| = 9 on the plane, where the length is the constant t."""
    data = LengthIntegralInput.from_budget(preset("euclidean"), ChartPoint(0.0, 0.0), 1.0, 2.5)
    config = Configuration((2, 1, 2, 1, 2, 1, 2, 1, 2))
    result = quad_config_integral(data.profile, config, data)
    assert result.value == pytest.approx(config_length_integral(data, config), rel=1e-10)


def test_stratum_quadrature_hyperbolic():
    """Test a stratum whose slope 1/y needs more nodes."""
    data = LengthIntegralInput.from_budget(preset("hyperbolic"), ChartPoint(0.0, 1.0), 2.0, 3.0)
    config = Configuration((1, 2, 1, 2, 1))
    result = quad_config_integral(data.profile, config, data)
    assert result.value == pytest.approx(config_length_integral(data, config), rel=1e-6)


def test_stratum_quadrature_empty_and_too_long():
    """Test zero-volume strata and the m <= 4 limit."""
    data = LengthIntegralInput.from_budget(preset("euclidean"), ChartPoint(0.0, 0.0), 1.0, 1.0)
    assert quad_config_integral(data.profile, Configuration((1, 2, 1, 2)), data).value == 0.0
    with pytest.raises(DomainError, match="m <= 4"):
        quad_config_integral(data.profile, Configuration((1, 2) * 5), data)


def test_oracles_draw_from_disjoint_streams(monkeypatch):
    """Test that equal shapes in different oracles never share a random stream."""
    keys = {}
    current = []

    def recording(seed, *key):
        keys.setdefault(current[-1], set()).add(key)
        return stream(seed, *key)

    monkeypatch.setattr(oracle, "stream", recording)
    mc = McConfig(samples=200, chunk=100)
    data = LengthIntegralInput.from_budget(preset("euclidean"), ChartPoint(0.0, 0.0), 1.0, 2.0)

    current.append("permutation")
    permutation_volume_check(2, 1, 1.0, 2.0, (0, 1, 2), mc)
    current.append("stratum")
    mc_config_integral(data.profile, Configuration((1, 2)), data, mc)
    current.append("monomial")
    mc_monomial_integral(MultiIndex((1, 0, 1)), 1.0, mc)

    assert keys["permutation"].isdisjoint(keys["stratum"])
    assert keys["permutation"].isdisjoint(keys["monomial"])
    assert keys["stratum"].isdisjoint(keys["monomial"])
