"""Invariant suites run by ``pathlike validate``."""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from pathlike.cbinom import (
    cbinom_bc,
    cbinom_bound,
    cbinom_dt,
    cbinom_series,
    half_identity_residual,
    pde_residual,
    v_integral,
    v_integral_forms,
)
from pathlike.errors import PathlikeError
from pathlike.geometry import ChartPoint, gauss_curvature, geodesic_residual, path_length, preset
from pathlike.length_integral import (
    LengthIntegralInput,
    config_length_integral,
    average_length_form,
    corollary_average_form,
    corollary_growth_bound,
    example_formula,
    lemma_Im,
    metric_recovery,
    stratified_length_sum,
    theorem_length_integral,
    theorem_length_integral_remark_form,
)
from pathlike.oracle import (
    MAX_LEMMA_DEPTH,
    mc_config_integral,
    mc_monomial_integral,
    mc_total_integral,
    permutation_volume_check,
    product_volume,
    quad_config_integral,
    quad_lemma_recursive,
    sample_simplex,
    stream,
)
from pathlike.path_space import (
    Configuration,
    MultiIndex,
    configs_up_to,
    enumerate_configs,
    monomial_simplex_integral,
    simplex_volume,
    total_volume_series,
    vol_gamma_lambda,
    vol_gamma_single_field,
)
from pathlike.special_fn import (
    bc_bound,
    bc_contour,
    bc_derivative_residual,
    bc_modified_bessel,
    bc_recurrence_residual,
    bessel_clifford,
)

logger = logging.getLogger(__name__)

SUITE_NAMES = ("special-fn", "cbinom", "geometry", "path-space", "length-integral", "oracle")

LINEAR_VECTORS = (1.0, 2.0, 3.0, 1.0)
# Native start points, chosen so every budget used below stays in the domain
START_POINTS = {
    "euclidean": ChartPoint(0.0, 0.0),
    "linear": ChartPoint(0.0, 0.0),
    "polar": ChartPoint(1.0, 0.0),
    "sphere": ChartPoint(0.5, 0.0),
    "hyperbolic": ChartPoint(0.0, 1.0),
}
EXPECTED_CURVATURE = {"euclidean": 0.0, "linear": 0.0, "polar": 0.0, "sphere": 1.0, "hyperbolic": -1.0}
BUDGETS = (0.5, 1.0, 2.0)
QUAD_BUDGETS = ((1.0, 1.0), (0.5, 2.0))
NON_QUADRATIC = ("sphere", "hyperbolic")

# Stream keys for the random evaluation grids; disjoint from configuration keys
_GRID_KEY = 9001


@dataclass(frozen=True)
class PropertyCheck:
    """
    Outcome of one property.

    Attributes:
        suite (str): Suite name
        name (str): Property name
        residual (float): Observed residual (relative, or in units of 3 sigma)
        tol (float): Tolerance after scaling
        error (str, optional): Message when the property raised instead
    """

    suite: str
    name: str
    residual: float
    tol: float
    error: str = None

    @property
    def passed(self):
        return self.error is None and self.residual <= self.tol

    def report_line(self):
        mark = "✅" if self.passed else "❌"
        if self.error is not None:
            return f"{mark} {self.suite}.{self.name}: error: {self.error}"
        return f"{mark} {self.suite}.{self.name}: residual={self.residual:.3e} tol={self.tol:.1e}"


def _rel(value, reference):
    return abs(value - reference) / max(abs(reference), 1e-300)


def _sigma_ratio(estimate, reference, allowance):
    # Deviation in units of the allowed band (3 sigma plus any tail)
    deviation = abs(estimate - reference)
    if allowance <= 0:
        return 0.0 if deviation == 0 else math.inf
    return deviation / allowance


def _excess(value, bound):
    """How far value exceeds bound, relative to bound; 0 when dominated."""
    return max(0.0, value / bound - 1.0)


def _shortfall(value, floor):
    """How far value falls short of floor; 0 when it clears it."""
    return max(0.0, floor - value)


def _preset_profile(name):
    return preset(name, LINEAR_VECTORS if name == "linear" else None)


def _preset_input(name, a, s):
    profile = _preset_profile(name)
    return LengthIntegralInput.from_budget(profile, START_POINTS[name], a, a + s)


def _grid(settings, size, *bounds):
    rng = stream(settings.seed, _GRID_KEY, len(bounds))
    return [rng.uniform(lo, hi, size) for lo, hi in bounds]


# special-fn


def _special_fn_suite(settings):
    policy = settings.series_policy()
    orders = range(7)
    arguments = (0.5, 1.0, 2.0, 5.0, 10.0)

    yield "series_vs_contour", max(
        _rel(bc_contour(n, z), bessel_clifford(n, z, policy)) for n in orders for z in arguments
    ), 1e-9
    yield "series_vs_modified_bessel", max(
        _rel(bc_modified_bessel(n, z), bessel_clifford(n, z, policy))
        for n in orders
        for z in arguments
    ), 1e-12
    yield "recurrence", max(
        abs(bc_recurrence_residual(n, z, policy)) / bessel_clifford(n, z, policy)
        for n in orders
        for z in arguments
    ), 1e-10
    yield "derivative", max(
        abs(bc_derivative_residual(n, z, 1e-5, policy)) / bessel_clifford(n + 1, z, policy)
        for n in orders
        for z in arguments
    ), 1e-6

    (zs,) = _grid(settings, 100, (0.01, 50.0))
    yield "growth_bound", max(
        _excess(bessel_clifford(n, z, policy), bc_bound(n, z)) for n in orders for z in zs
    ), 0.0


# cbinom


def _cbinom_suite(settings):
    policy = settings.series_policy()
    points = [(t, t * (j / 19.0)) for t in np.linspace(0.0, 20.0, 20) for j in range(20)]

    yield "series_vs_bessel_clifford", max(
        _rel(cbinom_series(t, a, policy), cbinom_bc(t, a, policy)) for t, a in points
    ), 1e-12
    yield "symmetry", max(
        _rel(cbinom_bc(t, t - a, policy), cbinom_bc(t, a, policy)) for t, a in points
    ), 1e-13
    yield "boundary", max(
        max(_rel(cbinom_bc(t, 0.0, policy), 2.0 + t), _rel(cbinom_bc(t, t, policy), 2.0 + t))
        for t in np.linspace(0.0, 20.0, 20)
    ), 1e-13

    # Halving h must divide the mixed-difference residual by about 4
    coarse = pde_residual(1.5, 1.0, h=0.02, policy=policy)
    fine = pde_residual(1.5, 1.0, h=0.01, policy=policy)
    yield "pde_second_order", abs(coarse / fine - 4.0) / 4.0, 0.05

    pairs = [(s, t) for s in (0.5, 1.0, 2.0, 5.0) for t in (0.5, 1.0, 2.0, 5.0)]
    yield "v_integral_forms", max(_rel(*v_integral_forms(s, t, policy)) for s, t in pairs), 1e-12
    yield "half_identity", max(
        abs(half_identity_residual(s, t, policy))
        / (0.5 * s * cbinom_bc(s + t, s, policy) + 0.5 * t * v_integral(s, t, policy))
        for s, t in pairs
    ), 1e-12

    def quadrature(s, t):
        value, _ = integrate.quad(
            lambda u: cbinom_dt(t, u, 1, policy), 0.0, s, epsabs=0.0, epsrel=1e-12
        )
        return value

    yield "v_integral_quadrature", max(
        _rel(quadrature(s, t), v_integral(s, t, policy)) for s, t in pairs
    ), 1e-8

    ts, ss = _grid(settings, 100, (0.01, 10.0), (0.01, 10.0))
    yield "growth_bound", max(
        _excess(cbinom_bc(t + s, s, policy), cbinom_bound(t, s)) for t, s in zip(ts, ss)
    ), 0.0


# geometry


def _geometry_suite(settings):
    worst = 0.0
    for name, expected in EXPECTED_CURVATURE.items():
        profile = _preset_profile(name)
        for x in profile.sample_points(20):
            worst = max(worst, abs(gauss_curvature(profile, x) - expected))
    yield "curvature", worst, 1e-9

    # y constant and h(x(s)) = c0 s + c1
    worst = 0.0
    for name in EXPECTED_CURVATURE:
        profile = _preset_profile(name)
        for x in profile.sample_points(20):
            for c0 in (0.5, 1.0, 2.0):
                dh = float(profile.dh(x))
                dx = c0 / dh
                ddx = -float(profile.d2h(x)) * dx * dx / dh
                first, second = geodesic_residual(profile, x, dx, ddx, 0.0, 0.0)
                worst = max(worst, abs(first) / max(1.0, abs(ddx)), abs(second))
    yield "geodesic_flow_lines", worst, 1e-10

    # Splitting a segment in two must not change the length
    worst = 0.0
    for name in EXPECTED_CURVATURE:
        profile = _preset_profile(name)
        start = START_POINTS[name]
        for a, s in ((0.5, 1.0), (1.0, 2.0)):
            whole = path_length(profile, (1, 2), (a, s), start)
            split = path_length(profile, (1, 1, 2, 2), (a / 3, 2 * a / 3, s / 2, s / 2), start)
            worst = max(worst, _rel(split, whole))
    yield "segment_additivity", worst, 1e-12


# path-space


def _path_space_suite(settings):
    def compatibility(n, m, t):
        value, _ = integrate.quad(
            lambda u: simplex_volume(m, u) * simplex_volume(n - 1 - m, max(t - u, 0.0)),
            0.0,
            t,
            epsabs=0.0,
            epsrel=1e-13,
        )
        return _rel(value, simplex_volume(n, t))

    yield "subsimplex_compatibility", max(
        compatibility(n, m, 2.0) for n in range(1, 9) for m in range(n)
    ), 1e-10

    yield "config_count", max(
        abs(len(enumerate_configs(n, k)) - k * (k - 1) ** n)
        for n in range(6)
        for k in (1, 2, 3)
    ), 0.0

    yield "single_field_volume", _rel(vol_gamma_single_field(2, 1.0), 2.0 * math.e), 1e-13

    worst = 0.0
    for a, s in ((0.5, 0.5), (1.0, 2.0), (0.0, 1.5), (3.0, 0.0)):
        total, tail = total_volume_series(a, s, 20)
        worst = max(worst, max(0.0, abs(total - cbinom_bc(a + s, a)) - tail) / cbinom_bc(a + s, a))
    yield "total_volume_series", worst, 1e-13

    # t0 = 1, lambda = 1/2 influences the point for 1 <= t <= 2 with a = 2 (t - 1)
    yield "lambda_volume", max(
        _rel(vol_gamma_lambda(t, 1.0, 0.5), cbinom_bc(t, 2.0 * (t - 1.0)))
        for t in (1.0, 1.25, 1.5, 2.0)
    ), 1e-13


# length-integral


def _length_integral_suite(settings):
    inputs = [
        (name, _preset_input(name, a, s)) for name in EXPECTED_CURVATURE for a in BUDGETS for s in BUDGETS
    ]

    yield "theorem_vs_stratified", max(
        _rel(stratified_length_sum(data, 25).value, theorem_length_integral(data).value)
        for _, data in inputs
    ), 1e-10
    yield "slope_coefficient_form", max(
        _rel(theorem_length_integral_remark_form(data).value, theorem_length_integral(data).value)
        for _, data in inputs
    ), 1e-12

    def example_residual(name, data):
        theorem = theorem_length_integral(data).value
        if name == "polar":
            return _rel(theorem, corollary_average_form(data))
        return _rel(theorem, example_formula(data))

    yield "worked_examples", max(example_residual(name, data) for name, data in inputs), 1e-12

    # The average form is exact only for quadratic f, so it must miss elsewhere
    yield "average_form_needs_quadratic_f", max(
        _shortfall(_rel(average_length_form(data), theorem_length_integral(data).value), 1e-6)
        for name, data in inputs
        if name in NON_QUADRATIC
    ), 0.0

    yield "metric_recovery", max(
        _rel(
            metric_recovery(data, theorem_length_integral(data).value),
            float(data.profile.h(data.x1)),
        )
        for _, data in inputs
        if abs(float(data.profile.h(data.x1))) > 0
    ), 1e-10

    worst = 0.0
    for name in EXPECTED_CURVATURE:
        x_hi = 1.0 if name == "sphere" else 2.0
        a_values, s_values = _grid(settings, 100, (0.1, x_hi), (0.1, 2.0))
        for a, s in zip(a_values, s_values):
            data = _preset_input(name, a, s)
            worst = max(
                worst,
                _excess(theorem_length_integral(data).value, corollary_growth_bound(data)),
            )
    yield "growth_bound", worst, 0.0

    worst = 0.0
    for name in EXPECTED_CURVATURE:
        for a, s in QUAD_BUDGETS:
            data = _preset_input(name, a, s)
            for config in configs_up_to(2 * MAX_LEMMA_DEPTH + 1, min_length=2):
                nested = quad_config_integral(data.profile, config, data, tol=settings.quad_tol)
                worst = max(worst, _rel(nested.value, config_length_integral(data, config)))
    yield "stratum_quadrature", worst, 1e-6

    mc = settings.mc_config()
    worst = 0.0
    # Every preset at every budget pair
    for _, data in inputs:
        estimate = mc_total_integral(data.profile, data, settings.max_half_length, mc)
        worst = max(
            worst,
            _sigma_ratio(
                estimate.value, theorem_length_integral(data).value, estimate.abs_error_estimate
            ),
        )
    yield "monte_carlo_total", worst, 1.0


# oracle


def _oracle_suite(settings):
    mc = settings.mc_config()

    rng = stream(settings.seed, _GRID_KEY, 0)
    draws = sample_simplex(1, 2.0, rng, size=mc.samples)[:, 0]
    sigma = float(np.std(draws, ddof=1)) / math.sqrt(draws.size)
    yield "simplex_sample_mean", _sigma_ratio(float(np.mean(draws)), 1.0, 3.0 * sigma), 1.0

    cases = (
        ("polar", (2, 1), 1.0, 1.0),
        ("sphere", (1, 2, 1), 0.5, 0.5),
        ("hyperbolic", (2, 1, 2), 0.5, 1.0),
    )
    worst = 0.0
    for name, word, a, s in cases:
        data = _preset_input(name, a, s)
        config = Configuration(word)
        estimate = mc_config_integral(data.profile, config, data, mc)
        worst = max(
            worst,
            _sigma_ratio(estimate.value, config_length_integral(data, config), estimate.abs_error_estimate),
        )
    yield "stratum_monte_carlo", worst, 1.0

    worst = 0.0
    for exponents, t in (((1, 0), 1.0), ((1, 1, 1), 1.0), ((2, 0, 1), 1.5), ((0, 1, 0, 1, 1), 2.0)):
        index = MultiIndex(exponents)
        estimate = mc_monomial_integral(index, t, mc)
        worst = max(
            worst,
            _sigma_ratio(estimate.value, monomial_simplex_integral(index, t), estimate.abs_error_estimate),
        )
    yield "monomial_monte_carlo", worst, 1.0

    worst = 0.0
    for n, m, s, t, sigma_perm in ((2, 0, 1.0, 2.0, (1, 0, 2)), (3, 1, 1.0, 3.0, (3, 1, 2, 0))):
        plain, permuted = permutation_volume_check(n, m, s, t, sigma_perm, mc)
        expected = product_volume(n, m, s, t)
        worst = max(
            worst,
            _sigma_ratio(plain.value, expected, plain.abs_error_estimate),
            _sigma_ratio(permuted.value, expected, permuted.abs_error_estimate),
        )
    yield "permutation_volume", worst, 1.0

    derivatives = {
        "identity": (lambda x: x, lambda x: np.ones_like(x)),
        "quadratic": (lambda x: x * x, lambda x: 2.0 * x),
        "exp": (np.exp, np.exp),
    }
    worst = 0.0
    for m in (1, 2, 3):
        for r in (0, 1, 2):
            for f, df in derivatives.values():
                for a, b in ((1.0, 1.0), (0.5, 2.0)):
                    closed = lemma_Im(m, a, b, 1.0, 1, 2, r, 0.3, f)
                    nested = quad_lemma_recursive(
                        m, a, b, 1.0, 1, 2, r, 0.3, df,
                        tol=settings.quad_tol, order=settings.quad_order,
                    )
                    worst = max(worst, _rel(nested, closed))
    yield "lemma_recursion", worst, 1e-8


SUITES = {
    "special-fn": _special_fn_suite,
    "cbinom": _cbinom_suite,
    "geometry": _geometry_suite,
    "path-space": _path_space_suite,
    "length-integral": _length_integral_suite,
    "oracle": _oracle_suite,
}


def run_suite(suite, settings, tol_scale=1.0):
    """
    Evaluate every property of one suite.

    A property that raises a PathlikeError is recorded as failed with the
    message and ends the suite.

    Args:
        suite (str): One of SUITE_NAMES
        settings (Settings): Numerical settings, including the seed
        tol_scale (float): Factor applied to every tolerance

    Returns:
        list: PropertyCheck objects in a fixed order
    """
    checks = []
    properties = SUITES[suite](settings)
    while True:
        try:
            name, residual, tol = next(properties)
        except StopIteration:
            break
        except PathlikeError as e:
            checks.append(PropertyCheck(suite, f"property_{len(checks) + 1}", math.inf, 0.0, str(e)))
            break
        logger.debug("%s.%s residual %r", suite, name, residual)
        checks.append(PropertyCheck(suite, name, float(residual), tol * tol_scale))
    return checks


def validate_workflow(suite, settings, tol_scale=1.0, out=print):
    """
    Run one suite (or all of them) and print the report.

    Args:
        suite (str): A suite name or "all"
        settings (Settings): Numerical settings
        tol_scale (float): Factor applied to every tolerance
        out (callable): Line printer

    Returns:
        bool: True if every property passed
    """
    names = SUITE_NAMES if suite == "all" else (suite,)
    checks = []
    for name in names:
        checks.extend(run_suite(name, settings, tol_scale))

    for check in checks:
        out(check.report_line())
    passed = sum(check.passed for check in checks)
    out(f"{passed}/{len(checks)} properties passed")
    return passed == len(checks)
