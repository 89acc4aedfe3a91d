"""Closed forms for the integral of length over the space of paths between two points."""

import math
from dataclasses import dataclass

from pathlike.cbinom import cbinom_bc, v_integral
from pathlike.errors import DomainError, NotQuadraticError, UnsupportedConfigurationError
from pathlike.geometry import path_length
from pathlike.path_space import (
    Configuration,
    configs_up_to,
    power_over_factorial,
    series_tail_bound,
)
from pathlike.special_fn import bessel_clifford

INFLUENCE_TOL = 1e-12
METHODS = ("closed_form", "truncated_sum", "monte_carlo", "quadrature")


@dataclass(frozen=True)
class LengthIntegralInput:
    """
    Endpoints p = (x0, y0), q = (x1, y1) in profile coordinates and total time t.

    Attributes:
        profile (MetricProfile): The metric
        x0, y0, x1, y1 (float): Profile coordinates of p and q
        t (float): Total time, equal to a + s with a = x1 - x0, s = y1 - y0
    """

    profile: object
    x0: float
    y0: float
    x1: float
    y1: float
    t: float

    def __post_init__(self):
        slack = INFLUENCE_TOL * max(1.0, abs(self.t))
        if self.a < -slack or self.s < -slack:
            raise DomainError(
                f"q must lie ahead of p: a={self.a}, s={self.s} must be >= 0"
            )
        if abs(self.a + self.s - self.t) > slack:
            raise DomainError(
                f"q is not influenced at time t={self.t}: a + s = {self.a + self.s}"
            )
        for label, x in (("x0", self.x0), ("x1", self.x1)):
            if not self.profile.contains(x):
                raise DomainError(
                    f"{label}={x} is outside the {self.profile.name} domain "
                    f"{self.profile.domain_x}"
                )

    @classmethod
    def from_points(cls, profile, p, q, t=None):
        """Build from native chart points; t defaults to a + s."""
        x0, y0 = profile.to_profile(p)
        x1, y1 = profile.to_profile(q)
        if t is None:
            t = (x1 - x0) + (y1 - y0)
        return cls(profile, x0, y0, x1, y1, float(t))

    @classmethod
    def from_budget(cls, profile, p, a, t):
        """Build from a start point, the first-direction budget a and total time t."""
        x0, y0 = profile.to_profile(p)
        return cls(profile, x0, y0, x0 + a, y0 + (t - a), float(t))

    @property
    def a(self):
        return self.x1 - self.x0

    @property
    def s(self):
        return self.y1 - self.y0

    @property
    def start(self):
        """p as a native chart point."""
        return self.profile.from_profile(self.x0, self.y0)

    @property
    def delta_h(self):
        return float(self.profile.h(self.x1) - self.profile.h(self.x0))

    @property
    def delta_f(self):
        return float(self.profile.f(self.x1) - self.profile.f(self.x0))

    @property
    def df0(self):
        return float(self.profile.df(self.x0))

    @property
    def df1(self):
        return float(self.profile.df(self.x1))

    def budgets(self):
        """(a, s) clamped at zero against rounding."""
        return max(self.a, 0.0), max(self.s, 0.0)


@dataclass(frozen=True)
class IntegralResult:
    """
    A computed integral with its error estimate and diagnostics.

    Attributes:
        value (float): The estimate
        abs_error_estimate (float): Absolute error estimate (0 for closed forms)
        configs_used (int): Number of configurations summed
        method (str): One of closed_form, truncated_sum, monte_carlo, quadrature
        std_error (float): Monte-Carlo standard error, 0 otherwise
        tail_bound (float): Bound on the configurations left out, 0 otherwise
    """

    value: float
    abs_error_estimate: float
    configs_used: int
    method: str
    std_error: float = 0.0
    tail_bound: float = 0.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}")
        if not self.abs_error_estimate >= 0:
            raise DomainError("abs_error_estimate must be >= 0")


def lemma_Im(m, a, b, lam, k1, k2, r, K, f):
    """
    Closed form of the recurrence integrals I_m(a, b).

    I_0(a, b) = lam a^k1 / k1! * b^k2 / k2! and
    I_m(a, b) = int_0^a int_0^b I_{m-1} dy dx
                + b^(m+r) / Gamma(m+r+1) * int_0^a x^(m-1) / (m-1)! f'(K+x) dx
    solve to

        lam a^(k1+m) / (k1+m)! * b^(k2+m) / (k2+m)!
        + a^(m-1) / (m-1)! * b^(m+r) / Gamma(m+r+1) * (f(K+a) - f(K))

    Raises:
        DomainError: If m < 1, a or b is not positive, or m + r + 1 is a pole
    """
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    if not (a > 0 and b > 0):
        raise DomainError(f"need a > 0 and b > 0, got a={a}, b={b}")
    order = m + r + 1
    if order <= 0 and float(order).is_integer():
        raise DomainError(f"Gamma has a pole at m + r + 1 = {order}")
    polynomial = lam * power_over_factorial(a, k1 + m) * power_over_factorial(b, k2 + m)
    increment = float(f(K + a) - f(K))
    return polynomial + power_over_factorial(a, m - 1) * b ** (m + r) / math.gamma(
        order
    ) * increment


def config_length_integral(data, config):
    """
    Integral of the length over the stratum of paths with configuration ``config``.

    Terms with a negative factorial argument vanish. Single-segment strata
    only exist when the other budget is zero, where they hold the one flow line.

    Args:
        data (LengthIntegralInput): Endpoints and time
        config (Configuration): Two-direction configuration

    Returns:
        float: The stratum integral
    """
    if config.k != 2:
        raise UnsupportedConfigurationError(f"only k = 2 is supported, got k={config.k}")
    a, s = data.budgets()
    P = power_over_factorial
    dh, dfx, df0, df1 = data.delta_h, data.delta_f, data.df0, data.df1

    if len(config) == 1:
        if config.first == 1:
            return dh if s == 0 else 0.0
        return df0 * s if a == 0 else 0.0

    m = config.half_length
    if len(config) % 2 == 0:
        edge_slope = df1 if config.first == 1 else df0
        return (
            dh * P(a, m - 1) * P(s, m - 1)
            + edge_slope * P(a, m - 1) * P(s, m)
            + dfx * P(a, m - 2) * P(s, m)
        )
    if config.first == 1:
        return dh * P(a, m) * P(s, m - 1) + dfx * P(a, m - 1) * P(s, m)
    return (
        dh * P(a, m - 1) * P(s, m)
        + (df1 + df0) * P(a, m - 1) * P(s, m + 1)
        + dfx * P(a, m - 2) * P(s, m + 1)
    )


def _volume_and_w(data):
    a, s = data.budgets()
    return cbinom_bc(data.t, min(a, data.t)), v_integral(s, a)


def theorem_length_integral(data):
    """
    Integral of the length over all paths from p to q in time t.

        dh B + (f'(x1) + f'(x0)) ((s/2) B - (a/2) W) + df W

    with B = {t brace a}, W = V(s, a) = int_0^s d/da {a+u brace u} du,
    dh = h(x1) - h(x0) and df = f(x1) - f(x0).

    Returns:
        IntegralResult: Closed-form value with zero error estimate
    """
    a, s = data.budgets()
    B, W = _volume_and_w(data)
    value = (
        data.delta_h * B
        + (data.df1 + data.df0) * (0.5 * s * B - 0.5 * a * W)
        + data.delta_f * W
    )
    return IntegralResult(value, 0.0, 0, "closed_form")


def theorem_length_integral_remark_form(data):
    """The same integral with (s/2) B - (a/2) W replaced by s (C_1(as) + s C_2(as))."""
    a, s = data.budgets()
    B, W = _volume_and_w(data)
    z = a * s
    slope_weight = s * (bessel_clifford(1, z) + s * bessel_clifford(2, z))
    value = data.delta_h * B + (data.df1 + data.df0) * slope_weight + data.delta_f * W
    return IntegralResult(value, 0.0, 0, "closed_form")


def length_tail_bound(data, max_half_length):
    """
    Bound on the sum of |stratum integrals| over configurations longer than 2M + 1.

    Every omitted term is a budget power times u^i / i!^2 with u = a s and
    i >= M - 1, so a geometric majorant of that series bounds the tail.
    """
    a, s = data.budgets()
    scale = (
        abs(data.delta_h) * (2.0 + a + s)
        + (abs(data.df0) + abs(data.df1)) * (s + s * s)
        + abs(data.delta_f) * (2.0 * s * s + s + s**3)
    )
    return series_tail_bound(a * s, max_half_length - 1, scale)


def stratified_length_sum(data, max_half_length):
    """
    Sum of config_length_integral over 2 <= |c| <= 2M + 1.

    Terms are reduced with math.fsum in configuration order, so the result does
    not depend on evaluation order.

    Returns:
        IntegralResult: Truncated sum with the tail bound as error estimate
    """
    if max_half_length < 1:
        raise DomainError(f"max_half_length must be >= 1, got {max_half_length}")
    configs = configs_up_to(2 * max_half_length + 1, min_length=2)
    value = math.fsum(config_length_integral(data, c) for c in configs)
    tail = length_tail_bound(data, max_half_length)
    return IntegralResult(value, tail, len(configs), "truncated_sum", tail_bound=tail)


def average_length_form(data):
    """
    Average length of the (1,2) and (2,1) paths times {t brace a}, for any profile.

    It differs from the full integral by V(s, a) times the trapezoid error of
    f' over [x0, x1], so it is exact only when f is quadratic.
    """
    a, s = data.budgets()
    p = data.start
    across_first = path_length(data.profile, Configuration((1, 2)), (a, s), p)
    up_first = path_length(data.profile, Configuration((2, 1)), (s, a), p)
    return 0.5 * (across_first + up_first) * cbinom_bc(data.t, min(a, data.t))


def corollary_average_form(data):
    """
    Average length of the (1,2) and (2,1) paths times {t brace a}.

    This equals the full integral exactly when f is quadratic.

    Raises:
        NotQuadraticError: If the profile does not declare a quadratic f
    """
    if not data.profile.quadratic_f:
        raise NotQuadraticError(
            f"{data.profile.name}: the average form needs f(x) = ax^2 + bx + c"
        )
    return average_length_form(data)


def corollary_growth_bound(data):
    """
    Exponential growth bound on the length integral.

    For a != s:
        [(1 + sqrt(s/a))^2 (a dh + s df) / sqrt(as)
         + (sqrt(s/a) + s/a) (f'(x1) + f'(x0)) + 2 df / a] exp(2 sqrt(as))
    and for a == s:
        2 (2 (dh + df) + f'(x1) + f'(x0) + df / a) exp(2a)

    Raises:
        DomainError: If a <= 0 or s <= 0
    """
    a, s = data.a, data.s
    if not (a > 0 and s > 0):
        raise DomainError(f"need a > 0 and s > 0, got a={a}, s={s}")
    dh, dfx = data.delta_h, data.delta_f
    slopes = data.df1 + data.df0
    if a == s:
        return 2.0 * (2.0 * (dh + dfx) + slopes + dfx / a) * math.exp(2.0 * a)
    ratio = math.sqrt(s / a)
    root = math.sqrt(a * s)
    bracket = (
        (1.0 + ratio) ** 2 * (a * dh + s * dfx) / root
        + (ratio + s / a) * slopes
        + 2.0 * dfx / a
    )
    return bracket * math.exp(2.0 * root)


def metric_recovery(data, observed_integral):
    """
    Solve the closed form for h(x1) given an observed integral.

    Only h(x0), f, f' and the endpoints are used; h(x1) is treated as unknown.

    Returns:
        float: h(x0) + (observed - slope terms - df W) / B
    """
    a, s = data.budgets()
    B, W = _volume_and_w(data)
    known = (data.df1 + data.df0) * (0.5 * s * B - 0.5 * a * W) + data.delta_f * W
    return float(data.profile.h(data.x0)) + (observed_integral - known) / B


def example_formula(data):
    """
    The surface-specific formula of the worked example for the preset in use.

    Raises:
        DomainError: For profiles without a worked example
    """
    a, s = data.budgets()
    B, W = _volume_and_w(data)
    name = data.profile.name
    if name == "euclidean":
        return data.t * B
    if name == "linear":
        return (a * float(data.profile.dh(data.x0)) + s * float(data.profile.df(data.x0))) * B
    if name == "polar":
        r0, r1 = data.x0, data.x1
        return 0.5 * ((a + s * r0) + (a + s * r1)) * B
    slope_weight = 0.5 * s * B - 0.5 * a * W
    if name == "sphere":
        th0 = data.x0
        return (
            a * B
            + (math.sin(th0) + math.sin(th0 + a)) * slope_weight
            + (math.cos(th0) - math.cos(th0 + a)) * W
        )
    if name == "hyperbolic":
        y0, y1 = data.x0, data.x1
        log_ratio = math.log(y1 / y0)
        return log_ratio * B + (1.0 / y0 + 1.0 / y1) * slope_weight + log_ratio * W
    raise DomainError(f"no worked example for profile {name!r}")
