"""
Continuous binomial coefficients {t brace a}.

The public functions take (total, part) = (t, a). The derivative, integral and
bound formulas are naturally written for {t+s brace s}; those take (t, s) with
s = a and t = total - a, and say so in their docstrings.
"""

import math
import sys

from pathlike.errors import DomainError, PathlikeError, SeriesNotConvergedError
from pathlike.special_fn import DEFAULT_POLICY, bc_oscillating, bessel_clifford

# Relative precision the alternating series must keep at negative u
CANCELLATION_TOL = 1e-10
_EPS = sys.float_info.epsilon


def cbinom_series(t, a, policy=DEFAULT_POLICY):
    """
    Evaluate {t brace a} from its defining double series.

        {t brace a} = 2 sum u^n / n!^2 + t sum u^n / (n! (n+1)!),   u = a (t - a)

    The function is entire, so any real (t, a) is accepted. The stopping rule is
    applied to the combined magnitude of the n-th terms of both series. For
    u < 0 the terms alternate; rounding of the largest term must stay below
    CANCELLATION_TOL relative to the sum.

    Args:
        t (float): Total time
        a (float): First-direction budget
        policy (SeriesPolicy): Truncation control

    Returns:
        float: The truncated sum

    Raises:
        SeriesNotConvergedError: If the policy is exhausted first, or if
            cancellation leaves fewer digits than CANCELLATION_TOL asks for
    """
    u = a * (t - a)
    total = 2.0 + t
    if u == 0:
        return total
    square_term = 1.0  # u^n / n!^2
    shifted_term = 1.0  # u^n / (n! (n+1)!)
    largest = 2.0 + abs(t)
    for n in range(1, policy.max_terms):
        square_term *= u / (n * n)
        shifted_term *= u / (n * (n + 1))
        magnitude = abs(2.0 * square_term) + abs(t * shifted_term)
        largest = max(largest, magnitude)
        total += 2.0 * square_term + t * shifted_term
        if policy.should_stop(magnitude, total):
            if largest * _EPS > CANCELLATION_TOL * abs(total):
                raise SeriesNotConvergedError(
                    f"series for {{{t} brace {a}}} lost its precision to cancellation: "
                    f"largest term {largest:.3e}, sum {total:.3e}",
                    total,
                    n + 1,
                )
            return total
    raise SeriesNotConvergedError(
        f"series not converged for {{{t} brace {a}}} after {policy.max_terms} terms",
        total,
        policy.max_terms,
    )


def _brace(t, s, policy=DEFAULT_POLICY):
    # {t+s brace s} = 2 C_0(st) + (t+s) C_1(st)
    z = s * t
    return 2.0 * bessel_clifford(0, z, policy) + (t + s) * bessel_clifford(1, z, policy)


def _check_wedge(t, a):
    if not (a >= 0 and t - a >= 0):
        raise DomainError(f"need 0 <= a <= t, got t={t}, a={a}")


def cbinom_bc(t, a, policy=DEFAULT_POLICY):
    """
    Evaluate {t brace a} = 2 C_0(a(t-a)) + t C_1(a(t-a)).

    Raises:
        DomainError: Unless 0 <= a <= t
    """
    _check_wedge(t, a)
    return _brace(t - a, a, policy)


def cbinom_oscillating(t, a):
    """
    Evaluate {t brace a} = 2 J_0(2 sqrt(x)) + t J_1(2 sqrt(x)) / sqrt(x), x = a (a - t).

    This is the Bessel-Clifford form continued to u = a (t - a) < 0, where the
    functions oscillate.

    Raises:
        DomainError: If a (t - a) > 0
    """
    x = a * (a - t)
    if x < 0:
        raise DomainError(f"need a (t - a) <= 0, got t={t}, a={a}")
    return 2.0 * bc_oscillating(0, x) + t * bc_oscillating(1, x)


def cbinom(t, a, policy=DEFAULT_POLICY):
    """
    Default evaluator for any real (t, a).

    Inside 0 <= a <= t the Bessel-Clifford form is used; where a (t - a) < 0
    the oscillating Bessel J form; the series covers the remaining region.
    """
    if 0 <= a <= t:
        return cbinom_bc(t, a, policy)
    if a * (t - a) < 0:
        return cbinom_oscillating(t, a)
    return cbinom_series(t, a, policy)


def _check_nonnegative(**values):
    for name, value in values.items():
        if not value >= 0:
            raise DomainError(f"{name} must be >= 0, got {value}")


def cbinom_dt(t, s, n, policy=DEFAULT_POLICY):
    """
    n-th derivative in t of {t+s brace s} (note the (t, s) convention).

        s^(n-1) (2s + n) C_n(st) + (t + s) s^n C_{n+1}(st)

    Args:
        t (float): Second-direction budget, >= 0
        s (float): First-direction budget, >= 0
        n (int): Derivative order, >= 1

    Raises:
        DomainError: If n < 1 (use cbinom_bc for n = 0) or t, s < 0
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be >= 1 (use cbinom_bc for n = 0), got {n}")
    _check_nonnegative(t=t, s=s)
    z = s * t
    return s ** (n - 1) * (2.0 * s + n) * bessel_clifford(n, z, policy) + (
        t + s
    ) * s**n * bessel_clifford(n + 1, z, policy)


def cbinom_ds(t, s, n, policy=DEFAULT_POLICY):
    """n-th derivative in s of {t+s brace s}; the mirror image of cbinom_dt."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be >= 1 (use cbinom_bc for n = 0), got {n}")
    _check_nonnegative(t=t, s=s)
    z = s * t
    return t ** (n - 1) * (2.0 * t + n) * bessel_clifford(n, z, policy) + (
        t + s
    ) * t**n * bessel_clifford(n + 1, z, policy)


def v_integral_forms(s, t, policy=DEFAULT_POLICY):
    """
    Both closed forms of V(s, t) = int_0^s d/dt {t+u brace u} du.

    Returns:
        tuple: (2s(s+1) C_2 + s^2 (t+s) C_3, 2s^2 C_2 + s^3 C_3 + s C_1), all at st
    """
    _check_nonnegative(s=s, t=t)
    z = s * t
    c1 = bessel_clifford(1, z, policy)
    c2 = bessel_clifford(2, z, policy)
    c3 = bessel_clifford(3, z, policy)
    combined = 2.0 * s * (s + 1.0) * c2 + s * s * (t + s) * c3
    expanded = 2.0 * s * s * c2 + s**3 * c3 + s * c1
    return combined, expanded


def v_integral(s, t, policy=DEFAULT_POLICY):
    """
    V(s, t) = 2s(s+1) C_2(st) + s^2 (t+s) C_3(st).

    The expanded form 2s^2 C_2 + s^3 C_3 + s C_1 is evaluated alongside and must
    agree to 1e-12 relative; the two are equal through the recurrence
    z C_{nu+2} + (nu+1) C_{nu+1} = C_nu.
    """
    combined, expanded = v_integral_forms(s, t, policy)
    if not math.isclose(combined, expanded, rel_tol=1e-12, abs_tol=1e-300):
        raise PathlikeError(
            f"closed forms of V({s}, {t}) disagree: {combined!r} vs {expanded!r}"
        )
    return combined


def half_identity_residual(s, t, policy=DEFAULT_POLICY):
    """Residual of (s/2){t+s brace s} - (t/2) V(s,t) = s (C_1(st) + s C_2(st))."""
    _check_nonnegative(s=s, t=t)
    z = s * t
    lhs = 0.5 * s * _brace(t, s, policy) - 0.5 * t * v_integral(s, t, policy)
    rhs = s * (bessel_clifford(1, z, policy) + s * bessel_clifford(2, z, policy))
    return lhs - rhs


def cbinom_bound(t, s):
    """
    Growth bound |{t+s brace s}| <= (sqrt(s) + sqrt(t))^2 / sqrt(st) * exp(2 sqrt(st)).

    Raises:
        DomainError: If s <= 0 or t <= 0
    """
    if not (s > 0 and t > 0):
        raise DomainError(f"need s > 0 and t > 0, got t={t}, s={s}")
    root = math.sqrt(s * t)
    return (math.sqrt(s) + math.sqrt(t)) ** 2 / root * math.exp(2.0 * root)


def pde_residual(t, s, h=1e-4, policy=DEFAULT_POLICY):
    """
    Mixed central difference of (t, s) -> {t+s brace s} minus the function itself.

    The coefficients solve d^2 F / dt ds = F, so the residual is O(h^2).

    Raises:
        DomainError: Unless t >= h and s >= h with h > 0
    """
    if not (h > 0 and t >= h and s >= h):
        raise DomainError(f"need t, s >= h > 0, got t={t}, s={s}, h={h}")
    mixed = (
        _brace(t + h, s + h, policy)
        - _brace(t + h, s - h, policy)
        - _brace(t - h, s + h, policy)
        + _brace(t - h, s - h, policy)
    ) / (4.0 * h * h)
    return mixed - _brace(t, s, policy)
