"""Bessel-Clifford functions of the first kind for integer order and real z >= 0."""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from pathlike.errors import (
    ContourInconsistentError,
    DomainError,
    SeriesNotConvergedError,
)

logger = logging.getLogger(__name__)

# Largest n with n! finite in double precision
_FACTORIAL_OVERFLOW = 170
# Largest exponent with exp() finite in double precision
_EXP_OVERFLOW = 700.0
CONTOUR_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class SeriesPolicy:
    """
    Truncation control for every infinite series in the package.

    A series stops at the first term whose magnitude is below
    ``abs_tol + rel_tol * |partial sum|`` (the term is included), or after
    ``max_terms`` terms, whichever comes first.
    """

    max_terms: int = 500
    rel_tol: float = 1e-15
    abs_tol: float = 1e-300

    def __post_init__(self):
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise DomainError(f"max_terms must be a positive integer, got {self.max_terms}")
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be > 0, got {self.rel_tol}")
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be > 0, got {self.abs_tol}")

    def should_stop(self, term, partial):
        """Return True when ``term`` satisfies the stopping rule."""
        return abs(term) < self.abs_tol + self.rel_tol * abs(partial)


DEFAULT_POLICY = SeriesPolicy()


@dataclass(frozen=True)
class BCValue:
    """
    A Bessel-Clifford value together with its truncation record.

    Attributes:
        value (float): The truncated series sum
        terms_used (int): Number of series terms included
        truncated (bool): True if the term budget ran out before the tolerance
    """

    value: float
    terms_used: int
    truncated: bool

    @property
    def stop_reason(self):
        return "max_terms" if self.truncated else "tolerance"


def _check_order_and_argument(nu, z):
    if int(nu) != nu or nu < 0:
        raise DomainError(f"nu must be a non-negative integer, got {nu}")
    if not z >= 0:
        raise DomainError(f"z must be >= 0, got {z}")


def _not_converged(nu, z, partial, terms_used, strict):
    if strict:
        raise SeriesNotConvergedError(
            f"series not converged for C_{nu}({z}) after {terms_used} terms",
            partial,
            terms_used,
        )
    return BCValue(partial, terms_used, True)


def _series_direct(nu, z, policy, strict):
    term = 1.0 / math.factorial(nu)
    total = term
    if z == 0:
        return BCValue(total, 1, False)
    for n in range(1, policy.max_terms):
        term *= z / (n * (n + nu))
        total += term
        if policy.should_stop(term, total):
            return BCValue(total, n + 1, False)
    return _not_converged(nu, z, total, policy.max_terms, strict)


def _series_log_space(nu, z, policy, strict):
    # Terms are kept as logarithms; the stopping rule compares log-magnitudes.
    if z == 0:
        return BCValue(math.exp(-math.lgamma(nu + 1)), 1, False)
    log_z = math.log(z)
    log_rel = math.log(policy.rel_tol)
    log_abs = math.log(policy.abs_tol)
    log_term = -math.lgamma(nu + 1)
    log_total = log_term
    for n in range(1, policy.max_terms):
        log_term += log_z - math.log(n) - math.log(n + nu)
        log_total = float(np.logaddexp(log_total, log_term))
        if log_term < max(log_abs, log_rel + log_total):
            if log_total > _EXP_OVERFLOW:
                raise DomainError(f"C_{nu}({z}) overflows double precision")
            return BCValue(math.exp(log_total), n + 1, False)
    if log_total > _EXP_OVERFLOW:
        raise DomainError(f"C_{nu}({z}) overflows double precision")
    return _not_converged(nu, z, math.exp(log_total), policy.max_terms, strict)


def bc_series(nu, z, policy=DEFAULT_POLICY, strict=True):
    """
    Evaluate C_nu(z) = sum_n z^n / (n! (n+nu)!) by direct summation.

    Terms follow the ratio z / (n (n+nu)) in floating point. When nu! or the
    peak term would overflow, the sum is carried out in log space instead.

    Args:
        nu (int): Non-negative integer order
        z (float): Non-negative argument
        policy (SeriesPolicy): Truncation control
        strict (bool): Raise when the term budget runs out (otherwise the
            partial value is returned with ``truncated`` set)

    Returns:
        BCValue: Value and truncation record

    Raises:
        DomainError: If nu is not a non-negative integer or z < 0
        SeriesNotConvergedError: If strict and the policy is exhausted
    """
    _check_order_and_argument(nu, z)
    nu = int(nu)
    z = float(z)
    if nu > _FACTORIAL_OVERFLOW or 2.0 * math.sqrt(z) > _EXP_OVERFLOW:
        result = _series_log_space(nu, z, policy, strict)
    else:
        result = _series_direct(nu, z, policy, strict)
    logger.debug(
        "C_%d(%r): %d terms, stopped by %s", nu, z, result.terms_used, result.stop_reason
    )
    return result


def bessel_clifford(nu, z, policy=DEFAULT_POLICY):
    """Shorthand for ``bc_series(nu, z, policy).value``."""
    return bc_series(nu, z, policy).value


def bc_recurrence_residual(nu, z, policy=DEFAULT_POLICY):
    """
    Residual of z C_{nu+2}(z) + (nu+1) C_{nu+1}(z) - C_nu(z).

    Zero up to rounding for any convergent evaluation; used as a self-test.
    """
    c0 = bessel_clifford(nu, z, policy)
    c1 = bessel_clifford(nu + 1, z, policy)
    c2 = bessel_clifford(nu + 2, z, policy)
    return z * c2 + (nu + 1) * c1 - c0


def bc_derivative_residual(nu, z, h=1e-5, policy=DEFAULT_POLICY):
    """
    Central-difference check of dC_nu/dz = C_{nu+1}.

    Args:
        nu (int): Order
        z (float): Argument, must satisfy z >= h
        h (float): Difference step

    Returns:
        float: (C_nu(z+h) - C_nu(z-h)) / 2h - C_{nu+1}(z), which is O(h^2)
    """
    if not 0 < h <= z:
        raise DomainError(f"need 0 < h <= z, got h={h}, z={z}")
    forward = bessel_clifford(nu, z + h, policy)
    backward = bessel_clifford(nu, z - h, policy)
    return (forward - backward) / (2.0 * h) - bessel_clifford(nu + 1, z, policy)


def default_contour_radius(z):
    """Radius sqrt(z) minimising the Cauchy bound; 1 when z = 0."""
    return math.sqrt(z) if z > 0 else 1.0


def bc_contour(n, z, radius=None, quad_points=256):
    """
    Evaluate C_n(z) from its Cauchy integral on the circle |xi| = radius.

    The integrand exp(xi + z/xi) xi^(-n) is periodic in the angle, so the
    trapezoidal rule (a plain mean over equispaced nodes) converges
    geometrically.

    Args:
        n (int): Non-negative integer order
        z (float): Non-negative argument
        radius (float, optional): Contour radius, defaults to sqrt(z)
        quad_points (int): Number of nodes, at least 16

    Returns:
        float: Real part of the quadrature

    Raises:
        DomainError: On invalid order, argument, radius or node count
        ContourInconsistentError: If the imaginary part exceeds
            1e-10 * max(1, |real part|)
    """
    _check_order_and_argument(n, z)
    if radius is None:
        radius = default_contour_radius(z)
    if not radius > 0:
        raise DomainError(f"radius must be > 0, got {radius}")
    if quad_points < 16:
        raise DomainError(f"quad_points must be >= 16, got {quad_points}")

    theta = 2.0 * np.pi * np.arange(quad_points) / quad_points
    xi = radius * np.exp(1j * theta)
    total = np.mean(np.exp(xi + z / xi) * xi ** (-int(n)))

    if abs(total.imag) > CONTOUR_IMAG_TOL * max(1.0, abs(total.real)):
        raise ContourInconsistentError(
            f"contour quadrature inconsistent for C_{n}({z}): "
            f"imaginary residue {total.imag:.3e}",
            float(total.imag),
        )
    return float(total.real)


def bc_modified_bessel(nu, z):
    """C_nu(z) = z^(-nu/2) I_nu(2 sqrt(z)) through scipy's modified Bessel function."""
    _check_order_and_argument(nu, z)
    if z == 0:
        return 1.0 / math.factorial(int(nu))
    return float(special.iv(nu, 2.0 * math.sqrt(z)) / z ** (nu / 2.0))


def bc_oscillating(nu, x):
    """
    C_nu(-x) = x^(-nu/2) J_nu(2 sqrt(x)) for x >= 0, through scipy's Bessel J.

    The series has alternating terms at negative arguments, so it cancels
    catastrophically once x is large; this route does not.
    """
    _check_order_and_argument(nu, x)
    if x == 0:
        return 1.0 / math.factorial(int(nu))
    return float(special.jv(nu, 2.0 * math.sqrt(x)) / x ** (nu / 2.0))


def bc_bound(n, z):
    """
    Growth bound |C_n(z)| <= exp(2 sqrt(z)) / z^(n/2).

    Raises:
        DomainError: If z <= 0
    """
    if not z > 0:
        raise DomainError(f"z must be > 0, got {z}")
    return math.exp(2.0 * math.sqrt(z)) / z ** (n / 2.0)
