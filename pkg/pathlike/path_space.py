"""Configurations, simplex volumes and volumes of the path spaces between two points."""

import math
from dataclasses import dataclass

from scipy import special

from pathlike.cbinom import cbinom, cbinom_bc
from pathlike.errors import DomainError, InfeasibleTimeError, UnsupportedConfigurationError


@dataclass(frozen=True)
class Configuration:
    """
    A word of direction labels in {1..k} with no two adjacent labels equal.

    Attributes:
        word (tuple): Direction labels
        k (int): Number of available directions
    """

    word: tuple
    k: int = 2

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(int(c) for c in self.word))
        if not self.word:
            raise DomainError("a configuration needs at least one direction")
        if any(c < 1 or c > self.k for c in self.word):
            raise DomainError(f"labels must lie in 1..{self.k}, got {self.word}")
        for previous, current in zip(self.word, self.word[1:]):
            if previous == current:
                raise DomainError(f"adjacent labels must differ, got {self.word}")

    def __len__(self):
        return len(self.word)

    @property
    def first(self):
        return self.word[0]

    @property
    def half_length(self):
        """m with |c| = 2m or |c| = 2m + 1."""
        return len(self.word) // 2


@dataclass(frozen=True)
class MultiIndex:
    """Exponents (i_0, ..., i_n) of a monomial on the n-simplex."""

    exponents: tuple

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(i) for i in self.exponents))
        if not self.exponents:
            raise DomainError("a multi-index needs at least one exponent")
        if any(i < 0 for i in self.exponents):
            raise DomainError(f"exponents must be >= 0, got {self.exponents}")

    @property
    def order(self):
        return sum(self.exponents)


def enumerate_configs(n, k):
    """
    All configurations of length n + 1 over k directions, in lexicographic order.

    There are k (k-1)^n of them: for k = 1 that is (1,) when n = 0 and none otherwise.

    Raises:
        DomainError: If n < 0 or k < 1
    """
    if n < 0 or k < 1:
        raise DomainError(f"need n >= 0 and k >= 1, got n={n}, k={k}")
    words = [(c,) for c in range(1, k + 1)]
    for _ in range(n):
        words = [w + (c,) for w in words for c in range(1, k + 1) if c != w[-1]]
    return [Configuration(w, k) for w in words]


def configs_up_to(max_length, min_length=1):
    """Two-direction configurations ordered by length, then lexicographically."""
    return [
        config
        for length in range(min_length, max_length + 1)
        for config in enumerate_configs(length - 1, 2)
    ]


def power_over_factorial(x, k):
    """x^k / k!, with the convention that negative k gives 0."""
    if k < 0:
        return 0.0
    if k > 170:
        if x == 0:
            return 0.0
        sign = -1.0 if (x < 0 and k % 2) else 1.0
        return sign * math.exp(k * math.log(abs(x)) - special.gammaln(k + 1))
    return x**k / math.factorial(k)


def simplex_volume(n, t):
    """vol(Delta_n^t) = t^n / n!."""
    if n < 0 or t < 0:
        raise DomainError(f"need n >= 0 and t >= 0, got n={n}, t={t}")
    return power_over_factorial(float(t), int(n))


def monomial_simplex_integral(index, t):
    """
    Integral of s^I / I! over the simplex Delta_n^t, n = len(I) - 1.

    Returns:
        float: t^(|I| + n) / (|I| + n)!
    """
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    n = len(index.exponents) - 1
    return power_over_factorial(float(t), index.order + n)


def _require_surface(config):
    if config.k != 2:
        raise UnsupportedConfigurationError(
            f"only two-direction configurations are supported, got k={config.k}"
        )


def stratum_split(config, a, s):
    """
    Split a configuration's durations by direction.

    The leading direction owns ceil(|c|/2) segments and the other floor(|c|/2).
    Direction 1 segments share the budget a, direction 2 segments the budget s.

    Returns:
        tuple: ((leading budget, leading count), (other budget, other count))
    """
    _require_surface(config)
    budgets = {1: a, 2: s}
    lead = config.first
    other = 2 if lead == 1 else 1
    lead_count = (len(config) + 1) // 2
    return (budgets[lead], lead_count), (budgets[other], len(config) // 2)


def _factor_volume(budget, count):
    # count segments with durations summing to budget form a (count-1)-simplex
    if count == 0:
        return 1.0 if budget == 0 else 0.0
    return power_over_factorial(budget, count - 1)


def gamma_config_volume(config, a, s):
    """
    Volume of the stratum of paths with configuration ``config``.

    For |c| = 2m this is a^(m-1) s^(m-1) / (m-1)!^2; for |c| = 2m+1 the leading
    direction gets the extra power. A single segment has volume 1 when the other
    budget is zero and 0 otherwise.

    Args:
        config (Configuration): Two-direction configuration
        a (float): x1 - x0 >= 0
        s (float): y1 - y0 >= 0

    Raises:
        UnsupportedConfigurationError: If config.k != 2
        DomainError: If a < 0 or s < 0
    """
    if a < 0 or s < 0:
        raise DomainError(f"need a >= 0 and s >= 0, got a={a}, s={s}")
    (lead_budget, lead_count), (other_budget, other_count) = stratum_split(config, a, s)
    return _factor_volume(lead_budget, lead_count) * _factor_volume(
        other_budget, other_count
    )


def series_tail_bound(u, start, scale=1.0):
    """
    Bound scale * sum_{i >= start} u^i / i!^2 by a geometric majorant.

    Returns math.inf when u >= (start + 1)^2, where the majorant does not apply.
    """
    if u >= (start + 1) ** 2:
        return math.inf
    first = power_over_factorial(u, start) / math.factorial(start) if start <= 170 else 0.0
    return scale * first / (1.0 - u / (start + 1) ** 2)


def total_volume_series(a, s, max_half_length):
    """
    Sum of stratum volumes over 2 <= |c| <= 2M + 1, with its truncation bound.

    Single-segment strata are left out, as in the defining series of the
    continuous binomial coefficient, so the limit is {a+s brace a} including at
    a = 0 and s = 0.

    Returns:
        tuple: (partial sum, bound on the omitted strata)
    """
    if max_half_length < 1:
        raise DomainError(f"max_half_length must be >= 1, got {max_half_length}")
    volumes = [
        gamma_config_volume(config, a, s)
        for config in configs_up_to(2 * max_half_length + 1, min_length=2)
    ]
    tail = series_tail_bound(a * s, max_half_length, scale=2.0 + a + s)
    return math.fsum(volumes), tail


def vol_gamma_plane(t, a):
    """
    Volume of the space of paths from p to q in the coordinate plane.

    Equals {t brace a} with a = x1 - x0; the boundary a in {0, t} follows the
    defining series and gives 2 + t.

    Raises:
        DomainError: Unless 0 <= a <= t
    """
    return cbinom_bc(t, a)


def vol_gamma_single_field(k, t):
    """Path-space volume for k copies of one vector field: k e^((k-1) t)."""
    if k < 1 or t < 0:
        raise DomainError(f"need k >= 1 and t >= 0, got k={k}, t={t}")
    return k * math.exp((k - 1) * t)


def lambda_feasible_interval(t0, lam):
    """
    Times t at which phi(p, t0) is influenced from p in (M; X, lambda X).

    Returns:
        tuple: (lo, hi) with hi possibly math.inf

    Raises:
        DomainError: If lam == 1
        InfeasibleTimeError: If no time works
    """
    if lam == 1:
        raise DomainError("lambda must differ from 1")
    lo, hi = 0.0, math.inf
    if lam < 1:
        # t0 - lam t >= 0 and t >= t0
        lo = max(lo, t0)
        if lam > 0:
            hi = min(hi, t0 / lam)
        elif lam < 0:
            lo = max(lo, t0 / lam)
        elif t0 < 0:
            hi = -math.inf
    else:
        # t0 - lam t <= 0 and t <= t0
        lo = max(lo, t0 / lam)
        hi = min(hi, t0)
    if lo > hi:
        raise InfeasibleTimeError(f"no time t influences the point for t0={t0}, lambda={lam}")
    return lo, hi


def vol_gamma_lambda(t, t0, lam):
    """
    Path-space volume for (M; X, lambda X) between p and phi(p, t0).

    Returns:
        float: {t brace (t - t0) / (1 - lambda)}

    Raises:
        DomainError: If lam == 1
        InfeasibleTimeError: If t lies outside lambda_feasible_interval(t0, lam)
    """
    lo, hi = lambda_feasible_interval(t0, lam)
    slack = 1e-12 * max(1.0, abs(t))
    if not (lo - slack <= t <= hi + slack):
        raise InfeasibleTimeError(
            f"point not influenced at time t={t} (t0={t0}, lambda={lam}); "
            f"feasible times are [{lo}, {hi}]"
        )
    a = min(max((t - t0) / (1.0 - lam), 0.0), t)
    return cbinom(t, a)
