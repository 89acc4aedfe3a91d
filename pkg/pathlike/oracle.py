"""
Brute-force oracles for the closed forms.

Monte-Carlo estimates draw from counter-based Philox streams keyed by
(seed, oracle, configuration, chunk), and chunk results are combined in a fixed
order, so estimates are bit-identical for any worker count.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from pathlike.errors import DomainError, QuadratureNotConvergedError
from pathlike.geometry import path_length
from pathlike.length_integral import IntegralResult, length_tail_bound
from pathlike.path_space import (
    configs_up_to,
    gamma_config_volume,
    power_over_factorial,
    simplex_volume,
    stratum_split,
)

logger = logging.getLogger(__name__)

# Points evaluated per vectorised block in the nested quadrature
_QUAD_BLOCK = 2_000_000
# Largest tensor grid the quadrature ladder may reach
_QUAD_MAX_POINTS = 200_000_000
# Nodes added per dimension at each rung of the ladder
ORDER_STEP = 4
MAX_LEMMA_DEPTH = 4
# Relative rounding allowance in every Monte-Carlo error estimate
ROUNDING_FLOOR = 1e-12

# First word of each stream key, one per oracle
_STRATUM_STREAM = 1
_MONOMIAL_STREAM = 2
_PERMUTATION_STREAM = 3


@dataclass(frozen=True)
class McConfig:
    """
    Monte-Carlo sampling parameters.

    Attributes:
        samples (int): Samples per estimate
        seed (int): Non-negative 64-bit seed
        chunk (int): Samples per RNG stream
        workers (int): Threads used to evaluate chunks (does not change results)
    """

    samples: int = 20000
    seed: int = 0xC0FFEE
    chunk: int = 5000
    workers: int = 1

    def __post_init__(self):
        if self.samples < 1 or self.chunk < 1 or self.workers < 1:
            raise DomainError(
                f"samples, chunk and workers must be >= 1, got "
                f"{self.samples}, {self.chunk}, {self.workers}"
            )
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def chunk_sizes(self):
        full, rest = divmod(self.samples, self.chunk)
        return [self.chunk] * full + ([rest] if rest else [])


def stream(seed, *key):
    """Independent Philox generator for the counter key ``key``."""
    sequence = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(sequence))


def sample_simplex(n, t, rng, size=None):
    """
    Uniform sample of 0 <= l_1 <= ... <= l_n <= t.

    Sorted independent uniforms are uniform with respect to dl_1 ... dl_n.

    Args:
        n (int): Simplex dimension
        t (float): Side length, >= 0
        rng (numpy.random.Generator): Source of randomness
        size (int, optional): Number of samples; rows of the result

    Returns:
        numpy.ndarray: Shape (n,) or (size, n)
    """
    if n < 0 or t < 0:
        raise DomainError(f"need n >= 0 and t >= 0, got n={n}, t={t}")
    shape = (n,) if size is None else (size, n)
    return np.sort(rng.uniform(0.0, t, size=shape), axis=-1)


def simplex_durations(points, t):
    """Sorted points in [0, t] -> the n + 1 gaps s_0, ..., s_n."""
    points = np.asarray(points, dtype=float)
    zeros = np.zeros(points.shape[:-1] + (1,))
    return np.diff(np.concatenate([zeros, points, zeros + t], axis=-1), axis=-1)


@dataclass
class _Moments:
    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @classmethod
    def of(cls, values):
        values = np.asarray(values, dtype=float)
        mean = float(np.mean(values))
        return cls(values.size, mean, float(np.sum((values - mean) ** 2)))

    def merge(self, other):
        # Chan et al. pairwise update
        if other.count == 0:
            return self
        total = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / total
        m2 = self.m2 + other.m2 + delta * delta * self.count * other.count / total
        return _Moments(total, mean, m2)

    def std_error(self):
        if self.count < 2:
            return 0.0
        return math.sqrt(self.m2 / (self.count - 1) / self.count)


def _map_chunks(function, mc):
    indices = range(len(mc.chunk_sizes()))
    if mc.workers > 1:
        with ThreadPoolExecutor(max_workers=mc.workers) as pool:
            return list(pool.map(function, indices))
    return [function(i) for i in indices]


def _reduce(parts):
    moments = _Moments()
    for part in parts:
        moments = moments.merge(part)
    return moments


def _mc_result(value, std_error, configs_used, tail=0.0):
    # 3 sigma, the omitted strata and the rounding of the value itself
    estimate = 3.0 * std_error + tail + ROUNDING_FLOOR * abs(value)
    return IntegralResult(
        value, estimate, configs_used, "monte_carlo", std_error=std_error, tail_bound=tail
    )


def _config_key(config):
    # Length and first label identify a two-direction configuration
    return _STRATUM_STREAM, len(config), config.first


def _stratum_durations(config, a, s, rng, size):
    (lead_budget, lead_count), (other_budget, other_count) = stratum_split(config, a, s)
    durations = np.empty((size, len(config)))
    lead = simplex_durations(sample_simplex(lead_count - 1, lead_budget, rng, size), lead_budget)
    durations[:, 0::2] = lead
    if other_count:
        other = simplex_durations(
            sample_simplex(other_count - 1, other_budget, rng, size), other_budget
        )
        durations[:, 1::2] = other
    return durations


def mc_config_integral(profile, config, data, mc):
    """
    Monte-Carlo integral of the length over one stratum.

    The stratum is the product of two simplices: the leading direction's
    durations share its budget and the other direction's durations share the
    rest. Each factor is sampled uniformly; the mean length is scaled by the
    stratum volume.

    Args:
        profile (MetricProfile): The metric
        config (Configuration): Two-direction configuration
        data (LengthIntegralInput): Endpoints and time
        mc (McConfig): Sampling parameters

    Returns:
        IntegralResult: Estimate with its standard error; zero for empty strata
    """
    a, s = data.budgets()
    volume = gamma_config_volume(config, a, s)
    if volume == 0:
        return IntegralResult(0.0, 0.0, 1, "monte_carlo")

    sizes = mc.chunk_sizes()
    start = data.start
    key = _config_key(config)

    def run_chunk(index):
        rng = stream(mc.seed, *key, index)
        durations = _stratum_durations(config, a, s, rng, sizes[index])
        return _Moments.of(path_length(profile, config, durations, start))

    moments = _reduce(_map_chunks(run_chunk, mc))
    std_error = volume * moments.std_error()
    logger.debug("stratum %s: %d samples, mean %r", config.word, moments.count, moments.mean)
    return _mc_result(volume * moments.mean, std_error, 1)


def mc_total_integral(profile, data, max_half_length, mc):
    """
    Monte-Carlo integral of the length over every stratum with 2 <= |c| <= 2M + 1.

    Returns:
        IntegralResult: Sum of the stratum estimates; the error estimate is
            3 standard errors plus the analytic bound on the longer strata
    """
    if max_half_length < 1:
        raise DomainError(f"max_half_length must be >= 1, got {max_half_length}")
    configs = configs_up_to(2 * max_half_length + 1, min_length=2)
    parts = [mc_config_integral(profile, c, data, mc) for c in configs]
    value = math.fsum(p.value for p in parts)
    std_error = math.sqrt(math.fsum(p.std_error**2 for p in parts))
    tail = length_tail_bound(data, max_half_length)
    return _mc_result(value, std_error, len(configs), tail)


def mc_monomial_integral(index, t, mc):
    """
    Monte-Carlo integral of s^I / I! over Delta_n^t in the durations s_0, ..., s_n.

    Returns:
        IntegralResult: Estimate and standard error
    """
    exponents = np.asarray(index.exponents)
    n = exponents.size - 1
    norm = math.prod(math.factorial(int(i)) for i in exponents)
    volume = simplex_volume(n, t)
    sizes = mc.chunk_sizes()

    def run_chunk(chunk):
        rng = stream(mc.seed, _MONOMIAL_STREAM, n, chunk)
        durations = simplex_durations(sample_simplex(n, t, rng, sizes[chunk]), t)
        return _Moments.of(np.prod(durations**exponents, axis=-1) / norm)

    moments = _reduce(_map_chunks(run_chunk, mc))
    return _mc_result(volume * moments.mean, volume * moments.std_error(), 0)


def permutation_volume_check(n, m, s, t, sigma, mc, band=None):
    """
    Monte-Carlo volumes of Delta_m^s x Delta_{n-1-m}^{t-s} and its image under sigma.

    The product sits in Delta_n^t as the slice where the first m + 1 durations
    sum to s; its image is the slice where the durations at positions
    sigma(0), ..., sigma(m) sum to s. Both are estimated from the same uniform
    samples of Delta_n^t as (hits in a band of width ``band`` around the slice)
    * vol(Delta_n^t) / (samples * band).

    Args:
        n (int): Ambient simplex dimension
        m (int): 0 <= m < n
        s (float): 0 <= s <= t
        t (float): Total time
        sigma (sequence): Permutation of 0..n acting on durations
        mc (McConfig): Sampling parameters
        band (float, optional): Band width, defaults to t / 50

    Returns:
        tuple: (IntegralResult for the product, IntegralResult for its image)
    """
    if not (0 <= m < n and 0 <= s <= t and t > 0):
        raise DomainError(f"need 0 <= m < n and 0 <= s <= t, got n={n}, m={m}, s={s}, t={t}")
    sigma = np.asarray(sigma, dtype=int)
    if sorted(sigma.tolist()) != list(range(n + 1)):
        raise DomainError(f"sigma must permute 0..{n}, got {sigma.tolist()}")
    band = t / 50.0 if band is None else band
    scale = simplex_volume(n, t) / band
    sizes = mc.chunk_sizes()

    def run_chunk(chunk):
        rng = stream(mc.seed, _PERMUTATION_STREAM, n, m, chunk)
        durations = simplex_durations(sample_simplex(n, t, rng, sizes[chunk]), t)
        plain = np.sum(durations[:, : m + 1], axis=-1)
        permuted = np.sum(durations[:, sigma][:, : m + 1], axis=-1)
        return (
            _Moments.of(scale * (np.abs(plain - s) <= band / 2)),
            _Moments.of(scale * (np.abs(permuted - s) <= band / 2)),
        )

    parts = _map_chunks(run_chunk, mc)
    return tuple(
        _mc_result(moments.mean, moments.std_error(), 0)
        for moments in (_reduce(p[0] for p in parts), _reduce(p[1] for p in parts))
    )


def product_volume(n, m, s, t):
    """vol(Delta_m^s) * vol(Delta_{n-1-m}^{t-s}), the value both regions should share."""
    return simplex_volume(m, s) * simplex_volume(n - 1 - m, t - s)


def _gauss_legendre_unit(order):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return 0.5 * (nodes + 1.0), 0.5 * weights


def _refine(evaluate, order, dimension, tol, max_points, label):
    """
    Raise the rule order by ORDER_STEP until two successive rules agree.

    Returns:
        tuple: (value at the higher order, difference to the previous order)

    Raises:
        DomainError: If the starting grid is already above max_points
        QuadratureNotConvergedError: If the grid outgrows max_points first
    """
    if order < 1 or order**dimension > max_points:
        raise DomainError(
            f"{label}: order {order} needs {order}^{dimension} points, above {max_points}"
        )
    previous = evaluate(order)
    error = math.inf
    while (order + ORDER_STEP) ** dimension <= max_points:
        higher = order + ORDER_STEP
        current = evaluate(higher)
        error = abs(current - previous)
        logger.debug("%s: orders %d/%d differ by %.3e", label, order, higher, error)
        if error <= tol * max(1.0, abs(current)):
            return current, error
        order, previous = higher, current
    raise QuadratureNotConvergedError(
        f"{label} missed tolerance {tol} up to order {order}: error estimate {error:.3e}",
        previous,
        error,
    )


def _lemma_values(m, X, Y, params, rule):
    lam, k1, k2, r, K, df = params
    if m == 0:
        return lam * power_over_factorial(X, k1) * power_over_factorial(Y, k2)

    nodes, weights = rule
    order = nodes.size
    if X.size * order * order > _QUAD_BLOCK and X.size > 1:
        # Evaluate in blocks so the tensor grid below stays bounded in memory
        step = max(1, _QUAD_BLOCK // (order * order))
        return np.concatenate(
            [
                _lemma_values(m, X[i : i + step], Y[i : i + step], params, rule)
                for i in range(0, X.size, step)
            ]
        )

    # int_0^X int_0^Y I_{m-1}(x, y) dy dx on the scaled tensor grid
    xs = X[:, None, None] * nodes[None, :, None]
    ys = Y[:, None, None] * nodes[None, None, :]
    xs, ys = np.broadcast_arrays(xs, ys)
    inner = _lemma_values(m - 1, xs.ravel(), ys.ravel(), params, rule).reshape(xs.shape)
    double = X * Y * np.einsum("i,j,kij->k", weights, weights, inner)

    # int_0^X x^(m-1) / (m-1)! f'(K + x) dx
    line_x = X[:, None] * nodes[None, :]
    line = X * np.sum(weights * power_over_factorial(line_x, m - 1) * df(K + line_x), axis=-1)
    return double + Y ** (m + r) / math.gamma(m + r + 1) * line


def quad_lemma_recursive(
    m, a, b, lam, k1, k2, r, K, df, tol=1e-8, order=12, max_points=_QUAD_MAX_POINTS
):
    """
    Evaluate the recurrence I_m(a, b) literally by nested tensor Gauss-Legendre rules.

    Each level integrates I_{m-1} over [0, x] x [0, y] and adds the line
    integral of x^(m-1)/(m-1)! f'(K + x). Rules of ``order``, ``order + 4``, ...
    nodes per dimension are evaluated until two successive ones agree within
    tol, or until the 2m-dimensional grid would exceed ``max_points``.

    Args:
        m (int): Depth, 0 <= m <= 4
        a, b (float): Positive rectangle sides
        lam (float): Weight of the base polynomial
        k1, k2 (int): Base polynomial degrees
        r (float): Shift in b^(m+r) / Gamma(m+r+1)
        K (float): Offset of f'
        df (callable): f', vectorised over numpy arrays
        tol (float): Relative tolerance between successive rules
        order (int): Nodes per dimension of the first rule
        max_points (int): Largest tensor grid allowed

    Returns:
        float: The estimate of the highest rule evaluated

    Raises:
        DomainError: If m is outside 0..4, a, b are not positive, or the first
            rule is already above max_points
        QuadratureNotConvergedError: If no two successive rules agree
    """
    if not 0 <= m <= MAX_LEMMA_DEPTH:
        raise DomainError(f"m must lie in 0..{MAX_LEMMA_DEPTH}, got {m}")
    if not (a > 0 and b > 0):
        raise DomainError(f"need a > 0 and b > 0, got a={a}, b={b}")
    params = (lam, k1, k2, r, K, df)
    X = np.array([float(a)])
    Y = np.array([float(b)])

    def evaluate(nodes):
        return float(_lemma_values(m, X, Y, params, _gauss_legendre_unit(nodes))[0])

    value, _ = _refine(evaluate, order, 2 * m, tol, max_points, f"I_{m}({a}, {b})")
    return value


def _simplex_rule(count, budget, rule):
    """
    Tensor Gauss-Legendre rule on the durations of ``count`` segments summing to ``budget``.

    The unit cube is collapsed onto 0 <= l_1 <= ... <= l_d <= budget by
    l_d = budget u_d and l_k = l_(k+1) u_k, whose Jacobian is the product of
    the l_(k+1).

    Returns:
        tuple: (durations of shape (points, count), weights of shape (points,))
    """
    if count == 0:
        return np.zeros((1, 0)), np.ones(1)
    dim = count - 1
    if dim == 0:
        return np.full((1, 1), float(budget)), np.ones(1)
    nodes, weights = rule
    grid = np.stack(np.meshgrid(*([nodes] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
    cell = np.stack(np.meshgrid(*([weights] * dim), indexing="ij"), axis=-1).reshape(-1, dim)

    points = np.empty_like(grid)
    upper = np.full(grid.shape[0], float(budget))
    jacobian = np.ones(grid.shape[0])
    for k in range(dim - 1, -1, -1):
        jacobian *= upper
        upper = upper * grid[:, k]
        points[:, k] = upper
    return simplex_durations(points, budget), np.prod(cell, axis=-1) * jacobian


def _stratum_quadrature(profile, config, a, s, start, order):
    rule = _gauss_legendre_unit(order)
    (lead_budget, lead_count), (other_budget, other_count) = stratum_split(config, a, s)
    lead, lead_weights = _simplex_rule(lead_count, lead_budget, rule)
    other, other_weights = _simplex_rule(other_count, other_budget, rule)

    # Blocks of leading points against every point of the other factor
    step = max(1, _QUAD_BLOCK // (10 * other_weights.size))
    sums = []
    for i in range(0, lead_weights.size, step):
        block = lead[i : i + step]
        durations = np.empty((block.shape[0], other_weights.size, len(config)))
        durations[:, :, 0::2] = block[:, None, :]
        durations[:, :, 1::2] = other[None, :, :]
        lengths = path_length(profile, config, durations.reshape(-1, len(config)), start)
        weights = np.outer(lead_weights[i : i + step], other_weights).ravel()
        sums.append(float(np.dot(weights, lengths)))
    return math.fsum(sums)


def quad_config_integral(
    profile, config, data, tol=1e-8, order=4, max_points=_QUAD_MAX_POINTS
):
    """
    Integral of the length over one stratum by nested Gauss-Legendre rules.

    Each simplex factor of the stratum is mapped from a unit cube, and the
    rule order is raised as in quad_lemma_recursive until two successive
    rules agree within tol.

    Args:
        profile (MetricProfile): The metric
        config (Configuration): Two-direction configuration with |c| <= 9
        data (LengthIntegralInput): Endpoints and time
        tol (float): Relative tolerance between successive rules
        order (int): Nodes per dimension of the first rule
        max_points (int): Largest tensor grid allowed

    Returns:
        IntegralResult: Estimate with the last rule difference as error estimate

    Raises:
        DomainError: If config.half_length > 4 or the first rule is too large
        QuadratureNotConvergedError: If no two successive rules agree
    """
    if config.half_length > MAX_LEMMA_DEPTH:
        raise DomainError(
            f"quadrature covers strata with m <= {MAX_LEMMA_DEPTH}, got {config.word}"
        )
    a, s = data.budgets()
    if gamma_config_volume(config, a, s) == 0:
        return IntegralResult(0.0, 0.0, 1, "quadrature")

    (_, lead_count), (_, other_count) = stratum_split(config, a, s)
    dimension = lead_count - 1 + max(other_count - 1, 0)
    start = data.start

    def evaluate(nodes):
        return _stratum_quadrature(profile, config, a, s, start, nodes)

    value, error = _refine(evaluate, order, dimension, tol, max_points, f"stratum {config.word}")
    return IntegralResult(value, error, 1, "quadrature")
