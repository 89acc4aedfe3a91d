"""Metrics g = h'(x)^2 dx^2 + f'(x)^2 dy^2, their presets and flow-line lengths."""

import math
from dataclasses import dataclass

import numpy as np

from pathlike.errors import DomainError, InvalidProfileError

PRESET_NAMES = ("euclidean", "linear", "polar", "sphere", "hyperbolic")

_FD_STEP = np.finfo(float).eps ** (1.0 / 3.0)
# Second differences balance rounding against truncation at eps^(1/4)
_FD2_STEP = np.finfo(float).eps ** 0.25
_FD_CHECK_TOL = 1e-6


@dataclass(frozen=True)
class ChartPoint:
    """A point (x, y) in the chart's native coordinates."""

    x: float
    y: float


def _step(x, base):
    return base * np.maximum(1.0, np.abs(x))


def _central_difference(fn):
    def derivative(x):
        eps = _step(x, _FD_STEP)
        return (fn(x + eps) - fn(x - eps)) / (2.0 * eps)

    return derivative


def _second_difference(fn):
    def derivative(x):
        eps = _step(x, _FD2_STEP)
        return (fn(x + eps) - 2.0 * fn(x) + fn(x - eps)) / (eps * eps)

    return derivative


def _constant(value):
    return lambda x: value + 0.0 * np.asarray(x, dtype=float)


@dataclass(frozen=True)
class MetricProfile:
    """
    The pair (h, f) and derivatives defining g = h'(x)^2 dx^2 + f'(x)^2 dy^2.

    Direction 1 flows along x (the profile variable) and direction 2 along y.
    Callables must accept numpy arrays. ``swap_axes`` marks charts whose native
    point order is (y, x), such as the half-plane where the profile variable is
    the height.

    Attributes:
        name (str): Identifier
        h, dh, d2h (callable): h and its first two derivatives
        f, df, d2f, d3f (callable): f and its first three derivatives
        domain_x (tuple): Open interval (lo, hi) of valid x
        quadratic_f (bool): True when f is a polynomial of degree <= 2
        swap_axes (bool): True when chart points are given as (y, x)
    """

    name: str
    h: object
    dh: object
    d2h: object
    f: object
    df: object
    d2f: object
    d3f: object
    domain_x: tuple
    quadratic_f: bool = False
    swap_axes: bool = False

    def __post_init__(self):
        lo, hi = self.domain_x
        if not lo < hi:
            raise InvalidProfileError(f"{self.name}: empty domain {self.domain_x}")
        for x in self.sample_points():
            if not (self.dh(x) > 0 and self.df(x) > 0):
                raise InvalidProfileError(
                    f"{self.name}: h and f must be strictly increasing, "
                    f"dh={float(self.dh(x))}, df={float(self.df(x))} at x={x}"
                )
            for label, fn, dfn in (("dh", self.h, self.dh), ("df", self.f, self.df)):
                expected = float(_central_difference(fn)(x))
                actual = float(dfn(x))
                if abs(actual - expected) > _FD_CHECK_TOL * max(1.0, abs(actual)):
                    raise InvalidProfileError(
                        f"{self.name}: {label}({x}) = {actual} disagrees with the "
                        f"finite difference {expected}"
                    )

    @classmethod
    def custom(
        cls,
        name,
        h,
        dh,
        f,
        df,
        domain_x,
        d2h=None,
        d2f=None,
        d3f=None,
        quadratic_f=False,
        swap_axes=False,
    ):
        """
        Build a user-supplied profile.

        Missing d2h, d2f and d3f fall back to central differences of dh and df.

        Raises:
            InvalidProfileError: If the construction-time checks fail
        """
        return cls(
            name=name,
            h=h,
            dh=dh,
            d2h=d2h or _central_difference(dh),
            f=f,
            df=df,
            d2f=d2f or _central_difference(df),
            d3f=d3f or _second_difference(df),
            domain_x=tuple(domain_x),
            quadratic_f=quadratic_f,
            swap_axes=swap_axes,
        )

    def sample_points(self, count=9):
        """Representative interior points used by the construction checks."""
        lo, hi = self.domain_x
        if math.isfinite(lo) and math.isfinite(hi):
            return list(lo + (hi - lo) * np.linspace(0.05, 0.95, count))
        offsets = np.geomspace(0.1, 10.0, count)
        if math.isfinite(lo):
            return list(lo + offsets)
        if math.isfinite(hi):
            return list(hi - offsets)
        return list(np.linspace(-5.0, 5.0, count))

    def contains(self, x):
        lo, hi = self.domain_x
        x = np.asarray(x, dtype=float)
        return bool(np.all((x > lo) & (x < hi)))

    def to_profile(self, point):
        """Chart point -> (x, y) in profile coordinates."""
        if self.swap_axes:
            return float(point.y), float(point.x)
        return float(point.x), float(point.y)

    def from_profile(self, x, y):
        """(x, y) in profile coordinates -> chart point."""
        if self.swap_axes:
            return ChartPoint(y, x)
        return ChartPoint(x, y)


def _euclidean():
    return MetricProfile(
        name="euclidean",
        h=lambda x: np.asarray(x, dtype=float) + 0.0,
        dh=_constant(1.0),
        d2h=_constant(0.0),
        f=lambda x: np.asarray(x, dtype=float) + 0.0,
        df=_constant(1.0),
        d2f=_constant(0.0),
        d3f=_constant(0.0),
        domain_x=(-math.inf, math.inf),
        quadratic_f=True,
    )


def _linear(vectors):
    if vectors is None or len(vectors) != 4:
        raise InvalidProfileError("linear preset needs four numbers a,b,c,d")
    a, b, c, d = (float(v) for v in vectors)
    first = math.hypot(a, b)
    second = math.hypot(c, d)
    if abs(a * d - b * c) <= 1e-12 * max(first * second, 1e-300):
        raise InvalidProfileError(
            f"linear preset needs independent vectors, got ({a}, {b}) and ({c}, {d})"
        )
    return MetricProfile(
        name="linear",
        h=lambda u: first * np.asarray(u, dtype=float),
        dh=_constant(first),
        d2h=_constant(0.0),
        f=lambda u: second * np.asarray(u, dtype=float),
        df=_constant(second),
        d2f=_constant(0.0),
        d3f=_constant(0.0),
        domain_x=(-math.inf, math.inf),
        quadratic_f=True,
    )


def _polar():
    return MetricProfile(
        name="polar",
        h=lambda r: np.asarray(r, dtype=float) + 0.0,
        dh=_constant(1.0),
        d2h=_constant(0.0),
        f=lambda r: 0.5 * np.asarray(r, dtype=float) ** 2,
        df=lambda r: np.asarray(r, dtype=float) + 0.0,
        d2f=_constant(1.0),
        d3f=_constant(0.0),
        domain_x=(0.0, math.inf),
        quadratic_f=True,
    )


def _sphere():
    return MetricProfile(
        name="sphere",
        h=lambda th: np.asarray(th, dtype=float) + 0.0,
        dh=_constant(1.0),
        d2h=_constant(0.0),
        f=lambda th: -np.cos(th),
        df=np.sin,
        d2f=np.cos,
        d3f=lambda th: -np.sin(th),
        domain_x=(0.0, math.pi),
    )


def _hyperbolic():
    return MetricProfile(
        name="hyperbolic",
        h=np.log,
        dh=lambda y: 1.0 / np.asarray(y, dtype=float),
        d2h=lambda y: -1.0 / np.asarray(y, dtype=float) ** 2,
        f=np.log,
        df=lambda y: 1.0 / np.asarray(y, dtype=float),
        d2f=lambda y: -1.0 / np.asarray(y, dtype=float) ** 2,
        d3f=lambda y: 2.0 / np.asarray(y, dtype=float) ** 3,
        domain_x=(0.0, math.inf),
        swap_axes=True,
    )


def preset(name, vectors=None):
    """
    Build one of the constant-curvature surface profiles.

    Args:
        name (str): One of "euclidean", "linear", "polar", "sphere", "hyperbolic"
        vectors (tuple, optional): (a, b, c, d) for "linear"; the profile is
            h = ||(a,b)|| u, f = ||(c,d)|| u

    Returns:
        MetricProfile: The preset with closed-form derivatives

    Raises:
        InvalidProfileError: On an unknown name or dependent linear vectors
    """
    if name == "linear":
        return _linear(vectors)
    builders = {
        "euclidean": _euclidean,
        "polar": _polar,
        "sphere": _sphere,
        "hyperbolic": _hyperbolic,
    }
    if name not in builders:
        raise InvalidProfileError(
            f"unknown surface {name!r}; expected one of {', '.join(PRESET_NAMES)}"
        )
    return builders[name]()


def _require_in_domain(profile, **coords):
    for label, x in coords.items():
        if not profile.contains(x):
            raise DomainError(
                f"{label}={x} is outside the {profile.name} domain {profile.domain_x}"
            )


def flow_lengths(profile, x0, x1, y0, y1):
    """
    Lengths of the flow lines from (x0, y0) along x to x1 and along y to y1.

    Returns:
        tuple: (h(x1) - h(x0), f'(x0) (y1 - y0))

    Raises:
        DomainError: If x0 or x1 is outside the domain, x1 < x0 or y1 < y0
    """
    _require_in_domain(profile, x0=x0, x1=x1)
    if x1 < x0 or y1 < y0:
        raise DomainError(f"need x1 >= x0 and y1 >= y0, got ({x0}, {x1}, {y0}, {y1})")
    return (
        float(profile.h(x1) - profile.h(x0)),
        float(profile.df(x0) * (y1 - y0)),
    )


def gauss_curvature(profile, x):
    """
    Gaussian curvature K = -(1 / (h' f')) (f'' / h')'(x).

    Raises:
        DomainError: If x is outside the domain
        InvalidProfileError: If h'(x) <= 0 or f'(x) <= 0
    """
    _require_in_domain(profile, x=x)
    dh = float(profile.dh(x))
    df = float(profile.df(x))
    if dh <= 0 or df <= 0:
        raise InvalidProfileError(
            f"{profile.name}: need h' > 0 and f' > 0, got h'={dh}, f'={df} at x={x}"
        )
    d2h = float(profile.d2h(x))
    d2f = float(profile.d2f(x))
    d3f = float(profile.d3f(x))
    return -((d3f * dh - d2f * d2h) / (dh * dh)) / (dh * df)


def geodesic_residual(profile, x, dx, ddx, dy, ddy):
    """
    Left-hand sides of the geodesic equations at the jet (x, x', x'', y', y'').

        x'' + (h''/h') x'^2 - (f'' f' / h'^2) y'^2
        y'' + 2 (f''/f') x' y'

    Returns:
        tuple: Both residuals; (0, 0) exactly when the jet is geodesic
    """
    _require_in_domain(profile, x=x)
    dh = float(profile.dh(x))
    d2h = float(profile.d2h(x))
    df = float(profile.df(x))
    d2f = float(profile.d2f(x))
    first = ddx + (d2h / dh) * dx * dx - (d2f * df / (dh * dh)) * dy * dy
    second = ddy + 2.0 * (d2f / df) * dx * dy
    return first, second


def path_length(profile, config, s, p):
    """
    Length of the concatenated flow lines with directions ``config`` and durations ``s``.

    A direction-1 segment starting at x with duration tau adds h(x + tau) - h(x);
    a direction-2 segment at abscissa x adds f'(x) tau. Adjacent repeats are
    allowed here, so split segments can be compared with unsplit ones.

    Args:
        profile (MetricProfile): The metric
        config (Configuration or sequence): Direction labels in {1, 2}
        s (array-like): Durations, shape (n,) or (samples, n)
        p (ChartPoint): Starting point in native chart coordinates

    Returns:
        float or numpy.ndarray: One length per duration vector

    Raises:
        DomainError: On a size mismatch, a negative duration, or when a segment
            leaves the domain
    """
    word = tuple(getattr(config, "word", config))
    durations = np.asarray(s, dtype=float)
    if durations.shape[-1:] != (len(word),):
        raise DomainError(
            f"need one duration per segment: {len(word)} segments, shape {durations.shape}"
        )
    if np.any(durations < 0):
        raise DomainError("durations must be >= 0")

    x0, _ = profile.to_profile(p)
    _require_in_domain(profile, x0=x0)
    x = np.full(durations.shape[:-1], x0)
    total = np.zeros(durations.shape[:-1])
    for index, label in enumerate(word):
        tau = durations[..., index]
        if label == 1:
            end = x + tau
            if not profile.contains(end):
                raise DomainError(f"segment {index} leaves the {profile.name} domain")
            total += profile.h(end) - profile.h(x)
            x = end
        elif label == 2:
            total += profile.df(x) * tau
        else:
            raise DomainError(f"direction labels must be 1 or 2, got {label}")

    if total.ndim == 0:
        return float(total)
    return total
