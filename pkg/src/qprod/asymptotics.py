"""Bessel closed forms, constant-term approximations, truncated
Kloosterman-Bessel sums, and the growth-analysis harness.

The growth model under test: for a normalized form whose highest zero in a
fundamental domain sits at height y_r, the product exponents satisfy
|c(m)| ~ e^(2*pi*m*y_r) / m^(3/2) along their support, two-sided.  So

    u(m) = ln|c(m)| + (3/2) ln m  ~  2*pi*y_r * m + O(1)

and an ordinary least-squares fit of u against m recovers y_r from the
slope.  Exponents are exact big rationals; their logarithms are computed
from the integer parts directly (CPython's ``math.log`` takes arbitrary
precision integers), so nothing overflows even when c(m) has hundreds of
digits.  Zero exponents are skipped, never clamped; summation order in the
fits is fixed, so output is deterministic.
"""

import cmath
import math
import statistics
import sys
import warnings
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .arith import kloosterman
from .errors import DomainError, InsufficientDataError
from .prodexp import ExponentSeries

__all__ = [
    "BoundReport",
    "EmptySumWarning",
    "GrowthFit",
    "JApproximation",
    "b_coeff_truncated",
    "bessel_I1",
    "bessel_I_half",
    "bessel_K_half",
    "check_bound",
    "growth_fit",
    "j_approx",
    "ln_abs",
]

TWO_PI = 2.0 * math.pi


class EmptySumWarning(UserWarning):
    """A truncated sum whose truncation bound excludes every term."""


# -- modified Bessel functions -------------------------------------------------


def bessel_I_half(x: float) -> float:
    """I_{1/2}(x) = sqrt(2/(pi x)) * sinh(x)."""
    if x <= 0:
        raise DomainError("x must be positive")
    return math.sqrt(2.0 / (math.pi * x)) * math.sinh(x)


def bessel_K_half(x: float) -> float:
    """K_{1/2}(x) = sqrt(pi/(2x)) * e^(-x)  (standard convention)."""
    if x <= 0:
        raise DomainError("x must be positive")
    return math.sqrt(math.pi / (2.0 * x)) * math.exp(-x)


_I1_CUTOFF = 20.0


def _i1_series(x: float) -> float:
    # (x/2) sum_k (x^2/4)^k / (k! (k+1)!), summed to machine-precision tail
    half = x / 2.0
    hsq = half * half
    term = half
    total = term
    k = 0
    while True:
        k += 1
        term *= hsq / (k * (k + 1))
        total += term
        if term < total * 1e-18:
            return total


def _i1_asymptotic(x: float) -> float:
    # e^x/sqrt(2 pi x) * sum_k (-1)^k a_k / x^k with
    # a_k = prod_{j<=k} (4 - (2j-1)^2) / (8j); eight correction terms keep
    # the two branches consistent to ~1e-9 at the x = 20 crossover.
    s = 1.0
    a = 1.0
    sign = 1.0
    for k in range(1, 9):
        a *= (4 - (2 * k - 1) ** 2) / (8.0 * k)
        sign = -sign
        s += sign * a / x**k
    return math.exp(x) / math.sqrt(TWO_PI * x) * s


def bessel_I1(x: float) -> float:
    """Modified Bessel I_1: ascending series for x <= 20, large-x
    asymptotics with correction terms beyond."""
    if x <= 0:
        raise DomainError("x must be positive")
    return _i1_series(x) if x <= _I1_CUTOFF else _i1_asymptotic(x)


# -- constant-term approximation -------------------------------------------------


@dataclass(frozen=True)
class JApproximation:
    """Value of the closed-form constant-term approximation.

    ``value`` is the double-precision complex result, or None when its
    magnitude would overflow a double; ``log_magnitude`` and ``phase``
    are always valid (log_magnitude is -inf for an exact zero).
    """

    value: complex | None
    log_magnitude: float
    phase: float

    @property
    def overflowed(self) -> bool:
        return self.value is None


_SAFE_LOG = math.log(sys.float_info.max) - 4.0


def j_approx(level: int, index: int, x: float, y: float, a_m1: float = 0.0) -> JApproximation:
    """Closed-form approximation of the index-m constant term:

        (1/(pi sqrt(m))) * (e^(2 pi i m x) sinh(2 pi m y) + a_m1 e^(-2 pi m y))

    For y > 0 this grows like e^(2 pi m y)/sqrt(m); at y = 0 the first term
    vanishes and the magnitude decays like |a_m1|/sqrt(m).  ``level`` does
    not enter the closed form directly (it only determines the caller's
    a_m1 coefficient, which has no computable definition here and defaults
    to 0).  Large arguments are evaluated in log space via mpmath.
    """
    if index < 1:
        raise DomainError("index must be a positive integer")
    if y < 0:
        raise DomainError("y must be non-negative")
    m = index
    arg = TWO_PI * m * y
    norm = math.pi * math.sqrt(m)
    if arg <= _SAFE_LOG:
        v = (cmath.exp(2j * math.pi * m * x) * math.sinh(arg) + a_m1 * math.exp(-arg)) / norm
        mag = abs(v)
        if mag == 0.0:
            return JApproximation(value=v, log_magnitude=-math.inf, phase=0.0)
        return JApproximation(value=v, log_magnitude=math.log(mag), phase=cmath.phase(v))
    with mpmath.workprec(80):
        phase_factor = mpmath.expjpi(mpmath.mpf(2) * m * x)
        v = (phase_factor * mpmath.sinh(arg) + a_m1 * mpmath.exp(-arg)) / norm
        return JApproximation(
            value=None,
            log_magnitude=float(mpmath.log(abs(v))),
            phase=float(mpmath.arg(v)),
        )


def b_coeff_truncated(level: int, index: int, c_max: int) -> float:
    """Truncated coefficient sum

        2 pi sqrt(m) * sum_{c = N, 2N, ..., <= c_max} K(-m, 1, c)/c * I_1(4 pi sqrt(m)/c)

    using the exact real Kloosterman values.  Terms decay fast in c, so the
    truncation converges quickly; a c_max below the first modulus yields an
    empty sum (0.0) with an :class:`EmptySumWarning`.
    """
    if level < 1:
        raise DomainError("level must be a positive integer")
    if index < 1:
        raise DomainError("index must be a positive integer")
    if c_max < level:
        warnings.warn(
            f"c_max = {c_max} is below the first modulus {level}: empty sum",
            EmptySumWarning,
            stacklevel=2,
        )
        return 0.0
    root = math.sqrt(index)
    total = 0.0
    for c in range(level, c_max + 1, level):
        total += float(kloosterman(-index, 1, c).exact_real) / c * bessel_I1(
            4.0 * math.pi * root / c
        )
    return TWO_PI * root * total


# -- growth fits and bound checks -------------------------------------------------


def ln_abs(value: Fraction) -> float:
    """log|value| for an exact rational of any size (big-integer safe)."""
    if value == 0:
        raise DomainError("log of zero")
    return math.log(abs(value.numerator)) - math.log(value.denominator)


@dataclass(frozen=True)
class GrowthFit:
    """OLS recovery of the dominant zero height: y_hat = slope / (2 pi)."""

    y_hat: float
    slope: float
    intercept: float
    window: tuple[int, int]
    residual_rms: float
    points_used: int

    def as_dict(self) -> dict:
        return {
            "y_hat": self.y_hat,
            "slope": self.slope,
            "intercept": self.intercept,
            "window": list(self.window),
            "residual_rms": self.residual_rms,
            "points_used": self.points_used,
        }


@dataclass(frozen=True)
class BoundReport:
    """Result of an envelope check over a window of exponents.

    ``ratios`` holds (m, r(m)) with r as defined per kind; ``log_slope`` is
    the least-squares slope of ln r(m) against m.
    """

    kind: str
    ratios: tuple[tuple[int, float], ...]
    log_slope: float
    max_ratio: float
    verdict: bool
    window: tuple[int, int]

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "log_slope": self.log_slope,
            "max_ratio": self.max_ratio,
            "verdict": "pass" if self.verdict else "fail",
            "window": list(self.window),
        }


def _fit_line(xs: list[float], ys: list[float]) -> tuple[float, float]:
    try:
        result = statistics.linear_regression(xs, ys)
    except statistics.StatisticsError as exc:
        raise InsufficientDataError(str(exc)) from None
    return result.slope, result.intercept


def _window_points(exponents: ExponentSeries, window: tuple[int, int]):
    m0, m1 = window
    if not (1 <= m0 <= m1 <= exponents.order):
        raise DomainError(
            f"window [{m0}, {m1}] outside the computed orders [1, {exponents.order}]"
        )
    return [(m, exponents.c(m)) for m in range(m0, m1 + 1) if exponents.c(m) != 0]


def growth_fit(exponents: ExponentSeries, window: tuple[int, int]) -> GrowthFit:
    """Fit u(m) = ln|c(m)| + (3/2) ln m against m over the window's nonzero
    exponents; the slope estimates 2 pi y_r.  Needs >= 5 usable points."""
    points = _window_points(exponents, window)
    if len(points) < 5:
        raise InsufficientDataError(
            f"only {len(points)} nonzero exponents in window {list(window)}; need >= 5"
        )
    xs = [float(m) for m, _ in points]
    ys = [ln_abs(cm) + 1.5 * math.log(m) for m, cm in points]
    slope, intercept = _fit_line(xs, ys)
    sq = math.fsum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys))
    return GrowthFit(
        y_hat=slope / TWO_PI,
        slope=slope,
        intercept=intercept,
        window=(window[0], window[1]),
        residual_rms=math.sqrt(sq / len(xs)),
        points_used=len(xs),
    )


_BOUND_KINDS = ("upper", "omega", "kohnen")


def check_bound(
    exponents: ExponentSeries,
    kind: str,
    y_r: float | None = None,
    window: tuple[int, int] | None = None,
    slope_tol: float = 0.05,
) -> BoundReport:
    """Slope-based envelope check over nonzero exponents in the window.

    - ``upper``:  r(m) = |c(m)| m^(3/2) e^(-2 pi m y_r); pass iff the fitted
      slope of ln r is <= +slope_tol (no growth beyond the envelope).
    - ``omega``:  same r; pass iff the slope is >= -slope_tol (no decay:
      the envelope is attained along the support).
    - ``kohnen``: r(m) = |c(m)| / (ln m * ln ln m), window start >= 16;
      pass iff the slope is <= +slope_tol; ``max_ratio`` reports the bound.
    """
    if kind not in _BOUND_KINDS:
        raise DomainError(f"kind must be one of {_BOUND_KINDS}")
    if window is None:
        raise DomainError("window is required")
    if kind in ("upper", "omega"):
        if y_r is None:
            raise DomainError(f"kind {kind!r} requires y_r")
    elif window[0] < 16:
        raise DomainError("kohnen ratios are defined for m >= 16 only")
    points = _window_points(exponents, window)
    if not points:
        raise InsufficientDataError(f"no nonzero exponents in window {list(window)}")
    xs = []
    log_ratios = []
    for m, cm in points:
        if kind == "kohnen":
            lr = ln_abs(cm) - math.log(math.log(m) * math.log(math.log(m)))
        else:
            lr = ln_abs(cm) + 1.5 * math.log(m) - TWO_PI * y_r * m
        xs.append(float(m))
        log_ratios.append(lr)
    slope, _ = _fit_line(xs, log_ratios)
    ratios = tuple(
        (m, math.exp(lr) if lr < _SAFE_LOG else math.inf)
        for (m, _), lr in zip(points, log_ratios)
    )
    if kind == "omega":
        verdict = slope >= -slope_tol
    else:
        verdict = slope <= slope_tol
    return BoundReport(
        kind=kind,
        ratios=ratios,
        log_slope=slope,
        max_ratio=max(r for _, r in ratios),
        verdict=verdict,
        window=(window[0], window[1]),
    )
