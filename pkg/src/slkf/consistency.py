"""Classical consistency checks (NEES, NIS, time-average NIS) and the special
functions they need: regularized incomplete gamma, χ² CDF and quantiles, and
the standard-normal CDF and its inverse.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .kalman import cholesky

EPS = 1e-15
MAX_ITER = 1000


def _mahalanobis(x, P) -> float:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    P = np.atleast_2d(np.asarray(P, dtype=float))
    L = cholesky(P)
    y = np.linalg.solve(L, x)
    return float(y @ y)


def nees(x_err, P) -> float:
    return _mahalanobis(x_err, P)


def nis(residual, S) -> float:
    return _mahalanobis(residual, S)


# -- incomplete gamma -----------------------------------------------------------

def _gamma_series(a: float, x: float) -> float:
    term = total = 1.0 / a
    ap = a
    for _ in range(MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_contfrac(a: float, x: float) -> float:
    # modified Lentz evaluation of the upper tail Q(a, x)
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def gammainc_lower(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x)."""
    if not a > 0:
        raise DomainError(f"shape must be positive, got {a!r}")
    if x < 0:
        raise DomainError(f"x must be non-negative, got {x!r}")
    if x == 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return min(1.0, _gamma_series(a, x))
    return max(0.0, 1.0 - _gamma_contfrac(a, x))


def chi2_cdf(x: float, dof: float) -> float:
    if not dof > 0:
        raise DomainError(f"degrees of freedom must be positive, got {dof!r}")
    if x < 0:
        raise DomainError(f"x must be non-negative, got {x!r}")
    return gammainc_lower(dof / 2.0, x / 2.0)


def chi2_quantile(p: float, dof: float, tol: float = 1e-12) -> float:
    """Inverse χ² CDF by bisection; bracket grows until it covers ``p``."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"probability must lie in (0, 1), got {p!r}")
    if not dof > 0:
        raise DomainError(f"degrees of freedom must be positive, got {dof!r}")
    lo, hi = 0.0, max(1.0, dof)
    while chi2_cdf(hi, dof) < p:
        lo, hi = hi, 2.0 * hi
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if chi2_cdf(mid, dof) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class ConfidenceBand:
    lo: float
    hi: float
    confidence: float

    def __post_init__(self):
        if not 0 <= self.lo < self.hi:
            raise DomainError(f"invalid band ({self.lo}, {self.hi})")

    def __contains__(self, value: float) -> bool:
        return self.lo <= value <= self.hi


@lru_cache(maxsize=4096)
def chi2_interval(dof: float, confidence: float = 0.95) -> ConfidenceBand:
    """Two-sided equal-tail χ² band containing ``confidence`` of the mass."""
    if not 0.0 < confidence < 1.0:
        raise DomainError(f"confidence must lie in (0, 1), got {confidence!r}")
    return ConfidenceBand(chi2_quantile((1 - confidence) / 2, dof),
                          chi2_quantile((1 + confidence) / 2, dof),
                          confidence)


def time_avg_nis_band(count: int, m: int = 1, confidence: float = 0.95) -> ConfidenceBand:
    """Band for the mean of ``count`` NIS values of an ``m``-dimensional measurement."""
    band = chi2_interval(float(count * m), confidence)
    return ConfidenceBand(band.lo / count, band.hi / count, confidence)


# -- normal distribution ----------------------------------------------------------

def norm_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def norm_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


# Acklam's rational approximation, relative error below 1.2e-9
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def _acklam(p: float) -> float:
    if p < _P_LOW:
        q = math.sqrt(-2 * math.log(p))
        return (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1)
    if p > 1 - _P_LOW:
        return -_acklam(1 - p)
    q = p - 0.5
    r = q * q
    return (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / \
        (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1)


def norm_inv_cdf(p: float) -> float:
    """Standard-normal quantile: rational approximation plus one Halley step."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"probability must lie in (0, 1), got {p!r}")
    if p > 0.5:
        return -norm_inv_cdf(1.0 - p)
    x = _acklam(p)
    e = norm_cdf(x) - p
    u = e / norm_pdf(x)
    return x - u / (1 + x * u / 2)


# -- time-average NIS ---------------------------------------------------------------

@dataclass
class NisWindow:
    """Sliding window of NIS values; ``push`` returns the current mean."""

    capacity: int = 35
    buffer: deque = field(default_factory=deque)
    total: float = 0.0

    def __post_init__(self):
        if self.capacity < 1:
            raise DomainError("window capacity must be positive")

    def push(self, eps: float) -> float:
        if eps < 0 or math.isnan(eps):
            raise DomainError(f"NIS must be non-negative, got {eps!r}")
        self.buffer.append(eps)
        self.total += eps
        if len(self.buffer) > self.capacity:
            self.total -= self.buffer.popleft()
        if len(self.buffer) == self.capacity:
            # re-anchor to cancel drift from repeated add/subtract
            self.total = math.fsum(self.buffer)
        return self.total / len(self.buffer)

    @property
    def full(self) -> bool:
        return len(self.buffer) == self.capacity

    def __len__(self):
        return len(self.buffer)


def push_time_avg_nis(window: NisWindow, eps: float) -> float:
    return window.push(eps)
