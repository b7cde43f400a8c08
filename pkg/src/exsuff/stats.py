"""Streaming moment accumulation and the chi-square tail probability.

Both kernels are self-contained: experiments must not pull in a stats
stack just to report a variance or a goodness-of-fit p-value.
"""

from __future__ import annotations

import math


class ConvergenceError(RuntimeError):
    """Raised when the incomplete-gamma iteration fails to settle."""


class Welford:
    """Single-pass mean/variance accumulator (count, mean, M2..M4 form).

    Tracks enough central moments to report standard errors both for the
    mean and for the variance estimate itself.  Merging two accumulators
    is exact, so work can be split across derived streams and recombined
    in a fixed order.
    """

    __slots__ = ("count", "mean", "m2", "m3", "m4")

    def __init__(self):
        self.count = 0
        self.mean = 0.0
        self.m2 = 0.0
        self.m3 = 0.0
        self.m4 = 0.0

    def add(self, x: float) -> None:
        n1 = self.count
        self.count = n = n1 + 1
        delta = x - self.mean
        delta_n = delta / n
        delta_n2 = delta_n * delta_n
        term1 = delta * delta_n * n1
        self.mean += delta_n
        self.m4 += (
            term1 * delta_n2 * (n * n - 3 * n + 3)
            + 6.0 * delta_n2 * self.m2
            - 4.0 * delta_n * self.m3
        )
        self.m3 += term1 * delta_n * (n - 2) - 3.0 * delta_n * self.m2
        self.m2 += term1

    def merge(self, other: "Welford") -> "Welford":
        """Combine with another accumulator; result is order-independent."""
        merged = Welford()
        na, nb = self.count, other.count
        n = na + nb
        if n == 0:
            return merged
        delta = other.mean - self.mean
        merged.count = n
        merged.mean = self.mean + delta * nb / n
        merged.m2 = self.m2 + other.m2 + delta**2 * na * nb / n
        merged.m3 = (
            self.m3
            + other.m3
            + delta**3 * na * nb * (na - nb) / n**2
            + 3.0 * delta * (na * other.m2 - nb * self.m2) / n
        )
        merged.m4 = (
            self.m4
            + other.m4
            + delta**4 * na * nb * (na * na - na * nb + nb * nb) / n**3
            + 6.0 * delta**2 * (na * na * other.m2 + nb * nb * self.m2) / n**2
            + 4.0 * delta * (na * other.m3 - nb * self.m3) / n
        )
        return merged

    @property
    def variance(self) -> float:
        """Unbiased sample variance (N-1 denominator); 0 before two samples."""
        if self.count < 2:
            return 0.0
        return self.m2 / (self.count - 1)

    @property
    def std_error_mean(self) -> float:
        if self.count < 1:
            return 0.0
        return math.sqrt(max(self.m2, 0.0) / (self.count - 1) / self.count) if self.count > 1 else 0.0

    @property
    def std_error_variance(self) -> float:
        """Standard error of the variance estimate, from the fourth moment."""
        n = self.count
        if n < 2:
            return 0.0
        var = self.m2 / (n - 1)
        mu4 = self.m4 / n
        return math.sqrt(max(mu4 - var * var * (n - 3) / (n - 1), 0.0) / n)


_MAX_ITER = 300
_EPS = 1e-16
_TINY = 1e-300


def _lower_gamma_series(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) by series; x < a + 1."""
    if x == 0.0:
        return 0.0
    ap = a
    total = term = 1.0 / a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ConvergenceError(f"incomplete-gamma series did not converge (a={a}, x={x})")


def _upper_gamma_contfrac(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) by continued fraction; x >= a + 1."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ConvergenceError(f"incomplete-gamma continued fraction did not converge (a={a}, x={x})")


def chi_square_sf(x: float, df: int) -> float:
    """Tail probability P(Chi2_df >= x).

    Evaluates the regularized upper incomplete gamma with shape df/2 at
    x/2: a power series below the shape+1 regime boundary, a Lentz
    continued fraction above it.  Absolute error is below 1e-10.
    """
    if df < 1:
        raise ValueError(f"df must be >= 1, got {df}")
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    a = df / 2.0
    t = x / 2.0
    if t == 0.0:
        return 1.0
    if t < a + 1.0:
        return min(max(1.0 - _lower_gamma_series(a, t), 0.0), 1.0)
    return min(max(_upper_gamma_contfrac(a, t), 0.0), 1.0)
