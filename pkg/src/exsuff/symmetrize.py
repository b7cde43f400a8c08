"""Averaging an estimand over rearrangements of a point.

For an exchangeable vector, the conditional expectation of g given the
order statistics is the plain average of g over all n! coordinate
rearrangements.  This module evaluates that average exactly (full or
tie-collapsed enumeration) or by Monte Carlo, and measures the variance
payoff of replacing g(X) with its symmetrized version.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from random import Random

from .perm import (
    ENUMERATION_CAP,
    Point,
    apply_permutation,
    cached_permutations,
    multiset_permutation_count,
    random_permutation,
)
from .stats import Welford


@dataclass(frozen=True)
class McEstimate:
    """A symmetrized value with its sampling uncertainty."""

    value: float
    std_error: float
    draws: int
    exact: bool


@dataclass(frozen=True)
class RbComparison:
    """Raw-vs-symmetrized estimator moments over a common sample."""

    mean_raw: float
    var_raw: float
    mean_rb: float
    var_rb: float
    samples: int
    se_mean_raw: float = 0.0
    se_mean_rb: float = 0.0
    se_var_raw: float = 0.0
    se_var_rb: float = 0.0

    @property
    def variance_ratio(self) -> float | None:
        """var_rb / var_raw, or None when the raw variance is zero."""
        if self.var_raw == 0.0:
            return None
        return self.var_rb / self.var_raw


def _check_cap(n: int) -> None:
    if n > ENUMERATION_CAP:
        raise ValueError(
            f"dimension {n} exceeds the exact-enumeration cap {ENUMERATION_CAP}; "
            "use symmetrize_mc instead"
        )


def symmetrize_exact(g: Callable[[Point], float], y: Point) -> float:
    """Average of g over all n! rearrangements of y, compensated summation."""
    n = len(y)
    _check_cap(n)
    perms = cached_permutations(n)
    return math.fsum(g(apply_permutation(p, y)) for p in perms) / len(perms)


def distinct_rearrangements(y: Point) -> Iterator[Point]:
    """Distinct rearrangements of y in lexicographic order, ties collapsed."""
    n = len(y)
    counts = Counter(y)
    values = sorted(counts)
    slot: list = [None] * n

    def emit(i: int) -> Iterator[Point]:
        if i == n:
            yield tuple(slot)
            return
        for v in values:
            if counts[v] > 0:
                counts[v] -= 1
                slot[i] = v
                yield from emit(i + 1)
                counts[v] += 1

    yield from emit(0)


def symmetrize_multiset(g: Callable[[Point], float], y: Point) -> float:
    """Tie-collapsed form of symmetrize_exact.

    Rearrangements that coincide contribute one summand with the weight of
    their multiplicity; for y with many ties this skips almost all of the
    n! terms.  Every distinct rearrangement carries the same weight.
    """
    _check_cap(len(y))
    count = multiset_permutation_count(y)
    return math.fsum(g(r) for r in distinct_rearrangements(y)) / count


DEFAULT_MC_DRAWS = 1024


def symmetrize_mc(g: Callable[[Point], float], y: Point, m: int, rng: Random) -> McEstimate:
    """Monte Carlo average of g over m uniform random rearrangements of y."""
    if m < 1:
        raise ValueError("m must be >= 1")
    n = len(y)
    acc = Welford()
    for _ in range(m):
        acc.add(g(apply_permutation(random_permutation(n, rng), y)))
    return McEstimate(value=acc.mean, std_error=acc.std_error_mean, draws=m, exact=False)


def rao_blackwell_compare(
    sampler: Callable[[Random], Point],
    g: Callable[[Point], float],
    n_samples: int,
    rng: Random,
) -> RbComparison:
    """Sample moments of g(X) against its exact symmetrization over sorted X.

    The inner average is exact, not Monte Carlo, so the reported variance
    gap isolates the effect of conditioning on the order statistics.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    raw = Welford()
    rb = Welford()
    for _ in range(n_samples):
        x = sampler(rng)
        raw.add(g(x))
        rb.add(symmetrize_exact(g, tuple(sorted(x))))
    return RbComparison(
        mean_raw=raw.mean,
        var_raw=raw.variance,
        mean_rb=rb.mean,
        var_rb=rb.variance,
        samples=n_samples,
        se_mean_raw=raw.std_error_mean,
        se_mean_rb=rb.std_error_mean,
        se_var_raw=raw.std_error_variance,
        se_var_rb=rb.std_error_variance,
    )
