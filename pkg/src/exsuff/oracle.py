"""Brute-force conditional laws on finite supports, versus the closed form.

The conditioning oracle is deliberately primitive: restrict the pmf to a
sorted-value fiber and renormalize.  Nothing here reuses the permutation
formula it is meant to check, so agreement between the two routes is
evidence, not circularity.
"""

from __future__ import annotations

import math
from collections import defaultdict
from collections.abc import Callable, Iterable
from dataclasses import dataclass

from .dist import FinitePmf
from .perm import ENUMERATION_CAP, Point, multiset_permutation_count
from .symcore import cone_part, is_in_cone, sorted_point, symmetric_closure
from .symmetrize import distinct_rearrangements, symmetrize_exact

MASS_TOL = 1e-12


class ConditioningOnNullError(ValueError):
    """Conditioning on a sorted value with zero probability is undefined."""


@dataclass(frozen=True)
class ConditionalLaw:
    """Conditional distribution over the rearrangements of one sorted value."""

    given: Point
    weights: dict[Point, float]

    def __post_init__(self):
        total = math.fsum(self.weights.values())
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"conditional weights sum to {total!r}, not 1")
        for x in self.weights:
            if sorted_point(x) != self.given:
                raise ValueError(f"atom {x} does not sort to {self.given}")

    def mass_on(self, points: Iterable[Point]) -> float:
        pts = frozenset(tuple(p) for p in points)
        return math.fsum(w for x, w in self.weights.items() if x in pts)


@dataclass(frozen=True)
class DiscrepancyReport:
    """Worst absolute deviation found by an exhaustive comparison."""

    max_abs_discrepancy: float
    worst_case: str
    cases_checked: int
    tol: float = MASS_TOL

    @property
    def passed(self) -> bool:
        return self.max_abs_discrepancy <= self.tol


def order_statistics_pmf(p: FinitePmf) -> FinitePmf:
    """Pushforward of p under coordinate sorting; atoms are nondecreasing."""
    fibers = defaultdict(list)
    for x, mass in p.atoms.items():
        fibers[sorted_point(x)].append(mass)
    atoms = {y: math.fsum(masses) for y, masses in fibers.items()}
    return FinitePmf(dimension=p.dimension, atoms=atoms)


def _require_sorted(y: Point) -> Point:
    y = tuple(y)
    if not is_in_cone(y):
        raise ValueError(f"{y} is not nondecreasing")
    return y


def conditional_law_bruteforce(p: FinitePmf, y: Point) -> ConditionalLaw:
    """Definitional conditional law of X given sort(X) = y: restrict, renormalize."""
    y = _require_sorted(y)
    if len(y) != p.dimension:
        raise ValueError(f"y has dimension {len(y)}, pmf has {p.dimension}")
    fiber = {x: mass for x, mass in p.atoms.items() if sorted_point(x) == y}
    total = math.fsum(fiber.values())
    if total <= 0.0:
        raise ConditioningOnNullError(f"sorted value {y} has zero probability")
    weights = {x: mass / total for x, mass in sorted(fiber.items())}
    return ConditionalLaw(given=y, weights=weights)


def conditional_law_formula(y: Point) -> ConditionalLaw:
    """Uniform law over the distinct rearrangements of y.

    Takes no distribution argument: for exchangeable vectors this is the
    conditional law of X given its order statistics, whatever the law of X.
    """
    y = _require_sorted(y)
    if len(y) > ENUMERATION_CAP:
        raise ValueError(f"dimension {len(y)} exceeds cap {ENUMERATION_CAP}")
    share = 1.0 / multiset_permutation_count(y)
    weights = {r: share for r in distinct_rearrangements(y)}
    return ConditionalLaw(given=y, weights=weights)


def conditional_expectation_bruteforce(p: FinitePmf, g: Callable[[Point], float], y: Point) -> float:
    """E[g(X) | sort(X) = y] from the brute-force conditional law."""
    law = conditional_law_bruteforce(p, y)
    return math.fsum(w * g(x) for x, w in law.weights.items())


def compare_conditional(p: FinitePmf, tol: float = MASS_TOL) -> DiscrepancyReport:
    """Compare brute-force and closed-form conditional laws on every fiber.

    Atom weights are compared pairwise with absent atoms counted as zero,
    so support mismatches surface as discrepancies too.  Non-exchangeable
    inputs produce an honest nonzero report, never an exception.
    """
    ospmf = order_statistics_pmf(p)
    worst = 0.0
    worst_case = "no fibers with positive mass"
    cases = 0
    for y in ospmf.support():
        if ospmf.atoms[y] <= 0.0:
            continue
        brute = conditional_law_bruteforce(p, y).weights
        formula = conditional_law_formula(y).weights
        for atom in sorted(set(brute) | set(formula)):
            diff = abs(brute.get(atom, 0.0) - formula.get(atom, 0.0))
            cases += 1
            if diff > worst:
                worst = diff
                worst_case = (
                    f"fiber y={y}: atom {atom} brute={brute.get(atom, 0.0)!r} "
                    f"formula={formula.get(atom, 0.0)!r}"
                )
    if cases == 0:
        raise ValueError("pmf has no positive-mass fibers to check")
    return DiscrepancyReport(
        max_abs_discrepancy=worst, worst_case=worst_case, cases_checked=cases, tol=tol
    )


def verify_identity_eq1(p: FinitePmf, g: Callable[[Point], float], b: Iterable[Point]) -> float:
    """Gap between E[1_A g(X)] and E[1_A avg_rearrangements g] for A = sort-event of b.

    The event A is {x : sort(x) lies in b's cone part}, i.e. the symmetric
    closure of b's nondecreasing points.  For exchangeable p the two sides
    agree; the returned absolute difference is the evidence.
    """
    bset = [tuple(q) for q in b]
    for q in bset:
        if len(q) != p.dimension:
            raise ValueError(f"set point {q} has dimension {len(q)}, pmf has {p.dimension}")
    event = set(symmetric_closure(cone_part(bset)))
    lhs_terms = []
    rhs_terms = []
    for x, mass in p.atoms.items():
        if x not in event:
            continue
        lhs_terms.append(mass * g(x))
        rhs_terms.append(mass * symmetrize_exact(g, sorted_point(x)))
    return abs(math.fsum(lhs_terms) - math.fsum(rhs_terms))
