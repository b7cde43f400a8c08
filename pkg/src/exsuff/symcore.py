"""Finite-scale symmetric-set machinery.

The cone of nondecreasing vectors is where sorted points live; the
symmetric closure of a finite point set is its union of rearrangements.
Finite point sets stand in for Borel sets: set-level identities about
order statistics become checkable assertions here.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable

from .perm import ENUMERATION_CAP, Perm, Point, rank_vector

PointSet = tuple[Point, ...]


def sort_to_cone(x: Point) -> tuple[Point, Perm]:
    """Nondecreasing rearrangement of x together with its stable-sort perm."""
    perm = rank_vector(x).perm
    return tuple(map(x.__getitem__, perm)), perm


def sorted_point(x: Point) -> Point:
    """Just the nondecreasing rearrangement of x."""
    return tuple(sorted(x))


def is_in_cone(x: Point) -> bool:
    """True iff coordinates are nondecreasing."""
    return all(x[i] <= x[i + 1] for i in range(len(x) - 1))


def _normalize(points: Iterable[Point], cap_dim: bool = True) -> frozenset[Point]:
    pts = frozenset(tuple(p) for p in points)
    dims = {len(p) for p in pts}
    if len(dims) > 1:
        raise ValueError(f"point set mixes dimensions: {sorted(dims)}")
    if cap_dim and dims and max(dims) > ENUMERATION_CAP:
        raise ValueError(f"dimension {max(dims)} exceeds cap {ENUMERATION_CAP}")
    return pts


def symmetric_closure(b: Iterable[Point]) -> PointSet:
    """All rearrangements of all points of b, deduplicated and sorted.

    The result is closed under every coordinate permutation and contains b.
    Output order is lexicographic so reports are reproducible.
    """
    pts = _normalize(b)
    closed = set()
    for p in pts:
        closed.update(itertools.permutations(p))
    return tuple(sorted(closed))


def is_symmetric_set(b: Iterable[Point]) -> bool:
    """True iff b is invariant under every coordinate permutation.

    Only adjacent transpositions are checked; they generate the rest.
    """
    pts = _normalize(b)
    for p in pts:
        for i in range(len(p) - 1):
            swapped = p[:i] + (p[i + 1], p[i]) + p[i + 2:]
            if swapped not in pts:
                return False
    return True


def cone_part(b: Iterable[Point]) -> PointSet:
    """The nondecreasing members of b, sorted."""
    return tuple(sorted(p for p in _normalize(b, cap_dim=False) if is_in_cone(p)))


def event_equivalence_check(support: Iterable[Point], b: Iterable[Point]) -> bool:
    """Certify {sort(x) in b} == {x in closure(cone part of b)} over a support.

    Both sides describe the same event for order statistics, so this always
    returns True; it exists as an executable regression tripwire.
    """
    sup = _normalize(support, cap_dim=False)
    bset = _normalize(b)
    sup_dims = {len(p) for p in sup}
    b_dims = {len(p) for p in bset}
    if sup_dims and b_dims and sup_dims != b_dims:
        raise ValueError(f"support dimension {sup_dims} != set dimension {b_dims}")
    closure = set(symmetric_closure(cone_part(bset)))
    for x in sup:
        lhs = sorted_point(x) in bset
        rhs = x in closure
        if lhs != rhs:
            return False
    return True
