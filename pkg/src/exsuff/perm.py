"""Permutations of n elements: enumeration, algebra, ranks, multiset counts.

Permutations are tuples of zero-based indices; applying ``p`` to a point
``x`` produces the rearrangement whose i-th coordinate is ``x[p[i]]``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from random import Random

Perm = tuple[int, ...]
Point = tuple[float, ...]

# 10! = 3_628_800: the largest factorial we are willing to enumerate.
ENUMERATION_CAP = 10

# 20! still fits in a signed 64-bit integer; 21! does not.
MULTISET_COUNT_CAP = 20


@dataclass(frozen=True)
class RankVector:
    """Stable-sort permutation of a point, plus whether the point had ties."""

    perm: Perm
    tie_flag: bool


def _check_enumeration_cap(n: int) -> None:
    if not 1 <= n <= ENUMERATION_CAP:
        raise ValueError(
            f"n={n} outside [1, {ENUMERATION_CAP}]: full enumeration is capped at "
            f"{ENUMERATION_CAP}! permutations"
        )


def enumerate_permutations_lex(n: int) -> list[Perm]:
    """All n! permutations of {0..n-1} in lexicographic order."""
    _check_enumeration_cap(n)
    return list(itertools.permutations(range(n)))


def enumerate_permutations_heap(n: int) -> list[Perm]:
    """All n! permutations via Heap's minimal-change algorithm.

    Consecutive outputs differ by a single transposition.  Kept independent
    of the lexicographic enumerator so the two can cross-check each other.
    """
    _check_enumeration_cap(n)
    a = list(range(n))
    out = [tuple(a)]
    c = [0] * n
    i = 1
    while i < n:
        if c[i] < i:
            if i % 2 == 0:
                a[0], a[i] = a[i], a[0]
            else:
                a[c[i]], a[i] = a[i], a[c[i]]
            out.append(tuple(a))
            c[i] += 1
            i = 1
        else:
            c[i] = 0
            i += 1
    return out


@lru_cache(maxsize=None)
def cached_permutations(n: int) -> tuple[Perm, ...]:
    """Memoized lexicographic enumeration, for hot averaging loops."""
    return tuple(enumerate_permutations_lex(n))


def random_permutation(n: int, rng: Random) -> Perm:
    """Uniformly random permutation of {0..n-1} (backward uniform swaps)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.randrange(i + 1)
        a[i], a[j] = a[j], a[i]
    return tuple(a)


def apply_permutation(p: Perm, x: Point) -> Point:
    """Rearrange x so that output coordinate i is x[p[i]]."""
    if len(p) != len(x):
        raise ValueError(f"permutation length {len(p)} != point dimension {len(x)}")
    return tuple(map(x.__getitem__, p))


def invert(p: Perm) -> Perm:
    """Inverse permutation q with q[p[i]] = i."""
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def compose(p: Perm, q: Perm) -> Perm:
    """Composition r with apply(r, x) = apply(p, apply(q, x))."""
    if len(p) != len(q):
        raise ValueError(f"permutation lengths differ: {len(p)} != {len(q)}")
    return tuple(q[p[i]] for i in range(len(p)))


def identity_permutation(n: int) -> Perm:
    return tuple(range(n))


def multiset_permutation_count(x: Point) -> int:
    """Number of distinct rearrangements of x: n! / prod(multiplicity!)."""
    n = len(x)
    if n > MULTISET_COUNT_CAP:
        raise ValueError(
            f"dimension {n} exceeds cap {MULTISET_COUNT_CAP}: count may not fit in 64 bits"
        )
    count = math.factorial(n)
    for m in Counter(x).values():
        count //= math.factorial(m)
    return count


def rank_vector(x: Point) -> RankVector:
    """Stable sorting permutation of x and a flag for exact coordinate ties.

    The returned perm applied to x yields its nondecreasing rearrangement;
    ties are broken by original index, so the perm is deterministic.
    """
    if any(v != v for v in x):
        raise ValueError("point contains an unordered (NaN) coordinate")
    perm = tuple(sorted(range(len(x)), key=x.__getitem__))
    return RankVector(perm=perm, tie_flag=len(set(x)) < len(x))
