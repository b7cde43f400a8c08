"""Named real-valued functions of a point.

The averaging operators accept any callable, but experiments and the CLI
need serializable names, so the built-in estimands carry a name and a
parameter list alongside the function they evaluate.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field

from .perm import Point


@dataclass(frozen=True)
class Estimand:
    """A deterministic real-valued function of a point, with a stable name."""

    name: str
    fn: Callable[[Point], float]
    params: tuple[float, ...] = field(default=())

    def __call__(self, x: Point) -> float:
        return self.fn(x)

    def spec(self) -> str:
        """Serializable identifier, e.g. ``proj:1`` or ``wsum:2,1``."""
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(_fmt(v) for v in self.params)


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def coordinate_projection(k: int) -> Estimand:
    """g(x) = x[k] with zero-based k (named one-based, matching x1..xn)."""
    return Estimand(name="proj", fn=lambda x: x[k], params=(k + 1,))


def weighted_sum(weights: Iterable[float]) -> Estimand:
    w = tuple(float(v) for v in weights)
    return Estimand(
        name="wsum",
        fn=lambda x: math.fsum(wi * xi for wi, xi in zip(w, x, strict=True)),
        params=w,
    )


def coordinate_sum() -> Estimand:
    return Estimand(name="sum", fn=lambda x: math.fsum(x))


def coordinate_product() -> Estimand:
    return Estimand(name="product", fn=math.prod)


def coordinate_max() -> Estimand:
    return Estimand(name="max", fn=max)


def set_indicator(points: Iterable[Point]) -> Estimand:
    """g(x) = 1 if x belongs to the given finite point set, else 0."""
    pts = frozenset(tuple(p) for p in points)
    return Estimand(name="indicator", fn=lambda x: 1.0 if tuple(x) in pts else 0.0)


def first_coord_threshold(t: float) -> Estimand:
    """g(x) = 1 if x[0] <= t, else 0."""
    t = float(t)
    return Estimand(name="thresh", fn=lambda x: 1.0 if x[0] <= t else 0.0, params=(t,))


def catalog_estimands(dimension: int, indicator_points: Iterable[Point] = ()) -> list[Estimand]:
    """The six built-in estimands sized for one dimension.

    ``indicator_points`` seeds the set-indicator member; an empty set makes
    it identically zero, still a valid (if dull) test function.
    """
    weights = tuple(float(i + 1) for i in range(dimension))
    return [
        coordinate_projection(0),
        weighted_sum(weights),
        coordinate_product(),
        coordinate_max(),
        set_indicator(indicator_points),
        first_coord_threshold(0.5),
    ]
