"""Exchangeable distributions, in exact and sampled form.

Finitely supported pmfs feed the brute-force oracles; seeded samplers
feed the statistical experiments.  The families overlap (iid, urn,
Dirac) so each representation can be validated against the other.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from random import Random

from .perm import Point, multiset_permutation_count
from .symcore import sorted_point
from .symmetrize import distinct_rearrangements

MASS_TOL = 1e-12
LOAD_MASS_TOL = 1e-9
SUPPORT_CAP = 100_000
DIMENSION_CAP = 10

Marginal = dict[float, float]
DrawFn = Callable[[Random], Point]


@dataclass(frozen=True)
class FinitePmf:
    """A finitely supported pmf on n-vectors; atom keys are exact tuples."""

    dimension: int
    atoms: dict[Point, float]

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        for x, p in self.atoms.items():
            if len(x) != self.dimension:
                raise ValueError(f"atom {x} has dimension {len(x)}, expected {self.dimension}")
            if p < 0:
                raise ValueError(f"negative probability {p} at atom {x}")
        total = math.fsum(self.atoms.values())
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1 within {MASS_TOL}")

    def prob(self, x: Point) -> float:
        return self.atoms.get(tuple(x), 0.0)

    def support(self) -> list[Point]:
        return sorted(self.atoms)


def _check_marginal(marginal: Marginal) -> None:
    total = math.fsum(marginal.values())
    if abs(total - 1.0) > MASS_TOL:
        raise ValueError(f"marginal masses sum to {total!r}, not 1 within {MASS_TOL}")
    if any(p < 0 for p in marginal.values()):
        raise ValueError("marginal has a negative mass")


def make_iid_pmf(marginal: Marginal, n: int) -> FinitePmf:
    """Product pmf of n independent copies of a finite marginal."""
    _check_marginal(marginal)
    support = sorted(marginal)
    if len(support) ** n > SUPPORT_CAP:
        raise ValueError(
            f"support size {len(support)}^{n} exceeds the {SUPPORT_CAP}-atom cap"
        )
    atoms = {}
    for combo in itertools.product(support, repeat=n):
        atoms[combo] = math.prod(marginal[v] for v in combo)
    return FinitePmf(dimension=n, atoms=atoms)


def make_mixture_pmf(components: Sequence[tuple[float, Marginal]], n: int) -> FinitePmf:
    """Weighted mixture of iid product pmfs; exchangeable but not a product."""
    if not components:
        raise ValueError("mixture needs at least one component")
    weights = [w for w, _ in components]
    if abs(math.fsum(weights) - 1.0) > MASS_TOL:
        raise ValueError("mixture weights do not sum to 1")
    parts = [(w, make_iid_pmf(m, n)) for w, m in components]
    contrib = defaultdict(list)
    for w, pmf in parts:
        for x, p in pmf.atoms.items():
            contrib[x].append(w * p)
    atoms = {x: math.fsum(terms) for x, terms in contrib.items()}
    return FinitePmf(dimension=n, atoms=atoms)


def make_urn_pmf(values: Sequence[float], n: int) -> FinitePmf:
    """Law of n ordered draws without replacement from a finite multiset."""
    size = len(values)
    if n > size:
        raise ValueError(f"cannot draw {n} from an urn of {size}")
    total = math.factorial(size) // math.factorial(size - n)
    if total > SUPPORT_CAP:
        raise ValueError(f"{total} ordered draws exceed the {SUPPORT_CAP}-atom cap")
    counts: dict[Point, int] = defaultdict(int)
    for draw in itertools.permutations(values, n):
        counts[draw] += 1
    atoms = {x: c / total for x, c in counts.items()}
    return FinitePmf(dimension=n, atoms=atoms)


def make_dirac_pmf(c: float, n: int) -> FinitePmf:
    """Unit mass on the diagonal point (c, ..., c)."""
    return FinitePmf(dimension=n, atoms={(c,) * n: 1.0})


def symmetrize_pmf(p: FinitePmf) -> FinitePmf:
    """Orbit-average of an arbitrary pmf: the nearest exchangeable law.

    Mass on each permutation orbit is pooled and split equally over the
    orbit's distinct points, so same-orbit atoms get exactly equal weight.
    Exchangeable inputs are fixed points.
    """
    n = p.dimension
    if n > DIMENSION_CAP:
        raise ValueError(f"dimension {n} exceeds cap {DIMENSION_CAP}")
    orbit_mass = defaultdict(list)
    for x, mass in p.atoms.items():
        orbit_mass[sorted_point(x)].append(mass)
    atoms = {}
    out_size = 0
    for rep, masses in orbit_mass.items():
        k = multiset_permutation_count(rep)
        out_size += k
        if out_size > SUPPORT_CAP:
            raise ValueError(f"symmetrized support exceeds the {SUPPORT_CAP}-atom cap")
        share = math.fsum(masses) / k
        for r in distinct_rearrangements(rep):
            atoms[r] = share
    return FinitePmf(dimension=n, atoms=atoms)


def is_exchangeable(p: FinitePmf, tol: float = MASS_TOL) -> bool:
    """True iff mass is invariant under adjacent coordinate swaps within tol."""
    if p.dimension > DIMENSION_CAP:
        raise ValueError(f"dimension {p.dimension} exceeds cap {DIMENSION_CAP}")
    for x, mass in p.atoms.items():
        for i in range(p.dimension - 1):
            swapped = x[:i] + (x[i + 1], x[i]) + x[i + 2:]
            if abs(mass - p.atoms.get(swapped, 0.0)) > tol:
                return False
    return True


def negative_control_pmf() -> FinitePmf:
    """A deliberately non-exchangeable two-atom pmf, shipped as a fixture.

    Sufficiency checks must fail on it by a discrepancy of exactly 0.1.
    """
    return FinitePmf(dimension=2, atoms={(0.0, 1.0): 0.6, (1.0, 0.0): 0.4})


# ---------------------------------------------------------------------------
# Text serialization: header "dim n", then one atom per line "v1 ... vn p".


def dump_pmf(p: FinitePmf) -> str:
    lines = [f"dim {p.dimension}"]
    for x in p.support():
        coords = " ".join(repr(float(v)) for v in x)
        lines.append(f"{coords} {p.atoms[x]!r}")
    return "\n".join(lines) + "\n"


def save_pmf(p: FinitePmf, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dump_pmf(p))


def parse_pmf(text: str) -> FinitePmf:
    """Parse the text format; mass must be 1 within 1e-9 or loading fails.

    Off-by-rounding files (beyond 1e-12 but inside 1e-9) are renormalized
    so the in-memory invariant stays exact.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty pmf file")
    header = lines[0].split()
    if len(header) != 2 or header[0] != "dim":
        raise ValueError(f"bad header {lines[0]!r}: expected 'dim n'")
    n = int(header[1])
    atoms: dict[Point, float] = {}
    for idx, ln in enumerate(lines[1:], start=2):
        fields = ln.split()
        if len(fields) != n + 1:
            raise ValueError(f"line {idx}: expected {n} coordinates and a probability")
        values = tuple(float(v) for v in fields[:n])
        prob = float(fields[n])
        if prob < 0:
            raise ValueError(f"line {idx}: negative probability {prob}")
        if values in atoms:
            raise ValueError(f"line {idx}: duplicate atom {values}")
        atoms[values] = prob
    total = math.fsum(atoms.values())
    if abs(total - 1.0) > LOAD_MASS_TOL:
        raise ValueError(f"probabilities sum to {total!r}, outside 1 +/- {LOAD_MASS_TOL}")
    if abs(total - 1.0) > MASS_TOL:
        atoms = {x: p / total for x, p in atoms.items()}
    return FinitePmf(dimension=n, atoms=atoms)


def load_pmf(path: str) -> FinitePmf:
    with open(path) as fh:
        return parse_pmf(fh.read())


# ---------------------------------------------------------------------------
# Seeded samplers.


@dataclass(frozen=True)
class Sampler:
    """A named exchangeable sampler: draw(rng) -> Point, deterministic given rng."""

    name: str
    dimension: int
    draw: DrawFn
    continuous: bool = True
    params: tuple[float, ...] = field(default=())

    def __call__(self, rng: Random) -> Point:
        return self.draw(rng)

    def spec(self) -> str:
        if not self.params:
            return self.name
        def fmt(v):
            return str(int(v)) if float(v).is_integer() else repr(float(v))
        return self.name + ":" + ",".join(fmt(v) for v in self.params)


def sampler_iid(marginal_draw: Callable[[Random], float], n: int, name: str = "iid",
                continuous: bool = True, params: tuple[float, ...] = ()) -> Sampler:
    """n independent draws from a one-dimensional sampler."""
    def draw(rng: Random) -> Point:
        return tuple(marginal_draw(rng) for _ in range(n))
    return Sampler(name=name, dimension=n, draw=draw, continuous=continuous, params=params)


def sampler_uniform(n: int) -> Sampler:
    return sampler_iid(lambda rng: rng.random(), n, name="uniform")


def sampler_normal(n: int) -> Sampler:
    return sampler_iid(lambda rng: rng.gauss(0.0, 1.0), n, name="normal")


def sampler_bernoulli(p: float, n: int) -> Sampler:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    return sampler_iid(
        lambda rng: 1.0 if rng.random() < p else 0.0,
        n, name="bernoulli", continuous=False, params=(p,),
    )


def sampler_equicorrelated_gaussian(n: int, rho: float) -> Sampler:
    """Standard normal marginals with common pairwise correlation rho.

    Each coordinate is sqrt(rho) * Z0 + sqrt(1 - rho) * Zi with one shared
    factor Z0, which is exchangeable by construction.
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must be in [0, 1], got {rho}")
    s_common = math.sqrt(rho)
    s_own = math.sqrt(1.0 - rho)

    def draw(rng: Random) -> Point:
        z0 = rng.gauss(0.0, 1.0)
        return tuple(s_common * z0 + s_own * rng.gauss(0.0, 1.0) for _ in range(n))

    return Sampler(name="equicorr", dimension=n, draw=draw, params=(rho,))


def sampler_urn(values: Sequence[float], n: int) -> Sampler:
    """n draws without replacement from a finite multiset, in draw order."""
    vals = tuple(float(v) for v in values)
    if n > len(vals):
        raise ValueError(f"cannot draw {n} from an urn of {len(vals)}")

    def draw(rng: Random) -> Point:
        pool = list(vals)
        out = []
        for i in range(n):
            j = rng.randrange(i, len(pool))
            pool[i], pool[j] = pool[j], pool[i]
            out.append(pool[i])
        return tuple(out)

    return Sampler(name="urn", dimension=n, draw=draw, continuous=False, params=vals)


def sampler_dirac_diagonal(c: float, n: int) -> Sampler:
    """The degenerate sampler concentrated at (c, ..., c)."""
    point = (float(c),) * n
    return Sampler(name="dirac", dimension=n, draw=lambda rng: point,
                   continuous=False, params=(float(c),))


def sampler_mixture_iid(components: Sequence[tuple[float, Callable[[Random], float]]],
                        n: int, name: str = "mixture",
                        continuous: bool = True,
                        params: tuple[float, ...] = ()) -> Sampler:
    """Pick a component by weight, then draw n iid coordinates from it."""
    weights = [w for w, _ in components]
    if abs(math.fsum(weights) - 1.0) > MASS_TOL:
        raise ValueError("mixture weights do not sum to 1")
    cumulative = list(itertools.accumulate(weights))

    def draw(rng: Random) -> Point:
        u = rng.random()
        for cum, (_, marginal_draw) in zip(cumulative, components):
            if u <= cum:
                return tuple(marginal_draw(rng) for _ in range(n))
        marginal_draw = components[-1][1]
        return tuple(marginal_draw(rng) for _ in range(n))

    return Sampler(name=name, dimension=n, draw=draw, continuous=continuous, params=params)


# ---------------------------------------------------------------------------
# The built-in fixture catalog used by verification runs.

CATALOG_SEED = 20240917


def _random_symmetrized_pmf(n: int, rng: Random) -> FinitePmf:
    """A raw pmf on a small integer grid, projected onto the exchangeable family."""
    grid = list(itertools.product(range(3), repeat=n))
    size = rng.randint(2, min(6, len(grid)))
    support = rng.sample(grid, size)
    raw_weights = [rng.random() + 0.05 for _ in support]
    total = math.fsum(raw_weights)
    atoms = {tuple(float(v) for v in x): w / total for x, w in zip(support, raw_weights)}
    raw = FinitePmf(dimension=n, atoms=atoms)
    return symmetrize_pmf(raw)


@dataclass(frozen=True)
class Fixture:
    name: str
    pmf: FinitePmf
    exchangeable: bool = True


def builtin_fixture_catalog() -> list[Fixture]:
    """Deterministic catalog of exchangeable pmfs plus the negative control."""
    bern03 = {0.0: 0.7, 1.0: 0.3}
    fixtures = [
        Fixture(f"iid-bernoulli03-n{n}", make_iid_pmf(bern03, n)) for n in (2, 3, 4)
    ]
    mix = [(0.5, {0.0: 0.9, 1.0: 0.1}), (0.5, {0.0: 0.1, 1.0: 0.9})]
    fixtures += [Fixture(f"mixture-bernoulli-n{n}", make_mixture_pmf(mix, n)) for n in (2, 3)]
    fixtures.append(Fixture("urn-112-n2", make_urn_pmf([1.0, 1.0, 2.0], 2)))
    fixtures.append(Fixture("urn-123-n2", make_urn_pmf([1.0, 2.0, 3.0], 2)))
    rng = Random(CATALOG_SEED)
    for k in range(20):
        n = 2 if k < 10 else 3
        fixtures.append(Fixture(f"sym-random-{k:02d}-n{n}", _random_symmetrized_pmf(n, rng)))
    fixtures.append(Fixture("dirac-n3", make_dirac_pmf(1.0, 3)))
    fixtures.append(Fixture("nonexch-control", negative_control_pmf(), exchangeable=False))
    return fixtures
