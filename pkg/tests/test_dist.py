import math
import statistics
from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exsuff.dist import (
    FinitePmf,
    builtin_fixture_catalog,
    dump_pmf,
    is_exchangeable,
    load_pmf,
    make_dirac_pmf,
    make_iid_pmf,
    make_mixture_pmf,
    make_urn_pmf,
    negative_control_pmf,
    parse_pmf,
    sampler_bernoulli,
    sampler_dirac_diagonal,
    sampler_equicorrelated_gaussian,
    sampler_mixture_iid,
    sampler_normal,
    sampler_uniform,
    sampler_urn,
    save_pmf,
    symmetrize_pmf,
)

BERN03 = {0.0: 0.7, 1.0: 0.3}
MIX19 = [(0.5, {0.0: 0.9, 1.0: 0.1}), (0.5, {0.0: 0.1, 1.0: 0.9})]


# -- constructors -----------------------------------------------------------


def test_finite_pmf_validates_mass():
    with pytest.raises(ValueError, match="sum to"):
        FinitePmf(dimension=1, atoms={(0.0,): 0.5, (1.0,): 0.4})
    with pytest.raises(ValueError, match="negative"):
        FinitePmf(dimension=1, atoms={(0.0,): 1.5, (1.0,): -0.5})
    with pytest.raises(ValueError, match="dimension"):
        FinitePmf(dimension=2, atoms={(0.0,): 1.0})


def test_iid_bernoulli_products():
    p = make_iid_pmf(BERN03, 2)
    assert p.prob((0.0, 0.0)) == pytest.approx(0.49, abs=1e-12)
    assert p.prob((0.0, 1.0)) == pytest.approx(0.21, abs=1e-12)
    assert p.prob((1.0, 0.0)) == pytest.approx(0.21, abs=1e-12)
    assert p.prob((1.0, 1.0)) == pytest.approx(0.09, abs=1e-12)
    assert p.prob((0.0, 1.0)) == p.prob((1.0, 0.0))  # exact: same factors
    assert p.prob((2.0, 2.0)) == 0.0
    assert len(p.atoms) == 4


def test_iid_pmf_support_cap():
    wide = {float(v): 0.1 for v in range(10)}
    with pytest.raises(ValueError, match="100000"):
        make_iid_pmf(wide, 6)


def test_mixture_bernoulli_atoms():
    p = make_mixture_pmf(MIX19, 2)
    assert p.prob((0.0, 0.0)) == pytest.approx(0.41, abs=1e-12)
    assert p.prob((1.0, 1.0)) == pytest.approx(0.41, abs=1e-12)
    assert p.prob((0.0, 1.0)) == pytest.approx(0.09, abs=1e-12)
    # exchangeable but not a product: P(0,0) != P(X1=0)^2 = 0.25
    assert is_exchangeable(p)
    assert abs(p.prob((0.0, 0.0)) - 0.25) > 0.1


def test_mixture_weight_validation():
    with pytest.raises(ValueError, match="weights"):
        make_mixture_pmf([(0.6, BERN03), (0.6, BERN03)], 2)
    with pytest.raises(ValueError):
        make_mixture_pmf([], 2)


def test_urn_without_replacement_thirds():
    p = make_urn_pmf([1.0, 1.0, 2.0], 2)
    third = 2.0 / 6.0
    assert p.atoms == {(1.0, 1.0): third, (1.0, 2.0): third, (2.0, 1.0): third}


def test_urn_distinct_values_uniform():
    p = make_urn_pmf([1.0, 2.0, 3.0], 2)
    assert len(p.atoms) == 6
    assert all(w == 1.0 / 6.0 for w in p.atoms.values())
    assert is_exchangeable(p, tol=0.0)


def test_urn_validation():
    with pytest.raises(ValueError, match="draw 4"):
        make_urn_pmf([1.0, 2.0, 3.0], 4)
    with pytest.raises(ValueError, match="100000"):
        make_urn_pmf([float(v) for v in range(10)], 10)


def test_dirac_pmf():
    p = make_dirac_pmf(2.5, 3)
    assert p.atoms == {(2.5, 2.5, 2.5): 1.0}
    assert is_exchangeable(p, tol=0.0)


# -- symmetrization of laws --------------------------------------------------


def test_symmetrize_negative_control_is_half_half():
    q = symmetrize_pmf(negative_control_pmf())
    assert q.atoms == {(0.0, 1.0): 0.5, (1.0, 0.0): 0.5}


def test_symmetrize_orbit_weights_exactly_equal():
    raw = FinitePmf(dimension=3, atoms={(0.0, 1.0, 2.0): 0.3, (2.0, 1.0, 0.0): 0.5,
                                        (1.0, 1.0, 1.0): 0.2})
    q = symmetrize_pmf(raw)
    orbit = [x for x in q.atoms if sorted(x) == [0.0, 1.0, 2.0]]
    assert len(orbit) == 6
    weights = {q.atoms[x] for x in orbit}
    assert len(weights) == 1
    assert q.prob((1.0, 1.0, 1.0)) == 0.2


def test_symmetrize_fixed_point_on_exchangeable():
    for p in (make_iid_pmf(BERN03, 3), make_urn_pmf([1.0, 1.0, 2.0], 2),
              make_mixture_pmf(MIX19, 3)):
        q = symmetrize_pmf(p)
        assert set(q.atoms) == set(p.atoms)
        for x, w in p.atoms.items():
            assert abs(q.atoms[x] - w) <= 1e-12


def test_symmetrize_output_is_exchangeable_and_idempotent():
    raw = FinitePmf(dimension=2, atoms={(0.0, 1.0): 0.9, (1.0, 1.0): 0.1})
    q = symmetrize_pmf(raw)
    assert is_exchangeable(q, tol=0.0)
    assert symmetrize_pmf(q).atoms == q.atoms  # orbit sizes here are 1 or 2
    assert q.prob((0.0, 1.0)) == q.prob((1.0, 0.0)) == 0.45


def test_symmetrize_dimension_cap():
    p = make_dirac_pmf(0.0, 11)
    with pytest.raises(ValueError, match="10"):
        symmetrize_pmf(p)
    with pytest.raises(ValueError, match="10"):
        is_exchangeable(p)


@given(st.integers(2, 4), st.integers(0, 10**9))
@settings(max_examples=40, deadline=None)
def test_symmetrize_random_pmfs_property(n, seed):
    rng = Random(seed)
    grid = [tuple(float(rng.randint(0, 2)) for _ in range(n)) for _ in range(4)]
    raw_w = [rng.random() + 0.01 for _ in grid]
    total = math.fsum(raw_w)
    atoms = {}
    for x, w in zip(grid, raw_w):
        atoms[x] = atoms.get(x, 0.0) + w / total
    # rebuild so mass is exactly 1 under fsum
    atoms = {x: w / math.fsum(atoms.values()) for x, w in atoms.items()}
    q = symmetrize_pmf(FinitePmf(dimension=n, atoms=atoms))
    assert is_exchangeable(q, tol=0.0)
    assert abs(math.fsum(q.atoms.values()) - 1.0) <= 1e-12


def test_is_exchangeable_detects_asymmetry():
    assert not is_exchangeable(negative_control_pmf())
    missing = FinitePmf(dimension=2, atoms={(0.0, 1.0): 1.0})
    assert not is_exchangeable(missing)


# -- text format --------------------------------------------------------------


def test_dump_parse_round_trip():
    p = make_mixture_pmf(MIX19, 3)
    q = parse_pmf(dump_pmf(p))
    assert q.dimension == p.dimension
    assert q.atoms == p.atoms  # repr floats round-trip exactly


def test_save_load_round_trip(tmp_path):
    p = make_urn_pmf([1.0, 1.0, 2.0], 2)
    path = tmp_path / "urn.pmf"
    save_pmf(p, str(path))
    assert load_pmf(str(path)).atoms == p.atoms


def test_parse_skips_comments_and_blanks():
    text = "# header comment\n\ndim 2\n0.0 1.0 0.5\n# trailing\n1.0 0.0 0.5\n"
    p = parse_pmf(text)
    assert p.atoms == {(0.0, 1.0): 0.5, (1.0, 0.0): 0.5}


def test_parse_rejects_bad_mass():
    with pytest.raises(ValueError, match="1e-09"):
        parse_pmf("dim 1\n0.0 0.5\n1.0 0.4\n")


def test_parse_renormalizes_rounding_slack():
    off = 0.5 + 2.5e-10
    text = f"dim 1\n0.0 {off!r}\n1.0 {off!r}\n"
    p = parse_pmf(text)
    assert abs(math.fsum(p.atoms.values()) - 1.0) <= 1e-12
    assert p.prob((0.0,)) == pytest.approx(0.5, abs=1e-9)


def test_parse_rejects_structure_errors():
    with pytest.raises(ValueError, match="header"):
        parse_pmf("dimension 2\n0.0 1.0 1.0\n")
    with pytest.raises(ValueError, match="empty"):
        parse_pmf("# nothing\n")
    with pytest.raises(ValueError, match="duplicate"):
        parse_pmf("dim 1\n0.0 0.5\n0.0 0.5\n")
    with pytest.raises(ValueError, match="negative"):
        parse_pmf("dim 1\n0.0 1.5\n1.0 -0.5\n")
    with pytest.raises(ValueError, match="expected 2"):
        parse_pmf("dim 2\n0.0 0.5\n")


# -- samplers ------------------------------------------------------------------


def _corr(pairs):
    xs = [a for a, _ in pairs]
    ys = [b for _, b in pairs]
    return statistics.correlation(xs, ys)


def test_sampler_reproducible_given_seed():
    for s in (sampler_uniform(3), sampler_normal(3), sampler_bernoulli(0.3, 3),
              sampler_equicorrelated_gaussian(3, 0.5), sampler_urn([1.0, 2.0, 3.0], 2),
              sampler_dirac_diagonal(1.5, 3)):
        a = [s(Random(99)) for _ in range(5)]
        b = [s(Random(99)) for _ in range(5)]
        assert a == b


def test_uniform_sampler_independent_coordinates():
    s = sampler_uniform(2)
    rng = Random(2024)
    draws = [s(rng) for _ in range(100_000)]
    assert abs(_corr(draws)) <= 0.01
    mean0 = statistics.fmean(d[0] for d in draws)
    assert abs(mean0 - 0.5) <= 0.005


def test_equicorrelated_sampler_hits_target_correlation():
    s = sampler_equicorrelated_gaussian(2, 0.5)
    rng = Random(2025)
    draws = [s(rng) for _ in range(100_000)]
    assert abs(_corr(draws) - 0.5) <= 0.02
    assert abs(statistics.fmean(d[0] for d in draws)) <= 0.02


def test_equicorrelated_extremes():
    s0 = sampler_equicorrelated_gaussian(2, 0.0)
    s1 = sampler_equicorrelated_gaussian(2, 1.0)
    x = s1(Random(7))
    assert x[0] == x[1]
    draws = [s0(Random(s)) for s in range(100)]
    assert all(d[0] != d[1] for d in draws)


def test_bernoulli_sampler_mean():
    s = sampler_bernoulli(0.3, 1)
    rng = Random(31)
    freq = statistics.fmean(s(rng)[0] for _ in range(50_000))
    assert abs(freq - 0.3) <= 0.01
    assert not s.continuous


def test_urn_sampler_matches_urn_pmf():
    s = sampler_urn([1.0, 2.0, 3.0], 2)
    rng = Random(17)
    counts = {}
    m = 60_000
    for _ in range(m):
        d = s(rng)
        counts[d] = counts.get(d, 0) + 1
    p = make_urn_pmf([1.0, 2.0, 3.0], 2)
    assert set(counts) == set(p.atoms)
    for x, w in p.atoms.items():
        assert abs(counts[x] / m - w) <= 0.01


def test_urn_sampler_full_draw_is_permutation():
    s = sampler_urn([1.0, 2.0, 3.0], 3)
    rng = Random(5)
    for _ in range(50):
        assert sorted(s(rng)) == [1.0, 2.0, 3.0]


def test_dirac_sampler_constant():
    s = sampler_dirac_diagonal(2.5, 3)
    assert s(Random(0)) == (2.5, 2.5, 2.5)
    assert s.spec() == "dirac:2.5"


def test_mixture_sampler_couples_coordinates():
    comps = [(0.5, lambda rng: 1.0 if rng.random() < 0.1 else 0.0),
             (0.5, lambda rng: 1.0 if rng.random() < 0.9 else 0.0)]
    s = sampler_mixture_iid(comps, 2, continuous=False)
    rng = Random(11)
    m = 50_000
    both = sum(1 for _ in range(m) if s(rng) == (1.0, 1.0))
    # mixture makes coordinates dependent: P(1,1) = 0.41, not 0.25
    assert abs(both / m - 0.41) <= 0.01


def test_sampler_validation():
    with pytest.raises(ValueError):
        sampler_bernoulli(1.5, 2)
    with pytest.raises(ValueError):
        sampler_equicorrelated_gaussian(2, -0.1)
    with pytest.raises(ValueError):
        sampler_urn([1.0], 2)
    with pytest.raises(ValueError):
        sampler_mixture_iid([(0.9, lambda rng: 0.0)], 2)


def test_sampler_specs():
    assert sampler_uniform(2).spec() == "uniform"
    assert sampler_equicorrelated_gaussian(3, 0.5).spec() == "equicorr:0.5"
    assert sampler_urn([1.0, 2.0, 3.0], 2).spec() == "urn:1,2,3"
    assert sampler_bernoulli(0.3, 2).spec() == "bernoulli:0.3"


# -- fixture catalog -----------------------------------------------------------


def test_catalog_is_deterministic():
    a = builtin_fixture_catalog()
    b = builtin_fixture_catalog()
    assert [f.name for f in a] == [f.name for f in b]
    for fa, fb in zip(a, b):
        assert fa.pmf.atoms == fb.pmf.atoms


def test_catalog_contents():
    cat = builtin_fixture_catalog()
    names = [f.name for f in cat]
    assert len(names) == len(set(names))
    assert "nonexch-control" in names
    assert sum(1 for f in cat if not f.exchangeable) == 1
    for f in cat:
        assert 1 <= f.pmf.dimension <= 10
        assert len(f.pmf.atoms) <= 100_000
        assert is_exchangeable(f.pmf) == f.exchangeable
