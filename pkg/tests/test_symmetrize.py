import math
from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exsuff.estimands import (
    catalog_estimands,
    coordinate_max,
    coordinate_product,
    coordinate_projection,
    coordinate_sum,
    first_coord_threshold,
    set_indicator,
    weighted_sum,
)
from exsuff.perm import apply_permutation, multiset_permutation_count
from exsuff.symmetrize import (
    distinct_rearrangements,
    rao_blackwell_compare,
    symmetrize_exact,
    symmetrize_mc,
    symmetrize_multiset,
)

proj1 = coordinate_projection(0)

grid_point = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.integers(-2, 2).map(float), min_size=n, max_size=n).map(tuple)
)
tied_point = st.integers(2, 6).flatmap(
    lambda n: st.lists(st.integers(0, 2).map(float), min_size=n, max_size=n).map(tuple)
)


def test_exact_symmetric_estimand_collapses():
    assert symmetrize_exact(coordinate_sum(), (1.0, 2.0, 5.0)) == 8.0


def test_exact_projection_is_coordinate_mean():
    assert symmetrize_exact(proj1, (1.0, 2.0, 3.0)) == 2.0


def test_exact_single_coordinate():
    assert symmetrize_exact(proj1, (3.7,)) == 3.7


def test_exact_cap_points_to_mc():
    with pytest.raises(ValueError, match="symmetrize_mc"):
        symmetrize_exact(proj1, tuple(float(i) for i in range(11)))


def test_multiset_examples():
    assert symmetrize_multiset(proj1, (5.0, 5.0, 5.0)) == 5.0
    assert symmetrize_multiset(proj1, (1.0, 1.0, 2.0)) == pytest.approx(4.0 / 3.0, abs=1e-15)
    y = (0.5, 1.5, 2.5)
    assert symmetrize_multiset(proj1, y) == symmetrize_exact(proj1, y)


def test_distinct_rearrangements_lex_and_count():
    out = list(distinct_rearrangements((1.0, 1.0, 2.0)))
    assert out == [(1.0, 1.0, 2.0), (1.0, 2.0, 1.0), (2.0, 1.0, 1.0)]
    assert len(out) == multiset_permutation_count((1.0, 1.0, 2.0))


@given(tied_point)
@settings(max_examples=60)
def test_distinct_rearrangements_enumerate_orbit(y):
    out = list(distinct_rearrangements(y))
    assert len(out) == len(set(out)) == multiset_permutation_count(y)
    assert out == sorted(out)
    assert all(sorted(r) == sorted(y) for r in out)


ESTIMANDS = [
    coordinate_projection(0),
    weighted_sum((2.0, -1.0, 0.5, 1.0, 3.0)),
    coordinate_product(),
    coordinate_max(),
    first_coord_threshold(0.5),
]


def _sized(g, n):
    if g.name == "wsum":
        return weighted_sum(tuple(float(k + 1) for k in range(n)))
    return g


@given(grid_point, st.sampled_from(ESTIMANDS), st.randoms(use_true_random=False))
@settings(max_examples=150)
def test_exact_invariant_under_input_permutation(x, g, pyrng):
    g = _sized(g, len(x))
    p = tuple(pyrng.sample(range(len(x)), len(x)))
    base = symmetrize_exact(g, x)
    assert abs(symmetrize_exact(g, apply_permutation(p, x)) - base) <= 1e-12


@given(grid_point)
def test_exact_fixed_point_for_symmetric_estimands(y):
    for g in (coordinate_sum(), coordinate_max(), coordinate_product()):
        assert symmetrize_exact(g, y) == g(y)


@given(grid_point, st.integers(-2, 2), st.integers(-2, 2))
@settings(max_examples=100)
def test_exact_linearity(y, a, b):
    n = len(y)
    g1 = coordinate_projection(n - 1)
    g2 = coordinate_product()
    combo = lambda x: a * g1(x) + b * g2(x)
    lhs = symmetrize_exact(combo, y)
    rhs = a * symmetrize_exact(g1, y) + b * symmetrize_exact(g2, y)
    assert abs(lhs - rhs) <= 1e-12


@given(tied_point)
@settings(max_examples=100)
def test_multiset_agrees_with_exact(y):
    for g in (proj1, coordinate_product(), first_coord_threshold(1.0)):
        assert abs(symmetrize_multiset(g, y) - symmetrize_exact(g, y)) <= 1e-12


def test_mc_symmetric_estimand_has_zero_error():
    est = symmetrize_mc(coordinate_sum(), (1.0, 2.0, 3.0), 64, Random(5))
    assert est.value == 6.0
    assert est.std_error == 0.0
    assert est.draws == 64
    assert not est.exact


def test_mc_projection_close_to_exact():
    est = symmetrize_mc(proj1, (0.0, 1.0), 10000, Random(9))
    assert est.std_error > 0
    assert abs(est.value - 0.5) <= 3 * est.std_error


def test_mc_single_draw_lands_on_rearrangement():
    values = {symmetrize_mc(proj1, (1.0, 2.0, 3.0), 1, Random(s)).value for s in range(30)}
    assert values <= {1.0, 2.0, 3.0}
    assert len(values) > 1


def test_mc_deterministic_given_seed():
    a = symmetrize_mc(proj1, (0.0, 1.0, 2.0), 100, Random(77))
    b = symmetrize_mc(proj1, (0.0, 1.0, 2.0), 100, Random(77))
    assert a == b


def test_mc_rejects_bad_draw_count():
    with pytest.raises(ValueError):
        symmetrize_mc(proj1, (0.0, 1.0), 0, Random(1))


def uniform_pair(rng):
    return (rng.random(), rng.random())


def test_rb_symmetric_estimand_gives_identical_moments():
    rb = rao_blackwell_compare(uniform_pair, coordinate_sum(), 500, Random(3))
    assert rb.mean_raw == rb.mean_rb
    assert rb.var_raw == rb.var_rb


def test_rb_dirac_sampler_degenerate():
    rb = rao_blackwell_compare(lambda rng: (2.5, 2.5, 2.5), proj1, 100, Random(1))
    assert rb.var_raw == rb.var_rb == 0.0
    assert rb.variance_ratio is None


def test_rb_projection_halves_uniform_variance():
    rb = rao_blackwell_compare(uniform_pair, proj1, 60000, Random(41))
    assert rb.var_raw == pytest.approx(1 / 12, rel=0.05)
    assert rb.var_rb == pytest.approx(1 / 24, rel=0.05)
    assert rb.var_rb <= rb.var_raw
    # means agree within combined MC noise
    spread = 3 * rb.se_mean_raw + 3 * rb.se_mean_rb
    assert abs(rb.mean_rb - rb.mean_raw) <= spread


def test_rb_needs_two_samples():
    with pytest.raises(ValueError):
        rao_blackwell_compare(uniform_pair, proj1, 1, Random(0))


@given(st.lists(st.integers(0, 2).map(float), min_size=2, max_size=4).map(tuple))
@settings(max_examples=80)
def test_indicator_symmetrization_matches_uniform_law(y):
    from exsuff.oracle import conditional_law_formula

    y = tuple(sorted(y))
    b = [(0.0, 1.0) + y[2:], y, tuple(reversed(y))]
    g = set_indicator(b)
    law = conditional_law_formula(y)
    assert abs(symmetrize_exact(g, y) - law.mass_on(b)) <= 1e-12


def test_catalog_has_six_estimands():
    cat = catalog_estimands(3, indicator_points=[(0.0, 1.0, 2.0)])
    assert len(cat) == 6
    assert [g.name for g in cat] == ["proj", "wsum", "product", "max", "indicator", "thresh"]
    specs = [g.spec() for g in cat]
    assert specs[0] == "proj:1"
    assert specs[1] == "wsum:1,2,3"
