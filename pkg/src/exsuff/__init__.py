"""exsuff: symmetrization over order statistics for exchangeable vectors.

The conditional law of an exchangeable random vector given its order
statistics is uniform over coordinate rearrangements, whatever the
underlying distribution.  This package turns that fact into executable
machinery: exact and Monte Carlo symmetrization operators, brute-force
conditional-law oracles on finite supports, and seeded statistical
experiments that exercise both.
"""

__version__ = "0.1.0"

from .dist import (
    FinitePmf,
    Sampler,
    builtin_fixture_catalog,
    is_exchangeable,
    load_pmf,
    make_iid_pmf,
    make_mixture_pmf,
    make_urn_pmf,
    negative_control_pmf,
    parse_pmf,
    sampler_dirac_diagonal,
    sampler_equicorrelated_gaussian,
    sampler_iid,
    sampler_mixture_iid,
    sampler_uniform,
    sampler_urn,
    save_pmf,
    symmetrize_pmf,
)
from .estimands import Estimand, catalog_estimands
from .oracle import (
    ConditionalLaw,
    ConditioningOnNullError,
    DiscrepancyReport,
    compare_conditional,
    conditional_expectation_bruteforce,
    conditional_law_bruteforce,
    conditional_law_formula,
    order_statistics_pmf,
    verify_identity_eq1,
)
from .perm import (
    Perm,
    Point,
    RankVector,
    apply_permutation,
    compose,
    enumerate_permutations_heap,
    enumerate_permutations_lex,
    invert,
    multiset_permutation_count,
    random_permutation,
    rank_vector,
)
from .stats import Welford, chi_square_sf
from .symcore import (
    event_equivalence_check,
    is_in_cone,
    is_symmetric_set,
    sort_to_cone,
    symmetric_closure,
)
from .symmetrize import (
    McEstimate,
    RbComparison,
    distinct_rearrangements,
    rao_blackwell_compare,
    symmetrize_exact,
    symmetrize_mc,
    symmetrize_multiset,
)
