"""Exact binary functions: minors, the rank transform, class membership and
excluded-minor certification."""

from .core import (
    MAX_ORDER,
    BinaryFunction,
    MinorSpec,
    canonical_form,
    contract,
    delete,
    evaluate,
    is_isomorphic,
    make_binary_function,
    minor,
    relabel,
    reorder,
)
from .errors import *  # noqa: F401,F403
from .rank import (
    RankFunction,
    RankValue,
    SubsetSumTable,
    check_rank_minor_identities,
    from_rank_function,
    is_rankable,
    is_stable,
    mobius_invert,
    rank,
    rank_function,
    subset_sums,
)
from .classes import (
    LINEAR,
    MATROIDAL,
    RANKABLE,
    STABLE,
    AxiomViolation,
    ClassId,
    MatroidRank,
    check_polymatroid,
    family_f_abc,
    family_f_alpha,
    family_f_u24,
    gf2_matroid_rank,
    graphic_matroid_rank,
    is_linear,
    is_matroidal,
    is_polymatroidal,
    uniform_matroid_rank,
)
from .minors import (
    Certificate,
    MinorWitness,
    certify_excluded_minor,
    enumerate_minors,
    has_minor_isomorphic,
    order_one_minor_values,
    search_excluded_minors,
)

__version__ = "0.1.0"
