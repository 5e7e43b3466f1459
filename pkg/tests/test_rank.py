from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from bfml import (
    MinorSpec,
    check_rank_minor_identities,
    family_f_alpha,
    family_f_u24,
    from_rank_function,
    is_rankable,
    is_stable,
    make_binary_function,
    mobius_invert,
    rank,
    rank_function,
    subset_sums,
)
from bfml.errors import BadEmptySetValue, NonIntegerRank, NotRankable
from bfml.minors import GENERAL_GRID, grid_functions, spec_masks
from bfml.rank import RankValue, SubsetSumTable, exact_log2, mobius, stepwise_defined, zeta

U24 = family_f_u24()


@st.composite
def functions(draw, max_order=4):
    n = draw(st.integers(0, max_order))
    rest = draw(st.lists(st.sampled_from(GENERAL_GRID), min_size=(1 << n) - 1, max_size=(1 << n) - 1))
    return make_binary_function(list("abcde"[:n]), [1] + rest)


# -------------------------------------------------------------- subset sums


def test_subset_sums_u24():
    s = subset_sums(U24)
    d = oracle.as_dict(U24)
    for labels, _ in U24.items():
        assert s[U24.mask(labels)] == oracle.S(d, frozenset(labels))
    by_size = {len(labels): s[U24.mask(labels)] for labels, _ in U24.items()}
    assert by_size == {0: 1, 1: 1, 2: 1, 3: 2, 4: 4}


def test_subset_sums_small():
    s = subset_sums(family_f_alpha(-1))
    assert (s[0], s[1]) == (0 + 1, 0)
    assert subset_sums(make_binary_function([], [1]))[0] == 1


def test_mobius_examples():
    assert mobius_invert(SubsetSumTable(["e"], [1, 1])).table == (1, 0)
    assert mobius_invert(SubsetSumTable(["e"], [1, 2])).table == (1, 1)
    assert mobius_invert(subset_sums(U24)) == U24
    with pytest.raises(BadEmptySetValue):
        mobius_invert(SubsetSumTable(["e"], [2, 2]))


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=8, max_size=8))
def test_zeta_mobius_inverse(vals):
    assert mobius(zeta(vals, 3), 3) == vals


@settings(max_examples=300, deadline=None)
@given(functions())
def test_round_trip_and_oracle_sums(f):
    s = subset_sums(f)
    d = oracle.as_dict(f)
    for labels, _ in f.items():
        assert s[f.mask(labels)] == oracle.S(d, frozenset(labels))
    assert mobius_invert(s) == f


def test_round_trip_exhaustive_order_two():
    for f in grid_functions(2, GENERAL_GRID):
        assert mobius_invert(subset_sums(f)) == f


# -------------------------------------------------------------- stable / rankable


def test_stability_examples():
    assert not is_stable(family_f_alpha(-1))
    assert is_stable(U24)
    assert not is_stable(make_binary_function(["a", "b"], [1, 1, -2, 0]))


def test_rankability_examples():
    for a in (-1, -2, Fraction(-3, 2)):
        assert not is_rankable(family_f_alpha(a))
    assert is_rankable(U24)
    f = make_binary_function(["a", "b"], [1, 1, 1, -4])
    assert not is_rankable(f) and is_stable(f)


@settings(max_examples=150, deadline=None)
@given(functions(max_order=3))
def test_stable_matches_minor_oracle(f):
    assert is_stable(f) == oracle.is_stable(oracle.as_dict(f))
    if is_rankable(f):
        assert is_stable(f)


def test_stable_iff_no_f_minus_one_minor_order_four_samples():
    import random

    from bfml import has_minor_isomorphic

    rng = random.Random(7)
    fm1 = family_f_alpha(-1)
    for _ in range(300):
        f = make_binary_function(list("abcd"), [1] + [rng.choice(GENERAL_GRID) for _ in range(15)])
        assert is_stable(f) == (has_minor_isomorphic(f, fm1) is None)


def test_stepwise_agrees_with_one_shot_on_stable_functions():
    # when every subset sum is nonzero, any element order of deletions works
    for f in grid_functions(2, (-1, 0, 1, 2)):
        for c, d in spec_masks(2):
            spec = MinorSpec(f.subset(c), f.subset(d))
            if is_stable(f):
                assert stepwise_defined(f, spec)


def test_stepwise_can_fail_where_one_shot_is_defined():
    # S({a,b}) = 1 - 1 - 1 + 2 = 1 but S({a}) = 0: the one-shot deletion of
    # {a,b} is defined while deleting a first is not
    f = make_binary_function(["a", "b"], [1, -1, -1, 2])
    spec = MinorSpec((), ("a", "b"))
    assert oracle.delete(oracle.as_dict(f), frozenset("ab")) is not None
    assert not stepwise_defined(f, spec, order=["a", "b"])


# -------------------------------------------------------------- rank values


def test_exact_log2():
    assert exact_log2(Fraction(8)) == 3
    assert exact_log2(Fraction(1, 4)) == -2
    assert exact_log2(Fraction(3)) is None
    assert exact_log2(Fraction(2, 3)) is None


def test_rank_value_requires_positive_parts():
    with pytest.raises(NotRankable):
        RankValue(Fraction(0), Fraction(1), None)


def test_rank_u24():
    r = rank(U24, ["d"])
    assert r.ratio == 2 and r.integer_log == 1
    r = rank(U24, ["c", "d"])
    assert r.ratio == 4 and r.integer_log == 2
    r = rank(U24, [])
    assert r.ratio == 1 and r.integer_log == 0


def test_rank_function_examples():
    assert rank_function(family_f_alpha(1)).integer_values() == (0, 1)
    assert rank_function(family_f_alpha(3)).integer_values() == (0, 2)
    rf = rank_function(U24)
    for labels, _ in U24.items():
        assert rf(labels).integer_log == min(len(labels), 2)


def test_rank_non_integer_and_not_rankable():
    v = rank(family_f_alpha(2), ["e"])
    assert v.integer_log is None and v.ratio == 3
    assert str(v) == "log2(3)"
    assert abs(v.log2() - 1.5849625) < 1e-6
    with pytest.raises(NotRankable):
        rank(family_f_alpha(-1), ["e"])


@settings(max_examples=200, deadline=None)
@given(functions(max_order=3))
def test_rank_matches_direct_oracle(f):
    d = oracle.as_dict(f)
    if is_rankable(f):
        for labels, _ in f.items():
            assert rank(f, labels).ratio == oracle.rank_ratio(d, frozenset(labels))
    else:
        assert any(oracle.rank_ratio(d, frozenset(labels)) is None for labels, _ in f.items())


# -------------------------------------------------------------- inverse transform


def test_from_rank_examples():
    u24_rank = [min(bin(m).count("1"), 2) for m in range(16)]
    assert from_rank_function(list("abcd"), u24_rank) == U24
    assert from_rank_function(["a", "b"], [0, 0, 0, 0]).table == (1, 0, 0, 0)
    assert from_rank_function(["a", "b"], [0, 1, 1, 2]).table == (1, 1, 1, 1)


def test_from_rank_rejects_bad_input():
    with pytest.raises(NonIntegerRank):
        from_rank_function(["a"], [0, Fraction(1, 2)])
    with pytest.raises(BadEmptySetValue):
        from_rank_function(["a"], [1, 1])


def test_from_rank_matches_alternating_sum_oracle():
    for vals in product(range(-1, 3), repeat=3):
        rho = (0,) + vals
        f = from_rank_function(["a", "b"], rho)
        expect = oracle.from_rank({frozenset(): 0, frozenset("a"): rho[1], frozenset("b"): rho[2],
                                   frozenset("ab"): rho[3]})
        assert oracle.as_dict(f) == expect


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 4).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(-3, 6), min_size=(1 << n) - 1, max_size=(1 << n) - 1))))
def test_inverse_rank_round_trip(data):
    n, rest = data
    rho = (0, *rest)
    f = from_rank_function(list("abcd"[:n]), rho)
    assert rank_function(f).integer_values() == rho


# -------------------------------------------------------------- rank-minor identities


def test_identity_u24_contract_d():
    spec = MinorSpec(("d",), ())
    assert check_rank_minor_identities(U24, spec)
    g_rank = rank_function(U24.__class__.from_numerators(("a", "b", "c"), U24.num[:8]))
    assert g_rank(["c"]).integer_log == rank(U24, ["c", "d"]).integer_log - rank(U24, ["d"]).integer_log == 1


def test_identity_requires_rankable():
    with pytest.raises(NotRankable):
        check_rank_minor_identities(family_f_alpha(-2), MinorSpec((), ()))


@settings(max_examples=150, deadline=None)
@given(functions(max_order=3))
def test_identities_against_oracle(f):
    if not is_rankable(f):
        return
    d = oracle.as_dict(f)
    e = oracle.ground(d)
    for c, dm in spec_masks(len(f.ground_set)):
        cs, ds = frozenset(f.subset(c)), frozenset(f.subset(dm))
        assert check_rank_minor_identities(f, MinorSpec(cs, ds))
        g = oracle.minor(d, cs, ds)
        assert g is not None
        for y in oracle.subsets(e - cs - ds):
            # Q(g)(Y) = Qf(Y u C) - Qf(C), as ratios
            assert oracle.rank_ratio(g, y) == oracle.rank_ratio(d, y | cs) / oracle.rank_ratio(d, cs)
