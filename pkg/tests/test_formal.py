import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from egjohnson.eglie import adjoint, check_derivation, der_bracket
from egjohnson.errors import CapMismatch, NotAnAutomorphism, NotUnipotent, RingNotRational
from egjohnson.formal import (
    DerivationTail,
    Expansion,
    OperatorEndo,
    bch_product,
    bch_terms,
    check_tail,
    conjugated_endo,
    exp_operator,
    expand_word,
    format_tail,
    jfiltration_degree,
    operator_log,
    parse_expansion,
    parse_group_ring,
    parse_tail,
    rho,
    standard_expansion,
    upsilon_checks,
)
from egjohnson.freelie import lie_to_tensor, parse_lie, tensor_to_lie
from egjohnson.johnson import FilteredAut, free_eglie, inner, random_filtered_automorphism, tau
from egjohnson.series import SeriesSpec
from egjohnson.tensor import RATIONALS, TruncatedSeries, hopf_check, series_log, valuation
from egjohnson.words import GroupMap, compose_maps

from strategies import RANK2, RANK3, seeds, words

LCS2 = SeriesSpec.lower_central(RANK2)
QLIE = free_eglie(RANK2, RATIONALS)


def X(i, cap, alphabet=RANK2):
    return TruncatedSeries.monomial(RATIONALS, alphabet, cap, (i,))


def br(u, v):
    return u * v - v * u


def ql(text):
    return parse_lie(text, RANK2, RATIONALS)


# expansions ---------------------------------------------------------------------


def test_standard_expansion_examples():
    theta = standard_expansion(RANK2, 4)
    A = X(0, 4)
    # exp(A) by its power series
    expected = TruncatedSeries.one(RATIONALS, RANK2, 4)
    term = expected
    for k in range(1, 5):
        term = (term * A).scale(Fraction(1, k))
        expected = expected + term
    assert theta(RANK2.word("a")) == expected
    assert theta(RANK2.word("a")).constant == 1
    assert theta(RANK2.word("a")) * theta(RANK2.word("a^-1")) == TruncatedSeries.one(RATIONALS, RANK2, 4)
    assert theta(RANK2.identity()) == TruncatedSeries.one(RATIONALS, RANK2, 4)


def test_expand_commutator():
    theta = standard_expansion(RANK2, 3)
    s = expand_word(theta, RANK2.word("[a,b]"))
    assert s.homogeneous(2) == br(X(0, 3), X(1, 3))
    assert valuation(s) == 2
    assert tensor_to_lie(series_log(s).homogeneous(2), 2) == ql("[a,b]")


def test_expansion_rejects_bad_lowest_term():
    with pytest.raises(ValueError):
        Expansion(RANK2, 3, [ql("b"), ql("b")])


@settings(max_examples=25)
@given(words(RANK2, 8))
def test_grouplike_and_primitive(w):
    theta = standard_expansion(RANK2, 4).with_tail("a", ql("[a,b]"))
    s = expand_word(theta, w)
    assert hopf_check("grouplike", s)
    assert hopf_check("primitive", series_log(s))


# conjugated operators ----------------------------------------------------------------


def test_conjugated_endo_examples():
    cap = 4
    theta = standard_expansion(RANK2, cap)
    A, B = X(0, cap), X(1, cap)
    assert conjugated_endo(theta, GroupMap.identity(RANK2)) == OperatorEndo.identity(RANK2, cap)
    r = conjugated_endo(theta, inner(RANK2.word("a")))
    # e^{ad A} B
    expected, term = B, B
    for k in range(1, cap):
        term = br(A, term).scale(Fraction(1, k))
        expected = expected + term
    assert r.images[0] == A and r.images[1] == expected
    f = GroupMap.from_strings(RANK2, {"a": "a b"}, {"a": "a b^-1"})
    AB = br(A, B)
    bch3 = A + B + AB.scale(Fraction(1, 2)) + br(A, AB).scale(Fraction(1, 12)) - br(B, AB).scale(Fraction(1, 12))
    assert conjugated_endo(standard_expansion(RANK2, 3), f).images[0] == bch3.truncate(3)


def test_conjugated_endo_intertwines_for_perturbed_expansion():
    theta = standard_expansion(RANK2, 5).with_tail("a", ql("[a,b]").scale(Fraction(3, 2)))
    f = GroupMap.from_strings(RANK2, {"a": "a b"}, {"a": "a b^-1"})
    r = conjugated_endo(theta, f)
    for x in RANK2.generators():
        assert r(theta(x)) == theta(f(x))


def test_conjugated_endo_needs_witness():
    with pytest.raises(NotAnAutomorphism):
        conjugated_endo(standard_expansion(RANK2, 3), GroupMap.from_strings(RANK2, {"a": "a [a,b]"}))


# logarithms -------------------------------------------------------------------------


def test_operator_log_examples():
    t = rho(standard_expansion(RANK2, 5), inner(RANK2.word("a")))
    assert t.leading_degree == 1
    assert t.leading() == adjoint(ql("a"), QLIE)
    assert t.components == {1: adjoint(ql("a"), QLIE)}
    assert check_tail(t)
    assert operator_log(OperatorEndo.identity(RANK2, 4)).is_zero()
    swap = OperatorEndo(RANK2, 3, [X(1, 3), X(0, 3)])
    with pytest.raises(NotUnipotent):
        operator_log(swap)


@given(seeds)
@settings(max_examples=15)
def test_exp_log_round_trip(seed):
    rng = random.Random(seed)
    f = random_filtered_automorphism(LCS2, rng.randint(1, 2), rng)
    r = conjugated_endo(standard_expansion(RANK2, 5), f, check=False)
    t = operator_log(r)
    assert exp_operator(t) == r
    assert check_tail(t, samples=4)


@settings(max_examples=15)
@given(seeds, st.sampled_from((RANK2, RANK3)))
def test_leading_term_is_tau(seed, alphabet):
    rng = random.Random(seed)
    spec = SeriesSpec.lower_central(alphabet)
    f = random_filtered_automorphism(spec, rng.randint(1, 2), rng)
    fa = FilteredAut(f, spec, 5, check=False)
    if not fa.degree.is_exact:
        return
    expected = tau(fa).to_ring(free_eglie(alphabet, RATIONALS))
    for theta in (standard_expansion(alphabet, 5),
                  standard_expansion(alphabet, 5).with_tail("a", parse_lie("[a,b]", alphabet, RATIONALS))):
        t = rho(theta, f, check=False)
        assert t.leading_degree == int(fa.degree)
        assert t.leading() == expected


# BCH ------------------------------------------------------------------------------


def _tail(f, cap=4):
    return rho(standard_expansion(RANK2, cap), f, check=False)


def test_bch_examples():
    s = _tail(inner(RANK2.word("a")))
    zero = DerivationTail(RANK2, 4)
    assert bch_product(s, zero) == s and bch_product(zero, s) == s
    assert bch_product(s, s) == s.scale(2)
    t = _tail(inner(RANK2.word("b a")))
    d, e = s.component(1), t.component(1)
    prod = bch_product(s, t)
    assert prod.component(1) == d + e
    assert prod.component(2) == s.component(2) + t.component(2) + bch_terms(d, e)["half"]
    with pytest.raises(CapMismatch):
        bch_product(s, DerivationTail(RANK2, 5))


def test_bch_twelfth_terms():
    d = adjoint(ql("a"), QLIE)
    e = adjoint(ql("b"), QLIE)
    s = DerivationTail(RANK2, 5, {1: d})
    t = DerivationTail(RANK2, 5, {1: e})
    prod = bch_product(s, t)
    terms = bch_terms(d, e)
    assert prod.component(2) == terms["half"]
    assert prod.component(3) == terms["twelfth_d"] + terms["twelfth_e"]
    assert terms["half"] == adjoint(ql("[a,b]"), QLIE).scale(Fraction(1, 2))


@settings(max_examples=10)
@given(seeds)
def test_bch_is_composition(seed):
    rng = random.Random(seed)
    theta = standard_expansion(RANK2, 4)
    f = random_filtered_automorphism(LCS2, rng.randint(1, 2), rng)
    g = random_filtered_automorphism(LCS2, rng.randint(1, 2), rng)
    lhs = rho(theta, compose_maps(f, g), check=False)
    rhs = bch_product(rho(theta, f, check=False), rho(theta, g, check=False))
    assert lhs == rhs
    assert check_tail(rhs, samples=3)


# group ring --------------------------------------------------------------------------


def test_jdegree_examples():
    theta = standard_expansion(RANK2, 4)
    assert jfiltration_degree(parse_group_ring("a - 1", RANK2), LCS2, theta) == 1
    assert jfiltration_degree(parse_group_ring("a b - a - b + 1", RANK2), LCS2, theta) == 2
    assert jfiltration_degree(parse_group_ring("[a,b] - 1", RANK2), LCS2, theta) == 2
    assert jfiltration_degree(parse_group_ring("2*a^-1 - 2", RANK2), LCS2, theta) == 1
    with pytest.raises(RingNotRational):
        jfiltration_degree(parse_group_ring("a - 1", RANK2), SeriesSpec.zassenhaus(RANK2, 2), theta)
    with pytest.raises(CapMismatch):
        jfiltration_degree(parse_group_ring("a - 1", RANK2), LCS2, theta, cap=5)


def test_group_ring_parser():
    u = parse_group_ring("1/2*a^-2 b + 3 - a^-1", RANK2)
    assert u == {RANK2.word("a^-2 b"): Fraction(1, 2), RANK2.identity(): 3, RANK2.word("a^-1"): -1}


def test_upsilon_examples():
    theta = standard_expansion(RANK2, 4)
    rep = upsilon_checks(LCS2, theta, max_degree=3, samples=20)
    assert rep.ok, str(rep)
    assert rep.ranks[1] == (2, 2) and rep.ranks[3] == (8, 8)
    rank3 = upsilon_checks(SeriesSpec.lower_central(RANK3), standard_expansion(RANK3, 3), max_degree=2, samples=5)
    assert rank3.ranks[2] == (9, 9)


def test_upsilon_specific_pair():
    from egjohnson.formal import _minus_one, _ring_mul, group_ring_image

    theta = standard_expansion(RANK2, 5)
    x, y = RANK2.word("a"), RANK2.word("[a,b]")
    lx = lie_to_tensor(ql("a"), 5)
    ly = lie_to_tensor(ql("[a,b]"), 5)
    defect = group_ring_image(_ring_mul(_minus_one(x), _minus_one(y)), theta) - lx * ly
    assert valuation(defect, ignore_constant=False).at_least(4)


# text formats -----------------------------------------------------------------------


def test_tail_round_trip():
    t = _tail(inner(RANK2.word("a b^2")), cap=5)
    assert parse_tail(format_tail(t), RANK2, 5) == t
    assert parse_tail("0", RANK2, 5).is_zero()


def test_expansion_file():
    theta = parse_expansion("a -> 3/2 * [a,b]\n", RANK2, 4)
    assert theta.lambdas[0] == ql("a") + ql("[a,b]").scale(Fraction(3, 2))
    assert not theta.is_standard
