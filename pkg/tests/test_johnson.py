import random

import pytest
from hypothesis import given, settings, strategies as st

from egjohnson.eglie import adjoint, der_bracket
from egjohnson.errors import CapTooSmall, DegreeTooLow, NotAnAutomorphism
from egjohnson.freelie import parse_lie
from egjohnson.johnson import (
    FilteredAut,
    displacement,
    filtration_degree,
    free_eglie,
    inner,
    power,
    random_filtered_automorphism,
    random_nielsen,
    random_weight_automorphism,
    tau,
    tau0,
    tau0_matrix,
    verify_morphism_identities,
    zassenhaus_power_transvection,
)
from egjohnson.series import SeriesSpec, gr_class, random_word_of_degree, series_degree
from egjohnson.tensor import INTEGERS
from egjohnson.words import Alphabet, GroupMap, compose_maps, map_commutator

from strategies import RANK2, RANK3, seeds

LCS2 = SeriesSpec.lower_central(RANK2)
CONJ_A = inner(RANK2.word("a"))
CONJ_B = inner(RANK2.word("b"))
# a -> a[a,b] is not invertible; only usable with check=False
NON_AUT = GroupMap.from_strings(RANK2, {"a": "a [a,b]"})


def lie(text, alphabet=RANK2):
    return parse_lie(text, alphabet)


def tau_by_words(f, spec, m):
    """Generator classes straight from the words ``f(x) x^-1``, no Magnus maps involved."""
    return {i: gr_class(displacement(f, x), spec, m + spec.alphabet.weights[i])
            for i, x in enumerate(spec.alphabet.generators())}


def test_degree_examples():
    assert str(filtration_degree(GroupMap.identity(RANK2), LCS2, 6)) == "AboveCap(6)"
    assert filtration_degree(CONJ_A, LCS2, 6) == 1
    assert filtration_degree(NON_AUT, LCS2, 6, check=False) == 1
    with pytest.raises(NotAnAutomorphism):
        filtration_degree(NON_AUT, LCS2, 6)


def test_tau_examples():
    t = tau(FilteredAut(CONJ_A, LCS2, 6))
    assert t.value(0).is_zero() and t.value(1) == lie("[a,b]")
    assert t == adjoint(lie("a"), free_eglie(RANK2, INTEGERS))
    t = tau(FilteredAut(NON_AUT, LCS2, 6, check=False), 1)
    assert t.value(0) == lie("[a,b]") and t.value(1).is_zero()
    deeper = FilteredAut(inner(RANK2.word("[a,b]")), LCS2, 6)
    assert deeper.degree == 2
    assert tau(deeper, 1).is_zero()


def test_tau_errors():
    fa = FilteredAut(CONJ_A, LCS2, 6)
    with pytest.raises(DegreeTooLow):
        tau(fa, 2)
    with pytest.raises(DegreeTooLow):
        tau(FilteredAut(random_nielsen(RANK2, random.Random(0), 1), LCS2, 6), 0)
    with pytest.raises(CapTooSmall):
        tau(FilteredAut(GroupMap.identity(RANK2), LCS2, 3))


def test_tau0_examples():
    assert tau0_matrix(GroupMap.identity(RANK2), LCS2) == [[1, 0], [0, 1]]
    f = GroupMap.from_strings(RANK2, {"a": "a b"}, {"a": "a b^-1"})
    assert tau0_matrix(f, LCS2) == [[1, 0], [1, 1]]
    w = RANK3.word("a b^-2 c [a,c]")
    assert tau0_matrix(inner(w), SeriesSpec.lower_central(RANK3)) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_identity_examples():
    fa, ga = FilteredAut(CONJ_A, LCS2, 6), FilteredAut(CONJ_B, LCS2, 6)
    rep = verify_morphism_identities(fa, ga, random_nielsen(RANK2, random.Random(2)))
    assert rep.ok, str(rep)
    comm = fa.commutator(ga)
    parent = free_eglie(RANK2, INTEGERS)
    assert tau(comm, 2) == der_bracket(tau(fa), tau(ga)) == adjoint(lie("[a,b]"), parent)
    ident = FilteredAut(GroupMap.identity(RANK2), LCS2, 6)
    assert tau(fa.compose(ident), 1) == tau(fa, 1)


@settings(max_examples=15)
@given(seeds)
def test_identities_random_pairs(seed):
    rng = random.Random(seed)
    alphabet = rng.choice((RANK2, RANK3))
    spec = SeriesSpec.lower_central(alphabet)
    m, n = rng.randint(1, 2), rng.randint(1, 2)
    fa = FilteredAut(random_filtered_automorphism(spec, m, rng), spec, 6, check=False)
    ga = FilteredAut(random_filtered_automorphism(spec, n, rng), spec, 6, check=False)
    if fa.degree.is_exact and ga.degree.is_exact:
        assert verify_morphism_identities(fa, ga, random_nielsen(alphabet, rng)).ok


@settings(max_examples=20)
@given(seeds, st.integers(1, 3))
def test_tau_matches_word_computation(seed, m):
    rng = random.Random(seed)
    alphabet = rng.choice((RANK2, RANK3))
    spec = SeriesSpec.lower_central(alphabet)
    f = random_filtered_automorphism(spec, m, rng)
    fa = FilteredAut(f, spec, 5, check=False)
    if fa.degree.is_exact:
        k = int(fa.degree)
        assert tau(fa).values == {i: v for i, v in tau_by_words(f, spec, k).items() if not v.is_zero()}


@settings(max_examples=20)
@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_generator_sufficiency(seed, m, n):
    rng = random.Random(seed)
    spec = SeriesSpec.lower_central(RANK2)
    f = random_filtered_automorphism(spec, m, rng)
    deg = filtration_degree(f, spec, 6, check=False)
    w = random_word_of_degree(spec, n, rng)
    k = min(int(deg) if deg.is_exact else 6, 6) + n
    assert series_degree(displacement(f, w), spec, k).at_least(k)


@settings(max_examples=10)
@given(seeds, st.sampled_from((2, 3)))
def test_zassenhaus_powers(seed, p):
    rng = random.Random(seed)
    spec = SeriesSpec.zassenhaus(RANK2, p)
    m = rng.randint(1, 2)
    f = random_filtered_automorphism(spec, m, rng)
    deg = filtration_degree(f, spec, 4, check=False)
    if deg.is_exact:
        cap = int(deg) * p
        assert filtration_degree(power(f, p), spec, cap, check=False).at_least(cap)


def test_zassenhaus_power_transvection_degree():
    for p in (2, 3):
        spec = SeriesSpec.zassenhaus(RANK2, p)
        f = zassenhaus_power_transvection(RANK2, p)
        assert filtration_degree(f, spec, 6) == p - 1


@settings(max_examples=10)
@given(seeds)
def test_lcs_powers_keep_degree(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 3)
    f = random_filtered_automorphism(LCS2, m, rng)
    fa = FilteredAut(f, LCS2, 6, check=False)
    if fa.degree.is_exact and int(fa.degree) <= 3:
        d = int(fa.degree)
        for k in (1, 2, 3):
            fk = FilteredAut(power(f, k), LCS2, 6, check=False)
            assert fk.degree == d
            assert tau(fk) == tau(fa).scale(k)


def test_tau_ignores_witness_choice():
    spec = SeriesSpec.lower_central(RANK2)
    f = GroupMap.from_strings(RANK2, {"b": "a b a^-1"}, {"b": "a^-1 b a"})
    # a second witness: same inverse map, written with a redundant factor
    g = GroupMap.from_strings(RANK2, {"b": "a b a^-1"}, {"b": "a^-1 b a b b^-1"})
    assert tau(FilteredAut(f, spec, 5)) == tau(FilteredAut(g, spec, 5))


def test_weight_series_tau():
    alphabet = Alphabet.of([("a", 1), ("b", 1), ("x", 2)])
    spec = SeriesSpec.weight(alphabet)
    f = GroupMap.from_strings(alphabet, {"a": "a x"}, {"a": "a x^-1"})
    fa = FilteredAut(f, spec, 5)
    assert fa.degree == 1
    t = tau(fa)
    assert t.value(0) == parse_lie("x", alphabet, spec.ring)
    g = random_weight_automorphism(alphabet, random.Random(4))
    assert tau0(g, spec).matrix()
