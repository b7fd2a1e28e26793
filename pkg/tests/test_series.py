import random

import pytest
from hypothesis import given, strategies as st

from egjohnson.errors import DegreeTooLow, NotALieElement
from egjohnson.freelie import LieElement, lyndon_basis, parse_lie, tree_word
from egjohnson.tensor import RATIONALS
from egjohnson.series import (
    SeriesSpec,
    check_axioms,
    gr_class,
    random_word,
    random_word_of_degree,
    series_degree,
)
from egjohnson.words import Alphabet, parse_word

from strategies import RANK2, RANK3, seeds, words

LCS2 = SeriesSpec.lower_central(RANK2)
WEIGHTED = Alphabet.of([("y", 1), ("x", 2)])


def W(text, alphabet=RANK2):
    return parse_word(text, alphabet)


def test_degree_examples():
    assert series_degree(W("[a,b]"), LCS2, 4) == 2
    assert series_degree(W("a^2"), SeriesSpec.zassenhaus(RANK2, 2), 4) == 2
    assert series_degree(WEIGHTED.generator("x"), SeriesSpec.weight(WEIGHTED), 4) == 2
    assert str(series_degree(W("1"), LCS2, 4)) == "Infinity"
    assert str(series_degree(W("[a,[a,[a,[a,b]]]]"), LCS2, 4)) == "AboveCap(4)"


def test_class_examples():
    assert gr_class(W("[a,b]"), LCS2, 2) == parse_lie("[a,b]", RANK2)
    assert gr_class(W("a"), LCS2, 1) == parse_lie("a", RANK2)
    assert gr_class(W("[a,b]"), LCS2, 1).is_zero()
    with pytest.raises(DegreeTooLow):
        gr_class(W("a"), LCS2, 2)


def test_zassenhaus_p_power_class_is_not_lie():
    spec = SeriesSpec.zassenhaus(RANK2, 2)
    with pytest.raises(NotALieElement):
        gr_class(W("a^2"), spec, 2)


def test_axiom_examples():
    assert check_axioms(LCS2, samples=200, cap=6).ok
    z3 = SeriesSpec.zassenhaus(RANK2, 3)
    assert series_degree(W("a^3"), z3, 4) == 3
    corrupted = LCS2.with_overrides({W("b"): 2})
    rep = check_axioms(corrupted, samples=10, cap=6)
    assert any(kind == "bracket" and words == (W("a"), W("b")) for kind, words, _ in rep.counterexamples)


@pytest.mark.parametrize("spec", [SeriesSpec.zassenhaus(RANK2, 2), SeriesSpec.zassenhaus(RANK2, 3),
                                  SeriesSpec.weight(WEIGHTED), SeriesSpec.lower_central(RANK3)])
def test_shipped_specs_pass_axioms(spec):
    assert check_axioms(spec, samples=80, cap=6).ok


def test_lyndon_instantiation_oracle():
    for m in range(1, 6):
        for w, tree in lyndon_basis(RANK2, m).entries:
            word = tree_word(tree, RANK2)
            assert series_degree(word, LCS2, m + 1) == m
            assert gr_class(word, LCS2, m) == LieElement.basis_element(RANK2, w)


@given(words(RANK3), words(RANK3))
def test_degree_properties(u, v):
    spec = SeriesSpec.lower_central(RANK3)
    du, dv = series_degree(u, spec, 5), series_degree(v, spec, 5)
    assert series_degree(u * v, spec, 5).lower >= min(du.lower, dv.lower)
    assert series_degree(u.inverse(), spec, 5) == du
    assert series_degree(v.conjugate(u), spec, 5) == du


@given(seeds, st.integers(1, 4))
def test_commutator_degree_lemma(seed, d):
    rng = random.Random(seed)
    alphabet = rng.choice((RANK2, RANK3))
    spec = SeriesSpec.lower_central(alphabet)
    w = random_word_of_degree(spec, d, rng)
    assert min(series_degree(w.commutator(x), spec, d + 2).lower for x in alphabet.generators()) == d + 1


@given(words(RANK2, 12), st.sampled_from((2, 3)))
def test_zassenhaus_dominates_lcs(w, p):
    lcs = series_degree(w, LCS2, 5).lower
    assert series_degree(w, SeriesSpec.zassenhaus(RANK2, p), 5).lower >= min(lcs, 5)


def test_weighted_commutator_degree():
    spec = SeriesSpec.weight(WEIGHTED)
    w = W("[y,x]", WEIGHTED)
    assert series_degree(w, spec, 5) == 3
    assert gr_class(w, spec, 3) == parse_lie("[y,x]", WEIGHTED, RATIONALS)


def test_spec_parsing():
    assert SeriesSpec.parse("zassenhaus:5", RANK2).p == 5
    with pytest.raises(ValueError):
        SeriesSpec.parse("zassenhaus:4", RANK2)
    with pytest.raises(ValueError):
        SeriesSpec.parse("lcs", WEIGHTED)
