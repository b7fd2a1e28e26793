import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from sympy import divisors
from sympy.functions.combinatorial.numbers import mobius

from egjohnson.errors import CapTooSmall, NotALieElement, NotHomogeneous, RingMismatch
from egjohnson.freelie import (
    LieElement,
    format_lie,
    lie_bracket,
    lie_from_records,
    lie_records,
    lie_to_tensor,
    lyndon_basis,
    parse_lie,
    random_lie_element,
    substitute,
    tensor_to_lie,
)
from egjohnson.tensor import INTEGERS, RATIONALS, PrimeField, TruncatedSeries, hopf_check
from egjohnson.words import Alphabet

from strategies import RANK2, RANK3, seeds

WEIGHTED = Alphabet.of([("y", 1), ("x", 2)])


def L(text, alphabet=RANK2, ring=INTEGERS):
    return parse_lie(text, alphabet, ring)


def T(terms, alphabet=RANK2, cap=3, ring=INTEGERS):
    return TruncatedSeries(ring, alphabet, cap, terms)


def witt(r, d):
    return sum(mobius(e) * r ** (d // e) for e in divisors(d)) // d


def brute_lyndon(alphabet, d):
    """All words of weighted degree d strictly smaller than every proper rotation."""
    out = []
    maxlen = d // min(alphabet.weights)
    for n in range(1, maxlen + 1):
        for w in itertools.product(range(alphabet.rank), repeat=n):
            if alphabet.degree(w) == d and all(w < w[i:] + w[:i] for i in range(1, n)):
                out.append(w)
    return sorted(out)


# bases ----------------------------------------------------------------------


def test_basis_examples():
    assert lyndon_basis(RANK2, 3).words == [(0, 0, 1), (0, 1, 1)]
    assert lyndon_basis(RANK2, 1).words == [(0,), (1,)]
    basis = lyndon_basis(WEIGHTED, 3)
    assert len(basis) == 1 and basis.words == [(0, 1)]


@pytest.mark.parametrize("rank", [2, 3])
def test_witt_dimensions(rank):
    alphabet = Alphabet.of(" ".join("abc"[:rank]))
    for d in range(1, 9 if rank == 2 else 7):
        assert len(lyndon_basis(alphabet, d)) == witt(rank, d)


@pytest.mark.parametrize("alphabet", [WEIGHTED, Alphabet.of([("a", 1), ("b", 1), ("x", 2)])])
def test_weighted_basis_matches_enumeration(alphabet):
    for d in range(1, 8):
        assert lyndon_basis(alphabet, d).words == brute_lyndon(alphabet, d)


# brackets ---------------------------------------------------------------------


def test_bracket_examples():
    a, b = L("a"), L("b")
    assert lie_bracket(a, a).is_zero()
    assert lie_bracket(a, b) == LieElement.basis_element(RANK2, (0, 1))
    x, y, z = (LieElement.generator(RANK3, i) for i in range(3))
    jac = lie_bracket(x, lie_bracket(y, z)) + lie_bracket(y, lie_bracket(z, x)) + lie_bracket(z, lie_bracket(x, y))
    assert jac.is_zero()


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        lie_bracket(L("a"), L("b", ring=RATIONALS))


@given(seeds)
def test_antisymmetry_and_jacobi(seed):
    rng = random.Random(seed)
    u, v, w = (random_lie_element(RANK2, rng.randint(1, 3), rng) for _ in range(3))
    assert lie_bracket(u, v) == -lie_bracket(v, u)
    jac = lie_bracket(u, lie_bracket(v, w)) + lie_bracket(v, lie_bracket(w, u)) + lie_bracket(w, lie_bracket(u, v))
    assert jac.is_zero()


# tensor conversion ------------------------------------------------------------------


def test_lie_to_tensor_examples():
    assert lie_to_tensor(L("[a,b]"), 3) == T({(0, 1): 1, (1, 0): -1})
    assert lie_to_tensor(L("[a,[a,b]]"), 3) == T({(0, 0, 1): 1, (0, 1, 0): -2, (1, 0, 0): 1})
    assert lie_to_tensor(L("a"), 3) == T({(0,): 1})
    with pytest.raises(CapTooSmall):
        lie_to_tensor(L("[a,[a,b]]"), 2)


def test_tensor_to_lie_examples():
    assert tensor_to_lie(T({(0, 1): 1, (1, 0): -1}), 2) == L("[a,b]")
    assert tensor_to_lie(T({(0,): 1}), 1) == L("a")
    with pytest.raises(NotALieElement) as info:
        tensor_to_lie(T({(0, 1): 1, (1, 0): 1}), 2)
    assert info.value.residual
    with pytest.raises(NotHomogeneous):
        tensor_to_lie(T({(0,): 1, (0, 1): 1}), 2)


@pytest.mark.parametrize("ring", [INTEGERS, RATIONALS, PrimeField(3)])
def test_round_trip_all_rings(ring):
    rng = random.Random(5)
    for d in range(1, 6):
        u = random_lie_element(RANK3 if d < 5 else RANK2, d, rng, ring)
        s = lie_to_tensor(u, 6)
        assert tensor_to_lie(s, d) == u
        assert hopf_check("primitive", s)


def dynkin(s, d):
    """(1/d) * left-normed bracketing of each monomial, an independent inverse on primitives."""
    alphabet = s.alphabet
    total = LieElement.zero(alphabet, RATIONALS)
    for m, c in s.items():
        acc = LieElement.generator(alphabet, m[0], RATIONALS)
        for i in m[1:]:
            acc = lie_bracket(acc, LieElement.generator(alphabet, i, RATIONALS))
        total = total + acc.scale(Fraction(c) / d)
    return total


@given(seeds, st.integers(1, 5))
def test_dynkin_cross_check(seed, d):
    rng = random.Random(seed)
    u = random_lie_element(RANK2, d, rng, RATIONALS)
    s = lie_to_tensor(u, 5)
    assert dynkin(s, d) == tensor_to_lie(s, d) == u


# formats ---------------------------------------------------------------------------


@given(seeds, st.integers(1, 5))
def test_format_and_records_round_trip(seed, d):
    rng = random.Random(seed)
    u = random_lie_element(RANK2, d, rng, RATIONALS)
    assert parse_lie(format_lie(u, sep=" + "), RANK2, RATIONALS) == u
    assert lie_from_records(lie_records(u), RANK2, RATIONALS) == u


def test_substitute_is_lie_map():
    images = {0: L("b"), 1: L("a")}
    assert substitute(L("[a,[a,b]]"), images) == L("[b,[b,a]]")
