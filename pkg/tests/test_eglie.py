import random

import pytest
from hypothesis import assume, given, strategies as st

from egjohnson.eglie import (
    Aut0,
    Derivation,
    EgLie,
    TruncatedPair,
    adjoint,
    check_derivation,
    der_action,
    der_bracket,
    extend,
    format_derivation,
    parse_derivation,
    random_derivation,
    random_swap_derivation,
    seeded_derivation,
    swap_eglie,
    truncate,
    truncate_extend,
)
from egjohnson.errors import IncompatiblePair, NotHomogeneous, StructureMismatch
from egjohnson.freelie import LieElement, lie_bracket, lie_to_tensor, parse_lie, random_lie_element
from egjohnson.tensor import INTEGERS, RATIONALS, TruncatedSeries

from strategies import RANK2, RANK3, seeds

FREE = EgLie.free(RANK2)
SWAP = swap_eglie()


def L(text, parent=FREE):
    return parse_lie(text, parent.alphabet, parent.ring)


def D(parent, degree, **values):
    names = parent.alphabet.names
    return Derivation(parent, degree, {names.index(k): L(v, parent) for k, v in values.items()})


def swap_aut(parent):
    a, b = parent.generator("a"), parent.generator("b")
    return Aut0(parent, {0: b, 1: a}, {0: b, 1: a})


def tensor_derivation(d, s):
    """Extend generator values to a derivation of the tensor algebra, monomial by monomial."""
    cap = s.cap
    out = TruncatedSeries.zero(s.ring, s.alphabet, cap)
    images = {i: lie_to_tensor(d.value(i), cap) for i in range(s.alphabet.rank)}
    for m, c in s.items():
        for pos, letter in enumerate(m):
            left = TruncatedSeries.monomial(s.ring, s.alphabet, cap, m[:pos], c)
            right = TruncatedSeries.monomial(s.ring, s.alphabet, cap, m[pos + 1:])
            out = out + left * images[letter] * right
    return out


# evaluation ---------------------------------------------------------------------


def test_eval_examples():
    d = D(FREE, 1, a="0", b="[a,b]")
    assert d(L("[a,b]")) == L("[a,[a,b]]")
    assert d(L("a")).is_zero()
    c = L("[a,b]", SWAP) - L("[b,a]", SWAP)
    u = L("[a,[a,b]]", SWAP)
    s = seeded_derivation(SWAP, 2, c, u)
    t = SWAP.l0_word("t")
    assert s(SWAP.act(t, SWAP.generator("a"))) == lie_bracket(c, SWAP.generator("b")) + SWAP.act(t, u)


@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_eval_matches_tensor_derivation(seed, m, k):
    rng = random.Random(seed)
    d = random_derivation(FREE, m, rng)
    x = random_lie_element(RANK2, k, rng)
    cap = m + k
    assert lie_to_tensor(d(x), cap) == tensor_derivation(d, lie_to_tensor(x, cap))


def test_cocycle_on_words():
    d = random_swap_derivation(SWAP, 2, random.Random(1))
    t = SWAP.l0_word("t")
    t2 = SWAP.l0_word("t^2")
    assert d(t2) == d(t) + SWAP.act(t, d(t))
    assert d(t.inverse()) == -SWAP.act(t.inverse(), d(t))
    with pytest.raises(StructureMismatch):
        D(FREE, 1, a="[a,b]")(RANK2.word("a"))


# check_derivation -------------------------------------------------------------------


def test_check_examples():
    assert check_derivation(adjoint(L("[a,b]"), FREE)).ok
    assert check_derivation(adjoint(L("[a,[a,b]]", SWAP), SWAP)).ok
    assert check_derivation(D(FREE, 2, a="[b,[a,b]]", b="0")).ok
    good = random_swap_derivation(SWAP, 1, random.Random(3))
    values = dict(good.values)
    values[1] = values[1] + L("[a,b]", SWAP)
    bad = Derivation(SWAP, 1, values, good.d0)
    rep = check_derivation(bad)
    assert not rep.ok and any(cond == "3" for cond, _ in rep.failures)


def test_order_two_relation_is_checked():
    parent = swap_eglie(order_two=True)
    c = L("[a,b]", parent)
    d = seeded_derivation(parent, 2, c, L("[a,[a,b]]", parent))
    assert check_derivation(d).ok
    assert d(parent.l0_word("t^2")).is_zero()


def test_adjoint_has_no_cocycle_when_l0_trivial():
    ad = adjoint(L("a"), FREE)
    assert not ad.d0 and ad(L("b")) == L("[a,b]")
    with pytest.raises(NotHomogeneous):
        adjoint(L("a") + L("[a,b]"), FREE)


# bracket ---------------------------------------------------------------------------


def test_bracket_examples():
    d = D(FREE, 1, a="0", b="[a,b]")
    e = D(FREE, 1, a="[a,b]", b="0")
    de = der_bracket(d, e)
    assert de == D(FREE, 2, a="[a,[a,b]]", b="-[[a,b],b]")
    assert der_bracket(d, d).is_zero()
    x, y = L("a"), L("[a,b]")
    assert der_bracket(adjoint(x, FREE), adjoint(y, FREE)) == adjoint(lie_bracket(x, y), FREE)


@given(seeds)
def test_bracket_laws_free(seed):
    rng = random.Random(seed)
    parent = EgLie.free(RANK3)
    d, e, f = (random_derivation(parent, rng.randint(1, 2), rng) for _ in range(3))
    assert der_bracket(d, e) == -der_bracket(e, d)
    jac = (der_bracket(d, der_bracket(e, f)) + der_bracket(e, der_bracket(f, d))
           + der_bracket(f, der_bracket(d, e))) if d.degree == e.degree == f.degree else None
    if jac is not None:
        assert jac.is_zero()
    assert check_derivation(der_bracket(d, e), samples=5).ok


@given(seeds)
def test_bracket_laws_with_cocycles(seed):
    rng = random.Random(seed)
    d, e, f = (random_swap_derivation(SWAP, 1, rng) for _ in range(3))
    de = der_bracket(d, e)
    assert check_derivation(de, samples=5).ok
    assert de == -der_bracket(e, d)
    jac = der_bracket(d, der_bracket(e, f)) + der_bracket(e, der_bracket(f, d)) + der_bracket(f, de)
    assert jac.is_zero()
    assert der_bracket(d.scale(3) + e, f) == der_bracket(d, f).scale(3) + der_bracket(e, f)


# action ----------------------------------------------------------------------------


def test_action_examples():
    d = D(FREE, 1, a="0", b="[a,b]")
    e = D(FREE, 1, a="[a,b]", b="0")
    assert der_action(Aut0.identity(FREE), d) == d
    f = swap_aut(FREE)
    assert der_action(f, d) == D(FREE, 1, a="[b,a]", b="0")
    assert der_action(f, der_bracket(d, e)) == der_bracket(der_action(f, d), der_action(f, e))


@given(seeds)
def test_action_is_group_action(seed):
    rng = random.Random(seed)
    d = random_derivation(FREE, 2, rng)
    a, b = FREE.generator("a"), FREE.generator("b")
    g = Aut0(FREE, {0: a + b, 1: b}, {0: a - b, 1: b})
    h = swap_aut(FREE)
    assert der_action(g.compose(h), d) == der_action(g, der_action(h, d))
    assert der_action(g.inverse(), der_action(g, d)) == d


@given(seeds)
def test_adjoint_is_equivariant(seed):
    rng = random.Random(seed)
    x = random_lie_element(RANK2, rng.randint(1, 3), rng)
    assume(not x.is_zero())
    a, b = FREE.generator("a"), FREE.generator("b")
    g = Aut0(FREE, {0: a + b, 1: b}, {0: a - b, 1: b})
    assert der_action(g, adjoint(x, FREE)) == adjoint(g(x), FREE)


def test_l0_adjoint_acts_on_cocycle_derivations():
    d = random_swap_derivation(SWAP, 1, random.Random(9))
    t = adjoint(SWAP.l0_word("t"), SWAP)
    t.check()
    moved = der_action(t, d)
    assert check_derivation(moved).ok
    assert der_action(t, moved) == der_action(t.compose(t), d)


def test_aut0_rejects_bad_witness():
    a, b = FREE.generator("a"), FREE.generator("b")
    with pytest.raises(StructureMismatch):
        Aut0(FREE, {0: a + b}, {0: a + b})


# truncation -------------------------------------------------------------------------


def test_truncate_extend_examples():
    pair = TruncatedPair(1, {}, {0: L("[a,b]"), 1: LieElement.zero(RANK2)})
    d = extend(pair, FREE)
    assert d(L("[a,b]")) == L("[[a,b],b]")
    assert truncate(d) == pair
    assert truncate_extend("truncate", truncate_extend("extend", pair, FREE)) == pair
    bad = TruncatedPair(1, {},
                        {0: L("[a,b]", SWAP), 1: LieElement.zero(RANK2)})
    with pytest.raises(IncompatiblePair):
        extend(bad, SWAP)


@given(seeds)
def test_extend_truncate_round_trip(seed):
    d = random_swap_derivation(SWAP, 1, random.Random(seed))
    assert extend(truncate(d), SWAP) == d


# files -------------------------------------------------------------------------------


@given(seeds)
def test_derivation_file_round_trip(seed):
    rng = random.Random(seed)
    for parent, d in ((FREE, random_derivation(FREE, 2, rng)), (SWAP, random_swap_derivation(SWAP, 1, rng))):
        assert parse_derivation(format_derivation(d), parent, d.degree) == d


def test_rational_parent():
    parent = EgLie.free(RANK2, RATIONALS)
    d = Derivation(parent, 1, {1: parse_lie("1/2 * [a,b]", RANK2, RATIONALS)})
    assert der_bracket(d, adjoint(parent.generator("a"), parent)).degree == 2
