"""Acceptance suite: thirteen exact checks, each with a runtime budget.

Every check is seeded and prints one line through :func:`run_all`.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from sympy import divisors
from sympy.functions.combinatorial.numbers import mobius

from .eglie import (
    Aut0,
    adjoint,
    check_derivation,
    der_action,
    der_bracket,
    extend,
    random_derivation,
    random_swap_derivation,
    swap_eglie,
    truncate,
)
from .formal import (
    DerivationTail,
    bch_product,
    rho,
    standard_expansion,
    upsilon_checks,
)
from .freelie import LieElement, lyndon_basis, parse_lie, tree_word
from .johnson import (
    FilteredAut,
    displacement,
    free_eglie,
    inner,
    random_filtered_automorphism,
    random_nielsen,
    random_weight_automorphism,
    tau,
    tau0,
    verify_morphism_identities,
    zassenhaus_power_transvection,
)
from .series import SeriesSpec, check_axioms, gr_class, random_word, random_word_of_degree, series_degree
from .tensor import INTEGERS, RATIONALS
from .words import Alphabet, compose_maps


@dataclass
class CriterionResult:
    number: int
    name: str
    ok: bool
    detail: str
    seconds: float
    budget: float

    @property
    def passed(self) -> bool:
        return self.ok and self.seconds < self.budget

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        slow = "" if self.seconds < self.budget else " (over budget)"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} [{self.seconds:.2f}s / {self.budget:g}s{slow}]"


RANK2 = Alphabet.of("a b")
RANK3 = Alphabet.of("a b c")


def _lcs(alphabet: Alphabet) -> SeriesSpec:
    return SeriesSpec.lower_central(alphabet)


# ---------------------------------------------------------------------------


def witt_dimensions() -> tuple[bool, str]:
    expected = [2, 1, 2, 3, 6, 9, 18, 30]
    oracle = [sum(mobius(e) * 2 ** (d // e) for e in divisors(d)) // d for d in range(1, 9)]
    sizes = [len(lyndon_basis(RANK2, d)) for d in range(1, 9)]
    return sizes == expected == oracle, f"sizes {sizes}"


def commutator_laws(trials: int = 1000, seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = 0
    for _ in range(trials):
        alphabet = rng.choice((RANK2, RANK3))
        a, b, c = (random_word(alphabet, rng, 5) for _ in range(3))
        product_rule = a.commutator(b * c) == a.commutator(b) * b.conjugate(a.commutator(c))
        inverse_rule = a.commutator(b.inverse()).inverse() == b.inverse().conjugate(a.commutator(b))
        hall_witt = (a.commutator(b).commutator(b.conjugate(c))
               * b.commutator(c).commutator(c.conjugate(a))
               * c.commutator(a).commutator(a.conjugate(b)))
        bad += not (product_rule and inverse_rule and hall_witt.is_identity())
    return bad == 0, f"{trials} triples, {bad} failures"


def lyndon_oracle(max_degree: int = 5) -> tuple[bool, str]:
    spec = _lcs(RANK2)
    count = bad = 0
    for m in range(1, max_degree + 1):
        for w, t in lyndon_basis(RANK2, m).entries:
            word = tree_word(t, RANK2)
            deg = series_degree(word, spec, m + 1)
            count += 1
            if deg != m or gr_class(word, spec, m) != LieElement.basis_element(RANK2, w):
                bad += 1
    return bad == 0, f"{count} basis elements, {bad} mismatches"


def _filtered_pair(rng: random.Random, cap: int):
    alphabet = rng.choice((RANK2, RANK3))
    spec = _lcs(alphabet)
    while True:
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        if m + n > cap:
            continue
        fa = FilteredAut(random_filtered_automorphism(spec, m, rng), spec, cap, check=False)
        ga = FilteredAut(random_filtered_automorphism(spec, n, rng), spec, cap, check=False)
        if fa.degree.is_exact and ga.degree.is_exact and int(fa.degree) + int(ga.degree) <= cap:
            return fa, ga, random_nielsen(alphabet, rng, 2)


def johnson_suite(pairs: int = 100, cap: int = 6, seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    failures = []
    for k in range(pairs):
        fa, ga, h = _filtered_pair(rng, cap)
        rep = verify_morphism_identities(fa, ga, h)
        failures += [(k, name) for name, _, _ in rep.failures()]
    return not failures, f"{pairs} pairs, identities (i)-(v), {len(failures)} failures"


def adjoint_compat(samples: int = 50, seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = 0
    for k in range(samples):
        alphabet = (RANK2, RANK3)[k % 2]
        spec = _lcs(alphabet)
        m = 1 + k % 4
        w = random_word_of_degree(spec, m, rng)
        fa = FilteredAut(inner(w), spec, m)
        expected = adjoint(gr_class(w, spec, m), free_eglie(alphabet, INTEGERS))
        bad += tau(fa, m) != expected
    return bad == 0, f"{samples} words of degree 1..4, {bad} mismatches"


def derivation_laws(trials: int = 20, seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = 0
    swap = swap_eglie()
    free = free_eglie(RANK2, INTEGERS)
    a, b = free.generators()
    autos_free = [tau0(random_nielsen(RANK2, rng, 3), _lcs(RANK2)) for _ in range(4)]
    sa, sb = swap.generators()
    autos_swap = [Aut0(swap, {0: sb, 1: sa}, {0: sb, 1: sa}),
                  Aut0(swap, {0: -sa, 1: -sb}, {0: -sa, 1: -sb})]
    for k in range(trials):
        if k % 2:
            parent, autos = swap, autos_swap
            d, e, g = (random_swap_derivation(parent, rng.randint(1, 2), rng) for _ in range(3))
        else:
            parent, autos = free, autos_free
            d, e, g = (random_derivation(parent, rng.randint(1, 2), rng) for _ in range(3))
        jacobi = (der_bracket(d, der_bracket(e, g)) + der_bracket(e, der_bracket(g, d))
                  + der_bracket(g, der_bracket(d, e)))
        ok = jacobi.is_zero() and der_bracket(d, e) == -der_bracket(e, d)
        f = rng.choice(autos)
        ok &= der_action(f, der_bracket(d, e)) == der_bracket(der_action(f, d), der_action(f, e))
        ok &= extend(truncate(d), parent) == d and truncate(extend(truncate(e), parent)) == truncate(e)
        ok &= check_derivation(der_bracket(d, e), samples=5, seed=k).ok
        bad += not ok
    return bad == 0, f"{trials} triples (half with nontrivial cocycles), {bad} failures"


def np_property(samples: int = 50, seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    reports = [check_axioms(SeriesSpec.zassenhaus(RANK2, p), samples=100, cap=6, seed=seed) for p in (2, 3)]
    bad = 0
    for k in range(samples):
        p = (2, 3)[k % 2]
        spec = SeriesSpec.zassenhaus(RANK2, p)
        if k % 5 == 0:
            f = zassenhaus_power_transvection(RANK2, p, k=rng.choice((1, -1)))
        else:
            f = random_filtered_automorphism(spec, rng.randint(1, 2), rng)
        fa = FilteredAut(f, spec, 6, check=False)
        m = int(fa.degree) if fa.degree.is_exact else 6
        cap = p * m
        fa = FilteredAut(f, spec, cap, check=False)
        power = fa
        for _ in range(p - 1):
            power = power.compose(fa)
        bad += not power.degree.at_least(p * m)
    ok = all(r.ok for r in reports) and bad == 0
    axioms = ", ".join(f"p={p}: {len(r.counterexamples)} counterexamples" for p, r in zip((2, 3), reports))
    return ok, f"{axioms}; {samples} powers, {bad} violations"


def kernel_identity(samples: int = 100, seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = checks = 0
    for k in range(samples):
        alphabet = (RANK2, RANK3)[k % 2]
        spec = _lcs(alphabet)
        fa = FilteredAut(random_filtered_automorphism(spec, rng.randint(1, 4), rng), spec, 5, check=False)
        for m in range(1, 4):
            if not fa.degree.at_least(m):
                break
            checks += 1
            bad += tau(fa, m).is_zero() != fa.degree.at_least(m + 1)
    return bad == 0, f"{samples} automorphisms, {checks} checks, {bad} failures"


def commutator_lemma(samples: int = 100, seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    bad = 0
    for k in range(samples):
        alphabet = (RANK2, RANK3)[k % 2]
        spec = _lcs(alphabet)
        d = 1 + k % 4
        w = random_word_of_degree(spec, d, rng)
        degs = [series_degree(w.commutator(x), spec, d + 2).lower for x in alphabet.generators()]
        bad += min(degs) != d + 1
    return bad == 0, f"{samples} words of degree 1..4, {bad} failures"


def formality(samples: int = 30, cap: int = 5, seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    spec = _lcs(RANK2)
    standard = standard_expansion(RANK2, cap)
    perturbed = standard.with_tail("a", parse_lie("[a,b]", RANK2, RATIONALS).scale(Fraction(3, 2)))
    target = free_eglie(RANK2, RATIONALS)
    bad = done = 0
    while done < samples:
        f = random_filtered_automorphism(spec, rng.randint(1, 2), rng)
        fa = FilteredAut(f, spec, cap)
        if not fa.degree.is_exact:
            continue
        done += 1
        expected = tau(fa).to_ring(target)
        for theta in (standard, perturbed):
            t = rho(theta, f)
            bad += t.leading_degree != int(fa.degree) or t.leading() != expected
    return bad == 0, f"{samples} automorphisms x 2 expansions, {bad} mismatches"


def bch_law(pairs: int = 20, cap: int = 4, seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    spec = _lcs(RANK2)
    theta = standard_expansion(RANK2, cap)
    bad = 0
    for _ in range(pairs):
        f = random_filtered_automorphism(spec, rng.randint(1, 2), rng)
        g = random_filtered_automorphism(spec, rng.randint(1, 2), rng)
        bad += rho(theta, compose_maps(f, g)) != bch_product(rho(theta, f), rho(theta, g))
    a, b = RANK2.generators()
    d, e = rho(theta, inner(a)), rho(theta, inner(b))
    prod = bch_product(d, e)
    half = der_bracket(d.component(1), e.component(1)).scale(Fraction(1, 2))
    hand = prod.component(2) == half == adjoint(parse_lie("[a,b]", RANK2, RATIONALS), d.parent).scale(Fraction(1, 2))
    return bad == 0 and hand, f"{pairs} pairs, {bad} mismatches; conj_a . conj_b degree-2 term is 1/2[d,e]: {hand}"


def quillen(samples: int = 50, seed: int = 0) -> tuple[bool, str]:
    rep = upsilon_checks(_lcs(RANK2), standard_expansion(RANK2, 6), max_degree=5, samples=samples, seed=seed)
    ranks = ", ".join(f"{r}/{n}" for _, (r, n) in sorted(rep.ranks.items()))
    return rep.ok, f"ranks {ranks}; {len(rep.defects)} defect checks, {len(rep.failures)} failures"


WEIGHTED = Alphabet.of([("a", 1), ("b", 1), ("x", 2)])


def weight_filtration(samples: int = 20, seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    spec = SeriesSpec.weight(WEIGHTED)
    axioms = check_axioms(spec, samples=100, cap=6, seed=seed)
    bad = computed = 0
    while computed < samples:
        f = random_weight_automorphism(WEIGHTED, rng, rng.randint(1, 3))
        fa = FilteredAut(f, spec, 4)
        if not fa.degree.is_exact or int(fa.degree) < 1:
            continue
        computed += 1
        m = int(fa.degree)
        d = tau(fa, m)
        # independent word-level classes of the displacements
        word_level = {i: gr_class(displacement(f, x), spec, m + WEIGHTED.weights[i])
                      for i, x in enumerate(WEIGHTED.generators())}
        ok = {**d.d1, **d.d2} == word_level and not d.is_zero() and check_derivation(d, 5, seed).ok
        bad += not ok
    parent = free_eglie(WEIGHTED, INTEGERS)
    trips = 0
    for k in range(10):
        d = random_derivation(parent, 1 + k % 3, rng)
        trips += extend(truncate(d), parent) == d and truncate(extend(truncate(d), parent)) == truncate(d)
    ok = axioms.ok and bad == 0 and trips == 10
    return ok, (f"axioms: {len(axioms.counterexamples)} counterexamples; {samples} automorphisms, "
                f"{bad} bad tau1/tau2; truncate/extend {trips}/10")


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, str]], float]] = [
    (1, "free Lie dimensions", witt_dimensions, 1),
    (2, "commutator laws", commutator_laws, 5),
    (3, "Lyndon/Magnus oracle", lyndon_oracle, 10),
    (4, "Johnson morphism identities", johnson_suite, 60),
    (5, "adjoint compatibility", adjoint_compat, 30),
    (6, "derivation algebra laws", derivation_laws, 10),
    (7, "Zassenhaus axioms and p-th powers", np_property, 30),
    (8, "kernel of tau_m", kernel_identity, 30),
    (9, "commutator degree lemma", commutator_lemma, 20),
    (10, "formal leading term equals tau", formality, 60),
    (11, "BCH group law", bch_law, 30),
    (12, "Quillen map", quillen, 30),
    (13, "weight filtration", weight_filtration, 30),
]


def run_criterion(number: int) -> CriterionResult:
    num, name, fn, budget = CRITERIA[number - 1]
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # reported, not hidden
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CriterionResult(num, name, ok, detail, time.perf_counter() - start, budget)


def run_all(echo: Callable[[str], None] | None = print) -> list[CriterionResult]:
    results = []
    for num, *_ in CRITERIA:
        res = run_criterion(num)
        if echo:
            echo(res.line())
        results.append(res)
    return results
