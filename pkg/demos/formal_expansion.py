"""Operator logarithms of automorphisms, read through an expansion.

For an automorphism of filtration degree m the logarithm of its conjugated
operator is a sum of derivations of degree m, m+1, ...; the lowest one is the
Johnson image over the rationals, whichever expansion is used.
"""
from fractions import Fraction

from egjohnson.formal import (
    bch_product,
    bch_terms,
    format_tail,
    jfiltration_degree,
    parse_group_ring,
    rho,
    standard_expansion,
)
from egjohnson.freelie import parse_lie
from egjohnson.johnson import FilteredAut, inner, tau
from egjohnson.series import SeriesSpec
from egjohnson.tensor import RATIONALS
from egjohnson.words import Alphabet, compose_maps

ab = Alphabet.of("a b")
spec = SeriesSpec.lower_central(ab)
N = 5

theta = standard_expansion(ab, N)
bent = theta.with_tail("a", parse_lie("[a,b]", ab, RATIONALS).scale(Fraction(3, 2)))

f = inner(ab.word("a b^2"))
print("log of conj_{ab^2} under the exponential expansion:")
print(format_tail(rho(theta, f)))

lead = rho(bent, f).leading()
print("\nleading term under a perturbed expansion matches tau:",
      lead == tau(FilteredAut(f, spec, N)).to_ring(lead.parent))

g = inner(ab.word("b"))
s, t = rho(theta, f), rho(theta, g)
print("\nlog(fg) = bch(log f, log g):", rho(theta, compose_maps(f, g)) == bch_product(s, t))
half = bch_terms(s.leading(), t.leading())["half"]
print("degree-2 part of bch:", bch_product(s, t).component(2) == s.component(2) + t.component(2) + half)

print("\nJ-degrees:")
for text in ("a - 1", "a b - a - b + 1", "[a,b] - 1", "[a,[a,b]] - 1"):
    print(f"  {text:18} {jfiltration_degree(parse_group_ring(text, ab), spec, theta)}")
