"""Johnson images of a few automorphisms of the free group on a, b, c.

Inner automorphisms map to adjoint derivations, commutators of automorphisms
map to brackets, and conjugating by another automorphism acts through tau0.
"""
import random

from egjohnson.eglie import adjoint, der_action, der_bracket, format_derivation
from egjohnson.freelie import parse_lie
from egjohnson.johnson import (
    FilteredAut,
    free_eglie,
    inner,
    partial_conjugation,
    random_nielsen,
    tau,
    tau0,
    verify_morphism_identities,
)
from egjohnson.series import SeriesSpec
from egjohnson.tensor import INTEGERS
from egjohnson.words import Alphabet

abc = Alphabet.of("a b c")
spec = SeriesSpec.lower_central(abc)
lie = free_eglie(abc, INTEGERS)
N = 6

conj_a = FilteredAut(inner(abc.word("a")), spec, N)
print("conj_a has degree", conj_a.degree)
print(format_derivation(tau(conj_a)))
print("equals ad(a):", tau(conj_a) == adjoint(parse_lie("a", abc), lie))

# b -> c b c^-1 is not inner, but still acts trivially on the abelianization.
pc = FilteredAut(partial_conjugation(abc, 1, abc.word("c")), spec, N)
print("\npartial conjugation of b by c, degree", pc.degree)
print(format_derivation(tau(pc)))

# conj_a commutes with pc (pc fixes a), so pair pc with conj_b instead.
conj_b = FilteredAut(inner(abc.word("b")), spec, N)
comm = conj_b.commutator(pc)
print("\n[conj_b, pc] has degree", comm.degree)
print(format_derivation(tau(comm)))
print("tau of the commutator is the bracket:", tau(comm) == der_bracket(tau(conj_b), tau(pc)))

h = random_nielsen(abc, random.Random(3))
print("\nconjugating by", h)
moved = tau(pc.conjugated_by(FilteredAut(h, spec, N)))
print("matches the tau0 action:", moved == der_action(tau0(h, spec), tau(pc)))

rep = verify_morphism_identities(conj_b, pc, h)
print("\nall five identities on this triple:")
print(rep)
