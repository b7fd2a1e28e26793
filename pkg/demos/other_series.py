"""The same questions for the mod-p Zassenhaus series and a weighted series.

Over F_p a p-th power drops into a deeper term, so x -> x y^p moves x only
slightly; with a weight-2 generator x, a -> a x has degree 1.
"""
import random

from egjohnson.eglie import format_derivation, truncate, extend
from egjohnson.johnson import (
    FilteredAut,
    filtration_degree,
    power,
    random_weight_automorphism,
    tau,
    zassenhaus_power_transvection,
)
from egjohnson.series import SeriesSpec, check_axioms, series_degree
from egjohnson.words import Alphabet, GroupMap

ab = Alphabet.of("a b")
for p in (2, 3):
    z = SeriesSpec.zassenhaus(ab, p)
    f = zassenhaus_power_transvection(ab, p)
    print(f"p={p}: deg a^{p} = {series_degree(ab.word(f'a^{p}'), z, 6)}, "
          f"a -> a b^{p} has degree {filtration_degree(f, z, 6)}, "
          f"f^{p} has degree {filtration_degree(power(f, p), z, 6)}")
    print("   axioms:", check_axioms(z, samples=50, cap=6))

abx = Alphabet.of([("a", 1), ("b", 1), ("x", 2)])
w = SeriesSpec.weight(abx)
print("\nweighted alphabet a, b (1) and x (2):", check_axioms(w, samples=50, cap=6))
f = GroupMap.from_strings(abx, {"a": "a x"}, {"a": "a x^-1"})
fa = FilteredAut(f, w, 5)
print("a -> a x has degree", fa.degree)
print(format_derivation(tau(fa)))

rng = random.Random(1)
g = random_weight_automorphism(abx, rng)
print("\na random weight-preserving automorphism:", g)
print("degree:", filtration_degree(g, w, 5))
d = tau(fa)
print("truncate then extend gives back the derivation:", extend(truncate(d), d.parent) == d)
