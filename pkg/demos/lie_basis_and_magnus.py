"""Lyndon bases, Magnus expansions and how words land in the graded Lie algebra.

Run with ``python3 demos/lie_basis_and_magnus.py``.
"""
from egjohnson.freelie import format_lie, lyndon_basis, tree_word
from egjohnson.series import SeriesSpec, gr_class, series_degree
from egjohnson.tensor import INTEGERS, format_series, magnus_expand
from egjohnson.words import Alphabet

ab = Alphabet.of("a b")
lcs = SeriesSpec.lower_central(ab)

print("Lyndon basis sizes in rank 2:", [len(lyndon_basis(ab, d)) for d in range(1, 9)])

# Each basis bracketing, read as a group commutator, sits exactly in its own degree.
for w, tree in lyndon_basis(ab, 4).entries:
    word = tree_word(tree, ab)
    print(f"  {word}: degree {series_degree(word, lcs, 6)}, class {format_lie(gr_class(word, lcs, 4))}")

print()
print("Magnus expansion of [a,b] up to degree 3:")
print(format_series(magnus_expand(ab.word("[a,b]"), INTEGERS, 3)))

# Long words are fine: the expansion is computed syllable by syllable.
big = ab.word("a^1000 b^-700 a^-1000 b^700")
print("\nlcs degree of a^1000 b^-700 a^-1000 b^700:", series_degree(big, lcs, 4))
print("its class:", format_lie(gr_class(big, lcs, 2)))
