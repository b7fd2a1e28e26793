"""Hypothesis strategies shared across test modules."""
from hypothesis import strategies as st

from egjohnson.words import Alphabet, ReducedWord

RANK2 = Alphabet.of("a b")
RANK3 = Alphabet.of("a b c")


def letters(rank: int, max_size: int = 10):
    return st.lists(st.tuples(st.integers(0, rank - 1), st.sampled_from((1, -1))), max_size=max_size)


def words(alphabet: Alphabet = RANK2, max_size: int = 10):
    return letters(alphabet.rank, max_size).map(lambda syl: ReducedWord.from_syllables(alphabet, syl))


seeds = st.integers(0, 2**32 - 1)
