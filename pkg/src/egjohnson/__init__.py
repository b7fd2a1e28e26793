"""Exact Johnson homomorphisms for free groups, with extended graded Lie algebras."""

from .eglie import Aut0, Derivation, EgLie, adjoint, der_action, der_bracket
from .formal import bch_product, conjugated_endo, operator_log, rho, standard_expansion
from .freelie import LieElement, lyndon_basis, parse_lie
from .johnson import FilteredAut, filtration_degree, tau, tau0
from .series import SeriesSpec, gr_class, series_degree
from .tensor import INTEGERS, RATIONALS, PrimeField, TruncatedSeries, magnus_expand
from .words import Alphabet, GroupMap, ReducedWord, parse_map, parse_word

__version__ = "0.1.0"

__all__ = [
    "Alphabet", "Aut0", "Derivation", "EgLie", "FilteredAut", "GroupMap", "INTEGERS", "LieElement",
    "PrimeField", "RATIONALS", "ReducedWord", "SeriesSpec", "TruncatedSeries", "adjoint", "bch_product",
    "conjugated_endo", "der_action", "der_bracket", "filtration_degree", "gr_class", "lyndon_basis",
    "magnus_expand", "operator_log", "parse_lie", "parse_map", "parse_word", "rho", "series_degree",
    "standard_expansion", "tau", "tau0",
]
