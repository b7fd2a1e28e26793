"""Filtration-degree oracles for N-series of a free group.

Every oracle is the valuation of a Magnus-type expansion ``x -> 1 + X``:

* ``lcs``: lower central series, integer coefficients. For free groups the
  rational lower central series coincides with the lower central series, and
  ``(1 + I^{m+1}) ∩ K`` is exactly its m+1st term.
* ``zassenhaus:p``: Zassenhaus mod-p series, coefficients in F_p.
* ``weight``: the series generated by weight-1 and weight-2 generators,
  measured by weighted degree over Q. This weighted valuation is taken as the
  definition of the implemented filtration. It contains the recursively
  defined series ``K_m = [K_{m-1}, K_1][K_{m-2}, K_2]`` (checked by
  :func:`check_axioms`) and agrees with it rationally; integral equality is
  not claimed.

All answers are cap-bounded: exact below the cap, ``AboveCap(N)`` otherwise.
The Stallings mod-p series has no oracle here.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping

from .errors import DegreeTooLow
from .freelie import LieElement, tensor_to_lie
from .tensor import (
    INTEGERS,
    RATIONALS,
    CoefficientRing,
    Degree,
    MagnusLevels,
    PrimeField,
)
from .words import Alphabet, ReducedWord

LOWER_CENTRAL = "lcs"
ZASSENHAUS = "zassenhaus"
WEIGHT = "weight"


@dataclass(frozen=True)
class SeriesSpec:
    variant: str
    alphabet: Alphabet
    p: int | None = None
    # test-only hook: pretend these words have the given degree
    degree_overrides: tuple[tuple[ReducedWord, int], ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.variant not in (LOWER_CENTRAL, ZASSENHAUS, WEIGHT):
            raise ValueError(f"unknown series variant {self.variant!r}")
        if self.variant == ZASSENHAUS:
            PrimeField(self.p)  # validates primality
        elif self.p is not None:
            raise ValueError("only the Zassenhaus series takes p")
        if self.variant == WEIGHT:
            if 1 not in self.alphabet.weights:
                raise ValueError("the weight series needs a weight-1 generator")
            if max(self.alphabet.weights) > 2:
                raise ValueError("the weight series uses weights 1 and 2 only")
        elif self.alphabet.is_weighted:
            raise ValueError(f"{self.variant} needs an unweighted alphabet")

    @classmethod
    def lower_central(cls, alphabet: Alphabet) -> "SeriesSpec":
        return cls(LOWER_CENTRAL, alphabet)

    @classmethod
    def zassenhaus(cls, alphabet: Alphabet, p: int) -> "SeriesSpec":
        return cls(ZASSENHAUS, alphabet, p)

    @classmethod
    def weight(cls, alphabet: Alphabet) -> "SeriesSpec":
        return cls(WEIGHT, alphabet)

    @classmethod
    def parse(cls, flag: str, alphabet: Alphabet) -> "SeriesSpec":
        """``lcs``, ``zassenhaus:P`` or ``weight``."""
        if flag == LOWER_CENTRAL:
            return cls.lower_central(alphabet)
        if flag == WEIGHT:
            return cls.weight(alphabet)
        if flag.startswith(ZASSENHAUS + ":"):
            return cls.zassenhaus(alphabet, int(flag.split(":", 1)[1]))
        raise ValueError(f"unknown series {flag!r}; expected lcs, zassenhaus:P or weight")

    @property
    def ring(self) -> CoefficientRing:
        if self.variant == LOWER_CENTRAL:
            return INTEGERS
        if self.variant == ZASSENHAUS:
            return PrimeField(self.p)
        return RATIONALS

    def weight_of(self, i: int) -> int:
        return self.alphabet.weights[i]

    def with_overrides(self, overrides: Mapping[ReducedWord, int]) -> "SeriesSpec":
        return SeriesSpec(self.variant, self.alphabet, self.p, tuple(overrides.items()))

    def __str__(self) -> str:
        return f"{self.variant}:{self.p}" if self.p else self.variant


def series_degree(w: ReducedWord, spec: SeriesSpec, cap: int) -> Degree:
    """Largest m <= cap with ``w`` in the m-th term, or AboveCap / Infinity."""
    if w.is_identity():
        return Degree.infinity()
    for word, d in spec.degree_overrides:
        if word == w:
            return Degree.exact(d)
    return MagnusLevels(w, spec.ring, cap).valuation()


def gr_class(w: ReducedWord, spec: SeriesSpec, m: int) -> LieElement:
    """Class of ``w`` in the m-th graded quotient, in Lyndon coordinates.

    Zero when ``w`` lies deeper than ``m``. For the Zassenhaus series a class
    may be a restricted p-th power rather than a Lie element; that surfaces as
    NotALieElement.
    """
    ring = spec.ring
    if w.is_identity():
        return LieElement.zero(spec.alphabet, ring)
    return class_of_levels(MagnusLevels(w, ring, m), spec, m)


def class_of_levels(levels: MagnusLevels, spec: SeriesSpec, m: int) -> LieElement:
    """:func:`gr_class` from an already computed Magnus expansion (cap >= m)."""
    ring = spec.ring
    deg = levels.valuation()
    if deg.is_exact and deg.value < m:
        raise DegreeTooLow(f"word has degree {deg.value} < {m}")
    if deg.is_above_cap:
        return LieElement.zero(spec.alphabet, ring)
    return tensor_to_lie(levels.homogeneous_terms(m), m, spec.alphabet, ring)


# ---------------------------------------------------------------------------
# sampling


def random_word(alphabet: Alphabet, rng: random.Random, max_length: int = 6,
                min_length: int = 0) -> ReducedWord:
    n = rng.randint(min_length, max_length)
    syl = [(rng.randrange(alphabet.rank), rng.choice((-1, 1))) for _ in range(n)]
    return ReducedWord.from_syllables(alphabet, syl)


def random_commutator(alphabet: Alphabet, d: int, rng: random.Random, base_length: int = 2) -> ReducedWord:
    """A random left/right nested commutator of ``d`` short words (LCS degree >= d)."""
    if d <= 1:
        w = random_word(alphabet, rng, base_length, 1)
        return w if not w.is_identity() else alphabet.generator(rng.randrange(alphabet.rank))
    k = rng.randint(1, d - 1)
    u = random_commutator(alphabet, k, rng, base_length)
    v = random_commutator(alphabet, d - k, rng, base_length)
    return u.commutator(v)


def random_word_of_degree(spec: SeriesSpec, d: int, rng: random.Random, cap: int | None = None,
                          tries: int = 200) -> ReducedWord:
    """Random word whose (lcs or weight) degree is exactly ``d``."""
    cap = d + 1 if cap is None else cap
    alphabet = spec.alphabet
    for _ in range(tries):
        if spec.variant == WEIGHT:
            w = random_weight_element(alphabet, d, rng)
        else:
            w = random_commutator(alphabet, d, rng, base_length=rng.choice((1, 1, 2)))
        if rng.random() < 0.5:
            # multiply by something deeper
            extra = random_commutator(alphabet, d + 1, rng, 1) if spec.variant != WEIGHT else \
                random_weight_element(alphabet, d + 1, rng)
            w = w * extra
        if rng.random() < 0.3:
            g = random_word(alphabet, rng, 2)
            w = g.conjugate(w)
        deg = series_degree(w, spec, cap)
        if deg.is_exact and deg.value == d:
            return w
    raise RuntimeError(f"could not sample a word of degree {d}")


def random_weight_element(alphabet: Alphabet, m: int, rng: random.Random) -> ReducedWord:
    """Random element of the recursively generated weight series term K_m.

    K_1 is everything, K_2 is generated by weight-2 generators (and their
    conjugates) together with commutators, and
    K_m = [K_{m-1}, K_1] [K_{m-2}, K_2].
    """
    heavy = [i for i, w in enumerate(alphabet.weights) if w == 2]
    if m <= 1:
        w = random_word(alphabet, rng, 2, 1)
        return w if not w.is_identity() else alphabet.generator(rng.randrange(alphabet.rank))
    if m == 2:
        if heavy and rng.random() < 0.6:
            x = alphabet.generator(rng.choice(heavy)) ** rng.choice((-1, 1))
            return random_word(alphabet, rng, 1).conjugate(x)
        return random_weight_element(alphabet, 1, rng).commutator(random_weight_element(alphabet, 1, rng))
    if rng.random() < 0.5:
        u, v = random_weight_element(alphabet, m - 1, rng), random_weight_element(alphabet, 1, rng)
    else:
        u, v = random_weight_element(alphabet, m - 2, rng), random_weight_element(alphabet, 2, rng)
    return u.commutator(v) if rng.random() < 0.5 else v.commutator(u)


# ---------------------------------------------------------------------------
# axiom harness


@dataclass
class AxiomReport:
    spec: SeriesSpec
    checked: int = 0
    skipped: int = 0
    counterexamples: list[tuple[str, tuple[ReducedWord, ...], str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def __str__(self) -> str:
        lines = [f"{self.spec}: {self.checked} checks, {self.skipped} undecidable under cap, "
                 f"{len(self.counterexamples)} counterexamples"]
        for kind, words, detail in self.counterexamples:
            lines.append(f"  {kind}: {', '.join(map(str, words))} ({detail})")
        return "\n".join(lines)


def _record(report: AxiomReport, deg: Degree, need: int, kind: str, words, detail: str) -> None:
    if deg.is_above_cap and deg.lower < need:
        report.skipped += 1
        return
    report.checked += 1
    if deg.lower < need:
        report.counterexamples.append((kind, tuple(words), f"{detail}: degree {deg} < {need}"))


def check_axioms(spec: SeriesSpec, samples: int = 200, cap: int = 6, seed: int = 0) -> AxiomReport:
    """Sampled check of the N-series axioms for a shipped oracle.

    * ``[K_i, K_j] <= K_{i+j}`` on all generator pairs plus random pairs;
    * Zassenhaus: ``(K_i)^p <= K_{ip}``;
    * weight: recursively built generators of ``K_m`` have degree >= m.
    """
    rng = random.Random(seed)
    alphabet = spec.alphabet
    report = AxiomReport(spec)
    gens = alphabet.generators()
    pairs = [(u, v) for u in gens for v in gens if u != v]
    while len(pairs) < samples:
        d1, d2 = rng.randint(1, 3), rng.randint(1, 3)
        if spec.variant == WEIGHT:
            u, v = random_weight_element(alphabet, d1, rng), random_weight_element(alphabet, d2, rng)
        else:
            u = random_commutator(alphabet, d1, rng, rng.choice((1, 2)))
            v = random_commutator(alphabet, d2, rng, rng.choice((1, 2)))
        if rng.random() < 0.3:
            u = random_word(alphabet, rng, 2).conjugate(u)
        pairs.append((u, v))
    for u, v in pairs:
        du, dv = series_degree(u, spec, cap), series_degree(v, spec, cap)
        if not (du.is_exact and dv.is_exact):
            report.skipped += 1
            continue
        need = du.value + dv.value
        _record(report, series_degree(u.commutator(v), spec, cap), need, "bracket", (u, v),
                f"deg u = {du}, deg v = {dv}")
        _record(report, series_degree(u * v, spec, cap), min(du.value, dv.value), "product", (u, v),
                f"deg u = {du}, deg v = {dv}")
    if spec.variant == ZASSENHAUS:
        p = spec.p
        cands = list(gens) + [u for u, _ in pairs[: samples // 2]]
        for u in cands:
            du = series_degree(u, spec, cap)
            if not du.is_exact:
                report.skipped += 1
                continue
            _record(report, series_degree(u ** p, spec, cap), du.value * p, "p-power", (u,),
                    f"deg u = {du}")
    if spec.variant == WEIGHT:
        for m in range(1, cap + 1):
            for _ in range(max(4, samples // (2 * cap))):
                w = random_weight_element(alphabet, m, rng)
                _record(report, series_degree(w, spec, cap), m, f"K_{m} generator", (w,), f"m = {m}")
    return report
