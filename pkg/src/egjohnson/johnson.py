"""Johnson filtration degree and Johnson homomorphisms of free-group automorphisms.

For an automorphism ``f`` and a generator ``x`` we write ``[f, x]`` for
``f(x) x^-1`` (the commutator in the holomorph). ``f`` has filtration degree
``>= m`` when ``[f, x]`` lies in ``K_{m + wt(x)}`` for every generator.
Checking generators suffices: ``[f, uv] = [f, u] . ^u [f, v]`` and each
``K_n`` is normal.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache

from .eglie import Aut0, Derivation, EgLie, der_action, der_bracket
from .errors import CapTooSmall, DegreeTooLow, MissingWitness, NotAnAutomorphism
from .freelie import LieElement
from .series import WEIGHT, SeriesSpec, class_of_levels, gr_class, series_degree
from .tensor import CoefficientRing, Degree, MagnusMap
from .words import (
    Alphabet,
    GroupMap,
    ReducedWord,
    apply_map,
    compose_maps,
    map_commutator,
    map_conjugate,
    map_power,
    verify_automorphism,
)


@lru_cache(maxsize=None)
def free_eglie(alphabet: Alphabet, ring: CoefficientRing) -> EgLie:
    """Shared trivial-``L_0`` target for all Johnson images over ``alphabet``."""
    return EgLie.free(alphabet, ring)


def _require_automorphism(f: GroupMap) -> None:
    try:
        ok = verify_automorphism(f)
    except MissingWitness as exc:
        raise NotAnAutomorphism(str(exc)) from None
    if not ok:
        raise NotAnAutomorphism("inverse witness is not a two-sided inverse")


def displacement(f: GroupMap, x: ReducedWord) -> ReducedWord:
    """``[f, x] = f(x) x^-1``."""
    return apply_map(f, x) * x.inverse()


def filtration_degree(f: GroupMap, spec: SeriesSpec, cap: int, check: bool = True) -> Degree:
    """Largest ``m <= cap`` with ``[f, x]`` in ``K_{m + wt(x)}`` for all generators.

    ``AboveCap(cap)`` (meaning ``>= cap``) when every generator passes at
    ``m = cap``. A negative value means ``f`` does not preserve the series.
    ``check=False`` skips the witness test, so endomorphisms are accepted.
    """
    if check:
        _require_automorphism(f)
    alphabet = spec.alphabet
    best = None
    for i, x in enumerate(alphabet.generators()):
        wt = alphabet.weights[i]
        deg = series_degree(displacement(f, x), spec, cap + wt)
        if deg.is_exact:
            m = deg.value - wt
            best = m if best is None else min(best, m)
    if best is None or best >= cap:
        return Degree.above(cap, strict=False)
    return Degree.exact(best)


class FilteredAut:
    """An automorphism with its series, cap and computed filtration degree.

    Holds truncated Magnus images of the map and its witness, so products,
    inverses and commutators are formed without expanding composite words.
    ``f`` is the underlying GroupMap when one is known.
    """

    def __init__(self, f: GroupMap | None, spec: SeriesSpec, cap: int, check: bool = True,
                 magnus: MagnusMap | None = None):
        if f is not None and check:
            _require_automorphism(f)
        self.f = f
        self.spec = spec
        self.cap = cap
        if magnus is None:
            if f is None:
                raise ValueError("need a map or its Magnus images")
            magnus = MagnusMap.from_group_map(f, spec.ring, cap + max(spec.alphabet.weights))
        self.magnus = magnus
        self.degree = _degree_from_magnus(magnus, spec, cap)

    @property
    def alphabet(self) -> Alphabet:
        return self.spec.alphabet

    def _cut(self, cap: int | None, *maps: "FilteredAut") -> tuple[int, list[MagnusMap]]:
        cap = self.cap if cap is None else cap
        top = cap + max(self.spec.alphabet.weights)
        return cap, [a.magnus.truncate(top) for a in maps]

    def _derived(self, magnus: MagnusMap, cap: int) -> "FilteredAut":
        return FilteredAut(None, self.spec, cap, check=False, magnus=magnus)

    def compose(self, other: "FilteredAut", cap: int | None = None) -> "FilteredAut":
        cap, (f, g) = self._cut(cap, self, other)
        return self._derived(f.compose(g), cap)

    def inverse(self, cap: int | None = None) -> "FilteredAut":
        cap, (f,) = self._cut(cap, self)
        return self._derived(f.inverse(), cap)

    def commutator(self, other: "FilteredAut", cap: int | None = None) -> "FilteredAut":
        """``f g f^-1 g^-1``."""
        cap, (f, g) = self._cut(cap, self, other)
        return self._derived(f.compose(g).compose(f.inverse().compose(g.inverse())), cap)

    def conjugated_by(self, h: "FilteredAut", cap: int | None = None) -> "FilteredAut":
        """``h f h^-1``."""
        cap, (f, hm) = self._cut(cap, self, h)
        return self._derived(hm.compose(f).compose(hm.inverse()), cap)

    def at(self, f: GroupMap, cap: int | None = None) -> "FilteredAut":
        """Same series; ``f`` is trusted (built from verified witnesses)."""
        return FilteredAut(f, self.spec, self.cap if cap is None else cap, check=False)

    def __repr__(self) -> str:
        return f"FilteredAut(degree={self.degree}, spec={self.spec}, cap={self.cap})"


def _degree_from_magnus(magnus: MagnusMap, spec: SeriesSpec, cap: int) -> Degree:
    best = None
    for i, wt in enumerate(spec.alphabet.weights):
        deg = magnus.displacement(i).valuation()
        if deg.is_exact:
            m = deg.value - wt
            best = m if best is None else min(best, m)
    if best is None or best >= cap:
        return Degree.above(cap, strict=False)
    return Degree.exact(best)


def _lie_target(spec: SeriesSpec) -> EgLie:
    return free_eglie(spec.alphabet, spec.ring)


def tau(fa: FilteredAut, m: int | None = None) -> Derivation:
    """Johnson image ``tau_m(f)``: ``x -> class of [f, x]`` in degree ``m + wt(x)``.

    ``m`` defaults to the exact filtration degree. For the Zassenhaus series
    a class can be a restricted power rather than a Lie element, which
    surfaces as NotALieElement.
    """
    deg = fa.degree
    if m is None:
        if not deg.is_exact:
            raise CapTooSmall(f"filtration degree is {deg}; pass m explicitly")
        m = deg.value
    if m < 1:
        raise DegreeTooLow(f"tau_m needs m >= 1 (filtration degree is {deg})")
    if not deg.at_least(m):
        raise DegreeTooLow(f"automorphism has filtration degree {deg} < {m}")
    spec = fa.spec
    values = {}
    for i, wt in enumerate(spec.alphabet.weights):
        if m + wt > fa.magnus.cap:
            raise CapTooSmall(f"class in degree {m + wt} needs a larger cap")
        values[i] = class_of_levels(fa.magnus.displacement(i), spec, m + wt)
    return Derivation(_lie_target(spec), m, values)


def tau0(f: GroupMap, spec: SeriesSpec, check: bool = True) -> Aut0:
    """Induced graded automorphism on generator classes.

    Each generator ``x`` goes to the class of ``f(x)`` in degree ``wt(x)``;
    for the weight series that is the degree-1 block plus a degree-2 block.
    """
    if check:
        _require_automorphism(f)
    parent = _lie_target(spec)
    inv = f.witness_map()

    def induced(g: GroupMap) -> dict[int, LieElement]:
        out = {}
        for i, x in enumerate(spec.alphabet.generators()):
            out[i] = gr_class(apply_map(g, x), spec, spec.alphabet.weights[i])
        return out

    try:
        return Aut0(parent, induced(f), induced(inv))
    except DegreeTooLow:
        raise NotAnAutomorphism("map does not preserve the series") from None


def tau0_matrix(f: GroupMap, spec: SeriesSpec) -> list[list]:
    return tau0(f, spec).matrix()


# ---------------------------------------------------------------------------
# identities


@dataclass
class IdentityReport:
    results: list[tuple[str, bool, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.results)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.results.append((name, ok, detail))

    def failures(self) -> list[tuple[str, bool, str]]:
        return [r for r in self.results if not r[1]]

    def __str__(self) -> str:
        return "\n".join(f"({n}) {'ok' if ok else 'FAIL'}{': ' + d if d else ''}" for n, ok, d in self.results)


def verify_morphism_identities(fa: FilteredAut, ga: FilteredAut, h: GroupMap,
                               m: int | None = None, n: int | None = None) -> IdentityReport:
    """Check the five Johnson-morphism identities exactly on one input triple.

    (i) ``deg [f, g] >= m + n``; (ii) ``tau_k(fg) = tau_k(f) + tau_k(g)`` with
    ``k = min(m, n)``; (iii) ``tau_{m+n}([f, g]) = [tau_m f, tau_n g]``;
    (iv) ``tau_m(h f h^-1) = ^{tau0(h)} tau_m(f)``; (v) ``tau_j(f) = 0`` iff
    ``deg f >= j + 1`` for ``j = m`` and ``j = m - 1``.
    """
    spec, cap = fa.spec, fa.cap
    m = int(fa.degree) if m is None else m
    n = int(ga.degree) if n is None else n
    rep = IdentityReport()
    if m + n > cap:
        raise CapTooSmall(f"cap {cap} < m + n = {m + n}")

    comm = fa.commutator(ga, m + n)
    rep.add("i", comm.degree.at_least(m + n), f"deg [f,g] = {comm.degree}, m + n = {m + n}")

    k = min(m, n)
    prod = fa.compose(ga, k)
    lhs = tau(prod, k)
    rhs = tau(fa, k) + tau(ga, k)
    rep.add("ii", lhs == rhs, f"k = {k}")

    tf, tg = tau(fa, m), tau(ga, n)
    lhs = tau(comm, m + n)
    rhs = der_bracket(tf, tg)
    rep.add("iii", lhs == rhs, f"degree {m + n}")

    conj = fa.conjugated_by(FilteredAut(h, spec, m), m)
    lhs = tau(conj, m)
    rhs = der_action(tau0(h, spec), tf)
    rep.add("iv", lhs == rhs, f"degree {m}")

    ok = True
    for j in (m, m - 1):
        if j < 1:
            continue
        zero = tau(fa, j).is_zero()
        deeper = fa.degree.at_least(j + 1)
        ok &= zero == deeper
    rep.add("v", ok, f"deg f = {fa.degree}")
    return rep


# ---------------------------------------------------------------------------
# automorphism samplers


def inner(w: ReducedWord) -> GroupMap:
    """``conj_w``: ``x -> w x w^-1``."""
    return GroupMap.inner(w)


def transvection(alphabet: Alphabet, i: int, w: ReducedWord, left: bool = False) -> GroupMap:
    """``x_i -> x_i w`` (or ``w x_i``), ``w`` free of ``x_i``."""
    if any(g == i for g, _ in w.syllables):
        raise ValueError("transvection word must not involve the moved generator")
    x = alphabet.generator(i)
    images = list(alphabet.generators())
    inverse = list(alphabet.generators())
    images[i] = w * x if left else x * w
    inverse[i] = w.inverse() * x if left else x * w.inverse()
    return GroupMap(alphabet, tuple(images), tuple(inverse))


def partial_conjugation(alphabet: Alphabet, i: int, w: ReducedWord) -> GroupMap:
    """``x_i -> w x_i w^-1``, ``w`` free of ``x_i``."""
    if any(g == i for g, _ in w.syllables):
        raise ValueError("conjugating word must not involve the moved generator")
    x = alphabet.generator(i)
    images = list(alphabet.generators())
    inverse = list(alphabet.generators())
    images[i] = w.conjugate(x)
    inverse[i] = w.inverse().conjugate(x)
    return GroupMap(alphabet, tuple(images), tuple(inverse))


def random_nielsen(alphabet: Alphabet, rng: random.Random, steps: int = 2) -> GroupMap:
    """Product of elementary Nielsen moves (inversions, transvections, permutations)."""
    f = GroupMap.identity(alphabet)
    r = alphabet.rank
    for _ in range(steps):
        kind = rng.randrange(3)
        i = rng.randrange(r)
        if kind == 0 and r > 1:
            j = rng.choice([k for k in range(r) if k != i])
            move = transvection(alphabet, i, alphabet.generator(j) ** rng.choice((1, -1)), rng.random() < 0.5)
        elif kind == 1:
            images = list(alphabet.generators())
            images[i] = images[i].inverse()
            move = GroupMap(alphabet, tuple(images), tuple(images))
        else:
            j = rng.randrange(r)
            gens = list(alphabet.generators())
            gens[i], gens[j] = gens[j], gens[i]
            move = GroupMap(alphabet, tuple(gens), tuple(gens))
        f = compose_maps(f, move)
    return f


def basic_commutator(letters: list[ReducedWord]) -> ReducedWord:
    """Right-normed ``[l1, [l2, [..., lk]]]``."""
    w = letters[-1]
    for x in reversed(letters[:-1]):
        w = x.commutator(w)
    return w


def random_basic_commutator(spec: SeriesSpec, d: int, rng: random.Random,
                            avoid: int | None = None, tries: int = 200) -> ReducedWord:
    """Right-normed commutator of generators (or inverses) of degree exactly ``d``.

    Degrees are lower central (weighted for the weight series) even for
    Zassenhaus specs; there the filtration degree can only be larger.
    """
    alphabet = spec.alphabet
    pool = [i for i in range(alphabet.rank) if i != avoid]
    probe = spec if spec.variant == WEIGHT else SeriesSpec.lower_central(alphabet)
    for _ in range(tries):
        letters, left = [], d
        while left > 0:
            choices = [i for i in pool if alphabet.weights[i] <= left]
            if not choices:
                break
            i = rng.choice(choices)
            letters.append(alphabet.generator(i) ** rng.choice((1, -1)))
            left -= alphabet.weights[i]
        if left or not letters:
            continue
        w = basic_commutator(letters)
        deg = series_degree(w, probe, d + 1)
        if deg.is_exact and deg.value == d:
            return w
    raise RuntimeError(f"no basic commutator of degree {d}")


def random_filtered_automorphism(spec: SeriesSpec, m: int, rng: random.Random,
                                 nielsen: float = 0.5) -> GroupMap:
    """Random automorphism of filtration degree ``>= m`` (usually exactly ``m``).

    Inner automorphisms by basic commutators, plus, in rank >= 3,
    transvections ``x_i -> x_i w`` and partial conjugations ``x_i -> w x_i w^-1``
    with ``w`` free of ``x_i``. With probability ``nielsen`` the result is
    conjugated by one elementary Nielsen move.
    """
    alphabet = spec.alphabet
    r = alphabet.rank
    parts = []
    for _ in range(rng.randint(1, 2)):
        kind = rng.randrange(3) if r > 2 and spec.variant != WEIGHT else 0
        if kind == 0:
            parts.append(inner(random_basic_commutator(spec, m, rng)))
            continue
        i = rng.randrange(r)
        if kind == 1:
            w = random_basic_commutator(spec, m + 1, rng, avoid=i)
            parts.append(transvection(alphabet, i, w, rng.random() < 0.5))
        else:
            parts.append(partial_conjugation(alphabet, i, random_basic_commutator(spec, m, rng, avoid=i)))
    f = parts[0]
    for p in parts[1:]:
        f = compose_maps(f, p)
    if spec.variant != WEIGHT and rng.random() < nielsen:
        f = map_conjugate(random_nielsen(alphabet, rng, 1), f)
    return f


def weight_generator_moves(alphabet: Alphabet) -> list[GroupMap]:
    """Elementary automorphisms preserving the weight structure.

    ``y -> y x^{+-1}`` for weight-1 ``y`` and weight-2 ``x``,
    ``x -> y x y^-1``, and inner automorphisms by generators.
    """
    light = [i for i, w in enumerate(alphabet.weights) if w == 1]
    heavy = [i for i, w in enumerate(alphabet.weights) if w == 2]
    moves = []
    for i in light:
        for j in heavy:
            for s in (1, -1):
                moves.append(transvection(alphabet, i, alphabet.generator(j) ** s))
    for j in heavy:
        for i in light:
            moves.append(partial_conjugation(alphabet, j, alphabet.generator(i)))
    for g in alphabet.generators():
        moves.append(inner(g))
    return moves


def random_weight_automorphism(alphabet: Alphabet, rng: random.Random, steps: int = 2) -> GroupMap:
    moves = weight_generator_moves(alphabet)
    f = GroupMap.identity(alphabet)
    for _ in range(steps):
        g = rng.choice(moves)
        f = compose_maps(f, g if rng.random() < 0.5 else g.witness_map())
    return f


def zassenhaus_power_transvection(alphabet: Alphabet, p: int, i: int = 0, j: int = 1, k: int = 1) -> GroupMap:
    """``x_i -> x_i x_j^(k p)``: Zassenhaus degree ``p - 1`` when ``p`` does not divide ``k``."""
    return transvection(alphabet, i, alphabet.generator(j) ** (k * p))


def power(f: GroupMap, k: int) -> GroupMap:
    return map_power(f, k)
