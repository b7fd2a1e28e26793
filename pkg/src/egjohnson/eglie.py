"""Extended graded Lie algebras and their derivations.

An :class:`EgLie` is a free Lie algebra on a weighted alphabet (weights 1 and
2) together with a degree-0 group ``L_0``: a finitely presented group acting
by graded automorphisms. A degree-m :class:`Derivation` is stored by its
values on generators only: a 1-cocycle on the ``L_0`` generators plus the
images of the positive generators. Because the positive part is free, these
values determine the derivation and every compatible choice extends.

Conventions: ``^g u`` is the action of ``g`` in ``L_0``; for ``x`` positive
and ``g`` in ``L_0`` the mixed bracket is ``[x, g] = x - ^g x``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import IncompatiblePair, NotHomogeneous, StructureMismatch
from .freelie import (
    LieElement,
    bracketing,
    lie_bracket,
    random_lie_element,
    standard_factorization,
    substitute,
)
from .tensor import INTEGERS, CoefficientRing
from .words import Alphabet, GroupMap, ReducedWord, apply_map

Images = Mapping[int, LieElement]


def _check_images(alphabet: Alphabet, images: Images, shift: int, what: str) -> dict[int, LieElement]:
    out = {}
    for i, v in images.items():
        if v.is_zero():
            continue
        want = alphabet.weights[i] + shift
        if v.degrees() != [want]:
            raise NotHomogeneous(f"{what} of {alphabet.names[i]} must have degree {want}, got {v.degrees()}")
        out[i] = v
    return out


class EgLie:
    """Free positive part on ``alphabet`` plus a degree-0 group acting on it.

    ``action[k] = (images, inverse_images)`` gives the automorphism by which
    the k-th ``L_0`` generator acts, on positive generators.
    """

    def __init__(self, alphabet: Alphabet, ring: CoefficientRing = INTEGERS,
                 l0: Alphabet | None = None, relations: Iterable[ReducedWord] = (),
                 action: Iterable[tuple[Images, Images]] = ()):
        self.alphabet = alphabet
        self.ring = ring
        self.l0 = l0
        self.relations = tuple(relations)
        action = [(_check_images(alphabet, im, 0, "action image"),
                   _check_images(alphabet, inv, 0, "inverse action image")) for im, inv in action]
        if l0 is None:
            if action or self.relations:
                raise StructureMismatch("action data given for a trivial L_0")
        elif len(action) != l0.rank:
            raise StructureMismatch("one action automorphism per L_0 generator is required")
        self.action = tuple(action)
        self._validate()

    @classmethod
    def free(cls, alphabet: Alphabet, ring: CoefficientRing = INTEGERS) -> "EgLie":
        return cls(alphabet, ring)

    @property
    def trivial_l0(self) -> bool:
        return self.l0 is None

    def generator(self, name: str | int) -> LieElement:
        return LieElement.generator(self.alphabet, name, self.ring)

    def generators(self) -> list[LieElement]:
        return [self.generator(i) for i in range(self.alphabet.rank)]

    def l0_word(self, text: str) -> ReducedWord:
        if self.l0 is None:
            raise StructureMismatch("L_0 is trivial")
        return self.l0.word(text)

    def _validate(self) -> None:
        gens = self.generators()
        for k, (im, inv) in enumerate(self.action):
            for i, x in enumerate(gens):
                there = substitute(self._img(im, i), inv)
                back = substitute(self._img(inv, i), im)
                if there != x or back != x:
                    raise StructureMismatch(f"action of {self.l0.names[k]} is not invertible on {x}")
        for r in self.relations:
            for x in gens:
                if self.act(r, x) != x:
                    raise StructureMismatch(f"relation {r} does not act trivially on {x}")

    def _img(self, images: Images, i: int) -> LieElement:
        v = images.get(i)
        return self.generator(i) if v is None else v

    def act(self, g: ReducedWord, u: LieElement) -> LieElement:
        """``^g u`` for an ``L_0`` word ``g``."""
        if g.is_identity() or u.is_zero():
            return u
        for t, e in reversed(g.syllables):
            images = self.action[t][0 if e > 0 else 1]
            full = {i: self._img(images, i) for i in range(self.alphabet.rank)}
            for _ in range(abs(e)):
                u = substitute(u, full)
        return u

    def same_as(self, other: "EgLie") -> bool:
        return self is other


# ---------------------------------------------------------------------------
# derivations


class Derivation:
    """Degree-m derivation, stored by generator values.

    ``d0[k]`` is the cocycle value on the k-th ``L_0`` generator (degree m);
    ``values[i]`` is the image of positive generator i (degree m + weight).
    """

    def __init__(self, parent: EgLie, degree: int, values: Images | None = None,
                 d0: Images | None = None):
        if degree < 1:
            raise ValueError("derivations have degree >= 1")
        self.parent = parent
        self.degree = degree
        self.values = _check_images(parent.alphabet, values or {}, degree, "derivation value")
        if d0 and parent.trivial_l0:
            if any(not v.is_zero() for v in d0.values()):
                raise StructureMismatch("cocycle values given for a trivial L_0")
            d0 = {}
        self.d0 = {}
        for k, v in (d0 or {}).items():
            if v.is_zero():
                continue
            if v.degrees() != [degree]:
                raise NotHomogeneous(f"cocycle value must have degree {degree}, got {v.degrees()}")
            self.d0[k] = v
        for v in list(self.values.values()) + list(self.d0.values()):
            if v.ring != parent.ring or v.alphabet != parent.alphabet:
                raise StructureMismatch("value over a different ring or alphabet")
        self._memo: dict[tuple, LieElement] = {}

    # views --------------------------------------------------------------
    def value(self, i: int) -> LieElement:
        return self.values.get(i) or LieElement.zero(self.parent.alphabet, self.parent.ring)

    def cocycle_value(self, k: int) -> LieElement:
        return self.d0.get(k) or LieElement.zero(self.parent.alphabet, self.parent.ring)

    @property
    def d1(self) -> dict[int, LieElement]:
        w = self.parent.alphabet.weights
        return {i: self.value(i) for i in range(len(w)) if w[i] == 1}

    @property
    def d2(self) -> dict[int, LieElement]:
        w = self.parent.alphabet.weights
        return {i: self.value(i) for i in range(len(w)) if w[i] == 2}

    def is_zero(self) -> bool:
        return not self.values and not self.d0

    # evaluation -------------------------------------------------------
    def __call__(self, target: LieElement | ReducedWord) -> LieElement:
        return eval_derivation(self, target)

    def _basis(self, w: tuple[int, ...]) -> LieElement:
        r = self._memo.get(w)
        if r is None:
            if len(w) == 1:
                r = self.value(w[0])
            else:
                u, v = standard_factorization(w)
                pu = LieElement(self.parent.alphabet, self.parent.ring, {u: 1}, _trusted=True)
                pv = LieElement(self.parent.alphabet, self.parent.ring, {v: 1}, _trusted=True)
                r = lie_bracket(self._basis(u), pv) + lie_bracket(pu, self._basis(v))
            self._memo[w] = r
        return r

    # arithmetic -------------------------------------------------------
    def _combine(self, other: "Derivation", sign: int) -> "Derivation":
        _same(self, other)
        if self.degree != other.degree:
            raise StructureMismatch(f"degrees {self.degree} and {other.degree} differ")
        vals = {i: self.value(i) + other.value(i).scale(sign) for i in set(self.values) | set(other.values)}
        d0 = {k: self.cocycle_value(k) + other.cocycle_value(k).scale(sign) for k in set(self.d0) | set(other.d0)}
        return Derivation(self.parent, self.degree, vals, d0)

    def __add__(self, other: "Derivation") -> "Derivation":
        return self._combine(other, 1)

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self._combine(other, -1)

    def __neg__(self) -> "Derivation":
        return self.scale(-1)

    def scale(self, k) -> "Derivation":
        return Derivation(self.parent, self.degree, {i: v.scale(k) for i, v in self.values.items()},
                          {j: v.scale(k) for j, v in self.d0.items()})

    def __mul__(self, k):
        return self.scale(k)

    __rmul__ = __mul__

    def to_ring(self, parent: EgLie) -> "Derivation":
        ring = parent.ring
        return Derivation(parent, self.degree, {i: v.to_ring(ring) for i, v in self.values.items()},
                          {k: v.to_ring(ring) for k, v in self.d0.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, Derivation):
            return NotImplemented
        return (self.degree == other.degree and self.parent.alphabet == other.parent.alphabet
                and self.values == other.values and self.d0 == other.d0)

    def __hash__(self):
        return hash((self.degree, frozenset(self.values.items())))

    def __repr__(self) -> str:
        return f"Derivation(degree={self.degree}, {format_derivation(self, sep='; ')})"


def _same(d: Derivation, e: Derivation) -> None:
    if d.parent is not e.parent and not (
            d.parent.alphabet == e.parent.alphabet and d.parent.ring == e.parent.ring
            and d.parent.l0 == e.parent.l0 and d.parent.trivial_l0):
        raise StructureMismatch("derivations of different eg-Lie algebras")


def zero_derivation(parent: EgLie, degree: int) -> Derivation:
    return Derivation(parent, degree)


def eval_derivation(d: Derivation, target: LieElement | ReducedWord) -> LieElement:
    """Leibniz recursion on positive elements; cocycle recursion on ``L_0`` words."""
    parent = d.parent
    if isinstance(target, ReducedWord):
        if parent.l0 is None or target.alphabet != parent.l0:
            raise StructureMismatch("word is not over the L_0 alphabet")
        # d0(s1 s2 ... sk) = d0(s1) + ^s1 d0(s2 ... sk)
        acc = LieElement.zero(parent.alphabet, parent.ring)
        for t, sign in reversed(list(target.letters())):
            letter = ReducedWord(parent.l0, ((t, sign),))
            if sign > 0:
                val = d.cocycle_value(t)
            else:
                val = -parent.act(letter, d.cocycle_value(t))
            acc = val + parent.act(letter, acc)
        return acc
    if target.alphabet != parent.alphabet or target.ring != parent.ring:
        raise StructureMismatch("element is not in the positive part")
    total = LieElement.zero(parent.alphabet, parent.ring)
    for w, c in target.items():
        total = total + d._basis(w).scale(c)
    return total


# ---------------------------------------------------------------------------
# reports


@dataclass
class DerivationReport:
    checked: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, condition: str, witness: str) -> None:
        self.failures.append((condition, witness))

    def __str__(self) -> str:
        head = f"{self.checked} checks, {len(self.failures)} failures"
        return "\n".join([head] + [f"  ({c}) {w}" for c, w in self.failures])


def _random_positive(parent: EgLie, rng: random.Random, max_degree: int = 3) -> LieElement:
    d = rng.randint(1, max_degree)
    return random_lie_element(parent.alphabet, d, rng, parent.ring)


def check_derivation(d: Derivation, samples: int = 20, seed: int = 0) -> DerivationReport:
    """Check the three derivation conditions exactly.

    (1) Leibniz on sampled pairs of positive elements; (2) the cocycle law on
    sampled ``L_0`` pairs and vanishing on relations; (3) compatibility
    ``d(^a b) = [d0(a), ^a b] + ^a d(b)`` on every (L_0 generator,
    positive generator) pair and on sampled pairs.
    """
    parent = d.parent
    rng = random.Random(seed)
    rep = DerivationReport()
    for _ in range(samples):
        x, y = _random_positive(parent, rng), _random_positive(parent, rng)
        lhs = d(lie_bracket(x, y))
        rhs = lie_bracket(d(x), y) + lie_bracket(x, d(y))
        rep.checked += 1
        if lhs != rhs:
            rep.fail("1", f"x={x}, y={y}")
    if parent.trivial_l0:
        return rep
    l0 = parent.l0
    for r in parent.relations:
        rep.checked += 1
        if not d(r).is_zero():
            rep.fail("2", f"relation {r} evaluates to {d(r)}")
    for _ in range(samples):
        a = ReducedWord.from_syllables(l0, [(rng.randrange(l0.rank), rng.choice((-1, 1)))
                                            for _ in range(rng.randint(1, 3))])
        b = ReducedWord.from_syllables(l0, [(rng.randrange(l0.rank), rng.choice((-1, 1)))
                                            for _ in range(rng.randint(1, 3))])
        rep.checked += 1
        if d(a * b) != d(a) + parent.act(a, d(b)):
            rep.fail("2", f"a={a}, b={b}")
    pairs = []
    for k in range(l0.rank):
        for s in (1, -1):
            a = ReducedWord(l0, ((k, s),))
            pairs += [(a, x) for x in parent.generators()]
    for _ in range(samples):
        a = ReducedWord.from_syllables(l0, [(rng.randrange(l0.rank), rng.choice((-1, 1)))
                                            for _ in range(rng.randint(1, 2))])
        pairs.append((a, _random_positive(parent, rng, 2)))
    for a, b in pairs:
        ab = parent.act(a, b)
        rep.checked += 1
        if d(ab) != lie_bracket(d(a), ab) + parent.act(a, d(b)):
            rep.fail("3", f"a={a}, b={b}")
    return rep


# ---------------------------------------------------------------------------
# bracket


def der_bracket(d: Derivation, e: Derivation) -> Derivation:
    """Bracket of derivations of degrees m, n; degree m + n.

    On positive generators ``d(e(x)) - e(d(x))``; on ``L_0`` generators
    ``d(e0(a)) - e(d0(a)) - [d0(a), e0(a)]``.
    """
    _same(d, e)
    parent = d.parent
    values = {}
    for i in range(parent.alphabet.rank):
        values[i] = d(e.value(i)) - e(d.value(i))
    d0 = {}
    if not parent.trivial_l0:
        for k in range(parent.l0.rank):
            da, ea = d.cocycle_value(k), e.cocycle_value(k)
            d0[k] = d(ea) - e(da) - lie_bracket(da, ea)
    return Derivation(parent, d.degree + e.degree, values, d0)


# ---------------------------------------------------------------------------
# degree-0 automorphisms


class Aut0:
    """Automorphism of the eg-Lie algebra: ``f0`` on ``L_0`` and ``f1`` on
    positive generators, each with an inverse witness."""

    def __init__(self, parent: EgLie, f1: Images, f1_inverse: Images,
                 f0: GroupMap | None = None, check: bool = True):
        self.parent = parent
        rank = parent.alphabet.rank
        self.f1 = {i: parent._img(_check_images(parent.alphabet, f1, 0, "image"), i) for i in range(rank)}
        self.f1_inverse = {i: parent._img(_check_images(parent.alphabet, f1_inverse, 0, "inverse image"), i)
                           for i in range(rank)}
        if parent.trivial_l0:
            if f0 is not None:
                raise StructureMismatch("L_0 automorphism given for a trivial L_0")
        elif f0 is None:
            f0 = GroupMap.identity(parent.l0)
        self.f0 = f0
        if check:
            self.check()

    @classmethod
    def identity(cls, parent: EgLie) -> "Aut0":
        gens = {i: parent.generator(i) for i in range(parent.alphabet.rank)}
        return cls(parent, gens, gens, None if parent.trivial_l0 else GroupMap.identity(parent.l0))

    def check(self) -> None:
        parent = self.parent
        for x in parent.generators():
            if substitute(substitute(x, self.f1_inverse), self.f1) != x or \
                    substitute(substitute(x, self.f1), self.f1_inverse) != x:
                raise StructureMismatch(f"f1 witness is not an inverse on {x}")
        if parent.trivial_l0:
            return
        from .words import verify_automorphism

        if not verify_automorphism(self.f0):
            raise StructureMismatch("f0 witness is not an inverse")
        for k in range(parent.l0.rank):
            a = ReducedWord(parent.l0, ((k, 1),))
            for x in parent.generators():
                if self(parent.act(a, x)) != parent.act(self.apply0(a), self(x)):
                    raise StructureMismatch(f"f is not equivariant at ({a}, {x})")

    def __call__(self, u: LieElement) -> LieElement:
        return substitute(u, self.f1)

    def inverse_apply(self, u: LieElement) -> LieElement:
        return substitute(u, self.f1_inverse)

    def apply0(self, g: ReducedWord) -> ReducedWord:
        return apply_map(self.f0, g)

    def inverse_apply0(self, g: ReducedWord) -> ReducedWord:
        return apply_map(self.f0.witness_map(), g)

    def inverse(self) -> "Aut0":
        return Aut0(self.parent, self.f1_inverse, self.f1,
                    None if self.f0 is None else self.f0.witness_map(), check=False)

    def compose(self, other: "Aut0") -> "Aut0":
        """``self o other``."""
        from .words import compose_maps

        f1 = {i: self(v) for i, v in other.f1.items()}
        inv = {i: other.inverse_apply(v) for i, v in self.f1_inverse.items()}
        f0 = None if self.f0 is None else compose_maps(self.f0, other.f0)
        return Aut0(self.parent, f1, inv, f0, check=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Aut0):
            return NotImplemented
        same0 = (self.f0 is None and other.f0 is None) or (
            self.f0 is not None and other.f0 is not None and self.f0.images == other.f0.images)
        return same0 and self.f1 == other.f1

    def matrix(self) -> list[list]:
        """Degree-1 block as a matrix: column j holds the image of weight-1 generator j."""
        alph = self.parent.alphabet
        ones = [i for i, w in enumerate(alph.weights) if w == 1]
        return [[self.f1[j][(i,)] for j in ones] for i in ones]

    def __repr__(self) -> str:
        names = self.parent.alphabet.names
        return "Aut0(" + "; ".join(f"{names[i]} -> {v}" for i, v in self.f1.items()) + ")"


def der_action(f: Aut0, d: Derivation) -> Derivation:
    """``^f d = f o d o f^-1`` componentwise."""
    parent = d.parent
    if f.parent.alphabet != parent.alphabet:
        raise StructureMismatch("automorphism of a different eg-Lie algebra")
    values = {i: f(d(f.inverse_apply(parent.generator(i)))) for i in range(parent.alphabet.rank)}
    d0 = {}
    if not parent.trivial_l0:
        for k in range(parent.l0.rank):
            a = ReducedWord(parent.l0, ((k, 1),))
            d0[k] = f(d(f.inverse_apply0(a)))
    return Derivation(parent, d.degree, values, d0)


# ---------------------------------------------------------------------------
# adjoint


def adjoint(x: LieElement | ReducedWord, parent: EgLie) -> Derivation | Aut0:
    """``ad``: a homogeneous positive element gives the derivation
    ``b -> [x, b]``, ``g -> x - ^g x``; an ``L_0`` word gives its action."""
    if isinstance(x, ReducedWord):
        if parent.trivial_l0 or x.alphabet != parent.l0:
            raise StructureMismatch("not an L_0 word")
        xi = x.inverse()
        f1 = {i: parent.act(x, g) for i, g in enumerate(parent.generators())}
        inv = {i: parent.act(xi, g) for i, g in enumerate(parent.generators())}
        f0 = GroupMap(parent.l0, tuple(x.conjugate(t) for t in parent.l0.generators()),
                      tuple(xi.conjugate(t) for t in parent.l0.generators()))
        return Aut0(parent, f1, inv, f0, check=False)
    m = x.degree()
    values = {i: lie_bracket(x, g) for i, g in enumerate(parent.generators())}
    d0 = {}
    if not parent.trivial_l0:
        for k in range(parent.l0.rank):
            d0[k] = x - parent.act(ReducedWord(parent.l0, ((k, 1),)), x)
    return Derivation(parent, m, values, d0)


# ---------------------------------------------------------------------------
# truncation


@dataclass(frozen=True)
class TruncatedPair:
    """``(d0, d1)`` data (plus weight-2 values ``d2``) of a derivation."""

    degree: int
    d0: dict
    d1: dict
    d2: dict = field(default_factory=dict)


def truncate(d: Derivation) -> TruncatedPair:
    return TruncatedPair(d.degree, dict(d.d0), d.d1, d.d2)


def extend(pair: TruncatedPair, parent: EgLie) -> Derivation:
    """Unique derivation with the given generator data; checks compatibility."""
    values = {**pair.d1, **pair.d2}
    d = Derivation(parent, pair.degree, values, pair.d0)
    if not parent.trivial_l0:
        for k in range(parent.l0.rank):
            for s in (1, -1):
                a = ReducedWord(parent.l0, ((k, s),))
                for b in parent.generators():
                    ab = parent.act(a, b)
                    if d(ab) != lie_bracket(d(a), ab) + parent.act(a, d(b)):
                        raise IncompatiblePair(f"d1(^a b) != [d0(a), ^a b] + ^a d1(b) at a={a}, b={b}")
    return d


def truncate_extend(mode: str, data, parent: EgLie | None = None):
    if mode == "truncate":
        return truncate(data)
    if mode == "extend":
        if parent is None:
            raise ValueError("extend needs the parent eg-Lie algebra")
        return extend(data, parent)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# a small nontrivial L_0


def swap_eglie(ring: CoefficientRing = INTEGERS, order_two: bool = False) -> EgLie:
    """``L_0 = <t>`` (free, or with ``t^2 = 1``) acting on ``Lie(a, b)`` by swapping a and b."""
    alphabet = Alphabet.of("a b")
    l0 = Alphabet.of("t")
    a = LieElement.generator(alphabet, 0, ring)
    b = LieElement.generator(alphabet, 1, ring)
    swap = {0: b, 1: a}
    rels = [l0.word("t^2")] if order_two else []
    return EgLie(alphabet, ring, l0, rels, [(swap, swap)])


def seeded_derivation(parent: EgLie, degree: int, cocycle_t: LieElement, value_a: LieElement) -> Derivation:
    """Derivation of :func:`swap_eglie` with ``d0(t)`` and ``d1(a)`` given.

    ``d1(b)`` is forced by compatibility at ``(t, a)``; compatibility at
    ``(t, b)`` holds iff ``^t d0(t) = -d0(t)``.
    """
    t = parent.l0_word("t")
    b_val = lie_bracket(cocycle_t, parent.generator("b")) + parent.act(t, value_a)
    return extend(TruncatedPair(degree, {0: cocycle_t}, {0: value_a, 1: b_val}), parent)


def random_swap_derivation(parent: EgLie, degree: int, rng: random.Random) -> Derivation:
    t = parent.l0_word("t")
    x = random_lie_element(parent.alphabet, degree, rng, parent.ring)
    cocycle = x - parent.act(t, x)  # anti-invariant under the swap
    u = random_lie_element(parent.alphabet, degree + 1, rng, parent.ring)
    return seeded_derivation(parent, degree, cocycle, u)


def random_derivation(parent: EgLie, degree: int, rng: random.Random) -> Derivation:
    """Random derivation with trivial cocycle part (trivial ``L_0``)."""
    values = {i: random_lie_element(parent.alphabet, degree + w, rng, parent.ring)
              for i, w in enumerate(parent.alphabet.weights)}
    return Derivation(parent, degree, values)


# ---------------------------------------------------------------------------
# derivation files: "gen -> lie-expression" per section d0/d1/d2


def format_derivation(d: Derivation, sep: str = "\n") -> str:
    from .freelie import format_lie

    names = d.parent.alphabet.names
    parts = []
    if d.d0:
        l0 = d.parent.l0.names
        parts += [f"d0: {l0[k]} -> {format_lie(v, sep=' + ')}" for k, v in sorted(d.d0.items())]
    parts += [f"{names[i]} -> {format_lie(d.value(i), sep=' + ')}" for i in range(len(names))]
    return sep.join(parts)


def parse_derivation(text: str, parent: EgLie, degree: int) -> Derivation:
    """Lines ``gen -> expr`` under optional ``d0:``/``d1:``/``d2:`` headers.

    A line may also carry its section inline: ``d0: t -> [a,b]``.
    """
    from .freelie import parse_lie

    values: dict[int, LieElement] = {}
    d0: dict[int, LieElement] = {}
    section = "d1"
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        where = section
        head, sep, rest = line.partition(":")
        if sep and head.strip() in ("d0", "d1", "d2"):
            line = rest.strip()
            if not line:
                section = head.strip()
                continue
            where = head.strip()
        name, arrow, expr = line.partition("->")
        if not arrow:
            raise ValueError(f"expected 'gen -> expression', got {raw!r}")
        v = parse_lie(expr, parent.alphabet, parent.ring)
        name = name.strip()
        if where == "d0":
            d0[parent.l0.index(name)] = v
        else:
            values[parent.alphabet.index(name)] = v
    return Derivation(parent, degree, values, d0)
