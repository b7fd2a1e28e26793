"""Free groups on a finite weighted alphabet.

Words are kept freely reduced in run-length (syllable) form. The commutator
and conjugation conventions are

    [g, h] = g h g^-1 h^-1        and        ^g h = g h g^-1,

i.e. conjugation is a left action. Everything downstream (cocycles, Johnson
homomorphisms) depends on these signs.

Word DSL::

    word   := factor*
    factor := atom ("^" int)?
    atom   := ident | "(" word ")" | "[" word "," word "]" | "1"
    ident  := [A-Za-z][A-Za-z0-9_]*
    int    := "-"? [0-9]+

Whitespace separates factors, so ``a b`` is a product while ``ab`` is a single
generator named ``ab``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import (
    AlphabetMismatch,
    MissingWitness,
    UnknownGenerator,
    WordSyntaxError,
)

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Alphabet:
    """Ordered generator names with positive integer weights.

    The order of ``names`` is the letter order used for Lyndon words.
    """

    names: tuple[str, ...]
    weights: tuple[int, ...] = ()

    def __post_init__(self):
        names = tuple(self.names)
        weights = tuple(self.weights) if self.weights else (1,) * len(names)
        if not names:
            raise ValueError("an alphabet needs at least one generator")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        if len(weights) != len(names):
            raise ValueError("one weight per generator is required")
        for n in names:
            if not _IDENT.match(n):
                raise ValueError(f"invalid generator name {n!r}")
        if any(int(w) < 1 for w in weights):
            raise ValueError("generator weights must be >= 1")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "weights", tuple(int(w) for w in weights))
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    @classmethod
    def of(cls, spec: str | Sequence[str] | Sequence[tuple[str, int]]) -> "Alphabet":
        """``Alphabet.of("a b")``, ``Alphabet.of(["a", "b"])`` or
        ``Alphabet.of([("y", 1), ("x", 2)])``."""
        if isinstance(spec, str):
            spec = spec.split()
        names, weights = [], []
        for item in spec:
            if isinstance(item, str):
                names.append(item)
                weights.append(1)
            else:
                names.append(item[0])
                weights.append(int(item[1]))
        return cls(tuple(names), tuple(weights))

    @classmethod
    def parse_file(cls, text: str) -> "Alphabet":
        """Alphabet file: one ``name [weight]`` per line, ``#`` comments."""
        items = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) > 2:
                raise ValueError(f"bad alphabet line {line!r}")
            items.append((parts[0], int(parts[1]) if len(parts) == 2 else 1))
        return cls.of(items)

    @property
    def rank(self) -> int:
        return len(self.names)

    @property
    def is_weighted(self) -> bool:
        return any(w != 1 for w in self.weights)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownGenerator(name) from None

    def weight(self, i: int) -> int:
        return self.weights[i]

    def degree(self, letters: Iterable[int]) -> int:
        """Weighted degree of a letter sequence."""
        w = self.weights
        return sum(w[i] for i in letters)

    def generator(self, name_or_index: str | int) -> "ReducedWord":
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        return ReducedWord(self, ((i, 1),))

    def generators(self) -> list["ReducedWord"]:
        return [ReducedWord(self, ((i, 1),)) for i in range(self.rank)]

    def identity(self) -> "ReducedWord":
        return ReducedWord(self, ())

    def word(self, text: str) -> "ReducedWord":
        return parse_word(text, self)


def _reduce(alphabet: Alphabet, syllables: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    stack: list[list[int]] = []
    for g, e in syllables:
        if e == 0:
            continue
        if stack and stack[-1][0] == g:
            stack[-1][1] += e
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([g, e])
    return tuple((g, e) for g, e in stack)


@dataclass(frozen=True)
class ReducedWord:
    """A freely reduced word stored as ``((generator index, exponent), ...)``."""

    alphabet: Alphabet
    syllables: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_syllables(cls, alphabet: Alphabet, syllables: Iterable[tuple[int, int]]) -> "ReducedWord":
        return cls(alphabet, _reduce(alphabet, syllables))

    @classmethod
    def from_letters(cls, alphabet: Alphabet, letters: Iterable[int]) -> "ReducedWord":
        """Signed letters: ``+(i+1)`` for generator ``i``, ``-(i+1)`` for its inverse."""
        return cls.from_syllables(alphabet, ((abs(x) - 1, 1 if x > 0 else -1) for x in letters))

    def _check(self, other: "ReducedWord") -> None:
        if other.alphabet is not self.alphabet and other.alphabet != self.alphabet:
            raise AlphabetMismatch(f"{self.alphabet.names} vs {other.alphabet.names}")

    def is_identity(self) -> bool:
        return not self.syllables

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def letters(self) -> Iterator[tuple[int, int]]:
        """Yield ``(generator, +1 or -1)`` letter by letter."""
        for g, e in self.syllables:
            s = 1 if e > 0 else -1
            for _ in range(abs(e)):
                yield g, s

    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        self._check(other)
        left, right = self.syllables, other.syllables
        if not left or not right:
            return self if right == () else other
        # cancel only across the junction
        i, j = len(left), 0
        while i and j < len(right) and left[i - 1][0] == right[j][0]:
            g, e = left[i - 1][0], left[i - 1][1] + right[j][1]
            i, j = i - 1, j + 1
            if e:
                return ReducedWord(self.alphabet, left[:i] + ((g, e),) + right[j:])
        return ReducedWord(self.alphabet, left[:i] + right[j:])

    def inverse(self) -> "ReducedWord":
        return ReducedWord(self.alphabet, tuple((g, -e) for g, e in reversed(self.syllables)))

    def __invert__(self) -> "ReducedWord":
        return self.inverse()

    def __pow__(self, n: int) -> "ReducedWord":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.alphabet.identity()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self, h: "ReducedWord") -> "ReducedWord":
        """``^self h = self h self^-1``."""
        return self * h * self.inverse()

    def commutator(self, h: "ReducedWord") -> "ReducedWord":
        """``[self, h] = self h self^-1 h^-1``."""
        return self * h * self.inverse() * h.inverse()

    def exponent_sums(self) -> list[int]:
        sums = [0] * self.alphabet.rank
        for g, e in self.syllables:
            sums[g] += e
        return sums

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"ReducedWord({format_word(self)!r})"


def format_word(w: ReducedWord) -> str:
    if not w.syllables:
        return "1"
    names = w.alphabet.names
    return " ".join(names[g] if e == 1 else f"{names[g]}^{e}" for g, e in w.syllables)


def commutator(u: ReducedWord, v: ReducedWord) -> ReducedWord:
    return u.commutator(v)


def word_op(mode: str, u: ReducedWord, v: ReducedWord | None = None) -> ReducedWord:
    """Group operation by name: ``product``, ``inverse``, ``conjugate``
    (``u v u^-1``) or ``commutator`` (``u v u^-1 v^-1``)."""
    if mode == "inverse":
        return u.inverse()
    if v is None:
        raise ValueError(f"mode {mode!r} needs a second word")
    if mode == "product":
        return u * v
    if mode == "conjugate":
        return u.conjugate(v)
    if mode == "commutator":
        return u.commutator(v)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<int>-?[0-9]+)|(?P<sym>[\^\(\)\[\],]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise WordSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _WordParser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.tokens = _tokenize(text)
        self.i = 0
        self.alphabet = alphabet

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, sym: str):
        kind, val, pos = self.take()
        if val != sym or kind != "sym":
            got = "end of input" if kind == "end" else repr(val)
            raise WordSyntaxError(f"expected {sym!r}, got {got}", pos)

    def word(self) -> ReducedWord:
        result = self.alphabet.identity()
        while True:
            kind, val, _ = self.peek()
            if kind == "ident" or (kind == "sym" and val in "([") or (kind == "int" and val == "1"):
                result = result * self.factor()
            else:
                return result

    def factor(self) -> ReducedWord:
        atom = self.atom()
        kind, val, _ = self.peek()
        if kind == "sym" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise WordSyntaxError("expected an integer exponent", pos)
            atom = atom ** int(val)
        return atom

    def atom(self) -> ReducedWord:
        kind, val, pos = self.take()
        if kind == "ident":
            if val not in self.alphabet._index:
                raise UnknownGenerator(val, pos)
            return self.alphabet.generator(val)
        if kind == "int" and val == "1":
            return self.alphabet.identity()
        if kind == "sym" and val == "(":
            w = self.word()
            self.expect(")")
            return w
        if kind == "sym" and val == "[":
            u = self.word()
            self.expect(",")
            v = self.word()
            self.expect("]")
            return u.commutator(v)
        got = "end of input" if kind == "end" else repr(val)
        raise WordSyntaxError(f"unexpected {got}", pos)


def parse_word(text: str, alphabet: Alphabet) -> ReducedWord:
    """Parse a word/commutator expression into a freely reduced word."""
    p = _WordParser(text, alphabet)
    w = p.word()
    kind, val, pos = p.peek()
    if kind != "end":
        raise WordSyntaxError(f"unexpected {val!r}", pos)
    return w


# ---------------------------------------------------------------------------
# endomorphisms


@dataclass(frozen=True)
class GroupMap:
    """Endomorphism of the free group given by generator images.

    ``inverse`` is an optional witness: the images of a map claimed to be
    the two-sided inverse. It is only trusted after :func:`verify_automorphism`.
    """

    alphabet: Alphabet
    images: tuple[ReducedWord, ...]
    inverse: tuple[ReducedWord, ...] | None = field(default=None)

    def __post_init__(self):
        if len(self.images) != self.alphabet.rank:
            raise AlphabetMismatch("one image per generator is required")
        for w in self.images + (self.inverse or ()):
            if w.alphabet != self.alphabet:
                raise AlphabetMismatch("image over a different alphabet")
        if self.inverse is not None and len(self.inverse) != self.alphabet.rank:
            raise AlphabetMismatch("one witness image per generator is required")

    @classmethod
    def from_strings(cls, alphabet: Alphabet, images: dict[str, str] | Sequence[str],
                     inverse: dict[str, str] | Sequence[str] | None = None) -> "GroupMap":
        def build(spec):
            if isinstance(spec, dict):
                out = [alphabet.generator(i) for i in range(alphabet.rank)]
                for name, text in spec.items():
                    out[alphabet.index(name)] = parse_word(text, alphabet)
                return tuple(out)
            return tuple(parse_word(t, alphabet) for t in spec)

        return cls(alphabet, build(images), None if inverse is None else build(inverse))

    @classmethod
    def identity(cls, alphabet: Alphabet) -> "GroupMap":
        gens = tuple(alphabet.generators())
        return cls(alphabet, gens, gens)

    @classmethod
    def inner(cls, w: ReducedWord) -> "GroupMap":
        """Conjugation ``x -> w x w^-1`` with its inverse as witness."""
        a = w.alphabet
        wi = w.inverse()
        return cls(a, tuple(w.conjugate(x) for x in a.generators()),
                   tuple(wi.conjugate(x) for x in a.generators()))

    def __call__(self, w: ReducedWord) -> ReducedWord:
        return apply_map(self, w)

    def witness_map(self) -> "GroupMap":
        if self.inverse is None:
            raise MissingWitness("map has no inverse witness")
        return GroupMap(self.alphabet, self.inverse, self.images)

    def __str__(self) -> str:
        return format_map(self)


def apply_map(f: GroupMap, w: ReducedWord) -> ReducedWord:
    """Homomorphic image ``f(w)``."""
    if w.alphabet != f.alphabet:
        raise AlphabetMismatch(f"{w.alphabet.names} vs {f.alphabet.names}")
    pieces: list[tuple[int, int]] = []
    inverses: dict[int, tuple] = {}
    for g, e in w.syllables:
        if e > 0:
            img = f.images[g].syllables
        else:
            img = inverses.get(g)
            if img is None:
                img = inverses[g] = f.images[g].inverse().syllables
        for _ in range(abs(e)):
            pieces.extend(img)
    return ReducedWord(f.alphabet, _reduce(f.alphabet, pieces))


def compose_maps(f: GroupMap, g: GroupMap) -> GroupMap:
    """``f o g``, i.e. ``x -> f(g(x))``; witnesses compose in reverse order."""
    if f.alphabet != g.alphabet:
        raise AlphabetMismatch(f"{f.alphabet.names} vs {g.alphabet.names}")
    images = tuple(apply_map(f, x) for x in g.images)
    inverse = None
    if f.inverse is not None and g.inverse is not None:
        gi = g.witness_map()
        inverse = tuple(apply_map(gi, x) for x in f.inverse)
    return GroupMap(f.alphabet, images, inverse)


def map_power(f: GroupMap, n: int) -> GroupMap:
    if n < 0:
        return map_power(f.witness_map(), -n)
    result = GroupMap.identity(f.alphabet)
    for _ in range(n):
        result = compose_maps(result, f)
    return result


def map_commutator(f: GroupMap, g: GroupMap) -> GroupMap:
    """``f g f^-1 g^-1`` as a composite of maps (witnesses required)."""
    return compose_maps(compose_maps(f, g), compose_maps(f.witness_map(), g.witness_map()))


def map_conjugate(h: GroupMap, f: GroupMap) -> GroupMap:
    """``h f h^-1``."""
    return compose_maps(compose_maps(h, f), h.witness_map())


def verify_automorphism(f: GroupMap) -> bool:
    """True iff the inverse witness is a two-sided inverse on generators."""
    if f.inverse is None:
        raise MissingWitness("verify_automorphism needs an inverse witness")
    gens = f.alphabet.generators()
    inv = f.witness_map()
    return all(apply_map(f, apply_map(inv, x)) == x and apply_map(inv, apply_map(f, x)) == x
               for x in gens)


def is_identity_map(f: GroupMap) -> bool:
    return all(img == x for img, x in zip(f.images, f.alphabet.generators()))


# ---------------------------------------------------------------------------
# map files


def format_map(f: GroupMap) -> str:
    names = f.alphabet.names
    lines = [f"{n} -> {format_word(w)}" for n, w in zip(names, f.images)]
    if f.inverse is not None:
        lines.append("inverse:")
        lines += [f"{n} -> {format_word(w)}" for n, w in zip(names, f.inverse)]
    return "\n".join(lines) + "\n"


def parse_map(text: str, alphabet: Alphabet | None = None) -> GroupMap:
    """Parse ``name -> word`` lines with an optional ``inverse:`` section.

    Without an explicit alphabet, the generators are the left-hand sides of
    the main section in order of appearance, all of weight 1.
    """
    main: list[tuple[str, str]] = []
    inv: list[tuple[str, str]] = []
    target = main
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.rstrip(":").strip().lower() == "inverse" and line.endswith(":"):
            target = inv
            continue
        if "->" not in line:
            raise WordSyntaxError(f"line {lineno}: expected 'name -> word'", 0)
        lhs, rhs = line.split("->", 1)
        target.append((lhs.strip(), rhs.strip()))
    if alphabet is None:
        alphabet = Alphabet.of([n for n, _ in main])
    f = GroupMap.from_strings(alphabet, dict(main), dict(inv) if inv else None)
    return f
