"""Free Lie algebras in Lyndon coordinates.

Basis elements are the standard bracketings of Lyndon words. The expansion of
the bracketing of a Lyndon word ``w`` in the tensor algebra is ``w`` plus
lexicographically larger words of the same multidegree. That makes
:func:`tensor_to_lie` a back-substitution with unit pivots, exact over Z,
Q and F_p alike.
"""
from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from .errors import (
    CapTooSmall,
    NotALieElement,
    NotHomogeneous,
    RingMismatch,
    WordSyntaxError,
)
from .tensor import INTEGERS, CoefficientRing, Monomial, TruncatedSeries
from .words import Alphabet

Tree = int | tuple  # letter index or (left, right)


# ---------------------------------------------------------------------------
# Lyndon words


def lyndon_words(rank: int, max_length: int) -> Iterator[Monomial]:
    """All Lyndon words of length <= ``max_length`` in lexicographic order (Duval)."""
    if max_length < 1:
        return
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_length:
            w.append(w[len(w) - m])
        while w and w[-1] == rank - 1:
            w.pop()


def is_lyndon(w: Monomial) -> bool:
    n = len(w)
    return n > 0 and all(w < w[i:] + w[:i] for i in range(1, n))


def standard_factorization(w: Monomial) -> tuple[Monomial, Monomial]:
    """``w = u v`` with ``v`` the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w} has no standard factorization")


@lru_cache(maxsize=None)
def bracketing(w: Monomial) -> Tree:
    if len(w) == 1:
        return w[0]
    u, v = standard_factorization(w)
    return (bracketing(u), bracketing(v))


@dataclass(frozen=True)
class LyndonBasis:
    alphabet: Alphabet
    degree: int
    entries: tuple[tuple[Monomial, Tree], ...]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def words(self) -> list[Monomial]:
        return [w for w, _ in self.entries]

    def index(self, w: Monomial) -> int:
        return self.words.index(tuple(w))


_basis_lock = threading.Lock()
_basis_cache: dict[tuple[Alphabet, int], LyndonBasis] = {}


def lyndon_basis(alphabet: Alphabet, degree: int) -> LyndonBasis:
    """Lyndon words of weighted degree ``degree`` with their standard bracketings."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    key = (alphabet, degree)
    basis = _basis_cache.get(key)
    if basis is None:
        with _basis_lock:
            basis = _basis_cache.get(key)
            if basis is None:
                maxlen = degree // min(alphabet.weights)
                words = [w for w in lyndon_words(alphabet.rank, maxlen) if alphabet.degree(w) == degree]
                words.sort()
                basis = LyndonBasis(alphabet, degree, tuple((w, bracketing(w)) for w in words))
                _basis_cache[key] = basis
    return basis


def format_tree(t: Tree, names: tuple[str, ...]) -> str:
    if isinstance(t, int):
        return names[t]
    return f"[{format_tree(t[0], names)},{format_tree(t[1], names)}]"


# ---------------------------------------------------------------------------
# tensor images of basis elements (integer coefficients)


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            k = m1 + m2
            out[k] = out.get(k, 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


def _poly_bracket(p: dict, q: dict) -> dict:
    out = _poly_mul(p, q)
    for k, v in _poly_mul(q, p).items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _tree_poly(t: Tree) -> dict:
    if isinstance(t, int):
        return {(t,): 1}
    return _poly_bracket(_tree_poly(t[0]), _tree_poly(t[1]))


def basis_poly(w: Monomial) -> dict[Monomial, int]:
    """Tensor expansion of the standard bracketing of a Lyndon word."""
    return _tree_poly(bracketing(tuple(w)))


# ---------------------------------------------------------------------------
# Lie elements


class LieElement:
    """Element of the free Lie algebra, as ``{Lyndon word: coefficient}``."""

    __slots__ = ("alphabet", "ring", "_terms")

    def __init__(self, alphabet: Alphabet, ring: CoefficientRing,
                 terms: Mapping[Monomial, object] | None = None, *, _trusted: bool = False):
        self.alphabet = alphabet
        self.ring = ring
        if _trusted:
            self._terms = dict(terms or {})
        else:
            clean = {}
            for w, c in (terms or {}).items():
                w = tuple(w)
                if not is_lyndon(w):
                    raise ValueError(f"{w} is not a Lyndon word")
                c = ring(c)
                if c != 0:
                    clean[w] = clean.get(w, 0) + c
            self._terms = {w: c for w, c in clean.items() if ring.normalize(c) != 0}

    @classmethod
    def zero(cls, alphabet, ring=INTEGERS) -> "LieElement":
        return cls(alphabet, ring, {}, _trusted=True)

    @classmethod
    def generator(cls, alphabet, i: int | str, ring=INTEGERS) -> "LieElement":
        if isinstance(i, str):
            i = alphabet.index(i)
        return cls(alphabet, ring, {(i,): ring(1)}, _trusted=True)

    @classmethod
    def basis_element(cls, alphabet, w: Iterable[int], ring=INTEGERS) -> "LieElement":
        return cls(alphabet, ring, {tuple(w): 1})

    def _new(self, terms) -> "LieElement":
        return LieElement(self.alphabet, self.ring, terms, _trusted=True)

    def items(self):
        return self._terms.items()

    def __getitem__(self, w) -> object:
        return self._terms.get(tuple(w), 0)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degrees(self) -> list[int]:
        deg = self.alphabet.degree
        return sorted({deg(w) for w in self._terms})

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int:
        """Degree of a nonzero homogeneous element."""
        ds = self.degrees()
        if len(ds) != 1:
            raise NotHomogeneous(f"element has degrees {ds}")
        return ds[0]

    def homogeneous(self, d: int) -> "LieElement":
        deg = self.alphabet.degree
        return self._new({w: c for w, c in self._terms.items() if deg(w) == d})

    def graded(self) -> dict[int, dict[int, object]]:
        """``{degree: {basis index: coefficient}}``."""
        out: dict[int, dict[int, object]] = {}
        for w, c in self._terms.items():
            d = self.alphabet.degree(w)
            out.setdefault(d, {})[lyndon_basis(self.alphabet, d).index(w)] = c
        return out

    def terms(self) -> list[tuple[Monomial, object]]:
        deg = self.alphabet.degree
        return sorted(self._terms.items(), key=lambda kv: (deg(kv[0]), kv[0]))

    def to_ring(self, ring: CoefficientRing) -> "LieElement":
        return LieElement(self.alphabet, ring, self._terms)

    def _check(self, other: "LieElement") -> None:
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if self.alphabet != other.alphabet:
            from .errors import AlphabetMismatch

            raise AlphabetMismatch(f"{self.alphabet.names} vs {other.alphabet.names}")

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self._terms
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.alphabet == other.alphabet and self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "LieElement") -> "LieElement":
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, LieElement):
            return NotImplemented
        self._check(other)
        norm = self.ring.normalize
        out = dict(self._terms)
        for w, c in other._terms.items():
            v = norm(out.get(w, 0) + c)
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self) -> "LieElement":
        norm = self.ring.normalize
        return self._new({w: norm(-c) for w, c in self._terms.items()})

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + (-other)

    def scale(self, k) -> "LieElement":
        k = self.ring(k)
        norm = self.ring.normalize
        out = {}
        for w, c in self._terms.items():
            v = norm(c * k)
            if v:
                out[w] = v
        return self._new(out)

    def __mul__(self, k):
        if isinstance(k, (int, Fraction)):
            return self.scale(k)
        return NotImplemented

    __rmul__ = __mul__

    def bracket(self, other: "LieElement") -> "LieElement":
        return lie_bracket(self, other)

    def __str__(self) -> str:
        return format_lie(self, sep=" + ")

    def __repr__(self) -> str:
        return f"LieElement({format_lie(self, sep=' + ')!r})"


@lru_cache(maxsize=None)
def _bracket_basis(alphabet: Alphabet, w1: Monomial, w2: Monomial) -> tuple[tuple[Monomial, int], ...]:
    """Structure constants ``[P_w1, P_w2]`` in Lyndon coordinates (over Z)."""
    if w1 == w2:
        return ()
    if w2 < w1:
        return tuple((w, -c) for w, c in _bracket_basis(alphabet, w2, w1))
    poly = _poly_bracket(basis_poly(w1), basis_poly(w2))
    return tuple(_solve_lyndon(poly, INTEGERS).items())


def lie_bracket(u: LieElement, v: LieElement) -> LieElement:
    """Bilinear bracket, computed through the tensor representation."""
    u._check(v)
    ring = u.ring
    norm = ring.normalize
    out: dict[Monomial, object] = {}
    for w1, c1 in u._terms.items():
        for w2, c2 in v._terms.items():
            c = c1 * c2
            for w, k in _bracket_basis(u.alphabet, w1, w2):
                out[w] = out.get(w, 0) + c * k
    return LieElement(u.alphabet, ring, {w: norm(c) for w, c in out.items() if norm(c)}, _trusted=True)


def lie_to_tensor(u: LieElement, cap: int) -> TruncatedSeries:
    """Image in the truncated tensor algebra (universal enveloping inclusion)."""
    ds = u.degrees()
    if ds and ds[-1] > cap:
        raise CapTooSmall(f"element has degree {ds[-1]} > cap {cap}")
    ring = u.ring
    out: dict[Monomial, object] = {}
    for w, c in u._terms.items():
        for m, k in basis_poly(w).items():
            out[m] = out.get(m, 0) + c * k
    return TruncatedSeries(ring, u.alphabet, cap, out)


def _solve_lyndon(poly: Mapping[Monomial, object], ring: CoefficientRing) -> dict[Monomial, object]:
    norm = ring.normalize
    residual = {m: norm(c) for m, c in poly.items() if norm(c)}
    coeffs: dict[Monomial, object] = {}
    while residual:
        m = min(residual)
        c = residual[m]
        if not is_lyndon(m):
            raise NotALieElement(f"residual leading monomial {m} is not a Lyndon word", residual)
        coeffs[m] = c
        for mm, k in basis_poly(m).items():
            v = norm(residual.get(mm, 0) - c * k)
            if v:
                residual[mm] = v
            else:
                residual.pop(mm, None)
    return coeffs


def tensor_to_lie(s: TruncatedSeries | Mapping[Monomial, object], degree: int | None = None,
                  alphabet: Alphabet | None = None, ring: CoefficientRing | None = None) -> LieElement:
    """Lyndon coordinates of a homogeneous Lie element given as a tensor."""
    if isinstance(s, TruncatedSeries):
        alphabet, ring, terms = s.alphabet, s.ring, dict(s.items())
    else:
        terms = dict(s)
        if alphabet is None or ring is None:
            raise ValueError("alphabet and ring are required for raw tensors")
    degs = {alphabet.degree(m) for m in terms}
    if degree is None:
        if len(degs) > 1:
            raise NotHomogeneous(f"tensor has degrees {sorted(degs)}")
        degree = degs.pop() if degs else 1
    elif degs - {degree}:
        raise NotHomogeneous(f"tensor has degrees {sorted(degs)}, expected {degree}")
    if 0 in degs:
        raise NotALieElement("constant term present", terms)
    return LieElement(alphabet, ring, _solve_lyndon(terms, ring), _trusted=True)


def series_to_lie(s: TruncatedSeries, max_degree: int | None = None) -> LieElement:
    """Convert every homogeneous component (degree >= 1) of a primitive series."""
    total = LieElement.zero(s.alphabet, s.ring)
    for d in s.degrees():
        if d == 0:
            if s.constant:
                raise NotALieElement("constant term present")
            continue
        if max_degree is not None and d > max_degree:
            continue
        total = total + tensor_to_lie(s.homogeneous(d), d)
    return total


def substitute(u: LieElement, images: Mapping[int, LieElement]) -> LieElement:
    """Lie algebra endomorphism determined by generator images, applied to ``u``."""
    memo: dict[Tree, LieElement] = {}

    def ev(t: Tree) -> LieElement:
        if t in memo:
            return memo[t]
        if isinstance(t, int):
            r = images[t] if t in images else LieElement.generator(u.alphabet, t, u.ring)
        else:
            r = lie_bracket(ev(t[0]), ev(t[1]))
        memo[t] = r
        return r

    total = LieElement.zero(u.alphabet, u.ring)
    for w, c in u._terms.items():
        total = total + ev(bracketing(w)).scale(c)
    return total


def witt_dimension(rank: int, degree: int) -> int:
    """Necklace/Witt count of Lyndon words of a given length."""
    total = 0
    for e in range(1, degree + 1):
        if degree % e == 0:
            total += _mobius(e) * rank ** (degree // e)
    return total // degree


def _mobius(n: int) -> int:
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


# ---------------------------------------------------------------------------
# Lie DSL
#
#   expr := ["-"] term (("+" | "-") term)*
#   term := [coef "*"] atom
#   atom := ident | "[" expr "," expr "]" | "(" expr ")" | "0"
#   coef := int ["/" int]

_LIE_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<num>[0-9]+(?:/[0-9]+)?)|(?P<sym>[\[\](),+\-*]))")


class _LieParser:
    def __init__(self, text: str, alphabet: Alphabet, ring: CoefficientRing):
        self.text = text
        self.alphabet = alphabet
        self.ring = ring
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _LIE_TOKEN.match(text, pos)
            if not m:
                raise WordSyntaxError(f"unexpected character {text[pos]!r}", pos)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.tokens.append(("end", "", len(text)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expr(self) -> LieElement:
        sign = 1
        kind, val, _ = self.peek()
        if kind == "sym" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        total = self.term().scale(sign)
        while True:
            kind, val, _ = self.peek()
            if kind == "sym" and val in "+-":
                self.take()
                t = self.term()
                total = total + (t if val == "+" else -t)
            else:
                return total

    def term(self) -> LieElement:
        kind, val, pos = self.peek()
        coef = 1
        if kind == "sym" and val in "+-":
            self.take()
            return self.term().scale(-1 if val == "-" else 1)
        if kind == "num":
            nxt = self.tokens[self.i + 1]
            if nxt[0] == "sym" and nxt[1] == "*":
                self.take()
                self.take()
                coef = Fraction(val)
        return self.atom().scale(coef)

    def atom(self) -> LieElement:
        kind, val, pos = self.take()
        if kind == "ident":
            from .errors import UnknownGenerator

            if val not in self.alphabet.names:
                raise UnknownGenerator(val, pos)
            return LieElement.generator(self.alphabet, val, self.ring)
        if kind == "num" and val == "0":
            return LieElement.zero(self.alphabet, self.ring)
        if kind == "sym" and val == "[":
            u = self.expr()
            self._expect(",")
            v = self.expr()
            self._expect("]")
            return lie_bracket(u, v)
        if kind == "sym" and val == "(":
            u = self.expr()
            self._expect(")")
            return u
        got = "end of input" if kind == "end" else repr(val)
        raise WordSyntaxError(f"unexpected {got} in Lie expression", pos)

    def _expect(self, sym):
        kind, val, pos = self.take()
        if kind != "sym" or val != sym:
            raise WordSyntaxError(f"expected {sym!r}", pos)


def parse_lie(text: str, alphabet: Alphabet, ring: CoefficientRing = INTEGERS) -> LieElement:
    """Parse expressions like ``2*[a,[a,b]] - 1/2*[b,a] + a``.

    Multiple lines are summed, so the output of :func:`format_lie` parses back.
    """
    total = LieElement.zero(alphabet, ring)
    for line in text.splitlines() or [""]:
        if not line.strip():
            continue
        p = _LieParser(line, alphabet, ring)
        total = total + p.expr()
        kind, val, pos = p.peek()
        if kind != "end":
            raise WordSyntaxError(f"unexpected {val!r}", pos)
    return total


def format_lie(u: LieElement, sep: str = "\n") -> str:
    """``coef * [standard bracketing]`` lines."""
    if u.is_zero():
        return "0"
    names = u.alphabet.names
    return sep.join(f"{c} * {format_tree(bracketing(w), names)}" for w, c in u.terms())


def lie_records(u: LieElement) -> list[dict]:
    names = u.alphabet.names
    return [{"degree": u.alphabet.degree(w), "lyndon_word": [names[i] for i in w], "coefficient": str(c)}
            for w, c in u.terms()]


def lie_from_records(records: list[dict], alphabet: Alphabet, ring: CoefficientRing) -> LieElement:
    return LieElement(alphabet, ring, {tuple(alphabet.index(n) for n in r["lyndon_word"]): ring(r["coefficient"])
                                       for r in records})


def random_lie_element(alphabet: Alphabet, degree: int, rng, ring: CoefficientRing = INTEGERS,
                       max_terms: int = 3, coeff_range: int = 3) -> LieElement:
    """Random homogeneous element with small integer coefficients (possibly zero)."""
    words = lyndon_basis(alphabet, degree).words
    if not words:
        return LieElement.zero(alphabet, ring)
    terms: dict[Monomial, int] = {}
    for _ in range(rng.randint(1, max_terms)):
        w = rng.choice(words)
        terms[w] = terms.get(w, 0) + rng.choice([c for c in range(-coeff_range, coeff_range + 1) if c])
    return LieElement(alphabet, ring, terms)


def tree_word(t: Tree, alphabet: Alphabet):
    """Group commutator with the shape of a bracketing (``[g, h] = g h g^-1 h^-1``)."""
    if isinstance(t, int):
        return alphabet.generator(t)
    return tree_word(t[0], alphabet).commutator(tree_word(t[1], alphabet))
