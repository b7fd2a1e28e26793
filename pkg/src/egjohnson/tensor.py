"""Truncated series in the completed tensor algebra over a weighted alphabet.

A :class:`TruncatedSeries` holds finitely many monomials (tuples of generator
indices) with exact coefficients, all of weighted degree ``<= cap``. Products
discard anything above the cap before touching coefficients.

Coefficients are plain Python ``int`` (integers, and residues for a prime
field) or :class:`fractions.Fraction` (rationals). There is no floating point
anywhere.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import (
    BadConstantTerm,
    CapMismatch,
    CapTooSmall,
    RingMismatch,
    RingNotRational,
)
from .words import Alphabet, ReducedWord

Monomial = tuple[int, ...]


@dataclass(frozen=True)
class CoefficientRing:
    """``Z``, ``Q`` or ``F_p``."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "F"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "F":
            if self.p is None or self.p < 2 or any(self.p % q == 0 for q in range(2, math.isqrt(self.p) + 1)):
                raise ValueError(f"p must be prime, got {self.p}")
        elif self.p is not None:
            raise ValueError("only prime fields carry p")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    def __call__(self, x) -> int | Fraction:
        """Coerce ``x`` (int, Fraction or string like ``"-3/4"``) into the ring."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            if self.kind == "Z":
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return int(x.numerator)
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        if self.kind == "Z":
            return int(x)
        return int(x) % self.p

    def normalize(self, x):
        if self.kind == "F":
            return x % self.p
        return x

    def inverse(self, x):
        if self.kind == "Q":
            return 1 / Fraction(x)
        if self.kind == "F":
            return pow(int(x), -1, self.p)
        if x in (1, -1):
            return int(x)
        raise ZeroDivisionError(f"{x} is not a unit in Z")

    def divide(self, x, n: int):
        """``x / n`` for a positive integer ``n``."""
        if self.kind == "Q":
            return Fraction(x) / n
        if self.kind == "F":
            if n % self.p == 0:
                raise ZeroDivisionError(f"{n} is not invertible mod {self.p}")
            return (x * pow(n, -1, self.p)) % self.p
        if x % n:
            raise ZeroDivisionError(f"{x}/{n} is not an integer")
        return x // n

    def __str__(self) -> str:
        return {"Z": "Z", "Q": "Q"}.get(self.kind, f"F_{self.p}")


INTEGERS = CoefficientRing("Z")
RATIONALS = CoefficientRing("Q")


def PrimeField(p: int) -> CoefficientRing:
    return CoefficientRing("F", p)


def format_coefficient(c) -> str:
    return str(c)


# ---------------------------------------------------------------------------
# degrees


@dataclass(frozen=True, eq=False)
class Degree:
    """A filtration degree: exact, ``AboveCap(cap)`` or infinite.

    ``AboveCap`` means the answer was not determined below the cap. For
    valuations (``strict=True``) it means ``> cap``; for Johnson filtration
    degrees (``strict=False``) it means ``>= cap``.
    """

    value: int | None = None
    cap: int | None = None
    infinite: bool = False
    strict: bool = True

    @classmethod
    def exact(cls, value: int) -> "Degree":
        return cls(value=value)

    @classmethod
    def above(cls, cap: int, strict: bool = True) -> "Degree":
        return cls(cap=cap, strict=strict)

    @classmethod
    def infinity(cls) -> "Degree":
        return cls(infinite=True)

    @property
    def is_exact(self) -> bool:
        return self.value is not None

    @property
    def is_above_cap(self) -> bool:
        return self.value is None and not self.infinite

    @property
    def lower(self) -> float:
        if self.value is not None:
            return self.value
        if self.infinite:
            return math.inf
        return self.cap + 1 if self.strict else self.cap

    def at_least(self, k: int) -> bool:
        """Decide ``degree >= k``; raises CapTooSmall when the cap hides the answer."""
        if self.value is not None:
            return self.value >= k
        if self.lower >= k:
            return True
        raise CapTooSmall(f"cannot decide degree >= {k} from {self}")

    def __eq__(self, other):
        if isinstance(other, Degree):
            return (self.value, self.cap, self.infinite, self.strict) == (
                other.value, other.cap, other.infinite, other.strict)
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        if self.value is not None:
            return hash(self.value)
        return hash((self.cap, self.infinite, self.strict))

    def __int__(self) -> int:
        if self.value is None:
            raise ValueError(f"{self} is not an exact degree")
        return self.value

    def __str__(self) -> str:
        if self.value is not None:
            return str(self.value)
        if self.infinite:
            return "Infinity"
        return f"AboveCap({self.cap})"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# series


def _check_compatible(s: "TruncatedSeries", t: "TruncatedSeries") -> None:
    if s.ring != t.ring:
        raise RingMismatch(f"{s.ring} vs {t.ring}")
    if s.cap != t.cap:
        raise CapMismatch(f"cap {s.cap} vs {t.cap}")
    if s.alphabet != t.alphabet:
        from .errors import AlphabetMismatch

        raise AlphabetMismatch(f"{s.alphabet.names} vs {t.alphabet.names}")


class TruncatedSeries:
    """Element of the weighted tensor algebra truncated above degree ``cap``."""

    __slots__ = ("ring", "alphabet", "cap", "_terms", "_by_degree")

    def __init__(self, ring: CoefficientRing, alphabet: Alphabet, cap: int,
                 terms: Mapping[Monomial, object] | None = None, *, _trusted: bool = False):
        if cap < 0:
            raise ValueError("cap must be >= 0")
        self.ring = ring
        self.alphabet = alphabet
        self.cap = cap
        if _trusted:
            self._terms = dict(terms or {})
        else:
            clean = {}
            deg = alphabet.degree
            for m, c in (terms or {}).items():
                m = tuple(m)
                if deg(m) > cap:
                    continue
                c = ring(c)
                if c != 0:
                    clean[m] = c
            self._terms = clean
        self._by_degree = None

    # constructors ------------------------------------------------------
    @classmethod
    def zero(cls, ring, alphabet, cap) -> "TruncatedSeries":
        return cls(ring, alphabet, cap, {}, _trusted=True)

    @classmethod
    def one(cls, ring, alphabet, cap) -> "TruncatedSeries":
        return cls(ring, alphabet, cap, {(): ring(1)}, _trusted=True)

    @classmethod
    def letter(cls, ring, alphabet, cap, i: int) -> "TruncatedSeries":
        return cls(ring, alphabet, cap, {(i,): 1})

    @classmethod
    def monomial(cls, ring, alphabet, cap, m: Iterable[int], coeff=1) -> "TruncatedSeries":
        return cls(ring, alphabet, cap, {tuple(m): coeff})

    def _new(self, terms) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, self.alphabet, self.cap, terms, _trusted=True)

    # inspection -------------------------------------------------------
    def __len__(self) -> int:
        return len(self._terms)

    def __getitem__(self, m: Monomial):
        return self._terms.get(tuple(m), 0)

    def items(self):
        return self._terms.items()

    def terms(self) -> list[tuple[Monomial, object]]:
        """Terms sorted by (weighted degree, lexicographic monomial)."""
        deg = self.alphabet.degree
        return sorted(self._terms.items(), key=lambda kv: (deg(kv[0]), kv[0]))

    def degree_buckets(self) -> dict[int, list[tuple[Monomial, object]]]:
        if self._by_degree is None:
            buckets: dict[int, list] = {}
            deg = self.alphabet.degree
            for m, c in self._terms.items():
                buckets.setdefault(deg(m), []).append((m, c))
            self._by_degree = buckets
        return self._by_degree

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def constant(self):
        return self._terms.get((), 0)

    def homogeneous(self, d: int) -> "TruncatedSeries":
        return self._new({m: c for m, c in self.degree_buckets().get(d, [])})

    def degrees(self) -> list[int]:
        return sorted(self.degree_buckets())

    def without_constant(self) -> "TruncatedSeries":
        return self._new({m: c for m, c in self._terms.items() if m})

    def truncate(self, cap: int) -> "TruncatedSeries":
        """Same series with a lower cap."""
        if cap > self.cap:
            raise CapTooSmall(f"cannot raise cap from {self.cap} to {cap}")
        deg = self.alphabet.degree
        return TruncatedSeries(self.ring, self.alphabet, cap,
                               {m: c for m, c in self._terms.items() if deg(m) <= cap}, _trusted=True)

    def with_cap(self, cap: int) -> "TruncatedSeries":
        """Re-cap: lowering truncates; raising keeps the stored terms (exact only
        for series known to be polynomials)."""
        if cap <= self.cap:
            return self.truncate(cap)
        return TruncatedSeries(self.ring, self.alphabet, cap, self._terms, _trusted=True)

    def to_ring(self, ring: CoefficientRing) -> "TruncatedSeries":
        return TruncatedSeries(ring, self.alphabet, self.cap, self._terms)

    # arithmetic -------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.ring == other.ring and self.cap == other.cap
                and self.alphabet == other.alphabet and self._terms == other._terms)

    def __hash__(self):
        return hash((self.ring, self.cap, frozenset(self._terms.items())))

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        _check_compatible(self, other)
        norm = self.ring.normalize
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = norm(out.get(m, 0) + c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return self._new(out)

    def __neg__(self) -> "TruncatedSeries":
        norm = self.ring.normalize
        return self._new({m: norm(-c) for m, c in self._terms.items()})

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, k) -> "TruncatedSeries":
        k = self.ring(k)
        if k == 0:
            return self._new({})
        norm = self.ring.normalize
        out = {}
        for m, c in self._terms.items():
            v = norm(c * k)
            if v:
                out[m] = v
        return self._new(out)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return _series_mul(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "TruncatedSeries":
        if n < 0:
            raise ValueError("use inverse() for negative powers")
        result = TruncatedSeries.one(self.ring, self.alphabet, self.cap)
        for _ in range(n):
            result = result * self
        return result

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse of a series with unit constant term."""
        c0 = self.constant
        if c0 == 0:
            raise BadConstantTerm("series with zero constant term is not invertible")
        inv0 = self.ring.inverse(c0)
        u = self.scale(inv0) - TruncatedSeries.one(self.ring, self.alphabet, self.cap)
        # (1+u)^-1 = sum (-u)^k
        result = TruncatedSeries.one(self.ring, self.alphabet, self.cap)
        power = result
        neg_u = -u
        for _ in range(self.cap):
            power = power * neg_u
            if power.is_zero():
                break
            result = result + power
        return result.scale(inv0)

    def commutator(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self * other - other * self

    def __repr__(self) -> str:
        return f"TruncatedSeries({format_series(self, sep=' + ')!r}, cap={self.cap}, ring={self.ring})"

    def __str__(self) -> str:
        return format_series(self)


def _series_mul(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    _check_compatible(s, t)
    cap = s.cap
    norm = s.ring.normalize
    out: dict[Monomial, object] = {}
    tb = t.degree_buckets()
    tdegs = sorted(tb)
    for ds, sterms in s.degree_buckets().items():
        room = cap - ds
        for dt in tdegs:
            if dt > room:
                break
            for mt, ct in tb[dt]:
                for ms, cs in sterms:
                    key = ms + mt
                    out[key] = out.get(key, 0) + cs * ct
    clean = {}
    for m, c in out.items():
        c = norm(c)
        if c:
            clean[m] = c
    return s._new(clean)


def series_arith(mode: str, s: TruncatedSeries, t) -> TruncatedSeries:
    """``add``, ``mul`` (series or scalar) or ``scale``."""
    if mode == "add":
        return s + t
    if mode == "mul":
        return s * t
    if mode == "scale":
        return s.scale(t)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# exp / log


def series_exp(s: TruncatedSeries) -> TruncatedSeries:
    if s.ring != RATIONALS:
        raise RingNotRational("exp needs rational coefficients")
    if s.constant != 0:
        raise BadConstantTerm("exp needs a zero constant term")
    one = TruncatedSeries.one(s.ring, s.alphabet, s.cap)
    result = one
    power = one
    for k in range(1, s.cap + 1):
        power = (power * s).scale(Fraction(1, k))
        if power.is_zero():
            break
        result = result + power
    return result


def series_log(t: TruncatedSeries) -> TruncatedSeries:
    if t.ring != RATIONALS:
        raise RingNotRational("log needs rational coefficients")
    if t.constant != 1:
        raise BadConstantTerm("log needs constant term 1")
    u = t - TruncatedSeries.one(t.ring, t.alphabet, t.cap)
    result = TruncatedSeries.zero(t.ring, t.alphabet, t.cap)
    power = TruncatedSeries.one(t.ring, t.alphabet, t.cap)
    for k in range(1, t.cap + 1):
        power = power * u
        if power.is_zero():
            break
        sign = 1 if k % 2 else -1
        result = result + power.scale(Fraction(sign, k))
    return result


def series_exp_log(mode: str, s: TruncatedSeries) -> TruncatedSeries:
    if mode == "exp":
        return series_exp(s)
    if mode == "log":
        return series_log(s)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# Hopf structure

TensorPair = dict[tuple[Monomial, Monomial], object]


def coproduct_split(s: TruncatedSeries) -> TensorPair:
    """Deshuffle coproduct ``Delta(X) = X (x) 1 + 1 (x) X`` extended multiplicatively.

    Returns ``{(left monomial, right monomial): coefficient}``.
    """
    norm = s.ring.normalize
    out: TensorPair = {}
    for m, c in s.items():
        k = len(m)
        for mask in range(1 << k):
            left = tuple(m[i] for i in range(k) if mask >> i & 1)
            right = tuple(m[i] for i in range(k) if not mask >> i & 1)
            key = (left, right)
            out[key] = out.get(key, 0) + c
    return {key: norm(v) for key, v in out.items() if norm(v)}


def _tensor_square(s: TruncatedSeries) -> TensorPair:
    cap = s.cap
    norm = s.ring.normalize
    buckets = s.degree_buckets()
    out: TensorPair = {}
    for du, us in buckets.items():
        for dv, vs in buckets.items():
            if du + dv > cap:
                continue
            for mu, cu in us:
                for mv, cv in vs:
                    v = norm(cu * cv)
                    if v:
                        out[(mu, mv)] = v
    return out


def is_primitive(s: TruncatedSeries) -> bool:
    expected: TensorPair = {}
    for m, c in s.items():
        if not m:
            return False
        expected[(m, ())] = c
        expected[((), m)] = c
    return coproduct_split(s) == expected


def is_grouplike(s: TruncatedSeries) -> bool:
    if s.constant != 1:
        return False
    deg = s.alphabet.degree
    cap = s.cap
    delta = coproduct_split(s)
    # Delta(s) is exact on pairs of total degree <= cap only
    delta = {k: v for k, v in delta.items() if deg(k[0]) + deg(k[1]) <= cap}
    return delta == _tensor_square(s)


def hopf_check(mode: str, s: TruncatedSeries) -> bool:
    """``primitive`` or ``grouplike`` test on a truncated series."""
    if mode == "primitive":
        return is_primitive(s)
    if mode == "grouplike":
        return is_grouplike(s)
    raise ValueError(f"unknown mode {mode!r}")


def valuation(s: TruncatedSeries, ignore_constant: bool = True) -> Degree:
    """Least weighted degree with a nonzero coefficient, or ``AboveCap``."""
    degs = [d for d in s.degrees() if d > 0 or not ignore_constant]
    if not degs:
        return Degree.above(s.cap)
    return Degree.exact(degs[0])


# ---------------------------------------------------------------------------
# Magnus expansion


@lru_cache(maxsize=None)
def _binomial_series(e: int, jmax: int) -> tuple[int, ...]:
    """Coefficients of (1+X)^e up to X^jmax (generalized binomials)."""
    return tuple(math.prod(range(e - j + 1, e + 1)) // math.factorial(j) for j in range(jmax + 1))


@lru_cache(maxsize=None)
def _weight_arrays(weights: tuple[int, ...], maxlen: int) -> tuple[np.ndarray, ...]:
    w = np.array(weights, dtype=np.int64)
    arrays = [np.array(0, dtype=np.int64)]
    for _ in range(maxlen):
        arrays.append(np.add.outer(arrays[-1], w))
    return tuple(arrays)


_MODULUS_LIMIT = 1 << 28
_WORD = 1 << 64


def _signed64(c: int) -> int:
    return (c + (1 << 63)) % _WORD - (1 << 63)


def _magnus_run(syllables, weights, cap, maxlen, r, p, dtype) -> list[np.ndarray]:
    levels = [np.array(1, dtype=dtype)]
    levels += [np.zeros((r,) * k, dtype=dtype) for k in range(1, maxlen + 1)]
    if len(syllables) <= _SHORT_WORD:
        _magnus_sequential(levels, syllables, weights, cap, maxlen, p)
    else:
        _magnus_chunked(levels, syllables, weights, cap, maxlen, r, p)
    return levels


@lru_cache(maxsize=None)
def _primes_below_limit(count: int) -> tuple[int, ...]:
    out = []
    q = _MODULUS_LIMIT - 1
    while len(out) < count:
        if all(q % d for d in range(3, math.isqrt(q) + 1, 2)):
            out.append(q)
        q -= 2
    return tuple(out)


def _crt_primes(modulus: int) -> tuple[int, ...]:
    count = 1
    while math.prod(_primes_below_limit(count)) <= modulus:
        count += 1
    return _primes_below_limit(count)


def _crt_combine(wrapped: list[np.ndarray], residues: list[list[np.ndarray]],
                 primes: tuple[int, ...]) -> list[np.ndarray]:
    """Integers from residues mod 2^64 (wrapped int64) and mod each prime."""
    out = []
    for k, level in enumerate(wrapped):
        value = np.asarray(level, dtype=object) % _WORD
        modulus = _WORD
        for res, q in zip(residues, primes):
            t = ((np.asarray(res[k], dtype=object) - value) * pow(modulus, -1, q)) % q
            value = value + modulus * t
            modulus *= q
        half = modulus // 2
        value = np.asarray(value, dtype=object)
        flat = [v - modulus if v > half else v for v in value.reshape(-1).tolist()]
        out.append(np.array(flat, dtype=object).reshape(value.shape))
    return out


_SHORT_WORD = 48


def _magnus_sequential(levels, syllables, weights, cap, maxlen, p) -> None:
    """Multiply in one syllable at a time, top level first."""
    for g, e in syllables:
        jmax = min(maxlen, cap // weights[g])
        coeffs = _binomial_series(e, jmax)
        if p is not None:
            coeffs = tuple(c % p for c in coeffs)
        elif levels[1].dtype != object:
            coeffs = tuple(_signed64(c) for c in coeffs)
        for k in range(maxlen, 0, -1):
            lk = levels[k]
            for j in range(1, min(k, jmax) + 1):
                cj = coeffs[j]
                if cj:
                    lk[(Ellipsis,) + (g,) * j] += cj * levels[k - j]
        if p is not None:
            for k in range(1, maxlen + 1):
                levels[k] = np.mod(levels[k], p)


def _magnus_chunked(levels, syllables, weights, cap, maxlen, r, p) -> None:
    """Same product, vectorized over blocks of syllables.

    With ``A_k[t]`` the level-k part of the prefix before syllable t,
    ``A_k[t+1] - A_k[t] = sum_j c_j(t) A_{k-j}[t] (x) X_{g_t}^j``; the
    right side only involves lower levels, so each level of a block is an
    exclusive cumulative sum.
    """
    dtype = levels[1].dtype
    n = len(syllables)
    gens = np.fromiter((g for g, _ in syllables), dtype=np.int64, count=n)
    coeffs = np.zeros((n, maxlen + 1), dtype=dtype)
    for t, (g, e) in enumerate(syllables):
        jmax = min(maxlen, cap // weights[g])
        c = _binomial_series(e, jmax)
        if p is not None:
            c = [x % p for x in c]
        elif dtype != object:
            c = [_signed64(x) for x in c]
        coeffs[t, : jmax + 1] = c
    state = [lv.reshape(-1).copy() for lv in levels]
    block = max(16, min(1024, (1 << 21) // r ** maxlen))
    for start in range(0, n, block):
        stop = min(n, start + block)
        b = stop - start
        rows = np.arange(b)
        g = gens[start:stop]
        hist = [np.ones((b, 1), dtype=dtype)]
        for k in range(1, maxlen + 1):
            inc = np.zeros((b, r ** k), dtype=dtype)
            for j in range(1, k + 1):
                cj = coeffs[start:stop, j]
                if not cj.any():
                    continue
                # flat index of the monomial X_g^j
                idx = g * ((r ** j - 1) // (r - 1)) if r > 1 else np.zeros_like(g)
                view = inc.reshape(b, r ** (k - j), r ** j)
                view[rows, :, idx] += cj[:, None] * hist[k - j]
            if p is not None:
                inc %= p
            if k < maxlen:
                cs = np.cumsum(inc, axis=0)
                before = state[k][None, :] + cs - inc
                if p is not None:
                    before %= p
                hist.append(before)
                state[k] = state[k] + cs[-1]
            else:
                state[k] = state[k] + inc.sum(axis=0)
            if p is not None:
                state[k] %= p
    for k in range(1, maxlen + 1):
        levels[k] = state[k].reshape((r,) * k)


class MagnusLevels:
    """Dense Magnus expansion ``x_i -> 1 + X_i`` stored per word length.

    Level ``k`` is an object array of shape ``(rank,) * k``. For weighted
    alphabets entries above the cap may hold junk; use the accessors.
    """

    def __init__(self, word: ReducedWord, ring: CoefficientRing, cap: int):
        alphabet = word.alphabet
        self.alphabet = alphabet
        self.ring = ring
        self.cap = cap
        r = alphabet.rank
        minw = min(alphabet.weights)
        maxlen = cap // minw
        self.maxlen = maxlen
        p = ring.p if ring.kind == "F" else None
        args = (word.syllables, alphabet.weights, cap, maxlen, r)
        if p is not None:
            levels = _magnus_run(*args, p, np.int64 if p < _MODULUS_LIMIT else object)
        else:
            # every coefficient is bounded by that of t^k in (1 - t)^(-length)
            length = sum(abs(e) for _, e in word.syllables)
            bound = math.comb(length + maxlen, maxlen)
            # int64 arithmetic wraps, i.e. is exact modulo 2^64
            levels = _magnus_run(*args, None, np.int64)
            if bound >= 2 ** 62:
                primes = _crt_primes((2 * bound + 1) >> 64)
                levels = _crt_combine(levels, [_magnus_run(*args, q, np.int64) for q in primes], primes)
        self.levels = levels
        self._weights = _weight_arrays(alphabet.weights, maxlen) if alphabet.is_weighted else None

    @classmethod
    def from_levels(cls, alphabet: Alphabet, ring: CoefficientRing, cap: int,
                    levels: list[np.ndarray]) -> "MagnusLevels":
        self = cls.__new__(cls)
        self.alphabet, self.ring, self.cap = alphabet, ring, cap
        self.maxlen = len(levels) - 1
        self.levels = levels
        self._weights = _weight_arrays(alphabet.weights, self.maxlen) if alphabet.is_weighted else None
        return self

    def _mask(self, k: int, pred) -> np.ndarray:
        nz = self.levels[k] != 0
        if self._weights is not None:
            nz &= pred(self._weights[k])
        return nz

    def valuation(self) -> Degree:
        """Valuation of (expansion - 1)."""
        cap = self.cap
        if self._weights is None:
            for k in range(1, self.maxlen + 1):
                if np.any(self.levels[k] != 0):
                    return Degree.exact(k)
            return Degree.above(cap)
        best = None
        for k in range(1, self.maxlen + 1):
            nz = self._mask(k, lambda w: w <= cap)
            if np.any(nz):
                d = int(self._weights[k][nz].min())
                best = d if best is None else min(best, d)
        return Degree.above(cap) if best is None else Degree.exact(best)

    def homogeneous_terms(self, d: int) -> dict[Monomial, object]:
        if d > self.cap:
            raise CapTooSmall(f"degree {d} above cap {self.cap}")
        ring = self.ring
        out = {}
        if d == 0:
            return {(): ring(1)}
        ks = [d] if self._weights is None else range(1, min(d, self.maxlen) + 1)
        for k in ks:
            if k > self.maxlen:
                continue
            lvl = self.levels[k]
            nz = lvl != 0
            if self._weights is not None:
                nz &= self._weights[k] == d
            for idx in zip(*np.nonzero(nz)):
                m = tuple(int(i) for i in idx)
                out[m] = ring(int(lvl[idx]))
        return out

    def to_series(self) -> TruncatedSeries:
        ring = self.ring
        terms: dict[Monomial, object] = {(): ring(1)}
        cap = self.cap
        for k in range(1, self.maxlen + 1):
            lvl = self.levels[k]
            nz = lvl != 0
            if self._weights is not None:
                nz &= self._weights[k] <= cap
            for idx in zip(*np.nonzero(nz)):
                terms[tuple(int(i) for i in idx)] = ring(int(lvl[idx]))
        return TruncatedSeries(ring, self.alphabet, cap, terms, _trusted=True)


# ---------------------------------------------------------------------------
# automorphisms acting on truncated Magnus images


_SMALL_PRIME = 1 << 20


def _level_dtype(p: int | None):
    """int64 is exact for small primes (products stay below 2^40 between reductions)."""
    return np.int64 if p is not None and p < _SMALL_PRIME else object


def _dense_reduce(levels: list[np.ndarray], p: int | None) -> list[np.ndarray]:
    if p is None:
        return levels
    return [np.asarray(np.mod(lv, p), dtype=_level_dtype(p)) for lv in levels]


def _dense_mul(a: list[np.ndarray], b: list[np.ndarray], p: int | None) -> list[np.ndarray]:
    """Truncated product of dense series given by per-length levels."""
    top = len(a) - 1
    out = []
    for k in range(top + 1):
        acc = None
        for i in range(k + 1):
            x, y = a[i], b[k - i]
            if not x.any() or not y.any():
                continue
            term = np.multiply.outer(x, y)
            acc = term if acc is None else acc + term
        out.append(acc if acc is not None else np.zeros(a[k].shape if k else (), dtype=_level_dtype(p)))
    return _dense_reduce(out, p)


def _dense_substitute(s: list[np.ndarray], ys: list[list[np.ndarray]], p: int | None,
                      y_live: list[list[bool]] | None = None) -> list[np.ndarray]:
    """``S(Y_1, ..., Y_r)`` for series ``Y_i`` without constant term.

    Horner on the last letter: ``S = S_0 + sum_i S^(i) X_i`` and
    ``S^(i)`` is only needed one length lower since ``Y_i`` has valuation >= 1.
    """
    if y_live is None:
        y_live = [[bool(lv.any()) for lv in y] for y in ys]
    top = len(s) - 1
    r = len(ys)
    dt = _level_dtype(p)
    out = [np.array(s[0], dtype=dt)] + [np.zeros((r,) * k, dtype=dt) for k in range(1, top + 1)]
    if top == 0:
        return out
    for i in range(r):
        sub = [s[k][..., i] for k in range(1, top + 1)]
        if not any(lv.any() for lv in sub):
            continue
        inner = _dense_substitute(sub, ys, p, y_live)
        live = [bool(x.any()) for x in inner]
        y, yl = ys[i], y_live[i]
        for k in range(1, top + 1):
            for j in range(1, k + 1):
                if live[k - j] and yl[j]:
                    out[k] = out[k] + np.multiply.outer(inner[k - j], y[j])
    return _dense_reduce(out, p)


class MagnusMap:
    """Truncated Magnus images ``M(f(x_i))`` (and of ``f(x_i)^-1``) of an endomorphism.

    Composition substitutes series into series, so its cost depends on the
    cap only, never on the lengths of the composite words.
    """

    def __init__(self, alphabet: Alphabet, ring: CoefficientRing, cap: int,
                 images: list[list[np.ndarray]], inverse_images: list[list[np.ndarray]] | None = None,
                 witness: "MagnusMap | None" = None):
        self.alphabet, self.ring, self.cap = alphabet, ring, cap
        self.images = images
        self._inverse_images = inverse_images
        self.witness = witness

    @property
    def maxlen(self) -> int:
        return len(self.images[0]) - 1

    @property
    def _p(self) -> int | None:
        return self.ring.p if self.ring.kind == "F" else None

    @classmethod
    def from_words(cls, images, ring: CoefficientRing, cap: int) -> "MagnusMap":
        images = list(images)
        alphabet = images[0].alphabet
        dt = _level_dtype(ring.p if ring.kind == "F" else None)
        fwd = [_as_object(MagnusLevels(w, ring, cap).levels, dt) for w in images]
        inv = [_as_object(MagnusLevels(w.inverse(), ring, cap).levels, dt) for w in images]
        return cls(alphabet, ring, cap, fwd, inv)

    @classmethod
    def from_group_map(cls, f, ring: CoefficientRing, cap: int) -> "MagnusMap":
        """``f`` a GroupMap; its witness (if any) becomes the inverse map."""
        m = cls.from_words(f.images, ring, cap)
        if f.inverse is not None:
            m.witness = cls.from_words(f.inverse, ring, cap)
            m.witness.witness = m
        return m

    def truncate(self, cap: int) -> "MagnusMap":
        """Same map at a lower cap (levels are per word length; min weight is 1)."""
        if cap >= self.cap:
            return self
        keep = cap + 1
        cut = lambda ims: None if ims is None else [lv[:keep] for lv in ims]  # noqa: E731
        out = MagnusMap(self.alphabet, self.ring, cap, cut(self.images), cut(self._inverse_images))
        if self.witness is not None:
            w = MagnusMap(self.alphabet, self.ring, cap, cut(self.witness.images), cut(self.witness._inverse_images))
            out.witness, w.witness = w, out
        return out

    def inverse(self) -> "MagnusMap":
        if self.witness is None:
            raise ValueError("no inverse witness")
        return self.witness

    def _check(self, other: "MagnusMap") -> None:
        if (self.alphabet, self.ring, self.cap) != (other.alphabet, other.ring, other.cap):
            raise CapMismatch("Magnus maps over different data")

    @property
    def inverse_images(self) -> list[list[np.ndarray]]:
        if self._inverse_images is None:
            raise ValueError("inverse images unavailable")
        return self._inverse_images

    def apply(self, s: list[np.ndarray]) -> list[np.ndarray]:
        """Image of a dense series under the induced algebra map."""
        ys = [[np.zeros((), dtype=_level_dtype(self._p))] + lv[1:] for lv in self.images]
        return _dense_substitute(s, ys, self._p)

    def compose(self, other: "MagnusMap") -> "MagnusMap":
        """``self o other``; witnesses compose in reverse order when present."""
        self._check(other)
        images = [self.apply(lv) for lv in other.images]
        inv = None
        if other._inverse_images is not None:
            inv = [self.apply(lv) for lv in other._inverse_images]
        out = MagnusMap(self.alphabet, self.ring, self.cap, images, inv)
        if self.witness is not None and other.witness is not None:
            w = MagnusMap(self.alphabet, self.ring, self.cap,
                          [other.witness.apply(lv) for lv in self.witness.images])
            out.witness, w.witness = w, out
        return out

    def word_image(self, w: ReducedWord) -> list[np.ndarray]:
        """``M(f(w))`` as a product of generator images."""
        p = self._p
        dt = _level_dtype(p)
        acc = [np.array(1, dtype=dt)] + [np.zeros((self.alphabet.rank,) * k, dtype=dt)
                                         for k in range(1, self.maxlen + 1)]
        for g, e in w.syllables:
            piece = self.images[g] if e > 0 else self.inverse_images[g]
            for _ in range(abs(e)):
                acc = _dense_mul(acc, piece, p)
        return acc

    def displacement(self, i: int) -> MagnusLevels:
        """``M(f(x_i) x_i^-1)``."""
        x_inv = _as_object(MagnusLevels(self.alphabet.generator(i).inverse(), self.ring, self.cap).levels,
                           _level_dtype(self._p))
        levels = _dense_mul(self.images[i], x_inv, self._p)
        return MagnusLevels.from_levels(self.alphabet, self.ring, self.cap, levels)

    def image(self, i: int) -> MagnusLevels:
        return MagnusLevels.from_levels(self.alphabet, self.ring, self.cap, self.images[i])


def _as_object(levels: list[np.ndarray], dtype=object) -> list[np.ndarray]:
    return [np.asarray(lv).astype(dtype) for lv in levels]


def magnus_expand(w: ReducedWord, ring: CoefficientRing, cap: int) -> TruncatedSeries:
    """Multiplicative extension of ``x_i -> 1 + X_i`` truncated at ``cap``."""
    return MagnusLevels(w, ring, cap).to_series()


# ---------------------------------------------------------------------------
# rendering


def _coef_str(c) -> str:
    return str(c)


def format_series(s: TruncatedSeries, sep: str = "\n") -> str:
    """``coef * X1 X2`` lines sorted by (degree, monomial)."""
    names = s.alphabet.names
    if s.is_zero():
        return "0"
    lines = []
    for m, c in s.terms():
        mono = " ".join(names[i] for i in m) if m else "1"
        lines.append(f"{_coef_str(c)} * {mono}")
    return sep.join(lines)


def series_records(s: TruncatedSeries) -> list[dict]:
    names = s.alphabet.names
    return [{"monomial": [names[i] for i in m], "coefficient": _coef_str(c)} for m, c in s.terms()]


def series_from_records(records: list[dict], ring: CoefficientRing, alphabet: Alphabet,
                        cap: int) -> TruncatedSeries:
    terms: dict[Monomial, object] = {}
    for rec in records:
        m = tuple(alphabet.index(n) for n in rec["monomial"])
        terms[m] = terms.get(m, 0) + ring(rec["coefficient"])
    return TruncatedSeries(ring, alphabet, cap, terms)


def parse_series(text: str, ring: CoefficientRing, alphabet: Alphabet, cap: int) -> TruncatedSeries:
    """Inverse of :func:`format_series`."""
    terms: dict[Monomial, object] = {}
    if text.strip() == "0":
        return TruncatedSeries.zero(ring, alphabet, cap)
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        coef, _, mono = line.partition("*")
        mono = mono.split()
        m = () if mono == ["1"] else tuple(alphabet.index(n) for n in mono)
        terms[m] = terms.get(m, 0) + ring(coef)
    return TruncatedSeries(ring, alphabet, cap, terms)
