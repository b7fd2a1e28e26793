"""Expansions, operator logarithms and the BCH group law on derivation tails.

An :class:`Expansion` sends each free generator ``b_i`` to ``exp(L_i)`` with
``L_i`` a rational Lie series whose lowest part is the generator itself.
Conjugating an automorphism by the expansion gives an algebra automorphism
``r`` of the truncated tensor algebra; ``log r`` is a derivation whose
leading homogeneous component is the Johnson image of the automorphism.

Everything works over the rationals and is truncated at a common cap.
"""
from __future__ import annotations

import itertools
import re
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from sympy import ZZ, QQ
from sympy.polys.matrices import DomainMatrix

from .eglie import Derivation, EgLie, check_derivation, der_bracket
from .errors import (
    CapMismatch,
    InversionFailure,
    NotAnAutomorphism,
    NotHomogeneous,
    NotUnipotent,
    RingNotRational,
)
from .freelie import LieElement, lie_to_tensor, tensor_to_lie
from .series import LOWER_CENTRAL, WEIGHT, SeriesSpec, gr_class, random_word_of_degree
from .tensor import (
    RATIONALS,
    Degree,
    TruncatedSeries,
    hopf_check,
    series_exp,
    series_log,
    valuation,
)
from .words import Alphabet, GroupMap, ReducedWord, verify_automorphism
from .johnson import free_eglie

Monomial = tuple[int, ...]


# ---------------------------------------------------------------------------
# series helpers


def series_substitute(s: TruncatedSeries, images: list[TruncatedSeries]) -> TruncatedSeries:
    """Algebra map ``X_i -> images[i]`` applied to ``s`` (images without constant term)."""
    one = TruncatedSeries.one(s.ring, s.alphabet, s.cap)
    memo: dict[Monomial, TruncatedSeries] = {(): one}

    def prefix(m: Monomial) -> TruncatedSeries:
        r = memo.get(m)
        if r is None:
            r = prefix(m[:-1]) * images[m[-1]]
            memo[m] = r
        return r

    total: dict[Monomial, object] = {}
    for m, c in s.items():
        for mm, cc in prefix(m).items():
            total[mm] = total.get(mm, 0) + c * cc
    return TruncatedSeries(s.ring, s.alphabet, s.cap, total)


def apply_derivation(values: list[TruncatedSeries], s: TruncatedSeries) -> TruncatedSeries:
    """Derivation of the tensor algebra with ``X_i -> values[i]``, applied to ``s``."""
    deg = s.alphabet.degree
    cap = s.cap
    out: dict[Monomial, object] = {}
    for m, c in s.items():
        for j, g in enumerate(m):
            left, right = m[:j], m[j + 1:]
            room = cap - deg(left) - deg(right)
            for mm, cc in values[g].items():
                if deg(mm) <= room:
                    key = left + mm + right
                    out[key] = out.get(key, 0) + c * cc
    return TruncatedSeries(s.ring, s.alphabet, cap, out)


def _letter(alphabet: Alphabet, cap: int, i: int) -> TruncatedSeries:
    return TruncatedSeries.letter(RATIONALS, alphabet, cap, i)


# ---------------------------------------------------------------------------
# expansions


class Expansion:
    """``theta(b_i) = exp(L_i)`` with ``L_i = b_i + (higher Lie terms)``."""

    def __init__(self, alphabet: Alphabet, cap: int, lambdas: Iterable[LieElement] | None = None,
                 check: bool = True):
        self.alphabet = alphabet
        self.cap = cap
        if lambdas is None:
            lambdas = [LieElement.generator(alphabet, i, RATIONALS) for i in range(alphabet.rank)]
        self.lambdas = [u.to_ring(RATIONALS) for u in lambdas]
        if len(self.lambdas) != alphabet.rank:
            raise ValueError("one Lie series per generator is required")
        for i, u in enumerate(self.lambdas):
            wt = alphabet.weights[i]
            if min(u.degrees(), default=0) < wt or u.homogeneous(wt) != LieElement.generator(alphabet, i, RATIONALS):
                raise ValueError(f"lowest part of L_{alphabet.names[i]} must be the generator")
        self.logs = [lie_to_tensor(_below(u, cap), cap) for u in self.lambdas]
        self.exps = [series_exp(t) for t in self.logs]
        self.inverse_exps = [series_exp(-t) for t in self.logs]
        if check:
            for e in self.exps:
                if not hopf_check("grouplike", e):
                    raise ValueError("expansion value is not group-like")

    @property
    def is_standard(self) -> bool:
        return all(len(u) == 1 for u in self.lambdas)

    def tails(self) -> list[TruncatedSeries]:
        """``L_i - X_i`` as tensors."""
        return [t - _letter(self.alphabet, self.cap, i) for i, t in enumerate(self.logs)]

    def with_tail(self, generator: str | int, tail: LieElement) -> "Expansion":
        i = self.alphabet.index(generator) if isinstance(generator, str) else generator
        lambdas = list(self.lambdas)
        lambdas[i] = lambdas[i] + tail.to_ring(RATIONALS)
        return Expansion(self.alphabet, self.cap, lambdas)

    def __call__(self, w: ReducedWord) -> TruncatedSeries:
        return expand_word(self, w)


def _below(u: LieElement, cap: int) -> LieElement:
    out = LieElement.zero(u.alphabet, u.ring)
    for d in u.degrees():
        if d <= cap:
            out = out + u.homogeneous(d)
    return out


def standard_expansion(alphabet: Alphabet, cap: int) -> Expansion:
    """``theta(b_i) = exp(X_i)``."""
    return Expansion(alphabet, cap)


def expand_word(theta: Expansion, w: ReducedWord) -> TruncatedSeries:
    """Multiplicative image of ``w``."""
    if w.alphabet != theta.alphabet:
        raise ValueError("word over a different alphabet")
    acc = TruncatedSeries.one(RATIONALS, theta.alphabet, theta.cap)
    for g, e in w.syllables:
        piece = theta.exps[g] if e > 0 else theta.inverse_exps[g]
        for _ in range(abs(e)):
            acc = acc * piece
    return acc


# ---------------------------------------------------------------------------
# operators


class OperatorEndo:
    """Algebra endomorphism of the truncated tensor algebra, by generator images."""

    def __init__(self, alphabet: Alphabet, cap: int, images: list[TruncatedSeries]):
        if len(images) != alphabet.rank:
            raise ValueError("one image per generator is required")
        for y in images:
            if y.cap != cap:
                raise CapMismatch(f"image cap {y.cap} != {cap}")
            if y.constant != 0:
                raise ValueError("images must have zero constant term")
        self.alphabet = alphabet
        self.cap = cap
        self.images = list(images)

    @classmethod
    def identity(cls, alphabet: Alphabet, cap: int) -> "OperatorEndo":
        return cls(alphabet, cap, [_letter(alphabet, cap, i) for i in range(alphabet.rank)])

    def __call__(self, s: TruncatedSeries) -> TruncatedSeries:
        return series_substitute(s, self.images)

    def compose(self, other: "OperatorEndo") -> "OperatorEndo":
        """``self o other``."""
        if other.cap != self.cap:
            raise CapMismatch("operators with different caps")
        return OperatorEndo(self.alphabet, self.cap, [self(y) for y in other.images])

    def raise_degree(self) -> int:
        """Least ``m`` with ``(r - id)`` raising degree by ``m`` on generators (0 if not unipotent)."""
        best = None
        for i, y in enumerate(self.images):
            diff = y - _letter(self.alphabet, self.cap, i)
            if diff.is_zero():
                continue
            m = min(diff.degrees()) - self.alphabet.weights[i]
            best = m if best is None else min(best, m)
        return self.cap if best is None else best

    def __eq__(self, other) -> bool:
        return isinstance(other, OperatorEndo) and self.cap == other.cap and self.images == other.images


def conjugated_endo(theta: Expansion, f: GroupMap, check: bool = True) -> OperatorEndo:
    """The operator ``r`` with ``r(theta(b)) = theta(f(b))``.

    With ``L_i = X_i + t_i(X)`` and ``Z_i = log theta(f(b_i))``, ``Y_i = r(X_i)``
    solves ``Y_i = Z_i - t_i(Y)``, found by iteration (one degree per step).
    """
    if check:
        try:
            ok = verify_automorphism(f)
        except Exception as exc:  # missing witness
            raise NotAnAutomorphism(str(exc)) from None
        if not ok:
            raise NotAnAutomorphism("inverse witness is not a two-sided inverse")
    z = [series_log(expand_word(theta, x)) for x in f.images]
    if theta.is_standard:
        return OperatorEndo(theta.alphabet, theta.cap, z)
    tails = theta.tails()
    y = z
    for _ in range(theta.cap + 1):
        nxt = [zi - series_substitute(ti, y) for zi, ti in zip(z, tails)]
        if nxt == y:
            return OperatorEndo(theta.alphabet, theta.cap, y)
        y = nxt
    raise InversionFailure("fixed point iteration did not stabilize")


# ---------------------------------------------------------------------------
# derivation tails


@dataclass
class DerivationTail:
    """Sum of homogeneous derivations of degrees ``>= leading`` up to the cap."""

    alphabet: Alphabet
    cap: int
    components: dict[int, Derivation] = field(default_factory=dict)

    def __post_init__(self):
        self.components = {k: d for k, d in sorted(self.components.items()) if not d.is_zero()}

    @property
    def parent(self) -> EgLie:
        return free_eglie(self.alphabet, RATIONALS)

    @property
    def max_degree(self) -> int:
        """Largest derivation degree fully determined below the cap."""
        return self.cap - max(self.alphabet.weights)

    @property
    def leading_degree(self) -> int | None:
        return min(self.components) if self.components else None

    def leading(self) -> Derivation | None:
        k = self.leading_degree
        return None if k is None else self.components[k]

    def component(self, k: int) -> Derivation:
        return self.components.get(k) or Derivation(self.parent, k)

    def is_zero(self) -> bool:
        return not self.components

    def values(self) -> list[TruncatedSeries]:
        """``D(X_i)`` as tensors."""
        out = []
        for i in range(self.alphabet.rank):
            acc = TruncatedSeries.zero(RATIONALS, self.alphabet, self.cap)
            for d in self.components.values():
                v = d.value(i)
                if not v.is_zero() and v.degree() <= self.cap:
                    acc = acc + lie_to_tensor(v, self.cap)
            out.append(acc)
        return out

    def __add__(self, other: "DerivationTail") -> "DerivationTail":
        _same_cap(self, other)
        keys = set(self.components) | set(other.components)
        return DerivationTail(self.alphabet, self.cap,
                              {k: self.component(k) + other.component(k) for k in keys})

    def scale(self, c) -> "DerivationTail":
        return DerivationTail(self.alphabet, self.cap, {k: d.scale(Fraction(c)) for k, d in self.components.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, DerivationTail):
            return NotImplemented
        return self.cap == other.cap and self.components == other.components

    def __repr__(self) -> str:
        return f"DerivationTail(cap={self.cap}, degrees={list(self.components)})"


def _same_cap(s: DerivationTail, t: DerivationTail) -> None:
    if s.cap != t.cap or s.alphabet != t.alphabet:
        raise CapMismatch(f"tails with caps {s.cap} and {t.cap}")


def tail_from_values(alphabet: Alphabet, cap: int, values: list[TruncatedSeries]) -> DerivationTail:
    """Split ``D(X_i)`` into homogeneous Lie derivations (degrees up to the determined range)."""
    parent = free_eglie(alphabet, RATIONALS)
    comps: dict[int, dict[int, LieElement]] = {}
    for i, v in enumerate(values):
        wt = alphabet.weights[i]
        for d in v.degrees():
            k = d - wt
            if k < 1:
                raise NotUnipotent(f"component of degree {k} on {alphabet.names[i]}")
            comps.setdefault(k, {})[i] = tensor_to_lie(v.homogeneous(d), d)
    top = cap - max(alphabet.weights)
    return DerivationTail(alphabet, cap, {k: Derivation(parent, k, vals) for k, vals in comps.items() if k <= top})


def operator_log(r: OperatorEndo, m_hint: int = 1) -> DerivationTail:
    """``log r = sum (-1)^(k+1)/k (r - id)^k`` evaluated on generators."""
    if m_hint < 1:
        raise NotUnipotent("m_hint must be >= 1")
    raised = r.raise_degree()
    if raised < m_hint:
        raise NotUnipotent(f"(r - id) raises degree by {raised} < {m_hint}")
    values = []
    for i in range(r.alphabet.rank):
        u = _letter(r.alphabet, r.cap, i)
        total = TruncatedSeries.zero(RATIONALS, r.alphabet, r.cap)
        for k in range(1, r.cap + 1):
            u = r(u) - u
            if u.is_zero():
                break
            total = total + u.scale(Fraction((-1) ** (k + 1), k))
        values.append(total)
    return tail_from_values(r.alphabet, r.cap, values)


def exp_operator(t: DerivationTail) -> OperatorEndo:
    """``exp(D)`` as an algebra endomorphism: ``X_i -> sum D^k(X_i)/k!``."""
    vals = t.values()
    images = []
    for i in range(t.alphabet.rank):
        term = _letter(t.alphabet, t.cap, i)
        acc = term
        for k in range(1, t.cap + 1):
            term = apply_derivation(vals, term).scale(Fraction(1, k))
            if term.is_zero():
                break
            acc = acc + term
        images.append(acc)
    return OperatorEndo(t.alphabet, t.cap, images)


def bch_product(s: DerivationTail, t: DerivationTail, cap: int | None = None) -> DerivationTail:
    """``log(exp(s) o exp(t))``."""
    _same_cap(s, t)
    if cap is not None and cap != s.cap:
        raise CapMismatch(f"tails have cap {s.cap}, requested {cap}")
    if s.is_zero():
        return t
    if t.is_zero():
        return s
    m = min(s.leading_degree, t.leading_degree)
    return operator_log(exp_operator(s).compose(exp_operator(t)), m)


def rho(theta: Expansion, f: GroupMap, check: bool = True) -> DerivationTail:
    """``log`` of the conjugated operator of ``f``."""
    r = conjugated_endo(theta, f, check)
    return operator_log(r, max(1, r.raise_degree()))


def bch_terms(d: Derivation, e: Derivation) -> dict[str, Derivation]:
    """The displayed low-order BCH terms ``1/2 [d,e]``, ``1/12 [d,[d,e]]``, ``1/12 [e,[e,d]]``."""
    de = der_bracket(d, e)
    return {
        "half": de.scale(Fraction(1, 2)),
        "twelfth_d": der_bracket(d, de).scale(Fraction(1, 12)),
        "twelfth_e": der_bracket(e, der_bracket(e, d)).scale(Fraction(1, 12)),
    }


# ---------------------------------------------------------------------------
# group ring filtration


GroupRingElement = Mapping[ReducedWord, object]


def _check_rational(spec: SeriesSpec) -> None:
    if spec.variant not in (LOWER_CENTRAL, WEIGHT):
        raise RingNotRational(f"{spec} is not a rational series")


def group_ring_image(u: GroupRingElement, theta: Expansion) -> TruncatedSeries:
    total = TruncatedSeries.zero(RATIONALS, theta.alphabet, theta.cap)
    for w, c in u.items():
        total = total + expand_word(theta, w).scale(Fraction(c))
    return total


def jfiltration_degree(u: GroupRingElement, spec: SeriesSpec, theta: Expansion,
                       cap: int | None = None) -> Degree:
    """Valuation of ``sum c_w theta(w)``, i.e. the J-filtration degree of ``u``."""
    _check_rational(spec)
    if cap is not None and cap != theta.cap:
        raise CapMismatch(f"expansion cap {theta.cap} != {cap}")
    return valuation(group_ring_image(u, theta), ignore_constant=False)


def _minus_one(x: ReducedWord) -> dict[ReducedWord, int]:
    one = x.alphabet.identity()
    return {x: 1, one: -1} if not x.is_identity() else {}


def _ring_mul(u: GroupRingElement, v: GroupRingElement) -> dict[ReducedWord, object]:
    out: dict[ReducedWord, object] = {}
    for a, c in u.items():
        for b, d in v.items():
            w = a * b
            out[w] = out.get(w, 0) + c * d
    return {w: c for w, c in out.items() if c}


@dataclass
class UpsilonReport:
    ranks: dict[int, tuple[int, int]] = field(default_factory=dict)
    defects: list[tuple[str, int, int, Degree]] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self) -> str:
        lines = [f"degree {m}: rank {r} of {n}" for m, (r, n) in sorted(self.ranks.items())]
        lines.append(f"{len(self.defects)} multiplicativity checks, {len(self.failures)} failures")
        lines += ["  " + f for f in self.failures]
        return "\n".join(lines)


def _rank(rows: list[list]) -> int:
    if not rows:
        return 0
    dom = ZZ if all(isinstance(c, int) or getattr(c, "denominator", 1) == 1 for r in rows for c in r) else QQ
    conv = (lambda c: ZZ(int(c))) if dom == ZZ else (lambda c: QQ(c.numerator, c.denominator))
    m = DomainMatrix([[conv(c) for c in r] for r in rows], (len(rows), len(rows[0])), dom)
    return m.rank()


def upsilon_checks(spec: SeriesSpec, theta: Expansion, max_degree: int = 5, samples: int = 50,
                   seed: int = 0) -> UpsilonReport:
    """Evidence that ``x K_{i+1} -> (x - 1) + J_{i+1}`` is a graded algebra isomorphism.

    * for each ``m <= max_degree`` the products ``(b_i1 - 1)...(b_im - 1)``
      have linearly independent leading terms spanning all ``r^m`` monomials;
    * for sampled ``x`` of degree ``i`` and ``y`` of degree ``j`` the defect
      ``theta((x-1)(y-1)) - T(x) T(y)`` has valuation ``>= i + j + 1``, where
      ``T`` is the leading Lie term; and ``xy - yx - ([x,y] - 1)`` lies in
      ``J_{i+j+1}``.
    """
    _check_rational(spec)
    if spec.variant != LOWER_CENTRAL:
        raise ValueError("upsilon checks are implemented for the lower central series")
    alphabet = spec.alphabet
    r = alphabet.rank
    cap = theta.cap
    rep = UpsilonReport()
    one = TruncatedSeries.one(RATIONALS, alphabet, cap)
    shifted = [e - one for e in theta.exps]
    for m in range(1, min(max_degree, cap) + 1):
        monos = list(itertools.product(range(r), repeat=m))
        rows = []
        for idx in monos:
            prod = one
            for i in idx:
                prod = prod * shifted[i]
            lead = prod.homogeneous(m)
            rows.append([lead[mono] for mono in monos])
        rk = _rank(rows)
        rep.ranks[m] = (rk, r ** m)
        if rk != r ** m:
            rep.failures.append(f"degree {m}: rank {rk} < {r ** m}")

    rng = random.Random(seed)
    pairs = [(i, j) for i in range(1, cap) for j in range(1, cap) if i + j + 1 <= cap]
    for _ in range(samples):
        i, j = rng.choice(pairs)
        x = random_word_of_degree(spec, i, rng)
        y = random_word_of_degree(spec, j, rng)
        need = i + j + 1
        lx = lie_to_tensor(gr_class(x, spec, i).to_ring(RATIONALS), cap)
        ly = lie_to_tensor(gr_class(y, spec, j).to_ring(RATIONALS), cap)
        defect = group_ring_image(_ring_mul(_minus_one(x), _minus_one(y)), theta) - lx * ly
        deg = valuation(defect, ignore_constant=False)
        rep.defects.append(("product", i, j, deg))
        if deg.is_exact and deg.value < need:
            rep.failures.append(f"product defect of degree {deg} < {need} for x={x}, y={y}")
        comm: dict[ReducedWord, int] = {}
        for w, c in [(x * y, 1), (y * x, -1)] + [(w, -c) for w, c in _minus_one(x.commutator(y)).items()]:
            comm[w] = comm.get(w, 0) + c
        deg = jfiltration_degree({w: c for w, c in comm.items() if c}, spec, theta)
        rep.defects.append(("commutator", i, j, deg))
        if deg.is_exact and deg.value < need:
            rep.failures.append(f"commutator defect of degree {deg} < {need} for x={x}, y={y}")
    return rep


def check_tail(t: DerivationTail, samples: int = 10, seed: int = 0) -> bool:
    """Every component passes the derivation checks."""
    return all(check_derivation(d, samples, seed).ok for d in t.components.values())


def homogeneous_component(t: DerivationTail, k: int) -> Derivation:
    if k > t.max_degree:
        raise NotHomogeneous(f"degree {k} is not determined below cap {t.cap}")
    return t.component(k)


# ---------------------------------------------------------------------------
# text formats


_NUMBER = re.compile(r"\d+(/\d+)?")


def parse_group_ring(text: str, alphabet: Alphabet) -> dict[ReducedWord, Fraction]:
    """``"a b - a - b + 1"`` or ``"2*[a,b] - 1"``: signed terms ``[coef *] word``.

    Signs split terms only outside brackets and not right after ``^``.
    """
    from .words import parse_word

    terms: list[tuple[int, str]] = []
    depth, start, sign = 0, 0, 1
    for pos, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch in "+-" and depth == 0 and not text[:pos].rstrip().endswith("^"):
            if text[start:pos].strip():
                terms.append((sign, text[start:pos]))
            sign, start = (1 if ch == "+" else -1), pos + 1
    if text[start:].strip():
        terms.append((sign, text[start:]))
    out: dict[ReducedWord, Fraction] = {}
    for s, chunk in terms:
        coef, star, word = chunk.partition("*")
        if star:
            c, w = Fraction(coef.strip()), parse_word(word, alphabet)
        elif _NUMBER.fullmatch(chunk.strip()):
            c, w = Fraction(chunk.strip()), alphabet.identity()
        else:
            c, w = Fraction(1), parse_word(chunk, alphabet)
        out[w] = out.get(w, 0) + s * c
    return {w: c for w, c in out.items() if c}


def parse_expansion(text: str, alphabet: Alphabet, cap: int) -> Expansion:
    """Tail lines ``gen -> lie expression`` (derivation file syntax) added to each generator."""
    from .freelie import parse_lie

    tails = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#") or line.rstrip(":") in ("d1", "d2"):
            continue
        name, arrow, expr = line.partition("->")
        if not arrow:
            raise ValueError(f"expected 'gen -> expression', got {raw!r}")
        i = alphabet.index(name.strip())
        tails[i] = tails.get(i, LieElement.zero(alphabet, RATIONALS)) + parse_lie(expr, alphabet, RATIONALS)
    theta = standard_expansion(alphabet, cap)
    for i, u in tails.items():
        theta = theta.with_tail(i, u)
    return theta


def format_tail(t: DerivationTail, sep: str = "\n") -> str:
    from .eglie import format_derivation

    if t.is_zero():
        return "0"
    return sep.join(f"degree {k}:{sep}{format_derivation(d, sep)}" for k, d in t.components.items())


def parse_tail(text: str, alphabet: Alphabet, cap: int) -> DerivationTail:
    """Blocks headed ``degree k:`` in derivation file syntax."""
    from .eglie import parse_derivation

    parent = free_eglie(alphabet, RATIONALS)
    blocks: dict[int, list[str]] = {}
    current = None
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("degree") and line.endswith(":"):
            current = int(line[len("degree"):-1])
            blocks[current] = []
        elif line and line != "0" and not line.startswith("#"):
            if current is None:
                raise ValueError("tail lines must follow a 'degree k:' header")
            blocks[current].append(line)
    return DerivationTail(alphabet, cap, {k: parse_derivation("\n".join(v), parent, k) for k, v in blocks.items()})
