"""Command-line front end.

    egjohnson word reduce --word "(a b)^-2"
    egjohnson series degree --word "[a,b]" --series lcs
    egjohnson johnson tau --map inner_a.map -N 6
    egjohnson formal rho --map inner_a.map -N 5 --machine
    egjohnson selftest

Exit status: 0 on success, 1 when a computation raises a library error
(its class name goes to stderr), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Any, Callable

from .eglie import Derivation, format_derivation
from .errors import EgJohnsonError
from .formal import (
    DerivationTail,
    bch_product,
    format_tail,
    jfiltration_degree,
    parse_expansion,
    parse_group_ring,
    parse_tail,
    rho,
    standard_expansion,
    upsilon_checks,
)
from .freelie import format_lie, lie_records
from .johnson import (
    FilteredAut,
    filtration_degree,
    random_filtered_automorphism,
    random_nielsen,
    tau,
    tau0,
    verify_morphism_identities,
)
from .series import SeriesSpec, check_axioms, gr_class, series_degree
from .tensor import Degree, format_series, magnus_expand, series_records
from .words import Alphabet, GroupMap, compose_maps, format_word, parse_map, parse_word

GRAMMAR = """\
commands:
  word reduce|expand            --word W [--series S -N N]
  series degree|class|axioms    --word W --series S [-N N] [--degree M]
  johnson degree|tau|tau0       --map FILE --series S -N N [--degree M]
  johnson verify                --series S -N N --samples K --seed SEED
  formal rho                    --map FILE -N N [--expansion FILE]
  formal bch                    (--map F --map G | --tail F --tail G) -N N
  formal jdeg                   --element "a b - a - b + 1" -N N
  formal upsilon                -N N --samples K --seed SEED
  selftest
word grammar: word := factor* ; factor := atom ("^" int)? ;
              atom := ident | "(" word ")" | "[" word "," word "]"
series: lcs | zassenhaus:P | weight
"""


class UsageError(Exception):
    pass


class Output:
    """Collects results; text mode prints them, machine mode emits JSON lines."""

    def __init__(self, machine: bool, stream=None):
        self.machine = machine
        self.stream = stream or sys.stdout

    def emit(self, kind: str, text: str, record: Any) -> None:
        if self.machine:
            line = json.dumps({"kind": kind, "result": record}, sort_keys=True)
            print(line, file=self.stream)
        else:
            print(text, file=self.stream)


def _degree_record(d: Degree) -> dict:
    if d.is_exact:
        return {"exact": d.value}
    if d.infinite:
        return {"infinite": True}
    return {"above_cap": d.cap, "strict": d.strict}


def derivation_record(d: Derivation) -> dict:
    names = d.parent.alphabet.names
    rec: dict[str, Any] = {"degree": d.degree,
                           "values": {names[i]: lie_records(d.value(i)) for i in range(len(names))}}
    if d.d0:
        l0 = d.parent.l0.names
        rec["d0"] = {l0[k]: lie_records(v) for k, v in sorted(d.d0.items())}
    return rec


def tail_record(t: DerivationTail) -> dict:
    return {"cap": t.cap, "components": [derivation_record(d) for d in t.components.values()]}


# ---------------------------------------------------------------------------
# input resolution


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _alphabet(args) -> Alphabet:
    if args.alphabet:
        return Alphabet.parse_file(_read(args.alphabet))
    if getattr(args, "map", None):
        return parse_map(_read(args.map[0])).alphabet
    return Alphabet.of("a b")


def _spec(args, alphabet: Alphabet) -> SeriesSpec:
    try:
        return SeriesSpec.parse(args.series, alphabet)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _need(args, name: str):
    value = getattr(args, name, None)
    if value in (None, []):
        raise UsageError(f"--{name} is required for {args.group} {args.action or ''}".rstrip())
    return value


def _maps(args, alphabet: Alphabet) -> list[GroupMap]:
    return [parse_map(_read(p), alphabet) for p in _need(args, "map")]


def _word(args, alphabet: Alphabet):
    return parse_word(_need(args, "word"), alphabet)


# ---------------------------------------------------------------------------
# commands


def cmd_word(args, out: Output) -> None:
    alphabet = _alphabet(args)
    w = _word(args, alphabet)
    if args.action == "reduce":
        out.emit("word", format_word(w), {"word": format_word(w), "syllables": len(w.syllables)})
        return
    spec = _spec(args, alphabet)
    s = magnus_expand(w, spec.ring, args.N)
    out.emit("series", format_series(s), series_records(s))


def cmd_series(args, out: Output) -> None:
    alphabet = _alphabet(args)
    spec = _spec(args, alphabet)
    if args.action == "axioms":
        rep = check_axioms(spec, samples=args.samples, cap=args.N, seed=args.seed)
        out.emit("axioms", str(rep), {"checked": rep.checked, "skipped": rep.skipped,
                                      "counterexamples": [[k, [format_word(w) for w in ws], d]
                                                          for k, ws, d in rep.counterexamples]})
        if not rep.ok:
            raise _Failed()
        return
    w = _word(args, alphabet)
    if args.action == "degree":
        d = series_degree(w, spec, args.N)
        out.emit("degree", str(d), _degree_record(d))
    else:
        m = _need(args, "degree")
        u = gr_class(w, spec, m)
        out.emit("lie", format_lie(u), lie_records(u))


def cmd_johnson(args, out: Output) -> None:
    alphabet = _alphabet(args)
    spec = _spec(args, alphabet)
    if args.action == "verify":
        _johnson_verify(args, spec, out)
        return
    (f, *_) = _maps(args, alphabet)
    if args.action == "degree":
        d = filtration_degree(f, spec, args.N)
        out.emit("degree", str(d), _degree_record(d))
    elif args.action == "tau":
        d = tau(FilteredAut(f, spec, args.N), args.degree)
        out.emit("derivation", format_derivation(d), derivation_record(d))
    else:
        g = tau0(f, spec)
        names = alphabet.names
        text = "\n".join(f"{names[i]} -> {format_lie(v, sep=' + ')}" for i, v in sorted(g.f1.items()))
        out.emit("aut0", text, {"images": {names[i]: lie_records(v) for i, v in sorted(g.f1.items())},
                                "matrix": [[str(c) for c in row] for row in g.matrix()]})


class _Failed(Exception):
    """A check ran to completion and reported failures."""


def _johnson_verify(args, spec: SeriesSpec, out: Output) -> None:
    rng = random.Random(args.seed)
    rows = []
    for k in range(args.samples):
        while True:
            m, n = rng.randint(1, 3), rng.randint(1, 3)
            if m + n > args.N:
                continue
            fa = FilteredAut(random_filtered_automorphism(spec, m, rng), spec, args.N, check=False)
            ga = FilteredAut(random_filtered_automorphism(spec, n, rng), spec, args.N, check=False)
            if fa.degree.is_exact and ga.degree.is_exact and int(fa.degree) + int(ga.degree) <= args.N:
                break
        rep = verify_morphism_identities(fa, ga, random_nielsen(spec.alphabet, rng, 2))
        rows.append((k, rep))
    bad = [(k, name) for k, rep in rows for name, ok, _ in rep.results if not ok]
    text = f"{len(rows)} pairs, {len(bad)} failures" + "".join(f"\n  pair {k}: ({n})" for k, n in bad)
    out.emit("verify", text, {"pairs": len(rows), "failures": [[k, n] for k, n in bad]})
    if bad:
        raise _Failed()


def _expansion(args, alphabet: Alphabet):
    if args.expansion:
        return parse_expansion(_read(args.expansion), alphabet, args.N)
    return standard_expansion(alphabet, args.N)


def cmd_formal(args, out: Output) -> None:
    alphabet = _alphabet(args)
    if args.action == "rho":
        (f, *_) = _maps(args, alphabet)
        t = rho(_expansion(args, alphabet), f)
        out.emit("tail", format_tail(t), tail_record(t))
    elif args.action == "bch":
        if args.tail:
            if len(args.tail) != 2:
                raise UsageError("formal bch takes exactly two --tail files")
            s, t = (parse_tail(_read(p), alphabet, args.N) for p in args.tail)
            result = bch_product(s, t)
            out.emit("tail", format_tail(result), tail_record(result))
            return
        maps = _maps(args, alphabet)
        if len(maps) != 2:
            raise UsageError("formal bch takes exactly two --map files")
        theta = _expansion(args, alphabet)
        f, g = maps
        result = bch_product(rho(theta, f), rho(theta, g))
        direct = rho(theta, compose_maps(f, g))
        agree = result == direct
        out.emit("tail", format_tail(result) + f"\nequals rho(f g): {agree}",
                 {**tail_record(result), "equals_composite": agree})
        if not agree:
            raise _Failed()
    elif args.action == "jdeg":
        spec = _spec(args, alphabet)
        u = parse_group_ring(_need(args, "element"), alphabet)
        d = jfiltration_degree(u, spec, _expansion(args, alphabet))
        out.emit("degree", str(d), _degree_record(d))
    else:
        spec = _spec(args, alphabet)
        rep = upsilon_checks(spec, _expansion(args, alphabet), min(5, args.N), args.samples, args.seed)
        out.emit("upsilon", str(rep), {"ranks": {str(m): list(v) for m, v in sorted(rep.ranks.items())},
                                       "defect_checks": len(rep.defects), "failures": rep.failures})
        if not rep.ok:
            raise _Failed()


def cmd_selftest(args, out: Output) -> None:
    from .acceptance import run_all

    results = run_all(echo=None)
    for res in results:
        out.emit("criterion", res.line(), {"number": res.number, "name": res.name, "passed": res.passed,
                                           "detail": res.detail, "budget": res.budget})
    if not all(r.passed for r in results):
        raise _Failed()


ACTIONS: dict[str, tuple[list[str], Callable]] = {
    "word": (["reduce", "expand"], cmd_word),
    "series": (["degree", "class", "axioms"], cmd_series),
    "johnson": (["degree", "tau", "tau0", "verify"], cmd_johnson),
    "formal": (["rho", "bch", "jdeg", "upsilon"], cmd_formal),
    "selftest": ([], cmd_selftest),
}


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alphabet", metavar="FILE", help="lines 'name [weight]' (default: a b)")
    common.add_argument("--series", default="lcs", help="lcs | zassenhaus:P | weight")
    common.add_argument("-N", type=_positive, default=6, help="cap (default 6)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--machine", action="store_true", help="JSON lines output")
    common.add_argument("--map", action="append", metavar="FILE")
    common.add_argument("--word")
    common.add_argument("--degree", type=_positive)
    common.add_argument("--samples", type=_positive, default=20)
    common.add_argument("--expansion", metavar="FILE", help="tail lines 'gen -> lie expression'")
    common.add_argument("--tail", action="append", metavar="FILE")
    common.add_argument("--element", help="group-ring element, e.g. 'a b - a - b + 1'")

    parser = argparse.ArgumentParser(prog="egjohnson", description="Johnson homomorphisms of free groups.",
                                     epilog=GRAMMAR, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="group", required=True)
    for group, (actions, _) in ACTIONS.items():
        p = sub.add_parser(group, parents=[common], epilog=GRAMMAR,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        if actions:
            p.add_argument("action", choices=actions)
        else:
            p.set_defaults(action=None)
    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Output(args.machine, stdout)
    try:
        ACTIONS[args.group][1](args, out)
    except UsageError as exc:
        print(f"usage error: {exc}\n\n{GRAMMAR}", file=stderr, end="")
        return 2
    except _Failed:
        return 1
    except EgJohnsonError as exc:
        print(f"{type(exc).__name__}: {exc}", file=stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
