"""Constraint-file parsing, canonical printing, and the command-line interface.

The file format is line-oriented UTF-8: `#` starts a comment, an optional
`vars x y z` line fixes variable order, and every other non-empty line is one
constraint with branches separated by `|`.  Each branch is a sum of terms
compared against a rational constant or `inf`/`-inf`.  The CLI exposes
`solve`, `check`, and `fuzz` subcommands; exit codes are the machine
contract: 0 satisfiable, 1 unsatisfiable, 2 malformed input, 3 oracle
disagreement.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import certify, eliminate, generate
from .certify import Certificate, certificate_to_jsonable, format_certificate
from .core import Bend, BijunctiveFormula, Lit, lit, normalize_bend
from .errors import BendsatError, NotABendError, ParseError
from .rationals import NEG_INF, POS_INF
from .residue import Cycle, Handcuff, HandcuffRefutation, Path

Assignment = Dict[str, Fraction]

_KEYWORDS = frozenset({"vars", "true", "false", "inf"})

_TOKEN_SPECS: Tuple[Tuple[str, re.Pattern], ...] = (
    ("INF", re.compile(r"-?inf\b")),
    ("NUM", re.compile(r"-?\d+(?:/\d+)?")),
    ("NAME", re.compile(r"[A-Za-z_][A-Za-z0-9_]*")),
    ("OP", re.compile(r"<=|>=|<|>")),
    ("EQ", re.compile(r"=")),
    ("PLUS", re.compile(r"\+")),
    ("MINUS", re.compile(r"-")),
    ("PIPE", re.compile(r"\|")),
)
_MACHINE_NAME = re.compile(r"~[A-Za-z0-9_]+")


@dataclass(frozen=True)
class SourceLocation:
    """Position of a diagnostic: file, 1-based line, 1-based column."""

    file: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


Token = Tuple[str, str, int]


def _tokenize(
    text: str, file: str, line: int, *, machine_names: bool = False
) -> List[Token]:
    tokens: List[Token] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in " \t":
            i += 1
            continue
        if ch == "~":
            if machine_names:
                m = _MACHINE_NAME.match(text, i)
                if m:
                    tokens.append(("NAME", m.group(), i + 1))
                    i = m.end()
                    continue
            raise ParseError(
                "names starting with '~' are reserved for internal renaming",
                SourceLocation(file, line, i + 1),
            )
        for kind, rx in _TOKEN_SPECS:
            m = rx.match(text, i)
            if m:
                tokens.append((kind, m.group(), i + 1))
                i = m.end()
                break
        else:
            raise ParseError(
                f"unexpected character {ch!r}", SourceLocation(file, line, i + 1)
            )
    return tokens


def _parse_literal(toks: Sequence[Token], file: str, line: int) -> Lit:
    def loc(index: int) -> SourceLocation:
        col = toks[index][2] if index < len(toks) else toks[-1][2] + len(toks[-1][1])
        return SourceLocation(file, line, col)

    if not toks:
        raise ParseError("empty branch", SourceLocation(file, line, 1))
    coeffs: Dict[str, Fraction] = {}
    k = 0
    op: Optional[str] = None
    while op is None:
        sign = Fraction(1)
        if k < len(toks) and toks[k][0] == "MINUS":
            sign = Fraction(-1)
            k += 1
        coeff: Optional[Fraction] = None
        if k < len(toks) and toks[k][0] == "NUM":
            try:
                coeff = Fraction(toks[k][1])
            except ZeroDivisionError:
                raise ParseError("zero denominator", loc(k)) from None
            k += 1
        if k < len(toks) and toks[k][0] == "NAME":
            name = toks[k][1]
            if name in _KEYWORDS:
                raise ParseError(f"{name!r} is a keyword, not a variable", loc(k))
            value = sign * (coeff if coeff is not None else Fraction(1))
            coeffs[name] = coeffs.get(name, Fraction(0)) + value
            k += 1
        else:
            raise ParseError("expected a variable name", loc(k))
        if k >= len(toks):
            raise ParseError("missing comparison operator", loc(k))
        kind = toks[k][0]
        if kind == "PLUS":
            k += 1
            continue
        if kind == "OP":
            op = toks[k][1]
            k += 1
        elif kind == "EQ":
            raise ParseError(
                "'=' is not a relation here; split an equality into "
                "'<=' and '>=' constraints on separate lines",
                loc(k),
            )
        else:
            raise ParseError("expected '+' or a comparison operator", loc(k))
    sign = Fraction(1)
    if k < len(toks) and toks[k][0] == "MINUS":
        sign = Fraction(-1)
        k += 1
    if k >= len(toks):
        raise ParseError("expected a rational constant", loc(k))
    kind, text, _ = toks[k]
    if kind == "INF":
        flip = text.startswith("-") != (sign < 0)
        const = NEG_INF if flip else POS_INF
    elif kind == "NUM":
        try:
            const = sign * Fraction(text)
        except ZeroDivisionError:
            raise ParseError("zero denominator", loc(k)) from None
    else:
        raise ParseError("expected a rational constant", loc(k))
    k += 1
    if k != len(toks):
        raise ParseError("unexpected trailing input", loc(k))
    return lit(coeffs, op, const)


def _parse_bend_tokens(
    toks: Sequence[Token], file: str, line: int
) -> Bend:
    if len(toks) == 1 and toks[0][0] == "NAME" and toks[0][1] in ("true", "false"):
        if toks[0][1] == "true":
            return normalize_bend([lit({}, "<=", 0)])
        return normalize_bend([])
    segments: List[List[Token]] = [[]]
    for tok in toks:
        if tok[0] == "PIPE":
            segments.append([])
        else:
            segments[-1].append(tok)
    literals = [_parse_literal(seg, file, line) for seg in segments]
    where = SourceLocation(file, line, toks[0][2])
    try:
        return normalize_bend(literals)
    except NotABendError as e:
        raise NotABendError(f"{where}: {e.message}") from None
    except BendsatError as e:
        raise ParseError(e.message or e.code, where) from None


def parse(text: str, file: str = "<input>") -> BijunctiveFormula:
    """Parse constraint text into a formula; diagnostics carry locations."""
    declared: List[str] = []
    bends: List[Bend] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks = _tokenize(body, file, lineno)
        if not toks:
            continue
        if toks[0][0] == "NAME" and toks[0][1] == "vars":
            for tok in toks[1:]:
                if tok[0] != "NAME" or tok[1] in _KEYWORDS:
                    raise ParseError(
                        "expected variable names after 'vars'",
                        SourceLocation(file, lineno, tok[2]),
                    )
                if tok[1] in declared:
                    raise ParseError(
                        f"variable {tok[1]!r} declared twice",
                        SourceLocation(file, lineno, tok[2]),
                    )
                declared.append(tok[1])
            continue
        bends.append(_parse_bend_tokens(toks, file, lineno))
    if not declared:
        return BijunctiveFormula(bends)
    mentioned = BijunctiveFormula(bends).variables
    order = declared + [v for v in mentioned if v not in declared]
    return BijunctiveFormula(bends, tuple(order))


def parse_file(path: str) -> BijunctiveFormula:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read(), path)


def parse_bend(text: str) -> Bend:
    """Parse a single constraint line, allowing internal '~' point names."""
    toks = _tokenize(text, "<bend>", 1, machine_names=True)
    return _parse_bend_tokens(toks, "<bend>", 1)


def pretty_print(phi: BijunctiveFormula) -> str:
    """Canonical text for a formula; parse() recovers an equal formula."""
    lines = []
    if phi.variables:
        lines.append("vars " + " ".join(phi.variables))
    lines.extend(str(bend) for bend in phi.bends)
    return "\n".join(lines) + ("\n" if lines else "")


def _rational_from_json(value: object, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError(f"{where}: rationals must be exact strings, not {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"{where}: malformed rational {value!r}") from None
    raise ParseError(f"{where}: malformed rational {value!r}")


def witness_from_jsonable(data: object) -> Assignment:
    if isinstance(data, dict) and isinstance(data.get("witness"), dict):
        data = data["witness"]
    if isinstance(data, dict) and isinstance(data.get("assignment"), dict):
        data = data["assignment"]
    if not isinstance(data, dict):
        raise ParseError("witness file must hold a JSON object of rationals")
    return {
        str(var): _rational_from_json(value, str(var)) for var, value in data.items()
    }


def _walk_from_jsonable(data: object, cls, label: str):
    if not isinstance(data, dict):
        raise ParseError(f"certificate {label} must be an object")
    points = tuple(str(p) for p in data.get("points", ()))
    steps = tuple(parse_bend(str(s)) for s in data.get("steps", ()))
    return cls(points, steps)


def certificate_from_jsonable(data: object) -> Certificate:
    """Rebuild a certificate from its JSON form (see certificate_to_jsonable)."""
    if not isinstance(data, dict):
        raise ParseError("certificate file must hold a JSON object")
    kind = data.get("kind")
    if kind == "witness":
        return Certificate.of_witness(witness_from_jsonable(data))
    if kind == "trace":
        return Certificate.of_trace(str(data.get("trace", "")))
    if kind == "handcuff-refutation":
        handcuff = Handcuff(
            _walk_from_jsonable(data.get("cycle_c"), Cycle, "cycle_c"),
            _walk_from_jsonable(data.get("path_p"), Path, "path_p"),
            _walk_from_jsonable(data.get("cycle_d"), Cycle, "cycle_d"),
        )
        hom_data = data.get("hom")
        if not isinstance(hom_data, dict):
            raise ParseError("certificate hom must be an object")
        hom = tuple(sorted((str(u), str(t)) for u, t in hom_data.items()))
        return Certificate.of_refutation(HandcuffRefutation(handcuff, hom))
    raise ParseError(f"unknown certificate kind {kind!r}")


def _solve_payload(
    phi: BijunctiveFormula,
    result: "eliminate.SolveResult",
    *,
    want_witness: bool,
    want_certificate: bool,
) -> Dict[str, object]:
    payload: Dict[str, object] = {
        "status": "sat" if result.satisfiable else "unsat"
    }
    if want_witness and result.satisfiable:
        payload["witness"] = {
            v: str(result.assignment[v]) for v in phi.variables
        }
    if want_certificate:
        payload["certificate"] = certificate_to_jsonable(_certificate_of(result))
    return payload


def _certificate_of(result: "eliminate.SolveResult") -> Certificate:
    if result.satisfiable:
        return Certificate.of_witness(result.assignment)
    if result.refutation is not None:
        return Certificate.of_refutation(result.refutation)
    return Certificate.of_trace(result.trace_text())


def _emit_json(payload: Dict[str, object]) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")


def _cmd_solve(args: argparse.Namespace) -> int:
    phi = parse_file(args.file)
    result = eliminate.solve(phi)
    if args.format == "json":
        _emit_json(
            _solve_payload(
                phi,
                result,
                want_witness=args.witness,
                want_certificate=args.certificate,
            )
        )
    else:
        print("SAT" if result.satisfiable else "UNSAT")
        if args.witness and result.satisfiable:
            for v in phi.variables:
                print(f"{v} = {result.assignment[v]}")
        if args.certificate:
            sys.stdout.write(format_certificate(_certificate_of(result)))
    if args.oracle:
        try:
            oracle_sat = certify.brute_force_sat(phi, parallel=args.parallel)
        except BendsatError as e:
            print(f"oracle skipped: {e}", file=sys.stderr)
        else:
            if (oracle_sat is not None) != result.satisfiable:
                print(
                    "oracle disagreement: solver says "
                    f"{'SAT' if result.satisfiable else 'UNSAT'}, oracle says "
                    f"{'SAT' if oracle_sat is not None else 'UNSAT'}",
                    file=sys.stderr,
                )
                return 3
    return 0 if result.satisfiable else 1


def _cmd_check(args: argparse.Namespace) -> int:
    phi = parse_file(args.file)
    if args.witness:
        with open(args.witness, "r", encoding="utf-8") as fh:
            assignment = witness_from_jsonable(json.load(fh))
        ok = certify.check_witness(phi, assignment)
    else:
        with open(args.certificate, "r", encoding="utf-8") as fh:
            cert = certificate_from_jsonable(json.load(fh))
        if cert.kind == "witness":
            ok = certify.check_witness(phi, cert.witness)
        elif cert.kind == "handcuff-refutation":
            ok = certify.check_refutation(cert.refutation, phi)
        else:
            ok = not eliminate.solve(phi).satisfiable
    print("valid" if ok else "invalid")
    return 0 if ok else 1


def _cmd_fuzz(args: argparse.Namespace) -> int:
    rng = random.Random(args.seed)
    make = generate.random_tvpi_formula if args.tvpi else generate.random_formula
    disagreements = 0
    for index in range(args.count):
        phi = make(rng, max_vars=5, max_bends=8)
        oracle = certify.brute_force_sat(phi, parallel=args.parallel)
        result = eliminate.solve(phi)
        if result.satisfiable != (oracle is not None):
            disagreements += 1
            print(f"instance {index}: solver and oracle disagree")
            for bend in phi.bends:
                print(f"  {bend}")
        elif result.satisfiable and not certify.check_witness(phi, result.assignment):
            disagreements += 1
            print(f"instance {index}: witness fails evaluation")
    print(f"{args.count} instances, {disagreements} disagreements")
    return 0 if disagreements == 0 else 3


def run_cli(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="bendsat",
        description="Exact satisfiability for conjunctions of bend constraints.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_solve = sub.add_parser("solve", help="decide a constraint file")
    p_solve.add_argument("file", help="constraint file to decide")
    p_solve.add_argument("--witness", action="store_true", help="emit an assignment on SAT")
    p_solve.add_argument(
        "--certificate", action="store_true", help="emit a checkable certificate"
    )
    p_solve.add_argument(
        "--oracle",
        action="store_true",
        help="cross-check against the brute-force oracle (exit 3 on disagreement)",
    )
    p_solve.add_argument("--format", choices=("text", "json"), default="text")
    p_solve.add_argument("--seed", type=int, default=0, help="seed recorded for reproducibility")
    p_solve.add_argument(
        "--parallel", action="store_true", help="parallel oracle evaluation"
    )
    p_check = sub.add_parser("check", help="verify a witness or certificate")
    p_check.add_argument("file", help="constraint file the claim is about")
    what = p_check.add_mutually_exclusive_group(required=True)
    what.add_argument("--witness", metavar="PATH", help="JSON assignment to verify")
    what.add_argument("--certificate", metavar="PATH", help="JSON certificate to verify")
    p_fuzz = sub.add_parser("fuzz", help="randomized solver-versus-oracle run")
    p_fuzz.add_argument("--count", type=int, default=100)
    p_fuzz.add_argument("--seed", type=int, default=0)
    p_fuzz.add_argument("--tvpi", action="store_true", help="pure two-variable instances")
    p_fuzz.add_argument("--parallel", action="store_true")
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "check":
            return _cmd_check(args)
        return _cmd_fuzz(args)
    except (BendsatError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())
