"""Command-line front end: ``lfactors <command> [options]``.

Exit codes: 0 success, 1 usage or parse error, 2 refused precondition
(excluded case, trivial zero, pole), 3 a verification suite failed.
Errors go to stderr as a JSON object ``{"code": ..., "message": ...}``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .conjecture import colmez_factor, conjecture_report, prop22_coefficient, prop23_coefficient
from .dirichlet import (
    AbelianFieldSpec,
    CharacterError,
    DirichletCharacter,
    character_from_json,
    field_from_json,
    make_character,
    primitive_part,
    quadratic_character,
    quadratic_field,
    trivial_character,
)
from .exact import rational_to_str
from .lfunctions import ROUTES, LFunctionError, gen_bernoulli, l_deriv, l_logderiv_neg, l_value
from .numeric import Evaluation, Route, complex_to_json, format_decimal
from .verify import SUITES, run_suite

PREC_MIN, PREC_MAX = 64, 4096


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- spec parsing -----------------------------------------------------------------

def parse_character(text: str) -> DirichletCharacter:
    """``trivial``, ``D:<disc>``, ``<q>:<e1>,<e2>,...`` or a JSON object."""
    text = text.strip()
    if text == "trivial":
        return trivial_character()
    if text.startswith("{"):
        try:
            return character_from_json(json.loads(text))
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise CharacterError(f"bad character JSON: {exc}") from None
    head, sep, tail = text.partition(":")
    if not sep:
        raise CharacterError(f"cannot parse character {text!r}")
    if head in ("D", "d"):
        return quadratic_character(_int(tail))
    q = _int(head)
    if q < 1:
        raise CharacterError("modulus must be positive")
    exps = [_int(e) for e in tail.split(",")] if tail.strip() else []
    return make_character(q, exps)


def parse_field(text: str) -> AbelianFieldSpec:
    """``D:<disc>``, ``f:<g1>,<g2>,...`` (conductor f, subgroup generators) or JSON."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return field_from_json(json.loads(text))
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise CharacterError(f"bad field JSON: {exc}") from None
    head, sep, tail = text.partition(":")
    if not sep:
        raise CharacterError(f"cannot parse field {text!r}")
    if head in ("D", "d"):
        return quadratic_field(_int(tail))
    gens = tuple(_int(g) for g in tail.split(",")) if tail.strip() else ()
    return AbelianFieldSpec(_int(head), gens)


def _int(s: str) -> int:
    try:
        return int(s.strip())
    except ValueError:
        raise CharacterError(f"expected an integer, got {s!r}") from None


def _prec(s: str) -> int:
    try:
        p = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid precision {s!r}") from None
    if not PREC_MIN <= p <= PREC_MAX:
        raise argparse.ArgumentTypeError(f"precision must lie in [{PREC_MIN}, {PREC_MAX}]")
    return p


def _positive(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _rational(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational number, got {s!r}") from None


# -- output -------------------------------------------------------------------------

def _line(name: str, ev: Evaluation) -> dict:
    """One printable quantity: value, bound and route together."""
    v = complex_to_json(ev.value, ev.prec_bits)
    return {"quantity": name, "re": v["re"], "im": v["im"],
            "error_bound": format_decimal(ev.error_bound, 8), "route": ev.route.value}


def _exact_line(name: str, value: str) -> dict:
    return {"quantity": name, "re": value, "im": "0", "error_bound": "0", "route": Route.EXACT.value}


def _emit(fmt: str, payload: dict, lines: list[dict], out) -> None:
    if fmt == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["quantity", "re", "im", "error_bound", "route"],
                           lineterminator="\n")
        w.writeheader()
        w.writerows(lines)
        out.write(buf.getvalue())
    else:
        width = max((len(r["quantity"]) for r in lines), default=0)
        for r in lines:
            val = r["re"] if r["im"] in ("0", "0.0") else f"{r['re']} + ({r['im']})i"
            out.write(f"{r['quantity']:<{width}}  {val}  +/- {r['error_bound']}  [{r['route']}]\n")


# -- commands -------------------------------------------------------------------------

def cmd_lvalue(args) -> tuple[dict, list[dict]]:
    chi = parse_character(args.chi)
    s = args.s
    val = l_value(s, chi, args.prec_bits)
    der = l_deriv(s, chi, args.prec_bits)
    lines = [_line("L(s, chi)", val), _line("L'(s, chi)", der)]
    payload = {"chi": chi.to_json(), "s": rational_to_str(s), "value": val.to_json(), "derivative": der.to_json()}
    if s.denominator == 1 and s <= 0:
        n = 1 - int(s)
        exact = gen_bernoulli(n, primitive_part(chi)).value * Fraction(-1, n)
        payload["exact"] = exact.to_json()
        if exact.is_rational():
            lines.insert(0, _exact_line("L(s, chi) exact", str(exact.as_rational())))
    return payload, lines


def cmd_ldlog(args) -> tuple[dict, list[dict]]:
    chi = parse_character(args.chi)
    res = l_logderiv_neg(args.n, chi, args.prec_bits, args.routes)
    lines = [_line("L'/L(1-n, chi)", res.value)]
    if res.route_a is not None and res.route_b is not None:
        lines.append(_line("direct route", res.route_a))
        lines.append(_line("functional route", res.route_b))
        lines.append({"quantity": "route agreement", "re": format_decimal(res.agreement, 8), "im": "0",
                      "error_bound": "0", "route": "both"})
    return res.to_json(), lines


def cmd_bernoulli(args) -> tuple[dict, list[dict]]:
    chi = parse_character(args.chi) if args.chi else trivial_character()
    gb = gen_bernoulli(args.n, chi)
    payload = {"n": args.n, "chi": chi.to_json(), "value": gb.value.to_json()}
    if gb.value.is_rational():
        text = str(gb.value.as_rational())
        payload["rational"] = text
        lines = [_exact_line("B_{n,chi}", text)]
    else:
        lines = [_exact_line(f"B_{{n,chi}} coeff zeta_{gb.value.order}^{j}", rational_to_str(c))
                 for j, c in enumerate(gb.value.coeffs)]
    return payload, lines


def cmd_factor(args) -> tuple[dict, list[dict]]:
    chi = parse_character(args.chi)
    f = colmez_factor(chi, args.n, args.prec_bits, args.routes)
    lines = [
        _line("L'/L(1-n, chi)", f.logderiv),
        _exact_line("H_{n-1}/2", rational_to_str(f.harmonic_term)),
        _line("log 2 term", f.log2_term),
        _line("factor", f.total),
    ]
    return f.to_json(), lines


def _coefficient_lines(c) -> list[dict]:
    lines = [_line(f"{c.which} coefficient", c.value)]
    if c.zeta_k_term is not None:
        lines.append(_line("zeta_K'/zeta_K(-1)", c.zeta_k_term))
    for chi, ev in c.decomposition:
        lines.append(_line(f"chi {chi.label()}", ev))
    return lines


def cmd_prop22(args) -> tuple[dict, list[dict]]:
    K = parse_field(args.field)
    c = prop22_coefficient(K, args.prec_bits, args.threads)
    return c.to_json(), _coefficient_lines(c)


def cmd_prop23(args) -> tuple[dict, list[dict]]:
    c = prop23_coefficient(args.prec_bits)
    return c.to_json(), _coefficient_lines(c)


def _report_entry(item: dict) -> tuple:
    if "chi" in item:
        chi = item["chi"]
        target = parse_character(chi if isinstance(chi, str) else json.dumps(chi))
    elif "field" in item:
        fld = item["field"]
        target = parse_field(fld if isinstance(fld, str) else json.dumps(fld))
    else:
        raise CharacterError("report entries need a 'chi' or 'field' key")
    return (target, int(item["n"]), Fraction(str(item.get("weight", 1))))


def cmd_report(args) -> tuple[dict, list[dict]]:
    try:
        with open(args.input, encoding="utf-8") as fh:
            items = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CharacterError(f"cannot read report input: {exc}") from None
    entries = [_report_entry(it) for it in items]
    rep = conjecture_report(entries, args.prec_bits, args.routes, args.oracle or (), args.threads)
    lines = []
    for i, row in enumerate(rep.entries):
        total = row.factor.total if row.factor is not None else row.field_total
        if total is None:
            lines.append({"quantity": f"entry {i}", "re": row.status, "im": "0", "error_bound": "", "route": ""})
        else:
            lines.append(_line(f"entry {i} factor", total))
    for o in rep.oracles:
        lines.append({"quantity": o.name, "re": format_decimal(o.residual, 8), "im": "0",
                      "error_bound": format_decimal(o.tolerance, 8), "route": "pass" if o.passed else "FAIL"})
    return rep.to_json(), lines


def cmd_verify(args):
    results = run_suite(args.suite, args.prec_bits)
    ok = all(r.passed for r in results)
    payload = {"suite": args.suite, "prec_bits": args.prec_bits, "passed": ok,
               "results": [r.to_json() for r in results]}
    return payload, results, ok


def _verify_output(fmt: str, payload: dict, results, out) -> None:
    if fmt == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
        return
    rows = [(r.name, format_decimal(r.residual, 8), format_decimal(r.tolerance, 8),
             "pass" if r.passed else "FAIL") for r in results]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "residual", "tolerance", "status"])
        w.writerows(rows)
        out.write(buf.getvalue())
        return
    width = max(len(r[0]) for r in rows)
    for name, res, tol, status in rows:
        out.write(f"{name:<{width}}  residual {res:<16} tol {tol:<16} {status}\n")
    out.write(f"{'all passed' if payload['passed'] else 'FAILED'}\n")


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--prec-bits", type=_prec, default=192, help="working precision in bits [64, 4096]")
    common.add_argument("--output", choices=("json", "csv", "text"), default="text")
    common.add_argument("--routes", choices=ROUTES, default="both")
    common.add_argument("--threads", type=_positive, default=1, help="worker threads for field sums")

    p = _Parser(prog="lfactors", description="Special values and log-derivatives of Dirichlet L-functions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("lvalue", parents=[common], help="L(s, chi) and L'(s, chi)")
    q.add_argument("--chi", required=True)
    q.add_argument("--s", type=_rational, required=True)
    q.set_defaults(func=cmd_lvalue)

    q = sub.add_parser("ldlog", parents=[common], help="L'/L(chi, 1-n)")
    q.add_argument("--chi", required=True)
    q.add_argument("--n", type=_positive, required=True)
    q.set_defaults(func=cmd_ldlog)

    q = sub.add_parser("bernoulli", parents=[common], help="generalized Bernoulli number B_{n,chi}")
    q.add_argument("--n", type=_positive, required=True)
    q.add_argument("--chi")
    q.set_defaults(func=cmd_bernoulli)

    q = sub.add_parser("factor", parents=[common], help="L'/L(chi,1-n) + H_{n-1}/2 - log 2 term")
    q.add_argument("--chi", required=True)
    q.add_argument("--n", type=_positive, required=True)
    q.set_defaults(func=cmd_factor)

    q = sub.add_parser("prop22", parents=[common], help="degree coefficient for a totally real abelian field")
    q.add_argument("--field", required=True)
    q.set_defaults(func=cmd_prop22)

    q = sub.add_parser("prop23", parents=[common], help="degree coefficient for the imaginary quadratic case with d + 1 = 2")
    q.set_defaults(func=cmd_prop23)

    q = sub.add_parser("report", parents=[common], help="evaluate a JSON list of (chi|field, n, weight) entries")
    q.add_argument("--input", required=True, help="JSON file: [{\"chi\": \"D:-4\", \"n\": 1, \"weight\": 1}, ...]")
    q.add_argument("--oracle", action="append", choices=SUITES, help="oracle suite to attach (repeatable)")
    q.set_defaults(func=cmd_report)

    q = sub.add_parser("verify", parents=[common], help="run oracle suites")
    q.add_argument("--suite", choices=SUITES, default="all")
    q.set_defaults(func=cmd_verify)
    return p


def _fail(code: str, message: str, status: int, err) -> int:
    err.write(json.dumps({"code": code, "message": message}) + "\n")
    return status


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _fail("usage", str(exc), 1, err)
    try:
        if args.command == "verify":
            payload, results, ok = cmd_verify(args)
            _verify_output(args.output, payload, results, out)
            return 0 if ok else 3
        payload, lines = args.func(args)
    except LFunctionError as exc:
        return _fail(exc.code, str(exc), 2, err)
    except CharacterError as exc:
        return _fail("parse error", str(exc), 1, err)
    _emit(args.output, payload, lines, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
