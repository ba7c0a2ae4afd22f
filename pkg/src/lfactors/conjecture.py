"""Scalar factors of the arithmetic Chern-character conjectures and their checks.

The central quantity is the bracketed factor

    L'/L(chi, 1-n) + H_{n-1}/2 - c_chi log 2 / (1 - 2^-n)

with c_chi = 1 for the trivial character and 0 otherwise.  It is returned
unsigned; signs are applied only when report rows are assembled.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .dirichlet import (
    AbelianFieldSpec,
    DirichletCharacter,
    characters_of_field,
    enumerate_characters,
    primitive_part,
    quadratic_character,
    quadratic_field,
    trivial_character,
)
from .exact import harmonic, rational_to_str
from .lfunctions import (
    LFunctionError,
    LogDerivResult,
    dedekind_logderiv,
    dedekind_logderiv_at,
    dedekind_terms,
    dedekind_via_ideals,
    ideal_series,
    l_deriv,
    l_exact_nonpos,
    l_logderiv_neg,
    zeta_k_vanishes_at,
)
from .numeric import GUARD_BITS, Evaluation, Route, context, format_decimal, to_mp
from .special import agm, log_gamma


@dataclass(frozen=True)
class ColmezFactor:
    chi: DirichletCharacter
    n: int
    logderiv: Evaluation
    harmonic_term: Fraction
    log2_term: Evaluation
    total: Evaluation
    logderiv_result: LogDerivResult | None = field(default=None, compare=False)

    def to_json(self) -> dict:
        return {
            "chi": self.chi.to_json(),
            "n": self.n,
            "logderiv": self.logderiv.to_json(),
            "harmonic_term": rational_to_str(self.harmonic_term),
            "log2_term": self.log2_term.to_json(),
            "total": self.total.to_json(),
            "agreement": None
            if self.logderiv_result is None or self.logderiv_result.agreement is None
            else format_decimal(self.logderiv_result.agreement, 8),
        }


def _log2_term(n: int, trivial: bool, prec: int) -> Evaluation:
    ctx = context()
    if not trivial:
        with ctx.workprec(prec + GUARD_BITS):
            return Evaluation(ctx.mpf(0), ctx.mpf(0), Route.EXACT, prec)
    with ctx.workprec(prec + GUARD_BITS):
        v = ctx.ln2 / (1 - ctx.ldexp(1, -n))
        err = ctx.ldexp(abs(v), -prec - 4)
    return Evaluation(v, err, Route.SERIES, prec)


def colmez_factor(chi: DirichletCharacter, n: int, prec: int, routes: str = "both") -> ColmezFactor:
    """The bracketed factor for (chi, n); raises on the excluded case and trivial zeros."""
    res = l_logderiv_neg(n, chi, prec, routes)
    chi = res.chi
    h = harmonic(n - 1).value / 2
    l2 = _log2_term(n, chi.is_trivial, prec)
    ctx = context()
    with ctx.workprec(prec + GUARD_BITS):
        total = to_mp(ctx, res.value.value) + to_mp(ctx, h) - l2.value
        err = res.value.error_bound + l2.error_bound
    return ColmezFactor(chi, n, res.value, h, l2, Evaluation(total, err, res.value.route, prec), res)


# -- degree coefficients ------------------------------------------------------

@dataclass(frozen=True)
class DegreeCoefficient:
    which: str
    field: AbelianFieldSpec | None
    d: int
    value: Evaluation
    decomposition: tuple[tuple[DirichletCharacter, Evaluation], ...]
    zeta_k_term: Evaluation | None = None

    def to_json(self) -> dict:
        return {
            "which": self.which,
            "field": None if self.field is None else self.field.to_json(),
            "d": self.d,
            "value": self.value.to_json(),
            "zeta_k_logderiv": None if self.zeta_k_term is None else self.zeta_k_term.to_json(),
            "decomposition": [
                {"chi": chi.to_json(), "contribution": ev.to_json()} for chi, ev in self.decomposition
            ],
        }


def _real(ctx, x):
    x = to_mp(ctx, x)
    return x.real if hasattr(x, "_mpc_") else x


def _zeta_ratio(prec: int) -> LogDerivResult:
    return l_logderiv_neg(2, trivial_character(), prec, "direct")


def prop22_coefficient(K: AbelianFieldSpec, prec: int, workers: int = 1) -> DegreeCoefficient:
    """-(d+1)(d/3 x + 2/3 z_K + d/2 - 4(d+2)/9 log 2), x = zeta'/zeta(-1), z_K = zeta_K'/zeta_K(-1)."""
    if not K.is_totally_real:
        raise LFunctionError("the degree formula applies to totally real abelian fields only")
    d = K.degree
    terms = dedekind_terms(K, 2, prec, "direct", workers)
    x = _zeta_ratio(prec)
    ctx = context()
    with ctx.workprec(prec + GUARD_BITS):
        z = ctx.mpf(0)
        z_err = ctx.mpf(0)
        for t in terms:
            z += _real(ctx, t.value.value)
            z_err += t.value.error_bound
        xv = _real(ctx, x.value.value)
        inner = ctx.mpf(d) / 3 * xv + 2 * z / 3 + ctx.mpf(d) / 2 - ctx.mpf(4 * (d + 2)) / 9 * ctx.ln2
        val = -(d + 1) * inner
        err = (d + 1) * (ctx.mpf(d) / 3 * x.value.error_bound + 2 * z_err / 3 + ctx.ldexp(1, -prec - 4))
        zk = Evaluation(z, z_err, Route.EULER_MACLAURIN, prec)
    decomposition = tuple((t.chi, t.value) for t in terms)
    return DegreeCoefficient("prop22", K, d, Evaluation(val, err, Route.EULER_MACLAURIN, prec),
                             decomposition, zk)


def prop23_coefficient(prec: int) -> DegreeCoefficient:
    """-(4 x - 16/3 log 2 + 2) with x = zeta'/zeta(-1)."""
    x = _zeta_ratio(prec)
    ctx = context()
    with ctx.workprec(prec + GUARD_BITS):
        xv = _real(ctx, x.value.value)
        val = -(4 * xv - 16 * ctx.ln2 / 3 + 2)
        err = 4 * x.value.error_bound + ctx.ldexp(1, -prec - 4)
    return DegreeCoefficient("prop23", None, 2, Evaluation(val, err, Route.EULER_MACLAURIN, prec),
                             ((x.chi, x.value),))


def kuhn_case_factor(prec: int) -> Evaluation:
    """The factor for the trivial character at n = 2 (K = Q), a proven instance."""
    return colmez_factor(trivial_character(), 2, prec).total


# -- oracle reports ---------------------------------------------------------------

@dataclass
class OracleResult:
    name: str
    residual: object
    tolerance: object
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "residual": format_decimal(self.residual, 8),
            "tolerance": format_decimal(self.tolerance, 8),
            "pass": bool(self.passed),
        }
        if self.details:
            out["details"] = self.details
        return out


def factorization_consistency(D: int, n: int, prec: int) -> OracleResult:
    """Compare the character sum for Q(sqrt D) with the ideal-count oracle.

    When zeta_K(1-n) = 0 (all imaginary fields; real fields with odd n) the
    log-derivative at 1-n is undefined and the comparison moves to s = n.
    """
    K = quadratic_field(D)
    ctx = context()
    if zeta_k_vanishes_at(D, n):
        point = n
        chars = dedekind_logderiv_at(K, n, prec)
        oracle = ideal_series(D, n, prec).logderiv
    else:
        point = 1 - n
        chars = dedekind_logderiv(K, n, prec)
        oracle = dedekind_via_ideals(D, n, prec)
    with ctx.workprec(prec + GUARD_BITS):
        resid = abs(_real(ctx, chars.value) - _real(ctx, oracle.value))
        tol = 10 * (chars.error_bound + oracle.error_bound)
    return OracleResult(
        f"factorization D={D} n={n}",
        resid,
        tol,
        bool(resid < tol),
        {
            "point": point,
            "character_sum": format_decimal(chars.value, 40),
            "ideal_oracle": format_decimal(oracle.value, 40),
        },
    )


def lerch_identity_check(q_max: int, prec: int) -> OracleResult:
    """Max over odd primitive chi, q <= q_max, of |L'(0,chi) + log q L(0,chi) - sum chi(a) logGamma(a/q)|."""
    if q_max > 100:
        raise ValueError("lerch_identity_check is limited to q_max <= 100")
    ctx = context()
    wp = prec + GUARD_BITS
    worst = None
    tol_total = None
    checked = []
    for q in range(1, q_max + 1):
        chars = [c for c in enumerate_characters(q) if c.is_primitive and not c.is_even]
        if not chars:
            continue
        lg = {a: log_gamma(Fraction(a, q), prec + 8) for a in range(1, q)}
        for chi in chars:
            lhs = l_deriv(0, chi, prec)
            exact = l_exact_nonpos(1, chi)
            vals = chi.numeric_values(wp)
            with ctx.workprec(wp):
                logq = ctx.log(q)
                rhs = -logq * exact.embed(1, wp)
                bound = lhs.error_bound
                for a, ev in lg.items():
                    if chi.exponent_at(a) is not None:
                        rhs += vals[a] * ev.value
                        bound += ev.error_bound
                if chi.is_real:
                    rhs = rhs.real
                resid = abs(to_mp(ctx, lhs.value) - rhs)
                worst = resid if worst is None else max(worst, resid)
                tol_total = bound if tol_total is None else max(tol_total, bound)
            checked.append(chi.label())
    with ctx.workprec(wp):
        if worst is None:
            worst = ctx.mpf(0)
            tol_total = ctx.mpf(0)
        return OracleResult(f"lerch q<={q_max}", worst, tol_total, bool(worst <= tol_total),
                            {"characters": checked})


def _gross_closed_form(d: int, prec: int) -> Evaluation:
    """L'/L(chi_{-d}, 0) from Lerch's formula with the Gamma reflection applied."""
    ctx = context()
    if d == 4:
        lg = log_gamma(Fraction(1, 4), prec + 8)
        with ctx.workprec(prec + GUARD_BITS):
            v = 4 * lg.value - ctx.log(8 * ctx.pi ** 2)
            err = 4 * lg.error_bound
    else:
        lg = log_gamma(Fraction(1, 3), prec + 8)
        with ctx.workprec(prec + GUARD_BITS):
            v = 6 * lg.value - 3 * ctx.log(2 * ctx.pi) + ctx.log(3) / 2
            err = 6 * lg.error_bound
    return Evaluation(v, err, Route.SERIES, prec)


def gross_cm_check(d: int, prec: int) -> list[OracleResult]:
    """Period and log-derivative residuals for Q(sqrt -d), d in {3, 4}.

    d = 4: lemniscate constant pi/agm(1, sqrt 2) against Gamma(1/4)^2 / (2 sqrt(2 pi)).
    d = 3: K(sin 15 deg) = pi / (2 agm(1, cos 15 deg)) against
    3^(1/4) Gamma(1/3)^3 / (2^(7/3) pi)  (w = 6, h = 1).
    Both: L'/L(chi_{-d}, 0) from Euler-Maclaurin against its Gamma closed form.
    """
    if d not in (3, 4):
        raise ValueError("gross_cm_check supports d = 3 or d = 4")
    ctx = context()
    wp = prec + GUARD_BITS
    tol_exp = -prec + 16
    if d == 4:
        lg = log_gamma(Fraction(1, 4), prec + 8)
        with ctx.workprec(wp):
            mean = agm(1, ctx.sqrt(2), prec + 8)
            period_agm = ctx.pi / mean.value
            period_gamma = ctx.exp(2 * lg.value) / (2 * ctx.sqrt(2 * ctx.pi))
    else:
        lg = log_gamma(Fraction(1, 3), prec + 8)
        with ctx.workprec(wp):
            kprime = (ctx.sqrt(6) + ctx.sqrt(2)) / 4
            mean = agm(1, kprime, prec + 8)
            period_agm = ctx.pi / (2 * mean.value)
            period_gamma = (ctx.root(3, 4) * ctx.exp(3 * lg.value)
                            / (ctx.cbrt(2) ** 7 * ctx.pi))
    with ctx.workprec(wp):
        tol = ctx.ldexp(1, tol_exp)
        r1 = abs(period_agm - period_gamma)
    period = OracleResult(
        f"gross d={d} period", r1, tol, bool(r1 < tol),
        {"period_agm": format_decimal(period_agm, 30), "period_gamma": format_decimal(period_gamma, 30)},
    )
    res = l_logderiv_neg(1, quadratic_character(-d), prec, "both")
    closed = _gross_closed_form(d, prec)
    with ctx.workprec(wp):
        value = _real(ctx, res.value.value)
        r2 = abs(value - closed.value)
    logderiv = OracleResult(
        f"gross d={d} L'/L(chi,0)", r2, tol, bool(r2 < tol),
        {"value": format_decimal(value, 30), "closed_form": format_decimal(closed.value, 30)},
    )
    with ctx.workprec(wp):
        r3 = res.agreement if res.agreement is not None else ctx.mpf(0)
    routes = OracleResult(f"gross d={d} route agreement", r3, tol, bool(r3 < tol))
    return [period, logderiv, routes]


# -- reports -------------------------------------------------------------------

Target = Union[DirichletCharacter, AbelianFieldSpec]


@dataclass
class ReportRow:
    kind: str
    target: Target
    n: int
    weight: Fraction
    factor: ColmezFactor | None = None
    field_total: Evaluation | None = None
    decomposition: list[ColmezFactor] = field(default_factory=list)
    status: str = "ok"

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == "character":
            out["chi"] = self.target.to_json()
        else:
            out["field"] = self.target.to_json()
        out["n"] = self.n
        out["weight"] = rational_to_str(self.weight)
        total = self.factor.total if self.factor is not None else self.field_total
        if total is None:
            out["factor"] = None
        else:
            ctx = context()
            with ctx.workprec(total.prec_bits + GUARD_BITS):
                signed = -to_mp(ctx, self.weight) * to_mp(ctx, total.value)
            out["factor"] = {
                "total": total.to_json(),
                "signed_rhs_coefficient": Evaluation(signed, abs(self.weight) * total.error_bound,
                                                     total.route, total.prec_bits).to_json(),
                "coefficient_field_order": self.factor.chi.order if self.factor is not None else None,
            }
            if self.factor is not None:
                out["factor"]["terms"] = self.factor.to_json()
        out["decomposition"] = [f.to_json() for f in self.decomposition]
        out["status"] = self.status
        return out


def _row(entry, prec: int, routes: str) -> ReportRow:
    target, n = entry[0], entry[1]
    weight = Fraction(entry[2]) if len(entry) > 2 else Fraction(1)
    if isinstance(target, AbelianFieldSpec):
        row = ReportRow("field", target, n, weight)
        try:
            parts = [colmez_factor(chi, n, prec, routes) for chi in characters_of_field(target)]
        except LFunctionError as exc:
            row.status = f"error: {exc}"
            return row
        ctx = context()
        with ctx.workprec(prec + GUARD_BITS):
            tot = ctx.mpf(0)
            err = ctx.mpf(0)
            for p in parts:
                tot += _real(ctx, p.total.value)
                err += p.total.error_bound
        row.field_total = Evaluation(tot, err, Route.EULER_MACLAURIN, prec)
        row.decomposition = parts
        return row
    row = ReportRow("character", primitive_part(target), n, weight)
    try:
        row.factor = colmez_factor(target, n, prec, routes)
    except LFunctionError as exc:
        row.status = f"error: {exc}"
    return row


@dataclass
class Report:
    entries: list[ReportRow]
    oracles: list[OracleResult]
    prec_bits: int

    def to_json(self) -> dict:
        return {
            "prec_bits": self.prec_bits,
            "entries": [r.to_json() for r in self.entries],
            "oracles": [o.to_json() for o in self.oracles],
        }


def conjecture_report(spec: Sequence[tuple], prec: int, routes: str = "both",
                      oracles: Sequence[str] = (), workers: int = 1) -> Report:
    """Evaluate each (character-or-field, n[, weight]) entry; rows keep the input order."""
    items = list(spec)
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda e: _row(e, prec, routes), items))
    else:
        rows = [_row(e, prec, routes) for e in items]
    from .verify import run_suite

    results: list[OracleResult] = []
    for name in oracles:
        results.extend(run_suite(name, prec))
    return Report(rows, results, prec)
