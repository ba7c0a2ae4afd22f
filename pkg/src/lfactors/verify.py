"""Oracle suites run by ``lfactors verify``.

Each suite returns a list of :class:`OracleResult`; a suite passes when every
residual is below its tolerance.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .conjecture import (
    OracleResult,
    factorization_consistency,
    gross_cm_check,
    kuhn_case_factor,
    lerch_identity_check,
)
from .dirichlet import (
    enumerate_characters,
    gauss_sum,
    orthogonality_sum,
    quadratic_character,
    trivial_character,
)
from .exact import CycloElem, bernoulli_polynomial, euler_phi
from .lfunctions import l_exact_nonpos, l_logderiv_neg
from .numeric import GUARD_BITS, context, to_mp
from .special import digamma, hurwitz_zeta, hurwitz_zeta_ds

SUITES = ("all", "lerch", "factorization", "gross", "kernels")

FACTORIZATION_CASES = [(D, n) for D in (5, 8, 12, 13, -3, -4, -7) for n in (2, 3)]


def exact_values() -> list[OracleResult]:
    cases = [
        ("L(chi_-4, 0) = 1/2", l_exact_nonpos(1, quadratic_character(-4)), Fraction(1, 2)),
        ("zeta(-1) = -1/12", l_exact_nonpos(2, trivial_character()), Fraction(-1, 12)),
        ("L(chi_5, -1) = -2/5", l_exact_nonpos(2, quadratic_character(5)), Fraction(-2, 5)),
    ]
    out = []
    for name, got, want in cases:
        ok = got.is_rational() and got.as_rational() == want
        out.append(OracleResult(name, 0 if ok else 1, 0, ok, {"value": str(got.coeffs[0])}))
    return out


def glaisher_anchor(prec: int) -> OracleResult:
    """zeta'(-1) against 1/12 - log A, with log A = (gamma + log 2pi)/12 - zeta'(2)/(2 pi^2)."""
    ctx = context()
    direct = hurwitz_zeta_ds(-1, 1, prec)
    dz2 = hurwitz_zeta_ds(2, 1, prec)
    psi1 = digamma(1, prec)
    with ctx.workprec(prec + GUARD_BITS):
        euler_gamma = -psi1.value
        log_a = (euler_gamma + ctx.log(2 * ctx.pi)) / 12 - dz2.value / (2 * ctx.pi ** 2)
        anchored = ctx.mpf(1) / 12 - log_a
        rel = abs(direct.value - anchored) / abs(anchored)
        return OracleResult("glaisher anchor (relative)", rel, ctx.mpf(10) ** -40, bool(rel < ctx.mpf(10) ** -40))


def hurwitz_bernoulli(prec: int) -> OracleResult:
    ctx = context()
    worst = None
    bound = None
    ok = True
    params = [Fraction(k, 5) for k in range(1, 5)] + [Fraction(1, 4), Fraction(3, 4)]
    for n in range(13):
        for a in params:
            ev = hurwitz_zeta(-n, a, prec)
            target = -bernoulli_polynomial(n + 1, a) / (n + 1)
            with ctx.workprec(prec + GUARD_BITS):
                r = abs(ev.value - to_mp(ctx, target))
                ok = ok and r <= ev.error_bound
                worst = r if worst is None else max(worst, r)
                bound = ev.error_bound if bound is None else max(bound, ev.error_bound)
    return OracleResult("hurwitz vs bernoulli polynomial", worst, bound, ok)


def multiplication_theorem(prec: int) -> OracleResult:
    """sum_{r<q} zeta(s, (a+r)/q) = q^s zeta(s, a) for q = 2, 3."""
    ctx = context()
    worst = ctx.mpf(0)
    worst_bound = ctx.mpf(0)
    ok = True
    for s in (-3, 2, 3, Fraction(5, 2)):
        for a in (Fraction(1, 3), Fraction(1, 2), Fraction(1)):
            base = hurwitz_zeta(s, a, prec)
            for q in (2, 3):
                parts = [hurwitz_zeta(s, (a + r) / q, prec) for r in range(q)]
                with ctx.workprec(prec + GUARD_BITS):
                    sm = to_mp(ctx, s)
                    lhs = sum((p.value for p in parts), ctx.mpf(0))
                    rhs = ctx.mpf(q) ** sm * base.value
                    bound = sum((p.error_bound for p in parts), ctx.mpf(0)) + ctx.mpf(q) ** sm * base.error_bound
                    r = abs(lhs - rhs)
                    ok = ok and r <= bound
                    worst = max(worst, r)
                    worst_bound = max(worst_bound, bound)
    return OracleResult("hurwitz multiplication theorem", worst, worst_bound, ok)


def character_identities(prec: int, q_max: int = 60) -> list[OracleResult]:
    ctx = context()
    orth_ok = True
    gauss_worst = ctx.mpf(0)
    for q in range(1, q_max + 1):
        for chi in enumerate_characters(q):
            if not chi.is_trivial and not orthogonality_sum(chi).is_zero():
                orth_ok = False
            if chi.is_primitive:
                tau = gauss_sum(chi, prec)
                with ctx.workprec(prec + GUARD_BITS):
                    r = abs(abs(tau) ** 2 - q)
                    gauss_worst = max(gauss_worst, r)
    with ctx.workprec(prec + GUARD_BITS):
        tol = ctx.ldexp(1, 12 - prec)
        return [
            OracleResult(f"character orthogonality q<={q_max}", 0 if orth_ok else 1, 0, orth_ok),
            OracleResult(f"|gauss sum|^2 = conductor q<={q_max}", gauss_worst, tol, bool(gauss_worst < tol)),
        ]


def cyclotomic_field_axioms(seed: int = 20261019, trials: int = 20) -> OracleResult:
    rng = random.Random(seed)
    ok = True
    for m in (3, 4, 5, 8, 12):
        deg = euler_phi(m)

        def rand():
            return CycloElem(m, [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(deg)])

        for _ in range(trials):
            a, b, c = rand(), rand(), rand()
            ok = ok and (a * b) * c == a * (b * c)
            ok = ok and a * (b + c) == a * b + a * c
            if not a.is_zero():
                ok = ok and a * a.inverse() == 1
    return OracleResult("Q(zeta_m) field axioms", 0 if ok else 1, 0, ok)


def two_route_agreement(prec: int, q_max: int = 24, n_max: int = 6) -> OracleResult:
    ctx = context()
    worst = ctx.mpf(0)
    count = 0
    for q in range(1, q_max + 1):
        for chi in enumerate_characters(q):
            if not chi.is_primitive:
                continue
            for n in range(1, n_max + 1):
                if chi.is_even != (n % 2 == 0) or (n == 1 and chi.is_trivial):
                    continue
                res = l_logderiv_neg(n, chi, prec, "both")
                worst = max(worst, res.agreement)
                count += 1
    with ctx.workprec(prec + GUARD_BITS):
        tol = ctx.ldexp(1, -prec // 2)
        return OracleResult(f"two-route agreement q<={q_max} n<={n_max}", worst, tol, bool(worst < tol),
                            {"cases": count})


def kuhn_stability(prec: int) -> OracleResult:
    ctx = context()
    lo = kuhn_case_factor(prec)
    hi = kuhn_case_factor(2 * prec)
    with ctx.workprec(2 * prec + GUARD_BITS):
        r = abs(to_mp(ctx, lo.value) - to_mp(ctx, hi.value))
        tol = ctx.mpf(10) ** -30
        return OracleResult("kuhn factor stability", r, tol, bool(r < tol and lo.error_bound < ctx.ldexp(1, -150)))


def run_suite(name: str, prec: int = 192) -> list[OracleResult]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if name == "all":
        out = []
        for sub in SUITES[1:]:
            out.extend(run_suite(sub, prec))
        return out
    if name == "lerch":
        return [lerch_identity_check(50, prec)]
    if name == "factorization":
        return [factorization_consistency(D, n, prec) for D, n in FACTORIZATION_CASES]
    if name == "gross":
        return gross_cm_check(4, prec) + gross_cm_check(3, prec)
    out = exact_values()
    out.append(glaisher_anchor(prec))
    out.append(hurwitz_bernoulli(prec))
    out.append(multiplication_theorem(prec))
    out.extend(character_identities(prec))
    out.append(cyclotomic_field_axioms())
    out.append(two_route_agreement(prec))
    out.append(kuhn_stability(prec))
    return out
