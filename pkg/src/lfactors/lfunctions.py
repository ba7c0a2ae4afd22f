"""Dirichlet L-functions and abelian Dedekind zeta functions.

Exact values at non-positive integers come from generalized Bernoulli numbers.
Logarithmic derivatives L'/L(chi, 1-n) are computed two ways:

* ``direct``: Hurwitz decomposition at s = 1-n, divided by the exact value;
* ``functional``: the completed functional equation transfers the question to
  s = n, where L and L' are summed as Dirichlet series with an
  Euler-Maclaurin tail over each residue class.

Every character is replaced by its primitive part before any evaluation.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .dirichlet import (
    AbelianFieldSpec,
    DirichletCharacter,
    characters_of_field,
    is_fundamental_discriminant,
    kronecker_symbol,
    primitive_part,
)
from .exact import CycloElem, bernoulli_polynomial
from .numeric import GUARD_BITS, Evaluation, Route, context, to_mp
from .special import PoleError, clear_caches as _clear_special, digamma_half_integer, em_coefficient, hurwitz_pair, int_log

ROUTES = ("direct", "functional", "both")


class LFunctionError(ValueError):
    """A refused precondition: excluded case, trivial zero or pole."""

    code = "refused"


class ExcludedCaseError(LFunctionError):
    code = "excluded case"


class TrivialZeroError(LFunctionError):
    code = "trivial zero"


class LPoleError(LFunctionError):
    code = "pole"


# -- exact values ---------------------------------------------------------------

@dataclass(frozen=True)
class GenBernoulli:
    n: int
    character: DirichletCharacter
    value: CycloElem


@lru_cache(maxsize=4096)
def _gen_bernoulli(n: int, chi: DirichletCharacter) -> CycloElem:
    q = chi.modulus
    terms: dict[int, Fraction] = {}
    for a in range(1, q + 1):
        j = chi.exponent_at(a)
        if j is None:
            continue
        terms[j] = terms.get(j, Fraction(0)) + bernoulli_polynomial(n, Fraction(a, q))
    return CycloElem.from_powers(chi.order, terms) * Fraction(q) ** (n - 1)


def gen_bernoulli(n: int, chi: DirichletCharacter) -> GenBernoulli:
    """B_{n,chi} = q^(n-1) sum_{a=1}^{q} chi(a) B_n(a/q), exactly."""
    if n < 1:
        raise ValueError("generalized Bernoulli index must be positive")
    return GenBernoulli(n, chi, _gen_bernoulli(n, chi))


def _check_not_excluded(n: int, chi: DirichletCharacter) -> None:
    if n == 1 and chi.is_trivial:
        raise ExcludedCaseError(
            "excluded case: n = 1 with the trivial character"
        )


def l_exact_nonpos(n: int, chi: DirichletCharacter) -> CycloElem:
    """L(chi, 1-n) = -B_{n,chi}/n as an element of Q(zeta_order)."""
    if n < 1:
        raise ValueError("n must be positive")
    _check_not_excluded(n, chi)
    return gen_bernoulli(n, primitive_part(chi)).value * Fraction(-1, n)


# -- Hurwitz decomposition -----------------------------------------------------

@lru_cache(maxsize=65536)
def _hurwitz_cached(s, a: Fraction, prec: int):
    # characters of one modulus share these values; callers convert into their context
    return hurwitz_pair(s, a, prec, finite_part=(s == 1))


def _l_pair(s, chi: DirichletCharacter, prec: int):
    """(L(s, chi), L'(s, chi)) with aggregated error bounds; chi primitive."""
    if chi.is_trivial and s == 1:
        raise LPoleError("pole of zeta at s = 1")
    q = chi.modulus
    ctx = context()
    wp = prec + GUARD_BITS
    vals = chi.numeric_values(wp)
    real = chi.is_real
    with ctx.workprec(wp):
        s_mp = to_mp(ctx, s)
        L = ctx.mpf(0) if real else ctx.mpc(0)
        dL = ctx.mpf(0) if real else ctx.mpc(0)
        err_v = ctx.mpf(0)
        err_d = ctx.mpf(0)
        for a in range(1, q + 1):
            if chi.exponent_at(a) is None:
                continue
            zv, zd = _hurwitz_cached(s, Fraction(a, q), prec + 8)
            c = vals[a % q].real if real else vals[a % q]
            L += c * to_mp(ctx, zv.value)
            dL += c * to_mp(ctx, zd.value)
            err_v += zv.error_bound
            err_d += zd.error_bound
        logq = int_log(ctx, q) if q > 1 else ctx.mpf(0)
        qs = ctx.mpf(q) ** (-s_mp)
        L *= qs
        dL = qs * dL - logq * L
        scale = abs(qs)
        err_v *= scale
        err_d = err_d * scale + logq * err_v
    return (Evaluation(L, err_v, Route.EULER_MACLAURIN, prec),
            Evaluation(dL, err_d, Route.EULER_MACLAURIN, prec))


def l_value(s, chi: DirichletCharacter, prec: int) -> Evaluation:
    """L(s, chi) = q^-s sum_a chi(a) zeta(s, a/q)."""
    return _l_pair(s, primitive_part(chi), prec)[0]


def l_deriv(s, chi: DirichletCharacter, prec: int) -> Evaluation:
    """L'(s, chi) = -log q L(s, chi) + q^-s sum_a chi(a) zeta'(s, a/q)."""
    return _l_pair(s, primitive_part(chi), prec)[1]


def clear_caches() -> None:
    """Forget memoized Hurwitz values and generalized Bernoulli numbers (for cold timings)."""
    _hurwitz_cached.cache_clear()
    _gen_bernoulli.cache_clear()
    _clear_special()


# -- Dirichlet series at s = n >= 1 ---------------------------------------------

def power_sum_tail(ctx, s: int, x0, prec: int, regularize_pole: bool = False):
    """sum_{k>=0} (k + x0)^-s and its s-derivative for integer s and large x0.

    With ``regularize_pole`` the divergent s = 1 sum is replaced by the finite
    part of its Laurent expansion; callers must weight it by coefficients that
    sum to zero.  Returns (value, derivative, omitted_term_bound).
    """
    lx = ctx.log(x0)
    xs = x0 ** (-s)
    if s == 1:
        if not regularize_pole:
            raise LPoleError("power sum diverges at s = 1")
        val = -lx
        der = lx * lx / 2
    else:
        val = x0 * xs / (s - 1)
        der = -lx * val - x0 * xs / (s - 1) ** 2
    val += xs / 2
    der -= lx * xs / 2
    thr = ctx.ldexp(1, -prec - 8)
    P, dP = ctx.mpf(s), ctx.mpf(1)
    pw = xs / x0
    x2 = x0 * x0
    for j in range(1, 200):
        c = em_coefficient(ctx, j)
        T = c * P * pw
        dT = c * (dP - lx * P) * pw
        if abs(T) < thr * abs(val) and abs(dT) < thr * max(abs(der), thr):
            return val, der, 2 * (abs(T) + abs(dT))
        val += T
        der += dT
        P, dP = P * (s + 2 * j - 1) * (s + 2 * j), dP * (s + 2 * j - 1) * (s + 2 * j) + P * (2 * s + 4 * j - 1)
        pw /= x2
    raise ArithmeticError("power-sum tail did not converge; raise x0")


def _series_cutoff(prec: int) -> int:
    return max(math.ceil(0.2 * (prec + GUARD_BITS)), 24)


def dirichlet_series_pair(n: int, chi: DirichletCharacter, prec: int):
    """(L(n, chi), L'(n, chi)) by direct summation plus residue-class tails.

    Terms m <= K q are summed directly; for each residue a the remainder
    sum_{k>=K} (kq + a)^-n is closed by an Euler-Maclaurin tail.  At n = 1 the
    character must be nontrivial (its values sum to zero, cancelling the
    divergent parts of the tails).
    """
    if n < 1:
        raise ValueError("series route needs n >= 1")
    if n == 1 and chi.is_trivial:
        raise LPoleError("pole of zeta at s = 1")
    q = chi.modulus
    ctx = context()
    wp = prec + GUARD_BITS
    vals = chi.numeric_values(wp)
    real = chi.is_real
    K = _series_cutoff(prec)
    with ctx.workprec(wp):
        zero = ctx.mpf(0) if real else ctx.mpc(0)
        L, dL = zero, zero
        scale = ctx.mpf(0)
        for m in range(1, K * q + 1):
            if chi.exponent_at(m) is None:
                continue
            c = vals[m % q].real if real else vals[m % q]
            t = ctx.mpf(m) ** (-n)
            L += c * t
            dL -= c * int_log(ctx, m) * t
            scale += t
        logq = int_log(ctx, q) if q > 1 else ctx.mpf(0)
        qn = ctx.mpf(q) ** (-n)
        tail_err = ctx.mpf(0)
        for a in range(1, q + 1):
            if chi.exponent_at(a) is None:
                continue
            c = vals[a % q].real if real else vals[a % q]
            x0 = K + ctx.mpf(a) / q
            tv, td, terr = power_sum_tail(ctx, n, x0, prec + 8, regularize_pole=(n == 1))
            # sum_k (kq + a)^-n = q^-n sum_k (k + a/q)^-n, differentiated in s
            L += c * qn * tv
            dL += c * qn * (td - logq * tv)
            tail_err += qn * terr * (1 + logq)
        rounding = ctx.ldexp(scale * (1 + int_log(ctx, K * q + 1)), -wp + 8) * K * q
        err = tail_err + rounding
        return (Evaluation(L, err, Route.SERIES, prec), Evaluation(dL, err, Route.SERIES, prec))


# -- logarithmic derivative at 1 - n --------------------------------------------

@dataclass(frozen=True)
class LogDerivResult:
    chi: DirichletCharacter
    n: int
    value: Evaluation
    route_a: Evaluation | None
    route_b: Evaluation | None
    agreement: object | None

    @property
    def error_bound(self):
        return self.value.error_bound

    def to_json(self) -> dict:
        from .numeric import format_decimal

        return {
            "chi": self.chi.to_json(),
            "n": self.n,
            "value": self.value.to_json()["value"],
            "error_bound": format_decimal(self.value.error_bound, 8),
            "route_a": None if self.route_a is None else self.route_a.to_json(),
            "route_b": None if self.route_b is None else self.route_b.to_json(),
            "agreement": None if self.agreement is None else format_decimal(self.agreement, 8),
        }


def check_nonvanishing(n: int, chi: DirichletCharacter) -> CycloElem:
    """Exact L(chi, 1-n) after the excluded-case guard; raises on a trivial zero."""
    chi = primitive_part(chi)
    _check_not_excluded(n, chi)
    exact = l_exact_nonpos(n, chi)
    if exact.is_zero():
        raise TrivialZeroError(
            f"trivial zero: L(chi, {1 - n}) = 0 for {chi.parity} character {chi.label()}"
        )
    return exact


def _direct_route(n: int, chi: DirichletCharacter, exact: CycloElem, prec: int) -> Evaluation:
    ctx = context()
    deriv = _l_pair(1 - n, chi, prec)[1]
    with ctx.workprec(prec + GUARD_BITS):
        denom = exact.embed(1, prec + GUARD_BITS)
        if chi.is_real:
            denom = denom.real
        val = to_mp(ctx, deriv.value) / denom
        err = deriv.error_bound / abs(denom)
    return Evaluation(val, err, Route.EULER_MACLAURIN, prec)


def _functional_route(n: int, chi: DirichletCharacter, prec: int) -> Evaluation:
    """L'/L(chi, 1-n) = -log(q/pi) - psi((n+d)/2)/2 - psi((1-n+d)/2)/2 - L'/L(conj chi, n)."""
    q = chi.modulus
    d = chi.delta
    ctx = context()
    wp = prec + GUARD_BITS
    cbar = chi.conjugate()
    lv, ld = dirichlet_series_pair(n, cbar, prec + 8)
    psi_hi = digamma_half_integer(Fraction(n + d, 2), prec + 8)
    psi_lo = digamma_half_integer(Fraction(1 - n + d, 2), prec + 8)
    with ctx.workprec(wp):
        logq = int_log(ctx, q) if q > 1 else ctx.mpf(0)
        ratio = to_mp(ctx, ld.value) / to_mp(ctx, lv.value)
        val = -(logq - ctx.log(ctx.pi)) - (psi_hi.value + psi_lo.value) / 2 - ratio
        absL = abs(to_mp(ctx, lv.value))
        err = (ld.error_bound + abs(ratio) * lv.error_bound) / absL
        err += (psi_hi.error_bound + psi_lo.error_bound) / 2
    return Evaluation(val, err, Route.FUNCTIONAL_EQUATION, prec)


def l_logderiv_neg(n: int, chi: DirichletCharacter, prec: int, routes: str = "both") -> LogDerivResult:
    """L'/L(chi, 1-n) for primitive_part(chi), refusing trivial zeros and the excluded case."""
    if routes not in ROUTES:
        raise ValueError(f"routes must be one of {ROUTES}")
    if n < 1:
        raise ValueError("n must be positive")
    chi = primitive_part(chi)
    exact = check_nonvanishing(n, chi)
    route_a = route_b = agreement = None
    if routes in ("direct", "both"):
        route_a = _direct_route(n, chi, exact, prec)
    if routes in ("functional", "both"):
        route_b = _functional_route(n, chi, prec)
    if route_a is not None and route_b is not None:
        ctx = context()
        with ctx.workprec(prec + GUARD_BITS):
            agreement = abs(to_mp(ctx, route_a.value) - to_mp(ctx, route_b.value))
    value = route_a if route_a is not None else route_b
    return LogDerivResult(chi, n, value, route_a, route_b, agreement)


# -- Dedekind zeta of abelian fields --------------------------------------------

def _map(fn, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def dedekind_terms(K: AbelianFieldSpec, n: int, prec: int, routes: str = "direct",
                   workers: int = 1) -> list[LogDerivResult]:
    """Per-character L'/L(chi, 1-n) terms making up zeta_K'/zeta_K(1-n), in enumeration order."""
    chars = characters_of_field(K)
    for chi in chars:
        try:
            check_nonvanishing(n, chi)
        except LFunctionError as exc:
            raise type(exc)(f"factor {chi.label()} of zeta_K: {exc}") from None
    return _map(lambda c: l_logderiv_neg(n, c, prec, routes), chars, workers)


def dedekind_logderiv(K: AbelianFieldSpec, n: int, prec: int, workers: int = 1) -> Evaluation:
    """zeta_K'/zeta_K(1-n) as the sum of L'/L(chi, 1-n) over the characters of K."""
    terms = dedekind_terms(K, n, prec, "direct", workers)
    ctx = context()
    with ctx.workprec(prec + GUARD_BITS):
        total = ctx.mpf(0)
        err = ctx.mpf(0)
        for t in terms:
            v = to_mp(ctx, t.value.value)
            total += v.real if hasattr(v, "_mpc_") else v
            err += t.value.error_bound
    return Evaluation(total, err, Route.EULER_MACLAURIN, prec)


def dedekind_logderiv_at(K: AbelianFieldSpec, s: int, prec: int) -> Evaluation:
    """zeta_K'/zeta_K(s) at an integer s >= 2 from the Hurwitz values of each factor."""
    ctx = context()
    total = None
    err = None
    for chi in characters_of_field(K):
        lv, ld = _l_pair(s, chi, prec + 8)
        with ctx.workprec(prec + GUARD_BITS):
            v = to_mp(ctx, ld.value) / to_mp(ctx, lv.value)
            v = v.real if hasattr(v, "_mpc_") else v
            e = (ld.error_bound + abs(v) * lv.error_bound) / abs(to_mp(ctx, lv.value))
            total = v if total is None else total + v
            err = e if err is None else err + e
    return Evaluation(total, err, Route.EULER_MACLAURIN, prec)


# -- ideal-count oracle for quadratic fields ----------------------------------

@dataclass(frozen=True)
class IdealSeries:
    """zeta_K(n), zeta_K'(n) from ideal counts a_m = sum_{e | m} (D/e)."""

    D: int
    n: int
    value: Evaluation
    deriv: Evaluation

    @property
    def logderiv(self) -> Evaluation:
        ctx = context()
        with ctx.workprec(self.value.prec_bits + GUARD_BITS):
            v = to_mp(ctx, self.deriv.value) / to_mp(ctx, self.value.value)
            err = (self.deriv.error_bound + abs(v) * self.value.error_bound) / abs(self.value.value)
        return Evaluation(v, err, Route.SERIES, self.value.prec_bits)


def _check_quadratic(D: int) -> None:
    if D == 1 or not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not the discriminant of a quadratic field")
    if abs(D) > 200:
        raise ValueError("the ideal-count oracle is limited to |D| <= 200")


def ideal_series(D: int, n: int, prec: int) -> IdealSeries:
    """Sum a_m m^-n for m <= X, then close the tail over pairs (e, f) with ef > X.

    The tail splits as sum_{e<=X} (D/e) e^-n sum_{f > X/e} f^-n plus
    zeta(n) sum_{e > X} (D/e) e^-n; smooth tails use Euler-Maclaurin, the
    Kronecker tail is split by residue classes mod |D|.
    """
    _check_quadratic(D)
    if n < 2:
        raise ValueError("the ideal-count series needs n >= 2")
    ctx = context()
    wp = prec + GUARD_BITS
    q = abs(D)
    X0 = _series_cutoff(prec)
    X = q * X0
    kron = [0] + [kronecker_symbol(D, e) for e in range(1, X + 1)]
    counts = [0] * (X + 1)
    for e in range(1, X + 1):
        k = kron[e]
        if k:
            for m in range(e, X + 1, e):
                counts[m] += k
    with ctx.workprec(wp):
        pw = [ctx.mpf(0)] + [ctx.mpf(m) ** (-n) for m in range(1, X + 1)]
        lg = [ctx.mpf(0)] + [int_log(ctx, m) for m in range(1, X + 1)]
        S = ctx.mpf(0)
        dS = ctx.mpf(0)
        for m in range(1, X + 1):
            if counts[m]:
                S += counts[m] * pw[m]
                dS -= counts[m] * lg[m] * pw[m]
        # zeta(n), zeta'(n) and prefix sums of f^-n
        zt, zdt, zerr = power_sum_tail(ctx, n, ctx.mpf(X + 1), prec + 8)
        prefix = [ctx.mpf(0)] * (X + 1)
        dprefix = [ctx.mpf(0)] * (X + 1)
        for f in range(1, X + 1):
            prefix[f] = prefix[f - 1] + pw[f]
            dprefix[f] = dprefix[f - 1] - lg[f] * pw[f]
        zeta_n = prefix[X] + zt
        dzeta_n = dprefix[X] + zdt
        T = ctx.mpf(0)
        dT = ctx.mpf(0)
        for e in range(1, X + 1):
            k = kron[e]
            if not k:
                continue
            F = X // e
            zr = zeta_n - prefix[F]
            dzr = dzeta_n - dprefix[F]
            T += k * pw[e] * zr
            dT += k * pw[e] * (dzr - lg[e] * zr)
        # sum_{e > X} (D/e) e^-n over residue classes r mod q
        Lt = ctx.mpf(0)
        dLt = ctx.mpf(0)
        lerr = ctx.mpf(0)
        logq = int_log(ctx, q)
        qn = ctx.mpf(q) ** (-n)
        for r in range(1, q + 1):
            k = kronecker_symbol(D, r)
            if not k:
                continue
            # smallest e = r + j q exceeding X has j = X0 (since X = q X0 and r <= q)
            x0 = X0 + ctx.mpf(r) / q
            tv, td, terr = power_sum_tail(ctx, n, x0, prec + 8)
            Lt += k * qn * tv
            dLt += k * qn * (td - logq * tv)
            lerr += qn * terr * (1 + logq)
        T += zeta_n * Lt
        dT += dzeta_n * Lt + zeta_n * dLt
        val = S + T
        der = dS + dT
        err = zerr * (1 + abs(Lt)) * 4 + lerr * (1 + abs(zeta_n) + abs(dzeta_n))
        err += ctx.ldexp(X * (1 + lg[X]) * (abs(val) + 1), -wp + 8)
    return IdealSeries(D, n, Evaluation(val, err, Route.SERIES, prec),
                       Evaluation(der, err, Route.SERIES, prec))


def _archimedean_logderiv(D: int, s: Fraction, prec: int) -> Evaluation:
    """d/ds log gamma_inf(s): -log pi + psi(s/2) for D > 0, -log 2pi + psi(s) for D < 0."""
    ctx = context()
    if D > 0:
        psi = digamma_half_integer(Fraction(s) / 2, prec)
        with ctx.workprec(prec + GUARD_BITS):
            v = psi.value - ctx.log(ctx.pi)
    else:
        psi = digamma_half_integer(Fraction(s), prec)
        with ctx.workprec(prec + GUARD_BITS):
            v = psi.value - ctx.log(2 * ctx.pi)
    return Evaluation(v, psi.error_bound, Route.SERIES, prec)


def dedekind_via_ideals(D: int, n: int, prec: int) -> Evaluation:
    """zeta_K'/zeta_K(1-n) for Q(sqrt D) from ideal counts and the completed functional equation.

    With xi_K(s) = |D|^(s/2) gamma_inf(s) zeta_K(s) = xi_K(1-s),
    zeta_K'/zeta_K(1-n) = -log|D| - G(n) - G(1-n) - zeta_K'/zeta_K(n) where G is
    the archimedean log-derivative.  A pole of G(1-n) means zeta_K(1-n) = 0.
    """
    _check_quadratic(D)
    if n < 2:
        raise ValueError("the ideal-count oracle needs n >= 2")
    try:
        g_lo = _archimedean_logderiv(D, Fraction(1 - n), prec + 8)
    except PoleError:
        raise TrivialZeroError(f"zeta_K(1-n) = 0 for D = {D}, n = {n}") from None
    g_hi = _archimedean_logderiv(D, Fraction(n), prec + 8)
    at_n = ideal_series(D, n, prec + 8).logderiv
    ctx = context()
    with ctx.workprec(prec + GUARD_BITS):
        v = -int_log(ctx, abs(D)) - g_hi.value - g_lo.value - at_n.value
        err = g_hi.error_bound + g_lo.error_bound + at_n.error_bound
    return Evaluation(v, err, Route.FUNCTIONAL_EQUATION, prec)


def zeta_k_vanishes_at(D: int, n: int) -> bool:
    """True when zeta_K(1-n) = 0 for the quadratic field of discriminant D."""
    if D < 0:
        return True
    return n % 2 == 1
