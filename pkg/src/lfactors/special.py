"""Arbitrary-precision real-analytic kernels.

Hurwitz zeta and its s-derivative by Euler-Maclaurin summation, log-gamma and
digamma by Stirling series with argument raising, and the arithmetic-geometric
mean.  Error bounds are heuristic (twice the first omitted term plus a rounding
allowance), not certified enclosures.
"""
from __future__ import annotations

import math
import threading
from fractions import Fraction

from .exact import bernoulli_number
from .numeric import GUARD_BITS, Evaluation, Route, context, is_real, to_mp

EM_MAX_TERMS = 64

_local = threading.local()


class DomainError(ValueError):
    pass


class PoleError(DomainError):
    pass


def _bern_over_fact(j: int) -> Fraction:
    return bernoulli_number(2 * j) / math.factorial(2 * j)


def _prime_factors(m: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            out.append((p, k))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


def _prec_cache(ctx, name: str) -> dict:
    caches = getattr(_local, "caches", None)
    if caches is None:
        caches = _local.caches = {}
    return caches.setdefault((name, ctx.prec), {})


def clear_caches() -> None:
    """Drop this thread's cached logarithms and Euler-Maclaurin coefficients."""
    _local.caches = {}


def int_log(ctx, m: int):
    """log(m) for a positive integer, assembled from cached prime logarithms."""
    table = _prec_cache(ctx, "intlog")
    val = table.get(m)
    if val is not None:
        return val
    primes = _prec_cache(ctx, "primelog")
    total = ctx.mpf(0)
    for p, k in _prime_factors(m):
        lp = primes.get(p)
        if lp is None:
            lp = primes[p] = ctx.log(p)
        total += k * lp
    table[m] = total
    return total


def em_coefficient(ctx, j: int):
    """B_2j / (2j)! at the current working precision."""
    table = _prec_cache(ctx, "emcoef")
    c = table.get(j)
    if c is None:
        r = _bern_over_fact(j)
        c = table[j] = ctx.mpf(r.numerator) / r.denominator
    return c


def _check_a(a):
    if isinstance(a, (int, Fraction)):
        if not 0 < a <= 1:
            raise DomainError(f"Hurwitz parameter must lie in (0, 1], got {a}")
        return Fraction(a)
    if not 0 < a <= 1:
        raise DomainError(f"Hurwitz parameter must lie in (0, 1], got {a}")
    return a


def _em_params(s, prec: int) -> int:
    return max(math.ceil(prec * math.log10(2)), math.ceil(3 * abs(complex(s))), 10)


def _hurwitz_em(s, a, prec: int, want_value: bool, want_deriv: bool, finite_part: bool = False):
    """Shared Euler-Maclaurin loop; returns ((value, err), (deriv, err)).

    ``finite_part`` replaces the s = 1 pole of the integral term by the constant
    term of its Laurent expansion (valid only inside sums weighted to zero).
    """
    if s == 1 and not finite_part:
        raise PoleError("Hurwitz zeta has a pole at s = 1")
    a = _check_a(a)
    ctx = context()
    N = _em_params(s, prec)
    # partial sums grow like N^-Re(s) before cancelling
    sigma = complex(s).real
    wp = prec + GUARD_BITS + (math.ceil(-sigma * math.log2(N + 1)) if sigma < 0 else 0)
    with ctx.workprec(wp):
        s = to_mp(ctx, s)
        s_int = int(s) if is_real(s) and s == int(s) else None
        rational_a = isinstance(a, Fraction)

        S = ctx.mpf(0)
        dS = ctx.mpf(0)
        scale = ctx.mpf(0)
        if rational_a:
            b, q = a.numerator, a.denominator
            logq = int_log(ctx, q) if q > 1 else ctx.mpf(0)
            qs = ctx.mpf(q) ** s  # (k + b/q)^-s = q^s (kq + b)^-s
            for k in range(N):
                m = k * q + b
                if s_int is not None and s_int <= 0:
                    t = qs * (m ** (-s_int))
                else:
                    t = qs * ctx.mpf(m) ** (-s)
                S += t
                scale += abs(t)
                if want_deriv:
                    lg = int_log(ctx, m) - logq
                    dS -= lg * t
            ma = ctx.mpf(N * q + b) / q
        else:
            a = to_mp(ctx, a)
            for k in range(N):
                x = k + a
                t = x ** (-s)
                S += t
                scale += abs(t)
                if want_deriv:
                    dS -= ctx.log(x) * t
            ma = N + a

        x = ma
        lx = int_log(ctx, N * q + b) - logq if rational_a else ctx.log(x)
        xs = x ** (-s)
        if s == 1:
            integ = -lx
            S += integ + xs / 2
            dS += lx * lx / 2 - lx * xs / 2
        else:
            inv_s1 = 1 / (s - 1)
            integ = x * xs * inv_s1
            S += integ + xs / 2
            dS += -lx * integ - x * xs * inv_s1 ** 2 - lx * xs / 2
        scale += abs(integ) + abs(xs)

        thr = ctx.ldexp(1, -prec - 8)
        P, dP = s, ctx.mpf(1)
        pw = xs / x
        x2 = x * x
        v_done = not want_value
        d_done = not want_deriv
        v_omit = d_omit = None
        terms = 0
        for j in range(1, EM_MAX_TERMS + 2):
            c = em_coefficient(ctx, j)
            T = c * P * pw
            dT = c * (dP - lx * P) * pw
            if j > EM_MAX_TERMS or (v_done and d_done):
                v_omit = abs(T) if v_omit is None else v_omit
                d_omit = abs(dT) if d_omit is None else d_omit
                break
            if not v_done:
                S += T
                scale += abs(T)
                if P == 0 or abs(T) < thr * abs(S):
                    v_done = True
            if not d_done:
                dS += dT
                if abs(dT) < thr * abs(dS):
                    d_done = True
            terms = j
            P, dP = P * (s + 2 * j - 1) * (s + 2 * j), dP * (s + 2 * j - 1) * (s + 2 * j) + P * (2 * s + 4 * j - 1)
            pw /= x2
        rounding = ctx.ldexp(scale, -wp + 8) * (N + terms)
        v_err = 2 * v_omit + rounding
        d_err = 2 * d_omit + rounding * (1 + abs(lx))
        return (S, v_err), (dS, d_err)


def hurwitz_zeta(s, a, prec: int) -> Evaluation:
    """zeta(s, a) for 0 < a <= 1 and s != 1 by Euler-Maclaurin summation."""
    (v, err), _ = _hurwitz_em(s, a, prec, True, False)
    return Evaluation(v, err, Route.EULER_MACLAURIN, prec)


def hurwitz_zeta_ds(s, a, prec: int) -> Evaluation:
    """d/ds zeta(s, a) from the term-by-term derivative of the same expansion."""
    _, (d, err) = _hurwitz_em(s, a, prec, False, True)
    return Evaluation(d, err, Route.EULER_MACLAURIN, prec)


def hurwitz_pair(s, a, prec: int, finite_part: bool = False) -> tuple[Evaluation, Evaluation]:
    """(zeta(s, a), zeta'(s, a)) sharing one pass over the partial sums."""
    (v, ve), (d, de) = _hurwitz_em(s, a, prec, True, True, finite_part)
    return (Evaluation(v, ve, Route.EULER_MACLAURIN, prec),
            Evaluation(d, de, Route.EULER_MACLAURIN, prec))


# -- gamma and digamma ---------------------------------------------------------

def _stirling_shift(ctx, x, wp: int) -> int:
    target = math.ceil(0.12 * wp) + 8
    return max(0, math.ceil(target - float(x)))


def _positive(x):
    if not x > 0:
        raise DomainError(f"argument must be positive, got {x}")


def log_gamma(x, prec: int) -> Evaluation:
    """log Gamma(x) for x > 0."""
    _positive(x)
    ctx = context()
    wp = prec + GUARD_BITS
    with ctx.workprec(wp):
        x = to_mp(ctx, x)
        r = _stirling_shift(ctx, x, wp)
        prod = ctx.mpf(1)
        for i in range(r):
            prod *= x + i
        y = x + r
        ly = ctx.log(y)
        val = (y - ctx.mpf(0.5)) * ly - y + ctx.log(2 * ctx.pi) / 2
        thr = ctx.ldexp(1, -prec - 8)
        inv_y2 = 1 / (y * y)
        pw = 1 / y
        omit = None
        kmax = int(math.pi * float(y)) + 1
        for k in range(1, kmax + 1):
            b = bernoulli_number(2 * k)
            t = to_mp(ctx, b / (2 * k * (2 * k - 1))) * pw
            if abs(t) < thr * max(abs(val), 1):
                omit = abs(t)
                break
            val += t
            pw *= inv_y2
        if omit is None:
            raise ArithmeticError("Stirling series did not converge")
        val -= ctx.log(prod)
        err = 2 * omit + ctx.ldexp(abs(val) + abs(ly) * y + 1, -wp + 8)
        return Evaluation(val, err, Route.SERIES, prec)


def digamma(x, prec: int) -> Evaluation:
    """psi(x) = Gamma'(x)/Gamma(x) for x > 0."""
    _positive(x)
    ctx = context()
    wp = prec + GUARD_BITS
    with ctx.workprec(wp):
        x = to_mp(ctx, x)
        r = _stirling_shift(ctx, x, wp)
        shift = ctx.mpf(0)
        for i in range(r):
            shift += 1 / (x + i)
        y = x + r
        val = ctx.log(y) - 1 / (2 * y)
        thr = ctx.ldexp(1, -prec - 8)
        inv_y2 = 1 / (y * y)
        pw = inv_y2
        omit = None
        kmax = int(math.pi * float(y)) + 1
        for k in range(1, kmax + 1):
            t = to_mp(ctx, bernoulli_number(2 * k) / (2 * k)) * pw
            if abs(t) < thr * max(abs(val), 1):
                omit = abs(t)
                break
            val -= t
            pw *= inv_y2
        if omit is None:
            raise ArithmeticError("digamma series did not converge")
        val -= shift
        err = 2 * omit + ctx.ldexp(abs(val) + shift + 1, -wp + 8)
        return Evaluation(val, err, Route.SERIES, prec)


def digamma_half_integer(x: Fraction, prec: int) -> Evaluation:
    """psi at any non-pole rational x, reduced to x > 0 by psi(x) = psi(x+1) - 1/x."""
    x = Fraction(x)
    if x <= 0 and x.denominator == 1:
        raise PoleError(f"digamma has a pole at {x}")
    shift = Fraction(0)
    while x <= 0:
        shift += 1 / x
        x += 1
    base = digamma(x, prec)
    ctx = context()
    with ctx.workprec(prec + GUARD_BITS):
        return Evaluation(base.value - to_mp(ctx, shift), base.error_bound, base.route, prec)


# -- AGM -------------------------------------------------------------------------

def agm(a, b, prec: int) -> Evaluation:
    """Arithmetic-geometric mean of two positive numbers."""
    _positive(a)
    _positive(b)
    ctx = context()
    wp = prec + GUARD_BITS
    with ctx.workprec(wp):
        a = to_mp(ctx, a)
        b = to_mp(ctx, b)
        if b > a:
            a, b = b, a
        tol = ctx.ldexp(1, -prec)
        iterations = 0
        while abs(a - b) >= tol * a:
            a, b = (a + b) / 2, ctx.sqrt(a * b)
            iterations += 1
            if iterations > 4 * prec:
                raise ArithmeticError("AGM failed to converge")
        val = (a + b) / 2
        err = abs(a - b) + ctx.ldexp(val, -wp + 4)
        out = Evaluation(val, err, Route.AGM, prec)
    object.__setattr__(out, "iterations", iterations)
    return out
