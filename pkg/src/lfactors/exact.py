"""Exact rational, Bernoulli, harmonic and cyclotomic-field arithmetic.

Rationals are :class:`fractions.Fraction`.  Elements of the cyclotomic field
Q(zeta_m) are :class:`CycloElem` instances holding rational coordinates in the
power basis ``1, z, ..., z^(phi(m)-1)`` modulo the m-th cyclotomic polynomial.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence


from .numeric import context

Rational = Fraction

__all__ = [
    "Rational",
    "HarmonicNumber",
    "CycloElem",
    "bernoulli_number",
    "bernoulli_polynomial",
    "harmonic",
    "cyclotomic_polynomial",
    "euler_phi",
    "rational_to_str",
    "rational_from_str",
]


def rational_to_str(r: Fraction) -> str:
    return f"{r.numerator}/{r.denominator}"


def rational_from_str(text: str) -> Fraction:
    return Fraction(text.strip())


# -- Bernoulli numbers ------------------------------------------------------

_bernoulli_lock = threading.Lock()
_bernoulli_table: tuple[Fraction, ...] = (Fraction(1),)


def _extend_bernoulli(k: int) -> tuple[Fraction, ...]:
    global _bernoulli_table
    with _bernoulli_lock:
        table = list(_bernoulli_table)
        for m in range(len(table), k + 1):
            # sum_{j=0}^{m} C(m+1, j) B_j = 0
            acc = Fraction(0)
            binom = 1
            for j in range(m):
                acc += binom * table[j]
                binom = binom * (m + 1 - j) // (j + 1)
            table.append(-acc / (m + 1))
        _bernoulli_table = tuple(table)
        return _bernoulli_table


def bernoulli_number(k: int) -> Fraction:
    """Return ``B_k`` with the convention ``B_1 = -1/2``."""
    if k < 0:
        raise ValueError("Bernoulli index must be non-negative")
    table = _bernoulli_table
    if k >= len(table):
        if k > 1 and k % 2 == 1:
            return Fraction(0)
        table = _extend_bernoulli(k)
    return table[k]


def bernoulli_polynomial(k: int, x: Fraction | int) -> Fraction:
    """Evaluate ``B_k(x) = sum_j C(k, j) B_j x^(k-j)`` exactly."""
    if k < 0:
        raise ValueError("Bernoulli index must be non-negative")
    x = Fraction(x)
    total = Fraction(0)
    for j in range(k + 1):
        bj = bernoulli_number(j)
        if bj:
            total += math.comb(k, j) * bj * x ** (k - j)
    return total


# -- harmonic numbers -------------------------------------------------------

@dataclass(frozen=True)
class HarmonicNumber:
    index: int
    value: Fraction


def harmonic(n: int) -> HarmonicNumber:
    if n < 0:
        raise ValueError("harmonic index must be non-negative")
    return HarmonicNumber(n, _harmonic_value(n))


@lru_cache(maxsize=None)
def _harmonic_value(n: int) -> Fraction:
    total = Fraction(0)
    for j in range(1, n + 1):
        total += Fraction(1, j)
    return total


# -- cyclotomic polynomials -------------------------------------------------

def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi needs n >= 1")
    result = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # coefficient lists, lowest degree first; den is monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m(T), lowest degree first."""
    if m < 1:
        raise ValueError("cyclotomic order must be positive")
    poly = [-1] + [0] * (m - 1) + [1]  # T^m - 1
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Coordinates of z^j (0 <= j < m) in the power basis of Q(zeta_m)."""
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(m):
        rows.append(tuple(cur))
        # multiply by z and reduce with z^deg = -sum phi_i z^i
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(deg):
                cur[i] -= top * phi[i]
    return tuple(rows)


# -- cyclotomic field elements ----------------------------------------------

class CycloElem:
    """Immutable element of Q(zeta_m) in the power basis modulo Phi_m."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Sequence[Fraction | int]):
        deg = euler_phi(order)
        if len(coeffs) != deg:
            raise ValueError(f"Q(zeta_{order}) elements need {deg} coefficients")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("CycloElem is immutable")

    # constructors
    @classmethod
    def zero(cls, order: int) -> CycloElem:
        return cls(order, [0] * euler_phi(order))

    @classmethod
    def from_rational(cls, order: int, r: Fraction | int) -> CycloElem:
        coeffs = [Fraction(0)] * euler_phi(order)
        coeffs[0] = Fraction(r)
        return cls(order, coeffs)

    @classmethod
    def root_of_unity(cls, order: int, j: int) -> CycloElem:
        """The element ``zeta_order ** j``."""
        return cls(order, _power_table(order)[j % order])

    @classmethod
    def from_powers(cls, order: int, terms: Mapping[int, Fraction | int]) -> CycloElem:
        """Build ``sum_j terms[j] * zeta^j`` in one reduction pass."""
        table = _power_table(order)
        acc = [Fraction(0)] * euler_phi(order)
        for j, c in terms.items():
            if not c:
                continue
            for i, t in enumerate(table[j % order]):
                if t:
                    acc[i] += t * c
        return cls(order, acc)

    # predicates
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs[0]

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycloElem):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        return f"CycloElem({self.order}, [{', '.join(map(str, self.coeffs))}])"

    # arithmetic
    def _coerce(self, other) -> CycloElem:
        if isinstance(other, (int, Fraction)):
            return CycloElem.from_rational(self.order, other)
        if not isinstance(other, CycloElem):
            raise TypeError(f"cannot combine CycloElem with {type(other).__name__}")
        if other.order != self.order:
            raise ValueError(f"mismatched orders {self.order} and {other.order}")
        return other

    def __add__(self, other) -> CycloElem:
        other = self._coerce(other)
        return CycloElem(self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> CycloElem:
        return CycloElem(self.order, [-a for a in self.coeffs])

    def __sub__(self, other) -> CycloElem:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> CycloElem:
        return self._coerce(other) - self

    def __mul__(self, other) -> CycloElem:
        if isinstance(other, (int, Fraction)):
            return CycloElem(self.order, [a * other for a in self.coeffs])
        other = self._coerce(other)
        terms: dict[int, Fraction] = {}
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    terms[i + j] = terms.get(i + j, Fraction(0)) + a * b
        return CycloElem.from_powers(self.order, terms)

    __rmul__ = __mul__

    def inverse(self) -> CycloElem:
        """Multiplicative inverse via the extended Euclidean algorithm over Q."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_m)")
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        a = _trim(list(self.coeffs))
        # invariant: r0 = s0 * a (mod phi), r1 = s1 * a (mod phi)
        r0, s0 = phi, [Fraction(0)]
        r1, s1 = a, [Fraction(1)]
        while len(r1) > 1 or r1[0] == 0:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _trim(_poly_sub(s0, _poly_mul(q, s1)))
        # r1 is a nonzero constant
        inv = [c / r1[0] for c in s1]
        terms = {i: c for i, c in enumerate(inv)}
        return CycloElem.from_powers(self.order, terms)

    def __truediv__(self, other) -> CycloElem:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        return self * self._coerce(other).inverse()

    def conjugate(self) -> CycloElem:
        """Complex conjugation zeta -> zeta^-1."""
        terms = {(-i) % self.order: c for i, c in enumerate(self.coeffs) if c}
        return CycloElem.from_powers(self.order, terms)

    def lift(self, order: int) -> CycloElem:
        """View this element inside Q(zeta_order) for a multiple of its order."""
        if order % self.order:
            raise ValueError(f"{order} is not a multiple of {self.order}")
        step = order // self.order
        return CycloElem.from_powers(order, {i * step: c for i, c in enumerate(self.coeffs)})

    def embed(self, k: int = 1, prec: int = 53):
        """Complex embedding sending zeta_m to exp(2 pi i k / m)."""
        if math.gcd(k, self.order) != 1:
            raise ValueError(f"embedding index {k} is not coprime to {self.order}")
        ctx = context()
        with ctx.workprec(prec + 16):
            re = ctx.mpf(0)
            im = ctx.mpf(0)
            for i, c in enumerate(self.coeffs):
                if not c:
                    continue
                # exact angle reduction keeps cos/sin accurate for large i
                cos_v, sin_v = _root_cos_sin(ctx, (i * k) % self.order, self.order)
                cval = ctx.mpf(c.numerator) / c.denominator
                re += cval * cos_v
                im += cval * sin_v
            out = ctx.mpc(re, im)
        return out

    # serialization
    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [rational_to_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: Mapping) -> CycloElem:
        return cls(int(data["order"]), [rational_from_str(c) for c in data["coeffs"]])


def _root_cos_sin(ctx, j: int, m: int):
    if 4 * j == m:
        return ctx.mpf(0), ctx.mpf(1)
    if 2 * j == m:
        return ctx.mpf(-1), ctx.mpf(0)
    if 4 * j == 3 * m:
        return ctx.mpf(0), ctx.mpf(-1)
    if j == 0:
        return ctx.mpf(1), ctx.mpf(0)
    theta = 2 * ctx.pi * j / m
    return ctx.cos(theta), ctx.sin(theta)


def _trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p or [Fraction(0)]


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divmod(num: list[Fraction], den: list[Fraction]):
    num = list(num)
    den = _trim(list(den))
    if len(num) < len(den):
        return [Fraction(0)], _trim(num)
    q = [Fraction(0)] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1] / lead
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    return q, _trim(num[: len(den) - 1] or [Fraction(0)])


def sum_elems(elems: Iterable[CycloElem], order: int) -> CycloElem:
    total = CycloElem.zero(order)
    for e in elems:
        total = total + e
    return total
