"""Big-float plumbing shared by every numeric module.

BigFloat and BigComplex are mpmath ``mpf``/``mpc`` values.  Each thread gets its
own :class:`mpmath.MPContext`, so evaluations running on worker threads never
race on a shared working precision.  Functions enter ``ctx.workprec(...)``
explicitly and convert foreign numbers into the local context on entry.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import mpmath

_local = threading.local()

GUARD_BITS = 32


def context() -> mpmath.ctx_mp.MPContext:
    ctx = getattr(_local, "ctx", None)
    if ctx is None:
        ctx = mpmath.MPContext()
        _local.ctx = ctx
    return ctx


def to_mp(ctx, x):
    """Convert ints, Fractions, strings and mpf/mpc from any context into ``ctx``."""
    if isinstance(x, Fraction):
        return ctx.mpf(x.numerator) / x.denominator
    if isinstance(x, complex) or hasattr(x, "_mpc_"):
        return ctx.mpc(x)
    return ctx.mpf(x)


def to_mpc(ctx, x):
    if hasattr(x, "_mpc_") or isinstance(x, complex):
        return ctx.mpc(x)
    return ctx.mpc(to_mp(ctx, x))


def is_real(x) -> bool:
    return not hasattr(x, "_mpc_") and not isinstance(x, complex)


class Route(str, Enum):
    EULER_MACLAURIN = "euler_maclaurin"
    FUNCTIONAL_EQUATION = "functional_equation"
    EXACT = "exact"
    SERIES = "series"
    AGM = "agm"


@dataclass(frozen=True)
class Evaluation:
    """A numeric value with an absolute error estimate and its provenance."""

    value: object
    error_bound: object
    route: Route
    prec_bits: int

    def __post_init__(self):
        err = self.error_bound
        if err < 0 or not mpmath.isfinite(err):
            raise ValueError(f"error bound must be finite and non-negative, got {err}")
        if self.route is Route.EXACT and err != 0:
            raise ValueError("exact evaluations carry a zero error bound")

    @property
    def real(self):
        return self.value.real if hasattr(self.value, "_mpc_") else self.value

    def to_json(self) -> dict:
        return {
            "value": complex_to_json(self.value, self.prec_bits),
            "error_bound": format_decimal(self.error_bound, 8),
            "route": self.route.value,
            "prec_bits": self.prec_bits,
        }


def digits_for(prec_bits: int) -> int:
    return math.ceil(prec_bits * 0.3010)


def format_decimal(x, digits: int) -> str:
    """Decimal string with ``digits`` significant digits; never a binary float."""
    ctx = context()
    # exact conversion: the value keeps every bit it was computed with
    with ctx.workprec(_bits_of(x) + int(digits * 3.33) + 16):
        x = to_mp(ctx, x)
        if hasattr(x, "_mpc_"):
            raise TypeError("format_decimal expects a real number")
        if x == 0:
            return "0"
    with ctx.workprec(int(digits * 3.33) + 16):
        return ctx.nstr(ctx.mpf(x), digits, min_fixed=-6, max_fixed=digits + 1, strip_zeros=False)


def _bits_of(x) -> int:
    if isinstance(x, Fraction):
        return max(x.numerator.bit_length(), x.denominator.bit_length(), 64)
    if hasattr(x, "_mpc_"):
        re, im = x._mpc_
        return max(re[3], im[3], 53)
    if hasattr(x, "_mpf_"):
        return max(x._mpf_[3], 53)
    return 64


def complex_to_json(z, prec_bits: int) -> dict:
    ctx = context()
    with ctx.workprec(_bits_of(z) + 8):
        z = to_mpc(ctx, z)
    d = digits_for(prec_bits)
    return {"re": format_decimal(z.real, d), "im": format_decimal(z.imag, d)}


def sum_bounds(*bounds):
    ctx = context()
    total = ctx.mpf(0)
    for b in bounds:
        total += to_mp(ctx, b)
    return total
