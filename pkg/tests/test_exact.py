import math
import threading
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lfactors.exact import (
    CycloElem,
    bernoulli_number,
    bernoulli_polynomial,
    cyclotomic_polynomial,
    euler_phi,
    harmonic,
    rational_from_str,
    rational_to_str,
)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)


@pytest.mark.parametrize("k,want", [(0, 1), (1, Fraction(-1, 2)), (2, Fraction(1, 6)),
                                    (3, 0), (12, Fraction(-691, 2730))])
def test_bernoulli_numbers(k, want):
    assert bernoulli_number(k) == want


def test_bernoulli_against_mpmath():
    mpmath.mp.prec = 300
    for k in range(0, 61, 2):
        b = bernoulli_number(k)
        want = mpmath.bernoulli(k)
        assert abs(want - mpmath.mpf(b.numerator) / b.denominator) <= mpmath.mpf(2) ** -250 * max(1, abs(want))


@pytest.mark.parametrize("k", range(1, 61))
def test_bernoulli_recurrence(k):
    assert sum(math.comb(k + 1, j) * bernoulli_number(j) for j in range(k + 1)) == 0


def test_bernoulli_cache_is_thread_safe():
    out = {}

    def work(i):
        out[i] = [bernoulli_number(k) for k in range(150, 0, -7)]

    threads = [threading.Thread(target=work, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(v == out[0] for v in out.values())


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        bernoulli_number(-1)


@pytest.mark.parametrize("k,x,want", [(1, Fraction(1, 2), 0), (2, Fraction(1, 5), Fraction(1, 150)),
                                      (2, Fraction(1, 4), Fraction(-1, 48))])
def test_bernoulli_polynomial_values(k, x, want):
    assert bernoulli_polynomial(k, x) == want


@pytest.mark.parametrize("k", range(41))
def test_bernoulli_polynomial_endpoints(k):
    assert bernoulli_polynomial(k, 0) == bernoulli_number(k)
    if k != 1:
        assert bernoulli_polynomial(k, 1) == bernoulli_number(k)


@given(st.integers(1, 20), rationals)
def test_bernoulli_polynomial_difference(k, x):
    # B_k(x+1) - B_k(x) = k x^(k-1)
    assert bernoulli_polynomial(k, x + 1) - bernoulli_polynomial(k, x) == k * x ** (k - 1)


@pytest.mark.parametrize("n,want", [(0, 0), (1, 1), (4, Fraction(25, 12))])
def test_harmonic_values(n, want):
    assert harmonic(n).value == want


def test_harmonic_differences():
    prev = harmonic(0).value
    for n in range(1, 1001):
        cur = harmonic(n).value
        assert cur - prev == Fraction(1, n)
        prev = cur


@pytest.mark.parametrize("m,want", [(1, (-1, 1)), (4, (1, 0, 1)), (12, (1, 0, -1, 0, 1))])
def test_cyclotomic_polynomial(m, want):
    assert cyclotomic_polynomial(m) == want


@pytest.mark.parametrize("m", range(1, 40))
def test_cyclotomic_degree_and_roots(m):
    poly = cyclotomic_polynomial(m)
    assert len(poly) - 1 == euler_phi(m)
    mpmath.mp.prec = 80
    z = mpmath.expjpi(mpmath.mpf(2) / m)
    assert abs(mpmath.polyval(list(reversed(poly)), z)) < mpmath.mpf(2) ** -60


def test_root_of_unity_arithmetic():
    i = CycloElem.root_of_unity(4, 1)
    assert i * i == -1
    assert i.inverse() == -i
    assert CycloElem.root_of_unity(6, 6) == 1


def test_embed_i():
    mpmath.mp.prec = 256
    v = mpmath.mpc(CycloElem.root_of_unity(4, 1).embed(1, 128))
    assert abs(v - mpmath.mpc(0, 1)) < mpmath.mpf(2) ** -128


def test_embed_rejects_non_unit_exponent():
    with pytest.raises(ValueError):
        CycloElem.root_of_unity(4, 1).embed(2, 64)


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        CycloElem.zero(5).inverse()


def test_mismatched_orders():
    with pytest.raises(ValueError):
        CycloElem.root_of_unity(4, 1) + CycloElem.root_of_unity(3, 1)


def _elem(m):
    deg = euler_phi(m)
    return st.lists(rationals, min_size=deg, max_size=deg).map(lambda c: CycloElem(m, c))


orders = st.sampled_from([3, 4, 5, 8, 12])


@given(orders.flatmap(lambda m: st.tuples(_elem(m), _elem(m), _elem(m))))
def test_field_axioms(triple):
    a, b, c = triple
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == 0
    if not a.is_zero():
        assert a * a.inverse() == 1
        assert (b / a) * a == b


def _mp(z):
    # library values live in a private context; move them into mpmath.mp first
    return mpmath.mpc(z)


@given(orders.flatmap(lambda m: st.tuples(_elem(m), _elem(m))), st.sampled_from([64, 128, 256]))
def test_embed_is_homomorphism(pair, prec):
    a, b = pair
    m = a.order
    mpmath.mp.prec = 2 * prec
    tol = mpmath.mpf(2) ** (8 - prec)
    for k in (j for j in range(1, m + 1) if math.gcd(j, m) == 1):
        ea, eb = _mp(a.embed(k, prec)), _mp(b.embed(k, prec))
        scale = max(1, abs(ea), abs(eb)) ** 2
        assert abs(_mp((a * b).embed(k, prec)) - ea * eb) < tol * scale
        assert abs(_mp((a + b).embed(k, prec)) - ea - eb) < tol * scale


@given(orders.flatmap(_elem))
def test_conjugate_matches_complex_conjugate(a):
    mpmath.mp.prec = 200
    za = _mp(a.embed(1, 100))
    zc = _mp(a.conjugate().embed(1, 100))
    assert abs(zc - mpmath.conj(za)) < mpmath.mpf(2) ** -90 * max(1, abs(za))


@given(orders.flatmap(_elem))
def test_json_roundtrip(a):
    assert CycloElem.from_json(a.to_json()) == a


@given(orders.flatmap(_elem))
def test_lift_preserves_value(a):
    mpmath.mp.prec = 200
    za = _mp(a.embed(1, 100))
    assert abs(za - _mp(a.lift(a.order * 3).embed(1, 100))) < mpmath.mpf(2) ** -90 * max(1, abs(za))


@given(rationals)
def test_rational_string_roundtrip(r):
    assert rational_from_str(rational_to_str(r)) == r
