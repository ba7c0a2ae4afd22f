import json
from fractions import Fraction

import mpmath
import pytest

from lfactors.conjecture import (
    colmez_factor,
    conjecture_report,
    factorization_consistency,
    gross_cm_check,
    kuhn_case_factor,
    lerch_identity_check,
    prop22_coefficient,
    prop23_coefficient,
)
from lfactors.dirichlet import (
    AbelianFieldSpec,
    enumerate_characters,
    quadratic_character,
    quadratic_field,
    trivial_character,
)
from lfactors.lfunctions import ExcludedCaseError, LFunctionError, TrivialZeroError

TRIV = trivial_character()
CHI4 = quadratic_character(-4)


@pytest.fixture(autouse=True)
def _high_mp():
    mpmath.mp.prec = 500


def M(x):
    return mpmath.mpc(x) if hasattr(x, "_mpc_") else mpmath.mpf(x)


def zeta_ratio():
    return mpmath.zeta(-1, 1, 1) / mpmath.zeta(-1)


def l_ratio(chi, n):
    vals = [mpmath.mpc(v) for v in chi.numeric_values(500)]
    return mpmath.re(mpmath.dirichlet(1 - n, vals, 1) / mpmath.dirichlet(1 - n, vals))


def close(ev, want):
    assert abs(M(ev.value) - want) <= M(ev.error_bound) + mpmath.mpf(2) ** (-ev.prec_bits - 4) * abs(want)


def test_colmez_trivial_two():
    f = colmez_factor(TRIV, 2, 192)
    close(f.total, zeta_ratio() + mpmath.mpf(1) / 2 - 4 * mpmath.log(2) / 3)
    assert abs(M(f.total.value) - mpmath.mpf("1.5608574836588174")) < 1e-15
    assert f.harmonic_term == Fraction(1, 2)


def test_colmez_chi4_one():
    f = colmez_factor(CHI4, 1, 192)
    close(f.total, 4 * mpmath.loggamma(0.25) - mpmath.log(8 * mpmath.pi ** 2))
    assert f.harmonic_term == 0 and M(f.log2_term.value) == 0


def test_colmez_refusals():
    with pytest.raises(ExcludedCaseError):
        colmez_factor(TRIV, 1, 64)
    with pytest.raises(TrivialZeroError):
        colmez_factor(CHI4, 2, 64)


@pytest.mark.parametrize("n", range(1, 9))
def test_log2_term(n):
    nontriv = [c for c in enumerate_characters(12) if c.is_primitive and c.is_even == (n % 2 == 0)]
    for chi in nontriv:
        assert M(colmez_factor(chi, n, 128).log2_term.value) == 0
    if n % 2 == 0:  # odd n > 1 is a trivial zero of zeta
        t = colmez_factor(TRIV, n, 128).log2_term
        close(t, mpmath.log(2) / (1 - mpmath.mpf(2) ** -n))


def test_colmez_harmonic_and_json():
    chi = quadratic_character(5)
    f = colmez_factor(chi, 4, 160)
    assert f.harmonic_term == Fraction(11, 12)
    close(f.total, l_ratio(chi, 4) + mpmath.mpf(11) / 12)
    js = f.to_json()
    assert js["harmonic_term"] == "11/12" and js["chi"]["modulus"] == 5
    json.dumps(js)


def prop22_oracle(chars, d):
    x = zeta_ratio()
    z = mpmath.fsum(l_ratio(c, 2) for c in chars)
    return -(d + 1) * (mpmath.mpf(d) / 3 * x + 2 * z / 3 + mpmath.mpf(d) / 2 - mpmath.mpf(4 * (d + 2)) / 9 * mpmath.log(2))


@pytest.mark.parametrize("K,want", [
    (quadratic_field(5), "-6.28079779253265997"),
    (AbelianFieldSpec(8, (7,)), "-5.59028221748818967"),
    (AbelianFieldSpec(1, ()), "-3.12171496731763481"),
])
def test_prop22(K, want):
    from lfactors.dirichlet import characters_of_field

    c = prop22_coefficient(K, 192)
    close(c.value, prop22_oracle(characters_of_field(K), K.degree))
    assert abs(M(c.value.value) - mpmath.mpf(want)) < 1e-17
    total = mpmath.fsum(M(ev.value) for _, ev in c.decomposition)
    assert abs(total - M(c.zeta_k_term.value)) < mpmath.mpf(2) ** -120
    assert len(c.decomposition) == K.degree


def test_prop22_rejects_imaginary_fields():
    with pytest.raises(LFunctionError):
        prop22_coefficient(quadratic_field(-4), 64)


def test_prop23():
    c = prop23_coefficient(192)
    close(c.value, -(4 * zeta_ratio() - 16 * mpmath.log(2) / 3 + 2))
    assert abs(M(c.value.value) - mpmath.mpf("-6.24342993463526962")) < 1e-16


def test_kuhn_factor():
    ev = kuhn_case_factor(192)
    assert M(ev.error_bound) < mpmath.mpf(2) ** -150
    hi = kuhn_case_factor(384)
    assert abs(M(ev.value) - M(hi.value)) < mpmath.mpf(10) ** -30


@pytest.mark.parametrize("D,n", [(5, 2), (8, 2), (-4, 3), (-3, 2), (13, 3)])
def test_factorization_consistency(D, n):
    r = factorization_consistency(D, n, 192)
    assert r.passed and M(r.residual) < 1e-30


def test_lerch_check():
    r = lerch_identity_check(20, 192)
    assert r.passed and M(r.residual) < mpmath.mpf(2) ** -150
    # odd primitive characters of conductor <= 4: chi_-3 and chi_-4
    assert lerch_identity_check(4, 128).details["characters"] == [quadratic_character(-3).label(), CHI4.label()]
    assert lerch_identity_check(2, 128).details["characters"] == []
    empty = lerch_identity_check(1, 128)
    assert empty.details["characters"] == [] and empty.passed
    with pytest.raises(ValueError):
        lerch_identity_check(101, 64)


@pytest.mark.parametrize("d", [3, 4])
def test_gross(d):
    lo = gross_cm_check(d, 128)
    hi = gross_cm_check(d, 256)
    assert all(r.passed for r in lo + hi)
    for a, b in zip(lo[:2], hi[:2]):
        assert M(b.residual) < M(a.residual)
    with pytest.raises(ValueError):
        gross_cm_check(7, 64)


def test_report_rows():
    rep = conjecture_report([(TRIV, 2), (CHI4, 1)], 160)
    js = rep.to_json()
    assert [r["status"] for r in js["entries"]] == ["ok", "ok"]
    single = colmez_factor(TRIV, 2, 160).to_json()
    assert js["entries"][0]["factor"]["terms"] == single
    assert rep.oracles == []


def test_report_signs_and_weights():
    rep = conjecture_report([(TRIV, 2, Fraction(3, 2))], 160)
    row = rep.to_json()["entries"][0]
    total = mpmath.mpf(row["factor"]["total"]["value"]["re"])
    signed = mpmath.mpf(row["factor"]["signed_rhs_coefficient"]["value"]["re"])
    assert abs(signed + Fraction(3, 2) * total) < mpmath.mpf(10) ** -45
    assert row["weight"] == "3/2"


def test_report_exclusion_is_isolated():
    rep = conjecture_report([(TRIV, 1), (CHI4, 1), (quadratic_field(-4), 1)], 128)
    st = [r.status for r in rep.entries]
    assert st[0].startswith("error: excluded case") and st[1] == "ok" and st[2].startswith("error")


def test_report_field_rows():
    rep = conjecture_report([(quadratic_field(5), 2)], 160)
    row = rep.entries[0]
    assert len(row.decomposition) == 2
    want = mpmath.fsum(M(p.total.value) for p in row.decomposition)
    assert abs(M(row.field_total.value) - want) < mpmath.mpf(2) ** -150


def test_report_empty_with_oracle():
    rep = conjecture_report([], 128, oracles=["gross"])
    assert rep.entries == [] and len(rep.oracles) == 6


def test_report_deterministic_across_threads():
    spec = [(TRIV, 2), (CHI4, 1), (quadratic_field(5), 2), (quadratic_character(-3), 3), (TRIV, 1)]
    outs = {json.dumps(conjecture_report(spec, 160, workers=w).to_json()) for w in (1, 1, 4, 8)}
    assert len(outs) == 1


@pytest.mark.parametrize("chi,n", [(TRIV, 2), (CHI4, 1), (quadratic_character(5), 2), (quadratic_character(-7), 3)])
def test_precision_regression(chi, n):
    a = colmez_factor(chi, n, 128).total
    b = colmez_factor(chi, n, 192).total
    assert abs(M(a.value) - M(b.value)) < M(a.error_bound)
