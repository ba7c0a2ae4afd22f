import cmath
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lfactors.dirichlet import (
    AbelianFieldSpec,
    CharacterError,
    character_from_json,
    characters_of_field,
    enumerate_characters,
    field_from_json,
    gauss_sum,
    gauss_sum_exact,
    is_fundamental_discriminant,
    kronecker_symbol,
    make_character,
    orthogonality_sum,
    primitive_part,
    quadratic_character,
    quadratic_field,
    trivial_character,
    unit_group_structure,
)
from lfactors.exact import CycloElem, euler_phi


def _units(q):
    return [a for a in range(1, q + 1) if math.gcd(a, q) == 1]


def _complex(c):
    return complex(mpmath.mpc(c.embed(1, 64)))


@pytest.mark.parametrize("q,gens,orders", [(5, (2,), (4,)), (8, (7, 5), (2, 2)), (1, (), ())])
def test_unit_group_structure(q, gens, orders):
    ug = unit_group_structure(q)
    assert tuple(ug.generators) == gens
    assert tuple(ug.orders) == orders


@pytest.mark.parametrize("q", range(1, 61))
def test_unit_group_generates(q):
    ug = unit_group_structure(q)
    assert math.prod(ug.orders) == euler_phi(q)
    span = {1 % q}
    for g, o in zip(ug.generators, ug.orders):
        span = {x * pow(g, e, q) % q for x in span for e in range(o)}
    assert span == {a % q for a in _units(q)}


def test_characters_mod_4():
    chars = enumerate_characters(4)
    assert len(chars) == 2
    triv, odd = chars
    assert triv.is_trivial and triv.is_even and triv.conductor == 1
    assert odd.parity == "odd" and odd.conductor == 4
    assert odd(3) == -1 and odd(1) == 1 and odd(2).is_zero()


def test_characters_mod_1_and_5():
    assert len(enumerate_characters(1)) == 1
    chars5 = enumerate_characters(5)
    assert len(chars5) == 4
    quad = [c for c in chars5 if c.order == 2]
    assert len(quad) == 1 and quad[0].is_even and quad[0].is_primitive
    # the Legendre symbol mod 5
    assert all(quad[0](a) == kronecker_symbol(5, a) for a in range(1, 5))


@pytest.mark.parametrize("q", range(1, 61))
def test_orthogonality(q):
    for chi in enumerate_characters(q):
        s = orthogonality_sum(chi)
        assert s == (euler_phi(q) if chi.is_trivial else 0)


@pytest.mark.parametrize("q", range(1, 61))
def test_character_count_and_distinctness(q):
    chars = enumerate_characters(q)
    assert len(chars) == euler_phi(q)
    tables = {tuple(Fraction(c.exponent_at(a), c.order) for a in _units(q)) for c in chars}
    assert len(tables) == len(chars)


@pytest.mark.parametrize("q", range(1, 61))
def test_gauss_sum_modulus(q):
    prec = 128
    mpmath.mp.prec = 2 * prec
    for chi in enumerate_characters(q):
        if chi.is_primitive:
            tau = mpmath.mpc(gauss_sum(chi, prec))
            assert abs(abs(tau) ** 2 - chi.conductor) < mpmath.mpf(2) ** (12 - prec)


def test_gauss_sum_examples():
    mpmath.mp.prec = 200
    assert abs(mpmath.mpc(gauss_sum(trivial_character(), 128)) - 1) < mpmath.mpf(2) ** -120
    assert abs(mpmath.mpc(gauss_sum(quadratic_character(-4), 128)) - 2j) < mpmath.mpf(2) ** -120
    assert abs(mpmath.mpc(gauss_sum(quadratic_character(5), 128)) - mpmath.sqrt(5)) < mpmath.mpf(2) ** -120


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 12, 13, 15])
def test_gauss_sum_exact_matches_direct_sum(q):
    for chi in enumerate_characters(q):
        if not chi.is_primitive:
            continue
        direct = sum(_complex(chi(a)) * cmath.exp(2j * math.pi * a / q) for a in range(q))
        assert abs(_complex(gauss_sum_exact(chi)) - direct) < 1e-9


def test_gauss_sum_rejects_imprimitive():
    with pytest.raises(CharacterError):
        gauss_sum(trivial_character(4), 64)


characters = st.integers(1, 60).flatmap(lambda q: st.sampled_from(enumerate_characters(q)))


@given(characters, st.data())
def test_multiplicativity(chi, data):
    q = chi.modulus
    a = data.draw(st.sampled_from(_units(q)))
    b = data.draw(st.sampled_from(_units(q)))
    assert chi(a * b) == chi(a) * chi(b)


@given(characters)
def test_parity(chi):
    q = chi.modulus
    assert chi.is_even == (chi(q - 1) == 1)


@given(characters)
def test_primitive_part(chi):
    p = primitive_part(chi)
    assert p.is_primitive and p.modulus == chi.conductor
    for a in _units(chi.modulus):
        assert chi(a).lift(math.lcm(chi.order, p.order)) == p(a).lift(math.lcm(chi.order, p.order))
    assert primitive_part(p) == p


@given(characters)
def test_conjugate(chi):
    c = chi.conjugate()
    for a in _units(chi.modulus):
        assert c(a) == chi(a).conjugate()
    assert c.conjugate() == chi


@given(characters)
def test_json_roundtrip(chi):
    assert character_from_json(chi.to_json()) == chi


def test_primitive_part_examples():
    assert primitive_part(trivial_character(12)) == trivial_character(1)
    chi4 = quadratic_character(-4)
    lifted = [c for c in enumerate_characters(8) if c.conductor == 4]
    assert len(lifted) == 1 and primitive_part(lifted[0]) == chi4


@pytest.mark.parametrize("D", [d for d in range(-60, 61) if is_fundamental_discriminant(d) and d != 1])
def test_quadratic_character_values(D):
    chi = quadratic_character(D)
    assert chi.conductor == abs(D) and chi.order == 2
    assert chi.is_even == (D > 0)
    for n in range(1, 3 * abs(D)):
        assert chi(n) == kronecker_symbol(D, n)


@pytest.mark.parametrize("D", [0, 2, 3, 6, 9, -1, -8 * 4, 12 * 4])
def test_non_fundamental_rejected(D):
    assert not is_fundamental_discriminant(D)
    with pytest.raises(CharacterError):
        quadratic_character(D)


def test_make_character_checks_arity():
    with pytest.raises(CharacterError):
        make_character(8, [1])


@pytest.mark.parametrize("f,gens,expected_count", [(5, (4,), 2), (1, (), 1), (4, (), 2)])
def test_characters_of_field_examples(f, gens, expected_count):
    chars = characters_of_field(AbelianFieldSpec(f, gens))
    assert len(chars) == expected_count
    assert any(c.is_trivial for c in chars)


def test_q_sqrt5_characters():
    chars = characters_of_field(AbelianFieldSpec(5, (4,)))
    assert set(chars) == {trivial_character(), quadratic_character(5)}


def _subgroups(f):
    units = _units(f) if f > 1 else [1]
    seen = set()
    for g1 in units:
        for g2 in units:
            H = AbelianFieldSpec(f, (g1 % f if f > 1 else 0, g2 % f if f > 1 else 0)).subgroup()
            if H not in seen:
                seen.add(H)
                yield (g1, g2), H


@pytest.mark.parametrize("f", range(1, 41))
def test_characters_of_field_kernel(f):
    for gens, H in _subgroups(f):
        K = AbelianFieldSpec(f, tuple(g % f for g in gens) if f > 1 else ())
        full = [chi for chi in enumerate_characters(f) if all(chi.exponent_at(h) == 0 for h in K.subgroup_gens)]
        assert len(characters_of_field(K)) == euler_phi(f) // len(H) == K.degree
        units = _units(f) if f > 1 else [0]
        kernel = {a % f for a in units if all(chi.exponent_at(a) == 0 for chi in full)}
        assert kernel == set(H)


@pytest.mark.parametrize("D", [5, 8, 12, 13, -3, -4, -7, -8, 1])
def test_quadratic_field(D):
    K = quadratic_field(D)
    chars = characters_of_field(K)
    assert K.degree == (1 if D == 1 else 2)
    assert K.is_totally_real == (D > 0)
    if D != 1:
        assert set(chars) == {trivial_character(), quadratic_character(D)}
    assert field_from_json(K.to_json()) == K


def test_field_rejects_non_units():
    with pytest.raises(CharacterError):
        AbelianFieldSpec(8, (2,))
