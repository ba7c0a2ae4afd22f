"""Dirichlet characters, unit groups, Gauss sums and abelian fields.

A character mod q is identified by its exponent tuple against the deterministic
generators of (Z/qZ)^x returned by :func:`unit_group_structure`: the character
sends generator ``g_i`` (of order ``o_i``) to ``exp(2 pi i e_i / o_i)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .exact import CycloElem, euler_phi
from .numeric import context, to_mp


class CharacterError(ValueError):
    pass


def factorize(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def _mult_order(a: int, n: int) -> int:
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


def _crt_lift(residue: int, modulus: int, q: int) -> int:
    """The element of Z/q that is ``residue`` mod ``modulus`` and 1 mod q/modulus."""
    rest = q // modulus
    if rest == 1:
        return residue % q
    # x = residue + modulus * t with x = 1 mod rest
    t = ((1 - residue) * pow(modulus, -1, rest)) % rest
    return (residue + modulus * t) % q


@dataclass(frozen=True)
class UnitGroupStructure:
    modulus: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]


@lru_cache(maxsize=None)
def unit_group_structure(q: int) -> UnitGroupStructure:
    if q < 1:
        raise ValueError("modulus must be positive")
    gens: list[int] = []
    orders: list[int] = []
    for p, k in factorize(q):
        pk = p**k
        if p == 2:
            if k == 1:
                continue
            if k == 2:
                local = [(3, 2)]
            else:
                local = [(pk - 1, 2), (5, 2 ** (k - 2))]
        else:
            phi = pk - pk // p
            g = next(g for g in range(2, pk) if g % p and _mult_order(g, pk) == phi)
            local = [(g, phi)]
        for g, o in local:
            gens.append(_crt_lift(g, pk, q))
            orders.append(o)
    return UnitGroupStructure(q, tuple(gens), tuple(orders))


@lru_cache(maxsize=None)
def discrete_log_table(q: int) -> Mapping[int, tuple[int, ...]]:
    """Map each unit mod q to its exponent vector on the standard generators."""
    ug = unit_group_structure(q)
    table = {}
    for exps in itertools.product(*(range(o) for o in ug.orders)):
        a = 1
        for g, e in zip(ug.generators, exps):
            a = a * pow(g, e, q) % q
        table[a % q] = exps
    if len(table) != euler_phi(q):
        raise AssertionError(f"generators of (Z/{q})^x are not independent")
    return table


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    exponents: tuple[int, ...]
    order: int = field(compare=False)
    conductor: int = field(compare=False)
    parity: str = field(compare=False)

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def is_even(self) -> bool:
        return self.parity == "even"

    @property
    def is_real(self) -> bool:
        return self.order <= 2

    @property
    def delta(self) -> int:
        return 0 if self.is_even else 1

    def exponent_at(self, a: int) -> int | None:
        """j such that chi(a) = zeta_order^j, or None when gcd(a, q) > 1."""
        return _value_exponents(self.modulus, self.exponents, self.order).get(a % self.modulus)

    def value_at(self, a: int) -> CycloElem:
        j = self.exponent_at(a)
        if j is None:
            return CycloElem.zero(self.order)
        return CycloElem.root_of_unity(self.order, j)

    def __call__(self, a: int) -> CycloElem:
        return self.value_at(a)

    def conjugate(self) -> DirichletCharacter:
        ug = unit_group_structure(self.modulus)
        return make_character(self.modulus, [(-e) % o for e, o in zip(self.exponents, ug.orders)])

    def numeric_values(self, prec: int) -> list:
        """chi(a) for a = 0..q-1 as mpc in the calling thread's context (0 off units)."""
        ctx = context()
        out = []
        with ctx.workprec(prec):
            twopi = 2 * ctx.pi
            cache: dict[int, object] = {}
            for a in range(self.modulus):
                j = self.exponent_at(a)
                if j is None:
                    out.append(ctx.mpc(0))
                    continue
                if j not in cache:
                    if j == 0:
                        cache[j] = ctx.mpc(1)
                    elif 2 * j == self.order:
                        cache[j] = ctx.mpc(-1)
                    else:
                        cache[j] = ctx.expjpi(ctx.mpf(2 * j) / self.order)
                out.append(cache[j])
        return out

    def label(self) -> str:
        return f"{self.modulus}:{','.join(map(str, self.exponents))}"

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "exponents": list(self.exponents),
            "conductor": self.conductor,
            "order": self.order,
            "parity": self.parity,
        }


@lru_cache(maxsize=None)
def _value_exponents(q: int, exponents: tuple[int, ...], order: int) -> Mapping[int, int]:
    ug = unit_group_structure(q)
    weights = [e * order // o for e, o in zip(exponents, ug.orders)]
    return {
        a: sum(w * l for w, l in zip(weights, logs)) % order
        for a, logs in discrete_log_table(q).items()
    }


def _conductor(q: int, vals: Mapping[int, int]) -> int:
    for d in sorted(d for d in range(1, q + 1) if q % d == 0):
        if all(j == 0 for a, j in vals.items() if a % d == 1 % d):
            return d
    return q


def make_character(q: int, exponents: Sequence[int]) -> DirichletCharacter:
    ug = unit_group_structure(q)
    if len(exponents) != len(ug.orders):
        raise CharacterError(
            f"modulus {q} has {len(ug.orders)} generators, got {len(exponents)} exponents"
        )
    exps = tuple(int(e) % o for e, o in zip(exponents, ug.orders))
    order = 1
    for e, o in zip(exps, ug.orders):
        order = math.lcm(order, o // math.gcd(e, o))
    vals = _value_exponents(q, exps, order)
    conductor = _conductor(q, vals)
    minus_one = vals.get((q - 1) % q, 0)
    parity = "even" if minus_one == 0 else "odd"
    return DirichletCharacter(q, exps, order, conductor, parity)


def trivial_character(q: int = 1) -> DirichletCharacter:
    return make_character(q, [0] * len(unit_group_structure(q).orders))


def enumerate_characters(q: int) -> list[DirichletCharacter]:
    ug = unit_group_structure(q)
    return [make_character(q, e) for e in itertools.product(*(range(o) for o in ug.orders))]


def _unit_lift(a: int, f: int, q: int) -> int:
    """A unit mod q congruent to a mod f."""
    for x in range(a % f if f > 1 else 1, q + f, f):
        if math.gcd(x, q) == 1:
            return x
    raise AssertionError("no unit lift")


@lru_cache(maxsize=None)
def _primitive_part(q: int, exponents: tuple[int, ...]) -> DirichletCharacter:
    chi = make_character(q, exponents)
    f = chi.conductor
    if f == q:
        return chi
    target = [Fraction(chi.exponent_at(_unit_lift(g, f, q)), chi.order)
              for g in unit_group_structure(f).generators]
    for psi in enumerate_characters(f):
        if psi.order != chi.order:
            continue
        got = [Fraction(psi.exponent_at(g), psi.order) for g in unit_group_structure(f).generators]
        if got == target:
            return psi
    raise AssertionError(f"no primitive character inducing {chi.label()}")


def primitive_part(chi: DirichletCharacter) -> DirichletCharacter:
    return _primitive_part(chi.modulus, chi.exponents)


def orthogonality_sum(chi: DirichletCharacter) -> CycloElem:
    """sum_{a mod q} chi(a) as an exact element."""
    terms: dict[int, int] = {}
    for a in range(chi.modulus):
        j = chi.exponent_at(a)
        if j is not None:
            terms[j] = terms.get(j, 0) + 1
    return CycloElem.from_powers(chi.order, terms)


def gauss_sum_terms(chi: DirichletCharacter) -> tuple[int, dict[int, int]]:
    """Exact Gauss sum as integer multiplicities of powers of zeta_L, L = lcm(order, q)."""
    q = chi.modulus
    L = math.lcm(chi.order, q)
    terms: dict[int, int] = {}
    for a in range(q):
        j = chi.exponent_at(a)
        if j is None:
            continue
        k = (j * (L // chi.order) + a * (L // q)) % L
        terms[k] = terms.get(k, 0) + 1
    return L, terms


def gauss_sum_exact(chi: DirichletCharacter) -> CycloElem:
    if not chi.is_primitive:
        raise CharacterError("Gauss sums are taken for primitive characters only")
    L, terms = gauss_sum_terms(chi)
    return CycloElem.from_powers(L, terms)


def gauss_sum(chi: DirichletCharacter, prec: int):
    """tau(chi) = sum_a chi(a) e(a/q), accumulated exactly then embedded once."""
    if not chi.is_primitive:
        raise CharacterError("Gauss sums are taken for primitive characters only")
    L, terms = gauss_sum_terms(chi)
    ctx = context()
    with ctx.workprec(prec + 16):
        total = ctx.mpc(0)
        for k, c in sorted(terms.items()):
            if c:
                total += c * ctx.expjpi(ctx.mpf(2 * k) / L)
    return total


# -- Kronecker symbols and quadratic fields ---------------------------------

def kronecker_symbol(D: int, n: int) -> int:
    """(D/n) for integers D and n >= 1, by quadratic reciprocity."""
    if n < 1:
        raise ValueError("kronecker_symbol needs n >= 1")
    result = 1
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    # Jacobi symbol (D/n) for odd n
    a = D % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _squarefree(n: int) -> bool:
    return all(k == 1 for _, k in factorize(abs(n)))


def is_fundamental_discriminant(D: int) -> bool:
    if D in (0, 1):
        return D == 1
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def quadratic_character(D: int) -> DirichletCharacter:
    """The primitive character n -> (D/n) of conductor |D|."""
    if not is_fundamental_discriminant(D):
        raise CharacterError(f"{D} is not a fundamental discriminant")
    q = abs(D)
    if q == 1:
        return trivial_character(1)
    for chi in enumerate_characters(q):
        if chi.order == 2 and all(
            (chi.exponent_at(a) == 0) == (kronecker_symbol(D, a) == 1)
            for a in discrete_log_table(q)
        ):
            return chi
    raise AssertionError(f"no quadratic character for {D}")


# -- abelian fields -------------------------------------------------------------

@dataclass(frozen=True)
class AbelianFieldSpec:
    """Subfield of Q(zeta_f) fixed by the subgroup H of (Z/f)^x generated by ``subgroup_gens``."""

    conductor: int
    subgroup_gens: tuple[int, ...]

    def __post_init__(self):
        if self.conductor < 1:
            raise CharacterError("field conductor must be positive")
        for g in self.subgroup_gens:
            if math.gcd(g, self.conductor) != 1:
                raise CharacterError(f"{g} is not a unit mod {self.conductor}")

    def subgroup(self) -> frozenset[int]:
        f = self.conductor
        elems = {1 % f}
        frontier = list(elems)
        while frontier:
            x = frontier.pop()
            for g in self.subgroup_gens:
                y = x * g % f
                if y not in elems:
                    elems.add(y)
                    frontier.append(y)
        return frozenset(elems)

    @property
    def degree(self) -> int:
        return euler_phi(self.conductor) // len(self.subgroup())

    @property
    def is_totally_real(self) -> bool:
        return (-1) % self.conductor in self.subgroup()

    def to_json(self) -> dict:
        return {"conductor": self.conductor, "subgroup_gens": list(self.subgroup_gens)}


def quadratic_field(D: int) -> AbelianFieldSpec:
    """Field spec of Q(sqrt D) for a fundamental discriminant D (D = 1 gives Q)."""
    if not is_fundamental_discriminant(D):
        raise CharacterError(f"{D} is not a fundamental discriminant")
    f = abs(D)
    if f == 1:
        return AbelianFieldSpec(1, ())
    kernel = sorted(a for a in range(1, f) if math.gcd(a, f) == 1 and kronecker_symbol(D, a) == 1)
    return AbelianFieldSpec(f, tuple(kernel))


def characters_of_field(K: AbelianFieldSpec) -> list[DirichletCharacter]:
    """Primitive characters attached to K: those mod f trivial on H."""
    out = []
    for chi in enumerate_characters(K.conductor):
        if all(chi.exponent_at(h) == 0 for h in K.subgroup_gens):
            out.append(primitive_part(chi))
    return out


def character_from_json(data: Mapping) -> DirichletCharacter:
    return make_character(int(data["modulus"]), [int(e) for e in data["exponents"]])


def field_from_json(data: Mapping) -> AbelianFieldSpec:
    return AbelianFieldSpec(int(data["conductor"]), tuple(int(g) for g in data["subgroup_gens"]))
