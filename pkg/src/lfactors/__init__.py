"""Exact and arbitrary-precision special values of Dirichlet L-functions.

Modules:

* :mod:`lfactors.exact`: rationals, Bernoulli numbers, cyclotomic field elements
* :mod:`lfactors.dirichlet`: characters, Gauss sums, abelian field specs
* :mod:`lfactors.special`: Hurwitz zeta, log-gamma, digamma, AGM
* :mod:`lfactors.lfunctions`: L-values, log-derivatives, Dedekind zeta
* :mod:`lfactors.conjecture`: Colmez factors, degree coefficients, oracle checks
* :mod:`lfactors.cli`: the ``lfactors`` command
"""
from .dirichlet import (
    AbelianFieldSpec,
    DirichletCharacter,
    enumerate_characters,
    make_character,
    quadratic_character,
    quadratic_field,
    trivial_character,
)
from .lfunctions import gen_bernoulli, l_deriv, l_exact_nonpos, l_logderiv_neg, l_value
from .numeric import Evaluation, Route

__version__ = "0.1.0"

__all__ = [
    "AbelianFieldSpec",
    "DirichletCharacter",
    "Evaluation",
    "Route",
    "enumerate_characters",
    "gen_bernoulli",
    "l_deriv",
    "l_exact_nonpos",
    "l_logderiv_neg",
    "l_value",
    "make_character",
    "quadratic_character",
    "quadratic_field",
    "trivial_character",
]
