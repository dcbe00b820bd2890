from fractions import Fraction

import pytest

from services.errors import NotAUnit, PrecisionExhausted
from services.padic.characters import (
    discrete_log_gamma,
    gamma_generator,
    level_exponent,
    teichmuller,
)
from services.padic.cyclotomic import CycloScalar, ramification_degree
from services.padic.quadratic import HeckeField
from services.padic.scalar import PadicScalar, is_prime


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_scalar_inverts_units_of_the_denominator():
    half = PadicScalar.from_fraction(3, Fraction(1, 2), 10)
    assert half * 2 == 1
    assert half.ord() == 0


def test_scalar_valuation_and_unit_part():
    x = PadicScalar.from_int(5, 50, 10)
    assert x.ord() == 2
    assert x.unit_part() == 2
    assert PadicScalar.from_fraction(3, Fraction(2, 9), 10).ord() == -2


def test_zero_has_no_valuation():
    with pytest.raises(PrecisionExhausted):
        PadicScalar.zero(7, 10).ord()
    assert PadicScalar.zero(7, 10).valuation_bound() == 10


def test_inverse_and_shift():
    x = PadicScalar.from_int(7, 3, 8)
    assert x * x.inverse() == 1
    y = PadicScalar.from_int(3, 1, 10).shift(-2)
    assert y.ord() == -2
    assert y.shift(2) == 1


def test_centered_representative():
    assert PadicScalar.from_int(5, -3, 4).centered() == -3
    assert PadicScalar.from_int(5, 3, 4).centered() == 3


def test_level_exponent_and_gamma():
    assert level_exponent(3, 0) == 1
    assert level_exponent(2, 0) == 2
    assert gamma_generator(3) == 7
    assert gamma_generator(2) == 5


@pytest.mark.parametrize("p", [3, 5, 7])
def test_teichmuller_is_a_root_of_unity(p):
    for a in range(1, p):
        t = teichmuller(a, p, 12)
        assert t ** (p - 1) == 1
        assert t.num % p == a


def test_teichmuller_at_two_is_a_sign():
    assert teichmuller(3, 2, 10) == -1
    assert teichmuller(5, 2, 10) == 1


def test_teichmuller_rejects_non_units():
    with pytest.raises(NotAUnit):
        teichmuller(6, 3, 5)


@pytest.mark.parametrize("p, n", [(2, 3), (3, 2), (5, 2)])
def test_discrete_log_of_gamma_powers(p, n):
    modulus = p ** level_exponent(p, n)
    gamma = gamma_generator(p)
    for k in range(p ** n):
        a = pow(gamma, k, modulus)
        assert discrete_log_gamma(a, p, n) == k
        assert discrete_log_gamma(modulus - a, p, n) == k


def test_hecke_field_relation():
    field = HeckeField(3, 0, 1, 20)
    alpha = field.alpha
    assert alpha * alpha == field.element(-3, 0)
    assert alpha + field.beta == field.element(0, 0)
    assert alpha.ord() == Fraction(1, 2)
    assert alpha * alpha.inverse() == field.one()


def test_hecke_field_norm_and_conjugate():
    field = HeckeField(5, 5, 1, 20)
    z = field.element(2, 1)
    assert z.norm() == (z * z.conjugate()).x
    assert (z * z.conjugate()).y.is_zero


def test_ordinary_unit_root():
    field = HeckeField(5, 2, 1, 20)
    root = field.unit_root
    assert root * root - root * 2 + 5 == 0
    assert root.ord() == 0
    assert field.alpha.ord() == 0


def test_ramification_degree():
    assert ramification_degree(3, 0) == 1
    assert ramification_degree(3, 2) == 6
    assert ramification_degree(2, 3) == 4


@pytest.mark.parametrize("p, m", [(2, 2), (3, 1), (3, 2), (5, 1)])
def test_zeta_minus_one_is_a_uniformizer(p, m):
    pi = CycloScalar.zeta_minus_one(p, m, 10)
    assert pi.ord() == Fraction(1, ramification_degree(p, m))
    assert CycloScalar.from_int(p, m, p, 10).ord() == 1


def test_zeta_has_order_p_power():
    z = CycloScalar.zeta(3, 2, 10)
    assert z ** 9 == 1
    assert not (z ** 3 == 1)


def test_root_valuations_follow_the_newton_polygon():
    assert HeckeField(3, 3, 1, 20).alpha.ord() == Fraction(1, 2)
    assert HeckeField(3, 3, 1, 20).beta.ord() == Fraction(1, 2)
    ordinary = HeckeField(5, 1, 1, 20)
    assert ordinary.alpha.ord() == 0
    assert ordinary.beta.ord() == 1
