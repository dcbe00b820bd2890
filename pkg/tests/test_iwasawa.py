from fractions import Fraction

import pytest

from services.errors import DivisionRemainder, LevelUnderflow, Undetermined
from services.iwasawa.invariants import (
    IwasawaInvariants,
    agreement_digits,
    iwasawa_invariants,
    ord_at_point,
    stabilize_levels,
)
from services.iwasawa.lambda_element import LambdaElement, ord_at_origin, ord_at_zeta
from services.iwasawa.series import SeriesApprox, fraction_ord
from services.padic.scalar import INFINITY

PREC = 12


def element(p, level, coeffs):
    return LambdaElement.from_poly(p, level, coeffs, PREC)


def test_reduction_modulo_omega():
    # (1+T)^3 - 1 = 3T + 3T^2 + T^3 vanishes in Λ_1 for p = 3
    x = element(3, 1, [0, 3, 3, 1])
    assert x.is_zero
    assert LambdaElement.group_like(3, 2, 9, PREC) == LambdaElement.one(3, 2, PREC)


def test_projection_of_norm_is_multiplication_by_p():
    x = element(3, 1, [2, 5, 1])
    assert x.norm_nu().project_pi() == x * 3
    y = element(2, 2, [1, 0, 3, 1])
    assert y.norm_nu().project_pi() == y * 2


def test_norm_preimage_round_trip():
    x = element(5, 1, [1, 2, 3, 4, 0])
    assert x.norm_nu().nu_preimage() == x


def test_norm_preimage_rejects_non_images():
    with pytest.raises(DivisionRemainder):
        element(3, 1, [1, 0, 0]).nu_preimage()
    with pytest.raises(LevelUnderflow):
        element(3, 0, [1]).nu_preimage()


def test_group_basis_round_trip():
    weights = [3, 0, 7, 1, 2, 0, 0, 5, 4]
    x = LambdaElement.from_group_basis(3, 2, weights, PREC)
    assert x.to_group_basis() == [w % 3 ** PREC for w in weights]


def test_involution_is_an_involution():
    x = element(3, 2, [1, 4, 0, 2, 7])
    assert x.involution().involution() == x
    t = element(3, 1, [0, 1])
    # T -> (1+T)^{-1} - 1 = -T(1+T)^{-1}
    assert t.involution() * LambdaElement.group_like(3, 1, 1, PREC) == -t


def test_orders_of_vanishing():
    assert ord_at_origin(element(3, 2, [0, 0, 5, 1])) == 2
    phi = LambdaElement.cyclotomic(3, 1, 2, PREC)
    assert ord_at_zeta(phi, 1) == 1
    assert ord_at_zeta(phi, 2) == 0
    assert ord_at_zeta(phi * phi, 1) == 2
    with pytest.raises(Undetermined):
        ord_at_origin(LambdaElement.zero(3, 1, PREC))


def test_fraction_ord():
    assert fraction_ord(Fraction(18, 5), 3) == 2
    assert fraction_ord(Fraction(5, 9), 3) == -2
    assert fraction_ord(Fraction(0), 3) == INFINITY


def test_series_binomial_and_substitution():
    root = SeriesApprox.group_like(3, Fraction(1, 2), 3)
    assert root.coeffs == (1, Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16))
    assert root.tail == 0
    f = SeriesApprox.from_values(3, [1, 2, 3, 4])
    assert f.substitute_inverse().substitute_inverse().coeffs == f.coeffs
    assert f.substitute_inverse().coeffs[1] == -2


def test_series_product_tracks_the_ledger():
    f = SeriesApprox.from_values(3, [1, 1], ledger=[5, 5])
    g = SeriesApprox.from_values(3, [3, 0])
    product = f * g
    assert product.coeffs == (3, 3)
    assert product.ledger == (6, 6)


def test_invariants_of_an_exact_series():
    x = SeriesApprox.from_values(3, [3, 6, 1, 9])
    assert iwasawa_invariants(x) == IwasawaInvariants(Fraction(0), 2)
    y = element(5, 1, [25, 10, 5, 0, 0])
    assert iwasawa_invariants(y) == IwasawaInvariants(Fraction(1), 1)


def test_invariants_need_certified_coefficients():
    unknown_first = SeriesApprox.from_values(3, [0, 3], ledger=[1, INFINITY])
    with pytest.raises(Undetermined):
        iwasawa_invariants(unknown_first)
    untracked_tail = SeriesApprox.from_values(3, [3], tail=0)
    with pytest.raises(Undetermined):
        iwasawa_invariants(untracked_tail)
    harmless = SeriesApprox.from_values(3, [0, 1], ledger=[1, INFINITY])
    assert iwasawa_invariants(harmless) == IwasawaInvariants(Fraction(0), 1)


def test_ord_at_point_on_polynomials():
    phi_squared = SeriesApprox.from_values(3, [9, 18, 15, 6, 1])
    assert ord_at_point(phi_squared, 1) == 2
    assert ord_at_point(SeriesApprox.from_values(3, [0, 0, 5]), None) == 2
    assert ord_at_point(element(3, 1, [0, 2]), None) == 1


def test_stabilize_levels_uses_agreement():
    top = element(3, 2, [1, 3, 0, 2])
    lower = top.project_to(1)
    assert agreement_digits(lower, top) == [PREC] * 3
    series = stabilize_levels([lower, top])
    assert series.truncation == 2
    assert min(series.ledger) == PREC
    assert iwasawa_invariants(series) == IwasawaInvariants(Fraction(0), 0)


def test_stabilize_levels_needs_two_levels():
    with pytest.raises(Undetermined):
        stabilize_levels([element(3, 1, [1])])
