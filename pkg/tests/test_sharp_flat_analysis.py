import pytest

from services.errors import Undetermined
from services.iwasawa.lambda_element import LambdaElement
from services.log_matrix.hecke import HeckeData
from services.sharp_flat.analysis import (
    gcd_structure,
    greenberg_report,
    orders_at_zero,
    vanishing_orders,
)
from services.sharp_flat.pair import SharpFlatPair

PREC = 20


def plain_pair(sharp, flat, a=0):
    return SharpFlatPair(sharp, flat, HeckeData(3, a, prec=PREC), completed=False, tame=0, level=2)


def constant(value):
    return LambdaElement.from_int(3, 2, value, PREC)


def phi_1():
    return LambdaElement.cyclotomic(3, 1, 2, PREC)


def times_t(x):
    return x * LambdaElement.from_poly(3, 2, [0, 1], PREC)


def test_units_have_no_cyclotomic_zeros():
    rows = vanishing_orders(plain_pair(constant(1), constant(1)))
    assert [row.m for row in rows] == [0, 1, 2]
    assert [row.d_an for row in rows] == [0, 0, 0]
    assert all(row.equiroots for row in rows)


def test_a_cyclotomic_factor_raises_the_order_at_its_level():
    rows = vanishing_orders(plain_pair(phi_1(), phi_1()))
    assert [row.d_an for row in rows] == [0, 1, 0]
    assert rows[1].ord_alpha == rows[1].ord_beta == 1


def test_equiroots_with_nonzero_ap():
    rows = vanishing_orders(plain_pair(phi_1(), constant(2), a=3))
    assert all(row.equiroots for row in rows)


def test_vanishing_orders_stop_at_the_level():
    with pytest.raises(ValueError):
        vanishing_orders(plain_pair(constant(1), constant(1)), m_max=3)


def test_zero_pair_is_undetermined():
    with pytest.raises(Undetermined):
        orders_at_zero(plain_pair(constant(0), constant(0)))


def test_gcd_of_a_common_power_of_t():
    structure, result = gcd_structure(plain_pair(times_t(constant(1)), times_t(constant(2))))
    assert result.passed, result.errors
    assert structure.t_exponent == 1
    assert [row.exponent for row in structure.rows] == [0, 0]
    assert structure.cyclotomic_degree == 0


def test_gcd_of_a_common_cyclotomic_factor():
    structure, result = gcd_structure(plain_pair(phi_1(), phi_1()))
    assert result.passed, result.errors
    first = structure.rows[0]
    assert (first.m, first.exponent, first.d_an) == (1, 1, 1)
    assert first.branch == "f1>=f2,a=0"
    assert first.branch_holds
    assert structure.cyclotomic_degree == 2


def test_no_common_zeros_for_a_unit_gcd():
    report = greenberg_report(plain_pair(constant(1), constant(1)))
    assert report.bound_off_roots == 0
    assert report.lambda_min == 0
    assert "Rohrlich" in report.assumption


def test_shared_cyclotomic_factor_is_reported_at_its_level():
    report = greenberg_report(plain_pair(phi_1(), phi_1()))
    assert (1, 1) in report.root_rows
    assert report.lambda_min == 2
    assert report.bound_off_roots == 0


def test_common_zeros_need_supersingular_data():
    with pytest.raises(ValueError):
        greenberg_report(plain_pair(constant(1), constant(1), a=1))
