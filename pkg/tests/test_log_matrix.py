from fractions import Fraction

import pytest

from services.errors import Undetermined
from services.iwasawa.lambda_element import LambdaElement
from services.log_matrix.build import (
    a_tilde_inverse,
    build_matrices,
    c_power,
    constant_A,
    constant_A_tilde,
    constant_C,
    y_matrix,
)
from services.log_matrix.cyclotomic import (
    completed_cyclotomic,
    cyclotomic_degree,
    cyclotomic_poly,
    hat_shift,
)
from services.log_matrix.hecke import HeckeData
from services.log_matrix.log_product import (
    cyclotomic_values_check,
    det_identity_check,
    diagonalization_check,
    fe_units_check,
    half_log_decomposition_check,
    hat_invariance_check,
    hat_plain_at_zero_check,
    log_partial_product,
)
from services.log_matrix.matrix import fraction_matrix
from services.padic.scalar import INFINITY

IDENTITY = fraction_matrix([[1, 0], [0, 1]])


def test_hecke_data_classification():
    assert HeckeData(3, 0).is_ap_zero
    assert HeckeData(3, 0).supersingular
    assert HeckeData(5, 10).v == 1
    assert HeckeData(5, 2).ordinary
    assert HeckeData(3, 0).v == INFINITY
    with pytest.raises(ValueError):
        HeckeData(4, 1)
    with pytest.raises(ValueError):
        HeckeData(3, 1, eps=2)


def test_constant_matrices():
    h = HeckeData(5, 2, eps=-1)
    assert constant_C(h).det() == h.eps * h.p
    assert c_power(h, -1) @ constant_C(h) == IDENTITY
    assert a_tilde_inverse(h) @ constant_A_tilde(h) == IDENTITY
    assert y_matrix(h, 2) == (constant_A(h) @ constant_A(h)).map(lambda x: x / 5)


def test_cyclotomic_shapes():
    assert cyclotomic_poly(3, 1) == (3, 3, 1)
    assert cyclotomic_degree(3, 2) == 6
    assert hat_shift(3, 2) == 3
    assert hat_shift(2, 1) == 0
    assert hat_shift(2, 2) == 1


def test_completed_factor_agrees_with_plain_at_zero():
    hat = completed_cyclotomic(5, 1, level=1, prec=10)
    assert hat.eval_at_zero() == 5
    assert completed_cyclotomic(5, 1, d=4).coeffs[0] == 5


@pytest.mark.parametrize("p", [2, 3, 5])
def test_completed_factors_are_invariant(p):
    assert hat_invariance_check(HeckeData(p, 0, prec=10), [1, 2], level=2).passed


@pytest.mark.parametrize("p, n", [(3, 2), (3, 3), (5, 2)])
def test_top_factor_is_invariant_at_its_own_level(p, n):
    result = hat_invariance_check(HeckeData(p, 0, prec=10), range(1, n + 1), level=n)
    assert result.passed
    per_index = result.metadata["indices"]
    assert per_index[n]["uncompleted_varies"] is None
    assert all(per_index[i]["uncompleted_varies"] for i in range(1, n))


def test_cyclotomic_values():
    assert cyclotomic_values_check(3, 2, [1, 2, 3]).passed
    assert cyclotomic_values_check(2, 2, [1, 2, 3]).passed


def test_half_log_functional_equation():
    result = fe_units_check(3, 2, d=12)
    assert result.passed
    assert result.metadata["negative_control_failed_as_expected"] == {"+": True, "-": True}


def test_half_log_decomposition():
    assert half_log_decomposition_check(HeckeData(3, 0), 1, d=6).passed
    assert not half_log_decomposition_check(HeckeData(3, 3), 1, d=6).passed


@pytest.mark.parametrize("p, a", [(3, 0), (5, 5), (5, 2)])
def test_diagonalization(p, a):
    assert diagonalization_check(HeckeData(p, a, prec=30)).passed


def test_hat_and_plain_agree_at_zero():
    assert hat_plain_at_zero_check(HeckeData(3, 0), 2).passed
    assert hat_plain_at_zero_check(HeckeData(5, 2), 2).passed


def test_determinant_identity():
    assert det_identity_check(HeckeData(3, 0), 3, d=8).passed
    assert det_identity_check(HeckeData(3, 0), 3, d=8, completed=False).passed


def test_ordinary_right_column_diverges():
    partial = log_partial_product(HeckeData(5, 2), 2, d=4)
    partial.entry(0, 0)
    with pytest.raises(Undetermined):
        partial.entry(0, 1)


def test_partial_product_at_ap_zero_is_diagonal():
    partial = log_partial_product(HeckeData(3, 0), 2, completed=False, d=6)
    assert all(c == 0 for c in partial.left.b.coeffs)
    assert all(c == 0 for c in partial.left.c.coeffs)
    assert partial.left.a.coeffs[0] == Fraction(-1, 3)
    assert partial.left.d.coeffs[0] == Fraction(-1, 3)


def test_lambda_matrices_at_a_level():
    h = HeckeData(3, 0, prec=10)
    matrices = build_matrices(h, 1, level=1)
    assert matrices.c_i.c == LambdaElement.cyclotomic(3, 1, 1, 10) * -1
    assert matrices.c_hat_lower.c == LambdaElement.from_int(3, 1, -1, 10)


@pytest.mark.slow
@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("factors", [1, 2])
def test_half_log_decomposition_through_order_thirty(p, factors):
    assert half_log_decomposition_check(HeckeData(p, 0), factors, d=30).passed
    result = fe_units_check(p, factors, d=30)
    assert result.passed, result.errors
    assert result.metadata["negative_control_failed_as_expected"] == {"+": True, "-": True}


@pytest.mark.slow
@pytest.mark.parametrize("a", [0, 3, -3])
@pytest.mark.parametrize("completed", [True, False])
def test_determinant_identity_through_order_27(a, completed):
    result = det_identity_check(HeckeData(3, a), 5, d=27, completed=completed)
    assert result.passed, result.errors
    assert result.metadata["window"] == list(range(26))
