import numpy as np
import pytest

from services.iwasawa.lambda_element import LambdaElement
from services.log_matrix.hecke import HeckeData
from services.sharp_flat.identities import (
    functional_equation_check,
    hat_to_plain,
    main_theorem_check,
    special_value_coefficients,
    special_value_table_check,
)
from services.sharp_flat.pair import SharpFlatPair
from services.sharp_flat.synthetic import synthetic_table_from_pair
from services.sharp_flat.tower import TowerPolynomial
from services.validators.identity_suite import IdentitySuite

PREC = 20

SWEEP = [(3, 0), (3, 3), (3, -3), (3, 1), (3, -2), (5, 0), (5, 5), (5, 2), (5, -1), (3, 2)]


def antisymmetric(p, n, coeffs):
    """x − x((1+T)^{−1} − 1), odd under the involution"""
    x = LambdaElement.from_poly(p, n, coeffs, PREC)
    return x - x.involution()


def antisymmetric_pair(p, n):
    return SharpFlatPair(antisymmetric(p, n, [0, 0, 1]), antisymmetric(p, n, [0, 1]),
                         HeckeData(p, 0, prec=PREC), completed=True, tame=0, level=n)


@pytest.mark.slow
def test_main_theorem_on_fifty_synthetic_tables():
    rng = np.random.default_rng(50)
    for index in range(50):
        p, a = SWEEP[index % len(SWEEP)]
        n = 3 if p == 3 else 2
        h = HeckeData(p, a, prec=30)
        upsilon = tuple(TowerPolynomial.from_coeffs(p, rng.integers(-4, 5, size=4).tolist(), 30) for _ in range(2))
        table = synthetic_table_from_pair(upsilon, h, n)
        result = main_theorem_check(table, 0, n, completed=(a == 0))
        assert result.passed, (index, p, a, result.errors)
        assert min(result.metadata["digits"].values()) >= 20, (index, result.metadata["digits"])
        if h.supersingular:
            assert result.metadata["columns"] == ["alpha", "beta"]
        else:
            assert result.metadata["beta"] == "skipped (ordinary)"


def test_main_theorem_on_a_consistent_table(supersingular_table):
    result = main_theorem_check(supersingular_table, 0, 2, completed=False)
    assert result.passed, result.errors
    assert set(result.metadata["signs"]) == {"alpha", "beta"}


def test_special_value_coefficients():
    assert special_value_coefficients(HeckeData(3, 0), 0) == (-2, -2)
    # (2 − a_p) vanishes at a_p = 2
    assert special_value_coefficients(HeckeData(5, 2), 0)[1] == 0
    assert special_value_coefficients(HeckeData(5, 2), 1) == (2, 1)


def test_special_values_in_the_predicted_ratio():
    h = HeckeData(3, 0, prec=PREC)
    matching = SharpFlatPair(LambdaElement.from_int(3, 2, 5, PREC), LambdaElement.from_int(3, 2, 5, PREC),
                             h, completed=True, tame=0, level=2)
    assert special_value_table_check(matching).passed
    skewed = SharpFlatPair(LambdaElement.from_int(3, 2, 5, PREC), LambdaElement.from_int(3, 2, 6, PREC),
                           h, completed=True, tame=0, level=2)
    assert not special_value_table_check(skewed).passed


def test_special_values_flag_the_degenerate_column():
    h = HeckeData(5, 2, prec=PREC)
    pair = SharpFlatPair(LambdaElement.from_int(5, 1, 7, PREC), LambdaElement.from_int(5, 1, 0, PREC),
                         h, completed=True, tame=0, level=1)
    result = special_value_table_check(pair)
    assert result.passed
    assert result.metadata["coefficients"] == {"sharp": 1 - 5, "flat": 0}
    assert result.warnings


@pytest.mark.parametrize("p", [3, 5])
def test_completed_functional_equation_of_an_antisymmetric_pair(p):
    result = functional_equation_check(antisymmetric_pair(p, 2))
    assert result.passed, result.errors
    assert result.metadata["log_gamma_nf"] == 0
    assert not result.metadata["twist"]


@pytest.mark.parametrize("p", [3, 5])
def test_plain_functional_equation_needs_the_twist(p):
    plain = hat_to_plain(antisymmetric_pair(p, 2))
    assert not plain.completed
    twisted = functional_equation_check(plain)
    untwisted = functional_equation_check(plain, use_twist=False)
    assert twisted.passed, twisted.errors
    assert twisted.metadata["twist"]
    assert not untwisted.passed
    assert IdentitySuite.needs_twist(twisted, untwisted).passed


def test_needs_twist_rejects_a_failing_twisted_line():
    plain = hat_to_plain(antisymmetric_pair(3, 2))
    untwisted = functional_equation_check(plain, use_twist=False)
    assert not IdentitySuite.needs_twist(untwisted, untwisted).passed


def test_twist_is_only_for_plain_ap_zero_pairs():
    with pytest.raises(ValueError):
        functional_equation_check(antisymmetric_pair(3, 2), use_twist=True)
