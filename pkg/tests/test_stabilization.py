from fractions import Fraction

import pytest

from services.errors import NotStabilized, Undetermined
from services.iwasawa.lambda_element import LambdaElement
from services.iwasawa.series import SeriesApprox
from services.log_matrix.hecke import HeckeData
from services.mazur_tate.theta import QueueSequence, queue_from_table
from services.sharp_flat.extraction import extract
from services.sharp_flat.pair import SharpFlatPair
from services.sharp_flat.stabilization import queue_invariants_pm, stabilize_pairs

PREC = 12


def kurihara_queue(p, levels, scale_even=1, extra=0, extra_even=None):
    """Θ_n = c·T^(⌊p^n/(p+1)⌋ + e), c = scale_even and e = extra_even on even n, c = 1 and e = extra on odd n"""
    extra_even = extra if extra_even is None else extra_even
    thetas = []
    for n in range(levels):
        degree = p ** n // (p + 1) + (extra_even if n % 2 == 0 else extra)
        coeffs = [0] * degree + [scale_even if n % 2 == 0 else 1]
        thetas.append(LambdaElement.from_poly(p, n, coeffs, PREC))
    return QueueSequence(thetas, HeckeData(p, 0, prec=PREC))


def test_parity_invariants():
    result = queue_invariants_pm(kurihara_queue(3, 6, extra=1))
    assert (result.mu_plus, result.mu_minus) == (0, 0)
    assert (result.lam_plus, result.lam_minus) == (1, 1)
    # T vanishes in Λ_0, so level 0 drops out
    assert sorted(result.levels) == [1, 2, 3, 4, 5]


def test_unequal_mu_leaves_lambda_undefined():
    result = queue_invariants_pm(kurihara_queue(3, 6, scale_even=3))
    assert (result.mu_plus, result.mu_minus) == (Fraction(0), Fraction(1))
    assert result.lam_plus is None and result.lam_minus is None


def test_signs_exchanged_at_two():
    result = queue_invariants_pm(kurihara_queue(2, 6, scale_even=2))
    # odd levels carry mu = 0, even levels mu = 1; p = 2 swaps the labels
    assert (result.mu_plus, result.mu_minus) == (Fraction(1), Fraction(0))


def test_plus_lambda_is_read_on_odd_levels():
    result = queue_invariants_pm(kurihara_queue(3, 6, extra=1, extra_even=5))
    assert (result.lam_plus, result.lam_minus) == (1, 5)


def test_lambda_signs_exchanged_at_two():
    result = queue_invariants_pm(kurihara_queue(2, 6, extra=1, extra_even=2))
    assert (result.mu_plus, result.mu_minus) == (0, 0)
    assert (result.lam_plus, result.lam_minus) == (2, 1)


def test_curve_37a_queue_invariants_match_the_pair(e37a_table):
    result = queue_invariants_pm(queue_from_table(e37a_table, 0, prec=PREC))
    assert (result.mu_plus, result.mu_minus) == (0, 0)
    assert (result.lam_plus, result.lam_minus) == (1, 5)


def test_too_few_levels():
    with pytest.raises(NotStabilized):
        queue_invariants_pm(kurihara_queue(3, 2))


def test_unsettled_lambda():
    q = kurihara_queue(3, 6)
    q.thetas[4] = LambdaElement.from_poly(3, 4, [0] * 25 + [1], PREC)
    with pytest.raises(NotStabilized):
        queue_invariants_pm(q)


def test_stabilized_pair(synthetic_p3):
    q = queue_from_table(synthetic_p3, 0)
    pairs = [extract(q.truncated(n), completed=False)[0] for n in (2, 3)]
    limit = stabilize_pairs(pairs)
    assert limit.level is None
    assert not limit.completed
    assert isinstance(limit.sharp, SeriesApprox)
    assert isinstance(limit.flat, SeriesApprox)


def test_stabilization_needs_two_levels(synthetic_p3):
    pair, _ = extract(queue_from_table(synthetic_p3, 0), completed=False)
    with pytest.raises(Undetermined):
        stabilize_pairs([pair])


def test_mixed_flavours_are_rejected():
    h = HeckeData(3, 0, prec=PREC)
    upsilon = (LambdaElement.from_poly(3, 2, [1, 1], PREC), LambdaElement.from_poly(3, 2, [2], PREC))
    pairs = [SharpFlatPair(*upsilon, h, True, 0, 2), SharpFlatPair(*upsilon, h, False, 0, 3)]
    with pytest.raises(ValueError):
        stabilize_pairs(pairs)
