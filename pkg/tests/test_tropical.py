from fractions import Fraction

import numpy as np
import pytest

from services.errors import SporadicUnsupported, Tie, UnknownBranch
from services.log_matrix.hecke import HeckeData
from services.log_matrix.matrix import MatrixPoly
from services.padic.cyclotomic import CycloScalar
from services.padic.scalar import INFINITY
from services.tropical.growth import (
    GrowthParams,
    Star,
    f_star,
    kurihara_q,
    lambda_comparison,
    least_k,
    modesty_select,
    ordinary_lambda_from_modesty,
    rank_bound,
    region_classifier,
    sha_growth_elliptic,
    sha_growth_table,
    special_value_ord,
    totient,
)
from services.tropical.hmatrix import (
    c_power_valmat,
    c_valmat,
    cyclo_parameter,
    cyclotomic_at_zeta,
    h_closed_form,
    h_valmat,
)
from services.tropical.valmatrix import ValEntry, ValMatrix, trop_mul, val_matrix_of


@pytest.mark.parametrize(
    "p, n, star, expected",
    [
        (3, 1, Star.SHARP, 0),
        (3, 2, Star.FLAT, 2),
        (3, 3, Star.SHARP, 6),
        (3, 2, Star.SHARP, 6),
        (3, 1, Star.FLAT, 2),
        (2, 4, Star.FLAT, 5),
    ],
)
def test_kurihara_terms(p, n, star, expected):
    assert kurihara_q(p, n, star) == expected


def test_least_k():
    assert least_k(3, Fraction(1, 6)) == 1
    assert least_k(3, Fraction(1, 10)) == 2
    with pytest.raises(ValueError):
        least_k(3, 0)


def test_f_star_values():
    assert f_star(GrowthParams(3, 0, 4), Star.SHARP) == 0
    assert f_star(GrowthParams(3, 0, 4), Star.FLAT) == 2
    v = Fraction(1, 4)
    assert f_star(GrowthParams(3, v, 3), Star.SHARP) == 6
    assert f_star(GrowthParams(3, v, 3), Star.FLAT) == Fraction(13, 2)
    assert f_star(GrowthParams(3, v, 2), Star.SHARP) == Fraction(3, 2)
    assert f_star(GrowthParams(3, v, 2), Star.FLAT) == 2
    with pytest.raises(ValueError):
        f_star(GrowthParams(3, INFINITY, 3), Star.SHARP)


def test_boundary_needs_v2():
    params = GrowthParams(3, Fraction(1, 6), 4)
    assert params.on_boundary
    with pytest.raises(ValueError):
        params.delta
    assert GrowthParams(3, Fraction(1, 6), 4, Fraction(1, 2)).delta == Fraction(2, 27)


def test_modesty_follows_parity_at_ap_zero():
    assert modesty_select(3, 3, INFINITY, None, 0, 0, 1, 1) == Star.SHARP
    assert modesty_select(3, 2, INFINITY, None, 0, 0, 1, 1) == Star.FLAT


def test_modesty_tie():
    with pytest.raises(Tie):
        modesty_select(3, 2, 0, None, 0, 0, 2, 0)


def test_sha_growth_branches():
    assert sha_growth_elliptic(3, 0, 0, 0, 1, 1, 0, 3).growth == 7
    flat = sha_growth_elliptic(3, 0, 0, 0, 1, 1, 0, 2)
    assert (flat.star, flat.growth, flat.branch) == (Star.FLAT, 3, "parity")
    dominant = sha_growth_elliptic(3, 3, 0, 1, 0, 0, 0, 2)
    assert (dominant.star, dominant.growth, dominant.branch) == (Star.SHARP, 6, "sharp-dominant")
    ordinary = sha_growth_elliptic(3, 2, 0, 0, 0, 0, 0, 3)
    assert (ordinary.star, ordinary.growth) == (Star.SHARP, 0)


def test_sha_growth_unsupported_cases():
    with pytest.raises(SporadicUnsupported):
        sha_growth_elliptic(3, 2, 0, 0, 2, 0, 0, 3)
    with pytest.raises(UnknownBranch):
        sha_growth_elliptic(3, 3, Fraction(1, 2), 0, 0, 0, 0, 3)
    with pytest.raises(ValueError):
        sha_growth_elliptic(3, 0, 0, 0, 1, 1, 0, 1, n_floor=2)


def test_sha_growth_table_totals():
    table = sha_growth_table(3, 0, 0, 0, 1, 1, 0, n_max=4, n_floor=3, base_value=True)
    assert [row.n for row in table.rows] == [2, 3, 4]
    assert table.totals == {2: 3, 3: 10, 4: 31}
    assert not table.unsupported


def test_sha_growth_table_records_unsupported_rows():
    table = sha_growth_table(3, 2, 0, 0, 2, 0, 0, n_max=3, n_floor=2)
    assert table.rows == []
    assert set(table.unsupported) == {2, 3}
    assert table.totals == {}


def test_rank_bound():
    bound = rank_bound(3, 1, 5)
    assert (bound.nu_sharp, bound.nu_flat, bound.nu) == (0, 2, 2)
    assert bound.bound == 7
    assert bound.lambda_sum == 6
    with pytest.raises(ValueError):
        rank_bound(3, -1, 0)


def test_lambda_comparison():
    assert lambda_comparison(3, 0, 0, 1, 0) == (Star.SHARP, 1)
    assert lambda_comparison(3, 1, 0, 0, 5) == (Star.FLAT, 5)
    with pytest.raises(Tie):
        lambda_comparison(3, 0, 0, 2, 0)


def test_region_classifier():
    ap_zero = region_classifier(3, INFINITY, 0)
    assert (ap_zero.odd, ap_zero.even) == (Star.SHARP, Star.FLAT)
    assert ap_zero.describe() == "v=inf mu_sharp-mu_flat=0: odd n -> sharp, even n -> flat"
    ordinary = region_classifier(3, 0, 1)
    assert (ordinary.odd, ordinary.even) == (Star.FLAT, Star.FLAT)


def test_min_plus_product_matches_closed_form():
    v = Fraction(1, 4)
    product = c_valmat(v) @ c_valmat(v)
    closed = c_power_valmat(v, 2)
    assert product.values() == closed.values() == ((Fraction(1, 2), Fraction(1, 4)), (Fraction(5, 4), 1))
    assert product.flags() == ((False, False), (False, False))
    assert c_power_valmat(v, 0) == ValMatrix.identity()


def test_min_plus_ties_become_lower_bounds():
    zeros = ValMatrix.of([[0, 0], [0, 0]])
    assert (zeros @ zeros).flags() == ((True, True), (True, True))
    assert ValMatrix.identity() @ zeros == zeros


def test_entry_admits():
    assert ValEntry(Fraction(1), True).admits(ValEntry(Fraction(2)))
    assert not ValEntry(Fraction(1)).admits(ValEntry(Fraction(2)))
    assert ValEntry(INFINITY).admits(ValEntry(Fraction(30), True))


def test_h_valuations_at_ap_zero():
    result = h_valmat(3, 0, 2, 3)
    assert result.closed_form.values() == ((Fraction(1, 3), INFINITY), (INFINITY, Fraction(1, 9)))
    assert result.consistent
    assert result.tropical_sound


def test_h_valuations_ordinary():
    result = h_valmat(3, 1, 1, 2)
    assert result.closed_form.values() == ((0, 0), (Fraction(1, 3), INFINITY))
    assert result.consistent


def test_h_right_column_is_exact():
    assert h_closed_form(2, Fraction(3, 2), 4, 5).values() == (
        (Fraction(5, 8), Fraction(13, 8)), (Fraction(29, 16), Fraction(5, 16)))
    assert h_closed_form(3, Fraction(1, 2), 3, 4).values() == (
        (Fraction(11, 18), Fraction(1, 9)), (Fraction(10, 27), Fraction(29, 54)))
    assert h_closed_form(3, Fraction(1, 2), 3, 4).flags() == ((False, False), (False, False))


def test_h_right_column_first_level():
    # H^1 = C_1 has a zero lower-right entry
    assert h_closed_form(3, 1, 1, 2).values() == ((1, 0), (Fraction(1, 3), INFINITY))
    assert h_closed_form(3, Fraction(1, 18), 2, 3).values() == (
        (Fraction(1, 9), Fraction(1, 18)), (Fraction(1, 18) + Fraction(1, 9), Fraction(1, 9)))


def test_h_sporadic_flags_only_the_open_row():
    v = Fraction(1, 18)
    params = GrowthParams(3, v, 6)
    closed = h_closed_form(3, v, 5, 6, v2=params.sporadic_v2)
    assert closed.flags() == ((True, True), (False, False))
    generic = h_closed_form(3, v, 5, 6, v2=Fraction(1, 9))
    assert generic.flags() == ((False, False), (False, False))


@pytest.mark.parametrize(
    "p, v, levels",
    [
        (2, Fraction(3, 2), (2, 3, 4, 5)),
        (2, Fraction(1, 2), (2, 3, 4, 5)),
        (2, Fraction(2), (2, 3, 4, 5)),
        (3, Fraction(1, 2), (2, 3, 4)),
        (3, Fraction(1, 3), (2, 3, 4)),
        (3, Fraction(1), (2, 3, 4)),
        (5, Fraction(1), (2, 3)),
    ],
)
def test_h_closed_form_matches_exact_off_the_boundary(p, v, levels):
    a = p ** int(v) if v.denominator == 1 else cyclo_parameter(p, v, 30)
    for n in levels:
        result = h_valmat(p, a, n - 1, n)
        assert result.exact.values() == result.closed_form.values(), f"n={n}"
        assert result.closed_form.flags() == ((False, False), (False, False))
        assert result.consistent
        assert result.tropical_sound


def test_h_basic_closed_form_matches_exact():
    result = h_valmat(2, cyclo_parameter(2, Fraction(3, 2), 30), 2, 5)
    assert result.closed_form.values() == (
        (Fraction(1, 8), Fraction(3, 2)), (Fraction(3, 2) + Fraction(1, 16), Fraction(1, 16)))
    assert result.consistent


@pytest.mark.slow
@pytest.mark.parametrize("p, top", [(2, 6), (3, 6), (5, 5)])
@pytest.mark.parametrize("v", [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2)])
def test_h_closed_form_grid(p, top, v):
    a = p ** int(v) if v.denominator == 1 else cyclo_parameter(p, v, 30)
    for n in range(2, top + 1):
        result = h_valmat(p, a, n - 1, n)
        assert result.consistent, f"n={n}: exact {result.exact}, closed form {result.closed_form}"
        assert result.tropical_sound, f"n={n}"


def test_cyclotomic_values_at_deeper_roots_of_unity():
    assert cyclotomic_at_zeta(3, 2, 3, 10).ord() == Fraction(1, 3)
    assert cyclotomic_at_zeta(5, 1, 2, 10).ord() == Fraction(1, 5)
    assert cyclotomic_at_zeta(2, 1, 3, 10).ord() == Fraction(1, 4)


def test_special_value_branch_reproduces_the_ordinary_lambda():
    rng = np.random.default_rng(200)
    for _ in range(200):
        p = int(rng.choice([2, 3, 5, 7]))
        mu_sharp, mu_flat = (int(m) for m in rng.integers(0, 3, size=2))
        lam_flat = int(rng.integers(0, 12))
        lam_sharp = lam_flat + p - 1 if rng.random() < 0.2 else int(rng.integers(0, 12))
        invariants = (mu_sharp, mu_flat, lam_sharp, lam_flat)
        h = HeckeData(p, 1)
        try:
            expected = lambda_comparison(p, *invariants)
        except Tie:
            with pytest.raises(Tie):
                ordinary_lambda_from_modesty(p, *invariants)
            with pytest.raises(SporadicUnsupported):
                special_value_ord(h, *invariants, 6)
            continue
        assert ordinary_lambda_from_modesty(p, *invariants) == expected, invariants
        assert special_value_ord(h, *invariants, 6).star == expected[0], invariants


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_f_star_is_continuous_across_interval_boundaries(p, k):
    boundary = Fraction(1, 2 * p ** k)
    step = Fraction(1, 1000)
    for n in range(k + 2, k + 6):
        slope = totient(p, n) * (k + 1)
        for star in Star:
            at = f_star(GrowthParams(p, boundary, n, v2=2 * boundary), star)
            above = f_star(GrowthParams(p, boundary + step, n), star)
            below = f_star(GrowthParams(p, boundary - step, n), star)
            assert abs(above - at) <= slope * step, (n, star)
            assert abs(at - below) <= slope * step, (n, star)


def rational_matrix(rng, p):
    def entry():
        return Fraction(int(rng.integers(-9, 10)) * p ** int(rng.integers(0, 3)), p ** int(rng.integers(0, 2)))
    return MatrixPoly(entry(), entry(), entry(), entry())


def cyclotomic_matrix(rng, p, level):
    def entry():
        coeffs = rng.integers(-4, 5, size=int(rng.integers(1, 5))).tolist()
        return CycloScalar.from_T_poly(p, level, coeffs, 12).shift(int(rng.integers(0, 2)))
    return MatrixPoly(entry(), entry(), entry(), entry())


def test_valuation_shadow_is_sound_on_random_products():
    rng = np.random.default_rng(500)
    violations = []
    for trial in range(500):
        p = int(rng.choice([2, 3, 5]))
        if trial % 2:
            left, right = cyclotomic_matrix(rng, p, 2), cyclotomic_matrix(rng, p, 2)
        else:
            left, right = rational_matrix(rng, p), rational_matrix(rng, p)
        shadow = trop_mul(val_matrix_of(left, p), val_matrix_of(right, p))
        if not shadow.dominated_by(val_matrix_of(left @ right, p)):
            violations.append(trial)
    assert violations == []
