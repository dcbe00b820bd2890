"""Tropical valuation calculus and the growth formulas built on it"""
from .valmatrix import (
    ValEntry,
    ValMatrix,
    cyclotomic_profile,
    series_profile,
    trop_mul,
    trop_power,
    trop_row,
    val_matrix_of,
)
from .growth import (
    GrowthParams,
    RankBound,
    RegionClass,
    ShaGrowthReport,
    ShaGrowthTable,
    SpecialValuePrediction,
    Star,
    ap_zero_tail,
    f_star,
    kurihara_q,
    lambda_comparison,
    least_k,
    modesty_select,
    modesty_totals,
    ordinary_lambda_from_modesty,
    rank_bound,
    region_classifier,
    sha_growth_elliptic,
    sha_growth_table,
    special_value_ord,
    sporadic_predicate,
    totient,
)
from .hmatrix import (
    HValuation,
    basic_closed_form,
    c_power_valmat,
    c_valmat,
    cyclo_parameter,
    cyclotomic_at_zeta,
    h_closed_form,
    h_exact_matrix,
    h_exact_valmat,
    h_tropical_valmat,
    h_valmat,
    parameter_ord,
    v_m_closed_form,
    v_m_compute,
)

__all__ = [
    'ValEntry',
    'ValMatrix',
    'cyclotomic_profile',
    'series_profile',
    'trop_mul',
    'trop_power',
    'trop_row',
    'val_matrix_of',
    'GrowthParams',
    'RankBound',
    'RegionClass',
    'ShaGrowthReport',
    'ShaGrowthTable',
    'SpecialValuePrediction',
    'Star',
    'ap_zero_tail',
    'f_star',
    'kurihara_q',
    'lambda_comparison',
    'least_k',
    'modesty_select',
    'modesty_totals',
    'ordinary_lambda_from_modesty',
    'rank_bound',
    'region_classifier',
    'sha_growth_elliptic',
    'sha_growth_table',
    'special_value_ord',
    'sporadic_predicate',
    'totient',
    'HValuation',
    'basic_closed_form',
    'c_power_valmat',
    'c_valmat',
    'cyclo_parameter',
    'cyclotomic_at_zeta',
    'h_closed_form',
    'h_exact_matrix',
    'h_exact_valmat',
    'h_tropical_valmat',
    'h_valmat',
    'parameter_ord',
    'v_m_closed_form',
    'v_m_compute',
]
