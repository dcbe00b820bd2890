"""Logarithm matrix: cyclotomic factors, the matrices C_i/Ĉ_i/C/A/Ã and partial Log products"""
from .hecke import HeckeData
from .matrix import MatrixPoly, fraction_inverse, fraction_matrix, fraction_power
from .cyclotomic import (
    completed_cyclotomic,
    cyclotomic_degree,
    cyclotomic_poly,
    cyclotomic_series,
    cyclotomic_value_ord,
    hat_shift,
)
from .build import (
    MatrixSet,
    a_tilde_inverse,
    build_matrices,
    c_lower_matrix,
    c_matrix,
    c_power,
    constant_A,
    constant_A_tilde,
    constant_C,
    y_matrix,
)
from .log_product import (
    LogPartialProduct,
    QuadSeries,
    cyclotomic_values_check,
    det_identity_check,
    deviation_constant,
    diagonalization_check,
    fe_units,
    fe_units_check,
    half_log_decomposition_check,
    half_logs,
    hat_invariance_check,
    hat_plain_at_zero_check,
    hat_units,
    log_over_T,
    log_partial_product,
    roots_matrix,
    stabilization_profile,
    xi_remainder,
)

__all__ = [
    'HeckeData',
    'MatrixPoly',
    'fraction_inverse',
    'fraction_matrix',
    'fraction_power',
    'completed_cyclotomic',
    'cyclotomic_degree',
    'cyclotomic_poly',
    'cyclotomic_series',
    'cyclotomic_value_ord',
    'hat_shift',
    'MatrixSet',
    'a_tilde_inverse',
    'build_matrices',
    'c_lower_matrix',
    'c_matrix',
    'c_power',
    'constant_A',
    'constant_A_tilde',
    'constant_C',
    'y_matrix',
    'LogPartialProduct',
    'QuadSeries',
    'cyclotomic_values_check',
    'det_identity_check',
    'deviation_constant',
    'diagonalization_check',
    'fe_units',
    'fe_units_check',
    'half_log_decomposition_check',
    'half_logs',
    'hat_invariance_check',
    'hat_plain_at_zero_check',
    'hat_units',
    'log_over_T',
    'log_partial_product',
    'roots_matrix',
    'stabilization_profile',
    'xi_remainder',
]
