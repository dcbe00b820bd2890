"""
Matrix Construction
C_i, Ĉ_i, their row-reduced companions, the constant matrices C, A, Ã and the powers Y_j
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

from services.iwasawa.lambda_element import LambdaElement
from services.iwasawa.series import SeriesApprox
from services.log_matrix.cyclotomic import completed_cyclotomic, cyclotomic_series
from services.log_matrix.hecke import HeckeData
from services.log_matrix.matrix import MatrixPoly, fraction_inverse, fraction_matrix, fraction_power

logger = logging.getLogger(__name__)


def constant_C(h: HeckeData) -> MatrixPoly:
    return fraction_matrix([[h.a, 1], [-h.eps * h.p, 0]])


def constant_A(h: HeckeData) -> MatrixPoly:
    return fraction_matrix([[h.a, h.p], [-h.eps, 0]])


def constant_A_tilde(h: HeckeData) -> MatrixPoly:
    return fraction_matrix([[h.a, 1], [-h.eps, 0]])


def a_tilde_inverse(h: HeckeData) -> MatrixPoly:
    """[[0, −1/ε], [1, a_p/ε]], integral since ε = ±1"""
    return fraction_matrix([[0, -h.eps], [1, h.a * h.eps]])


def c_power(h: HeckeData, k: int) -> MatrixPoly:
    """C^k for any integer k; negative powers carry 1/(εp) denominators"""
    return fraction_power(constant_C(h), k)


def y_matrix(h: HeckeData, j: int) -> MatrixPoly:
    """Y_{2i} = p^{−i} A^{2i}, Y_{2i+1} = Y_{2i} Ã, for every integer j"""
    i, odd = divmod(j, 2)
    even = fraction_power(constant_A(h), 2 * i).map(lambda x: Fraction(x) / Fraction(h.p) ** i)
    return even @ constant_A_tilde(h) if odd else even


def _cyclotomic_entry(h: HeckeData, i: int, completed: bool, level: Optional[int], d: Optional[int]):
    if completed:
        return completed_cyclotomic(h.p, i, level=level, d=d, prec=h.prec)
    if level is not None:
        return LambdaElement.cyclotomic(h.p, i, level, h.prec)
    return cyclotomic_series(h.p, i, d)


def _constants(h: HeckeData, level: Optional[int], d: Optional[int]):
    if level is not None:
        make = lambda v: LambdaElement.from_int(h.p, level, v, h.prec)
    else:
        make = lambda v: SeriesApprox.from_values(h.p, [v], d)
    return make


def c_matrix(h: HeckeData, i: int, completed: bool = False, level: Optional[int] = None,
             d: Optional[int] = None) -> MatrixPoly:
    """C_i = [[a_p, 1], [−ε Φ_{p^i}, 0]] (Ĉ_i with Φ̂ when completed)"""
    make = _constants(h, level, d)
    phi = _cyclotomic_entry(h, i, completed, level, d)
    return MatrixPoly(make(h.a), make(1), phi * (-h.eps), make(0))


def c_lower_matrix(h: HeckeData, i: int, completed: bool = True, level: Optional[int] = None,
                   d: Optional[int] = None) -> MatrixPoly:
    """The row-reduced companion [[a_p, Φ̂_{p^i}], [−ε, 0]] used by the tandem recursion"""
    make = _constants(h, level, d)
    phi = _cyclotomic_entry(h, i, completed, level, d)
    return MatrixPoly(make(h.a), phi, make(-h.eps), make(0))


@dataclass
class MatrixSet:
    """Everything the sharp/flat machinery needs at one index i"""
    c_i: MatrixPoly
    c_hat_upper: MatrixPoly
    c_hat_lower: MatrixPoly
    C: MatrixPoly
    A: MatrixPoly
    A_tilde: MatrixPoly
    A_tilde_inverse: MatrixPoly
    C_inverse: MatrixPoly
    hecke: Any

    def y(self, j: int) -> MatrixPoly:
        return y_matrix(self.hecke, j)


def build_matrices(h: HeckeData, i: int, level: Optional[int] = None, d: Optional[int] = None) -> MatrixSet:
    """
    Build the matrices attached to index i

    Args:
        h: Hecke data
        i: Cyclotomic index (>= 1)
        level: Entries in Λ_level when given
        d: Otherwise entries are series truncated at T^d

    Returns:
        MatrixSet with exact constant matrices and inverses
    """
    if level is None and d is None:
        raise ValueError("either a level or a truncation order is required")
    logger.debug(f"building matrices for p={h.p}, a_p={h.a}, i={i}")
    return MatrixSet(
        c_i=c_matrix(h, i, completed=False, level=level, d=d),
        c_hat_upper=c_matrix(h, i, completed=True, level=level, d=d),
        c_hat_lower=c_lower_matrix(h, i, completed=True, level=level, d=d),
        C=constant_C(h),
        A=constant_A(h),
        A_tilde=constant_A_tilde(h),
        A_tilde_inverse=a_tilde_inverse(h),
        C_inverse=fraction_inverse(constant_C(h)),
        hecke=h,
    )
