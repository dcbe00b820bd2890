"""
Cyclotomic Factors
Φ_{p^i}(1+T) and its completion Φ̂ = Φ·(1+T)^{−½p^{i−1}(p−1)} at finite level and as truncated series
"""
from fractions import Fraction
from math import comb
from typing import Optional, Tuple

from services.iwasawa.lambda_element import LambdaElement
from services.iwasawa.series import SeriesApprox
from services.padic.polyarith import cyclotomic_T_trunc
from services.padic.scalar import INFINITY


def cyclotomic_poly(p: int, i: int) -> Tuple[int, ...]:
    """Exact coefficients of Φ_{p^i}(1+T) = Σ_{t<p} (1+T)^{t p^{i−1}}"""
    if i < 1:
        raise ValueError(f"cyclotomic index must be >= 1, got {i}")
    return cyclotomic_T_trunc(p, i, p ** i)


def cyclotomic_degree(p: int, i: int) -> int:
    return p ** (i - 1) * (p - 1)


def hat_shift(p: int, i: int) -> int:
    """Completion exponent ½p^{i−1}(p−1); zero for p = 2, i = 1 where no completion is made"""
    if p == 2 and i == 1:
        return 0
    return p ** (i - 1) * (p - 1) // 2


def cyclotomic_series(p: int, i: int, d: int) -> SeriesApprox:
    tail = 0 if cyclotomic_degree(p, i) > d else INFINITY
    return SeriesApprox.from_values(p, cyclotomic_T_trunc(p, i, d), d, tail=tail)


def completed_cyclotomic(p: int, i: int, level: Optional[int] = None, d: Optional[int] = None,
                         prec: int = 40):
    """
    Φ̂_{p^i}

    Args:
        p: The prime
        i: Cyclotomic index (>= 1)
        level: Return an element of Λ_level when given
        d: Otherwise return the series truncated at T^d

    Returns:
        LambdaElement or SeriesApprox
    """
    h = hat_shift(p, i)
    if level is not None:
        return LambdaElement.cyclotomic(p, i, level, prec) * LambdaElement.group_like(p, level, -h, prec)
    if d is None:
        raise ValueError("either a level or a truncation order is required")
    return cyclotomic_series(p, i, d) * SeriesApprox.group_like(p, -h, d)


def cyclotomic_value_ord(p: int, i: int, n: int) -> Fraction:
    """
    ord_p Φ_{p^i}(ζ_{p^n}) for i != n

    p when i > n (valuation 1); p^{i−1}(p−1)/(p^{n−1}(p−1)) = p^{i−n} when i < n.
    """
    if i == n:
        raise ValueError("Φ_{p^n} vanishes at ζ_{p^n}")
    if i > n:
        return Fraction(1)
    return Fraction(1, p ** (n - i))


def omega_over_T_coefficient(p: int, n: int, k: int) -> Fraction:
    """Coefficient of T^k in Π_{i≤n} Φ_{p^i}(1+T)/p = ((1+T)^{p^n} − 1)/(p^n T)"""
    return Fraction(comb(p ** n, k + 1), p ** n)
