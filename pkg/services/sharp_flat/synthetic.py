"""
Synthetic Tables
Modular-symbol tables reverse-engineered from a chosen Υ, so that the trivial-character queue
sequence is its forward composition
"""
import logging
from fractions import Fraction
from math import gcd
from typing import Dict, List, Tuple

from services.iwasawa.lambda_element import LambdaElement
from services.log_matrix.hecke import HeckeData
from services.mazur_tate.table import ModularSymbolTable, units_mod
from services.padic.characters import gamma_generator, level_exponent
from services.sharp_flat.tower import TowerPolynomial

logger = logging.getLogger(__name__)


def queue_thetas(upsilon: Tuple[TowerPolynomial, TowerPolynomial], h: HeckeData, nmax: int) -> List[LambdaElement]:
    """
    Θ_0, …, Θ_nmax of Υ = (y_1, y_2) under the plain matrices

    Θ_0 = y_2, Θ_1 = y_1 and Θ_{m+1} = a_p·Θ_m − ε·Φ_{p^m}·Θ_{m−1}, each reduced into Λ_m.
    """
    u, w = upsilon
    raw = [w, u]
    for i in range(1, nmax):
        u, w = u * h.a - w.times_cyclotomic(i) * h.eps, u
        raw.append(u)
    return [z.to_lambda(m) for m, z in enumerate(raw[:nmax + 1])]


def _weights(theta: LambdaElement) -> List[Fraction]:
    """Group-ring coefficients of θ as exact rationals (symmetric residues over p^den)"""
    modulus = theta.modulus
    scale = theta.p ** theta.den
    return [Fraction(w - modulus if w > modulus // 2 else w, scale) for w in theta.to_group_basis()]


def synthetic_table_from_pair(upsilon: Tuple[TowerPolynomial, TowerPolynomial], h: HeckeData,
                              nmax: int) -> ModularSymbolTable:
    """
    A + table whose ω^0 queue sequence is the forward composition of Υ

    The group-ring coefficient w_k of Θ_n is split evenly over the fiber
    representatives ±γ^k mod p^N and units outside ±γ^ℤ carry 0, so
    θ_n(ω^0) = Θ_n. The bottom symbol makes the level-1 relation hold:
    #Δ·[b] = ε(a_p·y_2(0) − y_1(0)).

    Args:
        upsilon: (y_1, y_2) as integer tower polynomials without group-like shift
        h: Hecke data (p, a_p, ε, precision)
        nmax: Top Λ-level

    Returns:
        ModularSymbolTable with its bottom level
    """
    if any(z.shift for z in upsilon):
        raise ValueError("synthetic tables need plain polynomials")
    p = h.p
    gamma = gamma_generator(p)
    entries: Dict[Tuple[int, int], Fraction] = {}
    for n, theta in enumerate(queue_thetas(upsilon, h, nmax)):
        big_n = level_exponent(p, n)
        modulus = p ** big_n
        entries.update({(big_n, a): Fraction(0) for a in units_mod(p, big_n)})
        for k, w in enumerate(_weights(theta)):
            a = pow(gamma, k, modulus)
            entries[(big_n, a)] = entries[(big_n, (-a) % modulus)] = w / 2
    y1, y2 = upsilon
    bottom = (y2.value_at_zero() * h.a - y1.value_at_zero()) * h.eps
    bottom_value = Fraction(bottom.centered(), p ** bottom.den)
    if p == 2:
        entries[(1, 1)] = bottom_value / 2
    else:
        entries[(0, 0)] = bottom_value / (p - 1)
    bound = 1
    for value in entries.values():
        bound = bound * value.denominator // gcd(bound, value.denominator)
    logger.debug(f"built a synthetic table: p={p}, a_p={h.a}, nmax={nmax}, {len(entries)} entries")
    return ModularSymbolTable(p, nmax, 1, h, "omega_f", bound, entries, origin="synthetic")
