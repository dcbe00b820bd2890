"""
Zeros of the Sharp/Flat Pair
Orders of vanishing at T = 0 and at ζ_{p^m} − 1, the equiroots comparison of
L_α and L_β, the gcd structure of (L♯, L♭) and the common-zero report
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from services.errors import Undetermined
from services.iwasawa.lambda_element import LambdaElement, ord_at_origin
from services.log_matrix.cyclotomic import cyclotomic_degree
from services.log_matrix.hecke import HeckeData
from services.log_matrix.matrix import MatrixPoly
from services.padic.scalar import INFINITY, ValQ
from services.sharp_flat.extraction import compose_upper, pair_components
from services.sharp_flat.pair import SharpFlatPair
from services.sharp_flat.tower import TowerPolynomial
from services.validators.check_result import CheckResult

logger = logging.getLogger(__name__)

Vector = Tuple[TowerPolynomial, TowerPolynomial]


def component_order(z: TowerPolynomial, m: int) -> ValQ:
    """order_at(m), INFINITY for a component that vanishes to working precision"""
    if z.is_zero:
        return INFINITY
    return z.order_at(m)


def vector_order(vector: Vector, m: int) -> ValQ:
    """
    min of the component orders at ζ_{p^m} − 1 (at T when m = 0)

    Raises:
        Undetermined: Both components vanish to working precision
    """
    order = min(component_order(z, m) for z in vector)
    if order == INFINITY:
        raise Undetermined(f"the vector vanishes to working precision at level {m}")
    return order


def tower_vector(pair: SharpFlatPair) -> Vector:
    sharp, flat = pair_components(pair)
    return TowerPolynomial.from_lambda(sharp), TowerPolynomial.from_lambda(flat)


def _lambda_order_at_zero(x: LambdaElement) -> ValQ:
    try:
        return ord_at_origin(x)
    except Undetermined:
        return INFINITY


@dataclass
class OrdersAtZero:
    """r_p^♯, r_p^♭ and r_p^♮ = min(r_p^♯, r_p^♭)"""
    sharp: ValQ
    flat: ValQ
    natural: ValQ


def orders_at_zero(pair: SharpFlatPair) -> OrdersAtZero:
    """
    Raises:
        Undetermined: Both components vanish to working precision
    """
    sharp, flat = (_lambda_order_at_zero(x) for x in pair_components(pair))
    natural = min(sharp, flat)
    if natural == INFINITY:
        raise Undetermined("both components vanish modulo the working precision")
    return OrdersAtZero(sharp, flat, natural)


@dataclass
class VanishingRow:
    """One point ζ_{p^m} − 1 (T = 0 for m = 0)"""
    m: int
    sharp: ValQ
    flat: ValQ
    d_an: int
    ord_alpha: int
    ord_beta: Optional[int] = None

    @property
    def equiroots(self) -> Optional[bool]:
        return None if self.ord_beta is None else self.ord_alpha == self.ord_beta


def _root_coordinates(vector: Vector, h: HeckeData) -> Dict[str, Vector]:
    """
    Z_p-coordinates of x − βy and x − αy in the basis (1, α)

    x − βy = (x − a_p·y) + α·y and x − αy = x + α·(−y).
    """
    x, y = vector
    return {"alpha": (x - y * h.a, y), "beta": (x, -y)}


def vanishing_orders(pair: SharpFlatPair, m_max: Optional[int] = None) -> List[VanishingRow]:
    """
    Orders of Υ̂·Ĉ_1⋯Ĉ_n (Υ̂·C_1⋯C_n for a plain pair) at ζ_{p^m} − 1, 0 <= m <= m_max

    d_m^{an} is the vector order. In the supersingular case ord L_α and
    ord L_β come from the coordinates of x − βy and x − αy over Z_p[α],
    where Φ_{p^m} divides u + αv exactly when it divides u and v. In the
    ordinary case only the α-column, embedded in Z_p[T], is examined.

    Args:
        pair: A finite-level pair
        m_max: Last point (the pair's level by default)

    Returns:
        One VanishingRow per m

    Raises:
        Undetermined: A vector vanishes to working precision
        ValueError: m_max beyond the pair's level
    """
    h, n = pair.hecke, pair.level
    m_max = n if m_max is None else m_max
    if m_max > n:
        raise ValueError(f"points of level {m_max} are not visible at level {n}")
    vector = compose_upper(tower_vector(pair), h, n, pair.completed)
    coords = _root_coordinates(vector, h)
    rows = []
    for m in range(m_max + 1):
        d_an = vector_order(vector, m)
        sharp, flat = (component_order(z, m) for z in vector)
        if h.supersingular:
            ord_alpha = vector_order(coords["alpha"], m)
            ord_beta = vector_order(coords["beta"], m)
        else:
            x, y = vector
            ord_alpha = component_order(x - y * h.field.beta.embed(), m)
            ord_beta = None
        row = VanishingRow(m, sharp, flat, d_an, ord_alpha, ord_beta)
        if row.equiroots is False:
            logger.warning(f"ord L_alpha != ord L_beta at level {m}: {ord_alpha} vs {ord_beta}")
        logger.debug(f"level {m}: d_an={d_an}, ord_alpha={ord_alpha}, ord_beta={ord_beta}")
        rows.append(row)
    return rows


def lemma_branch(f: Vector, a: int, m: int) -> Tuple[str, ValQ, bool]:
    """
    Which case of the one-step order comparison applies for f = g·C_m at ζ_{p^m} − 1

    Returns:
        (branch, predicted bound on ord g_2, whether the bound is exact)
    """
    f1, f2 = (component_order(z, m) for z in f)
    if f1 < f2:
        return "f1<f2", f1 - 1, True
    if a != 0 and f1 == f2:
        return "f1=f2,a!=0", f1 - 1, False
    if a != 0:
        return "f1>f2,a!=0", f2 - 1, True
    return "f1>=f2,a=0", f1 - 1, True


@dataclass
class GcdRow:
    m: int
    d_an: int
    exponent: ValQ
    consistent: bool
    branch: str
    branch_holds: bool
    degree: int = 0


@dataclass
class GcdStructure:
    """gcd(L♯, L♭) = T^{t_exponent}·Π Φ_{p^m}^{ε_m − 1}·(rest)"""
    t_exponent: ValQ
    rows: List[GcdRow] = field(default_factory=list)

    @property
    def cyclotomic_degree(self) -> int:
        return sum(0 if r.exponent == INFINITY else r.exponent * r.degree for r in self.rows)


def gcd_structure(pair: SharpFlatPair, m_max: Optional[int] = None) -> Tuple[GcdStructure, CheckResult]:
    """
    Power of T and cyclotomic exponents ε_m − 1 of gcd(L♯, L♭)

    ε_m − 1 is the vector order of Υ̂ at ζ_{p^m} − 1 and must be d_m^{an} − 1
    or d_m^{an} when d_m^{an} >= 1. Each level records which case of the
    one-step comparison between f = Υ̂·C_1⋯C_m and g = Υ̂·C_1⋯C_{m−1} fired.

    Returns:
        (GcdStructure, CheckResult); the check fails on an exponent outside
        {d_m^{an} − 1, d_m^{an}} or a branch whose prediction does not hold

    Raises:
        Undetermined: From the order computations
    """
    h, n = pair.hecke, pair.level
    m_max = n if m_max is None else m_max
    upsilon = tower_vector(pair)
    rows_by_m = {r.m: r for r in vanishing_orders(pair, m_max)}
    structure = GcdStructure(orders_at_zero(pair).natural)
    result = CheckResult(name=f"gcd_structure({pair.label})", passed=True)
    for m in range(1, m_max + 1):
        d_an = rows_by_m[m].d_an
        exponent = vector_order(upsilon, m)
        g = compose_upper(upsilon, h, m - 1, pair.completed)
        f = compose_upper(upsilon, h, m, pair.completed)
        branch, bound, exact = lemma_branch(f, h.a, m)
        g2 = component_order(g[1], m)
        holds = g2 == bound if exact else g2 >= bound
        if component_order(g[0], m) != component_order(f[1], m):
            holds = False
        consistent = exponent in (d_an - 1, d_an) if d_an >= 1 else exponent == 0
        if vector_order(f, m) != d_an:
            result.fail(f"level {m}: the partial product has order {vector_order(f, m)}, the full one {d_an}")
        if not consistent:
            result.fail(f"level {m}: exponent {exponent} is not in {{d_an - 1, d_an}} for d_an={d_an}")
        if not holds:
            result.fail(f"level {m}: branch {branch} predicts ord g_2 {'=' if exact else '>='} {bound}, got {g2}")
        structure.rows.append(GcdRow(m, d_an, exponent, consistent, branch, holds, cyclotomic_degree(h.p, m)))
    result.metadata["t_exponent"] = structure.t_exponent
    return structure, result


@dataclass
class GreenbergReport:
    """Common zeros of L_α and L_β"""
    bound_off_roots: int
    lambda_min: int
    t_exponent: ValQ
    root_rows: List[Tuple[int, int]]
    assumption: str = "finiteness of zeros at roots of unity beyond the computed levels is assumed (Rohrlich)"


def greenberg_report(pair: SharpFlatPair, m_max: Optional[int] = None) -> GreenbergReport:
    """
    Common zeros off the roots of unity are zeros of gcd(L♯, L♭), so their
    number is at most min(λ♯, λ♭) less the cyclotomic and T-power part of the gcd

    Args:
        pair: A finite-level supersingular pair
        m_max: Last root-of-unity level examined

    Returns:
        GreenbergReport; root_rows lists (m, d_m^{an}) and the finiteness
        beyond m_max is recorded as an assumption

    Raises:
        ValueError: p is ordinary
    """
    if not pair.hecke.supersingular:
        raise ValueError("common zeros of L_alpha and L_beta are only compared for supersingular p")
    invariants = pair.invariants()
    lambda_min = min(invariants["sharp"].lam, invariants["flat"].lam)
    structure, _ = gcd_structure(pair, m_max)
    known = structure.cyclotomic_degree + (0 if structure.t_exponent == INFINITY else structure.t_exponent)
    bound = max(lambda_min - known, 0)
    roots = [(r.m, r.d_an) for r in structure.rows]
    logger.info(f"Common zeros off roots of unity: at most {bound} ({pair.label})")
    return GreenbergReport(bound, lambda_min, structure.t_exponent, roots)


def conjugation_order_check(vector: Vector, matrix: MatrixPoly, m: int) -> CheckResult:
    """
    ord (g·M) = ord g at ζ_{p^m} − 1 whenever det M does not vanish there

    Raises:
        ValueError: det M vanishes at the point
    """
    det = matrix.det()
    if component_order(det, m) != 0:
        raise ValueError(f"det M vanishes at level {m}")
    image = matrix.row_times(vector)
    result = CheckResult(name=f"conjugation_order(m={m})", passed=True)
    before, after = vector_order(vector, m), vector_order(image, m)
    result.metadata.update({"before": before, "after": after})
    if before != after:
        result.fail(f"order changes from {before} to {after}")
    return result

