"""
Mazur–Tate Elements and Queue Sequences
Tame-isotypical components θ_n(ω^i, T) of the Mazur–Tate elements and the queue relation they satisfy
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from services.errors import RelationViolated
from services.iwasawa.lambda_element import LambdaElement
from services.log_matrix.hecke import HeckeData
from services.mazur_tate.table import ModularSymbolTable, units_mod
from services.padic.characters import discrete_log_gamma, level_exponent, teichmuller_int
from services.padic.scalar import PadicScalar
from services.validators.check_result import CheckResult

logger = logging.getLogger(__name__)


def tame_order(p: int) -> int:
    """#Δ: p − 1 for odd p, 2 for p = 2"""
    return 2 if p == 2 else p - 1


def character_sign(p: int, i: int) -> int:
    """ω^i(−1) = (−1)^i"""
    return -1 if i % 2 else 1


def _group_weights(p: int, n: int, scalars: Dict[int, PadicScalar], i: int, prec: int):
    """Numerators on (1+T)^k and the common denominator exponent for Σ_a s_a ω^i(a) (1+T)^{log_γ a}"""
    den = max((s.den for s in scalars.values()), default=0)
    modulus = p ** (prec + den)
    weights = [0] * (p ** n)
    for a, s in scalars.items():
        if s.is_zero and s.den == 0:
            continue
        omega = pow(teichmuller_int(a, p, prec + den), i, modulus)
        k = discrete_log_gamma(a, p, n)
        weights[k] = (weights[k] + s.num * p ** (den - s.den) * omega) % modulus
    return weights, den


def group_ring_sum(p: int, n: int, values: Dict[int, Fraction], i: int, prec: int) -> LambdaElement:
    """
    Σ_a values[a]·ω^i(a)·(1+T)^{log_γ a} in Λ_n

    The values are indexed by units modulo p^N with N = level_exponent(p, n).
    """
    scalars = {a: PadicScalar.from_fraction(p, v, prec) for a, v in values.items()}
    return scalar_group_sum(p, n, scalars, i, prec)


def scalar_group_sum(p: int, n: int, scalars: Dict[int, PadicScalar], i: int, prec: int) -> LambdaElement:
    """group_ring_sum for p-adic weights; the result carries the weakest weight precision"""
    prec = min([prec] + [s.prec for s in scalars.values()])
    weights, den = _group_weights(p, n, scalars, i, prec)
    raw = LambdaElement.from_group_basis(p, n, weights, prec + den)
    return LambdaElement(p, n, raw.lift(), prec, den)


@dataclass
class MazurTateElement:
    """
    ϑ_N as its table row together with computed tame components

    components[i] is θ_n(ω^i, T) = Σ_a [a/p^N] ω^i(a) (1+T)^{log_γ a}
    (the sum is not divided by #Δ).
    """
    p: int
    level: int
    big_n: int
    values: Dict[int, Fraction]
    components: Dict[int, LambdaElement] = field(default_factory=dict)

    def component(self, i: int, prec: int) -> LambdaElement:
        key = i % tame_order(self.p)
        if key not in self.components:
            self.components[key] = group_ring_sum(self.p, self.level, self.values, key, prec)
        return self.components[key]


def build_theta(table: ModularSymbolTable, i: int, prec: Optional[int] = None,
                strict_sign: bool = True) -> List[MazurTateElement]:
    """
    Mazur–Tate elements θ_0, …, θ_{n_max} for the tame character ω^i

    Args:
        table: Modular-symbol table
        i: Tame index
        prec: Working precision (defaults to the table's Hecke data)
        strict_sign: Require sign(ω^i) to match the table sign

    Returns:
        One MazurTateElement per Λ-level with component i filled in
    """
    prec = prec if prec is not None else table.hecke.prec
    if strict_sign and character_sign(table.p, i) != table.sign:
        raise ValueError(f"ω^{i} has sign {character_sign(table.p, i):+d} but the table holds "
                         f"{'+' if table.sign > 0 else '-'} symbols")
    out = []
    for n in range(table.nmax + 1):
        big_n = level_exponent(table.p, n)
        element = MazurTateElement(table.p, n, big_n, table.level_values(big_n))
        element.component(i, prec)
        out.append(element)
    logger.info(f"Built Mazur-Tate elements for i={i}: levels 0..{table.nmax}")
    return out


def bottom_element(table: ModularSymbolTable, i: int, prec: Optional[int] = None) -> Optional[LambdaElement]:
    """
    The Λ_0 term standing for νΘ_{−1} in the level-1 queue relation

    #Δ·[b] when ω^i is trivial on Δ and 0 otherwise, with [b] = [0/1] for odd p
    and [1/2] for p = 2. None when the table has no bottom levels.
    """
    prec = prec if prec is not None else table.hecke.prec
    p = table.p
    below = level_exponent(p, 0) - 1
    if not table.has_level(below):
        return None
    if i % tame_order(p):
        return LambdaElement.zero(p, 0, prec)
    residue = 1 if below else 0
    value = tame_order(p) * table.value(below, residue)
    return LambdaElement.from_fractions(p, 0, [value], prec)


@dataclass
class QueueSequence:
    """Θ_0, …, Θ_n with Θ_m ∈ Λ_m; `bottom` stands for νΘ_{−1} ∈ Λ_0 when known"""
    thetas: List[LambdaElement]
    hecke: HeckeData
    tame: int = 0
    bottom: Optional[LambdaElement] = None

    @property
    def top(self) -> int:
        return len(self.thetas) - 1

    def nu_of(self, m: int) -> LambdaElement:
        """νΘ_m ∈ Λ_{m+1}; m = −1 gives the bottom term"""
        if m < 0:
            if self.bottom is None:
                raise ValueError("the queue sequence carries no bottom term")
            return self.bottom
        return self.thetas[m].norm_nu()

    def truncated(self, n: int) -> "QueueSequence":
        return QueueSequence(self.thetas[:n + 1], self.hecke, self.tame, self.bottom)


def queue_from_table(table: ModularSymbolTable, i: int, prec: Optional[int] = None) -> QueueSequence:
    """
    The ω^i queue sequence Θ_0, …, Θ_nmax of a table

    Args:
        table: Modular-symbol table
        i: Tame index
        prec: p-adic digits (the table's Hecke precision by default)

    Returns:
        QueueSequence carrying the bottom term when the table has its bottom level
    """
    elements = build_theta(table, i, prec)
    thetas = [e.component(i, prec if prec is not None else table.hecke.prec) for e in elements]
    return QueueSequence(thetas, table.hecke, i, bottom_element(table, i, prec))


def validate_queue(q: QueueSequence) -> CheckResult:
    """
    Check πΘ_m = a_pΘ_{m−1} − ε νΘ_{m−2} and the matrix form
    π(Θ_m, νΘ_{m−1}) = (Θ_{m−1}, νΘ_{m−2})·A

    The level-1 relation is included when the bottom term is known.

    Raises:
        RelationViolated: At the first failing level
    """
    if len(q.thetas) < 3:
        raise ValueError(f"queue validation needs at least three levels, got {len(q.thetas)}")
    h = q.hecke
    result = CheckResult(name=f"queue(p={h.p}, a_p={h.a}, i={q.tame})", passed=True)
    start = 1 if q.bottom is not None else 2
    for m in range(start, q.top + 1):
        lhs = q.thetas[m].project_pi()
        rhs = q.thetas[m - 1] * h.a - q.nu_of(m - 2) * h.eps
        if not lhs == rhs:
            raise RelationViolated(m, "πΘ_m differs from a_pΘ_{m-1} - ε νΘ_{m-2}")
        # second column of A: π∘ν is multiplication by p
        if not q.nu_of(m - 1).project_pi() == q.thetas[m - 1] * h.p:
            raise RelationViolated(m, "πνΘ_{m-1} differs from pΘ_{m-1}")
        logger.debug(f"queue relation holds at level {m}")
    result.metadata.update({"levels": list(range(start, q.top + 1)), "bottom_used": q.bottom is not None})
    logger.info(f"Queue relation verified on levels {start}..{q.top}")
    return result


def symmetry_check(table: ModularSymbolTable) -> CheckResult:
    """
    [−a/p^N] = ±[a/p^N] on every level; equivalently
    ω^i(a)[a/p^N] = ±ω^i(−a)[−a/p^N] for sign(ω^i) = ±
    """
    result = CheckResult(name=f"symmetry(p={table.p}, sign={table.sign:+d})", passed=True)
    checked = 0
    for big_n in range(0, table.big_n_max + 1):
        if not table.has_level(big_n):
            continue
        for a in units_mod(table.p, big_n):
            checked += 1
            if table.value(big_n, -a) != table.sign * table.value(big_n, a):
                result.fail(f"[{-a}/{table.p}^{big_n}] != {table.sign:+d}·[{a}/{table.p}^{big_n}]")
    result.metadata["entries_checked"] = checked
    return result


def level_one_reconstruction(table: ModularSymbolTable, prec: Optional[int] = None) -> CheckResult:
    """
    Recover the first-level symbols from the tame components of θ_0

    [b/p^N] = (1/#Δ) Σ_i ω^{−i}(b) θ_0(ω^i), summed over the i whose sign
    matches the table (the other components vanish on a symmetric table).
    """
    prec = prec if prec is not None else table.hecke.prec
    p = table.p
    big_n = level_exponent(p, 0)
    values = table.level_values(big_n)
    order = tame_order(p)
    indices = [i for i in range(order) if character_sign(p, i) == table.sign]
    components = {i: group_ring_sum(p, 0, values, i, prec).eval_at_zero() for i in indices}
    result = CheckResult(name=f"level_one_reconstruction(p={p})", passed=True)
    inverse_order = PadicScalar.from_fraction(p, Fraction(1, order), prec)
    recovered = {}
    for b, expected in values.items():
        omega = PadicScalar.from_int(p, teichmuller_int(b, p, prec), prec)
        total = PadicScalar.zero(p, prec)
        for i, theta in components.items():
            total = total + theta * omega.inverse() ** i
        total = total * inverse_order
        recovered[b] = total
        if not total == PadicScalar.from_fraction(p, expected, prec):
            result.fail(f"[{b}/{p}^{big_n}] is not recovered from the tame components")
    result.metadata["indices"] = indices
    result.metadata["recovered"] = {b: str(s.to_fraction()) for b, s in recovered.items()}
    return result
