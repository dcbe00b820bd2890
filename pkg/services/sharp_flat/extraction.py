"""
Sharp/Flat Extraction
Peel Υ̂_n off a queue sequence by exact division by the (completed) cyclotomic factors, and the forward map that inverts it
"""
import logging
from typing import Dict, Optional, Tuple, TypeVar

from config.toolkit_config import TOOLKIT_CONFIG
from services.errors import DivisionRemainder
from services.iwasawa.lambda_element import LambdaElement
from services.log_matrix.cyclotomic import completed_cyclotomic, hat_shift
from services.log_matrix.hecke import HeckeData
from services.mazur_tate.table import ModularSymbolTable
from services.mazur_tate.theta import QueueSequence, queue_from_table, validate_queue
from services.padic.polyarith import cyclotomic_T_mod
from services.sharp_flat.pair import ExtractionTrace, SharpFlatPair, TraceStep
from services.sharp_flat.tower import TowerPolynomial
from services.validators.check_result import CheckResult

logger = logging.getLogger(__name__)

Element = TypeVar("Element", LambdaElement, TowerPolynomial)
Vector = Tuple[Element, Element]


def default_completed(p: int, config: Dict = None) -> bool:
    """Completed extraction except at p = 2, where genuine queue data is only divisible by the plain factors"""
    config = config or TOOLKIT_CONFIG
    settings = config["sharp_flat"]
    return settings["p2_completed"] if p == 2 else settings["completed"]


def _divisor_label(p: int, i: int, completed: bool) -> str:
    return f"{'Phi_hat' if completed and hat_shift(p, i) else 'Phi'}_{p}^{i}"


def times_phi(z: Element, p: int, i: int, completed: bool, level: Optional[int] = None) -> Element:
    """z·Φ̂_{p^i} (z·Φ_{p^i} when not completed)"""
    if isinstance(z, TowerPolynomial):
        out = z.times_cyclotomic(i)
        return out.times_group_like(-hat_shift(p, i)) if completed else out
    level = z.level if level is None else level
    phi = completed_cyclotomic(p, i, level=level, prec=z.prec) if completed else LambdaElement.cyclotomic(p, i, level, z.prec)
    return z * phi


def divide_phi(z: Element, p: int, i: int, completed: bool) -> Element:
    """
    Exact quotient by Φ̂_{p^i} (by Φ_{p^i} when not completed)

    On Λ_n the canonical representative is divided as a polynomial; any
    quotient is a valid preimage since Φ is a zero divisor there.

    Raises:
        DivisionRemainder: With the cyclotomic index as its level
    """
    shift = hat_shift(p, i) if completed else 0
    if isinstance(z, TowerPolynomial):
        return z.divide_cyclotomic(i).times_group_like(shift)
    raw = z.divide_by(cyclotomic_T_mod(p, i, z.modulus), level_tag=i)
    quotient = LambdaElement.from_poly(p, z.level, list(raw), z.prec, z.den)
    if shift:
        quotient = quotient * LambdaElement.group_like(p, z.level, shift, z.prec)
    return quotient


def _degree(z: Element) -> int:
    if isinstance(z, TowerPolynomial):
        return z.degree
    coeffs = [int(c) % z.modulus for c in z.lift()]
    nonzero = [k for k, c in enumerate(coeffs) if c]
    return nonzero[-1] if nonzero else 0


def compose_upper(upsilon: Vector, h: HeckeData, n: int, completed: bool = True) -> Vector:
    """Υ·Ĉ_1⋯Ĉ_n (Υ·C_1⋯C_n when not completed)"""
    u, w = upsilon
    for i in range(1, n + 1):
        u, w = u * h.a - times_phi(w, h.p, i, completed) * h.eps, u
    return u, w


def apply_a_tilde_inverse(vector: Vector, h: HeckeData) -> Vector:
    """(x, y)·Ã^{−1} = (y, ε(a_p·y − x))"""
    x, y = vector
    return y, (y * h.a - x) * h.eps


def forward_compose(upsilon: Vector, h: HeckeData, n: int, completed: bool = True,
                    reduce: bool = True, certify: bool = True) -> Vector:
    """
    (Θ_n, νΘ_{n−1}) = Υ·Ĉ_1⋯Ĉ_n·Ã^{−1}

    Args:
        upsilon: Pair in Λ_n (or tower polynomials)
        h: Hecke data
        n: Level
        completed: Use Φ̂ rather than Φ
        reduce: Work in Λ_n; otherwise keep unreduced tower polynomials,
            on which the map is injective
        certify: Check that the second output lies in the image of ν

    Returns:
        The composed pair, as LambdaElements when reduce is set
    """
    if reduce:
        upsilon = tuple(z.to_lambda(n) if isinstance(z, TowerPolynomial) else z for z in upsilon)
    else:
        upsilon = tuple(TowerPolynomial.from_lambda(z) if isinstance(z, LambdaElement) else z for z in upsilon)
    theta, nu_theta = apply_a_tilde_inverse(compose_upper(upsilon, h, n, completed), h)
    if reduce and certify and n >= 1:
        # π∘ν = p: a ν-image has a unique level-(n−1) preimage
        nu_theta.nu_preimage()
    return theta, nu_theta


def extract_vector(vector: Vector, h: HeckeData, n: int, completed: bool = True,
                   tame: int = 0) -> Tuple[Vector, ExtractionTrace]:
    """
    Υ̂ with Υ̂·Ĉ_1⋯Ĉ_n·Ã^{−1} = vector

    Starts from (x, y) = vector·Ã and, for i = n down to 1, replaces
    (x, y) by (y, ε(a_p·y − x)/Φ̂_{p^i}).

    Raises:
        DivisionRemainder: The input is not a queue vector at that level
    """
    theta, nu_theta = vector
    x, y = theta * h.a - nu_theta * h.eps, theta
    trace = ExtractionTrace(h.p, h.a, h.eps, n, completed, tame)
    for i in range(n, 0, -1):
        dividend = (y * h.a - x) * h.eps
        before = dividend.prec
        try:
            quotient = divide_phi(dividend, h.p, i, completed)
        except DivisionRemainder as exc:
            logger.debug(f"division by {_divisor_label(h.p, i, completed)} failed: {exc}")
            trace.steps.append(TraceStep(i, _divisor_label(h.p, i, completed), _degree(dividend), False, before, before))
            raise
        trace.steps.append(TraceStep(i, _divisor_label(h.p, i, completed), _degree(dividend), True, before,
                                     quotient.prec))
        logger.debug(f"peeled level {i}: divided a degree-{_degree(dividend)} polynomial")
        x, y = y, quotient
    return (x, y), trace


def extract(q: QueueSequence, completed: Optional[bool] = None, validate: bool = True,
            config: Dict = None) -> Tuple[SharpFlatPair, ExtractionTrace]:
    """
    Extract Υ̂_n = (L♯_n, L♭_n) from Θ_0, …, Θ_n

    Args:
        q: Queue sequence; level n = q.top (n = 0 needs the bottom term)
        completed: Divide by Φ̂; defaults per prime from the config
        validate: Run validate_queue first when at least three levels are present

    Returns:
        (SharpFlatPair, ExtractionTrace)

    Raises:
        RelationViolated: From validation
        DivisionRemainder: At the first level whose division leaves a remainder
    """
    h = q.hecke
    completed = default_completed(h.p, config) if completed is None else completed
    if validate and len(q.thetas) >= 3:
        validate_queue(q)
    n = q.top
    vector = (q.thetas[n], q.nu_of(n - 1))
    (sharp, flat), trace = extract_vector(vector, h, n, completed, q.tame)
    logger.info(f"Extracted sharp/flat pair at level {n} (p={h.p}, a_p={h.a}, i={q.tame}, completed={completed})")
    return SharpFlatPair(sharp, flat, h, completed, q.tame, n), trace


def extract_from_table(table: ModularSymbolTable, i: int, n: Optional[int] = None, completed: Optional[bool] = None,
                       prec: Optional[int] = None, config: Dict = None) -> Tuple[SharpFlatPair, ExtractionTrace]:
    """
    Build the tame-i queue of a table, truncate it at level n and extract

    Args:
        table: Modular-symbol table
        i: Tame index
        n: Level (the table's top level by default)
        completed: Divide by Φ̂; defaults per prime from the config
        prec: p-adic digits for the queue
        config: Configuration dict (uses TOOLKIT_CONFIG if not provided)

    Returns:
        (SharpFlatPair, ExtractionTrace)

    Raises:
        ValueError: n beyond the table
    """
    q = queue_from_table(table, i, prec)
    if n is not None:
        if n > q.top:
            raise ValueError(f"level {n} is beyond the table (nmax={table.nmax})")
        q = q.truncated(n)
    return extract(q, completed=completed, config=config)


def extract_tower(vector: Tuple[TowerPolynomial, TowerPolynomial], h: HeckeData, n: int,
                  completed: bool = True, tame: int = 0) -> Tuple[SharpFlatPair, ExtractionTrace]:
    """Extraction on unreduced data; inverts forward_compose(..., reduce=False) exactly"""
    (sharp, flat), trace = extract_vector(vector, h, n, completed, tame)
    return SharpFlatPair(sharp.to_lambda(n), flat.to_lambda(n), h, completed, tame, n), trace


def reconstruction_check(pair: SharpFlatPair, q: QueueSequence) -> CheckResult:
    """Υ̂·Ĉ_1⋯Ĉ_n·Ã^{−1} reproduces (Θ_n, νΘ_{n−1}) in Λ_n"""
    n = pair.level
    result = CheckResult(name=f"reconstruction({pair.label})", passed=True)
    theta, nu_theta = forward_compose(pair.as_tuple(), pair.hecke, n, pair.completed, certify=False)
    if not theta == q.thetas[n]:
        result.fail(f"Θ_{n} is not reproduced")
    if not nu_theta == q.nu_of(n - 1):
        result.fail(f"νΘ_{n - 1} is not reproduced")
    return result


def pair_components(pair: SharpFlatPair) -> Tuple[LambdaElement, LambdaElement]:
    if not isinstance(pair.sharp, LambdaElement) or not isinstance(pair.flat, LambdaElement):
        raise ValueError("this operation needs a finite-level pair")
    return pair.sharp, pair.flat
