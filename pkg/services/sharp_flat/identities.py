"""
Sharp/Flat Identities
The main-theorem rewriting of the Riemann sums, the special-value table, the
functional equation and the passage from completed to plain pairs
"""
import logging
from typing import Dict, Optional, Tuple

from services.errors import Undetermined
from services.iwasawa.lambda_element import LambdaElement
from services.iwasawa.quad_lambda import QuadLambdaElement
from services.log_matrix.cyclotomic import hat_shift
from services.mazur_tate.riemann import riemann_sum_L
from services.mazur_tate.table import ModularSymbolTable
from services.padic.characters import discrete_log_gamma, level_exponent, teichmuller
from services.padic.scalar import INFINITY, PadicScalar
from services.sharp_flat.extraction import (
    compose_upper,
    extract_from_table,
    extract_vector,
    forward_compose,
    pair_components,
)
from services.sharp_flat.pair import Component, SharpFlatPair
from services.validators.check_result import CheckResult

logger = logging.getLogger(__name__)


def main_theorem_check(table: ModularSymbolTable, i: int, n: int, completed: Optional[bool] = None,
                       prec: Optional[int] = None) -> CheckResult:
    """
    ε_{ω^i}L_{N,γ} against the logarithm-matrix form of the extracted pair

    The Riemann sums are (θ_n, νθ_{n−1})·[[γ^{−N}], [−εγ^{−(N+1)}]]; writing
    (x, y) = Υ̂·Ĉ_1⋯Ĉ_n this is γ^{−(N+1)}(x − γ'y) with γ' the other root,
    while Υ̂·Ĉ_1⋯Ĉ_n·C^{−(N+1)}·[[−1, −1], [β, α]] gives −γ^{−(N+1)}(x − γ'y).
    The overall sign relating the two forms is reported in metadata["sign"].

    Only the α-column is compared when p is ordinary.

    Args:
        table: Modular-symbol table
        i: Tame index
        n: Level
        completed: Extraction flavour (config default per prime when None)
        prec: p-adic digits for the Riemann sums and the extraction

    Returns:
        CheckResult; metadata carries the compared columns, their signs and
        the digits of agreement
    """
    h = table.hecke
    pair, _ = extract_from_table(table, i, n, completed=completed, prec=prec)
    big_n = level_exponent(table.p, n)
    field = h.field
    result = CheckResult(name=f"main_theorem(p={table.p}, i={i}, n={n}, {pair.label})", passed=True)
    x, y = compose_upper(pair_components(pair), h, n, pair.completed)
    qx, qy = QuadLambdaElement.from_lambda(field, x), QuadLambdaElement.from_lambda(field, y)
    roots = {"alpha": (field.alpha, field.beta)}
    if h.supersingular:
        roots["beta"] = (field.beta, field.alpha)
    else:
        result.metadata["beta"] = "skipped (ordinary)"
    signs: Dict[str, int] = {}
    digits: Dict[str, int] = {}
    for name, (root, other) in roots.items():
        lemma = riemann_sum_L(table, i, big_n, name, "matrix", prec)
        log_form = -((qx - qy * other) * root ** (-(big_n + 1)))
        if lemma == -log_form:
            signs[name] = -1
            agreement = lemma.difference_digits(-log_form)
        elif lemma == log_form:
            signs[name] = 1
            agreement = lemma.difference_digits(log_form)
        else:
            agreement = lemma.difference_digits(-log_form)
            first = next((j for j, d in enumerate(agreement) if d < lemma.prec), 0)
            result.fail(f"{name}-column differs at coefficient {first}")
            result.metadata.setdefault("index", first)
        digits[name] = min(agreement)
        logger.debug(f"{name}-column: {digits[name]} digits of agreement")
    if len(set(signs.values())) == 1:
        result.metadata["sign"] = next(iter(signs.values()))
    result.metadata.update({"columns": list(roots), "digits": digits, "signs": signs})
    if result.passed:
        logger.info(f"Main theorem identity holds at n={n} for i={i} (sign {result.metadata.get('sign')})")
    return result


def _u_recursion(h, count: int) -> Tuple[int, ...]:
    """U_1, …, U_count with S_0 = 1, S_1 = a_p − ε, S_N = a_pS_{N−1} − εpS_{N−2} and U_N = S_N − S_{N−1}"""
    s = [1, h.a - h.eps]
    while len(s) <= count:
        s.append(h.a * s[-1] - h.eps * h.p * s[-2])
    return tuple(s[k] - s[k - 1] for k in range(1, count + 1))


def special_value_coefficients(h, tame: int) -> Tuple[int, int]:
    """
    (c♯, c♭) with (L♯(0), L♭(0)) proportional to (c♯, c♭)

    Trivial character: (U_2, U_1) for odd p and (U_3, U_2) for p = 2, in units
    of [0/1]. Otherwise (a_p, 1).
    """
    order = 2 if h.p == 2 else h.p - 1
    if tame % order:
        return h.a, 1
    u = _u_recursion(h, 3)
    return (u[2], u[1]) if h.p == 2 else (u[1], u[0])


def value_at_zero(x: Component, prec: int) -> PadicScalar:
    if isinstance(x, LambdaElement):
        return x.eval_at_zero()
    ledger = x.ledger[0]
    digits = prec if ledger == INFINITY else min(prec, int(ledger))
    return PadicScalar.from_fraction(x.p, x.coeffs[0], digits)


def special_value_table_check(pair: SharpFlatPair) -> CheckResult:
    """
    c♭·L♯(0) = c♯·L♭(0) with (c♯, c♭) from special_value_coefficients

    A vanishing coefficient forces the other column's value to vanish; that
    column is reported in metadata["degenerate"].

    Raises:
        Undetermined: Both sides vanish to working precision
    """
    h = pair.hecke
    c_sharp, c_flat = special_value_coefficients(h, pair.tame)
    result = CheckResult(name=f"special_values({pair.label})", passed=True)
    sharp0, flat0 = value_at_zero(pair.sharp, h.prec), value_at_zero(pair.flat, h.prec)
    lhs, rhs = sharp0 * c_flat, flat0 * c_sharp
    degenerate = []
    if c_flat == 0:
        degenerate.append("flat")
    if c_sharp == 0:
        degenerate.append("sharp")
    for column in degenerate:
        result.warn(f"the {column} coefficient vanishes: L_{column}(0) is forced to be 0")
        logger.warning(f"special-value row degenerates in the {column} column (p={h.p}, a_p={h.a}, eps={h.eps})")
    if lhs.is_zero and rhs.is_zero and not degenerate:
        raise Undetermined(f"both special-value sides vanish modulo p^{min(lhs.prec, rhs.prec)}")
    diff = lhs - rhs
    result.metadata.update({
        "coefficients": {"sharp": c_sharp, "flat": c_flat},
        "sharp_at_zero": repr(sharp0),
        "flat_at_zero": repr(flat0),
        "digits": diff.valuation_bound(),
        "degenerate": degenerate,
    })
    if not diff.is_zero:
        result.fail(f"{c_flat}·L_sharp(0) differs from {c_sharp}·L_flat(0) at {diff.valuation_bound()} digits")
    return result


def _parity_exponent(p: int, n: int, parity: int) -> int:
    return sum(hat_shift(p, j) for j in range(1, n + 1) if j % 2 == parity)


def plain_factors(pair: SharpFlatPair) -> Tuple[LambdaElement, LambdaElement]:
    """
    (U♯, U♭) with (L♯, L♭) = (L̂♯·U♯, L̂♭·U♭) when a_p = 0

    Ĉ_j = diag(1, u_j)·C_j with u_j = (1+T)^{−h_j}, and C_j swaps the two
    diagonal entries, so U♯ collects the even j and U♭ the odd j.
    """
    p, n, prec = pair.hecke.p, pair.level, pair.hecke.prec
    return (LambdaElement.group_like(p, n, -_parity_exponent(p, n, 0), prec),
            LambdaElement.group_like(p, n, -_parity_exponent(p, n, 1), prec))


def fe_twists(pair: SharpFlatPair) -> Tuple[LambdaElement, LambdaElement]:
    """W^± = (U^±)² at level n"""
    u_sharp, u_flat = plain_factors(pair)
    return u_sharp * u_sharp, u_flat * u_flat


def hat_to_plain(pair: SharpFlatPair) -> SharpFlatPair:
    """
    (L♯, L♭) from (L̂♯, L̂♭) at the pair's level

    Diagonal factors when a_p = 0; otherwise forward composition with Φ̂ and
    plain extraction. The latter needs Φ_{p^j} to divide the forward data,
    which fails for p = 2 (DivisionRemainder).

    Args:
        pair: A finite-level pair; plain pairs are returned unchanged

    Returns:
        The plain SharpFlatPair at the same level
    """
    if not pair.completed:
        return pair
    h, n = pair.hecke, pair.level
    sharp, flat = pair_components(pair)
    if h.is_ap_zero:
        u_sharp, u_flat = plain_factors(pair)
        return SharpFlatPair(sharp * u_sharp, flat * u_flat, h, False, pair.tame, n)
    vector = forward_compose((sharp, flat), h, n, completed=True, certify=False)
    (plain_sharp, plain_flat), _ = extract_vector(vector, h, n, completed=False, tame=pair.tame)
    return SharpFlatPair(plain_sharp, plain_flat, h, False, pair.tame, n)


def hat_to_plain_check(pair: SharpFlatPair) -> CheckResult:
    """L̂(0) = L(0): the conversion is the identity at T = 0"""
    plain = hat_to_plain(pair)
    result = CheckResult(name=f"hat_to_plain_at_zero({pair.label})", passed=True)
    for name in ("sharp", "flat"):
        hat0 = value_at_zero(getattr(pair, name), pair.hecke.prec)
        plain0 = value_at_zero(getattr(plain, name), pair.hecke.prec)
        if not hat0 == plain0:
            result.fail(f"{name} values at 0 differ")
    if pair.hecke.is_ap_zero and pair.completed:
        p, n = pair.hecke.p, pair.level
        result.metadata["factor_exponents"] = {"sharp": -_parity_exponent(p, n, 0), "flat": -_parity_exponent(p, n, 1)}
    return result


def functional_equation_check(pair: SharpFlatPair, level_nf: Optional[int] = None,
                              mirror: Optional[SharpFlatPair] = None,
                              use_twist: Optional[bool] = None) -> CheckResult:
    """
    L(T) = c·(1+T)^{−log_γ N_f}·ω^i(−N_f)·W·L_mirror((1+T)^{−1} − 1) componentwise

    c = −ε(−1). mirror is the pair of the conjugate character ω^{−i} (the
    pair itself by default). W is 1 for completed pairs and (W♯, W♭) for
    plain pairs with a_p = 0, which is also the default there; passing
    use_twist=False gives the untwisted comparison.

    Both sides are pushed through Υ ↦ Υ·Ĉ_1⋯Ĉ_n·Ã^{−1} before comparing:
    that map is Λ_n-linear and commutes with the involution up to the twist,
    so the difference of two valid preimages maps to zero.

    Args:
        pair: A finite-level pair
        level_nf: Tame level N_f; defaults to the Hecke data's
        mirror: The ω^{−i} pair when i ≠ 0
        use_twist: Apply (W♯, W♭); defaults to True exactly for plain a_p = 0 pairs

    Returns:
        CheckResult; metadata carries the agreement digits of the forward image,
        log_γ N_f and whether the twist was used

    Raises:
        ValueError: A completed pair with ε(p) ≠ 1, or a twist requested for a_p ≠ 0
    """
    h = pair.hecke
    level_nf = h.level_nf if level_nf is None else level_nf
    mirror = mirror or pair
    if pair.completed and h.eps != 1:
        raise ValueError("the completed functional equation needs eps(p) = 1")
    if use_twist is None:
        use_twist = h.is_ap_zero and not pair.completed
    if use_twist and (not h.is_ap_zero or pair.completed):
        raise ValueError("the W-twisted functional equation is for plain pairs with a_p = 0")
    sharp, flat = pair_components(pair)
    mirror_sharp, mirror_flat = pair_components(mirror)
    p, n, prec = h.p, pair.level, h.prec
    log_nf = discrete_log_gamma(level_nf % p ** level_exponent(p, n), p, n)
    omega = teichmuller(-level_nf, p, prec) ** pair.tame
    factor = LambdaElement.group_like(p, n, -log_nf, prec) * omega * (-h.eps_minus_one)
    twists = fe_twists(pair) if use_twist else (LambdaElement.one(p, n, prec),) * 2
    twisted = "twisted" if use_twist else "untwisted"
    result = CheckResult(name=f"functional_equation({pair.label}, N_f={level_nf}, {twisted})", passed=True)
    difference = tuple(own - factor * w * other.involution()
                       for own, other, w in ((sharp, mirror_sharp, twists[0]), (flat, mirror_flat, twists[1])))
    # Υ̂_n is one preimage of many; only its forward image is determined by the data
    image = forward_compose(difference, h, n, pair.completed, certify=False)
    digits = {}
    for name, side in (("theta", image[0]), ("nu_theta", image[1])):
        digits[name] = min(c.valuation_bound() for c in side.coefficients())
        if not side.is_zero:
            first = next(j for j, c in enumerate(side.coefficients()) if not c.is_zero)
            result.fail(f"forward image differs in {name} at coefficient {first}")
            result.metadata.setdefault("index", first)
    result.metadata.update({"digits": digits, "log_gamma_nf": log_nf, "twist": use_twist})
    return result


def involution_check(x: LambdaElement) -> CheckResult:
    """Applying T ↦ (1+T)^{−1} − 1 twice is the identity"""
    result = CheckResult(name=f"involution(p={x.p}, n={x.level})", passed=True)
    if not x.involution().involution() == x:
        result.fail("the substitution is not an involution")
    return result
