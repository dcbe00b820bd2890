"""
Riemann Sums
Isotypical Riemann-sum approximations ε_{ω^i}L_{N,α}, ε_{ω^i}L_{N,β} of the p-adic L-functions
"""
import logging
from typing import Dict, Optional, Tuple

from services.errors import Undetermined
from services.iwasawa.lambda_element import LambdaElement
from services.iwasawa.quad_lambda import QuadLambdaElement
from services.mazur_tate.table import ModularSymbolTable, units_mod
from services.mazur_tate.theta import bottom_element, build_theta, scalar_group_sum
from services.padic.characters import level_exponent
from services.padic.quadratic import QuadExtScalar
from services.validators.check_result import CheckResult

logger = logging.getLogger(__name__)

ROOTS = ("alpha", "beta")
ROUTES = ("matrix", "direct")


def lambda_level(p: int, big_n: int) -> int:
    """n with N = level_exponent(p, n)"""
    n = big_n - level_exponent(p, 0)
    if n < 0:
        raise ValueError(f"Riemann sums need N >= {level_exponent(p, 0)} at p={p}, got N={big_n}")
    return n


def _root(table: ModularSymbolTable, root: str) -> QuadExtScalar:
    if root not in ROOTS:
        raise ValueError(f"root must be one of {ROOTS}, got {root!r}")
    return table.hecke.alpha if root == "alpha" else table.hecke.beta


def theta_pair(table: ModularSymbolTable, i: int, n: int, prec: Optional[int] = None) -> Tuple[LambdaElement, LambdaElement]:
    """
    (θ_n, νθ_{n−1}) in Λ_n^{⊕2}

    At n = 0 the second entry is the table's bottom term.
    """
    prec = prec if prec is not None else table.hecke.prec
    thetas = [e.component(i, prec) for e in build_theta(table, i, prec)]
    if n == 0:
        bottom = bottom_element(table, i, prec)
        if bottom is None:
            raise ValueError("the level-0 Riemann sum needs the table's bottom levels")
        return thetas[0], bottom
    return thetas[n], thetas[n - 1].norm_nu()


def riemann_matrix_weights(table: ModularSymbolTable, big_n: int, root: str) -> Tuple[QuadExtScalar, QuadExtScalar]:
    """The column (γ^{−N}, −ε γ^{−(N+1)}) for γ = α or β"""
    r = _root(table, root)
    first = r ** (-big_n)
    second = (r ** (-(big_n + 1))) * (-table.hecke.eps)
    return first, second


def riemann_sum_L(table: ModularSymbolTable, i: int, big_n: int, root: str = "alpha", route: str = "matrix",
                  prec: Optional[int] = None) -> QuadLambdaElement:
    """
    ε_{ω^i}L_{N,root} in Λ_n over the Hecke extension

    Args:
        table: Modular-symbol table
        i: Tame index
        big_n: N (>= 1 for odd p, >= 2 for p = 2)
        root: "alpha" or "beta"
        route: "matrix" forms (θ_n, νθ_{n−1})·(γ^{−N}, −εγ^{−(N+1)})ᵀ;
               "direct" sums μ_γ(a + p^N Z_p)·ω^i(a)·(1+T)^{log_γ a}

    Returns:
        QuadLambdaElement
    """
    if route not in ROUTES:
        raise ValueError(f"route must be one of {ROUTES}, got {route!r}")
    h = table.hecke
    prec = prec if prec is not None else h.prec
    n = lambda_level(table.p, big_n)
    if n > table.nmax:
        raise ValueError(f"level N={big_n} is beyond the table (nmax={table.nmax})")
    w_top, w_low = riemann_matrix_weights(table, big_n, root)
    if route == "matrix":
        theta, nu_theta = theta_pair(table, i, n, prec)
        result = QuadLambdaElement.from_lambda(h.field, theta) * w_top + \
            QuadLambdaElement.from_lambda(h.field, nu_theta) * w_low
    else:
        result = _direct_sum(table, i, n, big_n, w_top, w_low, prec)
    logger.debug(f"Riemann sum L_(N={big_n},{root}) for i={i} via the {route} route")
    return result


def _direct_sum(table: ModularSymbolTable, i: int, n: int, big_n: int, w_top: QuadExtScalar,
                w_low: QuadExtScalar, prec: int) -> QuadLambdaElement:
    h = table.hecke
    field = h.field
    xs, ys = {}, {}
    for a in units_mod(table.p, big_n):
        upper = field.element(table.value(big_n, a))
        lower = field.element(table.value(big_n - 1, a if big_n > 1 else 0))
        mu = upper * w_top + lower * w_low
        xs[a], ys[a] = mu.x, mu.y
    x = scalar_group_sum(table.p, n, xs, i, prec)
    y = scalar_group_sum(table.p, n, ys, i, prec)
    return QuadLambdaElement(field, x, y)


def riemann_routes_check(table: ModularSymbolTable, i: int, big_n: int, root: str = "alpha",
                         prec: Optional[int] = None) -> CheckResult:
    """The matrix and direct routes agree exactly"""
    result = CheckResult(name=f"riemann_routes(p={table.p}, i={i}, N={big_n}, {root})", passed=True)
    matrix = riemann_sum_L(table, i, big_n, root, "matrix", prec)
    direct = riemann_sum_L(table, i, big_n, root, "direct", prec)
    digits = matrix.difference_digits(direct)
    result.metadata["digits"] = digits
    if not matrix == direct:
        first = next(j for j, d in enumerate(digits) if d < min(matrix.prec, direct.prec))
        result.fail(f"routes differ at coefficient {first}")
        result.metadata["index"] = first
    return result


def interpolation_at_zero(table: ModularSymbolTable, big_n: Optional[int] = None, root: str = "alpha",
                          prec: Optional[int] = None) -> CheckResult:
    """
    ε_{ω^0}L_{N,γ}(0) against (1 − 1/γ)(1 − ε/γ)·[0/1]

    For ε = 1 the right side is (1 − 1/γ)²[0/1]. The identity is exact at
    every N on Hecke-consistent data; the certified digits are reported.
    """
    h = table.hecke
    big_n = big_n if big_n is not None else level_exponent(table.p, 0)
    result = CheckResult(name=f"interpolation_at_zero(p={table.p}, N={big_n}, {root})", passed=True)
    try:
        zero_symbol = table.zero_symbol()
    except KeyError as exc:
        raise ValueError(str(exc)) from exc
    if table.sign < 0:
        result.warn("odd tables carry no trivial-character component")
    r = _root(table, root)
    value = riemann_sum_L(table, 0, big_n, root, "matrix", prec).coefficient(0)
    inv = r.inverse()
    expected = (h.field.one() - inv) * (h.field.one() - inv * h.eps) * h.field.element(zero_symbol)
    diff = value - expected
    if h.field.ordinary:
        digits = diff.embed().valuation_bound()
        floor = diff.embed().prec
    else:
        digits = min(diff.x.valuation_bound(), diff.y.valuation_bound())
        floor = min(diff.x.prec, diff.y.prec)
    result.metadata.update({"digits": digits, "precision": floor, "value": repr(value), "expected": repr(expected)})
    if not value == expected:
        result.fail(f"L_(N,{root})(0) differs from the interpolation value at {digits} digits")
    if floor <= 0:
        raise Undetermined(f"no certified digits left at N={big_n}")
    return result


def riemann_pair(table: ModularSymbolTable, i: int, big_n: int, prec: Optional[int] = None
                 ) -> Dict[str, QuadLambdaElement]:
    """Both isotypical Riemann sums; the β-column only when p is supersingular"""
    out = {"alpha": riemann_sum_L(table, i, big_n, "alpha", prec=prec)}
    if table.hecke.supersingular:
        out["beta"] = riemann_sum_L(table, i, big_n, "beta", prec=prec)
    return out
