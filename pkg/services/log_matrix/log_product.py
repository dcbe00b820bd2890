"""
Logarithm Matrix
Partial products Ĉ_1⋯Ĉ_n·C^{−(N+1)}·[[−1, −1], [β, α]] and the identities they satisfy
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from config.toolkit_config import TOOLKIT_CONFIG
from services.errors import Undetermined
from services.iwasawa.lambda_element import LambdaElement
from services.iwasawa.series import SeriesApprox, fraction_ord
from services.log_matrix.build import c_matrix, c_power
from services.log_matrix.cyclotomic import (
    completed_cyclotomic,
    cyclotomic_degree,
    cyclotomic_series,
    cyclotomic_value_ord,
    hat_shift,
)
from services.log_matrix.hecke import HeckeData
from services.log_matrix.matrix import MatrixPoly
from services.padic.cyclotomic import CycloScalar
from services.padic.quadratic import QuadExtScalar
from services.padic.scalar import INFINITY, ValQ
from services.validators.check_result import CheckResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadSeries:
    """x + y·α with series coordinates"""
    x: SeriesApprox
    y: SeriesApprox

    def matches(self, other: "QuadSeries") -> bool:
        return self.x.matches(other.x) and self.y.matches(other.y)


@dataclass
class LogPartialProduct:
    """
    n-th partial product of the logarithm matrix

    left is the Z_p part Ĉ_1⋯Ĉ_n·C^{−(N+1)}; α and β enter only through the
    final roots matrix, applied lazily by entry().
    """
    hecke: HeckeData
    n: int
    completed: bool
    left: MatrixPoly

    @property
    def right_column_converges(self) -> bool:
        return self.hecke.supersingular

    def entry(self, row: int, col: int) -> QuadSeries:
        """Entry of left·[[−1, −1], [β, α]] as x + yα"""
        if col == 1 and not self.right_column_converges:
            raise Undetermined("the right column of the logarithm matrix diverges in the ordinary case")
        m0, m1 = self.left.rows()[row]
        if col == 0:
            return QuadSeries(-m0 + m1 * self.hecke.a, -m1)
        return QuadSeries(-m0, m1)

    def left_at_zero(self) -> MatrixPoly:
        return self.left.map(lambda s: s.coeffs[0])


def _product(h: HeckeData, n: int, completed: bool, d: int) -> MatrixPoly:
    acc = None
    for i in range(1, n + 1):
        factor = c_matrix(h, i, completed=completed, d=d)
        acc = factor if acc is None else acc @ factor
    if acc is None:
        one, zero = SeriesApprox.one(h.p, d), SeriesApprox.zero(h.p, d)
        acc = MatrixPoly.identity(zero, one)
    return acc


def log_partial_product(h: HeckeData, n: int, completed: bool = True, d: int = 30) -> LogPartialProduct:
    """
    Partial product of the (completed) logarithm matrix

    Args:
        h: Hecke data
        n: Number of Φ-factors (>= 1)
        completed: Use Φ̂ instead of Φ
        d: T-adic truncation

    Returns:
        LogPartialProduct with exact rational series entries
    """
    if n < 1:
        raise ValueError(f"partial products start at n = 1, got {n}")
    big_n = h.big_n(n)
    left = _product(h, n, completed, d) @ c_power(h, -(big_n + 1))
    logger.debug(f"log partial product p={h.p}, a_p={h.a}, n={n}, completed={completed}, d={d}")
    return LogPartialProduct(h, n, completed, left)


def log_over_T(p: int, d: int) -> SeriesApprox:
    """log(1+T)/T = Σ (−T)^k/(k+1)"""
    return SeriesApprox.from_values(p, [Fraction((-1) ** k, k + 1) for k in range(d + 1)], d, tail=-INFINITY)


def _floor_log(p: int, x: int) -> int:
    k = 0
    while p ** (k + 1) <= x:
        k += 1
    return k


def det_window(p: int, n: int, d: int, completed: bool) -> List[int]:
    """Guaranteed digits of agreement between the n-th determinant and its limit, per coefficient"""
    shift = 1 if (p == 2 and completed) else 0
    return [n - 2 * _floor_log(p, k + 1) - shift for k in range(d + 1)]


def det_identity_check(h: HeckeData, n: int, d: int = 27, completed: bool = True) -> CheckResult:
    """
    Determinant of the partial logarithm matrix

    Exact at level n: det(left) = ε^n·Π Φ̂_i / (εp)^{N+1}. In the limit,
    det(left)·(εp)^e with e = 2 (odd p) or 3 (p = 2) tends to
    (log(1+T)/T)·(1+T)^c where c = 1/2 (odd p) or 1 (p = 2) for the completed
    product and c = 0 otherwise; agreement is required inside det_window.
    """
    result = CheckResult(name=f"det_identity(p={h.p}, a={h.a}, n={n})", passed=True)
    partial = log_partial_product(h, n, completed=completed, d=d)
    det = partial.left.det()
    exact = SeriesApprox.one(h.p, d)
    for i in range(1, n + 1):
        phi = completed_cyclotomic(h.p, i, d=d) if completed else cyclotomic_series(h.p, i, d)
        exact = exact * phi
    exact = exact.scale(Fraction(h.eps) ** n / Fraction(h.eps * h.p) ** (h.big_n(n) + 1))
    if not det.matches(exact):
        result.fail("finite-level determinant differs from ε^n·ΠΦ̂/(εp)^(N+1)")
    e = 3 if h.p == 2 else 2
    normalized = det.scale(Fraction(h.eps * h.p) ** e)
    c = (Fraction(1) if h.p == 2 else Fraction(1, 2)) if completed else Fraction(0)
    target = log_over_T(h.p, d) * SeriesApprox.group_like(h.p, c, d)
    window = det_window(h.p, n, d, completed)
    agreement = [fraction_ord(a - b, h.p) for a, b in zip(normalized.coeffs, target.coeffs)]
    for k, (w, got) in enumerate(zip(window, agreement)):
        if w >= 1 and got < w:
            result.fail(f"coefficient {k} agrees to {got} digits, expected >= {w}")
    result.metadata.update({
        "window": [k for k, w in enumerate(window) if w >= 1],
        "agreement": agreement,
        "beta_minus_alpha": str(h.beta - h.alpha),
    })
    return result


def half_logs(p: int, d: int, factors: Optional[int] = None, prec: Optional[int] = None
              ) -> Tuple[SeriesApprox, SeriesApprox]:
    """
    Half-logarithms log⁺, log⁻ truncated at T^d

    log⁺ = (1/p)·Π_{j≤m} Φ_{p^{2j}}(1+T)/p and log⁻ = (1/p)·Π_{j≤m} Φ_{p^{2j−1}}(1+T)/p.
    With an explicit factor count the products are returned exactly;
    otherwise enough factors are taken for `prec` digits and the ledger
    records what the omitted factors could still change.
    """
    config = TOOLKIT_CONFIG["series"]
    exact = factors is not None
    if factors is None:
        prec = prec or TOOLKIT_CONFIG["precision"]["default_digits"]
        factors = min((prec + 2 * _floor_log(p, d + 1) + 3) // 2 + 1, config["max_log_factors"])
    plus = SeriesApprox.one(p, d).scale(Fraction(1, p))
    minus = SeriesApprox.one(p, d).scale(Fraction(1, p))
    for j in range(1, factors + 1):
        plus = plus * cyclotomic_series(p, 2 * j, d).scale(Fraction(1, p))
        minus = minus * cyclotomic_series(p, 2 * j - 1, d).scale(Fraction(1, p))
    if not exact:
        ledger = [2 * factors - 2 - 2 * _floor_log(p, k + 1) for k in range(d + 1)]
        plus = SeriesApprox(p, plus.coeffs, tuple(ledger), -INFINITY)
        minus = SeriesApprox(p, minus.coeffs, tuple(ledger), -INFINITY)
    return plus, minus


def fe_units(p: int, d: int, factors: int) -> Tuple[SeriesApprox, SeriesApprox]:
    """
    W⁺ = Π_{j≤m} (1+T)^{−p^{2j−1}(p−1)} and W⁻ = Π_{j≤m} (1+T)^{−deg Φ_{p^{2j−1}}}

    For p = 2 the first W⁻ factor is (1+T)^{−1}, the degree of Φ_2.
    """
    plus_exp = -sum(cyclotomic_degree(p, 2 * j) for j in range(1, factors + 1))
    minus_exp = -sum(cyclotomic_degree(p, 2 * j - 1) for j in range(1, factors + 1))
    return SeriesApprox.group_like(p, plus_exp, d), SeriesApprox.group_like(p, minus_exp, d)


def hat_units(p: int, d: int, factors: int) -> Tuple[SeriesApprox, SeriesApprox]:
    """U± = Π (1+T)^{−½p^{i−1}(p−1)} over even (+) and odd (−) indices i ≤ 2m"""
    plus_exp = -sum(hat_shift(p, 2 * j) for j in range(1, factors + 1))
    minus_exp = -sum(hat_shift(p, 2 * j - 1) for j in range(1, factors + 1))
    return SeriesApprox.group_like(p, plus_exp, d), SeriesApprox.group_like(p, minus_exp, d)


def _expected_half_log_matrix(h: HeckeData, plus: SeriesApprox, minus: SeriesApprox) -> Dict[Tuple[int, int], QuadSeries]:
    p, eps, d = h.p, h.eps, plus.truncation
    zero = SeriesApprox.zero(p, d)
    inv_eps = Fraction(1, eps)
    if p != 2:
        return {
            (0, 0): QuadSeries(plus.scale(inv_eps), zero),
            (0, 1): QuadSeries(plus.scale(inv_eps), zero),
            (1, 0): QuadSeries(zero, minus.scale(inv_eps)),
            # β = a_p − α = −α
            (1, 1): QuadSeries(zero, minus.scale(-inv_eps)),
        }
    top = plus.scale(Fraction(-1, 2 * eps * eps))
    return {
        (0, 0): QuadSeries(zero, top),
        (0, 1): QuadSeries(zero, -top),
        (1, 0): QuadSeries(minus.scale(inv_eps), zero),
        (1, 1): QuadSeries(minus.scale(inv_eps), zero),
    }


def half_log_decomposition_check(h: HeckeData, factors: int, d: int = 30) -> CheckResult:
    """
    a_p = 0: the partial product with n = 2m equals the half-logarithm matrix
    built from m factors, and the completed one is diag(U⁺, U⁻) times it
    """
    result = CheckResult(name=f"half_log_decomposition(p={h.p}, m={factors})", passed=True)
    if h.a != 0:
        return result.fail("the half-logarithm decomposition needs a_p = 0")
    plus, minus = half_logs(h.p, d, factors=factors)
    expected = _expected_half_log_matrix(h, plus, minus)
    plain = log_partial_product(h, 2 * factors, completed=False, d=d)
    hatted = log_partial_product(h, 2 * factors, completed=True, d=d)
    u_plus, u_minus = hat_units(h.p, d, factors)
    for (r, c), want in expected.items():
        got = plain.entry(r, c)
        if not got.matches(want):
            result.fail(f"Log entry ({r},{c}) differs from the half-log form")
        unit = u_plus if r == 0 else u_minus
        got_hat = hatted.entry(r, c)
        if not got_hat.matches(QuadSeries(got.x * unit, got.y * unit)):
            result.fail(f"completed entry ({r},{c}) is not U·Log")
    return result


def fe_units_check(p: int, factors: int, d: int = 30) -> CheckResult:
    """
    log±(T)·W±(1+T) = log±((1+T)^{−1} − 1), and the same identity without W±
    must fail (it is off by exactly those units)
    """
    result = CheckResult(name=f"half_log_functional_equation(p={p}, m={factors})", passed=True)
    plus, minus = half_logs(p, d, factors=factors)
    w_plus, w_minus = fe_units(p, d, factors)
    controls = {}
    for label, log_part, unit in (("+", plus, w_plus), ("-", minus, w_minus)):
        flipped = log_part.substitute_inverse()
        if not (log_part * unit).matches(flipped):
            result.fail(f"log{label}·W{label} differs from log{label} at the inverted variable")
        controls[label] = not log_part.matches(flipped)
        if not controls[label]:
            result.fail(f"log{label} is unexpectedly invariant without W{label}")
    result.metadata["negative_control_failed_as_expected"] = controls
    return result


def hat_invariance_check(h: HeckeData, indices: Iterable[int], level: Optional[int] = None) -> CheckResult:
    """
    Ĉ_i(1/(1+T)) = Ĉ_i(1+T) in Λ_level; for p = 2, i = 1 the two differ by the
    left factor diag(1, (1+T)^{−1}). The uncompleted Φ_i is not invariant for
    i < level; at i = level it is, since Φ_{p^n}·((1+T)^{p^{n−1}} − 1) = 0 in Λ_n.

    Args:
        h: Hecke data; only p and the precision are used
        indices: The cyclotomic indices i to check
        level: Quotient Λ_level to work in; defaults to one above the largest index

    Returns:
        CheckResult with per-index invariance and control outcomes in its metadata
    """
    indices = list(indices)
    level = level if level is not None else max(indices) + 1
    result = CheckResult(name=f"hat_invariance(p={h.p}, level={level})", passed=True)
    per_index = {}
    for i in indices:
        hat = completed_cyclotomic(h.p, i, level=level, prec=h.prec)
        flipped = hat.involution()
        if h.p == 2 and i == 1:
            ok = flipped == hat * LambdaElement.group_like(h.p, level, -1, h.prec)
        else:
            ok = flipped == hat
        plain = LambdaElement.cyclotomic(h.p, i, level, h.prec)
        control = plain.involution() != plain if hat_shift(h.p, i) and i < level else None
        per_index[i] = {"invariant": ok, "uncompleted_varies": control}
        if not ok:
            result.fail(f"Ĉ_{i} is not invariant under 1+T -> (1+T)^-1")
        if control is False:
            result.fail(f"uncompleted Φ_{i} is unexpectedly invariant")
    result.metadata["indices"] = per_index
    return result


def cyclotomic_values_check(p: int, n: int, indices: Iterable[int], prec: int = 10) -> CheckResult:
    """
    Φ_{p^i}(ζ_{p^n}) = p for i > n, 0 for i = n, and of valuation p^{i−n} for i < n
    """
    result = CheckResult(name=f"cyclotomic_values(p={p}, n={n})", passed=True)
    values = {}
    for i in indices:
        value = LambdaElement.cyclotomic(p, i, n, prec).eval_at_zeta(n)
        if i == n:
            ok = value.is_zero
        elif i > n:
            ok = value == CycloScalar.from_int(p, n, p, prec)
        else:
            ok = value.ord() == cyclotomic_value_ord(p, i, n)
        values[i] = ok
        if not ok:
            result.fail(f"Φ_{{p^{i}}}(ζ_{{p^{n}}}) has the wrong value")
    result.metadata["indices"] = values
    return result


def roots_matrix(h: HeckeData) -> MatrixPoly:
    return MatrixPoly(h.field.element(-1), h.field.element(-1), h.beta, h.alpha)


def diagonalization_check(h: HeckeData, powers: Iterable[int] = range(-3, 4)) -> CheckResult:
    """R·diag(α^m, β^m) = C^m·R with R = [[−1, −1], [β, α]]"""
    result = CheckResult(name=f"diagonalization(p={h.p}, a={h.a})", passed=True)
    roots = roots_matrix(h)
    zero = h.field.zero()
    for m in powers:
        diag = MatrixPoly(h.alpha ** m, zero, zero, h.beta ** m)
        lhs = roots @ diag
        rhs = c_power(h, m).map(h.field.element) @ roots
        if not all(a == b for a, b in zip(lhs.entries(), rhs.entries())):
            result.fail(f"diagonalization fails for m = {m}")
    return result


def hat_plain_at_zero_check(h: HeckeData, n: int, d: int = 4) -> CheckResult:
    """Log(1)·L̂og(1)^{−1} = I: both partial products agree at T = 0"""
    result = CheckResult(name=f"hat_plain_at_zero(p={h.p}, n={n})", passed=True)
    plain = log_partial_product(h, n, completed=False, d=d).left_at_zero()
    hatted = log_partial_product(h, n, completed=True, d=d).left_at_zero()
    if plain.entries() != hatted.entries():
        result.fail("completed and plain logarithm matrices differ at T = 0")
    return result


def xi_remainder(h: HeckeData, n: int, m: int) -> Tuple[MatrixPoly, QuadExtScalar]:
    """
    Ξ_n(ζ_{p^m} − 1) with Log = C_1⋯C_n·Ξ_n, for m ≤ n

    Every factor C_i with i > n ≥ m evaluates to C at ζ_{p^m}, which is
    verified for the next two indices; the product collapses to
    C^{−(N+1)}·R. Returns the matrix and its determinant (nonzero).
    """
    if m > n:
        raise ValueError(f"ζ_{{p^{m}}} lies beyond level {n}")
    for i in (n + 1, n + 2):
        phi = LambdaElement.cyclotomic(h.p, i, m, h.prec)
        value = phi.eval_at_zeta(m) if m > 0 else phi.eval_at_zero()
        if not value == h.p:
            raise Undetermined(f"Φ_{{p^{i}}} does not evaluate to p at level {m}")
    xi = c_power(h, -(h.big_n(n) + 1)).map(h.field.element) @ roots_matrix(h)
    det = xi.det()
    if det.is_zero:
        raise Undetermined("Ξ_n has vanishing determinant to working precision")
    return xi, det


def deviation_constant(p: int, levels: Iterable[int], d: int = 27, completed: bool = True) -> Dict[str, object]:
    """
    Empirical constant c with ord(coefficients of Ĉ_{n+1}C^{−1} − I) >= n + c

    Ĉ_{n+1}C^{−1} − I = diag(0, Φ̂_{p^{n+1}}/p − 1), so only one entry is measured.
    """
    per_level = {}
    for n in levels:
        phi = completed_cyclotomic(p, n + 1, d=d) if completed else cyclotomic_series(p, n + 1, d)
        deviation = phi.scale(Fraction(1, p)) - SeriesApprox.one(p, d)
        measured = min(fraction_ord(c, p) for c in deviation.coeffs)
        per_level[n] = measured - n
    constant = min(per_level.values()) if per_level else None
    return {"per_level": per_level, "constant": constant}


def stabilization_profile(h: HeckeData, levels: Iterable[int], d: int = 27, completed: bool = True) -> Dict[int, ValQ]:
    """
    ord of left_{n+1} − left_n, shifted by n − (N+1)·max(ord α, ord β)

    The minimum over n is the measured stabilization constant.
    """
    slope = max(h.alpha.ord(), h.beta.ord())
    out = {}
    for n in levels:
        lower = log_partial_product(h, n, completed=completed, d=d).left
        upper = log_partial_product(h, n + 1, completed=completed, d=d).left
        diff = upper - lower
        measured = min(
            min(fraction_ord(c, h.p) for c in entry.coeffs)
            for entry in diff.entries()
        )
        out[n] = measured - n + (h.big_n(n) + 1) * slope
    return out

