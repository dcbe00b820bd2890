"""
Valuation Matrices of C and H_a
Closed forms for [C^m] and [H_a^i(ζ_{p^n} − 1)], checked against exact cyclotomic arithmetic
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

from config.toolkit_config import TOOLKIT_CONFIG
from services.errors import PrecisionExhausted, Undetermined
from services.iwasawa.series import fraction_ord
from services.log_matrix.cyclotomic import cyclotomic_value_ord
from services.log_matrix.matrix import MatrixPoly
from services.padic.cyclotomic import CycloScalar, ramification_degree
from services.padic.scalar import INFINITY, ValQ
from services.tropical.growth import GrowthParams, Star, f_star, least_k
from services.tropical.valmatrix import ValEntry, ValMatrix, trop_mul, val_matrix_of

logger = logging.getLogger(__name__)

Parameter = Union[int, CycloScalar]


def c_valmat(v: ValQ) -> ValMatrix:
    """[C] = [[v, 0], [1, ∞]]"""
    return ValMatrix.of([[v, 0], [1, INFINITY]])


def c_power_valmat(v: ValQ, m: int) -> ValMatrix:
    """
    Closed form of [C^m]

    Exact for v < 1/2. For v >= 1/2 the off-diagonal pattern only carries
    lower bounds, and at v = 1/2 every entry does. Negative powers come from
    the adjugate: [C^{−m}] = [C^m] transposed along the anti-diagonal, minus m.
    """
    if m < 0:
        pos = c_power_valmat(v, -m)
        swapped = ValMatrix((pos.entry(1, 1), pos.entry(0, 1), pos.entry(1, 0), pos.entry(0, 0)))
        return swapped.shift(m)
    if m == 0:
        return ValMatrix.identity()
    if m == 1:
        return c_valmat(v)
    half = Fraction(1, 2)
    if v < half:
        v = Fraction(v)
        return ValMatrix.of([[m * v, (m - 1) * v], [(m - 1) * v + 1, (m - 2) * v + 1]])
    j, odd = divmod(m, 2)
    all_lower = v == half
    if odd:
        rows = [[v + j if v != INFINITY else INFINITY, j], [j + 1, v + j if v != INFINITY else INFINITY]]
        flags = [[True, all_lower], [all_lower, True]]
    else:
        rows = [[j, v + j - 1 if v != INFINITY else INFINITY], [v + j if v != INFINITY else INFINITY, j]]
        flags = [[all_lower, True], [True, all_lower]]
    return ValMatrix.of(rows, flags)


def parameter_level(p: int, v: ValQ) -> int:
    """Smallest cyclotomic level whose value group contains v"""
    frac = Fraction(v) - int(Fraction(v))
    level = 1
    while (frac * ramification_degree(p, level)).denominator != 1:
        level += 1
        if level > 8:
            raise ValueError(f"valuation {v} needs an unreasonably deep cyclotomic level")
    return level


def cyclo_parameter(p: int, v: ValQ, prec: int, level: Optional[int] = None, unit: int = 1) -> CycloScalar:
    """
    An element of Z_p[ζ_{p^L}] with valuation exactly v

    p^{⌊v⌋}·(ζ_{p^L} − 1)^{e_L·frac(v)} times `unit`; zero for v = ∞.
    """
    if v == INFINITY:
        return CycloScalar.from_int(p, max(level or 1, 1), 0, prec)
    if unit % p == 0:
        raise ValueError(f"unit {unit} is divisible by {p}")
    v = Fraction(v)
    whole = int(v)
    base = parameter_level(p, v)
    level = max(base, level or 1)
    exponent = (v - whole) * ramification_degree(p, base)
    value = CycloScalar.zeta_minus_one(p, base, prec) ** int(exponent)
    value = value.shift(whole) * unit
    return value.embed(level)


def parameter_ord(p: int, a: Parameter) -> ValQ:
    if isinstance(a, CycloScalar):
        return INFINITY if a.is_zero else a.ord()
    return fraction_ord(Fraction(a), p)


def cyclotomic_at_zeta(p: int, i: int, n: int, prec: int) -> CycloScalar:
    """Φ_{p^i}(ζ_{p^n}) = Σ_{t<p} ζ^{t·p^{i−1}} in the X-basis"""
    step = p ** (i - 1)
    coeffs = [0] * ((p - 1) * step + 1)
    for t in range(p):
        coeffs[t * step] = 1
    return CycloScalar.from_x_poly(p, n, coeffs, prec)


def _oracle_prec(i: int, config: Optional[Dict] = None) -> int:
    config = config or TOOLKIT_CONFIG
    return config["precision"]["oracle_digits"] + 2 * i


def h_exact_matrix(p: int, a: Parameter, i: int, n: int, eps: int = 1, prec: Optional[int] = None) -> MatrixPoly:
    """H_a^i(ζ_{p^n} − 1) = C_1(a)⋯C_i(a) over Z_p[ζ_{p^L}], L = max(n, level of a)"""
    if n < 1:
        raise ValueError(f"evaluation level must be >= 1, got {n}")
    prec = prec or _oracle_prec(i)
    level = max(n, a.level if isinstance(a, CycloScalar) else 1)
    a_c = a.embed(level) if isinstance(a, CycloScalar) else CycloScalar.from_int(p, level, a, prec)
    one = CycloScalar.from_int(p, level, 1, prec)
    zero = CycloScalar.from_int(p, level, 0, prec)
    product = MatrixPoly.identity(zero, one)
    for j in range(1, i + 1):
        phi = cyclotomic_at_zeta(p, j, n, prec).embed(level)
        product = product @ MatrixPoly(a_c, one, phi * (-eps), zero)
    return product


def h_exact_valmat(p: int, a: Parameter, i: int, n: int, eps: int = 1, prec: Optional[int] = None) -> ValMatrix:
    prec = prec or _oracle_prec(i)
    return val_matrix_of(h_exact_matrix(p, a, i, n, eps, prec), p, prec=prec)


def h_tropical_valmat(p: int, v: ValQ, i: int, n: int) -> ValMatrix:
    """Min-plus product of the factor matrices [C_j(a)(ζ_{p^n} − 1)] = [[v, 0], [ord Φ_{p^j}(ζ_{p^n}), ∞]]"""
    result = ValMatrix.identity()
    for j in range(1, i + 1):
        w = INFINITY if j == n else cyclotomic_value_ord(p, j, n)
        result = trop_mul(result, ValMatrix.of([[v, 0], [w, INFINITY]]))
    return result


def _geometric(p: int, start: int, stop: int) -> Fraction:
    """p^start + p^{start+2} + ⋯ + p^stop (empty when start > stop)"""
    return sum((Fraction(p) ** e for e in range(start, stop + 1, 2)), Fraction(0))


def _ap_zero_form(p: int, i: int, n: int) -> ValMatrix:
    """a = 0: H^i alternates between diagonal (i even) and anti-diagonal (i odd)"""
    def w(j):
        return INFINITY if j == n else cyclotomic_value_ord(p, j, n)

    def total(js):
        values = [w(j) for j in js]
        return INFINITY if INFINITY in values else sum(values, Fraction(0))

    evens = total(range(2, i + 1, 2))
    if i % 2 == 0:
        return ValMatrix.of([[evens, INFINITY], [INFINITY, total(range(1, i + 1, 2))]])
    return ValMatrix.of([[INFINITY, total(range(2, i, 2))], [total(range(1, i + 1, 2)), INFINITY]])


def basic_closed_form(p: int, v: ValQ, n: int) -> ValMatrix:
    """[H_a^{n−k−2}(ζ_{p^n} − 1)] for v > 0 and n > k + 3 (geometric sums)"""
    k = least_k(p, v)
    if n <= k + 3:
        raise ValueError(f"geometric closed form needs n > k + 3 = {k + 3}")
    v = Fraction(v)
    g = lambda a, b: _geometric(p, a, b)
    if (n - k) % 2 == 0:
        rows = [[g(2 - n, -k - 2), v + g(2 - n, -k - 4)], [v + g(1 - n, -k - 3), g(1 - n, -k - 3)]]
    else:
        rows = [[v + g(2 - n, -k - 3), g(2 - n, -k - 3)], [g(1 - n, -k - 2), v + g(1 - n, -k - 4)]]
    return ValMatrix.of(rows)


def _cheapest_route(p: int, v: Fraction, n: int, k: int, start: int, end: int) -> Tuple[Fraction, bool]:
    """
    Cheapest min-plus route from position start to end through the factors [C_j(ζ_{p^n} − 1)]

    A 2-step ending at j costs ord Φ_{p^j}(ζ_{p^n}) = p^{j−n} and pays off while
    j <= n − k; every remaining step costs v. The flag is set when the last
    2-step ends exactly at n − k, where both routes tie on the boundary.
    """
    if end < start:
        return INFINITY, False
    twos = max((min(end, n - k) - start) // 2, 0)
    cost = (end - start - 2 * twos) * v + _geometric(p, start + 2 - n, start + 2 * twos - n)
    return cost, twos >= 1 and start + 2 * twos == n - k


def h_closed_form(p: int, v: ValQ, i: int, n: int, v2: Optional[ValQ] = None) -> ValMatrix:
    """
    Closed form of [H_a^i(ζ_{p^n} − 1)]

    Covers a = 0 at every i, i = n − 1 for v = 0 and for v > 0 with n > k,
    and i = n − k − 2 for n > k + 3.

    Args:
        p: The prime
        v: ord_p(a_p), ∞ for a_p = 0
        i: Number of factors C_1⋯C_i
        n: Evaluation level ζ_{p^n}
        v2: Needed on the boundary v = p^{−k}/2

    Returns:
        The valuation matrix; "≥" entries only in the row the sporadic v₂ leaves open

    Raises:
        ValueError: when no closed form covers (v, i, n)
    """
    if i == 0:
        return ValMatrix.identity()
    if v == INFINITY:
        return _ap_zero_form(p, i, n)
    if v == 0:
        if i != n - 1:
            raise ValueError(f"no ordinary closed form for H^{i} at level {n}")
        w = Fraction(1, p ** (n - 1))
        return ValMatrix.of([[0, 0], [w, w if n > 2 else INFINITY]])
    k = least_k(p, v)
    if i == n - k - 2 and n > k + 3:
        return basic_closed_form(p, v, n)
    if i != n - 1 or n <= k:
        raise ValueError(f"no closed form for H^{i} at level {n} (k={k})")
    v = Fraction(v)
    params = GrowthParams(p, v, n, v2)
    top_lower = bottom_lower = False
    if n == k + 1:
        left_top, left_bottom = k * v, (k - 1) * v + Fraction(1, p ** k)
    else:
        left_top = f_star(params, Star.SHARP) / params.phi
        left_bottom = f_star(params, Star.FLAT) / params.phi
        if params.on_boundary and v2 is not None and Fraction(v2) == params.sporadic_v2:
            if (n - k) % 2 == 0:
                top_lower = True
            else:
                bottom_lower = True
    # the right column of X·C_{n−1} is the left column of X
    right_top, top_tie = _cheapest_route(p, v, n, k, 0, n - 2)
    right_bottom, bottom_tie = _cheapest_route(p, v, n, k, 1, n - 2)
    right_bottom += Fraction(1, p ** (n - 1))
    if top_tie:
        right_top += params.delta
    if bottom_tie:
        right_bottom += params.delta
    return ValMatrix.of(
        [[left_top, right_top], [left_bottom, right_bottom]],
        [[top_lower, top_lower and top_tie], [bottom_lower, bottom_lower and bottom_tie]],
    )


@dataclass
class HValuation:
    """[H_a^i(ζ_{p^n} − 1)] three ways"""
    p: int
    v: ValQ
    i: int
    n: int
    exact: ValMatrix
    closed_form: ValMatrix
    tropical: ValMatrix

    @property
    def consistent(self) -> bool:
        """Exact entries equal, "≥" entries dominated"""
        return self.closed_form.admits(self.exact)

    @property
    def tropical_sound(self) -> bool:
        return self.tropical.dominated_by(self.exact)


def h_valmat(p: int, a: Parameter, i: int, n: int, eps: int = 1, v2: Optional[ValQ] = None,
             prec: Optional[int] = None) -> HValuation:
    """
    [H_a^i(ζ_{p^n} − 1)] by exact cyclotomic arithmetic, by closed form and by min-plus products

    Raises:
        ValueError: when no closed form covers (v, i, n)
    """
    v = parameter_ord(p, a)
    params_needed = 0 < v < INFINITY and GrowthParams(p, v, n).on_boundary
    if params_needed and v2 is None:
        v2 = v_m_compute(p, a, 2, eps)
    exact = h_exact_valmat(p, a, i, n, eps, prec)
    closed = h_closed_form(p, v, i, n, v2)
    tropical = h_tropical_valmat(p, v, i, n)
    result = HValuation(p, v, i, n, exact, closed, tropical)
    if not result.consistent:
        logger.warning(f"H^{i} at level {n} (p={p}, v={v}): exact {exact} vs closed form {closed}")
    return result


def v_m_compute(p: int, a: Parameter, m: int, eps: int = 1, prec: Optional[int] = None) -> ValQ:
    """
    v_m = ord of the upper-left entry of H_a^m(ζ_{p^{k+2}} − 1)

    Raises:
        Undetermined: the entry vanishes to working precision
    """
    v = parameter_ord(p, a)
    k = least_k(p, v)
    prec = prec or _oracle_prec(m)
    entry = h_exact_matrix(p, a, m, k + 2, eps, prec).a
    try:
        return entry.ord()
    except PrecisionExhausted as exc:
        raise Undetermined(f"v_{m} exceeds the working precision {prec}") from exc


def v_m_closed_form(p: int, v: ValQ, v2: ValQ, m: int) -> ValEntry:
    """
    v_m from v₂ on the boundary v = p^{−k}/2

    (m − 2)v + v₂ when v₂ < p^{1−k}, otherwise only >= (m − 2)v + p^{1−k}.
    """
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    k = least_k(p, v)
    if Fraction(v) != Fraction(1, 2 * p ** k):
        raise ValueError(f"the v_m recursion holds on the boundary v = p^-{k}/2 only")
    v, v2 = Fraction(v), Fraction(v2)
    cap = Fraction(1, p ** (k - 1))
    if v2 < cap:
        return ValEntry((m - 2) * v + v2)
    return ValEntry((m - 2) * v + cap, True)

