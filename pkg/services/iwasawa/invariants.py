"""
Iwasawa Invariants
μ/λ invariants, orders of vanishing at 0 and at ζ_{p^m} − 1, and level-stabilization ledgers
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Union

from services.errors import PrecisionExhausted, Undetermined
from services.iwasawa.lambda_element import LambdaElement, ord_at_origin, ord_at_zeta
from services.iwasawa.series import SeriesApprox, fraction_ord
from services.padic.polyarith import cyclotomic_T_trunc
from services.padic.scalar import INFINITY, ValQ

logger = logging.getLogger(__name__)

Iwasawaish = Union[LambdaElement, SeriesApprox]


@dataclass(frozen=True)
class IwasawaInvariants:
    """μ = min ord(c_i), λ = least index attaining it"""
    mu: Fraction
    lam: int

    def __add__(self, other: "IwasawaInvariants") -> "IwasawaInvariants":
        return IwasawaInvariants(self.mu + other.mu, self.lam + other.lam)


def _as_series(x: Iwasawaish) -> SeriesApprox:
    return x if isinstance(x, SeriesApprox) else SeriesApprox.from_lambda(x)


def iwasawa_invariants(x: Iwasawaish) -> IwasawaInvariants:
    """
    Certified (μ, λ)

    Args:
        x: A truncated series or the representative of a finite-level element

    Returns:
        IwasawaInvariants

    Raises:
        Undetermined: the minimum is not certified by the ledger or the tail
    """
    s = _as_series(x)
    best_v: Optional[ValQ] = None
    best_i: Optional[int] = None
    floors: List[ValQ] = []
    for k, (c, l) in enumerate(zip(s.coeffs, s.ledger)):
        v = fraction_ord(c, s.p)
        if v < l:
            floors.append(v)
            if best_v is None or v < best_v:
                best_v, best_i = v, k
        else:
            floors.append(l)
    if best_v is None:
        raise Undetermined("no coefficient is certified nonzero")
    for k, floor in enumerate(floors):
        if k < best_i and floor <= best_v:
            raise Undetermined(f"coefficient {k} is only known to have valuation >= {floor}, not > {best_v}")
        if k > best_i and floor < best_v:
            raise Undetermined(f"coefficient {k} is only known to have valuation >= {floor}")
    if s.tail < best_v:
        raise Undetermined(f"untracked coefficients past T^{s.truncation} may have valuation {s.tail} < {best_v}")
    logger.debug(f"invariants certified: mu={best_v}, lambda={best_i}")
    return IwasawaInvariants(Fraction(best_v), best_i)


def ord_at_point(x: Iwasawaish, m: Optional[int] = None, prec: int = 20) -> int:
    """
    Order of vanishing at T = 0 (m is None) or at T = ζ_{p^m} − 1

    Finite-level elements use exact division of their representative;
    series use formal derivatives, treating values that vanish to working
    precision as zeros until a derivative is certified nonzero.
    """
    if isinstance(x, LambdaElement):
        return ord_at_origin(x) if m is None else ord_at_zeta(x, m)
    if m is None:
        for k in range(x.truncation + 1):
            try:
                if x.coefficient_ord(k) != INFINITY:
                    return k
            except Undetermined:
                continue
        raise Undetermined(f"no coefficient up to T^{x.truncation} is certified nonzero")
    if x.is_exact:
        return _exact_cyclotomic_multiplicity(x, m)
    current = x
    for j in range(x.truncation + 1):
        try:
            value = current.eval_at_zeta(m, prec)
        except PrecisionExhausted:
            break
        if not value.is_zero:
            return j
        logger.debug(f"derivative {j} vanishes to precision {value.prec} at level {m}")
        current = current.derivative()
    raise Undetermined(f"no derivative is certified nonzero at ζ_{{p^{m}}} − 1")


def _exact_cyclotomic_multiplicity(x: SeriesApprox, m: int) -> int:
    """Exact rational division of a polynomial by Φ_{p^m}(1+T) (or by T for m = 0)"""
    if m == 0:
        divisor = [Fraction(0), Fraction(1)]
    else:
        divisor = [Fraction(c) for c in cyclotomic_T_trunc(x.p, m, x.p ** m)]
    current = list(x.coeffs)
    while current and current[-1] == 0:
        current.pop()
    if not current:
        raise Undetermined("the zero polynomial vanishes to every order")
    order = 0
    while True:
        q, r = _poly_divmod(current, divisor)
        if any(r):
            return order
        order += 1
        current = q


def _poly_divmod(a: List[Fraction], b: List[Fraction]):
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [Fraction(0)], a
    q = [Fraction(0)] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / b[-1]
        q[i - db] = c
        if c:
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    return q, a[:db]


def agreement_digits(lower: LambdaElement, upper: LambdaElement) -> List[ValQ]:
    """Digits to which the level-n element agrees with the projection of a higher level one"""
    projected = upper.project_to(lower.level)
    den = max(lower.den, projected.den)
    prec = min(lower.prec, projected.prec)
    a = [int(c) * lower.p ** (den - lower.den) for c in lower.lift()]
    b = [int(c) * lower.p ** (den - projected.den) for c in projected.lift()]
    out = []
    for ca, cb in zip(a, b):
        diff = Fraction(ca - cb, lower.p ** den)
        out.append(min(fraction_ord(diff, lower.p), prec))
    return out


def stabilize_levels(sequence: Sequence[LambdaElement]) -> SeriesApprox:
    """
    Series approximant from a tower of finite-level approximations

    The top element's representative, with each coefficient's ledger set to
    the digits on which the last two levels agree.
    """
    if len(sequence) < 2:
        raise Undetermined("stabilization needs at least two levels")
    lower, upper = sequence[-2], sequence[-1]
    digits = agreement_digits(lower, upper)
    top = SeriesApprox.from_lambda(upper, d=len(digits) - 1)
    logger.debug(f"stabilized {len(digits)} coefficients, minimum agreement {min(digits, default=INFINITY)}")
    return top.with_ledger(digits)
