"""
Valuation Matrices
Min-plus products of 2×2 valuation matrices with per-entry lower-bound flags
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Optional, Sequence, Tuple

from services.errors import PrecisionExhausted, Undetermined
from services.iwasawa.lambda_element import LambdaElement
from services.iwasawa.series import SeriesApprox, fraction_ord
from services.log_matrix.matrix import MatrixPoly
from services.padic.cyclotomic import CycloScalar
from services.padic.quadratic import QuadExtScalar
from services.padic.scalar import INFINITY, PadicScalar, ValQ

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ValEntry:
    """A valuation, or a lower bound for one ("≥ value")"""
    value: ValQ
    lower: bool = False

    def __str__(self) -> str:
        shown = "inf" if self.value == INFINITY else str(self.value)
        return f">={shown}" if self.lower else shown

    def admits(self, actual: "ValEntry") -> bool:
        """True when `actual` is consistent with this entry"""
        if self.lower:
            return actual.value >= self.value
        if actual.lower:
            # only an entry that vanishes identically is consistent with "zero to precision"
            return self.value == INFINITY
        return actual.value == self.value


def _add(x: ValQ, y: ValQ) -> ValQ:
    if x == INFINITY or y == INFINITY:
        return INFINITY
    return x + y


@dataclass(frozen=True)
class ValMatrix:
    """
    [[a, b], [c, d]] over Q ∪ {∞}

    Entries flagged lower are only known to be >= their value.
    """
    entries: Tuple[ValEntry, ValEntry, ValEntry, ValEntry]

    @classmethod
    def of(cls, rows: Sequence[Sequence[Any]], lower: Optional[Sequence[Sequence[bool]]] = None) -> "ValMatrix":
        flags = lower or ((False, False), (False, False))
        out = []
        for i in range(2):
            for j in range(2):
                v = rows[i][j]
                out.append(v if isinstance(v, ValEntry) else ValEntry(_as_val(v), bool(flags[i][j])))
        return cls(tuple(out))

    @classmethod
    def identity(cls) -> "ValMatrix":
        return cls.of([[0, INFINITY], [INFINITY, 0]])

    def entry(self, i: int, j: int) -> ValEntry:
        return self.entries[2 * i + j]

    def values(self) -> Tuple[Tuple[ValQ, ValQ], Tuple[ValQ, ValQ]]:
        e = self.entries
        return ((e[0].value, e[1].value), (e[2].value, e[3].value))

    def flags(self) -> Tuple[Tuple[bool, bool], Tuple[bool, bool]]:
        e = self.entries
        return ((e[0].lower, e[1].lower), (e[2].lower, e[3].lower))

    def column(self, j: int) -> Tuple[ValEntry, ValEntry]:
        return (self.entry(0, j), self.entry(1, j))

    def __matmul__(self, other: "ValMatrix") -> "ValMatrix":
        return trop_mul(self, other)

    def scale(self, factor) -> "ValMatrix":
        """Multiply every value by a positive rational (e.g. p^n − p^{n−1})"""
        factor = Fraction(factor)
        return ValMatrix(tuple(
            ValEntry(e.value if e.value == INFINITY else e.value * factor, e.lower) for e in self.entries
        ))

    def shift(self, c) -> "ValMatrix":
        """Add c to every entry: the valuation matrix of p^c·M"""
        return ValMatrix(tuple(ValEntry(_add(e.value, Fraction(c)), e.lower) for e in self.entries))

    def valuation(self) -> ValEntry:
        """val(M): the minimal entry"""
        best = min(self.entries, key=lambda e: e.value)
        ties = [e for e in self.entries if e.value == best.value]
        return ValEntry(best.value, all(e.lower for e in ties))

    def admits(self, actual: "ValMatrix") -> bool:
        """Entrywise: exact entries equal, lower-bound entries dominated"""
        return all(mine.admits(theirs) for mine, theirs in zip(self.entries, actual.entries))

    def dominated_by(self, actual: "ValMatrix") -> bool:
        """Every actual valuation is >= the corresponding entry of self"""
        return all(
            theirs.value >= mine.value or (theirs.lower and mine.value == INFINITY)
            for mine, theirs in zip(self.entries, actual.entries)
        )

    def __str__(self) -> str:
        e = [str(x) for x in self.entries]
        return f"[[{e[0]}, {e[1]}], [{e[2]}, {e[3]}]]"


def _as_val(v) -> ValQ:
    if v == INFINITY:
        return INFINITY
    return Fraction(v)


def _trop_entry(terms: Iterable[Tuple[ValQ, bool]]) -> ValEntry:
    terms = list(terms)
    best = min(t[0] for t in terms)
    if best == INFINITY:
        return ValEntry(INFINITY, any(lower for _, lower in terms))
    attaining = [t for t in terms if t[0] == best]
    exact = len(attaining) == 1 and not attaining[0][1]
    return ValEntry(best, not exact)


def trop_mul(A: ValMatrix, B: ValMatrix) -> ValMatrix:
    """
    Min-plus product

    Entry (i, k) is min_j (a_ij + b_jk). It is exact only when a single
    exact term attains the minimum; ties or bounded terms give a lower bound.
    """
    out = []
    for i in range(2):
        for k in range(2):
            terms = []
            for j in range(2):
                a, b = A.entry(i, j), B.entry(j, k)
                value = _add(a.value, b.value)
                # an exact ∞ factor kills the term no matter what the other bound is
                exact_zero = (a.value == INFINITY and not a.lower) or (b.value == INFINITY and not b.lower)
                terms.append((value, False if exact_zero else (a.lower or b.lower)))
            out.append(_trop_entry(terms))
    return ValMatrix(tuple(out))


def trop_power(A: ValMatrix, k: int) -> ValMatrix:
    result = ValMatrix.identity()
    for _ in range(k):
        result = trop_mul(result, A)
    return result


def trop_row(row: Tuple[ValEntry, ValEntry], M: ValMatrix) -> Tuple[ValEntry, ValEntry]:
    """Row vector times valuation matrix"""
    full = ValMatrix((row[0], row[1], ValEntry(INFINITY), ValEntry(INFINITY)))
    product = trop_mul(full, M)
    return (product.entry(0, 0), product.entry(0, 1))


def _scalar_entry(x, p: int, m: Optional[int], prec: int, strict: bool) -> ValEntry:
    """Valuation of one matrix entry at T = ζ_{p^m} − 1 (or T = 0 when m is None)"""
    try:
        if isinstance(x, (int, Fraction)):
            return ValEntry(fraction_ord(Fraction(x), p))
        if isinstance(x, LambdaElement):
            x = x.eval_at_zero() if m is None else x.eval_at_zeta(m)
        elif isinstance(x, SeriesApprox):
            if m is None:
                return ValEntry(x.coefficient_ord(0))
            x = x.eval_at_zeta(m, prec)
        if isinstance(x, (CycloScalar, PadicScalar, QuadExtScalar)):
            return ValEntry(x.ord())
    except (PrecisionExhausted, Undetermined) as exc:
        if strict:
            raise Undetermined(f"entry not certified nonzero: {exc}") from exc
        bound = getattr(x, "prec", prec)
        logger.debug(f"entry zero to working precision; recording >= {bound}")
        return ValEntry(Fraction(bound), True)
    raise TypeError(f"no valuation for entries of type {type(x).__name__}")


def series_profile(f, p: int, rho) -> ValEntry:
    """
    v_r(f) = min_k (ord c_k + kρ) with ρ = −log_p r

    The truncation tail contributes >= tail + (d+1)ρ; when that bound does not
    clear the computed minimum the result is a lower bound.
    """
    rho = Fraction(rho)
    if rho < 0:
        raise ValueError(f"radius exponent must be >= 0 (r <= 1), got {rho}")
    if isinstance(f, (int, Fraction)):
        return ValEntry(fraction_ord(Fraction(f), p))
    if isinstance(f, LambdaElement):
        f = SeriesApprox.from_lambda(f)
    best, lower = INFINITY, False
    for k, (c, ledger) in enumerate(zip(f.coeffs, f.ledger)):
        v = fraction_ord(c, p)
        certified = v < ledger
        bound = v if certified else ledger
        if bound == INFINITY:
            continue
        term = bound + k * rho
        if term < best or (term == best and not certified):
            best, lower = term, not certified
    tail_bound = _add(f.tail, (f.truncation + 1) * rho)
    if tail_bound <= best:
        return ValEntry(tail_bound, True)
    return ValEntry(best, lower)


def cyclotomic_profile(p: int, n: int, rho) -> Fraction:
    """v_r(Φ_{p^n}(1+T)) = min(1, ρ·p^{n−1}(p−1))"""
    return min(Fraction(1), Fraction(rho) * p ** (n - 1) * (p - 1))


def val_matrix_of(M: MatrixPoly, p: int, m: Optional[int] = None, rho=None, prec: int = 40,
                  strict: bool = False) -> ValMatrix:
    """
    Valuation matrix of M

    Args:
        M: Matrix with scalar, Λ_n, series or cyclotomic entries
        p: The prime
        m: At-point mode: evaluate at T = ζ_{p^m} − 1 (T = 0 when None)
        rho: Profile mode: v_r with ρ = −log_p r (overrides m)
        prec: Evaluation precision for series entries
        strict: Raise Undetermined instead of recording ">= prec" for entries zero to precision

    Returns:
        ValMatrix
    """
    if rho is not None:
        return ValMatrix(tuple(series_profile(x, p, rho) for x in M.entries()))
    return ValMatrix(tuple(_scalar_entry(x, p, m, prec, strict) for x in M.entries()))
