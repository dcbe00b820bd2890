"""
Truncated Power Series
Exact rational approximants of elements of Λ = Z_p[[T]] (and Q ⊗ Λ) with a per-coefficient precision ledger
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from services.errors import PrecisionExhausted, Undetermined
from services.padic.cyclotomic import CycloScalar, ramification_degree
from services.padic.polyarith import binomial_series
from services.padic.scalar import INFINITY, PadicScalar, ValQ, split_p_power

logger = logging.getLogger(__name__)


def fraction_ord(value: Fraction, p: int) -> ValQ:
    """ord_p of an exact rational (INFINITY for 0)"""
    value = Fraction(value)
    if value == 0:
        return INFINITY
    vn, _ = split_p_power(abs(value.numerator), p)
    vd, _ = split_p_power(value.denominator, p)
    return vn - vd


def _val_sum(x: ValQ, y: ValQ) -> ValQ:
    """Valuation of a product; an absent factor (INFINITY) wins over an unbounded one"""
    if x == INFINITY or y == INFINITY:
        return INFINITY
    return x + y


@dataclass(frozen=True, eq=False)
class SeriesApprox:
    """
    Σ_{k ≤ d} c_k T^k + O(T^{d+1})

    ledger[k] is the absolute p-adic precision of c_k (INFINITY when exact);
    tail bounds the valuation of every coefficient past the truncation
    (INFINITY for polynomials, 0 for elements of Λ).
    """
    p: int
    coeffs: Tuple[Fraction, ...]
    ledger: Tuple[ValQ, ...]
    tail: ValQ = INFINITY

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_values(cls, p: int, values: Sequence, d: Optional[int] = None, ledger: Optional[Sequence[ValQ]] = None,
                    tail: ValQ = INFINITY) -> "SeriesApprox":
        vals = [Fraction(v) for v in values] or [Fraction(0)]
        if d is None:
            d = len(vals) - 1
        elif len(vals) - 1 > d and tail == INFINITY:
            tail = min(fraction_ord(v, p) for v in vals[d + 1:])
        vals = (vals + [Fraction(0)] * (d + 1))[:d + 1]
        if ledger is None:
            ledger = [INFINITY] * (d + 1)
        ledger = (list(ledger) + [INFINITY] * (d + 1))[:d + 1]
        return cls(p, tuple(vals), tuple(ledger), tail)

    @classmethod
    def zero(cls, p: int, d: int) -> "SeriesApprox":
        return cls.from_values(p, [0], d)

    @classmethod
    def one(cls, p: int, d: int) -> "SeriesApprox":
        return cls.from_values(p, [1], d)

    @classmethod
    def group_like(cls, p: int, exponent, d: int) -> "SeriesApprox":
        """(1+T)^s for an integer or rational s (binomial series; exact)"""
        s = Fraction(exponent)
        polynomial = s.denominator == 1 and 0 <= s <= d
        return cls.from_values(p, binomial_series(s, d), d, tail=INFINITY if polynomial else 0)

    @classmethod
    def from_lambda(cls, x, d: Optional[int] = None) -> "SeriesApprox":
        """Representative of a LambdaElement with its uniform ledger"""
        values = x.to_fractions()
        if d is None:
            d = len(values) - 1
        return cls.from_values(x.p, values, d, ledger=[x.prec] * (d + 1))

    def _check(self, other: "SeriesApprox") -> "SeriesApprox":
        if not isinstance(other, SeriesApprox):
            return SeriesApprox.from_values(self.p, [other], self.truncation)
        if other.p != self.p:
            raise ValueError(f"prime mismatch: {self.p} vs {other.p}")
        return other

    def _valuation_bounds(self) -> List[ValQ]:
        """Valuation of each coefficient, or its ledger when not certified"""
        out = []
        for c, l in zip(self.coeffs, self.ledger):
            v = fraction_ord(c, self.p)
            out.append(v if v < l else l)
        return out

    def __add__(self, other) -> "SeriesApprox":
        other = self._check(other)
        d = min(self.truncation, other.truncation)
        coeffs = tuple(self.coeffs[k] + other.coeffs[k] for k in range(d + 1))
        ledger = tuple(min(self.ledger[k], other.ledger[k]) for k in range(d + 1))
        return SeriesApprox(self.p, coeffs, ledger, min(self.tail, other.tail))

    __radd__ = __add__

    def __neg__(self) -> "SeriesApprox":
        return SeriesApprox(self.p, tuple(-c for c in self.coeffs), self.ledger, self.tail)

    def __sub__(self, other) -> "SeriesApprox":
        return self + (-self._check(other))

    def __rsub__(self, other) -> "SeriesApprox":
        return self._check(other) - self

    def __mul__(self, other) -> "SeriesApprox":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._check(other)
        d = min(self.truncation, other.truncation)
        a = np.array(self.coeffs[:d + 1], dtype=object)
        b = np.array(other.coeffs[:d + 1], dtype=object)
        coeffs = tuple(Fraction(c) for c in np.convolve(a, b)[:d + 1])
        va, vb = self._valuation_bounds(), other._valuation_bounds()
        ledger = []
        for k in range(d + 1):
            best = INFINITY
            for i in range(k + 1):
                j = k - i
                best = min(best, self.ledger[i] + vb[j], other.ledger[j] + va[i])
            ledger.append(best)
        low_a = min(va, default=INFINITY)
        low_b = min(vb, default=INFINITY)
        tail = min(_val_sum(self.tail, min(low_b, other.tail)), _val_sum(other.tail, min(low_a, self.tail)))
        return SeriesApprox(self.p, coeffs, tuple(ledger), tail)

    __rmul__ = __mul__

    def scale(self, factor) -> "SeriesApprox":
        factor = Fraction(factor)
        v = fraction_ord(factor, self.p)
        return SeriesApprox(
            self.p,
            tuple(c * factor for c in self.coeffs),
            tuple(l + v for l in self.ledger),
            self.tail + v,
        )

    def __pow__(self, k: int) -> "SeriesApprox":
        result = SeriesApprox.one(self.p, self.truncation)
        for _ in range(k):
            result = result * self
        return result

    def truncate(self, d: int) -> "SeriesApprox":
        if d >= self.truncation:
            return self
        tail = min([self.tail] + [fraction_ord(c, self.p) for c in self.coeffs[d + 1:]])
        return SeriesApprox(self.p, self.coeffs[:d + 1], self.ledger[:d + 1], tail)

    def with_ledger(self, ledger: Sequence[ValQ]) -> "SeriesApprox":
        ledger = tuple(min(a, b) for a, b in zip(self.ledger, ledger))
        return SeriesApprox(self.p, self.coeffs, ledger, self.tail)

    @property
    def is_exact(self) -> bool:
        return self.tail == INFINITY and all(l == INFINITY for l in self.ledger)

    def coefficient_ord(self, k: int) -> ValQ:
        """Certified ord of c_k; raises Undetermined below the ledger floor"""
        v = fraction_ord(self.coeffs[k], self.p)
        if v < self.ledger[k]:
            return v
        if self.ledger[k] == INFINITY:
            return INFINITY
        raise Undetermined(f"coefficient {k} vanishes to its certified precision {self.ledger[k]}")

    def derivative(self) -> "SeriesApprox":
        coeffs = [k * self.coeffs[k] for k in range(1, len(self.coeffs))] or [Fraction(0)]
        ledger = [self.ledger[k] + fraction_ord(Fraction(k), self.p) for k in range(1, len(self.coeffs))] or [INFINITY]
        return SeriesApprox(self.p, tuple(coeffs), tuple(ledger), self.tail)

    def substitute_inverse(self) -> "SeriesApprox":
        """f(T) ↦ f((1+T)^{−1} − 1), truncated at the same order"""
        d = self.truncation
        s = np.array([Fraction(0)] + [Fraction((-1) ** k) for k in range(1, d + 1)], dtype=object)
        acc = np.array([Fraction(0)] * (d + 1), dtype=object)
        power = np.array([Fraction(1)] + [Fraction(0)] * d, dtype=object)
        for c in self.coeffs:
            acc = acc + c * power
            power = np.convolve(power, s)[:d + 1]
        ledger = []
        running = INFINITY
        for l in self.ledger:
            running = min(running, l)
            ledger.append(running)
        return SeriesApprox(self.p, tuple(Fraction(c) for c in acc), tuple(ledger), self.tail)

    def agreement(self, other: "SeriesApprox") -> List[ValQ]:
        """Per-coefficient digits of agreement, capped by both ledgers"""
        other = self._check(other)
        d = min(self.truncation, other.truncation)
        return [
            min(fraction_ord(self.coeffs[k] - other.coeffs[k], self.p), self.ledger[k], other.ledger[k])
            for k in range(d + 1)
        ]

    def matches(self, other: "SeriesApprox", digits: Optional[ValQ] = None) -> bool:
        """Exact equality, or agreement to `digits` on every coefficient"""
        agreement = self.agreement(other)
        if digits is None:
            return all(a == INFINITY for a in agreement)
        return all(a >= digits for a in agreement)

    def eval_at_zeta(self, m: int, prec: int) -> CycloScalar:
        """
        Value at ζ_{p^m} − 1 with the truncation tail accounted for

        The tail contributes valuation >= (d+1)/e + tail, so the result is
        certified only to the floor of that bound.
        """
        e = ramification_degree(self.p, m)
        tail_bound = self.tail + Fraction(self.truncation + 1, e) if m > 0 else self.tail
        ledger_floor = min(self.ledger, default=INFINITY)
        certified = min(prec, tail_bound, ledger_floor)
        if certified == INFINITY:
            certified = prec
        certified = math.floor(certified)
        if certified < 1:
            raise PrecisionExhausted(f"truncation at T^{self.truncation} controls no digits at level {m}")
        den = max((split_p_power(c.denominator, self.p)[0] for c in self.coeffs if c), default=0)
        scaled = [PadicScalar.from_fraction(self.p, c * self.p ** den, certified + den).num for c in self.coeffs]
        return CycloScalar.from_T_poly(self.p, m, scaled, certified, den)

    def __repr__(self) -> str:
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        return f"SeriesApprox(p={self.p}, [{shown}{', ...' if len(self.coeffs) > 6 else ''}] + O(T^{self.truncation + 1}))"
