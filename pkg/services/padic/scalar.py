"""
p-adic Scalars
Precision-tracked elements of Z_p[1/p] with exact rational valuations
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Union
import math

from services.errors import PrecisionExhausted
from services.padic.polyarith import int_valuation

ValQ = Union[Fraction, float]
INFINITY = math.inf


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, int(p ** 0.5) + 1))


def split_p_power(x: int, p: int):
    """Return (v, u) with x = p^v * u and p not dividing u (x != 0)."""
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x


@dataclass(frozen=True, eq=False)
class PadicScalar:
    """
    Element num / p^den of Q_p known modulo p^prec

    The numerator is kept reduced modulo p^(prec + den). A scalar whose
    numerator vanishes modulo that modulus is zero to working precision and
    its valuation is only known to be >= prec.
    """
    p: int
    num: int
    den: int
    prec: int

    @classmethod
    def make(cls, p: int, num: int, den: int, prec: int) -> "PadicScalar":
        width = prec + den
        num = int(num) % (p ** width) if width > 0 else 0
        return cls(p, num, den, prec)

    @classmethod
    def from_int(cls, p: int, value: int, prec: int) -> "PadicScalar":
        return cls.make(p, value, 0, prec)

    @classmethod
    def from_fraction(cls, p: int, value: Fraction, prec: int) -> "PadicScalar":
        """Convert an exact rational whose denominator is a p-power times a unit"""
        value = Fraction(value)
        if value == 0:
            return cls.make(p, 0, 0, prec)
        dv, du = split_p_power(value.denominator, p)
        width = prec + dv
        if width <= 0:
            return cls.make(p, 0, dv, prec)
        num = value.numerator * pow(du, -1, p ** width)
        return cls.make(p, num, dv, prec)

    @classmethod
    def zero(cls, p: int, prec: int) -> "PadicScalar":
        return cls(p, 0, 0, prec)

    @classmethod
    def one(cls, p: int, prec: int) -> "PadicScalar":
        return cls.make(p, 1, 0, prec)

    @property
    def modulus(self) -> int:
        return self.p ** (self.prec + self.den) if self.prec + self.den > 0 else 1

    @property
    def is_zero(self) -> bool:
        return self.num % self.modulus == 0

    def valuation_bound(self) -> int:
        """Exact valuation when nonzero, otherwise the precision floor"""
        width = self.prec + self.den
        if width <= 0:
            return self.prec
        return int_valuation(self.num, self.p, width) - self.den

    def ord(self) -> int:
        if self.is_zero:
            raise PrecisionExhausted(f"valuation >= {self.prec} (zero to working precision)")
        return self.valuation_bound()

    def unit_part(self) -> int:
        """u with self = p^ord * u, as an integer modulo p^(relative precision)"""
        v = self.ord()
        rel = self.prec - v
        return (self.num // self.p ** (v + self.den)) % (self.p ** rel)

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, self.p ** self.den)

    def centered(self) -> int:
        """Symmetric integer representative of the numerator"""
        m = self.modulus
        n = self.num % m
        return n - m if n > m // 2 else n

    def with_prec(self, prec: int) -> "PadicScalar":
        return PadicScalar.make(self.p, self.num, self.den, min(prec, self.prec))

    def _coerce(self, other) -> "PadicScalar":
        if isinstance(other, PadicScalar):
            if other.p != self.p:
                raise ValueError(f"prime mismatch: {self.p} vs {other.p}")
            return other
        if isinstance(other, Fraction):
            return PadicScalar.from_fraction(self.p, other, self.prec)
        return PadicScalar.from_int(self.p, int(other), self.prec)

    def __add__(self, other) -> "PadicScalar":
        other = self._coerce(other)
        den = max(self.den, other.den)
        num = self.num * self.p ** (den - self.den) + other.num * self.p ** (den - other.den)
        return PadicScalar.make(self.p, num, den, min(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self) -> "PadicScalar":
        return PadicScalar.make(self.p, -self.num, self.den, self.prec)

    def __sub__(self, other) -> "PadicScalar":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PadicScalar":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PadicScalar":
        other = self._coerce(other)
        prec = min(self.prec + other.valuation_bound(), other.prec + self.valuation_bound())
        return PadicScalar.make(self.p, self.num * other.num, self.den + other.den, prec)

    __rmul__ = __mul__

    def shift(self, k: int) -> "PadicScalar":
        """Multiply by p^k (k may be negative)"""
        if k >= 0:
            return PadicScalar.make(self.p, self.num * self.p ** k, self.den, self.prec + k)
        return PadicScalar.make(self.p, self.num, self.den - k, self.prec + k)

    def inverse(self) -> "PadicScalar":
        v = self.ord()
        rel = self.prec - v
        u_inv = pow(self.unit_part(), -1, self.p ** rel)
        return PadicScalar.make(self.p, u_inv * self.p ** max(-v, 0), max(v, 0), rel - v)

    def __truediv__(self, other) -> "PadicScalar":
        return self * self._coerce(other).inverse()

    def __pow__(self, k: int) -> "PadicScalar":
        if k < 0:
            return self.inverse() ** (-k)
        result = PadicScalar.one(self.p, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        """Congruence to the common precision"""
        try:
            other = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return (self - other).is_zero

    __hash__ = None

    def __repr__(self) -> str:
        return f"PadicScalar({self.to_fraction()} + O({self.p}^{self.prec}))"
