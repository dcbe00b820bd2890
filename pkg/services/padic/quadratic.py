"""
Hecke Quadratic Extension
Arithmetic in Z_p[α] with α² = a_p·α − ε(p)·p, and the valuation of its elements
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Union

from services.errors import PrecisionExhausted
from services.padic.scalar import PadicScalar, ValQ


@dataclass(frozen=True)
class HeckeField:
    """
    Defining data of the algebra housing α and β

    When p | a_p the Hecke polynomial is Eisenstein and x + yα has valuation
    min(ord x, ord y + 1/2). Otherwise it splits over Z_p and α is identified
    with its Hensel-lifted unit root.
    """
    p: int
    a: int
    eps: int = 1
    prec: int = 40

    @property
    def supersingular(self) -> bool:
        return self.a % self.p == 0

    @property
    def ordinary(self) -> bool:
        return not self.supersingular

    @cached_property
    def unit_root(self) -> PadicScalar:
        """Root of X² − aX + εp congruent to a mod p (ordinary case only)"""
        if self.supersingular:
            raise ValueError("the Hecke polynomial is irreducible when p | a_p")
        p, m = self.p, self.p ** self.prec
        x = self.a % m
        for _ in range(self.prec.bit_length() + 2):
            f = (x * x - self.a * x + self.eps * p) % m
            df = (2 * x - self.a) % m
            x = (x - f * pow(df, -1, m)) % m
        return PadicScalar.from_int(p, x, self.prec)

    def scalar(self, value) -> PadicScalar:
        if isinstance(value, PadicScalar):
            return value
        if isinstance(value, Fraction):
            return PadicScalar.from_fraction(self.p, value, self.prec)
        return PadicScalar.from_int(self.p, int(value), self.prec)

    def element(self, x, y=0) -> "QuadExtScalar":
        return QuadExtScalar(self, self.scalar(x), self.scalar(y))

    @property
    def alpha(self) -> "QuadExtScalar":
        return self.element(0, 1)

    @property
    def beta(self) -> "QuadExtScalar":
        return self.element(self.a, -1)

    def zero(self) -> "QuadExtScalar":
        return self.element(0, 0)

    def one(self) -> "QuadExtScalar":
        return self.element(1, 0)


@dataclass(frozen=True, eq=False)
class QuadExtScalar:
    """x + y·α over a HeckeField"""
    field: HeckeField
    x: PadicScalar
    y: PadicScalar

    def _coerce(self, other) -> "QuadExtScalar":
        if isinstance(other, QuadExtScalar):
            return other
        return QuadExtScalar(self.field, self.field.scalar(other), self.field.scalar(0))

    def __add__(self, other) -> "QuadExtScalar":
        other = self._coerce(other)
        return QuadExtScalar(self.field, self.x + other.x, self.y + other.y)

    __radd__ = __add__

    def __neg__(self) -> "QuadExtScalar":
        return QuadExtScalar(self.field, -self.x, -self.y)

    def __sub__(self, other) -> "QuadExtScalar":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "QuadExtScalar":
        return self._coerce(other) - self

    def __mul__(self, other) -> "QuadExtScalar":
        other = self._coerce(other)
        f = self.field
        yy = self.y * other.y
        x = self.x * other.x - yy * (f.eps * f.p)
        y = self.x * other.y + self.y * other.x + yy * f.a
        return QuadExtScalar(f, x, y)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExtScalar":
        """α ↦ β = a_p − α"""
        return QuadExtScalar(self.field, self.x + self.y * self.field.a, -self.y)

    def norm(self) -> PadicScalar:
        f = self.field
        return self.x * self.x + self.x * self.y * f.a + self.y * self.y * (f.eps * f.p)

    def embed(self) -> PadicScalar:
        """Image in Z_p under α ↦ unit root (ordinary case)"""
        return self.x + self.y * self.field.unit_root

    @property
    def is_zero(self) -> bool:
        return self.x.is_zero and self.y.is_zero

    def ord(self) -> ValQ:
        """
        Valuation of x + yα

        Returns:
            Half the valuation of the norm when the Hecke polynomial is
            irreducible, the valuation of the embedded value when it splits
        """
        if self.is_zero:
            raise PrecisionExhausted("both coordinates vanish to working precision")
        if self.field.ordinary:
            return Fraction(self.embed().ord())
        try:
            return Fraction(self.norm().ord(), 2)
        except PrecisionExhausted:
            return min(Fraction(self.x.valuation_bound()), Fraction(self.y.valuation_bound()) + Fraction(1, 2))

    def inverse(self) -> "QuadExtScalar":
        if self.field.ordinary:
            return QuadExtScalar(self.field, self.embed().inverse(), self.field.scalar(0))
        n = self.norm().inverse()
        c = self.conjugate()
        return QuadExtScalar(self.field, c.x * n, c.y * n)

    def __truediv__(self, other) -> "QuadExtScalar":
        return self * self._coerce(other).inverse()

    def __pow__(self, k: int) -> "QuadExtScalar":
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        diff = self - other
        if self.field.ordinary:
            return diff.embed().is_zero
        return diff.is_zero

    __hash__ = None

    def __repr__(self) -> str:
        return f"({self.x.to_fraction()} + {self.y.to_fraction()}*alpha)"


Scalarish = Union[int, Fraction, PadicScalar, QuadExtScalar]
