"""
Λ_n over the Hecke Extension
Elements x + y·α of Λ_n ⊗ Z_p[α], used for Riemann sums and the logarithm-matrix identities
"""
from dataclasses import dataclass
from typing import List

from services.iwasawa.lambda_element import LambdaElement
from services.padic.quadratic import HeckeField, QuadExtScalar


@dataclass(frozen=True, eq=False)
class QuadLambdaElement:
    field: HeckeField
    x: LambdaElement
    y: LambdaElement

    @classmethod
    def from_lambda(cls, field: HeckeField, x: LambdaElement) -> "QuadLambdaElement":
        return cls(field, x, LambdaElement.zero(x.p, x.level, x.prec))

    @classmethod
    def constant(cls, field: HeckeField, z: QuadExtScalar, level: int, prec: int) -> "QuadLambdaElement":
        x = LambdaElement.zero(field.p, level, prec) + z.x
        y = LambdaElement.zero(field.p, level, prec) + z.y
        return cls(field, x, y)

    def _coerce(self, other) -> "QuadLambdaElement":
        if isinstance(other, QuadLambdaElement):
            return other
        if isinstance(other, QuadExtScalar):
            return QuadLambdaElement.constant(self.field, other, self.x.level, self.x.prec)
        if isinstance(other, LambdaElement):
            return QuadLambdaElement.from_lambda(self.field, other)
        zero = LambdaElement.zero(self.x.p, self.x.level, self.x.prec)
        return QuadLambdaElement(self.field, zero + other, zero)

    def __add__(self, other) -> "QuadLambdaElement":
        other = self._coerce(other)
        return QuadLambdaElement(self.field, self.x + other.x, self.y + other.y)

    __radd__ = __add__

    def __neg__(self) -> "QuadLambdaElement":
        return QuadLambdaElement(self.field, -self.x, -self.y)

    def __sub__(self, other) -> "QuadLambdaElement":
        return self + (-self._coerce(other))

    def __mul__(self, other) -> "QuadLambdaElement":
        other = self._coerce(other)
        f = self.field
        yy = self.y * other.y
        x = self.x * other.x - yy * (f.eps * f.p)
        y = self.x * other.y + self.y * other.x + yy * f.a
        return QuadLambdaElement(f, x, y)

    __rmul__ = __mul__

    def embed(self) -> LambdaElement:
        """Image under α ↦ unit root (ordinary fields only)"""
        return self.x + self.y * self.field.unit_root

    def difference_digits(self, other: "QuadLambdaElement") -> List[int]:
        """Per-coefficient digits of agreement (valuation of the difference, capped at its precision)"""
        diff = self - self._coerce(other)
        out = []
        for j in range(diff.x.size):
            if self.field.ordinary:
                out.append(diff.embed().coefficient(j).valuation_bound())
            else:
                out.append(min(diff.x.coefficient(j).valuation_bound(), diff.y.coefficient(j).valuation_bound()))
        return out

    def coefficient(self, j: int) -> QuadExtScalar:
        return QuadExtScalar(self.field, self.x.coefficient(j), self.y.coefficient(j))

    @property
    def prec(self) -> int:
        return min(self.x.prec, self.y.prec)

    def __eq__(self, other) -> bool:
        diff = self - self._coerce(other)
        if self.field.ordinary:
            return diff.embed().is_zero
        return diff.x.is_zero and diff.y.is_zero

    __hash__ = None

