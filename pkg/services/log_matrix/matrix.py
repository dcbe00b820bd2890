"""
2×2 Matrices
Matrices over any commutative ring-like entry type (Λ_n elements, series, scalars, fractions)
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Tuple

Row = Tuple[Any, Any]


@dataclass(frozen=True)
class MatrixPoly:
    """[[a, b], [c, d]]"""
    a: Any
    b: Any
    c: Any
    d: Any

    @classmethod
    def of(cls, rows) -> "MatrixPoly":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def identity(cls, zero, one) -> "MatrixPoly":
        return cls(one, zero, zero, one)

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, other: "MatrixPoly") -> "MatrixPoly":
        return MatrixPoly(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __add__(self, other: "MatrixPoly") -> "MatrixPoly":
        return MatrixPoly(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "MatrixPoly") -> "MatrixPoly":
        return MatrixPoly(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def scale(self, factor) -> "MatrixPoly":
        return MatrixPoly(self.a * factor, self.b * factor, self.c * factor, self.d * factor)

    def det(self):
        return self.a * self.d - self.b * self.c

    def adjugate(self) -> "MatrixPoly":
        return MatrixPoly(self.d, -self.b, -self.c, self.a)

    def map(self, fn: Callable[[Any], Any]) -> "MatrixPoly":
        return MatrixPoly(fn(self.a), fn(self.b), fn(self.c), fn(self.d))

    def row_times(self, row: Row) -> Row:
        """Row vector times matrix: (u, w)·M"""
        u, w = row
        return (u * self.a + w * self.c, u * self.b + w * self.d)


def fraction_matrix(rows) -> MatrixPoly:
    return MatrixPoly.of([[Fraction(x) for x in r] for r in rows])


def fraction_inverse(m: MatrixPoly) -> MatrixPoly:
    """Exact inverse through the adjugate"""
    det = Fraction(m.det())
    if det == 0:
        raise ZeroDivisionError("singular matrix")
    return m.adjugate().map(lambda x: Fraction(x) / det)


def fraction_power(m: MatrixPoly, k: int) -> MatrixPoly:
    """M^k for any integer k (negative powers via the adjugate)"""
    if k < 0:
        return fraction_power(fraction_inverse(m), -k)
    result = fraction_matrix([[1, 0], [0, 1]])
    base = m
    while k:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result
