"""
Cyclotomic Scalars
Elements of Z_p[ζ_{p^m}] = Z_p[X]/(Φ_{p^m}(X)) with valuations in (1/e)Z
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from services.errors import PrecisionExhausted
from services.padic.polyarith import add_mod, choose_dtype, int_valuation, min_valuation, mul_mod
from services.padic.scalar import PadicScalar, ValQ


def ramification_degree(p: int, m: int) -> int:
    """[Q_p(ζ_{p^m}) : Q_p] = p^{m-1}(p-1), and 1 at level 0"""
    return 1 if m == 0 else p ** (m - 1) * (p - 1)


def reduce_cyclotomic_x(a: np.ndarray, p: int, m: int, modulus: int) -> np.ndarray:
    """
    Reduce an X-basis polynomial modulo Φ_{p^m}(X)

    Folds modulo X^{p^m} − 1 first, then removes the top block using
    X^{(p-1)q + r} ≡ −Σ_{t<p-1} X^{tq + r} with q = p^{m-1}.
    """
    if m == 0:
        return np.array([int(np.sum(a)) % modulus], dtype=choose_dtype(1, modulus))
    size = p ** m
    q = p ** (m - 1)
    dtype = choose_dtype(size, modulus)
    folded = np.zeros(size, dtype=dtype)
    for start in range(0, len(a), size):
        chunk = a[start:start + size] % modulus
        folded[:len(chunk)] = (folded[:len(chunk)] + chunk) % modulus
    top = folded[(p - 1) * q:].copy()
    out = folded[:(p - 1) * q]
    for t in range(p - 1):
        out[t * q:(t + 1) * q] = (out[t * q:(t + 1) * q] - top) % modulus
    return out


@dataclass(frozen=True, eq=False)
class CycloScalar:
    """
    Element of Z_p[ζ_{p^m}][1/p]

    coeffs holds the X-basis numerators (length e = p^{m-1}(p-1)), value is
    Σ coeffs[k] ζ^k / p^den, known modulo p^prec.
    """
    p: int
    level: int
    coeffs: np.ndarray
    den: int
    prec: int

    @property
    def degree(self) -> int:
        return ramification_degree(self.p, self.level)

    @property
    def modulus(self) -> int:
        return self.p ** max(self.prec + self.den, 0)

    @classmethod
    def from_x_poly(cls, p: int, level: int, coeffs: Sequence[int], prec: int, den: int = 0) -> "CycloScalar":
        modulus = p ** max(prec + den, 0)
        arr = np.array([int(c) % modulus for c in coeffs] or [0], dtype=object)
        reduced = reduce_cyclotomic_x(arr, p, level, modulus)
        return cls(p, level, reduced, den, prec)

    @classmethod
    def from_int(cls, p: int, level: int, value: int, prec: int) -> "CycloScalar":
        return cls.from_x_poly(p, level, [value], prec)

    @classmethod
    def from_scalar(cls, level: int, value: PadicScalar) -> "CycloScalar":
        return cls.from_x_poly(value.p, level, [value.num], value.prec, value.den)

    @classmethod
    def zeta(cls, p: int, level: int, prec: int, power: int = 1) -> "CycloScalar":
        size = max(p ** level, 1)
        coeffs = [0] * size
        coeffs[power % size] = 1
        return cls.from_x_poly(p, level, coeffs, prec)

    @classmethod
    def zeta_minus_one(cls, p: int, level: int, prec: int) -> "CycloScalar":
        return cls.zeta(p, level, prec) - cls.from_int(p, level, 1, prec)

    @classmethod
    def from_T_poly(cls, p: int, level: int, coeffs: Sequence[int], prec: int, den: int = 0) -> "CycloScalar":
        """Evaluate Σ c_j T^j at T = ζ_{p^level} − 1 (Horner in the X-basis)"""
        modulus = p ** max(prec + den, 0)
        result = np.zeros(1, dtype=object)
        x_minus_one = np.array([-1, 1], dtype=object)
        for c in reversed(list(coeffs)):
            result = mul_mod(result, x_minus_one, modulus)
            result[0] = (result[0] + int(c)) % modulus
            if len(result) > 2 * max(p ** level, 1):
                result = reduce_cyclotomic_x(result, p, level, modulus)
        return cls.from_x_poly(p, level, list(result), prec, den)

    def _align(self, other: "CycloScalar"):
        if isinstance(other, int):
            other = CycloScalar.from_int(self.p, self.level, other, self.prec)
        elif isinstance(other, PadicScalar):
            other = CycloScalar.from_scalar(self.level, other)
        if other.level != self.level or other.p != self.p:
            raise ValueError(f"level mismatch: {self.level} vs {other.level}")
        return other

    def __add__(self, other) -> "CycloScalar":
        other = self._align(other)
        den = max(self.den, other.den)
        prec = min(self.prec, other.prec)
        modulus = self.p ** max(prec + den, 0)
        a = self.coeffs if den == self.den else self.coeffs.astype(object) * self.p ** (den - self.den)
        b = other.coeffs if den == other.den else other.coeffs.astype(object) * self.p ** (den - other.den)
        return CycloScalar(self.p, self.level, add_mod(a, b, modulus), den, prec)

    __radd__ = __add__

    def __neg__(self) -> "CycloScalar":
        return CycloScalar(self.p, self.level, (-self.coeffs) % self.modulus, self.den, self.prec)

    def __sub__(self, other) -> "CycloScalar":
        return self + (-self._align(other))

    def __rsub__(self, other) -> "CycloScalar":
        return self._align(other) - self

    def __mul__(self, other) -> "CycloScalar":
        other = self._align(other)
        prec = min(self.prec + other.coarse_valuation(), other.prec + self.coarse_valuation())
        den = self.den + other.den
        modulus = self.p ** max(prec + den, 0)
        product = mul_mod(self.coeffs % modulus, other.coeffs % modulus, modulus)
        return CycloScalar(self.p, self.level, reduce_cyclotomic_x(product, self.p, self.level, modulus), den, prec)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "CycloScalar":
        result = CycloScalar.from_int(self.p, self.level, 1, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> "CycloScalar":
        """Multiply by p^k"""
        if k >= 0:
            return CycloScalar(self.p, self.level, (self.coeffs * self.p ** k) % (self.modulus * self.p ** k), self.den, self.prec + k)
        return CycloScalar(self.p, self.level, self.coeffs, self.den - k, self.prec + k)

    def embed(self, level: int) -> "CycloScalar":
        """Image under ζ_{p^m} = ζ_{p^n}^{p^{n-m}} for n >= m"""
        if level < self.level:
            raise ValueError(f"cannot embed level {self.level} into level {level}")
        if level == self.level:
            return self
        stride = self.p ** (level - self.level)
        coeffs = [0] * (stride * len(self.coeffs))
        for k, c in enumerate(self.coeffs):
            coeffs[k * stride] = int(c)
        return CycloScalar.from_x_poly(self.p, level, coeffs, self.prec, self.den)

    def t_coordinates(self) -> np.ndarray:
        """Coefficients in the basis (ζ − 1)^j via repeated division by (X − 1)"""
        modulus = self.modulus
        a = np.array([int(c) for c in self.coeffs], dtype=object)
        if self.level == 0:
            return a % modulus
        dtype = choose_dtype(len(a), modulus)
        work = np.array([int(c) % modulus for c in a], dtype=dtype)
        out = []
        for _ in range(len(a)):
            out.append(int(np.sum(work)) % modulus)
            work = (np.cumsum(work[::-1], dtype=dtype)[::-1][1:]) % modulus
            if len(work) == 0:
                break
        out += [0] * (len(a) - len(out))
        return np.array(out, dtype=object)

    def coarse_valuation(self) -> int:
        """Integer lower bound min_k ord(a_k) from the X-basis (no T-expansion)"""
        width = max(self.prec + self.den, 0)
        return min_valuation(self.coeffs, self.p, width) - self.den

    def valuation_bound(self) -> ValQ:
        try:
            return self.ord()
        except PrecisionExhausted:
            return Fraction(self.prec)

    def ord(self) -> ValQ:
        """
        Valuation in (1/e)Z

        The T-coordinates have distinct fractional parts j/e, so
        ord = min_j (ord c_j + j/e) exactly.
        """
        e = self.degree
        width = self.prec + self.den
        if width <= 0:
            raise PrecisionExhausted("no digits left")
        best = None
        for j, c in enumerate(self.t_coordinates()):
            if c % self.modulus == 0:
                continue
            v = Fraction(int_valuation(c, self.p, width) - self.den) + Fraction(j, e)
            if best is None or v < best:
                best = v
        if best is None or best >= self.prec:
            raise PrecisionExhausted(f"element is zero modulo p^{self.prec} at level {self.level}")
        return best

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coeffs % self.modulus)

    def __eq__(self, other) -> bool:
        return (self - self._align(other)).is_zero

    __hash__ = None
