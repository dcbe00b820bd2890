"""
Unreduced Tower Polynomials
Laurent polynomials P(T)·(1+T)^{−shift} with p-adic coefficients, used where reduction into Λ_n would lose information
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from services.errors import DivisionRemainder, Undetermined
from services.iwasawa.lambda_element import LambdaElement
from services.padic.polyarith import add_mod, binomial_power_mod, cyclotomic_T_mod, divmod_monic, mul_mod
from services.padic.scalar import PadicScalar

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction, PadicScalar]


def _as_object(values: Sequence[int]) -> np.ndarray:
    return np.array([int(v) for v in values] or [0], dtype=object)


def _trim(a: np.ndarray) -> np.ndarray:
    nonzero = np.nonzero(a)[0]
    if len(nonzero) == 0:
        return np.zeros(1, dtype=object)
    return a[:nonzero[-1] + 1]


@dataclass(frozen=True, eq=False)
class TowerPolynomial:
    """
    P(T)·(1+T)^{−shift} / p^den

    P has integer coefficients modulo p^(prec + den). The group-like factor
    keeps Φ̂ = Φ·(1+T)^{−h} exact without reducing modulo (1+T)^{p^n} − 1.
    """
    p: int
    coeffs: np.ndarray
    prec: int
    den: int = 0
    shift: int = 0

    def __post_init__(self):
        # exact integers throughout; int64 products from mul_mod would overflow on rescaling
        object.__setattr__(self, "coeffs", _as_object(self.coeffs))

    @property
    def modulus(self) -> int:
        return self.p ** max(self.prec + self.den, 0)

    @classmethod
    def from_coeffs(cls, p: int, coeffs: Sequence[int], prec: int, den: int = 0, shift: int = 0) -> "TowerPolynomial":
        modulus = p ** max(prec + den, 0)
        return cls(p, _trim(_as_object(coeffs) % modulus), prec, den, shift)._normalized_shift()

    @classmethod
    def from_lambda(cls, x: LambdaElement) -> "TowerPolynomial":
        """The canonical representative of x"""
        return cls.from_coeffs(x.p, x.lift(), x.prec, x.den)

    @classmethod
    def constant(cls, p: int, value: Scalar, prec: int) -> "TowerPolynomial":
        s = value if isinstance(value, PadicScalar) else PadicScalar.from_fraction(p, Fraction(value), prec)
        return cls.from_coeffs(p, [s.num], min(prec, s.prec), s.den)

    @classmethod
    def zero(cls, p: int, prec: int) -> "TowerPolynomial":
        return cls.from_coeffs(p, [0], prec)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coeffs % self.modulus)

    def _normalized_shift(self) -> "TowerPolynomial":
        """Fold a negative shift into P"""
        if self.shift >= 0:
            return self
        factor = _as_object(binomial_power_mod(self.p, -self.shift, self.modulus))
        return TowerPolynomial(self.p, _trim(mul_mod(self.coeffs, factor, self.modulus)), self.prec, self.den, 0)

    def _raised(self, den: int, shift: int) -> np.ndarray:
        """Numerators of self over p^den with group-like exponent −shift (den, shift at least self's)"""
        modulus = self.p ** max(self.prec + den, 0)
        a = self.coeffs * self.p ** (den - self.den)
        if shift > self.shift:
            a = mul_mod(a % modulus, _as_object(binomial_power_mod(self.p, shift - self.shift, modulus)), modulus)
        return a % modulus

    def _check(self, other: "TowerPolynomial") -> None:
        if other.p != self.p:
            raise ValueError(f"prime mismatch: {self.p} vs {other.p}")

    def __add__(self, other: "TowerPolynomial") -> "TowerPolynomial":
        if not isinstance(other, TowerPolynomial):
            other = TowerPolynomial.constant(self.p, other, self.prec)
        self._check(other)
        den = max(self.den, other.den)
        shift = max(self.shift, other.shift)
        prec = min(self.prec, other.prec)
        modulus = self.p ** max(prec + den, 0)
        total = add_mod(self._raised(den, shift) % modulus, other._raised(den, shift) % modulus, modulus)
        return TowerPolynomial(self.p, _trim(total), prec, den, shift)

    __radd__ = __add__

    def __neg__(self) -> "TowerPolynomial":
        return TowerPolynomial(self.p, (-self.coeffs) % self.modulus, self.prec, self.den, self.shift)

    def __sub__(self, other: "TowerPolynomial") -> "TowerPolynomial":
        if not isinstance(other, TowerPolynomial):
            other = TowerPolynomial.constant(self.p, other, self.prec)
        return self + (-other)

    def __mul__(self, other) -> "TowerPolynomial":
        if not isinstance(other, TowerPolynomial):
            other = TowerPolynomial.constant(self.p, other, self.prec)
        self._check(other)
        own, theirs = self.coarse_valuation(), other.coarse_valuation()
        prec = min(self.prec + theirs, other.prec + own)
        den = self.den + other.den
        modulus = self.p ** max(prec + den, 0)
        product = mul_mod(self.coeffs % modulus, other.coeffs % modulus, modulus)
        return TowerPolynomial(self.p, _trim(product), prec, den, self.shift + other.shift)

    __rmul__ = __mul__

    def coarse_valuation(self) -> int:
        width = max(self.prec + self.den, 0)
        values = [int(c) for c in self.coeffs if int(c) % self.modulus]
        if not values:
            return width - self.den
        best = width
        for c in values:
            v = 0
            while c % self.p == 0 and v < width:
                c //= self.p
                v += 1
            best = min(best, v)
        return best - self.den

    def times_group_like(self, k: int) -> "TowerPolynomial":
        """Multiply by (1+T)^k"""
        return TowerPolynomial(self.p, self.coeffs, self.prec, self.den, self.shift - k)._normalized_shift()

    def times_cyclotomic(self, i: int) -> "TowerPolynomial":
        """Multiply by Φ_{p^i}(1+T)"""
        phi = _as_object(cyclotomic_T_mod(self.p, i, self.modulus))
        return TowerPolynomial(self.p, _trim(mul_mod(self.coeffs, phi, self.modulus)), self.prec, self.den, self.shift)

    def divide_cyclotomic(self, i: int) -> "TowerPolynomial":
        """
        Exact quotient by Φ_{p^i}(1+T)

        Raises:
            DivisionRemainder: The remainder is nonzero modulo p^(prec + den)
        """
        modulus = self.modulus
        q, r = divmod_monic(self.coeffs, _as_object(cyclotomic_T_mod(self.p, i, modulus)), modulus)
        if np.any(np.asarray(r) % modulus):
            raise DivisionRemainder(i, f"Φ_{{{self.p}^{i}}} does not divide a degree-{self.degree} polynomial")
        return TowerPolynomial(self.p, _trim(_as_object(q)), self.prec, self.den, self.shift)

    def to_lambda(self, level: int) -> LambdaElement:
        """Image in Λ_level"""
        x = LambdaElement.from_poly(self.p, level, list(self.coeffs), self.prec, self.den)
        if self.shift:
            x = x * LambdaElement.group_like(self.p, level, -self.shift, self.prec)
        return x

    def __eq__(self, other) -> bool:
        if not isinstance(other, TowerPolynomial):
            return NotImplemented
        return (self - other).is_zero

    __hash__ = None

    def order_at(self, m: int) -> int:
        """
        Multiplicity of Φ_{p^m}(1+T) in P (of T when m = 0)

        The group-like factor is a unit at every point, so it is ignored.
        """
        if self.is_zero:
            raise Undetermined(f"polynomial vanishes modulo p^{self.prec}")
        modulus = self.modulus
        divisor = _as_object([0, 1]) if m == 0 else _as_object(cyclotomic_T_mod(self.p, m, modulus))
        current = self.coeffs % modulus
        order = 0
        while True:
            q, r = divmod_monic(current, divisor, modulus)
            if np.any(np.asarray(r) % modulus):
                return order
            order += 1
            current = _trim(_as_object(q))
            if not np.any(current % modulus):
                raise Undetermined(f"quotient vanishes modulo p^{self.prec} after {order} divisions")

    def value_at_zero(self) -> PadicScalar:
        return PadicScalar.make(self.p, int(self.coeffs[0]), self.den, self.prec)

    def __repr__(self) -> str:
        shown = [int(c) for c in self.coeffs]
        return f"TowerPolynomial(p={self.p}, {shown}/p^{self.den} * (1+T)^-{self.shift}, O(p^{self.prec}))"
