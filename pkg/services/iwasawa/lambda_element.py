"""
Finite-Level Iwasawa Algebra
Elements of Λ_n = Z_p[T]/((1+T)^{p^n} − 1) as reduced representatives with a precision ledger
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import List, Optional, Sequence

import numpy as np

from services.errors import DivisionRemainder, LevelUnderflow, PrecisionExhausted, Undetermined
from services.padic.cyclotomic import CycloScalar
from services.padic.polyarith import (
    add_mod,
    binomial_power_mod,
    cyclotomic_T_mod,
    divmod_monic,
    min_valuation,
    mul_mod,
    omega_T_mod,
)
from services.padic.scalar import PadicScalar

logger = logging.getLogger(__name__)


def _as_object(values: Sequence[int]) -> np.ndarray:
    return np.array([int(v) for v in values] or [0], dtype=object)


@dataclass(frozen=True, eq=False)
class LambdaElement:
    """
    Element of Λ_n

    coeffs holds the representative c_0 + c_1 T + ... of degree < p^n as
    integers modulo p^(prec + den); the value is that polynomial divided by
    p^den. Representatives are canonical, so divisibility questions on them
    are well posed.
    """
    p: int
    level: int
    coeffs: np.ndarray
    prec: int
    den: int = 0

    @property
    def size(self) -> int:
        return self.p ** self.level

    @property
    def modulus(self) -> int:
        return self.p ** max(self.prec + self.den, 0)

    @classmethod
    def from_poly(cls, p: int, level: int, coeffs: Sequence[int], prec: int, den: int = 0) -> "LambdaElement":
        """Reduce an arbitrary integer polynomial in T into Λ_level"""
        modulus = p ** max(prec + den, 0)
        arr = _as_object(coeffs) % modulus if modulus > 1 else np.zeros(1, dtype=object)
        return cls(p, level, _reduce_omega(arr, p, level, modulus), prec, den)

    @classmethod
    def from_fractions(cls, p: int, level: int, coeffs: Sequence[Fraction], prec: int) -> "LambdaElement":
        """Common p-power denominator; other denominators are inverted p-adically"""
        scalars = [PadicScalar.from_fraction(p, Fraction(c), prec) for c in coeffs]
        den = max((s.den for s in scalars), default=0)
        nums = [s.num * p ** (den - s.den) for s in scalars]
        return cls.from_poly(p, level, nums, prec, den)

    @classmethod
    def zero(cls, p: int, level: int, prec: int) -> "LambdaElement":
        return cls.from_poly(p, level, [0], prec)

    @classmethod
    def one(cls, p: int, level: int, prec: int) -> "LambdaElement":
        return cls.from_poly(p, level, [1], prec)

    @classmethod
    def from_int(cls, p: int, level: int, value: int, prec: int) -> "LambdaElement":
        return cls.from_poly(p, level, [value], prec)

    @classmethod
    def group_like(cls, p: int, level: int, exponent: int, prec: int) -> "LambdaElement":
        """(1+T)^u; the exponent only matters modulo p^level"""
        k = exponent % (p ** level)
        return cls.from_poly(p, level, binomial_power_mod(p, k, p ** prec), prec)

    @classmethod
    def cyclotomic(cls, p: int, i: int, level: int, prec: int) -> "LambdaElement":
        """Φ_{p^i}(1+T) viewed in Λ_level"""
        return cls.from_poly(p, level, cyclotomic_T_mod(p, i, p ** prec), prec)

    @classmethod
    def from_group_basis(cls, p: int, level: int, weights: Sequence[int], prec: int) -> "LambdaElement":
        """Σ_k w_k (1+T)^k for k < p^level"""
        modulus = p ** prec
        size = p ** level
        acc = np.zeros(size, dtype=object)
        for k, w in enumerate(weights):
            w = int(w) % modulus
            if w:
                row = binomial_power_mod(p, k % size, modulus)
                acc[:len(row)] = (acc[:len(row)] + w * _as_object(row)) % modulus
        return cls(p, level, acc, prec, 0)

    def lift(self) -> np.ndarray:
        """The representative of degree < p^n, padded to length p^n"""
        out = np.zeros(self.size, dtype=object)
        out[:len(self.coeffs)] = self.coeffs
        return out

    def coefficient(self, j: int) -> PadicScalar:
        c = int(self.coeffs[j]) if j < len(self.coeffs) else 0
        return PadicScalar.make(self.p, c, self.den, self.prec)

    def coefficients(self) -> List[PadicScalar]:
        return [self.coefficient(j) for j in range(self.size)]

    def to_fractions(self) -> List[Fraction]:
        scale = self.p ** self.den
        return [Fraction(int(c), scale) for c in self.lift()]

    def centered(self) -> List[int]:
        """Symmetric residues of the numerators"""
        m = self.modulus
        return [int(c) - m if int(c) > m // 2 else int(c) for c in self.lift()]

    def _check(self, other: "LambdaElement") -> None:
        if other.p != self.p or other.level != self.level:
            raise ValueError(f"Λ level mismatch: ({self.p}, {self.level}) vs ({other.p}, {other.level})")

    def _coerce(self, other) -> "LambdaElement":
        if isinstance(other, LambdaElement):
            self._check(other)
            return other
        if isinstance(other, PadicScalar):
            return LambdaElement.from_poly(self.p, self.level, [other.num], other.prec, other.den)
        if isinstance(other, Fraction):
            return LambdaElement.from_fractions(self.p, self.level, [other], self.prec)
        return LambdaElement.from_int(self.p, self.level, int(other), self.prec)

    def __add__(self, other) -> "LambdaElement":
        other = self._coerce(other)
        den = max(self.den, other.den)
        prec = min(self.prec, other.prec)
        modulus = self.p ** max(prec + den, 0)
        a = self.lift() * self.p ** (den - self.den)
        b = other.lift() * self.p ** (den - other.den)
        return LambdaElement(self.p, self.level, add_mod(a, b, modulus), prec, den)

    __radd__ = __add__

    def __neg__(self) -> "LambdaElement":
        return LambdaElement(self.p, self.level, (-self.lift()) % self.modulus, self.prec, self.den)

    def __sub__(self, other) -> "LambdaElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LambdaElement":
        return self._coerce(other) - self

    def coarse_valuation(self) -> int:
        """min_j ord(c_j), a lower bound for every evaluation"""
        width = max(self.prec + self.den, 0)
        return min_valuation(self.coeffs, self.p, width) - self.den

    def __mul__(self, other) -> "LambdaElement":
        other = self._coerce(other)
        prec = min(self.prec + other.coarse_valuation(), other.prec + self.coarse_valuation())
        den = self.den + other.den
        modulus = self.p ** max(prec + den, 0)
        product = mul_mod(self.lift() % modulus, other.lift() % modulus, modulus)
        return LambdaElement(self.p, self.level, _reduce_omega(product, self.p, self.level, modulus), prec, den)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LambdaElement":
        result = LambdaElement.one(self.p, self.level, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> "LambdaElement":
        """Multiply by p^k"""
        if k >= 0:
            return LambdaElement(self.p, self.level, self.lift() * self.p ** k % (self.modulus * self.p ** k), self.prec + k, self.den)
        return LambdaElement(self.p, self.level, self.lift(), self.prec + k, self.den - k)

    def with_prec(self, prec: int) -> "LambdaElement":
        prec = min(prec, self.prec)
        modulus = self.p ** max(prec + self.den, 0)
        return LambdaElement(self.p, self.level, self.lift() % modulus, prec, self.den)

    def normalized(self) -> "LambdaElement":
        """Strip common factors of p from a nonzero denominator"""
        den, coeffs = self.den, self.lift()
        while den > 0 and all(int(c) % self.p == 0 for c in coeffs):
            coeffs = np.array([int(c) // self.p for c in coeffs], dtype=object)
            den -= 1
        return LambdaElement(self.p, self.level, coeffs % self.p ** max(self.prec + den, 0), self.prec, den)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.lift() % self.modulus)

    def __eq__(self, other) -> bool:
        try:
            other = self._coerce(other)
        except ValueError:
            return NotImplemented
        return (self - other).is_zero

    __hash__ = None

    def __repr__(self) -> str:
        return f"LambdaElement(p={self.p}, n={self.level}, {self.centered()}, O(p^{self.prec}))"

    def project_pi(self) -> "LambdaElement":
        """Natural projection Λ_n → Λ_{n−1}"""
        if self.level == 0:
            raise LevelUnderflow("Λ_0 has no further projection")
        return LambdaElement.from_poly(self.p, self.level - 1, self.lift(), self.prec, self.den)

    def project_to(self, level: int) -> "LambdaElement":
        if level > self.level:
            raise ValueError(f"cannot project level {self.level} to level {level}")
        return LambdaElement.from_poly(self.p, level, self.lift(), self.prec, self.den)

    def norm_nu(self) -> "LambdaElement":
        """Trace Λ_{n−1} → Λ_n: lift, then multiply by Φ_{p^n}(1+T)"""
        level = self.level + 1
        modulus = self.modulus
        phi = _as_object(cyclotomic_T_mod(self.p, level, modulus))
        product = mul_mod(self.lift(), phi, modulus)
        return LambdaElement(self.p, level, _reduce_omega(product, self.p, level, modulus), self.prec, self.den)

    def nu_preimage(self) -> "LambdaElement":
        """
        x at level n−1 with ν(x) = self

        Raises:
            RelationViolated-style DivisionRemainder when self is not in the image of ν
        """
        if self.level == 0:
            raise LevelUnderflow("ν has no source below level 0")
        modulus = self.modulus
        phi = _as_object(cyclotomic_T_mod(self.p, self.level, modulus))
        q, r = divmod_monic(self.lift(), phi, modulus)
        if np.any(r % modulus):
            raise DivisionRemainder(self.level, "not in the image of the norm map")
        x = LambdaElement.from_poly(self.p, self.level - 1, list(q), self.prec, self.den)
        if not x.norm_nu() == self:
            raise DivisionRemainder(self.level, "norm preimage does not reproduce the input")
        return x

    def divide_by(self, divisor: Sequence[int], level_tag: Optional[int] = None) -> np.ndarray:
        """
        Exact quotient of the representative by a monic integer polynomial

        Returns:
            The quotient as a raw coefficient array (no reduction mod ω_n)
        """
        modulus = self.modulus
        q, r = divmod_monic(self.lift(), _as_object(divisor) % modulus, modulus)
        if np.any(r % modulus):
            raise DivisionRemainder(self.level if level_tag is None else level_tag)
        return q

    def involution(self) -> "LambdaElement":
        """T ↦ (1+T)^{−1} − 1, i.e. σ ↦ σ^{−1} on group elements"""
        weights = self.to_group_basis()
        size = self.size
        flipped = [0] * size
        for k, w in enumerate(weights):
            flipped[(-k) % size] = w
        out = LambdaElement.from_group_basis(self.p, self.level, flipped, self.prec + self.den)
        return LambdaElement(self.p, self.level, out.lift(), self.prec, self.den)

    def to_group_basis(self) -> List[int]:
        """Coefficients w_k with self·p^den = Σ w_k (1+T)^k (inverse Pascal transform)"""
        modulus = self.modulus
        c = [int(x) for x in self.lift()]
        size = len(c)
        # T^j = Σ_k (−1)^{j−k} binom(j, k) (1+T)^k
        w = [0] * size
        for j, cj in enumerate(c):
            if cj:
                for k in range(j + 1):
                    w[k] += cj * (-1) ** (j - k) * comb(j, k)
        return [x % modulus for x in w]

    def derivative(self) -> np.ndarray:
        """Formal derivative of the representative (not an element of Λ_n)"""
        c = self.lift()
        return np.array([j * int(c[j]) for j in range(1, len(c))] or [0], dtype=object)

    def eval_at_zeta(self, m: int) -> CycloScalar:
        """Substitute T = ζ_{p^m} − 1 (m ≤ n)"""
        if m > self.level:
            raise ValueError(f"ζ_{{p^{m}}} − 1 is not a point of Λ_{self.level}")
        return CycloScalar.from_T_poly(self.p, m, list(self.lift()), self.prec, self.den)

    def eval_at_zero(self) -> PadicScalar:
        return self.coefficient(0)

    def minimal_valuation(self) -> int:
        if self.is_zero:
            raise PrecisionExhausted(f"element vanishes modulo p^{self.prec}")
        return self.coarse_valuation()


def _reduce_omega(a: np.ndarray, p: int, level: int, modulus: int) -> np.ndarray:
    size = p ** level
    if len(a) <= size:
        out = np.zeros(size, dtype=object)
        out[:len(a)] = np.array([int(x) for x in a], dtype=object) % modulus
        return out
    omega = _as_object(omega_T_mod(p, level, modulus))
    _, r = divmod_monic(a, omega, modulus)
    out = np.zeros(size, dtype=object)
    out[:len(r)] = np.array([int(x) for x in r], dtype=object)
    return out


def ord_at_zeta(x: LambdaElement, m: int) -> int:
    """
    Order of vanishing of the representative at ζ_{p^m} − 1

    Counts how often Φ_{p^m}(1+T) divides the representative before the
    quotient stops vanishing there. Only meaningful for m ≤ n.
    """
    if m > x.level:
        raise ValueError(f"point of level {m} is not visible in Λ_{x.level}")
    modulus = x.modulus
    if m == 0:
        divisor = _as_object([0, 1])
    else:
        divisor = _as_object(cyclotomic_T_mod(x.p, m, modulus))
    current = x.lift() % modulus
    order = 0
    while True:
        if not np.any(current % modulus):
            raise Undetermined(f"representative vanishes to precision at level {m}")
        q, r = divmod_monic(current, divisor, modulus)
        if np.any(r % modulus):
            value = CycloScalar.from_T_poly(x.p, m, list(current), x.prec, x.den)
            if value.is_zero:
                raise Undetermined(f"cannot certify non-vanishing at ζ_{{p^{m}}} − 1 to precision {x.prec}")
            return order
        order += 1
        current = q


def ord_at_origin(x: LambdaElement) -> int:
    """Order of vanishing at T = 0 via the formal derivatives of the representative"""
    c = [int(v) for v in x.lift()]
    modulus = x.modulus
    for j in range(len(c)):
        # the j-th derivative at 0 is j!·c_j
        if c[j] % modulus:
            return j
    raise Undetermined(f"all coefficients vanish modulo p^{x.prec}")
