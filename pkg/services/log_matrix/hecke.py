"""
Hecke Data
Local data at p of the eigenform: a_p, ε(p), the tame index and the derived roots α, β
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from services.padic.characters import level_exponent
from services.padic.quadratic import HeckeField, QuadExtScalar
from services.padic.scalar import INFINITY, ValQ, is_prime
from services.iwasawa.series import fraction_ord


@dataclass(frozen=True)
class HeckeData:
    """
    Eigenform data at a good prime p

    a_p is taken as an exact integer (rational eigenforms); ε(p) = ±1;
    eps_minus_one is the nebentypus value at −1 used by the functional equation.
    """
    p: int
    a: int
    eps: int = 1
    level_nf: int = 1
    tame: int = 0
    eps_minus_one: int = 1
    prec: int = 40

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.eps not in (1, -1):
            raise ValueError(f"eps(p) must be ±1 for rational eigenforms, got {self.eps}")

    @property
    def v(self) -> ValQ:
        """ord_p(a_p), INFINITY when a_p = 0"""
        return fraction_ord(Fraction(self.a), self.p)

    @property
    def supersingular(self) -> bool:
        return self.v > 0

    @property
    def ordinary(self) -> bool:
        return self.v == 0

    @cached_property
    def field(self) -> HeckeField:
        return HeckeField(self.p, self.a, self.eps, self.prec)

    @property
    def alpha(self) -> QuadExtScalar:
        return self.field.alpha

    @property
    def beta(self) -> QuadExtScalar:
        return self.field.beta

    def big_n(self, n: int) -> int:
        """N = n + 1 (odd p) or n + 2 (p = 2)"""
        return level_exponent(self.p, n)

    def with_prec(self, prec: int) -> "HeckeData":
        return HeckeData(self.p, self.a, self.eps, self.level_nf, self.tame, self.eps_minus_one, prec)

    @property
    def is_ap_zero(self) -> bool:
        return self.v == INFINITY
