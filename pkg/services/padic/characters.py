"""
Tame Characters and Discrete Logarithms
Teichmüller lifts, the topological generator γ and base-γ digit extraction
"""
import logging
from math import gcd

from services.errors import NotAUnit
from services.padic.scalar import PadicScalar

logger = logging.getLogger(__name__)


def gamma_generator(p: int) -> int:
    """γ = 1 + 2p (γ = 5 for p = 2)"""
    return 1 + 2 * p


def level_exponent(p: int, n: int) -> int:
    """N = n + 1 for odd p and N = n + 2 for p = 2"""
    return n + 2 if p == 2 else n + 1


def teichmuller(a: int, p: int, prec: int) -> PadicScalar:
    """
    Teichmüller lift of a unit

    Args:
        a: Integer prime to p
        p: The prime
        prec: Absolute precision M

    Returns:
        The (p-1)-st root of unity congruent to a mod p (±1 for p = 2)
    """
    if gcd(a, p) != 1:
        raise NotAUnit(f"{a} is not a unit mod {p}")
    if p == 2:
        value = 1 if a % 4 == 1 else -1
        return PadicScalar.from_int(p, value, prec)
    modulus = p ** prec
    x = a % modulus
    # x <- x^p converges to the lift in at most prec steps
    for _ in range(prec):
        y = pow(x, p, modulus)
        if y == x:
            break
        x = y
    return PadicScalar.from_int(p, x, prec)


def teichmuller_int(a: int, p: int, prec: int) -> int:
    return teichmuller(a, p, prec).num


def discrete_log_gamma(a: int, p: int, n: int) -> int:
    """
    log_γ of the principal-unit part of a

    Args:
        a: Unit modulo p^N
        p: The prime
        n: Level; the answer is taken modulo p^n

    Returns:
        e in [0, p^n) with γ^e ≡ a / ω(a) mod p^N
    """
    if gcd(a, p) != 1:
        raise NotAUnit(f"{a} is not a unit mod {p}")
    big_n = level_exponent(p, n)
    modulus = p ** big_n
    gamma = gamma_generator(p)
    omega = teichmuller_int(a, p, big_n)
    target = (a * pow(omega, -1, modulus)) % modulus
    # γ^{p^j} ≡ 1 mod p^{j+1} (odd p) or 2^{j+2}; fix one base-p digit per step
    base = 4 if p == 2 else p
    e = 0
    for j in range(n):
        step = pow(gamma, p ** j, modulus)
        check_modulus = base * p ** (j + 1)
        residual = (target * pow(pow(gamma, e, modulus), -1, modulus)) % modulus
        for digit in range(p):
            if (residual * pow(step, -digit, modulus)) % check_modulus == 1:
                e += digit * p ** j
                break
        else:
            raise NotAUnit(f"{a} / omega({a}) is not in the image of gamma mod {check_modulus}")
    logger.debug(f"log_gamma({a}) = {e} at p={p}, n={n}")
    return e
