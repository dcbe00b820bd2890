"""
Polynomial Kernel
Coefficient-array arithmetic modulo p-power moduli and monic integer polynomials
"""
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence, Tuple

import numpy as np

INT64_HEADROOM = 2 ** 62


def choose_dtype(length: int, modulus: int):
    """Pick int64 when a length-`length` convolution of residues cannot overflow."""
    if modulus > 0 and length * modulus * modulus < INT64_HEADROOM:
        return np.int64
    return object


def as_coeffs(values: Sequence[int], modulus: int, length: int = None) -> np.ndarray:
    """
    Build a reduced coefficient array

    Args:
        values: Integer coefficients, lowest degree first
        modulus: p-power modulus (entries are reduced into [0, modulus))
        length: Optional target length (zero padded or truncated)

    Returns:
        numpy array with the dtype chosen by choose_dtype
    """
    vals = [int(v) % modulus for v in values]
    if length is not None:
        vals = (vals + [0] * length)[:length]
    dtype = choose_dtype(max(len(vals), 1), modulus)
    return np.array(vals if vals else [0], dtype=dtype)


def retype(a: np.ndarray, modulus: int, length: int) -> np.ndarray:
    dtype = choose_dtype(max(length, 1), modulus)
    if a.dtype == dtype:
        return a
    return np.array([int(v) for v in a], dtype=dtype)


def mul_mod(a: np.ndarray, b: np.ndarray, modulus: int) -> np.ndarray:
    """Plain polynomial product reduced mod `modulus`."""
    length = max(len(a), len(b))
    a = retype(a, modulus, length)
    b = retype(b, modulus, length)
    return np.convolve(a, b) % modulus


def add_mod(a: np.ndarray, b: np.ndarray, modulus: int) -> np.ndarray:
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=object if (a.dtype == object or b.dtype == object) else np.int64)
    out[:len(a)] += a
    out[:len(b)] += b
    return out % modulus


def reduce_monic(a: np.ndarray, monic: np.ndarray, modulus: int) -> np.ndarray:
    """
    Remainder of `a` modulo a monic polynomial (vectorized synthetic division)

    Args:
        a: Dividend coefficients, lowest degree first
        monic: Divisor coefficients with leading coefficient 1
        modulus: Coefficient modulus

    Returns:
        Remainder of length deg(monic)
    """
    _, r = divmod_monic(a, monic, modulus)
    return r


def divmod_monic(a: np.ndarray, monic: np.ndarray, modulus: int) -> Tuple[np.ndarray, np.ndarray]:
    degree = len(monic) - 1
    length = max(len(a), degree + 1)
    dtype = choose_dtype(length, modulus)
    r = np.zeros(length, dtype=dtype)
    r[:len(a)] = retype(np.asarray(a), modulus, length) % modulus
    tail = retype(np.asarray(monic[:degree]), modulus, length) % modulus
    q = np.zeros(max(length - degree, 1), dtype=dtype)
    for i in range(length - 1, degree - 1, -1):
        c = r[i] % modulus
        if c:
            q[i - degree] = c
            r[i - degree:i] = (r[i - degree:i] - c * tail) % modulus
        r[i] = 0
    return q % modulus, r[:degree] % modulus


def is_zero_mod(a: np.ndarray, modulus: int) -> bool:
    return not np.any(np.asarray(a) % modulus)


def int_valuation(x: int, p: int, cap: int) -> int:
    """ord_p(x) capped at `cap` (returns `cap` for zero)."""
    x = int(x)
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


def min_valuation(a: np.ndarray, p: int, cap: int) -> int:
    return min((int_valuation(c, p, cap) for c in a), default=cap)


@lru_cache(maxsize=256)
def binomial_power_mod(p: int, k: int, modulus: int) -> Tuple[int, ...]:
    """(1+T)^k mod `modulus` for k >= 0, via repeated squaring of coefficient arrays."""
    result = as_coeffs([1], modulus)
    base = as_coeffs([1, 1], modulus)
    e = k
    while e:
        if e & 1:
            result = mul_mod(result, base, modulus)
        e >>= 1
        if e:
            base = mul_mod(base, base, modulus)
    return tuple(int(c) for c in result)


@lru_cache(maxsize=256)
def cyclotomic_T_mod(p: int, i: int, modulus: int) -> Tuple[int, ...]:
    """Φ_{p^i}(1+T) = Σ_{t<p} (1+T)^{t p^{i-1}} mod `modulus`; monic of degree p^i - p^{i-1}."""
    if i < 1:
        raise ValueError(f"cyclotomic level must be >= 1, got {i}")
    u = as_coeffs(binomial_power_mod(p, p ** (i - 1), modulus), modulus)
    total = as_coeffs([1], modulus)
    power = as_coeffs([1], modulus)
    for _ in range(p - 1):
        power = mul_mod(power, u, modulus)
        total = add_mod(total, power, modulus)
    return tuple(int(c) for c in total)


@lru_cache(maxsize=256)
def omega_T_mod(p: int, n: int, modulus: int) -> Tuple[int, ...]:
    """(1+T)^{p^n} - 1 mod `modulus`; monic of degree p^n."""
    coeffs = list(binomial_power_mod(p, p ** n, modulus))
    coeffs[0] = (coeffs[0] - 1) % modulus
    return tuple(coeffs)


@lru_cache(maxsize=1024)
def cyclotomic_T_trunc(p: int, i: int, d: int) -> Tuple[int, ...]:
    """Exact integer coefficients of Φ_{p^i}(1+T) up to T^d."""
    q = p ** (i - 1)
    top = min(d, p ** i - q)
    return tuple(sum(comb(t * q, j) for t in range(p)) for j in range(top + 1))


def binomial_series(exponent, d: int) -> Tuple[Fraction, ...]:
    """Coefficients binom(exponent, j), j <= d, for an integer or Fraction exponent."""
    exponent = Fraction(exponent)
    out = [Fraction(1)]
    for j in range(1, d + 1):
        out.append(out[-1] * (exponent - (j - 1)) / j)
    return tuple(out)
