"""generate_e37a_fixture.py

Writes the `.mst` modular-symbol table of the curve 37a1 (y² + y = x³ − x)
at p = 3 used by the fixture tests.

    python scripts/generate_e37a_fixture.py [nmax] [output]

For r = a/m with m prime to 37, 2πi∫_{i∞}^{r} f(z)dz = P(W z₀) − w·P(z₀), where
P(z) = Σ a_n/n·e^{2πinz}, W is the element of Γ₀(37)·W_37 taking ∞ to r and
z₀ is chosen so that z₀ and W z₀ both have imaginary part 1/(m√37). The
Atkin-Lehner sign w is +1. Plus symbols are the real parts over the least
positive real period; they come out integral and are rounded.
"""
import sys
from math import gcd, pi
from pathlib import Path

import numpy as np

P = 3
LEVEL = 37
TERMS = 40000
TOLERANCE = 1e-6


def ap_count(p: int) -> int:
    """a_p = p + 1 − #E(F_p), counting y² + y = x³ − x directly"""
    points = 1
    for x in range(p):
        rhs = (x ** 3 - x) % p
        points += sum(1 for y in range(p) if (y * y + y - rhs) % p == 0)
    return p + 1 - points


def q_coefficients(terms: int) -> np.ndarray:
    """a_1, …, a_terms (index 0 unused) from multiplicativity and the prime-power recursion"""
    smallest = np.zeros(terms + 1, dtype=np.int64)
    for i in range(2, terms + 1):
        if smallest[i] == 0:
            smallest[i::i][smallest[i::i] == 0] = i
    coeffs = np.zeros(terms + 1, dtype=np.int64)
    coeffs[1] = 1
    primes = {}
    for n in range(2, terms + 1):
        p = int(smallest[n])
        m, power = n, 1
        while m % p == 0:
            m //= p
            power *= p
        if m > 1:
            coeffs[n] = coeffs[m] * coeffs[power]
            continue
        if p not in primes:
            primes[p] = ap_count(p)
        ap = primes[p]
        if power == p:
            coeffs[n] = ap
        elif p == LEVEL:
            coeffs[n] = ap * coeffs[n // p]
        else:
            coeffs[n] = ap * coeffs[n // p] - p * coeffs[n // p // p]
    return coeffs


def real_period() -> float:
    """π/AGM(√(e1 − e3), √(e1 − e2)) for the roots of 4x³ − 4x + 1"""
    e3, e2, e1 = np.sort(np.roots([4.0, 0.0, -4.0, 1.0]).real)
    a, b = np.sqrt(e1 - e3), np.sqrt(e1 - e2)
    for _ in range(60):
        a, b = (a + b) / 2, np.sqrt(a * b)
    return pi / a


class SymbolEvaluator:
    def __init__(self, terms: int = TERMS):
        self.coeffs = q_coefficients(terms)
        self.n = np.arange(1, terms + 1)
        self.weights = self.coeffs[1:] / self.n

    def antiderivative(self, z: complex) -> complex:
        """P(z) = Σ a_n/n·e^{2πinz}"""
        return complex(np.sum(self.weights * np.exp(2j * pi * self.n * z)))

    def integral(self, a: int, m: int) -> complex:
        """2πi∫_{i∞}^{a/m} f(z)dz"""
        g = gcd(a, m)
        a, m = a // g, m // g
        if m % LEVEL == 0:
            raise ValueError(f"denominator {m} is not prime to {LEVEL}")
        a %= m
        # W = [[x, a], [37c, m]]·W_37 with x·m − 37ac = 1
        c = 0 if m == 1 else (-pow(a * LEVEL, -1, m)) % m
        height = 1 / (m * np.sqrt(LEVEL))
        z0 = complex(c / m, height)
        w_z0 = complex(a / m, height)
        return self.antiderivative(w_z0) - self.antiderivative(z0)


def symbol_lines(evaluator: SymbolEvaluator, omega: float, p: int, nmax: int):
    def rounded(a: int, m: int) -> int:
        value = evaluator.integral(a, m).real / omega
        nearest = round(value)
        if abs(value - nearest) > TOLERANCE:
            raise ValueError(f"[{a}/{m}] = {value} is not integral")
        return nearest

    yield f"0 0 {rounded(0, 1)}"
    for big_n in range(1, nmax + 2):
        modulus = p ** big_n
        for a in range(1, modulus):
            if a % p:
                yield f"{big_n} {a} {rounded(a, modulus)}"


def main(argv):
    nmax = int(argv[1]) if len(argv) > 1 else 4
    output = Path(argv[2]) if len(argv) > 2 else Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "e37a_p3.mst"
    evaluator = SymbolEvaluator()
    omega = real_period()
    values = list(symbol_lines(evaluator, omega, P, nmax))
    header = [
        f"# 37a1: y^2 + y = x^3 - x, plus modular symbols [a/3^N] for N <= {nmax + 1}",
        f"# real part of 2*pi*i * integral of f from i*inf to a/3^N over the least positive real period {omega:.12f}",
        f"# generated by scripts/generate_e37a_fixture.py ({TERMS} q-expansion terms, values rounded to integers)",
        f"p={P}",
        f"nmax={nmax}",
        "sign=+",
        f"ap={int(evaluator.coeffs[P])}",
        "eps=1",
        f"levelNf={LEVEL}",
        "period=omega_f",
        "denbound=1",
    ]
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text("\n".join(header + values) + "\n")
    print(f"wrote {len(values)} symbols to {output}")


if __name__ == "__main__":
    main(sys.argv)
