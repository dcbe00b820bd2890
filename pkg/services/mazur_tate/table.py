"""
Modular-Symbol Tables
Line-based `.mst` files: `key=value` headers, then one `N a value` line per residue class
"""
import hashlib
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Tuple, Union

from config.toolkit_config import TOOLKIT_CONFIG
from services.errors import DenominatorViolation, IncompleteLevel, ParseError
from services.log_matrix.hecke import HeckeData
from services.padic.characters import level_exponent
from services.padic.scalar import is_prime

logger = logging.getLogger(__name__)

PERIODS = ("omega_f", "neron")
ORIGINS = ("symbols", "synthetic")
REQUIRED_KEYS = ("p", "nmax", "sign", "ap")


def units_mod(p: int, big_n: int) -> List[int]:
    """Representatives of (Z/p^N)^× in [0, p^N); N = 0 gives [0]"""
    if big_n == 0:
        return [0]
    modulus = p ** big_n
    return [a for a in range(1, modulus) if a % p]


@dataclass(frozen=True)
class ModularSymbolTable:
    """
    The values [a/p^N]^± for every unit a and 1 <= N <= N_max

    Levels below level_exponent(p, 0) are optional; when present they hold
    [0/1] (N = 0) and, for p = 2, [1/2] (N = 1).
    """
    p: int
    nmax: int
    sign: int
    hecke: HeckeData
    period: str = "omega_f"
    denbound: int = 1
    entries: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)
    source_sha256: Optional[str] = None
    origin: str = "symbols"

    @property
    def big_n_max(self) -> int:
        return level_exponent(self.p, self.nmax)

    @property
    def first_level(self) -> int:
        return level_exponent(self.p, 0)

    def has_level(self, big_n: int) -> bool:
        return all((big_n, a) in self.entries for a in units_mod(self.p, big_n))

    def value(self, big_n: int, a: int) -> Fraction:
        """[a/p^N]; a is reduced modulo p^N"""
        key = (big_n, a % (self.p ** big_n) if big_n else 0)
        try:
            return self.entries[key]
        except KeyError:
            raise KeyError(f"no modular symbol [{a}/{self.p}^{big_n}] in the table") from None

    def level_values(self, big_n: int) -> Dict[int, Fraction]:
        return {a: self.value(big_n, a) for a in units_mod(self.p, big_n)}

    @property
    def has_bottom(self) -> bool:
        """All levels below the first Λ-level are present"""
        return all(self.has_level(big_n) for big_n in range(self.first_level))

    def zero_symbol(self) -> Fraction:
        """[0/1]"""
        if (0, 0) not in self.entries:
            raise KeyError("the table has no N = 0 line for [0/1]")
        return self.entries[(0, 0)]

    def header(self) -> Dict[str, Union[int, str]]:
        header = {
            "p": self.p,
            "nmax": self.nmax,
            "sign": "+" if self.sign > 0 else "-",
            "ap": self.hecke.a,
            "eps": self.hecke.eps,
            "levelNf": self.hecke.level_nf,
            "period": self.period,
            "denbound": self.denbound,
        }
        if self.origin != "symbols":
            header["origin"] = self.origin
        return header

    @property
    def synthetic(self) -> bool:
        """Built from a chosen Υ rather than from modular symbols of an eigenform"""
        return self.origin == "synthetic"

    def render(self) -> str:
        """Serialize in the `.mst` format"""
        lines = [f"{k}={v}" for k, v in self.header().items()]
        for (big_n, a), value in sorted(self.entries.items()):
            lines.append(f"{big_n} {a} {value}")
        return "\n".join(lines) + "\n"


def _parse_int(key: str, raw: str, line: int) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"header {key} must be an integer, got {raw!r}", line) from None


def _parse_value(raw: str, line: int) -> Fraction:
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"value {raw!r} is neither an integer nor an exact rational", line) from None


def _parse_sign(raw: str, line: int) -> int:
    if raw in ("+", "+1", "1"):
        return 1
    if raw in ("-", "-1"):
        return -1
    raise ParseError(f"sign must be + or -, got {raw!r}", line)


def parse_table(lines: Iterable[str], prec: Optional[int] = None, source_sha256: Optional[str] = None,
                config: Dict = None) -> ModularSymbolTable:
    """
    Parse `.mst` content

    Args:
        lines: File lines
        prec: Working precision attached to the Hecke data
        source_sha256: Hash of the raw content, recorded for report headers

    Returns:
        ModularSymbolTable

    Raises:
        ParseError: Malformed header or entry line
        IncompleteLevel: A level misses residue classes
        DenominatorViolation: A value's denominator does not divide denbound
    """
    config = config or TOOLKIT_CONFIG
    known = set(config["io"]["table_keys"])
    headers: Dict[str, Tuple[str, int]] = {}
    raw_entries: List[Tuple[int, int, Fraction, int]] = []

    for number, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        if "=" in text:
            key, _, value = (s.strip() for s in text.partition("="))
            if key not in known:
                raise ParseError(f"unknown header {key!r}", number)
            if key in headers:
                raise ParseError(f"duplicate header {key!r}", number)
            headers[key] = (value, number)
            continue
        parts = text.split()
        if len(parts) != 3:
            raise ParseError(f"expected `N a value`, got {text!r}", number)
        try:
            big_n, a = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"level and residue must be integers in {text!r}", number) from None
        raw_entries.append((big_n, a, _parse_value(parts[2], number), number))

    for key in REQUIRED_KEYS:
        if key not in headers:
            raise ParseError(f"missing header {key!r}")

    p = _parse_int("p", *headers["p"])
    if not is_prime(p):
        raise ParseError(f"p={p} is not prime", headers["p"][1])
    nmax = _parse_int("nmax", *headers["nmax"])
    if nmax < 0:
        raise ParseError(f"nmax must be >= 0, got {nmax}", headers["nmax"][1])
    sign = _parse_sign(*headers["sign"])
    ap = _parse_int("ap", *headers["ap"])
    eps = _parse_int("eps", *headers["eps"]) if "eps" in headers else 1
    if eps not in (1, -1):
        raise ParseError(f"eps must be ±1, got {eps}", headers["eps"][1])
    level_nf = _parse_int("levelNf", *headers["levelNf"]) if "levelNf" in headers else 1
    if level_nf < 1 or level_nf % p == 0:
        raise ParseError(f"levelNf={level_nf} must be positive and prime to p", headers.get("levelNf", ("", None))[1])
    period = headers["period"][0] if "period" in headers else "omega_f"
    if period not in PERIODS:
        raise ParseError(f"period must be one of {PERIODS}, got {period!r}", headers["period"][1])
    denbound = _parse_int("denbound", *headers["denbound"]) if "denbound" in headers else 1
    if denbound < 1:
        raise ParseError(f"denbound must be >= 1, got {denbound}", headers["denbound"][1])
    origin = headers["origin"][0] if "origin" in headers else "symbols"
    if origin not in ORIGINS:
        raise ParseError(f"origin must be one of {ORIGINS}, got {origin!r}", headers["origin"][1])

    top = level_exponent(p, nmax)
    entries: Dict[Tuple[int, int], Fraction] = {}
    for big_n, a, value, number in raw_entries:
        if big_n < 0 or big_n > top:
            raise ParseError(f"level N={big_n} outside 0..{top}", number)
        if big_n == 0:
            if a != 0:
                raise ParseError(f"the N = 0 line must read `0 0 value`, got residue {a}", number)
        elif gcd(a, p) != 1 or not 0 < a < p ** big_n:
            raise ParseError(f"{a} is not a reduced unit modulo {p}^{big_n}", number)
        if (big_n, a) in entries:
            raise ParseError(f"duplicate entry for N={big_n}, a={a}", number)
        if denbound % value.denominator:
            raise DenominatorViolation(f"denominator {value.denominator} does not divide denbound={denbound}", number)
        entries[(big_n, a)] = value

    first = level_exponent(p, 0)
    present = {big_n for big_n, _ in entries}
    for big_n in range(0, top + 1):
        if big_n < first and big_n not in present:
            continue
        missing = sum(1 for a in units_mod(p, big_n) if (big_n, a) not in entries)
        if missing:
            raise IncompleteLevel(big_n, missing)

    hecke = HeckeData(p, ap, eps=eps, level_nf=level_nf,
                      prec=prec if prec is not None else config["precision"]["default_digits"])
    table = ModularSymbolTable(p, nmax, sign, hecke, period, denbound, entries, source_sha256, origin)
    logger.info(f"Loaded modular-symbol table: p={p}, a_p={ap}, nmax={nmax}, sign={headers['sign'][0]}, "
                f"{len(entries)} entries")
    return table


def load_table(path: Union[str, Path], prec: Optional[int] = None, config: Dict = None) -> ModularSymbolTable:
    """Read and validate a `.mst` file"""
    config = config or TOOLKIT_CONFIG
    raw = Path(path).read_bytes()
    digest = hashlib.new(config["io"]["hash_algorithm"], raw).hexdigest()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path} is not UTF-8 text: {exc}") from exc
    return parse_table(text.splitlines(), prec=prec, source_sha256=digest, config=config)



def hecke_consistent_table(p: int, ap: int, nmax: int, free_values: Callable[[int, int], Fraction],
                           eps: int = 1, sign: int = 1, level_nf: int = 1, prec: int = 40) -> ModularSymbolTable:
    """
    A table satisfying the distribution relation at p by construction

    For every unit c modulo p^{N−1},
    a_p[c/p^{N−1}] = Σ_j [(c + j·p^{N−1})/p^N] + ε[c/p^{N−2}].
    All but one lift orbit of c take values from `free_values(N, a)`; the last
    one is solved for. Values at a and −a are mirrored by `sign`, and [0/1]
    is 0 for sign −1.

    Returns:
        ModularSymbolTable with its bottom levels
    """
    zero = Fraction(free_values(0, 0)) if sign > 0 else Fraction(0)
    entries: Dict[Tuple[int, int], Fraction] = {(0, 0): zero}

    def symbol(big_n: int, a: int) -> Fraction:
        if big_n <= 0:
            return entries[(0, 0)]
        a %= p ** big_n
        if a % p == 0:
            return symbol(big_n - 1, a // p)
        return entries[(big_n, a)]

    for big_n in range(1, level_exponent(p, nmax) + 1):
        modulus = p ** big_n
        lower = p ** (big_n - 1)
        bases = [0] if big_n == 1 else units_mod(p, big_n - 1)
        for c in bases:
            lifts = [(c + j * lower) % modulus for j in range(p)]
            units = [a for a in lifts if a % p]
            if all((big_n, a) in entries for a in units):
                continue
            target = ap * symbol(big_n - 1, c) - eps * symbol(big_n - 2, c)
            target -= sum(symbol(big_n, a) for a in lifts if a % p == 0)
            # orbits of a ↦ −a inside the lifts; a lift either pairs with its mirror or is fixed
            orbits: List[List[int]] = []
            for a in units:
                mirror = (-a) % modulus
                if any(a in orbit for orbit in orbits):
                    continue
                orbits.append([a, mirror] if mirror in units and mirror != a else [a])
            for orbit in orbits[:-1]:
                value = Fraction(free_values(big_n, orbit[0]))
                entries[(big_n, orbit[0])] = value
                if len(orbit) == 2:
                    entries[(big_n, orbit[1])] = sign * value
            remaining = target - sum(entries[(big_n, a)] for orbit in orbits[:-1] for a in orbit)
            last = orbits[-1]
            if len(last) == 1:
                entries[(big_n, last[0])] = remaining
            elif sign > 0:
                entries[(big_n, last[0])] = entries[(big_n, last[1])] = remaining / 2
            else:
                value = Fraction(free_values(big_n, last[0]))
                entries[(big_n, last[0])], entries[(big_n, last[1])] = value, -value
            for a in units:
                mirror = (-a) % modulus
                if mirror not in units:
                    entries[(big_n, mirror)] = sign * entries[(big_n, a)]
    hecke = HeckeData(p, ap, eps=eps, level_nf=level_nf, prec=prec)
    bound = 1
    for value in entries.values():
        bound = bound * value.denominator // gcd(bound, value.denominator)
    logger.debug(f"built a Hecke-consistent table: p={p}, a_p={ap}, nmax={nmax}, {len(entries)} entries")
    return ModularSymbolTable(p, nmax, sign, hecke, "omega_f", bound, entries)
