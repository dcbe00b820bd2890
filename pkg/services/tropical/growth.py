"""
Growth Formulas
Kurihara terms, the functions f_{*,n}(v, v₂), the sporadic case, the modesty
algorithm and the Sha-growth / rank-bound formulas built on them
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import floor
from typing import Dict, List, Optional, Tuple

from services.errors import SporadicUnsupported, Tie, UnknownBranch
from services.iwasawa.series import fraction_ord
from services.log_matrix.hecke import HeckeData
from services.padic.scalar import INFINITY, ValQ

logger = logging.getLogger(__name__)


class Star(str, Enum):
    SHARP = "sharp"
    FLAT = "flat"


def _floor_ratio(p: int, exponent: int) -> int:
    """⌊p^exponent/(p+1)⌋, zero for negative exponents"""
    return floor(Fraction(p) ** exponent / (p + 1))


def totient(p: int, n: int) -> int:
    """p^n − p^{n−1}, the number of characters of exact order p^n"""
    if n < 1:
        raise ValueError(f"level must be >= 1, got {n}")
    return p ** n - p ** (n - 1)


def kurihara_q(p: int, n: int, star: Star) -> int:
    """
    ♯/♭-Kurihara term q_n

    ♯ is native on odd n and ♭ on even n; off-parity n are promoted to n+1.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    native = 1 if star == Star.SHARP else 0
    if n % 2 != native:
        n += 1
    return p ** n // (p + 1)


def least_k(p: int, v: ValQ) -> int:
    """Smallest k >= 1 with v >= p^{−k}/2"""
    if not 0 < v < INFINITY:
        raise ValueError(f"k is defined for 0 < v < inf, got {v}")
    k = 1
    while Fraction(1, 2 * p ** k) > v:
        k += 1
    return k


@dataclass(frozen=True)
class GrowthParams:
    """
    (p, v, v₂, n) for the functions f_{*,n}

    v₂ only enters through δ, which vanishes off the boundary v = p^{−k}/2.
    """
    p: int
    v: ValQ
    n: int
    v2: Optional[ValQ] = None

    @classmethod
    def from_hecke(cls, h: HeckeData, n: int, v2: Optional[ValQ] = None) -> "GrowthParams":
        return cls(h.p, h.v, n, v2)

    @property
    def k(self) -> Optional[int]:
        if self.v == 0 or self.v == INFINITY:
            return None
        return least_k(self.p, self.v)

    @property
    def on_boundary(self) -> bool:
        k = self.k
        return k is not None and self.v == Fraction(1, 2 * self.p ** k)

    @property
    def delta(self) -> Fraction:
        if not self.on_boundary:
            return Fraction(0)
        if self.v2 is None:
            raise ValueError(f"v = p^-{self.k}/2 needs v2 to fix delta")
        return min(Fraction(self.v2) - 2 * self.v, Fraction(self.p - 1, self.p ** (self.k + 2)))

    @property
    def phi(self) -> int:
        return totient(self.p, self.n)

    @property
    def sporadic_v2(self) -> Fraction:
        """The v₂ at which the boundary case turns sporadic: 2v(1 + p^{−1} − p^{−2})"""
        p = self.p
        return 2 * Fraction(self.v) * (1 + Fraction(1, p) - Fraction(1, p * p))


def ap_zero_tail(p: int, n: int, star: Star) -> ValQ:
    """
    The a_p = 0 replacement for f_{*,n}

    Only the native star of n contributes (♯ for odd, ♭ for even n); the other is ∞.
    """
    native = Star.SHARP if n % 2 else Star.FLAT
    return Fraction(kurihara_q(p, n, star)) if star == native else INFINITY


def f_star(params: GrowthParams, star: Star) -> Fraction:
    """
    f_{*,n}(v, v₂)

    Raises:
        ValueError: for v = ∞, whose defining limit is not evaluated (see ap_zero_tail)
    """
    p, v, n = params.p, params.v, params.n
    if v == 0:
        return Fraction(0) if star == Star.SHARP else Fraction(p - 1)
    if v == INFINITY:
        raise ValueError("f at v = inf is not evaluated; use ap_zero_tail")
    k, delta, phi = params.k, params.delta, params.phi
    v = Fraction(v)
    same_parity = (n - k) % 2 == 0
    if star == Star.SHARP:
        if not same_parity:
            return phi * k * v + _floor_ratio(p, n - k)
        return phi * ((k - 1) * v + delta) + _floor_ratio(p, n + 1 - k)
    if not same_parity:
        return phi * ((k - 1) * v + delta) + p * _floor_ratio(p, n - k) + p - 1
    return phi * k * v + p * _floor_ratio(p, n - 1 - k) + p - 1


def sporadic_predicate(p: int, v: ValQ, v2: Optional[ValQ], n: int, k: Optional[int],
                       mu_sharp, mu_flat, lam_sharp: int, lam_flat: int) -> bool:
    """Whether (v, v₂, n, μ, λ) lies in the sporadic case"""
    mu_sharp, mu_flat = Fraction(mu_sharp), Fraction(mu_flat)
    if v == 0:
        return mu_sharp == mu_flat and lam_sharp == lam_flat + p - 1
    if v == INFINITY:
        return False
    if k is None:
        k = least_k(p, v)
    v = Fraction(v)
    if v != Fraction(1, 2 * p ** k) or v2 is None:
        return False
    if Fraction(v2) != 2 * v * (1 + Fraction(1, p) - Fraction(1, p * p)):
        return False
    diff = mu_sharp - mu_flat
    edge = v - 2 * v / (p ** 3 + p ** 2)
    if (n - k) % 2:
        return diff > edge or (diff == edge and lam_sharp > lam_flat)
    return diff < -edge or (diff == -edge and lam_sharp <= lam_flat)


def _tail(params: GrowthParams, star: Star) -> ValQ:
    if params.v == INFINITY:
        return ap_zero_tail(params.p, params.n, star)
    return f_star(params, star)


def modesty_totals(params: GrowthParams, mu_sharp, mu_flat, lam_sharp: int, lam_flat: int) -> Dict[Star, ValQ]:
    """(p^n − p^{n−1})μ_* + λ_* + f_{*,n} for both stars"""
    phi = params.phi
    out = {}
    for star, mu, lam in ((Star.SHARP, mu_sharp, lam_sharp), (Star.FLAT, mu_flat, lam_flat)):
        tail = _tail(params, star)
        out[star] = INFINITY if tail == INFINITY else phi * Fraction(mu) + lam + tail
    return out


def modesty_select(p: int, n: int, v: ValQ, v2: Optional[ValQ], mu_sharp, mu_flat,
                   lam_sharp: int, lam_flat: int) -> Star:
    """
    Modesty algorithm: the star with the smaller total

    Raises:
        Tie: when both totals agree
    """
    totals = modesty_totals(GrowthParams(p, v, n, v2), mu_sharp, mu_flat, lam_sharp, lam_flat)
    if totals[Star.SHARP] == totals[Star.FLAT]:
        raise Tie(f"modesty totals agree at n={n}: {totals[Star.SHARP]}")
    return Star.SHARP if totals[Star.SHARP] < totals[Star.FLAT] else Star.FLAT


@dataclass
class SpecialValuePrediction:
    """Predicted ord_p(τ(χ)L(f, χ^{-1}, 1)/Ω_f) for χ of order p^n"""
    n: int
    star: Star
    g_n: Fraction
    value: Fraction


def special_value_ord(h: HeckeData, mu_sharp, mu_flat, lam_sharp: int, lam_flat: int, n: int,
                      v2: Optional[ValQ] = None) -> SpecialValuePrediction:
    """
    g_n/(p^n − p^{n−1}) with g_n = (p^n − p^{n−1})μ_* + λ_* + f_{*,n}(v, v₂)

    Args:
        h: Hecke data; only p and v = ord_p(a_p) enter
        mu_sharp, mu_flat, lam_sharp, lam_flat: Invariants of the pair
        n: Level of the character, n > k
        v2: Second valuation, needed on the boundary v = p^{−k}/2

    Returns:
        SpecialValuePrediction with the star chosen by modesty

    Raises:
        ValueError: n <= k
        SporadicUnsupported: in the sporadic case
        Tie: when the modesty comparison is an equality
    """
    params = GrowthParams.from_hecke(h, n, v2)
    k = params.k
    if k is not None and n <= k:
        raise ValueError(f"special values need n > k = {k}, got n={n}")
    if sporadic_predicate(h.p, params.v, v2, n, k, mu_sharp, mu_flat, lam_sharp, lam_flat):
        raise SporadicUnsupported(f"sporadic case at p={h.p}, a_p={h.a}, n={n}")
    star = modesty_select(h.p, n, params.v, v2, mu_sharp, mu_flat, lam_sharp, lam_flat)
    g_n = modesty_totals(params, mu_sharp, mu_flat, lam_sharp, lam_flat)[star]
    logger.debug(f"special value at n={n}: star={star.value}, g_n={g_n}")
    return SpecialValuePrediction(n, star, Fraction(g_n), Fraction(g_n) / params.phi)


@dataclass
class ShaGrowthReport:
    """e_n − e_{n−1} for one n"""
    n: int
    growth: Fraction
    star: Star
    branch: str
    sporadic: bool = False


def sha_growth_elliptic(p: int, a_p: int, mu_sharp, mu_flat, lam_sharp: int, lam_flat: int,
                        r_inf: int, n: int, n_floor: Optional[int] = None) -> ShaGrowthReport:
    """
    e_n − e_{n−1} for an elliptic curve with good reduction at p

    Args:
        n_floor: Smallest n the caller certifies the asymptotic regime for

    Raises:
        SporadicUnsupported: p ∤ a_p, μ♯ = μ♭ and λ♯ − λ♭ = p − 1
        UnknownBranch: (ord_p a_p, μ♯ − μ♭) fits none of the formulas
    """
    if n_floor is not None and n < n_floor:
        raise ValueError(f"n={n} is below the certified floor {n_floor}")
    phi = totient(p, n)
    mu_sharp, mu_flat = Fraction(mu_sharp), Fraction(mu_flat)
    v = fraction_ord(Fraction(a_p), p)
    diff = mu_sharp - mu_flat

    def value(star: Star, with_q: bool) -> Fraction:
        mu, lam = (mu_sharp, lam_sharp) if star == Star.SHARP else (mu_flat, lam_flat)
        q = kurihara_q(p, n, star) if with_q else 0
        return phi * mu + lam - r_inf + q

    if v == INFINITY or (v >= 1 and diff == 0):
        star = Star.SHARP if n % 2 else Star.FLAT
        return ShaGrowthReport(n, value(star, True), star, "parity")
    if v == 1 and diff <= -1:
        return ShaGrowthReport(n, value(Star.SHARP, True), Star.SHARP, "sharp-dominant")
    if v == 1 and diff >= 1:
        return ShaGrowthReport(n, value(Star.FLAT, True), Star.FLAT, "flat-dominant")
    if v == 0:
        gap = lam_sharp - lam_flat
        if diff < 0 or (diff == 0 and gap < p - 1):
            return ShaGrowthReport(n, value(Star.SHARP, False), Star.SHARP, "ordinary")
        if diff > 0 or (diff == 0 and gap > p - 1):
            return ShaGrowthReport(n, value(Star.FLAT, False), Star.FLAT, "ordinary")
        raise SporadicUnsupported(f"ordinary sporadic case: mu equal and lambda gap {gap} = p - 1")
    raise UnknownBranch(f"no growth formula for ord_p(a_p)={v}, mu_sharp - mu_flat={diff}")


@dataclass
class ShaGrowthTable:
    rows: List[ShaGrowthReport] = field(default_factory=list)
    totals: Dict[int, Fraction] = field(default_factory=dict)
    unsupported: Dict[int, str] = field(default_factory=dict)


def sha_growth_table(p: int, a_p: int, mu_sharp, mu_flat, lam_sharp: int, lam_flat: int, r_inf: int,
                     n_max: int, n_floor: int, base_value: bool = False) -> ShaGrowthTable:
    """
    Growth rows for n_floor <= n <= n_max

    With base_value (ord_p(L(E,1)/Ω_E) = 0) we have e_0 = e_1 = 0 and the
    formulas hold from n = 2, so cumulative e_n are reported as well.

    Args:
        p: The prime
        a_p: Hecke eigenvalue at p
        mu_sharp, mu_flat, lam_sharp, lam_flat: Invariants of the pair
        r_inf: Rank of E over Q_∞
        n_max: Last level
        n_floor: First level the asymptotic regime is certified for
        base_value: ord_p(L(E,1)/Ω_E) = 0

    Returns:
        ShaGrowthTable; levels in the sporadic or an unknown branch go to
        `unsupported` and stop the running totals
    """
    if base_value:
        n_floor = min(n_floor, 2)
    table = ShaGrowthTable()
    running: Optional[Fraction] = Fraction(0) if base_value else None
    for n in range(n_floor, n_max + 1):
        try:
            row = sha_growth_elliptic(p, a_p, mu_sharp, mu_flat, lam_sharp, lam_flat, r_inf, n)
        except (SporadicUnsupported, UnknownBranch) as exc:
            logger.warning(f"growth at n={n} unsupported: {exc}")
            table.unsupported[n] = str(exc)
            running = None
            continue
        table.rows.append(row)
        if running is not None:
            running += row.growth
            table.totals[n] = running
    return table


@dataclass
class RankBound:
    nu_sharp: int
    nu_flat: int
    nu: int
    bound: int
    lambda_sum: int


def _largest_nu(p: int, lam: int, star: Star) -> int:
    """Largest n of the star's parity with λ >= p^n − p^{n−1} − q_n (0 when none)"""
    n = 1 if star == Star.SHARP else 2
    best = 0
    # the threshold grows with n, so the admissible n form an initial segment
    while lam >= totient(p, n) - kurihara_q(p, n, star):
        best = n
        n += 2
    return best


def rank_bound(p: int, lam_sharp: int, lam_flat: int) -> RankBound:
    """
    ν♯, ν♭ and the bound min(q_ν^♯ + λ♯, q_ν^♭ + λ♭) on the analytic rank over Q_∞

    Args:
        p: The prime
        lam_sharp: λ♯
        lam_flat: λ♭

    Returns:
        RankBound; lambda_sum is the cruder bound λ♯ + λ♭ available when a_p = 0

    Raises:
        ValueError: A negative λ
    """
    if lam_sharp < 0 or lam_flat < 0:
        raise ValueError("lambda invariants must be >= 0")
    nu_sharp = _largest_nu(p, lam_sharp, Star.SHARP)
    nu_flat = _largest_nu(p, lam_flat, Star.FLAT)
    nu = max(nu_sharp, nu_flat)
    bound = min(kurihara_q(p, nu, Star.SHARP) + lam_sharp, kurihara_q(p, nu, Star.FLAT) + lam_flat)
    return RankBound(nu_sharp, nu_flat, nu, bound, lam_sharp + lam_flat)


def lambda_comparison(p: int, mu_sharp, mu_flat, lam_sharp: int, lam_flat: int) -> Tuple[Star, int]:
    """
    Ordinary case: which of λ♯, λ♭ is the λ-invariant of L_p(E, α, T)

    Raises:
        Tie: μ♯ = μ♭ and λ♯ = λ♭ + p − 1, where neither is determined
    """
    mu_sharp, mu_flat = Fraction(mu_sharp), Fraction(mu_flat)
    if mu_sharp < mu_flat or (mu_sharp == mu_flat and lam_sharp < lam_flat + p - 1):
        return Star.SHARP, lam_sharp
    if mu_flat < mu_sharp or (mu_sharp == mu_flat and lam_flat < lam_sharp + 1 - p):
        return Star.FLAT, lam_flat
    raise Tie(f"lambda undetermined: lambda_sharp = lambda_flat + {p - 1}")


def ordinary_lambda_from_modesty(p: int, mu_sharp, mu_flat, lam_sharp: int, lam_flat: int) -> Tuple[Star, int]:
    """The v = 0 modesty choice at an n large enough for μ to dominate"""
    gap = abs(Fraction(mu_sharp) - Fraction(mu_flat))
    n = 2
    while gap and totient(p, n) * gap <= abs(lam_sharp - lam_flat) + p:
        n += 1
    star = modesty_select(p, n, 0, None, mu_sharp, mu_flat, lam_sharp, lam_flat)
    return star, lam_sharp if star == Star.SHARP else lam_flat


@dataclass
class RegionClass:
    """Which star governs odd and even n (None on a tie) for given (v, μ♯ − μ♭)"""
    v: ValQ
    mu_diff: Fraction
    odd: Optional[Star]
    even: Optional[Star]

    def describe(self) -> str:
        name = lambda s: "tie" if s is None else s.value
        shown = "inf" if self.v == INFINITY else str(self.v)
        return f"v={shown} mu_sharp-mu_flat={self.mu_diff}: odd n -> {name(self.odd)}, even n -> {name(self.even)}"


def region_classifier(p: int, v: ValQ, mu_diff, v2: Optional[ValQ] = None) -> RegionClass:
    """
    Asymptotic modesty choice with λ♯ = λ♭ = 0

    Evaluated at a pair of consecutive n far enough out that the μ-term and the
    leading part of f dominate every bounded contribution.
    """
    mu_diff = Fraction(mu_diff)
    k = 0 if v == 0 or v == INFINITY else least_k(p, v)
    base = 2 * k + 24
    stars = {}
    for n in (base, base + 1):
        try:
            stars[n % 2] = modesty_select(p, n, v, v2, mu_diff, 0, 0, 0)
        except Tie:
            stars[n % 2] = None
    return RegionClass(v, mu_diff, stars[1], stars[0])
