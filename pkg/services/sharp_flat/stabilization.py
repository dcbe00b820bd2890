"""
Limits over the Tower
Stabilization of Υ̂_n into series approximants, and the parity-wise invariants
μ± and λ± read off a queue sequence
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from config.toolkit_config import TOOLKIT_CONFIG
from services.errors import NotStabilized, Undetermined
from services.iwasawa.invariants import IwasawaInvariants, iwasawa_invariants, stabilize_levels
from services.mazur_tate.theta import QueueSequence
from services.sharp_flat.extraction import pair_components
from services.sharp_flat.pair import SharpFlatPair
from services.tropical.growth import Star, kurihara_q

logger = logging.getLogger(__name__)


def stabilize_pairs(pairs: Sequence[SharpFlatPair]) -> SharpFlatPair:
    """
    (L♯, L♭) as series approximants from extractions at consecutive levels

    Each coefficient's ledger is the number of digits on which the last two
    levels agree.

    Raises:
        Undetermined: Fewer than two levels
        ValueError: The pairs mix completed and plain extractions
    """
    if len(pairs) < 2:
        raise Undetermined("stabilization needs pairs at two levels at least")
    if len({p.completed for p in pairs}) > 1:
        raise ValueError("cannot stabilize completed and plain pairs together")
    ordered = sorted(pairs, key=lambda pair: pair.level)
    sharps = [pair_components(pair)[0] for pair in ordered]
    flats = [pair_components(pair)[1] for pair in ordered]
    top = ordered[-1]
    sharp, flat = stabilize_levels(sharps), stabilize_levels(flats)
    logger.info(f"Stabilized {top.label} against level {ordered[-2].level}: "
                f"min agreement sharp={min(sharp.ledger)}, flat={min(flat.ledger)}")
    return SharpFlatPair(sharp, flat, top.hecke, top.completed, top.tame, None)


def queue_level_invariants(q: QueueSequence) -> List[Optional[IwasawaInvariants]]:
    """(μ(Q_n), λ(Q_n)) per level; None where Q_n vanishes to working precision"""
    out = []
    for n, theta in enumerate(q.thetas):
        if theta.is_zero:
            logger.debug(f"Q_{n} vanishes to working precision")
            out.append(None)
            continue
        out.append(iwasawa_invariants(theta))
    return out


@dataclass
class QueueInvariants:
    """μ±, and λ± when μ+ = μ−"""
    mu_plus: Fraction
    mu_minus: Fraction
    lam_plus: Optional[int]
    lam_minus: Optional[int]
    levels: Dict[int, IwasawaInvariants] = field(default_factory=dict)


def _stable(values: List, window: int, what: str):
    if len(values) < window:
        raise NotStabilized(f"{what}: {len(values)} levels of this parity, {window} needed")
    tail = values[-window:]
    if any(v != tail[-1] for v in tail):
        raise NotStabilized(f"{what} has not stabilized: last values {tail}")
    return tail[-1]


def queue_invariants_pm(q: QueueSequence, window: Optional[int] = None, config: Dict = None) -> QueueInvariants:
    """
    μ± and λ± of a queue sequence

    The signs are matched to the sharp/flat pair: μ+ (μ−) is the value μ(Q_n)
    settles on over odd (even) n, λ+ is the limit of λ(Q_n) − q_n^♯ over odd
    n and λ− that of λ(Q_n) − q_n^♭ over even n, so that μ+ = μ♯, λ+ = λ♯,
    μ− = μ♭ and λ− = λ♭. Both limits are the common value over the last
    `window` levels of each parity. For p = 2 the signs are exchanged.

    Args:
        q: Queue sequence with at least `window` nonzero levels of each parity
        window: Levels of one parity that must agree; defaults to the config
        config: Configuration dict (uses TOOLKIT_CONFIG if not provided)

    Returns:
        QueueInvariants; λ± are None when μ+ ≠ μ−

    Raises:
        NotStabilized: A parity has too few levels or has not settled
    """
    config = config or TOOLKIT_CONFIG
    window = window if window is not None else config["sharp_flat"]["parity_window"]
    p = q.hecke.p
    per_level = {n: inv for n, inv in enumerate(queue_level_invariants(q)) if inv is not None}
    odd = [n for n in sorted(per_level) if n % 2 == 1]
    even = [n for n in sorted(per_level) if n % 2 == 0]
    mu_plus = _stable([per_level[n].mu for n in odd], window, "mu on odd levels")
    mu_minus = _stable([per_level[n].mu for n in even], window, "mu on even levels")
    lam_plus = lam_minus = None
    if mu_plus == mu_minus:
        lam_plus = _stable([per_level[n].lam - kurihara_q(p, n, Star.SHARP) for n in odd], window,
                           "lambda - q_sharp on odd levels")
        lam_minus = _stable([per_level[n].lam - kurihara_q(p, n, Star.FLAT) for n in even], window,
                            "lambda - q_flat on even levels")
    else:
        logger.warning(f"mu_+ = {mu_plus} differs from mu_- = {mu_minus}; lambda_± are not defined")
    if p == 2:
        mu_plus, mu_minus = mu_minus, mu_plus
        lam_plus, lam_minus = lam_minus, lam_plus
    logger.info(f"Queue invariants: mu_+={mu_plus}, mu_-={mu_minus}, lambda_+={lam_plus}, lambda_-={lam_minus}")
    return QueueInvariants(Fraction(mu_plus), Fraction(mu_minus), lam_plus, lam_minus, per_level)
