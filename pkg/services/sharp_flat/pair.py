"""
Sharp/Flat Pairs and Extraction Traces
Result objects of the extraction: Υ̂_n = (L♯_n, L♭_n) and the per-step division ledger
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from services.iwasawa.invariants import IwasawaInvariants, iwasawa_invariants
from services.iwasawa.lambda_element import LambdaElement
from services.iwasawa.series import SeriesApprox
from services.log_matrix.hecke import HeckeData

Component = Union[LambdaElement, SeriesApprox]


@dataclass
class SharpFlatPair:
    """
    (L♯, L♭) for one tame character

    Components are elements of Λ_level after an extraction, or series
    approximants after stabilization (level is None then).
    """
    sharp: Component
    flat: Component
    hecke: HeckeData
    completed: bool = True
    tame: int = 0
    level: Optional[int] = None

    def as_tuple(self) -> Tuple[Component, Component]:
        return self.sharp, self.flat

    def invariants(self) -> Dict[str, IwasawaInvariants]:
        """Certified (μ, λ) of each component"""
        return {"sharp": iwasawa_invariants(self.sharp), "flat": iwasawa_invariants(self.flat)}

    @property
    def label(self) -> str:
        hat = "hat" if self.completed else "plain"
        return f"{hat}(p={self.hecke.p}, a_p={self.hecke.a}, i={self.tame}, n={self.level})"


@dataclass
class TraceStep:
    """One division of the peeling loop"""
    level: int
    divisor: str
    dividend_degree: int
    remainder_zero: bool
    prec_before: int
    prec_after: int

    @property
    def precision_loss(self) -> int:
        return self.prec_before - self.prec_after

    def render(self) -> str:
        return (f"step level={self.level} divisor={self.divisor} degree={self.dividend_degree} "
                f"remainder={'0' if self.remainder_zero else 'nonzero'} loss={self.precision_loss}")


@dataclass
class ExtractionTrace:
    """Ledger of an extraction run"""
    p: int
    a: int
    eps: int
    level: int
    completed: bool
    tame: int = 0
    steps: List[TraceStep] = field(default_factory=list)

    @property
    def total_loss(self) -> int:
        return sum(s.precision_loss for s in self.steps)

    def render(self) -> List[str]:
        lines = [f"extraction p={self.p} ap={self.a} eps={self.eps} n={self.level} "
                 f"completed={int(self.completed)} i={self.tame}"]
        lines.extend(s.render() for s in self.steps)
        lines.append(f"total_loss={self.total_loss}")
        return lines
