"""
Pydantic models for the sharp/flat toolkit's job parameters and reports
"""
from datetime import datetime
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator

from services.padic.scalar import is_prime


class JobConfig(BaseModel):
    """Parameters of one command invocation, echoed into every output header"""
    command: Literal["extract", "analyze", "growth", "verify"]
    inputs: List[str] = Field(default_factory=list, description="Input table or pair-file stems")
    p: Optional[int] = Field(None, description="The prime; read from the input when omitted")
    precision: int = Field(40, ge=1, description="Absolute p-adic precision M")
    truncation: int = Field(30, ge=0, description="T-adic truncation order d")
    level: Optional[int] = Field(None, ge=0, description="Λ-level n; defaults to the table's top level")
    tame: int = Field(0, ge=0, description="Tame index i of ω^i")
    n_floor: int = Field(2, ge=0, description="Threshold past which asymptotic formulas are applied")
    output_format: Literal["text", "lines"] = Field("text", description="Human-readable or machine-readable lines")

    @field_validator("p")
    @classmethod
    def p_is_prime(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and not is_prime(value):
            raise ValueError(f"{value} is not prime")
        return value

    def header(self) -> Dict[str, Any]:
        """key=value pairs for report and file headers"""
        fields = self.model_dump(exclude={"inputs", "output_format"})
        return {k: ("none" if v is None else v) for k, v in fields.items()}


class IwasawaInvariantsModel(BaseModel):
    """(μ, λ) of one component"""
    component: str = Field(description="sharp, flat, plus or minus")
    mu: str = Field(description="μ as an exact rational")
    lam: Optional[int] = Field(None, description="λ; None when not defined")


class VanishingRow(BaseModel):
    """Orders of vanishing at ζ_{p^m} − 1 (T = 0 for m = 0)"""
    m: int
    sharp: str = Field(description="Order of the sharp component ('inf' when it vanishes)")
    flat: str = Field(description="Order of the flat component")
    d_an: int = Field(description="Vector order of vanishing")
    ord_alpha: int
    ord_beta: Optional[int] = Field(None, description="Absent in the ordinary case")
    equiroots: Optional[bool] = None


class GcdReport(BaseModel):
    """Shape of gcd(L♯, L♭): T-power and cyclotomic exponents"""
    t_exponent: str
    exponents: Dict[int, str] = Field(default_factory=dict, description="m -> ε_m − 1")
    branches: Dict[int, str] = Field(default_factory=dict, description="m -> one-step order comparison case")
    consistent: bool = True
    common_zeros_bound: Optional[int] = Field(None, description="Common zeros of L_α, L_β off roots of unity")
    assumption: Optional[str] = None


class RankBoundReport(BaseModel):
    """ν♯, ν♭ and the analytic-rank bound over the cyclotomic tower"""
    nu_sharp: int
    nu_flat: int
    nu: int
    bound: int
    lambda_sum: int = Field(description="λ♯ + λ♭, the bound available when a_p = 0")


class AnalysisReport(BaseModel):
    """Consolidated output of `analyze`"""
    created: datetime = Field(default_factory=datetime.now)
    header: Dict[str, Any] = Field(default_factory=dict)
    invariants: List[IwasawaInvariantsModel] = Field(default_factory=list)
    vanishing: List[VanishingRow] = Field(default_factory=list)
    gcd: Optional[GcdReport] = None
    rank_bound: Optional[RankBoundReport] = None
    queue_invariants: List[IwasawaInvariantsModel] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)


class GrowthRow(BaseModel):
    """One n of the growth table"""
    n: int
    star: Optional[str] = Field(None, description="sharp or flat; None on a flagged row")
    branch: str = Field(description="Formula branch, or the reason the row is flagged")
    growth: Optional[str] = Field(None, description="e_n − e_{n−1}")
    total: Optional[str] = Field(None, description="e_n, when the base value is known")
    g_n: Optional[str] = Field(None, description="Special-value numerator g_n")
    flagged: bool = False


class CheckLine(BaseModel):
    """Pass/fail line of one identity"""
    name: str
    passed: bool
    skipped: bool = False
    errors: List[str] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)

    def render(self) -> str:
        status = "SKIP" if self.skipped else ("PASS" if self.passed else "FAIL")
        detail = "; ".join(self.errors or self.warnings)
        return f"{status} {self.name}" + (f" :: {detail}" if detail else "")


class VerificationReport(BaseModel):
    """Output of `verify`"""
    created: datetime = Field(default_factory=datetime.now)
    header: Dict[str, Any] = Field(default_factory=dict)
    lines: List[CheckLine] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(line.passed or line.skipped for line in self.lines)
