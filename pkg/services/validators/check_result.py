"""
Check Results
Outcome records for identity checks; failed identities are collected, not raised
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List

from services.errors import Mismatch


@dataclass
class CheckResult:
    """Result from one identity or consistency check"""
    name: str
    passed: bool
    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def fail(self, message: str) -> "CheckResult":
        self.passed = False
        self.errors.append(message)
        return self

    def warn(self, message: str) -> "CheckResult":
        self.warnings.append(message)
        return self

    def raise_on_failure(self) -> "CheckResult":
        """Raise Mismatch carrying the first failing coefficient index, if any"""
        if not self.passed:
            raise Mismatch(self.metadata.get("index"), f"{self.name}: {'; '.join(self.errors)}")
        return self


def combine(name: str, results: List[CheckResult]) -> CheckResult:
    """Fold several results into one; passes only if every part passed"""
    combined = CheckResult(name=name, passed=all(r.passed for r in results))
    for r in results:
        combined.errors.extend(f"{r.name}: {e}" for e in r.errors)
        combined.warnings.extend(f"{r.name}: {w}" for w in r.warnings)
        combined.metadata[r.name] = r.metadata
    return combined
