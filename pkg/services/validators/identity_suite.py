"""
Identity Suite
Runs every runtime-checkable identity for one table, tame character and level
"""
import logging
from typing import Callable, Dict, List, Optional

from config.toolkit_config import TOOLKIT_CONFIG
from services.errors import ToolkitError, Undetermined
from services.log_matrix.log_product import (
    det_identity_check,
    diagonalization_check,
    fe_units_check,
    half_log_decomposition_check,
    hat_invariance_check,
    hat_plain_at_zero_check,
)
from services.mazur_tate.riemann import interpolation_at_zero, riemann_routes_check
from services.mazur_tate.table import ModularSymbolTable
from services.mazur_tate.theta import queue_from_table, symmetry_check, validate_queue
from services.padic.characters import level_exponent
from services.sharp_flat.analysis import gcd_structure
from services.sharp_flat.extraction import extract, reconstruction_check
from services.sharp_flat.identities import (
    functional_equation_check,
    hat_to_plain,
    hat_to_plain_check,
    main_theorem_check,
    special_value_table_check,
)
from services.sharp_flat.pair import SharpFlatPair
from services.validators.check_result import CheckResult

logger = logging.getLogger(__name__)

SYNTHETIC_REASON = "synthetic table: no eigenform behind the symbols"


def skipped(name: str, reason: str) -> CheckResult:
    result = CheckResult(name=name, passed=True)
    result.warn(reason)
    result.metadata["skipped"] = True
    return result


class IdentitySuite:
    """Collects CheckResults; an identity that raises becomes a failed (or skipped) result"""

    def __init__(self, config: Dict = None):
        """
        Args:
            config: Configuration dict (uses TOOLKIT_CONFIG if not provided)
        """
        self.config = config or TOOLKIT_CONFIG
        self.truncation = self.config["series"]["default_truncation"]

    def _guard(self, name: str, check: Callable[[], CheckResult]) -> CheckResult:
        try:
            return check()
        except Undetermined as exc:
            logger.warning(f"{name} undetermined: {exc}")
            return skipped(name, f"undetermined: {exc}")
        except ValueError as exc:
            return skipped(name, str(exc))
        except ToolkitError as exc:
            logger.debug(f"{name} raised {type(exc).__name__}: {exc}")
            return CheckResult(name=name, passed=False, errors=[f"{type(exc).__name__}: {exc}"])

    def table_checks(self, table: ModularSymbolTable, i: int, n: int) -> List[CheckResult]:
        """
        Checks on the symbols alone: symmetry, the queue relations, the two
        Riemann-sum routes and, for the trivial character on a + table, the
        interpolation at zero

        Args:
            table: Modular-symbol table
            i: Tame index
            n: Level

        Returns:
            List of CheckResults
        """
        q = queue_from_table(table, i).truncated(n)
        results = [
            self._guard("symmetry", lambda: symmetry_check(table)),
            self._guard("queue", lambda: validate_queue(q)),
            self._guard("riemann_routes", lambda: riemann_routes_check(table, i, level_exponent(table.p, n))),
        ]
        if i == 0 and table.sign > 0:
            if table.synthetic:
                results.append(skipped("interpolation_at_zero", SYNTHETIC_REASON))
            else:
                results.append(self._guard("interpolation_at_zero",
                                           lambda: interpolation_at_zero(table, level_exponent(table.p, n))))
        return results

    def log_matrix_checks(self, pair: SharpFlatPair) -> List[CheckResult]:
        """Determinant, T = 0, diagonalization and Φ̂-invariance lines; half-log lines when a_p = 0"""
        h, n = pair.hecke, pair.level
        d = min(self.truncation, 27)
        results = [
            self._guard("det_identity", lambda: det_identity_check(h, n, d=d, completed=pair.completed)),
            self._guard("hat_plain_at_zero", lambda: hat_plain_at_zero_check(h, n)),
            self._guard("diagonalization", lambda: diagonalization_check(h)),
            self._guard("hat_invariance", lambda: hat_invariance_check(h, range(1, n + 1), level=n)),
        ]
        if h.is_ap_zero:
            factors = max(1, n // 2)
            results.append(self._guard("half_log_decomposition",
                                       lambda: half_log_decomposition_check(h, factors, d=self.truncation)))
            results.append(self._guard("half_log_functional_equation",
                                       lambda: fe_units_check(h.p, factors, d=self.truncation)))
        return results

    def functional_equation_checks(self, pair: SharpFlatPair) -> List[CheckResult]:
        """
        The completed functional equation (ε(p) = 1) and, when a_p = 0, the
        W-twisted plain one together with its untwisted control

        Args:
            pair: Extracted pair

        Returns:
            List of CheckResults; the control line passes only when the
            untwisted comparison fails
        """
        h = pair.hecke
        results = []
        if pair.completed and h.eps == 1:
            results.append(self._guard("functional_equation", lambda: functional_equation_check(pair)))
        if h.is_ap_zero:
            plain = self._guard_pair(pair)
            if plain is None:
                return results + [skipped("functional_equation_twisted", "no plain pair")]
            twisted = self._guard("functional_equation_twisted", lambda: functional_equation_check(plain))
            results.append(twisted)
            control = self._guard("functional_equation_untwisted",
                                  lambda: functional_equation_check(plain, use_twist=False))
            results.append(self.needs_twist(twisted, control))
        return results

    @staticmethod
    def needs_twist(twisted: CheckResult, control: CheckResult) -> CheckResult:
        """The twisted comparison holds and the untwisted one fails"""
        negative = CheckResult(name="functional_equation_needs_twist", passed=True)
        if twisted.metadata.get("skipped") or control.metadata.get("skipped"):
            return skipped(negative.name, "a functional-equation line was skipped")
        if not twisted.passed:
            negative.fail("the twisted functional equation fails, so the control proves nothing")
        if control.passed:
            negative.fail("the untwisted functional equation unexpectedly holds")
        return negative

    def _guard_pair(self, pair: SharpFlatPair) -> Optional[SharpFlatPair]:
        try:
            return hat_to_plain(pair)
        except ToolkitError as exc:
            logger.warning(f"no plain pair for {pair.label}: {exc}")
            return None

    def run(self, table: ModularSymbolTable, i: int = 0, n: Optional[int] = None,
            completed: Optional[bool] = None, functional_equation: bool = True) -> List[CheckResult]:
        """
        Every identity for (table, ω^i) at level n

        Args:
            table: Modular-symbol table
            i: Tame index
            n: Level (the table's top level by default)
            completed: Extraction flavour (config default per prime when None)
            functional_equation: Include the functional-equation lines

            Tables marked origin=synthetic skip the lines that need genuine
            modular symbols: interpolation at zero, special values and the
            functional equation.

        Returns:
            One CheckResult per identity
        """
        n = table.nmax if n is None else n
        results = self.table_checks(table, i, n)
        q = queue_from_table(table, i).truncated(n)
        try:
            pair, _ = extract(q, completed=completed, validate=False, config=self.config)
        except ToolkitError as exc:
            results.append(CheckResult(name="extraction", passed=False, errors=[f"{type(exc).__name__}: {exc}"]))
            return results
        if table.synthetic:
            special = skipped("special_values", SYNTHETIC_REASON)
        else:
            special = self._guard("special_values", lambda: special_value_table_check(pair))
        results.extend([
            self._guard("reconstruction", lambda: reconstruction_check(pair, q)),
            self._guard("main_theorem", lambda: main_theorem_check(table, i, n, completed=pair.completed)),
            special,
            self._guard("hat_to_plain_at_zero", lambda: hat_to_plain_check(pair)),
            self._guard("gcd_structure", lambda: gcd_structure(pair)[1]),
        ])
        results.extend(self.log_matrix_checks(pair))
        if functional_equation and table.synthetic:
            results.append(skipped("functional_equation", SYNTHETIC_REASON))
        elif functional_equation:
            results.extend(self.functional_equation_checks(pair))
        failed = [r.name for r in results if not r.passed]
        logger.info(f"Identity suite for {pair.label}: {len(results) - len(failed)}/{len(results)} passed")
        return results
