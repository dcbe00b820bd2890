"""
Toolkit Errors
Domain exceptions shared by the p-adic, Iwasawa, tropical and sharp/flat services
"""
from typing import Optional


class ToolkitError(Exception):
    """Base class; `exit_code` is what the command-line front end returns"""
    exit_code = 1


class ParseError(ToolkitError):
    """Malformed modular-symbol table or coefficient file"""
    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class IncompleteLevel(ParseError):
    """A level of a modular-symbol table is missing residue classes"""

    def __init__(self, level: int, missing: int):
        self.level = level
        self.missing = missing
        super().__init__(f"level N={level} is missing {missing} residue classes")


class DenominatorViolation(ParseError):
    """An entry has a denominator not dividing the declared bound"""


class NotAUnit(ToolkitError, ValueError):
    exit_code = 2


class LevelUnderflow(ToolkitError, ValueError):
    exit_code = 2


class PrecisionExhausted(ToolkitError):
    """A valuation or division would need digits beyond the working precision"""
    exit_code = 3


class Undetermined(ToolkitError):
    """Precision or truncation cannot certify the requested quantity"""
    exit_code = 3


class NotStabilized(Undetermined):
    pass


class RelationViolated(ToolkitError):
    """Queue relation fails at `level`"""
    exit_code = 4

    def __init__(self, level: int, detail: str = ""):
        self.level = level
        super().__init__(f"queue relation violated at level {level}" + (f": {detail}" if detail else ""))


class DivisionRemainder(ToolkitError):
    """Exact division by the level-`level` cyclotomic factor left a remainder"""
    exit_code = 4

    def __init__(self, level: int, detail: str = ""):
        self.level = level
        super().__init__(f"nonzero remainder dividing by Phi at level {level}" + (f": {detail}" if detail else ""))


class Mismatch(ToolkitError):
    """An identity failed at coefficient `index`"""
    exit_code = 5

    def __init__(self, index, detail: str = ""):
        self.index = index
        super().__init__(f"mismatch at coefficient {index}" + (f": {detail}" if detail else ""))


class Tie(ToolkitError):
    """The modesty comparison is an equality"""
    exit_code = 6


class SporadicUnsupported(ToolkitError):
    exit_code = 6


class UnknownBranch(ToolkitError):
    """No bullet of the Sha growth theorem covers the parameters"""
    exit_code = 6
