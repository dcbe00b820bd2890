"""
Coefficient Files
`<stem>.sharp.coef` / `<stem>.flat.coef` (one `index value precision` line per T-power under
`# key=value` headers) and the `<stem>.trace` extraction ledger
"""
import hashlib
import logging
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

from config.toolkit_config import TOOLKIT_CONFIG
from services.errors import ParseError
from services.iwasawa.lambda_element import LambdaElement
from services.iwasawa.series import SeriesApprox
from services.log_matrix.hecke import HeckeData
from services.padic.scalar import INFINITY
from services.sharp_flat.pair import Component, ExtractionTrace, SharpFlatPair

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
Row = Tuple[int, Fraction, object]


def write_atomic(path: PathLike, text: str) -> Path:
    """Write into a temporary file beside `path`, then move it into place"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def content_hash(path: PathLike, config: Dict = None) -> str:
    config = config or TOOLKIT_CONFIG
    return hashlib.new(config["io"]["hash_algorithm"], Path(path).read_bytes()).hexdigest()


def _format_precision(value) -> str:
    return "inf" if value == INFINITY else str(value)


def _parse_precision(raw: str, line: int):
    if raw == "inf":
        return INFINITY
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"precision must be an integer or inf, got {raw!r}", line) from None


def component_rows(x: Component) -> List[Row]:
    """(index, exact value, absolute precision) per T-power"""
    if isinstance(x, LambdaElement):
        scale = x.p ** x.den
        return [(k, Fraction(c, scale), x.prec) for k, c in enumerate(x.centered())]
    return [(k, c, l) for k, (c, l) in enumerate(zip(x.coeffs, x.ledger))]


def render_component(x: Component, header: Dict[str, object]) -> str:
    lines = [f"# {k}={v}" for k, v in header.items()]
    lines.extend(f"{k} {value} {_format_precision(prec)}" for k, value, prec in component_rows(x))
    return "\n".join(lines) + "\n"


def parse_coefficients(lines: Iterable[str]) -> Tuple[Dict[str, str], List[Row]]:
    """
    Headers and rows of a coefficient file

    Raises:
        ParseError: Malformed header or row, or indices out of sequence
    """
    headers: Dict[str, str] = {}
    rows: List[Row] = []
    for number, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text:
            continue
        if text.startswith("#"):
            key, sep, value = text[1:].strip().partition("=")
            if not sep:
                continue
            headers[key.strip()] = value.strip()
            continue
        parts = text.split()
        if len(parts) != 3:
            raise ParseError(f"expected `index value precision`, got {text!r}", number)
        try:
            index, value = int(parts[0]), Fraction(parts[1])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad index or value in {text!r}", number) from None
        if index != len(rows):
            raise ParseError(f"expected index {len(rows)}, got {index}", number)
        rows.append((index, value, _parse_precision(parts[2], number)))
    if not rows:
        raise ParseError("no coefficient lines")
    return headers, rows


def _header_int(headers: Dict[str, str], key: str) -> int:
    try:
        return int(headers[key])
    except KeyError:
        raise ParseError(f"missing header {key!r}") from None
    except ValueError:
        raise ParseError(f"header {key} must be an integer, got {headers[key]!r}") from None


def component_from_rows(headers: Dict[str, str], rows: List[Row]) -> Component:
    p = _header_int(headers, "p")
    values = [value for _, value, _ in rows]
    if headers.get("level", "none") == "none":
        return SeriesApprox.from_values(p, values, ledger=[prec for _, _, prec in rows], tail=0)
    level = _header_int(headers, "level")
    if len(rows) != p ** level:
        raise ParseError(f"a level-{level} component needs {p ** level} coefficients, got {len(rows)}")
    precisions = {prec for _, _, prec in rows}
    if len(precisions) != 1 or INFINITY in precisions:
        raise ParseError("finite-level components carry one uniform precision")
    return LambdaElement.from_fractions(p, level, values, precisions.pop())


class PairFileStore:
    """Reads and writes sharp/flat pair files under a common stem"""

    def __init__(self, config: Dict = None):
        """
        Args:
            config: Configuration dict (uses TOOLKIT_CONFIG if not provided)
        """
        self.config = config or TOOLKIT_CONFIG
        self.suffixes = self.config["io"]

    def paths(self, stem: PathLike) -> Dict[str, Path]:
        stem = str(stem)
        return {
            "sharp": Path(stem + self.suffixes["sharp_suffix"]),
            "flat": Path(stem + self.suffixes["flat_suffix"]),
            "trace": Path(stem + self.suffixes["trace_suffix"]),
        }

    @staticmethod
    def pair_header(pair: SharpFlatPair, params: Optional[Dict[str, object]] = None,
                    input_sha256: Optional[str] = None) -> Dict[str, object]:
        h = pair.hecke
        header: Dict[str, object] = {
            "p": h.p,
            "ap": h.a,
            "eps": h.eps,
            "levelNf": h.level_nf,
            "tame": pair.tame,
            "level": "none" if pair.level is None else pair.level,
            "completed": int(pair.completed),
        }
        for key, value in (params or {}).items():
            header.setdefault(key, value)
        header["input_sha256"] = input_sha256 or "none"
        return header

    def write_pair(self, stem: PathLike, pair: SharpFlatPair, trace: Optional[ExtractionTrace] = None,
                   params: Optional[Dict[str, object]] = None, input_sha256: Optional[str] = None) -> List[Path]:
        """
        Write `<stem>.sharp.coef`, `<stem>.flat.coef` and, given a trace, `<stem>.trace`

        Returns:
            Paths written
        """
        header = self.pair_header(pair, params, input_sha256)
        paths = self.paths(stem)
        written = []
        for name, component in (("sharp", pair.sharp), ("flat", pair.flat)):
            text = render_component(component, {"component": name, **header})
            written.append(write_atomic(paths[name], text))
        if trace is not None:
            lines = [f"# {k}={v}" for k, v in header.items()] + trace.render()
            written.append(write_atomic(paths["trace"], "\n".join(lines) + "\n"))
        logger.info(f"Wrote {len(written)} files for {pair.label} under {stem}")
        return written

    def read_component(self, path: PathLike) -> Tuple[Dict[str, str], Component]:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"{path} is not UTF-8 text: {exc}") from exc
        headers, rows = parse_coefficients(text.splitlines())
        return headers, component_from_rows(headers, rows)

    def read_pair(self, stem: PathLike, prec: Optional[int] = None) -> SharpFlatPair:
        """
        Rebuild a pair from its coefficient files

        Raises:
            ParseError: Malformed files or headers that disagree between the components
        """
        paths = self.paths(stem)
        sharp_headers, sharp = self.read_component(paths["sharp"])
        flat_headers, flat = self.read_component(paths["flat"])
        keys = ("p", "ap", "eps", "levelNf", "tame", "level", "completed")
        for key in keys:
            if sharp_headers.get(key) != flat_headers.get(key):
                raise ParseError(f"header {key} differs between {paths['sharp']} and {paths['flat']}")
        p = _header_int(sharp_headers, "p")
        if prec is None:
            prec = sharp.prec if isinstance(sharp, LambdaElement) else self.config["precision"]["default_digits"]
        hecke = HeckeData(p, _header_int(sharp_headers, "ap"), eps=_header_int(sharp_headers, "eps"),
                          level_nf=_header_int(sharp_headers, "levelNf"), tame=_header_int(sharp_headers, "tame"),
                          prec=prec)
        level = None if sharp_headers.get("level", "none") == "none" else _header_int(sharp_headers, "level")
        pair = SharpFlatPair(sharp, flat, hecke, bool(_header_int(sharp_headers, "completed")),
                             hecke.tame, level)
        logger.info(f"Read {pair.label} from {stem}")
        return pair
