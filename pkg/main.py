"""
Sharp/Flat Iwasawa Toolkit
Command-line front end: extract (L♯, L♭) from modular-symbol tables, analyze their zeros and
invariants, tabulate growth formulas and verify the identities tying them together
"""
import argparse
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from pydantic import ValidationError

from config.toolkit_config import TOOLKIT_CONFIG
from models import (
    AnalysisReport,
    CheckLine,
    GcdReport,
    GrowthRow,
    IwasawaInvariantsModel,
    JobConfig,
    RankBoundReport,
    VanishingRow,
    VerificationReport,
)
from services.errors import SporadicUnsupported, Tie, ToolkitError, Undetermined
from services.io.coefficient_files import PairFileStore, content_hash, write_atomic
from services.log_matrix.hecke import HeckeData
from services.mazur_tate.table import ModularSymbolTable, load_table
from services.mazur_tate.theta import queue_from_table
from services.padic.scalar import INFINITY
from services.sharp_flat.analysis import gcd_structure, greenberg_report, vanishing_orders
from services.sharp_flat.extraction import extract_from_table, reconstruction_check
from services.sharp_flat.pair import SharpFlatPair
from services.sharp_flat.stabilization import queue_invariants_pm
from services.tropical.growth import rank_bound, region_classifier, sha_growth_table, special_value_ord
from services.validators.check_result import CheckResult
from services.validators.identity_suite import IdentitySuite

logger = logging.getLogger(__name__)


def resolve_precision(flag: Optional[int], config: Dict = None) -> int:
    """Explicit flag, then the environment variable, then the configured default"""
    config = config or TOOLKIT_CONFIG
    if flag is not None:
        return flag
    raw = os.environ.get(config["precision"]["env_var"])
    if raw:
        try:
            return int(raw)
        except ValueError:
            logger.warning(f"ignoring non-integer {config['precision']['env_var']}={raw!r}")
    return config["precision"]["default_digits"]


def _val(x) -> str:
    return "inf" if x == INFINITY else str(x)


def _emit(text: str, report: Optional[str]) -> None:
    if report:
        write_atomic(report, text)
    print(text, end="" if text.endswith("\n") else "\n")


def _header_lines(header: Dict[str, object]) -> List[str]:
    return [f"# {k}={v}" for k, v in header.items()]


def _load_pair(job: JobConfig, args, store: PairFileStore):
    """(pair, table or None, input hash) from --pair or --table"""
    if getattr(args, "pair", None):
        pair = store.read_pair(args.pair)
        return pair, None, content_hash(store.paths(args.pair)["sharp"])
    if not getattr(args, "table", None):
        raise ValueError("give --pair STEM or --table FILE")
    table = load_table(args.table, prec=job.precision)
    pair, _ = extract_from_table(table, job.tame, job.level, completed=_completed_flag(args))
    return pair, table, table.source_sha256


def _completed_flag(args) -> Optional[bool]:
    if getattr(args, "plain", False):
        return False
    if getattr(args, "completed", False):
        return True
    return None


def cmd_extract(job: JobConfig, args) -> int:
    table = load_table(args.table, prec=job.precision)
    pair, trace = extract_from_table(table, job.tame, job.level, completed=_completed_flag(args))
    stem = args.out or str(Path(args.table).with_suffix(""))
    store = PairFileStore()
    params = {**job.header(), "p": table.p, "level": pair.level}
    written = store.write_pair(stem, pair, trace, params=params, input_sha256=table.source_sha256)
    for path in written:
        print(path)
    return 0


def _invariant_models(pair: SharpFlatPair, report: AnalysisReport):
    invariants = pair.invariants()
    for name in ("sharp", "flat"):
        report.invariants.append(IwasawaInvariantsModel(component=name, mu=str(invariants[name].mu),
                                                        lam=invariants[name].lam))
    return invariants


def build_analysis(job: JobConfig, pair: SharpFlatPair, table: Optional[ModularSymbolTable],
                   header: Dict[str, object]) -> AnalysisReport:
    report = AnalysisReport(header=header)
    invariants = _invariant_models(pair, report)
    for row in vanishing_orders(pair):
        report.vanishing.append(VanishingRow(m=row.m, sharp=_val(row.sharp), flat=_val(row.flat), d_an=row.d_an,
                                             ord_alpha=row.ord_alpha, ord_beta=row.ord_beta,
                                             equiroots=row.equiroots))
    structure, check = gcd_structure(pair)
    gcd = GcdReport(
        t_exponent=_val(structure.t_exponent),
        exponents={r.m: _val(r.exponent) for r in structure.rows},
        branches={r.m: r.branch for r in structure.rows},
        consistent=check.passed,
    )
    if pair.hecke.supersingular:
        greenberg = greenberg_report(pair)
        gcd.common_zeros_bound = greenberg.bound_off_roots
        gcd.assumption = greenberg.assumption
    report.gcd = gcd
    report.warnings.extend(check.errors)
    bound = rank_bound(pair.hecke.p, invariants["sharp"].lam, invariants["flat"].lam)
    report.rank_bound = RankBoundReport(nu_sharp=bound.nu_sharp, nu_flat=bound.nu_flat, nu=bound.nu,
                                        bound=bound.bound, lambda_sum=bound.lambda_sum)
    if table is not None and pair.hecke.p != 2:
        try:
            pm = queue_invariants_pm(queue_from_table(table, job.tame, job.precision))
            report.queue_invariants.append(IwasawaInvariantsModel(component="plus", mu=str(pm.mu_plus),
                                                                  lam=pm.lam_plus))
            report.queue_invariants.append(IwasawaInvariantsModel(component="minus", mu=str(pm.mu_minus),
                                                                  lam=pm.lam_minus))
        except Undetermined as exc:
            report.warnings.append(f"mu/lambda +- not available: {exc}")
    return report


def render_analysis(report: AnalysisReport) -> str:
    lines = _header_lines(report.header)
    for inv in report.invariants:
        lines.append(f"invariants {inv.component} mu={inv.mu} lambda={inv.lam}")
    for row in report.vanishing:
        beta = "" if row.ord_beta is None else f" ord_beta={row.ord_beta}"
        lines.append(f"vanishing m={row.m} sharp={row.sharp} flat={row.flat} d_an={row.d_an} "
                     f"ord_alpha={row.ord_alpha}{beta}")
    if report.gcd is not None:
        exps = " ".join(f"m{m}={e}" for m, e in report.gcd.exponents.items())
        lines.append(f"gcd T^{report.gcd.t_exponent} {exps} consistent={int(report.gcd.consistent)}")
        if report.gcd.common_zeros_bound is not None:
            lines.append(f"common_zeros_off_roots <= {report.gcd.common_zeros_bound} ({report.gcd.assumption})")
    if report.rank_bound is not None:
        rb = report.rank_bound
        lines.append(f"rank nu_sharp={rb.nu_sharp} nu_flat={rb.nu_flat} nu={rb.nu} bound={rb.bound} "
                     f"lambda_sum={rb.lambda_sum}")
    for inv in report.queue_invariants:
        lines.append(f"queue {inv.component} mu={inv.mu} lambda={inv.lam}")
    lines.extend(f"warning {w}" for w in report.warnings)
    return "\n".join(lines) + "\n"


def cmd_analyze(job: JobConfig, args) -> int:
    store = PairFileStore()
    pair, table, digest = _load_pair(job, args, store)
    header = {**job.header(), "p": pair.hecke.p, "level": _val(pair.level) if pair.level is not None else "none",
              "input_sha256": digest or "none"}
    report = build_analysis(job, pair, table, header)
    text = report.model_dump_json(indent=2, exclude={"created"}) + "\n" if job.output_format == "lines" else render_analysis(report)
    _emit(text, args.report)
    return 0


def growth_rows(h: HeckeData, mu_sharp, mu_flat, lam_sharp: int, lam_flat: int, r_inf: int, n_floor: int,
                n_max: int, v2=None, base_value: bool = False) -> List[GrowthRow]:
    """Sha-growth rows with special-value numerators; unsupported rows are flagged, not raised"""
    table = sha_growth_table(h.p, h.a, mu_sharp, mu_flat, lam_sharp, lam_flat, r_inf, n_max, n_floor, base_value)
    by_n = {row.n: row for row in table.rows}
    rows = []
    for n in sorted(set(by_n) | set(table.unsupported)):
        row = by_n.get(n)
        out = GrowthRow(n=n, branch=row.branch if row else table.unsupported[n], flagged=row is None)
        if row is not None:
            out.star = row.star.value
            out.growth = str(row.growth)
            if n in table.totals:
                out.total = str(table.totals[n])
        try:
            out.g_n = str(special_value_ord(h, mu_sharp, mu_flat, lam_sharp, lam_flat, n, v2).g_n)
        except (SporadicUnsupported, Tie, ValueError) as exc:
            logger.debug(f"no special-value prediction at n={n}: {exc}")
            if isinstance(exc, (SporadicUnsupported, Tie)):
                out.flagged = True
                out.branch = f"{out.branch}; {type(exc).__name__}"
        rows.append(out)
    return rows


def cmd_growth(job: JobConfig, args) -> int:
    if args.pair:
        pair = PairFileStore().read_pair(args.pair)
        invariants = pair.invariants()
        h = pair.hecke
        mu_sharp, mu_flat = invariants["sharp"].mu, invariants["flat"].mu
        lam_sharp, lam_flat = invariants["sharp"].lam, invariants["flat"].lam
    else:
        if job.p is None or args.ap is None:
            raise ValueError("growth needs --pair or --p with --ap")
        h = HeckeData(job.p, args.ap, prec=job.precision)
        mu_sharp, mu_flat = Fraction(args.mu_sharp), Fraction(args.mu_flat)
        lam_sharp, lam_flat = args.lambda_sharp, args.lambda_flat
    v2 = Fraction(args.v2) if args.v2 is not None else None
    header = {**job.header(), "p": h.p, "ap": h.a, "mu_sharp": mu_sharp, "mu_flat": mu_flat,
              "lambda_sharp": lam_sharp, "lambda_flat": lam_flat, "r_inf": args.r_inf}
    lines = _header_lines(header)
    if args.region:
        lines.append("region " + region_classifier(h.p, h.v, mu_sharp - mu_flat, v2).describe())
    for row in growth_rows(h, mu_sharp, mu_flat, lam_sharp, lam_flat, args.r_inf, job.n_floor, args.n_max, v2,
                           args.base_value):
        if job.output_format == "lines":
            lines.append(row.model_dump_json())
            continue
        flag = " FLAGGED" if row.flagged else ""
        lines.append(f"n={row.n} star={row.star} branch={row.branch} growth={row.growth} total={row.total} "
                     f"g_n={row.g_n}{flag}")
    _emit("\n".join(lines) + "\n", args.report)
    return 0


def _check_line(result: CheckResult) -> CheckLine:
    return CheckLine(name=result.name, passed=result.passed, skipped=bool(result.metadata.get("skipped")),
                     errors=result.errors, warnings=result.warnings)


def cmd_verify(job: JobConfig, args, config: Dict = None) -> int:
    config = config or TOOLKIT_CONFIG
    table = load_table(args.table, prec=job.precision)
    n = job.level if job.level is not None else table.nmax
    results = IdentitySuite(config).run(table, job.tame, n, completed=_completed_flag(args),
                                        functional_equation=not args.no_fe)
    if args.pair:
        pair = PairFileStore(config).read_pair(args.pair, prec=job.precision)
        q = queue_from_table(table, pair.tame, job.precision).truncated(pair.level)
        results.append(reconstruction_check(pair, q))
    report = VerificationReport(header={**job.header(), "p": table.p, "level": n,
                                        "input_sha256": table.source_sha256 or "none"},
                                lines=[_check_line(r) for r in results])
    text = "\n".join(_header_lines(report.header) + [line.render() for line in report.lines]) + "\n"
    _emit(text, args.report)
    return 0 if report.passed else config["exit_codes"]["mismatch"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sharpflat", description="Sharp/flat Iwasawa toolkit")
    parser.add_argument("-v", "--verbose", action="store_true", help="DEBUG logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--precision", type=int, default=None, help="absolute p-adic precision M")
        p.add_argument("--truncation", type=int, default=TOOLKIT_CONFIG["series"]["default_truncation"])
        p.add_argument("--level", type=int, default=None, help="Λ-level n")
        p.add_argument("--tame", type=int, default=0, help="tame index i")
        p.add_argument("--format", dest="output_format", choices=["text", "lines"], default="text")
        p.add_argument("--report", default=None, help="also write the report to this file")
        flavour = p.add_mutually_exclusive_group()
        flavour.add_argument("--plain", action="store_true", help="divide by Φ rather than Φ̂")
        flavour.add_argument("--completed", action="store_true", help="divide by Φ̂")

    extract = sub.add_parser("extract", help="extract (L♯, L♭) from a table")
    common(extract)
    extract.add_argument("--table", required=True)
    extract.add_argument("--out", default=None, help="output stem (defaults to the table path)")

    analyze = sub.add_parser("analyze", help="invariants, zeros, gcd and rank bound")
    common(analyze)
    analyze.add_argument("--pair", default=None, help="pair-file stem")
    analyze.add_argument("--table", default=None, help="table to extract from first")

    growth = sub.add_parser("growth", help="Sha-growth and special-value rows")
    common(growth)
    growth.add_argument("--pair", default=None)
    growth.add_argument("--p", type=int, default=None)
    growth.add_argument("--ap", type=int, default=None)
    growth.add_argument("--mu-sharp", default="0")
    growth.add_argument("--mu-flat", default="0")
    growth.add_argument("--lambda-sharp", type=int, default=0)
    growth.add_argument("--lambda-flat", type=int, default=0)
    growth.add_argument("--r-inf", type=int, default=0)
    growth.add_argument("--v2", default=None)
    growth.add_argument("--n-max", type=int, default=TOOLKIT_CONFIG["growth"]["default_n_max"])
    growth.add_argument("--n-floor", type=int, default=TOOLKIT_CONFIG["growth"]["default_n_floor"])
    growth.add_argument("--base-value", action="store_true", help="ord_p(L(E,1)/Ω_E) = 0")
    growth.add_argument("--region", action="store_true", help="print the region classification")

    verify = sub.add_parser("verify", help="run the identity suite")
    common(verify)
    verify.add_argument("--table", required=True)
    verify.add_argument("--pair", default=None, help="also check a stored pair against the table")
    verify.add_argument("--no-fe", action="store_true", help="skip the functional-equation lines")
    return parser


COMMANDS = {"extract": cmd_extract, "analyze": cmd_analyze, "growth": cmd_growth, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    inputs = [x for x in (getattr(args, "table", None), getattr(args, "pair", None)) if x]
    try:
        job = JobConfig(
            command=args.command,
            inputs=inputs,
            p=getattr(args, "p", None),
            precision=resolve_precision(args.precision),
            truncation=args.truncation,
            level=args.level,
            tame=args.tame,
            n_floor=getattr(args, "n_floor", TOOLKIT_CONFIG["growth"]["default_n_floor"]),
            output_format=args.output_format,
        )
    except ValidationError as exc:
        logger.error(f"invalid parameters: {exc}")
        return TOOLKIT_CONFIG["exit_codes"]["parse"]
    try:
        return COMMANDS[args.command](job, args)
    except ToolkitError as exc:
        level = getattr(exc, "level", None)
        where = f" (level {level})" if level is not None else ""
        logger.error(f"{type(exc).__name__}{where}: {exc}")
        return exc.exit_code
    except (ValueError, OSError) as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return TOOLKIT_CONFIG["exit_codes"]["parse"]


if __name__ == "__main__":
    sys.exit(main())
