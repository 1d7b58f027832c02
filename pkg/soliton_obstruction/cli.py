"""
Command-line driver.

    python -m soliton_obstruction <command> [options]

Exit code 0 on ok, 2 on an unexplained pipeline-vs-published mismatch and 1 on
errors, including malformed flags.
"""
import argparse
import logging
import sys
from datetime import datetime, timezone
from fractions import Fraction
from typing import List, Optional

from . import config
from .errors import ConfigError, SolitonError, UsageError
from .exactnum import integer_roots, rat
from .reports import (
    DiscrepancyPayload,
    KernelPayload,
    ObstructionPayload,
    RatNPayload,
    RunReport,
    SigmaQuadPayload,
    SpectrumEntryPayload,
    ansatz_payload,
    comparison_rows,
    render,
)
from .spectra import OPERATORS, ManifoldDescriptor, kernel_dims, product_spectrum, sphere_spectrum
from .varengine import default_pipeline, ledger, obstruction, sigma4_adjudication
from .verification import oracle_check, verify_all, write_metrics

logger = logging.getLogger(__name__)

EXIT_CODES = {"ok": 0, "mismatch": 2, "error": 1}
SYMBOLIC = "symbolic"


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def rational(text: str) -> Fraction:
    return rat(text)


def n_dim(text: str):
    return None if text == SYMBOLIC else rat(text)


def alpha_list(text: str) -> tuple:
    return tuple(rat(part) for part in text.split(","))


def _common_flags() -> argparse.ArgumentParser:
    common = Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the report as JSON")
    common.add_argument("--timestamps", action="store_true", help="stamp the report with the UTC time")
    common.add_argument("--verbose", action="store_true", help="log at INFO")
    common.add_argument("--debug", action="store_true", help="log at DEBUG")
    common.add_argument("--metrics-out", default=None, help="merge a summary into this metrics JSON file")
    return common


def _stage_flags(parser: argparse.ArgumentParser, default=SYMBOLIC) -> None:
    parser.add_argument("--n-dim", type=n_dim, default=n_dim(default), help="integer, rational or 'symbolic'")
    parser.add_argument("--symbolic", action="store_true", help="same as --n-dim symbolic")


def build_parser() -> Parser:
    common = _common_flags()
    parser = Parser(prog="soliton_obstruction", description="Third-order obstruction engine for Ricci solitons")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    p = sub.add_parser("spectrum", parents=[common], help="spectrum of one round sphere")
    p.add_argument("--operator", choices=OPERATORS, default="functions")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--cutoff", type=rational, default=config.DEFAULT_CUTOFF)

    p = sub.add_parser("product-spectrum", parents=[common], help="spectrum of S^m × S^n")
    p.add_argument("--operator", choices=OPERATORS, default="einstein")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--cutoff", type=rational, default=config.DEFAULT_CUTOFF)

    p = sub.add_parser("kernel", parents=[common], help="dimensions of the infinitesimal kernels")
    p.add_argument("--manifold", choices=("s2xs2", "smxsn", "s2xN"), default="s2xs2")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--assert-dagger", action="store_true", help="assert (†) for the Einstein factor N")
    p.add_argument("--lambda1-bound", type=rational, default=None, help="asserted lower bound for λ₁(N)")

    for name, text in (
        ("fss", "solve (1+Δ)f_ss"),
        ("utilde", "solve for ũ and u"),
        ("hb", "solve for h̃_b"),
        ("crossterms", "conformal and TT cross terms"),
        ("thirdvar", "third variation and the σ₄ adjudication"),
    ):
        _stage_flags(sub.add_parser(name, parents=[common], help=text))

    p = sub.add_parser("obstruction", parents=[common], help="Q₄, Q₂ and the verdicts")
    _stage_flags(p, default="4")
    p.add_argument("--b-factors", type=int, choices=(1, 2), default=2)

    p = sub.add_parser("oracle", parents=[common], help="brute-force polynomial cross-checks on (S²)²")
    p.add_argument("--alphas", type=alpha_list, default=None, help="comma-separated rationals, e.g. 2,3")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--b-factors", type=int, default=config.ORACLE_FACTORS)

    p = sub.add_parser("verify-all", parents=[common], help="run every check")
    p.add_argument("--skip-oracle", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    return parser


def configure_logging(args) -> None:
    level = "DEBUG" if args.debug else "INFO" if args.verbose else config.log_level()
    logging.basicConfig(level=level, format=config.LOG_FORMAT, filename=config.log_file())


# ---- command handlers ----
def _points(args) -> List[Fraction]:
    if args.symbolic or args.n_dim is None:
        return []
    return [args.n_dim]


def _ledger_for(report: RunReport, prefixes, points) -> None:
    entries = [d for d in ledger(default_pipeline()) if any(d.quantity.startswith(p) for p in prefixes)]
    report.add_ledger(DiscrepancyPayload.of(d, points) for d in entries)


def _spectrum(args, report: RunReport) -> None:
    entries = sphere_spectrum(args.operator, args.dim, args.cutoff)
    report.results["spectrum"] = [SpectrumEntryPayload.of(e).model_dump() for e in entries]


def _product_spectrum(args, report: RunReport) -> None:
    entries = product_spectrum(args.operator, args.m, args.n, args.cutoff)
    report.results["spectrum"] = [SpectrumEntryPayload.of(e).model_dump() for e in entries]


def _kernel(args, report: RunReport) -> None:
    manifold = ManifoldDescriptor(args.manifold, args.m, args.n, args.assert_dagger, args.lambda1_bound)
    report.results["kernel"] = KernelPayload.of(kernel_dims(manifold)).model_dump()


def _fss(args, report: RunReport) -> None:
    points = _points(args)
    report.results["f_ss"] = ansatz_payload(default_pipeline().f_ss, points)
    _ledger_for(report, ["f_ss."], points)


def _utilde(args, report: RunReport) -> None:
    points = _points(args)
    p = default_pipeline()
    report.results["u_tilde"] = ansatz_payload(p.u_tilde, points)
    report.results["u"] = ansatz_payload(p.u, points)
    _ledger_for(report, ["u_tilde.", "u."], points)


def _hb(args, report: RunReport) -> None:
    points = _points(args)
    report.results["h_b"] = ansatz_payload(default_pipeline().h_b, points)
    _ledger_for(report, ["h_b."], points)


def _crossterms(args, report: RunReport) -> None:
    points = _points(args)
    p = default_pipeline()
    report.results["cross_conformal"] = SigmaQuadPayload.of(p.cross_conformal, points).model_dump()
    report.results["cross_tt"] = SigmaQuadPayload.of(p.cross_tt, points).model_dump()
    _ledger_for(report, ["cross_conformal.", "cross_tt."], points)


def _thirdvar(args, report: RunReport) -> None:
    points = _points(args)
    p = default_pipeline()
    report.results["third_variation"] = SigmaQuadPayload.of(p.third_variation, points).model_dump()
    report.results["sigma4_adjudication"] = {
        k: (RatNPayload.of(v, points).model_dump() if not isinstance(v, bool) else v)
        for k, v in sigma4_adjudication(p).items()
    }
    _ledger_for(report, ["third_variation."], points)


def _obstruction(args, report: RunReport) -> None:
    points = _points(args)
    if args.b_factors == 2 and points and points != [4]:
        raise UsageError("--b-factors 2 means Ñ is a point, so --n-dim must be 4")
    if args.b_factors == 1 and points and points[0] < 3:
        raise UsageError("--b-factors 1 needs n = 2 + dim N ≥ 3")
    result = obstruction(args.b_factors)
    report.results["published_vs_pipeline"] = comparison_rows(result, points)
    report.results["obstruction"] = ObstructionPayload.of(result, points).model_dump()
    if args.b_factors == 1:
        combined = result.pipeline_Q4 + result.pipeline_Q2
        report.results["b1_combined"] = {
            "value": RatNPayload.of(combined, points).model_dump(),
            "integer_roots": [str(r) for r in sorted(integer_roots(combined.num))],
        }
    report.add_ledger(DiscrepancyPayload.of(d, points) for d in result.discrepancies)


def _oracle(args, report: RunReport) -> RunReport:
    if args.b_factors != config.ORACLE_FACTORS:
        raise ConfigError(f"no concrete oracle exists for B = {args.b_factors}; it runs on (S²)² only")
    return oracle_check(args.alphas, args.seed, command=report.command)


def _verify_all(args, report: RunReport) -> RunReport:
    return verify_all(args.skip_oracle, args.workers, seed=args.seed, command=report.command)


HANDLERS = {
    "spectrum": _spectrum,
    "product-spectrum": _product_spectrum,
    "kernel": _kernel,
    "fss": _fss,
    "utilde": _utilde,
    "hb": _hb,
    "crossterms": _crossterms,
    "thirdvar": _thirdvar,
    "obstruction": _obstruction,
    "oracle": _oracle,
    "verify-all": _verify_all,
}


def _format(argv: List[str]) -> str:
    if "--json" in argv:
        return "json"
    try:
        return config.report_format()
    except ConfigError:
        return "text"


def run(argv: Optional[List[str]] = None, out=None) -> int:
    """Parse argv, run one command and write its report; returns the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    report = RunReport(command=argv)
    fmt = _format(argv)
    try:
        args = build_parser().parse_args(argv)
        configure_logging(args)
        if not args.json:
            fmt = config.report_format()
        logger.info("---- %s ----", args.command)
        report = HANDLERS[args.command](args, report) or report
        report.finalize()
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)
    except SolitonError as exc:
        kind = "usage error" if isinstance(exc, UsageError) else type(exc).__name__
        print(f"❌ {kind}: {exc}", file=sys.stderr)
        report.error = f"{kind}: {exc}"
        report.finalize()
    else:
        if args.timestamps:
            report.timestamp = datetime.now(timezone.utc).isoformat()
        if args.metrics_out:
            write_metrics(args.metrics_out, report)

    print(render(report, fmt), file=out)
    return EXIT_CODES[report.status]


def main() -> None:
    sys.exit(run())
