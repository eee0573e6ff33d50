"""Main entry point for the certified number field toolkit."""

import argparse
import sys
import time
from fractions import Fraction
from typing import Callable, Dict, List, Optional
from loguru import logger
from dotenv import load_dotenv
from sympy import Rational

# Load environment variables
load_dotenv()

from .agents import (
    ReportAgent,
    StructureAnalyzerAgent,
    corpus_builtin,
    descriptor_to_field,
    find_generator,
    find_generator_torsion,
    load_descriptor,
    min_generator,
    save_descriptor,
    serialize_descriptor,
    sweep_imaginary_quadratic,
    test_inequality,
)
from .graph import FieldAnalysisWorkflow
from .models import IntervalRecord, Report
from .utils.errors import DimensionMismatch, NumberFieldError, ParseError, UsageError
from .utils.number_field import NumberField
from .utils.settings import settings


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as exceptions instead of exiting with 2."""

    def error(self, message: str):
        raise UsageError(message)


def setup_logging(verbose: bool = False):
    """
    Configure logging.

    Args:
        verbose: Enable verbose logging
    """
    log_level = settings.log_level
    if verbose:
        log_level = "DEBUG"

    logger.remove()
    logger.add(
        sys.stderr,
        level=log_level,
        format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
    )


def _rational_arg(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    """Command-line parser with one subcommand per operation."""
    common = _Parser(add_help=False)
    common.add_argument(
        "--precision",
        type=_positive_int,
        default=settings.precision,
        help=f"Starting working precision in bits (default: {settings.precision})"
    )
    common.add_argument(
        "--node-cap",
        type=_positive_int,
        default=settings.node_cap,
        help=f"Enumeration node budget (default: {settings.node_cap})"
    )
    common.add_argument(
        "--json",
        metavar="PATH",
        help="Write the machine-readable report to PATH"
    )
    common.add_argument(
        "--verbose",
        "-v",
        action="store_true",
        help="Enable verbose logging"
    )

    parser = _Parser(
        prog="python -m src.main",
        description="Certified small-height integral generators of number fields",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Write the quartic example descriptor and analyze it
  python -m src.main corpus quartic-paper -o quartic.json
  python -m src.main analyze quartic.json --json report.json

  # Re-certify a saved report at doubled precision
  python -m src.main verify report.json

  # Smallest generator of Q(sqrt(-5)) with height <= 3
  python -m src.main corpus imag-quadratic:-5 -o k.json
  python -m src.main min-gen k.json --bound 3

  # Compare the closed formula on all imaginary quadratic fields
  python -m src.main sweep-imag-quadratic --from -163 --to -1

Exit codes: 0 success, 2 verified mathematical negative, 1 certification failure, 64 usage error.
        """
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    analyze = commands.add_parser("analyze", parents=[common], help="Invariants, torsion, a generator and the structure")
    analyze.add_argument("file", help="Field descriptor (JSON)")
    analyze.add_argument("--hcap", type=_rational_arg, default=Fraction(1), help="Height cap of the structure check")

    generator = commands.add_parser("generator", parents=[common], help="Generator with H <= H(mu) c_K")
    generator.add_argument("file", help="Field descriptor (JSON)")
    generator.add_argument("--mu", required=True, help="Comma-separated rational power-basis coordinates of mu")

    torsion = commands.add_parser("gen-torsion", parents=[common], help="Generator with H <= c_K from torsion")
    torsion.add_argument("file", help="Field descriptor (JSON)")

    min_gen = commands.add_parser("min-gen", parents=[common], help="Height-minimal generator below a bound")
    min_gen.add_argument("file", help="Field descriptor (JSON)")
    min_gen.add_argument("--bound", type=_rational_arg, required=True, help="Rational height bound")

    structure = commands.add_parser("structure", parents=[common], help="Structure report of a totally complex field")
    structure.add_argument("file", help="Field descriptor (JSON)")
    structure.add_argument("--hcap", type=_rational_arg, default=Fraction(1), help="Height cap of the small-height check")

    inequality = commands.add_parser("test-135", parents=[common], help="Whether every generator has H > cap c_K")
    inequality.add_argument("file", help="Field descriptor (JSON)")
    inequality.add_argument("--hcap", type=_rational_arg, default=Fraction(1), help="Height cap")

    corpus = commands.add_parser("corpus", parents=[common], help="Descriptor of a built-in field")
    corpus.add_argument("name", help="imag-quadratic:m, real-quadratic:m, quartic-paper, cm:F:n, cyclotomic:m, poly:c0,...,1")
    corpus.add_argument("--output", "-o", help="Write the descriptor to this path")

    sweep = commands.add_parser("sweep-imag-quadratic", parents=[common], help="Closed-formula sweep over Q(sqrt(m)), m < 0")
    sweep.add_argument("--from", dest="m_from", type=int, required=True, help="First m")
    sweep.add_argument("--to", dest="m_to", type=int, required=True, help="Last m")

    verify = commands.add_parser("verify", parents=[common], help="Re-certify a JSON report at doubled precision")
    verify.add_argument("report", help="Report written with --json")

    return parser


def _load_field(args: argparse.Namespace):
    descriptor = load_descriptor(args.file)
    return descriptor, descriptor_to_field(descriptor)


def _parse_mu(K: NumberField, text: str):
    coords = [c for c in text.replace(" ", "").split(",") if c]
    if len(coords) != K.degree:
        raise DimensionMismatch(f"mu has {len(coords)} coordinates, expected {K.degree}")
    try:
        return K.element([Fraction(c) for c in coords])
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"Invalid coordinates {text!r}", 0)


def _field_report(command: str, args: argparse.Namespace, descriptor, K: NumberField, **fields) -> Report:
    agent = ReportAgent(args.precision, args.node_cap)
    return Report(command=command, field=agent.field_summary(K), descriptor=descriptor, precision=args.precision, **fields)


def cmd_analyze(args: argparse.Namespace) -> Report:
    descriptor = load_descriptor(args.file)
    return FieldAnalysisWorkflow(args.precision, args.node_cap).run(descriptor, str(args.hcap))


def cmd_generator(args: argparse.Namespace) -> Report:
    descriptor, K = _load_field(args)
    mu = _parse_mu(K, args.mu)
    certificate = find_generator(K, mu, args.precision, args.node_cap)
    return _field_report("generator", args, descriptor, K, certificates=[certificate])


def cmd_gen_torsion(args: argparse.Namespace) -> Report:
    descriptor, K = _load_field(args)
    certificate = find_generator_torsion(K, args.precision, args.node_cap)
    return _field_report("gen-torsion", args, descriptor, K, certificates=[certificate])


def cmd_min_gen(args: argparse.Namespace) -> Report:
    descriptor, K = _load_field(args)
    alpha, h = min_generator(K, args.bound, args.precision, args.node_cap)
    results = {
        "generator": alpha.as_strings(),
        "height": IntervalRecord.from_interval(h).model_dump(),
        "bound": str(args.bound),
    }
    return _field_report("min-gen", args, descriptor, K, results=results)


def cmd_structure(args: argparse.Namespace) -> Report:
    descriptor, K = _load_field(args)
    structure = StructureAnalyzerAgent(args.precision, args.node_cap).analyze(K, Rational(str(args.hcap)))
    return _field_report("structure", args, descriptor, K, structure=structure)


def cmd_test_135(args: argparse.Namespace) -> Report:
    descriptor, K = _load_field(args)
    holds = test_inequality(K, args.hcap, args.precision, args.node_cap)
    return _field_report("test-135", args, descriptor, K, results={"holds": holds, "cap": str(args.hcap)})


def cmd_corpus(args: argparse.Namespace) -> Report:
    descriptor = corpus_builtin(args.name)
    if args.output:
        save_descriptor(descriptor, args.output)
    else:
        sys.stdout.write(serialize_descriptor(descriptor))
    return _field_report("corpus", args, descriptor, descriptor_to_field(descriptor), results={"name": args.name})


def cmd_sweep(args: argparse.Namespace) -> Report:
    rows = sweep_imaginary_quadratic(args.m_from, args.m_to, args.precision, args.node_cap)
    consistent = all(row["formula_matches"] and row["consistent"] for row in rows)
    return Report(
        command="sweep-imag-quadratic",
        results={"fields": len(rows), "all_consistent": consistent},
        rows=rows,
        precision=args.precision,
        exit_code=0 if consistent else 1,
    )


def cmd_verify(args: argparse.Namespace) -> Report:
    agent = ReportAgent(args.precision, args.node_cap)
    return agent.verify(agent.load_json(args.report))


COMMANDS: Dict[str, Callable[[argparse.Namespace], Report]] = {
    "analyze": cmd_analyze,
    "generator": cmd_generator,
    "gen-torsion": cmd_gen_torsion,
    "min-gen": cmd_min_gen,
    "structure": cmd_structure,
    "test-135": cmd_test_135,
    "corpus": cmd_corpus,
    "sweep-imag-quadratic": cmd_sweep,
    "verify": cmd_verify,
}


def _emit(report: Report, args: argparse.Namespace):
    agent = ReportAgent(args.precision, args.node_cap)
    if args.command != "corpus" or args.output:
        print(agent.render_table(report))
    if args.json:
        agent.save_json(report, args.json)


def run_command(argv: Optional[List[str]] = None) -> int:
    """
    Parse ``argv``, run one subcommand and emit its report.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])

    Returns:
        Process exit code
    """
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return e.exit_code

    setup_logging(args.verbose)
    logger.debug(f"Command {args.command} at {args.precision} bits, node cap {args.node_cap}")

    started = time.perf_counter()
    try:
        report = COMMANDS[args.command](args)
        report.elapsed_seconds = time.perf_counter() - started
        _emit(report, args)
        return report.exit_code

    except KeyboardInterrupt:
        logger.warning("\nProcess interrupted by user")
        return 130
    except NumberFieldError as e:
        logger.error(f"{type(e).__name__}: {e}")
        report = Report(
            command=args.command,
            results={"error": type(e).__name__, "message": str(e)},
            precision=args.precision,
            elapsed_seconds=time.perf_counter() - started,
            exit_code=e.exit_code,
        )
        _emit(report, args)
        return e.exit_code
    except OSError as e:
        logger.error(f"Error: {e}")
        return UsageError.exit_code
    except Exception as e:
        logger.error(f"Error: {e}")
        if args.verbose:
            logger.exception("Full traceback:")
        return 1


def main():
    """Main function."""
    return run_command()


if __name__ == "__main__":
    sys.exit(main())
