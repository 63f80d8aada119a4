# Command-line front end: gshift classify|orbit|witness|oracle
import argparse
import logging
import re
import sys
from typing import Any, Callable, Dict, List, Optional, TextIO, Tuple

from ..config import AnalysisConfig, resolve_config
from ..core.classifier import PROPERTIES, Classifier
from ..core.engine import SemigroupEngine
from ..core.parser import PresentationSource
from ..core.intervals import Interval
from ..core.patterns import Pattern
from ..core.verdict import Verdict3
from ..errors import BudgetExhaustedError, GShiftError
from ..oracle.crosscheck import standard_sweeps
from ..report.report_writer import ReportWriter
from .api import effective_config, load_presentation
from .verify import verify_all

logger = logging.getLogger(__name__)

EXIT_DECISIVE = 0
EXIT_ERROR = 1
EXIT_UNKNOWN = 2

# flags whose values may start with a minus sign
VALUE_FLAGS = ("--probes", "--window", "--H", "--protected")
_NEGATIVE = re.compile(r"-\d")

HandlerResult = Tuple[Optional[str], List[Any], int]


def _int_list(text: str) -> List[int]:
    return [int(part) for part in text.replace(",", " ").split()]


def _interval(text: str) -> Interval:
    try:
        interval = Interval.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e
    if not interval.is_finite():
        raise argparse.ArgumentTypeError(f"interval {text!r} must be finite")
    return interval


def _pattern(text: str) -> Pattern:
    try:
        return Pattern.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _attach_values(argv: List[str]) -> List[str]:
    """Rewrite `--probes -8..8` as `--probes=-8..8`; argparse reads a bare minus-led value as an option."""
    joined: List[str] = []
    i = 0
    while i < len(argv):
        arg = argv[i]
        if arg in VALUE_FLAGS and i + 1 < len(argv) and _NEGATIVE.match(argv[i + 1]):
            joined.append(f"{arg}={argv[i + 1]}")
            i += 2
            continue
        joined.append(arg)
        i += 1
    return joined


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-orbit", type=int, help="points visited per orbit query")
    common.add_argument("--budget-closure", type=int, help="maps enumerated per closure")
    common.add_argument("--probes", type=_interval, help="coordinates whose orbits are searched, e.g. --probes -8..8")
    common.add_argument("--max-h", type=int, help="search H inside [-N, N]")
    common.add_argument("--window", type=_interval, help="coverage window LO..HI")
    common.add_argument("--seed", type=int, help="seed for random oracle instances")
    common.add_argument("--verify", action="store_true", help="re-check every emitted certificate and witness")
    common.add_argument("--format", choices=("human", "machine"), default="human")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG on stderr")

    parser = argparse.ArgumentParser(prog="gshift", description="Decide dynamical properties of generalized shifts")
    commands = parser.add_subparsers(dest="command", required=True)

    classify = commands.add_parser("classify", parents=[common], help="run all four checks")
    classify.add_argument("file")

    orbit = commands.add_parser("orbit", parents=[common], help="forward or inverse orbit of one coordinate")
    orbit.add_argument("file")
    orbit.add_argument("--w", type=int, required=True)
    orbit.add_argument("--direction", choices=("forward", "inverse"), default="forward")

    witness = commands.add_parser("witness", parents=[common], help="construct a sensitivity or expansivity witness")
    witness.add_argument("file")
    witness.add_argument("--kind", choices=("sensitivity", "expansivity"), required=True)
    witness.add_argument("--v", type=int, help="coordinate with an infinite orbit (sensitivity)")
    witness.add_argument("--protected", type=_int_list, default=[], help="coordinates y must keep, e.g. '2,4'")
    witness.add_argument("--x", type=_pattern, default=None, help="pattern such as 'k=2 default=0 5:1'")
    witness.add_argument("--y", type=_pattern, default=None, help="second pattern (expansivity)")
    witness.add_argument("--diff-at", type=int, help="build y from x by flipping this coordinate")
    witness.add_argument("--H", type=_int_list, default=None, help="certified set H, e.g. --H -1,0,1")

    oracle = commands.add_parser("oracle", parents=[common], help="cross-check the criteria on finite instances")
    oracle.add_argument("--max-m", type=int, default=3)
    oracle.add_argument("--random-count", type=int, default=1000)
    oracle.add_argument("--random-m", type=int, default=4)
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "budget_orbit": args.budget_orbit,
        "budget_closure": args.budget_closure,
        "probes": args.probes,
        "max_h": args.max_h,
        "window": args.window,
        "seed": args.seed,
    }


def cmd_classify(args: argparse.Namespace, source: PresentationSource, config: AnalysisConfig,
                 writer: ReportWriter) -> HandlerResult:
    classifier = Classifier(source.presentation, config)
    result = classifier.classify()
    for prop in PROPERTIES:
        writer.verdict(prop, result.verdicts[prop])
    evidence = [result.verdicts[prop].evidence for prop in PROPERTIES]
    exit_code = EXIT_DECISIVE if result.is_decisive else EXIT_UNKNOWN
    return result.diagram, evidence, exit_code


def cmd_orbit(args: argparse.Namespace, source: PresentationSource, config: AnalysisConfig,
              writer: ReportWriter) -> HandlerResult:
    engine = SemigroupEngine(source.presentation, config)
    result = engine.inverse_orbit(args.w) if args.direction == "inverse" else engine.orbit(args.w)
    writer.orbit(args.w, result)
    exit_code = EXIT_UNKNOWN if result.is_unknown else EXIT_DECISIVE
    return None, [result.certificate], exit_code


def cmd_witness(args: argparse.Namespace, source: PresentationSource, config: AnalysisConfig,
                writer: ReportWriter) -> HandlerResult:
    classifier = Classifier(source.presentation, config)
    x = args.x or Pattern.constant(0)
    if args.kind == "sensitivity":
        v = args.v
        if v is None:
            verdict = classifier.check_sensitive()
            if not verdict.is_yes:
                return None, [], _not_available("sensitive", verdict)
            v = verdict.evidence.base
        witness = classifier.sensitivity_witness(v, x, args.protected)
    else:
        H = args.H
        if H is None:
            verdict = classifier.check_expansive()
            if not verdict.is_yes:
                return None, [], _not_available("expansive", verdict)
            H = verdict.evidence.H
        if args.y is not None:
            y = args.y
        elif args.diff_at is not None:
            y = x.flip(args.diff_at)
        else:
            raise GShiftError("expansivity witness needs --y or --diff-at")
        try:
            witness = classifier.expansivity_witness(H, x, y)
        except ValueError as e:
            raise GShiftError(str(e)) from e
    failures = witness.check(source.presentation)
    if failures:
        raise GShiftError(f"constructed witness failed its self-check: {'; '.join(failures)}")
    writer.witness(witness)
    return None, [witness], EXIT_DECISIVE


def _not_available(prop: str, verdict: Verdict3) -> int:
    logger.warning("system is not known to be %s (%s)", prop, verdict.outcome.value)
    if verdict.is_no:
        raise GShiftError(f"no witness: the system is not {prop} ({verdict.reason})")
    return EXIT_UNKNOWN


def cmd_oracle(args: argparse.Namespace, config: AnalysisConfig, writer: ReportWriter) -> int:
    reports = standard_sweeps(config.seed, args.random_count, args.max_m, args.random_m, config.exhaustive_limit)
    for report in reports:
        writer.sweep(report)
        if not report.ok:
            logger.error("sweep %s found %d disagreement(s)", report.name, len(report.disagreements))
    return EXIT_DECISIVE if all(r.ok for r in reports) else EXIT_ERROR


def run(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """Parse arguments, run one command and print its report; returns the exit code."""
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(_attach_values(list(sys.argv[1:] if argv is None else argv)))
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    try:
        if args.command == "oracle":
            config = resolve_config(None, _overrides(args))
            writer = ReportWriter("oracle", "", config.to_record())
            exit_code = cmd_oracle(args, config, writer)
            writer.summary("n/a", exit_code)
            stdout.write(writer.render(args.format))
            return exit_code

        source = load_presentation(args.file)
        config = effective_config(source, _overrides(args))
        writer = ReportWriter(args.command, args.file, config.to_record())
        handler: Callable[..., HandlerResult] = {"classify": cmd_classify, "orbit": cmd_orbit, "witness": cmd_witness}[args.command]
        try:
            diagram, evidence, exit_code = handler(args, source, config, writer)
        except BudgetExhaustedError as e:
            logger.warning("%s", e)
            diagram, evidence, exit_code = None, [], EXIT_UNKNOWN

        if args.verify:
            checked, failures = verify_all(evidence, source.presentation, config)
            writer.verify(checked, failures)
            if failures:
                exit_code = EXIT_ERROR
        writer.summary(diagram or "n/a", exit_code)
        stdout.write(writer.render(args.format))
        return exit_code
    except (GShiftError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
