"""Command line entry point: intersection-forms {check,matrix,det,rhs,invariants,random}."""
import argparse
import logging
import sys
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import NoReturn, TextIO

from pydantic import ValidationError

from backend import __version__
from backend.adapter.instance_source.arrangement_file_source import ArrangementFileSource
from backend.adapter.instance_source.oriented_matroid_file_source import (
    OrientedMatroidFileSource,
)
from backend.adapter.instance_source.random_arrangement_source import RandomArrangementSource
from backend.app import Analysis, Backend
from backend.errors import InputError, IntersectionFormsError, RetryExhaustedError
from backend.ports.instance_source import InstanceSource
from frontend.config import RunConfig, load_environment
from frontend.report import SweepFailureReport, VerificationReport, build_report
from utils.ReadInstanceFile import read_instance_file
from utils.SweepSummary import render_summary, sweep_frame

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISMATCH = 2

COMMANDS = {
    "check": "verify det S and det S_q against the flat products",
    "matrix": "print the intersection matrices S and S_q",
    "det": "print det S and det S_q",
    "rhs": "print the flat product and its factors",
    "invariants": "run the structural and flag space checks",
    "random": "sweep random generic arrangements with check",
}


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with 1; exit code 2 is reserved for conjecture mismatches."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--input", type=Path, help="arrangement or oriented matroid JSON file")
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for random draws")
    common.add_argument("--jobs", type=int, default=1, help="worker threads")
    common.add_argument(
        "--include-matrices",
        action="store_true",
        help="include S and S_q even above the report size limit",
    )
    common.add_argument(
        "--nudge", type=int, metavar="SEED", help="re-randomize arrangement offsets until generic"
    )
    common.add_argument("--timings", action="store_true", help="add stage timings to the report")
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG"
    )

    parser = ArgumentParser(
        prog="intersection-forms",
        description="Exact intersection forms of bounded regions and their determinants",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, help_text in COMMANDS.items():
        sub = subparsers.add_parser(name, parents=[common], help=help_text)
        if name == "random":
            sub.add_argument("--dim", type=int, help="ambient dimension r in [1, 4]")
            sub.add_argument("--n", type=int, help="number of hyperplanes in [dim, 10]")
            sub.add_argument("--count", type=int, default=1, help="number of instances")
            sub.add_argument(
                "--general-position",
                action="store_true",
                help="require every r normals to be independent",
            )
    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )


def run_config(args: argparse.Namespace) -> RunConfig:
    values = {
        key: value
        for key, value in vars(args).items()
        if key != "verbose" and value is not None
    }
    return RunConfig(**values)


def file_source(config: RunConfig) -> InstanceSource:
    """Pick the adapter from the keys of the input document."""
    document = read_instance_file(config.input)
    data = document[0]
    if "chirotope" in data:
        if config.nudge is not None:
            msg = "--nudge applies to arrangement inputs only"
            raise InputError(msg)
        return OrientedMatroidFileSource(config.input, document=document)
    if "hyperplanes" in data:
        return ArrangementFileSource(config.input, nudge_seed=config.nudge, document=document)
    msg = f"{config.input}: expected an arrangement ('hyperplanes') or an oriented matroid ('chirotope')"
    raise InputError(msg)


def exit_code(analysis: Analysis) -> int:
    if analysis.invariants_failed:
        return EXIT_ERROR
    if analysis.conjecture_mismatch:
        return EXIT_MISMATCH
    return EXIT_OK


def _report(config: RunConfig, analysis: Analysis) -> VerificationReport:
    return build_report(
        analysis,
        include_matrices=config.include_matrices,
        matrix_limit=config.matrix_limit,
        timings=config.timings,
    )


def run_single(config: RunConfig, stream: TextIO) -> int:
    instance = file_source(config).load()
    backend = Backend(jobs=config.jobs, covector_cap=config.covector_cap, seed=config.seed)
    analysis = backend.run(config.command, instance)
    stream.write(_report(config, analysis).to_json(indent=2) + "\n")
    return exit_code(analysis)


def sweep_exit_code(codes: Sequence[int]) -> int:
    """Errors outrank conjecture mismatches."""
    if EXIT_ERROR in codes:
        return EXIT_ERROR
    return max(codes, default=EXIT_OK)


def run_random(config: RunConfig, stream: TextIO) -> int:
    """One JSON line per instance in index order, then a summary on stderr."""
    backend = Backend(jobs=1, covector_cap=config.covector_cap, seed=config.seed)

    def work(index: int) -> Analysis | IntersectionFormsError | None:
        source = RandomArrangementSource(
            config.dim, config.n, config.seed, index, general_position=config.general_position
        )
        try:
            return backend.check(source.load())
        except RetryExhaustedError as err:
            print(f"instance {index} skipped: {err}", file=sys.stderr)
            return None
        except IntersectionFormsError as err:
            logger.warning("%s failed: %s", source.name, err)
            return err

    indices = range(config.count)
    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(pool.map(work, indices))
    else:
        outcomes = [work(i) for i in indices]

    rows = []
    codes = []
    for index, outcome in zip(indices, outcomes):
        if outcome is None:
            rows.append({"instance": index, "skipped": True})
            continue
        if isinstance(outcome, IntersectionFormsError):
            name = RandomArrangementSource(config.dim, config.n, config.seed, index).name
            failure = SweepFailureReport(index=index, name=name, error=str(outcome))
            stream.write(failure.to_json() + "\n")
            rows.append({"instance": index, "failed": True})
            codes.append(EXIT_ERROR)
            continue
        stream.write(_report(config, outcome).to_json(indent=None) + "\n")
        rows.append(
            {
                "instance": index,
                "n_topes": len(outcome.forms.topes),
                "theorem_match": outcome.theorem.match,
                "conjecture_match": outcome.conjecture.match,
            }
        )
        codes.append(exit_code(outcome))
    print(render_summary(sweep_frame(rows)), file=sys.stderr)
    return sweep_exit_code(codes)


def _dispatch(config: RunConfig, stream: TextIO) -> int:
    if config.command == "random":
        return run_random(config, stream)
    return run_single(config, stream)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    load_environment()
    try:
        config = run_config(args)
    except ValidationError as err:
        for problem in err.errors():
            location = ".".join(str(part) for part in problem["loc"]) or "arguments"
            print(f"error: {location}: {problem['msg']}", file=sys.stderr)
        return EXIT_ERROR
    try:
        if config.out is None:
            return _dispatch(config, sys.stdout)
        with config.out.open("w", encoding="utf-8") as stream:
            return _dispatch(config, stream)
    except IntersectionFormsError as err:
        logger.debug("run failed", exc_info=True)
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
