"""
Command-line surface of the poem engine.

Subcommands:
    generate  build a poem from a corpus, a rhyme scheme and a seed
    convert   turn a plain scansion file (one per line) into a JSON-lines corpus
    index     print the verse supply of every rhyme group and meter

Reports go to stdout; diagnostics, logs and the effective seed go to stderr.
"""

import argparse
import json
import logging
import sys
import uuid
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, TextIO

from opentelemetry import trace

from .assembler import compose
from .constants import SpanAttributes, StageNames
from .corpus import build_index, convert_plain, group_summary, load_corpus, read_utf8, write_corpus
from .criteria import ReferenceMode
from .errors import PoemEngineError
from .report import OutputFormat, evaluate_poem, render, render_replay
from .rng import entropy_seed
from .scheme import CriterionWeights, parse_meter_plan, parse_scheme
from .tracing import get_tracer, set_span_attributes, span_context

# Initialize logging
logger = logging.getLogger(__name__)

EXIT_OK = 0


@dataclass
class RunConfig:
    corpus_path: str
    scheme: str
    meters: List[str] = field(default_factory=lambda: ["random"])
    weights: List[str] = field(default_factory=lambda: ["1"] * 5)
    seed: Optional[int] = None
    format: OutputFormat = OutputFormat.TEXT
    reference_mode: ReferenceMode = ReferenceMode.BOTH
    replay: bool = False
    replay_top: Optional[int] = None
    parallel: bool = False


@dataclass
class RunResult:
    exit_code: int
    output: str = ""
    seed: Optional[int] = None
    diagnostic: Optional[str] = None


def _split_values(values: Sequence[str]) -> List[str]:
    """Accept both "10 9 9 10" and "10,9,9,10" style lists."""
    return [part for value in values for part in value.replace(",", " ").split()]


def run(config: RunConfig) -> RunResult:
    """
    Generate, evaluate and render one poem.

    Never raises for engine errors; they come back as a nonzero exit code
    with a diagnostic naming the failing stage.
    """
    seed = config.seed if config.seed is not None else entropy_seed()
    span = get_tracer().start_span(StageNames.GENERATE)
    set_span_attributes(
        span,
        {
            SpanAttributes.RUN_ID: uuid.uuid4().hex,
            SpanAttributes.SEED: seed,
            SpanAttributes.SCHEME: config.scheme,
            SpanAttributes.CORPUS_PATH: config.corpus_path,
            SpanAttributes.REFERENCE_MODE: ReferenceMode(config.reference_mode).value,
            SpanAttributes.PARALLEL: config.parallel,
            SpanAttributes.OUTPUT_FORMAT: OutputFormat(config.format).value,
        },
    )
    try:
        with span_context(span), trace.use_span(
            span, end_on_exit=False, record_exception=False, set_status_on_exception=False
        ):
            scheme = parse_scheme(config.scheme)
            plan = parse_meter_plan(_split_values(config.meters), len(scheme))
            weights = CriterionWeights.from_sequence(_split_values(config.weights))
            entries = load_corpus(config.corpus_path)
            index = build_index(entries)
            set_span_attributes(
                span,
                {
                    SpanAttributes.CORPUS_ENTRIES: len(entries),
                    SpanAttributes.CORPUS_GROUPS: len(index),
                    SpanAttributes.WEIGHTS: ",".join(str(v) for v in weights.as_dict().values()),
                },
            )

            state = compose(
                scheme, plan, weights, index, seed,
                reference_mode=ReferenceMode(config.reference_mode),
                parallel=config.parallel,
            )
            report = evaluate_poem(
                state,
                replay=config.replay or config.replay_top is not None,
                replay_top=config.replay_top,
            )
            set_span_attributes(
                span,
                {
                    SpanAttributes.METERS: ",".join(str(m) for m in state.meters),
                    SpanAttributes.GLOBAL_SCORE: report.global_score,
                },
            )

            fmt = OutputFormat(config.format)
            output = render(report, fmt)
            if report.replay and fmt is not OutputFormat.JSON:
                output += "\n" + render_replay(report)
    except PoemEngineError as e:
        logger.debug(f"Run failed at stage {e.stage}", exc_info=True)
        return RunResult(
            exit_code=e.exit_code,
            seed=seed,
            diagnostic=f"error [{e.stage}]: {e}",
        )
    return RunResult(exit_code=EXIT_OK, output=output, seed=seed)


def convert(input_path: str, output_path: Optional[str]) -> RunResult:
    try:
        entries = convert_plain(read_utf8(input_path).splitlines())
    except PoemEngineError as e:
        return RunResult(exit_code=e.exit_code, diagnostic=f"error [{e.stage}]: {e}")

    if output_path:
        write_corpus(entries, output_path)
        logger.info(f"Wrote {len(entries)} entries to {output_path}")
        return RunResult(exit_code=EXIT_OK)
    output = "".join(json.dumps(entry.to_record(), ensure_ascii=False) + "\n" for entry in entries)
    return RunResult(exit_code=EXIT_OK, output=output)


def index_table(corpus_path: str) -> RunResult:
    try:
        index = build_index(load_corpus(corpus_path))
    except PoemEngineError as e:
        return RunResult(exit_code=e.exit_code, diagnostic=f"error [{e.stage}]: {e}")
    lines = ["group\tmeter\tverses\tdistinct"]
    lines += [f"{key}\t{meter}\t{verses}\t{distinct}" for key, meter, verses, distinct in group_summary(index)]
    return RunResult(exit_code=EXIT_OK, output="\n".join(lines) + "\n")


def _positive_int(value: str) -> int:
    number = int(value)
    if number <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return number


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poem-engine",
        description="Assemble rhymed, metered poems from a scanned sentence corpus.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    generate = subparsers.add_parser("generate", help="Generate a poem")
    generate.add_argument("--corpus", required=True, help="JSON-lines corpus file")
    generate.add_argument("--scheme", required=True, help='Rhyme scheme, e.g. "ABAB ABAB CDC CDC"')
    generate.add_argument(
        "--meters",
        nargs="+",
        default=["random"],
        help='One meter for every verse or one per verse; "random" or "*" leaves it to the seed',
    )
    generate.add_argument(
        "--weights",
        nargs="+",
        default=["1", "1", "1", "1", "1"],
        help="Five weights in the order ER ST AC RI RTC; 0 skips a criterion",
    )
    generate.add_argument("--seed", type=int, default=None, help="Seed; drawn from entropy when absent")
    generate.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.TEXT.value,
        help="text (poem only), table (poem plus diagnostics) or json",
    )
    generate.add_argument(
        "--reference",
        choices=[m.value for m in ReferenceMode],
        default=ReferenceMode.BOTH.value,
        help="Rhythmic reference for ER and ST",
    )
    generate.add_argument(
        "--replay-candidates",
        action="store_true",
        help="Also print every scored candidate of every slot",
    )
    generate.add_argument("--replay-top", type=_positive_int, default=None, help="Keep only the N best candidates per slot")
    generate.add_argument("--parallel", action="store_true", help="Score candidates on a thread pool")

    convert_cmd = subparsers.add_parser("convert", help="Convert a plain scansion file to JSON lines")
    convert_cmd.add_argument("input", help="Plain text file, one scansion per line")
    convert_cmd.add_argument("-o", "--output", default=None, help="Output file (stdout when absent)")

    index_cmd = subparsers.add_parser("index", help="Print rhyme group supply per meter")
    index_cmd.add_argument("--corpus", required=True, help="JSON-lines corpus file")
    return parser


def main(
    argv: Optional[Sequence[str]] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)

    if args.command == "generate":
        result = run(
            RunConfig(
                corpus_path=args.corpus,
                scheme=args.scheme,
                meters=args.meters,
                weights=args.weights,
                seed=args.seed,
                format=OutputFormat(args.format),
                reference_mode=ReferenceMode(args.reference),
                replay=args.replay_candidates,
                replay_top=args.replay_top,
                parallel=args.parallel,
            )
        )
        print(f"seed={result.seed}", file=stderr)
    elif args.command == "convert":
        result = convert(args.input, args.output)
    else:
        result = index_table(args.corpus)

    if result.output:
        stdout.write(result.output)
    if result.diagnostic:
        print(result.diagnostic, file=stderr)
    return result.exit_code
