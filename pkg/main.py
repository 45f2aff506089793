#!/usr/bin/env python3
"""
edgeprint - palmprint identification from regional edge texture.

Usage:
    python main.py extract palm.pgm                     # print the feature vector
    python main.py enroll --gallery g.txt c01 a.pgm b.pgm
    python main.py identify --gallery g.txt unknown.pgm
    python main.py synth --out corpus/ --seed 7         # write a synthetic corpus
    python main.py evaluate --corpus corpus/            # train/test identification rate
    python main.py sweep --benchmark                    # all grids x all operators
    python main.py edges palm.pgm --out edges.pgm       # thresholded edge image

Exit codes: 0 success, 2 input/IO error, 3 config mismatch, 4 precondition.
"""

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any

from dotenv import load_dotenv

from src.commands import (
    cmd_edges,
    cmd_enroll,
    cmd_evaluate,
    cmd_extract,
    cmd_identify,
    cmd_sweep,
    cmd_synth,
    resolve_corpus,
)
from src.config import Config
from src.errors import EdgeprintError
from src.models import EdgeOperator, RegionGrid, SplitSpec, SynthSpec
from src.synthetic import load_benchmark_spec

logger = logging.getLogger(__name__)

EXTRACTION_FLAGS = ("operator", "threshold", "threshold_k", "min_component", "grid")


def _non_negative_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _positive_float(text: str) -> float:
    value = _non_negative_float(text)
    if value == 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _grid(text: str) -> RegionGrid:
    try:
        return RegionGrid.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    """Parser for every subcommand; flag values are validated here."""
    extraction = argparse.ArgumentParser(add_help=False)
    extraction.add_argument(
        "--operator",
        choices=[op.value for op in EdgeOperator],
        help="Edge operator (default: sobel, or EDGEPRINT_OPERATOR)",
    )
    extraction.add_argument(
        "--threshold",
        type=_non_negative_float,
        help="Fixed edge threshold (default: automatic)",
    )
    extraction.add_argument(
        "--threshold-k",
        type=_positive_float,
        help="Automatic threshold multiplier of the mean response (default: 4.0)",
    )
    extraction.add_argument(
        "--min-component",
        type=_positive_int,
        help="Smallest edge component counted, in pixels (default: 5)",
    )
    extraction.add_argument(
        "--grid", type=_grid, help="Region grid RxC: 2x2, 2x4 or 4x4 (default: 2x2)"
    )

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--out", type=Path, help="Write the report here")

    corpus = argparse.ArgumentParser(add_help=False)
    source = corpus.add_mutually_exclusive_group(required=True)
    source.add_argument("--corpus", type=Path, help="Directory of <class>/<sample>.pgm")
    source.add_argument(
        "--benchmark", action="store_true", help="Use the frozen synthetic corpus"
    )
    corpus.add_argument("--n-train", type=_positive_int, default=6)
    corpus.add_argument("--n-test", type=_positive_int, default=6)
    corpus.add_argument("--seed", type=int, default=0, help="Split shuffle seed")
    corpus.add_argument("--workers", type=_positive_int, help="Extraction threads")

    parser = argparse.ArgumentParser(
        description="Palmprint identification from regional edge texture",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "extract", parents=[extraction, output], help="Print an image's features"
    )
    p.add_argument("image", type=Path)

    p = sub.add_parser(
        "enroll", parents=[extraction, output], help="Add images to a gallery class"
    )
    p.add_argument("--gallery", type=Path, required=True)
    p.add_argument("class_id")
    p.add_argument("images", type=Path, nargs="+")

    p = sub.add_parser(
        "identify", parents=[extraction, output], help="Match an image to a gallery"
    )
    p.add_argument("--gallery", type=Path, required=True)
    p.add_argument("--top", type=_positive_int, help="Only list the K best classes")
    p.add_argument("image", type=Path)

    sub.add_parser(
        "evaluate",
        parents=[extraction, corpus, output],
        help="Correct identification rate on a train/test split",
    )
    sub.add_parser(
        "sweep",
        parents=[extraction, corpus, output],
        help="Evaluate all grids and operators",
    )

    p = sub.add_parser("synth", help="Write a synthetic palm corpus")
    p.add_argument("--out", type=Path, required=True, help="Output directory")
    p.add_argument("--seed", type=int, help="Generator seed")
    p.add_argument("--benchmark", action="store_true", help="Start from the benchmark")
    p.add_argument("--classes", type=_positive_int)
    p.add_argument("--samples", type=_positive_int)
    p.add_argument("--width", type=_positive_int)
    p.add_argument("--height", type=_positive_int)

    p = sub.add_parser(
        "edges", parents=[extraction], help="Write the filtered edge image"
    )
    p.add_argument("image", type=Path)
    p.add_argument("--out", type=Path, required=True, help="Output PGM")

    return parser


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    """Parse command line arguments."""
    return build_parser().parse_args(argv)


def _synth_spec(args: argparse.Namespace) -> SynthSpec:
    spec = load_benchmark_spec() if args.benchmark else SynthSpec()
    changes: dict[str, Any] = {
        "seed": args.seed,
        "class_count": args.classes,
        "samples_per_class": args.samples,
        "width": args.width,
        "height": args.height,
    }
    return replace(spec, **{k: v for k, v in changes.items() if v is not None})


def run_command(args: argparse.Namespace, settings: Config) -> int:
    """Dispatch a parsed command; library errors become exit codes."""
    overrides = {name: getattr(args, name, None) for name in EXTRACTION_FLAGS}
    out = getattr(args, "out", None)
    try:
        if args.command == "extract":
            return cmd_extract(args.image, settings.extraction_config(**overrides), out)
        if args.command == "enroll":
            return cmd_enroll(
                args.class_id, args.images, args.gallery, settings, overrides, out
            )
        if args.command == "identify":
            return cmd_identify(args.image, args.gallery, overrides, args.top, out)
        if args.command in ("evaluate", "sweep"):
            config = settings.extraction_config(**overrides)
            split_spec = SplitSpec(args.n_train, args.n_test, args.seed)
            workers = args.workers or settings.workers
            corpus = resolve_corpus(args.corpus, args.benchmark)
            if args.command == "evaluate":
                return cmd_evaluate(corpus, split_spec, config, workers, out)
            return cmd_sweep(corpus, split_spec, config, workers, out)
        if args.command == "synth":
            return cmd_synth(_synth_spec(args), args.out)
        if args.command == "edges":
            return cmd_edges(args.image, settings.extraction_config(**overrides), out)
    except EdgeprintError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        logger.exception(f"Unexpected failure in {args.command}: {e}")
        return 1
    raise AssertionError(f"unhandled command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    """Main entry point."""
    load_dotenv()

    args = parse_args(argv)

    try:
        settings = Config.from_env()
    except ValueError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return 4

    settings.setup_logging()
    logger.debug(f"Running {args.command} with {settings}")
    return run_command(args, settings)


if __name__ == "__main__":
    sys.exit(main())
