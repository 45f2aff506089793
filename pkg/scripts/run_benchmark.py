#!/usr/bin/env python3
"""Regenerate the frozen benchmark corpus and print its full sweep table."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from dotenv import load_dotenv

from src.config import Config
from src.evaluation import sweep
from src.formatter import format_sweep_table
from src.models import SplitSpec
from src.synthetic import generate_synthetic, load_benchmark_spec


def main() -> None:
    """Run every grid and operator over the benchmark with the 6/6 split."""
    load_dotenv()
    config = Config.from_env()
    config.setup_logging()

    corpus = generate_synthetic(load_benchmark_spec())
    cells = sweep(
        corpus, SplitSpec(), config.extraction_config(), workers=config.workers
    )
    print(format_sweep_table(cells))


if __name__ == "__main__":
    main()
