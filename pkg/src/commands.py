"""Command logic behind the CLI subcommands.

Each command is a thin adapter over the library: it reads inputs, calls the
matching library operation and prints the formatted result to stdout, or to
`out` when given. Diagnostics go through logging (stderr) only.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import replace
from pathlib import Path
from typing import Any

from .components import filter_small, label8
from .config import Config
from .edge_detect import detect_edges, edge_image
from .errors import ConfigMismatchError, PreconditionError
from .evaluation import evaluate, load_corpus, sweep
from .features import empty_gallery, enroll, extract, read_gallery, write_gallery
from .formatter import (
    format_eval_report,
    format_match_report,
    format_sweep_table,
    format_vector,
)
from .imaging import read_pgm, write_pgm
from .matcher import identify_two_stage
from .models import ExtractionConfig, RegionGrid, Sample, SplitSpec, SynthSpec
from .synthetic import generate_synthetic, load_benchmark_spec, write_corpus

logger = logging.getLogger(__name__)


def emit(text: str, out: Path | None = None) -> None:
    """Print a report, or write it to `out`."""
    if out is None:
        print(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text + "\n", encoding="utf-8")
    logger.info(f"Wrote report to {out}")


def apply_overrides(
    base: ExtractionConfig, overrides: dict[str, Any]
) -> ExtractionConfig:
    """`base` with the explicitly given extraction flags replaced."""
    given = {k: v for k, v in overrides.items() if v is not None}
    if isinstance(given.get("grid"), str):
        given["grid"] = RegionGrid.parse(given["grid"])
    return replace(base, **given)


def _require_matching(
    gallery_config: ExtractionConfig, requested: ExtractionConfig
) -> None:
    if requested.fingerprint != gallery_config.fingerprint:
        raise ConfigMismatchError(
            "Extraction flags do not match the gallery config",
            expected=gallery_config.fingerprint,
            actual=requested.fingerprint,
        )


def cmd_extract(
    image_path: Path, config: ExtractionConfig, out: Path | None = None
) -> int:
    """Print the feature vector of one image with its config fingerprint."""
    vector = extract(read_pgm(image_path), config)
    emit(format_vector(vector), out)
    return 0


def cmd_enroll(
    class_id: str,
    image_paths: Sequence[Path],
    gallery_path: Path,
    settings: Config,
    overrides: dict[str, Any],
    out: Path | None = None,
) -> int:
    """Append the images' vectors to `class_id`, creating the gallery if absent."""
    if gallery_path.exists():
        gallery = read_gallery(gallery_path)
        _require_matching(gallery.config, apply_overrides(gallery.config, overrides))
    else:
        gallery = empty_gallery(settings.extraction_config(**overrides))
        logger.info(f"Creating gallery {gallery_path} [{gallery.config.fingerprint}]")

    lines = []
    for path in image_paths:
        gallery = enroll(gallery, class_id, read_pgm(path))
        vector = gallery.classes[class_id][-1]
        index = len(gallery.classes[class_id]) - 1
        lines.append(f"{class_id},{index},{vector}  {path}")

    write_gallery(gallery_path, gallery)
    lines.append(
        f"gallery {gallery_path}: {len(gallery.classes)} classes, "
        f"{gallery.sample_count} samples"
    )
    emit("\n".join(lines), out)
    return 0


def cmd_identify(
    image_path: Path,
    gallery_path: Path,
    overrides: dict[str, Any],
    top: int | None = None,
    out: Path | None = None,
) -> int:
    """Match one image against a gallery and print the JSON report."""
    gallery = read_gallery(gallery_path)
    _require_matching(gallery.config, apply_overrides(gallery.config, overrides))
    vector = extract(read_pgm(image_path), gallery.config)
    report = identify_two_stage(vector, gallery)
    logger.info(
        f"{image_path}: stage 1 -> {report.stage1_class}, "
        f"stage 2 -> {report.stage2_class}"
    )
    emit(format_match_report(report, gallery.config.fingerprint, top), out)
    return 0


def resolve_corpus(corpus_dir: Path | None, benchmark: bool) -> list[Sample]:
    """Samples from a `<class>/<sample>.pgm` tree or the frozen benchmark."""
    if corpus_dir is not None:
        return load_corpus(corpus_dir)
    if benchmark:
        return list(generate_synthetic(load_benchmark_spec()))
    raise PreconditionError("Give --corpus DIR or --benchmark")


def cmd_evaluate(
    corpus: Sequence[Sample],
    split_spec: SplitSpec,
    config: ExtractionConfig,
    workers: int = 1,
    out: Path | None = None,
) -> int:
    """Split the corpus, enroll the training half and score the test half."""
    result = evaluate(corpus, split_spec, config, workers)
    emit(format_eval_report(result), out)
    return 0


def cmd_sweep(
    corpus: Sequence[Sample],
    split_spec: SplitSpec,
    base_config: ExtractionConfig,
    workers: int = 1,
    out: Path | None = None,
) -> int:
    """Evaluate every grid and operator pair and print the rate table."""
    cells = sweep(corpus, split_spec, base_config, workers=workers)
    emit(format_sweep_table(cells), out)
    return 0


def cmd_synth(spec: SynthSpec, out_dir: Path) -> int:
    """Write the corpus as `<class>/<sample>.pgm` and list each class's lines."""
    corpus = generate_synthetic(spec)
    write_corpus(corpus, out_dir)
    lines = [
        f"{class_id} {','.join(str(n) for n in counts)}"
        for class_id, counts in corpus.line_counts.items()
    ]
    lines.append(f"wrote {len(corpus)} images to {out_dir}")
    emit("\n".join(lines))
    return 0


def cmd_edges(image_path: Path, config: ExtractionConfig, out: Path) -> int:
    """Write the size-filtered edge map of the whole image as a PGM."""
    image = read_pgm(image_path)
    edges = detect_edges(image, config.operator, config.threshold, config.threshold_k)
    labeled = label8(edges)
    kept = filter_small(labeled, config.min_component)
    write_pgm(out, edge_image(kept))
    emit(f"{int(kept.sum())} edge pixels kept of {int(edges.sum())} -> {out}")
    return 0
