"""Train/test splitting, batch identification and correct-identification rates."""

import hashlib
import logging
from collections.abc import Iterable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import TypeVar

import numpy as np

from .errors import (
    EdgeprintError,
    InputError,
    PreconditionError,
    SampleError,
    SplitError,
)
from .features import extract
from .imaging import read_pgm
from .matcher import identify_two_stage
from .models import (
    EdgeOperator,
    EvalResult,
    ExtractionConfig,
    FeatureVector,
    Gallery,
    RegionGrid,
    Sample,
    SplitSpec,
    SweepCell,
    TestOutcome,
)
from .synthetic import RNG_ALGORITHM

logger = logging.getLogger(__name__)

T = TypeVar("T")

SWEEP_GRIDS = (RegionGrid(2, 2), RegionGrid(2, 4), RegionGrid(4, 4))
SWEEP_OPERATORS = tuple(EdgeOperator)


def class_rng(seed: int, class_id: str) -> np.random.Generator:
    """Seeded generator for one class, independent of the other classes."""
    digest = hashlib.sha256(f"{seed}-{class_id}".encode()).hexdigest()[:16]
    return np.random.default_rng(int(digest, 16))


def split(
    samples_by_class: Mapping[str, Sequence[T]], spec: SplitSpec
) -> tuple[dict[str, list[T]], dict[str, list[T]]]:
    """Shuffle each class by seed; first n_train train, next n_test test."""
    needed = spec.n_train + spec.n_test
    train: dict[str, list[T]] = {}
    test: dict[str, list[T]] = {}
    for class_id in sorted(samples_by_class):
        samples = list(samples_by_class[class_id])
        if len(samples) < needed:
            raise SplitError(
                f"Class {class_id!r} has {len(samples)} samples, "
                f"split needs {spec.n_train} + {spec.n_test} = {needed}"
            )
        order = class_rng(spec.seed, class_id).permutation(len(samples))
        shuffled = [samples[i] for i in order]
        train[class_id] = shuffled[: spec.n_train]
        test[class_id] = shuffled[spec.n_train : needed]
    return train, test


def group_by_class(samples: Iterable[Sample]) -> dict[str, list[Sample]]:
    """Samples per class, each list sorted by sample id."""
    grouped: dict[str, list[Sample]] = {}
    seen: set[str] = set()
    for sample in samples:
        if sample.sample_id in seen:
            raise PreconditionError(f"Duplicate sample id {sample.sample_id!r}")
        seen.add(sample.sample_id)
        grouped.setdefault(sample.class_id, []).append(sample)
    return {
        cid: sorted(grouped[cid], key=lambda s: s.sample_id) for cid in sorted(grouped)
    }


def _extract_sample(sample: Sample, config: ExtractionConfig) -> FeatureVector:
    try:
        return extract(sample.image, config)
    except EdgeprintError as e:
        raise SampleError(sample.sample_id, e) from e


def extract_all(
    samples: Sequence[Sample], config: ExtractionConfig, workers: int = 1
) -> dict[str, FeatureVector]:
    """Feature vectors keyed by sample id; extraction runs in a thread pool."""
    if workers <= 1:
        vectors = [_extract_sample(s, config) for s in samples]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            vectors = list(
                executor.map(lambda s: _extract_sample(s, config), samples)
            )
    return {s.sample_id: v for s, v in zip(samples, vectors)}


def evaluate(
    corpus: Iterable[Sample],
    spec: SplitSpec,
    config: ExtractionConfig,
    workers: int = 1,
) -> EvalResult:
    """Enroll the training split, identify every test sample, score both stages."""
    train, test = split(group_by_class(corpus), spec)
    used = [s for cid in train for s in train[cid] + test[cid]]
    vectors = extract_all(used, config, workers)

    gallery = Gallery(
        config=config,
        classes={
            cid: tuple(vectors[s.sample_id] for s in samples)
            for cid, samples in train.items()
        },
    )

    outcomes = []
    for class_id, samples in test.items():
        for sample in samples:
            try:
                report = identify_two_stage(vectors[sample.sample_id], gallery)
            except EdgeprintError as e:
                raise SampleError(sample.sample_id, e) from e
            assert report.stage2_class is not None
            outcomes.append(
                TestOutcome(
                    sample_id=sample.sample_id,
                    true_class=class_id,
                    stage1=report.stage1_class,
                    stage2=report.stage2_class,
                )
            )
    outcomes.sort(key=lambda t: (t.true_class, t.sample_id))

    result = EvalResult(
        per_test=tuple(outcomes), config=config, split=spec, rng=RNG_ALGORITHM
    )
    logger.info(
        f"Evaluated {config.operator.value} {config.grid}: "
        f"R1={result.r_stage1:.3f} R2={result.r_stage2:.3f} "
        f"over {result.n_test} tests"
    )
    return result


def sweep(
    corpus: Iterable[Sample],
    spec: SplitSpec,
    base_config: ExtractionConfig,
    grids: Sequence[RegionGrid] = SWEEP_GRIDS,
    operators: Sequence[EdgeOperator] = SWEEP_OPERATORS,
    workers: int = 1,
) -> list[SweepCell]:
    """Evaluate every (grid, operator) combination, grids outermost."""
    samples = list(corpus)
    cells = []
    for grid in grids:
        for operator in operators:
            config = replace(base_config, grid=grid, operator=operator)
            result = evaluate(samples, spec, config, workers)
            cells.append(SweepCell(grid=grid, operator=operator, result=result))
    return cells


def load_corpus(directory: str | Path) -> list[Sample]:
    """Read a `<class>/<sample>.pgm` tree; class ids are directory names."""
    root = Path(directory)
    if not root.is_dir():
        raise InputError(f"corpus directory not found: {root}")

    samples = []
    for class_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        for image_path in sorted(class_dir.glob("*.pgm")):
            samples.append(
                Sample(
                    class_id=class_dir.name,
                    sample_id=f"{class_dir.name}/{image_path.stem}",
                    image=read_pgm(image_path),
                )
            )
    if not samples:
        raise InputError(f"no <class>/<sample>.pgm images under {root}")
    logger.info(f"Loaded {len(samples)} corpus images from {root}")
    return samples
