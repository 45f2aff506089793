"""Procedural palm-texture corpus.

Each class owns a characteristic number of thick bright lines per image
quadrant (LT, RT, LB, RB). Samples of a class redraw the same lines with
jittered position and orientation plus bounded uniform noise. Lines are
laid out in horizontal slots that keep them, and their edge bands, apart,
so every line yields exactly one connected edge component.
"""

import json
import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass
from itertools import product
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from .config import get_data_dir
from .errors import PreconditionError
from .imaging import grid_views, write_pgm
from .models import GrayImage, RegionGrid, Sample, SynthSpec

logger = logging.getLogger(__name__)

RNG_ALGORITHM = "numpy.PCG64"

QUADRANTS = RegionGrid(2, 2)
# Line length as a fraction of the quadrant width.
LENGTH_RANGE = (0.4, 0.6)
# Class-level horizontal shift of a quadrant's lines, fraction of its width.
MAX_CENTER_SHIFT = 0.05
# Background pixels kept between a line's edge band and the quadrant border.
EDGE_MARGIN = 3
# Preferred minimum L1 distance between two classes' line-count vectors.
MIN_LAYOUT_SEPARATION = 3


@dataclass(frozen=True)
class LineSpec:
    """A line segment by its centre, length and angle (degrees)."""

    x: float
    y: float
    length: float
    angle: float = 0.0


@dataclass(frozen=True)
class SyntheticCorpus:
    """Generated samples plus the line counts each class was drawn with."""

    spec: SynthSpec
    samples: tuple[Sample, ...]
    line_counts: dict[str, tuple[int, ...]]  # class -> lines per quadrant

    def __iter__(self) -> Iterator[Sample]:
        return iter(self.samples)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def class_ids(self) -> list[str]:
        return list(self.line_counts)


def class_ids(spec: SynthSpec) -> list[str]:
    """Zero-padded ids c00, c01, ... wide enough for the class count."""
    width = max(2, len(str(spec.class_count - 1)))
    return [f"c{i:0{width}d}" for i in range(spec.class_count)]


def check_layout(spec: SynthSpec) -> None:
    """Raise if lines could touch each other or a quadrant border."""
    views = grid_views(spec.width, spec.height, QUADRANTS)
    narrow = min(v.width for v in views)
    wide = max(v.width for v in views)
    short = min(v.height for v in views)
    radius = spec.line_thickness / 2
    drift = LENGTH_RANGE[1] / 2 * wide * math.tan(
        math.radians(spec.orientation_jitter)
    )

    most_lines = spec.line_count_range[1]
    slot = short / most_lines
    needed = 2 * (radius + spec.position_jitter + drift) + 4
    if slot < needed:
        raise PreconditionError(
            f"{most_lines} lines per quadrant need {needed:.1f}px slots, "
            f"but a {short}px quadrant only gives {slot:.1f}px"
        )
    reach = (
        (0.5 + MAX_CENTER_SHIFT + LENGTH_RANGE[1] / 2) * narrow
        + spec.position_jitter
        + radius
    )
    if reach > narrow - EDGE_MARGIN:
        raise PreconditionError(
            f"Lines reach {reach:.1f}px into a {narrow}px quadrant; "
            f"widen the image or reduce jitter/thickness"
        )


def draw_line_counts(spec: SynthSpec) -> list[tuple[int, ...]]:
    """Pairwise-distinct per-quadrant line counts, one vector per class."""
    low, high = spec.line_count_range
    candidates = list(product(range(low, high + 1), repeat=QUADRANTS.region_count))
    rng = np.random.default_rng([spec.seed, 0])
    order = [candidates[i] for i in rng.permutation(len(candidates))]

    for separation in range(MIN_LAYOUT_SEPARATION, 0, -1):
        chosen: list[tuple[int, ...]] = []
        for counts in order:
            if all(
                sum(abs(a - b) for a, b in zip(counts, other)) >= separation
                for other in chosen
            ):
                chosen.append(counts)
                if len(chosen) == spec.class_count:
                    if separation < MIN_LAYOUT_SEPARATION:
                        logger.warning(
                            f"Class layouts only {separation} lines apart; "
                            f"widen line_count_range for better separation"
                        )
                    return chosen
    raise PreconditionError(
        f"Line count range {spec.line_count_range} cannot give "
        f"{spec.class_count} distinct classes"
    )


def class_layout(
    spec: SynthSpec, counts: tuple[int, ...], class_index: int
) -> list[LineSpec]:
    """Un-jittered lines of one class, stacked in evenly spaced slots."""
    rng = np.random.default_rng([spec.seed, 1, class_index])
    lines = []
    for view, count in zip(grid_views(spec.width, spec.height, QUADRANTS), counts):
        top, left = view.origin
        shift = rng.uniform(-MAX_CENTER_SHIFT, MAX_CENTER_SHIFT) * view.width
        for i in range(count):
            lines.append(
                LineSpec(
                    x=left + view.width / 2 + shift,
                    y=top + (i + 0.5) * view.height / count,
                    length=rng.uniform(*LENGTH_RANGE) * view.width,
                )
            )
    return lines


def draw_segment(
    canvas: NDArray[np.int16],
    start: tuple[float, float],
    end: tuple[float, float],
    radius: float,
    value: int,
) -> None:
    """Set every pixel within `radius` of the segment start-end, in place."""
    (x0, y0), (x1, y1) = start, end
    height, width = canvas.shape
    left = max(math.floor(min(x0, x1) - radius), 0)
    right = min(math.ceil(max(x0, x1) + radius), width - 1)
    top = max(math.floor(min(y0, y1) - radius), 0)
    bottom = min(math.ceil(max(y0, y1) + radius), height - 1)
    if left > right or top > bottom:
        return

    ys, xs = np.mgrid[top : bottom + 1, left : right + 1]
    dx, dy = x1 - x0, y1 - y0
    length_sq = dx * dx + dy * dy
    if length_sq == 0:
        t = np.zeros(xs.shape)
    else:
        t = np.clip(((xs - x0) * dx + (ys - y0) * dy) / length_sq, 0.0, 1.0)
    dist = np.hypot(xs - (x0 + t * dx), ys - (y0 + t * dy))
    canvas[top : bottom + 1, left : right + 1][dist <= radius] = value


def render_sample(
    spec: SynthSpec, layout: list[LineSpec], rng: np.random.Generator
) -> GrayImage:
    """One jittered, noisy drawing of a class layout."""
    canvas = np.full((spec.height, spec.width), spec.background, dtype=np.int16)
    jitter, tilt = spec.position_jitter, spec.orientation_jitter
    for line in layout:
        cx = line.x + rng.uniform(-jitter, jitter)
        cy = line.y + rng.uniform(-jitter, jitter)
        theta = math.radians(line.angle + rng.uniform(-tilt, tilt))
        half_x = line.length / 2 * math.cos(theta)
        half_y = line.length / 2 * math.sin(theta)
        draw_segment(
            canvas,
            (cx - half_x, cy - half_y),
            (cx + half_x, cy + half_y),
            spec.line_thickness / 2,
            spec.line_intensity,
        )
    if spec.noise_amplitude:
        amplitude = spec.noise_amplitude
        canvas += rng.integers(
            -amplitude, amplitude, size=canvas.shape, endpoint=True
        ).astype(np.int16)
    return GrayImage(np.clip(canvas, 0, 255).astype(np.uint8))


def generate_synthetic(spec: SynthSpec) -> SyntheticCorpus:
    """Deterministic corpus: identical spec and seed give identical pixels."""
    check_layout(spec)
    ids = class_ids(spec)
    counts = draw_line_counts(spec)
    digits = max(2, len(str(spec.samples_per_class - 1)))

    samples = []
    for class_index, (class_id, class_counts) in enumerate(zip(ids, counts)):
        layout = class_layout(spec, class_counts, class_index)
        for sample_index in range(spec.samples_per_class):
            rng = np.random.default_rng([spec.seed, 2, class_index, sample_index])
            samples.append(
                Sample(
                    class_id=class_id,
                    sample_id=f"{class_id}/{sample_index:0{digits}d}",
                    image=render_sample(spec, layout, rng),
                )
            )
    logger.info(
        f"Generated {len(samples)} synthetic samples "
        f"({spec.class_count} classes, {spec.width}x{spec.height}, seed={spec.seed})"
    )
    return SyntheticCorpus(
        spec=spec, samples=tuple(samples), line_counts=dict(zip(ids, counts))
    )


def write_corpus(corpus: SyntheticCorpus, out_dir: str | Path) -> list[Path]:
    """Write `<class>/<sample>.pgm` files; returns the paths in sample order."""
    out_dir = Path(out_dir)
    paths = []
    for sample in corpus:
        path = out_dir / f"{sample.sample_id}.pgm"
        write_pgm(path, sample.image)
        paths.append(path)
    logger.info(f"Wrote {len(paths)} images to {out_dir}")
    return paths


def load_benchmark_spec(path: str | Path | None = None) -> SynthSpec:
    """The frozen acceptance corpus from data/benchmark.json."""
    spec_path = Path(path) if path else get_data_dir() / "benchmark.json"
    if not spec_path.exists():
        raise FileNotFoundError(f"Benchmark spec not found at {spec_path}")

    with open(spec_path, encoding="utf-8") as f:
        data = json.load(f)
    data["line_count_range"] = tuple(data["line_count_range"])
    return SynthSpec(**data)
