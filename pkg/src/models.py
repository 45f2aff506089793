"""Data models for edgeprint."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any

import numpy as np
from numpy.typing import NDArray

from .errors import (
    EmptyClassError,
    IncomparableFeaturesError,
    PreconditionError,
)

# Signed or real per-pixel operator output, same shape as the source image.
ResponseMap = NDArray[Any]
# One boolean per pixel, True marks an edge.
EdgeMap = NDArray[np.bool_]

_GRID_RE = re.compile(r"^\s*(\d+)\s*[xX]\s*(\d+)\s*$")


def _frozen_array(values: Any, dtype: Any) -> NDArray[Any]:
    array = np.array(values, dtype=dtype, copy=True)
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class GrayImage:
    """An 8-bit grayscale image stored row-major as a (height, width) array."""

    pixels: NDArray[np.uint8]

    def __post_init__(self) -> None:
        raw = np.asarray(self.pixels)
        if raw.ndim != 2:
            raise ValueError(f"GrayImage needs a 2-D pixel grid, got {raw.ndim}-D")
        if raw.shape[0] <= 0 or raw.shape[1] <= 0:
            raise ValueError(f"GrayImage dimensions must be positive, got {raw.shape}")
        if raw.dtype != np.uint8:
            if not np.issubdtype(raw.dtype, np.integer):
                raise ValueError(f"GrayImage pixels must be integers, got {raw.dtype}")
            if raw.min() < 0 or raw.max() > 255:
                raise ValueError("GrayImage intensities must lie in [0, 255]")
        object.__setattr__(self, "pixels", _frozen_array(raw, np.uint8))

    @classmethod
    def from_rows(cls, rows: list[list[int]]) -> GrayImage:
        return cls(np.array(rows, dtype=np.int64))

    @classmethod
    def filled(cls, width: int, height: int, value: int = 0) -> GrayImage:
        return cls(np.full((height, width), value, dtype=np.uint8))

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    def crop(self, view: RegionView) -> GrayImage:
        """Sub-image covered by a region view."""
        row, col = view.origin
        return GrayImage(self.pixels[row : row + view.height, col : col + view.width])

    def transpose(self) -> GrayImage:
        return GrayImage(self.pixels.T)

    def invert(self) -> GrayImage:
        return GrayImage(255 - self.pixels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return bool(np.array_equal(self.pixels, other.pixels))

    def __repr__(self) -> str:
        return f"GrayImage({self.width}x{self.height})"


@dataclass(frozen=True)
class RegionGrid:
    """Partition of an image into rows x cols equal rectangles."""

    rows: int
    cols: int

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"Region grid needs rows, cols >= 1, got {self}")

    @property
    def region_count(self) -> int:
        return self.rows * self.cols

    @classmethod
    def parse(cls, text: str) -> RegionGrid:
        """Parse "RxC", e.g. "2x4"."""
        match = _GRID_RE.match(text)
        if not match:
            raise ValueError(f"Grid must look like RxC (e.g. 2x2), got {text!r}")
        return cls(int(match.group(1)), int(match.group(2)))

    @classmethod
    def for_count(cls, count: int) -> RegionGrid:
        """Standard layout for 4, 8 or 16 regions."""
        layouts = {4: (2, 2), 8: (2, 4), 16: (4, 4)}
        if count not in layouts:
            raise ValueError(f"No standard grid for {count} regions")
        return cls(*layouts[count])

    def __str__(self) -> str:
        return f"{self.rows}x{self.cols}"


@dataclass(frozen=True)
class RegionView:
    """One rectangle of a region grid, located in image coordinates."""

    index: int
    origin: tuple[int, int]  # (row, col) of the top-left pixel
    width: int
    height: int

    @property
    def pixel_count(self) -> int:
        return self.width * self.height


class EdgeOperator(str, Enum):
    """3x3 edge operators."""

    SOBEL = "sobel"
    LAPLACIAN = "laplacian"
    LOG = "log"

    @classmethod
    def parse(cls, name: str | EdgeOperator) -> EdgeOperator:
        if isinstance(name, EdgeOperator):
            return name
        try:
            return cls(name.strip().lower())
        except ValueError:
            choices = ", ".join(op.value for op in cls)
            raise ValueError(
                f"Unknown edge operator {name!r} (choose from {choices})"
            ) from None


@dataclass(frozen=True, eq=False)
class LabeledMap:
    """8-connected component labels of an edge map; 0 is background."""

    labels: NDArray[np.int32]
    component_count: int
    sizes: NDArray[np.int64]  # sizes[i] is the pixel count of label i + 1

    @property
    def width(self) -> int:
        return int(self.labels.shape[1])

    @property
    def height(self) -> int:
        return int(self.labels.shape[0])


def format_float(value: float) -> str:
    """Shortest round-tripping decimal form of a float."""
    return repr(float(value))


@dataclass(frozen=True)
class ExtractionConfig:
    """Every setting that influences a feature vector."""

    operator: EdgeOperator = EdgeOperator.SOBEL
    threshold: float | None = None  # None = automatic
    threshold_k: float = 4.0
    min_component: int = 5
    grid: RegionGrid = field(default_factory=lambda: RegionGrid(2, 2))

    def __post_init__(self) -> None:
        object.__setattr__(self, "operator", EdgeOperator.parse(self.operator))
        if not self.threshold_k > 0:
            raise PreconditionError(f"threshold_k must be > 0, got {self.threshold_k}")
        if self.min_component < 1:
            raise PreconditionError(
                f"min_component must be >= 1, got {self.min_component}"
            )
        if self.threshold is not None:
            if not self.threshold >= 0:
                raise PreconditionError(
                    f"threshold must be >= 0, got {self.threshold}"
                )
            object.__setattr__(self, "threshold", float(self.threshold))
        object.__setattr__(self, "threshold_k", float(self.threshold_k))

    @property
    def fingerprint(self) -> str:
        """Canonical string of all fields; equal iff the configs are equal."""
        threshold = "auto" if self.threshold is None else format_float(self.threshold)
        return (
            f"operator={self.operator.value} threshold={threshold} "
            f"threshold_k={format_float(self.threshold_k)} "
            f"min_component={self.min_component} grid={self.grid}"
        )


@dataclass(frozen=True)
class FeatureVector:
    """Per-region edginess counts in row-major region order."""

    values: tuple[int, ...]
    config: ExtractionConfig

    def __post_init__(self) -> None:
        if any(int(v) != v for v in self.values):
            raise ValueError(f"Edginess counts must be integers: {self.values}")
        values = tuple(int(v) for v in self.values)
        if len(values) != self.config.grid.region_count:
            raise ValueError(
                f"Feature vector has {len(values)} values but grid "
                f"{self.config.grid} has {self.config.grid.region_count} regions"
            )
        if any(v < 0 for v in values):
            raise ValueError(f"Edginess counts must be non-negative: {values}")
        object.__setattr__(self, "values", values)

    @property
    def fingerprint(self) -> str:
        return self.config.fingerprint

    def __len__(self) -> int:
        return len(self.values)

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.values)


@dataclass(frozen=True)
class Gallery:
    """Classified training database of feature vectors sharing one config."""

    config: ExtractionConfig
    classes: dict[str, tuple[FeatureVector, ...]] = field(default_factory=dict)
    version: int = 1
    created_at: datetime | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        for class_id, samples in self.classes.items():
            validate_class_id(class_id)
            if not samples:
                raise EmptyClassError(f"Class {class_id!r} has no samples")
            for vector in samples:
                if vector.fingerprint != self.config.fingerprint:
                    raise IncomparableFeaturesError(
                        f"Sample of class {class_id!r} does not match gallery config",
                        expected=self.config.fingerprint,
                        actual=vector.fingerprint,
                    )
        ordered = {cid: tuple(self.classes[cid]) for cid in sorted(self.classes)}
        object.__setattr__(self, "classes", ordered)

    @property
    def class_ids(self) -> list[str]:
        return list(self.classes)

    @property
    def sample_count(self) -> int:
        return sum(len(samples) for samples in self.classes.values())

    def with_sample(self, class_id: str, vector: FeatureVector) -> Gallery:
        """New gallery with `vector` appended to `class_id`'s samples."""
        classes = dict(self.classes)
        classes[class_id] = classes.get(class_id, ()) + (vector,)
        return Gallery(
            config=self.config,
            classes=classes,
            version=self.version,
            created_at=self.created_at,
        )


def validate_class_id(class_id: str) -> None:
    """Reject ids that would break the comma-separated gallery rows."""
    if not class_id or class_id != class_id.strip():
        raise PreconditionError(f"Invalid class id {class_id!r}")
    if any(ch in class_id for ch in ",\n\r"):
        raise PreconditionError(
            f"Class id {class_id!r} must not contain commas or line breaks"
        )


@dataclass(frozen=True)
class ClassDistance:
    """Distances from an unknown vector to every sample of one class."""

    class_id: str
    mean_distance: float
    per_sample: tuple[tuple[int, int], ...]  # (sample_index, distance)

    @property
    def min_distance(self) -> int:
        return min(distance for _, distance in self.per_sample)


@dataclass(frozen=True)
class MatchReport:
    """Stage-1 class ranking plus the stage-2 refinement decision."""

    ranked: tuple[ClassDistance, ...]
    stage1_class: str
    stage2_class: str | None = None
    stage2_candidates: tuple[str, ...] = ()
    # (class_id, sample_index, distance) of the closest individual sample
    stage2_sample: tuple[str, int, int] | None = None
    comparisons: int = 0
    denominator: str = "N"

    def __post_init__(self) -> None:
        if self.stage2_class is not None and self.stage2_class not in (
            self.stage2_candidates
        ):
            raise ValueError(
                f"Stage-2 class {self.stage2_class!r} is not one of "
                f"the candidates {self.stage2_candidates}"
            )

    @property
    def total_samples(self) -> int:
        return sum(len(cd.per_sample) for cd in self.ranked)

    def top(self, k: int | None) -> tuple[ClassDistance, ...]:
        """First `k` ranked classes (all of them when k is None)."""
        return self.ranked if k is None else self.ranked[:k]


@dataclass(frozen=True)
class SplitSpec:
    """Per-class train/test split."""

    n_train: int = 6
    n_test: int = 6
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_train < 1 or self.n_test < 1:
            raise PreconditionError(
                f"Split needs n_train >= 1 and n_test >= 1, got {self}"
            )


@dataclass(frozen=True)
class Sample:
    """One labelled corpus image."""

    class_id: str
    sample_id: str
    image: GrayImage


@dataclass(frozen=True)
class TestOutcome:
    """Identification result for one test sample."""

    __test__ = False  # not a pytest class

    sample_id: str
    true_class: str
    stage1: str
    stage2: str

    @property
    def stage1_correct(self) -> bool:
        return self.stage1 == self.true_class

    @property
    def stage2_correct(self) -> bool:
        return self.stage2 == self.true_class


@dataclass(frozen=True)
class EvalResult:
    """Correct identification rates over a test set."""

    per_test: tuple[TestOutcome, ...]
    config: ExtractionConfig
    split: SplitSpec
    rng: str = "numpy.PCG64"

    def __post_init__(self) -> None:
        if not self.per_test:
            raise PreconditionError("Evaluation needs at least one test sample")

    @property
    def n_test(self) -> int:
        return len(self.per_test)

    @property
    def r_stage1(self) -> float:
        return sum(t.stage1_correct for t in self.per_test) / self.n_test

    @property
    def r_stage2(self) -> float:
        return sum(t.stage2_correct for t in self.per_test) / self.n_test

    @property
    def confusions(self) -> tuple[TestOutcome, ...]:
        """Test rows where at least one stage picked the wrong class."""
        return tuple(
            t for t in self.per_test if not (t.stage1_correct and t.stage2_correct)
        )


@dataclass(frozen=True)
class SweepCell:
    """One (grid, operator) evaluation."""

    grid: RegionGrid
    operator: EdgeOperator
    result: EvalResult


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of the procedural palm-texture generator."""

    class_count: int = 10
    samples_per_class: int = 12
    width: int = 384
    height: int = 284
    line_count_range: tuple[int, int] = (2, 7)  # lines per quadrant, inclusive
    line_thickness: float = 3.0
    position_jitter: float = 2.0  # pixels
    orientation_jitter: float = 3.0  # degrees
    noise_amplitude: int = 6
    background: int = 60
    line_intensity: int = 200
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "line_count_range", tuple(self.line_count_range))
        low, high = self.line_count_range
        if self.class_count < 2:
            raise PreconditionError("Synthetic corpus needs at least 2 classes")
        if self.samples_per_class < 1:
            raise PreconditionError("Synthetic corpus needs samples_per_class >= 1")
        if self.width < 32 or self.height < 32:
            raise PreconditionError(
                f"Synthetic images must be at least 32x32, got "
                f"{self.width}x{self.height}"
            )
        if low < 1 or high < low:
            raise PreconditionError(f"Invalid line count range {self.line_count_range}")
        if self.line_thickness <= 0:
            raise PreconditionError("line_thickness must be positive")
        if min(self.position_jitter, self.orientation_jitter) < 0:
            raise PreconditionError("Jitter must be non-negative")
        if not 0 <= self.noise_amplitude <= 127:
            raise PreconditionError("noise_amplitude must lie in [0, 127]")
        for name in ("background", "line_intensity"):
            if not 0 <= getattr(self, name) <= 255:
                raise PreconditionError(f"{name} must lie in [0, 255]")
        if self.background == self.line_intensity:
            raise PreconditionError("Lines must differ from the background")
        if self.seed < 0:
            raise PreconditionError(f"Generator seed must be >= 0, got {self.seed}")
