"""Pytest fixtures for edgeprint tests."""

import numpy as np
import pytest

from src.imaging import write_pgm
from src.models import (
    ExtractionConfig,
    FeatureVector,
    Gallery,
    GrayImage,
    RegionGrid,
    SynthSpec,
)
from src.synthetic import generate_synthetic, load_benchmark_spec

LINE = 200


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Keep EDGEPRINT_* settings from the shell out of the tests."""
    for name in (
        "EDGEPRINT_LOG_LEVEL",
        "EDGEPRINT_OPERATOR",
        "EDGEPRINT_THRESHOLD_K",
        "EDGEPRINT_MIN_COMPONENT",
        "EDGEPRINT_GRID",
        "EDGEPRINT_WORKERS",
    ):
        monkeypatch.delenv(name, raising=False)


def make_vector(values, grid: RegionGrid | None = None) -> FeatureVector:
    if grid is None:
        grid = RegionGrid.for_count(len(values))
    return FeatureVector(values=tuple(values), config=ExtractionConfig(grid=grid))


def make_gallery(classes: dict[str, list[tuple[int, ...]]]) -> Gallery:
    """Gallery from raw value tuples; every class shares one config."""
    first = next(iter(classes.values()))[0]
    config = ExtractionConfig(grid=RegionGrid.for_count(len(first)))
    return Gallery(
        config=config,
        classes={
            cid: tuple(FeatureVector(values=v, config=config) for v in rows)
            for cid, rows in classes.items()
        },
    )


@pytest.fixture
def constant_image() -> GrayImage:
    return GrayImage.filled(32, 32, 100)


@pytest.fixture
def step_image() -> GrayImage:
    """8x8, columns 0-3 black, columns 4-7 at 200."""
    pixels = np.zeros((8, 8), dtype=np.uint8)
    pixels[:, 4:] = 200
    return GrayImage(pixels)


@pytest.fixture
def lines_image() -> GrayImage:
    """32x32 with three separate 2-pixel bars in LT and one in RB."""
    pixels = np.zeros((32, 32), dtype=np.uint8)
    for top in (2, 7, 12):
        pixels[top : top + 2, 3:13] = LINE
    pixels[23:25, 19:29] = LINE
    return GrayImage(pixels)


@pytest.fixture
def small_spec() -> SynthSpec:
    """Quick corpus: 96x96 images with one to three lines per quadrant."""
    return SynthSpec(
        class_count=3,
        samples_per_class=4,
        width=96,
        height=96,
        line_count_range=(1, 3),
        line_thickness=3.0,
        position_jitter=1.0,
        orientation_jitter=2.0,
        seed=11,
    )


@pytest.fixture(scope="session")
def benchmark_corpus():
    return generate_synthetic(load_benchmark_spec())


@pytest.fixture
def image_file(tmp_path, lines_image):
    path = tmp_path / "palm.pgm"
    write_pgm(path, lines_image)
    return path
