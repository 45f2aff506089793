"""Tests for data models."""

import numpy as np
import pytest

from src.errors import EmptyClassError, IncomparableFeaturesError, PreconditionError
from src.models import (
    EdgeOperator,
    EvalResult,
    ExtractionConfig,
    FeatureVector,
    Gallery,
    GrayImage,
    MatchReport,
    RegionGrid,
    SplitSpec,
    SynthSpec,
    TestOutcome,
    validate_class_id,
)
from tests.conftest import make_gallery, make_vector


def test_gray_image_from_rows():
    image = GrayImage.from_rows([[0, 255], [128, 7]])
    assert (image.width, image.height) == (2, 2)
    assert image.pixels.dtype == np.uint8
    assert image.pixels[1, 0] == 128


def test_gray_image_rejects_bad_pixels():
    with pytest.raises(ValueError):
        GrayImage.from_rows([[0, 256]])
    with pytest.raises(ValueError):
        GrayImage.from_rows([[-1, 0]])
    with pytest.raises(ValueError):
        GrayImage(np.zeros((0, 4), dtype=np.uint8))
    with pytest.raises(ValueError):
        GrayImage(np.zeros(4, dtype=np.uint8))


def test_gray_image_is_immutable():
    source = np.zeros((3, 3), dtype=np.uint8)
    image = GrayImage(source)
    source[0, 0] = 9
    assert image.pixels[0, 0] == 0
    with pytest.raises(ValueError):
        image.pixels[0, 0] = 1
    with pytest.raises(AttributeError):
        image.pixels = source  # type: ignore[misc]


def test_gray_image_equality_and_invert():
    image = GrayImage.from_rows([[0, 10], [20, 255]])
    assert image == GrayImage.from_rows([[0, 10], [20, 255]])
    assert image.invert() == GrayImage.from_rows([[255, 245], [235, 0]])
    assert image.transpose().pixels[0, 1] == 20
    assert repr(image) == "GrayImage(2x2)"


def test_region_grid_parse_and_str():
    assert RegionGrid.parse("2x4") == RegionGrid(2, 4)
    assert RegionGrid.parse(" 4X4 ") == RegionGrid(4, 4)
    assert str(RegionGrid(2, 4)) == "2x4"
    assert RegionGrid(4, 4).region_count == 16
    for bad in ("2", "2x", "ax2", "2x-1", ""):
        with pytest.raises(ValueError):
            RegionGrid.parse(bad)
    with pytest.raises(ValueError):
        RegionGrid(0, 2)


def test_region_grid_standard_layouts():
    assert RegionGrid.for_count(4) == RegionGrid(2, 2)
    assert RegionGrid.for_count(8) == RegionGrid(2, 4)
    assert RegionGrid.for_count(16) == RegionGrid(4, 4)
    with pytest.raises(ValueError):
        RegionGrid.for_count(6)


def test_edge_operator_parse():
    assert EdgeOperator.parse("Sobel") is EdgeOperator.SOBEL
    assert EdgeOperator.parse(EdgeOperator.LOG) is EdgeOperator.LOG
    with pytest.raises(ValueError, match="sobel, laplacian, log"):
        EdgeOperator.parse("canny")


def test_extraction_config_defaults_fingerprint():
    config = ExtractionConfig()
    assert config.fingerprint == (
        "operator=sobel threshold=auto threshold_k=4.0 min_component=5 grid=2x2"
    )


def test_extraction_config_fingerprint_tracks_every_field():
    base = ExtractionConfig()
    variants = [
        ExtractionConfig(operator=EdgeOperator.LOG),
        ExtractionConfig(threshold=0.0),
        ExtractionConfig(threshold_k=3.5),
        ExtractionConfig(min_component=1),
        ExtractionConfig(grid=RegionGrid(4, 4)),
    ]
    prints = {base.fingerprint} | {v.fingerprint for v in variants}
    assert len(prints) == len(variants) + 1
    assert ExtractionConfig(threshold=12).fingerprint == ExtractionConfig(
        threshold=12.0
    ).fingerprint


def test_extraction_config_validation():
    with pytest.raises(PreconditionError):
        ExtractionConfig(threshold_k=0)
    with pytest.raises(PreconditionError):
        ExtractionConfig(min_component=0)
    with pytest.raises(PreconditionError):
        ExtractionConfig(threshold=-1.0)
    with pytest.raises(ValueError):
        ExtractionConfig(operator="prewitt")  # type: ignore[arg-type]


def test_feature_vector_length_must_match_grid():
    with pytest.raises(ValueError):
        FeatureVector(values=(1, 2, 3), config=ExtractionConfig())
    with pytest.raises(ValueError):
        make_vector((1, -2, 3, 4))
    assert str(make_vector((3, 0, 0, 1))) == "3,0,0,1"


@pytest.mark.parametrize("bad", [1.9, 0.5, float("nan"), "2"])
def test_feature_vector_rejects_non_integral_counts(bad):
    with pytest.raises(ValueError):
        make_vector((bad, 0, 0, 0))


def test_feature_vector_accepts_integral_numbers():
    vector = make_vector((np.int64(3), 2.0, 0, 1))
    assert vector.values == (3, 2, 0, 1)
    assert all(type(v) is int for v in vector.values)


def test_gallery_sorts_classes_and_counts():
    gallery = make_gallery({"c2": [(1, 1, 1, 1)], "c1": [(0, 0, 0, 0), (2, 2, 2, 2)]})
    assert gallery.class_ids == ["c1", "c2"]
    assert gallery.sample_count == 3


def test_gallery_rejects_empty_class_and_mixed_configs():
    config = ExtractionConfig()
    with pytest.raises(EmptyClassError):
        Gallery(config=config, classes={"c1": ()})
    sixteen = ExtractionConfig(grid=RegionGrid(4, 4))
    other = FeatureVector(values=(1,) * 16, config=sixteen)
    with pytest.raises(IncomparableFeaturesError):
        Gallery(config=config, classes={"c1": (other,)})


def test_gallery_with_sample_appends():
    gallery = make_gallery({"c1": [(0, 0, 0, 0)]})
    vector = make_vector((1, 2, 3, 4))
    grown = gallery.with_sample("c1", vector).with_sample("c0", vector)
    assert grown.class_ids == ["c0", "c1"]
    assert grown.classes["c1"][-1] == vector
    assert gallery.sample_count == 1


def test_validate_class_id():
    validate_class_id("palm-07")
    for bad in ("", " c1", "c1 ", "a,b", "a\nb"):
        with pytest.raises(PreconditionError):
            validate_class_id(bad)


def test_match_report_requires_candidate_stage2():
    with pytest.raises(ValueError):
        MatchReport(
            ranked=(), stage1_class="a", stage2_class="z", stage2_candidates=("a", "b")
        )


def test_split_spec_validation():
    assert SplitSpec() == SplitSpec(n_train=6, n_test=6, seed=0)
    with pytest.raises(PreconditionError):
        SplitSpec(n_train=0)
    with pytest.raises(PreconditionError):
        SplitSpec(n_test=0)


def test_eval_result_rates():
    outcomes = tuple(
        TestOutcome(f"s{i}", "a", "a" if i < 9 else "b", "a") for i in range(10)
    )
    result = EvalResult(per_test=outcomes, config=ExtractionConfig(), split=SplitSpec())
    assert result.n_test == 10
    assert result.r_stage1 == 0.9
    assert result.r_stage2 == 1.0
    assert [t.sample_id for t in result.confusions] == ["s9"]


def test_eval_result_rejects_empty_test_set():
    with pytest.raises(PreconditionError):
        EvalResult(per_test=(), config=ExtractionConfig(), split=SplitSpec())


def test_synth_spec_validation():
    SynthSpec()
    with pytest.raises(PreconditionError):
        SynthSpec(class_count=1)
    with pytest.raises(PreconditionError):
        SynthSpec(width=16)
    with pytest.raises(PreconditionError):
        SynthSpec(line_count_range=(3, 2))
    with pytest.raises(PreconditionError):
        SynthSpec(background=200, line_intensity=200)
    with pytest.raises(PreconditionError, match="seed"):
        SynthSpec(seed=-1)
