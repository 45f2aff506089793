"""Tests for report formatting."""

import json

from src.formatter import (
    MACHINE_HEADER,
    format_eval_report,
    format_match_report,
    format_sweep_table,
    format_vector,
    machine_row,
)
from src.matcher import identify_two_stage
from src.models import (
    EdgeOperator,
    EvalResult,
    ExtractionConfig,
    RegionGrid,
    SplitSpec,
    SweepCell,
    TestOutcome,
)
from tests.conftest import make_gallery, make_vector


def _result(config: ExtractionConfig, wrong: int = 0) -> EvalResult:
    outcomes = tuple(
        TestOutcome(f"c0/{i:02d}", "c0", "c1" if i < wrong else "c0", "c0")
        for i in range(4)
    )
    return EvalResult(per_test=outcomes, config=config, split=SplitSpec(6, 6, seed=2))


def test_format_vector():
    text = format_vector(make_vector((3, 0, 0, 1)))
    assert text.splitlines() == [
        "3,0,0,1",
        "config operator=sobel threshold=auto threshold_k=4.0 min_component=5 grid=2x2",
    ]


def test_format_match_report_fields():
    gallery = make_gallery(
        {"a": [(1, 0, 0, 0), (1, 0, 0, 0)], "b": [(0, 0, 0, 0)], "c": [(9, 9, 9, 9)]}
    )
    report = identify_two_stage(make_vector((0, 0, 0, 0)), gallery)
    data = json.loads(format_match_report(report, gallery.config.fingerprint))
    assert list(data) == [
        "config",
        "denominator",
        "stage1_class",
        "stage2_class",
        "stage2_candidates",
        "stage2_sample",
        "comparisons",
        "ranked",
    ]
    assert data["denominator"] == "N"
    assert data["stage1_class"] == "b"
    assert data["stage2_sample"] == {"class_id": "b", "sample_index": 0, "distance": 0}
    assert data["comparisons"] == {"stage1": 4, "stage2": 3}
    assert [r["class_id"] for r in data["ranked"]] == ["b", "a", "c"]
    assert data["ranked"][1]["per_sample"] == [
        {"sample_index": 0, "distance": 1},
        {"sample_index": 1, "distance": 1},
    ]


def test_format_match_report_top_k():
    gallery = make_gallery({c: [(i, 0, 0, 0)] for i, c in enumerate("abcde")})
    report = identify_two_stage(make_vector((0, 0, 0, 0)), gallery)
    data = json.loads(format_match_report(report, "fp", top=2))
    assert [r["rank"] for r in data["ranked"]] == [1, 2]
    assert data["comparisons"]["stage1"] == 5


def test_machine_row():
    config = ExtractionConfig(operator=EdgeOperator.LOG, grid=RegionGrid(2, 4))
    assert machine_row(_result(config, wrong=1)) == "2x4,log,0.75,1.0,4"


def test_format_eval_report():
    text = format_eval_report(_result(ExtractionConfig(), wrong=1))
    lines = text.splitlines()
    assert lines[0].startswith("config  operator=sobel")
    assert "seed=2 rng=numpy.PCG64" in lines[1]
    assert "R stage 1   75.00%" in text
    assert "  c0/00  c0  c1  c0" in text
    assert lines[-2:] == [MACHINE_HEADER, "2x2,sobel,0.75,1.0,4"]


def test_format_eval_report_without_confusions():
    text = format_eval_report(_result(ExtractionConfig()))
    assert "misidentified" not in text


def test_format_sweep_table():
    cells = [
        SweepCell(grid, op, _result(ExtractionConfig(operator=op, grid=grid)))
        for grid in (RegionGrid(2, 2), RegionGrid(4, 4))
        for op in EdgeOperator
    ]
    lines = format_sweep_table(cells).splitlines()
    assert lines[0].split() == "grid operator R stage 1 R stage 2 tests".split()
    assert set(lines[1]) == {"-"}
    assert lines[2].split() == ["2x2", "sobel", "100.00%", "100.00%", "4"]
    machine = lines[lines.index(MACHINE_HEADER) + 1 :]
    assert len(machine) == 6
    assert machine[-1] == "4x4,log,1.0,1.0,4"
