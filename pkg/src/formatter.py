"""Text and JSON rendering of vectors, match reports and evaluation tables."""

import json
from collections.abc import Sequence
from typing import Any

from .models import (
    EvalResult,
    FeatureVector,
    MatchReport,
    SweepCell,
    format_float,
)

MACHINE_HEADER = "# grid,operator,r_stage1,r_stage2,n_test"


def format_vector(vector: FeatureVector) -> str:
    """`<v0>,<v1>,...` followed by the config fingerprint line."""
    return f"{vector}\nconfig {vector.fingerprint}"


def match_report_dict(
    report: MatchReport, fingerprint: str, top: int | None = None
) -> dict[str, Any]:
    stage2_sample = None
    if report.stage2_sample is not None:
        class_id, index, distance = report.stage2_sample
        stage2_sample = {
            "class_id": class_id,
            "sample_index": index,
            "distance": distance,
        }
    return {
        "config": fingerprint,
        "denominator": report.denominator,
        "stage1_class": report.stage1_class,
        "stage2_class": report.stage2_class,
        "stage2_candidates": list(report.stage2_candidates),
        "stage2_sample": stage2_sample,
        "comparisons": {
            "stage1": report.total_samples,
            "stage2": report.comparisons,
        },
        "ranked": [
            {
                "rank": rank,
                "class_id": cd.class_id,
                "mean_distance": cd.mean_distance,
                "per_sample": [
                    {"sample_index": index, "distance": distance}
                    for index, distance in cd.per_sample
                ],
            }
            for rank, cd in enumerate(report.top(top), start=1)
        ],
    }


def format_match_report(
    report: MatchReport, fingerprint: str, top: int | None = None
) -> str:
    """JSON report; key order is fixed so reruns are byte-identical."""
    return json.dumps(match_report_dict(report, fingerprint, top), indent=2)


def _percent(rate: float) -> str:
    return f"{rate * 100:6.2f}%"


def machine_row(result: EvalResult) -> str:
    """`grid,operator,r_stage1,r_stage2,n_test` for one evaluation."""
    config = result.config
    return (
        f"{config.grid},{config.operator.value},{format_float(result.r_stage1)},"
        f"{format_float(result.r_stage2)},{result.n_test}"
    )


def format_eval_report(result: EvalResult) -> str:
    """Human-readable rates and confusions, ending with the machine row."""
    split = result.split
    lines = [
        f"config  {result.config.fingerprint}",
        f"split   n_train={split.n_train} n_test={split.n_test} "
        f"seed={split.seed} rng={result.rng}",
        f"tests   {result.n_test}",
        f"R stage 1  {_percent(result.r_stage1)}",
        f"R stage 2  {_percent(result.r_stage2)}",
    ]
    if result.confusions:
        lines.append("")
        lines.append("misidentified (sample, true, stage 1, stage 2):")
        for t in result.confusions:
            lines.append(f"  {t.sample_id}  {t.true_class}  {t.stage1}  {t.stage2}")
    lines.append("")
    lines.append(MACHINE_HEADER)
    lines.append(machine_row(result))
    return "\n".join(lines)


def format_sweep_table(cells: Sequence[SweepCell]) -> str:
    """Aligned comparison table followed by the machine-readable block."""
    header = (
        f"{'grid':<6}{'operator':<11}"
        f"{'R stage 1':>10}{'R stage 2':>11}{'tests':>7}"
    )
    lines = [header, "-" * len(header)]
    for cell in cells:
        result = cell.result
        lines.append(
            f"{str(cell.grid):<6}{cell.operator.value:<11}"
            f"{_percent(result.r_stage1):>10}{_percent(result.r_stage2):>11}"
            f"{result.n_test:>7}"
        )
    lines.append("")
    lines.append(MACHINE_HEADER)
    lines.extend(machine_row(cell.result) for cell in cells)
    return "\n".join(lines)
