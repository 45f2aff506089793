"""Tests for 8-connected labelling and edginess."""

import numpy as np
import pytest

from src.components import edginess, filter_small, label8
from src.errors import PreconditionError
from src.models import LabeledMap
from tests.oracles import flood_fill_labels, same_partition


def _map(rows: list[str]) -> np.ndarray:
    return np.array([[ch == "#" for ch in row] for row in rows], dtype=bool)


def test_label8_empty():
    labeled = label8(np.zeros((5, 7), dtype=bool))
    assert labeled.component_count == 0
    assert not labeled.labels.any()
    assert labeled.sizes.size == 0


def test_label8_diagonal_pixels_connect():
    labeled = label8(_map(["#.", ".#"]))
    assert labeled.component_count == 1
    assert labeled.sizes.tolist() == [2]


def test_label8_checkerboard_is_one_component():
    board = (np.add.outer(np.arange(4), np.arange(4)) % 2).astype(bool)
    assert label8(board).component_count == 1


def test_label8_raster_order_labels():
    labeled = label8(_map(["..#", "#..", "#.#"]))
    assert labeled.component_count == 3
    assert labeled.labels[0, 2] == 1
    assert labeled.labels[1, 0] == 2
    assert labeled.labels[2, 2] == 3


def test_label8_matches_flood_fill_on_1000_maps():
    rng = np.random.default_rng(99)
    densities = (0.1, 0.3, 0.5, 0.7)
    for i in range(1000):
        height, width = rng.integers(1, 65, size=2)
        mask = rng.random((height, width)) < densities[i % len(densities)]
        labeled = label8(mask)
        oracle_labels, oracle_count, oracle_sizes = flood_fill_labels(mask)
        assert labeled.component_count == oracle_count
        assert same_partition(labeled.labels, oracle_labels, mask)
        assert not labeled.labels[~mask].any()
        assert sorted(labeled.sizes.tolist()) == sorted(oracle_sizes)


def test_filter_small_sizes_3_7_12():
    edges = np.zeros((12, 20), dtype=bool)
    edges[0, 0:3] = True
    edges[4, 0:7] = True
    edges[8:10, 0:6] = True
    labeled = label8(edges)
    assert sorted(labeled.sizes.tolist()) == [3, 7, 12]
    kept = filter_small(labeled, 5)
    assert kept.sum() == 19
    assert not kept[0].any()


def test_filter_small_identity_and_empty(lines_image):
    edges = lines_image.pixels > 0
    labeled = label8(edges)
    np.testing.assert_array_equal(filter_small(labeled, 1), edges)
    assert not filter_small(labeled, int(labeled.sizes.max()) + 1).any()


def test_filter_small_rejects_zero():
    with pytest.raises(PreconditionError):
        filter_small(label8(np.ones((2, 2), dtype=bool)), 0)


def test_edginess_counts():
    assert edginess(np.zeros((4, 4), dtype=bool)) == 0
    two_bars = _map(["######", "......", "######"])
    assert edginess(two_bars, 1) == 2
    assert edginess(two_bars, 6) == 2
    assert edginess(two_bars, 7) == 0
    with pytest.raises(PreconditionError):
        edginess(two_bars, 0)


def test_edginess_matches_flood_fill_on_random_maps():
    rng = np.random.default_rng(5)
    for _ in range(50):
        mask = rng.random((24, 24)) < 0.3
        _, _, sizes = flood_fill_labels(mask)
        for min_size in (1, 5):
            assert edginess(mask, min_size) == sum(s >= min_size for s in sizes)


def test_edginess_is_monotone_in_min_size():
    rng = np.random.default_rng(17)
    for _ in range(100):
        mask = rng.random(tuple(rng.integers(1, 33, size=2))) < 0.4
        counts = [edginess(mask, m) for m in range(1, 16)]
        assert counts == sorted(counts, reverse=True)


def test_edginess_is_additive_over_separated_maps():
    rng = np.random.default_rng(23)
    for _ in range(100):
        a = rng.random(tuple(rng.integers(1, 20, size=2))) < 0.4
        b = rng.random(tuple(rng.integers(1, 20, size=2))) < 0.4
        combined = np.zeros(
            (a.shape[0] + b.shape[0] + 1, a.shape[1] + b.shape[1] + 1), dtype=bool
        )
        combined[: a.shape[0], : a.shape[1]] = a
        combined[a.shape[0] + 1 :, a.shape[1] + 1 :] = b
        for min_size in (1, 3):
            assert edginess(combined, min_size) == edginess(a, min_size) + edginess(
                b, min_size
            )


def test_edginess_ignores_scan_order():
    rng = np.random.default_rng(29)
    for _ in range(100):
        mask = rng.random(tuple(rng.integers(1, 33, size=2))) < 0.35
        expected = edginess(mask, 2)
        for variant in (mask.T, mask[::-1], mask[:, ::-1], mask[::-1, ::-1].T):
            assert edginess(variant, 2) == expected


def test_filter_small_ignores_label_numbering():
    rng = np.random.default_rng(31)
    for _ in range(50):
        labeled = label8(rng.random((24, 24)) < 0.3)
        order = rng.permutation(labeled.component_count)
        renumber = np.concatenate(([0], order + 1))
        sizes = np.empty_like(labeled.sizes)
        sizes[order] = labeled.sizes
        relabeled = LabeledMap(
            labels=renumber[labeled.labels].astype(np.int32),
            component_count=labeled.component_count,
            sizes=sizes,
        )
        for min_size in (1, 4):
            np.testing.assert_array_equal(
                filter_small(relabeled, min_size), filter_small(labeled, min_size)
            )
