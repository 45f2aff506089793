"""City-block matching against a gallery: class ranking and two-stage refinement.

Stage 1 ranks classes by the mean distance from the unknown vector to the
class's samples. Stage 2 keeps the two leading classes and picks the class
of the single closest sample among them.
"""

import logging
from collections.abc import Sequence

from .errors import EmptyClassError, EmptyGalleryError, IncomparableFeaturesError
from .models import ClassDistance, FeatureVector, Gallery, MatchReport

logger = logging.getLogger(__name__)

STAGE2_CLASSES = 2


def _check_comparable(u: FeatureVector, t: FeatureVector) -> None:
    if u.fingerprint != t.fingerprint:
        raise IncomparableFeaturesError(
            "Feature vectors come from different extraction configs",
            expected=t.fingerprint,
            actual=u.fingerprint,
        )
    if len(u) != len(t):
        raise IncomparableFeaturesError(
            f"Feature vectors differ in length ({len(u)} vs {len(t)})"
        )


def city_block(u: FeatureVector, t: FeatureVector) -> int:
    """Sum over regions of |u_i - t_i|."""
    _check_comparable(u, t)
    return sum(abs(a - b) for a, b in zip(u.values, t.values))


def class_distance(
    u: FeatureVector, samples: Sequence[FeatureVector], class_id: str = ""
) -> ClassDistance:
    """Per-sample distances and their arithmetic mean."""
    if not samples:
        raise EmptyClassError(f"Class {class_id!r} has no samples to match against")
    per_sample = tuple((j, city_block(u, t)) for j, t in enumerate(samples))
    total = sum(distance for _, distance in per_sample)
    return ClassDistance(
        class_id=class_id,
        mean_distance=total / len(per_sample),
        per_sample=per_sample,
    )


def _rank(u: FeatureVector, g: Gallery) -> tuple[ClassDistance, ...]:
    if not g.classes:
        raise EmptyGalleryError("Cannot identify against an empty gallery")
    if u.fingerprint != g.config.fingerprint:
        raise IncomparableFeaturesError(
            "Query features do not match the gallery config",
            expected=g.config.fingerprint,
            actual=u.fingerprint,
        )
    distances = [
        class_distance(u, samples, class_id)
        for class_id, samples in g.classes.items()
    ]
    return tuple(sorted(distances, key=lambda cd: (cd.mean_distance, cd.class_id)))


def identify_stage1(u: FeatureVector, g: Gallery) -> MatchReport:
    """Rank every class by mean distance; rank 1 is the stage-1 decision."""
    ranked = _rank(u, g)
    return MatchReport(
        ranked=ranked,
        stage1_class=ranked[0].class_id,
        comparisons=sum(len(cd.per_sample) for cd in ranked),
    )


def identify_two_stage(u: FeatureVector, g: Gallery) -> MatchReport:
    """Stage 1, then the closest individual sample among the two leaders.

    Equal sample distances go to the class ranked higher in stage 1, which
    is the smaller mean, then the lexicographically smaller class id.
    """
    ranked = _rank(u, g)
    leaders = ranked[:STAGE2_CLASSES]
    best: tuple[int, int, int] | None = None  # (distance, rank, sample_index)
    for rank, cd in enumerate(leaders):
        for index, distance in cd.per_sample:
            candidate = (distance, rank, index)
            if best is None or candidate < best:
                best = candidate
    assert best is not None
    distance, rank, index = best
    winner = leaders[rank].class_id

    if winner != ranked[0].class_id:
        logger.debug(
            f"Stage 2 overrides stage 1: {ranked[0].class_id} -> {winner} "
            f"(sample {index} at distance {distance})"
        )
    return MatchReport(
        ranked=ranked,
        stage1_class=ranked[0].class_id,
        stage2_class=winner,
        stage2_candidates=tuple(cd.class_id for cd in leaders),
        stage2_sample=(winner, index, distance),
        comparisons=sum(len(cd.per_sample) for cd in leaders),
    )
