"""8-connected component labelling and the edginess count."""

import logging

import numpy as np
from scipy import ndimage

from .errors import PreconditionError
from .models import EdgeMap, LabeledMap

logger = logging.getLogger(__name__)

DEFAULT_MIN_COMPONENT = 5

# Full 3x3 neighbourhood: diagonal neighbours are connected.
EIGHT_CONNECTIVITY = np.ones((3, 3), dtype=bool)


def _require_min_size(min_size: int) -> None:
    if min_size < 1:
        raise PreconditionError(f"min_size must be >= 1, got {min_size}")


def label8(edges: EdgeMap) -> LabeledMap:
    """Label maximal 8-connected sets of edge pixels 1..component_count.

    Labels are assigned in raster order of each component's first pixel.
    """
    mask = np.asarray(edges, dtype=bool)
    labels, count = ndimage.label(mask, structure=EIGHT_CONNECTIVITY)
    sizes = np.bincount(labels.ravel(), minlength=count + 1)[1:].astype(np.int64)
    return LabeledMap(
        labels=labels.astype(np.int32), component_count=int(count), sizes=sizes
    )


def filter_small(labeled: LabeledMap, min_size: int) -> EdgeMap:
    """Edge pixels whose component has at least `min_size` pixels."""
    _require_min_size(min_size)
    keep = np.zeros(labeled.component_count + 1, dtype=bool)
    keep[1:] = labeled.sizes >= min_size
    return keep[labeled.labels]


def edginess(edges: EdgeMap, min_size: int = DEFAULT_MIN_COMPONENT) -> int:
    """Number of 8-connected components with at least `min_size` pixels."""
    _require_min_size(min_size)
    labeled = label8(edges)
    count = int(np.count_nonzero(labeled.sizes >= min_size))
    logger.debug(
        f"edginess: {count} of {labeled.component_count} components "
        f"have >= {min_size} pixels"
    )
    return count
