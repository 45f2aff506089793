"""3x3 edge operators and thresholding to binary edge maps.

Responses keep the full image size: the border is handled by replicating
the outermost pixels, so flat borders never produce phantom edges.
"""

import logging
from typing import Any

import numpy as np
from numpy.typing import NDArray
from scipy import ndimage

from .errors import ImageTooSmallError, PreconditionError
from .models import EdgeMap, EdgeOperator, GrayImage, ResponseMap

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD_K = 4.0

SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.int64)
SOBEL_Y = SOBEL_X.T.copy()
LAPLACIAN = np.array([[0, 1, 0], [1, -4, 1], [0, 1, 0]], dtype=np.int64)
# Sign-flipped 4-neighbour Laplacian, the 3x3 stand-in for a Laplacian of Gaussian.
LOG = -LAPLACIAN
IDENTITY = np.array([[0, 0, 0], [0, 1, 0], [0, 0, 0]], dtype=np.int64)


def as_kernel3(kernel: Any) -> NDArray[Any]:
    """Validate and return a 3x3 kernel array."""
    weights = np.asarray(kernel)
    if weights.shape != (3, 3):
        raise ValueError(f"Kernel must be 3x3, got shape {weights.shape}")
    if np.issubdtype(weights.dtype, np.integer):
        return weights.astype(np.int64)
    return weights.astype(np.float64)


def _require_3x3(image: GrayImage) -> None:
    if image.width < 3 or image.height < 3:
        raise ImageTooSmallError(
            f"Edge operators need at least a 3x3 image, got "
            f"{image.width}x{image.height}"
        )


def convolve3(image: GrayImage, kernel: Any) -> ResponseMap:
    """Correlate `image` with a 3x3 kernel using edge-replicated borders.

    Integer kernels give exact int64 responses.
    """
    weights = as_kernel3(kernel)
    _require_3x3(image)
    source = image.pixels.astype(weights.dtype)
    return ndimage.correlate(source, weights, mode="nearest")


def sobel_gradients(image: GrayImage) -> tuple[ResponseMap, ResponseMap]:
    """(gx, gy): horizontal and vertical Sobel derivatives."""
    return convolve3(image, SOBEL_X), convolve3(image, SOBEL_Y)


def sobel_magnitude(image: GrayImage) -> ResponseMap:
    """Gradient magnitude sqrt(gx^2 + gy^2)."""
    gx, gy = sobel_gradients(image)
    return np.hypot(gx, gy)


def laplacian_response(image: GrayImage) -> ResponseMap:
    """Signed 4-neighbour Laplacian response."""
    return convolve3(image, LAPLACIAN)


def log_response(image: GrayImage) -> ResponseMap:
    """Absolute response of the 3x3 LoG kernel."""
    return np.abs(convolve3(image, LOG))


_RESPONSES = {
    EdgeOperator.SOBEL: sobel_magnitude,
    EdgeOperator.LAPLACIAN: laplacian_response,
    EdgeOperator.LOG: log_response,
}


def operator_response(image: GrayImage, op: EdgeOperator | str) -> ResponseMap:
    return _RESPONSES[EdgeOperator.parse(op)](image)


def auto_threshold(resp: ResponseMap, k: float = DEFAULT_THRESHOLD_K) -> float:
    """k times the mean absolute response."""
    values = np.asarray(resp)
    if values.size == 0:
        raise PreconditionError("Cannot threshold an empty response")
    mean = float(np.mean(np.abs(values)))
    if mean == 0.0:
        logger.warning("All-zero response, automatic threshold is 0")
    return k * mean


def threshold_edges(resp: ResponseMap, t: float) -> EdgeMap:
    """Edge iff |response| > t (strict)."""
    if not t >= 0:
        raise PreconditionError(f"Threshold must be >= 0, got {t}")
    return np.abs(np.asarray(resp)) > t


def detect_edges(
    image: GrayImage,
    op: EdgeOperator | str = EdgeOperator.SOBEL,
    t: float | None = None,
    threshold_k: float = DEFAULT_THRESHOLD_K,
) -> EdgeMap:
    """Operator response, thresholded at `t` or at the automatic threshold."""
    resp = operator_response(image, op)
    if t is None:
        t = auto_threshold(resp, threshold_k)
    edges = threshold_edges(resp, t)
    logger.debug(
        f"{EdgeOperator.parse(op).value} edges on {image.width}x{image.height}: "
        f"t={t:.3f}, {int(edges.sum())} edge pixels"
    )
    return edges


def edge_image(edges: EdgeMap) -> GrayImage:
    """Render an edge map as a black image with white edges."""
    return GrayImage(np.where(np.asarray(edges, dtype=bool), 255, 0).astype(np.uint8))
