"""PGM input/output and region partitioning of grayscale images."""

import logging
from pathlib import Path

import numpy as np

from .errors import (
    InputError,
    InvalidPartitionError,
    PgmFormatError,
    TruncatedPixelDataError,
)
from .models import GrayImage, RegionGrid, RegionView

logger = logging.getLogger(__name__)

PGM_WHITESPACE = b" \t\n\r\v\f"
MAX_PGM_VALUE = 255

# Names of the four quadrants in row-major region order.
QUADRANT_NAMES = ("LT", "RT", "LB", "RB")


class _HeaderReader:
    """Tokenizer over a PGM header that skips whitespace and # comments."""

    def __init__(self, data: bytes, pos: int = 0):
        self.data = data
        self.pos = pos

    def peek(self) -> bytes:
        return self.data[self.pos : self.pos + 1]

    def skip_separators(self) -> None:
        while self.pos < len(self.data):
            byte = self.peek()
            if byte in PGM_WHITESPACE:
                self.pos += 1
            elif byte == b"#":
                end = self.data.find(b"\n", self.pos)
                self.pos = len(self.data) if end < 0 else end + 1
            else:
                return

    def read_int(self, what: str) -> tuple[int, int]:
        """Next decimal token as (value, offset)."""
        self.skip_separators()
        start = self.pos
        if start >= len(self.data):
            raise PgmFormatError(f"missing {what}", start)
        if self.peek() == b"-":
            raise PgmFormatError(f"{what} must be positive", start)
        while self.pos < len(self.data) and self.peek().isdigit():
            self.pos += 1
        follower = self.peek()
        if self.pos == start or (follower and follower not in PGM_WHITESPACE + b"#"):
            raise PgmFormatError(f"expected {what}", start)
        return int(self.data[start : self.pos]), start


def load_pgm(data: bytes) -> GrayImage:
    """Decode a binary (P5) or ASCII (P2) PGM with maxval <= 255."""
    magic = data[:2]
    if magic not in (b"P5", b"P2"):
        raise PgmFormatError(f"bad magic number {magic!r}, expected P5 or P2", 0)
    if len(data) > 2 and data[2:3] not in PGM_WHITESPACE + b"#":
        raise PgmFormatError("bad magic number", 0)

    reader = _HeaderReader(data, 2)
    width, width_at = reader.read_int("width")
    height, height_at = reader.read_int("height")
    maxval, maxval_at = reader.read_int("maxval")
    if width <= 0:
        raise PgmFormatError(f"width must be positive, got {width}", width_at)
    if height <= 0:
        raise PgmFormatError(f"height must be positive, got {height}", height_at)
    if maxval <= 0 or maxval > MAX_PGM_VALUE:
        raise PgmFormatError(f"maxval must lie in [1, 255], got {maxval}", maxval_at)

    count = width * height
    if magic == b"P5":
        # One whitespace byte, or a comment through its newline, ends the header.
        if reader.peek() == b"#":
            end = data.find(b"\n", reader.pos)
            if end < 0:
                raise PgmFormatError("unterminated comment after maxval", reader.pos)
            start = end + 1
        else:
            start = reader.pos + 1
        raster = data[start : start + count]
        if len(raster) < count:
            raise TruncatedPixelDataError(
                f"pixel data truncated: {len(raster)} of {count} bytes", len(data)
            )
        pixels = np.frombuffer(raster, dtype=np.uint8)
        if pixels.max() > maxval:
            offset = start + int(np.argmax(pixels > maxval))
            raise PgmFormatError(f"pixel exceeds maxval {maxval}", offset)
    else:
        values = []
        for index in range(count):
            reader.skip_separators()
            if reader.pos >= len(data):
                raise TruncatedPixelDataError(
                    f"pixel data truncated: {index} of {count} values", len(data)
                )
            value, at = reader.read_int("pixel value")
            if value > maxval:
                raise PgmFormatError(f"pixel {value} exceeds maxval {maxval}", at)
            values.append(value)
        pixels = np.array(values, dtype=np.uint8)

    logger.debug(f"Decoded {magic.decode()} image {width}x{height} maxval={maxval}")
    return GrayImage(pixels.reshape(height, width))


def save_pgm(image: GrayImage) -> bytes:
    """Encode as binary P5 with maxval 255."""
    header = f"P5\n{image.width} {image.height}\n{MAX_PGM_VALUE}\n".encode("ascii")
    return header + image.pixels.tobytes()


def read_pgm(path: str | Path) -> GrayImage:
    """Load a PGM file; error messages are prefixed with the path."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise InputError(f"cannot read image {path}: {e.strerror or e}") from e
    try:
        return load_pgm(data)
    except PgmFormatError as e:
        raise type(e)(f"{path}: {e.detail}", e.offset) from e


def write_pgm(path: str | Path, image: GrayImage) -> None:
    """Write a P5 file, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(save_pgm(image))


def split_lengths(total: int, parts: int) -> list[int]:
    """Near-equal lengths; the trailing parts take the remainder pixels."""
    base, remainder = divmod(total, parts)
    return [base + (1 if i >= parts - remainder else 0) for i in range(parts)]


def grid_views(width: int, height: int, grid: RegionGrid) -> list[RegionView]:
    """Region rectangles of a width x height image, in row-major order."""
    if width < grid.cols or height < grid.rows:
        raise InvalidPartitionError(
            f"{width}x{height} image cannot be split into a {grid} grid"
        )
    heights = split_lengths(height, grid.rows)
    widths = split_lengths(width, grid.cols)
    row_starts = np.cumsum([0] + heights[:-1])
    col_starts = np.cumsum([0] + widths[:-1])

    views = []
    for r, (top, h) in enumerate(zip(row_starts, heights)):
        for c, (left, w) in enumerate(zip(col_starts, widths)):
            views.append(
                RegionView(
                    index=r * grid.cols + c,
                    origin=(int(top), int(left)),
                    width=w,
                    height=h,
                )
            )
    return views


def partition(image: GrayImage, grid: RegionGrid) -> list[RegionView]:
    """Tile `image` into grid.rows x grid.cols regions."""
    return grid_views(image.width, image.height, grid)


def region_names(grid: RegionGrid) -> list[str]:
    """Display names per region: LT/RT/LB/RB for 2x2, R<r>C<c> otherwise."""
    if (grid.rows, grid.cols) == (2, 2):
        return list(QUADRANT_NAMES)
    return [f"R{r}C{c}" for r in range(grid.rows) for c in range(grid.cols)]
