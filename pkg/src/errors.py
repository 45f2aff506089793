"""Exception hierarchy for edgeprint.

Every error carries the process exit code the command line maps it to:
2 for unreadable or malformed input, 3 for incompatible feature
configurations, 4 for violated preconditions.
"""

from __future__ import annotations


class EdgeprintError(ValueError):
    """Base class for all library errors."""

    exit_code = 4


class InputError(EdgeprintError):
    """Input could not be read or decoded."""

    exit_code = 2


class PgmFormatError(InputError):
    """Malformed PGM data; `offset` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.detail = message
        self.offset = offset


class TruncatedPixelDataError(PgmFormatError):
    """The pixel payload is shorter than width x height."""


class GalleryFormatError(InputError):
    """Malformed gallery file; `line_no` is 1-based."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class GalleryVersionError(GalleryFormatError):
    """Unsupported gallery format version."""


class GalleryConfigError(GalleryFormatError):
    """Config line missing, malformed, or inconsistent with the sample rows."""


class GalleryRowError(GalleryFormatError):
    """A sample row could not be parsed."""


class ConfigMismatchError(EdgeprintError):
    """Two extraction configurations that must agree do not."""

    exit_code = 3

    def __init__(self, message: str, expected: str = "", actual: str = ""):
        if expected or actual:
            message = f"{message}: expected [{expected}], got [{actual}]"
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class IncomparableFeaturesError(ConfigMismatchError):
    """Feature vectors with different fingerprints or lengths were compared."""


class PreconditionError(EdgeprintError):
    """An operation was called outside its domain."""

    exit_code = 4


class InvalidPartitionError(PreconditionError):
    """The image is smaller than the requested region grid."""


class ImageTooSmallError(PreconditionError):
    """The image cannot hold a 3x3 neighbourhood."""


class EmptyClassError(PreconditionError):
    """A class with no samples was used for matching."""


class EmptyGalleryError(PreconditionError):
    """Identification was attempted against a gallery without classes."""


class SplitError(PreconditionError):
    """A class has too few samples for the requested train/test split."""


class RegionError(EdgeprintError):
    """Wraps an error raised while processing one region of an image."""

    def __init__(self, region_index: int, cause: EdgeprintError):
        super().__init__(f"region {region_index}: {cause}")
        self.region_index = region_index
        self.cause = cause
        self.exit_code = cause.exit_code


class SampleError(EdgeprintError):
    """Wraps an error raised while processing one corpus sample."""

    def __init__(self, sample_id: str, cause: EdgeprintError):
        super().__init__(f"sample {sample_id}: {cause}")
        self.sample_id = sample_id
        self.cause = cause
        self.exit_code = cause.exit_code
