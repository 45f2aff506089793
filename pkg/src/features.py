"""Edginess feature vectors and the classified gallery file."""

import logging
import re
from datetime import datetime, timezone
from pathlib import Path

from .components import edginess
from .edge_detect import detect_edges
from .errors import (
    EdgeprintError,
    GalleryConfigError,
    GalleryFormatError,
    GalleryRowError,
    GalleryVersionError,
    InputError,
    PreconditionError,
    RegionError,
)
from .imaging import partition
from .models import (
    EdgeOperator,
    ExtractionConfig,
    FeatureVector,
    Gallery,
    GrayImage,
    RegionGrid,
    validate_class_id,
)

logger = logging.getLogger(__name__)

GALLERY_MAGIC = "edgeprint-gallery"
GALLERY_VERSION = 1

_CONFIG_RE = re.compile(
    r"^config operator=(?P<operator>\S+) threshold=(?P<threshold>\S+) "
    r"threshold_k=(?P<threshold_k>\S+) min_component=(?P<min_component>\S+) "
    r"grid=(?P<grid>\S+)$"
)
_COUNT_RE = re.compile(r"[0-9]+")


def extract(image: GrayImage, config: ExtractionConfig) -> FeatureVector:
    """Edginess of every grid region, each region processed on its own."""
    values = []
    for view in partition(image, config.grid):
        region = image.crop(view)
        try:
            edges = detect_edges(
                region, config.operator, config.threshold, config.threshold_k
            )
            values.append(edginess(edges, config.min_component))
        except EdgeprintError as e:
            raise RegionError(view.index, e) from e
    return FeatureVector(values=tuple(values), config=config)


def empty_gallery(config: ExtractionConfig) -> Gallery:
    """A gallery with no classes, stamped with the current UTC time."""
    return Gallery(config=config, created_at=datetime.now(timezone.utc))


def enroll(gallery: Gallery, class_id: str, image: GrayImage) -> Gallery:
    """Gallery with the image's feature vector appended to `class_id`."""
    validate_class_id(class_id)
    vector = extract(image, gallery.config)
    logger.debug(f"Enrolled {class_id}: {vector}")
    return gallery.with_sample(class_id, vector)


def config_line(config: ExtractionConfig) -> str:
    """Second line of a gallery file."""
    return f"config {config.fingerprint}"


def save_gallery(gallery: Gallery) -> bytes:
    """Canonical text form: sorted classes, samples in index order, LF endings."""
    if not gallery.classes:
        raise PreconditionError("Refusing to save a gallery without classes")
    lines = [f"{GALLERY_MAGIC} v{gallery.version}", config_line(gallery.config)]
    for class_id in sorted(gallery.classes):
        for index, vector in enumerate(gallery.classes[class_id]):
            lines.append(f"{class_id},{index},{vector}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _parse_config(line: str, line_no: int) -> ExtractionConfig:
    match = _CONFIG_RE.match(line)
    if not match:
        raise GalleryConfigError(f"malformed config line {line!r}", line_no)
    fields = match.groupdict()
    try:
        raw_threshold = fields["threshold"]
        threshold = None if raw_threshold == "auto" else float(raw_threshold)
        config = ExtractionConfig(
            operator=EdgeOperator.parse(fields["operator"]),
            threshold=threshold,
            threshold_k=float(fields["threshold_k"]),
            min_component=int(fields["min_component"]),
            grid=RegionGrid.parse(fields["grid"]),
        )
    except ValueError as e:
        raise GalleryConfigError(f"invalid config: {e}", line_no) from e
    return config


def load_gallery(data: bytes) -> Gallery:
    """Parse a gallery file written by `save_gallery`."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise GalleryFormatError(f"not UTF-8: {e}", 1) from e
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()

    if not lines:
        raise GalleryFormatError("empty gallery file", 1)
    header = lines[0].rstrip("\r")
    if not header.startswith(f"{GALLERY_MAGIC} v"):
        raise GalleryFormatError(f"not a gallery file: {header!r}", 1)
    if header != f"{GALLERY_MAGIC} v{GALLERY_VERSION}":
        raise GalleryVersionError(
            f"unsupported version {header.split()[-1]!r}, "
            f"expected v{GALLERY_VERSION}",
            1,
        )
    if len(lines) < 2:
        raise GalleryConfigError("missing config line", 2)
    config = _parse_config(lines[1].rstrip("\r"), 2)

    classes: dict[str, list[FeatureVector]] = {}
    for line_no, raw_line in enumerate(lines[2:], start=3):
        line = raw_line.rstrip("\r")
        fields = line.split(",")
        if len(fields) < 3:
            raise GalleryRowError(f"malformed sample row {line!r}", line_no)
        class_id, index_text, *value_texts = fields
        if not all(_COUNT_RE.fullmatch(t) for t in (index_text, *value_texts)):
            raise GalleryRowError(
                f"sample index and values must be plain digits in {line!r}", line_no
            )
        try:
            validate_class_id(class_id)
        except ValueError as e:
            raise GalleryRowError(f"malformed sample row {line!r}: {e}", line_no) from e
        index = int(index_text)
        values = tuple(int(v) for v in value_texts)
        if len(values) != config.grid.region_count:
            raise GalleryConfigError(
                f"row has {len(values)} values but config grid {config.grid} "
                f"needs {config.grid.region_count}",
                line_no,
            )
        samples = classes.setdefault(class_id, [])
        if index != len(samples):
            raise GalleryRowError(
                f"class {class_id!r} sample index {index}, expected {len(samples)}",
                line_no,
            )
        samples.append(FeatureVector(values=values, config=config))

    if not classes:
        raise GalleryRowError("gallery has no sample rows", len(lines) + 1)
    return Gallery(
        config=config,
        classes={cid: tuple(samples) for cid, samples in classes.items()},
        version=GALLERY_VERSION,
    )


def read_gallery(path: str | Path) -> Gallery:
    """Load a gallery file; read failures become InputError."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise InputError(f"cannot read gallery {path}: {e.strerror or e}") from e
    gallery = load_gallery(data)
    logger.info(
        f"Loaded gallery {path}: {len(gallery.classes)} classes, "
        f"{gallery.sample_count} samples"
    )
    return gallery


def write_gallery(path: str | Path, gallery: Gallery) -> None:
    """Write canonically; the file is replaced atomically."""
    path = Path(path)
    data = save_gallery(gallery)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    tmp.replace(path)
    logger.info(f"Saved gallery {path}: {gallery.sample_count} samples")
