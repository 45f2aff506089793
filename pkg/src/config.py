"""Configuration management for edgeprint."""

import logging
import os
from dataclasses import dataclass
from pathlib import Path

from .models import EdgeOperator, ExtractionConfig, RegionGrid

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"


@dataclass(frozen=True)
class Config:
    """Immutable process configuration; supplies defaults for CLI flags."""

    log_level: str = "INFO"
    operator: str = "sobel"
    threshold_k: float = 4.0
    min_component: int = 5
    grid: str = "2x2"
    workers: int = 4

    @classmethod
    def from_env(cls) -> "Config":
        """Load configuration from EDGEPRINT_* environment variables."""
        try:
            config = cls(
                log_level=os.getenv("EDGEPRINT_LOG_LEVEL", "INFO").upper(),
                operator=os.getenv("EDGEPRINT_OPERATOR", "sobel"),
                threshold_k=float(os.getenv("EDGEPRINT_THRESHOLD_K", "4.0")),
                min_component=int(os.getenv("EDGEPRINT_MIN_COMPONENT", "5")),
                grid=os.getenv("EDGEPRINT_GRID", "2x2"),
                workers=int(os.getenv("EDGEPRINT_WORKERS", "4")),
            )
        except ValueError as e:
            raise ValueError(f"Invalid EDGEPRINT_* setting: {e}") from e

        if not isinstance(logging.getLevelName(config.log_level), int):
            raise ValueError(f"Unknown log level {config.log_level!r}")
        if config.workers < 1:
            raise ValueError("EDGEPRINT_WORKERS must be >= 1")
        # Validates operator, grid, threshold_k and min_component together.
        config.extraction_config()
        return config

    def extraction_config(
        self,
        operator: str | None = None,
        threshold: float | None = None,
        threshold_k: float | None = None,
        min_component: int | None = None,
        grid: str | RegionGrid | None = None,
    ) -> ExtractionConfig:
        """Extraction settings: explicit arguments win over these defaults."""
        chosen_grid = grid if grid is not None else self.grid
        if isinstance(chosen_grid, str):
            chosen_grid = RegionGrid.parse(chosen_grid)
        return ExtractionConfig(
            operator=EdgeOperator.parse(operator or self.operator),
            threshold=threshold,
            threshold_k=threshold_k if threshold_k is not None else self.threshold_k,
            min_component=(
                min_component if min_component is not None else self.min_component
            ),
            grid=chosen_grid,
        )

    def setup_logging(self) -> None:
        """Configure application logging (stderr, never mixed with reports)."""
        logging.basicConfig(
            level=getattr(logging, self.log_level.upper()),
            format=LOG_FORMAT,
            datefmt="%Y-%m-%d %H:%M:%S",
        )


def get_project_root() -> Path:
    """Get the project root directory."""
    return Path(__file__).parent.parent


def get_data_dir() -> Path:
    """Get the data directory."""
    return get_project_root() / "data"
