"""Core value types shared by the ingest, tracking and analytics layers.

Nothing in here does I/O. Boxes are corner pairs in pixel coordinates with
the origin at the top-left of the image.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional


def validate_box(x1: float, y1: float, x2: float, y2: float) -> Optional[str]:
    """Return ``None`` for a well-formed box, else a description of the problem."""
    for name, value in (("x1", x1), ("y1", y1), ("x2", x2), ("y2", y2)):
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            return f"{name} is not a number"
        if not math.isfinite(value):
            return f"non-finite {name}"
    if x1 > x2:
        return "x1 > x2"
    if y1 > y2:
        return "y1 > y2"
    return None


@dataclass(frozen=True, slots=True)
class BoundingBox:
    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self) -> None:
        problem = validate_box(self.x1, self.y1, self.x2, self.y2)
        if problem is not None:
            raise ValueError(f"invalid box ({problem})")

    @property
    def centroid(self) -> tuple[float, float]:
        return centroid(self)

    def shifted(self, dx: float, dy: float) -> BoundingBox:
        return BoundingBox(self.x1 + dx, self.y1 + dy, self.x2 + dx, self.y2 + dy)

    def as_list(self) -> list[float]:
        return [self.x1, self.y1, self.x2, self.y2]


def centroid(box: BoundingBox) -> tuple[float, float]:
    return ((box.x1 + box.x2) / 2.0, (box.y1 + box.y2) / 2.0)


@dataclass(frozen=True, slots=True)
class Detection:
    """One person candidate in one frame, after filtering."""

    frame_index: int
    box: BoundingBox
    confidence: float
    class_label: str = "person"

    def __post_init__(self) -> None:
        if self.frame_index < 0:
            raise ValueError("frame_index must be non-negative")
        if not (0.0 <= self.confidence <= 1.0):
            raise ValueError(f"confidence {self.confidence!r} outside [0, 1]")


@dataclass(slots=True)
class Track:
    id: int
    centroid: tuple[float, float]
    last_box: BoundingBox
    last_seen_frame: int
    disappeared: int = 0


class DensityLevel(enum.Enum):
    NORMAL = "normal crowd"
    MEDIUM = "medium crowd"
    HIGH = "high crowd"

    @property
    def label(self) -> str:
        return self.value

    @classmethod
    def from_label(cls, label: str) -> DensityLevel:
        return cls(label)


def _require_positive_int(name: str, value: int) -> None:
    if isinstance(value, bool) or not isinstance(value, int) or value <= 0:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")


@dataclass(frozen=True, slots=True)
class TrackerConfig:
    """``max_disappeared`` is counted in frames, ``max_distance`` in pixels."""

    max_disappeared: int = 40
    max_distance: float = 50.0

    def __post_init__(self) -> None:
        _require_positive_int("max_disappeared", self.max_disappeared)
        if not (math.isfinite(self.max_distance) and self.max_distance > 0):
            raise ValueError(f"max_distance must be positive and finite, got {self.max_distance!r}")


@dataclass(frozen=True, slots=True)
class DensityConfig:
    medium_threshold: int = 15
    high_threshold: int = 25

    def __post_init__(self) -> None:
        _require_positive_int("medium_threshold", self.medium_threshold)
        _require_positive_int("high_threshold", self.high_threshold)
        if self.medium_threshold > self.high_threshold:
            raise ValueError("medium_threshold must not exceed high_threshold")


@dataclass(frozen=True, slots=True)
class FrameStats:
    frame_index: int
    live_count: int
    total_count: int
    fps: float
    density: DensityLevel
    active_track_ids: list[int] = field(default_factory=list)
    # fps could not be measured yet (no time has elapsed); fps is 0.0
    warming_up: bool = False

    def __post_init__(self) -> None:
        if self.live_count != len(self.active_track_ids):
            raise ValueError("live_count must equal the number of active track ids")
        if self.live_count < 0 or self.total_count < 0 or self.fps < 0:
            raise ValueError("counts and fps must be non-negative")
