"""Per-frame statistics: crowd density level, throughput and FrameStats."""

from __future__ import annotations

import time
from typing import Optional

from .model import DensityConfig, DensityLevel, FrameStats
from .tracker import CentroidTracker


class FpsUndefinedError(ZeroDivisionError):
    pass


def classify_density(live_count: int, config: DensityConfig | None = None) -> DensityLevel:
    """Below ``medium_threshold`` is normal; above ``high_threshold`` is high."""
    config = config if config is not None else DensityConfig()
    if live_count < config.medium_threshold:
        return DensityLevel.NORMAL
    if live_count <= config.high_threshold:
        return DensityLevel.MEDIUM
    return DensityLevel.HIGH


class FpsMeter:
    """Cumulative frames-per-second since the meter was started.

    Elapsed time is fractional seconds from a monotonic clock, unless
    ``elapsed_override`` is set, in which case that value is used instead
    (file replay, tests).
    """

    def __init__(self, start_time: Optional[float] = None, elapsed_override: Optional[float] = None):
        self.total_frames = 0
        self.start_time = time.monotonic() if start_time is None else start_time
        self.elapsed_override = elapsed_override

    def tick(self, n: int = 1) -> None:
        if n < 0:
            raise ValueError("frame count cannot decrease")
        self.total_frames += n

    def elapsed(self, now: Optional[float] = None) -> float:
        if self.elapsed_override is not None:
            return self.elapsed_override
        if now is None:
            now = time.monotonic()
        return now - self.start_time

    def fps(self, now: Optional[float] = None) -> float:
        elapsed = self.elapsed(now)
        if elapsed <= 0:
            raise FpsUndefinedError("fps undefined before time advances")
        return self.total_frames / elapsed


def fps(meter: FpsMeter, now: Optional[float] = None) -> float:
    return meter.fps(now)


def assemble_frame_stats(
    frame_index: int,
    tracker: CentroidTracker,
    meter: FpsMeter,
    density_config: DensityConfig | None = None,
    now: Optional[float] = None,
) -> FrameStats:
    ids = tracker.active_ids()
    try:
        rate, warming_up = meter.fps(now), False
    except FpsUndefinedError:
        rate, warming_up = 0.0, True
    return FrameStats(
        frame_index=frame_index,
        live_count=len(ids),
        total_count=tracker.total_count(),
        fps=rate,
        density=classify_density(len(ids), density_config),
        active_track_ids=ids,
        warming_up=warming_up,
    )
