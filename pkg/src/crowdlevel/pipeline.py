"""Detection groups in, per-frame statistics out.

This is the frame loop behind ``crowdlevel track``: filter detections, update
the tracker, tick the fps meter, assemble stats. Frames missing from the
input between the first and last frame seen are processed as empty frames so
the tracker's disappearance counters keep running.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .analytics import FpsMeter, assemble_frame_stats
from .ingest import RawDetectionRecord, filter_persons
from .model import DensityConfig, FrameStats, TrackerConfig
from .tracker import CentroidTracker, FrameUpdateResult

LABEL_ANCHOR = (80, 300)


@dataclass
class FrameOutput:
    stats: FrameStats
    update: FrameUpdateResult
    overlay: list[dict]


def emit_overlay(
    stats: FrameStats, tracker: CentroidTracker, anchor: tuple[float, float] = LABEL_ANCHOR
) -> list[dict]:
    """Drawing instructions for one frame: a box per live track, then the density label."""
    records = [
        {
            "frame": stats.frame_index,
            "kind": "track",
            "id": tid,
            "box": [round(v, 3) for v in tracker.tracks[tid].last_box.as_list()],
        }
        for tid in stats.active_track_ids
    ]
    records.append(
        {
            "frame": stats.frame_index,
            "kind": "label",
            "text": stats.density.label,
            "anchor": list(anchor),
        }
    )
    return records


def run_frames(
    groups: Iterable[tuple[int, list[RawDetectionRecord]]],
    tracker_config: TrackerConfig | None = None,
    density_config: DensityConfig | None = None,
    replay_fps: Optional[float] = None,
    frame_range: Optional[tuple[int, int]] = None,
    min_confidence: float = 0.5,
    target_label: str = "person",
    anchor: tuple[float, float] = LABEL_ANCHOR,
) -> Iterator[FrameOutput]:
    """Yield one :class:`FrameOutput` per frame, lazily.

    ``frame_range`` (inclusive) forces processing to start and end at the
    given frames even if no detection falls there. ``replay_fps`` pins the
    meter's elapsed time to ``frames / replay_fps``.
    """
    if replay_fps is not None and not replay_fps > 0:
        raise ValueError("replay_fps must be positive")
    tracker = CentroidTracker(tracker_config)
    meter = FpsMeter()
    next_frame = frame_range[0] if frame_range else None

    def step(frame: int, records: list[RawDetectionRecord]) -> FrameOutput:
        dets = filter_persons(records, min_confidence, target_label)
        update = tracker.update(frame, dets)
        meter.tick()
        if replay_fps is not None:
            meter.elapsed_override = meter.total_frames / replay_fps
        stats = assemble_frame_stats(frame, tracker, meter, density_config)
        return FrameOutput(stats, update, emit_overlay(stats, tracker, anchor))

    for frame, records in groups:
        if frame_range and not (frame_range[0] <= frame <= frame_range[1]):
            raise ValueError(f"frame {frame} outside requested range {frame_range}")
        if next_frame is None:
            next_frame = frame
        while next_frame < frame:
            yield step(next_frame, [])
            next_frame += 1
        yield step(frame, records)
        next_frame = frame + 1
    if frame_range:
        if next_frame is None:
            next_frame = frame_range[0]
        while next_frame <= frame_range[1]:
            yield step(next_frame, [])
            next_frame += 1


def format_stats(stats: FrameStats, include_fps: bool = True) -> str:
    """One FrameStats JSON line. fps is rounded to 3 decimals."""
    rec: dict = {"frame": stats.frame_index, "live": stats.live_count, "total": stats.total_count}
    if include_fps:
        rec["fps"] = round(stats.fps, 3)
        if stats.warming_up:
            rec["warming_up"] = True
    rec["density"] = stats.density.label
    rec["ids"] = stats.active_track_ids
    return json.dumps(rec, separators=(",", ":"))


def format_overlay(record: dict) -> str:
    return json.dumps(record, separators=(",", ":"))
