"""Centroid tracker with greedy nearest-distance association.

Each frame, every (track, detection) pair is ranked by Euclidean centroid
distance, ties broken by track id then detection index, and pairs are
accepted greedily while both sides are free and the distance is within
``max_distance``. Leftover detections become new tracks; leftover tracks
accumulate missed frames and are dropped once they have missed more than
``max_disappeared`` in a row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .model import Detection, Track, TrackerConfig


@dataclass
class FrameUpdateResult:
    frame_index: int
    matches: list[tuple[int, int, float]] = field(default_factory=list)
    new_ids: list[int] = field(default_factory=list)
    retired_ids: list[int] = field(default_factory=list)
    # centroid of every track that received a detection this frame
    observations: dict[int, tuple[float, float]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "frame_index": self.frame_index,
            "matches": [list(m) for m in self.matches],
            "new_ids": list(self.new_ids),
            "retired_ids": list(self.retired_ids),
            "observations": {str(k): list(v) for k, v in self.observations.items()},
        }


class CentroidTracker:
    """Single-owner tracking state; feed it frames in increasing order."""

    def __init__(self, config: TrackerConfig | None = None):
        self.config = config if config is not None else TrackerConfig()
        self.tracks: dict[int, Track] = {}
        self.next_id = 0
        self.last_frame: int | None = None

    @property
    def total_registered(self) -> int:
        return self.next_id

    def live_count(self) -> int:
        return len(self.tracks)

    def total_count(self) -> int:
        return self.next_id

    def active_ids(self) -> list[int]:
        return sorted(self.tracks)

    def _register(self, det: Detection, frame_index: int) -> int:
        tid = self.next_id
        self.tracks[tid] = Track(
            id=tid, centroid=det.box.centroid, last_box=det.box, last_seen_frame=frame_index
        )
        self.next_id += 1
        return tid

    def update(self, frame_index: int, detections: Sequence[Detection]) -> FrameUpdateResult:
        if self.last_frame is not None and frame_index <= self.last_frame:
            raise ValueError(
                f"frame {frame_index} is not after the previously processed frame {self.last_frame}"
            )
        if frame_index < 0:
            raise ValueError("frame_index must be non-negative")
        for i, det in enumerate(detections):
            if not isinstance(det, Detection):
                raise TypeError(f"detection {i} is not a Detection")
        self.last_frame = frame_index

        result = FrameUpdateResult(frame_index)
        track_ids = sorted(self.tracks)
        det_centroids = np.array([d.box.centroid for d in detections], dtype=float).reshape(-1, 2)

        matched_tracks: set[int] = set()
        matched_dets: set[int] = set()
        if track_ids and len(detections):
            trk_centroids = np.array([self.tracks[t].centroid for t in track_ids], dtype=float)
            diff = trk_centroids[:, None, :] - det_centroids[None, :, :]
            dist = np.hypot(diff[..., 0], diff[..., 1])
            rows, cols = np.indices(dist.shape)
            # rows index track_ids (sorted), so row order is track id order
            order = np.lexsort((cols.ravel(), rows.ravel(), dist.ravel()))
            limit = self.config.max_distance
            for k in order:
                r, c = divmod(int(k), dist.shape[1])
                d = float(dist[r, c])
                if d > limit:
                    break
                if r in matched_tracks or c in matched_dets:
                    continue
                matched_tracks.add(r)
                matched_dets.add(c)
                tid = track_ids[r]
                trk = self.tracks[tid]
                det = detections[c]
                trk.centroid = det.box.centroid
                trk.last_box = det.box
                trk.last_seen_frame = frame_index
                trk.disappeared = 0
                result.matches.append((tid, c, d))
                result.observations[tid] = trk.centroid

        for c, det in enumerate(detections):
            if c not in matched_dets:
                tid = self._register(det, frame_index)
                result.new_ids.append(tid)
                result.observations[tid] = det.box.centroid

        for r, tid in enumerate(track_ids):
            if r in matched_tracks:
                continue
            trk = self.tracks[tid]
            trk.disappeared += 1
            if trk.disappeared > self.config.max_disappeared:
                del self.tracks[tid]
                result.retired_ids.append(tid)
        return result


def new_tracker(config: TrackerConfig | None = None) -> CentroidTracker:
    return CentroidTracker(config)
