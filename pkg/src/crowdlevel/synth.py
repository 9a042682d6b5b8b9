"""Synthetic crowd scenes for exercising the tracker end to end.

Actors walk piecewise-linearly between waypoints. Each frame an active actor
yields one ``person`` detection, unless the scene's noise settings drop it,
with optional Gaussian jitter on its position. All reals written out are
rounded to 3 decimals, so a scene file plus seed always gives the same bytes.

Random numbers come from xorshift64* (Vigna, 2016) rather than the standard
library, so streams can be reproduced in any language:

    state ^= state >> 12
    state ^= state << 25   (mod 2**64)
    state ^= state >> 27
    output = state * 0x2545F4914F6CDD1D (mod 2**64)

The seed is mixed with one splitmix64 step so that seed 0 is usable. Uniform
doubles take the top 53 output bits; normals use the Box-Muller cosine branch.
Per active actor and frame the draws are: one uniform for the miss test, then,
only if kept, two uniforms for the jitter normal pair (x, y) and one uniform
for the confidence.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .ingest import RawDetectionRecord

MASK64 = (1 << 64) - 1


class SceneError(ValueError):
    pass


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class XorShift64Star:
    def __init__(self, seed: int):
        self.state = splitmix64(seed & MASK64) or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        s = self.state
        s ^= s >> 12
        s ^= (s << 25) & MASK64
        s ^= s >> 27
        self.state = s
        return (s * 0x2545F4914F6CDD1D) & MASK64

    def uniform(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def normal_pair(self) -> tuple[float, float]:
        u1 = 1.0 - self.uniform()  # (0, 1], keeps log finite
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(u1))
        return r * math.cos(2.0 * math.pi * u2), r * math.sin(2.0 * math.pi * u2)


@dataclass(frozen=True)
class ActorScript:
    actor_id: int
    enter_frame: int
    exit_frame: int
    waypoints: tuple[tuple[int, float, float], ...]
    box_size: tuple[float, float] = (40.0, 100.0)

    def __post_init__(self) -> None:
        if self.enter_frame < 0 or self.enter_frame > self.exit_frame:
            raise SceneError(f"actor {self.actor_id}: need 0 <= enter_frame <= exit_frame")
        if not self.waypoints:
            raise SceneError(f"actor {self.actor_id}: at least one waypoint is required")
        frames = [w[0] for w in self.waypoints]
        if any(b <= a for a, b in zip(frames, frames[1:])):
            raise SceneError(f"actor {self.actor_id}: waypoint frames must be strictly increasing")
        if frames[0] < self.enter_frame or frames[-1] > self.exit_frame:
            raise SceneError(f"actor {self.actor_id}: waypoints must lie within [enter_frame, exit_frame]")
        w, h = self.box_size
        if not (w >= 0 and h >= 0 and math.isfinite(w) and math.isfinite(h)):
            raise SceneError(f"actor {self.actor_id}: box_size must be finite and non-negative")

    def position(self, frame: int) -> tuple[float, float]:
        """Interpolated centre; held at the first/last waypoint outside their span."""
        wps = self.waypoints
        if frame <= wps[0][0]:
            return float(wps[0][1]), float(wps[0][2])
        if frame >= wps[-1][0]:
            return float(wps[-1][1]), float(wps[-1][2])
        for (f0, x0, y0), (f1, x1, y1) in zip(wps, wps[1:]):
            if f0 <= frame <= f1:
                t = (frame - f0) / (f1 - f0)
                return x0 + t * (x1 - x0), y0 + t * (y1 - y0)
        raise AssertionError("unreachable")


@dataclass(frozen=True)
class NoiseSpec:
    position_jitter_std: float = 0.0
    miss_probability: float = 0.0
    confidence_range: tuple[float, float] = (0.9, 0.9)
    seed: int = 0

    def __post_init__(self) -> None:
        if not (self.position_jitter_std >= 0 and math.isfinite(self.position_jitter_std)):
            raise SceneError("position_jitter_std must be finite and non-negative")
        if not (0.0 <= self.miss_probability < 1.0):
            raise SceneError("miss_probability must lie in [0, 1)")
        lo, hi = self.confidence_range
        if not (0.5 < lo <= hi <= 1.0):
            raise SceneError("confidence_range must satisfy 0.5 < lo <= hi <= 1")


@dataclass
class Scene:
    """Generated detections plus the ground truth they were drawn from."""

    n_frames: int
    records: list[RawDetectionRecord]
    positions: list[tuple[int, int, float, float]]  # frame, actor_id, x, y
    true_counts: list[int]  # indexed by frame
    actor_ids: list[int] = field(default_factory=list)

    def detection_lines(self) -> list[str]:
        return [format_fixed_record(r) for r in self.records]

    def positions_csv(self) -> str:
        rows = ["frame,actor_id,x,y"]
        rows += [f"{f},{a},{x:.3f},{y:.3f}" for f, a, x, y in self.positions]
        return "\n".join(rows) + "\n"

    def counts_csv(self) -> str:
        rows = ["frame,true_count"] + [f"{f},{n}" for f, n in enumerate(self.true_counts)]
        return "\n".join(rows) + "\n"


def format_fixed_record(r: RawDetectionRecord) -> str:
    return (
        f'{{"frame":{r.frame},"x1":{r.x1:.3f},"y1":{r.y1:.3f},"x2":{r.x2:.3f},'
        f'"y2":{r.y2:.3f},"confidence":{r.confidence:.3f},"label":{json.dumps(r.label)}}}'
    )


def _r3(v: float) -> float:
    # normalise -0.0 so formatting never prints "-0.000"
    return round(v, 3) + 0.0


def generate_scene(scripts: Sequence[ActorScript], noise: NoiseSpec | None, n_frames: int) -> Scene:
    """Render actor scripts into a detection stream over frames ``0 .. n_frames-1``.

    Several scripts may share an ``actor_id`` to describe one actor leaving and
    coming back, provided their frame spans do not overlap. Parts of a script
    at or beyond ``n_frames`` are not rendered.
    """
    noise = noise if noise is not None else NoiseSpec()
    if n_frames < 0:
        raise SceneError("n_frames must be non-negative")
    by_actor: dict[int, list[ActorScript]] = {}
    for s in scripts:
        by_actor.setdefault(s.actor_id, []).append(s)
    for aid, segs in by_actor.items():
        segs.sort(key=lambda s: s.enter_frame)
        for a, b in zip(segs, segs[1:]):
            if b.enter_frame <= a.exit_frame:
                raise SceneError(f"actor {aid}: overlapping frame spans")
    ordered = sorted(scripts, key=lambda s: (s.actor_id, s.enter_frame))

    rng = XorShift64Star(noise.seed)
    lo, hi = noise.confidence_range
    records: list[RawDetectionRecord] = []
    positions: list[tuple[int, int, float, float]] = []
    true_counts = [0] * n_frames
    seen: set[int] = set()
    for frame in range(n_frames):
        for s in ordered:
            if not (s.enter_frame <= frame <= s.exit_frame):
                continue
            seen.add(s.actor_id)
            cx, cy = s.position(frame)
            positions.append((frame, s.actor_id, _r3(cx), _r3(cy)))
            true_counts[frame] += 1
            if rng.uniform() < noise.miss_probability:
                continue
            jx, jy = rng.normal_pair()
            cx += jx * noise.position_jitter_std
            cy += jy * noise.position_jitter_std
            conf = lo + rng.uniform() * (hi - lo)
            w, h = s.box_size
            records.append(
                RawDetectionRecord(
                    frame=frame,
                    x1=_r3(cx - w / 2), y1=_r3(cy - h / 2),
                    x2=_r3(cx + w / 2), y2=_r3(cy + h / 2),
                    confidence=_r3(conf), label="person",
                )
            )
    return Scene(n_frames, records, positions, true_counts, sorted(seen))


def load_scene_script(text: str) -> tuple[list[ActorScript], NoiseSpec, int]:
    """Parse a scene JSON document: ``{"n_frames": N, "actors": [...], "noise": {...}}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError(f"scene script is not valid JSON ({exc.msg})") from None
    if not isinstance(doc, dict) or "n_frames" not in doc:
        raise SceneError("scene script must be an object with an 'n_frames' field")
    try:
        n_frames = int(doc["n_frames"])
        actors = [
            ActorScript(
                actor_id=int(a["actor_id"]),
                enter_frame=int(a["enter_frame"]),
                exit_frame=int(a["exit_frame"]),
                waypoints=tuple((int(f), float(x), float(y)) for f, x, y in a["waypoints"]),
                box_size=tuple(float(v) for v in a.get("box_size", (40.0, 100.0))),
            )
            for a in doc.get("actors", [])
        ]
        nd = doc.get("noise") or {}
        noise = NoiseSpec(
            position_jitter_std=float(nd.get("position_jitter_std", 0.0)),
            miss_probability=float(nd.get("miss_probability", 0.0)),
            confidence_range=tuple(float(v) for v in nd.get("confidence_range", (0.9, 0.9))),
            seed=int(nd.get("seed", 0)),
        )
    except SceneError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SceneError(f"bad scene script: {exc!r}") from None
    return actors, noise, n_frames


def scene_to_json(scripts: Iterable[ActorScript], noise: NoiseSpec, n_frames: int) -> str:
    doc = {
        "n_frames": n_frames,
        "noise": {
            "position_jitter_std": noise.position_jitter_std,
            "miss_probability": noise.miss_probability,
            "confidence_range": list(noise.confidence_range),
            "seed": noise.seed,
        },
        "actors": [
            {
                "actor_id": s.actor_id,
                "enter_frame": s.enter_frame,
                "exit_frame": s.exit_frame,
                "waypoints": [list(w) for w in s.waypoints],
                "box_size": list(s.box_size),
            }
            for s in scripts
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


@dataclass
class Scorecard:
    id_switches: int
    count_errors: list[int]
    total_error: int
    n_actors: int
    final_total: int

    @property
    def max_count_error(self) -> int:
        return max(self.count_errors, default=0)


def expected_live_counts(scene: Scene, max_disappeared: int | None = None) -> list[int]:
    """True people per frame, optionally plus those a tracker still remembers.

    With ``max_disappeared`` set, an actor last seen at frame ``s`` is still
    counted at frame ``t`` while ``t - s <= max_disappeared``.
    """
    if max_disappeared is None:
        return list(scene.true_counts)
    present: dict[int, set[int]] = {}
    for f, aid, _, _ in scene.positions:
        present.setdefault(f, set()).add(aid)
    last_seen: dict[int, int] = {}
    out = []
    for t in range(scene.n_frames):
        for aid in present.get(t, ()):
            last_seen[aid] = t
        out.append(sum(1 for s in last_seen.values() if t - s <= max_disappeared))
    return out


def score_tracking(
    scene: Scene,
    frame_stats: Sequence,
    update_results: Sequence,
    max_disappeared: int | None = None,
    match_gate: float = 50.0,
) -> Scorecard:
    """Compare a tracking run against a scene's ground truth.

    Tracks seen in a frame are paired with true actor positions greedily by
    distance (within ``match_gate``); an id switch is an actor whose paired
    track id differs from the one it had the last time it was paired.

    ``count_errors`` compares live counts with the actors actually present,
    or, if ``max_disappeared`` is given, with the count a tracker holding
    departed people for that many frames should report.
    """
    stat_frames = [s.frame_index for s in frame_stats]
    res_frames = [r.frame_index for r in update_results]
    expected_frames = list(range(scene.n_frames))
    if stat_frames != expected_frames or res_frames != expected_frames:
        raise ValueError("tracking output does not cover the scene's frame range")

    truth_by_frame: dict[int, list[tuple[int, float, float]]] = {}
    for f, aid, x, y in scene.positions:
        truth_by_frame.setdefault(f, []).append((aid, x, y))

    last_track: dict[int, int] = {}
    switches = 0
    for res in update_results:
        truth = truth_by_frame.get(res.frame_index, [])
        pairs = sorted(
            (math.hypot(cx - x, cy - y), aid, tid)
            for aid, x, y in truth
            for tid, (cx, cy) in res.observations.items()
        )
        used_a: set[int] = set()
        used_t: set[int] = set()
        for d, aid, tid in pairs:
            if d > match_gate:
                break
            if aid in used_a or tid in used_t:
                continue
            used_a.add(aid)
            used_t.add(tid)
            if aid in last_track and last_track[aid] != tid:
                switches += 1
            last_track[aid] = tid

    expected = expected_live_counts(scene, max_disappeared)
    count_errors = [abs(s.live_count - e) for s, e in zip(frame_stats, expected)]
    final_total = frame_stats[-1].total_count if frame_stats else 0
    n_actors = len(scene.actor_ids)
    return Scorecard(
        id_switches=switches,
        count_errors=count_errors,
        total_error=abs(final_total - n_actors),
        n_actors=n_actors,
        final_total=final_total,
    )


def random_clean_scene(
    n_actors: int,
    n_frames: int,
    seed: int,
    cell: float = 160.0,
    wander: float = 15.0,
) -> list[ActorScript]:
    """Actors each confined to their own grid cell, entering and leaving at random.

    Cell centres are ``cell`` pixels apart and each actor stays inside a
    square of half-side ``wander`` around its centre, so two actors are never
    closer than ``cell - 2*sqrt(2)*wander`` and one frame of motion never
    exceeds ``2*sqrt(2)*wander``.
    """
    rng = XorShift64Star(seed)
    cols = max(1, math.ceil(math.sqrt(n_actors)))
    scripts = []
    for aid in range(n_actors):
        row, col = divmod(aid, cols)
        cx, cy = cell * (col + 1), cell * (row + 1)
        enter = int(rng.uniform() * (n_frames // 2))
        exit_ = min(n_frames - 1, enter + n_frames // 4 + int(rng.uniform() * (n_frames // 2)))
        k = 2 + int(rng.uniform() * 3)
        frames = sorted({enter, exit_} | {enter + int(rng.uniform() * (exit_ - enter + 1)) for _ in range(k)})
        wps = tuple(
            (f, round(cx + (2 * rng.uniform() - 1) * wander, 3), round(cy + (2 * rng.uniform() - 1) * wander, 3))
            for f in frames
        )
        scripts.append(ActorScript(aid, enter, exit_, wps, (40.0, 100.0)))
    return scripts
