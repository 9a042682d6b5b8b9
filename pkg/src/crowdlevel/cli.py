"""Command-line entry point: ``crowdlevel {track,eval,synth}``.

Exit codes: 0 success, 1 bad input data, 2 bad flags or (for ``eval``) a
regression that cannot be computed. Data goes to stdout, diagnostics to
stderr.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import sys
from importlib import resources
from pathlib import Path
from typing import Iterator, Optional, Sequence, TextIO

from . import __version__
from .ingest import DatasetFormatError, InvalidRecordError, StreamFormatError, iter_detection_groups, load_count_dataset
from .model import DensityConfig, TrackerConfig
from .pipeline import LABEL_ANCHOR, format_overlay, format_stats, run_frames
from .regression import DegenerateRegressionError, evaluate, predict_count_for_record
from .synth import SceneError, generate_scene, load_scene_script

EXIT_OK, EXIT_DATA, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _err(msg: str) -> None:
    print(f"crowdlevel: {msg}", file=sys.stderr)


@contextlib.contextmanager
def _open_in(path: str) -> Iterator[TextIO]:
    if path == "-":
        yield sys.stdin
    else:
        with open(path, encoding="utf-8", newline="") as fh:
            yield fh


@contextlib.contextmanager
def _open_out(path: Optional[str]) -> Iterator[Optional[TextIO]]:
    if path is None:
        yield None
    elif path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def cmd_track(args: argparse.Namespace) -> int:
    try:
        tracker_config = TrackerConfig(args.max_disappeared, args.max_distance)
        density_config = DensityConfig(args.medium_threshold, args.high_threshold)
        if args.replay_fps is not None and not args.replay_fps > 0:
            raise ValueError("--replay-fps must be positive")
        if not 0.0 <= args.min_confidence <= 1.0:
            raise ValueError("--min-confidence must lie in [0, 1]")
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    n_frames, total, last_fps = 0, 0, 0.0
    try:
        with _open_in(args.input) as src, _open_out(args.output) as out, _open_out(args.overlay) as ov:
            frames = run_frames(
                iter_detection_groups(src),
                tracker_config,
                density_config,
                replay_fps=args.replay_fps,
                min_confidence=args.min_confidence,
                target_label=args.label,
                anchor=tuple(args.anchor),
            )
            for fo in frames:
                out.write(format_stats(fo.stats, include_fps=not args.no_fps_field) + "\n")
                out.flush()
                if ov is not None:
                    for rec in fo.overlay:
                        ov.write(format_overlay(rec) + "\n")
                    ov.flush()
                n_frames += 1
                total = fo.stats.total_count
                last_fps = fo.stats.fps
    except (StreamFormatError, InvalidRecordError) as exc:
        _err(f"{args.input}: {exc}")
        return EXIT_DATA
    except OSError as exc:
        _err(str(exc))
        return EXIT_DATA
    print(f"{n_frames} frames, {total} total people, mean fps {last_fps:.2f}", file=sys.stderr)
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    if args.bins < 1:
        raise UsageError("--bins must be at least 1")
    if args.split is not None and not 0.0 < args.split < 1.0:
        raise UsageError("--split must lie strictly between 0 and 1")
    try:
        with _open_in(args.dataset) as fh:
            dataset = load_count_dataset(fh.read())
        if dataset.n_rows == 0:
            raise DatasetFormatError("dataset has no rows")
        report = evaluate(dataset, args.feature, args.split, args.seed, args.bins)
        if args.predict_index is not None:
            image_id, predicted, actual = predict_count_for_record(
                dataset, report.model, args.predict_index, args.feature
            )
            report.extra["prediction"] = {
                "index": args.predict_index, "id": image_id, "predicted": predicted, "actual": actual,
            }
    except (DatasetFormatError, OSError, IndexError) as exc:
        _err(str(exc))
        return EXIT_DATA
    except DegenerateRegressionError as exc:
        _err(str(exc))
        return EXIT_USAGE

    print(json.dumps(report.to_dict(), indent=2))
    if args.series_csv:
        x = dataset.feature(args.feature)
        with open(args.series_csv, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["id", args.feature, "actual", "predicted"])
            for (image_id, count), xi in zip(dataset.records, x):
                w.writerow([image_id, xi, count, report.model.predict(xi)])
    if args.histogram_csv:
        with open(args.histogram_csv, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["bin_lower", "bin_upper", "frequency"])
            w.writerows(report.count_histogram)
    return EXIT_OK


def read_scene_text(scene: Optional[str], builtin: Optional[str]) -> str:
    if builtin is not None:
        ref = resources.files("crowdlevel") / "data" / f"{builtin}.json"
        if not ref.is_file():
            raise SceneError(f"no bundled scene named {builtin!r}")
        return ref.read_text(encoding="utf-8")
    with _open_in(scene) as fh:
        return fh.read()


def cmd_synth(args: argparse.Namespace) -> int:
    try:
        scripts, noise, n_frames = load_scene_script(read_scene_text(args.scene, args.builtin))
        scene = generate_scene(scripts, noise, n_frames)
    except (SceneError, OSError) as exc:
        _err(str(exc))
        return EXIT_DATA
    prefix = args.out_prefix
    Path(prefix).parent.mkdir(parents=True, exist_ok=True)
    outputs = {
        f"{prefix}.jsonl": "".join(line + "\n" for line in scene.detection_lines()),
        f"{prefix}.truth.csv": scene.positions_csv(),
        f"{prefix}.counts.csv": scene.counts_csv(),
    }
    for path, text in outputs.items():
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    print(f"{len(scene.records)} detections over {n_frames} frames -> {prefix}.*", file=sys.stderr)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="crowdlevel", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("track", help="track people in a detection stream and report per-frame stats")
    t.add_argument("--input", default="-", help="detection JSONL path, or - for stdin")
    t.add_argument("--output", default="-", help="FrameStats JSONL path, or - for stdout")
    t.add_argument("--max-disappeared", type=int, default=40, help="missed frames a track survives")
    t.add_argument("--max-distance", type=float, default=50.0, help="matching gate in pixels")
    t.add_argument("--medium-threshold", type=int, default=15)
    t.add_argument("--high-threshold", type=int, default=25)
    t.add_argument("--min-confidence", type=float, default=0.5, help="keep detections strictly above this")
    t.add_argument("--label", default="person", help="class label to keep")
    t.add_argument("--replay-fps", type=float, default=None,
                   help="report this fps exactly instead of measuring wall-clock throughput")
    t.add_argument("--overlay", default=None, help="also write overlay drawing records (JSONL) here")
    t.add_argument("--anchor", type=float, nargs=2, default=list(LABEL_ANCHOR), metavar=("X", "Y"),
                   help="density label position in overlay records")
    t.add_argument("--no-fps-field", action="store_true", help="omit fps from output records")
    t.set_defaults(func=cmd_track)

    e = sub.add_parser("eval", help="fit count ~ feature on a count CSV and report metrics")
    e.add_argument("--dataset", required=True, help="CSV with id and count columns, or - for stdin")
    e.add_argument("--feature", default="index", help="numeric column to regress on (default: row index)")
    e.add_argument("--split", type=float, nargs="?", const=0.2, default=None,
                   help="hold out this fraction for scoring (0.2 if given without a value)")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--bins", type=int, default=10)
    e.add_argument("--predict-index", type=int, default=None, help="also predict the count of this row")
    e.add_argument("--series-csv", default=None, help="write id, feature, actual, predicted rows here")
    e.add_argument("--histogram-csv", default=None, help="write the count histogram here")
    e.set_defaults(func=cmd_eval)

    s = sub.add_parser("synth", help="render a synthetic scene script to detections and ground truth")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--scene", help="scene script JSON path, or - for stdin")
    g.add_argument("--builtin", help="name of a bundled scene, e.g. scene-small")
    s.add_argument("--out-prefix", required=True, help="writes PREFIX.jsonl, PREFIX.truth.csv, PREFIX.counts.csv")
    s.set_defaults(func=cmd_synth)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        _err(str(exc))
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
