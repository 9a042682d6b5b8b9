"""Reading detection streams (JSON Lines) and people-count datasets (CSV).

A detection stream line looks like::

    {"frame":0,"x1":10.0,"y1":20.0,"x2":50.0,"y2":120.0,"confidence":0.83,"label":"person"}

Lines must be sorted by ``frame``. Several lines may share a frame. Frames
that never appear are simply frames with nothing detected in them.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .model import BoundingBox, Detection, validate_box

RECORD_FIELDS = ("frame", "x1", "y1", "x2", "y2", "confidence", "label")

# Class list of the MobileNet-SSD Caffe model the original pipeline used. Only
# the target label matters for filtering; this is kept for reference.
MOBILENET_SSD_CLASSES = (
    "background", "aeroplane", "bicycle", "bird", "boat",
    "bottle", "bus", "car", "cat", "chair", "cow", "diningtable",
    "dog", "horse", "motorbike", "person", "pottedplant", "sheep",
    "sofa", "train", "tvmonitor",
)


class StreamFormatError(ValueError):
    """A detection stream line could not be accepted."""

    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class DatasetFormatError(ValueError):
    pass


class InvalidRecordError(ValueError):
    def __init__(self, position: int, message: str):
        self.position = position
        super().__init__(f"record {position}: {message}")


@dataclass(frozen=True, slots=True)
class RawDetectionRecord:
    frame: int
    x1: float
    y1: float
    x2: float
    y2: float
    confidence: float
    label: str


def _parse_line(lineno: int, text: str) -> RawDetectionRecord:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StreamFormatError(lineno, f"malformed JSON ({exc.msg})") from None
    if not isinstance(obj, dict):
        raise StreamFormatError(lineno, "expected a JSON object")
    for name in RECORD_FIELDS:
        if name not in obj:
            raise StreamFormatError(lineno, f"missing field {name!r}")

    frame = obj["frame"]
    if isinstance(frame, bool) or not isinstance(frame, int) or frame < 0:
        raise StreamFormatError(lineno, f"field 'frame' must be a non-negative integer, got {frame!r}")
    values = {}
    for name in ("x1", "y1", "x2", "y2", "confidence"):
        v = obj[name]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise StreamFormatError(lineno, f"field {name!r} must be a number, got {v!r}")
        values[name] = float(v)
    label = obj["label"]
    if not isinstance(label, str):
        raise StreamFormatError(lineno, f"field 'label' must be a string, got {label!r}")
    return RawDetectionRecord(frame=frame, label=label, **values)


def iter_detection_groups(lines: Iterable[str]) -> Iterator[tuple[int, list[RawDetectionRecord]]]:
    """Yield ``(frame, records)`` groups as soon as each frame is complete.

    Errors are raised lazily, at the offending line, so groups that precede
    a bad line have already been yielded by then.
    """
    current_frame: int | None = None
    group: list[RawDetectionRecord] = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        rec = _parse_line(lineno, line)
        if current_frame is None or rec.frame == current_frame:
            current_frame = rec.frame
            group.append(rec)
        elif rec.frame > current_frame:
            yield current_frame, group
            current_frame, group = rec.frame, [rec]
        else:
            raise StreamFormatError(
                lineno, f"frame {rec.frame} follows frame {current_frame}; stream must be sorted"
            )
    if current_frame is not None:
        yield current_frame, group


def parse_detection_stream(lines: Iterable[str]) -> list[tuple[int, list[RawDetectionRecord]]]:
    return list(iter_detection_groups(lines))


def format_detection_record(rec: RawDetectionRecord) -> str:
    """Serialize one record as a compact JSON line (no trailing newline)."""
    return json.dumps(
        {
            "frame": rec.frame,
            "x1": rec.x1,
            "y1": rec.y1,
            "x2": rec.x2,
            "y2": rec.y2,
            "confidence": rec.confidence,
            "label": rec.label,
        },
        separators=(",", ":"),
        ensure_ascii=False,
    )


def filter_persons(
    records: Sequence[RawDetectionRecord],
    min_confidence: float = 0.5,
    target_label: str = "person",
) -> list[Detection]:
    """Keep records with ``confidence > min_confidence`` and the target label.

    The comparison is strict: a confidence of exactly ``min_confidence`` is
    dropped. Order is preserved.
    """
    if not (0.0 <= min_confidence <= 1.0):
        raise ValueError(f"min_confidence must lie in [0, 1], got {min_confidence!r}")
    kept = []
    for pos, rec in enumerate(records):
        if rec.label != target_label or not rec.confidence > min_confidence:
            continue
        problem = validate_box(rec.x1, rec.y1, rec.x2, rec.y2)
        if problem is not None:
            raise InvalidRecordError(pos, f"invalid box ({problem})")
        if rec.confidence > 1.0:
            raise InvalidRecordError(pos, f"confidence {rec.confidence!r} exceeds 1")
        kept.append(
            Detection(
                frame_index=rec.frame,
                box=BoundingBox(rec.x1, rec.y1, rec.x2, rec.y2),
                confidence=rec.confidence,
                class_label=rec.label,
            )
        )
    return kept


@dataclass(frozen=True)
class CountDataset:
    """Ordered ``(image_id, count)`` rows read from a CSV file.

    ``columns`` keeps every source column as raw strings so any of them can
    later serve as a regression feature.
    """

    records: list[tuple[str, int]]
    n_cols: int
    columns: dict[str, list[str]] = field(default_factory=dict, repr=False)

    @property
    def n_rows(self) -> int:
        return len(self.records)

    @property
    def counts(self) -> list[int]:
        return [c for _, c in self.records]

    def feature(self, name: str = "index") -> list[float]:
        """Numeric values of one column; ``"index"`` means the row position."""
        if name == "index" and "index" not in self.columns:
            return [float(i) for i in range(self.n_rows)]
        if name not in self.columns:
            raise DatasetFormatError(f"unknown feature column {name!r}")
        out = []
        for row, raw in enumerate(self.columns[name], start=1):
            try:
                v = float(raw)
            except ValueError:
                raise DatasetFormatError(f"row {row}: column {name!r} is not numeric ({raw!r})") from None
            if not math.isfinite(v):
                raise DatasetFormatError(f"row {row}: column {name!r} is not finite ({raw!r})")
            out.append(v)
        return out


def load_count_dataset(text: str, id_column: str = "id", count_column: str = "count") -> CountDataset:
    """Parse CSV text with a header row. Rows are numbered from 1, header excluded."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise DatasetFormatError("empty file, expected a header row") from None
    for required in (id_column, count_column):
        if required not in header:
            raise DatasetFormatError(f"missing required column {required!r}")
    id_pos, count_pos = header.index(id_column), header.index(count_column)

    records: list[tuple[str, int]] = []
    columns: dict[str, list[str]] = {name: [] for name in header}
    for row_no, row in enumerate(reader, start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise DatasetFormatError(f"row {row_no}: expected {len(header)} fields, got {len(row)}")
        raw_count = row[count_pos].strip()
        try:
            count = int(raw_count)
        except ValueError:
            raise DatasetFormatError(f"row {row_no}: count {raw_count!r} is not an integer") from None
        if count < 0:
            raise DatasetFormatError(f"row {row_no}: count {count} is negative")
        records.append((row[id_pos].strip(), count))
        for name, cell in zip(header, row):
            columns[name].append(cell.strip())
    return CountDataset(records=records, n_cols=len(header), columns=columns)
