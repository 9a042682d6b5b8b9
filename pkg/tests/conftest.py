from pathlib import Path

import pytest

from crowdlevel.ingest import RawDetectionRecord
from crowdlevel.model import BoundingBox, Detection

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN


def det_at(cx: float, cy: float, frame: int = 0, w: float = 10.0, h: float = 10.0, conf: float = 0.9) -> Detection:
    return Detection(frame, BoundingBox(cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2), conf)


def raw(frame=0, x1=0.0, y1=0.0, x2=1.0, y2=1.0, confidence=0.9, label="person") -> RawDetectionRecord:
    return RawDetectionRecord(frame, x1, y1, x2, y2, confidence, label)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
