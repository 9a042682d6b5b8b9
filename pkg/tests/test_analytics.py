import pytest
from hypothesis import given
from hypothesis import strategies as st

from crowdlevel.analytics import FpsMeter, FpsUndefinedError, assemble_frame_stats, classify_density, fps
from crowdlevel.model import DensityConfig, DensityLevel, TrackerConfig
from crowdlevel.tracker import CentroidTracker

from conftest import det_at


@pytest.mark.parametrize(
    "live, label",
    [(0, "normal crowd"), (14, "normal crowd"), (15, "medium crowd"), (25, "medium crowd"), (26, "high crowd")],
)
def test_classify_density_boundaries(live, label):
    assert classify_density(live).label == label


def test_classify_density_custom_thresholds():
    cfg = DensityConfig(3, 3)
    assert [classify_density(n, cfg) for n in (2, 3, 4)] == [
        DensityLevel.NORMAL, DensityLevel.MEDIUM, DensityLevel.HIGH,
    ]


@given(st.integers(1, 50), st.integers(0, 50), st.integers(0, 200))
def test_classify_density_monotone(medium, extra, live):
    cfg = DensityConfig(medium, medium + extra)
    rank = list(DensityLevel).index
    assert rank(classify_density(live, cfg)) <= rank(classify_density(live + 1, cfg))


def meter(frames, elapsed):
    m = FpsMeter(elapsed_override=elapsed)
    m.tick(frames)
    return m


def test_fps_examples():
    assert fps(meter(100, 4.0)) == 25.0
    assert fps(meter(0, 2.0)) == 0.0
    with pytest.raises(FpsUndefinedError, match="fps undefined before time advances"):
        fps(meter(10, 0.0))


def test_fps_wall_clock():
    m = FpsMeter(start_time=100.0)
    m.tick(30)
    assert m.fps(now=101.5) == pytest.approx(20.0)
    with pytest.raises(FpsUndefinedError):
        m.fps(now=100.0)


@given(st.integers(0, 10_000), st.floats(0.01, 1e4))
def test_fps_linear_in_frames(frames, elapsed):
    assert fps(meter(2 * frames, elapsed)) == pytest.approx(2 * fps(meter(frames, elapsed)))


def test_meter_rejects_negative_tick():
    with pytest.raises(ValueError):
        FpsMeter().tick(-1)


def test_assemble_empty():
    stats = assemble_frame_stats(0, CentroidTracker(), meter(1, 0.04))
    assert (stats.live_count, stats.total_count, stats.density) == (0, 0, DensityLevel.NORMAL)
    assert stats.fps == pytest.approx(25.0)


def test_assemble_medium_with_16_tracks():
    trk = CentroidTracker()
    trk.update(0, [det_at(200.0 * i, 0.0) for i in range(16)])
    stats = assemble_frame_stats(0, trk, meter(1, 1.0))
    assert stats.live_count == 16 and stats.density is DensityLevel.MEDIUM


def test_assemble_after_retirements():
    trk = CentroidTracker(TrackerConfig(max_disappeared=1))
    trk.update(0, [det_at(200.0 * i, 0.0) for i in range(5)])
    # actors 3 and 4 vanish; they are retired after two missed frames
    trk.update(1, [det_at(200.0 * i, 0.0) for i in range(3)])
    trk.update(2, [det_at(200.0 * i, 0.0) for i in range(3)])
    stats = assemble_frame_stats(2, trk, meter(3, 1.0))
    assert (stats.live_count, stats.total_count) == (3, 5)


def test_assemble_warming_up():
    stats = assemble_frame_stats(0, CentroidTracker(), meter(1, 0.0))
    assert stats.fps == 0.0 and stats.warming_up
