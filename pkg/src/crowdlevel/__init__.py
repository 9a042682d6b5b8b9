"""People tracking, counting and crowd density levels from detection streams."""

from .analytics import FpsMeter, FpsUndefinedError, assemble_frame_stats, classify_density, fps
from .ingest import (
    CountDataset,
    RawDetectionRecord,
    filter_persons,
    load_count_dataset,
    parse_detection_stream,
)
from .model import (
    BoundingBox,
    DensityConfig,
    DensityLevel,
    Detection,
    FrameStats,
    Track,
    TrackerConfig,
    centroid,
    validate_box,
)
from .pipeline import emit_overlay, run_frames
from .regression import RegressionModel, fit, mae, predict, predict_count_for_record, r2_score, summarize
from .synth import ActorScript, NoiseSpec, generate_scene, score_tracking
from .tracker import CentroidTracker, FrameUpdateResult, new_tracker

__version__ = "0.1.0"
