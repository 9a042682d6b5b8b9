"""Simple linear regression of people counts and the usual error metrics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ingest import CountDataset


class DegenerateRegressionError(ValueError):
    pass


@dataclass(frozen=True)
class RegressionModel:
    slope: float
    intercept: float
    n_samples: int

    def predict(self, x):
        """Works on scalars and on array-likes."""
        if np.isscalar(x):
            return self.slope * float(x) + self.intercept
        return self.slope * np.asarray(x, dtype=float) + self.intercept


def _as_pair(a: Sequence[float], b: Sequence[float], min_len: int) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    if a.size < min_len:
        raise ValueError(f"need at least {min_len} values, got {a.size}")
    return a, b


def fit(x: Sequence[float], y: Sequence[float]) -> RegressionModel:
    """Ordinary least squares line through ``(x, y)``."""
    x, y = _as_pair(x, y, 2)
    x_mean, y_mean = x.mean(), y.mean()
    dx = x - x_mean
    sxx = float(dx @ dx)
    if sxx == 0.0:
        raise DegenerateRegressionError("degenerate design, slope undefined (all x identical)")
    slope = float(dx @ (y - y_mean)) / sxx
    return RegressionModel(slope=slope, intercept=float(y_mean - slope * x_mean), n_samples=int(x.size))


def predict(model: RegressionModel, x: float) -> float:
    return model.predict(x)


def predict_count_for_record(
    dataset: CountDataset, model: RegressionModel, record_index: int, feature: str = "index"
) -> tuple[str, float, int]:
    """Return ``(image_id, predicted, actual)`` for one row of the dataset."""
    if not (0 <= record_index < dataset.n_rows):
        raise IndexError(f"record index {record_index} outside [0, {dataset.n_rows})")
    x = dataset.feature(feature)[record_index]
    image_id, actual = dataset.records[record_index]
    return image_id, model.predict(x), actual


def mae(predicted: Sequence[float], actual: Sequence[float]) -> float:
    p, a = _as_pair(predicted, actual, 1)
    return float(np.mean(np.abs(p - a)))


def r2_score(predicted: Sequence[float], actual: Sequence[float]) -> float:
    p, a = _as_pair(predicted, actual, 2)
    ss_tot = float(np.sum((a - a.mean()) ** 2))
    if ss_tot == 0.0:
        raise DegenerateRegressionError("r2 undefined for constant target")
    ss_res = float(np.sum((a - p) ** 2))
    return 1.0 - ss_res / ss_tot


@dataclass
class EvaluationReport:
    mean_count: float
    n_rows: int
    n_cols: int
    count_histogram: list[tuple[float, float, int]]
    mae: float | None = None
    r2: float | None = None
    model: RegressionModel | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "mae": self.mae,
            "r2": self.r2,
            "mean_count": self.mean_count,
            "n_rows": self.n_rows,
            "n_cols": self.n_cols,
            "histogram": [[lo, hi, n] for lo, hi, n in self.count_histogram],
        }
        if self.model is not None:
            out["model"] = {
                "slope": self.model.slope,
                "intercept": self.model.intercept,
                "n_samples": self.model.n_samples,
            }
        out.update(self.extra)
        return out


def count_histogram(counts: Sequence[float], n_bins: int) -> list[tuple[float, float, int]]:
    """Equal-width bins over ``[min, max]``; the last bin is closed on the right.

    When every count is the same there is no width to split, so a single bin
    ``(c, c, n)`` is returned whatever ``n_bins`` is.
    """
    if n_bins < 1:
        raise ValueError("n_bins must be at least 1")
    c = np.asarray(counts, dtype=float)
    if c.size == 0:
        raise ValueError("cannot histogram an empty sequence")
    lo, hi = float(c.min()), float(c.max())
    if lo == hi:
        return [(lo, hi, int(c.size))]
    freq, edges = np.histogram(c, bins=n_bins, range=(lo, hi))
    return [(float(edges[i]), float(edges[i + 1]), int(freq[i])) for i in range(n_bins)]


def summarize(dataset: CountDataset, n_bins: int = 10) -> EvaluationReport:
    if dataset.n_rows == 0:
        raise ValueError("dataset is empty")
    counts = dataset.counts
    return EvaluationReport(
        mean_count=float(np.mean(counts)),
        n_rows=dataset.n_rows,
        n_cols=dataset.n_cols,
        count_histogram=count_histogram(counts, n_bins),
    )


def train_test_split(n: int, test_fraction: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Seeded shuffle of ``range(n)`` into sorted train and test index arrays."""
    if not (0.0 < test_fraction < 1.0):
        raise ValueError("test fraction must lie strictly between 0 and 1")
    perm = np.random.default_rng(seed).permutation(n)
    n_test = int(round(n * test_fraction))
    n_test = min(max(n_test, 1), n - 1)
    return np.sort(perm[n_test:]), np.sort(perm[:n_test])


def evaluate(
    dataset: CountDataset,
    feature: str = "index",
    test_fraction: float | None = None,
    seed: int = 0,
    n_bins: int = 10,
) -> EvaluationReport:
    """Fit count ~ feature and score it, in-sample or on a held-out split."""
    report = summarize(dataset, n_bins)
    x = np.asarray(dataset.feature(feature), dtype=float)
    y = np.asarray(dataset.counts, dtype=float)
    if test_fraction is None:
        train = test = np.arange(dataset.n_rows)
    else:
        if dataset.n_rows < 4:
            raise DegenerateRegressionError("too few rows to split")
        train, test = train_test_split(dataset.n_rows, test_fraction, seed)
    model = fit(x[train], y[train])
    predicted = model.predict(x[test])
    report.model = model
    report.mae = mae(predicted, y[test])
    report.r2 = r2_score(predicted, y[test])
    report.extra = {"feature": feature, "n_test": int(len(test))}
    if test_fraction is not None:
        report.extra.update({"split": test_fraction, "seed": seed})
    return report
