import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crowdlevel.ingest import load_count_dataset
from crowdlevel.regression import (
    DegenerateRegressionError,
    RegressionModel,
    count_histogram,
    evaluate,
    fit,
    mae,
    predict,
    predict_count_for_record,
    r2_score,
    summarize,
    train_test_split,
)


def normal_equations(x, y):
    """Solve [n Sx; Sx Sxx] [b; m] = [Sy; Sxy] directly."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    a = np.array([[len(x), x.sum()], [x.sum(), (x * x).sum()]])
    rhs = np.array([y.sum(), (x * y).sum()])
    intercept, slope = np.linalg.solve(a, rhs)
    return slope, intercept


def test_fit_exact_line():
    m = fit([0, 1, 2], [1, 3, 5])
    assert m.slope == pytest.approx(2, abs=1e-9) and m.intercept == pytest.approx(1, abs=1e-9)
    assert m.n_samples == 3


def test_fit_flat_line():
    m = fit([0, 1], [7, 7])
    assert (m.slope, m.intercept) == (0.0, 7.0)


@pytest.mark.parametrize("seed", range(10))
def test_fit_matches_normal_equations(seed):
    rng = np.random.default_rng(seed)
    x = rng.uniform(-10, 10, 20)
    y = 1.7 * x - 3.0 + rng.normal(0, 2.0, 20)
    m = fit(x, y)
    slope, intercept = normal_equations(x, y)
    assert m.slope == pytest.approx(slope, rel=1e-6)
    assert m.intercept == pytest.approx(intercept, rel=1e-6)


def test_fit_errors():
    with pytest.raises(ValueError, match="length mismatch"):
        fit([1, 2, 3], [1, 2])
    with pytest.raises(ValueError):
        fit([1], [1])
    with pytest.raises(DegenerateRegressionError, match="degenerate design"):
        fit([3, 3, 3], [1, 2, 3])


xs = st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=30)


@given(xs, st.data())
@settings(max_examples=100)
def test_residual_orthogonality(x, data):
    if np.ptp(x) < 1e-3:
        return
    y = data.draw(st.lists(st.floats(-1e3, 1e3), min_size=len(x), max_size=len(x)))
    m = fit(x, y)
    resid = np.asarray(y) - m.predict(x)
    scale = max(1.0, float(np.abs(y).max()) * len(x))
    assert abs(resid.sum()) <= 1e-6 * scale
    assert abs((resid * np.asarray(x)).sum()) <= 1e-6 * scale * max(1.0, float(np.abs(x).max()))


@pytest.mark.parametrize("a, b", [(2.0, 5.0), (-0.5, 100.0), (10.0, -3.0)])
def test_affine_equivariance(a, b):
    rng = np.random.default_rng(1)
    x = rng.uniform(0, 10, 25)
    y = 3 * x + rng.normal(0, 1, 25)
    m = fit(x, y)
    m2 = fit(a * x + b, y)
    assert m2.slope == pytest.approx(m.slope / a, rel=1e-9)
    assert m2.intercept == pytest.approx(m.intercept - m2.slope * b, rel=1e-9, abs=1e-9)


def test_predict():
    assert predict(RegressionModel(2, 1, 2), 10) == 21
    assert predict(RegressionModel(0, 4.5, 2), -1e6) == 4.5
    x, y = [1, 4, 6, 9], [2, 3, 8, 1]
    assert predict(fit(x, y), np.mean(x)) == pytest.approx(np.mean(y))


def five_rows():
    return load_count_dataset("id,count\n" + "".join(f"img{i},{c}\n" for i, c in enumerate([2, 4, 6, 8, 10])))


def test_predict_count_for_record():
    ds = five_rows()
    m = fit(ds.feature(), ds.counts)
    image_id, predicted, actual = predict_count_for_record(ds, m, 3)
    assert image_id == "img3" and actual == 8 and predicted == pytest.approx(8)
    assert predict_count_for_record(ds, m, 0)[1] == pytest.approx(2)
    with pytest.raises(IndexError):
        predict_count_for_record(ds, m, 5)
    with pytest.raises(IndexError):
        predict_count_for_record(ds, m, -1)


def brute_mae(p, a):
    return sum(abs(pi - ai) for pi, ai in zip(p, a)) / len(p)


def brute_r2(p, a):
    mean = sum(a) / len(a)
    ss_res = sum((ai - pi) ** 2 for pi, ai in zip(p, a))
    ss_tot = sum((ai - mean) ** 2 for ai in a)
    return 1 - ss_res / ss_tot


def test_mae_examples():
    assert mae([1, 2, 3], [1, 2, 3]) == 0
    assert mae([0, 0], [1, 3]) == 2
    with pytest.raises(ValueError):
        mae([], [])
    with pytest.raises(ValueError):
        mae([1, 2], [1])


def test_r2_examples():
    assert r2_score([1, 2, 3], [1, 2, 3]) == 1.0
    assert r2_score([2, 2, 2], [1, 2, 3]) == 0.0
    with pytest.raises(DegenerateRegressionError, match="r2 undefined for constant target"):
        r2_score([1, 2], [5, 5])


@pytest.mark.parametrize("seed", range(10))
def test_metrics_match_brute_force(seed):
    rng = np.random.default_rng(seed)
    p, a = rng.normal(0, 10, 50), rng.normal(0, 10, 50)
    assert mae(p, a) == pytest.approx(brute_mae(p, a), abs=1e-9)
    assert r2_score(p, a) == pytest.approx(brute_r2(p, a), abs=1e-9)


@given(st.lists(st.tuples(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3)), min_size=1, max_size=20), st.floats(-1e3, 1e3))
def test_mae_translation_invariant(pairs, c):
    p, a = zip(*pairs)
    assert mae([v + c for v in p], [v + c for v in a]) == pytest.approx(mae(p, a), abs=1e-6)


def test_summarize_examples():
    ds = load_count_dataset("id,count\na,2\nb,4\nc,6\n")
    rep = summarize(ds, 3)
    assert rep.mean_count == 4 and (rep.n_rows, rep.n_cols) == (3, 2)
    single = summarize(load_count_dataset("id,count\na,7\n"), 4)
    assert single.count_histogram == [(7.0, 7.0, 1)]
    with pytest.raises(ValueError):
        summarize(load_count_dataset("id,count\n"), 2)


def enumerate_bins(values, n_bins):
    lo, hi = min(values), max(values)
    width = (hi - lo) / n_bins
    freq = [0] * n_bins
    for v in values:
        for i in range(n_bins):
            left, right = lo + i * width, lo + (i + 1) * width
            if left <= v < right or (i == n_bins - 1 and v == hi):
                freq[i] += 1
                break
    return freq


def test_histogram_zero_to_nine_two_bins():
    assert enumerate_bins(list(range(10)), 2) == [5, 5]
    assert [f for _, _, f in count_histogram(range(10), 2)] == [5, 5]


@given(st.lists(st.integers(0, 500), min_size=1, max_size=60), st.integers(1, 12))
def test_histogram_sums_to_rows(counts, n_bins):
    hist = count_histogram(counts, n_bins)
    assert sum(f for _, _, f in hist) == len(counts)
    if len(set(counts)) > 1:
        assert [f for _, _, f in hist] == enumerate_bins(counts, n_bins)


def test_split_is_seeded_and_disjoint():
    tr, te = train_test_split(100, 0.2, seed=3)
    assert len(te) == 20 and len(tr) == 80
    assert set(tr).isdisjoint(te) and set(tr) | set(te) == set(range(100))
    tr2, te2 = train_test_split(100, 0.2, seed=3)
    assert (tr == tr2).all() and (te == te2).all()


def test_evaluate_in_sample_r2_equals_pearson_squared():
    rng = np.random.default_rng(7)
    counts = np.clip(np.round(2 * np.arange(60) + rng.normal(0, 15, 60)), 0, None).astype(int)
    ds = load_count_dataset("id,count\n" + "".join(f"{i},{c}\n" for i, c in enumerate(counts)))
    rep = evaluate(ds)
    rho = np.corrcoef(np.arange(60), counts)[0, 1]
    assert rep.r2 == pytest.approx(rho**2, abs=1e-9)
    assert rep.extra["n_test"] == 60


def test_evaluate_with_split_scores_held_out_rows():
    ds = load_count_dataset("id,count\n" + "".join(f"{i},{3 * i + 1}\n" for i in range(20)))
    rep = evaluate(ds, test_fraction=0.2, seed=1)
    assert rep.extra["n_test"] == 4 and rep.r2 == pytest.approx(1.0) and rep.mae == pytest.approx(0, abs=1e-9)
