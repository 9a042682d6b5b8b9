"""
Predicting people counts with a straight line
=============================================

Fit counts against the image index of a crowd-counting style CSV, then look
at the error metrics, the count distribution, and a single prediction.
"""

import numpy as np

from crowdlevel import fit, load_count_dataset, mae, predict_count_for_record, r2_score, summarize

rng = np.random.default_rng(0)
index = np.arange(100)
counts = np.clip(np.round(20 + 0.4 * index + rng.normal(0, 4, 100)), 0, None).astype(int)
csv_text = "id,count\n" + "".join(f"seq_{i:06d}.jpg,{c}\n" for i, c in zip(index, counts))
dataset = load_count_dataset(csv_text)

report = summarize(dataset, n_bins=5)
print(f"{report.n_rows} rows x {report.n_cols} columns, mean count {report.mean_count:.2f}")
for lo, hi, n in report.count_histogram:
    print(f"  [{lo:5.1f}, {hi:5.1f}) {'#' * n}")

# %%
x = dataset.feature("index")
model = fit(x, dataset.counts)
pred = model.predict(x)
print(f"count = {model.slope:.3f} * index + {model.intercept:.3f}")
print(f"MAE {mae(pred, dataset.counts):.3f}   R^2 {r2_score(pred, dataset.counts):.3f}")

image_id, predicted, actual = predict_count_for_record(dataset, model, 42)
print(f"{image_id}: predicted {predicted:.1f}, actual {actual}")
