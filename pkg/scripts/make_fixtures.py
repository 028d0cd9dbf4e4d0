#!/usr/bin/env python3
"""Regenerate the bundled dataset fixtures in src/trendopt/datasets/.

diabetes.csv is the classic 442-sample disease-progression table, exported
from scikit-learn's bundled raw copy (10 baseline variables + target).

boston.csv and california.csv are *synthetic stand-ins*: the original tables
cannot be redistributed or downloaded in this build environment, so we ship
seeded surrogates with the same shapes and column schemas (506 x 14 with
target MEDV; 20640 x 9 with target MedHouseVal). Each surrogate draws
correlated features, forms a mostly-linear response with a mild nonlinearity
plus calibrated noise, then maps every column affinely into a plausible
real-world range (affine per-column maps are invisible to training, which
standardizes with train statistics). The generator is deterministic; rerun
this script to reproduce the exact bytes.
"""

import pathlib

import numpy as np

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "trendopt" / "datasets"

BOSTON_COLUMNS = ["CRIM", "ZN", "INDUS", "CHAS", "NOX", "RM", "AGE", "DIS",
                  "RAD", "TAX", "PTRATIO", "B", "LSTAT", "MEDV"]
CAL_COLUMNS = ["MedInc", "HouseAge", "AveRooms", "AveBedrms", "Population",
               "AveOccup", "Latitude", "Longitude", "MedHouseVal"]


def write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(f"{v:.8g}" for v in row) + "\n")
    print(f"wrote {path} ({len(rows)} rows x {len(header)} cols)")


def structured_regression(seed, n, d, strong_features, noise_frac, corr=0.35):
    """Correlated gaussian design + sparse-ish linear signal + mild nonlinearity."""
    rng = np.random.default_rng(seed)
    mix = rng.normal(size=(d, d)) * corr + np.eye(d)
    x = rng.normal(size=(n, d)) @ mix.T
    w = rng.normal(size=d)
    weak = np.argsort(np.abs(w))[: d - strong_features]
    w[weak] *= 0.15
    w /= np.linalg.norm(w)
    f = x @ w + 0.45 * np.tanh(x[:, 0] * x[:, 1]) + 0.27 * (np.abs(x[:, 2]) - 0.8)
    y = f + rng.normal(size=n) * noise_frac * np.std(f)
    return x, y


def affine_to(col, lo, hi):
    cmin, cmax = col.min(), col.max()
    return lo + (col - cmin) * (hi - lo) / (cmax - cmin)


def make_boston():
    x, y = structured_regression(seed=20240801, n=506, d=13,
                                 strong_features=6, noise_frac=0.45)
    cols = np.empty_like(x)
    ranges = [(0.006, 89.0), (0.0, 100.0), (0.46, 27.7), (0.0, 1.0), (0.385, 0.871),
              (3.56, 8.78), (2.9, 100.0), (1.13, 12.1), (1.0, 24.0), (187.0, 711.0),
              (12.6, 22.0), (0.32, 396.9), (1.73, 37.97)]
    for j, (lo, hi) in enumerate(ranges):
        cols[:, j] = affine_to(x[:, j], lo, hi)
    cols[:, 3] = (x[:, 3] > np.quantile(x[:, 3], 0.93)).astype(float)  # CHAS is ~7% ones
    target = affine_to(y, 5.0, 50.0)
    rows = np.column_stack([cols, target])
    write_csv(OUT / "boston.csv", BOSTON_COLUMNS, rows)


def make_california():
    x, y = structured_regression(seed=20240802, n=20640, d=8,
                                 strong_features=5, noise_frac=0.5)
    cols = np.empty_like(x)
    ranges = [(0.5, 15.0), (1.0, 52.0), (0.85, 20.0), (0.33, 5.0),
              (3.0, 9000.0), (0.7, 20.0), (32.54, 41.95), (-124.35, -114.31)]
    for j, (lo, hi) in enumerate(ranges):
        cols[:, j] = affine_to(x[:, j], lo, hi)
    target = affine_to(y, 0.15, 5.0)
    rows = np.column_stack([cols, target])
    write_csv(OUT / "california.csv", CAL_COLUMNS, rows)


def make_diabetes():
    from sklearn.datasets import load_diabetes

    raw = load_diabetes(scaled=False)
    header = list(raw.feature_names) + ["target"]
    rows = np.column_stack([raw.data, raw.target])
    write_csv(OUT / "diabetes.csv", header, rows)


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    make_boston()
    make_california()
    make_diabetes()
