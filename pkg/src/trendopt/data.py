"""Dataset ingestion, seeded splitting/normalization, and synthetic problems.

CSV format: UTF-8, comma-separated, one header row, ``.`` decimal separator,
no quoting of numeric fields. Rows containing empty cells are dropped (and
counted on the resulting dataset); a non-empty cell that fails to parse as a
number raises ``ParseError`` with its file line and column name.

Three fixtures ship with the package (see ``trendopt/datasets`` and the
README for provenance and schemas):

* ``boston``     -- 506 x 14, target ``MEDV``
* ``california`` -- 20640 x 9, target ``MedHouseVal``
* ``diabetes``   -- 442 x 11, target ``target``

Regression targets are standardized alongside the features by
``split_normalize`` (train statistics only), so reported MSE values are in
units of target variance.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources
from typing import Optional

import numpy as np

from .errors import InvalidParam, MissingColumn, ParseError, TooFewRows

FIXTURES = {
    "boston": ("boston.csv", "MEDV"),
    "california": ("california.csv", "MedHouseVal"),
    "diabetes": ("diabetes.csv", "target"),
}


@dataclass
class Dataset:
    name: str
    features: np.ndarray          # (n, d) float64
    targets: np.ndarray           # (n,) float64, or int64 labels for classification
    feature_names: list
    target_name: str
    dropped_rows: int = 0

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def is_classification(self) -> bool:
        return np.issubdtype(self.targets.dtype, np.integer)


def load_csv(path, target_column: str, name: Optional[str] = None) -> Dataset:
    """Parse a numeric CSV into a Dataset; row order follows the file."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(1, "<header>", "<empty file>")
        header = [h.strip() for h in header]
        if target_column not in header:
            raise MissingColumn(f"column {target_column!r} not in header {header}")
        t_idx = header.index(target_column)
        rows = []
        dropped = 0
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ParseError(line_no, "<row>", f"expected {len(header)} cells, got {len(row)}")
            if any(cell.strip() == "" for cell in row):
                dropped += 1
                continue
            parsed = []
            for col, cell in zip(header, row):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise ParseError(line_no, col, cell.strip()) from None
            if not all(math.isfinite(v) for v in parsed):
                dropped += 1  # textual nan/inf counts as a missing value
                continue
            rows.append(parsed)
    data = np.asarray(rows, dtype=np.float64).reshape(len(rows), len(header))
    mask = np.ones(len(header), dtype=bool)
    mask[t_idx] = False
    return Dataset(
        name=name or str(path),
        features=data[:, mask],
        targets=data[:, t_idx],
        feature_names=[h for i, h in enumerate(header) if i != t_idx],
        target_name=target_column,
        dropped_rows=dropped,
    )


def load_fixture(name: str) -> Dataset:
    """Load one of the bundled fixtures by short name."""
    key = name.lower()
    if key not in FIXTURES:
        raise InvalidParam(f"unknown fixture {name!r}; bundled: {sorted(FIXTURES)}")
    filename, target = FIXTURES[key]
    with resources.as_file(resources.files("trendopt") / "datasets" / filename) as p:
        ds = load_csv(p, target, name=key)
    return ds


@dataclass
class SplitDataset:
    """Seeded train/test split with train-statistics normalization applied."""

    train: Dataset
    test: Dataset
    norm_mean: np.ndarray
    norm_std: np.ndarray
    target_mean: float
    target_std: float
    seed: int
    ratio: float
    train_indices: np.ndarray
    test_indices: np.ndarray

    def denormalize_features(self, x: np.ndarray) -> np.ndarray:
        return x * self.norm_std + self.norm_mean

    def denormalize_targets(self, y: np.ndarray) -> np.ndarray:
        return y * self.target_std + self.target_mean


def split_normalize(dataset: Dataset, ratio: float, seed: int) -> SplitDataset:
    """Seeded uniform shuffle, split, then standardize with train statistics.

    Zero-variance feature columns are pinned to 0 (std treated as 1).
    Regression targets are standardized the same way; integer labels are
    passed through untouched.
    """
    n = dataset.n_samples
    if n < 2:
        raise TooFewRows(f"need at least 2 rows to split, got {n}")
    if not 0.0 < ratio < 1.0:
        raise InvalidParam(f"ratio must be in (0, 1), got {ratio}")
    perm = np.random.default_rng(seed).permutation(n)
    n_train = int(round(ratio * n))
    n_train = min(max(n_train, 1), n - 1)
    tr_idx, te_idx = perm[:n_train], perm[n_train:]

    mean = dataset.features[tr_idx].mean(axis=0)
    std = dataset.features[tr_idx].std(axis=0)
    std = np.where(std == 0.0, 1.0, std)

    classification = dataset.is_classification
    if classification:
        t_mean, t_std = 0.0, 1.0
        tr_targets = dataset.targets[tr_idx]
        te_targets = dataset.targets[te_idx]
    else:
        t_mean = float(dataset.targets[tr_idx].mean())
        t_std = float(dataset.targets[tr_idx].std())
        if t_std == 0.0:
            t_std = 1.0
        tr_targets = (dataset.targets[tr_idx] - t_mean) / t_std
        te_targets = (dataset.targets[te_idx] - t_mean) / t_std

    def _sub(idx, targets, suffix):
        return Dataset(
            name=f"{dataset.name}/{suffix}",
            features=(dataset.features[idx] - mean) / std,
            targets=targets,
            feature_names=list(dataset.feature_names),
            target_name=dataset.target_name,
        )

    return SplitDataset(
        train=_sub(tr_idx, tr_targets, "train"),
        test=_sub(te_idx, te_targets, "test"),
        norm_mean=mean,
        norm_std=std,
        target_mean=t_mean,
        target_std=t_std,
        seed=seed,
        ratio=ratio,
        train_indices=tr_idx,
        test_indices=te_idx,
    )


# --- synthetic optimization problems -------------------------------------

@dataclass
class QuadraticProblem:
    """L(theta) = 0.5 theta' A theta with a symmetric positive definite A."""

    matrix: np.ndarray
    seed: Optional[int] = None
    name: str = "quadratic"

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def loss(self, theta: np.ndarray) -> float:
        theta = np.asarray(theta, dtype=np.float64)
        return float(0.5 * theta @ self.matrix @ theta)

    def grad(self, theta: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(theta, dtype=np.float64)

    def initial_point(self, seed: int) -> np.ndarray:
        return np.random.default_rng(seed).normal(size=self.dim)


@dataclass
class RosenbrockProblem:
    """The classic banana function, summed over adjacent coordinate pairs."""

    dim: int
    name: str = "rosenbrock"

    def loss(self, theta: np.ndarray) -> float:
        x = np.asarray(theta, dtype=np.float64)
        return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))

    def grad(self, theta: np.ndarray) -> np.ndarray:
        x = np.asarray(theta, dtype=np.float64)
        g = np.zeros_like(x)
        g[:-1] = -400.0 * x[:-1] * (x[1:] - x[:-1] ** 2) - 2.0 * (1.0 - x[:-1])
        g[1:] += 200.0 * (x[1:] - x[:-1] ** 2)
        return g

    def initial_point(self, seed: int) -> np.ndarray:
        return np.random.default_rng(seed).normal(size=self.dim)


def make_quadratic(dim: int, condition_number: float, seed: int) -> QuadraticProblem:
    """A = Q D Q' with a log-spaced spectrum on [1, condition_number]."""
    if dim < 1:
        raise InvalidParam(f"dim must be >= 1, got {dim}")
    if condition_number < 1:
        raise InvalidParam(f"condition_number must be >= 1, got {condition_number}")
    rng = np.random.default_rng(seed)
    spectrum = np.logspace(0.0, np.log10(condition_number), dim)
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    q = q * np.sign(np.diag(r))  # sign-fix so the factorization is deterministic
    a = (q * spectrum) @ q.T
    a = 0.5 * (a + a.T)  # exact symmetry
    return QuadraticProblem(matrix=a, seed=seed)


def make_rosenbrock(dim: int) -> RosenbrockProblem:
    if dim < 2:
        raise InvalidParam(f"rosenbrock needs dim >= 2, got {dim}")
    return RosenbrockProblem(dim=dim)


def make_blobs(n: int, k: int, dim: int, seed: int, spread: float = 0.6,
               center_box: float = 6.0) -> Dataset:
    """Seeded Gaussian clusters with integer labels, for cross-entropy runs."""
    if k < 2:
        raise InvalidParam(f"blobs need k >= 2, got {k}")
    if n < k:
        raise InvalidParam(f"need n >= k, got n={n}, k={k}")
    rng = np.random.default_rng(seed)
    centers = rng.uniform(-center_box, center_box, size=(k, dim))
    labels = np.arange(n) % k
    points = centers[labels] + rng.normal(scale=spread, size=(n, dim))
    return Dataset(
        name=f"blobs(n={n},k={k},dim={dim},seed={seed})",
        features=points,
        targets=labels.astype(np.int64),
        feature_names=[f"x{i}" for i in range(dim)],
        target_name="label",
    )
