"""Deterministic experiment runner: seeded multi-run training, metrics, summaries.

A run is fully determined by (config, seed): the seed drives the train/test
split, the model initialization, and (for mini-batch runs) the per-epoch
shuffle, which uses ``default_rng([seed, epoch])``. Full-batch runs take one
gradient step per epoch over the whole training set, in file order.

Metrics are recorded after each epoch's update(s), for both splits:
``mse`` for regression, ``loss`` and ``accuracy`` (top-1 argmax, ties to the
lowest class index) for classification. Synthetic-problem runs record
``loss`` on the single ``train`` split. A non-finite loss aborts the run and
flags its record as diverged; no clipping is applied, divergence is a result.

Metrics CSV schema (bit-exact): header
``run_id,optimizer,dataset,seed,epoch,split,metric,value``, values printed
with 17 significant digits, LF line endings.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .data import (Dataset, load_csv, load_fixture, make_blobs, make_quadratic,
                   make_rosenbrock, split_normalize)
from .errors import EmptyInput, InvalidConfig
from .model import Batch, backward, forward, init_model, loss as loss_fn
from .optim import OptimizerConfig, init_state, step

REGRESSION_EPOCHS_OF_INTEREST = (50, 100, 150, 200)
CLASSIFICATION_EPOCHS_OF_INTEREST = (10, 30, 75, 100)

CSV_HEADER = "run_id,optimizer,dataset,seed,epoch,split,metric,value"

_PROBLEM_KEYS = {
    "quadratic": {"kind", "dim", "condition_number", "seed"},
    "rosenbrock": {"kind", "dim"},
    "blobs": {"kind", "n", "k", "dim", "seed"},
}


@dataclass(frozen=True)
class ModelSpec:
    hidden: tuple = ()
    activation: str = "relu"

    def __post_init__(self):
        if self.activation != "relu":
            raise InvalidConfig(f"only 'relu' hidden activation is supported, got {self.activation!r}")
        object.__setattr__(self, "hidden", tuple(int(h) for h in self.hidden))


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a data source, a model, an optimizer, and a protocol."""

    dataset: Optional[object] = None      # fixture name, or {"path":..., "target_column":...}
    problem: Optional[dict] = None        # {"kind": "quadratic"|"rosenbrock"|"blobs", ...}
    model: ModelSpec = field(default_factory=ModelSpec)
    loss: str = "mse"
    optimizer: OptimizerConfig = field(default_factory=lambda: OptimizerConfig("adam"))
    optimizer_label: Optional[str] = None
    epochs: int = 200
    batch_size: Optional[int] = None      # None = full batch
    seeds: tuple = (1, 2, 3, 4, 5)
    split_ratio: float = 0.8
    output_dir: Optional[str] = None

    def __post_init__(self):
        if (self.dataset is None) == (self.problem is None):
            raise InvalidConfig("exactly one of 'dataset' or 'problem' must be set")
        if self.epochs < 1:
            raise InvalidConfig(f"epochs must be >= 1, got {self.epochs}")
        if not self.seeds:
            raise InvalidConfig("seeds must be nonempty")
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if not 0.0 < self.split_ratio < 1.0:
            raise InvalidConfig(f"split_ratio must be in (0, 1), got {self.split_ratio}")
        if self.batch_size is not None and self.batch_size < 1:
            raise InvalidConfig(f"batch_size must be >= 1 or None, got {self.batch_size}")
        if self.problem is not None:
            kind = self.problem.get("kind")
            allowed = _PROBLEM_KEYS.get(kind)
            if allowed is None:
                raise InvalidConfig(f"unknown problem kind {kind!r}; expected {sorted(_PROBLEM_KEYS)}")
            unknown = set(self.problem) - allowed
            if unknown:
                raise InvalidConfig(f"unknown problem keys {sorted(unknown)} for {kind!r}")
        if self.optimizer_label is None:
            object.__setattr__(self, "optimizer_label", self.optimizer.kind)

    @staticmethod
    def from_dict(raw: dict) -> "ExperimentConfig":
        """Build from a parsed JSON object; unknown keys are errors."""
        allowed = {"dataset", "problem", "model", "loss", "optimizer", "epochs",
                   "batch_size", "seeds", "split_ratio", "output_dir"}
        unknown = set(raw) - allowed
        if unknown:
            raise InvalidConfig(f"unknown config keys: {sorted(unknown)}")
        kw = dict(raw)
        if "model" in kw:
            mraw = dict(kw["model"])
            munknown = set(mraw) - {"hidden", "activation"}
            if munknown:
                raise InvalidConfig(f"unknown model keys: {sorted(munknown)}")
            kw["model"] = ModelSpec(**mraw)
        if "optimizer" in kw:
            oraw = dict(kw["optimizer"])
            label = oraw.pop("label", None)
            try:
                kw["optimizer"] = OptimizerConfig(**oraw)
            except TypeError as exc:
                raise InvalidConfig(f"bad optimizer config: {exc}") from None
            kw["optimizer_label"] = label
        if isinstance(kw.get("batch_size"), str):
            if kw["batch_size"].lower() != "full":
                raise InvalidConfig(f"batch_size must be an integer or \"full\", got {kw['batch_size']!r}")
            kw["batch_size"] = None
        if isinstance(kw.get("dataset"), dict):
            dunknown = set(kw["dataset"]) - {"path", "target_column", "name"}
            if dunknown:
                raise InvalidConfig(f"unknown dataset keys: {sorted(dunknown)}")
        if isinstance(kw.get("seeds"), list):
            kw["seeds"] = tuple(kw["seeds"])
        return ExperimentConfig(**kw)

    def metadata(self) -> dict:
        """Exact echo of the protocol, for provenance next to the metrics."""
        opt = self.optimizer
        return {
            "dataset": self.dataset,
            "problem": self.problem,
            "model_hidden": list(self.model.hidden),
            "activation": self.model.activation,
            "loss": self.loss,
            "optimizer": {
                "kind": opt.kind, "alpha": opt.alpha, "beta1": opt.beta1,
                "beta2": opt.beta2, "beta3": opt.beta3, "epsilon": opt.epsilon,
                "momentum_beta": opt.momentum_beta,
                "initial_accumulator": opt.initial_accumulator,
                "bias_correction": opt.bias_correction,
            },
            "optimizer_label": self.optimizer_label,
            "epochs": self.epochs,
            "batch_size": "full" if self.batch_size is None else self.batch_size,
            "seeds": list(self.seeds),
            "split_ratio": self.split_ratio,
        }


@dataclass
class RunRecord:
    """Per-epoch metric rows for one (config, seed) run."""

    run_id: str
    optimizer: str
    dataset: str
    seed: int
    rows: list                      # (epoch, split, metric, value)
    diverged: bool = False
    diverged_epoch: Optional[int] = None
    metadata: dict = field(default_factory=dict)


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "-", text).strip("-")


def _resolve_dataset(config: ExperimentConfig) -> Dataset:
    ref = config.dataset
    if isinstance(ref, str):
        return load_fixture(ref)
    if isinstance(ref, dict):
        if "path" not in ref or "target_column" not in ref:
            raise InvalidConfig("custom dataset needs 'path' and 'target_column'")
        return load_csv(ref["path"], ref["target_column"], name=ref.get("name"))
    raise InvalidConfig(f"dataset must be a fixture name or a path object, got {type(ref)}")


def _make_problem(spec: dict):
    kind = spec["kind"]
    if kind == "quadratic":
        return make_quadratic(spec["dim"], spec.get("condition_number", 100.0),
                              spec.get("seed", 0))
    if kind == "rosenbrock":
        return make_rosenbrock(spec["dim"])
    return make_blobs(spec["n"], spec["k"], spec["dim"], spec.get("seed", 0))


def _batches(n: int, batch_size: Optional[int], seed: int, epoch: int):
    if batch_size is None or batch_size >= n:
        yield slice(None)
        return
    order = np.random.default_rng([seed, epoch]).permutation(n)
    for start in range(0, n, batch_size):
        yield order[start:start + batch_size]


def _accuracy(logits: np.ndarray, labels: np.ndarray) -> float:
    return float(np.mean(np.argmax(logits, axis=1) == labels))


def _run_on_dataset(config: ExperimentConfig, dataset: Dataset, seed: int) -> RunRecord:
    split = split_normalize(dataset, config.split_ratio, seed)
    classification = dataset.is_classification
    loss_kind = config.loss
    out_units = int(dataset.targets.max()) + 1 if classification else 1
    sizes = [dataset.n_features, *config.model.hidden, out_units]
    model = init_model(sizes, seed)
    theta = model.get_params()
    state = init_state(config.optimizer, theta.size)
    x_train, y_train = split.train.features, split.train.targets

    run_id = f"{_slug(dataset.name)}_{_slug(config.optimizer_label)}_s{seed}"
    record = RunRecord(run_id=run_id, optimizer=config.optimizer_label,
                       dataset=dataset.name, seed=seed, rows=[],
                       metadata=config.metadata())

    for epoch in range(1, config.epochs + 1):
        for sel in _batches(x_train.shape[0], config.batch_size, seed, epoch):
            model.set_params(theta)
            value, grads = backward(model, Batch(x_train[sel], y_train[sel]), loss_kind)
            if not math.isfinite(value):
                record.diverged = True
                record.diverged_epoch = epoch
                return record
            theta, state, _ = step(config.optimizer, state, theta, grads.flat())
        model.set_params(theta)
        epoch_values = []
        for split_name, part in (("train", split.train), ("test", split.test)):
            preds = forward(model, part.features)
            if classification:
                value = loss_fn(loss_kind, preds, part.targets)
                epoch_values.append(value)
                record.rows.append((epoch, split_name, "loss", value))
                record.rows.append((epoch, split_name, "accuracy",
                                    _accuracy(preds, part.targets)))
            else:
                value = loss_fn("mse", preds, part.targets)
                epoch_values.append(value)
                record.rows.append((epoch, split_name, "mse", value))
        if not all(math.isfinite(v) for v in epoch_values):
            record.diverged = True
            record.diverged_epoch = epoch
            return record
    return record


def _run_on_problem(config: ExperimentConfig, seed: int) -> RunRecord:
    problem = _make_problem(config.problem)
    theta = problem.initial_point(seed)
    state = init_state(config.optimizer, theta.size)
    run_id = f"{_slug(problem.name)}_{_slug(config.optimizer_label)}_s{seed}"
    record = RunRecord(run_id=run_id, optimizer=config.optimizer_label,
                       dataset=problem.name, seed=seed, rows=[],
                       metadata=config.metadata())
    for epoch in range(1, config.epochs + 1):
        grad = problem.grad(theta)
        theta, state, _ = step(config.optimizer, state, theta, grad)
        value = problem.loss(theta)
        if not math.isfinite(value):
            record.diverged = True
            record.diverged_epoch = epoch
            return record
        record.rows.append((epoch, "train", "loss", value))
    return record


def run_experiment(config: ExperimentConfig) -> list:
    """One RunRecord per seed, deterministic given (config, seed)."""
    records = []
    if config.problem is not None and config.problem.get("kind") != "blobs":
        for seed in config.seeds:
            records.append(_run_on_problem(config, seed))
        return records
    dataset = (_make_problem(config.problem) if config.problem is not None
               else _resolve_dataset(config))
    for seed in config.seeds:
        records.append(_run_on_dataset(config, dataset, seed))
    return records


# --- summaries and CSV emission -------------------------------------------

@dataclass(frozen=True)
class SummaryRow:
    optimizer: str
    dataset: str
    epoch: int
    metric: str
    mean: float
    std: float       # sample std (ddof=1); 0.0 when n == 1
    n: int
    best: bool = False


def summarize(records: Sequence[RunRecord], epochs_of_interest=None) -> list:
    """Mean +- sample std across seeds at the requested epochs.

    Diverged records are excluded. Without an explicit epoch set, uses the
    regression grid (50, 100, 150, 200) when 'mse' rows exist, else the
    classification grid (10, 30, 75, 100); epochs absent from the records are
    dropped and the final recorded epoch is always included.
    """
    live = [r for r in records if not r.diverged]
    if not records:
        raise EmptyInput("no run records to summarize")
    if not live:
        raise EmptyInput("all runs diverged; nothing to summarize")
    available = sorted({row[0] for r in live for row in r.rows})
    if epochs_of_interest is None:
        has_mse = any(row[2] == "mse" for r in live for row in r.rows)
        grid = REGRESSION_EPOCHS_OF_INTEREST if has_mse else CLASSIFICATION_EPOCHS_OF_INTEREST
        epochs_of_interest = [e for e in grid if e in set(available)]
        if available[-1] not in epochs_of_interest:
            epochs_of_interest.append(available[-1])
    wanted = set(epochs_of_interest)

    groups: dict = {}
    for r in live:
        # summaries track the test split; single-split (synthetic) records
        # have only a train series, so fall back per record
        splits = {row[1] for row in r.rows}
        pick = "test" if "test" in splits else "train"
        for epoch, split, metric, value in r.rows:
            if epoch in wanted and split == pick:
                groups.setdefault((r.optimizer, r.dataset, epoch, metric), []).append(value)

    rows = []
    for (opt, ds, epoch, metric), values in sorted(groups.items()):
        arr = np.asarray(values)
        std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
        rows.append(SummaryRow(optimizer=opt, dataset=ds, epoch=epoch, metric=metric,
                               mean=float(arr.mean()), std=std, n=arr.size))

    flagged = []
    by_cell: dict = {}
    for row in rows:
        by_cell.setdefault((row.dataset, row.epoch, row.metric), []).append(row)
    for cell_rows in by_cell.values():
        pick = max if cell_rows[0].metric == "accuracy" else min
        best = pick(cell_rows, key=lambda r: r.mean)
        for row in cell_rows:
            flagged.append(replace(row, best=row is best))
    flagged.sort(key=lambda r: (r.dataset, r.metric, r.epoch, r.optimizer))
    return flagged


def format_summary(rows: Sequence[SummaryRow]) -> str:
    lines = [f"{'dataset':<28} {'metric':<9} {'epoch':>5} {'optimizer':<12} "
             f"{'mean':>12} {'std':>10} {'n':>3}"]
    for r in rows:
        mark = " *" if r.best else "  "
        note = " (n=1)" if r.n == 1 else ""
        lines.append(f"{r.dataset:<28} {r.metric:<9} {r.epoch:>5} {r.optimizer:<12} "
                     f"{r.mean:>12.6f} {r.std:>10.6f} {r.n:>3}{mark}{note}")
    return "\n".join(lines) + "\n"


def metrics_csv_text(record: RunRecord) -> str:
    """Bit-exact CSV body for one run (LF endings, 17 significant digits)."""
    lines = [CSV_HEADER]
    for epoch, split, metric, value in record.rows:
        lines.append(f"{record.run_id},{record.optimizer},{record.dataset},"
                     f"{record.seed},{epoch},{split},{metric},{value:.17g}")
    return "\n".join(lines) + "\n"


def write_metrics_csv(record: RunRecord, directory) -> Path:
    """Write ``{run_id}.csv`` plus a ``{run_id}.meta.json`` protocol echo."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{record.run_id}.csv"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(metrics_csv_text(record))
    meta = dict(record.metadata, run_id=record.run_id, seed=record.seed,
                diverged=record.diverged, diverged_epoch=record.diverged_epoch)
    with open(directory / f"{record.run_id}.meta.json", "w", encoding="utf-8",
              newline="\n") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def compare_suite(targets: Sequence, optimizers: Sequence, seeds: Sequence[int], *,
                  model: ModelSpec = ModelSpec(hidden=(8, 10)), loss: str = "mse",
                  epochs: int = 200, batch_size: Optional[int] = None,
                  split_ratio: float = 0.8, output_dir=None):
    """Cross product of targets x optimizers, one run per seed.

    ``targets`` mixes dataset refs (fixture names / path dicts) and problem
    dicts; ``optimizers`` is a sequence of OptimizerConfig or (label, config)
    pairs. Returns ``(records, summary_rows)`` and, when ``output_dir`` is
    given, writes one CSV per run plus ``summary.txt``.
    """
    labeled = []
    for opt in optimizers:
        if isinstance(opt, tuple):
            labeled.append(opt)
        else:
            labeled.append((opt.kind, opt))
    labels = [lab for lab, _ in labeled]
    if len(set(labels)) != len(labels):
        raise InvalidConfig(f"duplicate optimizer labels in suite: {labels}")

    records = []
    for target in targets:
        is_problem = isinstance(target, dict) and "kind" in target
        for label, opt in labeled:
            config = ExperimentConfig(
                dataset=None if is_problem else target,
                problem=target if is_problem else None,
                model=model, loss=loss, optimizer=opt, optimizer_label=label,
                epochs=epochs, batch_size=batch_size, seeds=tuple(seeds),
                split_ratio=split_ratio)
            records.extend(run_experiment(config))
    summary = summarize(records)
    if output_dir is not None:
        for record in records:
            write_metrics_csv(record, output_dir)
        with open(Path(output_dir) / "summary.txt", "w", encoding="utf-8",
                  newline="\n") as fh:
            fh.write(format_summary(summary))
    return records, summary
