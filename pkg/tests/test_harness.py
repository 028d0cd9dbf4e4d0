import numpy as np
import pytest

from trendopt.errors import EmptyInput, InvalidConfig
from trendopt.harness import (ExperimentConfig, ModelSpec, compare_suite,
                              format_summary, metrics_csv_text, run_experiment,
                              summarize, write_metrics_csv, CSV_HEADER)
from trendopt.optim import OptimizerConfig


def tiny_csv(tmp_path, n=24, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, 3))
    y = x @ [1.0, -2.0, 0.5] + 0.1 * rng.normal(size=n)
    p = tmp_path / "tiny.csv"
    lines = ["f1,f2,f3,y"] + [f"{a:.10g},{b:.10g},{c:.10g},{t:.10g}"
                              for (a, b, c), t in zip(x, y)]
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return {"path": str(p), "target_column": "y"}


def tiny_config(tmp_path, **over):
    base = dict(dataset=tiny_csv(tmp_path), model=ModelSpec(hidden=(4,)),
                loss="mse", optimizer=OptimizerConfig("adam"), epochs=3,
                batch_size=None, seeds=(7,), split_ratio=0.75)
    base.update(over)
    return ExperimentConfig(**base)


# --- config validation ----------------------------------------------------------

def test_exactly_one_of_dataset_or_problem():
    with pytest.raises(InvalidConfig):
        ExperimentConfig(dataset="boston", problem={"kind": "rosenbrock", "dim": 2})
    with pytest.raises(InvalidConfig):
        ExperimentConfig()


def test_from_dict_rejects_unknown_keys():
    with pytest.raises(InvalidConfig):
        ExperimentConfig.from_dict({"dataset": "boston", "learning_rate": 0.1})
    with pytest.raises(InvalidConfig):
        ExperimentConfig.from_dict({"dataset": "boston",
                                    "optimizer": {"kind": "adam", "foo": 1}})
    with pytest.raises(InvalidConfig):
        ExperimentConfig.from_dict({"dataset": "boston",
                                    "model": {"hidden": [4], "dropout": 0.5}})


def test_from_dict_full_batch_spelling():
    cfg = ExperimentConfig.from_dict({"dataset": "diabetes", "batch_size": "full",
                                      "epochs": 1, "seeds": [1]})
    assert cfg.batch_size is None
    with pytest.raises(InvalidConfig):
        ExperimentConfig.from_dict({"dataset": "diabetes", "batch_size": "huge"})


def test_problem_key_validation():
    with pytest.raises(InvalidConfig):
        ExperimentConfig(problem={"kind": "quadratic", "dim": 3, "rows": 5})
    with pytest.raises(InvalidConfig):
        ExperimentConfig(problem={"kind": "simplex", "dim": 3})


def test_metadata_echoes_protocol_exactly():
    cfg = ExperimentConfig(dataset="diabetes", epochs=5, seeds=(1, 2),
                           optimizer=OptimizerConfig("tom", alpha=0.01,
                                                     bias_correction=False))
    meta = cfg.metadata()
    assert meta["optimizer"] == {
        "kind": "tom", "alpha": 0.01, "beta1": 0.9, "beta2": 0.99, "beta3": 0.999,
        "epsilon": 1e-8, "momentum_beta": 0.9, "initial_accumulator": 0.1,
        "bias_correction": False,
    }
    assert meta["epochs"] == 5 and meta["seeds"] == [1, 2]
    assert meta["batch_size"] == "full"


# --- runs -----------------------------------------------------------------------

def test_single_seed_single_epoch_row_count(tmp_path):
    cfg = tiny_config(tmp_path, epochs=1)
    records = run_experiment(cfg)
    assert len(records) == 1
    assert len(records[0].rows) == 2  # train + test mse for the one epoch
    assert {r[1] for r in records[0].rows} == {"train", "test"}


def test_rows_per_record_formula(tmp_path):
    cfg = tiny_config(tmp_path, epochs=3, seeds=(1, 2))
    records = run_experiment(cfg)
    assert len(records) == 2
    for rec in records:
        assert len(rec.rows) == 3 * 2
        epochs = sorted({row[0] for row in rec.rows})
        assert epochs == [1, 2, 3]  # contiguous from 1


def test_metric_completeness_no_missing_cells(tmp_path):
    cfg = tiny_config(tmp_path, epochs=4, seeds=(3,))
    rec = run_experiment(cfg)[0]
    cells = {(row[0], row[1]) for row in rec.rows}
    assert cells == {(e, s) for e in range(1, 5) for s in ("train", "test")}


def test_run_is_deterministic_bytes(tmp_path):
    cfg = tiny_config(tmp_path, epochs=2, seeds=(5,))
    a = metrics_csv_text(run_experiment(cfg)[0])
    b = metrics_csv_text(run_experiment(cfg)[0])
    assert a == b
    path = write_metrics_csv(run_experiment(cfg)[0], tmp_path / "runs")
    assert path.read_bytes() == a.encode()
    assert b"\r" not in path.read_bytes()


def test_metadata_json_written_next_to_csv(tmp_path):
    import json
    cfg = tiny_config(tmp_path, epochs=1)
    rec = run_experiment(cfg)[0]
    write_metrics_csv(rec, tmp_path / "out")
    meta_path = tmp_path / "out" / f"{rec.run_id}.meta.json"
    meta = json.loads(meta_path.read_text())
    assert meta["optimizer"]["kind"] == "adam"
    assert meta["optimizer"]["beta2"] == 0.999  # resolved, no silent defaults
    assert meta["seed"] == 7 and meta["diverged"] is False


def test_csv_schema(tmp_path):
    cfg = tiny_config(tmp_path, epochs=1)
    text = metrics_csv_text(run_experiment(cfg)[0])
    lines = text.strip().split("\n")
    assert lines[0] == CSV_HEADER
    first = lines[1].split(",")
    assert len(first) == 8
    assert first[1] == "adam"
    assert first[4] == "1" and first[5] == "train" and first[6] == "mse"
    float(first[7])  # 17-significant-digit value parses back


def test_minibatch_runs_and_differs_from_full(tmp_path):
    full = tiny_config(tmp_path, epochs=3)
    mini = tiny_config(tmp_path, epochs=3, batch_size=8)
    a = run_experiment(full)[0]
    b = run_experiment(mini)[0]
    va = [r[3] for r in a.rows if r[1] == "train"]
    vb = [r[3] for r in b.rows if r[1] == "train"]
    assert va != vb  # more steps with shuffled batches changes the trajectory


def test_classification_run_records_loss_and_accuracy():
    cfg = ExperimentConfig(problem={"kind": "blobs", "n": 60, "k": 3, "dim": 2,
                                    "seed": 4},
                           model=ModelSpec(hidden=(8,)), loss="cross_entropy",
                           epochs=2, seeds=(1,))
    rec = run_experiment(cfg)[0]
    metrics = {row[2] for row in rec.rows}
    assert metrics == {"loss", "accuracy"}
    assert len(rec.rows) == 2 * 2 * 2  # epochs x splits x metrics


def test_synthetic_problem_run():
    cfg = ExperimentConfig(problem={"kind": "quadratic", "dim": 4,
                                    "condition_number": 10.0, "seed": 2},
                           epochs=5, seeds=(1, 2))
    records = run_experiment(cfg)
    assert len(records) == 2
    for rec in records:
        assert all(row[1] == "train" and row[2] == "loss" for row in rec.rows)
        values = [row[3] for row in rec.rows]
        assert values[-1] < values[0]  # descent on a convex quadratic


@pytest.mark.filterwarnings("ignore:overflow")
def test_divergence_flagged():
    # sgd with a huge step on rosenbrock blows up to non-finite loss quickly
    cfg = ExperimentConfig(problem={"kind": "rosenbrock", "dim": 4},
                           optimizer=OptimizerConfig("sgd", alpha=1e3),
                           epochs=50, seeds=(1,))
    rec = run_experiment(cfg)[0]
    assert rec.diverged
    assert rec.diverged_epoch is not None
    assert len(rec.rows) < 50
    for row in rec.rows:
        assert np.isfinite(row[3])


# --- summaries --------------------------------------------------------------------

def test_summarize_single_seed_std_zero(tmp_path):
    cfg = tiny_config(tmp_path, epochs=2, seeds=(9,))
    rows = summarize(run_experiment(cfg), epochs_of_interest=[2])
    assert all(r.std == 0.0 and r.n == 1 for r in rows)
    assert "(n=1)" in format_summary(rows)


def test_summarize_two_seed_hand_values():
    # two seeds with final values 0.2 and 0.4 -> mean 0.3, std ~0.1414
    from trendopt.harness import RunRecord
    records = [RunRecord(run_id=f"r{s}", optimizer="adam", dataset="d", seed=s,
                         rows=[(1, "test", "mse", v)], metadata={})
               for s, v in [(1, 0.2), (2, 0.4)]]
    rows = summarize(records, epochs_of_interest=[1])
    assert rows[0].mean == pytest.approx(0.3)
    assert rows[0].std == pytest.approx(0.14142135623730953, rel=1e-12)
    assert rows[0].n == 2


def test_summarize_default_epoch_grid_regression(tmp_path):
    cfg = tiny_config(tmp_path, epochs=200, seeds=(1,),
                      model=ModelSpec(hidden=()))
    rows = summarize(run_experiment(cfg))
    assert [r.epoch for r in rows] == [50, 100, 150, 200]


def test_summarize_empty_inputs():
    with pytest.raises(EmptyInput):
        summarize([])


def test_summarize_excludes_diverged():
    from trendopt.harness import RunRecord
    good = RunRecord(run_id="g", optimizer="adam", dataset="d", seed=1,
                     rows=[(1, "test", "mse", 0.5)], metadata={})
    bad = RunRecord(run_id="b", optimizer="adam", dataset="d", seed=2,
                    rows=[(1, "test", "mse", 123.0)], diverged=True, metadata={})
    rows = summarize([good, bad], epochs_of_interest=[1])
    assert rows[0].n == 1 and rows[0].mean == 0.5


# --- compare_suite -----------------------------------------------------------------

def test_compare_suite_cardinality_and_best_flag(tmp_path):
    records, summary = compare_suite(
        targets=[{"kind": "quadratic", "dim": 10, "condition_number": 100.0,
                  "seed": 3}],
        optimizers=[OptimizerConfig("adam"), OptimizerConfig("tom")],
        seeds=(1, 2, 3, 4, 5), epochs=40, output_dir=tmp_path / "suite")
    assert len(records) == 10  # 1 problem x 2 optimizers x 5 seeds
    final = [r for r in summary if r.epoch == 40]
    assert len(final) == 2
    assert sum(r.best for r in final) == 1
    assert (tmp_path / "suite" / "summary.txt").exists()
    assert len(list((tmp_path / "suite").glob("*.csv"))) == 10


def test_compare_suite_tom_beta2_one_matches_adam_end_to_end():
    records, _ = compare_suite(
        targets=[{"kind": "quadratic", "dim": 6, "condition_number": 50.0,
                  "seed": 1}],
        optimizers=[("adam", OptimizerConfig("adam")),
                    ("tom-degenerate", OptimizerConfig("tom", beta2=1.0))],
        seeds=(1, 2), epochs=60)
    by_label = {}
    for rec in records:
        by_label.setdefault(rec.optimizer, []).append(
            [row[3] for row in rec.rows])
    for a_curve, t_curve in zip(by_label["adam"], by_label["tom-degenerate"]):
        assert np.max(np.abs(np.array(a_curve) - np.array(t_curve))) <= 1e-12


def test_compare_suite_rejects_duplicate_labels():
    with pytest.raises(InvalidConfig):
        compare_suite(targets=[{"kind": "rosenbrock", "dim": 2}],
                      optimizers=[OptimizerConfig("adam"), OptimizerConfig("adam")],
                      seeds=(1,), epochs=1)


def test_compare_suite_mixed_targets_summarizes_both(tmp_path):
    records, summary = compare_suite(
        targets=[{"kind": "quadratic", "dim": 3, "condition_number": 5.0, "seed": 1},
                 tiny_csv(tmp_path)],
        optimizers=[OptimizerConfig("adam")], seeds=(1,), epochs=2,
        model=ModelSpec(hidden=(4,)))
    datasets = {row.dataset for row in summary}
    assert len(datasets) == 2  # both the synthetic problem and the csv dataset


def test_blobs_sanity_adam_reaches_high_train_accuracy():
    # frozen regression: well-separated clusters are learnable to >= 99% train
    # accuracy within 500 full-batch adam steps
    cfg = ExperimentConfig(problem={"kind": "blobs", "n": 120, "k": 3, "dim": 2,
                                    "seed": 4},
                           model=ModelSpec(hidden=(8,)), loss="cross_entropy",
                           optimizer=OptimizerConfig("adam"), epochs=500, seeds=(1,))
    rec = run_experiment(cfg)[0]
    final_acc = [row[3] for row in rec.rows
                 if row[0] == 500 and row[1] == "train" and row[2] == "accuracy"][0]
    assert final_acc >= 0.99
