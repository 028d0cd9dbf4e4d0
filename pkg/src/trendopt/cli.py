"""Command-line entry point.

Subcommands:

* ``train``       -- run one experiment config (JSON) and write per-run metric CSVs
* ``suite``       -- cross-product comparison of targets x optimizers (JSON config)
* ``verify-bias`` -- print the bias-correction factor table and Monte Carlo check
* ``forecast``    -- exponential-smoothing demo over a CSV column
* ``gradcheck``   -- backprop vs central finite differences over seeded cases

Exit codes: 0 success, 1 usage/config error, 2 data error, 3 divergence detected.
Config files are JSON with the exact key sets documented in the README;
unknown keys are rejected.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import smoothing, verify
from .data import load_csv, make_blobs
from .errors import (DivergenceDetected, InvalidConfig, MissingColumn, ParseError,
                     TooFewRows, TrendOptError)
from .harness import (ExperimentConfig, ModelSpec, compare_suite, format_summary,
                      run_experiment, summarize, write_metrics_csv)
from .model import Batch, gradient_check, init_model, min_preactivation_magnitude
from .optim import OptimizerConfig

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_DIVERGED = 3

_DATA_ERRORS = (FileNotFoundError, ParseError, MissingColumn, TooFewRows)


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _cmd_train(args) -> int:
    config = ExperimentConfig.from_dict(_load_json(args.config))
    out_dir = args.output_dir or config.output_dir or "runs"
    records = run_experiment(config)
    for record in records:
        write_metrics_csv(record, out_dir)
    diverged = [r for r in records if r.diverged]
    for r in diverged:
        print(f"DIVERGED: {r.run_id} at epoch {r.diverged_epoch}", file=sys.stderr)
    if len(diverged) < len(records):
        text = format_summary(summarize(records))
        print(text, end="")
        with open(Path(out_dir) / "summary.txt", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    print(f"wrote {len(records)} run CSV(s) to {out_dir}")
    return EXIT_DIVERGED if diverged else EXIT_OK


def _cmd_suite(args) -> int:
    raw = _load_json(args.config)
    allowed = {"targets", "optimizers", "seeds", "model", "loss", "epochs",
               "batch_size", "split_ratio", "output_dir"}
    unknown = set(raw) - allowed
    if unknown:
        raise InvalidConfig(f"unknown suite keys: {sorted(unknown)}")
    for key in ("targets", "optimizers", "seeds"):
        if key not in raw or not raw[key]:
            raise InvalidConfig(f"suite config needs a nonempty {key!r}")
    optimizers = []
    for entry in raw["optimizers"]:
        entry = dict(entry)
        label = entry.pop("label", None)
        cfg = OptimizerConfig(**entry)
        optimizers.append((label or cfg.kind, cfg))
    model = ModelSpec(**raw.get("model", {"hidden": [8, 10]}))
    batch_size = raw.get("batch_size")
    if isinstance(batch_size, str):
        if batch_size.lower() != "full":
            raise InvalidConfig(f'batch_size must be an integer or "full", got {batch_size!r}')
        batch_size = None
    out_dir = args.output_dir or raw.get("output_dir") or "suite-runs"
    records, summary = compare_suite(
        raw["targets"], optimizers, raw["seeds"], model=model,
        loss=raw.get("loss", "mse"), epochs=raw.get("epochs", 200),
        batch_size=batch_size, split_ratio=raw.get("split_ratio", 0.8),
        output_dir=out_dir)
    print(format_summary(summary), end="")
    diverged = [r for r in records if r.diverged]
    for r in diverged:
        print(f"DIVERGED: {r.run_id} at epoch {r.diverged_epoch}", file=sys.stderr)
    print(f"wrote {len(records)} run CSV(s) to {out_dir}")
    return EXIT_DIVERGED if diverged else EXIT_OK


def _cmd_verify_bias(args) -> int:
    t_values = tuple(int(t) for t in args.t.split(","))
    mc = None
    if args.mc_trials > 0:
        mc = {"trials": args.mc_trials, "t": args.mc_t, "mean": args.mc_mean,
              "stddev": args.mc_stddev, "seed": args.seed}
    text = verify.format_bias_report(args.beta1, args.beta2, t_values, mc=mc)
    print(text, end="")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return EXIT_OK


def _cmd_forecast(args) -> int:
    ds = load_csv(args.csv, args.column)
    y = ds.targets
    if args.method == "ses":
        levels = smoothing.ses_levels(y, args.alpha, float(y[0]))
        trends = np.zeros_like(levels)
        seasonals = np.zeros_like(levels)
        forecasts = levels
    elif args.method == "holt":
        levels, trends, forecasts = smoothing.holt(y, args.alpha, args.beta)
        seasonals = np.zeros_like(levels)
    else:
        params = smoothing.SmoothingParams(alpha=args.alpha, beta=args.beta,
                                           gamma=args.gamma, cycle=args.cycle)
        levels, trends, seasonals, forecasts = smoothing.holt_winters_additive(y, params)
    err = forecasts[:-1] - y[1:]
    print(f"{args.method} on {args.csv}:{args.column} "
          f"(n={len(y)}, alpha={args.alpha}): one-step MSE over last half = "
          f"{float(np.mean(err[len(err)//2:] ** 2)):.6g}")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("t,y,level,trend,seasonal,forecast_next\n")
            for i in range(len(y)):
                fh.write(f"{i+1},{y[i]:.17g},{levels[i]:.17g},{trends[i]:.17g},"
                         f"{seasonals[i]:.17g},{forecasts[i]:.17g}\n")
        print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_gradcheck(args) -> int:
    worst = {}
    for loss_kind in ("mse", "cross_entropy"):
        worst_rel = 0.0
        done = 0
        case = 0
        while done < args.cases:
            seed = 1000 * (1 if loss_kind == "mse" else 2) + case
            case += 1
            rng = np.random.default_rng(seed)
            if loss_kind == "mse":
                model = init_model([5, 8, 10, 1], seed)
                batch = Batch(rng.normal(size=(12, 5)), rng.normal(size=12))
            else:
                blobs = make_blobs(n=12, k=3, dim=4, seed=seed)
                model = init_model([4, 8, 10, 3], seed)
                batch = Batch(blobs.features, blobs.targets)
            # skip cases that straddle a ReLU kink: central differences are
            # meaningless within ~h of the fold
            if min_preactivation_magnitude(model, batch) < 100.0 * args.h:
                continue
            rel, _ = gradient_check(model, batch, loss_kind, h=args.h)
            worst_rel = max(worst_rel, rel)
            done += 1
        worst[loss_kind] = worst_rel
        print(f"gradcheck {loss_kind}: {args.cases} cases, max relative error = {worst_rel:.3e}")
    ok = all(v <= args.tolerance for v in worst.values())
    print("gradcheck:", "OK" if ok else f"FAILED (tolerance {args.tolerance:g})")
    return EXIT_OK if ok else EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trendopt", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="run one experiment config and emit metric CSVs")
    p.add_argument("--config", required=True, help="experiment config (JSON)")
    p.add_argument("--output-dir", default=None)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("suite", help="cross-product optimizer comparison")
    p.add_argument("--config", required=True, help="suite config (JSON)")
    p.add_argument("--output-dir", default=None)
    p.set_defaults(func=_cmd_suite)

    p = sub.add_parser("verify-bias", help="bias-correction factor report")
    p.add_argument("--beta1", type=float, default=0.9)
    p.add_argument("--beta2", type=float, default=0.99)
    p.add_argument("--t", default="1,5,10,50,100", help="comma-separated step counts")
    p.add_argument("--mc-trials", type=int, default=100_000,
                   help="Monte Carlo trials (0 disables the check)")
    p.add_argument("--mc-t", type=int, default=20)
    p.add_argument("--mc-mean", type=float, default=1.0)
    p.add_argument("--mc-stddev", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="also write the report to this file")
    p.set_defaults(func=_cmd_verify_bias)

    p = sub.add_parser("forecast", help="exponential smoothing over a CSV column")
    p.add_argument("--csv", required=True)
    p.add_argument("--column", required=True, help="column to forecast")
    p.add_argument("--method", choices=("ses", "holt", "holt-winters"), default="holt")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--cycle", type=int, default=12)
    p.add_argument("--out", default=None, help="write components CSV here")
    p.set_defaults(func=_cmd_forecast)

    p = sub.add_parser("gradcheck", help="backprop vs finite differences")
    p.add_argument("--cases", type=int, default=20)
    p.add_argument("--h", type=float, default=1e-6)
    p.add_argument("--tolerance", type=float, default=1e-5)
    p.set_defaults(func=_cmd_gradcheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except _DATA_ERRORS as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DivergenceDetected as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (InvalidConfig, TrendOptError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
