"""trendopt: trend-aware adaptive gradient optimization and benchmarking.

Seven first-order optimizers (sgd, sgdm, adagrad, rmsprop, adam, amsgrad and
the trend-augmented ``tom``) behind one stepping interface, an exponential
smoothing toolkit, executable verification of the trend/level bias-correction
algebra, a small dense network with a finite-difference oracle, and a
deterministic experiment harness with a CLI. Hot numeric loops run on numba
by default with a bit-identical pure-numpy fallback (set
``TRENDOPT_DISABLE_NUMBA=1`` to force the fallback).
"""

from .core import dot, elementwise
from .data import (Dataset, SplitDataset, load_csv, load_fixture, make_blobs,
                   make_quadratic, make_rosenbrock, split_normalize)
from .harness import (ExperimentConfig, ModelSpec, RunRecord, SummaryRow,
                      compare_suite, format_summary, metrics_csv_text,
                      run_experiment, summarize, write_metrics_csv)
from .kernels import BACKEND
from .model import (Batch, Gradients, Mlp, backward, finite_diff, forward,
                    gradient_check, init_model, loss)
from .optim import (KINDS, OptimizerConfig, OptimizerState, StepReport,
                    adagrad_step, adam_step, amsgrad_step, init_state,
                    rmsprop_step, sgd_step, sgdm_step, step, tom_step)
from .smoothing import (SmoothingParams, holt, holt_winters_additive,
                        ses_error_form, ses_levels)
from .verify import (BiasFactors, approx_bias_factor, approx_gap, bias_factors,
                     constant_gradient_unroll, forecast_bias_factor,
                     format_bias_report, level_bias_factor,
                     level_bias_factor_equal_betas, monte_carlo_forecast_bias,
                     trend_bias_factor)

__version__ = "0.1.0"
