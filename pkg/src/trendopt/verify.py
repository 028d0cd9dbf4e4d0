"""Executable checks of the trend-optimizer bias-correction algebra.

Zero-initialized exponential averages are biased toward zero early in a run.
Under the stationarity assumption E(g_t) = E(g) for all t, the level/trend
recurrences of the ``tom`` optimizer satisfy, in expectation,

    E(b_t) = (1 - beta2) * beta2^(t-1) * E(g)
    E(l_t) = [ beta1*(1-beta2) * (beta2^(t-1) - beta1^(t-1)) / (beta2 - beta1)
               + (1 - beta1^t) ] * E(g)

so the forecast l_t + b_t carries the multiplicative bias factor
``level_bias_factor + trend_bias_factor``. For beta1 = 0.9, beta2 = 0.99 this
exact factor is commonly approximated by ``1 - (beta1*beta2)^t``, which is
what ``tom``'s update divides by; ``approx_gap`` measures how good that
approximation actually is (it is a few percent at mid-range t, see the
frozen regression values in the test-suite).

The telescoped fraction above is 0/0 at beta1 == beta2;
``level_bias_factor_equal_betas`` provides the analytic limit
``(1-beta)*(t-1)*beta^(t-1) + (1-beta^t)``.

``constant_gradient_unroll`` is the independent oracle: a direct scalar unroll
of the recurrences with a literally constant gradient, under which every
expectation identity above holds exactly. ``monte_carlo_forecast_bias`` checks
the stochastic version with i.i.d. normal gradient draws; random numbers come
from numpy's ``default_rng`` (PCG64), so results replay bit-identically for a
given seed. (To partition trials across workers, give worker w the generator
``default_rng([seed, w])`` and the same per-worker trial count.)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DegenerateBetas, InvalidParam

DEFAULT_T_GRID = (1, 5, 10, 50, 100)


def _check_beta(name: str, value: float) -> float:
    if not 0.0 < value < 1.0:
        raise InvalidParam(f"{name} must be strictly inside (0, 1), got {value}")
    return float(value)


def _check_t(t: int) -> int:
    if t < 1:
        raise InvalidParam(f"t must be >= 1, got {t}")
    return int(t)


def trend_bias_factor(beta2: float, t: int) -> float:
    """Multiplicative bias of the trend component: ``(1-beta2) * beta2^(t-1)``."""
    _check_beta("beta2", beta2)
    _check_t(t)
    return (1.0 - beta2) * beta2 ** (t - 1)


def level_bias_factor(beta1: float, beta2: float, t: int) -> float:
    """Multiplicative bias of the level component (telescoped closed form).

    Raises ``DegenerateBetas`` when beta1 == beta2; use
    ``level_bias_factor_equal_betas`` for that limit.
    """
    _check_beta("beta1", beta1)
    _check_beta("beta2", beta2)
    _check_t(t)
    if beta1 == beta2:
        raise DegenerateBetas(
            "beta1 == beta2 telescopes to 0/0; use level_bias_factor_equal_betas")
    tele = (beta2 ** (t - 1) - beta1 ** (t - 1)) / (beta2 - beta1)
    return beta1 * (1.0 - beta2) * tele + (1.0 - beta1 ** t)


def level_bias_factor_equal_betas(beta: float, t: int) -> float:
    """Limit of ``level_bias_factor`` as beta2 -> beta1 = beta."""
    _check_beta("beta", beta)
    _check_t(t)
    return (1.0 - beta) * (t - 1) * beta ** (t - 1) + (1.0 - beta ** t)


def forecast_bias_factor(beta1: float, beta2: float, t: int) -> float:
    """Exact bias factor of the forecast ``l_t + b_t``: level + trend factors."""
    return level_bias_factor(beta1, beta2, t) + trend_bias_factor(beta2, t)


def approx_bias_factor(beta1: float, beta2: float, t: int) -> float:
    """The correction ``tom`` actually divides by: ``1 - (beta1*beta2)^t``."""
    _check_beta("beta1", beta1)
    _check_beta("beta2", beta2)
    _check_t(t)
    return 1.0 - (beta1 * beta2) ** t


def approx_gap(beta1: float, beta2: float, t: int) -> float:
    """Relative error of the approximate factor against the exact one,
    ``(exact - approx) / exact``."""
    exact = forecast_bias_factor(beta1, beta2, t)
    return (exact - approx_bias_factor(beta1, beta2, t)) / exact


@dataclass(frozen=True)
class BiasFactors:
    """All four factors at one step count."""

    t: int
    trend_factor: float
    level_factor: float
    forecast_factor: float
    approx_factor: float


def bias_factors(beta1: float, beta2: float, t: int) -> BiasFactors:
    lf = level_bias_factor(beta1, beta2, t)
    tf = trend_bias_factor(beta2, t)
    return BiasFactors(t=int(t), trend_factor=tf, level_factor=lf,
                       forecast_factor=lf + tf,
                       approx_factor=approx_bias_factor(beta1, beta2, t))


def constant_gradient_unroll(beta1: float, beta2: float, c: float, T: int):
    """Scalar unroll of the level/trend recurrences with g_t = c, g_0 = 0.

    Returns ``(l_seq, b_seq, f_seq)`` for t = 1..T. Written as plain scalar
    arithmetic, independent of the optimizer kernels, so it can serve as the
    oracle for the closed-form factors.
    """
    if T < 1:
        raise InvalidParam(f"T must be >= 1, got {T}")
    l_seq = np.empty(T)
    b_seq = np.empty(T)
    lev = 0.0
    tr = 0.0
    g_prev = 0.0
    g = float(c)
    for i in range(T):
        lev = beta1 * (lev + tr) + (1.0 - beta1) * g
        tr = beta2 * tr + (1.0 - beta2) * (g - g_prev)
        g_prev = g
        l_seq[i] = lev
        b_seq[i] = tr
    return l_seq, b_seq, l_seq + b_seq


def monte_carlo_forecast_bias(beta1: float, beta2: float, mean: float, stddev: float,
                              t: int, trials: int, seed: int):
    """Empirical check that the exact forecast factor is unbiased.

    Draws ``trials`` independent gradient streams g_1..g_t i.i.d. from
    Normal(mean, stddev^2), runs the level/trend recurrences on each, and
    returns ``(empirical_ratio, std_error)`` where the ratio is
    mean(f_t) / (forecast_bias_factor * mean). Expectation is linear in the
    gradients, so the exact ratio is 1.
    """
    _check_beta("beta1", beta1)
    _check_beta("beta2", beta2)
    _check_t(t)
    if trials < 1000:
        raise InvalidParam(f"trials must be >= 1000, got {trials}")
    if stddev < 0:
        raise InvalidParam(f"stddev must be >= 0, got {stddev}")
    if mean == 0:
        raise InvalidParam("mean must be nonzero (the ratio divides by it)")
    rng = np.random.default_rng(seed)
    gmat = rng.normal(loc=mean, scale=stddev, size=(trials, t))
    f_t = kernels.forecast_paths(gmat, float(beta1), float(beta2))
    denom = forecast_bias_factor(beta1, beta2, t) * mean
    ratios = f_t / denom
    std_error = float(np.std(ratios, ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
    return float(np.mean(ratios)), std_error


def format_bias_report(beta1: float, beta2: float, t_values=DEFAULT_T_GRID,
                       mc: dict | None = None) -> str:
    """Plain-text factor table (plus an optional Monte Carlo section)."""
    lines = [
        f"bias factors for beta1={beta1}, beta2={beta2}",
        f"{'t':>6}  {'trend':>12}  {'level':>12}  {'forecast':>12}  {'approx':>12}  {'rel gap':>10}",
    ]
    for t in t_values:
        f = bias_factors(beta1, beta2, t)
        gap = (f.forecast_factor - f.approx_factor) / f.forecast_factor
        lines.append(
            f"{t:>6}  {f.trend_factor:>12.6e}  {f.level_factor:>12.6f}  "
            f"{f.forecast_factor:>12.6f}  {f.approx_factor:>12.6f}  {gap:>10.4%}")
    if mc is not None:
        ratio, se = monte_carlo_forecast_bias(
            beta1, beta2, mc.get("mean", 1.0), mc.get("stddev", 0.5),
            mc.get("t", 20), mc.get("trials", 100_000), mc.get("seed", 0))
        lines.append("")
        lines.append(
            f"monte carlo: t={mc.get('t', 20)} trials={mc.get('trials', 100_000)} "
            f"N({mc.get('mean', 1.0)}, {mc.get('stddev', 0.5)}^2) seed={mc.get('seed', 0)}")
        lines.append(
            f"  mean(f_t)/(factor*mean) = {ratio:.6f}  (std error {se:.2e}, "
            f"|ratio-1| = {abs(ratio - 1):.2e})")
    return "\n".join(lines) + "\n"
