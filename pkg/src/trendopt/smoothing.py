"""Exponential smoothing: single, Holt linear trend, and Holt-Winters additive.

Conventions (deliberate, and mirrored throughout this package): the smoothing
constant weights the *past* estimate and ``1 - constant`` weights the new
observation,

    l_t = alpha * l_{t-1} + (1 - alpha) * y_t

which is the mirror image of the textbook form ``l_t = alpha*y_t + (1-alpha)*l_{t-1}``
(swap ``alpha`` for ``1 - alpha`` to translate). Series are indexed from t = 1
and all forecasts are one step ahead.

Holt's trend smooths differences of successive *levels*; the ``tom`` optimizer
(see ``optim``) adapts the same recurrence but differences successive raw
gradients instead. Keeping both here makes that divergence easy to test.

Default initialization (callers may override):

* Holt: ``l0 = y_1``, ``b0 = y_2 - y_1`` (0 for a length-1 series).
* Holt-Winters: ``l0`` = mean of the first cycle, ``b0`` = (mean of second
  cycle - mean of first cycle) / cycle, ``s0_i = y_i -`` mean of first cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .core import as_vector
from .errors import EmptySeries, InvalidParam, SeriesTooShort


def _check_series(values) -> np.ndarray:
    y = as_vector(values)
    if y.shape[0] == 0:
        raise EmptySeries("series must contain at least one value")
    if not np.all(np.isfinite(y)):
        raise InvalidParam("series values must be finite")
    return y


def _check_constant(name: str, value: float) -> float:
    if not 0.0 < value < 1.0:
        raise InvalidParam(f"{name} must be strictly inside (0, 1), got {value}")
    return float(value)


@dataclass(frozen=True)
class SmoothingParams:
    """Constants and optional initial components for Holt-Winters."""

    alpha: float
    beta: float
    gamma: float
    cycle: int
    l0: Optional[float] = None
    b0: Optional[float] = None
    s0: Optional[Sequence[float]] = None

    def __post_init__(self):
        _check_constant("alpha", self.alpha)
        _check_constant("beta", self.beta)
        _check_constant("gamma", self.gamma)
        if self.cycle < 2:
            raise InvalidParam(f"cycle must be >= 2, got {self.cycle}")
        if self.s0 is not None and len(self.s0) != self.cycle:
            raise InvalidParam(f"s0 must have length cycle={self.cycle}, got {len(self.s0)}")


def ses_levels(series, alpha: float, l0: float) -> np.ndarray:
    """Single-smoothing levels l_1..l_n; the forecast of y_{t+1} is l_t."""
    y = _check_series(series)
    _check_constant("alpha", alpha)
    return kernels.ses_scan(y, float(alpha), float(l0))


def ses_error_form(series, alpha: float, f1: float) -> np.ndarray:
    """Single smoothing in error-correction form.

    Runs ``f_{t+1} = f_t + (1 - alpha) * (y_t - f_t)`` and returns the
    forecasts ``[f_2, ..., f_{n+1}]``. Algebraically identical to
    ``ses_levels`` when seeded with ``f1 = l0``.
    """
    y = _check_series(series)
    _check_constant("alpha", alpha)
    n = y.shape[0]
    out = np.empty(n)
    f = float(f1)
    one_minus = 1.0 - alpha
    for i in range(n):
        f = f + one_minus * (y[i] - f)
        out[i] = f
    return out


def holt(series, alpha: float, beta: float,
         l0: Optional[float] = None, b0: Optional[float] = None):
    """Holt linear-trend smoothing; returns ``(levels, trends, forecasts)``.

    ``forecasts[t-1] = l_t + b_t`` is the forecast of ``y_{t+1}``.
    """
    y = _check_series(series)
    _check_constant("alpha", alpha)
    _check_constant("beta", beta)
    if l0 is None:
        l0 = float(y[0])
    if b0 is None:
        b0 = float(y[1] - y[0]) if y.shape[0] >= 2 else 0.0
    levels, trends = kernels.holt_scan(y, float(alpha), float(beta), float(l0), float(b0))
    return levels, trends, levels + trends


def holt_winters_additive(series, params: SmoothingParams):
    """Holt-Winters with additive seasonality of fixed cycle length.

    Returns ``(levels, trends, seasonals, forecasts)`` where
    ``forecasts[t-1] = l_t + b_t + s_{t-c+1}`` is the forecast of ``y_{t+1}``.
    Requires at least two full cycles for the default initialization.
    """
    y = _check_series(series)
    c = params.cycle
    if y.shape[0] < 2 * c:
        raise SeriesTooShort(f"need at least 2*cycle = {2 * c} points, got {y.shape[0]}")
    first = y[:c]
    second = y[c:2 * c]
    l0 = float(np.mean(first)) if params.l0 is None else float(params.l0)
    b0 = (float((np.mean(second) - np.mean(first)) / c)
          if params.b0 is None else float(params.b0))
    if params.s0 is None:
        s0 = first - np.mean(first)
    else:
        s0 = as_vector(params.s0)
    return kernels.hw_scan(y, float(params.alpha), float(params.beta), float(params.gamma),
                           int(c), l0, b0, s0.astype(np.float64))
