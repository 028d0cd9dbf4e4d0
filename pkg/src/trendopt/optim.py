"""First-order optimizers behind one stepping interface.

Seven methods share the ``init_state`` / ``step`` surface:

* ``sgd``      -- theta <- theta - alpha * g
* ``sgdm``     -- heavy-ball momentum in the accumulated form
  m <- beta * m - alpha * g; theta <- theta + m (note the sign convention:
  the step size is folded into the momentum buffer, not applied at update
  time as in the textbook variant).
* ``adagrad``  -- cumulative squared-gradient scaling, epsilon inside the root:
  G <- G + g^2; theta <- theta - alpha * g / sqrt(G + eps)
* ``rmsprop``  -- exponential average of squared gradients, epsilon inside the
  root as in adagrad.
* ``adam``     -- bias-corrected first/second moments, epsilon outside the
  root: theta <- theta - alpha * mhat / (sqrt(vhat) + eps)
* ``amsgrad``  -- adam with a running elementwise max of the second moment and
  no second-moment bias correction.
* ``tom``      -- adam with a Holt-style linear-trend recurrence over raw
  gradients feeding the first moment:

      level  <- beta1 * (level + trend) + (1 - beta1) * g
      trend  <- beta2 * trend + (1 - beta2) * (g - g_prev)
      second <- beta3 * second + (1 - beta3) * g^2
      f      =  level + trend
      fhat   =  f / (1 - (beta1*beta2)^t),  vhat = second / (1 - beta3^t)
      theta  <- theta - alpha * fhat / (sqrt(vhat) + eps)

  The trend differences successive *gradients* (g - g_prev with g_0 = 0),
  not successive levels as Holt's forecasting recurrence does; see
  ``smoothing`` for the contrast. With beta2 = 1 the trend stays identically
  zero and tom reduces exactly to adam with decay pair (beta1, beta3).

The step counter increments before the bias corrections, so the first call
corrects with t = 1. All state updates are elementwise; the hot loops live in
``trendopt.kernels`` (numba by default, numpy fallback).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import kernels
from .core import as_vector
from .errors import InvalidConfig, KindMismatch, LengthMismatch

KINDS = ("sgd", "sgdm", "adagrad", "rmsprop", "adam", "amsgrad", "tom")

# beta2 is the second smoothing constant of whichever method is running:
# the trend decay for tom, the squared-gradient decay for rmsprop/adam/amsgrad.
_BETA2_DEFAULTS = {"tom": 0.99, "rmsprop": 0.9, "adam": 0.999, "amsgrad": 0.999}


@dataclass(frozen=True)
class OptimizerConfig:
    """Hyperparameters for one optimizer. Unused fields are ignored by a kind.

    ``beta2`` defaults by kind (tom: 0.99, rmsprop: 0.9, adam/amsgrad: 0.999)
    and is resolved at construction so serialized configs carry the value
    actually used. ``bias_correction`` applies to adam and tom only.
    """

    kind: str
    alpha: float = 0.001
    beta1: float = 0.9
    beta2: Optional[float] = None
    beta3: float = 0.999
    epsilon: float = 1e-8
    momentum_beta: float = 0.9
    initial_accumulator: float = 0.1
    bias_correction: bool = True

    def __post_init__(self):
        kind = str(self.kind).lower()
        if kind not in KINDS:
            raise InvalidConfig(f"unknown optimizer kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "kind", kind)
        if self.beta2 is None:
            object.__setattr__(self, "beta2", _BETA2_DEFAULTS.get(kind, 0.99))
        self._validate()

    def _validate(self):
        if not self.alpha > 0:
            raise InvalidConfig(f"alpha must be > 0, got {self.alpha}")
        if not self.epsilon > 0:
            raise InvalidConfig(f"epsilon must be > 0, got {self.epsilon}")
        if self.initial_accumulator < 0:
            raise InvalidConfig(f"initial_accumulator must be >= 0, got {self.initial_accumulator}")
        for name in ("beta1", "beta3", "momentum_beta"):
            v = getattr(self, name)
            if not 0.0 <= v < 1.0:
                raise InvalidConfig(f"{name} must be in [0, 1), got {v}")
        # tom admits beta2 == 1 (the trend-free degeneracy that collapses to adam)
        hi_ok = self.beta2 <= 1.0 if self.kind == "tom" else self.beta2 < 1.0
        if not (0.0 <= self.beta2 and hi_ok):
            hi = "1]" if self.kind == "tom" else "1)"
            raise InvalidConfig(f"beta2 must be in [0, {hi} for {self.kind}, got {self.beta2}")

    def with_updates(self, **changes) -> "OptimizerConfig":
        return replace(self, **changes)


@dataclass
class OptimizerState:
    """Per-parameter buffers for one run; mutated only through step calls."""

    kind: str
    dim: int
    t: int = 0
    level: Optional[np.ndarray] = None        # tom l
    trend: Optional[np.ndarray] = None        # tom b
    second: Optional[np.ndarray] = None       # v or G
    momentum: Optional[np.ndarray] = None     # sgdm / adam / amsgrad m
    second_max: Optional[np.ndarray] = None   # amsgrad running max of v
    prev_grad: Optional[np.ndarray] = None    # tom g_{t-1}

    _ARRAYS = ("level", "trend", "second", "momentum", "second_max", "prev_grad")

    def clone(self) -> "OptimizerState":
        kw = {name: None if getattr(self, name) is None else getattr(self, name).copy()
              for name in self._ARRAYS}
        return OptimizerState(kind=self.kind, dim=self.dim, t=self.t, **kw)


@dataclass
class StepReport:
    """What a step did: the applied delta plus the corrected estimates."""

    update: np.ndarray
    corrected_forecast: Optional[np.ndarray] = None   # tom fhat
    corrected_second: Optional[np.ndarray] = None     # vhat where the method defines one


def init_state(config: OptimizerConfig, dim: int) -> OptimizerState:
    """Fresh zeroed state; adagrad's accumulator starts at ``initial_accumulator``."""
    if dim < 1:
        raise InvalidConfig(f"dim must be >= 1, got {dim}")
    k = config.kind
    st = OptimizerState(kind=k, dim=dim)
    zeros = lambda: np.zeros(dim)
    if k == "sgdm":
        st.momentum = zeros()
    elif k == "adagrad":
        st.second = np.full(dim, float(config.initial_accumulator))
    elif k == "rmsprop":
        st.second = zeros()
    elif k in ("adam", "amsgrad"):
        st.momentum = zeros()
        st.second = zeros()
        if k == "amsgrad":
            st.second_max = zeros()
    elif k == "tom":
        st.level = zeros()
        st.trend = zeros()
        st.second = zeros()
        st.prev_grad = zeros()
    return st


def _prep(state: OptimizerState, params, grad, cfg: OptimizerConfig, kind: str):
    if cfg.kind != kind:
        raise KindMismatch(f"config is for {cfg.kind!r}, step is {kind!r}")
    if state.kind != kind:
        raise KindMismatch(f"state was initialized for {state.kind!r}, step is {kind!r}")
    params = as_vector(params)
    grad = as_vector(grad)
    if params.shape[0] != grad.shape[0]:
        raise LengthMismatch(f"params len {params.shape[0]} != grad len {grad.shape[0]}")
    if params.shape[0] != state.dim:
        raise KindMismatch(f"state dim {state.dim} != params len {params.shape[0]}")
    state.t += 1
    return params, grad


def sgd_step(state, params, grad, cfg):
    params, grad = _prep(state, params, grad, cfg, "sgd")
    new, update = kernels.sgd_step(params, grad, cfg.alpha)
    return new, StepReport(update=update)


def sgdm_step(state, params, grad, cfg):
    params, grad = _prep(state, params, grad, cfg, "sgdm")
    new, update = kernels.sgdm_step(params, grad, state.momentum, cfg.alpha, cfg.momentum_beta)
    return new, StepReport(update=update)


def adagrad_step(state, params, grad, cfg):
    params, grad = _prep(state, params, grad, cfg, "adagrad")
    new, update = kernels.adagrad_step(params, grad, state.second, cfg.alpha, cfg.epsilon)
    return new, StepReport(update=update)


def rmsprop_step(state, params, grad, cfg):
    params, grad = _prep(state, params, grad, cfg, "rmsprop")
    new, update = kernels.rmsprop_step(params, grad, state.second, cfg.alpha, cfg.beta2, cfg.epsilon)
    return new, StepReport(update=update)


def adam_step(state, params, grad, cfg):
    params, grad = _prep(state, params, grad, cfg, "adam")
    if cfg.bias_correction:
        mc = 1.0 - cfg.beta1 ** state.t
        vc = 1.0 - cfg.beta2 ** state.t
    else:
        mc = vc = 1.0
    new, update, vhat = kernels.adam_step(
        params, grad, state.momentum, state.second,
        cfg.alpha, cfg.beta1, cfg.beta2, cfg.epsilon, mc, vc)
    return new, StepReport(update=update, corrected_second=vhat)


def amsgrad_step(state, params, grad, cfg):
    params, grad = _prep(state, params, grad, cfg, "amsgrad")
    mc = 1.0 - cfg.beta1 ** state.t  # first moment only; vhat is the raw running max
    new, update, vhat = kernels.amsgrad_step(
        params, grad, state.momentum, state.second, state.second_max,
        cfg.alpha, cfg.beta1, cfg.beta2, cfg.epsilon, mc)
    return new, StepReport(update=update, corrected_second=vhat)


def tom_step(state, params, grad, cfg):
    params, grad = _prep(state, params, grad, cfg, "tom")
    if cfg.bias_correction:
        fc = 1.0 - (cfg.beta1 * cfg.beta2) ** state.t
        vc = 1.0 - cfg.beta3 ** state.t
    else:
        fc = vc = 1.0
    new, update, fhat, vhat = kernels.tom_step(
        params, grad, state.level, state.trend, state.second, state.prev_grad,
        cfg.alpha, cfg.beta1, cfg.beta2, cfg.beta3, cfg.epsilon, fc, vc)
    return new, StepReport(update=update, corrected_forecast=fhat, corrected_second=vhat)


_STEPS = {
    "sgd": sgd_step,
    "sgdm": sgdm_step,
    "adagrad": adagrad_step,
    "rmsprop": rmsprop_step,
    "adam": adam_step,
    "amsgrad": amsgrad_step,
    "tom": tom_step,
}


def step(config: OptimizerConfig, state: OptimizerState, params, grad):
    """Dispatch one optimization step; returns ``(params', state, report)``.

    The state is advanced in place (and returned for convenience). Stopping
    is entirely the caller's concern: the library never decides convergence.
    """
    if state.kind != config.kind:
        raise KindMismatch(f"state kind {state.kind!r} != config kind {config.kind!r}")
    new, report = _STEPS[config.kind](state, params, grad, config)
    return new, state, report
