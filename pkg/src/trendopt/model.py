"""Dense feed-forward network with analytic backprop and a finite-difference oracle.

The network is affine + ReLU for every hidden layer and affine (linear) for
the output layer; the softmax for classification lives inside the
cross-entropy loss. Weights are Glorot-uniform (limit sqrt(6/(fan_in+fan_out)))
from a seeded PCG64 generator, biases start at zero, and the ReLU subgradient
at exactly 0 is taken as 0 -- all frozen for reproducibility.

Losses:

* ``mse``           -- mean over samples of the per-sample sum of squared errors.
* ``cross_entropy`` -- mean negative log softmax probability of the true class,
  computed via a row-max shift (log-sum-exp) so confident logits cannot overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InvalidShape, ShapeMismatch

LOSS_KINDS = ("mse", "cross_entropy")


class Batch(NamedTuple):
    inputs: np.ndarray   # (n_samples, n_features)
    targets: np.ndarray  # (n_samples,) values or integer class labels


@dataclass
class Mlp:
    """Layer sizes plus per-layer weight matrices (fan_out x fan_in) and biases."""

    layer_sizes: tuple
    weights: list
    biases: list

    @property
    def param_count(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def get_params(self) -> np.ndarray:
        """Flat copy: all weights (layer by layer, row-major), then all biases."""
        return np.concatenate([w.ravel() for w in self.weights]
                              + [b.ravel() for b in self.biases])

    def set_params(self, flat: np.ndarray) -> None:
        flat = np.asarray(flat, dtype=np.float64)
        if flat.size != self.param_count:
            raise ShapeMismatch(f"expected {self.param_count} parameters, got {flat.size}")
        o = 0
        for w in self.weights:
            w[:] = flat[o:o + w.size].reshape(w.shape)
            o += w.size
        for b in self.biases:
            b[:] = flat[o:o + b.size]
            o += b.size


@dataclass
class Gradients:
    """Shape-congruent with the model; ``flat()`` matches ``Mlp.get_params`` order."""

    weights: list
    biases: list

    def flat(self) -> np.ndarray:
        return np.concatenate([w.ravel() for w in self.weights]
                              + [b.ravel() for b in self.biases])


def init_model(layer_sizes: Sequence[int], seed: int) -> Mlp:
    sizes = tuple(int(s) for s in layer_sizes)
    if len(sizes) < 2:
        raise InvalidShape(f"need at least input and output layers, got {sizes}")
    if any(s < 1 for s in sizes):
        raise InvalidShape(f"all layer sizes must be >= 1, got {sizes}")
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return Mlp(layer_sizes=sizes, weights=weights, biases=biases)


def _inputs_of(batch) -> np.ndarray:
    x = batch.inputs if isinstance(batch, Batch) else batch
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(1, -1)
    return x


def _forward_trace(model: Mlp, x: np.ndarray):
    """Pre-activations and activations for backprop."""
    acts = [x]
    pre = []
    a = x
    for w, b in zip(model.weights[:-1], model.biases[:-1]):
        z = a @ w.T + b
        pre.append(z)
        a = np.maximum(z, 0.0)
        acts.append(a)
    out = a @ model.weights[-1].T + model.biases[-1]
    return pre, acts, out


def forward(model: Mlp, batch) -> np.ndarray:
    """Predictions, shape (n_samples, output_units)."""
    x = _inputs_of(batch)
    if x.shape[1] != model.layer_sizes[0]:
        raise ShapeMismatch(
            f"input width {x.shape[1]} != input layer size {model.layer_sizes[0]}")
    return _forward_trace(model, x)[2]


def _log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def loss(kind: str, predictions: np.ndarray, targets) -> float:
    """Scalar loss; see module docstring for the two definitions."""
    if kind not in LOSS_KINDS:
        raise ValueError(f"unknown loss {kind!r}; expected one of {LOSS_KINDS}")
    predictions = np.asarray(predictions, dtype=np.float64)
    if predictions.ndim == 1:
        predictions = predictions.reshape(-1, 1)
    n = predictions.shape[0]
    if kind == "mse":
        t = np.asarray(targets, dtype=np.float64)
        if t.ndim == 1:
            t = t.reshape(-1, 1)
        if t.shape != predictions.shape:
            raise ShapeMismatch(f"predictions {predictions.shape} vs targets {t.shape}")
        return float(np.sum((predictions - t) ** 2) / n)
    labels = np.asarray(targets)
    if labels.ndim != 1 or labels.shape[0] != n:
        raise ShapeMismatch("cross_entropy targets must be one class index per sample")
    if not np.issubdtype(labels.dtype, np.integer):
        raise ShapeMismatch("cross_entropy targets must be integer class indices")
    if labels.min() < 0 or labels.max() >= predictions.shape[1]:
        raise ShapeMismatch("class index out of range for the logit width")
    logp = _log_softmax(predictions)
    return float(-np.mean(logp[np.arange(n), labels]))


def _loss_grad(kind: str, out: np.ndarray, targets):
    """(loss value, d loss / d network output)."""
    n = out.shape[0]
    if kind == "mse":
        t = np.asarray(targets, dtype=np.float64)
        if t.ndim == 1:
            t = t.reshape(-1, 1)
        if t.shape != out.shape:
            raise ShapeMismatch(f"predictions {out.shape} vs targets {t.shape}")
        diff = out - t
        return float(np.sum(diff ** 2) / n), 2.0 * diff / n
    value = loss(kind, out, targets)
    labels = np.asarray(targets)
    logp = _log_softmax(out)
    grad = np.exp(logp)
    grad[np.arange(n), labels] -= 1.0
    return value, grad / n


def backward(model: Mlp, batch: Batch, loss_kind: str):
    """Analytic gradients of the mean loss; returns ``(loss_value, Gradients)``."""
    x = _inputs_of(batch)
    if x.shape[1] != model.layer_sizes[0]:
        raise ShapeMismatch(
            f"input width {x.shape[1]} != input layer size {model.layer_sizes[0]}")
    pre, acts, out = _forward_trace(model, x)
    value, delta = _loss_grad(loss_kind, out, batch.targets)
    n_layers = len(model.weights)
    g_w = [None] * n_layers
    g_b = [None] * n_layers
    g_w[-1] = delta.T @ acts[-1]
    g_b[-1] = delta.sum(axis=0)
    for li in range(n_layers - 2, -1, -1):
        delta = (delta @ model.weights[li + 1]) * (pre[li] > 0.0)
        g_w[li] = delta.T @ acts[li]
        g_b[li] = delta.sum(axis=0)
    return value, Gradients(weights=g_w, biases=g_b)


def finite_diff(model: Mlp, batch: Batch, loss_kind: str, h: float = 1e-6) -> Gradients:
    """Central differences ``(L(p + h e_i) - L(p - h e_i)) / 2h`` per parameter."""
    if h <= 0:
        raise ValueError(f"h must be > 0, got {h}")
    base = model.get_params()
    flat = np.empty_like(base)
    probe = Mlp(layer_sizes=model.layer_sizes,
                weights=[w.copy() for w in model.weights],
                biases=[b.copy() for b in model.biases])
    for i in range(base.size):
        p = base.copy()
        p[i] = base[i] + h
        probe.set_params(p)
        up = loss(loss_kind, forward(probe, batch), batch.targets)
        p[i] = base[i] - h
        probe.set_params(p)
        down = loss(loss_kind, forward(probe, batch), batch.targets)
        flat[i] = (up - down) / (2.0 * h)
    grads = Gradients(weights=[np.empty_like(w) for w in model.weights],
                      biases=[np.empty_like(b) for b in model.biases])
    o = 0
    for w in grads.weights:
        w[:] = flat[o:o + w.size].reshape(w.shape)
        o += w.size
    for b in grads.biases:
        b[:] = flat[o:o + b.size]
        o += b.size
    return grads


def min_preactivation_magnitude(model: Mlp, batch) -> float:
    """Smallest |z| over all hidden pre-activations; inf if there are none.

    Used to detect ReLU kinks near the finite-difference step: a perturbation
    can flip a unit whose pre-activation is within a few h of 0, which makes
    central differences meaningless there.
    """
    x = _inputs_of(batch)
    pre, _, _ = _forward_trace(model, x)
    if not pre:
        return float("inf")
    return float(min(np.min(np.abs(z)) for z in pre))


def gradient_check(model: Mlp, batch: Batch, loss_kind: str, h: float = 1e-6,
                   small: float = 1e-8):
    """Compare backprop against central differences.

    Coordinates where both |analytic| and |numeric| are <= ``small`` are
    compared absolutely (their difference must stay <= ``small``); the rest
    contribute |analytic - numeric| / max(|analytic|, |numeric|) to the
    returned maximum relative error. Returns ``(max_rel_err, max_abs_small_err)``.
    """
    _, analytic = backward(model, batch, loss_kind)
    numeric = finite_diff(model, batch, loss_kind, h)
    a = analytic.flat()
    f = numeric.flat()
    scale = np.maximum(np.abs(a), np.abs(f))
    tiny = scale <= small
    max_abs = float(np.max(np.abs(a - f)[tiny])) if tiny.any() else 0.0
    rel = np.abs(a - f)[~tiny] / scale[~tiny]
    max_rel = float(np.max(rel)) if rel.size else 0.0
    return max_rel, max_abs
