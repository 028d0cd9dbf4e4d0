"""Pure-numpy kernels: the fallback backend.

Every function here has a numba twin in ``numba_impl`` with the exact same
per-element operation order, so the two backends produce bit-identical
results. Keep the expression trees in sync when editing either module.

State arrays (momentum, accumulators, ...) are mutated in place; freshly
allocated arrays are returned for everything else. Bias-correction
denominators are precomputed by the caller and passed in as scalars (pass
1.0 to disable correction) so both backends share one rounding of ``1 - b**t``.
"""

from __future__ import annotations

import numpy as np


def sgd_step(params, grad, alpha):
    update = (-alpha) * grad
    return params + update, update


def sgdm_step(params, grad, momentum, alpha, beta):
    momentum[:] = beta * momentum - alpha * grad
    update = momentum.copy()
    return params + update, update


def adagrad_step(params, grad, accum, alpha, eps):
    accum += grad * grad
    update = (-alpha) * grad / np.sqrt(accum + eps)
    return params + update, update


def rmsprop_step(params, grad, accum, alpha, beta, eps):
    accum[:] = beta * accum + (1.0 - beta) * (grad * grad)
    update = (-alpha) * grad / np.sqrt(accum + eps)
    return params + update, update


def adam_step(params, grad, m, v, alpha, beta1, beta2, eps, mc, vc):
    m[:] = beta1 * m + (1.0 - beta1) * grad
    v[:] = beta2 * v + (1.0 - beta2) * (grad * grad)
    mhat = m / mc
    vhat = v / vc
    update = (-alpha) * mhat / (np.sqrt(vhat) + eps)
    return params + update, update, vhat


def amsgrad_step(params, grad, m, v, vmax, alpha, beta1, beta2, eps, mc):
    m[:] = beta1 * m + (1.0 - beta1) * grad
    v[:] = beta2 * v + (1.0 - beta2) * (grad * grad)
    vmax[:] = np.maximum(vmax, v)
    mhat = m / mc
    update = (-alpha) * mhat / (np.sqrt(vmax) + eps)
    return params + update, update, vmax.copy()


def tom_step(params, grad, level, trend, second, prev_grad,
             alpha, beta1, beta2, beta3, eps, fc, vc):
    level[:] = beta1 * (level + trend) + (1.0 - beta1) * grad
    trend[:] = beta2 * trend + (1.0 - beta2) * (grad - prev_grad)
    second[:] = beta3 * second + (1.0 - beta3) * (grad * grad)
    fhat = (level + trend) / fc
    vhat = second / vc
    update = (-alpha) * fhat / (np.sqrt(vhat) + eps)
    prev_grad[:] = grad
    return params + update, update, fhat, vhat


def ses_scan(y, alpha, l0):
    n = y.shape[0]
    levels = np.empty(n)
    lev = l0
    for i in range(n):
        lev = alpha * lev + (1.0 - alpha) * y[i]
        levels[i] = lev
    return levels


def holt_scan(y, alpha, beta, l0, b0):
    n = y.shape[0]
    levels = np.empty(n)
    trends = np.empty(n)
    lev, tr = l0, b0
    for i in range(n):
        lev_new = alpha * (lev + tr) + (1.0 - alpha) * y[i]
        tr = beta * tr + (1.0 - beta) * (lev_new - lev)
        lev = lev_new
        levels[i] = lev
        trends[i] = tr
    return levels, trends


def hw_scan(y, alpha, beta, gamma, cycle, l0, b0, s0):
    n = y.shape[0]
    levels = np.empty(n)
    trends = np.empty(n)
    forecasts = np.empty(n)
    seas = np.empty(cycle + n)
    seas[:cycle] = s0
    lev, tr = l0, b0
    for i in range(n):
        lev_new = alpha * (lev + tr) + (1.0 - alpha) * (y[i] - seas[i])
        tr_new = beta * tr + (1.0 - beta) * (lev_new - lev)
        seas[cycle + i] = gamma * seas[i] + (1.0 - gamma) * (y[i] - lev - tr)
        lev, tr = lev_new, tr_new
        levels[i] = lev
        trends[i] = tr
        forecasts[i] = lev + tr + seas[i + 1]
    return levels, trends, seas[cycle:].copy(), forecasts


def forecast_paths(gmat, beta1, beta2):
    trials, steps = gmat.shape
    lev = np.zeros(trials)
    tr = np.zeros(trials)
    prev = np.zeros(trials)
    for j in range(steps):
        g = gmat[:, j]
        lev[:] = beta1 * (lev + tr) + (1.0 - beta1) * g
        tr[:] = beta2 * tr + (1.0 - beta2) * (g - prev)
        prev[:] = g
    return lev + tr
