"""Numba-jitted kernels: the default backend when numba is importable.

Per-element operation order matches ``numpy_impl`` exactly; the backends are
required (and tested) to agree bit for bit. No fastmath: IEEE semantics only.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def sgd_step(params, grad, alpha):
    n = params.shape[0]
    new = np.empty(n)
    update = np.empty(n)
    for i in range(n):
        update[i] = (-alpha) * grad[i]
        new[i] = params[i] + update[i]
    return new, update


@njit(cache=True)
def sgdm_step(params, grad, momentum, alpha, beta):
    n = params.shape[0]
    new = np.empty(n)
    update = np.empty(n)
    for i in range(n):
        momentum[i] = beta * momentum[i] - alpha * grad[i]
        update[i] = momentum[i]
        new[i] = params[i] + update[i]
    return new, update


@njit(cache=True)
def adagrad_step(params, grad, accum, alpha, eps):
    n = params.shape[0]
    new = np.empty(n)
    update = np.empty(n)
    for i in range(n):
        accum[i] = accum[i] + grad[i] * grad[i]
        update[i] = (-alpha) * grad[i] / math.sqrt(accum[i] + eps)
        new[i] = params[i] + update[i]
    return new, update


@njit(cache=True)
def rmsprop_step(params, grad, accum, alpha, beta, eps):
    n = params.shape[0]
    new = np.empty(n)
    update = np.empty(n)
    omb = 1.0 - beta
    for i in range(n):
        accum[i] = beta * accum[i] + omb * (grad[i] * grad[i])
        update[i] = (-alpha) * grad[i] / math.sqrt(accum[i] + eps)
        new[i] = params[i] + update[i]
    return new, update


@njit(cache=True)
def adam_step(params, grad, m, v, alpha, beta1, beta2, eps, mc, vc):
    n = params.shape[0]
    new = np.empty(n)
    update = np.empty(n)
    vhat = np.empty(n)
    omb1 = 1.0 - beta1
    omb2 = 1.0 - beta2
    for i in range(n):
        m[i] = beta1 * m[i] + omb1 * grad[i]
        v[i] = beta2 * v[i] + omb2 * (grad[i] * grad[i])
        mhat = m[i] / mc
        vhat[i] = v[i] / vc
        update[i] = (-alpha) * mhat / (math.sqrt(vhat[i]) + eps)
        new[i] = params[i] + update[i]
    return new, update, vhat


@njit(cache=True)
def amsgrad_step(params, grad, m, v, vmax, alpha, beta1, beta2, eps, mc):
    n = params.shape[0]
    new = np.empty(n)
    update = np.empty(n)
    vhat = np.empty(n)
    omb1 = 1.0 - beta1
    omb2 = 1.0 - beta2
    for i in range(n):
        m[i] = beta1 * m[i] + omb1 * grad[i]
        v[i] = beta2 * v[i] + omb2 * (grad[i] * grad[i])
        if v[i] > vmax[i]:
            vmax[i] = v[i]
        vhat[i] = vmax[i]
        mhat = m[i] / mc
        update[i] = (-alpha) * mhat / (math.sqrt(vmax[i]) + eps)
        new[i] = params[i] + update[i]
    return new, update, vhat


@njit(cache=True)
def tom_step(params, grad, level, trend, second, prev_grad,
             alpha, beta1, beta2, beta3, eps, fc, vc):
    n = params.shape[0]
    new = np.empty(n)
    update = np.empty(n)
    fhat = np.empty(n)
    vhat = np.empty(n)
    omb1 = 1.0 - beta1
    omb2 = 1.0 - beta2
    omb3 = 1.0 - beta3
    for i in range(n):
        level[i] = beta1 * (level[i] + trend[i]) + omb1 * grad[i]
        trend[i] = beta2 * trend[i] + omb2 * (grad[i] - prev_grad[i])
        second[i] = beta3 * second[i] + omb3 * (grad[i] * grad[i])
        fhat[i] = (level[i] + trend[i]) / fc
        vhat[i] = second[i] / vc
        update[i] = (-alpha) * fhat[i] / (math.sqrt(vhat[i]) + eps)
        new[i] = params[i] + update[i]
        prev_grad[i] = grad[i]
    return new, update, fhat, vhat


@njit(cache=True)
def ses_scan(y, alpha, l0):
    n = y.shape[0]
    levels = np.empty(n)
    lev = l0
    for i in range(n):
        lev = alpha * lev + (1.0 - alpha) * y[i]
        levels[i] = lev
    return levels


@njit(cache=True)
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


@njit(cache=True)
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


@njit(cache=True)
def forecast_paths(gmat, beta1, beta2):
    trials, steps = gmat.shape
    out = np.empty(trials)
    omb1 = 1.0 - beta1
    omb2 = 1.0 - beta2
    for i in range(trials):
        lev = 0.0
        tr = 0.0
        prev = 0.0
        for j in range(steps):
            g = gmat[i, j]
            lev = beta1 * (lev + tr) + omb1 * g
            tr = beta2 * tr + omb2 * (g - prev)
            prev = g
        out[i] = lev + tr
    return out
