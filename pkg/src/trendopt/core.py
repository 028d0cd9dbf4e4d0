"""Dense 64-bit real vectors and the elementwise operations everything else uses.

A "vector" throughout the library is a contiguous 1-D ``float64`` ndarray.
All binary operations require equal lengths; ``div`` and ``sqrt`` check their
domains so finite inputs can never produce NaN/Inf. Every function is pure.
"""

from __future__ import annotations

from typing import Union

import numpy as np

from .errors import DomainError, LengthMismatch

Scalar = Union[int, float]

UNARY_OPS = ("sqrt", "square")
BINARY_OPS = ("add", "sub", "mul", "div", "max")
SCALAR_OPS = ("scale",)
OPS = UNARY_OPS + BINARY_OPS + SCALAR_OPS


def as_vector(values) -> np.ndarray:
    """Coerce to a 1-D float64 array (no copy when already one)."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise LengthMismatch(f"expected a 1-D vector, got shape {arr.shape}")
    return arr


def _check_lengths(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[0] != b.shape[0]:
        raise LengthMismatch(f"lengths differ: {a.shape[0]} vs {b.shape[0]}")


def elementwise(op: str, a, b=None) -> np.ndarray:
    """Apply ``op`` elementwise and return a new vector.

    ``add``/``sub``/``mul``/``div``/``max`` take two vectors of equal length,
    ``scale`` takes a vector and a scalar, ``sqrt``/``square`` take one vector.
    """
    a = as_vector(a)
    if op in UNARY_OPS:
        if b is not None:
            raise ValueError(f"{op!r} takes a single vector")
        if op == "sqrt":
            if np.any(a < 0.0):
                raise DomainError("sqrt of a negative element")
            return np.sqrt(a)
        return a * a
    if op == "scale":
        if b is None or np.ndim(b) != 0:
            raise ValueError("'scale' takes a vector and a scalar")
        return a * float(b)
    if op in BINARY_OPS:
        b = as_vector(b)
        _check_lengths(a, b)
        if op == "add":
            return a + b
        if op == "sub":
            return a - b
        if op == "mul":
            return a * b
        if op == "max":
            return np.maximum(a, b)
        if np.any(b == 0.0):
            raise DomainError("division by a zero element")
        return a / b
    raise ValueError(f"unknown op {op!r}; expected one of {OPS}")


def dot(a, b) -> float:
    """Inner product of two equal-length vectors."""
    a = as_vector(a)
    b = as_vector(b)
    _check_lengths(a, b)
    return float(np.dot(a, b))
