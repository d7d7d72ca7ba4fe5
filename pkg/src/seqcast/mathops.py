"""Activation functions and small dense linear-algebra kernels.

Everything operates on 64-bit float numpy arrays: vectors are 1-D, matrices
2-D row-major. All functions are pure; nothing here mutates its inputs.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError

__all__ = [
    "as_vector",
    "as_matrix",
    "sigmoid",
    "sigmoid_grad",
    "tanh",
    "tanh_grad",
    "matvec",
    "concat",
    "hadamard",
]


def as_vector(x) -> np.ndarray:
    """Validate and return ``x`` as a finite 1-D float64 array of length >= 1."""
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise DimensionError(f"expected a non-empty 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector contains non-finite elements")
    return v


def as_matrix(m) -> np.ndarray:
    """Validate and return ``m`` as a finite 2-D float64 array."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.size == 0:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite elements")
    return a


def sigmoid(x):
    """Logistic function 1/(1+e^-x), stable for large |x|.

    Branches on the sign of the argument so the exponential never overflows.
    Accepts scalars or arrays; returns the same shape.
    """
    x = np.asarray(x, dtype=np.float64)
    # exp(-|x|) never overflows; each element then takes the branch that
    # keeps the exponential's argument non-positive.
    e = np.exp(-np.abs(x))
    out = np.where(x >= 0, 1.0 / (1.0 + e), e / (1.0 + e))
    return out if out.ndim else float(out)


def sigmoid_grad(s):
    """Derivative of the logistic function expressed in its output: s*(1-s)."""
    s = np.asarray(s, dtype=np.float64)
    return s * (1.0 - s)


def tanh(x):
    """Hyperbolic tangent; output in (-1, 1), odd symmetric."""
    x = np.asarray(x, dtype=np.float64)
    out = np.tanh(x)
    return out if out.ndim else float(out)


def tanh_grad(t):
    """Derivative of tanh expressed in its output: 1 - t**2."""
    t = np.asarray(t, dtype=np.float64)
    return 1.0 - t * t


def matvec(m: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Matrix-vector product; raises DimensionError on a shape mismatch."""
    if m.ndim != 2 or v.ndim != 1 or m.shape[1] != v.shape[0]:
        raise DimensionError(
            f"matvec shape mismatch: matrix {m.shape} x vector {v.shape}"
        )
    return m @ v


def concat(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Concatenate two non-empty vectors, ``a`` first.

    The order is load-bearing: gate weight matrices are laid out against
    [recurrent state, input] in exactly this order.
    """
    if a.ndim != 1 or b.ndim != 1 or a.size == 0 or b.size == 0:
        raise DimensionError(
            f"concat needs two non-empty vectors, got shapes {a.shape} and {b.shape}"
        )
    return np.concatenate((a, b))


def hadamard(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise product of two equal-length vectors."""
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionError(
            f"hadamard shape mismatch: {a.shape} vs {b.shape}"
        )
    return a * b
