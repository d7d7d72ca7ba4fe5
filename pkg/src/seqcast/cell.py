"""A single LSTM memory cell: gated forward step and its exact backward step.

The cell follows the classic formulation: forget, input and output gates are
logistic functions of [h_prev, x], the candidate update is a tanh of the same
concatenation, the cell state updates linearly as f*c_prev + i*candidate, and
the visible state is h = o * tanh(c).

The backward step is reverse-mode calculus through those equations. Its
correctness is established by finite-difference tests, not by trusting the
derivation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .mathops import concat, hadamard, matvec, sigmoid, sigmoid_grad, tanh, tanh_grad

# Fixed field order: serialization, Adam state and gradient containers all
# rely on it.
CELL_WEIGHT_FIELDS = ("w_f", "w_i", "w_c", "w_o")
CELL_BIAS_FIELDS = ("b_f", "b_i", "b_c", "b_o")


@dataclass
class CellParameters:
    """All learnable parameters of one LSTM cell.

    Each weight matrix has shape (hidden_dim, hidden_dim + input_dim) and acts
    on the concatenation [h_prev, x]; each bias has length hidden_dim.
    """

    w_f: np.ndarray
    w_i: np.ndarray
    w_c: np.ndarray
    w_o: np.ndarray
    b_f: np.ndarray
    b_i: np.ndarray
    b_c: np.ndarray
    b_o: np.ndarray
    input_dim: int
    hidden_dim: int

    def arrays(self) -> list[tuple[str, np.ndarray]]:
        """Parameter arrays in the fixed declared order."""
        return [(name, getattr(self, name)) for name in CELL_WEIGHT_FIELDS + CELL_BIAS_FIELDS]

    def copy(self) -> "CellParameters":
        return CellParameters(
            *(getattr(self, name).copy() for name in CELL_WEIGHT_FIELDS + CELL_BIAS_FIELDS),
            input_dim=self.input_dim,
            hidden_dim=self.hidden_dim,
        )


@dataclass
class CellState:
    """Hidden state h and cell state c, both length hidden_dim."""

    h: np.ndarray
    c: np.ndarray


@dataclass
class CellCache:
    """Forward intermediates needed by the backward step.

    Gate activations are stored instead of pre-activations: the derivatives
    are recovered as s*(1-s) and 1-t**2, which halves what must be kept.
    """

    x: np.ndarray
    z: np.ndarray  # concat [h_prev, x]
    f: np.ndarray
    i: np.ndarray
    o: np.ndarray
    cand: np.ndarray
    c_prev: np.ndarray
    c_new: np.ndarray
    c_tanh: np.ndarray  # tanh(c_new), reused on both paths of the backward step


@dataclass
class CellGradients:
    """Gradient arrays, shape-congruent with CellParameters."""

    w_f: np.ndarray
    w_i: np.ndarray
    w_c: np.ndarray
    w_o: np.ndarray
    b_f: np.ndarray
    b_i: np.ndarray
    b_c: np.ndarray
    b_o: np.ndarray

    def arrays(self) -> list[tuple[str, np.ndarray]]:
        return [(name, getattr(self, name)) for name in CELL_WEIGHT_FIELDS + CELL_BIAS_FIELDS]


def zero_state(hidden_dim: int) -> CellState:
    """The all-zero initial state h0 = c0 = 0."""
    return CellState(h=np.zeros(hidden_dim), c=np.zeros(hidden_dim))


def zero_cell_gradients(p: CellParameters) -> CellGradients:
    shape = (p.hidden_dim, p.hidden_dim + p.input_dim)
    return CellGradients(
        *(np.zeros(shape) for _ in CELL_WEIGHT_FIELDS),
        *(np.zeros(p.hidden_dim) for _ in CELL_BIAS_FIELDS),
    )


def _draw_cell(rng: np.random.Generator, input_dim: int, hidden_dim: int) -> CellParameters:
    """Draw cell weights from an already-seeded generator.

    Weights are uniform on +-1/sqrt(hidden_dim), which keeps pre-activations
    O(1) so the gates start unsaturated. Biases are zero except the forget
    bias, initialized to 1 so early gradients flow through the cell state.
    """
    limit = 1.0 / np.sqrt(hidden_dim)
    shape = (hidden_dim, hidden_dim + input_dim)
    weights = [rng.uniform(-limit, limit, size=shape) for _ in CELL_WEIGHT_FIELDS]
    biases = [
        np.ones(hidden_dim) if name == "b_f" else np.zeros(hidden_dim)
        for name in CELL_BIAS_FIELDS
    ]
    return CellParameters(*weights, *biases, input_dim=input_dim, hidden_dim=hidden_dim)


def init_cell(input_dim: int, hidden_dim: int, seed: int) -> CellParameters:
    """Deterministically initialize a cell; the same seed gives identical bits."""
    if input_dim < 1 or hidden_dim < 1:
        raise ValueError(f"dimensions must be >= 1, got input={input_dim} hidden={hidden_dim}")
    return _draw_cell(np.random.default_rng(seed), input_dim, hidden_dim)


def cell_forward(x: np.ndarray, prev: CellState, p: CellParameters) -> tuple[CellState, CellCache]:
    """One gated forward step.

    Returns the new (h, c) state and the cache the backward step consumes.
    Pure function: identical inputs give bit-identical outputs.
    """
    if x.shape != (p.input_dim,):
        raise DimensionError(f"input shape {x.shape} does not match input_dim {p.input_dim}")
    if prev.h.shape != (p.hidden_dim,) or prev.c.shape != (p.hidden_dim,):
        raise DimensionError(
            f"state shapes {prev.h.shape}/{prev.c.shape} do not match hidden_dim {p.hidden_dim}"
        )

    z = concat(prev.h, x)
    f = sigmoid(matvec(p.w_f, z) + p.b_f)
    i = sigmoid(matvec(p.w_i, z) + p.b_i)
    cand = tanh(matvec(p.w_c, z) + p.b_c)
    c_new = hadamard(f, prev.c) + hadamard(i, cand)
    o = sigmoid(matvec(p.w_o, z) + p.b_o)
    c_tanh = tanh(c_new)
    h_new = hadamard(o, c_tanh)

    state = CellState(h=h_new, c=c_new)
    cache = CellCache(
        x=x, z=z, f=f, i=i, o=o, cand=cand, c_prev=prev.c, c_new=c_new, c_tanh=c_tanh
    )
    return state, cache


def cell_backward(
    dh: np.ndarray,
    dc: np.ndarray,
    cache: CellCache,
    p: CellParameters,
) -> tuple[CellGradients, np.ndarray, np.ndarray, np.ndarray]:
    """Exact gradients of a scalar loss through one forward step.

    Given upstream dL/dh and dL/dc for this step's outputs, returns the
    parameter gradients plus dL/dh_prev, dL/dc_prev and dL/dx. Parameter
    gradients are for this step alone; when the cell is unrolled, the caller
    sums them across steps.
    """
    if dh.shape != (p.hidden_dim,) or dc.shape != (p.hidden_dim,):
        raise DimensionError(
            f"upstream gradient shapes {dh.shape}/{dc.shape} do not match hidden_dim {p.hidden_dim}"
        )

    # h = o * tanh(c): split the incoming dh between the output gate and c.
    do = dh * cache.c_tanh
    dc_total = dc + dh * cache.o * tanh_grad(cache.c_tanh)

    # c = f*c_prev + i*cand
    df = dc_total * cache.c_prev
    di = dc_total * cache.cand
    dcand = dc_total * cache.i
    dc_prev = dc_total * cache.f

    # Back through the activations to the pre-activation sums.
    da_f = df * sigmoid_grad(cache.f)
    da_i = di * sigmoid_grad(cache.i)
    da_c = dcand * tanh_grad(cache.cand)
    da_o = do * sigmoid_grad(cache.o)

    z = cache.z
    grads = CellGradients(
        w_f=np.outer(da_f, z),
        w_i=np.outer(da_i, z),
        w_c=np.outer(da_c, z),
        w_o=np.outer(da_o, z),
        b_f=da_f,
        b_i=da_i,
        b_c=da_c,
        b_o=da_o,
    )

    dz = p.w_f.T @ da_f + p.w_i.T @ da_i + p.w_c.T @ da_c + p.w_o.T @ da_o
    dh_prev = dz[: p.hidden_dim]
    dx = dz[p.hidden_dim :]
    return grads, dh_prev, dc_prev, dx
