"""Unrolled LSTM with a fully connected sigmoid head.

One cell is applied across an input window of scalars (h0 = c0 = 0),
and the final hidden state is mapped through sigmoid(w_fc @ h + b_fc) to a
single prediction in (0, 1). Because the head saturates at 0 and 1, targets
must be normalized into a sub-interval of (0, 1) upstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cell import (
    CellCache,
    CellGradients,
    CellParameters,
    _draw_cell,
    cell_backward,
    cell_forward,
    zero_cell_gradients,
    zero_state,
)
from .errors import DimensionError
from .mathops import sigmoid, sigmoid_grad

HEAD_FIELDS = ("w_fc", "b_fc")


@dataclass
class NetworkParameters:
    """Cell parameters plus the fully connected head (1 x hidden weight, scalar bias)."""

    cell: CellParameters
    w_fc: np.ndarray  # shape (1, hidden_dim)
    b_fc: np.ndarray  # shape (1,)

    @property
    def hidden_dim(self) -> int:
        return self.cell.hidden_dim

    @property
    def input_dim(self) -> int:
        return self.cell.input_dim

    def arrays(self) -> list[tuple[str, np.ndarray]]:
        """All parameter arrays in the fixed declared order (cell first, then head)."""
        return self.cell.arrays() + [(name, getattr(self, name)) for name in HEAD_FIELDS]

    def copy(self) -> "NetworkParameters":
        return NetworkParameters(cell=self.cell.copy(), w_fc=self.w_fc.copy(), b_fc=self.b_fc.copy())


@dataclass
class SequenceCache:
    """Per-step cell caches plus the head intermediates for one forward pass."""

    steps: list[CellCache]
    h_final: np.ndarray
    prediction: float


@dataclass
class NetworkGradients:
    """Cell gradients plus head gradients, shape-congruent with NetworkParameters."""

    cell: CellGradients
    w_fc: np.ndarray
    b_fc: np.ndarray

    def arrays(self) -> list[tuple[str, np.ndarray]]:
        return self.cell.arrays() + [(name, getattr(self, name)) for name in HEAD_FIELDS]


def init_network(input_dim: int, hidden_dim: int, seed: int) -> NetworkParameters:
    """Seeded initialization of the cell and head from one generator stream.

    The head weight uses the same uniform +-1/sqrt(hidden_dim) scheme as the
    cell; its bias starts at zero. Identical seeds give bit-identical
    parameters.
    """
    if input_dim < 1 or hidden_dim < 1:
        raise ValueError(f"dimensions must be >= 1, got input={input_dim} hidden={hidden_dim}")
    rng = np.random.default_rng(seed)
    cell = _draw_cell(rng, input_dim, hidden_dim)
    limit = 1.0 / np.sqrt(hidden_dim)
    w_fc = rng.uniform(-limit, limit, size=(1, hidden_dim))
    b_fc = np.zeros(1)
    return NetworkParameters(cell=cell, w_fc=w_fc, b_fc=b_fc)


def forward_sequence(window, p: NetworkParameters) -> tuple[float, SequenceCache]:
    """Run the cell over a window of scalar inputs and apply the head.

    Returns the prediction, strictly inside (0, 1) up to float64 saturation,
    and the cache consumed by backward_sequence.
    """
    window = np.asarray(window, dtype=np.float64)
    if window.ndim != 1 or window.size == 0:
        raise DimensionError(f"window must be a non-empty 1-D sequence, got shape {window.shape}")
    if p.input_dim != 1:
        raise DimensionError(f"scalar windows require input_dim 1, parameters have {p.input_dim}")

    state = zero_state(p.hidden_dim)
    steps: list[CellCache] = []
    for value in window:
        state, cache = cell_forward(np.array([value]), state, p.cell)
        steps.append(cache)

    pre = (p.w_fc @ state.h + p.b_fc).item()
    prediction = float(sigmoid(pre))
    return prediction, SequenceCache(steps=steps, h_final=state.h, prediction=prediction)


def backward_sequence(
    d_prediction: float,
    cache: SequenceCache,
    p: NetworkParameters,
) -> NetworkGradients:
    """Backpropagation through time across the unrolled window.

    Propagates through the sigmoid head, then through every step in reverse,
    summing the shared cell-parameter gradients across steps.
    """
    if len(cache.steps) == 0:
        raise DimensionError("cache holds no steps")
    if cache.h_final.shape != (p.hidden_dim,):
        raise DimensionError(
            f"cache hidden size {cache.h_final.shape} does not match parameters ({p.hidden_dim})"
        )

    # Head: prediction = sigmoid(w_fc @ h_T + b_fc)
    d_pre = d_prediction * sigmoid_grad(cache.prediction)
    dw_fc = d_pre * cache.h_final[np.newaxis, :]
    db_fc = np.array([d_pre])
    dh = d_pre * p.w_fc[0]
    dc = np.zeros(p.hidden_dim)

    total = zero_cell_gradients(p.cell)
    for step in reversed(cache.steps):
        step_grads, dh, dc, _dx = cell_backward(dh, dc, step, p.cell)
        for (_, acc), (_, g) in zip(total.arrays(), step_grads.arrays()):
            acc += g

    return NetworkGradients(cell=total, w_fc=dw_fc, b_fc=db_fc)
