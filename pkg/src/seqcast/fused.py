"""Stacked-gate fast path used by the training loop.

Step for step this computes the same math as cell.py and network.py, but the
four gate weight matrices are stacked into one (4*hidden, hidden+input)
matrix so each step costs one matrix-vector product instead of four, and the
weight gradient is formed by a single matrix product over the whole window
instead of one rank-1 update per step. Gate rows are ordered (forget, input,
output, candidate) so the three logistic gates form one contiguous block for
a single sigmoid call.

Tests pin this module against the reference implementation; if the two ever
disagree beyond float64 roundoff, the reference wins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .mathops import sigmoid
from .network import NetworkParameters

# Row-block order inside the stacked matrix.
_BLOCKS = ("f", "i", "o", "c")


@dataclass
class FusedNetwork:
    """Stacked-gate copy of NetworkParameters; hidden state layout unchanged."""

    w_all: np.ndarray  # (4*hidden, hidden + input), blocks: forget, input, output, candidate
    b_all: np.ndarray  # (4*hidden,)
    w_fc: np.ndarray  # (1, hidden)
    b_fc: np.ndarray  # (1,)
    hidden_dim: int
    input_dim: int

    def arrays(self) -> list[tuple[str, np.ndarray]]:
        return [
            ("w_all", self.w_all),
            ("b_all", self.b_all),
            ("w_fc", self.w_fc),
            ("b_fc", self.b_fc),
        ]


@dataclass
class FusedGradients:
    """Gradient arrays, shape-congruent with FusedNetwork."""

    w_all: np.ndarray
    b_all: np.ndarray
    w_fc: np.ndarray
    b_fc: np.ndarray

    def arrays(self) -> list[tuple[str, np.ndarray]]:
        return [
            ("w_all", self.w_all),
            ("b_all", self.b_all),
            ("w_fc", self.w_fc),
            ("b_fc", self.b_fc),
        ]


def fuse(p: NetworkParameters) -> FusedNetwork:
    """Copy reference-layout parameters into the stacked layout."""
    c = p.cell
    return FusedNetwork(
        w_all=np.vstack([c.w_f, c.w_i, c.w_o, c.w_c]),
        b_all=np.concatenate([c.b_f, c.b_i, c.b_o, c.b_c]),
        w_fc=p.w_fc.copy(),
        b_fc=p.b_fc.copy(),
        hidden_dim=c.hidden_dim,
        input_dim=c.input_dim,
    )


def unfuse(fp: FusedNetwork, template: NetworkParameters) -> NetworkParameters:
    """Copy stacked parameters back into a fresh reference-layout container."""
    out = template.copy()
    hidden = fp.hidden_dim
    blocks = [slice(k * hidden, (k + 1) * hidden) for k in range(4)]
    for block, gate in zip(blocks, _BLOCKS):
        getattr(out.cell, f"w_{gate}")[...] = fp.w_all[block]
        getattr(out.cell, f"b_{gate}")[...] = fp.b_all[block]
    out.w_fc[...] = fp.w_fc
    out.b_fc[...] = fp.b_fc
    return out


def forward_window(window: np.ndarray, fp: FusedNetwork) -> tuple[float, tuple]:
    """Forward pass over a window of scalars; returns prediction and cache.

    The cache holds per-step arrays as rows of preallocated matrices:
    Z (concat inputs), GATES (f|i|o|cand activations), CPREV and CTANH.
    """
    if fp.input_dim != 1:
        raise DimensionError(f"scalar windows require input_dim 1, got {fp.input_dim}")
    hidden = fp.hidden_dim
    steps = len(window)
    if steps == 0:
        raise DimensionError("window is empty")

    Z = np.empty((steps, hidden + 1))
    GATES = np.empty((steps, 4 * hidden))
    CPREV = np.empty((steps, hidden))
    CTANH = np.empty((steps, hidden))

    h = np.zeros(hidden)
    c = np.zeros(hidden)
    for k in range(steps):
        z = Z[k]
        z[:hidden] = h
        z[hidden] = window[k]
        a = fp.w_all @ z
        a += fp.b_all
        ga = GATES[k]
        ga[: 3 * hidden] = sigmoid(a[: 3 * hidden])
        np.tanh(a[3 * hidden :], out=ga[3 * hidden :])
        CPREV[k] = c
        c = ga[:hidden] * c + ga[hidden : 2 * hidden] * ga[3 * hidden :]
        np.tanh(c, out=CTANH[k])
        h = ga[2 * hidden : 3 * hidden] * CTANH[k]

    pre = (fp.w_fc @ h + fp.b_fc).item()
    prediction = float(sigmoid(pre))
    return prediction, (Z, GATES, CPREV, CTANH, h, prediction)


def backward_window(d_prediction: float, cache: tuple, fp: FusedNetwork) -> FusedGradients:
    """Backward pass matching forward_window; gradients summed across steps."""
    Z, GATES, CPREV, CTANH, h_final, prediction = cache
    steps = Z.shape[0]
    hidden = fp.hidden_dim

    d_pre = d_prediction * prediction * (1.0 - prediction)
    dw_fc = d_pre * h_final[np.newaxis, :]
    db_fc = np.array([d_pre])
    dh = d_pre * fp.w_fc[0]
    dc = np.zeros(hidden)

    DA = np.empty((steps, 4 * hidden))
    w_all_t = fp.w_all.T
    for k in range(steps - 1, -1, -1):
        ga = GATES[k]
        f = ga[:hidden]
        i = ga[hidden : 2 * hidden]
        o = ga[2 * hidden : 3 * hidden]
        cand = ga[3 * hidden :]
        c_tanh = CTANH[k]

        do = dh * c_tanh
        dc_total = dc + dh * o * (1.0 - c_tanh * c_tanh)
        da = DA[k]
        da[:hidden] = (dc_total * CPREV[k]) * (f * (1.0 - f))
        da[hidden : 2 * hidden] = (dc_total * cand) * (i * (1.0 - i))
        da[2 * hidden : 3 * hidden] = do * (o * (1.0 - o))
        da[3 * hidden :] = (dc_total * i) * (1.0 - cand * cand)
        dc = dc_total * f
        dz = w_all_t @ da
        dh = dz[:hidden]

    # One matrix product replaces a rank-1 update per step; the sum over
    # steps is reassociated, which moves results by roundoff only.
    dw_all = DA.T @ Z
    db_all = DA.sum(axis=0)
    return FusedGradients(w_all=dw_all, b_all=db_all, w_fc=dw_fc, b_fc=db_fc)
