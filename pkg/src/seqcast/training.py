"""MSE training loop: per-sample Adam updates over windowed samples.

Updates are online (batch size 1) and the sample order is chronological
unless shuffling is switched on, so a run is fully determined by its config
and samples. Divergence is an error, never a silent NaN.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .dataset import NormalizationSpec, WindowedSample
from .errors import DimensionError, DivergedError
from .fused import backward_window, forward_window, fuse, unfuse
from .network import NetworkParameters, init_network

log = logging.getLogger("seqcast.training")


@dataclass
class TrainConfig:
    hidden_dim: int = 100
    learning_rate: float = 0.001
    epochs: int = 100
    window: int = 12
    seed: int = 42
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_epsilon: float = 1e-8
    shuffle: bool = False
    # Global-norm gradient clip; None disables it. Early rainfall epochs can
    # spike gradients on extreme targets, so it defaults on.
    clip_norm: float | None = 5.0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.hidden_dim < 1 or self.window < 1:
            raise ValueError("hidden_dim and window must be >= 1")
        # learning_rate 0 is allowed so a zero-rate run provably leaves
        # parameters at their initialization.
        if self.learning_rate < 0:
            raise ValueError(f"learning_rate must be >= 0, got {self.learning_rate}")
        if not (0 < self.adam_beta1 < 1 and 0 < self.adam_beta2 < 1):
            raise ValueError("adam betas must lie strictly between 0 and 1")
        if self.adam_epsilon <= 0:
            raise ValueError(f"adam_epsilon must be > 0, got {self.adam_epsilon}")
        if self.clip_norm is not None and self.clip_norm <= 0:
            raise ValueError(f"clip_norm must be > 0 or None, got {self.clip_norm}")


@dataclass
class AdamState:
    """First/second moment accumulators keyed by parameter name, plus step count."""

    m: dict[str, np.ndarray]
    v: dict[str, np.ndarray]
    t: int = 0


@dataclass
class TrainReport:
    """Outcome of one training run."""

    epoch_losses: list[float]
    params: NetworkParameters
    normalization: NormalizationSpec | None
    config: TrainConfig = field(repr=False)


def mse_loss(prediction: float, target: float) -> tuple[float, float]:
    """Squared error and its derivative in the prediction."""
    diff = prediction - target
    return diff * diff, 2.0 * diff


def init_adam(p) -> AdamState:
    """Zeroed moment accumulators matching p.arrays()."""
    return AdamState(
        m={name: np.zeros_like(a) for name, a in p.arrays()},
        v={name: np.zeros_like(a) for name, a in p.arrays()},
        t=0,
    )


def adam_step(p, g, s: AdamState, cfg: TrainConfig):
    """One Adam update with bias correction; mutates p and s in place.

    m <- b1*m + (1-b1)*g; v <- b2*v + (1-b2)*g^2; then
    p <- p - lr * (m/(1-b1^t)) / (sqrt(v/(1-b2^t)) + eps), all elementwise.

    p and g are any pair of containers whose arrays() lists are congruent
    (same names, same shapes, same order), e.g. NetworkParameters with
    NetworkGradients, or their fused counterparts.
    """
    s.t += 1
    b1, b2 = cfg.adam_beta1, cfg.adam_beta2
    mc = 1.0 - b1**s.t
    vc = 1.0 - b2**s.t
    for (name, param), (gname, grad) in zip(p.arrays(), g.arrays()):
        if param.shape != grad.shape or name != gname:
            raise DimensionError(
                f"gradient {gname} shape {grad.shape} does not match parameter {name} {param.shape}"
            )
        m = s.m[name]
        v = s.v[name]
        np.multiply(m, b1, out=m)
        tmp = grad * (1.0 - b1)
        m += tmp
        np.multiply(v, b2, out=v)
        np.square(grad, out=tmp)
        tmp *= 1.0 - b2
        v += tmp
        # tmp becomes the bias-corrected denominator, then holds the step.
        np.divide(v, vc, out=tmp)
        np.sqrt(tmp, out=tmp)
        tmp += cfg.adam_epsilon
        step = m / mc
        step /= tmp
        step *= cfg.learning_rate
        param -= step
    return p, s


def clip_gradients(g, max_norm: float) -> float:
    """Scale all gradient arrays so their global L2 norm is at most max_norm.

    Returns the pre-clip norm.
    """
    total = 0.0
    for _, a in g.arrays():
        total += float(np.dot(a.reshape(-1), a.reshape(-1)))
    norm = math.sqrt(total)
    if norm > max_norm:
        scale = max_norm / norm
        for _, a in g.arrays():
            a *= scale
    return norm


def train(
    samples: list[WindowedSample],
    cfg: TrainConfig,
    normalization: NormalizationSpec | None = None,
) -> TrainReport:
    """Run the full training loop and report per-epoch mean losses.

    Each sample triggers forward pass, loss, backward pass and one Adam
    update. The optional normalization is echoed into the report so callers
    can persist model and scaling together.
    """
    if not samples:
        raise ValueError("cannot train on an empty sample list")
    for s in samples:
        if len(s.inputs) != cfg.window:
            raise DimensionError(
                f"sample for {s.target_month} has window {len(s.inputs)}, config says {cfg.window}"
            )

    params = init_network(1, cfg.hidden_dim, cfg.seed)
    # The loop runs on the stacked-gate layout; the math is step-identical to
    # forward_sequence/backward_sequence (tests enforce the equivalence).
    fused = fuse(params)
    adam = init_adam(fused)
    order_rng = np.random.default_rng(cfg.seed) if cfg.shuffle else None

    epoch_losses: list[float] = []
    for epoch in range(1, cfg.epochs + 1):
        if order_rng is not None:
            order = order_rng.permutation(len(samples))
        else:
            order = range(len(samples))

        total = 0.0
        for idx in order:
            sample = samples[idx]
            prediction, cache = forward_window(sample.inputs, fused)
            loss, d_prediction = mse_loss(prediction, sample.target)
            if not math.isfinite(loss):
                raise DivergedError(epoch, int(idx))
            total += loss
            grads = backward_window(d_prediction, cache, fused)
            if cfg.clip_norm is not None:
                clip_gradients(grads, cfg.clip_norm)
            adam_step(fused, grads, adam, cfg)

        mean_loss = total / len(samples)
        epoch_losses.append(mean_loss)
        log.info("epoch %d/%d: mean loss %.8g", epoch, cfg.epochs, mean_loss)

    return TrainReport(
        epoch_losses=epoch_losses,
        params=unfuse(fused, params),
        normalization=normalization,
        config=cfg,
    )
