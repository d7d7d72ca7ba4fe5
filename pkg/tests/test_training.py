import math

import numpy as np
import pytest

from seqcast.dataset import (
    SeriesDataset,
    WeatherRecord,
    WindowedSample,
    fit_normalization,
    make_windows,
)
from seqcast.errors import DimensionError, DivergedError
from seqcast.network import init_network
from seqcast.training import (
    TrainConfig,
    adam_step,
    clip_gradients,
    init_adam,
    mse_loss,
    train,
)


class _Bundle:
    """Minimal parameter/gradient container for exercising the optimizer."""

    def __init__(self, **named):
        self._named = {k: np.asarray(v, dtype=np.float64) for k, v in named.items()}
        for k, v in self._named.items():
            setattr(self, k, v)

    def arrays(self):
        return list(self._named.items())


def sine_records(first_year: int, years: int) -> list[WeatherRecord]:
    records = []
    for year in range(first_year, first_year + years):
        for month in range(1, 13):
            phase = 2.0 * math.pi * (month - 1) / 12.0
            records.append(
                WeatherRecord(
                    year=year,
                    month=month,
                    temperature=22.0 + 6.0 * math.sin(phase) + 0.01 * (year - first_year),
                    rainfall=max(0.0, 150.0 + 140.0 * math.sin(phase - 1.0)),
                )
            )
    return records


def small_samples(window: int = 6) -> list[WindowedSample]:
    data = SeriesDataset(sine_records(2000, 5), "temperature")
    return make_windows(data, fit_normalization(data), window=window)


def test_mse_loss_value_and_derivative():
    loss, d = mse_loss(0.7, 0.4)
    assert abs(loss - 0.09) < 1e-15
    assert abs(d - 0.6) < 1e-15
    assert mse_loss(0.5, 0.5) == (0.0, 0.0)


def test_adam_hand_case():
    # Scalar parameter 1.0, constant gradient 2.0, lr 0.1, default betas.
    # mpmath at 50 digits: after one step theta = 0.9000000005,
    # after two steps theta = 0.800000001; bias corrections cancel for a
    # constant gradient, so both steps move by the same amount.
    p = _Bundle(a=[1.0])
    g = _Bundle(a=[2.0])
    cfg = TrainConfig(learning_rate=0.1)
    state = init_adam(p)

    adam_step(p, g, state, cfg)
    assert state.t == 1
    assert abs(p.a[0] - 0.9000000005) < 1e-15
    assert abs(state.m["a"][0] - 0.2) < 1e-16
    assert abs(state.v["a"][0] - 0.004) < 1e-17

    adam_step(p, g, state, cfg)
    assert abs(p.a[0] - 0.800000001) < 1e-15
    assert abs(state.m["a"][0] - 0.38) < 1e-15
    assert abs(state.v["a"][0] - 0.007996) < 1e-16


def test_adam_zero_learning_rate_freezes_parameters():
    p = _Bundle(a=[1.5, -2.0])
    g = _Bundle(a=[3.0, 4.0])
    state = init_adam(p)
    adam_step(p, g, state, TrainConfig(learning_rate=0.0))
    assert np.array_equal(p.a, np.array([1.5, -2.0]))
    # moments still accumulate, only the parameter step is scaled away
    assert state.m["a"][0] != 0.0


def test_adam_rejects_incongruent_gradients():
    p = _Bundle(a=[1.0, 2.0])
    g = _Bundle(a=[[1.0, 2.0]])
    with pytest.raises(DimensionError):
        adam_step(p, g, init_adam(p), TrainConfig())


def test_clip_gradients_scales_only_above_threshold():
    g = _Bundle(u=[3.0], v=[4.0])
    norm = clip_gradients(g, 10.0)
    assert norm == 5.0
    assert g.u[0] == 3.0 and g.v[0] == 4.0  # untouched below the threshold

    norm = clip_gradients(g, 1.0)
    assert norm == 5.0
    assert abs(g.u[0] - 0.6) < 1e-15 and abs(g.v[0] - 0.8) < 1e-15
    assert abs(math.hypot(g.u[0], g.v[0]) - 1.0) < 1e-12


@pytest.mark.parametrize(
    "kwargs",
    [
        {"epochs": 0},
        {"hidden_dim": 0},
        {"window": 0},
        {"learning_rate": -0.1},
        {"adam_beta1": 1.0},
        {"adam_beta2": 0.0},
        {"adam_epsilon": 0.0},
        {"clip_norm": 0.0},
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        TrainConfig(**kwargs)


def test_config_allows_disabled_clipping():
    assert TrainConfig(clip_norm=None).clip_norm is None


def test_train_is_deterministic():
    cfg = TrainConfig(hidden_dim=6, epochs=3, window=6, seed=7)
    samples = small_samples()
    a = train(samples, cfg)
    b = train(samples, cfg)
    assert a.epoch_losses == b.epoch_losses
    for (name, arr_a), (_, arr_b) in zip(a.params.arrays(), b.params.arrays()):
        assert np.array_equal(arr_a, arr_b), name
    assert len(a.epoch_losses) == 3


def test_train_zero_learning_rate_keeps_initialization():
    cfg = TrainConfig(hidden_dim=5, epochs=2, window=6, seed=13, learning_rate=0.0)
    report = train(small_samples(), cfg)
    reference = init_network(1, 5, seed=13)
    for (name, got), (_, want) in zip(report.params.arrays(), reference.arrays()):
        assert np.array_equal(got, want), name
    # loss is constant when nothing moves
    assert report.epoch_losses[0] == report.epoch_losses[1]


def test_train_shuffle_is_seeded():
    samples = small_samples()
    shuffled = TrainConfig(hidden_dim=5, epochs=2, window=6, seed=3, shuffle=True)
    a = train(samples, shuffled)
    b = train(samples, shuffled)
    assert a.epoch_losses == b.epoch_losses
    ordered = train(samples, TrainConfig(hidden_dim=5, epochs=2, window=6, seed=3))
    assert a.epoch_losses != ordered.epoch_losses


def test_train_converges_on_a_constant_target():
    sample = WindowedSample(inputs=np.full(6, 0.4), target=0.6, target_month=(2001, 1))
    cfg = TrainConfig(hidden_dim=4, epochs=300, window=6, seed=1, learning_rate=0.01)
    report = train([sample], cfg)
    assert report.epoch_losses[9] < report.epoch_losses[0]
    assert min(report.epoch_losses) < 1e-4


def test_train_raises_on_non_finite_loss():
    bad = WindowedSample(inputs=np.full(6, np.nan), target=0.5, target_month=(2001, 1))
    cfg = TrainConfig(hidden_dim=4, epochs=2, window=6, seed=1)
    with pytest.raises(DivergedError) as exc:
        train([bad], cfg)
    assert exc.value.epoch == 1
    assert exc.value.sample_index == 0


def test_train_rejects_window_mismatch():
    cfg = TrainConfig(hidden_dim=4, epochs=1, window=12)
    with pytest.raises(DimensionError):
        train(small_samples(window=6), cfg)


def test_train_rejects_empty_sample_list():
    with pytest.raises(ValueError):
        train([], TrainConfig())


def test_train_report_carries_normalization():
    data = SeriesDataset(sine_records(2000, 5), "temperature")
    norm = fit_normalization(data)
    samples = make_windows(data, norm, window=6)
    report = train(samples, TrainConfig(hidden_dim=4, epochs=1, window=6), normalization=norm)
    assert report.normalization is norm
