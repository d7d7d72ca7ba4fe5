"""End-to-end experiment plumbing shared by the CLI, demos and tests.

Covers the canonical run: fit normalization on the training years, train on
windowed samples, then either score the held-out months one step ahead with
actual history, or roll the model forward feeding its own predictions back.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dataset import (
    NormalizationSpec,
    SeriesDataset,
    WeatherRecord,
    fit_normalization,
    make_windows,
    split,
)
from .errors import DataError
from .metrics import PredictionPair
from .model_io import LoadedModel
from .network import NetworkParameters, forward_sequence
from .training import TrainConfig, TrainReport, train

DEFAULT_CUTOFF_YEAR = 2013

VARIABLE_UNITS = {"temperature": "degrees Celsius", "rainfall": "mm"}


@dataclass
class ExperimentResult:
    """A trained model plus its training report."""

    report: TrainReport
    model: LoadedModel


def train_variable(
    records: list[WeatherRecord],
    variable: str,
    cfg: TrainConfig,
    cutoff_year: int = DEFAULT_CUTOFF_YEAR,
) -> ExperimentResult:
    """Train one variable on everything up to the cutoff year."""
    series = SeriesDataset(records, variable)
    train_split, _ = split(series, cutoff_year)
    norm = fit_normalization(train_split)
    samples = make_windows(train_split, norm, cfg.window)
    report = train(samples, cfg, normalization=norm)
    model = LoadedModel(
        params=report.params, normalization=norm, window=cfg.window, variable=variable
    )
    return ExperimentResult(report=report, model=model)


def one_step_predictions(
    records: list[WeatherRecord],
    model: LoadedModel,
    cutoff_year: int = DEFAULT_CUTOFF_YEAR,
) -> list[PredictionPair]:
    """Score every month after the cutoff, one step ahead from actual history.

    Each prediction uses the preceding ``model.window`` observed values, so
    early test months reach back into the training years. Raises DataError
    when the data lacks that history or holds no test months at all.
    """
    series = SeriesDataset(records, model.variable)
    months = series.months()
    test_positions = [i for i, (year, _) in enumerate(months) if year > cutoff_year]
    if not test_positions:
        raise DataError(f"no months after the cutoff year {cutoff_year} to evaluate")
    if test_positions[0] < model.window:
        first = months[test_positions[0]]
        raise DataError(
            f"insufficient history: month {first[0]}-{first[1]:02d} needs "
            f"{model.window} preceding observations, data provides {test_positions[0]}"
        )

    normalized = model.normalization.normalize(series.values())
    actual = series.values()
    pairs = []
    for pos in test_positions:
        window = normalized[pos - model.window : pos]
        prediction, _ = forward_sequence(window, model.params)
        predicted = float(model.normalization.denormalize(prediction))
        pairs.append(
            PredictionPair(target_month=months[pos], actual=float(actual[pos]), predicted=predicted)
        )
    return pairs


def next_month(year: int, month: int) -> tuple[int, int]:
    return (year + 1, 1) if month == 12 else (year, month + 1)


def rollout_forecast(
    records: list[WeatherRecord],
    model: LoadedModel,
    horizon: int,
) -> list[tuple[tuple[int, int], float]]:
    """Forecast past the end of the data by feeding predictions back as inputs.

    Unlike one-step evaluation, months beyond the first are conditioned on
    the model's own output, so errors compound with the horizon.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    series = SeriesDataset(records, model.variable)
    if len(series) < model.window:
        raise DataError(
            f"rollout needs at least {model.window} observations, got {len(series)}"
        )

    window = list(model.normalization.normalize(series.values()[-model.window :]))
    year, month = series.months()[-1]
    out = []
    for _ in range(horizon):
        prediction, _ = forward_sequence(window, model.params)
        year, month = next_month(year, month)
        out.append(((year, month), float(model.normalization.denormalize(prediction))))
        window = window[1:] + [prediction]
    return out
