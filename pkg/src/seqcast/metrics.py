"""Error statistics over denormalized predictions.

Sign convention: error = predicted - actual, so systematic under-prediction
shows up as a negative mean. Standard deviations are population style
(divide by n). Both conventions are echoed in every output header the CLI
writes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PredictionPair:
    """One test month: what happened and what the model said."""

    target_month: tuple[int, int]
    actual: float
    predicted: float


@dataclass(frozen=True)
class ErrorSummary:
    n: int
    mean_error: float
    std_error: float
    mean_abs_error: float
    std_abs_error: float
    units: str


def summarize(pairs: list[PredictionPair], units: str = "") -> ErrorSummary:
    """Mean/spread of signed and absolute errors over a prediction run."""
    if not pairs:
        raise ValueError("cannot summarize an empty prediction list")
    errors = np.array([p.predicted - p.actual for p in pairs])
    abs_errors = np.abs(errors)
    return ErrorSummary(
        n=len(pairs),
        mean_error=float(errors.mean()),
        std_error=float(errors.std()),
        mean_abs_error=float(abs_errors.mean()),
        std_abs_error=float(abs_errors.std()),
        units=units,
    )


def errors_series(pairs: list[PredictionPair]) -> list[tuple[tuple[int, int], float]]:
    """Chronological (month, error) list in physical units."""
    if not pairs:
        raise ValueError("cannot list errors for an empty prediction list")
    ordered = sorted(pairs, key=lambda p: p.target_month)
    return [(p.target_month, p.predicted - p.actual) for p in ordered]
