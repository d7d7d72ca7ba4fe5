"""LSTM forecasting for monthly weather series, built on plain numpy.

The package trains a single-layer LSTM with a sigmoid readout on min-max
normalized monthly values and evaluates one-step-ahead predictions on the
held-out final years of the record. Everything is deterministic for a fixed
seed and runs in float64.
"""

from .cell import CellParameters, CellState, cell_backward, cell_forward, init_cell, zero_state
from .dataset import (
    NormalizationSpec,
    SeriesDataset,
    VARIABLES,
    WeatherRecord,
    WindowedSample,
    fit_normalization,
    load_csv,
    make_windows,
    split,
)
from .errors import (
    BadCellError,
    DataError,
    DimensionError,
    DivergedError,
    MalformedModelError,
    MissingColumnError,
    ModelFileError,
    ModelShapeError,
    ModelVersionError,
    SeqcastError,
)
from .metrics import ErrorSummary, PredictionPair, errors_series, summarize
from .model_io import LoadedModel, load_model, save_model
from .network import NetworkParameters, backward_sequence, forward_sequence, init_network
from .pipeline import (
    ExperimentResult,
    one_step_predictions,
    rollout_forecast,
    train_variable,
)
from .training import AdamState, TrainConfig, TrainReport, adam_step, init_adam, mse_loss, train

__version__ = "0.1.0"

__all__ = [
    "AdamState",
    "BadCellError",
    "CellParameters",
    "CellState",
    "DataError",
    "DimensionError",
    "DivergedError",
    "ErrorSummary",
    "ExperimentResult",
    "LoadedModel",
    "MalformedModelError",
    "MissingColumnError",
    "ModelFileError",
    "ModelShapeError",
    "ModelVersionError",
    "NetworkParameters",
    "NormalizationSpec",
    "PredictionPair",
    "SeqcastError",
    "SeriesDataset",
    "TrainConfig",
    "TrainReport",
    "VARIABLES",
    "WeatherRecord",
    "WindowedSample",
    "adam_step",
    "backward_sequence",
    "cell_backward",
    "cell_forward",
    "errors_series",
    "fit_normalization",
    "forward_sequence",
    "init_adam",
    "init_cell",
    "init_network",
    "load_csv",
    "load_model",
    "make_windows",
    "mse_loss",
    "one_step_predictions",
    "rollout_forecast",
    "save_model",
    "split",
    "summarize",
    "train",
    "train_variable",
    "zero_state",
    "__version__",
]
