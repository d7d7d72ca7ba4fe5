"""Command-line entry point: train, evaluate and predict subcommands.

Exit codes: 0 success, 1 usage error, 2 data or model file error, 3 numeric
failure (diverged training). The SEQCAST_LOG environment variable (error,
info, debug) controls stderr logging; output files are plain CSV with a
one-line header comment carrying units and conventions, written atomically.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
import time
from dataclasses import asdict

from . import __version__
from .dataset import VARIABLES, load_csv
from .errors import DataError, DimensionError, DivergedError, ModelFileError, SeqcastError
from .metrics import summarize
from .model_io import load_model, save_model
from .pipeline import (
    DEFAULT_CUTOFF_YEAR,
    VARIABLE_UNITS,
    one_step_predictions,
    rollout_forecast,
    train_variable,
)
from .training import TrainConfig

log = logging.getLogger("seqcast.cli")

_LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}

# Config-file keys mirror the long flags; flags win on conflict.
_CONFIG_KEYS = {
    "data": str,
    "variable": str,
    "out": str,
    "model": str,
    "window": int,
    "hidden": int,
    "lr": float,
    "epochs": int,
    "seed": int,
    "horizon": int,
    "shuffle": bool,
    "no_clip": bool,
}


class UsageError(SeqcastError):
    """Bad invocation; exits with code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"config value {raw!r} is not a boolean")


def _read_config_file(path) -> dict:
    """key=value lines; blank lines and # comments are ignored."""
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    out = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise UsageError(f"{path}:{line_no}: expected key=value, got {stripped!r}")
        key, _, value = stripped.partition("=")
        key = key.strip().lower().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{line_no}: unknown config key {key!r}")
        caster = _CONFIG_KEYS[key]
        try:
            out[key] = _parse_bool(value) if caster is bool else caster(value.strip())
        except ValueError:
            raise UsageError(f"{path}:{line_no}: bad value for {key}: {value.strip()!r}") from None
    return out


def _setting(args, config: dict, key: str, default=None):
    """Flag value if given, else config-file value, else the default."""
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return default


def _require(value, flag: str):
    if value is None:
        raise UsageError(f"missing required option {flag}")
    return value


def _write_atomic(path: str, data: bytes) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".seqcast-tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class _OutputSet:
    """Tracks written files so a failed command leaves nothing partial behind."""

    def __init__(self, out_dir: str):
        self.out_dir = out_dir
        self.written: list[str] = []
        os.makedirs(out_dir, exist_ok=True)

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def write_text(self, name: str, text: str) -> str:
        path = self.path(name)
        _write_atomic(path, text.encode("utf-8"))
        self.written.append(path)
        return path

    def discard_all(self) -> None:
        for path in self.written:
            try:
                os.unlink(path)
            except OSError:
                pass


def _loss_csv(variable: str, losses: list[float]) -> str:
    lines = [f"# per-epoch mean training loss (MSE in normalized units); variable={variable}"]
    lines.append("epoch,mean_loss")
    for epoch, loss in enumerate(losses, start=1):
        lines.append(f"{epoch},{float(loss)!r}")
    return "\n".join(lines) + "\n"


def _predictions_csv(variable: str, pairs) -> str:
    units = VARIABLE_UNITS[variable]
    lines = [
        f"# one-step-ahead predictions for {variable}; error = predicted - actual; units: {units}"
    ]
    lines.append("year,month,actual,predicted,error")
    for p in pairs:
        year, month = p.target_month
        err = p.predicted - p.actual
        lines.append(f"{year},{month},{float(p.actual)!r},{float(p.predicted)!r},{float(err)!r}")
    return "\n".join(lines) + "\n"


def _summary_csv(variable: str, summary) -> str:
    lines = [
        f"# {variable} error summary; error = predicted - actual; "
        f"standard deviations are population (divide by n); units: {summary.units}"
    ]
    lines.append("statistic,value")
    lines.append(f"n,{summary.n}")
    for name in ("mean_error", "std_error", "mean_abs_error", "std_abs_error"):
        lines.append(f"{name},{float(getattr(summary, name))!r}")
    return "\n".join(lines) + "\n"


def _rollout_csv(variable: str, rows) -> str:
    units = VARIABLE_UNITS[variable]
    lines = [
        f"# iterative rollout forecast for {variable}: predictions feed back as inputs, "
        f"so errors compound with the horizon; units: {units}"
    ]
    lines.append("year,month,predicted")
    for (year, month), value in rows:
        lines.append(f"{year},{month},{float(value)!r}")
    return "\n".join(lines) + "\n"


def _build_parser() -> _Parser:
    parser = _Parser(prog="seqcast", description="LSTM monthly weather forecasting")
    parser.add_argument("--version", action="version", version=f"seqcast {__version__}")
    sub = parser.add_subparsers(dest="command")

    def add_common(p):
        p.add_argument("--data", help="weather CSV path")
        p.add_argument("--out", help="output directory (default: current directory)")
        p.add_argument("--config", help="key=value config file; flags win on conflict")

    p_train = sub.add_parser("train", help="train a model for one variable")
    add_common(p_train)
    p_train.add_argument("--variable", choices=VARIABLES, help="which series to model")
    p_train.add_argument("--window", type=int, help="input window length in months (default 12)")
    p_train.add_argument("--hidden", type=int, help="LSTM hidden units (default 100)")
    p_train.add_argument("--lr", type=float, help="Adam learning rate (default 0.001)")
    p_train.add_argument("--epochs", type=int, help="training epochs (default 100)")
    p_train.add_argument("--seed", type=int, help="RNG seed (default 42)")
    p_train.add_argument("--shuffle", action="store_true", default=None,
                         help="shuffle sample order each epoch (seeded)")
    p_train.add_argument("--no-clip", dest="no_clip", action="store_true", default=None,
                         help="disable global-norm gradient clipping")

    p_eval = sub.add_parser("evaluate", help="score a model on the held-out test years")
    add_common(p_eval)
    p_eval.add_argument("--model", help="model file written by train")
    p_eval.add_argument("--variable", choices=VARIABLES,
                        help="optional cross-check against the model's variable")

    p_pred = sub.add_parser("predict", help="rollout forecast past the end of the data")
    add_common(p_pred)
    p_pred.add_argument("--model", help="model file written by train")
    p_pred.add_argument("--horizon", type=int, help="months to forecast (default 12)")

    return parser


def cmd_train(args, config: dict) -> int:
    data_path = _require(_setting(args, config, "data"), "--data")
    variable = _require(_setting(args, config, "variable"), "--variable")
    if variable not in VARIABLES:
        raise UsageError(f"unknown variable {variable!r}, expected one of {VARIABLES}")
    out_dir = _setting(args, config, "out", ".")

    cfg = TrainConfig(
        hidden_dim=_setting(args, config, "hidden", 100),
        learning_rate=_setting(args, config, "lr", 0.001),
        epochs=_setting(args, config, "epochs", 100),
        window=_setting(args, config, "window", 12),
        seed=_setting(args, config, "seed", 42),
        shuffle=bool(_setting(args, config, "shuffle", False)),
        clip_norm=None if _setting(args, config, "no_clip", False) else 5.0,
    )

    records = load_csv(data_path)
    log.info("loaded %d records from %s", len(records), data_path)

    started = time.perf_counter()
    result = train_variable(records, variable, cfg)
    duration = time.perf_counter() - started

    outputs = _OutputSet(out_dir)
    try:
        model_path = outputs.path(f"{variable}_model.seqcast")
        save_model(
            model_path,
            result.model.params,
            result.model.normalization,
            window=cfg.window,
            variable=variable,
        )
        outputs.written.append(model_path)
        outputs.write_text(f"{variable}_loss.csv", _loss_csv(variable, result.report.epoch_losses))
        manifest = {
            "tool": "seqcast",
            "version": __version__,
            "command": "train",
            "variable": variable,
            "dataset_path": str(data_path),
            "dataset_rows": len(records),
            "model_file": model_path,
            "train_cutoff_year": DEFAULT_CUTOFF_YEAR,
            "config": asdict(cfg),
            "duration_seconds": duration,
        }
        outputs.write_text(f"{variable}_manifest.json", json.dumps(manifest, indent=2) + "\n")
    except BaseException:
        outputs.discard_all()
        raise

    print(
        f"trained {variable}: {cfg.epochs} epochs, "
        f"final mean loss {result.report.epoch_losses[-1]:.6g}, model -> {model_path}"
    )
    return 0


def cmd_evaluate(args, config: dict) -> int:
    model_path = _require(_setting(args, config, "model"), "--model")
    data_path = _require(_setting(args, config, "data"), "--data")
    out_dir = _setting(args, config, "out", ".")

    model = load_model(model_path)
    if model.variable not in VARIABLES:
        raise DataError(
            f"model file does not record a known variable (got {model.variable!r}); "
            "cannot evaluate safely"
        )
    requested = _setting(args, config, "variable")
    if requested is not None and requested != model.variable:
        raise UsageError(
            f"model was trained on {model.variable!r} but --variable says {requested!r}"
        )

    records = load_csv(data_path)
    pairs = one_step_predictions(records, model)
    summary = summarize(pairs, units=VARIABLE_UNITS[model.variable])

    outputs = _OutputSet(out_dir)
    try:
        outputs.write_text(f"{model.variable}_predictions.csv", _predictions_csv(model.variable, pairs))
        outputs.write_text(f"{model.variable}_summary.csv", _summary_csv(model.variable, summary))
    except BaseException:
        outputs.discard_all()
        raise

    print(
        f"evaluated {model.variable} on {summary.n} months: "
        f"mean error {summary.mean_error:+.4f} {summary.units}, "
        f"std {summary.std_error:.4f}, "
        f"absolute deviation {summary.mean_abs_error:.4f} +- {summary.std_abs_error:.4f}"
    )
    return 0


def cmd_predict(args, config: dict) -> int:
    model_path = _require(_setting(args, config, "model"), "--model")
    data_path = _require(_setting(args, config, "data"), "--data")
    out_dir = _setting(args, config, "out", ".")
    horizon = _setting(args, config, "horizon", 12)
    if horizon < 1:
        raise UsageError(f"--horizon must be >= 1, got {horizon}")

    model = load_model(model_path)
    records = load_csv(data_path)
    rows = rollout_forecast(records, model, horizon)

    outputs = _OutputSet(out_dir)
    try:
        outputs.write_text(f"{model.variable}_rollout.csv", _rollout_csv(model.variable, rows))
    except BaseException:
        outputs.discard_all()
        raise

    for (year, month), value in rows:
        print(f"{year}-{month:02d}: {value:.4f}")
    return 0


def main(argv=None) -> int:
    level_name = os.environ.get("SEQCAST_LOG", "error").lower()
    if level_name not in _LOG_LEVELS:
        print(f"seqcast: unknown SEQCAST_LOG level {level_name!r}, using 'error'", file=sys.stderr)
        level_name = "error"
    # force=True so the level tracks SEQCAST_LOG even when main() is called
    # repeatedly in one process, as the test suite does
    logging.basicConfig(
        level=_LOG_LEVELS[level_name],
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )

    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required: train, evaluate or predict")
        config = _read_config_file(args.config) if args.config else {}
        if args.command == "train":
            return cmd_train(args, config)
        if args.command == "evaluate":
            return cmd_evaluate(args, config)
        return cmd_predict(args, config)
    except UsageError as exc:
        print(f"seqcast: usage error: {exc}", file=sys.stderr)
        return 1
    except (DataError, ModelFileError, DimensionError) as exc:
        print(f"seqcast: data error: {exc}", file=sys.stderr)
        return 2
    except DivergedError as exc:
        print(f"seqcast: numeric error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
