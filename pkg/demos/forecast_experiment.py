"""Train a small forecaster on the bundled monthly data and score it.

Run from the repository root:

    python3 demos/forecast_experiment.py [temperature|rainfall]

This is the whole pipeline in one script: load the CSV, train on 1901-2013,
predict every month of 2014-2015 one step ahead, and print the error
statistics. A deliberately small network keeps the runtime under half a
minute; the library defaults (hidden_dim=100, epochs=100) track the full
experiment and take about two minutes per variable.
"""

import sys
import time

from seqcast.dataset import load_csv
from seqcast.metrics import errors_series, summarize
from seqcast.pipeline import VARIABLE_UNITS, one_step_predictions, train_variable
from seqcast.training import TrainConfig

variable = sys.argv[1] if len(sys.argv) > 1 else "temperature"

records = load_csv("data/monthly_weather_1901_2015.csv")
print(f"{len(records)} monthly records, "
      f"{records[0].year}-{records[0].month:02d} .. {records[-1].year}-{records[-1].month:02d}")

cfg = TrainConfig(hidden_dim=24, epochs=25, window=12, learning_rate=0.001, seed=42)
print(f"training {variable}: hidden {cfg.hidden_dim}, {cfg.epochs} epochs, "
      f"window {cfg.window} months")

started = time.perf_counter()
result = train_variable(records, variable, cfg)
print(f"done in {time.perf_counter() - started:.1f}s")

losses = result.report.epoch_losses
print(f"mean loss: epoch 1 {losses[0]:.6f} -> epoch {len(losses)} {losses[-1]:.6f}")

pairs = one_step_predictions(records, result.model)
summary = summarize(pairs, units=VARIABLE_UNITS[variable])

print(f"\n{summary.n} one-step predictions for 2014-2015 ({summary.units}):")
print(f"  mean error (predicted - actual): {summary.mean_error:+.3f}")
print(f"  std of errors:                   {summary.std_error:.3f}")
print(f"  mean absolute error:             {summary.mean_abs_error:.3f}")
print(f"  std of absolute errors:          {summary.std_abs_error:.3f}")

print("\nper-month errors:")
for (year, month), err in errors_series(pairs):
    bar = "#" * min(40, int(abs(err) / summary.mean_abs_error * 10)) if summary.mean_abs_error else ""
    print(f"  {year}-{month:02d}  {err:+9.3f}  {bar}")
