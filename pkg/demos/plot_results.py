"""Plot the CSV files the command line tool writes.

First produce the outputs, then point this script at the directory:

    python3 -m seqcast train --data data/monthly_weather_1901_2015.csv \
        --variable temperature --out runs/temperature
    python3 -m seqcast evaluate --data data/monthly_weather_1901_2015.csv \
        --model runs/temperature/temperature_model.seqcast --out runs/temperature
    python3 demos/plot_results.py runs/temperature temperature

Writes <variable>_loss.png and <variable>_predictions.png next to the CSVs.
"""

import csv
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

if len(sys.argv) != 3:
    sys.exit("usage: plot_results.py <output-dir> <temperature|rainfall>")
out_dir = Path(sys.argv[1])
variable = sys.argv[2]


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    return rows[0], rows[1:]


# loss curve
_, rows = read_rows(out_dir / f"{variable}_loss.csv")
epochs = [int(r[0]) for r in rows]
losses = [float(r[1]) for r in rows]

fig, ax = plt.subplots(figsize=(7, 4))
ax.plot(epochs, losses)
ax.set_yscale("log")
ax.set_xlabel("epoch")
ax.set_ylabel("mean training loss (normalized MSE)")
ax.set_title(f"{variable}: training loss")
fig.tight_layout()
loss_png = out_dir / f"{variable}_loss.png"
fig.savefig(loss_png, dpi=120)
print("wrote", loss_png)

# predicted vs actual over the test months
_, rows = read_rows(out_dir / f"{variable}_predictions.csv")
labels = [f"{r[0]}-{int(r[1]):02d}" for r in rows]
actual = [float(r[2]) for r in rows]
predicted = [float(r[3]) for r in rows]

fig, ax = plt.subplots(figsize=(9, 4))
ax.plot(labels, actual, marker="o", label="actual")
ax.plot(labels, predicted, marker="s", label="predicted")
ax.set_ylabel(f"{variable}")
ax.set_title(f"{variable}: one-step-ahead predictions, 2014-2015")
ax.legend()
ax.tick_params(axis="x", rotation=75, labelsize=7)
fig.tight_layout()
pred_png = out_dir / f"{variable}_predictions.png"
fig.savefig(pred_png, dpi=120)
print("wrote", pred_png)
