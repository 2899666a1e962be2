#!/usr/bin/env python3
# Copyright 2026 The pqnet Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Plot the CSV artifacts written by `pqnet train`, `pqnet sweep` and the
acceptance harness.

    plot_results.py build/tests/acceptance_out --out plots/

Every sweep_<axis>.csv becomes one accuracy-vs-level figure (mean and one
standard deviation over seeds, one line per strategy). Every metrics*.csv
becomes a loss and test-accuracy curve averaged over seeds.
"""

import argparse
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402


def plot_sweep(csv: pathlib.Path, out_dir: pathlib.Path) -> pathlib.Path:
    df = pd.read_csv(csv, dtype={"level": str})
    axis = df["axis"].iloc[0]
    order = list(dict.fromkeys(df["level"]))
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for strategy, group in df.groupby("strategy", sort=False):
        stats = group.groupby("level", sort=False)["accuracy"].agg(["mean", "std"]).reindex(order)
        ax.errorbar(range(len(order)), stats["mean"], yerr=stats["std"].fillna(0.0), marker="o",
                    capsize=3, label=strategy)
    ax.set_xticks(range(len(order)))
    ax.set_xticklabels(order)
    ax.set_xlabel(axis)
    ax.set_ylabel("test accuracy")
    ax.set_ylim(0.0, 1.02)
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    path = out_dir / f"{csv.stem}.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_metrics(csv: pathlib.Path, out_dir: pathlib.Path) -> pathlib.Path:
    df = pd.read_csv(csv)
    fig, (loss_ax, acc_ax) = plt.subplots(1, 2, figsize=(9, 3.5))
    for strategy, group in df.groupby("strategy", sort=False):
        curve = group.groupby("epoch")[["train_loss", "test_accuracy"]].mean()
        loss_ax.plot(curve.index, curve["train_loss"], label=strategy)
        acc_ax.plot(curve.index, curve["test_accuracy"], label=strategy)
    loss_ax.set_xlabel("epoch")
    loss_ax.set_ylabel("training loss")
    acc_ax.set_xlabel("epoch")
    acc_ax.set_ylabel("test accuracy")
    for ax in (loss_ax, acc_ax):
        ax.grid(alpha=0.3)
        ax.legend()
    fig.tight_layout()
    path = out_dir / f"{csv.stem}.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("inputs", nargs="+", type=pathlib.Path, help="CSV files or directories holding them")
    parser.add_argument("--out", type=pathlib.Path, default=pathlib.Path("plots"))
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    files = []
    for item in args.inputs:
        files.extend(sorted(item.glob("*.csv")) if item.is_dir() else [item])
    for csv in files:
        header = csv.read_text().split("\n", 1)[0]
        if header.startswith("axis,"):
            print(plot_sweep(csv, args.out))
        elif header.startswith("epoch,"):
            print(plot_metrics(csv, args.out))


if __name__ == "__main__":
    main()
