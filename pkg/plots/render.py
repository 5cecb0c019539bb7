#!/usr/bin/env python3
"""Render mean-squared-error figures from aircomp sweep CSV files.

Reads the sweep table (``function,scheme,users,chuses,noise_db,runs,mse,
mse_stderr,infeasible_frac,seed``) and draws one figure per invocation:

* ``noise``  -- MSE versus noise power in dB (log y)
* ``users``  -- MSE versus user count (log x, log y)
* ``chuses`` -- MSE versus channel uses (log y)

Series are split by scheme and the remaining grid coordinates; the shared
scheme draws solid, TDMA dashed.  Plotted values are exactly the CSV mse
column (axis scaling only, no transformation), and every output file
embeds the plotted series as JSON metadata so the figure's data arrays
can be checked against the CSV byte for byte.

Usage: ``python plots/render.py --csv sweep.csv --figure noise --out fig.svg``
Exit codes: 0 success, 2 schema/usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Dict, List, Optional, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

REQUIRED_COLUMNS = ("function", "scheme", "users", "chuses", "noise_db", "mse")

FIGURES = {
    # figure kind -> (x column, x label, log-scale x)
    "noise": ("noise_db", "noise power in dB", False),
    "users": ("users", "users", True),
    "chuses": ("chuses", "channel uses", False),
}

MARKERS = {"mean": "^", "norm": "s"}


class SchemaError(ValueError):
    """CSV is missing a required column."""


def load_rows(csv_path: str) -> List[Dict[str, str]]:
    with open(csv_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in REQUIRED_COLUMNS:
            if column not in header:
                raise SchemaError(f"CSV is missing required column {column!r}")
        return list(reader)


def _series_key(row: Dict[str, str], x_column: str) -> Tuple[str, ...]:
    fixed = [c for c in ("function", "scheme", "users", "chuses", "noise_db")
             if c != x_column]
    return tuple(row[c] for c in fixed)


def _series_label(key: Tuple[str, ...], x_column: str) -> str:
    fixed = [c for c in ("function", "scheme", "users", "chuses", "noise_db")
             if c != x_column]
    parts = []
    for column, value in zip(fixed, key):
        if column == "function":
            parts.append(value)
        elif column == "scheme":
            parts.append(value.upper())
        elif column == "users":
            parts.append(f"K={value}")
        elif column == "chuses":
            parts.append(f"M={value}")
        else:
            parts.append(f"{value} dB")
    return " ".join(parts)


def build_series(rows: List[Dict[str, str]], figure: str):
    """Group rows into plottable series, each sorted by ascending x."""
    x_column, _, _ = FIGURES[figure]
    grouped: Dict[Tuple[str, ...], List[Tuple[float, float]]] = {}
    for row in rows:
        grouped.setdefault(_series_key(row, x_column), []).append(
            (float(row[x_column]), float(row["mse"])))
    series = []
    for key in sorted(grouped):
        points = sorted(grouped[key])
        series.append({
            "label": _series_label(key, x_column),
            "scheme": key[1],
            "x": [p[0] for p in points],
            "y": [p[1] for p in points],
        })
    return series


def render(csv_path: str, figure: str, out_path: str,
           fmt: Optional[str] = None):
    """Draw one figure and write it; returns the matplotlib Figure."""
    if figure not in FIGURES:
        raise ValueError(f"unknown figure kind {figure!r}; pick one of {sorted(FIGURES)}")
    rows = load_rows(csv_path)
    x_column, x_label, log_x = FIGURES[figure]

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    series = build_series(rows, figure)
    for entry in series:
        function = entry["label"].split()[0]
        ax.plot(entry["x"], entry["y"],
                linestyle="--" if entry["scheme"] == "tdma" else "-",
                marker=MARKERS.get(function, "o"),
                label=entry["label"])
    ax.set_yscale("log")
    if log_x:
        ax.set_xscale("log")
    ax.set_xlabel(x_label)
    ax.set_ylabel("mean squared error")
    ax.set_title(f"mean squared error vs {x_label}")
    if series:
        ax.legend(fontsize=8)
    fig.tight_layout()

    payload = json.dumps({"figure": figure, "series": series})
    if fmt is None:
        fmt = "png" if out_path.lower().endswith(".png") else "svg"
    if fmt == "svg":
        fig.savefig(out_path, format="svg", metadata={"Description": payload})
    else:
        fig.savefig(out_path, format=fmt, metadata={"Description": payload})
    return fig


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        description="Render MSE figures from aircomp sweep CSVs.")
    parser.add_argument("--csv", required=True, help="sweep CSV path")
    parser.add_argument("--figure", required=True, choices=sorted(FIGURES))
    parser.add_argument("--out", required=True, help="output image (.svg or .png)")
    args = parser.parse_args(argv)
    try:
        fig = render(args.csv, args.figure, args.out)
        plt.close(fig)
    except (SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
