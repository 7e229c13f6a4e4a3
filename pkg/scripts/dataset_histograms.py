#!/usr/bin/env python3
"""Column histograms for a generated dataset (the distribution study).

Emits one CSV per column plus a regime tally; quantum-number columns use
unit bins on their generation ranges.
"""

import argparse
import os

import numpy as np

from eitqhe.datagen import (
    Regime,
    column_values,
    histogram,
    read_dataset,
    regime_label,
)

UNIT_BIN_COLUMNS = {
    "n1": (3, 12), "l1": (1, 10), "j1": (0.5, 10.5),
    "n2": (4, 13), "l2": (1, 10), "j2": (0.5, 10.5),
    "n3": (6, 14), "l3": (1, 11), "j3": (0.5, 11.5),
    "z": (1, 55), "a": (1, 137),
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data", required=True)
    parser.add_argument("--out", default="histograms")
    parser.add_argument("--bins", type=int, default=40,
                        help="bin count for continuous columns")
    args = parser.parse_args()

    records = read_dataset(args.data)
    os.makedirs(args.out, exist_ok=True)
    for column in ("n1", "l1", "j1", "omega_c_s", "power_s", "t0_s",
                   "t_ratio", "z", "a", "n2", "l2", "j2", "n3", "l3", "j3"):
        if column in UNIT_BIN_COLUMNS:
            lo, hi = UNIT_BIN_COLUMNS[column]
            edges = np.arange(lo - 0.5, hi + 1.0, 1.0)
            values = column_values(records, column)
            edges = edges[(edges >= values.min() - 1) & (edges <= values.max() + 1)]
            table = histogram(records, column, bins=list(edges))
        else:
            table = histogram(records, column, bins=args.bins)
        table.write_csv(os.path.join(args.out, f"hist_{column}.csv"))
    tallies = {Regime.LOW: 0, Regime.MID: 0, Regime.HIGH: 0}
    for rec in records:
        tallies[regime_label(rec.t_ratio)] += 1
    with open(os.path.join(args.out, "regimes.txt"), "w") as fh:
        for regime, count in tallies.items():
            fh.write(f"{regime.value}={count}\n")
    print(f"histograms for {len(records)} records in {args.out}/")


if __name__ == "__main__":
    main()
