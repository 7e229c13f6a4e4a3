#!/usr/bin/env python3
"""End-to-end desk-scale experiment: generate, train, predict, analyze, fit.

Produces every toolkit artifact in one output directory.  With --fast the
dataset shrinks to a smoke-test size; the default reproduces the desk-scale
study (about two minutes on a laptop).
"""

import argparse
import os
import sys

from eitqhe.cli import main as eitqhe


def run(*argv):
    code = eitqhe(list(argv))
    if code != 0:
        sys.exit(code)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="desk_run")
    parser.add_argument("--count", type=int, default=50_000)
    parser.add_argument("--seed", type=int, default=20240)
    parser.add_argument("--regime", default="low", choices=("low", "mid", "high"))
    parser.add_argument("--epochs", type=int, default=100)
    parser.add_argument("--fast", action="store_true",
                        help="2000 records, 5 epochs")
    parser.add_argument("--svg", action="store_true")
    args = parser.parse_args()

    count = 2000 if args.fast else args.count
    epochs = 5 if args.fast else args.epochs
    os.makedirs(args.out, exist_ok=True)
    data = os.path.join(args.out, "dataset.csv")
    model = os.path.join(args.out, "model.txt")
    pred = os.path.join(args.out, "predictions.csv")
    analysis_dir = os.path.join(args.out, "analysis")

    run("gen-data", "--count", str(count), "--seed", str(args.seed),
        "--out", data)
    run("train", "--data", data, "--layers", "128,128", "--act", "tanh",
        "--lr", "0.01", "--epochs", str(epochs), "--seed", str(args.seed),
        "--out", model)
    run("predict", "--model", model, "--in", data, "--out", pred)
    analyze = ["analyze", "--pred", pred, "--regime", args.regime,
               "--out", analysis_dir]
    if args.svg:
        analyze.append("--svg")
    run(*analyze)
    print(f"\nartifacts in {args.out}/")


if __name__ == "__main__":
    main()
