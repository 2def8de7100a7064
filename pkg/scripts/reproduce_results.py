#!/usr/bin/env python3
"""Regenerate the headline result files into results/.

Produces:
  results/table1.csv  - step-size study of I at alpha = 1
  results/scan.csv    - phase angle B and both I computations over alpha
  results/reduce.txt  - orbit parameters of the two named metrics

Figures can then be rendered with the nilflow-plots package:
  nilflow-plots fig1 results/scan.csv results/fig1.png
  nilflow-plots convergence results/table1.csv results/convergence.png
"""

import pathlib
import sys
import time

from nilflow.cli import main

OUT = pathlib.Path(__file__).resolve().parent.parent / "results"


def run(label, argv):
    t0 = time.time()
    code = main(argv)
    print(f"{label}: exit {code} ({time.time() - t0:.1f}s)")
    if code != 0:
        sys.exit(code)


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    run("table1", ["table1", "--out", str(OUT / "table1.csv")])
    run("scan", ["scan", "--alpha-min", "0.5", "--alpha-max", "10.0",
                 "--steps", "96", "--out", str(OUT / "scan.csv")])
    with open(OUT / "reduce.txt", "w") as f:
        pass
    run("reduce (subriemannian)",
        ["reduce", "--k1", "1", "--k2", "1", "--out", str(OUT / "reduce.txt")])
    print(f"results written to {OUT}")
