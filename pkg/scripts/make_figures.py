#!/usr/bin/env python3
"""Render all five preset boundary curves as SVG (plus the c = 500 variant
of preset 5) into ./figures_out.  A quick visual sanity check of the maps."""
import pathlib
import sys

from qheine.cli import main

OUT = pathlib.Path("figures_out")


def run():
    OUT.mkdir(exist_ok=True)
    jobs = [(["figure", str(n), "--out", str(OUT / f"figure{n}.svg")], n)
            for n in (1, 2, 3, 4, 5)]
    jobs.append((["figure", "5", "--c", "500",
                  "--out", str(OUT / "figure5_c500.svg")], 5))
    for argv, _ in jobs:
        rc = main(argv)
        if rc != 0:
            return rc
    print(f"figures written to {OUT}/")
    return 0


if __name__ == "__main__":
    sys.exit(run())
