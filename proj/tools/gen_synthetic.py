#!/usr/bin/env python3
"""Writes a synthetic age/year mortality table in the CSV layout read by mortgp.

Log rates follow a Gompertz age slope with a steady yearly decline and a
smooth age-period wiggle; deaths are Poisson around L * rate.
"""
import argparse
import csv
import math

import numpy as np


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default="data/synthetic_male.csv")
    p.add_argument("--ages", default="50-84")
    p.add_argument("--years", default="1999-2016")
    p.add_argument("--seed", type=int, default=2016)
    args = p.parse_args()

    a0, a1 = map(int, args.ages.split("-"))
    y0, y1 = map(int, args.years.split("-"))
    rng = np.random.default_rng(args.seed)
    with open(args.out, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["age", "year", "deaths", "exposure"])
        for year in range(y0, y1 + 1):
            for age in range(a0, a1 + 1):
                exposure = round(2.2e6 * math.exp(-0.035 * (age - 50)) * (1 + 0.01 * (year - y0)))
                log_rate = (-9.9 + 0.087 * age - 0.014 * (year - 2000)
                            + 0.04 * math.sin(age / 6.0) * math.cos((year - 1999) / 5.0))
                deaths = int(rng.poisson(exposure * math.exp(log_rate)))
                w.writerow([age, year, deaths, exposure])


if __name__ == "__main__":
    main()
