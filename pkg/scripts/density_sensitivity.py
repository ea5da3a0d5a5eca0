"""Squeezing and magnetometer sensitivity versus atomic density.

    python scripts/density_sensitivity.py --nmax 5e12 --points 10
"""
import argparse

import numpy as np

from psrnoise import magnetometer as mag
from psrnoise import polarimeter as pol
from psrnoise import psr


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nmin", type=float, default=2.5e11)
    ap.add_argument("--nmax", type=float, default=5e12)
    ap.add_argument("--points", type=int, default=10)
    ap.add_argument("--power", type=float, default=4.0)
    args = ap.parse_args()

    base = psr.PhysicalParams(power=args.power)
    densities = np.linspace(args.nmin, args.nmax, args.points)
    sweep = psr.density_sweep(base, densities)
    reports = mag.density_sensitivity_sweep(densities, mag.NmorResponse(), pol.DetectionConfig(), base)
    print(f"{'n_cm3':>10} {'sq_db':>7} {'anti_db':>7} {'bmin_meas':>10} {'bmin_shot':>10} {'ratio':>6}")
    for (n, sq, anti), r in zip(sweep, reports):
        print(f"{n:10.3e} {sq:7.3f} {anti:7.3f} {r.b_min_measured:10.3e} {r.b_min_shot_limited:10.3e} {r.ratio:6.3f}")


if __name__ == "__main__":
    main()
