"""Fit the PSR state to a squeezing pair and scan the retarder phase.

    python scripts/quadrature_scan.py --sq -2.0 --antisq 3.75
"""
import argparse
import math

import numpy as np

from psrnoise import gaussian as gs
from psrnoise import polarimeter as pol
from psrnoise import psr


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sq", type=float, default=-2.0)
    ap.add_argument("--antisq", type=float, default=3.75)
    ap.add_argument("--points", type=int, default=19)
    args = ap.parse_args()

    fit = psr.fit_to_targets(psr.SqueezingTargets(args.sq, args.antisq))
    state = psr.output_state(
        psr.PhysicalParams(density=1.0, power=1.0, coupling=fit.g, thermal_seed=(0.0, fit.n_p))
    )
    ext = gs.extremal_quadratures(state)
    print(f"fit: g = {fit.g:.6f}, N_p = {fit.n_p:.6f}")
    print(f"extrema: {gs.to_db(ext.v_min):+.3f} dB at plate {pol.analyzed_angle(ext.phi_min):.4f} rad, "
          f"{gs.to_db(ext.v_max):+.3f} dB at plate {pol.analyzed_angle(ext.phi_max):.4f} rad")
    print(f"{'phi_deg':>8} {'signal_rel_db':>14} {'noise_db':>9}")
    for rec in pol.phase_scan(state, 1e-3, np.linspace(0, np.pi / 2, args.points)):
        rel = pol.signal_db(rec.mean_signal / pol.measure(state, 1e-3, pol.DetectionConfig()).mean_signal)
        print(f"{math.degrees(rec.phi_prp):8.1f} {rel:14.3f} {rec.noise_db:9.3f}")


if __name__ == "__main__":
    main()
