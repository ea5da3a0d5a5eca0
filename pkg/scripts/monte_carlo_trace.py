"""Synthesize a modulated-field polarimeter trace and compare its spectrum floor to theory.

    python scripts/monte_carlo_trace.py --phi 0 --seed 1
"""
import argparse
import math

from psrnoise import gaussian as gs
from psrnoise import magnetometer as mag
from psrnoise import montecarlo as mc
from psrnoise import polarimeter as pol
from psrnoise import psr


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--phi", type=float, default=0.0, help="retarder phase, rad")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--segments", type=int, default=100)
    args = ap.parse_args()

    fit = psr.fit_to_targets(psr.SqueezingTargets(-2.0, 3.75))
    state = psr.output_state(
        psr.PhysicalParams(density=1.0, power=1.0, coupling=fit.g, thermal_seed=(0.0, fit.n_p))
    )
    cfg = pol.DetectionConfig(phi_prp=args.phi)
    resp = mag.NmorResponse(density=2.5e12)
    ts = mc.synthesize_polarimeter_trace(state, resp, 5e-8, 1700.0, cfg, args.segments / 100, 1e5, mc.RngSpec(args.seed))
    freqs, power = mc.periodogram(ts, 100.0, args.segments)
    floor = mc.noise_floor(freqs, power, 1700.0)
    k = int(abs(freqs - 1700.0).argmin())
    print(f"floor {10 * math.log10(floor):+.3f} dB (analytic {gs.to_db(pol.analyzed_variance(state, args.phi)):+.3f} dB)")
    print(f"tone at {freqs[k]:.0f} Hz: {10 * math.log10(power[k]):+.2f} dB")


if __name__ == "__main__":
    main()
