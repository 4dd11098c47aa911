"""Fit a synthetic approach curve generated from the full model, then
compare the rms deviation of several theories against the reduced data.
Leaving out either correction inflates sigma."""

import argparse

import numpy as np

from casimir_rough import ScenarioConfig
from casimir_rough.combined_force import theory_function
from casimir_rough.data_reduction import (fit_systematics, rms_deviation, subtract_systematics,
                                          synthesize_curve, to_absolute)
from casimir_rough.core_types import ForceCurve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--noise", type=float, default=1.5, help="pN")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--a0", type=float, default=120.0)
    args = ap.parse_args()

    cfg = ScenarioConfig()
    full = theory_function(cfg, "combined", "small")
    grid = 3.6 * np.arange(1, 300)
    raw = synthesize_curve(full, grid, (args.a0, -2.8, 0.003, 5.0), args.noise, args.seed)
    far = raw.separations_nm + args.a0 > 500
    fit = fit_systematics(ForceCurve(raw.separations_nm[far], raw.forces_pN[far]), full)
    data = subtract_systematics(to_absolute(raw, fit.a0), fit)
    print(f"a0 = {fit.a0:.2f} nm, C = {fit.C:.5f} pN/nm, E = {fit.E:.3f} pN")

    ranges = [(120.0, 500.0), (120.0, 950.0)]
    print(f"{'theory':>12} " + " ".join(f"{f'[{lo:.0f},{hi:.0f}]':>12}" for lo, hi in ranges))
    for kind in ("combined", "rough", "cond", "f0"):
        th = theory_function(cfg, kind, "small")
        row = [rms_deviation(th, data, r) for r in ranges]
        print(f"{kind:>12} " + " ".join(f"{r.sigma:9.2f} pN" for r in row))


if __name__ == "__main__":
    main()
