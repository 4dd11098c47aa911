"""Roughness, conductivity and combined corrections over a range of Al
separations, printed as a table (percent of the ideal-metal force)."""

import argparse
import warnings

import numpy as np

from casimir_rough import ScenarioConfig
from casimir_rough.combined_force import correction_factors
from casimir_rough.conductivity import ValidityWarning
from casimir_rough.core_types import Regime, SeparationConvention


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--start", type=float, default=120.0)
    ap.add_argument("--stop", type=float, default=950.0)
    ap.add_argument("--num", type=int, default=12)
    args = ap.parse_args()

    cfg = ScenarioConfig()
    print(f"{'a_Al (nm)':>10} {'rough %':>9} {'cond %':>9} {'combined %':>11} {'separable %':>12}")
    for a in np.linspace(args.start, args.stop, args.num):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ValidityWarning)
            f = correction_factors(cfg.to_aupd(a, SeparationConvention.Al_surfaces), cfg, Regime.small_distance)
        sep = f["f_rough"] * f["f_cond"]
        print(f"{a:10.1f} {100 * (f['f_rough'] - 1):+9.3f} {100 * (f['f_cond'] - 1):+9.3f} "
              f"{100 * (f['f_combined'] - 1):+11.3f} {100 * (sep - 1):+12.3f}")


if __name__ == "__main__":
    main()
