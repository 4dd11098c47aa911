"""Monte Carlo spread of the fitted contact separation a0 for different
search bounds. Shows how much the bounds, rather than the data, pin a0."""

import argparse

import numpy as np

from casimir_rough import ScenarioConfig
from casimir_rough.combined_force import theory_function
from casimir_rough.data_reduction import fit_systematics, synthesize_curve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--noise", type=float, default=1.5)
    args = ap.parse_args()

    theory = theory_function(ScenarioConfig(), "combined", "small")
    grid = np.arange(400.0, 1200.0, 3.6)
    truth = (120.0, -2.8, 0.003, 5.0)
    print(f"{'bounds (nm)':>14} {'mean':>8} {'std':>7} {'|a0-120|<=5':>12}")
    for bounds in ((115.0, 125.0), (100.0, 140.0), (60.0, 200.0)):
        a0 = np.array([fit_systematics(synthesize_curve(theory, grid, truth, args.noise, s), theory,
                                       a0_bounds=bounds).a0 for s in range(args.trials)])
        print(f"{str(bounds):>14} {a0.mean():8.2f} {a0.std():7.2f} {np.mean(np.abs(a0 - 120) <= 5):12.2f}")


if __name__ == "__main__":
    main()
