"""Difference between the small- and large-distance prescriptions across
the band where neither is clearly preferred."""

import argparse

import numpy as np

from casimir_rough import ScenarioConfig
from casimir_rough.combined_force import combined_large, combined_small, regime_gap


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--start", type=float, default=420.0)
    ap.add_argument("--stop", type=float, default=640.0)
    ap.add_argument("--num", type=int, default=12)
    args = ap.parse_args()

    cfg = ScenarioConfig()
    print(f"{'a_AuPd (nm)':>11} {'small (pN)':>11} {'large (pN)':>11} {'gap / |F0|':>11}")
    for a in np.linspace(args.start, args.stop, args.num):
        print(f"{a:11.1f} {combined_small(a, cfg):11.5f} {combined_large(a, cfg):11.5f} {regime_gap(a, cfg):11.4f}")


if __name__ == "__main__":
    main()
