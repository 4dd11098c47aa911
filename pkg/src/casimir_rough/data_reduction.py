"""Force-curve reduction: separation corrections, systematic-error fit,
subtraction, RMS comparison and a synthetic-curve generator.

The large-separation part of an approach curve (region 1) is modelled as

    F(a) = Fc(a + a0) + B / (a + a0) + C (a + a0) + E

with ``a`` the plate displacement from contact, ``a0`` the absolute
separation at contact, B the electrostatic constant (held fixed), C the
scattered-light slope and E an offset. For fixed a0 the model is linear in
(C, E); a0 is found by a coarse scan followed by golden-section search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core_types import ForceCurve

Theory = Callable[[np.ndarray], np.ndarray]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _eval_theory(theory, a):
    a = np.asarray(a, dtype=float)
    try:
        out = np.asarray(theory(a), dtype=float)
        if out.shape == a.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([float(theory(float(x))) for x in a])


@dataclass(frozen=True)
class SystematicsFit:
    a0: float  # nm
    B: float  # nN nm, held fixed
    C: float  # pN / nm
    E: float  # pN
    chi2: float

    def systematics(self, a_abs):
        """B/a + C a + E at absolute separations (pN)."""
        a_abs = np.asarray(a_abs, dtype=float)
        return self.B * 1e3 / a_abs + self.C * a_abs + self.E


@dataclass(frozen=True)
class RmsReport:
    range_nm: tuple[float, float]
    n_points: int
    sigma: float  # pN


def apply_separation_corrections(raw: ForceCurve, piezo_linear_pct: float, k: float) -> ForceCurve:
    """Scale separations by (1 + piezo_linear_pct) and add the cantilever
    deflection F/k; an attractive (negative) force shortens the gap.

    ``k`` is in N/m; pN / (N/m) = 1e-3 nm.
    """
    if not k > 0:
        raise ValueError("force constant must be positive")
    a = raw.separations_nm * (1.0 + piezo_linear_pct)
    if math.isfinite(k):
        a = a + raw.forces_pN * 1e-3 / k
    return ForceCurve(a, raw.forces_pN.copy(), raw.convention)


def golden_section(f, lo, hi, tol=1e-6, max_iter=200):
    """Minimise a unimodal ``f`` on [lo, hi]; returns (x, f(x))."""
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def _profile(a_rel, forces, theory, B_pN_nm, a0):
    a = a_rel + a0
    y = forces - _eval_theory(theory, a) - B_pN_nm / a
    X = np.column_stack([a, np.ones_like(a)])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    r = y - X @ coef
    return float(r @ r), float(coef[0]), float(coef[1])


def fit_systematics(region1: ForceCurve, theory: Theory, B: float = -2.8,
                    a0_bounds: tuple[float, float] = (115.0, 125.0), n_scan: int = 41,
                    tol: float = 1e-6) -> SystematicsFit:
    """Least-squares fit of (a0, C, E) with B fixed (B in nN nm).

    ``region1`` separations are plate displacements from contact (nm).
    """
    lo, hi = map(float, a0_bounds)
    if not lo <= hi:
        raise ValueError("a0_bounds must be a non-empty interval")
    if len(region1) < 10:
        raise ValueError("region 1 needs at least 10 points")
    a_rel, forces = region1.separations_nm, region1.forces_pN
    if np.ptp(a_rel) == 0:
        raise np.linalg.LinAlgError("degenerate design: all separations are equal")
    B_pN_nm = B * 1e3

    def chi2(a0):
        return _profile(a_rel, forces, theory, B_pN_nm, a0)[0]

    if hi == lo:
        best = lo
    else:
        grid = np.linspace(lo, hi, n_scan)
        vals = [chi2(x) for x in grid]
        i = int(np.argmin(vals))
        best, fbest = golden_section(chi2, grid[max(i - 1, 0)], grid[min(i + 1, n_scan - 1)], tol=tol)
        if vals[i] < fbest:
            best = grid[i]
    c2, C, E = _profile(a_rel, forces, theory, B_pN_nm, best)
    return SystematicsFit(float(best), B, C, E, c2)


def to_absolute(curve: ForceCurve, a0: float) -> ForceCurve:
    return curve.shifted(a0)


def subtract_systematics(curve: ForceCurve, fit: SystematicsFit) -> ForceCurve:
    """(Fc)_m = F_m - B/a - C a - E on absolute separations."""
    return curve.with_forces(curve.forces_pN - fit.systematics(curve.separations_nm))


def rms_deviation(theory: Theory, data: ForceCurve, range_nm: tuple[float, float]) -> RmsReport:
    lo, hi = range_nm
    mask = (data.separations_nm >= lo) & (data.separations_nm <= hi)
    n = int(mask.sum())
    if n == 0:
        raise ValueError(f"no data points in range [{lo}, {hi}] nm")
    d = _eval_theory(theory, data.separations_nm[mask]) - data.forces_pN[mask]
    return RmsReport((float(lo), float(hi)), n, float(np.sqrt(np.mean(d * d))))


def synthesize_curve(theory: Theory, grid: Sequence[float],
                     systematics: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0),
                     noise_sigma: float = 0.0, seed: int = 0, convention=None) -> ForceCurve:
    """Synthetic approach curve on plate displacements ``grid`` (nm).

    ``systematics`` is (a0 nm, B nN nm, C pN/nm, E pN). The force at
    displacement a is theory(a + a0) + B/(a + a0) + C (a + a0) + E plus
    Gaussian noise; with a0 = 0 the grid is the absolute separation.
    """
    a0, B, C, E = systematics
    g = np.asarray(grid, dtype=float)
    if np.any(np.diff(g) <= 0):
        raise ValueError("grid must be sorted ascending")
    a = g + a0
    forces = _eval_theory(theory, a) + B * 1e3 / a + C * a + E
    if noise_sigma > 0:
        forces = forces + np.random.default_rng(seed).normal(0.0, noise_sigma, a.size)
    kwargs = {} if convention is None else {"convention": convention}
    return ForceCurve(g, forces, **kwargs)
