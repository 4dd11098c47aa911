"""Sphere-plate electrostatic force, residual potential and cantilever
stiffness calibration.

    F = 2 pi eps0 (V1 - V2)^2 sum_{n>=1} csch(n alpha) (coth alpha - n coth n alpha)
    alpha = arccosh(1 + a/R)

Every term of the sum is negative, so F < 0 (attraction) whenever V1 != V2.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core_types import CONSTANTS, convert_units

log = logging.getLogger(__name__)

MAX_TERMS = 10_000_000
_BLOCK = 4096


class SeriesConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ElectrostaticSetup:
    V1: float  # volts, plate
    a_nm: float
    R_um: float = 98.0
    V2: float = 0.029  # volts, residual on the grounded sphere

    def __post_init__(self):
        if not self.a_nm > 0 or not self.R_um > 0:
            raise ValueError("separation and radius must be positive")

    @property
    def alpha(self) -> float:
        return math.acosh(1.0 + self.a_nm / (self.R_um * 1e3))


def _terms(n: np.ndarray, alpha: float) -> np.ndarray:
    # csch(z) = 2 e^-z / (1 - e^-2z), coth(z) = (1 + e^-2z) / (1 - e^-2z)
    z = n * alpha
    e2 = np.exp(-2.0 * z)
    den = -np.expm1(-2.0 * z)
    csch = 2.0 * np.exp(-z) / den
    coth_n = (1.0 + e2) / den
    coth_1 = 1.0 / math.tanh(alpha)
    return csch * (coth_1 - n * coth_n)


def geometric_sum(alpha: float, rel_tol: float = 1e-10, max_terms: int = MAX_TERMS) -> float:
    """The dimensionless series (negative) for a given alpha > 0.

    Summation stops once the geometric bound on the remaining tail falls
    below ``rel_tol`` times the partial sum and the last three terms are
    each below that threshold too.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    total = 0.0
    start = 1
    while start <= max_terms:
        n = np.arange(start, min(start + _BLOCK, max_terms + 1), dtype=float)
        t = _terms(n, alpha)
        total += math.fsum(t)
        last, prev = abs(t[-1]), abs(t[-2]) if t.size > 1 else math.inf
        ratio = last / prev if prev > 0 else 0.0
        if ratio < 1.0:
            tail = last * ratio / (1.0 - ratio)
            small = np.all(np.abs(t[-3:]) < rel_tol * abs(total))
            if tail < rel_tol * abs(total) and small:
                return total
        start += n.size
    raise SeriesConvergenceError(
        f"series not converged after {max_terms} terms (alpha={alpha:.3g}, partial sum={total:.6g})")


def electrostatic_force(setup: ElectrostaticSetup, rel_tol: float = 1e-8) -> float:
    """Sphere-plate electrostatic force in pN."""
    if not 0 < rel_tol <= 1e-6:
        raise ValueError("rel_tol must lie in (0, 1e-6]")
    dv = setup.V1 - setup.V2
    if dv == 0:
        return 0.0
    s = geometric_sum(setup.alpha, rel_tol)
    return convert_units(2.0 * math.pi * CONSTANTS.epsilon_0 * dv * dv * s, "N", "pN")


def pfa_electrostatic_scale(a_nm: float, R_um: float, dv: float) -> float:
    """Leading small-gap magnitude pi eps0 R dV^2 / a in pN."""
    R = convert_units(R_um, "um", "m")
    a = convert_units(a_nm, "nm", "m")
    return convert_units(math.pi * CONSTANTS.epsilon_0 * R * dv * dv / a, "N", "pN")


def estimate_residual_potential(force_pairs: Sequence[tuple[float, float, float]],
                                a_nm: float | Sequence[float], R_um: float = 98.0) -> float:
    """Residual sphere potential (V) from forces measured at +V1 and -V1.

    F(+V1) - F(-V1) = -8 pi eps0 S V1 V2, with S the geometric sum; V2 is the
    least-squares solution over all pairs. Forces in pN, voltages in V.
    ``a_nm`` may be one separation for all pairs or one per pair.
    """
    pairs = np.asarray(force_pairs, dtype=float).reshape(-1, 3)
    seps = np.broadcast_to(np.asarray(a_nm, dtype=float), (pairs.shape[0],))
    V1, fp, fm = pairs.T
    if not np.any(V1 != 0):
        raise ValueError("residual potential is undetermined when every V1 is zero")
    s = np.array([geometric_sum(math.acosh(1.0 + a / (R_um * 1e3))) for a in seps])
    x = -8.0 * math.pi * CONSTANTS.epsilon_0 * s * V1  # N per volt
    y = convert_units(1.0, "pN", "N") * (fp - fm)
    return float(np.dot(x, y) / np.dot(x, x))


@dataclass(frozen=True)
class CalibrationRecord:
    V1: float  # volts
    a_nm: float
    deflection_nm: float


def calibrate_force_constant(records: Sequence[CalibrationRecord], V2: float = 0.029, R_um: float = 98.0) -> float:
    """Mean of |F_electrostatic| / deflection over the records, in N/m."""
    ks = []
    for rec in records:
        if rec.deflection_nm == 0:
            log.warning("skipping calibration record with zero deflection: %s", rec)
            continue
        force = electrostatic_force(ElectrostaticSetup(rec.V1, rec.a_nm, R_um, V2))
        ks.append(convert_units(abs(force), "pN", "N") / convert_units(abs(rec.deflection_nm), "nm", "m"))
    if not ks:
        raise ValueError("no usable calibration records")
    k = float(np.mean(ks))
    if not k > 0:
        raise ValueError("calibrated force constant is not positive")
    return k
