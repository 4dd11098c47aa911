"""Shared value types, unit conversion and physical constants.

Public interfaces take separations in nm, forces in pN and sphere radii in
um. Everything is converted to SI inside the numerical kernels.

Forces are signed throughout: negative means attraction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import constants as _sc

ForceFunction = Callable[[float], float]


@dataclass(frozen=True)
class PhysicalConstants:
    hbar_c: float = _sc.hbar * _sc.c  # J m
    epsilon_0: float = _sc.epsilon_0  # F/m


CONSTANTS = PhysicalConstants()

# scale factors to SI
_SCALE = {
    "nm": ("length", 1e-9),
    "um": ("length", 1e-6),
    "μm": ("length", 1e-6),
    "m": ("length", 1.0),
    "pN": ("force", 1e-12),
    "N": ("force", 1.0),
    "mV": ("voltage", 1e-3),
    "V": ("voltage", 1.0),
}
_ALLOWED_PAIRS = {
    frozenset(p)
    for p in [("nm", "m"), ("um", "m"), ("μm", "m"), ("pN", "N"), ("mV", "V")]
}


def convert_units(value: float, from_unit: str, to_unit: str) -> float:
    """Convert between the fixed unit pairs nm<->m, um<->m, pN<->N, mV<->V."""
    if from_unit == to_unit and from_unit in _SCALE:
        return float(value)
    if frozenset((from_unit, to_unit)) not in _ALLOWED_PAIRS:
        raise ValueError(f"unsupported unit conversion {from_unit!r} -> {to_unit!r}")
    return float(value) * _SCALE[from_unit][1] / _SCALE[to_unit][1]


def hooke_force_pN(k_N_per_m: float, deflection_nm: float) -> float:
    """Force magnitude in pN for a cantilever of stiffness k deflected by dz."""
    return convert_units(k_N_per_m * convert_units(deflection_nm, "nm", "m"), "N", "pN")


class SeparationConvention(str, enum.Enum):
    """Which pair of surfaces a separation is measured between.

    The Au/Pd cap layers are 2*Delta closer together than the Al layers
    beneath them, so the same physical configuration carries two different
    separation values.
    """

    AuPd_surfaces = "AuPd_surfaces"
    Al_surfaces = "Al_surfaces"


class Regime(str, enum.Enum):
    small_distance = "small_distance"
    large_distance = "large_distance"


@dataclass(frozen=True)
class SphereGeometry:
    radius_um: float = 98.0

    def __post_init__(self):
        if not self.radius_um > 0:
            raise ValueError(f"sphere radius must be positive, got {self.radius_um}")


@dataclass(frozen=True)
class ForceCurve:
    """Ordered (separation nm, force pN) samples."""

    separations_nm: np.ndarray
    forces_pN: np.ndarray
    convention: SeparationConvention = SeparationConvention.AuPd_surfaces

    def __post_init__(self):
        a = np.asarray(self.separations_nm, dtype=float)
        f = np.asarray(self.forces_pN, dtype=float)
        if a.ndim != 1 or a.shape != f.shape:
            raise ValueError("separations and forces must be 1-D arrays of equal length")
        if a.size == 0:
            raise ValueError("force curve is empty")
        if np.any(a <= 0):
            raise ValueError("all separations must be positive")
        if np.any(np.diff(a) <= 0):
            raise ValueError("separations must be strictly increasing")
        a.flags.writeable = False
        f.flags.writeable = False
        object.__setattr__(self, "separations_nm", a)
        object.__setattr__(self, "forces_pN", f)
        object.__setattr__(self, "convention", SeparationConvention(self.convention))

    def __len__(self) -> int:
        return self.separations_nm.size

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[float, float]], convention=SeparationConvention.AuPd_surfaces):
        arr = np.asarray(pairs, dtype=float).reshape(-1, 2)
        return cls(arr[:, 0], arr[:, 1], convention)

    def with_forces(self, forces_pN) -> "ForceCurve":
        return ForceCurve(self.separations_nm.copy(), np.asarray(forces_pN, dtype=float), self.convention)

    def shifted(self, offset_nm: float) -> "ForceCurve":
        return ForceCurve(self.separations_nm + offset_nm, self.forces_pN.copy(), self.convention)


def mean_curve(curves: Sequence[ForceCurve]) -> ForceCurve:
    """Point-wise mean of several scans sampled on the same separation grid."""
    if not curves:
        raise ValueError("no curves to average")
    grid = curves[0].separations_nm
    for c in curves[1:]:
        if c.separations_nm.shape != grid.shape or not np.allclose(c.separations_nm, grid):
            raise ValueError("curves must share a separation grid")
    forces = np.mean([c.forces_pN for c in curves], axis=0)
    return ForceCurve(grid.copy(), forces, curves[0].convention)


@dataclass(frozen=True)
class CorrectionBreakdown:
    """Force components at one separation.

    ``f0`` is the ideal-metal force at the reference distance of the regime
    (Al separation for small distances, Au/Pd separation for large ones).
    When the point could not be evaluated, ``error`` holds the reason and
    the force fields are NaN.
    """

    separation_nm: float
    convention: SeparationConvention
    regime: Regime
    f0: float = math.nan
    f_rough: float = math.nan
    f_cond: float = math.nan
    f_combined: float = math.nan
    error: str | None = None
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return self.error is None
