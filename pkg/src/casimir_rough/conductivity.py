"""Finite-conductivity correction factors.

All factors multiply the ideal-metal force and depend on x = depth / a,
the penetration depth of zero-point oscillations relative to the gap.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .roughness import ValidityError

PLATE_RANGE = (0.0, 0.2)
SPHERE_RANGE = (0.0, 0.3)


class ValidityWarning(UserWarning):
    """A factor was evaluated beyond its nominal range but within tolerance."""


@dataclass(frozen=True)
class MaterialStack:
    """Al bulk with a thin Au/Pd cap. Lengths in nm."""

    delta0: float = 16.0
    delta0_tilde: float = 80.0
    Delta: float = 20.0
    lambda_p_Al: float = 100.0
    lambda_p_Au: float = 500.0

    def __post_init__(self):
        for name in ("delta0", "delta0_tilde", "Delta", "lambda_p_Al", "lambda_p_Au"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @classmethod
    def from_plasma_wavelengths(cls, lambda_p_Al=100.0, lambda_p_Au=500.0, Delta=20.0):
        return cls(lambda_p_Al / (2 * math.pi), lambda_p_Au / (2 * math.pi), Delta, lambda_p_Al, lambda_p_Au)


def effective_depth(stack: MaterialStack) -> float:
    """e-folding depth through the cap layer and into the Al beneath.

    Solves Delta/delta0_tilde + (delta_e - Delta)/delta0 = 1.
    """
    if stack.Delta > 0 and stack.Delta >= stack.delta0_tilde:
        raise ValidityError("cap layer at least as thick as its own penetration depth")
    if stack.Delta == 0:
        return stack.delta0
    return (1.0 - stack.Delta / stack.delta0_tilde) * stack.delta0 + stack.Delta


def _check_range(x, lo, hi, what):
    if not lo <= x <= hi:
        raise ValidityError(f"{what}: depth/a = {x:.4g} outside [{lo}, {hi}]")


def plate_factor_order2(x: float) -> float:
    _check_range(x, *PLATE_RANGE, "second-order plate factor")
    return 1.0 - 16.0 / 3.0 * x + 24.0 * x * x


def plate_factor_interp(x: float) -> float:
    """Interpolation (1 + 11x/3)^(-16/11), sign-constant with a zero limit."""
    _check_range(x, *PLATE_RANGE, "interpolated plate factor")
    return (1.0 + 11.0 / 3.0 * x) ** (-16.0 / 11.0)


SPHERE_COEFFS = (1.0, -4.0, 72.0 / 5.0, -152.0 / 3.0, 532.0 / 3.0)


def sphere_factor_order4(x: float) -> float:
    """1 - 4x + 72/5 x^2 - 152/3 x^3 + 532/3 x^4.

    Above x = 0.2 a :class:`ValidityWarning` is emitted; above 0.3 it fails.
    """
    _check_range(x, *SPHERE_RANGE, "fourth-order sphere factor")
    if x > PLATE_RANGE[1]:
        warnings.warn(f"sphere conductivity factor used at depth/a = {x:.3f} > 0.2",
                      ValidityWarning, stacklevel=2)
    c0, c1, c2, c3, c4 = SPHERE_COEFFS
    return c0 + x * (c1 + x * (c2 + x * (c3 + x * c4)))


def conductivity_force(a_nm: float, depth_nm: float, base_force) -> float:
    """base_force(a) times the sphere factor at depth/a."""
    return base_force(a_nm) * sphere_factor_order4(depth_nm / a_nm)
