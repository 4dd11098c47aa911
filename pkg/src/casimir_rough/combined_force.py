"""Casimir force with roughness and finite conductivity combined.

Two prescriptions are provided:

* large distances (Au/Pd gap above the Au plasma wavelength): both metals
  are good conductors, the roughness-weighted sum of conductivity-corrected
  forces is taken at the Au/Pd gap with the effective depth of the stack;
* small distances: the cap layers are treated as transparent, so the sum is
  taken at the Al gap (Au/Pd gap + 2 Delta) with the Al depth alone.

Both include crossed terms, i.e. conductivity corrections to the roughness
corrections, and are therefore not the product of the two separate factors.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .conductivity import SPHERE_COEFFS, MaterialStack, effective_depth, sphere_factor_order4
from .core_types import CorrectionBreakdown, Regime, SeparationConvention, SphereGeometry
from .lifshitz_psi import f0_ideal
from .roughness import (ContactError, RoughnessLevels, RoughnessModel, ValidityError,
                        exact6_terms, solve_zero_level)


def _default_roughness() -> RoughnessModel:
    return solve_zero_level(RoughnessLevels())


@dataclass(frozen=True)
class ScenarioConfig:
    geometry: SphereGeometry = field(default_factory=SphereGeometry)
    stack: MaterialStack = field(default_factory=MaterialStack)
    roughness: RoughnessModel = field(default_factory=_default_roughness)
    regime_boundary: float = 500.0  # nm, Au/Pd separation
    distance_offset: float = 0.0  # nm, added to every gap

    def __post_init__(self):
        if not self.regime_boundary > 0:
            raise ValueError("regime_boundary must be positive")
        if not 0.0 <= self.distance_offset <= 5.0:
            raise ValueError("distance_offset must lie in [0, 5] nm")

    def flat(self) -> "ScenarioConfig":
        """Same scenario with the roughness switched off."""
        lv = self.roughness.levels
        return replace(self, roughness=RoughnessModel(lv, self.roughness.H, 0.0, 0.0, 0.0))

    def to_al(self, a_AuPd: float) -> float:
        return a_AuPd + 2 * self.stack.Delta

    def to_aupd(self, a: float, convention: SeparationConvention) -> float:
        if SeparationConvention(convention) is SeparationConvention.Al_surfaces:
            return a - 2 * self.stack.Delta
        return a


def _rough_conductive_sum(gap_nm: float, cfg: ScenarioConfig, depth_nm: float) -> float:
    """sum_i w_i F0(a_i) factor(depth / a_i) with the a_i built from ``gap_nm``."""
    R = cfg.geometry.radius_um
    model = cfg.roughness

    def base(d):
        if depth_nm == 0:
            return f0_ideal(d, R)
        return f0_ideal(d, R) * sphere_factor_order4(depth_nm / d)

    if model.is_flat:
        return base(gap_nm)
    if gap_nm <= 2 * model.A:
        raise ContactError(f"gap {gap_nm:.3f} nm <= 2A = {2 * model.A:.3f} nm (contact regime)")
    return math.fsum(w * base(d) for w, d in exact6_terms(gap_nm, model) if w > 0)


def combined_large(a_nm: float, cfg: ScenarioConfig, depth_nm: float | None = None) -> float:
    """Large-distance force at Au/Pd separation ``a_nm`` (pN).

    ``depth_nm`` defaults to the effective depth of the stack.
    """
    depth = effective_depth(cfg.stack) if depth_nm is None else depth_nm
    return _rough_conductive_sum(a_nm + cfg.distance_offset, cfg, depth)


def combined_small(a_nm: float, cfg: ScenarioConfig, depth_nm: float | None = None) -> float:
    """Small-distance force at Au/Pd separation ``a_nm`` (pN), evaluated at
    the Al gap ``a_nm + 2 Delta`` with the Al depth by default."""
    if not a_nm > 0:
        raise ValueError(f"separation must be positive, got {a_nm}")
    depth = cfg.stack.delta0 if depth_nm is None else depth_nm
    return _rough_conductive_sum(cfg.to_al(a_nm) + cfg.distance_offset, cfg, depth)


def regime_for(a_AuPd: float, cfg: ScenarioConfig) -> Regime:
    return Regime.large_distance if a_AuPd > cfg.regime_boundary else Regime.small_distance


def evaluate_point(a_AuPd: float, cfg: ScenarioConfig, regime: Regime | None = None) -> dict:
    """Reference F0 and the roughness-only, conductivity-only and combined
    forces at one Au/Pd separation."""
    regime = regime or regime_for(a_AuPd, cfg)
    R = cfg.geometry.radius_um
    if regime is Regime.large_distance:
        gap, depth = a_AuPd + cfg.distance_offset, effective_depth(cfg.stack)
    else:
        gap, depth = cfg.to_al(a_AuPd) + cfg.distance_offset, cfg.stack.delta0
    if not gap > 0:
        raise ValueError(f"non-positive gap {gap} nm")
    return {
        "regime": regime,
        "f0": f0_ideal(gap, R),
        "f_rough": _rough_conductive_sum(gap, cfg, 0.0),
        "f_cond": f0_ideal(gap, R) * sphere_factor_order4(depth / gap),
        "f_combined": _rough_conductive_sum(gap, cfg, depth),
    }


def correction_factors(a_AuPd: float, cfg: ScenarioConfig, regime: Regime | None = None) -> dict:
    """The three corrected forces divided by the reference F0."""
    pt = evaluate_point(a_AuPd, cfg, regime)
    return {k: pt[k] / pt["f0"] for k in ("f_rough", "f_cond", "f_combined")}


def breakdown_grid(a_values: Sequence[float], cfg: ScenarioConfig,
                   convention: SeparationConvention = SeparationConvention.AuPd_surfaces) -> list[CorrectionBreakdown]:
    """Per-separation breakdown; failures are reported per point."""
    convention = SeparationConvention(convention)
    values = [float(a) for a in a_values]
    if any(b < a for a, b in zip(values, values[1:])):
        raise ValueError("a_values must be sorted ascending")
    out = []
    for a in values:
        a_AuPd = cfg.to_aupd(a, convention)
        regime = regime_for(a_AuPd, cfg)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            try:
                pt = evaluate_point(a_AuPd, cfg, regime)
            except (ValidityError, ValueError) as exc:
                out.append(CorrectionBreakdown(a, convention, regime, error=str(exc)))
                continue
        out.append(CorrectionBreakdown(
            a, convention, regime, pt["f0"], pt["f_rough"], pt["f_cond"], pt["f_combined"],
            warnings=tuple(sorted({str(w.message) for w in caught})),
        ))
    return out


def regime_gap(a_AuPd: float, cfg: ScenarioConfig) -> float:
    """|large - small| / |F0(a)| at one Au/Pd separation."""
    return abs(combined_large(a_AuPd, cfg) - combined_small(a_AuPd, cfg)) / abs(
        f0_ideal(a_AuPd + cfg.distance_offset, cfg.geometry.radius_um))


_KINDS = ("f0", "rough", "cond", "combined")


def _factor_poly(x):
    c0, c1, c2, c3, c4 = SPHERE_COEFFS
    return c0 + x * (c1 + x * (c2 + x * (c3 + x * c4)))


def theory_function(cfg: ScenarioConfig, kind: str = "combined", regime: str = "small",
                    convention: SeparationConvention = SeparationConvention.Al_surfaces):
    """Vectorised force model a -> pN for fitting and RMS comparisons.

    ``kind`` picks which corrections are applied, ``regime`` is ``"small"``,
    ``"large"`` or ``"auto"`` (switch at ``cfg.regime_boundary``), and
    ``convention`` states which surfaces the input separations refer to.
    """
    if kind not in _KINDS:
        raise ValueError(f"kind must be one of {_KINDS}")
    if regime not in ("small", "large", "auto"):
        raise ValueError("regime must be 'small', 'large' or 'auto'")
    convention = SeparationConvention(convention)
    R = cfg.geometry.radius_um
    model = cfg.roughness
    use_rough = kind in ("rough", "combined") and not model.is_flat
    use_cond = kind in ("cond", "combined")
    terms = [(1.0, 0.0)]
    if use_rough:
        # exact6_terms at zero gap gives (weight, -shift)
        terms = [(w, -d) for w, d in exact6_terms(0.0, model) if w > 0]
    d_e = effective_depth(cfg.stack)

    def func(a):
        a = np.asarray(a, dtype=float)
        a_AuPd = cfg.to_aupd(a, convention)
        large = np.full(a.shape, regime == "large") if regime != "auto" else a_AuPd > cfg.regime_boundary
        gap = np.where(large, a_AuPd, a_AuPd + 2 * cfg.stack.Delta) + cfg.distance_offset
        depth = np.where(large, d_e, cfg.stack.delta0)
        out = np.zeros_like(gap)
        for w, shift in terms:
            d = gap - shift
            if np.any(d <= 0):
                raise ContactError("a roughness-shifted distance is not positive (contact regime)")
            f = f0_ideal(d, R)
            if use_cond:
                x = depth / d
                if np.any(x > 0.3):
                    raise ValidityError("depth/a beyond 0.3 for the sphere conductivity factor")
                f = f * _factor_poly(x)
            out = out + w * f
        return out

    return func
