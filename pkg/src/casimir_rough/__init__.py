"""Casimir force between a rough, metal-coated sphere and plate with
fourth-order roughness and finite-conductivity corrections, plus the
force-curve data reduction used to compare it with AFM measurements."""

from .combined_force import (ScenarioConfig, breakdown_grid, combined_large, combined_small,
                             correction_factors, regime_gap, theory_function)
from .conductivity import (MaterialStack, effective_depth, plate_factor_interp, plate_factor_order2,
                           sphere_factor_order4)
from .core_types import (CONSTANTS, CorrectionBreakdown, ForceCurve, Regime, SeparationConvention,
                         SphereGeometry, convert_units)
from .lifshitz_psi import PSI_IDEAL, PsiQuadratureOptions, f0_ideal, f0_sphere_plate, psi
from .roughness import (RoughnessLevels, RoughnessModel, check_lateral_validity, moments,
                        roughness_factor_series, roughness_force_exact6, solve_zero_level)

__all__ = [
    "CONSTANTS", "CorrectionBreakdown", "ForceCurve", "MaterialStack", "PSI_IDEAL",
    "PsiQuadratureOptions", "Regime", "RoughnessLevels", "RoughnessModel", "ScenarioConfig",
    "SeparationConvention", "SphereGeometry", "breakdown_grid", "check_lateral_validity",
    "combined_large", "combined_small", "convert_units", "correction_factors", "effective_depth",
    "f0_ideal", "f0_sphere_plate", "moments", "plate_factor_interp", "plate_factor_order2", "psi",
    "regime_gap", "roughness_factor_series", "roughness_force_exact6", "solve_zero_level",
    "sphere_factor_order4", "theory_function",
]
__version__ = "0.1.0"
