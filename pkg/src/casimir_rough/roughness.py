"""Three-level surface roughness model and roughness-corrected forces.

Each surface is made of tall crystals (height h1, area fraction v1),
intermediate crystals (h2, v2) and a stochastic background whose mean
height is h0/2 (v0). Heights are measured against the zero-distortion
level H, where the area-averaged profile vanishes. The sphere carries the
same statistics as the plate, mirrored in sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

from .core_types import ForceFunction

# Rounded betas sometimes quoted for the default levels. They do not
# satisfy the zero-mean condition; kept only for comparison.
ALT_BETAS = (0.231, 0.346)

_FRACTION_TOL = 1e-12


class ValidityError(ValueError):
    """An input lies outside the range where an expansion is valid."""


class ContactError(ValidityError):
    """A roughness-shifted distance is not positive: surfaces touch."""


@dataclass(frozen=True)
class RoughnessLevels:
    h1: float = 40.0
    h2: float = 20.0
    h0: float = 10.0
    v1: float = 0.11
    v2: float = 0.25
    v0: float = 0.64

    def __post_init__(self):
        vs = (self.v1, self.v2, self.v0)
        if any(not 0.0 <= v <= 1.0 for v in vs):
            raise ValueError(f"area fractions must lie in [0, 1], got {vs}")
        if abs(sum(vs) - 1.0) > _FRACTION_TOL:
            raise ValueError(f"area fractions must sum to 1, got {sum(vs)!r}")
        # empty levels may collapse onto the next lower one
        if not (self.h1 >= self.h2 >= self.h0 / 2):
            raise ValueError("heights must satisfy h1 >= h2 >= h0/2")
        if self.v1 > 0 and self.v2 > 0 and not self.h1 > self.h2:
            raise ValueError("populated levels need h1 > h2")
        if self.v2 > 0 and self.v0 > 0 and not self.h2 > self.h0 / 2:
            raise ValueError("populated levels need h2 > h0/2")


@dataclass(frozen=True)
class RoughnessModel:
    levels: RoughnessLevels
    H: float
    A: float
    beta1: float
    beta2: float

    @property
    def is_flat(self) -> bool:
        return self.A == 0.0

    @property
    def distortion_values(self) -> tuple[float, float, float]:
        """Plate distortion function on the (tall, intermediate, background) regions."""
        return (1.0, self.beta1, -self.beta2)

    @property
    def fractions(self) -> tuple[float, float, float]:
        lv = self.levels
        return (lv.v1, lv.v2, lv.v0)

    def zero_level_residual(self) -> float:
        lv = self.levels
        return (lv.h1 - self.H) * lv.v1 + (lv.h2 - self.H) * lv.v2 - (self.H - lv.h0 / 2) * lv.v0

    def cross_moment(self) -> float:
        """<<f1 f2>> = -(v1 + beta1 v2 - beta2 v0)^2, zero for a consistent H."""
        v1, v2, v0 = self.fractions
        return -((v1 + self.beta1 * v2 - self.beta2 * v0) ** 2)


@dataclass(frozen=True)
class DistortionMoments:
    m2: float
    m3: float
    m4: float

    @property
    def m22(self) -> float:
        return self.m2**2

    def mixed(self, i: int, j: int) -> float:
        """<<f1^i f2^j>> for the mirrored-statistics model, i + j <= 4.

        The sphere function is f2 = -f1' with f1' independent of f1, so
        <<f1^i f2^j>> = (-1)^j <f^i><f^j> for i, j > 0.
        """
        raw = {0: 1.0, 1: 0.0, 2: self.m2, 3: self.m3, 4: self.m4}
        if i == 0 or j == 0:
            return (-1) ** j * raw[i + j]
        return (-1) ** j * raw[i] * raw[j]


def solve_zero_level(levels: RoughnessLevels) -> RoughnessModel:
    """Zero-distortion level H, amplitude A = h1 - H and the two betas.

    H = h1 v1 + h2 v2 + (h0/2) v0 solves the zero-mean condition because the
    fractions sum to one. A flat surface returns A = 0 with zero betas.
    """
    lv = levels
    H = lv.h1 * lv.v1 + lv.h2 * lv.v2 + 0.5 * lv.h0 * lv.v0
    A = lv.h1 - H
    if A <= 1e-12 * max(1.0, abs(lv.h1)):
        return RoughnessModel(levels, H, 0.0, 0.0, 0.0)
    return RoughnessModel(levels, H, A, (lv.h2 - H) / A, (H - 0.5 * lv.h0) / A)


def moments(model: RoughnessModel) -> DistortionMoments:
    v1, v2, v0 = model.fractions
    b1, b2 = model.beta1, model.beta2
    return DistortionMoments(
        m2=v1 + b1**2 * v2 + b2**2 * v0,
        m3=v1 + b1**3 * v2 - b2**3 * v0,
        m4=v1 + b1**4 * v2 + b2**4 * v0,
    )


def general_series_factor(a1: float, a2: float, mixed: Callable[[int, int], float] | Mapping) -> float:
    """Fourth-order roughness factor for independent plate/sphere amplitudes.

    ``a1``, ``a2`` are the relative amplitudes A1/a and A2/a; ``mixed(i, j)``
    returns <<f1^i f2^j>>. The order-k bracket is the binomial expansion of
    (A1 f1 - A2 f2)^k weighted by C(k+2, 2) = 1, 3, 6, 10, 15.
    """
    get = mixed if callable(mixed) else (lambda i, j: mixed[(i, j)])
    total = 1.0
    for k in (2, 3, 4):
        weight = (k + 2) * (k + 1) // 2
        bracket = 0.0
        for j in range(k + 1):
            i = k - j
            bracket += math.comb(k, j) * (-1) ** j * get(i, j) * a1**i * a2**j
        total += weight * bracket
    return total


def roughness_factor_series(a_nm: float, model: RoughnessModel, max_ratio: float = 0.5) -> float:
    """1 + 12 m2 (A/a)^2 + 20 m3 (A/a)^3 + 30 (m4 + 3 m2^2) (A/a)^4."""
    if not a_nm > 0:
        raise ValueError(f"separation must be positive, got {a_nm}")
    if model.is_flat:
        return 1.0
    x = model.A / a_nm
    if x >= max_ratio:
        raise ValidityError(f"A/a = {x:.3f} is beyond the series bound {max_ratio}")
    m = moments(model)
    return 1.0 + 12 * m.m2 * x**2 + 20 * m.m3 * x**3 + 30 * (m.m4 + 3 * m.m2**2) * x**4


def exact6_terms(a_nm: float, model: RoughnessModel) -> list[tuple[float, float]]:
    """The six (weight, distance) pairs between two three-level surfaces.

    Pairing plate level i with sphere level j shifts the gap by
    A (f_i + f_j); the nine combinations merge into six distinct ones.
    """
    v1, v2, v0 = model.fractions
    A, b1, b2 = model.A, model.beta1, model.beta2
    return [
        (v1 * v1, a_nm - 2 * A),
        (2 * v1 * v2, a_nm - A * (1 + b1)),
        (2 * v2 * v0, a_nm - A * (b1 - b2)),
        (v0 * v0, a_nm + 2 * A * b2),
        (v2 * v2, a_nm - 2 * A * b1),
        (2 * v1 * v0, a_nm - A * (1 - b2)),
    ]


def pair_terms(a_nm: float, plate: list[tuple[float, float]], sphere: list[tuple[float, float]]):
    """(weight, distance) for every pairing of two independent level sets.

    Each level set is a list of (fraction, height above the zero level in nm).
    """
    return [(wp * ws, a_nm - hp - hs) for wp, hp in plate for ws, hs in sphere]


def _weighted_sum(terms, base_force: ForceFunction) -> float:
    if min(d for w, d in terms if w > 0) <= 0:
        raise ContactError("a roughness-shifted distance is not positive (contact regime)")
    return math.fsum(w * base_force(d) for w, d in terms if w > 0)


def roughness_force_exact6(a_nm: float, model: RoughnessModel, base_force: ForceFunction) -> float:
    """Probability-weighted base force over the six surface-to-surface distances."""
    if model.is_flat:
        return base_force(a_nm)
    if a_nm <= 2 * model.A:
        raise ContactError(f"a = {a_nm} nm <= 2A = {2 * model.A:.3f} nm (contact regime)")
    return _weighted_sum(exact6_terms(a_nm, model), base_force)


@dataclass(frozen=True)
class LateralValidity:
    ok: bool
    sqrt_aR_nm: float
    bound_nm: float
    max_feature_nm: float


def check_lateral_validity(d_p_nm: float, d_s_nm: float, a_nm: float, R_um: float, margin: float = 0.3) -> LateralValidity:
    """Lateral feature sizes must stay well below sqrt(a R) for the
    universal expansion coefficients to apply."""
    sqrt_aR = math.sqrt(a_nm * R_um * 1e3)
    bound = margin * sqrt_aR
    d = max(d_p_nm, d_s_nm)
    return LateralValidity(d <= bound, sqrt_aR, bound, d)
