"""Lifshitz reduction factor for static permittivities and the base
sphere-plate Casimir force.

    Psi(e1, e2) = 5/(16 pi^3) int_0^inf dx int_1^inf dp x^3/p^2 {
        [ (s1+p)(s2+p) / ((s1-p)(s2-p)) e^x - 1 ]^-1
      + [ (s1+p e1)(s2+p e2) / ((s1-p e1)(s2-p e2)) e^x - 1 ]^-1 }

    s_i = sqrt(e_i - 1 + p^2)

Each bracket is rewritten as r / (e^x - r) with r the product of the two
reflection-like ratios, 0 <= r < 1. That form has no 0/0 at x -> 0 and no
division by zero at e = 1 (where r = 0).

The p-integral is done in t = 1/p, which maps (1, inf) onto (0, 1) with
unit Jacobian against the 1/p^2 weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core_types import CONSTANTS, convert_units
from .quadrature import QuadratureError, integrate

PSI_IDEAL = math.pi / 24
_PREFACTOR = 5.0 / (16.0 * math.pi**3)


@dataclass(frozen=True)
class PsiQuadratureOptions:
    rel_tolerance: float = 1e-7
    x_cutoff: float = 60.0
    p_cutoff: float = 1e3

    def __post_init__(self):
        if not 0 < self.rel_tolerance <= 1e-3:
            raise ValueError("rel_tolerance must lie in (0, 1e-3]")
        if self.x_cutoff < 50:
            raise ValueError("x_cutoff must be >= 50")
        if self.p_cutoff < 100:
            raise ValueError("p_cutoff must be >= 100")


def reflection_products(eps1, eps2, p):
    """Products r_TE, r_TM of the two surfaces' ratios at momentum variable p."""
    p = np.asarray(p, dtype=float)
    s1 = np.sqrt(eps1 - 1.0 + p * p)
    s2 = np.sqrt(eps2 - 1.0 + p * p)
    # (s - p) and (s - p eps) rewritten to avoid cancellation
    te1 = (eps1 - 1.0) / (s1 + p) ** 2
    te2 = (eps2 - 1.0) / (s2 + p) ** 2
    tm1 = (eps1 - 1.0) * (p * p * (eps1 + 1.0) - 1.0) / (s1 + p * eps1) ** 2
    tm2 = (eps2 - 1.0) * (p * p * (eps2 + 1.0) - 1.0) / (s2 + p * eps2) ** 2
    return te1 * te2, tm1 * tm2


def _bose_like(x, r):
    # x^3 r / (e^x - r); e^x - r = expm1(x) + (1 - r)
    return x**3 * r / (np.expm1(x) + (1.0 - r))


def _x_tail_bound(x_cut):
    # int_X^inf x^3 e^-x dx, scaled for r <= 1 and e^x - r >= e^x - 1
    return math.exp(-x_cut) * (x_cut**3 + 3 * x_cut**2 + 6 * x_cut + 6) / (1 - math.exp(-x_cut))


def psi_with_error(eps1: float, eps2: float, opts: PsiQuadratureOptions | None = None) -> tuple[float, float]:
    """Psi and its absolute error estimate (quadrature plus truncation bound)."""
    opts = opts or PsiQuadratureOptions()
    for e in (eps1, eps2):
        if not (math.isfinite(e) and e >= 1.0):
            raise ValueError(f"static permittivity must be finite and >= 1, got {e}")
    if eps1 == 1.0 or eps2 == 1.0:
        return 0.0, 0.0

    inner_tol = opts.rel_tolerance * 0.1
    x_cut = opts.x_cutoff
    x_tail = _x_tail_bound(x_cut)

    def inner(t):
        p = 1.0 / t
        r_te, r_tm = reflection_products(eps1, eps2, p)
        r_te, r_tm = float(r_te), float(r_tm)
        v_te, e_te = integrate(lambda x: _bose_like(x, r_te), 0.0, x_cut, rel_tol=inner_tol)
        v_tm, e_tm = integrate(lambda x: _bose_like(x, r_tm), 0.0, x_cut, rel_tol=inner_tol)
        return v_te + v_tm

    def outer(ts):
        return np.array([inner(t) for t in ts])

    # large-p tail t in (0, 1/p_cutoff) is kept as its own panel
    t_split = 1.0 / opts.p_cutoff
    try:
        body, body_err = integrate(outer, t_split, 1.0, rel_tol=opts.rel_tolerance * 0.5)
        tail, tail_err = integrate(outer, 0.0, t_split, rel_tol=opts.rel_tolerance * 0.5,
                                   abs_tol=opts.rel_tolerance * 0.1 * abs(body))
    except QuadratureError as exc:
        raise QuadratureError("Psi quadrature did not converge",
                              _PREFACTOR * exc.value, _PREFACTOR * exc.error) from exc
    # both brackets are bounded by 1/(e^x - 1): tail <= 2 * (pi^4/15) * t_split
    if tail > 2 * (math.pi**4 / 15) * t_split * (1 + 1e-9):
        raise QuadratureError("large-p tail exceeds its analytic bound", _PREFACTOR * tail, 0.0)
    value = _PREFACTOR * (body + tail)
    error = _PREFACTOR * (body_err + tail_err + 2 * x_tail)
    return value, error


def psi(eps1: float, eps2: float, opts: PsiQuadratureOptions | None = None) -> float:
    """Dimensionless reduction factor Psi(eps1, eps2) in [0, pi/24)."""
    return psi_with_error(eps1, eps2, opts)[0]


def _check_positive(a_nm, R_um):
    if not np.all(np.asarray(a_nm) > 0):
        raise ValueError(f"separation must be positive, got {a_nm} nm")
    if not R_um > 0:
        raise ValueError(f"radius must be positive, got {R_um} um")


def f0_sphere_plate(a_nm: float, R_um: float, psi_value: float) -> float:
    """Sphere-plate force -Psi pi^2 hbar c R / (15 a^3) in pN (negative: attraction)."""
    _check_positive(a_nm, R_um)
    if not 0.0 <= psi_value <= PSI_IDEAL * (1 + 1e-12):
        raise ValueError(f"psi_value must lie in [0, pi/24], got {psi_value}")
    a = convert_units(a_nm, "nm", "m")
    R = convert_units(R_um, "um", "m")
    force = -psi_value * math.pi**2 * CONSTANTS.hbar_c * R / (15.0 * a**3)
    return convert_units(force, "N", "pN")


def f0_ideal(a_nm, R_um: float = 98.0):
    """Ideal-metal sphere-plate force -pi^3 hbar c R / (360 a^3) in pN.

    Accepts a scalar or an array of separations.
    """
    _check_positive(a_nm, R_um)
    R = convert_units(R_um, "um", "m")
    a = np.asarray(a_nm, dtype=float) * 1e-9
    force = -math.pi**3 * CONSTANTS.hbar_c * R / (360.0 * a**3) * 1e12
    return float(force) if force.ndim == 0 else force
