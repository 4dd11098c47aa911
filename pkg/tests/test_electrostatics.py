import logging
import math

import mpmath
import numpy as np
import pytest

from casimir_rough.core_types import CONSTANTS, hooke_force_pN
from casimir_rough.electrostatics import (CalibrationRecord, ElectrostaticSetup, SeriesConvergenceError,
                                          _terms, calibrate_force_constant, electrostatic_force,
                                          estimate_residual_potential, geometric_sum,
                                          pfa_electrostatic_scale)

# mpmath, 30 digits, direct csch/coth summation at a = 120 nm, R = 98 um
SUM_120NM = -406.96359613973715


def mp_sum(alpha, digits=30):
    with mpmath.workdps(digits):
        al = mpmath.mpf(alpha)
        return float(mpmath.nsum(lambda n: mpmath.csch(n * al) * (mpmath.coth(al) - n * mpmath.coth(n * al)),
                                 [1, mpmath.inf]))


def test_alpha():
    assert ElectrostaticSetup(1.0, 120.0).alpha == pytest.approx(math.sqrt(2 * 120 / 98e3), rel=1e-3)


def test_sum_against_frozen_oracle():
    alpha = ElectrostaticSetup(0.0, 120.0).alpha
    assert geometric_sum(alpha, 1e-12) == pytest.approx(SUM_120NM, rel=1e-10)


@pytest.mark.parametrize("alpha", [0.05, 0.3, 1.0, 3.0])
def test_sum_against_mpmath(alpha):
    assert geometric_sum(alpha, 1e-12) == pytest.approx(mp_sum(alpha), rel=1e-10)


def test_terms_stable_for_large_argument():
    t = _terms(np.array([1.0, 500.0, 5000.0]), 1.0)
    assert np.all(np.isfinite(t)) and np.all(t <= 0)


@pytest.mark.parametrize("alpha", [1e-4, 1e-3, 1e-2, 0.1, 1.0])
def test_terms_eventually_decrease(alpha):
    n = np.arange(1, int(20 / alpha), dtype=float)
    mag = np.abs(_terms(n, alpha))
    assert abs(mag[0]) <= 1e-9 * mag.max()  # n = 1 vanishes analytically
    assert np.all(_terms(n[1:], alpha) < 0)
    peak = int(np.argmax(mag))
    assert np.all(np.diff(mag[peak:]) <= 0)


def test_equipotential_is_zero():
    assert electrostatic_force(ElectrostaticSetup(0.029, 120.0)) == 0.0


def test_quadratic_and_attractive():
    f1 = electrostatic_force(ElectrostaticSetup(0.5, 300.0, V2=0.0))
    f2 = electrostatic_force(ElectrostaticSetup(1.0, 300.0, V2=0.0))
    assert f1 < 0
    assert f2 == pytest.approx(4 * f1, rel=1e-12)


def test_scale_invariance():
    f = electrostatic_force(ElectrostaticSetup(1.0, 300.0, 98.0, 0.0))
    g = electrostatic_force(ElectrostaticSetup(1.0, 900.0, 294.0, 0.0))
    assert g == pytest.approx(f, rel=1e-12)


def test_si_value_at_120nm():
    f = electrostatic_force(ElectrostaticSetup(0.0, 120.0))
    assert f == pytest.approx(2 * math.pi * CONSTANTS.epsilon_0 * 0.029**2 * SUM_120NM * 1e12, rel=1e-8)
    # |F| a in nN nm: the leading asymptotic gives 2.29
    assert abs(f) * 120 * 1e-3 == pytest.approx(2.285, abs=0.005)


@pytest.mark.parametrize("ratio, lo, hi", [(1e-3, 0.99, 1.0), (1e-4, 0.999, 1.0)])
def test_sphere_plane_asymptote(ratio, lo, hi):
    R = 98.0
    a = ratio * R * 1e3
    f = electrostatic_force(ElectrostaticSetup(1.0, a, R, 0.0))
    assert lo <= abs(f) / pfa_electrostatic_scale(a, R, 1.0) <= hi


def test_asymptote_approached_from_below():
    ratios = [1e-2, 1e-3, 1e-4]
    r = [abs(electrostatic_force(ElectrostaticSetup(1.0, q * 98e3, 98.0, 0.0))) / pfa_electrostatic_scale(q * 98e3, 98.0, 1.0)
         for q in ratios]
    assert r[0] < r[1] < r[2] < 1.0


def test_rel_tol_validation():
    with pytest.raises(ValueError):
        electrostatic_force(ElectrostaticSetup(1.0, 100.0), rel_tol=1e-3)
    with pytest.raises(ValueError):
        ElectrostaticSetup(1.0, -1.0)


def test_term_cap():
    with pytest.raises(SeriesConvergenceError):
        geometric_sum(1e-6, max_terms=10_000)


def _pair(V1, a, V2):
    return (V1, electrostatic_force(ElectrostaticSetup(V1, a, V2=V2)),
            electrostatic_force(ElectrostaticSetup(-V1, a, V2=V2)))


def test_residual_single_pair_exact():
    assert estimate_residual_potential([_pair(1.0, 400.0, 0.029)], 400.0) == pytest.approx(0.029, rel=1e-9)


def test_residual_many_pairs():
    seps = [2000.0, 3000.0, 4000.0]
    pairs = [_pair(v, a, 0.029) for a in seps for v in (0.5, 1.0, 2.0)]
    per_pair = [a for a in seps for _ in range(3)]
    assert estimate_residual_potential(pairs, per_pair) == pytest.approx(0.029, rel=1e-3)


def test_residual_zero():
    assert abs(estimate_residual_potential([_pair(1.0, 500.0, 0.0)], 500.0)) < 1e-12
    with pytest.raises(ValueError):
        estimate_residual_potential([(0.0, -1.0, -1.0)], 500.0)


def _records(k, noise, seed):
    rng = np.random.default_rng(seed)
    out = []
    for a in (1000.0, 2000.0, 3000.0, 4000.0, 5000.0):
        for v in (-3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0):
            f = abs(electrostatic_force(ElectrostaticSetup(v, a)))
            z = f * 1e-12 / k * 1e9 * (1 + noise * rng.standard_normal())
            out.append(CalibrationRecord(v, a, z))
    return out


def test_calibration_exact_single():
    rec = _records(0.0182, 0.0, 0)[7]
    assert calibrate_force_constant([rec]) == pytest.approx(0.0182, rel=1e-12)
    assert hooke_force_pN(0.0182, rec.deflection_nm) == pytest.approx(
        abs(electrostatic_force(ElectrostaticSetup(rec.V1, rec.a_nm))), rel=1e-12)


def test_calibration_noisy_design():
    k = calibrate_force_constant(_records(0.0182, 0.01, 20240601))
    assert k == pytest.approx(0.0182, rel=0.01)


def test_calibration_skips_zero(caplog):
    recs = _records(0.0182, 0.0, 0)[:3] + [CalibrationRecord(1.0, 1000.0, 0.0)]
    with caplog.at_level(logging.WARNING):
        assert calibrate_force_constant(recs) == pytest.approx(0.0182, rel=1e-12)
    assert "zero deflection" in caplog.text
    with pytest.raises(ValueError):
        calibrate_force_constant([CalibrationRecord(1.0, 1000.0, 0.0)])
