import numpy as np
import pytest
from dataclasses import replace

from casimir_rough.combined_force import (breakdown_grid, combined_large, combined_small,
                                          correction_factors, evaluate_point, regime_for, regime_gap,
                                          theory_function)
from casimir_rough.conductivity import MaterialStack
from casimir_rough.core_types import Regime, SeparationConvention
from casimir_rough.lifshitz_psi import f0_ideal
from casimir_rough.roughness import ContactError, ValidityError

AL = SeparationConvention.Al_surfaces

pytestmark = pytest.mark.filterwarnings("ignore::casimir_rough.conductivity.ValidityWarning")


def pct(cfg, a_al, regime=Regime.small_distance):
    f = correction_factors(cfg.to_aupd(a_al, AL), cfg, regime)
    return {k: (v - 1) * 100 for k, v in f.items()}


def test_percentages_at_120(scenario):
    p = pct(scenario, 120.0)
    assert p["f_rough"] == pytest.approx(16.85, abs=0.05)
    assert p["f_cond"] == pytest.approx(-34.14, abs=0.05)
    assert p["f_combined"] == pytest.approx(-22.46, abs=0.05)


def test_percentages_at_950(scenario):
    p = pct(scenario, 950.0)
    assert p["f_rough"] == pytest.approx(0.18, abs=0.01)
    assert p["f_cond"] == pytest.approx(-6.35, abs=0.05)


def test_not_separable(scenario):
    pt = evaluate_point(80.0, scenario, Regime.small_distance)
    product = pt["f_rough"] * pt["f_cond"] / pt["f0"]
    assert abs(pt["f_combined"] - product) > 1e-3 * abs(pt["f0"])


def test_identities(scenario):
    a = 300.0
    flat = scenario.flat()
    no_metal = replace(scenario, stack=MaterialStack(delta0=0.0, delta0_tilde=80.0, Delta=20.0))
    pt = evaluate_point(a, scenario, Regime.small_distance)
    assert combined_small(a, flat) == pytest.approx(evaluate_point(a, flat, Regime.small_distance)["f_cond"], rel=1e-14)
    assert combined_small(a, no_metal) == pytest.approx(pt["f_rough"], rel=1e-14)
    assert combined_small(a, flat, depth_nm=0.0) == pytest.approx(f0_ideal(a + 40.0), rel=1e-14)
    assert combined_large(a, scenario) == pytest.approx(
        evaluate_point(a, scenario, Regime.large_distance)["f_combined"], rel=1e-14)


@pytest.mark.parametrize("a", [120.0, 300.0, 700.0])
def test_ordering(scenario, a):
    f = correction_factors(a, scenario)
    assert f["f_cond"] < 1.0 < f["f_rough"]


def test_distance_offset_shifts_gap(scenario):
    shifted = replace(scenario, distance_offset=3.0)
    assert combined_small(100.0, shifted) == pytest.approx(combined_small(103.0, scenario), rel=1e-14)
    with pytest.raises(ValueError):
        replace(scenario, distance_offset=6.0)


def test_regime_selection(scenario):
    assert regime_for(500.0, scenario) is Regime.small_distance
    assert regime_for(500.1, scenario) is Regime.large_distance
    bd = breakdown_grid([400.0, 600.0], scenario)
    assert [b.regime for b in bd] == [Regime.small_distance, Regime.large_distance]


def test_regime_gap_is_reported(scenario):
    gap = regime_gap(500.0, scenario)
    assert gap == pytest.approx(0.0847, abs=5e-4)


@pytest.mark.xfail(strict=True, reason="the two prescriptions differ by about 8.5% at 500 nm")
def test_regime_gap_below_five_percent(scenario):
    assert regime_gap(500.0, scenario) < 0.05


def _magnitudes(bd):
    return np.array([abs(b.f_combined) for b in bd])


def test_monotone_within_each_regime(scenario):
    grid = np.linspace(80, 910, 200)
    bd = breakdown_grid(grid, scenario)
    assert all(b.ok for b in bd)
    for regime in Regime:
        m = np.array([abs(b.f_combined) for b in bd if b.regime is regime])
        assert np.all(np.diff(m) < 0)


def test_monotone_single_prescription(scenario):
    cfg = replace(scenario, regime_boundary=1e9)
    assert np.all(np.diff(_magnitudes(breakdown_grid(np.linspace(80, 910, 200), cfg))) < 0)


@pytest.mark.xfail(strict=True, reason="|F| jumps up where the large-distance prescription takes over")
def test_monotone_across_default_boundary(scenario):
    assert np.all(np.diff(_magnitudes(breakdown_grid(np.linspace(80, 910, 200), scenario))) < 0)


def test_breakdown_reports_errors(scenario):
    bd = breakdown_grid([10.0, 100.0], scenario)
    assert not bd[0].ok and bd[0].error
    assert bd[1].ok and bd[1].error is None
    with pytest.raises(ValueError):
        breakdown_grid([200.0, 100.0], scenario)


def test_breakdown_captures_validity_warning(scenario):
    # the a - 2A term at Al 120 nm sits at depth/a = 0.245
    bd = breakdown_grid([120.0, 400.0], scenario, AL)
    assert all(b.ok for b in bd)
    assert any("0.245" in w for w in bd[0].warnings)
    assert bd[1].warnings == ()


def test_theory_function_matches_pointwise(scenario):
    a = np.array([120.0, 300.0, 480.0, 700.0, 950.0])
    for kind, key in (("f0", "f0"), ("rough", "f_rough"), ("cond", "f_cond"), ("combined", "f_combined")):
        got = theory_function(scenario, kind, "auto", AL)(a)
        want = [evaluate_point(scenario.to_aupd(x, AL), scenario)[key] for x in a]
        np.testing.assert_allclose(got, want, rtol=1e-12)


def test_theory_function_errors(scenario):
    with pytest.raises(ValueError):
        theory_function(scenario, "bogus")
    with pytest.raises(ContactError):
        theory_function(scenario, "rough", "large", SeparationConvention.AuPd_surfaces)(np.array([40.0]))
    with pytest.raises(ValidityError):
        theory_function(scenario, "cond", "large", SeparationConvention.AuPd_surfaces)(np.array([100.0]))
