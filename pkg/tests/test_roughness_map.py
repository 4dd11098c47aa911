import time
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from casimir_rough.roughness import RoughnessLevels, check_lateral_validity, solve_zero_level
from casimir_rough.roughness_map import (DegenerateClassWarning, HeightMap, MapParseError, default_thresholds,
                                         format_height_map, generate_synthetic_map, load_height_map,
                                         parse_height_map, save_height_map, segment_three_levels)

REFERENCE = RoughnessLevels()
SMALL_MAP = generate_synthetic_map(REFERENCE, 100.0, 64, 4.0, seed=1)


@pytest.fixture(scope="module")
def ref_map():
    return generate_synthetic_map(REFERENCE, 250.0, 256, 4.0, seed=0)


def test_parse_small_grid():
    hm = parse_height_map("0,0\n0,0\n", pitch=10)
    assert hm.heights.shape == (2, 2) and hm.pitch == 10
    assert not hm.heights.any()
    with pytest.raises(ValueError):
        hm.validate_size()


def test_parse_header_and_errors():
    assert parse_height_map("# pitch_nm=2.5\n1,2\n3,4\n").pitch == 2.5
    with pytest.raises(MapParseError) as exc:
        parse_height_map("1,2\n3\n")
    assert exc.value.row == 1
    with pytest.raises(MapParseError) as exc:
        parse_height_map("1,2\n3,x\n")
    assert (exc.value.row, exc.value.column) == (1, 1)
    with pytest.raises(MapParseError):
        parse_height_map("\n")
    with pytest.raises(ValueError):
        parse_height_map("1,2\n3,4\n", min_side=8)


def test_round_trip(tmp_path, ref_map):
    small = HeightMap(ref_map.heights[:16, :20], ref_map.pitch)
    path = tmp_path / "map.csv"
    save_height_map(small, path)
    back = load_height_map(path)
    np.testing.assert_array_equal(back.heights, small.heights)
    assert back.pitch == small.pitch
    assert parse_height_map(format_height_map(back)).heights.tobytes() == small.heights.tobytes()


def test_plateau_map_segmentation():
    rng = np.random.default_rng(3)
    n = 100
    flat = np.full(n * n, 5.0)
    flat[:1100] = 40.0
    flat[1100:3600] = 20.0
    hm = HeightMap(rng.permutation(flat).reshape(n, n), 4.0)
    lv = segment_three_levels(hm, (15.0, 30.0))
    assert (lv.v1, lv.v2, lv.v0) == pytest.approx((0.11, 0.25, 0.64), abs=1e-12)
    assert (lv.h1, lv.h2, lv.h0) == pytest.approx((40.0, 20.0, 10.0), abs=1e-12)


def test_constant_map_is_flat():
    hm = HeightMap(np.full((10, 10), 3.0))
    with pytest.warns(DegenerateClassWarning):
        lv = segment_three_levels(hm, (15.0, 30.0))
    assert lv.v0 == 1.0
    assert solve_zero_level(lv).is_flat


def test_threshold_validation(ref_map):
    with pytest.raises(ValueError):
        segment_three_levels(ref_map, (30.0, 15.0))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_permutation_invariant(seed):
    ref_map = SMALL_MAP
    rng = np.random.default_rng(seed)
    shuffled = HeightMap(rng.permutation(ref_map.heights.ravel()).reshape(ref_map.heights.shape))
    assert segment_three_levels(shuffled, (15.0, 30.0)) == segment_three_levels(ref_map, (15.0, 30.0))


@settings(max_examples=20, deadline=None)
@given(st.floats(-50.0, 50.0))
def test_translation_covariance(c):
    hm = generate_synthetic_map(REFERENCE, 100.0, 64, 4.0, seed=2)
    base = solve_zero_level(segment_three_levels(hm, (15.0, 30.0)))
    moved = solve_zero_level(segment_three_levels(HeightMap(hm.heights + c), (15.0 + c, 30.0 + c)))
    assert moved.H == pytest.approx(base.H + c, abs=1e-9)
    assert moved.A == pytest.approx(base.A, abs=1e-9)
    assert (moved.beta1, moved.beta2) == pytest.approx((base.beta1, base.beta2), abs=1e-9)


def test_generator_fractions(ref_map):
    h = ref_map.heights
    assert np.mean(h == 40.0) == pytest.approx(0.11, abs=1e-4)
    assert np.mean(h == 20.0) == pytest.approx(0.25, abs=1e-4)
    bg = h[(h != 40.0) & (h != 20.0)]
    assert bg.min() >= 0 and bg.max() <= 10.0


def test_generator_seeds():
    a = generate_synthetic_map(REFERENCE, seed=1)
    b = generate_synthetic_map(REFERENCE, seed=2)
    assert not np.array_equal(a.heights, b.heights)
    np.testing.assert_array_equal(a.heights, generate_synthetic_map(REFERENCE, seed=1).heights)
    for m in (a, b):
        lv = segment_three_levels(m, (15.0, 30.0))
        assert (lv.v1, lv.v2) == pytest.approx((0.11, 0.25), abs=0.02)


def test_generator_background_only():
    lv0 = RoughnessLevels(10.0, 10.0, 10.0, 0.0, 0.0, 1.0)
    hm = generate_synthetic_map(lv0, seed=4)
    with pytest.warns(DegenerateClassWarning):
        lv = segment_three_levels(hm, (15.0, 30.0))
    assert lv.v0 == 1.0


def test_generator_errors():
    with pytest.raises(ValueError):
        generate_synthetic_map(REFERENCE, lateral_feature_nm=4.0)
    with pytest.raises(ValueError):
        generate_synthetic_map(RoughnessLevels(40, 20, 10, 0.6, 0.39, 0.01), 250.0, 64, 4.0, max_attempts=2000)


@pytest.mark.parametrize("thresholds", [(15.0, 30.0), None])
def test_pipeline(ref_map, thresholds):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        lv = segment_three_levels(ref_map, thresholds)
    assert (lv.v1, lv.v2, lv.v0) == pytest.approx((0.11, 0.25, 0.64), abs=0.02)
    assert (lv.h1, lv.h2) == pytest.approx((40.0, 20.0), abs=1.0)
    m = solve_zero_level(lv)
    assert m.H == pytest.approx(12.6, abs=0.4)
    assert m.A == pytest.approx(27.4, abs=0.5)


def test_default_thresholds(ref_map):
    lo, hi = default_thresholds(ref_map)
    assert 10.0 < lo < 20.0 < hi < 40.0


def test_pipeline_speed():
    t = time.perf_counter()
    segment_three_levels(generate_synthetic_map(REFERENCE, seed=9))
    assert time.perf_counter() - t < 5.0


def test_lateral_validity_from_generator():
    for a in (80.0, 200.0, 900.0):
        assert check_lateral_validity(250.0, 250.0, a, 98.0).ok
