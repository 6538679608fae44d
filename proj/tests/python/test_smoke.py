"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import repcal


def make_preprocessed(seed=1, noise_std=0.0):
    cfg = repcal.ScenarioConfig()
    s = repcal.generate_scenario(cfg, seed)
    ms = repcal.take_calibration_measurements(s, noise_std, seed + 1)
    return s, repcal.preprocess(ms)


def test_scenario_shapes_and_gains():
    cfg = repcal.ScenarioConfig()
    s = repcal.generate_scenario(cfg, 7)
    assert s.g_mat.shape == (3, 4)
    assert abs(abs(s.alpha) - math.sqrt(10.0)) < 1e-12
    assert np.allclose(np.abs(s.h_vec), 1.0)


def test_basic_and_alternating_nls_noise_free():
    s, p = make_preprocessed(seed=3)
    basic = repcal.basic_nls(p)
    alt = repcal.alternating_nls(p, basic)
    gamma = s.gamma()
    assert abs(basic.gamma_hat - gamma) / abs(gamma) < 1e-6
    assert abs(alt.gamma_hat - gamma) / abs(gamma) < 1e-6
    assert alt.objective <= basic.objective + 1e-15
    assert repcal.calibration_residual(s, alt.gamma_hat) < 1e-8


def test_rank_one_approx():
    m = np.diag([3.0 + 0j, 1.0 + 0j])
    out = repcal.rank_one_approx(m)
    assert np.allclose(out, np.diag([3.0, 0.0]))


def test_degenerate_input_raises():
    s, _ = make_preprocessed(seed=5)
    with pytest.raises(ArithmeticError):
        repcal.calibration_residual(s, 0.0)


def test_config_error_maps_to_value_error():
    cfg = repcal.ScenarioConfig()
    cfg.m_a = 0
    with pytest.raises(ValueError):
        repcal.generate_scenario(cfg, 1)


def test_multi_calibration():
    cfg = repcal.ScenarioConfig()
    ms = repcal.generate_multi_scenario(cfg, 4, 11)
    res = repcal.run_multi_calibration(ms, 0.0, 0)
    for n in range(4):
        assert abs(res.gamma_hats[n] - ms.gamma(n)) < 1e-6


def test_sweep_runs_and_serializes():
    cfg = repcal.SweepConfig()
    cfg.snr_db_grid = [10.0]
    cfg.trials = 10
    cfg.set_estimators(["uncalibrated", "basic"])
    res = repcal.run_sweep(cfg)
    assert len(res.rows) == 2
    assert res.to_csv().startswith("snr_db,estimator,rmse,trials,failures,seed")


def test_hadamard_pattern():
    h = repcal.hadamard_pattern(4)
    assert (h.T @ h == 4 * np.eye(4, dtype=int)).all()
    with pytest.raises(ValueError):
        repcal.hadamard_pattern(3)
