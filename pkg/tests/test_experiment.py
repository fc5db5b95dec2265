import math

import numpy as np
import pytest
from scipy import stats

from qentangle.experiment import (aggregate, fit_polynomial, histogram_density, monte_carlo, random_q_mean,
                                  random_state_baseline, saturation_rows, saturation_study, saturation_time)
from qentangle.groverian import OptimizerOptions
from qentangle.scheme import SchemeConfig

FAST = OptimizerOptions(restarts=3, tolerance=1e-8)


def test_random_q_mean_values():
    assert random_q_mean(2) == pytest.approx(2 / 5)
    assert random_q_mean(8) == pytest.approx(254 / 257)
    assert random_q_mean(1) == 0


def test_baseline_q_matches_closed_form():
    q, g = random_state_baseline(2, 10_000, seed=1, groverian=False)
    assert np.all(np.isnan(g))
    assert abs(q.mean() - 0.4) < 0.01
    q4, _ = random_state_baseline(4, 20_000, seed=2, groverian=False)
    assert abs(q4.mean() - random_q_mean(4)) < 3 * q4.std(ddof=1) / math.sqrt(q4.size)


def test_baseline_single_qubit_is_product():
    q, g = random_state_baseline(1, 50, FAST, seed=3)
    assert np.all(np.abs(q) < 1e-12)
    assert np.all(np.abs(g) < 1e-9)


def test_baseline_thread_invariant():
    a = random_state_baseline(3, 30, FAST, seed=4, threads=1)
    b = random_state_baseline(3, 30, FAST, seed=4, threads=3)
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])


def test_monte_carlo_initial_row_and_threads():
    cfg = SchemeConfig(4, "local", 12, 6)
    a = monte_carlo(cfg, 20, None, FAST, threads=1)
    b = monte_carlo(cfg, 20, None, FAST, threads=4)
    for m in ("K", "Q", "G"):
        np.testing.assert_array_equal(a.samples[m], b.samples[m])
        np.testing.assert_array_equal(a.mean[m], b.mean[m])
    assert abs(a.mean["K"][0]) < 1e-12
    assert abs(a.mean["Q"][0]) < 1e-9
    assert abs(a.mean["G"][0]) < 1e-6
    assert a.realizations == 20 and a.times.tolist() == list(range(13))


def test_monte_carlo_needs_two_runs():
    with pytest.raises(ValueError):
        monte_carlo(SchemeConfig(3, "local", 2, 0), 1)


@pytest.mark.parametrize("n, steps, runs", [(2, 100, 2000), (8, 200, 500)])
def test_late_q_matches_random_states(n, steps, runs):
    ens = monte_carlo(SchemeConfig(n, "nonlocal", steps, 31), runs, [0, steps])
    mean, sem = ens.mean["Q"][-1], ens.sem["Q"][-1]
    assert abs(mean - random_q_mean(n)) < 3 * sem


def test_two_qubit_geometries_statistically_equal():
    a = monte_carlo(SchemeConfig(2, "local", 20, 100), 1000, [1, 5, 20])
    b = monte_carlo(SchemeConfig(2, "nonlocal", 20, 200), 1000, [1, 5, 20])
    for k in range(3):
        assert stats.ttest_ind(a.samples["Q"][:, k], b.samples["Q"][:, k]).pvalue > 0.01


def test_infinite_k_excluded_and_counted():
    K = np.array([[0.0, 1.0, np.inf], [0.0, 3.0, 2.0], [0.0, 2.0, 4.0]])
    ens = aggregate([0, 1, 2], {"K": K, "Q": np.zeros((3, 3)), "G": np.full((3, 3), np.nan)})
    assert ens.k_excluded.tolist() == [0, 0, 1]
    assert ens.mean["K"][2] == 3.0
    assert ens.sem["K"][1] == pytest.approx(1 / math.sqrt(3))
    assert ens.sem["K"][2] == pytest.approx(math.sqrt(2) / math.sqrt(2))


def test_saturation_time_examples():
    t = np.arange(10)
    s = saturation_time(t, np.full(10, 2.5), 0.9, 3)
    assert s.detected and s.t_star == 0 and s.value == 2.5
    series = np.array([0, 0.5, 0.8, 0.95, 1, 1, 1, 1, 1, 1])
    assert saturation_time(t, series, 0.9, 5).t_star == 3
    spiky = np.array([0, 0.95, 0.6, 0.85, 0.92, 1, 1, 1, 1, 1])
    assert saturation_time(t, spiky, 0.9, 5).t_star == 4
    dropping = np.array([0, 0.5, 1, 1, 1, 1, 1, 1, 1, 0.5])
    s = saturation_time(t, dropping, 0.9, 5)
    assert not s.detected and math.isnan(s.t_star)
    with pytest.raises(ValueError):
        saturation_time(t, series, 1.2, 3)
    with pytest.raises(ValueError):
        saturation_time(t[:2], series[:2], 0.9, 3)


def test_saturation_time_default_window():
    t = np.arange(100)
    y = np.minimum(t / 40, 1.0)
    s = saturation_time(t, y)
    assert s.value == 1.0 and s.t_star == 36


def test_saturation_time_interpolated():
    t = np.arange(0, 20, 2)
    series = np.array([0, 0.5, 0.8, 0.95, 1, 1, 1, 1, 1, 1])
    # threshold 0.9 lies 2/3 of the way from 0.8 (t=4) to 0.95 (t=6)
    s = saturation_time(t, series, 0.9, 5, interpolate=True)
    assert s.t_star == pytest.approx(4 + 2 * (0.1 / 0.15))
    # crossing at the first point or an undetected run is unaffected
    assert saturation_time(t, np.ones(10), 0.9, 3, interpolate=True).t_star == 0
    dropping = np.array([0, 0.5, 1, 1, 1, 1, 1, 1, 1, 0.5])
    assert not saturation_time(t, dropping, 0.9, 5, interpolate=True).detected


def test_fit_polynomial_examples(rng):
    xs = np.arange(5.0)
    f = fit_polynomial(xs, 2 * xs + 1, 1)
    np.testing.assert_allclose(f.coefficients, [1, 2], atol=1e-12)
    assert f.r2 == pytest.approx(1.0)
    xs = np.arange(1.0, 9.0)
    np.testing.assert_allclose(fit_polynomial(xs, xs**2, 2).coefficients, [0, 0, 1], atol=1e-9)
    xs = np.linspace(4, 10, 7)
    ys = 3 * xs + rng.normal(0, 1, xs.size)
    assert fit_polynomial(xs, ys, 2).rss <= fit_polynomial(xs, ys, 1).rss + 1e-12
    lin = fit_polynomial(xs, ys, 1)
    np.testing.assert_allclose(lin.coefficients, np.polynomial.polynomial.polyfit(xs, ys, 1), atol=1e-9)
    with pytest.raises(ValueError):
        fit_polynomial([1, 2, 3], [1, 2, 3], 2)
    with pytest.raises(ValueError):
        fit_polynomial([1, 2, 3, 4], [1, 2, 3, 4], 3)


def test_histogram_density(rng):
    h = histogram_density(np.full(10, 0.3), 5)
    assert h.degenerate
    assert np.sum(h.density * h.widths) == pytest.approx(1.0)
    u = rng.random(100_000)
    h = histogram_density(u, 10)
    assert not h.degenerate and len(h.density) == 10
    assert np.all(np.abs(h.density - 1) < 0.05)
    assert abs(np.sum(h.density * h.widths) - 1) < 1e-9
    h = histogram_density(rng.normal(size=1000), 17, (-5, 5))
    assert abs(np.sum(h.density * h.widths) - 1) < 1e-9
    with pytest.raises(ValueError):
        histogram_density([1.0], 3)
    with pytest.raises(ValueError):
        histogram_density([1.0, 2.0], 0)


def test_saturation_study_smoke():
    rows, fits = saturation_study([3, 4, 5], ["local", "nonlocal"], lambda n: 30 * n, 40, 1, FAST,
                                  batches=4)
    assert len(rows) == 3 * 2 * 3
    for r in rows:
        assert r.measure in ("K", "Q", "G")
        if r.detected:
            assert 0 <= r.t_star <= 30 * r.n
    assert set(fits[(rows[0].geometry, "Q")]) == {1}


def test_saturation_rows_sem_uses_batches():
    cfg = SchemeConfig(4, "nonlocal", 60, 3)
    ens = monte_carlo(cfg, 40, None, None)
    rows = saturation_rows(ens, 4, "nonlocal", batches=4)
    assert [r.measure for r in rows] == ["K", "Q"]
    assert all(r.t_star_sem >= 0 or math.isnan(r.t_star_sem) for r in rows)
