import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from simps.analysis import (
    EmpiricalCcdf,
    InsufficientDataError,
    TailModel,
    ccdf,
    detect_cutoff,
    fit_power_law,
    fit_weibull_tail,
    log_binned,
    write_ccdf_csv,
    write_fit_report,
)


def pareto(alpha, n, seed, x_m=1.0):
    # inverse CDF: P(X > x) = (x / x_m) ** -alpha
    u = 1.0 - np.random.default_rng(seed).random(n)
    return x_m * u ** (-1.0 / alpha)


def weibull(k, n, seed, scale=1.0):
    u = 1.0 - np.random.default_rng(seed).random(n)
    return scale * (-np.log(u)) ** (1.0 / k)


def truncated_pareto(alpha, n, seed, cut, x_m=1.0):
    # conditional on X <= cut
    u = np.random.default_rng(seed).random(n)
    f_cut = 1.0 - (cut / x_m) ** -alpha
    return x_m * (1.0 - u * f_cut) ** (-1.0 / alpha)


def test_ccdf_counting_example():
    c = ccdf([1, 2, 2, 5])
    assert list(c.support) == [1, 2]
    assert c.p_gt == pytest.approx([0.75, 0.25])
    assert c.p_ge == pytest.approx([1.0, 0.75, 0.25])
    assert len(c) == 2  # P(X > 5) = 0 is dropped


@pytest.mark.parametrize("samples,x", [([3, 3, 3], 3.0), ([7], 7.0)])
def test_ccdf_degenerate(samples, x):
    c = ccdf(samples)
    assert list(c.x) == [x]
    assert c.p_ge[0] == 1.0
    assert len(c) == 0


def test_ccdf_errors():
    with pytest.raises(InsufficientDataError):
        ccdf([])
    with pytest.raises(ValueError):
        ccdf([1.0, 0.0])
    with pytest.raises(ValueError):
        ccdf([1.0, np.inf])


def test_ccdf_evaluate_step_function():
    c = ccdf([1, 2, 2, 5])
    assert c.evaluate([0.5, 1, 1.5, 2, 4.9, 5, 6]) == pytest.approx([1, 0.75, 0.75, 0.25, 0.25, 0, 0])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.01, 1e4), min_size=1, max_size=60), st.floats(0.1, 100.0))
def test_ccdf_scale_equivariant(samples, factor):
    a = ccdf(samples)
    b = ccdf(np.asarray(samples) * factor)
    assert np.allclose(b.x, a.x * factor, rtol=1e-12)
    assert np.array_equal(a.p_gt_all, b.p_gt_all)
    p = a.p_gt
    assert np.all(np.diff(p) < 0) and np.all((p > 0) & (p <= 1))


def test_power_law_exponent_invariant_under_rescaling():
    x = pareto(1.3, 20_000, 3)
    a = fit_power_law(ccdf(x), 2, 200)
    b = fit_power_law(ccdf(x * 7.0), 14, 1400)
    assert a.alpha == pytest.approx(b.alpha, abs=1e-9)


def test_power_law_recovers_pareto_exponent():
    fit = fit_power_law(ccdf(pareto(1.5, 100_000, 11)), 1.0, 100.0)
    assert fit.model is TailModel.POWER_LAW
    assert 1.4 <= fit.alpha <= 1.6
    assert fit.r2 > 0.99


def test_weibull_recovers_shape():
    fit = fit_weibull_tail(ccdf(weibull(0.8, 100_000, 12)), 0.01, 10.0)
    assert 0.7 <= fit.k <= 0.9
    assert fit.scale == pytest.approx(1.0, rel=0.1)


def test_exact_power_law_points():
    x = np.geomspace(1, 1000, 40)
    p = x**-1.7
    fit = fit_power_law(EmpiricalCcdf(x, p, p, 10**9), 1, 1000)
    assert fit.alpha == pytest.approx(1.7, abs=1e-9)
    assert fit.r2 == pytest.approx(1.0, abs=1e-12)


def test_exact_exponential_is_weibull_one():
    x = np.linspace(0.1, 10, 50)
    p = np.exp(-x / 3.0)
    fit = fit_weibull_tail(EmpiricalCcdf(x, p, p, 10**9), 0.1, 10)
    assert fit.k == pytest.approx(1.0, abs=1e-6)
    assert fit.scale == pytest.approx(3.0, rel=1e-6)


def test_exponential_data_curves_away_from_power_law():
    pl = fit_power_law(ccdf(pareto(1.5, 50_000, 1)), 1, 50)
    ex = fit_power_law(ccdf(1 + np.random.default_rng(2).exponential(5.0, 50_000)), 1, 50)
    assert ex.r2 < pl.r2 - 0.05


def test_power_law_data_prefers_power_law():
    c = ccdf(pareto(1.2, 50_000, 5))
    assert fit_weibull_tail(c, 1, 100).r2 < fit_power_law(c, 1, 100).r2


def test_r2_clipped():
    rng = np.random.default_rng(0)
    for seed in range(5):
        c = ccdf(rng.uniform(1, 2, 30))
        for f in (fit_power_law(c, 1, 2), fit_weibull_tail(c, 1, 2)):
            assert 0.0 <= f.r2 <= 1.0


def test_insufficient_points():
    c = ccdf([1, 2, 3, 4, 5, 6, 7])
    with pytest.raises(InsufficientDataError):
        fit_power_law(c, 1, 4)
    with pytest.raises(InsufficientDataError):
        fit_weibull_tail(c, 5, 7)
    with pytest.raises(InsufficientDataError):
        detect_cutoff(c)


def test_log_binned_drops_thin_tail():
    c = ccdf(pareto(1.0, 1000, 4))
    gx, gp = log_binned(c, per_decade=10, min_count=5)
    assert np.all(gp * 1000 >= 5 - 1e-9)
    assert np.all(np.diff(gx) > 0)


def test_cutoff_none_on_pure_power_law():
    assert detect_cutoff(ccdf(pareto(1.2, 100_000, 21))) is None


def test_cutoff_located_for_truncated_power_law():
    x = detect_cutoff(ccdf(truncated_pareto(1.2, 1_000_000, 22, cut=500.0)))
    assert x is not None and 300 <= x <= 500


def test_cutoff_small_for_exponential():
    samples = np.random.default_rng(23).exponential(20.0, 100_000)
    x = detect_cutoff(ccdf(samples))
    assert x is not None and x < 100


def test_csv_writers(tmp_path):
    c = ccdf([1, 2, 2, 5])
    write_ccdf_csv(c, tmp_path / "c.csv")
    assert (tmp_path / "c.csv").read_text() == "x_s,p_gt\n1,0.75\n2,0.25\n"
    fit = fit_power_law(ccdf(pareto(1.5, 1000, 0)), 1, 10)
    write_fit_report([fit], tmp_path / "f.csv")
    lines = (tmp_path / "f.csv").read_text().splitlines()
    assert lines[0] == "model,alpha_or_k,x_min,x_max,r2"
    assert lines[1].startswith("powerlaw,")
