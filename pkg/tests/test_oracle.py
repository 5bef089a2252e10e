import math

import numpy as np
import pytest
from scipy import integrate, special

from expspline.oracle import (
    TABLE6_WAVE,
    OracleDomainError,
    TangentSingularityError,
    WaveParams,
    bessel_i,
    error_norms,
    exact_a,
    exact_b,
    exact_c,
    exact_d,
)
from oracles import fd_residual


def test_bessel_at_zero():
    assert bessel_i(0, 0.0) == 1.0
    assert bessel_i(1, 0.0) == 0.0
    assert bessel_i(7, 0.0) == 0.0


def test_bessel_i0_one_against_quadrature():
    val, _ = integrate.quad(lambda th: math.exp(math.cos(th)), 0.0, math.pi, epsabs=1e-14, epsrel=1e-13)
    assert bessel_i(0, 1.0) == pytest.approx(val / math.pi, abs=1e-10)


@pytest.mark.parametrize("z", [0.5, 1.59, 15.9])
def test_bessel_recurrence(z):
    for n in range(1, 21):
        lhs = bessel_i(n - 1, z) - bessel_i(n + 1, z)
        rhs = 2.0 * n / z * bessel_i(n, z)
        assert lhs == pytest.approx(rhs, rel=1e-9)


def test_bessel_against_scipy():
    worst = 0.0
    for n in (0, 1, 2, 5, 20, 100, 300, 500):
        for z in (1e-3, 0.3, 1.0, 5.0, 15.9, 40.0, 100.0):
            ref = special.iv(n, z)
            if ref < 1e-290:
                continue
            worst = max(worst, abs(bessel_i(n, z) - ref) / ref)
    assert worst <= 1e-12


@pytest.mark.parametrize("n,z", [(-1, 1.0), (501, 1.0), (0, -0.1), (0, 100.5), (1.5, 1.0)])
def test_bessel_domain(n, z):
    with pytest.raises(OracleDomainError):
        bessel_i(n, z)


@pytest.mark.parametrize(
    "x,t,lam,expected",
    [(0.25, 0.4, 1.0, 0.01357), (0.5, 0.4, 0.1, 0.56963), (0.75, 3.0, 0.01, 0.22481)],
)
def test_exact_a_table_values(x, t, lam, expected):
    assert round(exact_a(x, t, lam), 5) == expected


def test_exact_a_domain():
    with pytest.raises(OracleDomainError):
        exact_a(0.5, 0.1, 0.005)
    with pytest.raises(OracleDomainError):
        exact_a(0.5, 0.0, 0.1)


def test_exact_a_decays():
    x = np.linspace(0, 1, 41)
    peaks = [np.abs(exact_a(x, t, 0.1)).max() for t in (1.0, 1.5, 2.0, 2.5, 3.0)]
    assert all(b < a for a, b in zip(peaks, peaks[1:]))


def test_exact_a_small_time_is_sine():
    x = np.linspace(0, 1, 11)
    np.testing.assert_allclose(exact_a(x, 1e-6, 1.0), np.sin(np.pi * x), atol=1e-4)


def test_exact_a_residual():
    rng = np.random.default_rng(9)
    x = rng.uniform(0.05, 0.95, 50)
    t = rng.uniform(0.1, 1.0, 50)
    res = [fd_residual(lambda xx, tt: exact_a(xx, tt, 0.1), xi, ti, 0.1) for xi, ti in zip(x, t)]
    assert np.abs(res).max() <= 1e-4


def test_exact_b_values():
    assert round(exact_b(0.1, 1.7, 0.005), 6) == 0.058823
    assert round(exact_b(0.5, 2.5, 0.0005), 5) == 0.20000


def test_exact_b_decreases_past_shock():
    x = np.linspace(0.8, 1.0, 50)
    u = exact_b(x, 1.7, 0.005)
    assert np.all(np.diff(u) < 0)
    assert u[-1] < 1e-7


def test_exact_b_domain():
    with pytest.raises(OracleDomainError):
        exact_b(0.5, 0.9, 0.01)
    with pytest.raises(OracleDomainError):
        exact_b(1.5, 2.0, 0.01)


@pytest.mark.parametrize("lam", [0.1, 0.05])
def test_exact_b_residual(lam):
    rng = np.random.default_rng(4)
    x = rng.uniform(0.02, 0.98, 50)
    t = rng.uniform(1.2, 3.0, 50)
    res = [fd_residual(lambda xx, tt: exact_b(xx, tt, lam), xi, ti, lam) for xi, ti in zip(x, t)]
    assert np.abs(res).max() <= 1e-4


def test_exact_c_values():
    # the printed positions 0.444 and 0.056 are the nodes 8/18 and 1/18
    assert round(exact_c(8 / 18, 0.5, 0.01, TABLE6_WAVE), 3) == 0.452
    assert round(exact_c(1 / 18, 0.5, 0.01, TABLE6_WAVE), 3) == 1.0


def test_exact_c_asymptotes():
    w = WaveParams(0.4, 0.6, 0.125)
    assert exact_c(-1e3, 0.0, 0.01, w) == pytest.approx(w.wave_mu + w.wave_alpha, abs=1e-15)
    assert exact_c(1e3, 0.0, 0.01, w) == pytest.approx(w.wave_mu - w.wave_alpha, abs=1e-15)


def test_exact_c_matches_printed_form():
    w = TABLE6_WAVE
    x = np.linspace(0, 1, 37)
    eta = w.wave_alpha * (x - w.wave_mu * 0.5 - w.wave_gamma) / 0.05
    printed = (w.wave_alpha + w.wave_mu + (w.wave_mu - w.wave_alpha) * np.exp(eta)) / (1 + np.exp(eta))
    np.testing.assert_allclose(exact_c(x, 0.5, 0.05), printed, rtol=1e-13)


def test_wave_params_reject_zero_alpha():
    with pytest.raises(ValueError):
        WaveParams(0.0, 0.6, 0.125)


@pytest.mark.parametrize("lam", [0.1, 0.05])
def test_exact_c_residual(lam):
    rng = np.random.default_rng(6)
    x = rng.uniform(0.0, 1.0, 50)
    t = rng.uniform(0.05, 1.0, 50)
    res = [fd_residual(lambda xx, tt: exact_c(xx, tt, lam), xi, ti, lam) for xi, ti in zip(x, t)]
    assert np.abs(res).max() <= 1e-4


def test_exact_d_values():
    # printed to 9 decimals by truncation, so allow one unit in the last place
    assert exact_d(1.0, 2.25, 1e-3) == pytest.approx(0.001541377, abs=1e-9)
    assert exact_d(1.5, 2.25, 1e-3) == pytest.approx(0.002423004, abs=1e-9)
    x = np.linspace(0.5, 1.5, 11)
    np.testing.assert_array_equal(exact_d(x, 0.0, 0.3), 0.3 * (x + np.tan(x / 2)))


@pytest.mark.parametrize("lam", [0.1, 0.01])
def test_exact_d_residual(lam):
    rng = np.random.default_rng(8)
    x = rng.uniform(0.5, 1.5, 50)
    t = rng.uniform(0.1, 3.0, 50)
    res = [fd_residual(lambda xx, tt: exact_d(xx, tt, lam), xi, ti, lam) for xi, ti in zip(x, t)]
    assert np.abs(res).max() <= 1e-4


def test_exact_d_pole():
    with pytest.raises(TangentSingularityError):
        exact_d(math.pi, 0.0, 0.1)


def test_error_norms_zero_when_exact():
    mesh = np.linspace(0, 1, 21)
    rep = error_norms(np.sin(mesh), lambda x, t: np.sin(x), mesh, 0.0)
    assert rep.l2 == 0.0 and rep.linf == 0.0


def test_error_norms_constant_offset():
    mesh = np.linspace(0, 1, 41)
    h = 1 / 40
    rep = error_norms(np.full(41, 0.3), lambda x, t: np.zeros_like(x), mesh, 1.0)
    assert rep.linf == pytest.approx(0.3)
    assert rep.l2 == pytest.approx(0.3 * math.sqrt(h * 41))
    assert len(rep.per_node) == 41
    assert all(rep.linf >= d for _, _, _, d in rep.per_node)


def test_error_norms_shape_mismatch():
    with pytest.raises(ValueError):
        error_norms(np.zeros(5), lambda x, t: x, np.linspace(0, 1, 6), 0.0)
