"""Posterior scaling distribution against scipy and quadrature oracles."""

import math

import numpy as np
import pytest
import scipy.integrate
import scipy.special

from sketchqr.rng import giid
from sketchqr.uncertainty import (
    expected_norm_sq,
    jl_bound,
    regularized_gamma_q,
    scaling_cdf,
    scaling_pdf,
)


def test_gamma_q_against_scipy():
    for s in (0.5, 1.0, 2.0, 3.5, 16.0, 100.0):
        for x in (0.0, 1e-8, 0.1, 0.5, s, 2 * s, 10 * s):
            want = scipy.special.gammaincc(s, x)
            got = regularized_gamma_q(s, x)
            assert got == pytest.approx(want, rel=1e-10, abs=1e-300)


def test_gamma_q_domain():
    with pytest.raises(ValueError):
        regularized_gamma_q(0.0, 1.0)
    with pytest.raises(ValueError):
        regularized_gamma_q(1.0, -0.5)


def test_caption_probabilities():
    assert scaling_cdf(4, 1 / 8) == pytest.approx(0.0030, abs=1e-4)
    assert scaling_cdf(8, 1 / 4) == pytest.approx(0.0023, abs=2e-4)
    assert scaling_cdf(32, 1 / 2) == pytest.approx(0.0020, abs=2e-4)


def test_pdf_normalizes():
    total, _ = scipy.integrate.quad(lambda t: scaling_pdf(10, t), 0, np.inf)
    assert total == pytest.approx(1.0, abs=1e-6)


def test_cdf_is_antiderivative_of_pdf():
    for ell in (4, 9, 32):
        for phi in (0.2, 0.7, 1.0, 1.8):
            h = 1e-6
            slope = (scaling_cdf(ell, phi + h) - scaling_cdf(ell, phi - h)) / (2 * h)
            assert slope == pytest.approx(scaling_pdf(ell, phi), rel=1e-5)


def test_mode_location():
    for ell in (4, 8, 40):
        mode = (ell - 2) / (ell + 2)
        grid = np.linspace(1e-3, 3.0, 20001)
        dens = [scaling_pdf(ell, t) for t in grid]
        assert grid[int(np.argmax(dens))] == pytest.approx(mode, abs=2e-4)


def test_cdf_monotone_and_limits():
    vals = [scaling_cdf(8, t) for t in (0.05, 0.2, 0.5, 1.0, 4.0, 100.0)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert scaling_cdf(8, 1e9) == pytest.approx(1.0, abs=1e-12)
    assert scaling_cdf(8, 0.0) == 0.0


def test_cdf_domain():
    with pytest.raises(ValueError):
        scaling_cdf(2, 0.5)  # needs ell >= 3
    # phi has positive support, so any nonpositive threshold has mass 0
    assert scaling_cdf(8, -0.1) == 0.0


def test_expected_norm_sq():
    assert expected_norm_sq(0.0, 40) == 0.0
    assert expected_norm_sq(38.0, 40) == pytest.approx(1.0)


def test_expected_norm_monte_carlo():
    # ||b||^2 for a unit column has mean ell, so the posterior point estimate
    # ||b||^2 / (ell - 2) averages to ell / (ell - 2) over draws.
    ell, trials = 40, 2000
    a = np.zeros(6)
    a[2] = 1.0
    est = np.empty(trials)
    for seed in range(trials):
        b = giid(ell, 6, seed=seed) @ a
        est[seed] = expected_norm_sq(float(b @ b), ell)
    assert est.mean() == pytest.approx(ell / (ell - 2), rel=0.03)


def test_argmax_invariance():
    # expected_norm_sq is a positive scaling, so it cannot change the argmax.
    norms = np.abs(np.random.default_rng(5).standard_normal(30)) ** 2
    scaled = [expected_norm_sq(float(v), 12) for v in norms]
    assert int(np.argmax(norms)) == int(np.argmax(scaled))


def test_jl_bound_values():
    assert jl_bound(40, 1e-9) == 0.0  # degenerate limit clamps at zero
    want = 1.0 - 2.0 * math.exp(-40 * 0.49**2 * (1 - 0.49) / 4)
    assert jl_bound(40, 0.49) == pytest.approx(want, rel=1e-12)


def test_jl_bound_monotone_in_ell():
    vals = [jl_bound(ell, 0.3) for ell in (8, 16, 64, 256, 1024)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_jl_bound_domain():
    for eps in (0.0, 0.5, 0.9, -0.1):
        with pytest.raises(ValueError):
            jl_bound(16, eps)
