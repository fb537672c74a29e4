import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import norm

from mceb import hermite
from mceb.quadrature import panel_nodes


def test_orthonormality():
    # pairwise inner products by quadrature, p <= 16
    nodes, w = panel_nodes(-12.0, 12.0, 0.5, 32)
    h = hermite.hermite_functions(16, nodes)
    gram = (h * w) @ h.T
    assert np.abs(gram - np.eye(17)).max() < 1e-7


def test_recurrence_matches_explicit_low_orders():
    x = np.linspace(-3.0, 3.0, 11)
    h0 = np.pi ** -0.25 * np.exp(-x ** 2 / 2.0)
    assert np.allclose(hermite.hermite_function(0, x), h0, atol=1e-14)
    assert np.allclose(hermite.hermite_function(1, x),
                       np.sqrt(2.0) * x * h0, atol=1e-14)
    assert np.allclose(hermite.hermite_function(2, x),
                       (2.0 * x ** 2 - 1.0) / np.sqrt(2.0) * h0, atol=1e-13)


@pytest.mark.parametrize("j", range(11))
def test_gauss_convolution_closed_form(j):
    # oracle: adaptive quadrature of int phi(x-u) h_j(u) du, 1e-8
    for x in (-3.0, -1.0, 0.0, 0.7, 3.0):
        ref, _ = quad(lambda u: norm.pdf(x - u)
                      * hermite.hermite_function(j, np.float64(u)),
                      -30.0, 30.0, limit=300)
        val = hermite.gauss_conv_hermite(j, np.float64(x))
        assert abs(val - ref) < 1e-8


def test_gauss_convolution_h0_at_zero():
    # closed form 1/sqrt(2 sqrt(pi)); quadrature oracle agrees
    val = hermite.gauss_conv_hermite(0, np.float64(0.0))
    assert abs(val - 1.0 / np.sqrt(2.0 * np.sqrt(np.pi))) < 1e-14


def test_normalization_coefficients_are_masses():
    # n_j = integral of h_j over the line (odd j vanish)
    n = hermite.normalization_coefficients(8)
    for j in range(9):
        ref, _ = quad(lambda u: hermite.hermite_function(j, np.float64(u)),
                      -30.0, 30.0, limit=300)
        assert abs(n[j] - ref) < 1e-10


def test_sobolev_rows_match_fourier_integral():
    # ||A alpha||^2 must equal int |g*(t)|^2 (t^2+1) dt / pi for
    # g = sum alpha_j h_j, whose Fourier transform (e^{itx} convention)
    # is g*(t) = sqrt(2 pi) sum alpha_j i^j h_j(t)
    rng = np.random.default_rng(5)
    p = 7
    rows = hermite.sobolev_ellipsoid_rows(p)
    nodes, w = panel_nodes(-12.0, 12.0, 0.5, 32)
    h = hermite.hermite_functions(p, nodes)
    ipow = 1j ** np.arange(p + 1)
    for _ in range(5):
        alpha = rng.normal(size=p + 1)
        gstar = (alpha * ipow) @ h.astype(complex)
        ref = 2.0 * np.sum(w * np.abs(gstar) ** 2 * (nodes ** 2 + 1.0))
        val = np.sum((rows @ alpha) ** 2)
        assert abs(val - ref) < 1e-8 * max(1.0, ref)


def test_large_order_stays_finite():
    h = hermite.hermite_functions(60, np.linspace(-10.0, 10.0, 41))
    assert np.isfinite(h).all()
    c = hermite.gauss_conv_hermite(60, np.linspace(-10.0, 10.0, 41))
    assert np.isfinite(c).all()
