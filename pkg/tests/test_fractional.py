import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sc

from pseudoheat import fractional, special
from pseudoheat.core import NumericError, PseudoHeatError, RangeError


@pytest.mark.parametrize("z", [0.0, 0.4, 1.5, 4.0, 9.0])
def test_m_wright_half_is_gaussian(z):
    assert fractional.m_wright(0.5, z)[0] == pytest.approx(math.exp(-z * z / 4) / math.sqrt(math.pi), abs=1e-13)


@pytest.mark.parametrize("z", [0.0, 0.5, 2.0, 6.0, 12.0])
def test_m_wright_third_is_airy(z):
    ref = 3 ** (2 / 3) * sc.airy(z / 3 ** (1 / 3))[0]
    assert fractional.m_wright(1 / 3, z)[0] == pytest.approx(ref, abs=1e-13)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=0.1, max_value=0.9), st.floats(min_value=0.05, max_value=3.0))
def test_m_wright_series_and_integral_agree(alpha, z):
    integral = fractional.m_wright_integral(alpha, z)
    try:
        s = fractional.m_wright_series(alpha, z)
    except RangeError:
        # slow convergence close to alpha = 1; the dispatcher uses the integral there
        assert fractional.m_wright(alpha, z)[0] == integral
        return
    assert abs(s.value - integral) <= s.abs_err + 1e-11


def test_m_wright_integral_stays_finite_near_one():
    for alpha in (0.99, 0.999):
        for z in (0.5, 1.0, 3.0):
            assert math.isfinite(fractional.m_wright_integral(alpha, z))


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.8])
def test_q_density_methods_agree(alpha):
    for x in (0.1, 0.8, 2.0):
        s = fractional.q_alpha_density(alpha, x, 1.2, method="series")
        assert s == pytest.approx(fractional.q_alpha_density(alpha, x, 1.2, method="integral"), abs=1e-11)
    assert fractional.q_alpha_density(alpha, -1.0, 1.0) == 0.0


def test_q_density_rejects_bad_input():
    with pytest.raises(PseudoHeatError):
        fractional.q_alpha_density(1.0, 0.5, 1.0)
    with pytest.raises(PseudoHeatError):
        fractional.q_alpha_density(0.5, 0.5, 1.0, method="spline")
    with pytest.raises(RangeError):
        fractional.q_alpha_density(0.9, 40.0, 1.0, method="series")


@pytest.mark.parametrize("alpha, t", [(0.3, 1.0), (0.6, 0.4), (0.9, 2.5)])
def test_q_normalization(alpha, t):
    mass, err = fractional.q_alpha_mass(alpha, t)
    assert mass == pytest.approx(1.0, abs=1e-10)


def test_fold_of_wright_solution():
    # q_alpha is twice the Wright-series solution with nu = 2 alpha on the half-line
    for alpha in (1 / 3, 0.5, 0.7):
        for x in (0.2, 1.0):
            fold = fractional.folded_wright_density(2 * alpha, x, 1.5)
            assert fold == pytest.approx(fractional.q_alpha_density(alpha, x, 1.5), abs=1e-12)
    assert fractional.q_alpha_density(0.5, 1.0, 1.0) == pytest.approx(math.exp(-0.25) / math.sqrt(math.pi), abs=1e-12)


def test_wright_solution_for_heat_equation():
    # nu = 1 gives the heat kernel with diffusivity lambda^2
    lam = 0.7
    for x, t in ((0.3, 1.0), (-1.2, 2.0)):
        gauss = math.exp(-x * x / (4 * lam * lam * t)) / math.sqrt(4 * math.pi * lam * lam * t)
        assert fractional.wright_fractional_density(1.0, lam, x, t) == pytest.approx(gauss, abs=1e-12)
    assert fractional.wright_fractional_density(2.0, 1.0, 0.3, 1.0) == 0.0
    with pytest.raises(PseudoHeatError):
        fractional.wright_fractional_density(2.5, 1.0, 0.0, 1.0)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_laplace_in_x(alpha):
    for lam, t in ((0.5, 1.0), (3.0, 0.7)):
        numeric, _ = fractional.laplace_x_q_numeric(alpha, lam, t)
        assert numeric == pytest.approx(fractional.laplace_x_q(alpha, lam, t), abs=1e-10)
        assert fractional.laplace_x_q_reflected(alpha, lam, t) == pytest.approx(numeric, abs=1e-10)


def test_laplace_in_x_limits():
    assert fractional.laplace_x_q(1.0, 2.0, 0.5) == pytest.approx(math.exp(-1.0))
    # alpha = 1/2 has the closed form exp(y^2) erfc(y), y = lam sqrt(t)
    assert fractional.laplace_x_q(0.5, 2.0, 1.0) == pytest.approx(sc.erfcx(2.0), rel=1e-10)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_laplace_in_t(alpha):
    for mu, x in ((0.5, 0.5), (2.0, 1.5)):
        numeric, _ = fractional.laplace_t_q_numeric(alpha, mu, x)
        assert numeric == pytest.approx(fractional.laplace_t_q(alpha, mu, x), abs=1e-10)


def test_double_laplace_equation():
    for alpha in (0.3, 0.7, 1.0):
        for lam, mu in ((0.5, 1.0), (2.0, 0.3)):
            assert fractional.double_laplace_equation_residual(alpha, lam, mu) < 1e-14
    assert fractional.double_laplace_q(1.0, 2.0, 3.0) == pytest.approx(1 / 5)


def test_double_laplace_agrees_with_single_transforms():
    # integrating the x-transform in t reproduces the double transform
    from scipy import integrate

    alpha, lam, mu = 0.6, 0.8, 1.3
    v = integrate.quad(lambda t: math.exp(-mu * t) * fractional.laplace_x_q(alpha, lam, t), 0, np.inf)[0]
    assert v == pytest.approx(fractional.double_laplace_q(alpha, lam, mu), abs=1e-9)


def test_l1_scheme_on_polynomial():
    # D^alpha t^2 = 2 t^(2-alpha) / Gamma(3-alpha)
    alpha, t = 0.4, 1.0
    exact = 2 * t ** (2 - alpha) / math.gamma(3 - alpha)
    errs = []
    for n in (32, 64, 128):
        h = t / n
        vals = (h * np.arange(n + 1)) ** 2
        errs.append(abs(fractional.caputo_l1(vals, h, alpha) - exact))
    rates = [math.log2(a / b) for a, b in zip(errs[:-1], errs[1:])]
    assert all(r > 1.5 for r in rates)


def test_l1_scheme_is_exact_on_linear_functions():
    alpha = 0.3
    vals = 2.0 * np.linspace(0, 1, 11)
    assert fractional.caputo_l1(vals, 0.1, alpha) == pytest.approx(2 / math.gamma(2 - alpha), rel=1e-13)
    with pytest.raises(NumericError):
        fractional.caputo_l1(np.array([1.0]), 0.1, alpha)


def test_caputo_residual_converges():
    r = [fractional.caputo_residual(0.8, 1.0, 1.0, h) for h in (1 / 32, 1 / 64, 1 / 128)]
    assert r[0] > r[1] > r[2]
    assert math.log2(r[1] / r[2]) > 1.0
    assert fractional.caputo_residual(0.5, 1.0, 1.0, 1 / 512) < 5e-3


def test_caputo_residual_guards():
    with pytest.raises(NumericError):
        fractional.caputo_residual(0.5, 1.0, 1.0, 2.0)
    with pytest.raises(NumericError):
        fractional.caputo_residual(0.5, 1e-4, 1.0, 0.01)


def test_transport_limit():
    r = [fractional.transport_residual(a) for a in (0.9, 0.99, 0.999)]
    assert r[0] > r[1] > r[2]
    assert r[2] < 0.02


def test_mittag_leffler_link():
    # the x-transform is the Mittag-Leffler function itself
    assert fractional.laplace_x_q(0.4, 1.5, 2.0) == special.mittag_leffler(0.4, 1.0, -1.5 * 2.0**0.4)
