"""Fractional diffusion and advection: ``q_alpha``, the Wright-series solution and their transforms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy import special as sc

from . import special
from .core import (
    DEFAULT_CONTROLS,
    NumericControls,
    NumericError,
    PseudoHeatError,
    RangeError,
    check_time,
)
from .stable import _zolotarev


@dataclass(frozen=True)
class FracLaw:
    """Law of ``X(t)`` on the half-line with density ``q_alpha(., t)``."""

    alpha: float
    t: float

    def __post_init__(self):
        _check_alpha(self.alpha)
        check_time(self.t)

    def pdf(self, x: float) -> float:
        return q_alpha_density(self.alpha, x, self.t)


def _check_alpha(alpha: float) -> None:
    if not 0 < alpha < 1:
        raise PseudoHeatError(f"alpha must lie in (0, 1), got {alpha}")


def m_wright_series(alpha: float, z: float, controls: NumericControls = DEFAULT_CONTROLS) -> special.SeriesEval:
    """``M_alpha(z) = (1/pi) sum_r (-z)^r Gamma(alpha (r+1)) sin(pi alpha (r+1)) / r!``."""
    k = np.arange(max(controls.series_max_terms, 100))
    if z == 0:
        v = math.gamma(alpha) * math.sin(math.pi * alpha) / math.pi
        return special.SeriesEval(v, 1, 0.0, special.EPS * abs(v))
    logmag = k * math.log(abs(z)) + sc.gammaln(alpha * (k + 1)) - sc.gammaln(k + 1)
    with np.errstate(over="ignore"):
        terms = (-np.sign(z)) ** k * np.exp(logmag) * np.sin(math.pi * alpha * (k + 1))
    s = special.sum_terms(terms, controls.series_rel_tol, abs_tol=1e-17, what="M-Wright series",
                          logmag=logmag)
    return s.scaled(1 / math.pi)


def m_wright_integral(alpha: float, z: float) -> float:
    """``M_alpha(z)`` for ``z > 0`` from the nonnegative Zolotarev integral.

    ``M_alpha(z) = 1 / (pi (1-alpha) z) int_0^pi w e^{-w} dphi`` with ``w = z^(1/(1-alpha)) A(phi)``.
    """
    if z <= 0:
        raise PseudoHeatError("integral form needs z > 0")
    return _zolotarev(alpha, math.log(z) / (1 - alpha)) / (math.pi * (1 - alpha) * z)


def m_wright(alpha: float, z: float, controls: NumericControls = DEFAULT_CONTROLS,
             tol: float = 1e-12) -> tuple[float, float]:
    """``M_alpha(z)`` and an error estimate; the series is used while it certifies ``tol``."""
    try:
        s = m_wright_series(alpha, z, controls)
        if s.abs_err <= tol:
            return s.value, s.abs_err
    except RangeError:
        pass
    if z <= 0:
        raise RangeError(f"M-Wright series failed at z={z}")
    return m_wright_integral(alpha, z), 1e-12


def q_alpha_density(alpha: float, x: float, t: float, controls: NumericControls = DEFAULT_CONTROLS,
                    method: str = "auto") -> float:
    """Folded fractional-diffusion density on ``x >= 0``.

    ``q_alpha(x, t) = (1/(pi t^alpha)) sum_r (-x/t^alpha)^r Gamma(alpha(r+1)) sin(pi alpha (r+1)) / r!``.
    ``method`` is ``"series"``, ``"integral"`` or ``"auto"`` (series while it certifies
    a ``1e-12`` error, the Zolotarev integral beyond).
    """
    _check_alpha(alpha)
    check_time(t)
    if x < 0:
        return 0.0
    ta = t**alpha
    z = x / ta
    if method == "series":
        s = m_wright_series(alpha, z, controls)
        if s.abs_err > 1e-10:
            raise RangeError(f"q_alpha series cancels at z={z:.3g} (error ~{s.abs_err:.1e})",
                             bound=s.abs_err / ta)
        return s.value / ta
    if method == "integral":
        if z == 0:
            return m_wright_series(alpha, 0.0).value / ta
        return m_wright_integral(alpha, z) / ta
    if method != "auto":
        raise PseudoHeatError(f"unknown method {method!r}")
    return m_wright(alpha, z, controls)[0] / ta


def wright_fractional_density(nu: float, lambda_scale: float, x: float, t: float,
                              controls: NumericControls = DEFAULT_CONTROLS) -> float:
    """Fundamental solution of ``d^nu u / dt^nu = lambda^2 d^2 u / dx^2``.

    ``u = (1/(2 pi lambda t^(nu/2))) sum_k (-z)^k Gamma(nu (1+k)/2) sin(pi nu (1+k)/2) / k!``
    with ``z = |x| / (lambda t^(nu/2))``.  For ``nu in (1, 2]`` only the function value is
    provided; it carries no probabilistic meaning here.
    """
    if not 0 < nu <= 2:
        raise PseudoHeatError("nu must lie in (0, 2]")
    if not lambda_scale > 0:
        raise PseudoHeatError("lambda_scale must be positive")
    check_time(t)
    scale = lambda_scale * t ** (nu / 2)
    z = abs(x) / scale
    a = nu / 2
    if a < 1:
        val = m_wright(a, z, controls)[0]
    else:
        # sin(pi (1+k)) vanishes identically: the solution is concentrated at |x| = lambda t
        val = 0.0
    return val / (2 * scale)


def folded_wright_density(nu: float, x: float, t: float) -> float:
    return 2 * wright_fractional_density(nu, 1.0, x, t) if x >= 0 else 0.0


# ---------------------------------------------------------------------------
# transforms


def laplace_x_q(alpha: float, lam: float, t: float, controls: NumericControls = DEFAULT_CONTROLS) -> float:
    """``int_0^inf e^{-lam x} q_alpha(x, t) dx = E_{alpha,1}(-lam t^alpha)``."""
    if lam < 0:
        raise PseudoHeatError("lambda must be nonnegative")
    check_time(t)
    if alpha == 1:
        return math.exp(-lam * t)
    _check_alpha(alpha)
    return special.mittag_leffler(alpha, 1.0, -lam * t**alpha, controls)


def laplace_x_q_reflected(alpha: float, lam: float, t: float) -> float:
    """The same transform through ``E_{-alpha, 1-alpha}`` at ``-1/(lam t^alpha)``."""
    y = -1 / (lam * t**alpha)
    return -y * special.mittag_leffler(-alpha, 1 - alpha, y)


def laplace_x_q_numeric(alpha: float, lam: float, t: float) -> tuple[float, float]:
    """Quadrature of ``e^{-lam x} q_alpha(x, t)`` over the half-line."""
    _check_alpha(alpha)
    ta = t**alpha

    def f(z):
        return math.exp(-lam * ta * z) * m_wright(alpha, z)[0]

    return _half_line_quad(f)


def laplace_t_q(alpha: float, mu: float, x: float) -> float:
    """``int_0^inf e^{-mu t} q_alpha(x, t) dt = mu^(alpha-1) exp(-x mu^alpha)``."""
    if not mu > 0:
        raise PseudoHeatError("mu must be positive")
    if not x > 0:
        raise PseudoHeatError("x must be positive")
    return mu ** (alpha - 1) * math.exp(-x * mu**alpha)


def laplace_t_q_numeric(alpha: float, mu: float, x: float) -> tuple[float, float]:
    _check_alpha(alpha)

    def f(t):
        return math.exp(-mu * t) * q_alpha_density(alpha, x, t) if t > 0 else 0.0

    # q(x, .) is negligible for t << x^(1/alpha); integrate in log-spaced blocks
    t0 = x ** (1 / alpha)
    edges = [0.0] + [t0 * 2.0**k for k in range(-6, 60) if t0 * 2.0**k * mu < 60]
    edges.append(edges[-1] * 2)
    total, err = 0.0, 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        v, e = integrate.quad(f, a, b, epsabs=1e-13, epsrel=1e-11, limit=200)
        total += v
        err += e
    return total, err


def double_laplace_q(alpha: float, lam: float, mu: float) -> float:
    """``int int e^{-mu t - lam x} q_alpha(x, t) dx dt = mu^(alpha-1) / (mu^alpha + lam)``."""
    if lam < 0:
        raise PseudoHeatError("lambda must be nonnegative")
    if not mu > 0:
        raise PseudoHeatError("mu must be positive")
    return mu ** (alpha - 1) / (mu**alpha + lam)


def double_laplace_equation_residual(alpha: float, lam: float, mu: float) -> float:
    """Residual of the transformed equation ``mu^alpha L - mu^(alpha-1) = -lam L``."""
    L = double_laplace_q(alpha, lam, mu)
    return abs(mu**alpha * L - mu ** (alpha - 1) + lam * L)


def _half_line_quad(f, block: float = 1.0, tol: float = 1e-14) -> tuple[float, float]:
    total, err, quiet = 0.0, 0.0, 0
    for j in range(500):
        v, e = integrate.quad(f, j * block, (j + 1) * block, epsabs=1e-15, epsrel=1e-12, limit=200)
        total += v
        err += e
        quiet = quiet + 1 if abs(v) < tol else 0
        if quiet >= 2:
            return total, err
    raise RangeError("half-line integral did not converge", bound=abs(v))


def q_alpha_mass(alpha: float, t: float) -> tuple[float, float]:
    """``int_0^inf q_alpha(x, t) dx`` by quadrature in ``x``."""
    _check_alpha(alpha)
    check_time(t)
    return _half_line_quad(lambda x: q_alpha_density(alpha, x, t), block=t**alpha)


# ---------------------------------------------------------------------------
# Caputo residual


def l1_weights(n_steps: int, alpha: float) -> np.ndarray:
    j = np.arange(n_steps)
    return (j + 1.0) ** (1 - alpha) - j ** (1 - alpha)


def caputo_l1(values: np.ndarray, h: float, alpha: float) -> float:
    """L1 approximation of the Caputo derivative at the last node of a uniform grid.

    ``values[j] = f(j h)``, ``j = 0..N``.
    """
    f = np.asarray(values, dtype=float)
    n = len(f) - 1
    if n < 1:
        raise NumericError("need at least two grid values")
    diffs = np.diff(f)[::-1]  # f_N - f_{N-1}, f_{N-1} - f_{N-2}, ...
    return float(np.dot(l1_weights(n, alpha), diffs) / (h**alpha * math.gamma(2 - alpha)))


def _dq_dx(alpha: float, x: float, t: float, hx: float) -> float:
    # fourth-order central difference
    q = lambda y: q_alpha_density(alpha, y, t)
    return (q(x - 2 * hx) - 8 * q(x - hx) + 8 * q(x + hx) - q(x + 2 * hx)) / (12 * hx)


def caputo_residual(alpha: float, x: float, t: float, h: float, hx: float = 1e-3) -> float:
    """``|D_t^alpha q + dq/dx|`` at ``(x, t)``.

    The Caputo derivative uses the L1 scheme on ``[0, t]`` with step ``h`` (adjusted so
    that ``t / h`` is an integer).  ``dq/dx`` uses a fourth-order central difference with
    its own step ``hx``, so that under refinement of ``h`` the residual measures the time
    discretization alone.
    """
    _check_alpha(alpha)
    check_time(t)
    if not 0 < h < t:
        raise NumericError("need 0 < h < t")
    if not x > 2 * hx > 0:
        raise NumericError("x must exceed 2 hx so the x-stencil stays on the half-line")
    n = max(int(round(t / h)), 1)
    h = t / n
    times = h * np.arange(n + 1)
    vals = np.array([0.0] + [q_alpha_density(alpha, x, s) for s in times[1:]])
    res = abs(caputo_l1(vals, h, alpha) + _dq_dx(alpha, x, t, hx))
    if not math.isfinite(res):
        raise NumericError("Caputo residual is not finite")
    return res


def transport_residual(alpha: float, t: float = 1.0, center: float = 1.0, width: float = 0.25,
                       h: float = 1e-3) -> float:
    """Weak residual of ``dq/dt + dq/dx = 0`` against a Gaussian test function ``phi``.

    Returns ``|d/dt int phi q dx - int phi' q dx|``.  As ``alpha -> 1`` the density
    concentrates at ``x = t`` and the pointwise residual blows up with the peak height,
    while this weak residual tends to zero.
    """
    _check_alpha(alpha)
    check_time(t)
    if not 0 < h < t:
        raise NumericError("need 0 < h < t")

    def phi(x):
        return math.exp(-(((x - center) / width) ** 2))

    def dphi(x):
        return -2 * (x - center) / width**2 * phi(x)

    hi = center + 8 * width

    def moment(g, s):
        peak = [s**alpha] if 0 < s**alpha < hi else None
        return integrate.quad(lambda x: g(x) * q_alpha_density(alpha, x, s), 0, hi, points=peak,
                              epsabs=1e-13, epsrel=1e-11, limit=400)[0]

    d_dt = (moment(phi, t + h) - moment(phi, t - h)) / (2 * h)
    return abs(d_dt - moment(dphi, t))
