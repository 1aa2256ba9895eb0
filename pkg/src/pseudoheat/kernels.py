"""Fundamental solutions ``u_m(x, t)`` of ``du/dt = kappa_m d^m u/dx^m``.

Every evaluator works in the similarity variable ``z = x / t^(1/m)`` and
rescales by ``t^(-1/m)`` at the end.  Odd orders follow the ``(-1)^n`` branch
(see :mod:`pseudoheat.core`); pass ``mirror=True`` for the reflected equation.
"""

from __future__ import annotations

import enum
import math
import warnings
from typing import Callable, NamedTuple

import numpy as np
from scipy import integrate
from scipy import special as sc

from . import special
from .core import (
    DEFAULT_CONTROLS,
    EquationOrder,
    EvalRequest,
    EvalResult,
    InvalidOrderError,
    Method,
    MethodRangeError,
    NumericControls,
    NumericError,
    OracleFailure,
    PointResult,
    PseudoHeatError,
    RangeError,
    check_time,
    derive_constants,
)

# |x| / t^(1/m) beyond which the ascending series are not trusted
SERIES_Z_LIMIT = 8.0
# mollifier widths for the oscillatory Fourier oracle, in the similarity variable
ORACLE_EPSILONS = (1e-2, 5e-3, 2.5e-3)


class KernelMethod(str, enum.Enum):
    ODD_SERIES = "odd_series"
    ODD_DAMPED = "odd_damped"
    EVEN_SERIES = "even_series"
    EVEN_DAMPED = "even_damped"
    FOURIER_ORACLE = "fourier_oracle"
    AIRY_CLOSED = "airy_closed"
    BIQUADRATIC_SERIES = "biquadratic_series"


class Estimate(NamedTuple):
    value: float
    abs_err: float
    method: KernelMethod
    nodes: int


def _order(m_or_order) -> EquationOrder:
    return m_or_order if isinstance(m_or_order, EquationOrder) else EquationOrder(int(m_or_order))


def _check_n(n: int) -> None:
    if int(n) != n or n < 1:
        raise InvalidOrderError(f"n must be an integer >= 1, got {n!r}")


# ---------------------------------------------------------------------------
# origin values and mass


def u_origin(order, t: float) -> float:
    """Closed-form value ``u_m(0, t)``."""
    order = _order(order)
    check_time(t)
    m, n = order.m, order.n
    if order.is_odd:
        return math.sin(n * math.pi / m) * math.gamma(1 + 1 / m) / (math.pi * t ** (1 / m))
    return math.gamma(1 + 1 / m) / (math.pi * t ** (1 / m))


def positive_mass_exact(order) -> float:
    """``int_0^inf u_m(x, t) dx``; independent of ``t``."""
    order = _order(order)
    if not order.is_odd:
        return 0.5
    mass = 0.5 * (1 - 1 / order.m)
    return 1 - mass if order.mirror else mass


# ---------------------------------------------------------------------------
# odd orders


def _odd_series(n: int, x: float, t: float, controls: NumericControls) -> Estimate:
    _check_n(n)
    check_time(t)
    m = 2 * n + 1
    tau = t ** (1 / m)
    z = x / tau
    if abs(z) > SERIES_Z_LIMIT:
        raise MethodRangeError(f"|x|/t^(1/{m}) = {abs(z):.3g} exceeds {SERIES_Z_LIMIT}; use quadrature")
    # -(1/(pi x)) sum_{k>=1} (-z)^k c_k  ==  (1/(pi tau)) sum_{k>=1} (-1)^(k+1) z^(k-1) c_k
    k = np.arange(1, controls.series_max_terms + 1)
    if z == 0:
        terms = np.zeros(len(k))
        terms[0] = math.sin(n * math.pi / m) * math.gamma(1 + 1 / m)
    else:
        logmag = (k - 1) * math.log(abs(z)) + sc.gammaln(1 + k / m) - sc.gammaln(k + 1)
        sign = (-1.0) ** (k + 1) * np.sign(z) ** (k - 1)
        terms = sign * np.exp(logmag) * _sin_exact(n * k, m)
    s = special.sum_terms(terms, controls.series_rel_tol, abs_tol=1e-3 * controls.quad_abs_tol * tau,
                          what=f"u_{m} series", logmag=None if z == 0 else logmag)
    err = s.abs_err / (math.pi * tau)
    if err > 1e3 * controls.quad_abs_tol:
        raise MethodRangeError(f"u_{m} series loses accuracy at z={z:.3g} (error ~{err:.1e})", bound=err)
    return Estimate(s.value / (math.pi * tau), err, KernelMethod.ODD_SERIES, s.terms_used)


def _sin_exact(j: np.ndarray, m: int) -> np.ndarray:
    """``sin(pi j / m)`` with exact zeros at multiples of ``m``."""
    r = np.mod(j, 2 * m)
    out = np.sin(np.pi * r / m)
    out[r % m == 0] = 0.0
    return out


def u_odd_series(n: int, x: float, t: float, controls: NumericControls = DEFAULT_CONTROLS) -> float:
    """Odd-order solution ``u_{2n+1}(x,t)`` from its entire power series in ``x``.

    Raises :class:`MethodRangeError` when ``|x|/t^(1/(2n+1)) > 8`` or when
    cancellation makes the sum unreliable.
    """
    return _odd_series(n, x, t, controls).value


def _odd_damped(n: int, x: float, t: float, controls: NumericControls) -> Estimate:
    _check_n(n)
    check_time(t)
    m = 2 * n + 1
    if x == 0:
        return Estimate(u_origin(m, t), 0.0, KernelMethod.ODD_DAMPED, 0)
    a, b, _ = derive_constants(m)
    tau = t ** (1 / m)
    z = x / tau
    upper = controls.quad_cutoff_decades ** (1 / m)

    # m s^(2n) e^{-s^m} e^{-b z s} sin(a z s) / z, written with sinc to stay regular at small z
    def f(s):
        return m * a * s ** (2 * n + 1) * math.exp(-s**m - b * z * s) * _sinc(a * z * s)

    # for z < 0 the integrand grows like e^{b|z|s} before decaying; ask only for what
    # double precision can deliver relative to its peak
    grid = np.linspace(1e-3, upper, 400)
    peak = float(np.max(m * a * grid ** (2 * n + 1) * np.exp(-grid**m - b * z * grid)))
    epsabs = max(0.1 * controls.quad_abs_tol * tau, 1e-14 * peak)
    limit = 200 + int(4 * a * abs(z) * upper)
    val, err, info = _quad(f, 0, upper, epsabs=epsabs, epsrel=1e-13, limit=limit)
    tail = math.exp(-controls.quad_cutoff_decades + b * max(-z, 0.0) * upper) * m * upper ** (2 * n + 1)
    return Estimate(val / (math.pi * tau), (err + tail) / (math.pi * tau),
                    KernelMethod.ODD_DAMPED, info["neval"])


def _quad(f, a, b, **kw):
    """``scipy.integrate.quad`` returning ``(value, error, info)``; accuracy warnings are
    folded into the error estimate instead of being printed."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, a, b, full_output=True, **kw)
    return out[0], out[1], out[2]


def _sinc(v: float) -> float:
    return math.sin(v) / v if v != 0 else 1.0


def u_odd_damped(n: int, x: float, t: float, controls: NumericControls = DEFAULT_CONTROLS) -> float:
    """Odd-order solution as a damped oscillation averaged over a generalized gamma law.

    ``u = (2n+1) t / (pi x) int_0^inf e^{-b x w} sin(a x w) w^{2n} e^{-t w^{2n+1}} dw``
    with ``a = cos(pi/(2(2n+1)))``, ``b = sin(pi/(2(2n+1)))``.
    """
    return _odd_damped(n, x, t, controls).value


def u_odd_expectation(n: int, x: float, t: float, samples: np.ndarray) -> float:
    """Monte Carlo version of the damped form given draws ``w`` of the gamma law ``g^{2n+1}(., 1/t)``."""
    m = 2 * n + 1
    a, b, _ = derive_constants(m)
    w = np.asarray(samples, dtype=float)
    if x == 0:
        return float(a * np.mean(w) / math.pi)
    return float(np.mean(np.exp(-b * x * w) * np.sin(a * x * w)) / (math.pi * x))


# ---------------------------------------------------------------------------
# third order


def u3_airy(x: float, t: float, mirror: bool = False) -> float:
    """``u_3(x, t) = (3t)^(-1/3) Ai(x (3t)^(-1/3))``."""
    check_time(t)
    s = (3 * t) ** (1 / 3)
    return special.airy_ai((-x if mirror else x) / s) / s


def f_m_eval(m_exp: int, x: float, t: float) -> float:
    """``(x/t)^m_exp * u_3(x, t)``."""
    if int(m_exp) != m_exp or m_exp < 0:
        raise PseudoHeatError("m_exp must be a nonnegative integer")
    return (x / t) ** m_exp * u3_airy(x, t)


# ---------------------------------------------------------------------------
# even orders


def _even_damped(n: int, x: float, t: float, controls: NumericControls) -> Estimate:
    _check_n(n)
    check_time(t)
    m = 2 * n
    if x == 0:
        return Estimate(u_origin(m, t), 0.0, KernelMethod.EVEN_DAMPED, 0)
    tau = t ** (1 / m)
    z = abs(x) / tau
    upper = controls.quad_cutoff_decades ** (1 / m)
    tol = 0.1 * controls.quad_abs_tol * tau
    if z < 1:
        def f(s):
            return m * s**m * math.exp(-s**m) * _sinc(z * s)

        val, err, info = _quad(f, 0, upper, epsabs=tol, epsrel=1e-13, limit=200)
    else:
        def g(s):
            return m * s ** (m - 1) * math.exp(-s**m)

        val, err, info = _quad(g, 0, upper, weight="sin", wvar=z, epsabs=tol * z,
                               epsrel=1e-13, limit=400)
        val, err = val / z, err / z
    tail = math.exp(-controls.quad_cutoff_decades) * m * upper ** m / max(z, 1.0)
    return Estimate(val / (math.pi * tau), (err + tail) / (math.pi * tau),
                    KernelMethod.EVEN_DAMPED, info["neval"])


def u_even_damped(n: int, x: float, t: float, controls: NumericControls = DEFAULT_CONTROLS) -> float:
    """Even-order solution ``u_{2n} = E[sin(x G)] / (pi x)`` evaluated by quadrature.

    ``u = 2n t / (pi x) int_0^inf b^(2n-1) e^{-t b^(2n)} sin(b x) db``.
    """
    return _even_damped(n, x, t, controls).value


def _even_series(n: int, x: float, t: float, controls: NumericControls) -> Estimate:
    _check_n(n)
    check_time(t)
    m = 2 * n
    tau = t ** (1 / m)
    z = abs(x) / tau
    if z > SERIES_Z_LIMIT:
        raise MethodRangeError(f"|x|/t^(1/{m}) = {z:.3g} exceeds {SERIES_Z_LIMIT}; use quadrature")
    # (1/(pi tau)) sum_k (-1)^k z^(2k)/(2k)! Gamma((2k+1)/m) / m
    k = np.arange(controls.series_max_terms)
    if z == 0:
        terms = np.zeros(len(k))
        terms[0] = math.gamma(1 / m) / m
    else:
        logmag = 2 * k * math.log(z) - sc.gammaln(2 * k + 1) + sc.gammaln((2 * k + 1) / m) - math.log(m)
        terms = (-1.0) ** k * np.exp(logmag)
    s = special.sum_terms(terms, controls.series_rel_tol, abs_tol=1e-3 * controls.quad_abs_tol * tau,
                          what=f"u_{m} series", logmag=None if z == 0 else logmag)
    err = s.abs_err / (math.pi * tau)
    if err > 1e3 * controls.quad_abs_tol:
        raise MethodRangeError(f"u_{m} series loses accuracy at z={z:.3g} (error ~{err:.1e})", bound=err)
    return Estimate(s.value / (math.pi * tau), err, KernelMethod.EVEN_SERIES, s.terms_used)


def u_even_series(n: int, x: float, t: float, controls: NumericControls = DEFAULT_CONTROLS) -> float:
    """Even-order solution from the cosine-moment power series in ``x^2``."""
    return _even_series(n, x, t, controls).value


def _u4_series(x: float, t: float, controls: NumericControls, raw_time: bool) -> Estimate:
    check_time(t)
    # the four-term series solves du/dt = -(1/4) d^4u/dx^4; shift time to match e^{-t b^4}
    tp = t if raw_time else 4 * t
    z = abs(x) / tp**0.25
    if z > SERIES_Z_LIMIT * math.sqrt(2):
        raise MethodRangeError(f"|x|/t^(1/4) = {z:.3g} too large for the biquadratic series")
    r = math.sqrt(2) * z
    k = np.arange(controls.series_max_terms)
    if r == 0:
        terms = np.zeros(len(k))
        terms[0] = math.gamma(0.25)
    else:
        logmag = 2 * k * math.log(r) - sc.gammaln(2 * k + 1) + sc.gammaln(k / 2 + 0.25)
        terms = (-1.0) ** k * np.exp(logmag)
    pre = 1 / (2 * math.pi * math.sqrt(2 * math.sqrt(tp)))
    s = special.sum_terms(terms, controls.series_rel_tol, abs_tol=1e-3 * controls.quad_abs_tol / pre,
                          what="biquadratic series", logmag=None if r == 0 else logmag)
    err = pre * s.abs_err
    if err > 1e3 * controls.quad_abs_tol:
        raise MethodRangeError(f"biquadratic series loses accuracy (error ~{err:.1e})", bound=err)
    return Estimate(pre * s.value, err, KernelMethod.BIQUADRATIC_SERIES, s.terms_used)


def u4_series(x: float, t: float, controls: NumericControls = DEFAULT_CONTROLS,
              raw_time: bool = False) -> float:
    """Fourth-order solution from the biquadratic series
    ``(2 pi sqrt(2 t^(1/2)))^-1 sum_k (-1)^k/(2k)! (sqrt2 |x| / t^(1/4))^(2k) Gamma(k/2 + 1/4)``.

    That series is the kernel of ``(1/2pi) int e^{-t y^4/4} cos(xy) dy``.  By default
    it is evaluated at time ``4t`` so that it matches :func:`u_even_damped` with
    ``n = 2``; ``raw_time=True`` evaluates the series at ``t`` itself.
    """
    return _u4_series(x, t, controls, raw_time).value


# ---------------------------------------------------------------------------
# Fourier-inversion oracle


def wynn_epsilon(partial_sums) -> tuple[float, float]:
    """Accelerate a sequence of partial sums; returns ``(limit, error estimate)``."""
    s = [float(v) for v in partial_sums]
    n = len(s)
    if n < 3:
        return s[-1], abs(s[-1] - s[-2]) if n > 1 else math.inf
    prev = [0.0] * (n + 1)
    cur = list(s)
    estimates = []
    for k in range(1, n):
        nxt = []
        for i in range(len(cur) - 1):
            d = cur[i + 1] - cur[i]
            if d == 0:
                nxt.append(math.inf)
            else:
                nxt.append(prev[i + 1] + 1 / d)
        prev, cur = cur, nxt
        if k % 2 == 0 and cur:
            estimates.append(cur[-1])
        if len(cur) < 2:
            break
    estimates = [e for e in estimates if math.isfinite(e)]
    if len(estimates) < 2:
        return s[-1], abs(s[-1] - s[-2])
    return estimates[-1], abs(estimates[-1] - estimates[-2])


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


def _odd_oscillatory(m: int, z: float, eps: float, segments: int = 48) -> tuple[float, float]:
    """``int_0^inf cos(z s + s^m) e^{-eps s} ds`` by zero-to-zero quadrature plus Wynn extrapolation."""
    def phase(s):
        return z * s + s**m

    s_stat = (-z / m) ** (1 / (m - 1)) if z < 0 else 0.0
    start = max(2 * s_stat, 1.0)
    k0 = math.ceil(phase(start) / math.pi - 0.5)
    c = (np.arange(k0, k0 + segments + 1) + 0.5) * math.pi
    # Newton from the right converges monotonically on the convex increasing branch
    s = np.maximum.reduce([(2 * c) ** (1 / m), np.full_like(c, (2 * abs(z)) ** (1 / (m - 1))),
                           np.full_like(c, start)])
    for _ in range(100):
        step = (phase(s) - c) / (z + m * s ** (m - 1))
        s = s - step
        if np.max(np.abs(step)) < 1e-15 * np.max(s):
            break
    zeros = s

    def f(v):
        return math.cos(phase(v)) * math.exp(-eps * v)

    head, head_err = integrate.quad(f, 0, zeros[0], epsabs=1e-13, epsrel=1e-13, limit=500)
    lo, hi = zeros[:-1], zeros[1:]
    mid, half = (lo + hi) / 2, (hi - lo) / 2
    nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = np.cos(phase(nodes)) * np.exp(-eps * nodes)
    seg = half * (vals @ _GL_WEIGHTS)
    partial = head + np.cumsum(seg)
    limit, err = wynn_epsilon(partial[-24:])
    return limit, err + head_err


def _fourier_oracle(order: EquationOrder, x: float, t: float, controls: NumericControls) -> Estimate:
    check_time(t)
    m = order.m
    tau = t ** (1 / m)
    z = x / tau
    if not order.is_odd:
        upper = controls.quad_cutoff_decades ** (1 / m)

        def g(s):
            return math.exp(-s**m)

        val, err = integrate.quad(g, 0, upper, weight="cos", wvar=abs(z), epsabs=1e-13, limit=400)
        return Estimate(val / (math.pi * tau), err / (math.pi * tau), KernelMethod.FOURIER_ORACLE, 0)
    if order.mirror:
        z = -z
    vals, errs = zip(*(_odd_oscillatory(m, z, e) for e in ORACLE_EPSILONS))
    i1, i2, i3 = vals
    r12, r23 = 2 * i2 - i1, 2 * i3 - i2
    limit = (4 * r23 - r12) / 3
    err = abs(limit - r23) + max(errs)
    if not math.isfinite(limit) or err > 1e-4:
        raise OracleFailure(f"Fourier extrapolation did not settle at z={z:.3g} (err ~{err:.1e})")
    return Estimate(limit / (math.pi * tau), err / (math.pi * tau), KernelMethod.FOURIER_ORACLE,
                    3 * 48 * 32)


def u_fourier_oracle(order, x: float, t: float, controls: NumericControls = DEFAULT_CONTROLS) -> float:
    """Direct Fourier inversion, used as an independent check on the other routes.

    Even orders integrate ``(1/pi) int_0^inf e^{-t b^m} cos(bx) db`` directly.  Odd
    orders integrate ``(1/pi) int_0^inf cos(bx + t b^m) db`` under a mollifier
    ``e^{-eps b}`` for three widths and extrapolate to ``eps = 0``.  Slow.
    """
    return _fourier_oracle(_order(order), x, t, controls).value


# ---------------------------------------------------------------------------
# dispatch


def evaluate_point(order, x: float, t: float, method: Method | str = Method.AUTO,
                   controls: NumericControls = DEFAULT_CONTROLS) -> Estimate:
    """Evaluate ``u_m(x, t)`` with the requested route, returning value and error estimate."""
    order = _order(order)
    method = Method(method)
    check_time(t)
    m, n = order.m, order.n
    xs = -x if order.mirror else x
    if method is Method.AUTO:
        if m == 3:
            method = Method.AIRY
        else:
            try:
                return evaluate_point(order, x, t, Method.SERIES, controls)
            except MethodRangeError:
                return evaluate_point(order, x, t, Method.DAMPED, controls)
    if method is Method.AIRY:
        if m != 3:
            raise InvalidOrderError("the Airy closed form only applies to m = 3")
        s = (3 * t) ** (1 / 3)
        w = xs / s
        err = special.airy_ai_series(w).abs_err / s if abs(w) <= special.AIRY_SERIES_LIMIT else 1e-15
        return Estimate(u3_airy(xs, t), err, KernelMethod.AIRY_CLOSED, 1)
    if method is Method.SERIES:
        if order.is_odd:
            return _odd_series(n, xs, t, controls)
        return _even_series(n, x, t, controls)
    if method is Method.DAMPED:
        if order.is_odd:
            return _odd_damped(n, xs, t, controls)
        return _even_damped(n, x, t, controls)
    return _fourier_oracle(order, x, t, controls)


def evaluate(request: EvalRequest) -> EvalResult:
    """Evaluate a batch of points; range failures become per-point status fields."""
    rows = []
    for x, t in request.points:
        try:
            est = evaluate_point(request.order, x, t, request.method, request.controls)
            rows.append(PointResult(x, t, est.value, est.abs_err, est.method.value, est.nodes))
        except (RangeError, OracleFailure, NumericError) as exc:
            rows.append(PointResult(x, t, math.nan, math.nan, request.method.value, 0,
                                    status=f"error: {exc}"))
    return EvalResult(request, tuple(rows))


def u(order, x: float, t: float, controls: NumericControls = DEFAULT_CONTROLS) -> float:
    return evaluate_point(order, x, t, Method.AUTO, controls).value


# ---------------------------------------------------------------------------
# integrals of the kernels


def _block_quad(f, lo: float, hi: float) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.quad(f, lo, hi, epsabs=1e-12, epsrel=1e-12, limit=200)


def mass_positive_halfline(n: int, t: float = 1.0, controls: NumericControls = DEFAULT_CONTROLS,
                           even: bool = False, tol: float = 1e-9) -> tuple[float, float]:
    """Numerically integrate ``u_{2n+1}`` (or ``u_{2n}`` if ``even``) over ``(0, inf)``.

    The half-line is covered in unit steps of the similarity variable until both the
    last block and the kernel value at its end drop below ``tol``.  Returns
    ``(mass, error estimate)``; raises :class:`RangeError` carrying the partial value
    if the tail never becomes negligible.  The exact value is ``(1 - 1/(2n+1)) / 2``
    for odd orders and ``1/2`` for even ones.
    """
    _check_n(n)
    check_time(t)
    order = EquationOrder(2 * n if even else 2 * n + 1)
    return _decaying_half_mass(order, t, controls, tol)


def _decaying_half_mass(order: EquationOrder, t: float, controls: NumericControls,
                        tol: float) -> tuple[float, float]:
    tau = t ** (1 / order.m)

    def f(x):
        return evaluate_point(order, x, t, Method.AUTO, controls).value

    total, err, quiet = 0.0, 0.0, 0
    for j in range(200):
        part, e = _block_quad(f, j * tau, (j + 1) * tau)
        total += part
        err += e
        quiet = quiet + 1 if abs(part) < tol and abs(f((j + 1) * tau)) < tol else 0
        if quiet >= 2:
            return total, err + abs(part)
    raise RangeError(f"mass integral tail not below {tol} (partial value {total:.10g})", bound=abs(part))


def _oscillating_half_mass(order: EquationOrder, t: float, controls: NumericControls,
                           blocks: int = 60, z_max: float = 40.0) -> tuple[float, float]:
    """``int_0^inf u(x) dx`` on the side where ``u`` decays only algebraically while oscillating.

    Blocks follow the asymptotic half-period ``pi / s0(z)``, ``s0 = (z/m)^(1/(m-1))``,
    and the partial sums are extrapolated with the epsilon algorithm.
    """
    m = order.m
    tau = t ** (1 / m)

    def f(x):
        return evaluate_point(order, x, t, Method.AUTO, controls).value

    head_end = 3.0
    head, err = _block_quad(f, 0.0, head_end * tau)
    edges = [head_end]
    # the damped route loses digits as the oscillating side is traversed; stay inside z_max
    while len(edges) <= blocks and edges[-1] < z_max:
        z = edges[-1]
        edges.append(z + math.pi / (z / m) ** (1 / (m - 1)))
    edges = np.asarray(edges) * tau
    nodes, weights = np.polynomial.legendre.leggauss(20)
    parts = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        xs = (lo + hi) / 2 + (hi - lo) / 2 * nodes
        parts.append((hi - lo) / 2 * float(np.dot(weights, [f(v) for v in xs])))
    partial = head + np.cumsum(parts)
    limit, ext_err = wynn_epsilon(partial)
    return limit, err + ext_err


def total_mass(order, t: float = 1.0, controls: NumericControls = DEFAULT_CONTROLS) -> tuple[float, float]:
    """``int_R u_m dx`` assembled from the two half-lines; should equal 1."""
    order = _order(order)
    if not order.is_odd:
        pos, err = _decaying_half_mass(order, t, controls, 1e-10)
        return 2 * pos, 2 * err
    pos, e1 = _decaying_half_mass(order, t, controls, 1e-10)
    # the reflected branch carries the oscillating half of the original kernel
    neg, e2 = _oscillating_half_mass(EquationOrder(order.m, mirror=not order.mirror), t, controls)
    if order.mirror:
        pos, neg = neg, pos
    return pos + neg, e1 + e2


# ---------------------------------------------------------------------------
# PDE residual


def central_stencil(order: int, accuracy: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """Offsets and weights of the central difference for ``d^order/dx^order`` (unit step)."""
    half = (order + 1) // 2 + accuracy // 2 - 1
    offsets = np.arange(-half, half + 1)
    p = len(offsets)
    vander = np.vander(offsets, p, increasing=True).T.astype(float)
    rhs = np.zeros(p)
    rhs[order] = math.factorial(order)
    weights = np.linalg.solve(vander, rhs)
    return offsets, weights


def pde_residual(order, field: Callable[[float, float], float], x: float, t: float,
                 h: float, accuracy: int = 2) -> float:
    """``|d field/dt - kappa_m d^m field/dx^m|`` from central finite differences with step ``h``.

    With ``accuracy=2`` the ``x``-stencils are 3-point for the second, 5-point for the
    third and 7-point for the fifth derivative; the time derivative uses the same
    accuracy order.  The truncation error scales like ``h^accuracy``.
    """
    order = _order(order)
    if not (h > 0 and t - (accuracy // 2) * h > 0):
        raise NumericError("step h must be positive and keep the time stencil inside t > 0")
    off_t, w_t = central_stencil(1, accuracy)
    off_x, w_x = central_stencil(order.m, accuracy)
    dt = sum(w * field(x, t + o * h) for o, w in zip(off_t, w_t)) / h
    dx = sum(w * field(x + o * h, t) for o, w in zip(off_x, w_x)) / h**order.m
    res = abs(dt - order.kappa * dx)
    if not math.isfinite(res):
        raise NumericError("finite-difference residual is not finite")
    return res
