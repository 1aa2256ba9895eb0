"""Scalar special functions: gamma, the damped-oscillation kernel, Airy Ai, Mittag-Leffler."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy import special as sc

from .core import DEFAULT_CONTROLS, NumericControls, NumericError, PoleError, RangeError

EPS = np.finfo(float).eps

# Ai(0) = 3^(-2/3) / Gamma(2/3)
AI0 = 0.35502805388781723926
AIRY_SERIES_LIMIT = 6.0


@dataclass(frozen=True)
class SeriesEval:
    value: float
    terms_used: int
    truncation_bound: float
    # estimate of the floating-point error accumulated in the partial sum
    roundoff: float = 0.0

    @property
    def abs_err(self) -> float:
        return self.truncation_bound + self.roundoff

    def scaled(self, factor: float) -> "SeriesEval":
        f = abs(factor)
        return SeriesEval(factor * self.value, self.terms_used, f * self.truncation_bound, f * self.roundoff)


def sum_terms(terms: np.ndarray, rel_tol: float, abs_tol: float = 0.0,
              what: str = "series", logmag: np.ndarray | None = None) -> SeriesEval:
    """Truncate a precomputed term sequence once every remaining term is negligible.

    ``terms`` must contain more terms than are needed; the omitted tail is reported
    as the truncation bound.  When the terms were built as ``exp(logmag)``, pass
    ``logmag`` so the roundoff estimate accounts for the error of the exponential.
    Raises :class:`RangeError` if the last computed terms are still significant.
    """
    terms = np.asarray(terms, dtype=float)
    if not np.all(np.isfinite(terms)):
        raise RangeError(f"{what}: terms overflow")
    mags = np.abs(terms)
    total = math.fsum(terms)
    tol = max(rel_tol * abs(total), abs_tol, np.finfo(float).tiny)
    # tail_max[k] = max |terms[k:]|
    tail_max = np.maximum.accumulate(mags[::-1])[::-1]
    ok = np.nonzero(tail_max <= tol)[0]
    if len(ok) == 0:
        raise RangeError(f"{what}: not converged after {len(terms)} terms",
                         bound=float(mags[-1]))
    k = int(ok[0])
    # an all-zero stretch at the end does not prove convergence
    if k >= len(terms) - 2 and mags[-1] > 0:
        raise RangeError(f"{what}: not converged after {len(terms)} terms",
                         bound=float(mags[-1]))
    # per-term relative error: the exponential of logmag, trigonometric arguments that
    # grow with the index, and the accumulated rounding of the sum
    idx = np.arange(k)
    rel = 8.0 + idx if logmag is None else 8.0 + idx + np.abs(np.asarray(logmag, dtype=float)[:k])
    return SeriesEval(
        value=math.fsum(terms[:k]),
        terms_used=k,
        truncation_bound=float(mags[k:].sum()),
        roundoff=float(EPS * np.sum(mags[:k] * rel)),
    )


def gamma_fn(x: float) -> float:
    if x <= 0 and float(x).is_integer():
        raise PoleError(f"gamma has a pole at {x}")
    try:
        return math.gamma(x)
    except OverflowError as exc:
        raise NumericError(f"gamma({x}) overflows") from exc


def osc_kernel(x: float, phi: float) -> float:
    """``e^{x cos phi} sin(x sin phi)``."""
    return math.exp(x * math.cos(phi)) * math.sin(x * math.sin(phi))


def osc_kernel_series(x: float, phi: float, controls: NumericControls = DEFAULT_CONTROLS) -> SeriesEval:
    """Power series ``sum_k x^k sin(k phi) / k!`` of :func:`osc_kernel`."""
    k = np.arange(controls.series_max_terms)
    with np.errstate(divide="ignore"):
        logmag = k * math.log(abs(x)) - sc.gammaln(k + 1) if x != 0 else np.where(k == 0, 0.0, -np.inf)
    terms = np.sign(x) ** k * np.exp(logmag) * np.sin(k * phi)
    return sum_terms(terms, controls.series_rel_tol, abs_tol=1e-300, what="osc_kernel",
                     logmag=np.where(np.isfinite(logmag), logmag, 0.0))


# sin(2 pi r / 3) for r = 0, 1, 2 without rounding noise in the zero entries
_SIN_THIRDS = np.array([0.0, math.sqrt(3) / 2, -math.sqrt(3) / 2])


def airy_ai_series(w: float, controls: NumericControls = DEFAULT_CONTROLS) -> SeriesEval:
    """Ascending series ``3^{-2/3}/pi sum_k (3^{1/3} w)^k sin(2 pi (k+1)/3) Gamma((k+1)/3) / k!``."""
    z = 3 ** (1 / 3) * w
    k = np.arange(controls.series_max_terms)
    if z == 0:
        terms = np.zeros(len(k))
        terms[0] = _SIN_THIRDS[1] * math.gamma(1 / 3)
    else:
        logmag = k * math.log(abs(z)) + sc.gammaln((k + 1) / 3) - sc.gammaln(k + 1)
        terms = np.sign(z) ** k * np.exp(logmag) * _SIN_THIRDS[(k + 1) % 3]
    pre = 3 ** (-2 / 3) / math.pi
    s = sum_terms(terms, controls.series_rel_tol, abs_tol=controls.quad_abs_tol * 1e-3 / pre,
                  what="airy series", logmag=None if z == 0 else logmag)
    return s.scaled(pre)


def airy_ai(w: float, controls: NumericControls = DEFAULT_CONTROLS) -> float:
    """Airy function Ai on the real line.

    The ascending series is used for ``|w| <= 6``; beyond that the series loses
    too many digits to cancellation and scipy's Amos-based routine takes over.
    """
    if abs(w) <= AIRY_SERIES_LIMIT:
        return airy_ai_series(w, controls).value
    return float(sc.airy(w)[0])


def airy_ai_vec(w) -> np.ndarray:
    """Vectorised Ai used inside quadratures; same split as :func:`airy_ai`."""
    w = np.asarray(w, dtype=float)
    out = sc.airy(w)[0]
    small = np.abs(w) <= AIRY_SERIES_LIMIT
    if np.any(small):
        out = np.array(out, dtype=float, copy=True)
        out[small] = [airy_ai_series(v).value for v in w[small]]
    return out


def mittag_leffler(alpha: float, beta: float, z: float,
                   controls: NumericControls = DEFAULT_CONTROLS) -> float:
    """Two-parameter Mittag-Leffler function ``E_{alpha,beta}(z) = sum z^k / Gamma(alpha k + beta)``.

    Negative ``alpha`` is only accepted in the reflected form ``E_{-a, 1-a}``,
    which is defined through ``E_{-a,1-a}(y) = -E_{a,1}(1/y) / y``.
    """
    if alpha < 0:
        if not math.isclose(beta, 1 + alpha, abs_tol=1e-15):
            raise RangeError("negative alpha is only supported as E_{-a, 1-a}")
        return mittag_leffler_reflected(-alpha, z, controls)
    if not (alpha > 0 and beta > 0):
        raise RangeError("mittag_leffler needs alpha > 0 and beta > 0")
    if alpha == 1 and beta == 1:
        return math.exp(z)
    try:
        s = mittag_leffler_series(alpha, beta, z, controls)
        if s.abs_err <= 1e-10:
            return s.value
        err = RangeError(f"E_{{{alpha},{beta}}}({z}): series error {s.abs_err:.2e}", bound=s.abs_err)
    except RangeError as exc:
        err = exc
    if z < 0 and beta == 1 and 0 < alpha < 1:
        return mittag_leffler_negative(alpha, -z)
    raise err


def mittag_leffler_series(alpha: float, beta: float, z: float,
                          controls: NumericControls = DEFAULT_CONTROLS) -> SeriesEval:
    k = np.arange(max(controls.series_max_terms, int(8 * abs(z) ** (1 / alpha)) + 50))
    if z == 0:
        return SeriesEval(1 / math.gamma(beta), 1, 0.0, EPS / math.gamma(beta))
    logmag = k * math.log(abs(z)) - sc.gammaln(alpha * k + beta)
    with np.errstate(over="ignore"):
        terms = np.sign(z) ** k * np.exp(logmag) * sc.gammasgn(alpha * k + beta)
    return sum_terms(terms, controls.series_rel_tol, abs_tol=1e-16, what="mittag-leffler series",
                     logmag=logmag)


def mittag_leffler_negative(alpha: float, x: float) -> float:
    """``E_{alpha,1}(-x)`` for ``0 < alpha < 1`` and ``x >= 0`` via its spectral integral.

    ``E_a(-x) = int_0^inf exp(-r x^(1/a)) K_a(r) dr`` with the nonnegative density
    ``K_a(r) = sin(a pi) r^(a-1) / (pi (r^(2a) + 2 r^a cos(a pi) + 1))``.
    """
    if not 0 < alpha < 1:
        raise RangeError("spectral form needs 0 < alpha < 1")
    if x < 0:
        raise RangeError("spectral form evaluates E(-x) for x >= 0 only")
    s = x ** (1 / alpha)
    sa, ca = math.sin(alpha * math.pi), math.cos(alpha * math.pi)

    # substitute r = u^(1/alpha) to remove the integrable singularity at 0
    def f(u):
        r = u ** (1 / alpha)
        return math.exp(-r * s) * sa / (math.pi * alpha * (u * u + 2 * u * ca + 1))

    val = 0.0
    for lo, hi in ((0, 1), (1, math.inf)):
        part, _ = integrate.quad(f, lo, hi, epsabs=1e-14, epsrel=1e-12, limit=200)
        val += part
    return val


def mittag_leffler_reflected(alpha: float, y: float,
                             controls: NumericControls = DEFAULT_CONTROLS) -> float:
    """``E_{-alpha, 1-alpha}(y)`` defined by ``-E_{alpha,1}(1/y) / y``."""
    if y == 0:
        raise RangeError("E_{-a,1-a} is undefined at 0")
    return -mittag_leffler(alpha, 1.0, 1 / y, controls) / y
