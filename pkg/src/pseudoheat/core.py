"""Shared domain types, numeric controls and errors.

Sign conventions used throughout the package:

* odd order ``m = 2n+1``: ``du/dt = (-1)^n d^m u/dx^m``, whose Fourier
  transform (``int e^{i beta x} u dx``) is ``exp(-i t beta^m)``.  The mirror
  equation is obtained through ``x -> -x``.
* even order ``m = 2n``: ``du/dt = (-1)^(n+1) d^m u/dx^m`` with transform
  ``exp(-t beta^m)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np


class PseudoHeatError(ValueError):
    """Base class for all errors raised by this package."""


class InvalidOrderError(PseudoHeatError):
    pass


class InvalidTimeError(PseudoHeatError):
    pass


class PoleError(PseudoHeatError):
    pass


class RangeError(PseudoHeatError):
    """A series or quadrature could not certify its result."""

    def __init__(self, message: str, bound: float = math.inf):
        super().__init__(message)
        self.bound = bound


class MethodRangeError(RangeError):
    """The requested method is outside its reliable range; use another route."""


class OracleFailure(PseudoHeatError):
    pass


class NumericError(PseudoHeatError):
    pass


class Method(str, enum.Enum):
    SERIES = "series"
    DAMPED = "damped"
    FOURIER = "fourier"
    AIRY = "airy"
    AUTO = "auto"


@dataclass(frozen=True)
class NumericControls:
    series_rel_tol: float = 1e-12
    series_max_terms: int = 400
    quad_abs_tol: float = 1e-10
    # integrate the damped forms until t * w^m exceeds this value
    quad_cutoff_decades: float = 40.0
    mc_samples: int = 10**6
    rng_seed: int = 20240917

    def __post_init__(self):
        for name in ("series_rel_tol", "quad_abs_tol", "quad_cutoff_decades"):
            if not getattr(self, name) > 0:
                raise PseudoHeatError(f"{name} must be positive")
        if self.series_max_terms < 10:
            raise PseudoHeatError("series_max_terms must be at least 10")
        if self.mc_samples < 1:
            raise PseudoHeatError("mc_samples must be positive")
        if not 0 <= self.rng_seed < 2**64:
            raise PseudoHeatError("rng_seed must fit in 64 bits")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.rng_seed)


DEFAULT_CONTROLS = NumericControls()


@dataclass(frozen=True)
class EquationOrder:
    """Order ``m`` of ``du/dt = kappa_m d^m u/dx^m``.

    ``mirror=True`` selects the opposite odd-order branch (``x -> -x``).
    """

    m: int
    mirror: bool = False

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or self.m < 2:
            raise InvalidOrderError(f"order must be an integer >= 2, got {self.m!r}")
        if self.mirror and self.m % 2 == 0:
            raise InvalidOrderError("mirror branch only exists for odd orders")

    @property
    def is_odd(self) -> bool:
        return self.m % 2 == 1

    @property
    def n(self) -> int:
        return (self.m - 1) // 2 if self.is_odd else self.m // 2

    @property
    def kappa(self) -> int:
        if self.is_odd:
            k = (-1) ** self.n
            return -k if self.mirror else k
        return (-1) ** (self.n + 1)

    @property
    def a(self) -> float:
        return derive_constants(self)[0]

    @property
    def b(self) -> float:
        return derive_constants(self)[1]


def derive_constants(order: EquationOrder | int) -> tuple[float, float, int]:
    """Return ``(a_n, b_n, kappa)`` for the damped-oscillation representation.

    For odd ``m = 2n+1`` the damping/frequency pair is
    ``(cos(pi/(2m)), sin(pi/(2m)))``; even orders use the pure sine form, ``(1, 0)``.
    """
    if not isinstance(order, EquationOrder):
        order = EquationOrder(order)
    if order.is_odd:
        phi = math.pi / (2 * order.m)
        return math.cos(phi), math.sin(phi), order.kappa
    return 1.0, 0.0, order.kappa


@dataclass(frozen=True)
class GenGammaLaw:
    """Generalized gamma law with density ``gamma x^(gamma-1) exp(-x^gamma/t) / t``."""

    gamma: float
    t: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise PseudoHeatError("gamma must be positive")
        if not self.t > 0:
            raise InvalidTimeError("t must be positive")

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.gamma * x ** (self.gamma - 1) / self.t * np.exp(-(x**self.gamma) / self.t)
        return np.where(x > 0, out, 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x > 0, -np.expm1(-np.clip(x, 0, None) ** self.gamma / self.t), 0.0)

    def moment(self, k: float) -> float:
        return self.t ** (k / self.gamma) * math.gamma(1 + k / self.gamma)


@dataclass(frozen=True)
class StableLaw:
    """Stable law with characteristic function ``exp(-t |b|^alpha e^{-i pi nu/2 sgn b})``.

    Equivalently ``exp(-sigma t |b|^alpha (1 - i theta sgn(b) tan(pi alpha/2)))`` with
    ``sigma = cos(pi nu/2)`` and ``theta = tan(pi nu/2) / tan(pi alpha/2)``.
    ``nu = alpha`` gives the positively skewed subordinator (``theta = +1``).
    """

    alpha: float
    nu: float
    t: float = 1.0

    def __post_init__(self):
        if not 0 < self.alpha <= 2:
            raise PseudoHeatError("alpha must lie in (0, 2]")
        if not self.t > 0:
            raise InvalidTimeError("t must be positive")
        if not abs(self.nu) < 1:
            raise PseudoHeatError("|nu| must be < 1 so that sigma > 0")
        if self.alpha != 1 and abs(self.theta) > 1 + 1e-12:
            raise PseudoHeatError(f"inadmissible asymmetry theta={self.theta:.6g}")

    @property
    def sigma(self) -> float:
        return math.cos(math.pi * self.nu / 2)

    @property
    def theta(self) -> float:
        """Asymmetry; ``nan`` at ``alpha = 1`` where only the drift survives."""
        if self.alpha == 1:
            return math.nan
        return math.tan(math.pi * self.nu / 2) / math.tan(math.pi * self.alpha / 2)

    @classmethod
    def from_theta(cls, alpha: float, theta: float, t: float = 1.0) -> "StableLaw":
        return cls(alpha, nu_from_theta(alpha, theta), t)


def theta_sigma_from_nu(alpha: float, nu: float) -> tuple[float, float]:
    return (math.tan(math.pi * nu / 2) / math.tan(math.pi * alpha / 2),
            math.cos(math.pi * nu / 2))


def nu_from_theta(alpha: float, theta: float) -> float:
    if alpha == 1:
        raise PseudoHeatError("theta does not determine nu at alpha = 1")
    return 2 / math.pi * math.atan(theta * math.tan(math.pi * alpha / 2))


@dataclass(frozen=True)
class PointResult:
    x: float
    t: float
    value: float
    abs_err: float
    method: str
    nodes: int
    status: str = "ok"

    def __post_init__(self):
        if self.status == "ok" and not (math.isfinite(self.value) and math.isfinite(self.abs_err)):
            raise NumericError(f"non-finite result at x={self.x}, t={self.t}")


@dataclass(frozen=True)
class EvalRequest:
    order: EquationOrder
    points: tuple[tuple[float, float], ...]
    method: Method = Method.AUTO
    controls: NumericControls = field(default_factory=NumericControls)

    def __post_init__(self):
        for x, t in self.points:
            check_time(t)
            if not math.isfinite(x):
                raise PseudoHeatError(f"x must be finite, got {x}")


@dataclass(frozen=True)
class EvalResult:
    request: EvalRequest
    points: tuple[PointResult, ...]


def check_time(t: float) -> None:
    if not (math.isfinite(t) and t > 0):
        raise InvalidTimeError(f"t must be positive and finite, got {t}")


def grid(start: float, stop: float, num: int) -> np.ndarray:
    if num < 1:
        raise PseudoHeatError("grid needs at least one point")
    return np.linspace(start, stop, num)


def parse_range(text: str) -> np.ndarray:
    """Parse ``a:b:n`` into ``n`` evenly spaced points."""
    try:
        a, b, n = text.split(":")
        return grid(float(a), float(b), int(n))
    except ValueError as exc:
        raise PseudoHeatError(f"bad range {text!r}; expected a:b:n") from exc

