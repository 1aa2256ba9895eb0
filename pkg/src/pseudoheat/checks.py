"""Numerical identities checked by ``pseudoheat verify``.

Every check returns the measured error together with the tolerance it is held to.
Results depend only on the seed and the Monte Carlo sample count, so reports are
reproducible byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import fractional, kernels, stable
from .core import DEFAULT_CONTROLS, GenGammaLaw, NumericControls, nu_from_theta, theta_sigma_from_nu


@dataclass(frozen=True)
class Context:
    seed: int
    mc_samples: int
    controls: NumericControls = DEFAULT_CONTROLS

    def rng(self, stream: int) -> np.random.Generator:
        # independent stream per check so that --only does not change the draws
        return np.random.default_rng([self.seed, stream])


@dataclass(frozen=True)
class CheckResult:
    group: str
    name: str
    error: float
    tolerance: float
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return {"group": self.group, "name": self.name, "error": self.error,
                "tolerance": self.tolerance, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class Check:
    group: str
    name: str
    run: Callable[[Context], tuple[float, float, str]]

    def __call__(self, ctx: Context) -> CheckResult:
        err, tol, detail = self.run(ctx)
        ok = bool(math.isfinite(err) and err <= tol)
        return CheckResult(self.group, self.name, float(err), float(tol), ok, detail)


CHECKS: list[Check] = []


def check(group: str, name: str):
    def register(fn):
        CHECKS.append(Check(group, name, fn))
        return fn

    return register


# ---------------------------------------------------------------------------
# kernels

THIRD_ORDER_X = np.linspace(-4, 4, 41)
THIRD_ORDER_T = (0.5, 1.0, 2.0)


def third_order_errors(ctx: Context) -> tuple[float, float]:
    """Max deviation of the series and damped odd-order routes (n=1) from the Airy closed form."""
    e_series = e_damped = 0.0
    for t in THIRD_ORDER_T:
        for x in THIRD_ORDER_X:
            ref = kernels.u3_airy(x, t)
            e_series = max(e_series, abs(kernels.u_odd_series(1, x, t, ctx.controls) - ref))
            e_damped = max(e_damped, abs(kernels.u_odd_damped(1, x, t, ctx.controls) - ref))
    return e_series, e_damped


@check("kernels", "third_order_series")
def _third_order_series(ctx):
    return third_order_errors(ctx)[0], 1e-8, "41 x 3 grid"


@check("kernels", "third_order_damped")
def _third_order_damped(ctx):
    return third_order_errors(ctx)[1], 1e-7, "41 x 3 grid"


def origin_errors(ctx: Context, orders=range(2, 12)) -> float:
    return max(abs(kernels.u(m, 0.0, 1.0, ctx.controls) - kernels.u_origin(m, 1.0)) for m in orders)


@check("kernels", "origin_closed_forms")
def _origin(ctx):
    return origin_errors(ctx), 1e-12, "m = 2..11 at (0, 1)"


@check("kernels", "origin_limit")
def _origin_limit(ctx):
    v = kernels.u(101, 0.0, 1.0, ctx.controls)
    return abs(v - 1 / math.pi), 0.01, f"u_101(0,1) = {v:.10f}"


GAUSS_POINTS = [(x, t) for x in (-1.0, 0.0, 2.0) for t in (0.5, 1.0, 2.0)]


def gaussian_error(ctx: Context) -> float:
    def heat(x, t):
        return math.exp(-x * x / (4 * t)) / math.sqrt(4 * math.pi * t)

    return max(abs(kernels.u(2, x, t, ctx.controls) - heat(x, t)) for x, t in GAUSS_POINTS)


@check("kernels", "heat_kernel")
def _gauss(ctx):
    return gaussian_error(ctx), 1e-9, "3x3 grid"


def biquadratic_error(ctx: Context, t: float = 1.0) -> float:
    xs = np.linspace(-3, 3, 25)
    return max(abs(kernels.u4_series(x, t, ctx.controls) - kernels.u_even_damped(2, x, t, ctx.controls))
               for x in xs)


@check("kernels", "biquadratic_series")
def _biquad(ctx):
    return biquadratic_error(ctx), 1e-7, "|x| <= 3, t = 1"


# ---------------------------------------------------------------------------
# mass

MASS_CASES = [(3, 1e-4), (5, 1e-4), (7, 1e-4), (2, 1e-6), (4, 1e-6)]


def half_mass(m: int, ctx: Context) -> float:
    even = m % 2 == 0
    n = m // 2 if even else (m - 1) // 2
    return kernels.mass_positive_halfline(n, 1.0, ctx.controls, even=even)[0]


for _m, _tol in MASS_CASES:
    def _mass(ctx, m=_m, tol=_tol):
        v = half_mass(m, ctx)
        exact = kernels.positive_mass_exact(m)
        return abs(v - exact), tol, f"{v:.12f} vs {exact:.12f}"

    CHECKS.append(Check("mass", f"half_line_m{_m}", _mass))


# ---------------------------------------------------------------------------
# subordinated composition

CONVOLUTION_POINTS = [(x, t) for x in (-2.0, -0.5, 1.5) for t in (0.5, 1.0, 2.0)]


def convolution_error(ctx: Context) -> float:
    return max(abs(stable.composition_integral(x, t, ctx.controls)[0] - stable.cauchy_composition_density(x, t))
               for x, t in CONVOLUTION_POINTS)


@check("convolution", "airy_squared_cauchy")
def _conv(ctx):
    return convolution_error(ctx), 1e-5, "9 (x, t) points"


# ---------------------------------------------------------------------------
# stable characteristic functions

CF_BETAS = (-3.0, -0.7, 0.4, 1.0, 2.5)


def semigroup_error() -> float:
    err = 0.0
    for depth in (1, 2, 3):
        for b in CF_BETAS:
            lhs = stable.zn_cf(stable.CompositionSpec(depth, 0.7), b) * stable.zn_cf(stable.CompositionSpec(depth, 1.6), b)
            err = max(err, abs(lhs - stable.zn_cf(stable.CompositionSpec(depth, 2.3), b)))
    return err


@check("stable", "zn_semigroup")
def _semigroup(ctx):
    return semigroup_error(), 1e-12, "depth 1..3, t = 0.7 + 1.6"


def cauchy_cf_error() -> float:
    return max(abs(stable.zn_cf(stable.CompositionSpec(1, t), b) - stable.cauchy_composition_cf(b, t))
               for b in CF_BETAS for t in (0.5, 1.0, 2.0))


@check("stable", "z1_asymmetric_cauchy_cf")
def _cauchy(ctx):
    return cauchy_cf_error(), 1e-15, "zn_cf(depth 1) vs asymmetric Cauchy CF"


def mapping_roundtrip_error() -> float:
    err = 0.0
    for alpha in (0.3, 0.5, 1 / 3, 0.8, 1.2, 1.5, 1.9):
        for nu in np.linspace(-0.9, 0.9, 7):
            nu = float(nu) * min(alpha, 2 - alpha)
            theta, sigma = theta_sigma_from_nu(alpha, nu)
            back = nu_from_theta(alpha, theta)
            err = max(err, abs(back - nu), abs(math.cos(math.pi * back / 2) - sigma))
    return err


@check("stable", "parameter_roundtrip")
def _roundtrip(ctx):
    return mapping_roundtrip_error(), 1e-14, "(alpha, nu) -> (theta, sigma) -> (alpha, nu)"


# ---------------------------------------------------------------------------
# Monte Carlo

def ks_bound(n: int) -> float:
    # 0.01 as required at 1e5 samples; for smaller runs the 0.1% critical value
    return max(0.01, 1.95 / math.sqrt(n))


@check("mc", "levy_first_passage_ks")
def _ks(ctx):
    n = ctx.mc_samples
    batch = stable.sample_skewed_stable(0.5, 1.0, n, ctx.rng(1))
    d = stable.ks_distance(batch.values, lambda x: stable.levy_half_cdf(x, 1.0))
    return d, ks_bound(n), f"N = {n}"


MC_BETAS = (-2.0, -0.5, 0.3, 1.0, 3.0)


def mc_cf_error(depth: int, ctx: Context, stream: int) -> float:
    spec = stable.CompositionSpec(depth, 1.0)
    vals = stable.sample_zn(spec, ctx.mc_samples, ctx.rng(stream)).values
    emp = stable.empirical_cf(vals, MC_BETAS)
    exact = np.array([stable.zn_cf(spec, b) for b in MC_BETAS])
    return float(np.max(np.abs(emp - exact)))


for _depth in (1, 2):
    def _mc_cf(ctx, depth=_depth):
        n = ctx.mc_samples
        return mc_cf_error(depth, ctx, 10 + depth), 4 / math.sqrt(n), f"N = {n}, 5 beta values"

    CHECKS.append(Check("mc", f"z{_depth}_empirical_cf", _mc_cf))


@check("mc", "gen_gamma_power_mean")
def _gengamma(ctx):
    law = GenGammaLaw(3.0, 1.5)
    x = stable.sample_gen_gamma(law, ctx.mc_samples, ctx.rng(20)).values
    v = x**3
    se = v.std(ddof=1) / math.sqrt(len(v))
    return abs(v.mean() - law.t), 4 * se, "mean of X^3 equals t (4 standard errors)"


# ---------------------------------------------------------------------------
# fractional

FRAC_ALPHAS = (0.25, 0.5, 0.75)


def q_mass_error() -> float:
    return max(abs(fractional.q_alpha_mass(a, t)[0] - 1) for a in FRAC_ALPHAS for t in (0.5, 2.0))


@check("fractional", "q_normalization")
def _qmass(ctx):
    return q_mass_error(), 1e-6, "alpha in {1/4, 1/2, 3/4}, t in {0.5, 2}"


def laplace_x_error(ctx: Context) -> float:
    return max(abs(fractional.laplace_x_q_numeric(a, lam, t)[0] - fractional.laplace_x_q(a, lam, t, ctx.controls))
               for a in FRAC_ALPHAS for lam in (0.5, 2.0) for t in (1.0, 3.0))


@check("fractional", "laplace_x_mittag_leffler")
def _lx(ctx):
    return laplace_x_error(ctx), 1e-6, "quadrature vs E_{alpha,1}(-lambda t^alpha)"


def laplace_t_error() -> float:
    return max(abs(fractional.laplace_t_q_numeric(a, mu, x)[0] - fractional.laplace_t_q(a, mu, x))
               for a in FRAC_ALPHAS for mu in (0.5, 2.0) for x in (0.5, 1.5))


@check("fractional", "laplace_t_closed_form")
def _lt(ctx):
    return laplace_t_error(), 1e-5, "quadrature vs mu^(alpha-1) exp(-x mu^alpha)"


CAPUTO_STEPS = (1 / 64, 1 / 128, 1 / 256, 1 / 512)


def caputo_sequence(alpha: float, x: float = 1.0, t: float = 1.0) -> list[float]:
    return [fractional.caputo_residual(alpha, x, t, h) for h in CAPUTO_STEPS]


@check("fractional", "caputo_l1_residual")
def _caputo(ctx):
    worst = max(caputo_sequence(a)[-1] for a in (0.5, 0.8))
    return worst, 5e-3, "h = 1/512, alpha in {1/2, 0.8}, (x, t) = (1, 1)"


@check("fractional", "caputo_l1_refinement")
def _caputo_rate(ctx):
    seq = caputo_sequence(0.8)
    rates = [math.log2(a / b) for a, b in zip(seq[:-1], seq[1:])]
    # error is the shortfall of the smallest observed rate below 1
    return max(0.0, 1 - min(rates)), 0.0, "alpha = 0.8 rates " + ", ".join(f"{r:.3f}" for r in rates)


@check("fractional", "transport_limit")
def _transport(ctx):
    r = fractional.transport_residual(0.999)
    return r, 0.02, "weak residual of dq/dt + dq/dx at alpha = 0.999"


# ---------------------------------------------------------------------------
# PDE residuals

PDE_STEP = 1e-2
PDE_POINTS = ((0.5, 1.0), (1.0, 1.0))


def pde_errors(h: float = PDE_STEP) -> tuple[float, float]:
    r_u3 = max(kernels.pde_residual(3, kernels.u3_airy, x, t, h) for x, t in PDE_POINTS)
    r_f1 = max(kernels.pde_residual(3, lambda a, b: kernels.f_m_eval(1, a, b), x, t, h) for x, t in PDE_POINTS)
    return r_u3, r_f1


@check("pde", "third_order_residuals")
def _pde(ctx):
    r_u3, r_f1 = pde_errors()
    return max(r_u3, r_f1), 1e-3, f"u3 {r_u3:.3e}, f_1 {r_f1:.3e}, step {PDE_STEP}"


# ---------------------------------------------------------------------------


GROUPS = tuple(dict.fromkeys(c.group for c in CHECKS))


def select(only: str | None) -> list[Check]:
    """Checks matching a comma-separated list of group or check names (all if ``only`` is empty)."""
    if not only:
        return list(CHECKS)
    wanted = {w.strip() for w in only.split(",") if w.strip()}
    known = set(GROUPS) | {c.name for c in CHECKS}
    unknown = wanted - known
    if unknown:
        raise KeyError(", ".join(sorted(unknown)))
    return [c for c in CHECKS if c.group in wanted or c.name in wanted]


def run_checks(ctx: Context, only: str | None = None) -> list[CheckResult]:
    return [c(ctx) for c in select(only)]
