"""Acceptance criteria at their pinned tolerances.

Each test prints (and records for the terminal summary) one PASS/FAIL line.
Run directly with ``python tests/test_acceptance.py`` for the lines alone.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from pseudoheat import checks, fractional, kernels, stable
from pseudoheat.core import nu_from_theta, theta_sigma_from_nu

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from another directory
    ACCEPTANCE_LINES = []

CTX = checks.Context(seed=20240917, mc_samples=100_000)


def report(number: int, title: str, measured: dict, limits: dict) -> bool:
    ok = all(measured[k] <= limits[k] for k in limits)
    parts = ", ".join(f"{k}={measured[k]:.3e} (<= {limits[k]:.1e})" for k in limits)
    line = f"[{'PASS' if ok else 'FAIL'}] {number:2d} {title}: {parts}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_01_third_order_equivalence():
    (es, ed), secs = timed(lambda: checks.third_order_errors(CTX))
    assert report(1, "third-order series/damped vs Airy",
                  {"series": es, "damped": ed, "seconds": secs},
                  {"series": 1e-8, "damped": 1e-7, "seconds": 5.0})


def test_02_mass_identities():
    def run():
        return {m: abs(checks.half_mass(m, CTX) - kernels.positive_mass_exact(m)) for m in (3, 5, 7, 2, 4)}

    errs, secs = timed(run)
    assert report(2, "half-line masses 1/3, 2/5, 3/7, 1/2",
                  {"odd": max(errs[3], errs[5], errs[7]), "even": max(errs[2], errs[4]), "seconds": secs},
                  {"odd": 1e-4, "even": 1e-6, "seconds": 30.0})


def test_03_origin_limits():
    closed = checks.origin_errors(CTX, orders=range(2, 16))
    limit = abs(kernels.u(101, 0.0, 1.0) - 1 / math.pi)
    assert report(3, "origin closed forms and 1/pi limit",
                  {"closed_form": closed, "m101_vs_1/pi": limit},
                  {"closed_form": 1e-12, "m101_vs_1/pi": 0.01})


def test_04_classical_reductions():
    assert report(4, "heat kernel and biquadratic series",
                  {"gauss": checks.gaussian_error(CTX), "biquadratic": checks.biquadratic_error(CTX)},
                  {"gauss": 1e-9, "biquadratic": 1e-7})


def test_05_airy_squared_convolution():
    err, secs = timed(lambda: checks.convolution_error(CTX))
    assert report(5, "Airy-squared convolution vs asymmetric Cauchy",
                  {"max_err": err, "seconds": secs}, {"max_err": 1e-5, "seconds": 60.0})


def test_06_stable_cf_suite():
    assert report(6, "stable CF semigroup, asymmetric Cauchy CF, mapping round trip",
                  {"semigroup": checks.semigroup_error(), "cauchy": checks.cauchy_cf_error(),
                   "roundtrip": checks.mapping_roundtrip_error()},
                  # "exactly" is read as agreement to a few units in the last place
                  {"semigroup": 1e-12, "cauchy": 1e-15, "roundtrip": 1e-14})


def test_07_monte_carlo():
    n = 100_000

    def run():
        batch = stable.sample_skewed_stable(0.5, 1.0, n, CTX.rng(1))
        ks = stable.ks_distance(batch.values, lambda x: stable.levy_half_cdf(x, 1.0))
        return ks, checks.mc_cf_error(1, CTX, 11), checks.mc_cf_error(2, CTX, 12)

    (ks, cf1, cf2), secs = timed(run)
    bound = 4 / math.sqrt(n)
    assert report(7, "Monte Carlo KS and empirical CF",
                  {"ks": ks, "cf_z1": cf1, "cf_z2": cf2, "seconds": secs},
                  {"ks": 0.01, "cf_z1": bound, "cf_z2": bound, "seconds": 60.0})


def test_08_fractional_suite():
    seq = checks.caputo_sequence(0.8)
    # positive when some refinement step fails to reduce the residual
    growth = max(b - a for a, b in zip(seq[:-1], seq[1:]))
    at_512 = max(seq[-1], checks.caputo_sequence(0.5)[-1])
    assert report(8, "fractional normalization, transforms, Caputo L1",
                  {"mass": checks.q_mass_error(), "laplace_x": checks.laplace_x_error(CTX),
                   "laplace_t": checks.laplace_t_error(), "caputo_h512": at_512,
                   "caputo_growth": max(growth, 0.0)},
                  {"mass": 1e-6, "laplace_x": 1e-6, "laplace_t": 1e-5, "caputo_h512": 5e-3,
                   "caputo_growth": 0.0})


def test_09_pde_residuals():
    r_u3, r_f1 = checks.pde_errors(checks.PDE_STEP)
    assert report(9, f"third-order PDE residuals, 5-point x-stencil, step {checks.PDE_STEP}",
                  {"u3": r_u3, "f1": r_f1}, {"u3": 1e-3, "f1": 1e-3})


def test_10_determinism(tmp_path):
    cmd = [sys.executable, "-m", "pseudoheat.cli", "verify", "--seed", "7", "--mc", "1e4", "--format", "json"]
    outs = [subprocess.run(cmd, capture_output=True, check=False).stdout for _ in range(2)]
    differs = 0.0 if outs[0] == outs[1] and outs[0] else 1.0
    assert report(10, "verify output byte-identical for equal seeds",
                  {"differs": differs, "bytes": float(len(outs[0]))}, {"differs": 0.0})


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
