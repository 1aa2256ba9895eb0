"""Regenerate ``values.json`` with mpmath at 30 significant digits.

Each value comes from a route independent of the package code:

* odd-order kernels from ``(1/pi) Re e^{-i pi/(2m)} int_0^inf exp(-i x r e^{-i pi/(2m)} - t r^m) dr``
  (the inverse Fourier integral rotated onto the steepest-descent ray);
* even-order kernels from ``(1/pi) int_0^inf cos(beta x) exp(-t beta^m) d beta``;
* Mittag-Leffler values from the defining series in extended precision;
* the one-sided 1/3-stable density from its Bessel-K closed form.

Run ``python tests/oracles/generate.py`` to rewrite the file.
"""

import json
import pathlib

import mpmath as mp

mp.mp.dps = 30


def odd_kernel(m, x, t):
    rot = mp.exp(-1j * mp.pi / (2 * m))
    f = lambda r: mp.exp(-1j * x * r * rot - t * r**m)
    return mp.re(rot * mp.quad(f, [0, 1, 2, 4, 8, mp.inf])) / mp.pi


def even_kernel(m, x, t):
    f = lambda b: mp.cos(b * x) * mp.exp(-t * b**m)
    return mp.quad(f, [0, 1, 2, 4, 8, mp.inf]) / mp.pi


def mittag_leffler(alpha, z):
    return mp.nsum(lambda k: z**k / mp.gamma(alpha * k + 1), [0, mp.inf])


def stable13(x):
    # density of the positive 1/3-stable law with Laplace transform exp(-lambda^(1/3))
    return mp.besselk(mp.mpf(1) / 3, 2 / (mp.sqrt(27) * mp.sqrt(x))) / (3 * mp.pi * x**1.5)


def s(v):
    return mp.nstr(v, 25)


def main():
    out = {
        "odd": [
            {"m": m, "x": x, "t": t, "u": s(odd_kernel(m, mp.mpf(x), mp.mpf(t)))}
            for m in (3, 5, 7, 9)
            for x, t in ((-3.0, 1.0), (-1.25, 0.5), (0.0, 1.0), (0.7, 2.0), (2.0, 1.0))
        ],
        "even": [
            {"m": m, "x": x, "t": t, "u": s(even_kernel(m, mp.mpf(x), mp.mpf(t)))}
            for m in (2, 4, 6)
            for x, t in ((0.0, 1.0), (1.0, 1.0), (2.5, 0.5), (-1.5, 2.0))
        ],
        "airy": [{"w": w, "ai": s(mp.airyai(w))} for w in (-9.0, -5.5, -2.0, -0.3, 0.0, 1.0, 4.5, 7.0)],
        "mittag_leffler": [
            {"alpha": a, "z": z, "e": s(mittag_leffler(mp.mpf(a), mp.mpf(z)))}
            for a in (0.25, 1 / 3, 0.5, 0.75, 1.5)
            for z in (-3.0, -0.5, 0.8)
        ],
        "stable13": [{"x": x, "p": s(stable13(mp.mpf(x)))} for x in (0.02, 0.1, 0.5, 2.0, 10.0)],
        "gamma": [{"x": x, "g": s(mp.gamma(x))} for x in (0.1, 1 / 3, 2.5, 7.25, 30.5)],
    }
    path = pathlib.Path(__file__).with_name("values.json")
    path.write_text(json.dumps(out, indent=1) + "\n")


if __name__ == "__main__":
    main()
