"""Command-line interface: ``eval``, ``profile``, ``verify`` and ``sample``.

Exit codes: 0 on success, 1 for configuration or I/O errors, 2 when ``verify``
finds a failing identity.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import checks, kernels, stable
from .core import (
    DEFAULT_CONTROLS,
    EquationOrder,
    EvalRequest,
    GenGammaLaw,
    Method,
    NumericControls,
    PseudoHeatError,
    StableLaw,
    parse_range,
)

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY = 0, 1, 2

CSV_HEADER = ("x", "t", "value", "abs_err", "method", "nodes")
LAWS = ("subordinator", "zn", "gengamma", "stable")
LAPLACE_LAMBDAS = (0.5, 1.0, 2.0)
CF_GRID = (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0)


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    m: list[int] = field(default_factory=lambda: [3])
    mirror: bool = False
    method: str = "auto"
    x: Optional[list[float]] = None
    x_range: Optional[str] = None
    t: list[float] = field(default_factory=lambda: [1.0])
    tol: Optional[float] = None
    seed: int = DEFAULT_CONTROLS.rng_seed
    mc: int = 100_000
    format: str = "csv"
    out: Optional[str] = None
    only: Optional[str] = None
    law: str = "subordinator"
    alpha: float = 0.5
    nu: float = 0.0
    gamma: float = 3.0
    depth: int = 1

    def validate(self) -> None:
        if self.command not in ("eval", "profile", "verify", "sample"):
            raise ConfigError(f"unknown command {self.command!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        try:
            Method(self.method)
        except ValueError:
            raise ConfigError(f"unknown method {self.method!r}") from None
        if self.x is not None and self.x_range is not None:
            raise ConfigError("give either x or x_range, not both")
        if not self.m:
            raise ConfigError("at least one order m is required")
        if self.command == "eval" and len(self.m) != 1:
            raise ConfigError("eval takes a single order m")
        if self.mc < 1:
            raise ConfigError("mc must be positive")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.law not in LAWS:
            raise ConfigError(f"law must be one of {', '.join(LAWS)}")
        try:
            for m in self.m:
                EquationOrder(m, self.mirror and m % 2 == 1)
            for t in self.t:
                if not (math.isfinite(t) and t > 0):
                    raise ConfigError(f"t must be positive, got {t}")
            self.controls()
            self.xs()
        except PseudoHeatError as exc:
            raise ConfigError(str(exc)) from None
        if self.only:
            try:
                checks.select(self.only)
            except KeyError as exc:
                raise ConfigError(f"unknown check or group: {exc.args[0]}") from None

    def controls(self) -> NumericControls:
        kw = {"rng_seed": self.seed, "mc_samples": self.mc}
        if self.tol is not None:
            kw["quad_abs_tol"] = self.tol
        return dataclasses.replace(DEFAULT_CONTROLS, **kw)

    def xs(self) -> np.ndarray:
        if self.x_range is not None:
            return parse_range(self.x_range)
        if self.x is not None:
            return np.asarray(self.x, dtype=float)
        return parse_range("-5:5:201") if self.command == "profile" else np.array([0.0])


CONFIG_FIELDS = {f.name for f in dataclasses.fields(RunConfig)} - {"command"}


def load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(data) - CONFIG_FIELDS
    if unknown:
        raise ConfigError(f"unknown config fields: {', '.join(sorted(unknown))}")
    for key in ("m", "t", "x"):
        if key in data and not isinstance(data[key], list):
            data[key] = [data[key]]
    for key, value in data.items():
        _check_type(key, value)
    return data


_NUMBER = (int, float)
_FIELD_TYPES = {
    "m": (list, int), "t": (list, _NUMBER), "x": (list, _NUMBER),
    "mirror": bool, "method": str, "x_range": str, "tol": _NUMBER, "seed": int, "mc": int,
    "format": str, "out": str, "only": str, "law": str, "alpha": _NUMBER, "nu": _NUMBER,
    "gamma": _NUMBER, "depth": int,
}


def _check_type(key: str, value) -> None:
    spec = _FIELD_TYPES[key]
    if isinstance(spec, tuple) and spec[0] is list:
        ok = all(isinstance(v, spec[1]) and not isinstance(v, bool) for v in value)
    elif spec is bool:
        ok = isinstance(value, bool)
    else:
        ok = value is None or (isinstance(value, spec) and not isinstance(value, bool))
    if not ok:
        raise ConfigError(f"config field {key!r} has the wrong type")


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _count(text: str) -> int:
    # accepts 100000 as well as 1e5
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a count, got {text!r}") from None
    if not v.is_integer() or v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer count, got {text!r}")
    return int(v)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pseudoheat", description="Fundamental solutions of higher-order heat-type equations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    common.add_argument("--m", type=_int_list, help="order(s), comma separated")
    common.add_argument("--mirror", action="store_true", default=None, help="use the reflected odd-order branch")
    common.add_argument("--method", choices=[m.value for m in Method])
    xs = common.add_mutually_exclusive_group()
    xs.add_argument("--x", type=_float_list, help="point(s), comma separated")
    xs.add_argument("--x-range", dest="x_range", help="a:b:n grid")
    common.add_argument("--t", type=_float_list, help="time(s), comma separated")
    common.add_argument("--tol", type=float, help="absolute quadrature tolerance")
    common.add_argument("--seed", type=int)
    common.add_argument("--mc", type=_count, help="Monte Carlo sample count (1e5 accepted)")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--out", help="output file (default: stdout)")
    sub.add_parser("eval", parents=[common], help="evaluate u_m on points")
    sub.add_parser("profile", parents=[common], help="profiles of several orders on a grid")
    v = sub.add_parser("verify", parents=[common], help="run the identity suite")
    v.add_argument("--only", help="comma-separated groups or check names: " + ", ".join(checks.GROUPS))
    s = sub.add_parser("sample", parents=[common], help="draw samples and summary statistics")
    s.add_argument("--law", choices=LAWS)
    s.add_argument("--alpha", type=float)
    s.add_argument("--nu", type=float)
    s.add_argument("--gamma", type=float)
    s.add_argument("--depth", type=int)
    return p


def make_config(argv: Sequence[str]) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    data = load_config_file(args.pop("config")) if args.get("config") else {}
    args.pop("config", None)
    for key, value in args.items():
        if value is not None:
            data[key] = value
    try:
        cfg = RunConfig(command=command, **data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# output helpers


def _num(v: float) -> str:
    return repr(float(v))


def _write(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    try:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {cfg.out}: {exc.strerror}") from None


def _finite_or_none(v: float) -> Optional[float]:
    return v if math.isfinite(v) else None


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_eval(cfg: RunConfig) -> int:
    order = EquationOrder(cfg.m[0], cfg.mirror and cfg.m[0] % 2 == 1)
    points = tuple((float(x), float(t)) for t in cfg.t for x in cfg.xs())
    req = EvalRequest(order, points, Method(cfg.method), cfg.controls())
    rows = kernels.evaluate(req).points
    for r in rows:
        if r.status != "ok":
            print(f"x={r.x} t={r.t}: {r.status}", file=sys.stderr)
    if cfg.format == "json":
        out = [{"x": r.x, "t": r.t, "value": _finite_or_none(r.value),
                "abs_err": _finite_or_none(r.abs_err), "method": r.method,
                "nodes": r.nodes, "status": r.status} for r in rows]
        _write(cfg, _json({"m": order.m, "mirror": order.mirror, "rows": out}))
        return EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        # failed rows keep the fixed header: nan value, method "error"
        method = r.method if r.status == "ok" else "error"
        w.writerow([_num(r.x), _num(r.t), _num(r.value), _num(r.abs_err), method, r.nodes])
    _write(cfg, buf.getvalue())
    return EXIT_OK


def zero_crossings(xs: np.ndarray, values: np.ndarray) -> list[float]:
    """Linearly interpolated sign changes of ``values`` on the grid ``xs``."""
    out = []
    for i in range(len(xs) - 1):
        a, b = values[i], values[i + 1]
        if a == 0 and i > 0 and values[i - 1] * b < 0:
            out.append(float(xs[i]))
        elif a * b < 0:
            out.append(float(xs[i] - a * (xs[i + 1] - xs[i]) / (b - a)))
    return out


def profile_data(cfg: RunConfig) -> dict:
    xs = cfg.xs()
    t = cfg.t[0]
    controls = cfg.controls()
    columns, report = {}, {}
    for m in cfg.m:
        order = EquationOrder(m, cfg.mirror and m % 2 == 1)
        vals = np.array([kernels.evaluate_point(order, float(x), t, Method(cfg.method), controls).value
                         for x in xs])
        columns[m] = vals
        zc = zero_crossings(xs, vals)
        exact = kernels.positive_mass_exact(order)
        # the metric is symmetric under the mirror, so the decaying side is integrated
        if order.is_odd:
            numeric = kernels.mass_positive_halfline(order.n, t, controls)[0]
        else:
            numeric = kernels.mass_positive_halfline(order.n, t, controls, even=True)[0]
        report[m] = {
            "zero_crossings": zc,
            "crossings_negative_x": sum(1 for z in zc if z < 0),
            "crossings_positive_x": sum(1 for z in zc if z > 0),
            "argmax_x": float(xs[int(np.argmax(vals))]),
            "positive_mass_exact": exact,
            "asymmetry": abs(numeric - 0.5),
        }
    return {"x": xs, "t": t, "columns": columns, "report": report}


def cmd_profile(cfg: RunConfig) -> int:
    data = profile_data(cfg)
    xs, cols, rep = data["x"], data["columns"], data["report"]
    if cfg.format == "json":
        _write(cfg, _json({
            "t": data["t"],
            "x": [float(v) for v in xs],
            "u": {str(m): [float(v) for v in cols[m]] for m in cols},
            "report": {str(m): rep[m] for m in rep},
        }))
        return EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x"] + [f"u_{m}" for m in cols])
    for i, x in enumerate(xs):
        w.writerow([_num(x)] + [_num(cols[m][i]) for m in cols])
    for m, r in rep.items():
        locs = " ".join(f"{z:.6g}" for z in r["zero_crossings"])
        buf.write(f"# m={m} t={data['t']} crossings_negative_x={r['crossings_negative_x']} "
                  f"crossings_positive_x={r['crossings_positive_x']} argmax_x={r['argmax_x']:.6g} "
                  f"asymmetry={r['asymmetry']:.12g} zeros=[{locs}]\n")
    _write(cfg, buf.getvalue())
    return EXIT_OK


def verify_report(cfg: RunConfig) -> tuple[dict, bool]:
    ctx = checks.Context(cfg.seed, cfg.mc, cfg.controls())
    results = checks.run_checks(ctx, cfg.only)
    ok = all(r.passed for r in results)
    return {
        "seed": cfg.seed,
        "mc_samples": cfg.mc,
        "only": cfg.only,
        "passed": ok,
        "checks": [r.as_dict() for r in results],
    }, ok


def cmd_verify(cfg: RunConfig) -> int:
    report, ok = verify_report(cfg)
    if cfg.format == "json":
        text = _json(report)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["group", "name", "error", "tolerance", "passed", "detail"])
        for c in report["checks"]:
            w.writerow([c["group"], c["name"], _num(c["error"]), _num(c["tolerance"]),
                        "pass" if c["passed"] else "FAIL", c["detail"]])
        text = buf.getvalue()
    _write(cfg, text)
    return EXIT_OK if ok else EXIT_VERIFY


def draw_samples(cfg: RunConfig) -> tuple[np.ndarray, dict]:
    """Samples for the configured law and their summary statistics."""
    t = cfg.t[0]
    rng = np.random.default_rng(cfg.seed)
    n = cfg.mc
    summary: dict = {"law": cfg.law, "t": t, "count": n, "seed": cfg.seed}
    try:
        if cfg.law == "subordinator":
            vals = stable.sample_skewed_stable(cfg.alpha, t, n, rng).values
            summary["alpha"] = cfg.alpha
            summary["laplace"] = []
            for lam in LAPLACE_LAMBDAS:
                mean, se = stable.empirical_laplace(vals, lam)
                summary["laplace"].append({"lambda": lam, "mean": mean, "se": se,
                                           "exact": math.exp(-t * lam**cfg.alpha)})
            if cfg.alpha == 0.5:
                summary["ks_first_passage"] = stable.ks_distance(vals, lambda x: stable.levy_half_cdf(x, t))
        elif cfg.law == "zn":
            spec = stable.CompositionSpec(cfg.depth, t)
            vals = stable.sample_zn(spec, n, rng).values
            summary["depth"] = cfg.depth
            emp = stable.empirical_cf(vals, CF_GRID)
            summary["cf"] = [{"beta": b, "re": float(e.real), "im": float(e.imag),
                              # standard error of each component is at most 1/sqrt(n)
                              "se": 1 / math.sqrt(n),
                              "exact_re": stable.zn_cf(spec, b).real, "exact_im": stable.zn_cf(spec, b).imag}
                             for b, e in zip(CF_GRID, emp)]
        elif cfg.law == "gengamma":
            law = GenGammaLaw(cfg.gamma, t)
            vals = stable.sample_gen_gamma(law, n, rng).values
            p = vals**cfg.gamma
            summary["gamma"] = cfg.gamma
            summary["mean_x_pow_gamma"] = {"mean": float(p.mean()), "se": float(p.std(ddof=1) / math.sqrt(n)),
                                           "exact": t}
        else:
            law = StableLaw(cfg.alpha, cfg.nu, t)
            vals = stable.sample_stable(law, n, rng).values
            summary.update(alpha=cfg.alpha, nu=cfg.nu)
            emp = stable.empirical_cf(vals, CF_GRID)
            summary["cf"] = [{"beta": b, "re": float(e.real), "im": float(e.imag), "se": 1 / math.sqrt(n),
                              "exact_re": stable.stable_cf(law, b).real, "exact_im": stable.stable_cf(law, b).imag}
                             for b, e in zip(CF_GRID, emp)]
    except PseudoHeatError as exc:
        raise ConfigError(f"invalid law: {exc}") from None
    summary["median"] = float(np.median(vals))
    return vals, summary


def cmd_sample(cfg: RunConfig) -> int:
    vals, summary = draw_samples(cfg)
    if cfg.out is None:
        # without an output file only the summary is printed
        sys.stdout.write(_json(summary))
        return EXIT_OK
    _write(cfg, "".join(_num(v) + "\n" for v in vals))
    summary["samples_file"] = cfg.out
    sys.stdout.write(_json(summary))
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "profile": cmd_profile, "verify": cmd_verify, "sample": cmd_sample}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    if any(a in ("-h", "--help") for a in argv):
        try:
            build_parser().parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
    try:
        cfg = make_config(argv)
        return COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"pseudoheat: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
