"""Batch command-line front end.

Subcommands:

* ``simulate``  -- run a configured sweep, write a CSV table of per-point
  statistics against the asymptotic predictions;
* ``asymptote`` -- evaluate the normalized-SIR limit three ways (closed-form
  fixed point, large-c formula, quadrature oracle) and the rate predictions;
* ``density``   -- predicted vs simulated active-interferer density with a
  3-sigma binomial acceptance band;
* ``plot``      -- turn a simulate CSV into a self-contained SVG chart;
* ``reuse-opt`` -- rate-optimal frequency reuse factor.

All commands are non-interactive; data goes to stdout or the requested
output file, progress and diagnostics to stderr.  Exit codes: 0 success,
2 invalid config/CSV input, 3 fixed-point bracketing failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

from . import __version__, asymptotics, montecarlo
from .asymptotics import AsymptoticParams, NoBracket
from .pointproc import MODEL_NAMES, ModelSpec, NetworkConfig
from .svgplot import RateSeries, render_rate_chart

CSV_COLUMNS = (
    "model,N,c,alpha,rho_p,model_params,mean_rate,std_rate,sem,asymptote,"
    "rel_gap,empirical_density,predicted_density,seed"
)

SCHEMA_VERSION = 1

_NETWORK_KEYS = {"rho_p", "alpha", "c", "r_T"}
_MODEL_KEYS = {
    "independent": {"name"},
    "hc1": {"name", "h"},
    "hc2": {"name", "h"},
    "boolean": {"name", "h", "rho_b"},
    "cellular": {"name", "rho_c", "kappa", "power_control"},
}
_TOP_KEYS = {"schema_version", "network", "model", "sweep", "replications", "master_seed"}


class ConfigError(Exception):
    """Invalid run configuration; message carries the offending key path."""


def _fmt(value) -> str:
    """CSV number formatting: 9 significant digits, C locale, empty for null."""
    if value is None:
        return ""
    return f"{value:.9g}"


# ---------------------------------------------------------------------------
# config loading
# ---------------------------------------------------------------------------

def _reject_unknown(mapping: dict, allowed: set, path: str) -> None:
    for key in mapping:
        if key not in allowed:
            raise ConfigError(f"{path}: unknown key {key!r} (allowed: {sorted(allowed)})")


def _need(mapping: dict, key: str, path: str):
    if key not in mapping:
        raise ConfigError(f"{path}: missing required key {key!r}")
    return mapping[key]


def _model_variants(model_cfg: dict) -> list[ModelSpec]:
    """Expand a model block; exactly one numeric parameter may be a list."""
    name = _need(model_cfg, "name", "model")
    if name not in MODEL_NAMES:
        raise ConfigError(f"model.name: unknown model {name!r}; expected one of {MODEL_NAMES}")
    _reject_unknown(model_cfg, _MODEL_KEYS[name], "model")
    listed = [k for k, v in model_cfg.items() if isinstance(v, list)]
    if len(listed) > 1:
        raise ConfigError(f"model: at most one parameter may be a list, got {listed}")

    def build(overrides: dict) -> ModelSpec:
        kwargs = {k: v for k, v in model_cfg.items() if k != "name"}
        kwargs.update(overrides)
        try:
            return ModelSpec(name=name, **kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"model: {exc}") from exc

    if not listed:
        return [build({})]
    key = listed[0]
    return [build({key: v}) for v in model_cfg[key]]


def load_config(path: str) -> montecarlo.ExperimentSpec:
    """Parse and validate a run configuration file (JSON, schema_version 1).

    Unknown keys anywhere are rejected; every physical quantity carries an
    explicit key.  Syntax errors report the line and column.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc

    if not isinstance(raw, dict):
        raise ConfigError("config root must be an object")
    _reject_unknown(raw, _TOP_KEYS, "config")
    version = _need(raw, "schema_version", "config")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"schema_version: expected {SCHEMA_VERSION}, got {version!r}")

    net = _need(raw, "network", "config")
    _reject_unknown(net, _NETWORK_KEYS, "network")
    for key in _NETWORK_KEYS:
        _need(net, key, "network")

    sweep = _need(raw, "sweep", "config")
    _reject_unknown(sweep, {"N"}, "sweep")
    n_values = _need(sweep, "N", "sweep")
    if not isinstance(n_values, list) or not n_values:
        raise ConfigError("sweep.N must be a non-empty list of integers")

    variants = _model_variants(_need(raw, "model", "config"))
    replications = _need(raw, "replications", "config")
    master_seed = _need(raw, "master_seed", "config")
    if not isinstance(replications, int) or replications < 1:
        raise ConfigError("replications must be a positive integer")
    if not isinstance(master_seed, int) or master_seed < 0:
        raise ConfigError("master_seed must be a non-negative integer")

    try:
        base = NetworkConfig(
            rho_p=float(net["rho_p"]),
            alpha=float(net["alpha"]),
            n_branches=int(n_values[0]),
            c=float(net["c"]),
            r_t=float(net["r_T"]),
            model=variants[0],
        )
    except ValueError as exc:
        raise ConfigError(f"network: {exc}") from exc
    return montecarlo.ExperimentSpec(
        base=base,
        n_values=tuple(int(n) for n in n_values),
        replications=replications,
        master_seed=master_seed,
        variants=tuple(variants),
    )


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def report_to_csv(report: montecarlo.ExperimentReport) -> str:
    rows = [CSV_COLUMNS]
    for p in report.points:
        cfg = p.config
        rate = p.rate
        rows.append(
            ",".join(
                [
                    cfg.model.name,
                    str(cfg.n_branches),
                    _fmt(cfg.c),
                    _fmt(cfg.alpha),
                    _fmt(cfg.rho_p),
                    cfg.model.params_label(),
                    _fmt(rate.mean if rate else None),
                    _fmt(rate.std if rate else None),
                    _fmt(rate.sem if rate else None),
                    _fmt(p.asymptote_rate),
                    _fmt(p.rel_gap),
                    _fmt(p.empirical_density),
                    _fmt(p.predicted_density),
                    str(report.master_seed),
                ]
            )
        )
    return "\n".join(rows) + "\n"


def cmd_simulate(args) -> int:
    try:
        spec = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        spec = replace(spec, master_seed=args.seed)
    if args.replications is not None:
        spec = replace(spec, replications=args.replications)

    report = montecarlo.run_experiment(spec, workers=args.threads)
    csv_text = report_to_csv(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text)
        print(f"wrote {len(report.points)} rows to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(csv_text)
    failed = sum(p.failed for p in report.points)
    print(
        f"{len(report.points)} points x {report.replications} replications "
        f"in {report.wall_time_s:.1f}s (seed {report.master_seed}, "
        f"version {report.code_version}, {failed} failed points)",
        file=sys.stderr,
    )
    return 0


def cmd_asymptote(args) -> int:
    params = AsymptoticParams(rho_p=args.rho_p, c=args.c, alpha=args.alpha, nu=args.nu)
    if params.c * params.nu <= 1.0:
        print(
            f"warning: c * nu = {params.c * params.nu:.4g} <= 1, no SIR limit exists",
            file=sys.stderr,
        )
    try:
        sol = asymptotics.solve_beta_fixed_point(params)
        oracle = asymptotics.fixed_point_oracle(params)
    except NoBracket as exc:
        print(f"no solution: {exc}", file=sys.stderr)
        print(
            f"parameters: rho_p={args.rho_p} nu={args.nu} c={args.c} alpha={args.alpha}",
            file=sys.stderr,
        )
        return 3
    large_c = asymptotics.beta_large_c(params.rho, params.alpha)

    def rel(a, b):
        return abs(a - b) / b

    print(f"beta (fixed point)       {sol.beta:.9g}")
    print(f"beta (quadrature oracle) {oracle:.9g}")
    print(f"beta (large-c formula)   {large_c:.9g}")
    print(f"fixed-point residual     {sol.residual:.3g}")
    print(f"rel diff fp vs oracle    {rel(sol.beta, oracle):.3g}")
    print(f"rel diff fp vs large-c   {rel(sol.beta, large_c):.3g}")
    print(f"rel diff oracle/large-c  {rel(oracle, large_c):.3g}")
    if args.n_branches is not None and args.r_t is not None:
        rate_fp = sol.rate(args.n_branches, args.r_t)
        rate_lc = asymptotics.rate_approx(args.n_branches, params.rho, params.alpha, args.r_t)
        print(f"rate at N={args.n_branches}, r_T={args.r_t:.9g}: "
              f"fixed point {rate_fp:.9g}, large-c {rate_lc:.9g} bits/symbol")
    if args.rho_c is not None and args.n_branches is not None:
        kappa_star = asymptotics.optimal_reuse(
            args.alpha, args.n_branches, args.rho_p, args.rho_c
        )
        print(f"optimal reuse kappa*     {kappa_star:.9g}")
    return 0


def cmd_density(args) -> int:
    try:
        model = ModelSpec(
            name=args.model,
            h=args.h,
            rho_b=args.rho_b,
            rho_c=args.rho_c,
            kappa=args.kappa,
        )
        config = NetworkConfig(
            rho_p=args.rho_p,
            alpha=args.alpha,
            n_branches=args.n_branches,
            c=args.c,
            r_t=args.r_t if args.r_t else math.sqrt(1.0 / (math.pi * args.rho_p)),
            model=model,
        )
    except ValueError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 2
    predicted = config.predicted_density()
    simulated = montecarlo.density_estimate(config, args.replications, args.seed)
    nu = config.nu_expected
    n = config.n_nodes
    area = math.pi * config.radius ** 2
    sigma = math.sqrt(n * nu * (1.0 - nu) / args.replications) / area
    rel_err = abs(simulated - predicted) / predicted
    inside = abs(simulated - predicted) <= 3.0 * sigma
    print(f"predicted density  {predicted:.9g}")
    print(f"simulated density  {simulated:.9g}   ({args.replications} replications)")
    print(f"relative error     {rel_err:.3g}")
    print(f"3-sigma band       +/- {3.0 * sigma:.3g}   ({'inside' if inside else 'OUTSIDE'})")
    return 0 if inside else 1


def _parse_csv(path: str) -> list[dict]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln for ln in fh.read().split("\n") if ln.strip()]
    except OSError as exc:
        raise ConfigError(f"cannot read report: {exc}") from exc
    if not lines or lines[0] != CSV_COLUMNS:
        raise ConfigError(f"malformed report: expected header {CSV_COLUMNS!r}")
    cols = CSV_COLUMNS.split(",")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != len(cols):
            raise ConfigError(f"line {lineno}: expected {len(cols)} fields, got {len(parts)}")
        rows.append(dict(zip(cols, parts)))
    if not rows:
        raise ConfigError("report has no data rows")
    return rows


def cmd_plot(args) -> int:
    try:
        rows = _parse_csv(args.report)
    except ConfigError as exc:
        print(f"plot error: {exc}", file=sys.stderr)
        return 2
    series: dict[tuple, RateSeries] = {}
    skipped = 0
    for row in rows:
        if row["mean_rate"] == "":
            skipped += 1
            continue
        key = (row["model"], row["model_params"])
        s = series.setdefault(
            key,
            RateSeries(
                label=f"{row['model']} [{row['model_params']}]",
                n_values=[],
                mean=[],
                std=[],
                asymptote=[],
            ),
        )
        s.n_values.append(float(row["N"]))
        s.mean.append(float(row["mean_rate"]))
        s.std.append(float(row["std_rate"]) if row["std_rate"] else 0.0)
        s.asymptote.append(float(row["asymptote"]) if row["asymptote"] else float("nan"))
    if skipped:
        print(f"skipped {skipped} failed rows", file=sys.stderr)
    if not series:
        print("plot error: no plottable rows", file=sys.stderr)
        return 2
    svg = render_rate_chart(list(series.values()), title=args.title)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(svg)
    print(f"wrote {args.out}", file=sys.stderr)
    return 0


def cmd_reuse_opt(args) -> int:
    kappa_star = asymptotics.optimal_reuse(
        args.alpha, args.n_branches, args.rho_p, args.rho_c
    )
    print(f"optimal reuse kappa* {kappa_star:.9g}")
    nearest = max(1, round(kappa_star))
    print(f"nearest integer      {nearest}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmsenet",
        description="Monte Carlo and asymptotic rate analysis for MMSE-receiver networks",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a configured sweep, emit CSV")
    sim.add_argument("--config", required=True, help="JSON run configuration")
    sim.add_argument("--seed", type=int, default=None, help="override master_seed")
    sim.add_argument("--out", default=None, help="CSV output path (default stdout)")
    sim.add_argument("--replications", type=int, default=None, help="override replications")
    sim.add_argument("--threads", type=int, default=1, help="worker processes")
    sim.add_argument("--format", choices=["csv"], default="csv")
    sim.set_defaults(func=cmd_simulate)

    asym = sub.add_parser("asymptote", help="evaluate the SIR limit three ways")
    asym.add_argument("--alpha", type=float, required=True)
    asym.add_argument("--rho-p", type=float, required=True, dest="rho_p")
    asym.add_argument("--nu", type=float, default=1.0, help="activation probability")
    asym.add_argument("--c", type=float, required=True, help="ratio n/N")
    asym.add_argument("--n-branches", type=int, default=None, dest="n_branches")
    asym.add_argument("--r-t", type=float, default=None, dest="r_t")
    asym.add_argument("--rho-c", type=float, default=None, dest="rho_c")
    asym.set_defaults(func=cmd_asymptote)

    dens = sub.add_parser("density", help="predicted vs simulated active density")
    dens.add_argument("--model", required=True, choices=MODEL_NAMES)
    dens.add_argument("--rho-p", type=float, required=True, dest="rho_p")
    dens.add_argument("--alpha", type=float, default=4.0)
    dens.add_argument("--c", type=float, required=True)
    dens.add_argument("--n-branches", type=int, required=True, dest="n_branches")
    dens.add_argument("--h", type=float, default=None)
    dens.add_argument("--rho-b", type=float, default=None, dest="rho_b")
    dens.add_argument("--rho-c", type=float, default=None, dest="rho_c")
    dens.add_argument("--kappa", type=int, default=None)
    dens.add_argument("--r-t", type=float, default=None, dest="r_t")
    dens.add_argument("--replications", type=int, default=200)
    dens.add_argument("--seed", type=int, default=0)
    dens.set_defaults(func=cmd_density)

    plot = sub.add_parser("plot", help="render a simulate CSV as SVG")
    plot.add_argument("--report", required=True, help="CSV from the simulate command")
    plot.add_argument("--out", required=True, help="SVG output path")
    plot.add_argument("--title", default="")
    plot.set_defaults(func=cmd_plot)

    reuse = sub.add_parser("reuse-opt", help="rate-optimal frequency reuse factor")
    reuse.add_argument("--alpha", type=float, required=True)
    reuse.add_argument("--n-branches", type=int, required=True, dest="n_branches")
    reuse.add_argument("--rho-p", type=float, required=True, dest="rho_p")
    reuse.add_argument("--rho-c", type=float, required=True, dest="rho_c")
    reuse.set_defaults(func=cmd_reuse_opt)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
