"""Command-line front end: config ingestion, dispatch, CSV/JSON reports.

Configuration comes from a flat ``key = value`` file (namespaced keys,
``#`` comments) with command-line flags taking precedence.  All numeric
output is printed with 12 significant digits so reruns are byte-identical
and reports diff cleanly.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError, GainslabError, UnphysicalRootError
from .medium import GainMedium, PumpScheme, dimensionless_state
from .oracle import integrate_phi1
from .perturbation import resonance_first_order, universal_bounds
from .solver import SolveConfig, SpectralSingularity, critical_nu, solve_mode
from .wkb import WkbContext, validity_metric, wkb_phi1_endpoint

COMMANDS = (
    "solve", "enumerate", "scan-nu", "critical-nu", "bounds",
    "table1", "fig2-data", "fig3-data", "validate",
)

TABLE1_MODES = (1335, 1350, 1360, 1380)
TABLE1_NUS = (0.0, 0.1, 0.2, 0.3, 0.5)

VALIDITY_WARN_THRESHOLD = 1.0e-3

MEDIUM_DEFAULTS = {
    "medium.n0": 3.4,
    "medium.lambda0": 1500.0,
    "medium.gamma_hat": 0.02,
    "medium.alpha0": 200.0,
    "medium.L": 300.0,
    "medium.nu": 0.1,
    "medium.g_star": 50.0,
    "medium.pump": "double",
}
SOLVER_DEFAULTS = {
    "solver.newton_tol": 1.0e-12,
    "solver.max_iter": 60,
    "solver.fd_step": 1.0e-7,
    "solver.bisect_tol": 1.0e-8,
}
RUN_DEFAULTS = {
    "run.command": None,
    "run.m": None,
    "run.nu_grid": None,
    "run.omega_hat": 1.0,
    "run.format": "csv",
    "run.out": None,
    "run.plot": None,
}

# canonical wire units; a mismatching suffix in a value is rejected, not converted
UNIT_SUFFIXES = {
    "medium.lambda0": ("nm", {"nm"}),
    "medium.L": ("um", {"um", "µm"}),
    "medium.alpha0": ("cm^-1", {"cm^-1", "1/cm", "cm-1"}),
    "medium.g_star": ("cm^-1", {"cm^-1", "1/cm", "cm-1"}),
}

INT_KEYS = {"solver.max_iter"}
STR_KEYS = {"medium.pump", "run.command", "run.m", "run.nu_grid",
            "run.format", "run.out", "run.plot"}
ALL_KEYS = set(MEDIUM_DEFAULTS) | set(SOLVER_DEFAULTS) | set(RUN_DEFAULTS)


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key not in ALL_KEYS:
        raise ConfigError(f"unknown config key: {key}")
    if key in UNIT_SUFFIXES:
        parts = raw.split()
        if len(parts) == 2:
            canonical, accepted = UNIT_SUFFIXES[key]
            if parts[1] not in accepted:
                raise ConfigError(f"{key} expects {canonical}, got '{parts[1]}'")
            raw = parts[0]
        elif len(parts) != 1:
            raise ConfigError(f"cannot parse value for {key}: {raw!r}")
    if key in STR_KEYS:
        return raw
    try:
        return int(raw) if key in INT_KEYS else float(raw)
    except ValueError as exc:
        raise ConfigError(f"bad numeric value for {key}: {raw!r}") from exc


def _read_config_file(path: str) -> dict:
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        values[key] = _parse_value(key, raw)
    return values


@dataclass(frozen=True)
class RunConfig:
    medium: GainMedium
    solve: SolveConfig
    command: str
    m_spec: str | None
    nu_grid: tuple[float, ...] | None
    omega_hat: float
    fmt: str
    out: str | None
    plot: str | None
    timing: bool
    pump_explicit: bool
    echo: dict


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are configuration errors (exit 1)
        raise ConfigError(message)


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("medium")
    g.add_argument("--n0", metavar="X")
    g.add_argument("--lambda0", metavar="NM")
    g.add_argument("--gamma-hat", dest="gamma_hat", metavar="X")
    g.add_argument("--alpha0", metavar="CM^-1")
    g.add_argument("--L", metavar="UM")
    g.add_argument("--nu", metavar="X")
    g.add_argument("--g-star", dest="g_star", metavar="CM^-1")
    g.add_argument("--pump", choices=["uniform", "single", "double"])
    s = common.add_argument_group("solver")
    s.add_argument("--newton-tol", dest="newton_tol", metavar="X")
    s.add_argument("--max-iter", dest="max_iter", metavar="N")
    s.add_argument("--fd-step", dest="fd_step", metavar="X")
    s.add_argument("--bisect-tol", dest="bisect_tol", metavar="X")
    o = common.add_argument_group("input/output")
    o.add_argument("--config", metavar="PATH", help="flat key = value config file")
    o.add_argument("--format", choices=["csv", "json"])
    o.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    o.add_argument("--plot", nargs="?", const="", metavar="PATH",
                   help="also render the report as a PNG (default: next to --out)")
    o.add_argument("--timing", action="store_true", help="include wall time in JSON meta")

    parser = _Parser(prog="gainslab",
                     description="Zero-width lasing resonances of pumped slab media")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, extra in (
        ("solve", ("m",)),
        ("enumerate", ("m",)),
        ("scan-nu", ("m", "nu_grid")),
        ("critical-nu", ("m",)),
        ("bounds", ()),
        ("table1", ()),
        ("fig2-data", ("nu_grid",)),
        ("fig3-data", ("m",)),
        ("validate", ("omega_hat",)),
    ):
        p = sub.add_parser(name, parents=[common])
        if "m" in extra:
            p.add_argument("--m", metavar="M|LO..HI",
                           help="mode number or inclusive range (default: resonance mode)")
        if "nu_grid" in extra:
            p.add_argument("--nu-grid", dest="nu_grid", metavar="V1,V2,...",
                           help="comma-separated decay constants")
        if "omega_hat" in extra:
            p.add_argument("--omega-hat", dest="omega_hat", metavar="X")
    return parser


_FLAG_TO_KEY = {
    "n0": "medium.n0", "lambda0": "medium.lambda0", "gamma_hat": "medium.gamma_hat",
    "alpha0": "medium.alpha0", "L": "medium.L", "nu": "medium.nu",
    "g_star": "medium.g_star", "pump": "medium.pump",
    "newton_tol": "solver.newton_tol", "max_iter": "solver.max_iter",
    "fd_step": "solver.fd_step", "bisect_tol": "solver.bisect_tol",
    "m": "run.m", "nu_grid": "run.nu_grid", "omega_hat": "run.omega_hat",
    "format": "run.format", "out": "run.out", "plot": "run.plot",
}


def _merge_config(args: argparse.Namespace) -> RunConfig:
    merged = {**MEDIUM_DEFAULTS, **SOLVER_DEFAULTS, **RUN_DEFAULTS}
    pump_explicit = False
    if args.config:
        overrides = _read_config_file(args.config)
        pump_explicit = "medium.pump" in overrides
        merged.update(overrides)
    for flag, key in _FLAG_TO_KEY.items():
        value = getattr(args, flag, None)
        if value is not None:
            merged[key] = _parse_value(key, str(value))
            if key == "medium.pump":
                pump_explicit = True
    merged["run.command"] = args.command

    try:
        medium = GainMedium(
            n0=merged["medium.n0"],
            lambda0=merged["medium.lambda0"],
            gamma_hat=merged["medium.gamma_hat"],
            alpha0=merged["medium.alpha0"],
            L=merged["medium.L"],
            nu=merged["medium.nu"],
            g_star=merged["medium.g_star"],
            pump=PumpScheme(merged["medium.pump"]),
        )
        solve_cfg = SolveConfig(
            newton_tol=merged["solver.newton_tol"],
            max_iter=int(merged["solver.max_iter"]),
            fd_step=merged["solver.fd_step"],
            bisect_tol=merged["solver.bisect_tol"],
        )
    except (ValueError, GainslabError) as exc:
        raise ConfigError(str(exc)) from exc

    nu_grid = None
    if merged["run.nu_grid"]:
        try:
            nu_grid = tuple(float(tok) for tok in
                            str(merged["run.nu_grid"]).replace(",", " ").split())
        except ValueError as exc:
            raise ConfigError(f"bad nu grid: {merged['run.nu_grid']!r}") from exc
        if any(b <= a for a, b in zip(nu_grid, nu_grid[1:])):
            raise ConfigError("nu grid must be strictly increasing")

    plot = merged["run.plot"]
    if plot == "":
        if not merged["run.out"]:
            raise ConfigError("--plot without a path requires --out to derive one")
        plot = str(Path(merged["run.out"]).with_suffix(".png"))

    echo = {k: merged[k] for k in sorted(merged) if merged[k] is not None}
    if plot:
        echo["run.plot"] = plot
    return RunConfig(
        medium=medium,
        solve=solve_cfg,
        command=args.command,
        m_spec=merged["run.m"],
        nu_grid=nu_grid,
        omega_hat=float(merged["run.omega_hat"]),
        fmt=merged["run.format"],
        out=merged["run.out"],
        plot=plot,
        timing=bool(getattr(args, "timing", False)),
        pump_explicit=pump_explicit,
        echo=echo,
    )


def _resonance_mode(medium: GainMedium) -> int:
    return round(2.0 * medium.n0 * medium.L_nm / medium.lambda0)


def _mode_range(cfg: RunConfig, default_halfwidth: int | None = None) -> tuple[int, int]:
    if cfg.m_spec is None:
        m0 = _resonance_mode(cfg.medium)
        if default_halfwidth is None:
            return m0, m0
        return m0 - default_halfwidth, m0 + default_halfwidth
    spec = cfg.m_spec
    try:
        if ".." in spec:
            lo, hi = spec.split("..", 1)
            return int(lo), int(hi)
        m = int(spec)
        return m, m
    except ValueError as exc:
        raise ConfigError(f"bad mode spec {spec!r}; expected M or LO..HI") from exc


@dataclass
class RunResult:
    columns: list
    rows: list
    failures: list
    numerical_failure: bool = False
    wall_time_s: float = 0.0


def _certified_row(medium: GainMedium, sing: SpectralSingularity) -> dict:
    omega_hat = medium.lambda0 / sing.wavelength
    sol = integrate_phi1(medium, omega_hat, g_star=sing.g_star)
    F = 1j * sing.K * sol.phi1_at_1 - sol.dphi1_at_1
    return {
        "m": sing.m,
        "nu": medium.nu,
        "K": sing.K,
        "lambda_nm": sing.wavelength,
        "g_star_cm": sing.g_star,
        "residual": sing.residual,
        "ode_residual": abs(F) / (sing.K * abs(sol.phi1_at_1)),
        "method": sing.method.value,
    }


_REPORT_COLUMNS = ["m", "nu", "K", "lambda_nm", "g_star_cm",
                   "residual", "ode_residual", "method"]


def _run_solve(cfg: RunConfig) -> RunResult:
    m, _ = _mode_range(cfg)
    res = RunResult(columns=list(_REPORT_COLUMNS), rows=[], failures=[])
    _solve_into(res, cfg.medium, m, cfg.solve)
    return res


def _solve_into(res: RunResult, medium: GainMedium, m: int, solve_cfg: SolveConfig) -> None:
    try:
        res.rows.append(_certified_row(medium, solve_mode(medium, m, solve_cfg)))
    except UnphysicalRootError as exc:
        res.failures.append({"m": m, "nu": medium.nu, "reason": str(exc),
                             "kind": "unphysical"})
    except GainslabError as exc:
        res.failures.append({"m": m, "nu": medium.nu, "reason": str(exc),
                             "kind": "numerical"})
        res.numerical_failure = True


def _run_enumerate(cfg: RunConfig) -> RunResult:
    m_lo, m_hi = _mode_range(cfg, default_halfwidth=40)
    res = RunResult(columns=list(_REPORT_COLUMNS), rows=[], failures=[])
    for m in range(m_lo, m_hi + 1):
        _solve_into(res, cfg.medium, m, cfg.solve)
    return res


def _run_scan_nu(cfg: RunConfig) -> RunResult:
    if not cfg.nu_grid:
        raise ConfigError("scan-nu requires --nu-grid")
    m, _ = _mode_range(cfg)
    res = RunResult(columns=list(_REPORT_COLUMNS), rows=[], failures=[])
    for nu in cfg.nu_grid:
        _solve_into(res, replace(cfg.medium, nu=nu), m, cfg.solve)
    return res


def _run_critical_nu(cfg: RunConfig) -> RunResult:
    m, _ = _mode_range(cfg)
    res = RunResult(columns=["m", "nu_critical"], rows=[], failures=[])
    try:
        res.rows.append({"m": m, "nu_critical": critical_nu(cfg.medium, m, cfg.solve)})
    except GainslabError as exc:
        res.failures.append({"m": m, "nu": cfg.medium.nu, "reason": str(exc),
                             "kind": "numerical"})
        res.numerical_failure = True
    return res


def _run_bounds(cfg: RunConfig) -> RunResult:
    # both pump geometries by default; an explicit --pump narrows the report
    pumps = [PumpScheme.DOUBLE, PumpScheme.SINGLE]
    if cfg.pump_explicit and cfg.medium.pump is not PumpScheme.UNIFORM:
        pumps = [cfg.medium.pump]
    res = RunResult(columns=["pump", "nu_weak", "damping_weak", "nu_max", "damping_max"],
                    rows=[], failures=[])
    for pump in pumps:
        b = universal_bounds(pump, cfg.medium)
        res.rows.append({
            "pump": pump.value,
            "nu_weak": b.nu_weak,
            "damping_weak": b.damping_weak,
            "nu_max": b.nu_max,
            "damping_max": b.damping_max,
        })
    return res


def _run_table1(cfg: RunConfig) -> RunResult:
    res = RunResult(columns=["m", "nu", "lambda_nm", "g_star_cm"], rows=[], failures=[])
    for m in TABLE1_MODES:
        for nu in TABLE1_NUS:
            medium = replace(cfg.medium, nu=nu)
            try:
                sing = solve_mode(medium, m, cfg.solve)
                res.rows.append({"m": m, "nu": nu, "lambda_nm": sing.wavelength,
                                 "g_star_cm": sing.g_star})
            except GainslabError as exc:
                res.failures.append({"m": m, "nu": nu, "reason": str(exc),
                                     "kind": "numerical"})
                res.numerical_failure = True
    return res


def _run_fig2(cfg: RunConfig) -> RunResult:
    grid = cfg.nu_grid or tuple(np.linspace(0.0, 3.2, 161))
    res = RunResult(columns=["nu", "g_star_double_cm", "g_star_single_cm"],
                    rows=[], failures=[])
    for nu in grid:
        row = {"nu": nu}
        for pump, col in ((PumpScheme.DOUBLE, "g_star_double_cm"),
                          (PumpScheme.SINGLE, "g_star_single_cm")):
            _, _, g = resonance_first_order(replace(cfg.medium, pump=pump, nu=nu,
                                                    g_star=0.0))
            row[col] = g
        res.rows.append(row)
    return res


def _run_fig3(cfg: RunConfig) -> RunResult:
    m_lo, m_hi = _mode_range(cfg, default_halfwidth=40)
    res = RunResult(columns=["m", "lambda_nm", "g_star_cm"], rows=[], failures=[])
    for m in range(m_lo, m_hi + 1):
        try:
            sing = solve_mode(cfg.medium, m, cfg.solve)
            res.rows.append({"m": m, "lambda_nm": sing.wavelength,
                             "g_star_cm": sing.g_star})
        except UnphysicalRootError as exc:
            res.failures.append({"m": m, "nu": cfg.medium.nu, "reason": str(exc),
                                 "kind": "unphysical"})
        except GainslabError as exc:
            res.failures.append({"m": m, "nu": cfg.medium.nu, "reason": str(exc),
                                 "kind": "numerical"})
            res.numerical_failure = True
    return res


def _run_validate(cfg: RunConfig) -> RunResult:
    medium = cfg.medium
    state = dimensionless_state(medium, cfg.omega_hat)
    ctx = WkbContext.from_state(state, medium.profile)
    metric = validity_metric(ctx)
    phi1_wkb, _ = wkb_phi1_endpoint(ctx)
    sol = integrate_phi1(medium, cfg.omega_hat)
    F = 1j * state.K * sol.phi1_at_1 - sol.dphi1_at_1
    res = RunResult(
        columns=["omega_hat", "K", "validity_metric", "validity_warning",
                 "wkb_ode_rel_diff", "ode_est_error", "wronskian_defect",
                 "jost_ode_abs"],
        rows=[{
            "omega_hat": cfg.omega_hat,
            "K": state.K,
            "validity_metric": metric,
            "validity_warning": metric > VALIDITY_WARN_THRESHOLD,
            "wkb_ode_rel_diff": abs(phi1_wkb - sol.phi1_at_1) / abs(sol.phi1_at_1),
            "ode_est_error": sol.est_error,
            "wronskian_defect": sol.wronskian_max_defect,
            "jost_ode_abs": abs(F),
        }],
        failures=[],
    )
    if metric > VALIDITY_WARN_THRESHOLD:
        print(f"warning: semiclassical validity metric {metric:.3e} exceeds "
              f"{VALIDITY_WARN_THRESHOLD:g}; results may be unreliable", file=sys.stderr)
    return res


_HANDLERS = {
    "solve": _run_solve,
    "enumerate": _run_enumerate,
    "scan-nu": _run_scan_nu,
    "critical-nu": _run_critical_nu,
    "bounds": _run_bounds,
    "table1": _run_table1,
    "fig2-data": _run_fig2,
    "fig3-data": _run_fig3,
    "validate": _run_validate,
}


def _fmt_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    if value is None:
        return ""
    return str(value)


def _round12(value):
    if isinstance(value, float) and math.isfinite(value):
        return float(f"{value:.12g}")
    return value


def render_csv(columns, rows) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt_cell(row.get(col)) for col in columns))
    return "\n".join(lines) + "\n"


def render_json(cfg: RunConfig, result: RunResult) -> str:
    payload = {
        "config": {k: _round12(v) for k, v in cfg.echo.items()},
        "results": [{k: _round12(v) for k, v in row.items()} for row in result.rows],
        "failures": result.failures,
        "meta": {
            "command": cfg.command,
            "rows": len(result.rows),
            "unphysical_failures": sum(f["kind"] == "unphysical" for f in result.failures),
            "numerical_failures": sum(f["kind"] == "numerical" for f in result.failures),
        },
    }
    if cfg.timing:
        payload["meta"]["wall_time_s"] = result.wall_time_s
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def run(cfg: RunConfig) -> RunResult:
    """Execute the configured command and return its report."""
    started = time.perf_counter()
    result = _HANDLERS[cfg.command](cfg)
    result.wall_time_s = time.perf_counter() - started
    return result


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        cfg = _merge_config(args)
        result = run(cfg)
        text = (render_json(cfg, result) if cfg.fmt == "json"
                else render_csv(result.columns, result.rows))
        if cfg.out:
            Path(cfg.out).write_text(text)
        else:
            sys.stdout.write(text)
        if cfg.fmt == "csv":
            for failure in result.failures:
                print(f"# skipped m={failure['m']} nu={_fmt_cell(failure['nu'])}: "
                      f"{failure['reason']}", file=sys.stderr)
        if cfg.plot:
            from .plotting import render_figure
            render_figure(cfg, result)
        return 2 if result.numerical_failure else 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
