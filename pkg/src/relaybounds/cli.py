"""Command-line interface: bound evaluation, sweeps, verification.

Subcommands
  point     -- all requested full-duplex bounds for one channel (JSON out)
  sweep     -- CSV sweep over relay SNR or state power (optionally nu)
  verify    -- Monte Carlo construction checks + closed-form capacity meets
  dm        -- finite-alphabet bounds for a channel JSON document
  td-point  -- half-duplex bounds for one channel (JSON out)
  td-sweep  -- CSV sweep over the listening fraction nu

Configs are single JSON documents.  Power-like fields are accepted either
in dB (suffix ``_db``) or linear (no suffix); everything is converted to
linear at ingestion.  Exit codes: 0 success, 1 failed verification,
2 config error, 3 no feasible point.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import dm as dm_mod
from . import half_duplex, mc, optimize, special_cases
from .errors import (
    ConfigError,
    InvalidFactorization,
    NoFeasiblePoint,
    RelayBoundsError,
)
from .model import CodingParams, GaussianChannel, TdChannel, db_to_linear

_GAUSS_BOUNDS = {
    "inner_df": optimize.inner_df,
    "inner_pdf": optimize.inner_pdf,
    "outer": optimize.outer,
    "outer_degraded": optimize.outer_degraded,
    "cutset": optimize.cutset,
    "cutset_degraded": lambda ch, cfg: optimize.cutset(ch, cfg, degraded=True),
    "trivial_inner": optimize.trivial_inner,
}
_TD_BOUNDS = {
    "td_inner": half_duplex.td_inner,
    "td_outer": half_duplex.td_outer,
}


def _field(cfg: dict, name: str, default=None):
    """Fetch a power-like field, accepting linear or dB forms."""
    if name in cfg and f"{name}_db" in cfg:
        raise ConfigError(f"give either {name} or {name}_db, not both")
    if name in cfg:
        value = cfg[name]
    elif f"{name}_db" in cfg:
        raw = cfg[f"{name}_db"]
        if not isinstance(raw, (int, float)) or not math.isfinite(raw):
            raise ConfigError(f"{name}_db must be a finite number, got {raw!r}")
        value = db_to_linear(float(raw))
    else:
        if default is None:
            raise ConfigError(f"missing channel field {name} (or {name}_db)")
        return default
    if not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{name} must be a finite number, got {value!r}")
    return float(value)


def _gaussian_channel(cfg: dict) -> GaussianChannel:
    try:
        return GaussianChannel(p1=_field(cfg, "p1"), p2=_field(cfg, "p2"),
                               q=_field(cfg, "q"), n2=_field(cfg, "n2"),
                               n3=_field(cfg, "n3"))
    except RelayBoundsError as exc:
        raise ConfigError(str(exc)) from exc


def _td_channel(cfg: dict) -> TdChannel:
    nu = cfg.get("nu")
    if not isinstance(nu, (int, float)) or not 0.0 <= float(nu) <= 1.0:
        raise ConfigError(f"nu must be a number in [0, 1], got {nu!r}")
    try:
        return TdChannel(nu=float(nu),
                         p1_rx=_field(cfg, "p1_rx"), p1_tx=_field(cfg, "p1_tx"),
                         p2=_field(cfg, "p2"),
                         q_rx=_field(cfg, "q_rx"), q_tx=_field(cfg, "q_tx"),
                         n2=_field(cfg, "n2"), n3=_field(cfg, "n3"))
    except RelayBoundsError as exc:
        raise ConfigError(str(exc)) from exc


def _optimizer_config(cfg: dict, args) -> optimize.OptimizerConfig:
    kw = {}
    grid = args.grid if args.grid is not None else cfg.get("grid")
    if grid is not None:
        kw["grid_points_per_dim"] = int(grid)
    tol = args.tol if args.tol is not None else cfg.get("tol")
    if tol is not None:
        kw["tol"] = float(tol)
    try:
        return optimize.OptimizerConfig(**kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _bound_names(cfg: dict, args, table) -> list:
    names = args.bounds.split(",") if args.bounds else cfg.get("bounds", [])
    names = [n.strip() for n in names if n.strip()]
    if not names:
        raise ConfigError("no bounds requested (empty 'bounds' list)")
    for n in names:
        if n not in table:
            raise ConfigError(f"unknown bound {n!r}; choose from {sorted(table)}")
    return names


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


# ---------------------------------------------------------------------------
# point evaluation
# ---------------------------------------------------------------------------

def cmd_point(cfg: dict, args) -> int:
    ch = _gaussian_channel(cfg)
    names = _bound_names(cfg, args, _GAUSS_BOUNDS)
    ocfg = _optimizer_config(cfg, args)
    points = [_GAUSS_BOUNDS[n](ch, ocfg) for n in names]
    doc = {"channel": {"p1": ch.p1, "p2": ch.p2, "q": ch.q,
                       "n2": ch.n2, "n3": ch.n3, "degraded": ch.is_degraded},
           "bounds": [p.as_dict() for p in points]}
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def cmd_td_point(cfg: dict, args) -> int:
    td = _td_channel(cfg)
    names = _bound_names(cfg, args, _TD_BOUNDS)
    ocfg = _optimizer_config(cfg, args)
    points = [_TD_BOUNDS[n](td, ocfg) for n in names]
    doc = {"channel": {"nu": td.nu, "p1_rx": td.p1_rx, "p1_tx": td.p1_tx,
                       "p2": td.p2, "q_rx": td.q_rx, "q_tx": td.q_tx,
                       "n2": td.n2, "n3": td.n3},
           "bounds": [p.as_dict() for p in points]}
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def _axis_values(sweep: dict) -> list:
    if "values" in sweep:
        vals = [float(v) for v in sweep["values"]]
    else:
        try:
            start, stop, step = (float(sweep["start"]), float(sweep["stop"]),
                                 float(sweep["step"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"sweep needs start/stop/step or values: {exc}") from exc
        if step <= 0 or stop < start:
            raise ConfigError("sweep needs step > 0 and stop >= start")
        n = int(round((stop - start) / step))
        vals = [start + k * step for k in range(n + 1)]
    if not vals:
        raise ConfigError("empty sweep axis")
    return vals


_ARGMAX_PARAMS = {
    "inner_df": ("theta", "rho12", "rho2s"),
    "inner_pdf": ("gamma", "theta", "rho12", "rho2s", "alpha"),
    "outer": ("rho12", "rho2s"),
    "outer_degraded": ("rho12", "rho2s"),
    "cutset": ("beta",),
    "cutset_degraded": ("beta",),
    "trivial_inner": ("beta",),
    "td_inner": ("theta", "rho12", "rho2s", "alpha"),
    "td_outer": ("rho12", "rho2s"),
}


def _sweep_row(task):
    """One sweep row; module-level so process pools can pickle it."""
    kind, base_cfg, axis, value, names, ocfg_kw, want_argmax = task
    ocfg = optimize.OptimizerConfig(**ocfg_kw)
    cfg = dict(base_cfg)
    if axis == "snr_relay_db":
        cfg.pop("n2", None)
        cfg.pop("n2_db", None)
        cfg["n2"] = 1.0  # placeholder; the axis value sets it below
        ch = _gaussian_channel(cfg)
        ch = GaussianChannel(ch.p1, ch.p2, ch.q, ch.p1 / db_to_linear(value), ch.n3)
    elif axis == "q_db":
        cfg.pop("q", None)
        cfg.pop("q_db", None)
        cfg["q"] = db_to_linear(value)
        ch = _gaussian_channel(cfg)
    elif axis == "nu":
        cfg["nu"] = value
        ch = _td_channel(cfg)
    else:
        raise ConfigError(f"unknown sweep axis {axis!r}")
    table = _TD_BOUNDS if kind == "td" else _GAUSS_BOUNDS
    cells, argmax_cells = [], []
    for n in names:
        point = table[n](ch, ocfg)
        cells.append(point.rate)
        if want_argmax:
            argmax_cells.extend(point.argmax[k] for k in _ARGMAX_PARAMS[n])
    return cells, argmax_cells


def _run_sweep(kind: str, cfg: dict, args) -> int:
    sweep = cfg.get("sweep")
    if not isinstance(sweep, dict) or "axis" not in sweep:
        raise ConfigError("config needs a 'sweep' object with an 'axis'")
    axis = sweep["axis"]
    allowed = ("nu",) if kind == "td" else ("snr_relay_db", "q_db", "nu")
    if axis not in allowed:
        raise ConfigError(f"axis {axis!r} not in {allowed}")
    if axis == "nu":
        kind = "td"
    table = _TD_BOUNDS if kind == "td" else _GAUSS_BOUNDS
    names = _bound_names(cfg, args, table)
    values = _axis_values(sweep)
    want_argmax = bool(args.argmax or cfg.get("argmax"))
    ocfg = _optimizer_config(cfg, args)
    ocfg_kw = {"grid_points_per_dim": ocfg.grid_points_per_dim, "tol": ocfg.tol}

    tasks = [(kind, cfg, axis, v, names, ocfg_kw, want_argmax) for v in values]
    workers = int(os.environ.get("RSB_THREADS", "1") or "1")
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_row, tasks))
    else:
        rows = [_sweep_row(t) for t in tasks]

    header = [axis] + list(names)
    if want_argmax:
        header += [f"{n}_{k}" for n in names for k in _ARGMAX_PARAMS[n]]
    lines = [",".join(header)]
    for v, (cells, argmax_cells) in zip(values, rows):
        lines.append(",".join([_fmt(v)] + [_fmt(c) for c in cells]
                              + [_fmt(c) for c in argmax_cells]))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_sweep(cfg: dict, args) -> int:
    return _run_sweep("gauss", cfg, args)


def cmd_td_sweep(cfg: dict, args) -> int:
    return _run_sweep("td", cfg, args)


# ---------------------------------------------------------------------------
# verification suite
# ---------------------------------------------------------------------------

def cmd_verify(cfg: dict, args) -> int:
    seed = args.seed if args.seed is not None else cfg.get("seed")
    if seed is None:
        raise ConfigError("verification needs a 'seed'")
    seed = int(seed)
    n = int(cfg.get("n", 200000))
    tol = float(args.tol if args.tol is not None else cfg.get("tol", 0.02))

    ch = _gaussian_channel(cfg) if "p1" in cfg or "p1_db" in cfg \
        else GaussianChannel(10.0, 10.0, 10.0, 1.0, 1.0)
    p_df = CodingParams(gamma=0.0, theta=0.5, rho12=0.5, rho2s=-0.5, alpha=0.0)
    p2p = p_df.theta * ch.p2 * (1.0 - p_df.rho2s ** 2)
    p_pdf = CodingParams(gamma=0.4, theta=0.5, rho12=0.5, rho2s=-0.5,
                         alpha=p2p / (p2p + ch.n3))

    reports = [mc.verify_terms(ch, p_df, "df", n, seed, tol),
               mc.verify_terms(ch, p_pdf, "pdf", n, seed, tol)]

    # closed-form capacity regimes, checked against the maximized bounds
    capacity_checks = []
    deg = GaussianChannel(10.0, 10.0, 10.0, 1.0, 100.0)
    thr = special_cases.obs1_threshold(deg)
    near = GaussianChannel(deg.p1, deg.p2, deg.q, 1.01 * thr, deg.n3)
    cap = special_cases.obs1_capacity(near)
    lo = optimize.inner_df(near).rate
    up = optimize.outer_degraded(near).rate
    capacity_checks.append({"name": "noisy_relay_regime",
                            "capacity": cap, "lower": lo, "upper": up,
                            "pass": abs(lo - cap) <= 2e-3 and abs(up - cap) <= 2e-3})
    silent = GaussianChannel(10.0, 0.0, 10.0, 1.0, 1.0)
    cap = special_cases.extreme_p2_zero(silent)
    lo = optimize.inner_pdf(silent).rate
    up = optimize.outer(silent).rate
    capacity_checks.append({"name": "silent_relay",
                            "capacity": cap, "lower": lo, "upper": up,
                            "pass": abs(lo - cap) <= 2e-3 and abs(up - cap) <= 2e-3})

    ok = all(r.passed for r in reports) and all(c["pass"] for c in capacity_checks)
    doc = {"passed": ok,
           "construction": [json.loads(r.to_json()) for r in reports],
           "capacity_regimes": capacity_checks}
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# finite alphabets
# ---------------------------------------------------------------------------

def cmd_dm(cfg: dict, args) -> int:
    path = cfg.get("channel_file")
    if not path:
        raise ConfigError("config needs 'channel_file'")
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read channel file {path}: {exc}") from exc
    try:
        ch = dm_mod.load_dm_channel(doc)
    except InvalidFactorization as exc:
        raise ConfigError(str(exc)) from exc
    card = tuple(int(c) for c in cfg.get("card", (2, 2)))
    restarts = int(cfg.get("restarts", 20))
    seed = int(args.seed if args.seed is not None else cfg.get("seed", 0))
    points = [dm_mod.dm_inner(ch, card=card, restarts=restarts, seed=seed),
              dm_mod.dm_outer(ch, restarts=restarts, seed=seed),
              dm_mod.dm_cutset(ch, restarts=restarts, seed=seed)]
    doc = {"sizes": list(ch.sizes), "bounds": [p.as_dict() for p in points]}
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="relaybounds",
                                 description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("point", "sweep", "verify", "dm", "td-point", "td-sweep"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to a JSON config")
        p.add_argument("--out", default=None, help="write output here instead of stdout")
        p.add_argument("--bounds", default=None,
                       help="comma-separated bound kinds (overrides config)")
        p.add_argument("--argmax", action="store_true",
                       help="emit maximizing parameters as extra CSV columns")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--grid", type=int, default=None,
                       help="grid points per dimension")
        p.add_argument("--tol", type=float, default=None)
    return ap


_COMMANDS = {
    "point": cmd_point,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "dm": cmd_dm,
    "td-point": cmd_td_point,
    "td-sweep": cmd_td_sweep,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if not isinstance(cfg, dict):
        print("config error: top-level JSON must be an object", file=sys.stderr)
        return 2
    try:
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NoFeasiblePoint as exc:
        print(f"no feasible point: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
