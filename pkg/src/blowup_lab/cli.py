"""Config-driven command-line front end.

Commands: check, tstar, simulate, verify, chemin, sweep.  Configurations are
sectioned key=value text ([model], [profile], [grid], [solver], [output],
[sweep]); reports are deterministic JSON plus plot-ready CSV, written
atomically (write-then-rename).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from typing import Optional

import numpy as np

from . import __version__
from .blowup_time import build_bounds, find_tstar
from .criteria import (
    CriterionReport,
    check_cns,
    check_dicns_1d_high_alpha,
    check_dicns_1d_mid_alpha,
    check_dicns_nd,
    check_icns,
    constants_table,
)
from .errors import (
    BlowupLabError,
    ConfigError,
    InvalidInputError,
    NumericsError,
)
from .functionals import SNAPSHOT_COLUMNS, chemin, snapshot
from .gas_state import (
    ConstantViscosity,
    Degenerate,
    DensitySpec,
    Euler,
    FlowState,
    GasModel,
    Grid,
    ProfileSpec,
    VelocitySpec,
    build_initial_data,
    load_table,
)
from .simulate import SchemeConfig, run, verify_bounds, verify_identities

__all__ = ["RunConfig", "RunReport", "parse_config", "render", "execute", "main"]

COMMANDS = ("check", "tstar", "simulate", "verify", "chemin", "sweep")


@dataclass(frozen=True)
class RunConfig:
    """Fully validated run description with defaults filled in."""

    command: str = "check"
    # [model]
    gamma: float = 2.0
    dim: int = 1
    regime: str = "euler"  # euler | constant | degenerate
    alpha: float = 2.0
    mu: float = 0.0
    lam: float = 0.0
    entropy_shift: float = 0.0
    # [profile]
    density: str = "gaussian"
    amplitude: float = 1.0
    width: float = 1.0
    center: float = 0.0
    radius: float = 1.0
    order: int = 2
    floor: float = 0.0
    table: Optional[str] = None
    velocity: str = "zero"
    v_amplitude: float = 0.0
    v_width: float = 1.0
    entropy: Optional[float] = None
    # [grid]
    L: float = 10.0
    N: int = 1024
    geometry: str = "line"
    # [solver]
    cfl: float = 0.4
    t_end: float = 0.5
    snapshot_every: float = 0.05
    limiter: str = "minmod"
    reconstruction: str = "muscl"
    density_ceiling: Optional[float] = None
    energy_bound: Optional[float] = None
    samples: int = 0
    # [sweep]
    sweep_parameter: Optional[str] = None
    sweep_start: float = 0.0
    sweep_stop: float = 1.0
    sweep_count: int = 0
    # [output]
    label: str = "run"


@dataclass(frozen=True)
class RunReport:
    """In-memory result of one executed command."""

    config: "RunConfig"
    command: str
    version: str
    payload: dict
    wall_time: float


_SECTION_KEYS = {
    "model": ("gamma", "dim", "regime", "alpha", "mu", "lam", "entropy_shift"),
    "profile": (
        "density",
        "amplitude",
        "width",
        "center",
        "radius",
        "order",
        "floor",
        "table",
        "velocity",
        "v_amplitude",
        "v_width",
        "entropy",
    ),
    "grid": ("L", "N", "geometry"),
    "solver": (
        "cfl",
        "t_end",
        "snapshot_every",
        "limiter",
        "reconstruction",
        "density_ceiling",
        "energy_bound",
        "samples",
    ),
    "sweep": ("parameter", "start", "stop", "count"),
    "output": ("label", "command"),
}

_SWEEP_ALIASES = {
    "parameter": "sweep_parameter",
    "start": "sweep_start",
    "stop": "sweep_stop",
    "count": "sweep_count",
}

_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}
_INT_FIELDS = {"dim", "order", "N", "samples", "sweep_count"}
_STR_FIELDS = {
    "command",
    "regime",
    "density",
    "table",
    "velocity",
    "geometry",
    "limiter",
    "reconstruction",
    "sweep_parameter",
    "label",
}
_OPTIONAL_FIELDS = {"table", "entropy", "density_ceiling", "energy_bound", "sweep_parameter"}


def _convert(key: str, raw: str, line_no: int):
    raw = raw.strip()
    if key in _OPTIONAL_FIELDS and raw.lower() in ("none", ""):
        return None
    if key in _STR_FIELDS:
        return raw
    try:
        if key in _INT_FIELDS:
            return int(raw)
        return float(raw)
    except ValueError:
        kind = "an integer" if key in _INT_FIELDS else "a number"
        raise ConfigError(f"key {key!r} needs {kind}, got {raw!r}", line_no) from None


def parse_config(text: str) -> RunConfig:
    """Parse sectioned key=value text into a validated RunConfig."""
    values: dict = {}
    section = None
    seen_sections = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _SECTION_KEYS:
                raise ConfigError(f"unknown section [{section}]", line_no)
            seen_sections.add(section)
            continue
        if section is None:
            raise ConfigError("key outside any section", line_no)
        if "=" not in line:
            raise ConfigError("expected key=value", line_no)
        key, _, raw_val = line.partition("=")
        key = key.strip()
        if key not in _SECTION_KEYS[section]:
            raise ConfigError(f"unknown key {key!r} in section [{section}]", line_no)
        name = _SWEEP_ALIASES.get(key, key) if section == "sweep" else key
        values[name] = _convert(name, raw_val, line_no)

    if "model" not in seen_sections:
        raise ConfigError("missing required section [model]", 1)
    cfg = replace(RunConfig(), **values)
    validate_config(cfg)
    return cfg


def validate_config(cfg: RunConfig):
    if cfg.command not in COMMANDS:
        raise ConfigError(f"unknown command {cfg.command!r}")
    if not cfg.gamma > 1.0:
        raise ConfigError(f"gamma > 1 required, got {cfg.gamma}")
    if cfg.dim < 1:
        raise ConfigError("dim must be a positive integer")
    if cfg.regime not in ("euler", "constant", "degenerate"):
        raise ConfigError(f"unknown regime {cfg.regime!r}")
    if cfg.regime == "degenerate" and not cfg.alpha > 1.0 - 1.0 / cfg.dim:
        raise ConfigError(f"alpha > 1 - 1/n required, got {cfg.alpha}")
    if cfg.L <= 0 or cfg.N < 16:
        raise ConfigError("grid needs L > 0 and N >= 16")
    if not 0 < cfg.cfl <= 1:
        raise ConfigError("cfl must lie in (0, 1]")
    if cfg.t_end < 0 or cfg.snapshot_every <= 0:
        raise ConfigError("t_end >= 0 and snapshot_every > 0 required")
    if cfg.command == "sweep":
        if not cfg.sweep_parameter or cfg.sweep_count < 1:
            raise ConfigError("sweep needs a parameter and count >= 1")
        target = _SWEEP_ALIASES.get(cfg.sweep_parameter, cfg.sweep_parameter)
        if target not in _FIELD_TYPES or target.startswith("sweep"):
            raise ConfigError(f"cannot sweep over {cfg.sweep_parameter!r}")


def render(cfg: RunConfig) -> str:
    """Serialize a RunConfig; parse_config(render(cfg)) == cfg."""
    lines = []
    for section, keys in _SECTION_KEYS.items():
        lines.append(f"[{section}]")
        for key in keys:
            name = _SWEEP_ALIASES.get(key, key) if section == "sweep" else key
            value = getattr(cfg, name)
            lines.append(f"{key} = {'none' if value is None else value}")
        lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# config -> domain objects

def build_model(cfg: RunConfig) -> GasModel:
    if cfg.regime == "euler":
        regime = Euler()
    elif cfg.regime == "constant":
        regime = ConstantViscosity(mu=cfg.mu, lam=cfg.lam)
    else:
        regime = Degenerate(alpha=cfg.alpha)
    return GasModel(gamma=cfg.gamma, dim=cfg.dim, regime=regime)


def build_grid(cfg: RunConfig) -> Grid:
    return Grid(half_width=cfg.L, ncells=cfg.N, geometry=cfg.geometry, dim=cfg.dim)


def build_profile(cfg: RunConfig) -> ProfileSpec:
    table = None
    if cfg.table is not None:
        x, rho, u = load_table(cfg.table)
        density = DensitySpec(kind="table", table=(x, rho))
        if u is not None:
            velocity = VelocitySpec(kind="table", table=(x, u))
        else:
            velocity = VelocitySpec(kind=cfg.velocity, amplitude=cfg.v_amplitude, width=cfg.v_width)
        return ProfileSpec(density=density, velocity=velocity, entropy=cfg.entropy)
    density = DensitySpec(
        kind=cfg.density,
        amplitude=cfg.amplitude,
        width=cfg.width,
        center=cfg.center,
        radius=cfg.radius,
        order=cfg.order,
        floor=cfg.floor,
    )
    velocity = VelocitySpec(kind=cfg.velocity, amplitude=cfg.v_amplitude, width=cfg.v_width)
    return ProfileSpec(density=density, velocity=velocity, entropy=cfg.entropy)


def build_data(cfg: RunConfig) -> tuple:
    model = build_model(cfg)
    grid = build_grid(cfg)
    data = build_initial_data(build_profile(cfg), grid, model)
    return model, grid, data


# ---------------------------------------------------------------------------
# command pipelines

def _run_check(cfg: RunConfig) -> CriterionReport:
    model, _, data = build_data(cfg)
    if cfg.regime == "degenerate":
        if cfg.dim == 1 and cfg.alpha >= cfg.gamma:
            return check_dicns_1d_high_alpha(data, model, cfg.density_ceiling)
        if cfg.dim == 1:
            return check_dicns_1d_mid_alpha(data, model, cfg.energy_bound)
        return check_dicns_nd(data, model, cfg.energy_bound)
    if data.has_entropy:
        return check_cns(data, model, entropy_shift=cfg.entropy_shift)
    return check_icns(data, model)


def _constants_from_report(report: CriterionReport, model: GasModel, cfg: RunConfig):
    inp = report.inputs
    scalars = {
        "M0": inp.get("M0"),
        "s1": inp.get("s1"),
        "J0": inp.get("J0"),
        "IJ0": inp.get("IJ0"),
        "energy_bound": inp.get("energy_bound", cfg.energy_bound),
        "density_ceiling": inp.get("density_ceiling", cfg.density_ceiling),
        "free_param": report.free_param["value"] if report.free_param else None,
    }
    return constants_table(model, **scalars)


def _run_tstar(cfg: RunConfig) -> dict:
    report = _run_check(cfg)
    model, _, data = build_data(cfg)
    constants = _constants_from_report(report, model, cfg)
    snap0 = snapshot(data, model)
    curves = build_bounds(
        report, constants, snap0, check_sandwich=(cfg.entropy_shift == 0.0)
    )
    result = find_tstar(curves)
    horizon = 2.0 * result.tstar if result.tstar else 10.0
    times = np.linspace(0.0, horizon, 512)
    return {
        "criterion": _as_jsonable(report),
        "tstar": _as_jsonable(result),
        "curves_rows": curves.export(times),
    }


def _run_simulate(cfg: RunConfig) -> dict:
    model, _, data = build_data(cfg)
    scheme = SchemeConfig(cfl=cfg.cfl, limiter=cfg.limiter, reconstruction=cfg.reconstruction)
    series = run(data, model, cfg.t_end, cfg.snapshot_every, scheme)
    rows = [
        snap.as_row() + (ind,)
        for snap, ind in zip(series.snapshots, series.indicator)
    ]
    return {
        "metadata": series.metadata,
        "status": series.status,
        "note": series.note,
        "snapshots": len(series),
        "final_time": series.times[-1],
        "series_rows": rows,
    }


def _run_verify(cfg: RunConfig) -> dict:
    model, _, data = build_data(cfg)
    scheme = SchemeConfig(cfl=cfg.cfl, limiter=cfg.limiter, reconstruction=cfg.reconstruction)
    series = run(data, model, cfg.t_end, cfg.snapshot_every, scheme)
    identities = verify_identities(series, model)
    bounds = verify_bounds(series, model=model)
    rows = [
        snap.as_row() + (ind,)
        for snap, ind in zip(series.snapshots, series.indicator)
    ]
    return {
        "metadata": series.metadata,
        "status": series.status,
        "identities": _as_jsonable(identities),
        "bounds": _as_jsonable(bounds),
        "series_rows": rows,
    }


def _run_chemin(cfg: RunConfig, seed: Optional[int]) -> dict:
    model, grid, data = build_data(cfg)
    results = [chemin(data.rho, model.gamma, model.dim, grid)]
    if cfg.samples > 0:
        rng = np.random.default_rng(0 if seed is None else seed)
        x = grid.x
        for _ in range(cfg.samples):
            width = rng.uniform(0.3, 2.0)
            center = rng.uniform(-1.0, 1.0) if grid.geometry == "line" else 0.0
            amp = rng.uniform(0.1, 3.0)
            f = amp * np.exp(-(((x - center) / width) ** 2))
            results.append(chemin(f, model.gamma, model.dim, grid))
    batch = []
    for res in results:
        entry = _as_jsonable(res)
        entry["satisfied"] = res.lhs <= res.rhs * (1 + 1e-9)
        batch.append(entry)
    return {"batch": batch}


def _sweep_children(cfg: RunConfig) -> list:
    target = _SWEEP_ALIASES.get(cfg.sweep_parameter, cfg.sweep_parameter)
    values = np.linspace(cfg.sweep_start, cfg.sweep_stop, cfg.sweep_count)
    children = []
    for i, v in enumerate(values):
        value = int(round(v)) if target in _INT_FIELDS else float(v)
        child = replace(cfg, command="check", label=f"{cfg.label}-{i:03d}", **{target: value})
        validate_config(child)
        children.append((i, value, child))
    return children


# ---------------------------------------------------------------------------
# serialization

def _as_jsonable(obj):
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else repr(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return _as_jsonable(obj.item())
    if isinstance(obj, np.ndarray):
        return [_as_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _as_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_as_jsonable(v) for v in obj]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {}
        for f in fields(obj):
            value = getattr(obj, f.name)
            if callable(value) and not isinstance(value, type):
                continue
            out[f.name] = _as_jsonable(value)
        return out
    return repr(obj)


def _atomic_write(path: str, text: str):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_csv(path: str, header: tuple, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(float(v)) for v in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def _write_report(out_dir: str, report: RunReport, payload_extra: Optional[dict] = None):
    os.makedirs(out_dir, exist_ok=True)
    payload = dict(report.payload)
    series_rows = payload.pop("series_rows", None)
    curves_rows = payload.pop("curves_rows", None)
    doc = {
        "command": report.command,
        "version": report.version,
        "config": render(report.config),
        "payload": _as_jsonable(payload),
    }
    if payload_extra:
        doc.update(_as_jsonable(payload_extra))
    # wall time is intentionally omitted so identical config+seed runs are
    # byte-identical
    _atomic_write(os.path.join(out_dir, "report.json"), json.dumps(doc, sort_keys=True, indent=2) + "\n")
    if series_rows is not None:
        _write_csv(
            os.path.join(out_dir, "series.csv"),
            SNAPSHOT_COLUMNS + ("indicator",),
            series_rows,
        )
    if curves_rows is not None:
        _write_csv(os.path.join(out_dir, "curves.csv"), ("t", "lower", "upper"), curves_rows)


# ---------------------------------------------------------------------------
# execution

def execute(
    config: RunConfig,
    out_dir: Optional[str] = None,
    workers: int = 1,
    seed: Optional[int] = None,
) -> RunReport:
    """Dispatch one command and (optionally) write its reports."""
    validate_config(config)
    start = time.perf_counter()
    cmd = config.command

    if cmd == "check":
        payload = {"criterion": _as_jsonable(_run_check(config))}
    elif cmd == "tstar":
        payload = _run_tstar(config)
    elif cmd == "simulate":
        payload = _run_simulate(config)
    elif cmd == "verify":
        payload = _run_verify(config)
    elif cmd == "chemin":
        payload = _run_chemin(config, seed)
    elif cmd == "sweep":
        payload = _execute_sweep(config, out_dir, workers, seed)
    else:
        raise ConfigError(f"unknown command {cmd!r}")

    report = RunReport(
        config=config,
        command=cmd,
        version=__version__,
        payload=payload,
        wall_time=time.perf_counter() - start,
    )
    if out_dir is not None and cmd != "sweep":
        _write_report(out_dir, report)
    elif out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        doc = {
            "command": "sweep",
            "version": __version__,
            "config": render(config),
            "payload": _as_jsonable(payload),
        }
        _atomic_write(
            os.path.join(out_dir, "report.json"),
            json.dumps(doc, sort_keys=True, indent=2) + "\n",
        )
    return report


def _execute_sweep(cfg: RunConfig, out_dir: Optional[str], workers: int, seed: Optional[int]) -> dict:
    children = _sweep_children(cfg)

    def job(item):
        i, value, child = item
        child_dir = os.path.join(out_dir, f"sweep_{i:03d}") if out_dir else None
        try:
            rep = execute(child, out_dir=child_dir, seed=seed)
            crit = rep.payload.get("criterion", {})
            return {
                "index": i,
                "value": value,
                "status": "ok",
                "satisfied": crit.get("satisfied"),
                "lhs": crit.get("lhs"),
                "rhs": crit.get("rhs"),
            }
        except BlowupLabError as exc:
            return {"index": i, "value": value, "status": "error", "error": str(exc)}

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, children))
    else:
        results = [job(c) for c in children]
    results.sort(key=lambda r: r["index"])
    return {"parameter": cfg.sweep_parameter, "children": results}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="blowup-lab",
        description="Blow-up criteria, bound envelopes, and verification runs",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="path to a run configuration")
    parser.add_argument("--out", default=None, help="output directory for reports")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--seed", type=int, default=None)
    args = parser.parse_args(argv)

    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2

    try:
        cfg = parse_config(text)
        cfg = replace(cfg, command=args.command)
        report = execute(cfg, out_dir=args.out, workers=args.workers, seed=args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except BlowupLabError as exc:
        print(f"error ({args.command}): {exc}", file=sys.stderr)
        return 3

    summary = {
        "command": report.command,
        "wall_time_s": round(report.wall_time, 4),
    }
    payload = report.payload
    if "criterion" in payload and isinstance(payload["criterion"], dict):
        crit = payload["criterion"]
        summary.update(
            {k: crit.get(k) for k in ("criterion", "lhs", "rhs", "satisfied") if k in crit}
        )
    if "tstar" in payload and isinstance(payload["tstar"], dict):
        summary["tstar"] = payload["tstar"].get("tstar")
    print(json.dumps(_as_jsonable(summary), sort_keys=True))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
