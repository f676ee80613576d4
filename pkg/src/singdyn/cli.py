"""Scenario runner: ``singdyn run | plot | check``.

A scenario is a JSON file ``{"schema": "singdyn/1", "mode": ..., "params": {...}}``.
All artifacts are written in reduced variables (time ``tau = D t``, drift
potential ``kappa w``); when physical constants are given, the time window
and the drift coefficients of the config are converted first.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import jsonschema
import numpy as np

from . import chain1d, heatwave2d, io, refsolver
from .drift import DriftField
from .errors import ConfigError, SingDynError
from .vortex import VortexState, run_vortex

SCHEMA_VERSION = "singdyn/1"
EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3
FRONT_RTOL = 1e-3

# ---------------------------------------------------------------- schema

_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_vec2 = {"type": "array", "items": _num, "minItems": 2, "maxItems": 2}
_physical = {
    "type": "object",
    "properties": {"D": _pos, "kappa": _pos, "beta": _pos, "omega": _num},
    "required": ["D", "kappa", "beta", "omega"],
    "additionalProperties": False,
}
_drift = {
    "type": "object",
    "patternProperties": {"^w[0-9]+$": {"type": "array", "items": _num}},
    "additionalProperties": False,
}
_window = {"t0": _num, "t1": _num, "dt": _pos}


def _obj(props: dict, required: List[str]) -> dict:
    return {"type": "object", "properties": props, "required": required, "additionalProperties": False}


_PARAMS = {
    "chain1d": _obj(
        {
            **_window,
            "order": {"type": "integer", "minimum": 1},
            "output_every": {"type": "integer", "minimum": 1},
            "initial": {
                "oneOf": [
                    _obj({"type": {"const": "exact_wave"}, "eta": _pos}, ["type"]),
                    _obj(
                        {"type": {"const": "state"}, "phi": _num, "a": {"type": "array", "items": _num, "minItems": 1}},
                        ["type", "phi", "a"],
                    ),
                ]
            },
        },
        ["t0", "t1", "initial"],
    ),
    "heatwave2d": _obj(
        {
            **_window,
            "mu": _pos,
            "physical": _physical,
            "drift": _drift,
            "evolve_a2": {"type": "boolean"},
            "output_every": {"type": "integer", "minimum": 1},
            "grid": _obj(
                {"min": _num, "max": _num, "n": {"type": "integer", "minimum": 4}, "periodic": {"type": "boolean"}},
                ["min", "max", "n"],
            ),
            "initial": {
                "oneOf": [
                    _obj({"type": {"const": "circle"}, "R": _pos, "c_r": _pos, "c_rr": _num}, ["type", "R", "c_r"]),
                    _obj(
                        {
                            "type": {"const": "line"},
                            "phi0": _num,
                            "slope": _num,
                            "amplitude": _num,
                            "wavenumber": {"type": "integer", "minimum": 0},
                            "a1": {"type": "number", "exclusiveMaximum": 0},
                            "a2": _num,
                        },
                        ["type", "a1"],
                    ),
                    _obj(
                        {
                            "type": {"const": "nodes"},
                            "phi": {"type": "array", "items": _num},
                            "a1": {"type": "array", "items": _num},
                            "a2": {"type": "array", "items": _num},
                        },
                        ["type", "phi", "a1"],
                    ),
                ]
            },
        },
        ["t0", "t1", "dt", "grid", "initial"],
    ),
    "vortex": _obj(
        {
            **_window,
            "mu": _pos,
            "physical": _physical,
            "drift": _drift,
            "initial_states": {
                "type": "array",
                "minItems": 1,
                "items": _obj(
                    {
                        "a": _vec2,
                        "phi": _num,
                        "c1_0": _num,
                        "sigma": _num,
                        "c0_02": _num,
                        "p1_1": _vec2,
                        "z": {"type": "array", "items": _num, "minItems": 7, "maxItems": 7},
                        "label": {"type": "string"},
                    },
                    ["phi", "c1_0"],
                ),
            },
        },
        ["t0", "t1", "dt", "initial_states"],
    ),
    "refsolver": _obj(
        {
            "equation": {"enum": ["model1d", "reduced_radial"]},
            "mu": _pos,
            "physical": _physical,
            "t0": _num,
            "t1": _num,
            "dt": _pos,
            "out_times": {"type": "array", "items": _num},
            "n_out": {"type": "integer", "minimum": 1},
            "front_rel_tol": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
            "grid": _obj(
                {"min": _num, "max": _num, "r_max": _pos, "n": {"type": "integer", "minimum": 3, "maximum": 65536}},
                ["n"],
            ),
            "initial": {
                "oneOf": [
                    _obj({"type": {"const": "exact_wave"}, "eta": _pos}, ["type"]),
                    _obj({"type": {"const": "barenblatt"}, "K": _pos}, ["type", "K"]),
                    _obj({"type": {"const": "smooth_cap"}, "depth": _pos, "radius": _pos}, ["type", "depth", "radius"]),
                    _obj({"type": {"const": "nodes"}, "values": {"type": "array", "items": _num}}, ["type", "values"]),
                ]
            },
        },
        ["equation", "t0", "t1", "grid", "initial"],
    ),
    "compare": _obj(
        {
            "eta": _pos,
            "t0": _pos,
            "t1": _num,
            "order": {"type": "integer", "minimum": 1},
            "chain_dt": _pos,
            "n_out": {"type": "integer", "minimum": 1},
            "front_rel_tol": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
            "grid": _obj({"min": _num, "max": _num, "n": {"type": "integer", "minimum": 3, "maximum": 65536}}, ["min", "max", "n"]),
        },
        ["t0", "t1", "grid"],
    ),
}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "mode": {"enum": sorted(_PARAMS)},
        "name": {"type": "string"},
        "params": {"type": "object"},
    },
    "required": ["schema", "mode", "params"],
    "additionalProperties": False,
}


def physical_to_reduced(D: float, kappa: float, beta: float, omega: float) -> Tuple[float, float, float]:
    """Map physical constants to ``(mu, time_scale, drift_scale)``.

    ``mu = kappa beta (3 omega - 4) / 2``; reduced time is ``D t`` and the
    reduced drift potential ``kappa w``.  Only ``omega > 4/3`` gives a
    degenerate equation.
    """
    for name, v in (("D", D), ("kappa", kappa), ("beta", beta)):
        if not v > 0:
            raise ConfigError(f"{name} must be positive")
    if not 3.0 * omega - 4.0 > 0:
        raise ConfigError("omega must exceed 4/3 (otherwise the equation does not degenerate)")
    return kappa * beta * (3.0 * omega - 4.0) / 2.0, float(D), float(kappa)


def load_config(path) -> dict:
    """Read and validate a scenario file; raises ConfigError."""
    try:
        cfg = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    validate_config(cfg)
    return cfg


def validate_config(cfg: dict) -> None:
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
        jsonschema.validate(cfg["params"], _PARAMS[cfg["mode"]])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path)
        raise ConfigError(f"invalid config at '{where}': {exc.message}") from None
    p = cfg["params"]
    if "t1" in p and "t0" in p and not p["t1"] > p["t0"]:
        raise ConfigError("t1 must exceed t0")
    if "mu" in p and "physical" in p:
        raise ConfigError("give either mu or physical, not both")
    mode = cfg["mode"]
    if mode in ("heatwave2d", "vortex") or (mode == "refsolver" and p["equation"] == "reduced_radial"):
        if "mu" not in p and "physical" not in p:
            raise ConfigError("mu (or physical constants) required for this mode")
    if mode == "refsolver":
        g = p["grid"]
        if p["equation"] == "model1d" and not ("min" in g and "max" in g and g["max"] > g["min"]):
            raise ConfigError("model1d grid needs min < max")
        if p["equation"] == "reduced_radial" and "r_max" not in g:
            raise ConfigError("radial grid needs r_max")
        kind = p["initial"]["type"]
        ok = {"model1d": ("exact_wave", "nodes"), "reduced_radial": ("barenblatt", "smooth_cap", "nodes")}
        if kind not in ok[p["equation"]]:
            raise ConfigError(f"initial type {kind!r} does not fit equation {p['equation']!r}")
        if kind == "nodes" and len(p["initial"]["values"]) != g["n"]:
            raise ConfigError("initial values must have one entry per node")
        if kind in ("exact_wave", "barenblatt") and not p["t0"] > 0:
            raise ConfigError("exact initial data needs t0 > 0")
    if mode == "chain1d" and not p["t0"] > 0:
        raise ConfigError("chain1d needs t0 > 0")
    if mode == "heatwave2d":
        g = p["grid"]
        if not g["max"] > g["min"]:
            raise ConfigError("grid needs min < max")
        ini = p["initial"]
        if ini["type"] == "nodes" and any(len(ini.get(k, [0] * g["n"])) != g["n"] for k in ("phi", "a1", "a2")):
            raise ConfigError("node arrays must have one entry per node")
        if ini["type"] == "circle":
            if g.get("periodic", True):
                raise ConfigError("a circle chart needs a non-periodic grid")
            if max(abs(g["min"]), abs(g["max"])) >= ini["R"]:
                raise ConfigError("circle chart nodes must satisfy |x2| < R")
    if mode == "compare" and not p["grid"]["max"] > p["grid"]["min"]:
        raise ConfigError("grid needs min < max")
    _drift(p, *_reduction(p)[1:])  # physical constants and drift must be admissible


# ---------------------------------------------------------------- helpers


def _reduction(p: dict) -> Tuple[Optional[float], float, float]:
    if "physical" in p:
        ph = p["physical"]
        return physical_to_reduced(ph["D"], ph["kappa"], ph["beta"], ph["omega"])
    return p.get("mu"), 1.0, 1.0


def _drift(p: dict, time_scale: float, drift_scale: float) -> DriftField:
    raw = p.get("drift", {})
    conv = {
        k: [drift_scale * c / time_scale ** i for i, c in enumerate(v)] for k, v in sorted(raw.items())
    }
    try:
        return DriftField.from_mapping(conv)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _window_of(p: dict, time_scale: float):
    return p["t0"] * time_scale, p["t1"] * time_scale, p.get("dt", 0.0) * time_scale


def _write_report(out: Path, payload: dict) -> Path:
    path = out / "report.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def _every(n: int, k: int) -> np.ndarray:
    idx = np.arange(0, n, k)
    if idx[-1] != n - 1:
        idx = np.append(idx, n - 1)
    return idx


# ---------------------------------------------------------------- modes


def _run_chain1d(p: dict, out: Path) -> dict:
    order = p.get("order", 3)
    ini = p["initial"]
    if ini["type"] == "exact_wave":
        wave = chain1d.ExactWaveParams(ini.get("eta", 1.0), p["t0"])
        s0 = chain1d.exact_chain_state(wave, p["t0"], order)
    else:
        a = list(ini["a"])[:order] + [0.0] * max(0, order - len(ini["a"]))
        s0 = chain1d.ChainState1D(ini["phi"], a)
    traj = chain1d.run_chain_1d(s0, p["t0"], p["t1"], p.get("dt", 1e-3))
    names, data = traj.columns()
    data = data[_every(len(data), p.get("output_every", 1))]
    io.write_csv(out / "trajectory.csv", names, data)
    series = [("phi", data[:, 0], data[:, 1]), ("a1", data[:, 0], data[:, 2])]
    io.plot_svg(series, out / "trajectory.svg", xlabel="t", ylabel="value", title="front chain")
    return {"artifacts": ["trajectory.csv", "trajectory.svg"], "events": [list(e) for e in traj.events]}


def _run_heatwave2d(p: dict, out: Path) -> dict:
    mu, ts, ds = _reduction(p)
    drift = _drift(p, ts, ds)
    t0, t1, dt = _window_of(p, ts)
    g = p["grid"]
    periodic = g.get("periodic", True)
    n = g["n"]
    if periodic:
        x2 = g["min"] + (g["max"] - g["min"]) * np.arange(n) / n
    else:
        x2 = np.linspace(g["min"], g["max"], n)
    ini = p["initial"]
    if ini["type"] == "circle":
        f0 = heatwave2d.circle_chart(ini["R"], x2, ini["c_r"], ini.get("c_rr", 0.0), mu)
    elif ini["type"] == "line":
        L = g["max"] - g["min"]
        phi = ini.get("phi0", 0.0) + ini.get("slope", 0.0) * x2
        phi = phi + ini.get("amplitude", 0.0) * np.cos(2 * np.pi * ini.get("wavenumber", 1) * (x2 - g["min"]) / L)
        f0 = heatwave2d.FrontGraph(x2, phi, ini["a1"], ini.get("a2", 0.0), mu, periodic)
    else:
        f0 = heatwave2d.FrontGraph(x2, ini["phi"], ini["a1"], ini.get("a2"), mu, periodic)
    traj = heatwave2d.run_heatwave_2d(f0, drift, t0, t1, dt, evolve_a2=p.get("evolve_a2", True))
    sel = _every(traj.times.size, p.get("output_every", max(1, traj.times.size // 10)))
    sub = heatwave2d.HeatwaveTrajectory(
        traj.x2, traj.times[sel], traj.phi[sel], traj.a1[sel], traj.a2[sel], traj.mu, traj.periodic
    )
    names, data = sub.columns()
    io.write_csv(out / "fronts.csv", names, data)
    series = [(f"t={t:.4g}", sub.phi[i], sub.x2) for i, t in enumerate(sub.times)]
    io.plot_svg(series, out / "fronts.svg", xlabel="x1", ylabel="x2", title="front snapshots", equal_aspect=True)
    return {"artifacts": ["fronts.csv", "fronts.svg"], "mu": mu}


def _vortex_entry(args):
    k, st, p, mu, drift, window = args
    s0 = VortexState(
        a=st.get("a", [0.0, 0.0]),
        phi=st["phi"],
        c1_0=st["c1_0"],
        sigma=st.get("sigma", 0.0),
        c0_02=st.get("c0_02", 0.0),
        p1_1=st.get("p1_1", [0.0, 0.0]),
        z=st.get("z", [0.0] * 7),
        mu=mu,
    )
    t0, t1, dt = window
    return k, run_vortex(s0, drift, t0, t1, dt)


def _run_vortex(p: dict, out: Path) -> dict:
    mu, ts, ds = _reduction(p)
    drift = _drift(p, ts, ds)
    window = _window_of(p, ts)
    states = p["initial_states"]
    jobs = [(k, st, p, mu, drift, window) for k, st in enumerate(states)]
    with ThreadPoolExecutor(max_workers=min(4, len(jobs))) as pool:
        results = dict(pool.map(_vortex_entry, jobs))
    series, arts = [], []
    for k in range(len(states)):
        traj = results[k]
        name = f"trajectory_{k:03d}.csv"
        io.write_csv(out / name, *traj.columns())
        arts.append(name)
        label = states[k].get("label", f"#{k}")
        series.append((label, traj.path[:, 0], traj.path[:, 1]))
    io.plot_svg(series, out / "trajectories.svg", xlabel="x1", ylabel="x2",
                title="singular point path x = -a(t)", equal_aspect=True)
    arts.append("trajectories.svg")
    return {"artifacts": arts, "mu": mu}


def _ref_initial(p: dict, mu: Optional[float]) -> refsolver.FieldGrid:
    g, ini, t0 = p["grid"], p["initial"], p["t0"]
    if p["equation"] == "model1d":
        if ini["type"] == "exact_wave":
            wave = chain1d.ExactWaveParams(ini.get("eta", 1.0), t0)
            return refsolver.FieldGrid.line(g["min"], g["max"], g["n"], lambda x: chain1d.exact_wave(wave, x, t0), t=t0)
        return refsolver.FieldGrid.line(g["min"], g["max"], g["n"], np.array(ini["values"]), t=t0)
    if ini["type"] == "barenblatt":
        f = lambda r: refsolver.barenblatt_radial(r, t0, mu, ini["K"])  # noqa: E731
    elif ini["type"] == "smooth_cap":
        f = lambda r: 0.5 / mu - ini["depth"] * np.maximum(1 - (r / ini["radius"]) ** 2, 0.0) ** 2  # noqa: E731
    else:
        f = np.array(ini["values"])
    return refsolver.FieldGrid.radial(g["r_max"], g["n"], mu, f, t=t0)


def _run_refsolver(p: dict, out: Path) -> dict:
    mu, ts, _ = _reduction(p)
    t0, t1, dt = _window_of(p, ts)
    p = dict(p, t0=t0, t1=t1)
    g0 = _ref_initial(p, mu)
    out_times = p.get("out_times")
    out_times = [t * ts for t in out_times] if out_times else list(np.linspace(t0, t1, p.get("n_out", 5) + 1))
    if p["equation"] == "model1d":
        snaps = refsolver.solve_model_1d(g0, t1, out_times, dt or None)
    else:
        snaps = refsolver.solve_reduced_2d_radial(g0, mu, t1, out_times, dt or None)
    rt = p.get("front_rel_tol", FRONT_RTOL)
    rows, fronts = [], []
    for s in snaps:
        rows.append(np.column_stack([np.full(s.x.size, s.t), s.x, s.values]))
        fronts.append([s.t, *refsolver.extract_front(s, rel_tol=rt)])
    io.write_csv(out / "snapshots.csv", ["t", "x", "value"], np.vstack(rows))
    fnames = ["t", "front"] if p["equation"] != "model1d" else ["t", "front_left", "front_right"]
    io.write_csv(out / "fronts.csv", fnames, np.array(fronts))
    io.plot_svg([(f"t={s.t:.4g}", s.x, s.values) for s in snaps], out / "profiles.svg",
                xlabel="r" if p["equation"] != "model1d" else "x", ylabel="value", title="reference solution")
    info = {"artifacts": ["snapshots.csv", "fronts.csv", "profiles.svg"]}
    if mu is not None:
        info["mu"] = mu
    return info


def compare_fronts(eta: float, t0: float, t1: float, grid: dict, order: int = 3, chain_dt: float = 1e-3,
                   n_out: int = 10, rel_tol: float = FRONT_RTOL):
    """Left front of the chain, the reference solver and the exact wave.

    Returns ``(names, rows)`` with columns ``t, chain, reference, exact,
    diff, diff_cells``.
    """
    wave = chain1d.ExactWaveParams(eta, t0)
    g0 = refsolver.FieldGrid.line(grid["min"], grid["max"], grid["n"], lambda x: chain1d.exact_wave(wave, x, t0), t=t0)
    times = np.linspace(t0, t1, n_out + 1)
    snaps = refsolver.solve_model_1d(g0, t1, times)
    traj = chain1d.run_chain_1d(chain1d.exact_chain_state(wave, t0, order), t0, t1, chain_dt)
    rows = []
    for s in snaps:
        ref = refsolver.extract_front(s, rel_tol=rel_tol)[0]
        ch = float(np.interp(s.t, traj.times, traj.phi))
        ex = -eta * s.t ** (1.0 / 3.0)
        rows.append([s.t, ch, ref, ex, ch - ref, (ch - ref) / g0.h])
    return ["t", "chain", "reference", "exact", "diff", "diff_cells"], np.array(rows)


def _run_compare(p: dict, out: Path) -> dict:
    names, rows = compare_fronts(
        p.get("eta", 1.0), p["t0"], p["t1"], p["grid"], p.get("order", 3), p.get("chain_dt", 1e-3),
        p.get("n_out", 10), p.get("front_rel_tol", FRONT_RTOL),
    )
    io.write_csv(out / "report.csv", names, rows)
    io.plot_svg([(n, rows[:, 0], rows[:, i]) for i, n in enumerate(names[1:4], start=1)],
                out / "fronts.svg", xlabel="t", ylabel="left front", title="chain vs reference")
    return {"artifacts": ["report.csv", "fronts.svg"], "max_diff_cells": float(np.max(np.abs(rows[:, 5])))}


_RUNNERS = {
    "chain1d": _run_chain1d,
    "heatwave2d": _run_heatwave2d,
    "vortex": _run_vortex,
    "refsolver": _run_refsolver,
    "compare": _run_compare,
}


def run_scenario(config_path, out_dir) -> int:
    """Run one scenario file; returns the process exit status."""
    try:
        cfg = load_config(config_path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    base = {"mode": cfg["mode"], "name": cfg.get("name", Path(config_path).stem)}
    try:
        info = _RUNNERS[cfg["mode"]](cfg["params"], out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingDynError, ArithmeticError, ValueError) as exc:
        _write_report(out, {**base, "status": "error", "error_type": type(exc).__name__, "message": str(exc)})
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    _write_report(out, {**base, "status": "ok", **info})
    return EXIT_OK


def bundled_scenarios() -> Dict[str, Path]:
    root = resources.files("singdyn") / "scenarios"
    return {Path(str(f)).stem: Path(str(f)) for f in sorted(root.iterdir(), key=lambda f: f.name) if f.name.endswith(".json")}


# ---------------------------------------------------------------- argparse


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="singdyn", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario file")
    r.add_argument("--config", required=True, help="scenario JSON file, or the name of a bundled scenario")
    r.add_argument("--out", required=True, help="output directory")
    pl = sub.add_parser("plot", help="plot CSV columns into an SVG")
    pl.add_argument("--in", dest="inp", required=True)
    pl.add_argument("--out", required=True)
    pl.add_argument("--x", default=None, help="x column (default: first)")
    pl.add_argument("--y", action="append", default=None, help="y column (repeatable; default: all others)")
    ck = sub.add_parser("check", help="run the acceptance suite")
    ck.add_argument("--only", type=int, action="append", help="criterion number (repeatable)")
    sub.add_parser("list", help="list bundled scenarios")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        cfg = Path(args.config)
        if not cfg.exists():
            bundled = bundled_scenarios()
            if args.config in bundled:
                cfg = bundled[args.config]
        return run_scenario(cfg, args.out)
    if args.command == "plot":
        try:
            io.plot_csv(args.inp, args.out, args.x, args.y)
        except (OSError, ValueError) as exc:
            print(f"plot error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        return EXIT_OK
    if args.command == "list":
        for name, path in bundled_scenarios().items():
            print(f"{name}\t{path}")
        return EXIT_OK
    from .acceptance import run_all

    results = run_all(args.only)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
