import json
import re
import subprocess
import sys

import numpy as np
import pytest
import sympy as sp

from singdyn import cli, io
from singdyn.errors import ConfigError


def _write(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return p


CHAIN = {
    "schema": "singdyn/1",
    "mode": "chain1d",
    "params": {"t0": 1.0, "t1": 8.0, "dt": 1e-3, "initial": {"type": "exact_wave", "eta": 1.0}},
}

VORTEX = {
    "schema": "singdyn/1",
    "mode": "vortex",
    "params": {
        "mu": 1.0,
        "t0": 0.0,
        "t1": 0.3,
        "dt": 0.01,
        "initial_states": [
            {"phi": 0.3, "c1_0": 1.0, "sigma": 0.2, "c0_02": 0.1, "p1_1": [0.1, -0.05]},
            {"phi": 1.3, "c1_0": 1.0},
            {"phi": 2.3, "c1_0": -0.7, "sigma": -0.1},
        ],
    },
}


# ---------------------------------------------------------------- physical map


def test_physical_to_reduced_examples():
    assert cli.physical_to_reduced(1.0, 1.0, 1.0, 2.0) == (1.0, 1.0, 1.0)
    mu, ts, ds = cli.physical_to_reduced(0.5, 2.0, 3.0, 5.0 / 3.0)
    assert mu == pytest.approx(3.0) and ts == 0.5 and ds == 2.0
    with pytest.raises(ConfigError):
        cli.physical_to_reduced(1.0, 1.0, 1.0, 4.0 / 3.0)
    with pytest.raises(ConfigError):
        cli.physical_to_reduced(0.0, 1.0, 1.0, 2.0)


def test_physical_to_reduced_reproduces_divergence_form():
    c, kappa, beta, omega = sp.symbols("c kappa beta omega", positive=True)
    mu = sp.Rational(1, 2) * kappa * beta * (3 * omega - 4)
    # div((1 - kappa beta (3 omega - 4) c) grad c) = Delta(c - mu c^2)
    # <=> d/dc (c - mu c^2) = 1 - kappa beta (3 omega - 4) c
    assert sp.simplify(sp.diff(c - mu * c ** 2, c) - (1 - kappa * beta * (3 * omega - 4) * c)) == 0
    for vals in ((1.0, 1.0, 2.0), (2.0, 3.0, 5 / 3), (0.3, 1.7, 1.9)):
        m, _, _ = cli.physical_to_reduced(1.0, *vals)
        assert m == pytest.approx(float(mu.subs(dict(zip((kappa, beta, omega), vals)))), rel=1e-14)


# ---------------------------------------------------------------- run


def test_chain_scenario_matches_exact_front(tmp_path):
    out = tmp_path / "out"
    assert cli.run_scenario(_write(tmp_path, CHAIN), out) == 0
    names, data = io.read_csv(out / "trajectory.csv")
    assert names[:2] == ["t", "phi"]
    assert np.allclose(data[:, 1], -data[:, 0] ** (1 / 3), atol=1e-9)
    report = json.loads((out / "report.json").read_text())
    assert report["status"] == "ok" and "trajectory.svg" in report["artifacts"]


def test_vortex_sweep_writes_one_polyline_per_state(tmp_path):
    out = tmp_path / "out"
    assert cli.run_scenario(_write(tmp_path, VORTEX), out) == 0
    svg = (out / "trajectories.svg").read_text()
    assert svg.count("<polyline") == 3
    assert 'width="800"' in svg and 'height="600"' in svg
    for k in range(3):
        names, data = io.read_csv(out / f"trajectory_{k:03d}.csv")
        assert names[1:3] == ["a1", "a2"] and data[-1, 0] == pytest.approx(0.3)
    # sweep entries match standalone runs
    from singdyn.drift import DriftField
    from singdyn.vortex import VortexState, run_vortex

    st = VORTEX["params"]["initial_states"][1]
    ref = run_vortex(VortexState([0, 0], st["phi"], st["c1_0"], 0, 0, [0, 0]), DriftField.zero(), 0, 0.3, 0.01)
    _, d1 = io.read_csv(out / "trajectory_001.csv")
    assert np.array_equal(d1[:, 1:9], ref.states)


def test_physical_constants_rescale_time_and_drift(tmp_path):
    base = json.loads(json.dumps(VORTEX))
    base["params"]["initial_states"] = base["params"]["initial_states"][:1]
    base["params"]["drift"] = {"w20": [0.1, 0.2]}
    phys = json.loads(json.dumps(base))
    del phys["params"]["mu"]
    phys["params"]["physical"] = {"D": 2.0, "kappa": 0.5, "beta": 2.0, "omega": 2.0}
    phys["params"].update(t1=0.15, dt=0.005)
    # reduced: mu = 0.5*2*2/2 = 1, tau = 2 t, w~ = 0.5 w(tau/2) = 0.05 + 0.05 tau
    base["params"]["drift"] = {"w20": [0.05, 0.05]}
    assert cli.run_scenario(_write(tmp_path, base, "b.json"), tmp_path / "b") == 0
    assert cli.run_scenario(_write(tmp_path, phys, "p.json"), tmp_path / "p") == 0
    _, db = io.read_csv(tmp_path / "b" / "trajectory_000.csv")
    _, dp = io.read_csv(tmp_path / "p" / "trajectory_000.csv")
    assert np.allclose(db, dp, rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda c: c.pop("schema"),
        lambda c: c.update(schema="singdyn/0"),
        lambda c: c.update(mode="nope"),
        lambda c: c["params"].pop("t0"),
        lambda c: c["params"].update(t1=0.5),
        lambda c: c["params"].update(dt=-1.0),
        lambda c: c["params"].update(extra=1),
        lambda c: c["params"]["initial"].update(type="blob"),
    ],
)
def test_malformed_config_exit_2_without_artifacts(tmp_path, mutate, capsys):
    cfg = json.loads(json.dumps(CHAIN))
    mutate(cfg)
    out = tmp_path / "out"
    assert cli.run_scenario(_write(tmp_path, cfg), out) == 2
    assert not out.exists()
    assert "config error" in capsys.readouterr().err


@pytest.mark.parametrize(
    "params",
    [
        {"mu": 1.0, "physical": {"D": 1, "kappa": 1, "beta": 1, "omega": 2}},
        {"physical": {"D": 1, "kappa": 1, "beta": 1, "omega": 1.2}},
        {"mu": 1.0, "drift": {"w21": [1.0]}},
        {},
    ],
)
def test_semantic_config_errors(tmp_path, params):
    cfg = json.loads(json.dumps(VORTEX))
    cfg["params"].pop("mu")
    cfg["params"].update(params)
    out = tmp_path / "out"
    assert cli.run_scenario(_write(tmp_path, cfg), out) == 2
    assert not out.exists()


def test_unreadable_config(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert cli.run_scenario(p, tmp_path / "out") == 2
    assert cli.run_scenario(tmp_path / "missing.json", tmp_path / "out") == 2


def test_runtime_error_exit_3_with_report(tmp_path):
    cfg = json.loads(json.dumps(VORTEX))
    cfg["params"]["initial_states"] = [{"phi": 0.3, "c1_0": 1.0, "sigma": 0.2, "c0_02": 0.1, "z": [0.2] * 7}]
    cfg["params"]["t1"] = 1.0
    out = tmp_path / "out"
    with np.errstate(all="ignore"):
        assert cli.run_scenario(_write(tmp_path, cfg), out) == 3
    report = json.loads((out / "report.json").read_text())
    assert report["status"] == "error" and report["error_type"] == "NonFinite"


def test_refsolver_boundary_contact_exit_3(tmp_path):
    cfg = {
        "schema": "singdyn/1",
        "mode": "refsolver",
        "params": {
            "equation": "model1d",
            "t0": 1.0,
            "t1": 5.0,
            "grid": {"min": -1.2, "max": 1.2, "n": 65},
            "initial": {"type": "exact_wave", "eta": 1.0},
        },
    }
    out = tmp_path / "out"
    assert cli.run_scenario(_write(tmp_path, cfg), out) == 3
    assert json.loads((out / "report.json").read_text())["error_type"] == "BoundaryContact"


def test_compare_mode_report(tmp_path):
    cfg = {
        "schema": "singdyn/1",
        "mode": "compare",
        "params": {"t0": 1.0, "t1": 1.5, "n_out": 5, "grid": {"min": -2.0, "max": 2.0, "n": 257}},
    }
    out = tmp_path / "out"
    assert cli.run_scenario(_write(tmp_path, cfg), out) == 0
    names, rows = io.read_csv(out / "report.csv")
    assert names == ["t", "chain", "reference", "exact", "diff", "diff_cells"]
    assert rows.shape[0] == 6 and np.all(np.abs(rows[:, 5]) < 2.0)
    assert np.allclose(rows[:, 1], rows[:, 3], atol=1e-9)


def test_heatwave_and_refsolver_modes(tmp_path):
    for name in ("heatwave2d_circle", "refsolver_barenblatt"):
        out = tmp_path / name
        assert cli.run_scenario(cli.bundled_scenarios()[name], out) == 0
        report = json.loads((out / "report.json").read_text())
        for art in report["artifacts"]:
            assert (out / art).stat().st_size > 0


def test_identical_runs_are_byte_identical(tmp_path):
    cfg = _write(tmp_path, VORTEX)
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.run_scenario(cfg, a) == 0 and cli.run_scenario(cfg, b) == 0
    for f in sorted(p.name for p in a.iterdir()):
        assert (a / f).read_bytes() == (b / f).read_bytes()


# ---------------------------------------------------------------- entry point


def test_main_run_and_plot(tmp_path):
    out = tmp_path / "run"
    assert cli.main(["run", "--config", str(_write(tmp_path, CHAIN)), "--out", str(out)]) == 0
    svg = tmp_path / "p.svg"
    assert cli.main(["plot", "--in", str(out / "trajectory.csv"), "--out", str(svg), "--x", "t", "--y", "phi"]) == 0
    assert svg.read_text().count("<polyline") == 1
    assert cli.main(["plot", "--in", str(out / "trajectory.csv"), "--out", str(svg), "--y", "nope"]) == 2


def test_main_runs_bundled_scenario_by_name(tmp_path):
    assert cli.main(["run", "--config", "chain1d_exact", "--out", str(tmp_path / "o")]) == 0


def test_main_check_single_criterion(capsys):
    assert cli.main(["check", "--only", "7"]) == 0
    assert re.match(r"PASS \[7\]", capsys.readouterr().out)


def test_main_list(capsys):
    assert cli.main(["list"]) == 0
    assert "vortex_sweep" in capsys.readouterr().out


def test_console_script_exit_code(tmp_path):
    cfg = _write(tmp_path, {"schema": "singdyn/1"})
    r = subprocess.run(
        [sys.executable, "-m", "singdyn.cli", "run", "--config", str(cfg), "--out", str(tmp_path / "o")],
        capture_output=True,
        text=True,
    )
    assert r.returncode == 2 and "config error" in r.stderr


def test_bundled_scenarios_validate():
    scen = cli.bundled_scenarios()
    assert len(scen) >= 5
    modes = set()
    for path in scen.values():
        cfg = cli.load_config(path)
        modes.add(cfg["mode"])
    assert modes == {"chain1d", "heatwave2d", "vortex", "refsolver", "compare"}
