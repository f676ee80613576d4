"""Built-in acceptance suite (``singdyn check``).

Each check returns a :class:`CheckResult`; thresholds are fixed constants
below and are never adapted to the measured values.
"""
from __future__ import annotations

import filecmp
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import chain1d, heatwave2d, refsolver
from .drift import DriftField
from .polyalg import HarmonicSpec, HPoly, harmonic_eval
from .vortex import (
    VortexState,
    c1_0_dot_forms,
    cascade_matrices,
    consistency_residuals,
    rotate_state,
    rotation,
    run_vortex,
)

# thresholds
CHAIN_ABS_TOL = 1e-6
CHAIN_MAX_SECONDS = 1.0
FRONT_MAX_CELLS = 2.0
FRONT_MAX_SECONDS = 30.0
SPEED_RTOL = 0.05
SPEED_MAX_SECONDS = 60.0
MIN_ORDER = 1.8
IDENTITY_TOL = 1e-10
VORTEX_MAX_SECONDS = 10.0
EQUIVARIANCE_TOL = 1e-8
CROSS_FORM_RTOL = 1e-12
ALGEBRA_RTOL = 1e-12

# numerical setups
FRONT_REL_TOL = 1e-3
VORTEX_GENERIC = dict(phi=0.3, c1_0=1.0, sigma=0.2, c0_02=0.1, p1_1=[0.1, -0.05], mu=1.0)
EQUIVARIANCE_DT = 2e-3


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} [{self.number}] {self.name}: {self.detail} ({self.seconds:.2f} s)"


def _timed(fn: Callable[[], tuple]) -> tuple:
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


# ------------------------------------------------------------------ 1


def check_exact_chain() -> CheckResult:
    """Chain of order 3 from the exact wave, eta = 1, t 1 -> 8, dt = 1e-3."""
    wave = chain1d.ExactWaveParams(1.0, 1.0)

    def run():
        return chain1d.run_chain_1d(chain1d.exact_chain_state(wave, 1.0, 3), 1.0, 8.0, 1e-3)

    traj, sec = _timed(run)
    phi, a1, a2 = traj.states[-1, 0], traj.states[-1, 1], traj.states[-1, 2]
    errs = [abs(phi + 2.0), abs(a1 - 1.0 / 12.0), abs(a2 + 1.0 / 48.0)]
    ok = max(errs) <= CHAIN_ABS_TOL and sec < CHAIN_MAX_SECONDS
    detail = f"|err| phi={errs[0]:.2e} a1={errs[1]:.2e} a2={errs[2]:.2e} (tol {CHAIN_ABS_TOL:g}), runtime < {CHAIN_MAX_SECONDS:g} s"
    return CheckResult(1, "exact-family reproduction", ok, detail, sec)


# ------------------------------------------------------------------ 2


def check_front_agreement(n_nodes: int = 2048, n_out: int = 20) -> CheckResult:
    """Finite-volume model equation vs exact front and vs the chain, t in [1, 2]."""
    from .cli import compare_fronts

    grid = {"min": -2.0, "max": 2.0, "n": n_nodes}
    (names, rows), sec = _timed(lambda: compare_fronts(1.0, 1.0, 2.0, grid, 3, 1e-3, n_out, FRONT_REL_TOL))
    h = 4.0 / (n_nodes - 1)
    ref_vs_exact = float(np.max(np.abs(rows[:, 2] - rows[:, 3]))) / h
    chain_vs_ref = float(np.max(np.abs(rows[:, 5])))
    ok = ref_vs_exact <= FRONT_MAX_CELLS and chain_vs_ref <= FRONT_MAX_CELLS and sec < FRONT_MAX_SECONDS
    detail = (
        f"max |FD - exact| = {ref_vs_exact:.2f} cells, max |chain - FD| = {chain_vs_ref:.2f} cells "
        f"(tol {FRONT_MAX_CELLS:g}) over {rows.shape[0]} times"
    )
    return CheckResult(2, "chain vs PDE front", ok, detail, sec)


# ------------------------------------------------------------------ 3


def radial_speed_law(
    mu: float = 1.0,
    n: int = 401,
    r_max: float = 2.0,
    depth: float = 0.0625,
    sample_times: Sequence[float] = (1.5, 2.0, 2.5, 3.0, 3.5),
    window: float = 0.1,
):
    """Measured front speed vs the free-boundary law on a radial solve.

    Initial data (at t = 1) is a smooth cap ``c = 1/(2 mu) - depth (1 - r^2)_+^2``.
    The speed is the centred difference of extracted front radii at
    ``t -+ window``; the law is ``2 mu dc/dnu`` at the front, with the
    outward normal derivative fitted from inside the support.
    Returns ``(measured, predicted)`` arrays.
    """
    g0 = refsolver.FieldGrid.radial(
        r_max, n, mu, lambda r: 0.5 / mu - depth * np.maximum(1.0 - r * r, 0.0) ** 2, t=1.0
    )
    out = sorted({round(t + d, 12) for t in sample_times for d in (-window, 0.0, window)})
    snaps = refsolver.solve_reduced_2d_radial(g0, mu, max(out), out)
    by_t = {round(s.t, 12): s for s in snaps}
    meas, pred = [], []
    for t in sample_times:
        rm = refsolver.extract_front(by_t[round(t - window, 12)], rel_tol=FRONT_REL_TOL)[0]
        rp = refsolver.extract_front(by_t[round(t + window, 12)], rel_tol=FRONT_REL_TOL)[0]
        s = by_t[round(t, 12)]
        R = refsolver.extract_front(s, rel_tol=FRONT_REL_TOL)[0]
        meas.append((rp - rm) / (2 * window))
        pred.append(heatwave2d.normal_velocity(refsolver.inward_normal_derivative(s, R), 0.0, mu))
    return np.array(meas), np.array(pred)


def check_speed_law() -> CheckResult:
    (meas, pred), sec = _timed(radial_speed_law)
    rel = np.abs(meas - pred) / np.abs(pred)
    ok = bool(np.all(rel <= SPEED_RTOL)) and sec < SPEED_MAX_SECONDS
    detail = "relative errors " + ", ".join(f"{e:.3%}" for e in rel) + f" (tol {SPEED_RTOL:.0%})"
    return CheckResult(3, "front-velocity law", ok, detail, sec)


# ------------------------------------------------------------------ 4


def vortex_convergence(dts=(1e-2, 5e-3, 2.5e-3), t1: float = 1.0, sample_step: float = 1e-2):
    """Defining-equation residuals at common times for a sequence of steps.

    Returns ``(orders, max_identity)`` where ``orders`` maps a label
    (``"D0 k=0"`` ... ``"D1 k=5"``) to the measured orders between
    consecutive steps (log2 of the max-residual ratio).
    """
    s0 = VortexState(a=[0.0, 0.0], **VORTEX_GENERIC)
    drift = DriftField.zero()
    maxres: Dict[str, List[float]] = {}
    ident = 0.0
    for dt in dts:
        traj = run_vortex(s0, drift, 0.0, t1, dt)
        rs = consistency_residuals(traj, drift)
        ident = max(ident, float(np.max(np.abs(rs.identity))))
        # compare at the interior times shared by all runs
        k = int(round(sample_step / dt))
        sel = np.arange(k - 1, rs.times.size, k)
        sel = sel[rs.times[sel] < t1 - 0.5 * dt]
        for j in (0, 1, 2):
            maxres.setdefault(f"D0 k={j}", []).append(float(np.max(rs.d0(j)[sel])))
        for j in (4, 5):
            maxres.setdefault(f"D1 k={j}", []).append(float(np.max(rs.d1(j)[sel])))
    orders = {lbl: np.log2(np.array(v[:-1]) / np.array(v[1:])) for lbl, v in maxres.items()}
    return orders, ident, maxres


def check_vortex_oracle() -> CheckResult:
    (orders, ident, _), sec = _timed(vortex_convergence)
    worst = min(float(np.min(o)) for o in orders.values())
    ok = worst >= MIN_ORDER and ident < IDENTITY_TOL and sec < VORTEX_MAX_SECONDS
    detail = (
        "orders "
        + ", ".join(f"{lbl}: " + "/".join(f"{x:.2f}" for x in o) for lbl, o in orders.items())
        + f"; min {worst:.2f} (>= {MIN_ORDER}); identity max {ident:.1e} (< {IDENTITY_TOL:g})"
    )
    return CheckResult(4, "vortex defining-equation oracle", ok, detail, sec)


# ------------------------------------------------------------------ 5


def equivariance_deviation(theta: float, dt: float = EQUIVARIANCE_DT, t1: float = 1.0) -> float:
    s0 = VortexState(a=[0.2, -0.1], **VORTEX_GENERIC)
    drift = DriftField.zero()
    base = run_vortex(s0, drift, 0.0, t1, dt)
    rot = run_vortex(rotate_state(s0, theta), drift, 0.0, t1, dt)
    expected = base.path @ rotation(theta).T
    return float(np.max(np.abs(rot.path - expected)))


def check_equivariance() -> CheckResult:
    thetas = (np.pi / 6, np.pi / 2, np.pi)
    devs, sec = _timed(lambda: [equivariance_deviation(th) for th in thetas])
    ok = max(devs) < EQUIVARIANCE_TOL
    detail = (
        "max deviation "
        + ", ".join(f"{lbl}: {d:.1e}" for lbl, d in zip(("pi/6", "pi/2", "pi"), devs))
        + f" (tol {EQUIVARIANCE_TOL:g}, dt {EQUIVARIANCE_DT:g})"
    )
    return CheckResult(5, "rotation equivariance", ok, detail, sec)


# ------------------------------------------------------------------ 6


def random_vortex_state(rng: np.random.Generator, z: bool = True) -> VortexState:
    """A random admissible state: ``|c1_0|`` in [0.3, 2], moderate other data."""
    C = rng.uniform(0.3, 2.0) * rng.choice([-1.0, 1.0])
    return VortexState(
        a=rng.normal(size=2),
        phi=rng.uniform(-np.pi, np.pi),
        c1_0=C,
        sigma=rng.normal(),
        c0_02=rng.normal(),
        p1_1=rng.normal(size=2),
        z=rng.normal(size=7) if z else np.zeros(7),
        mu=rng.uniform(0.2, 3.0),
    )


def random_drift(rng: np.random.Generator) -> DriftField:
    names = ("w10", "w01", "w20", "w11", "w30", "w03")
    return DriftField.from_mapping({n: list(rng.normal(size=2)) for n in names})


def check_cross_form(n: int = 1000, seed: int = 20240601) -> CheckResult:
    rng = np.random.default_rng(seed)

    def run():
        worst = 0.0
        for _ in range(n):
            s = random_vortex_state(rng)
            a, b = c1_0_dot_forms(s, random_drift(rng), rng.uniform(0, 2))
            worst = max(worst, abs(a - b) / max(abs(a), abs(b), 1e-300))
        return worst

    worst, sec = _timed(run)
    ok = worst <= CROSS_FORM_RTOL
    return CheckResult(6, "c1_0 rate cross-form", ok, f"max relative difference {worst:.1e} over {n} states (tol {CROSS_FORM_RTOL:g})", sec)


# ------------------------------------------------------------------ 7


def algebraic_invariants(n: int = 200, seed: int = 7):
    """Euler identity, harmonic Laplacians and the cascade determinants.

    Returns the worst relative error of each family.
    """
    rng = np.random.default_rng(seed)
    euler = 0.0
    for _ in range(n):
        d = int(rng.integers(0, 7))
        p = HPoly(rng.normal(size=d + 1))
        g = p.grad()
        lhs = HPoly([1.0, 0.0]) * g.u + HPoly([0.0, 1.0]) * g.v if d > 0 else HPoly(np.zeros(1))
        euler = max(euler, float(np.max(np.abs(lhs.coeffs - d * p.coeffs))) / max(1.0, float(np.max(np.abs(p.coeffs)))))
    lap = 0.0
    for _ in range(n):
        k = int(rng.integers(2, 9))
        npar = 2
        spec = HarmonicSpec(k, tuple(tuple(rng.normal(size=3)) for _ in range(npar)))
        t = rng.uniform(-2, 2)
        for der in (0, 1):
            W = harmonic_eval(spec, t, der)
            lap = max(lap, float(np.max(np.abs(W.laplacian().coeffs))) / max(1.0, float(np.max(np.abs(W.coeffs)))))
    dets = 0.0
    for _ in range(n):
        s = random_vortex_state(rng)
        A, B1, _, _ = cascade_matrices(s)
        c10 = s.grad_p0_1[0]
        d = 5 * s.c1_0 ** 2 + 2 * c10 ** 2
        dets = max(
            dets,
            abs(np.linalg.det(A) - s.c1_0 ** 2) / s.c1_0 ** 2,
            abs(np.linalg.det(B1) - 6 * d) / (6 * d),
        )
    return euler, lap, dets


def check_algebra() -> CheckResult:
    (euler, lap, dets), sec = _timed(algebraic_invariants)
    ok = max(euler, lap, dets) <= ALGEBRA_RTOL
    detail = f"Euler {euler:.1e}, harmonic Laplacian {lap:.1e}, determinants {dets:.1e} (tol {ALGEBRA_RTOL:g})"
    return CheckResult(7, "algebraic invariants", ok, detail, sec)


# ------------------------------------------------------------------ 8


def _same_tree(a: Path, b: Path) -> bool:
    fa = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
    fb = sorted(p.relative_to(b) for p in b.rglob("*") if p.is_file())
    if fa != fb or not fa:
        return False
    return all(filecmp.cmp(a / f, b / f, shallow=False) for f in fa)


def check_determinism() -> CheckResult:
    from .cli import EXIT_OK, bundled_scenarios, run_scenario

    def run():
        bad = []
        scen = bundled_scenarios()
        with tempfile.TemporaryDirectory() as tmp:
            for name, path in scen.items():
                a, b = Path(tmp) / name / "a", Path(tmp) / name / "b"
                ok = run_scenario(path, a) == EXIT_OK and run_scenario(path, b) == EXIT_OK
                if not (ok and _same_tree(a, b)):
                    bad.append(name)
        return scen, bad

    (scen, bad), sec = _timed(run)
    ok = not bad and len(scen) > 0
    detail = f"{len(scen) - len(bad)}/{len(scen)} bundled scenarios byte-identical" + (f"; differing: {bad}" if bad else "")
    return CheckResult(8, "determinism", ok, detail, sec)


CHECKS = {
    1: check_exact_chain,
    2: check_front_agreement,
    3: check_speed_law,
    4: check_vortex_oracle,
    5: check_equivariance,
    6: check_cross_form,
    7: check_algebra,
    8: check_determinism,
}


def run_all(only: Optional[Sequence[int]] = None, echo: bool = True) -> List[CheckResult]:
    results = []
    for k, fn in CHECKS.items():
        if only and k not in only:
            continue
        try:
            r = fn()
        except Exception as exc:  # a crash is a failure, reported as such
            r = CheckResult(k, fn.__name__, False, f"raised {type(exc).__name__}: {exc}")
        if echo:
            print(r.line(), flush=True)
        results.append(r)
    return results
