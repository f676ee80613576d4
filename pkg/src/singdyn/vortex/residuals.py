"""Independent check of the vortex dynamics against the defining equations.

The two defining equations are assembled directly from their definitions,
as truncated sums of homogeneous polynomials, without using any of the
reduced relations of the cascade:

    D0 = c0' + <V, grad c0> - Delta G0,
    D1 = -kappa G1 + 4 S (<grad S, V> c1 / 2 - <grad S, grad G1>)
         + 4 S^2 (-Delta G1 + c1' + <V, grad c1>),

with ``G0 = c0 - mu (c0^2 + S c1^2)``, ``G1 = (1 - 2 mu c0) c1``,
``kappa = 2 S Delta S - |grad S|^2`` and ``V = a' + grad w``.  Every
homogeneous part of ``D0`` up to degree 2 and of ``D1`` up to degree 5
must vanish.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from ..drift import DriftField
from ..errors import SingDynError
from ..polyalg import X2, HPoly, HPolyVec
from .cascade import CascadeBundle, build_cascade, p0_2_coeffs
from .dynamics import VortexTrajectory, identity_residual, rates_from_cascade
from .state import VortexState

MAXDEG = 5
D0_ORDERS = (0, 1, 2)
D1_ORDERS = (2, 3, 4, 5)

Series = Dict[int, HPoly]
VSeries = Dict[int, HPolyVec]


def _s_add(*terms: Series) -> Series:
    out: Series = {}
    for s in terms:
        for k, p in s.items():
            out[k] = out[k] + p if k in out else p
    return out


def _s_scale(s: Series, c: float) -> Series:
    return {k: p * c for k, p in s.items()}


def _s_mul(a: Series, b: Series) -> Series:
    out: Series = {}
    for i, p in a.items():
        for j, q in b.items():
            if i + j <= MAXDEG:
                out = _s_add(out, {i + j: p * q})
    return out


def _s_grad(s: Series) -> VSeries:
    return {k - 1: p.grad() for k, p in s.items() if k >= 1}


def _s_lap(s: Series) -> Series:
    return {k - 2: p.laplacian() for k, p in s.items() if k >= 2}


def _s_dot(a: VSeries, b: VSeries) -> Series:
    out: Series = {}
    for i, u in a.items():
        for j, v in b.items():
            if i + j <= MAXDEG:
                out = _s_add(out, {i + j: u.dot(v)})
    return out


def _s_mulvec(a: VSeries, s: Series) -> VSeries:
    out: VSeries = {}
    for i, u in a.items():
        for j, p in s.items():
            if i + j <= MAXDEG:
                term = u * p
                out[i + j] = out[i + j] + term if i + j in out else term
    return out


def _const(v: float) -> HPoly:
    return HPoly([v])


def defining_equations(
    s: VortexState, b: CascadeBundle, drift: DriftField, t: float, derivs: dict
) -> Dict[str, Series]:
    """Homogeneous parts of ``D0`` (degrees 0..2) and ``D1`` (2..5).

    ``derivs`` holds the time derivatives ``a_dot``, ``p0_1_dot`` (2),
    ``p0_2_dot`` (3 coefficients), ``c1_0_dot`` and ``p1_1_dot`` (2).
    """
    mu = s.mu
    C = s.c1_0
    om = drift.omega(t)
    V0 = np.asarray(derivs["a_dot"], dtype=float) + np.array([om["w10"], om["w01"]])
    V: VSeries = {0: HPolyVec.const(V0), 1: drift.W(2, t).grad(), 2: drift.W(3, t).grad()}

    c0: Series = {0: _const(1.0 / (2.0 * mu)), 1: b.p0_1, 2: b.p0_2, 3: b.p0_3}
    c1: Series = {0: _const(C), 1: b.p1_1, 2: b.p1_2}
    S: Series = {2: X2, 3: X2 * b.Q1, 4: X2 * b.Q2}
    c0_dot: Series = {
        0: _const(0.0),
        1: HPoly(derivs["p0_1_dot"]),
        2: HPoly(derivs["p0_2_dot"]),
    }
    c1_dot: Series = {0: _const(derivs["c1_0_dot"]), 1: HPoly(derivs["p1_1_dot"])}

    G0 = _s_add(c0, _s_scale(_s_add(_s_mul(c0, c0), _s_mul(S, _s_mul(c1, c1))), -mu))
    D0 = _s_add(c0_dot, _s_dot(V, _s_grad(c0)), _s_scale(_s_lap(G0), -1.0))

    G1 = _s_mul(_s_add({0: _const(1.0)}, _s_scale(c0, -2.0 * mu)), c1)
    gS = _s_grad(S)
    kappa = _s_add(_s_scale(_s_mul(S, _s_lap(S)), 2.0), _s_scale(_s_dot(gS, gS), -1.0))
    bracket1 = _s_add(_s_scale(_s_mul(_s_dot(gS, V), c1), 0.5), _s_scale(_s_dot(gS, _s_grad(G1)), -1.0))
    bracket2 = _s_add(_s_scale(_s_lap(G1), -1.0), c1_dot, _s_dot(V, _s_grad(c1)))
    D1 = _s_add(
        _s_scale(_s_mul(kappa, G1), -1.0),
        _s_scale(_s_mul(S, bracket1), 4.0),
        _s_scale(_s_mul(_s_mul(S, S), bracket2), 4.0),
    )
    return {
        "D0": {k: D0[k] for k in D0_ORDERS},
        "D1": {k: D1.get(k, HPoly(np.zeros(k + 1))) for k in D1_ORDERS},
    }


def _norms(eqs) -> Dict[str, np.ndarray]:
    return {
        "D0": np.array([np.max(np.abs(eqs["D0"][k].coeffs)) for k in D0_ORDERS]),
        "D1": np.array([np.max(np.abs(eqs["D1"][k].coeffs)) for k in D1_ORDERS]),
    }


def exact_derivatives(s: VortexState, drift: DriftField, t: float, b: Optional[CascadeBundle] = None) -> dict:
    """Time derivatives of the Taylor data implied by the vortex rates.

    The rates of ``c0_20`` and ``c0_11`` come from complex-step
    differentiation of their algebraic expressions, so they are exact to
    rounding.
    """
    if b is None:
        b = build_cascade(s, drift, t)
    r = rates_from_cascade(s, b, drift, t)
    sn, cs = np.sin(s.phi), np.cos(s.phi)
    p01_dot = np.array(
        [r.c1_0_dot * sn + s.c1_0 * r.phi_dot * cs, r.c1_0_dot * cs - s.c1_0 * r.phi_dot * sn]
    )
    om = drift.omega(t)
    omd = drift.omega(t, 1)
    h = 1e-30
    c20, c11 = p0_2_coeffs(
        s.sigma + 1j * h * r.sigma_dot,
        s.c0_02 + 1j * h * r.c0_02_dot,
        s.phi + 1j * h * r.phi_dot,
        s.c1_0 + 1j * h * r.c1_0_dot,
        om["w20"] + 1j * h * omd["w20"],
        om["w11"] + 1j * h * omd["w11"],
        s.mu,
    )
    p02_dot = np.array([np.imag(c20) / h, np.imag(c11) / h, r.c0_02_dot])
    return {
        "a_dot": r.a_dot,
        "p0_1_dot": p01_dot,
        "p0_2_dot": p02_dot,
        "c1_0_dot": r.c1_0_dot,
        "p1_1_dot": r.p1_1_dot,
    }


def defining_residuals(
    s: VortexState, drift: DriftField, t: float, derivs: Optional[dict] = None
) -> Dict[str, np.ndarray]:
    """Max-norm of each homogeneous part of ``D0`` and ``D1`` at one state.

    Without ``derivs`` the exact rates are used and every entry must
    vanish to rounding.
    """
    b = build_cascade(s, drift, t)
    if derivs is None:
        derivs = exact_derivatives(s, drift, t, b)
    return _norms(defining_equations(s, b, drift, t, derivs))


@dataclass
class ResidualSeries:
    times: np.ndarray  # interior times used for D0 / D1
    D0: np.ndarray  # shape (n, 3), orders 0..2
    D1: np.ndarray  # shape (n, 4), orders 2..5
    identity_times: np.ndarray
    identity: np.ndarray  # shape (m, 2), every recorded step

    def d0(self, k: int) -> np.ndarray:
        return self.D0[:, D0_ORDERS.index(k)]

    def d1(self, k: int) -> np.ndarray:
        return self.D1[:, D1_ORDERS.index(k)]


def consistency_residuals(traj: VortexTrajectory, drift: Optional[DriftField] = None) -> ResidualSeries:
    """Residuals of the defining equations along a trajectory.

    Time derivatives are centred differences of the reconstructed Taylor
    data between neighbouring steps, so the residuals are O(dt^2) on a
    smooth trajectory.  The vector relation fixing ``sigma'`` and ``q02``
    is evaluated at every step with the exact ``sigma'``.
    """
    drift = traj.drift if drift is None else drift
    n = traj.times.size
    if n < 3:
        raise SingDynError("trajectory too short for centred differences")
    states = [traj.state(i) for i in range(n)]
    bundles = [build_cascade(states[i], drift, traj.times[i]) for i in range(n)]
    ident = np.empty((n, 2))
    for i in range(n):
        r = rates_from_cascade(states[i], bundles[i], drift, traj.times[i])
        ident[i] = identity_residual(states[i], bundles[i], r.sigma_dot)

    a = traj.states[:, 0:2]
    p01 = np.array([b.p0_1.coeffs for b in bundles])
    p02 = np.array([b.p0_2.coeffs for b in bundles])
    C = traj.states[:, 3]
    p11 = traj.states[:, 6:8]
    d0 = np.empty((n - 2, len(D0_ORDERS)))
    d1 = np.empty((n - 2, len(D1_ORDERS)))
    for i in range(1, n - 1):
        h2 = traj.times[i + 1] - traj.times[i - 1]
        derivs = {
            "a_dot": (a[i + 1] - a[i - 1]) / h2,
            "p0_1_dot": (p01[i + 1] - p01[i - 1]) / h2,
            "p0_2_dot": (p02[i + 1] - p02[i - 1]) / h2,
            "c1_0_dot": (C[i + 1] - C[i - 1]) / h2,
            "p1_1_dot": (p11[i + 1] - p11[i - 1]) / h2,
        }
        nm = _norms(defining_equations(states[i], bundles[i], drift, traj.times[i], derivs))
        d0[i - 1] = nm["D0"]
        d1[i - 1] = nm["D1"]
    return ResidualSeries(traj.times[1:-1].copy(), d0, d1, traj.times.copy(), ident)
