"""Right-hand side and time integration of the truncated vortex system."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from ..drift import DriftField
from ..errors import DegenerateVortex, NonFinite
from ..integrate import rk4
from .cascade import CascadeBundle, build_cascade
from .state import Y_NAMES, VortexState

#: relative tolerance of the cross-check between the two c1_0 rate formulas
C1_0_DOT_RTOL = 1e-9
#: a run stops when |c1_0| falls below this fraction of its initial value
DEGENERATE_RATIO = 1e-8


class VortexRates(NamedTuple):
    a_dot: np.ndarray
    phi_dot: float
    c1_0_dot: float
    sigma_dot: float
    c0_02_dot: float
    p1_1_dot: np.ndarray

    def as_vector(self) -> np.ndarray:
        return np.concatenate(
            [self.a_dot, [self.phi_dot, self.c1_0_dot, self.sigma_dot, self.c0_02_dot], self.p1_1_dot]
        )


def c1_0_dot_closed(s: VortexState, drift: DriftField, t: float) -> float:
    """Closed form ``mu c1_0 (9/d') (-sigma sin 2phi + 12 c0_02 - 2 w20/mu)``."""
    w20 = drift.omega(t)["w20"]
    dp = np.cos(2 * s.phi) - 6.0
    return s.mu * s.c1_0 * (9.0 / dp) * (
        -s.sigma * np.sin(2 * s.phi) + 12.0 * s.c0_02 - 2.0 * w20 / s.mu
    )


def c1_0_dot_forms(s: VortexState, drift: DriftField, t: float):
    """Both evaluations of the ``c1_0`` rate: from ``Delta p0_2`` and closed form."""
    b = build_cascade(s, drift, t)
    return b.c1_0_dot, c1_0_dot_closed(s, drift, t)


def rates_from_cascade(s: VortexState, b: CascadeBundle, drift: DriftField, t: float) -> VortexRates:
    mu = s.mu
    C = s.c1_0
    C2 = C * C
    gp = b.grad_p0_1
    gperp = b.grad_p0_1_perp
    om = drift.omega(t)
    a_dot = -6 * mu * gp - np.array([om["w10"], om["w01"]])
    phi_dot = -7 * mu * s.sigma
    lap_p02 = 2 * (b.p0_2.coeffs[0] + b.p0_2.coeffs[2])
    sigma_dot = 7 * mu * s.sigma * lap_p02 + float(np.dot(b.calF1, gperp)) / C2
    c0_02_dot = -(7 * mu * s.sigma ** 2 + b.M.coeffs[2] + float(np.dot(b.calF1, gp)) / (2 * C2))
    p1_1_dot = mu * b.calF - 6 * mu * C * b.q_02 * gp
    return VortexRates(a_dot, phi_dot, b.c1_0_dot, sigma_dot, c0_02_dot, p1_1_dot)


def vortex_rhs(s: VortexState, drift: DriftField, t: float) -> VortexRates:
    """Rates of ``(a, phi, c1_0, sigma, c0_02, grad p1_1)``.

    The ``c1_0`` rate is computed from the Laplacian of ``p0_2`` and
    cross-checked against its closed form in ``(phi, sigma, c0_02)``.
    """
    b = build_cascade(s, drift, t)
    r = rates_from_cascade(s, b, drift, t)
    closed = c1_0_dot_closed(s, drift, t)
    scale = max(abs(closed), abs(r.c1_0_dot), 1e-300)
    if abs(closed - r.c1_0_dot) > C1_0_DOT_RTOL * scale and abs(closed - r.c1_0_dot) > 1e-14 * abs(s.mu * s.c1_0):
        raise ArithmeticError(
            f"c1_0 rate forms disagree: {r.c1_0_dot!r} vs {closed!r}"
        )
    return r


def identity_residual(s: VortexState, b: CascadeBundle, sigma_dot: float) -> np.ndarray:
    """Left side minus right side of the vector relation that fixes
    ``sigma'`` and ``q02``:

    ``(sigma' - 7 mu sigma Delta p0_2) grad p0_1^perp
    + (32 mu c1_0^2 q02 - 14 mu sigma^2) grad p0_1 - calF1``.
    """
    mu = s.mu
    lap_p02 = 2 * (b.p0_2.coeffs[0] + b.p0_2.coeffs[2])
    lhs = (sigma_dot - 7 * mu * s.sigma * lap_p02) * b.grad_p0_1_perp + (
        32 * mu * s.c1_0 ** 2 * b.q_02 - 14 * mu * s.sigma ** 2
    ) * b.grad_p0_1
    return lhs - b.calF1


@dataclass
class VortexTrajectory:
    times: np.ndarray
    states: np.ndarray  # columns as Y_NAMES
    template: VortexState
    drift: DriftField

    def state(self, i: int) -> VortexState:
        return self.template.with_vector(self.states[i])

    @property
    def a(self) -> np.ndarray:
        return self.states[:, 0:2]

    @property
    def path(self) -> np.ndarray:
        """Position of the singular point, ``x = -a(t)``."""
        return -self.states[:, 0:2]

    def columns(self, with_residual: bool = True):
        names = ["t", "a1", "a2", "phi", "c1_0", "sigma", "c0_02", "c1_10", "c1_01"]
        cols = [self.times, self.states]
        if with_residual:
            res = np.array(
                [
                    np.max(np.abs(identity_residual(self.state(i), *_cascade_and_sigma_dot(self, i))))
                    for i in range(self.times.size)
                ]
            )
            names.append("identity_residual")
            cols.append(res)
        return names, np.column_stack(cols)


def _cascade_and_sigma_dot(traj: VortexTrajectory, i: int):
    s = traj.state(i)
    b = build_cascade(s, traj.drift, traj.times[i])
    r = rates_from_cascade(s, b, traj.drift, traj.times[i])
    return b, r.sigma_dot


def run_vortex(
    s0: VortexState, drift: DriftField, t0: float, t1: float, dt: float, z: Optional[np.ndarray] = None
) -> VortexTrajectory:
    """RK4 trajectory of the core state; the tail ``z`` is held constant.

    Raises NonFinite on blow-up and DegenerateVortex once ``|c1_0|`` drops
    below ``1e-8`` of its initial magnitude; both carry the partial
    trajectory as ``err.partial``.
    """
    if z is not None:
        s0 = VortexState(s0.a, s0.phi, s0.c1_0, s0.sigma, s0.c0_02, s0.p1_1, z, s0.mu)
    build_cascade(s0, drift, t0)  # validates the initial data
    floor = DEGENERATE_RATIO * abs(s0.c1_0)

    def f(t, y):
        if not np.all(np.isfinite(y)):
            raise NonFinite(f"non-finite state near t={t:.6g}", t=t)
        if not abs(y[3]) > floor:
            raise DegenerateVortex(f"|c1_0| fell below {floor:.3e} near t={t:.6g}")
        return vortex_rhs(s0.with_vector(y), drift, t).as_vector()

    def check(t, y):
        if not abs(y[3]) > floor:
            raise DegenerateVortex(f"|c1_0| fell below {floor:.3e} at t={t:.6g}")

    # blow-up is detected and reported as NonFinite, so overflow is not warned about
    with np.errstate(over="ignore", invalid="ignore"):
        times, states = rk4(f, s0.as_vector(), t0, t1, dt, check=check)
    return VortexTrajectory(times, states, s0, drift)


__all__ = [
    "VortexRates",
    "VortexTrajectory",
    "Y_NAMES",
    "c1_0_dot_closed",
    "c1_0_dot_forms",
    "identity_residual",
    "rates_from_cascade",
    "run_vortex",
    "vortex_rhs",
]
