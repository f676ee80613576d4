"""Heat-wave chain of the one-dimensional model equation ``u_t = (u^2)_xx / 2``.

Near a front ``x = phi(t)`` the solution is expanded as

    u = a1 (x - phi)_+ + a2 (x - phi)_+^2 + ...

and matching powers of ``(x - phi)`` gives the chain

    phi' = -a1,
    a_k' = -(k+1) a1 a_{k+1} + (k+2)(k+1)/2 * sum_{i+j=k+2} a_i a_j.

Truncation at order N sets every a_k with k > N to zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .integrate import rk4


@dataclass(frozen=True)
class ChainState1D:
    phi: float
    a: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=float).reshape(-1)
        if a.size < 1:
            raise ValueError("truncation order N must be at least 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "phi", float(self.phi))

    @property
    def order(self) -> int:
        return self.a.size

    def as_vector(self) -> np.ndarray:
        return np.concatenate(([self.phi], self.a))

    @classmethod
    def from_vector(cls, y) -> "ChainState1D":
        return cls(y[0], y[1:])


@dataclass(frozen=True)
class ExactWaveParams:
    eta: float = 1.0
    t0: float = 1.0

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError("eta must be positive")
        if not self.t0 > 0:
            raise ValueError("t0 must be positive")


def _make_rhs(n: int):
    k = np.arange(1, n + 1)
    lin = -(k + 1.0)
    quad_coef = 0.5 * (k + 2.0) * (k + 1.0)
    # conv[m] = sum_{i+j=m+2} a_i a_j (1-based i, j); a_k uses m = k
    idx = k[k < 2 * n - 1]

    def rhs(t, y):
        a = y[1:]
        out = np.empty_like(y)
        out[0] = -a[0]
        conv = np.convolve(a, a)
        quad = np.zeros(n)
        quad[: idx.size] = conv[idx]
        nxt = np.zeros(n)
        nxt[:-1] = a[1:]
        out[1:] = lin * a[0] * nxt + quad_coef * quad
        return out

    return rhs


def _rhs_vector(y: np.ndarray) -> np.ndarray:
    return _make_rhs(y.size - 1)(0.0, y)


def chain_rhs_1d(s: ChainState1D) -> Tuple[float, np.ndarray]:
    """Time derivatives ``(phi', a')`` of the truncated chain."""
    d = _rhs_vector(s.as_vector())
    return float(d[0]), d[1:]


def exact_wave(p: ExactWaveParams, x, t: float):
    """The exact heat wave ``(eta^2 t^(2/3) - x^2)_+ / (6t)``."""
    if not t > 0:
        raise ValueError("exact wave is defined for t > 0 only")
    x = np.asarray(x, dtype=float)
    u = (p.eta ** 2 * t ** (2.0 / 3.0) - x ** 2) / (6.0 * t)
    u = np.where(np.abs(x) < p.eta * t ** (1.0 / 3.0), u, 0.0)
    return float(u) if u.ndim == 0 else u


def exact_chain_state(p: ExactWaveParams, t: float, order: int = 3) -> ChainState1D:
    """Chain data of the exact wave at its left front at time ``t``."""
    a = np.zeros(order)
    a[0] = p.eta / (3.0 * t ** (2.0 / 3.0))
    if order > 1:
        a[1] = -1.0 / (6.0 * t)
    return ChainState1D(-p.eta * t ** (1.0 / 3.0), a)


@dataclass
class ChainTrajectory:
    times: np.ndarray
    states: np.ndarray  # columns phi, a1..aN
    events: List[Tuple[float, str]] = field(default_factory=list)

    @property
    def phi(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def a(self) -> np.ndarray:
        return self.states[:, 1:]

    def state(self, i: int) -> ChainState1D:
        return ChainState1D.from_vector(self.states[i])

    def columns(self):
        names = ["t", "phi"] + [f"a{k}" for k in range(1, self.states.shape[1])]
        return names, np.column_stack([self.times, self.states])


def run_chain_1d(s0: ChainState1D, t0: float, t1: float, dt: float = 1e-3) -> ChainTrajectory:
    """RK4 trajectory of the truncated chain, one record per step.

    A sign change or zero of ``a1`` (the front stops degenerating) is
    recorded in ``events``; integration continues.
    """
    if not t0 > 0:
        raise ValueError("t0 must be positive")
    with np.errstate(over="ignore", invalid="ignore"):  # blow-up raises NonFinite
        times, states = rk4(_make_rhs(s0.order), s0.as_vector(), t0, t1, dt)
    traj = ChainTrajectory(times, states)
    a1 = states[:, 1]
    for i in range(1, a1.size):
        if a1[i - 1] != 0.0 and (a1[i] == 0.0 or np.sign(a1[i]) != np.sign(a1[i - 1])):
            traj.events.append((float(times[i]), "a1 reached zero"))
    return traj


def free_boundary_residual(u_left_limit: float, normal_derivative: float, phi_dot: float):
    """Residuals of the free-boundary conditions at a front.

    Returns ``(u - 0, phi_dot - du/dnu)`` where both ``u`` and the outward
    normal derivative are limits taken from inside the support.
    """
    return float(u_left_limit), float(phi_dot - normal_derivative)
