"""Heat-wave fronts of ``c_t + <grad w, grad c> = Delta(c - mu c^2)`` in 2D.

Near the front ``Gamma_t = {S = 0}`` the solution looks like
``c = 1/(2 mu) + a1 S_+ + a2 S_+^2 + ...`` with ``a1 < 0`` on the side
``S > 0``.  Two descriptions of the front are provided:

* graph charts ``S = x1 - phi(x2, t)``, evolved in time by RK4 with
  finite differences along the ``x2`` grid;
* time of arrival ``S = t - Phi(x)``, used as a residual check on sampled
  data.

The outward normal is ``nu = -grad S / |grad S|`` and the front moves with
normal speed ``S_t / |grad S|``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .drift import DriftField
from .errors import DegenerateExpansion, GraphLost
from .integrate import rk4

GRAPH_MAX_SLOPE = 10.0


@dataclass(frozen=True)
class FrontGraph:
    """Front ``x1 = phi(x2)`` with its first two expansion coefficients per node.

    With ``periodic=True`` the grid is one period long and excludes the
    right endpoint; otherwise the ends use one-sided second-order stencils.
    """

    x2: np.ndarray
    phi: np.ndarray
    a1: np.ndarray
    a2: Optional[np.ndarray] = None
    mu: float = 1.0
    periodic: bool = True

    def __post_init__(self):
        x2 = np.asarray(self.x2, dtype=float)
        n = x2.size
        if x2.ndim != 1 or n < 4:
            raise ValueError("x2 grid needs at least 4 nodes")
        h = np.diff(x2)
        if not (np.all(h > 0) and np.allclose(h, h[0], rtol=1e-9)):
            raise ValueError("x2 grid must be uniform with positive spacing")

        def arr(v, default=0.0):
            a = np.full(n, default) if v is None else np.broadcast_to(np.asarray(v, dtype=float), (n,)).copy()
            return a

        a1 = arr(self.a1)
        if np.any(a1 >= 0):
            raise DegenerateExpansion("a1 must be negative at every node")
        if not self.mu > 0:
            raise ValueError("mu must be positive")
        object.__setattr__(self, "x2", x2)
        object.__setattr__(self, "phi", arr(self.phi))
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "a2", arr(self.a2))

    @property
    def h(self) -> float:
        return float(self.x2[1] - self.x2[0])

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.phi, self.a1, self.a2])

    def with_vector(self, y: np.ndarray) -> "FrontGraph":
        n = self.x2.size
        return FrontGraph(self.x2, y[:n], y[n : 2 * n], y[2 * n :], self.mu, self.periodic)


def _d1(f: np.ndarray, h: float, periodic: bool) -> np.ndarray:
    if periodic:
        return (np.roll(f, -1) - np.roll(f, 1)) / (2 * h)
    d = np.empty_like(f)
    d[1:-1] = (f[2:] - f[:-2]) / (2 * h)
    d[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h)
    d[-1] = (3 * f[-1] - 4 * f[-2] + f[-3]) / (2 * h)
    return d


def _d2(f: np.ndarray, h: float, periodic: bool) -> np.ndarray:
    if periodic:
        return (np.roll(f, -1) - 2 * f + np.roll(f, 1)) / h ** 2
    d = np.empty_like(f)
    d[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / h ** 2
    d[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / h ** 2
    d[-1] = (2 * f[-1] - 5 * f[-2] + 4 * f[-3] - f[-4]) / h ** 2
    return d


class GraphRates(NamedTuple):
    phi_dot: np.ndarray
    a1_dot: np.ndarray
    a2_dot: np.ndarray


def front_rhs_graph(f: FrontGraph, drift: DriftField, t: float) -> GraphRates:
    """Time derivatives of ``phi``, ``a1`` and ``a2`` at every node.

    The chain is truncated after ``a2``: the ``a2`` equation is the exact
    second-order relation in the graph chart with ``a3 = 0``.  Drift terms
    are Taylor coefficients of ``grad w`` in ``x1`` evaluated at
    ``(phi(x2), x2)``.
    """
    if np.any(f.a1 >= 0):
        raise DegenerateExpansion("a1 must be negative at every node")
    mu, h, per = f.mu, f.h, f.periodic
    phi, a1, a2 = f.phi, f.a1, f.a2
    py = _d1(phi, h, per)
    pyy = _d2(phi, h, per)
    a1y = _d1(a1, h, per)
    a2y = _d1(a2, h, per)
    a1sq_y = _d1(a1 * a1, h, per)
    a1sq_yy = _d2(a1 * a1, h, per)
    a1a2_y = _d1(a1 * a2, h, per)
    g2 = 1.0 + py * py  # |grad S|^2

    if drift.is_zero():
        z = np.zeros_like(phi)
        w10 = w01 = w20 = w11 = w30 = w21 = z
    else:
        d = drift.derivatives_upto(phi, f.x2, t, 3)
        w10, w01 = d[(0,)], d[(1,)]
        w20, w11 = d[(0, 0)], d[(0, 1)]
        w30, w21 = d[(0, 0, 0)], d[(0, 0, 1)]
    v1_s = w20 - w11 * py  # <V1, grad S>
    v2_s = 0.5 * (w30 - w21 * py)  # <V2, grad S>

    phi_dot = 2 * mu * g2 * a1 + w10 - w01 * py
    a1_dot = -(
        w01 * a1y
        + a1 * v1_s
        + 2 * mu * (-a1 * a1 * pyy - 2 * a1sq_y * py + 4 * g2 * a1 * a2)
    )
    a2_dot = -(
        w01 * a2y
        + 2 * a2 * v1_s
        + a1y * w11
        + a1 * v2_s
        + mu * (-6 * a1 * a2 * pyy + 12 * g2 * a2 * a2 + a1sq_yy - 12 * a1a2_y * py)
    )
    return GraphRates(phi_dot, a1_dot, a2_dot)


def normal_speed_graph(f: FrontGraph, rates: GraphRates) -> np.ndarray:
    """Outward normal speed ``S_t / |grad S|`` of a graph front."""
    py = _d1(f.phi, f.h, f.periodic)
    return -rates.phi_dot / np.sqrt(1.0 + py * py)


@dataclass
class HeatwaveTrajectory:
    x2: np.ndarray
    times: np.ndarray
    phi: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    mu: float = 1.0
    periodic: bool = True

    def graph(self, i: int) -> FrontGraph:
        return FrontGraph(self.x2, self.phi[i], self.a1[i], self.a2[i], self.mu, self.periodic)

    def columns(self):
        """Long-format table: one row per (time, node)."""
        nt, n = self.phi.shape
        data = np.column_stack(
            [
                np.repeat(self.times, n),
                np.tile(self.x2, nt),
                self.phi.ravel(),
                self.a1.ravel(),
                self.a2.ravel(),
            ]
        )
        return ["t", "x2", "phi", "a1", "a2"], data


def run_heatwave_2d(
    f0: FrontGraph,
    drift: DriftField,
    t0: float,
    t1: float,
    dt: float,
    evolve_a2: bool = True,
    max_slope: float = GRAPH_MAX_SLOPE,
) -> HeatwaveTrajectory:
    """RK4 integration of the graph-chart chain.

    With ``evolve_a2=False`` the user-supplied ``a2`` is held fixed.
    Raises DegenerateExpansion when ``a1`` stops being negative and
    GraphLost when ``|phi_x2|`` exceeds ``max_slope`` (the front has to be
    re-charted).
    """
    n = f0.x2.size

    def rhs(t, y):
        g = f0.with_vector(y) if np.all(y[n : 2 * n] < 0) else None
        if g is None:
            raise DegenerateExpansion(f"a1 reached zero near t={t:.6g}")
        r = front_rhs_graph(g, drift, t)
        a2_dot = r.a2_dot if evolve_a2 else np.zeros(n)
        return np.concatenate([r.phi_dot, r.a1_dot, a2_dot])

    def check(t, y):
        py = _d1(y[:n], f0.h, f0.periodic)
        if np.max(np.abs(py)) > max_slope:
            raise GraphLost(f"|phi_x2| exceeded {max_slope} at t={t:.6g}; re-chart the front")

    check(t0, f0.as_vector())
    times, states = rk4(rhs, f0.as_vector(), t0, t1, dt, check=check)
    return HeatwaveTrajectory(
        f0.x2, times, states[:, :n], states[:, n : 2 * n], states[:, 2 * n :], f0.mu, f0.periodic
    )


@dataclass(frozen=True)
class EikonalData:
    """Time-of-arrival ``Phi`` and coefficients sampled on a 2D grid.

    Arrays are indexed ``[i1, i2]`` over the uniform axes ``x1`` and ``x2``.
    """

    x1: np.ndarray
    x2: np.ndarray
    Phi: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    drift: DriftField = field(default_factory=DriftField.zero)

    def __post_init__(self):
        shape = (len(self.x1), len(self.x2))
        for name in ("Phi", "a1", "a2"):
            a = np.broadcast_to(np.asarray(getattr(self, name), dtype=float), shape).copy()
            object.__setattr__(self, name, a)
        object.__setattr__(self, "x1", np.asarray(self.x1, dtype=float))
        object.__setattr__(self, "x2", np.asarray(self.x2, dtype=float))


def _drift_at_times(drift: DriftField, X1, X2, T, derivative: int):
    """``grad d^k w / dt^k`` at points with individual times."""
    g1 = np.zeros(T.shape)
    g2 = np.zeros(T.shape)
    if drift.is_zero():
        return g1, g2
    for idx in np.ndindex(T.shape):
        u, v = drift.gradient_at(X1[idx], X2[idx], float(T[idx]), derivative)
        g1[idx], g2[idx] = u, v
    return g1, g2


def _second_derivative(f: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Second-order accurate ``f''`` along ``axis``, one-sided at both ends."""
    f = np.moveaxis(np.asarray(f, dtype=float), axis, 0)
    if f.shape[0] < 4:
        raise ValueError("need at least 4 samples along each axis")
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / (h * h)
    out[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / (h * h)
    out[-1] = (2 * f[-1] - 5 * f[-2] + 4 * f[-3] - f[-4]) / (h * h)
    return np.moveaxis(out, 0, axis)


def eikonal_residual(e: EikonalData, mu: float):
    """Residuals of the time-of-arrival form of the first two conditions.

    Returns two arrays over the sample grid; both vanish for exact heat
    waves.  Derivatives are second-order finite differences, one-sided at
    the edges of the sample grid.
    """
    h1 = e.x1[1] - e.x1[0]
    h2 = e.x2[1] - e.x2[0]
    P1, P2 = np.gradient(e.Phi, h1, h2, edge_order=2)
    gp2 = P1 * P1 + P2 * P2
    if np.any(gp2 == 0):
        raise DegenerateExpansion("grad Phi vanishes at a sample point")
    lap = _second_derivative(e.Phi, h1, 0) + _second_derivative(e.Phi, h2, 1)
    A1, A2 = np.gradient(e.a1, h1, h2, edge_order=2)
    X1, X2 = np.meshgrid(e.x1, e.x2, indexing="ij")
    w1, w2 = _drift_at_times(e.drift, X1, X2, e.Phi, 0)
    v1, v2 = _drift_at_times(e.drift, X1, X2, e.Phi, 1)
    a1, a2 = e.a1, e.a2
    r1 = 1.0 - (P1 * w1 + P2 * w2) + 2 * mu * a1 * gp2
    r2 = (
        -(A1 * w1 + A2 * w2)
        + a1 * (v1 * P1 + v2 * P2)
        + 2 * mu * a1 * (4 * (P1 * A1 + P2 * A2) + a1 * lap - 4 * a2 * gp2)
    )
    return r1, r2


def normal_velocity(dc_dnu: float, dw_dnu: float, mu: float, drift_normal: str = "inward") -> float:
    """Normal speed of the front from the one-phase free-boundary condition.

    ``dc_dnu`` is the outward normal derivative of ``c`` taken as the limit
    from inside the heat wave.  ``dw_dnu`` is the drift potential's normal
    derivative along the inward normal (default, giving
    ``2 mu dc_dnu - dw_dnu``) or along the outward normal
    (``drift_normal="outward"``, giving ``2 mu dc_dnu + dw_dnu``).
    """
    if drift_normal == "inward":
        return 2.0 * mu * dc_dnu - dw_dnu
    if drift_normal == "outward":
        return 2.0 * mu * dc_dnu + dw_dnu
    raise ValueError("drift_normal must be 'inward' or 'outward'")


def first_condition_speed(grad_S, a1: float, V0, mu: float) -> float:
    """``S_t / |grad S|`` solved from the first front condition."""
    gS = np.asarray(grad_S, dtype=float)
    n = float(np.hypot(*gS))
    if n == 0:
        raise DegenerateExpansion("grad S vanishes")
    S_t = -float(np.dot(V0, gS)) - 2.0 * mu * n * n * a1
    return S_t / n


def gamma_front_speed(V_nu: float, a1: float, grad_S_norm: float, k0: float, gamma: float) -> float:
    """Normal speed for diffusivity ``k0 c^gamma``: ``V_nu + (k0/gamma)|grad S| a1^gamma``.

    Here ``c = a1 S_+^(1/gamma) + ...`` with ``a1 >= 0`` and ``V_nu`` is the
    advecting velocity projected on the outward normal.
    """
    if not k0 > 0:
        raise ValueError("k0 must be positive")
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    if a1 < 0:
        raise DegenerateExpansion("a1 must be non-negative for this expansion")
    return V_nu + (k0 / gamma) * grad_S_norm * a1 ** gamma


def circle_chart(R: float, x2, c_r, c_rr=0.0, mu: float = 1.0) -> FrontGraph:
    """Graph chart of the left arc of a circular front of radius ``R``.

    ``c_r`` and ``c_rr`` are radial derivatives of ``c`` at the front,
    limits from inside.  Returns ``phi = -sqrt(R^2 - x2^2)`` with
    ``a1 = c_x1`` and ``a2 = c_x1x1 / 2`` on the arc.
    """
    x2 = np.asarray(x2, dtype=float)
    if np.any(np.abs(x2) >= R):
        raise ValueError("chart nodes must satisfy |x2| < R")
    x1 = -np.sqrt(R * R - x2 * x2)
    # c(r) near r = R:  c_x1 = c_r x1/r,  c_x1x1 = c_rr (x1/r)^2 + c_r x2^2 / r^3
    a1 = c_r * x1 / R
    a2 = 0.5 * (c_rr * (x1 / R) ** 2 + c_r * x2 * x2 / R ** 3)
    return FrontGraph(x2, x1, a1, a2, mu, periodic=False)
