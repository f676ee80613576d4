"""Explicit finite-volume reference solvers with front extraction.

Two equations are covered:

* the 1D model ``u_t = (u^2)_xx / 2`` (diffusivity ``u``, front level 0);
* the radially symmetric reduced equation ``c_t = Delta(c - mu c^2)`` with no
  drift (diffusivity ``1 - 2 mu c``, front level ``1/(2 mu)``).

Both are written in flux form, so the discrete mass is conserved while the
solution stays away from the outer boundary.  The arithmetic mean of the
nodal diffusivities on each interface turns the flux into a plain
difference of ``u^2/2`` (resp. ``c - mu c^2``).
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import BoundaryContact, CFLViolation, NoCrossing

#: automatic step as a fraction of the stability limit
CFL_SAFETY = 0.2
#: user-supplied steps must satisfy dt <= CFL_MAX * h^2 / max diffusivity
CFL_MAX = 0.25
CONTACT_RTOL = 1e-12


@dataclass(frozen=True)
class FieldGrid:
    """Nodal field on a uniform line or radial grid."""

    x: np.ndarray
    values: np.ndarray
    t: float = 0.0
    geometry: str = "line"
    mu: Optional[float] = None
    level: float = 0.0
    dt: Optional[float] = None

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if x.shape != v.shape or x.ndim != 1 or x.size < 3:
            raise ValueError("x and values must be 1D arrays of equal length >= 3")
        if self.geometry not in ("line", "radial"):
            raise ValueError(f"unknown geometry {self.geometry!r}")
        h = np.diff(x)
        if not (np.all(h > 0) and np.allclose(h, h[0], rtol=1e-9)):
            raise ValueError("grid must be uniform and increasing")
        if self.geometry == "radial" and abs(x[0]) > 1e-12 * h[0]:
            raise ValueError("radial grids start at r = 0")
        if not np.all(np.isfinite(v)):
            raise ValueError("field has non-finite values")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "values", v)

    @property
    def h(self) -> float:
        return float(self.x[1] - self.x[0])

    @classmethod
    def line(cls, x_min: float, x_max: float, n: int, values=None, t: float = 0.0) -> "FieldGrid":
        x = np.linspace(x_min, x_max, n)
        v = np.zeros(n) if values is None else values(x) if callable(values) else values
        return cls(x, v, t=t, geometry="line", level=0.0)

    @classmethod
    def radial(cls, r_max: float, n: int, mu: float, values=None, t: float = 0.0) -> "FieldGrid":
        r = np.linspace(0.0, r_max, n)
        level = 1.0 / (2.0 * mu)
        v = np.full(n, level) if values is None else values(r) if callable(values) else values
        return cls(r, v, t=t, geometry="radial", mu=mu, level=level)

    def diffusivity(self) -> np.ndarray:
        if self.mu is None:
            return self.values
        return 1.0 - 2.0 * self.mu * self.values

    def mass(self) -> float:
        """Discrete integral of the field (per 2 pi for radial grids)."""
        return float(np.sum(_volumes(self) * self.values))


def _volumes(g: FieldGrid) -> np.ndarray:
    h = g.h
    if g.geometry == "line":
        vol = np.full(g.x.size, h)
        vol[0] = vol[-1] = 0.5 * h
        return vol
    vol = g.x * h
    vol[0] = h * h / 8.0
    vol[-1] = 0.5 * g.x[-1] * h
    return vol


def _check_contact(g: FieldGrid, v: np.ndarray, t: float):
    """Raise once the support touches an end node.

    An end is in contact when its value has left the degeneration level
    while the profile is not flat there (a constant field is not a front).
    """
    ends = ((-1, -2),) if g.geometry == "radial" else ((0, 1), (-1, -2))
    peak = None
    for e, nb in ends:
        if v[e] == g.level:
            continue
        if peak is None:
            peak = float(np.max(np.abs(v - g.level)))
        if abs(v[e] - g.level) > CONTACT_RTOL * peak and abs(v[e] - v[nb]) > CONTACT_RTOL * peak:
            raise BoundaryContact(f"support reached the grid boundary at t={t:.6g}")


def _max_diffusivity(g: FieldGrid, v: np.ndarray) -> float:
    if g.mu is None:
        return float(v.max())
    return float(1.0 - 2.0 * g.mu * v.min())


def _solve(initial: FieldGrid, t1: float, out_times, dt: Optional[float]) -> List[FieldGrid]:
    if not t1 >= initial.t:
        raise ValueError("t1 must not precede the initial time")
    out = sorted(set(float(s) for s in (out_times if out_times is not None else [])) | {float(t1)})
    if out[0] < initial.t:
        raise ValueError("output times must not precede the initial time")
    if dt is not None and not dt > 0:
        raise ValueError("dt must be positive")
    g = initial
    v = g.values.copy()
    inv_vol = 1.0 / _volumes(g)
    h = g.h
    if g.geometry == "line":
        coef = np.full(g.x.size - 1, 1.0 / h)
    else:
        coef = 0.5 * (g.x[1:] + g.x[:-1]) / h
    stab = (0.5 if g.geometry == "line" else 0.25) * h * h
    bound = CFL_MAX * h * h
    flux = np.zeros(g.x.size + 1)
    mu = g.mu
    t = g.t
    snapshots = []
    if out[0] == t:
        snapshots.append(replace(g, values=v.copy(), t=t))
        out = out[1:]
    _check_contact(g, v, t)
    last_dt = None
    for t_out in out:
        while t < t_out:
            dmax = _max_diffusivity(g, v)
            if dt is None:
                step = CFL_SAFETY * stab / dmax if dmax > 0 else np.inf
            else:
                step = dt
                if dmax > 0 and step > bound / dmax * (1 + 1e-12):
                    raise CFLViolation(f"dt={dt:.3e} exceeds the bound {bound / dmax:.3e} at t={t:.6g}")
            if t + step >= t_out - 1e-14 * max(1.0, abs(t_out)):
                step = t_out - t
                t_next = t_out
            else:
                t_next = t + step
            G = 0.5 * v * v if mu is None else v - mu * v * v
            flux[1:-1] = coef * np.diff(G)
            v = v + step * np.diff(flux) * inv_vol
            t = t_next
            last_dt = step
            if not np.isfinite(v[0] + v[-1] + dmax):
                raise FloatingPointError(f"non-finite field at t={t:.6g}")
            _check_contact(g, v, t)
        if not np.all(np.isfinite(v)):
            raise FloatingPointError(f"non-finite field at t={t:.6g}")
        snapshots.append(replace(g, values=v.copy(), t=t, dt=last_dt))
    return snapshots


def solve_model_1d(
    initial: FieldGrid, t1: float, out_times: Sequence[float] = None, dt: float = None
) -> List[FieldGrid]:
    """Explicit conservative scheme for ``u_t = (u^2)_xx / 2``.

    Returns snapshots at ``out_times`` (and ``t1``).  With ``dt=None`` the
    step is recomputed every step as 0.2 of the stability limit
    ``dx^2 / (2 max u)``.
    """
    if initial.geometry != "line" or initial.mu is not None:
        raise ValueError("solve_model_1d needs a line grid without mu")
    if np.any(initial.values < 0):
        raise ValueError("the model equation needs u >= 0")
    return _solve(initial, t1, out_times, dt)


def solve_reduced_2d_radial(
    initial: FieldGrid, mu: float, t1: float, out_times: Sequence[float] = None, dt: float = None
) -> List[FieldGrid]:
    """Explicit scheme for radially symmetric ``c_t = (r (1 - 2 mu c) c_r)_r / r``.

    The origin uses the symmetric finite-volume stencil
    ``c_0' = 4 D_(1/2) (c_1 - c_0) / dr^2``.
    """
    if initial.geometry != "radial":
        raise ValueError("solve_reduced_2d_radial needs a radial grid")
    if not mu > 0:
        raise ValueError("mu must be positive")
    g = replace(initial, mu=mu, level=1.0 / (2.0 * mu))
    return _solve(g, t1, out_times, dt)


def extract_front(g: FieldGrid, tol: float = 0.0, rel_tol: float = 0.0) -> Tuple[float, ...]:
    """Positions where the field crosses its degeneration level.

    The support is located around the node of largest ``|value - level|``;
    from there the field is scanned outwards to the first node whose signed
    deviation drops to ``max(tol, rel_tol * peak)`` and the crossing is
    linearly interpolated.  Line grids give ``(left, right)``, radial grids
    ``(outer,)``.
    """
    dev = g.values - g.level
    ip = int(np.argmax(np.abs(dev)))
    if dev[ip] == 0.0:
        raise NoCrossing("field equals the degeneration level everywhere")
    sd = np.sign(dev[ip]) * dev
    thr = max(tol, rel_tol * sd[ip])
    x = g.x

    def crossing(order):
        idx = np.nonzero(sd[order] <= thr)[0]
        if idx.size == 0:
            raise NoCrossing("no crossing of the degeneration level")
        j = order[idx[0]]
        i = order[idx[0] - 1]
        frac = (sd[i] - thr) / (sd[i] - sd[j])
        return float(x[i] + frac * (x[j] - x[i]))

    right = crossing(np.arange(ip, x.size))
    if g.geometry == "radial":
        return (right,)
    left = crossing(np.arange(ip, -1, -1))
    return (left, right)


def inward_normal_derivative(g: FieldGrid, front: float, side: str = "right", n_fit: int = 8, skip: int = 1) -> float:
    """Outward normal derivative at ``front`` from the inside of the support.

    Fits a quadratic through ``n_fit`` interior nodes next to the front
    (skipping the ``skip`` nodes closest to it) and differentiates it at the
    front.  ``side`` is ``"right"`` when the outward normal points to +x.
    """
    x, v = g.x, g.values
    if side == "right":
        j = int(np.searchsorted(x, front)) - 1 - skip
        sel = np.arange(j - n_fit + 1, j + 1)
    else:
        j = int(np.searchsorted(x, front)) + skip
        sel = np.arange(j, j + n_fit)
    if sel[0] < 0 or sel[-1] >= x.size:
        raise NoCrossing("not enough interior nodes to fit the front gradient")
    coef = np.polyfit(x[sel] - front, v[sel], 2)
    slope = coef[1]
    return float(slope if side == "right" else -slope)


def barenblatt_radial(r, t: float, mu: float, K: float):
    """Exact radial solution ``c = 1/(2 mu) - v`` with ``v`` a Barenblatt cap.

    ``v = (mu t)^(-1/2) (K - r^2 / (16 (mu t)^(1/2)))_+`` solves
    ``v_t = mu Delta(v^2)``, so ``c`` solves the reduced equation.
    """
    r = np.asarray(r, dtype=float)
    s = np.sqrt(mu * t)
    v = np.maximum(K - r ** 2 / (16.0 * s), 0.0) / s
    c = 1.0 / (2.0 * mu) - v
    return float(c) if c.ndim == 0 else c


def barenblatt_front(t: float, mu: float, K: float) -> float:
    return 4.0 * np.sqrt(K) * (mu * t) ** 0.25


def barenblatt_speed(t: float, mu: float, K: float) -> float:
    return np.sqrt(K) * mu ** 0.25 * t ** -0.75
