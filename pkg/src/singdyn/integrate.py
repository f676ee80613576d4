"""Fixed-step classical Runge-Kutta integration."""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .errors import NonFinite


def rk4_step(f: Callable, t: float, y: np.ndarray, h: float) -> np.ndarray:
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def n_steps(t0: float, t1: float, dt: float) -> int:
    """Number of equal steps covering [t0, t1] with step closest to ``dt``."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    if not t1 > t0:
        raise ValueError("t1 must exceed t0")
    return max(1, int(round((t1 - t0) / dt)))


def rk4(
    f: Callable,
    y0,
    t0: float,
    t1: float,
    dt: float,
    check: Optional[Callable] = None,
):
    """Integrate ``y' = f(t, y)`` from ``t0`` to ``t1``.

    The step is ``(t1 - t0) / n`` with ``n = round((t1 - t0) / dt)`` so the
    last step lands exactly on ``t1``.  Every step is recorded.  ``check``,
    if given, is called as ``check(t, y)`` after each step and may raise to
    stop the run.

    Returns ``(times, states)``; on a non-finite state NonFinite is raised
    with the partial trajectory attached as ``err.partial``.
    """
    n = n_steps(t0, t1, dt)
    h = (t1 - t0) / n
    y = np.array(y0, dtype=float)
    times = np.empty(n + 1)
    states = np.empty((n + 1,) + y.shape)
    times[0] = t0
    states[0] = y
    for i in range(1, n + 1):
        t = t0 + (i - 1) * h
        try:
            y = rk4_step(f, t, y, h)
        except Exception as exc:
            exc.partial = (times[:i].copy(), states[:i].copy())
            raise
        tn = t0 + i * h
        if not np.all(np.isfinite(y)):
            err = NonFinite(f"non-finite state at t={tn:.6g}", t=tn)
            err.partial = (times[:i].copy(), states[:i].copy())
            raise err
        times[i] = tn
        states[i] = y
        if check is not None:
            try:
                check(tn, y)
            except Exception as exc:
                exc.partial = (times[: i + 1].copy(), states[: i + 1].copy())
                raise
    return times, states
