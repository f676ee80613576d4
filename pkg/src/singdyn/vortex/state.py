"""Core state of a vortex-type singularity."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..polyalg import HPoly, hp_rotate

#: order of the constant tail coefficients stored in ``VortexState.z``
Z_NAMES = ("c0_30", "c0_21", "c0_12", "c0_03", "c1_20", "c1_11", "c1_02")

#: order of the evolving components in ``VortexState.as_vector``
Y_NAMES = ("a1", "a2", "phi", "c1_0", "sigma", "c0_02", "c1_10", "c1_01")


def _vec(v, n, name):
    a = np.array(v, dtype=float).reshape(-1)
    if a.size != n:
        raise ValueError(f"{name} must have {n} components")
    return a


@dataclass(frozen=True)
class VortexState:
    """Singularity position ``-a``, angle ``phi`` of the leading gradient,
    ``c1_0``, the rotation rate ``sigma`` (``phi' = -7 mu sigma``), ``c0_02``,
    the gradient ``p1_1`` of the linear part of ``c1`` and the constant tail
    ``z`` (cubic part of ``c0`` and quadratic part of ``c1``).

    The leading gradient is ``grad p0_1 = c1_0 (sin phi, cos phi)``, so
    ``|grad p0_1| = |c1_0|`` holds by construction.
    """

    a: np.ndarray = field(default_factory=lambda: np.zeros(2))
    phi: float = 0.0
    c1_0: float = 1.0
    sigma: float = 0.0
    c0_02: float = 0.0
    p1_1: np.ndarray = field(default_factory=lambda: np.zeros(2))
    z: np.ndarray = field(default_factory=lambda: np.zeros(7))
    mu: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "a", _vec(self.a, 2, "a"))
        object.__setattr__(self, "p1_1", _vec(self.p1_1, 2, "p1_1"))
        object.__setattr__(self, "z", _vec(self.z, 7, "z"))
        for name in ("phi", "c1_0", "sigma", "c0_02", "mu"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.mu > 0:
            raise ValueError("mu must be positive")
        if self.c1_0 == 0.0:
            raise ValueError("c1_0 must be non-zero")
        vals = np.concatenate([self.as_vector(), self.z, [self.mu]])
        if not np.all(np.isfinite(vals)):
            raise ValueError("state has non-finite components")

    @property
    def grad_p0_1(self) -> np.ndarray:
        return self.c1_0 * np.array([np.sin(self.phi), np.cos(self.phi)])

    @property
    def p0_3(self) -> HPoly:
        return HPoly(self.z[:4])

    @property
    def p1_2(self) -> HPoly:
        return HPoly(self.z[4:])

    def as_vector(self) -> np.ndarray:
        return np.concatenate(
            [self.a, [self.phi, self.c1_0, self.sigma, self.c0_02], self.p1_1]
        )

    def with_vector(self, y) -> "VortexState":
        y = np.asarray(y, dtype=float)
        return replace(self, a=y[0:2], phi=y[2], c1_0=y[3], sigma=y[4], c0_02=y[5], p1_1=y[6:8])


def rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def rotate_state(s: VortexState, theta: float) -> VortexState:
    """Rotate the data of ``s`` (and the singular point) by ``theta``.

    Every Taylor polynomial ``p`` becomes ``x -> p(R(-theta) x)``; hence
    gradients and ``a`` turn by ``R(theta)``, ``phi`` decreases by
    ``theta`` and ``sigma``, ``c1_0`` are unchanged.  ``c0_02`` is read off
    the rotated quadratic part of ``c0``, which needs the full cascade.
    """
    from .cascade import build_cascade  # local import: cascade imports state
    from ..drift import DriftField

    R = rotation(theta)
    b = build_cascade(s, DriftField.zero(), 0.0)
    p02 = hp_rotate(b.p0_2, theta)
    z = np.concatenate([hp_rotate(s.p0_3, theta).coeffs, hp_rotate(s.p1_2, theta).coeffs])
    return replace(
        s,
        a=R @ s.a,
        phi=s.phi - theta,
        c0_02=p02.coef(0, 2),
        p1_1=R @ s.p1_1,
        z=z,
    )
