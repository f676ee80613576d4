"""Numeric reconstruction of the Taylor data of a vortex-type solution.

The solution is ``c = c0 + sqrt(S) c1`` with
``c0 = 1/(2 mu) + p0_1 + p0_2 + p0_3 + ...``,
``c1 = c1_0 + p1_1 + p1_2 + ...`` and
``S = |x|^2 (1 + Q1 + Q2 + ...)``, where ``p``, ``Q`` are homogeneous
polynomials in the coordinates centred at the singular point.  Given the
core state and the drift, everything else up to the order needed for the
dynamics is recovered algebraically.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..drift import DriftField
from ..errors import DegenerateVortex
from ..polyalg import X2, HPoly, HPolyVec
from .state import VortexState

#: ``|c1_0|`` below this is treated as a collapsed singularity
C1_0_FLOOR = 1e-300

#: rotation by +pi/2 acting on gradients
T_MATRIX = np.array([[0.0, -1.0], [1.0, 0.0]])


def p0_2_coeffs(sigma, c0_02, phi, c1_0, w20, w11, mu):
    """``(c0_20, c0_11)`` solved from the first-order relations.

    Written with plain arithmetic so complex arguments work (complex-step
    differentiation).
    """
    c10 = c1_0 * np.sin(phi)
    c01 = c1_0 * np.cos(phi)
    C2 = c1_0 * c1_0
    d = 5 * C2 + 2 * c10 * c10
    c20 = (-2 * sigma * c10 * c01 + c0_02 * (5 * c10 ** 2 + 7 * c01 ** 2) - 2 * C2 * w20 / mu) / d
    c11 = (
        -sigma * (5 * c01 ** 2 - 7 * c10 ** 2)
        - 24 * c0_02 * c10 * c01
        + 4 * c10 * c01 * w20 / mu
        - (7 * c10 ** 2 + 5 * c01 ** 2) * w11 / mu
    ) / (6 * d)
    return c20, c11


def cascade_matrices(s: VortexState):
    """The 2x2 matrices ``A``, ``B1``, ``D`` and ``T`` of the cascade.

    ``det A = c1_0^2``, ``det B1 = 6 d`` with ``d = 5 c1_0^2 + 2 c0_10^2``
    and ``det D = 2 c1_0^2``.
    """
    c10, c01 = s.grad_p0_1
    A = np.array([[c01, c10], [-c10, c01]])
    B1 = np.array([[7 * c10, 6 * c01], [-5 * c01, 6 * c10]])
    D = np.array([[2 * c10, c01], [-2 * c01, c10]])
    return A, B1, D, T_MATRIX


def _scalar(p: HPoly) -> float:
    return float(p.coeffs[0])


def _vec(v) -> HPolyVec:
    return HPolyVec.const(v)


@dataclass(frozen=True)
class CascadeBundle:
    p0_1: HPoly
    p0_2: HPoly
    p0_3: HPoly
    p1_1: HPoly
    p1_2: HPoly
    Q1: HPoly
    Q2: HPoly
    q_02: float
    G1_2: HPoly
    G1_3: HPoly
    G0_4: HPoly
    theta0: float
    R3: HPoly
    L1: HPoly
    M: HPoly
    Fvec: np.ndarray
    calF: np.ndarray
    calF1: np.ndarray
    psi0: np.ndarray
    c1_0_dot: float
    d: float
    d_prime: float

    @property
    def grad_p0_1(self) -> np.ndarray:
        return self.p0_1.coeffs.copy()

    @property
    def grad_p0_1_perp(self) -> np.ndarray:
        return T_MATRIX @ self.p0_1.coeffs

    @property
    def calM(self) -> np.ndarray:
        M20, M11, M02 = self.M.coeffs
        return np.array([[7 * M20 - 5 * M02, 6 * M11], [6 * M11, 7 * M02 - 5 * M20]])


def build_cascade(s: VortexState, drift: DriftField, t: float) -> CascadeBundle:
    """Reconstruct the Taylor data of the vortex solution from ``s``.

    Steps: leading gradient from ``(phi, c1_0)``; ``c0_20``, ``c0_11`` from
    the first-order relations; ``psi0`` and ``Q1``; ``theta0``, ``G1_2``;
    the cubic ``R3`` and linear ``L1`` of the fifth-order relation; ``F``,
    ``q11`` and ``q20 - q02``; the ``q02``-free part ``M`` of the
    second-order relation for ``c0``; ``calF1`` and ``q02``; finally
    ``calF`` (the rate of ``grad p1_1`` up to the ``q02`` term).
    """
    mu = s.mu
    C = s.c1_0
    if not abs(C) > C1_0_FLOOR:
        raise DegenerateVortex("c1_0 vanished")
    om = drift.omega(t)
    omd = drift.omega(t, 1)
    w20, w11 = om["w20"], om["w11"]
    W2 = drift.W(2, t)
    W3 = drift.W(3, t)

    # (i) leading gradient
    gp = s.grad_p0_1
    c10, c01 = gp
    gperp = T_MATRIX @ gp
    p01 = HPoly(gp)
    C2 = C * C

    # (ii) quadratic part of c0
    d = 5 * C2 + 2 * c10 * c10
    if not d > 0:
        raise DegenerateVortex("d must be positive")
    c20, c11 = p0_2_coeffs(s.sigma, s.c0_02, s.phi, C, w20, w11, mu)
    p02 = HPoly([c20, c11, s.c0_02])
    p03 = s.p0_3
    p11 = HPoly(s.p1_1)
    p12 = s.p1_2

    # (iii) psi0 = A^-1 f
    A, _, Dm, _ = cascade_matrices(s)
    f = np.array([5 * c11 + w11 / mu, -(5 * (c20 - s.c0_02) + 2 * w20 / mu)])
    psi0 = np.linalg.solve(A, f)

    # (iv) linear correction of S
    Q1 = HPoly(-(2.0 / C) * s.p1_1 - psi0)

    # (v)
    lap_p02 = 2 * (c20 + s.c0_02)
    C_dot = -4.5 * mu * C * lap_p02
    G12 = -2 * mu * (C * p02 + p11 * p01)
    theta0 = -C_dot + 6 * mu * float(np.dot(gp, s.p1_1)) + _scalar(G12.laplacian())
    G13 = -2 * mu * (p01 * p12 + p02 * p11 + C * p03)
    V0 = -6 * mu * gp
    V1 = W2.grad()
    V2 = W3.grad()

    # (vi) cubic and linear parts of the fifth-order relation
    R3 = -2 * (
        4 * p01 * p12
        + 7 * C * p03
        + 7 * p11 * p02
        + Q1 * (p01 * (5 * p11 + C * Q1) + 11 * C * p02)
        + (W2 * (p11 + 2 * C * Q1) + 1.5 * C * W3) / mu
    )
    gQ1 = Q1.grad()
    gQ1v = gQ1.value()
    inner = G12.grad() - (_vec(V0) * p11 + C * V1) * 0.5
    L1 = (
        Q1 * (C * float(np.dot(gQ1v, gp)) + 2 * theta0 / mu)
        + p01 * (0.5 * C * float(np.dot(gQ1v, gQ1v)))
        + gQ1.dot(inner) / mu
        + (G13.laplacian() - _vec(V0).dot(p12.grad()) - V1.dot(p11.grad())) / mu
    )

    # (vii)
    r30, r21, r12, r03 = R3.coeffs
    l10, l01 = L1.coeffs
    F = np.array([r03 - r21, r30 - r12])
    q11 = -float(np.dot(F, gp)) / (4 * C2 * C)
    q20_rel = float(np.dot(F, gperp)) / (4 * C2 * C)

    # (viii) q02-free part of the second-order relation for c0
    def G0_4(Q2: HPoly) -> HPoly:
        return -mu * (
            2 * p01 * p03
            + p02 * p02
            + X2 * (2 * C * p12 + p11 * p11)
            + 2 * C * X2 * Q1 * p11
            + C2 * X2 * Q2
        )

    M = (
        _vec(V0).dot(p03.grad())
        + V1.dot(p02.grad())
        + V2.dot(p01.grad())
        - G0_4(HPoly([q20_rel, q11, 0.0])).laplacian()
    )

    # (ix)
    M20, M11, M02 = M.coeffs
    calM = np.array([[7 * M20 - 5 * M02, 6 * M11], [6 * M11, 7 * M02 - 5 * M20]])
    calF1 = Dm @ np.array([omd["w20"], omd["w11"]]) / mu - calM @ gp
    q02 = (7 * mu * s.sigma ** 2 + float(np.dot(calF1, gp)) / (2 * C2)) / (16 * mu * C2)
    Q2 = HPoly([q02 + q20_rel, q11, q02])

    # (x)
    calF = np.array(
        [
            r30 + l10 - float(np.dot(F, 4 * c10 * gperp + c01 * gp)) / (4 * C2),
            r03 + l01 - float(np.dot(F, 2 * c01 * gperp + c10 * gp)) / (4 * C2),
        ]
    )

    return CascadeBundle(
        p0_1=p01,
        p0_2=p02,
        p0_3=p03,
        p1_1=p11,
        p1_2=p12,
        Q1=Q1,
        Q2=Q2,
        q_02=q02,
        G1_2=G12,
        G1_3=G13,
        G0_4=G0_4(Q2),
        theta0=theta0,
        R3=R3,
        L1=L1,
        M=M,
        Fvec=F,
        calF=calF,
        calF1=calF1,
        psi0=psi0,
        c1_0_dot=C_dot,
        d=d,
        d_prime=float(np.cos(2 * s.phi) - 6.0),
    )
