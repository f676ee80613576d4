"""Floating-point algebra of homogeneous polynomials in two variables.

A homogeneous polynomial of degree ``n`` is stored densely as ``n + 1``
coefficients; entry ``j`` multiplies ``x1**(n - j) * x2**j``.  So for a
quadratic ``p`` the coefficient usually written ``c_20`` is ``p.coeffs[0]``,
``c_11`` is ``p.coeffs[1]`` and ``c_02`` is ``p.coeffs[2]``.

Values are immutable; every operation returns a new object.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Union

import numpy as np

from .errors import DegreeMismatch, NotDivisible

__all__ = [
    "HPoly",
    "HPolyVec",
    "HarmonicSpec",
    "hp_arith",
    "hp_calculus",
    "hp_x2_factor",
    "harmonic_eval",
    "hp_eval",
    "hp_rotate",
    "hp_zero",
    "hp_const",
    "hp_linear",
    "X2",
]

DIVISIBILITY_RTOL = 1e-10


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float, copy=True).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class HPoly:
    """Homogeneous bivariate polynomial with dense coefficient storage."""

    coeffs: np.ndarray

    # let numpy scalars defer to the reflected operators
    __array_ufunc__ = None

    def __post_init__(self):
        arr = _frozen(self.coeffs)
        if arr.size == 0:
            raise ValueError("an HPoly needs at least one coefficient")
        object.__setattr__(self, "coeffs", arr)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def coef(self, i: int, j: int) -> float:
        """Coefficient of ``x1**i * x2**j`` (``i + j`` must equal the degree)."""
        if i + j != self.degree or i < 0 or j < 0:
            raise IndexError(f"monomial x1^{i} x2^{j} is not of degree {self.degree}")
        return float(self.coeffs[j])

    def __add__(self, other: "HPoly") -> "HPoly":
        return hp_arith(self, other, "add")

    def __sub__(self, other: "HPoly") -> "HPoly":
        return hp_arith(self, other, "sub")

    def __mul__(self, other) -> "HPoly":
        if isinstance(other, HPoly):
            return hp_arith(self, other, "mul")
        return HPoly(self.coeffs * float(other))

    __rmul__ = __mul__

    def __neg__(self) -> "HPoly":
        return HPoly(-self.coeffs)

    def __truediv__(self, other: float) -> "HPoly":
        return HPoly(self.coeffs / float(other))

    def __call__(self, x1, x2):
        return hp_eval(self, (x1, x2))

    def allclose(self, other: "HPoly", rtol=1e-12, atol=1e-14) -> bool:
        return self.degree == other.degree and np.allclose(
            self.coeffs, other.coeffs, rtol=rtol, atol=atol
        )

    def grad(self) -> "HPolyVec":
        return hp_calculus(self, "grad")

    def laplacian(self) -> "HPoly":
        return hp_calculus(self, "laplacian")

    def __repr__(self):
        return f"HPoly(degree={self.degree}, coeffs={self.coeffs.tolist()})"


@dataclass(frozen=True, eq=False)
class HPolyVec:
    """Pair of homogeneous polynomials of equal degree (a vector field)."""

    u: HPoly
    v: HPoly

    __array_ufunc__ = None

    def __post_init__(self):
        if self.u.degree != self.v.degree:
            raise DegreeMismatch(
                f"component degrees differ: {self.u.degree} != {self.v.degree}"
            )

    @classmethod
    def const(cls, vec) -> "HPolyVec":
        return cls(HPoly([vec[0]]), HPoly([vec[1]]))

    @property
    def degree(self) -> int:
        return self.u.degree

    def value(self) -> np.ndarray:
        """The constant vector of a degree-0 field."""
        if self.degree != 0:
            raise ValueError("value() is only defined for degree-0 fields")
        return np.array([self.u.coeffs[0], self.v.coeffs[0]])

    def __add__(self, other: "HPolyVec") -> "HPolyVec":
        return HPolyVec(self.u + other.u, self.v + other.v)

    def __sub__(self, other: "HPolyVec") -> "HPolyVec":
        return HPolyVec(self.u - other.u, self.v - other.v)

    def __mul__(self, other) -> "HPolyVec":
        return HPolyVec(self.u * other, self.v * other)

    __rmul__ = __mul__

    def __neg__(self) -> "HPolyVec":
        return HPolyVec(-self.u, -self.v)

    def dot(self, other: "HPolyVec") -> HPoly:
        return hp_calculus(self, "dot", other)

    def divergence(self) -> HPoly:
        return hp_calculus(self, "divergence")


def hp_zero(degree: int) -> HPoly:
    return HPoly(np.zeros(degree + 1))


def hp_const(value: float) -> HPoly:
    return HPoly([value])


def hp_linear(c10: float, c01: float) -> HPoly:
    return HPoly([c10, c01])


#: x1**2 + x2**2
X2 = HPoly([1.0, 0.0, 1.0])


def hp_arith(p: HPoly, q: HPoly, op: str = "add", scale: float = 1.0) -> HPoly:
    """Return ``scale * (p op q)`` for ``op`` in ``add``, ``sub``, ``mul``."""
    if op == "mul":
        return HPoly(scale * np.convolve(p.coeffs, q.coeffs))
    if op not in ("add", "sub"):
        raise ValueError(f"unknown operation {op!r}")
    if p.degree != q.degree:
        raise DegreeMismatch(f"cannot {op} degree {p.degree} and degree {q.degree}")
    if op == "add":
        return HPoly(scale * (p.coeffs + q.coeffs))
    return HPoly(scale * (p.coeffs - q.coeffs))


def _d1(p: HPoly) -> HPoly:
    n = p.degree
    if n == 0:
        return hp_zero(0)
    return HPoly(p.coeffs[:-1] * np.arange(n, 0, -1))


def _d2(p: HPoly) -> HPoly:
    n = p.degree
    if n == 0:
        return hp_zero(0)
    return HPoly(p.coeffs[1:] * np.arange(1, n + 1))


def hp_calculus(p: Union[HPoly, HPolyVec], kind: str, other: HPolyVec = None):
    """Differential operators on homogeneous polynomials.

    ``grad`` maps an HPoly to an HPolyVec one degree lower, ``laplacian`` maps
    an HPoly to an HPoly two degrees lower, ``divergence`` maps an HPolyVec to
    an HPoly and ``dot`` contracts two HPolyVec into an HPoly of the summed
    degree.  Derivatives of too-low degree give the degree-0 zero.
    """
    if kind == "grad":
        return HPolyVec(_d1(p), _d2(p))
    if kind == "laplacian":
        if p.degree < 2:
            return hp_zero(0)
        return _d1(_d1(p)) + _d2(_d2(p))
    if kind == "divergence":
        return _d1(p.u) + _d2(p.v)
    if kind == "dot":
        if other is None:
            raise ValueError("dot needs a second vector field")
        return p.u * other.u + p.v * other.v
    raise ValueError(f"unknown operator {kind!r}")


def hp_x2_factor(p: HPoly, rtol: float = DIVISIBILITY_RTOL) -> HPoly:
    """Return ``Q`` with ``p = (x1**2 + x2**2) * Q``.

    Raises NotDivisible when the remainder exceeds ``rtol`` times the
    max-norm of ``p``.
    """
    n = p.degree
    if n < 2:
        raise NotDivisible(f"degree {n} polynomial is not divisible by x^2", float(np.max(np.abs(p.coeffs))))
    c = p.coeffs
    q = np.zeros(n - 1)
    for j in range(n - 1):
        q[j] = c[j] - (q[j - 2] if j >= 2 else 0.0)
    rem = np.array([c[n - 1] - (q[n - 3] if n >= 3 else 0.0), c[n] - q[n - 2]])
    scale = float(np.max(np.abs(c)))
    res = float(np.max(np.abs(rem)))
    if res > rtol * scale:
        raise NotDivisible(f"remainder {res:.3e} exceeds tolerance (input norm {scale:.3e})", res)
    return HPoly(q)


def hp_eval(p: HPoly, x) -> Union[float, np.ndarray]:
    """Evaluate ``p`` at a point ``x = (x1, x2)``; arrays broadcast."""
    x1 = np.asarray(x[0], dtype=float)
    x2 = np.asarray(x[1], dtype=float)
    n = p.degree
    out = np.zeros(np.broadcast(x1, x2).shape)
    for j, c in enumerate(p.coeffs):
        if c != 0.0:
            out = out + c * x1 ** (n - j) * x2 ** j
    return float(out) if out.ndim == 0 else out


def hp_rotate(p: HPoly, theta: float) -> HPoly:
    """Rotate the graph of ``p`` by ``theta``: returns ``x -> p(R(-theta) x)``."""
    c, s = np.cos(theta), np.sin(theta)
    # R(-theta) x = (c x1 + s x2, -s x1 + c x2)
    l1 = HPoly([c, s])
    l2 = HPoly([-s, c])
    n = p.degree
    out = hp_zero(n)
    for j, coef in enumerate(p.coeffs):
        term = hp_const(coef)
        for _ in range(n - j):
            term = term * l1
        for _ in range(j):
            term = term * l2
        out = out + term
    return out


@dataclass(frozen=True)
class HarmonicSpec:
    """Harmonic polynomial of degree ``k`` with time-dependent coefficients.

    ``coeffs`` holds one polynomial-in-t coefficient list per free parameter:

    * ``k = 0``: ``(w0,)``, the constant ``W0(t)``;
    * ``k = 1``: ``(w10, w01)``, giving ``w10*x1 + w01*x2``;
    * ``k = 2``: ``(w20, w11)``, giving ``w20*(x1^2 - x2^2) + w11*x1*x2``;
    * ``k = 3``: ``(w30, w03)``, giving ``w30*x1*(x1^2 - 3x2^2) + w03*x2*(x2^2 - 3x1^2)``;
    * ``k >= 4``: ``(wk0, w0k)``, giving ``wk0*Re(z^k) + w0k*Im(z^k)`` with ``z = x1 + i x2``.

    Each list ``[c0, c1, ...]`` stands for ``c0 + c1*t + c2*t**2 + ...``.
    """

    degree: int
    coeffs: tuple = ()

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("harmonic degree must be nonnegative")
        npar = 1 if self.degree == 0 else 2
        coeffs = tuple(tuple(float(c) for c in lst) for lst in self.coeffs)
        if not coeffs:
            coeffs = tuple(() for _ in range(npar))
        if len(coeffs) != npar:
            raise ValueError(f"degree {self.degree} needs {npar} coefficient lists")
        object.__setattr__(self, "coeffs", coeffs)

    def omega(self, t: float, derivative: int = 0) -> np.ndarray:
        """Values (or time derivatives) of the free coefficients at ``t``."""
        out = []
        for lst in self.coeffs:
            if not lst:
                out.append(0.0)
                continue
            poly = np.polynomial.Polynomial(lst)
            if derivative:
                poly = poly.deriv(derivative)
            out.append(float(poly(t)))
        return np.array(out)


def _harmonic_basis(k: int) -> tuple:
    if k == 0:
        return (HPoly([1.0]),)
    if k == 1:
        return (HPoly([1.0, 0.0]), HPoly([0.0, 1.0]))
    if k == 2:
        return (HPoly([1.0, 0.0, -1.0]), HPoly([0.0, 1.0, 0.0]))
    if k == 3:
        return (HPoly([1.0, 0.0, -3.0, 0.0]), HPoly([0.0, -3.0, 0.0, 1.0]))
    # Re/Im of (x1 + i x2)^k
    re = np.zeros(k + 1)
    im = np.zeros(k + 1)
    for j in range(k + 1):
        val = comb(k, j) * (1j) ** j
        re[j] = val.real
        im[j] = val.imag
    return (HPoly(re), HPoly(im))


def harmonic_eval(spec: HarmonicSpec, t: float = 0.0, derivative: int = 0) -> HPoly:
    """Realize the harmonic polynomial ``W_k`` (or its time derivative) at ``t``."""
    basis = _harmonic_basis(spec.degree)
    w = spec.omega(t, derivative)
    out = hp_zero(spec.degree)
    for b, wi in zip(basis, w):
        out = out + b * wi
    return out

