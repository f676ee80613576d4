"""Harmonic drift potentials ``w = sum_k W_k(x, t)``."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import perm
from typing import Dict, List, Mapping, Sequence

import numpy as np

from .polyalg import HarmonicSpec, HPoly, harmonic_eval, hp_eval

# parameter names per degree, in HarmonicSpec order
_NAMES = {0: ("w0",), 1: ("w10", "w01"), 2: ("w20", "w11"), 3: ("w30", "w03")}


def _names(k: int) -> tuple:
    return _NAMES.get(k, (f"w{k}0", f"w0{k}"))


@dataclass(frozen=True)
class DriftField:
    """Drift potential given by harmonic polynomials of degree 0..K.

    ``specs[k]`` is the HarmonicSpec of degree ``k``.  Missing degrees are
    zero.  Coefficients are polynomials in time, so their time derivatives
    are exact.
    """

    specs: tuple = field(default_factory=tuple)

    def __post_init__(self):
        specs = list(self.specs)
        while len(specs) < 4:
            specs.append(HarmonicSpec(len(specs)))
        for k, s in enumerate(specs):
            if s.degree != k:
                raise ValueError(f"specs[{k}] has degree {s.degree}")
        object.__setattr__(self, "specs", tuple(specs))

    @classmethod
    def zero(cls) -> "DriftField":
        return cls()

    @classmethod
    def from_mapping(cls, coeffs: Mapping[str, Sequence[float]]) -> "DriftField":
        """Build from ``{"w20": [c0, c1, ...], ...}``, polynomial in t per name."""
        coeffs = dict(coeffs)
        kmax = 3
        for name in coeffs:
            if not (name.startswith("w") and name[1:].isdigit()):
                raise ValueError(f"bad drift coefficient name {name!r}")
            kmax = max(kmax, sum(int(ch) for ch in name[1:]))
        specs = []
        for k in range(kmax + 1):
            lists = tuple(tuple(coeffs.pop(n, ())) for n in _names(k))
            specs.append(HarmonicSpec(k, lists))
        if coeffs:
            raise ValueError(f"unknown drift coefficients: {sorted(coeffs)}")
        return cls(tuple(specs))

    @property
    def max_degree(self) -> int:
        return len(self.specs) - 1

    def is_zero(self) -> bool:
        return all(not any(lst) for s in self.specs for lst in s.coeffs)

    def omega(self, t: float, derivative: int = 0) -> Dict[str, float]:
        out = {}
        for k, s in enumerate(self.specs):
            for name, val in zip(_names(k), s.omega(t, derivative)):
                out[name] = float(val)
        return out

    def W(self, k: int, t: float, derivative: int = 0) -> HPoly:
        if k >= len(self.specs):
            return HPoly(np.zeros(k + 1))
        return harmonic_eval(self.specs[k], t, derivative)

    def potentials(self, t: float, derivative: int = 0) -> List[HPoly]:
        return [self.W(k, t, derivative) for k in range(len(self.specs))]

    def _derivative_polys(self, t, order, derivative=0):
        # all partial derivatives of the given order, as lists of HPoly per degree
        out = {}
        for W in self.potentials(t, derivative):
            stack = [((), W)]
            for _ in range(order):
                nxt = []
                for idx, p in stack:
                    g = p.grad()
                    nxt.append((idx + (0,), g.u))
                    nxt.append((idx + (1,), g.v))
                stack = nxt
            for idx, p in stack:
                out.setdefault(idx, []).append(p)
        return out

    def derivatives_at(self, x1, x2, t: float, order: int, derivative: int = 0) -> Dict[tuple, np.ndarray]:
        """All partial x-derivatives of the given order of ``d^derivative w / dt``.

        Keys are index tuples, e.g. ``(0,)`` for w_x1 and ``(0, 1)`` for w_x1x2.
        """
        polys = self._derivative_polys(t, order, derivative)
        return {
            idx: sum(np.asarray(hp_eval(p, (x1, x2))) for p in plist)
            for idx, plist in polys.items()
        }

    def derivatives_upto(self, x1, x2, t: float, order: int, derivative: int = 0) -> Dict[tuple, np.ndarray]:
        """All partial x-derivatives of orders ``1..order`` in one pass.

        Same keys as :meth:`derivatives_at`; monomials are differentiated in
        closed form, so this is the fast path for node-wise evaluation.
        """
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        shape = np.broadcast(x1, x2).shape
        unique: Dict[tuple, np.ndarray] = {}
        for W in self.potentials(t, derivative):
            n = W.degree
            for m, c in enumerate(W.coeffs):
                if c == 0.0:
                    continue
                for i in range(order + 1):
                    for j in range(order + 1 - i):
                        if i + j == 0 or i > n - m or j > m:
                            continue
                        f = c * perm(n - m, i) * perm(m, j)
                        val = f * x1 ** (n - m - i) * x2 ** (m - j)
                        unique[(i, j)] = unique[(i, j)] + val if (i, j) in unique else val
        out: Dict[tuple, np.ndarray] = {}
        for k in range(1, order + 1):
            for idx in product((0, 1), repeat=k):
                key = (idx.count(0), idx.count(1))
                out[idx] = np.broadcast_to(unique.get(key, 0.0), shape) + np.zeros(shape)
        return out

    def gradient_at(self, x1, x2, t: float, derivative: int = 0):
        d = self.derivatives_at(x1, x2, t, 1, derivative)
        return d[(0,)], d[(1,)]
