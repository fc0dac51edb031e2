"""Finite Blaschke products: recognition, boundary derivative, sup of |f'|."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import minimize_scalar

from hypolevel.dsl.ast import Aut, BinOp, Blaschke, Compose, Const, Identity, MapExpr, Neg, Pow, Var
from hypolevel.hyp_core import BoundaryPoint

_UNIMODULAR_TOL = 1e-12


class UnsupportedMap(ValueError):
    """The operation needs a finite Blaschke product."""


@dataclass(frozen=True)
class BlaschkeData:
    theta: float
    zeros: Tuple[complex, ...]

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def to_expr(self) -> Blaschke:
        return Blaschke(self.theta, self.zeros)

    def __call__(self, z):
        return self.to_expr()(z)


def _rotate(d: BlaschkeData, phi: float) -> BlaschkeData:
    return BlaschkeData(math.remainder(d.theta + phi, 2 * math.pi), d.zeros)


def _preimages(b: BlaschkeData, w: complex) -> list:
    """Solutions of ``b(z) = w`` (all lie in the disk when |w| < 1)."""
    num = np.array([1 + 0j])
    den = np.array([1 + 0j])
    for a in b.zeros:
        num = P.polymul(num, [-a, 1])
        den = P.polymul(den, [1, -a.conjugate()])
    poly = P.polysub(cmath.exp(1j * b.theta) * num, w * den)
    return list(P.polyroots(poly))


def as_blaschke(expr: MapExpr) -> Optional[BlaschkeData]:
    """Canonical (theta, zeros) form if ``expr`` is a finite Blaschke product."""
    if isinstance(expr, (Var, Identity)):
        return BlaschkeData(0.0, (0j,))
    if isinstance(expr, Blaschke):
        return BlaschkeData(expr.theta, expr.zeros)
    if isinstance(expr, Aut):
        return BlaschkeData(expr.theta, (expr.a,))
    if isinstance(expr, Neg):
        inner = as_blaschke(expr.arg)
        return None if inner is None else _rotate(inner, math.pi)
    if isinstance(expr, Pow):
        inner = as_blaschke(expr.base)
        if inner is None or expr.exponent < 1:
            return None
        return BlaschkeData(math.remainder(inner.theta * expr.exponent, 2 * math.pi),
                            inner.zeros * expr.exponent)
    if isinstance(expr, BinOp) and expr.op == "*":
        for c, other in ((expr.left, expr.right), (expr.right, expr.left)):
            if isinstance(c, Const) and abs(abs(c.value) - 1) < _UNIMODULAR_TOL:
                inner = as_blaschke(other)
                return None if inner is None else _rotate(inner, cmath.phase(c.value))
        lhs, rhs = as_blaschke(expr.left), as_blaschke(expr.right)
        if lhs is None or rhs is None:
            return None
        return BlaschkeData(math.remainder(lhs.theta + rhs.theta, 2 * math.pi),
                            lhs.zeros + rhs.zeros)
    if isinstance(expr, Compose):
        outer, inner = as_blaschke(expr.outer), as_blaschke(expr.inner)
        if outer is None or inner is None:
            return None
        zeros = tuple(complex(r) for a in outer.zeros for r in _preimages(inner, a))
        # fix the rotation at the probe point where the factor product is largest
        bare = BlaschkeData(0.0, zeros)
        probes = 0.5 * np.exp(1j * np.linspace(0, 2 * np.pi, 7, endpoint=False))
        vals = bare.to_expr()(probes)
        k = int(np.argmax(np.abs(vals)))
        target = complex(expr(complex(probes[k])))
        return BlaschkeData(cmath.phase(target / vals[k]), zeros)
    return None


def blaschke_boundary_derivative(zeros, zeta) -> float:
    """``|f'(zeta)|`` on the unit circle: ``sum (1-|a|^2)/|zeta-a|^2``.

    ``zeta`` may be a BoundaryPoint, a unimodular complex, or an array of them.
    """
    if isinstance(zeta, BoundaryPoint):
        zeta = zeta.value
    zeta = np.asarray(zeta, dtype=complex)
    total = np.zeros(zeta.shape)
    for a in zeros:
        a = complex(a)
        total = total + (1 - abs(a) ** 2) / np.abs(zeta - a) ** 2
    return float(total) if total.ndim == 0 else total


def sup_derivative(f, n_samples: int = 4096, n_refine: int = 4) -> float:
    """``sup |f'|`` over the disk for a finite Blaschke product.

    By the maximum principle the sup is attained on the circle, where |f'| is
    the boundary derivative; dense sampling locates candidates and a bounded
    golden-section/parabolic search polishes the best local maxima.
    """
    data = f if isinstance(f, BlaschkeData) else as_blaschke(f)
    if data is None:
        raise UnsupportedMap(f"not a finite Blaschke product: {f}")
    t = np.linspace(0, 2 * np.pi, n_samples, endpoint=False)
    vals = blaschke_boundary_derivative(data.zeros, np.exp(1j * t))
    best = float(vals.max())
    h = 2 * np.pi / n_samples
    peaks = np.flatnonzero((vals >= np.roll(vals, 1)) & (vals >= np.roll(vals, -1)))
    for k in peaks[np.argsort(vals[peaks])[::-1][:n_refine]]:
        res = minimize_scalar(
            lambda s: -blaschke_boundary_derivative(data.zeros, cmath.exp(1j * s)),
            bounds=(t[k] - h, t[k] + h), method="bounded", options={"xatol": 1e-12})
        best = max(best, -float(res.fun))
    return best
