"""Boundary second-variation quantities from the convexity proofs.

At a boundary point the map is first normalized by rotations so that the
point ``zeta`` is positive and ``f(zeta) >= 0``.  With
``phi(z) = (zeta + z)/(1 + zeta z)`` and ``g = f o phi`` the order-2 jet of
``g`` at 0 gives ``b = g(0)``, ``b1 = g'(0)``, ``b2 = g''(0)/2`` and from
them the coefficients ``c0``, ``c1`` of ``h(z) = (b - g(z))/(z (1 - b g(z)))``.
The potential restricted to the geodesic ``t -> phi(t kappa)`` has a second
derivative at 0 given in closed form; ``v2_numeric`` checks it by central
differences with Richardson extrapolation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass

import numpy as np

from hypolevel.dsl import Jet2, MapExpr, as_blaschke
from hypolevel.hyp_core import _c
from hypolevel.level_set import DMu, LevelSpec, OmegaLambda, dmu_nonempty, grad_u, potential_u

TOL_ON_BOUNDARY = 1e-10
_FD_STEPS = (1e-3, 5e-4, 2.5e-4)


class NotOnBoundary(ValueError):
    pass


class EmptySet(ValueError):
    pass


class HypothesisExcluded(ValueError):
    """The parameters fall under an explicit exclusion of the theorem."""


@dataclass(frozen=True)
class _Frame:
    rot_z: complex  # zeta = rot_z * zeta_r
    zeta: float
    b: float
    b1: complex
    b2: complex
    c0: complex
    c1: complex


def _normalize(f: MapExpr, zeta: complex) -> _Frame:
    r = abs(zeta)
    if not 0 < r < 1:
        raise ValueError("zeta must be a nonzero disk point")
    rot_z = zeta / r
    fz = complex(f(zeta))
    rot_w = fz.conjugate() / abs(fz) if fz != 0 else 1.0
    # jet of phi at 0, rotated into f's frame
    inner = Jet2(rot_z * r, rot_z * (1 - r * r), rot_z * (-2 * r * (1 - r * r)))
    g = f(inner)
    g = Jet2(complex(g.f) * rot_w, complex(g.d1) * rot_w, complex(g.d2) * rot_w)
    b = float(g.f.real)
    b1, b2 = complex(g.d1), complex(g.d2) / 2
    c0 = -b1 / (1 - b * b)
    c1 = -b2 / (1 - b * b) - b * c0 * c0
    return _Frame(rot_z, r, b, b1, b2, c0, c1)


def _v2_numeric(spec: LevelSpec, f: MapExpr, fr: _Frame, kappa: complex) -> float:
    """Second derivative of ``t -> u(rot_z phi(t kappa))`` at 0 (Richardson)."""
    z = fr.zeta

    def v(t):
        w = t * kappa
        return potential_u(spec, f, fr.rot_z * (z + w) / (1 + z * w))

    v0 = v(0.0)
    D = [(v(h) - 2 * v0 + v(-h)) / (h * h) for h in _FD_STEPS]
    R1 = [(4 * D[i + 1] - D[i]) / 3 for i in range(2)]
    return float((16 * R1[1] - R1[0]) / 15)


def _check_boundary(spec: LevelSpec, f: MapExpr, zeta: complex):
    res = float(potential_u(spec, f, zeta))
    if abs(res) > TOL_ON_BOUNDARY:
        raise NotOnBoundary(f"|u(zeta)| = {res:.3g} exceeds {TOL_ON_BOUNDARY}")


def _jsonable(d: dict) -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, complex):
            out[k] = [v.real, v.imag]
        else:
            out[k] = v
    return out


# --------------------------------------------------------------------- Omega


@dataclass(frozen=True)
class ProofQuantitiesOmega:
    lam: float
    zeta: float
    b: float
    b1: complex
    b2: complex
    c0: complex
    c1: complex
    A: complex
    A_alt: complex  # b*b1 - lam*zeta*(1 - zeta^2), equal to A
    kappa: complex
    Phi: float
    v2_analytic: float
    v2_numeric: float
    degenerate: bool  # b == 0

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))


def omega_excluded(f: MapExpr, lam: float) -> bool:
    """The theorem's exclusion at lambda = 1: f(0) = 0 or f an automorphism."""
    if lam != 1:
        return False
    data = as_blaschke(f)
    return abs(complex(f(0j))) == 0 or (data is not None and data.degree == 1)


def proof_quantities_omega(f: MapExpr, lam: float, zeta) -> ProofQuantitiesOmega:
    if lam < 1:
        raise ValueError("the second-variation argument needs lambda >= 1")
    if omega_excluded(f, lam):
        raise HypothesisExcluded("lambda = 1 requires f(0) != 0 and f not an automorphism")
    zeta = complex(_c(zeta))
    spec = OmegaLambda(lam)
    _check_boundary(spec, f, zeta)
    fr = _normalize(f, zeta)
    z, b, c0, c1 = fr.zeta, fr.b, fr.c0, fr.c1
    A = -(1 - b * b) * (b * c0 + z)
    A_alt = b * fr.b1 - lam * z * (1 - z * z)
    kappa = 1j * abs(A) / A
    k2 = kappa * kappa
    v2 = 2 * (lam * (1 - z * z) ** 2 * (lam * abs(c0) ** 2 - 1)
              + 2 * (lam * (1 - z * z) * (z * z - b * c1 - b * b * c0 * c0) * k2).real)
    Phi = ((1 - z * z) * (lam * abs(c0) ** 2 - 1) + 2 * ((z * z - b * b * c0 * c0) * k2).real
           + 2 * b * abs(c1))
    return ProofQuantitiesOmega(lam, z, b, fr.b1, fr.b2, c0, c1, complex(A), complex(A_alt),
                                complex(kappa), float(Phi), float(v2),
                                _v2_numeric(spec, f, fr, kappa), b == 0)


# ------------------------------------------------------------------------- D


@dataclass(frozen=True)
class ProofQuantitiesDMu:
    mu: float
    zeta: float
    b: float
    c0: complex
    c1: complex
    A: complex
    A_grad: complex  # conj(grad u) * phi'(0) in the normalized frame, equal to A
    theta: float
    r: float
    kappa: complex
    alpha: float
    beta: float
    p_at_0: float
    p_at_2cos: float
    Phi: float
    v2_analytic: float
    v2_numeric: float

    def p(self, r):
        """The quadratic ``(alpha - 1) r (r - 2 cos theta) + beta cos^2 theta``."""
        ct = math.cos(self.theta)
        return (self.alpha - 1) * r * (r - 2 * ct) + self.beta * ct * ct

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))


def proof_quantities_dmu(f: MapExpr, mu: float, zeta) -> ProofQuantitiesDMu:
    if not mu < 0:
        raise ValueError("the second-variation argument needs mu < 0")
    if not dmu_nonempty(f, mu):
        raise EmptySet("|f(0)| <= -tanh(mu/2), so the set is empty")
    zeta = complex(_c(zeta))
    spec = DMu(mu)
    _check_boundary(spec, f, zeta)
    fr = _normalize(f, zeta)
    z, b, c0, c1 = fr.zeta, fr.b, fr.c0, fr.c1
    A = -(1 - z * z) * (1 - b * b) * (c0 + 1) / (1 - b * z)
    A_grad = np.conj(fr.rot_z.conjugate() * complex(grad_u(spec, f, zeta))) * (1 - z * z)
    r, theta = cmath.polar(c0 + 1)
    kappa = -1j * cmath.exp(-1j * theta)
    alpha = (1 + b * b) / (2 * b)
    beta = alpha - (1 + z * z) / (2 * z)
    ct = math.cos(theta)
    k2 = kappa * kappa
    bracket = ((1 - b * b) * (c0 * kappa).imag ** 2 / (2 * b)
               - ((c1 + b * c0 * c0) * k2).real
               - (b - z) * kappa.real * (c0 * kappa).real
               + z - (1 + 3 * z * z) * kappa.imag ** 2 / (2 * z))
    v2 = 2 * (1 - z * z) * (1 - b * b) / (1 - b * z) * bracket
    Phi = alpha * r * r - 2 * alpha * r * ct + beta * ct * ct - (c1 * k2).real
    p0 = beta * ct * ct
    return ProofQuantitiesDMu(mu, z, b, c0, c1, complex(A), complex(A_grad), theta, r,
                              complex(kappa), alpha, beta, p0, p0, float(Phi), float(v2),
                              _v2_numeric(spec, f, fr, kappa))
