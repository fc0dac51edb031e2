"""Hyperbolic geodesics of the disk: diameters and arcs orthogonal to the circle.

Constructions go through an automorphism moving a point to the origin, where
every geodesic is a diameter, and pull the ideal endpoints back.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from hypolevel.hyp_core import EPS_BOUNDARY, DiskPoint, _c

COLLINEAR_TOL = 1e-10


class CoincidentPoints(ValueError):
    pass


def _canonical_direction(d: complex) -> complex:
    d = d / abs(d)
    if d.real < 0 or (d.real == 0 and d.imag < 0):
        d = -d
    return d


@dataclass(frozen=True)
class Diameter:
    direction: complex

    def residual(self, p):
        """Euclidean distance of ``p`` from the line."""
        return np.abs(np.imag(_c(p) * np.conj(self.direction)))

    def tangent_at(self, p) -> complex:
        return self.direction

    def points_at(self, p, chords):
        """Points of the geodesic at signed euclidean distances ``chords`` from ``p``."""
        s0 = float(np.real(_c(p) * np.conj(self.direction)))
        return (s0 + np.asarray(chords, dtype=float)) * self.direction

    def to_dict(self) -> dict:
        return {"kind": "diameter", "direction": [self.direction.real, self.direction.imag]}


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float

    def residual(self, p):
        return np.abs(np.abs(_c(p) - self.center) - self.radius)

    def tangent_at(self, p) -> complex:
        r = _c(p) - self.center
        return 1j * r / abs(r)

    def points_at(self, p, chords):
        """Points of the arc at signed chord lengths ``chords`` from ``p``."""
        t0 = np.angle(_c(p) - self.center)
        x = np.clip(np.asarray(chords, dtype=float) / (2 * self.radius), -1, 1)
        return self.center + self.radius * np.exp(1j * (t0 + 2 * np.arcsin(x)))

    def to_dict(self) -> dict:
        return {"kind": "arc", "center": [self.center.real, self.center.imag],
                "radius": self.radius}


Geodesic = Union[Diameter, Arc]


@dataclass(frozen=True)
class GeodesicSegment:
    geodesic: Geodesic
    z1: complex
    z2: complex

    def sample(self, n: int):
        return segment_sample(self.z1, self.z2, n)


def geodesic_from_disk(data: dict) -> Geodesic:
    if data["kind"] == "diameter":
        return Diameter(complex(*data["direction"]))
    return Arc(complex(*data["center"]), float(data["radius"]))


def geodesic_from_ideal(e1: complex, e2: complex) -> Geodesic:
    """Geodesic with ideal endpoints ``e1``, ``e2`` (not antipodal)."""
    # the center is where the tangent lines to the circle at e1, e2 meet
    c = complex(2 * e1 * e2 / (e1 + e2))
    return Arc(c, float(np.sqrt((abs(c) - 1) * (abs(c) + 1))))


def orthogonality_residual(arc: Arc) -> float:
    """``|c|^2 - r^2 - 1``; zero for an arc orthogonal to the unit circle."""
    c = arc.center
    return c.real ** 2 + c.imag ** 2 - arc.radius ** 2 - 1


def _pull_back(z0: complex, tau: complex) -> Geodesic:
    """Geodesic through ``z0`` with euclidean tangent direction ``tau``."""
    # center z0 + t n on the normal; |c|^2 = t^2 + 1 fixes t without cancellation
    n = 1j * tau
    t = (1 - abs(z0) ** 2) / (2 * (z0 * n.conjugate()).real)
    return Arc(complex(z0 + t * n), float(abs(t)))


def geodesic_through(z1, z2) -> Geodesic:
    z1, z2 = complex(_c(z1)), complex(_c(z2))
    diff = abs(z1 - z2)
    if diff <= 1e-12:
        raise CoincidentPoints(f"{z1} and {z2} coincide")
    if abs((z1 * z2.conjugate()).imag) < COLLINEAR_TOL * diff:
        return Diameter(_canonical_direction(z2 - z1 if abs(z1) < abs(z2) else z1 - z2))
    w = (z2 - z1) / (1 - z1.conjugate() * z2)
    return _pull_back(z1, w / abs(w))


def orthogonal_geodesic(zeta, direction: complex) -> Geodesic:
    """Geodesic through ``zeta`` whose tangent there is perpendicular to ``direction``."""
    zeta = complex(_c(zeta))
    direction = complex(direction) / abs(direction)
    tau = 1j * direction
    # automorphisms fixing the collinear case keep the tangent line through 0
    if abs((zeta * tau.conjugate()).imag) < COLLINEAR_TOL:
        return Diameter(_canonical_direction(tau))
    return _pull_back(zeta, tau)


def segment_sample(z1, z2, n: int):
    """``n`` points equally spaced in hyperbolic arclength from ``z1`` to ``z2``.

    ``z1``/``z2`` may be arrays of equal shape, in which case the result has
    an extra trailing axis of length ``n``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    z1, z2 = _c(z1), _c(z2)
    scalar = not isinstance(z1, np.ndarray)
    z1 = np.atleast_1d(z1)[..., None]
    z2 = np.atleast_1d(z2)[..., None]
    if np.any(np.abs(z1 - z2) <= 1e-12):
        raise CoincidentPoints("segment endpoints coincide")
    w = (z2 - z1) / (1 - np.conj(z1) * z2)
    s = np.linspace(0.0, 1.0, n)
    radial = np.tanh(s * np.arctanh(np.abs(w))) * (w / np.abs(w))
    pts = (radial + z1) / (1 + np.conj(z1) * radial)
    pts[..., 0] = z1[..., 0]
    pts[..., -1] = z2[..., 0]
    return pts[0] if scalar else pts


def segment_point(z1, z2, s):
    """Point at fraction ``s`` of hyperbolic arclength along the segment (vectorized)."""
    z1, z2, s = _c(z1), _c(z2), np.asarray(s, dtype=float)
    w = (z2 - z1) / (1 - np.conj(z1) * z2)
    radial = np.tanh(s * np.arctanh(np.abs(w))) * (w / np.abs(w))
    return (radial + z1) / (1 + np.conj(z1) * radial)


def in_disk(p, eps: float = EPS_BOUNDARY):
    return np.abs(p) < 1 - eps


def as_disk_point(z) -> DiskPoint:
    return z if isinstance(z, DiskPoint) else DiskPoint(complex(z))
