"""Exact formulas for the Poincare disk: distances, density, automorphisms.

Every function here accepts plain complex numbers, numpy arrays of complex
numbers, or :class:`DiskPoint` values, and returns the same kind of thing.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

EPS_BOUNDARY = 1e-9


class DiskDomainError(ValueError):
    """A point that should lie in the open unit disk does not."""


class InvalidSelfMap(ValueError):
    """The map does not send the unit disk into itself."""


def _c(z):
    if isinstance(z, DiskPoint):
        return z.value
    if isinstance(z, BoundaryPoint):
        return z.value
    if isinstance(z, np.ndarray):
        return z.astype(complex, copy=False)
    return complex(z)


@dataclass(frozen=True)
class DiskPoint:
    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not abs(v) < 1.0 - EPS_BOUNDARY:
            raise DiskDomainError(f"|{v}| >= 1 - {EPS_BOUNDARY}")
        object.__setattr__(self, "value", v)

    def __complex__(self):
        return self.value


@dataclass(frozen=True)
class BoundaryPoint:
    angle: float

    @property
    def value(self) -> complex:
        return cmath.exp(1j * self.angle)

    def __complex__(self):
        return self.value

    @classmethod
    def from_complex(cls, w: complex) -> "BoundaryPoint":
        return cls(math.atan2(w.imag, w.real))


@dataclass(frozen=True)
class MoebiusAutomorphism:
    """``T(z) = exp(i*theta) * (z - a) / (1 - conj(a) z)``."""

    a: complex = 0j
    theta: float = 0.0

    def __post_init__(self):
        a = complex(self.a)
        if not abs(a) < 1.0:
            raise DiskDomainError(f"automorphism parameter |a|={abs(a)} >= 1")
        object.__setattr__(self, "a", a)
        # keep theta in (-pi, pi]
        t = math.remainder(float(self.theta), 2 * math.pi)
        if t == -math.pi:
            t = math.pi
        object.__setattr__(self, "theta", t)

    @property
    def rotation(self) -> complex:
        return cmath.exp(1j * self.theta)

    def __call__(self, z):
        return automorphism_apply(self, z)

    def derivative(self, z):
        z = _c(z)
        a = self.a
        return self.rotation * (1 - abs(a) ** 2) / (1 - np.conj(a) * z) ** 2

    def inverse(self) -> "MoebiusAutomorphism":
        return automorphism_inverse(self)

    def compose(self, other: "MoebiusAutomorphism") -> "MoebiusAutomorphism":
        """``self o other``."""
        return automorphism_compose(self, other)


def automorphism_apply(T: MoebiusAutomorphism, z):
    z = _c(z)
    return T.rotation * (z - T.a) / (1 - np.conj(T.a) * z)


def automorphism_inverse(T: MoebiusAutomorphism) -> MoebiusAutomorphism:
    # w = e^{it}(z-a)/(1-a*z)  <=>  z = (e^{-it} w + a)/(1 + a* e^{-it} w)
    #   = e^{-it} (w + a e^{it}) / (1 + conj(a e^{it}) w)
    return MoebiusAutomorphism(-T.a * T.rotation, -T.theta)


def automorphism_compose(S: MoebiusAutomorphism, T: MoebiusAutomorphism) -> MoebiusAutomorphism:
    """Return the canonical form of ``S o T``."""
    # the zero of S o T is T^{-1}(S.a); the rotation is read off at that point
    a = complex(automorphism_apply(automorphism_inverse(T), S.a))
    probe = 0j if abs(a) > 0.5 else 0.5 + 0j
    w = complex(automorphism_apply(S, automorphism_apply(T, probe)))
    base = (probe - a) / (1 - a.conjugate() * probe)
    return MoebiusAutomorphism(a, cmath.phase(w / base))


def automorphism_to(z0) -> MoebiusAutomorphism:
    """The automorphism ``w -> (w + z0)/(1 + conj(z0) w)`` sending 0 to ``z0``."""
    return MoebiusAutomorphism(-_c(z0), 0.0)


def pseudo_hyp_distance(z, w):
    z, w = _c(z), _c(w)
    return np.abs((z - w) / (1 - np.conj(w) * z))


def _one_minus_sq(z):
    r = np.abs(z)
    return (1 - r) * (1 + r)


def hyp_distance(z, w):
    """``2 atanh(rho)``, evaluated as ``2 asinh(|z-w| / sqrt((1-|z|^2)(1-|w|^2)))``.

    The two agree exactly; the second avoids cancellation in ``1 - rho``
    near the circle.
    """
    z, w = _c(z), _c(w)
    return 2 * np.arcsinh(np.abs(z - w) / np.sqrt(_one_minus_sq(z) * _one_minus_sq(w)))


def hyp_density(z):
    z = _c(z)
    return 2 / (1 - np.abs(z) ** 2)


def nu_ratio(z, fz):
    """``(1 - |f(z)|^2) / (1 - |z|^2)`` from precomputed values."""
    return (1 - np.abs(fz) ** 2) / (1 - np.abs(z) ** 2)


def nu_f(f, z):
    """Density ratio of a map at ``z``; raises InvalidSelfMap if ``|f(z)| >= 1``."""
    z = _c(z)
    fz = f(z)
    if np.any(~(np.abs(fz) < 1)):
        raise InvalidSelfMap("map value left the unit disk")
    return nu_ratio(z, fz)


def schwarz_pick_holds(f, df, z, rel_tol: float = 1e-10) -> bool:
    """Check ``|f'(z)| <= nu_f(z)`` at every point of ``z``."""
    return bool(np.all(np.abs(df(z)) <= nu_f(f, z) * (1 + rel_tol)))
