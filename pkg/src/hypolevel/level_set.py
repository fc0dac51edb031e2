"""Level sets of holomorphic self-maps: potentials, membership, extraction.

Every family is described by a potential ``u`` with the region equal to
``{u > 0}``:

* ``OmegaLambda``: ``u = |f|^2 - lam |z|^2 + lam - 1`` (density ratio below lam)
* ``DMu``: ``u = (1 + a|z|)|f| - |z| - a`` with ``a = -tanh(mu/2)``; optional
  base points ``z0``, ``w0`` are handled by pre/post-composing automorphisms
* ``PhiMu``: the distance-difference set deformed by an increasing function;
  ``identity`` is DMu, ``log_cosh_half`` is ``mu - Phi(k(z,0)) + Phi(k(f(z),0))``
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Union

import numpy as np
from scipy import ndimage
from skimage import measure

from hypolevel.dsl import MapExpr, as_blaschke, sup_derivative, unparse
from hypolevel.hyp_core import EPS_BOUNDARY, _c, hyp_distance

TOL_CONTOUR = 1e-9
LEVEL_TOL = 1e-12
MAX_BISECT = 60


class NonSmoothPoint(ValueError):
    pass


class OriginNotInRegion(ValueError):
    pass


class UnsupportedParameter(ValueError):
    pass


class PhiKind(str, Enum):
    IDENTITY = "identity"
    LOG_COSH_HALF = "log_cosh_half"


@dataclass(frozen=True)
class OmegaLambda:
    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be positive")

    def to_dict(self):
        return {"family": "omega", "lambda": self.lam}

    @property
    def label(self):
        return f"Omega_{self.lam:g}"


@dataclass(frozen=True)
class DMu:
    mu: float
    z0: complex = 0j
    w0: complex = 0j

    def __post_init__(self):
        for p in (self.z0, self.w0):
            if not abs(p) < 1:
                raise ValueError("base points must lie in the disk")

    @property
    def a(self) -> float:
        return -math.tanh(self.mu / 2)

    def to_dict(self):
        d = {"family": "dmu", "mu": self.mu}
        if self.z0 or self.w0:
            d["z0"] = [complex(self.z0).real, complex(self.z0).imag]
            d["w0"] = [complex(self.w0).real, complex(self.w0).imag]
        return d

    @property
    def label(self):
        return f"D_{self.mu:g}"


@dataclass(frozen=True)
class PhiMu:
    phi: PhiKind
    mu: float

    def __post_init__(self):
        object.__setattr__(self, "phi", PhiKind(self.phi))

    def to_dict(self):
        return {"family": "phi", "phi": self.phi.value, "mu": self.mu}

    @property
    def label(self):
        return f"D_{{{self.phi.value},{self.mu:g}}}"


LevelSpec = Union[OmegaLambda, DMu, PhiMu]


def spec_from_dict(d: dict) -> LevelSpec:
    fam = d["family"]
    if fam == "omega":
        return OmegaLambda(float(d["lambda"]))
    if fam == "dmu":
        z0 = complex(*d.get("z0", (0.0, 0.0)))
        w0 = complex(*d.get("w0", (0.0, 0.0)))
        return DMu(float(d["mu"]), z0, w0)
    if fam == "phi":
        return PhiMu(PhiKind(d["phi"]), float(d["mu"]))
    raise ValueError(f"unknown family {fam!r}")


def _log_cosh_half(k):
    return np.logaddexp(k / 2, -k / 2) - math.log(2)


def _moebius_to_origin(z, p: complex):
    return (z - p) / (1 - np.conj(p) * z)


def potential_u(spec: LevelSpec, f: MapExpr, z):
    """Potential whose positive set is the level set; vectorized in ``z``."""
    z = _c(z)
    if isinstance(spec, OmegaLambda):
        fz = f(z)
        lam = spec.lam
        return np.abs(fz) ** 2 - lam * np.abs(z) ** 2 + lam - 1
    if isinstance(spec, PhiMu):
        if spec.phi is PhiKind.IDENTITY:
            return potential_u(DMu(spec.mu), f, z)
        fz = f(z)
        return spec.mu - _log_cosh_half(hyp_distance(z, 0j)) + _log_cosh_half(hyp_distance(fz, 0j))
    fz = f(z)
    s = np.abs(_moebius_to_origin(z, spec.z0)) if spec.z0 else np.abs(z)
    g = np.abs(_moebius_to_origin(fz, spec.w0)) if spec.w0 else np.abs(fz)
    a = spec.a
    return (1 + a * s) * g - s - a


def grad_u(spec: LevelSpec, f: MapExpr, z):
    """Euclidean gradient ``u_x + i u_y = 2 du/dzbar`` (vectorized)."""
    from hypolevel.dsl import eval_jet

    z = _c(z)
    jet = eval_jet(f, z)
    fz, df = jet.f, jet.d1
    if isinstance(spec, OmegaLambda):
        return 2 * (fz * np.conj(df) - spec.lam * z)
    if isinstance(spec, PhiMu) and spec.phi is PhiKind.LOG_COSH_HALF:
        return -z / (1 - np.abs(z) ** 2) + fz * np.conj(df) / (1 - np.abs(fz) ** 2)
    if isinstance(spec, PhiMu):
        spec = DMu(spec.mu)
    z0, w0 = complex(spec.z0), complex(spec.w0)
    S = _moebius_to_origin(z, z0)
    dS = (1 - abs(z0) ** 2) / (1 - np.conj(z0) * z) ** 2
    G = _moebius_to_origin(fz, w0)
    dG = (1 - abs(w0) ** 2) / (1 - np.conj(w0) * fz) ** 2 * df
    aS, aG = np.abs(S), np.abs(G)
    if np.any(aS == 0) or np.any(aG == 0):
        raise NonSmoothPoint("the distance potential is not differentiable where z=z0 or f(z)=w0")
    a = spec.a
    gS = S * np.conj(dS) / aS
    gG = G * np.conj(dG) / aG
    return a * aG * gS + (1 + a * aS) * gG - gS


IN, OUT, BOUNDARY = "in", "out", "boundary"


def membership(spec: LevelSpec, f: MapExpr, z, tol: float = TOL_CONTOUR) -> str:
    u = float(potential_u(spec, f, complex(_c(z))))
    if abs(u) <= tol:
        return BOUNDARY
    return IN if u > tol else OUT


# ---------------------------------------------------------------- extraction


@dataclass
class RegionSample:
    spec: LevelSpec
    map_text: str
    resolution: int
    bitmap: np.ndarray  # bool (resolution, resolution); row index runs along y
    contours: List[np.ndarray] = field(default_factory=list)  # complex vertices
    contains_origin: bool = False
    tol_contour: float = TOL_CONTOUR

    @property
    def cell(self) -> float:
        return 2.0 / self.resolution

    def centers(self) -> np.ndarray:
        return grid_centers(self.resolution)

    def in_count(self) -> int:
        return int(self.bitmap.sum())

    def out_count(self) -> int:
        inside = np.abs(self.centers()) < 1 - EPS_BOUNDARY
        return int((inside & ~self.bitmap).sum())


def grid_centers(resolution: int) -> np.ndarray:
    x = -1 + (np.arange(resolution) + 0.5) * (2.0 / resolution)
    return x[None, :] + 1j * x[:, None]


def _bisect_edges(u: Callable, a: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
    """Roots of ``u`` on segments [a, b] with a sign change, by vectorized bisection.

    Bisection runs to full precision even once ``|u| <= tol``: near the unit
    circle the gradient is small and the residual alone says little about
    the position.
    """
    ua = u(a)
    lo, hi = np.zeros(a.shape), np.ones(a.shape)
    best = a.copy()
    best_abs = np.abs(ua)
    pos_lo = ua > 0
    active = np.ones(a.shape, dtype=bool)
    for _ in range(MAX_BISECT):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        mid = 0.5 * (lo[idx] + hi[idx])
        p = a[idx] + mid * (b[idx] - a[idx])
        um = u(p)
        better = np.abs(um) < best_abs[idx]
        best[idx[better]] = p[better]
        best_abs[idx[better]] = np.abs(um[better])
        same = (um > 0) == pos_lo[idx]
        lo[idx[same]] = mid[same]
        hi[idx[~same]] = mid[~same]
        active[idx] = (hi[idx] - lo[idx]) > 1e-17
    if np.any(best_abs > tol):
        raise ArithmeticError("contour refinement did not reach the tolerance")
    return best


def extract_region(spec: LevelSpec, f: MapExpr, resolution: int = 512,
                   tol_contour: float = TOL_CONTOUR, map_text: Optional[str] = None) -> RegionSample:
    """Membership bitmap on cell centers plus refined marching-squares contours."""
    if resolution < 64:
        raise ValueError("resolution must be at least 64")
    zc = grid_centers(resolution)
    inside = np.abs(zc) < 1 - EPS_BOUNDARY
    U = np.full(zc.shape, np.nan)
    U[inside] = potential_u(spec, f, zc[inside])
    bitmap = inside & (U > 0)
    contours = []
    if bitmap.any() and (inside & ~bitmap).any():
        h = 2.0 / resolution
        u = lambda p: potential_u(spec, f, p)  # noqa: E731
        for rc in measure.find_contours(np.where(inside, U, 0.0), 0.0, mask=inside):
            contours.append(_refine_contour(rc, h, u, tol_contour))
    origin = float(potential_u(spec, f, 0j)) > 0
    return RegionSample(spec, map_text if map_text is not None else unparse(f), resolution,
                        bitmap, contours, origin, tol_contour)


def _refine_contour(rc: np.ndarray, h: float, u, tol: float) -> np.ndarray:
    rows, cols = rc[:, 0], rc[:, 1]
    on_row = np.abs(rows - np.round(rows)) < 1e-9
    r0 = np.where(on_row, np.round(rows), np.floor(rows))
    c0 = np.where(on_row, np.floor(cols), np.round(cols))
    r1 = np.where(on_row, r0, r0 + 1)
    c1 = np.where(on_row, c0 + 1, c0)
    to_z = lambda r, c: (-1 + (c + 0.5) * h) + 1j * (-1 + (r + 0.5) * h)  # noqa: E731
    return _bisect_edges(u, to_z(r0, c0), to_z(r1, c1), tol)


def component_of_origin(region: RegionSample) -> RegionSample:
    """Restrict the bitmap to the 4-connected component containing 0."""
    if not region.contains_origin:
        raise OriginNotInRegion("origin is not in the region")
    labels, _ = ndimage.label(region.bitmap)
    n = region.resolution
    mid = [n // 2 - 1, n // 2] if n % 2 == 0 else [n // 2]
    keep = {int(labels[i, j]) for i in mid for j in mid if labels[i, j] > 0}
    mask = np.isin(labels, sorted(keep))
    return RegionSample(region.spec, region.map_text, n, mask, list(region.contours),
                        region.contains_origin, region.tol_contour)


# ------------------------------------------------------------ radial structure


def _ray_radii(n_samples: int) -> np.ndarray:
    return np.linspace(0.0, 1.0 - EPS_BOUNDARY, n_samples)


def radius_functions(u: Callable, omegas, n_samples: int = 512, tol: float = 1e-12,
                     level: float = LEVEL_TOL, vals: Optional[np.ndarray] = None) -> np.ndarray:
    """Vectorized radius function ``R(omega) = sup{r : [0, r omega] in {u > level}}``.

    ``vals`` may carry ``u`` already sampled on the ray grid.
    """
    omegas = np.atleast_1d(np.asarray(omegas, dtype=complex))
    if not float(u(np.array([0j]))[0]) > level:
        raise OriginNotInRegion("origin is not in the region")
    r = _ray_radii(n_samples)
    if vals is None:
        vals = u(omegas[:, None] * r[None, :])
    out = ~(vals > level)
    hit = out.any(axis=1)
    first = np.argmax(out, axis=1)
    R = np.full(omegas.shape, 1.0 - EPS_BOUNDARY)
    if hit.any():
        idx = np.flatnonzero(hit)
        lo = r[first[idx] - 1].copy()
        hi = r[first[idx]].copy()
        w = omegas[idx]
        while np.max(hi - lo) > tol:
            mid = 0.5 * (lo + hi)
            inside = u(mid * w) > level
            lo = np.where(inside, mid, lo)
            hi = np.where(inside, hi, mid)
        R[idx] = lo
    return R


def potential_of(spec: LevelSpec, f: MapExpr) -> Callable:
    return lambda z: potential_u(spec, f, z)


def radius_function(spec: LevelSpec, f: MapExpr, omega, tol: float = 1e-12,
                    n_samples: int = 512) -> float:
    w = complex(_c(omega))
    return float(radius_functions(potential_of(spec, f), [w], n_samples, tol)[0])


@dataclass(frozen=True)
class StarlikeReport:
    starlike: bool
    n_directions: int
    witness_angle: Optional[float] = None
    witness_radius: Optional[float] = None

    def to_dict(self):
        return {"starlike": self.starlike, "n_directions": self.n_directions,
                "witness_angle": self.witness_angle, "witness_radius": self.witness_radius}


def starlike_from_potential(u: Callable, n_directions: int = 720, n_samples: int = 512,
                            tol: float = 1e-12, level: float = LEVEL_TOL) -> StarlikeReport:
    ang = 2 * np.pi * np.arange(n_directions) / n_directions
    om = np.exp(1j * ang)
    r = _ray_radii(n_samples)
    vals = u(om[:, None] * r[None, :])
    R = radius_functions(u, om, n_samples, tol, level, vals)
    beyond = r[None, :] > R[:, None] + 10 * tol
    back_in = beyond & (vals > level)
    bad = np.flatnonzero(back_in.any(axis=1))
    if bad.size:
        k = int(bad[0])
        j = int(np.argmax(back_in[k]))
        return StarlikeReport(False, n_directions, float(ang[k]), float(r[j]))
    return StarlikeReport(True, n_directions)


def is_starlike(spec: LevelSpec, f: MapExpr, n_directions: int = 720, tol: float = 1e-12,
                n_samples: int = 512) -> StarlikeReport:
    return starlike_from_potential(potential_of(spec, f), n_directions, n_samples, tol)


# ------------------------------------------------------- closed-form criteria


def dmu_nonempty(f: MapExpr, mu: float) -> bool:
    """``D_mu(f)`` (base points 0, 0) is nonempty iff ``|f(0)| > -tanh(mu/2)``."""
    if not mu < 0:
        raise UnsupportedParameter("the nonemptiness criterion is stated for mu < 0")
    return abs(complex(f(0j))) > -math.tanh(mu / 2)


def omega_whole_disk(f: MapExpr, lam: float) -> bool:
    """True iff f is a finite Blaschke product, lam >= sup|f'| and lam > 1."""
    data = as_blaschke(f)
    if data is None or not lam > 1:
        return False
    return lam >= sup_derivative(data) * (1 - 1e-10)


def phi_disagreements(f: MapExpr, mu: float, n_points: int = 10_000, seed: int = 0) -> int:
    """Count sign mismatches between the log-cosh deformed set and Omega_{exp(2 mu)}."""
    rng = np.random.default_rng(seed)
    r = np.sqrt(rng.random(n_points)) * (1 - 1e-6)
    z = r * np.exp(2j * np.pi * rng.random(n_points))
    a = potential_u(PhiMu(PhiKind.LOG_COSH_HALF, mu), f, z)
    b = potential_u(OmegaLambda(math.exp(2 * mu)), f, z)
    return int(np.sum(np.sign(a) != np.sign(b)))


def phi_equivalence_check(f: MapExpr, mu: float, n_points: int = 10_000, seed: int = 0) -> bool:
    return phi_disagreements(f, mu, n_points, seed) == 0
