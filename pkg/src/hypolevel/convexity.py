"""Hyperbolic convexity checks for level sets.

``check_h_convex`` looks for a geodesic segment with both endpoints in the
region and some interior point outside it.  ``support_test`` checks the local
separation property of the geodesic through a boundary point orthogonal to
the gradient.  ``boundary_points`` finds boundary points by root-finding along
rays from the origin.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from hypolevel.dsl import MapExpr, unparse
from hypolevel.geodesic import orthogonal_geodesic, segment_point, segment_sample
from hypolevel.hyp_core import EPS_BOUNDARY, DiskPoint, _c
from hypolevel.level_set import (
    LevelSpec,
    OriginNotInRegion,
    grad_u,
    potential_of,
    potential_u,
    radius_functions,
)

TOL_CONVEX = 1e-9
WITNESS_MARGIN = 10.0
TOL_BOUNDARY = 1e-10
TOL_SUPPORT = 1e-13
SUPPORT_CORE = 1e-6
EDGE_BANDS = (0.2, 0.05, 0.01)
# crossings this close to the circle are float noise of a tangential zero there
CIRCLE_BAND = 1e-6
_GOLDEN = (np.sqrt(5.0) - 1) / 2


class EmptyRegion(ValueError):
    pass


class WholeDisk(ValueError):
    pass


class ZeroGradient(ArithmeticError):
    """The gradient of the potential vanishes at a boundary point."""


@dataclass(frozen=True)
class Witness:
    z1: complex
    z2: complex
    p: complex
    u1: float
    u2: float
    up: float
    s: float  # fraction of hyperbolic arclength from z1

    def to_dict(self) -> dict:
        pt = lambda w: [w.real, w.imag]  # noqa: E731
        return {"z1": pt(self.z1), "z2": pt(self.z2), "p": pt(self.p),
                "u_z1": self.u1, "u_z2": self.u2, "u_p": self.up, "s": self.s}


@dataclass(frozen=True)
class ConvexityReport:
    verdict: str  # "no_violation_found" | "violated"
    pairs_tested: int
    margin: float
    seed: int
    witness: Optional[Witness] = None
    n_segment: int = 64
    tol: float = TOL_CONVEX

    @property
    def violated(self) -> bool:
        return self.verdict == "violated"

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "pairs_tested": self.pairs_tested,
                "margins": self.margin, "seed": self.seed, "n_segment": self.n_segment,
                "tol": self.tol,
                "witness": None if self.witness is None else self.witness.to_dict()}


# ------------------------------------------------------------------ sampling


def _disk_uniform(rng, n: int, rmax: float = 1 - 1e-6) -> np.ndarray:
    r = rmax * np.sqrt(rng.random(n))
    return r * np.exp(2j * np.pi * rng.random(n))


def _distinct_pairs(rng, size: int, m: int):
    i = rng.integers(0, size, m)
    return i, (i + rng.integers(1, size, m)) % size


def _sample_pairs(u, rng, n_pairs: int, margin: float, max_rounds: int = 40):
    """Pairs of region points in three equal groups.

    Global pairs are drawn from the whole pool, edge pairs from the pool
    points with the smallest ``u/(1-|z|^2)``.  Local pairs draw ``w`` uniformly in
    the disk and map it by the automorphism sending 0 to ``z1``, so partners
    spread hyperbolically around ``z1``.
    """
    pool = np.zeros(1, dtype=complex) if u(np.zeros(1, dtype=complex))[0] > margin else \
        np.empty(0, dtype=complex)
    for _ in range(4):
        cand = _disk_uniform(rng, max(8 * n_pairs, 4096))
        pool = np.concatenate([pool, cand[u(cand) > margin]])
        if pool.size >= 2 * n_pairs:
            break
    for _ in range(max_rounds):
        # small regions: grow around known points at log-uniform scales
        if pool.size >= 2 * n_pairs or pool.size == 0:
            break
        m = 8 * n_pairs
        a = pool[rng.integers(0, pool.size, m)]
        w = _disk_uniform(rng, m) * 10.0 ** rng.uniform(-4, 0, m)
        cand = (w + a) / (1 + np.conj(a) * w)
        pool = np.concatenate([pool, cand[u(cand) > margin]])
    if pool.size < 2:
        raise EmptyRegion("no region points found by rejection sampling")
    n_global = n_pairs // 3
    i, j = _distinct_pairs(rng, pool.size, n_global)
    # near-boundary pairs in bands of shrinking width; u vanishes on the unit
    # circle, so rank by u/(1-|z|^2)
    n_edge = n_pairs // 3
    order = np.argsort(u(pool) / (1 - np.abs(pool) ** 2), kind="stable")
    z1s, z2s = [pool[i]], [pool[j]]
    for t, frac in enumerate(EDGE_BANDS):
        low = pool[order[: max(2, int(pool.size * frac))]]
        m = n_edge // len(EDGE_BANDS) + (t < n_edge % len(EDGE_BANDS))
        k1, k2 = _distinct_pairs(rng, low.size, m)
        z1s.append(low[k1])
        z2s.append(low[k2])
    need = n_pairs - n_global - n_edge
    for _ in range(max_rounds):
        if need <= 0:
            break
        m = 4 * need
        a = pool[rng.integers(0, pool.size, m)]
        w = _disk_uniform(rng, m)
        b = (w + a) / (1 + np.conj(a) * w)
        ok = (u(b) > margin) & (np.abs(b) < 1 - 1e-6)
        a, b = a[ok][:need], b[ok][:need]
        z1s.append(a)
        z2s.append(b)
        need -= a.size
    z1, z2 = np.concatenate(z1s), np.concatenate(z2s)
    keep = np.abs(z1 - z2) > 1e-9
    return z1[keep], z2[keep]


def _golden_min(g, lo, hi, iters: int = 45):
    """Vectorized golden-section minimization of ``g`` on ``[lo, hi]``."""
    a, b = lo.copy(), hi.copy()
    for _ in range(iters):
        c = b - _GOLDEN * (b - a)
        d = a + _GOLDEN * (b - a)
        left = g(c) < g(d)
        b = np.where(left, d, b)
        a = np.where(left, a, c)
    s = 0.5 * (a + b)
    return s, g(s)


def _segment_minima(u, z1, z2, n_segment: int):
    """Minimum of ``u`` over the interior of each segment, refined by golden section."""
    pts = segment_sample(z1, z2, n_segment)
    vals = u(pts)
    inner = vals[:, 1:-1]
    k = np.argmin(inner, axis=1) + 1
    s_grid = np.linspace(0.0, 1.0, n_segment)
    lo, hi = s_grid[k - 1], s_grid[k + 1]

    def g(s):
        return u(segment_point(z1, z2, s))

    s_ref, u_ref = _golden_min(g, lo, hi)
    sampled = inner[np.arange(len(k)), k - 1]
    better = u_ref < sampled
    s_best = np.where(better, s_ref, s_grid[k])
    return s_best, np.where(better, u_ref, sampled)


def check_h_convex(spec: LevelSpec, f: MapExpr, n_pairs: int = 500, n_segment: int = 64,
                   tol: float = TOL_CONVEX, seed: int = 0) -> ConvexityReport:
    """Search for a geodesic segment leaving the region.

    An interior point counts against convexity when ``u(p) <= tol``, i.e. it is
    outside the region or on its boundary; the endpoints must have
    ``u > 10 tol``.  A candidate witness is re-checked with 10x finer sampling.
    """
    if n_segment < 3:
        raise ValueError("n_segment must be at least 3")
    u = potential_of(spec, f)
    rng = np.random.default_rng(seed)
    margin = WITNESS_MARGIN * tol
    z1, z2 = _sample_pairs(u, rng, n_pairs, margin)
    s, umin = _segment_minima(u, z1, z2, n_segment)
    witness = None
    for idx in np.argsort(umin, kind="stable"):
        if not umin[idx] <= tol:
            break
        a, b = z1[idx:idx + 1], z2[idx:idx + 1]
        s2, u2 = _segment_minima(u, a, b, 10 * n_segment)
        if u2[0] <= tol and min(u(a)[0], u(b)[0]) > 2 * tol:
            p = complex(segment_point(a, b, s2)[0])
            witness = Witness(complex(a[0]), complex(b[0]), p, float(u(a)[0]),
                              float(u(b)[0]), float(u2[0]), float(s2[0]))
            break
    verdict = "violated" if witness else "no_violation_found"
    return ConvexityReport(verdict, int(z1.size), float(umin.min()), int(seed), witness,
                           n_segment, tol)


# ------------------------------------------------------------ boundary points


def boundary_points(spec: LevelSpec, f: MapExpr, n: int, tol: float = TOL_BOUNDARY
                    ) -> List[DiskPoint]:
    """Boundary points on ``n`` equally spaced rays from the origin.

    Rays that reach the unit circle without leaving the region are skipped.
    """
    u = potential_of(spec, f)
    omegas = np.exp(2j * np.pi * np.arange(n) / n)
    try:
        R = radius_functions(u, omegas, tol=1e-15, level=0.0)
    except OriginNotInRegion as exc:
        raise EmptyRegion(str(exc)) from exc
    hit = R < 1 - CIRCLE_BAND
    if not hit.any():
        raise WholeDisk("every ray reaches the unit circle")
    w = omegas[hit]
    lo = R[hit]
    hi = np.minimum(lo + 1e-14, 1 - EPS_BOUNDARY)
    # lo is inside (u > 0); nudge hi until it is outside
    for _ in range(50):
        out = ~(u(hi * w) > 0)
        if out.all():
            break
        hi = np.where(out, hi, hi + 2 * (hi - lo))
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        inside = u(mid * w) > 0
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    ulo, uhi = np.abs(u(lo * w)), np.abs(u(hi * w))
    zeta = np.where(ulo <= uhi, lo * w, hi * w)
    res = np.minimum(ulo, uhi)
    return [DiskPoint(z) for z, r in zip(zeta, res) if r <= tol]


# -------------------------------------------------------------- support test


def support_test(spec: LevelSpec, f: MapExpr, zeta, eps: float = 0.1,
                 n: int = 400, noise: float = TOL_SUPPORT) -> bool:
    """True iff the geodesic through ``zeta`` orthogonal to the gradient leaves
    the closure of the region on both sides of ``zeta``.

    Samples with ``|u| <= noise`` are at the rounding floor and count as
    undecided; they must form a band next to the excluded core, with every
    farther sample strictly negative.  A boundary arc that is itself the
    geodesic is all undecided and fails.
    """
    z = complex(_c(zeta))
    g = complex(grad_u(spec, f, z))
    if abs(g) == 0:
        raise ZeroGradient(f"grad u vanishes at {z}")
    gamma = orthogonal_geodesic(z, g / abs(g))
    d = np.geomspace(SUPPORT_CORE, eps, n // 2)
    for side in (-d, d):
        pts = gamma.points_at(z, side)
        pts = pts[np.abs(pts) < 1 - EPS_BOUNDARY]
        if pts.size == 0:
            continue
        u = potential_u(spec, f, pts)
        if np.any(u > noise):
            return False
        decided = u < -noise
        if not decided[-1] or not np.all(decided[np.argmax(decided):]):
            return False
    return True


def region_label(spec: LevelSpec, f: MapExpr) -> str:
    return f"{spec.label}({unparse(f)})"
