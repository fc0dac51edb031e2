"""Self-map validation: does the expression send the disk into itself?

Built-in Blaschke constructions are valid by construction.  Free-form rational
expressions are reduced to ``P/Q``, denominator zeros in the closed disk are
rejected, and |f| is sampled on the circle and inside the disk; by the maximum
principle the boundary sample is what matters, so the verdict is
"sampled-valid" rather than a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from numpy.polynomial import polynomial as P

from hypolevel.dsl.ast import Aut, BinOp, Blaschke, Compose, Const, Identity, MapExpr, Neg, Pow, Var
from hypolevel.dsl.blaschke import as_blaschke
from hypolevel.hyp_core import EPS_BOUNDARY, BoundaryPoint, DiskPoint

TOL_VALIDATE = 1e-9
_ROOT_MATCH = 1e-6


@dataclass(frozen=True)
class SelfMapValidation:
    verdict: str  # "valid" | "invalid"
    max_boundary_modulus: float
    witness: Optional[Union[BoundaryPoint, DiskPoint]] = None
    mode: str = "sampled"  # "exact" for Blaschke constructions
    reason: str = ""

    @property
    def valid(self) -> bool:
        return self.verdict == "valid"

    def to_dict(self) -> dict:
        w = self.witness
        if isinstance(w, BoundaryPoint):
            wd = {"kind": "boundary", "angle": w.angle}
        elif isinstance(w, DiskPoint):
            wd = {"kind": "interior", "z": [w.value.real, w.value.imag]}
        else:
            wd = None
        return {"verdict": self.verdict, "mode": self.mode,
                "max_boundary_modulus": self.max_boundary_modulus,
                "witness": wd, "reason": self.reason}


def _trim(p):
    p = np.atleast_1d(np.asarray(p, dtype=complex))
    scale = max(np.abs(p).max(), 1e-300)
    nz = np.flatnonzero(np.abs(p) > 1e-14 * scale)
    return p[: nz[-1] + 1] if nz.size else np.array([0j])


def to_rational(expr: MapExpr):
    """Numerator and denominator coefficients (ascending powers of z)."""
    if isinstance(expr, (Var, Identity)):
        return np.array([0j, 1]), np.array([1 + 0j])
    if isinstance(expr, Const):
        return np.array([expr.value]), np.array([1 + 0j])
    if isinstance(expr, Neg):
        n, d = to_rational(expr.arg)
        return -n, d
    if isinstance(expr, BinOp):
        n1, d1 = to_rational(expr.left)
        n2, d2 = to_rational(expr.right)
        if expr.op == "+":
            n, d = P.polyadd(P.polymul(n1, d2), P.polymul(n2, d1)), P.polymul(d1, d2)
        elif expr.op == "-":
            n, d = P.polysub(P.polymul(n1, d2), P.polymul(n2, d1)), P.polymul(d1, d2)
        elif expr.op == "*":
            n, d = P.polymul(n1, n2), P.polymul(d1, d2)
        else:
            n, d = P.polymul(n1, d2), P.polymul(d1, n2)
        return _trim(n), _trim(d)
    if isinstance(expr, Pow):
        n, d = to_rational(expr.base)
        k = expr.exponent
        if k < 0:
            n, d, k = d, n, -k
        return _trim(P.polypow(n, k)), _trim(P.polypow(d, k))
    if isinstance(expr, (Blaschke, Aut)):
        data = as_blaschke(expr)
        n, d = np.array([np.exp(1j * data.theta)]), np.array([1 + 0j])
        for a in data.zeros:
            n = P.polymul(n, [-a, 1])
            d = P.polymul(d, [1, -np.conj(a)])
        return n, d
    if isinstance(expr, Compose):
        pn, pd = to_rational(expr.outer)
        gn, gd = to_rational(expr.inner)
        m = max(len(pn), len(pd)) - 1

        def subst(coeffs):
            out = np.array([0j])
            for k, c in enumerate(coeffs):
                term = P.polymul(P.polypow(gn, k), P.polypow(gd, m - k))
                out = P.polyadd(out, c * term)
            return out

        return _trim(subst(pn)), _trim(subst(pd))
    raise TypeError(f"unsupported node {type(expr).__name__}")


def closed_disk_poles(expr: MapExpr, radius: float = 1.0 + TOL_VALIDATE) -> list:
    """Non-removable poles of the rational function with ``|z| <= radius``."""
    n, d = to_rational(expr)
    if len(d) == 1:
        return []
    dr = P.polyroots(d)
    nr = P.polyroots(n) if len(n) > 1 else np.array([])
    poles = []
    for r in dr:
        if abs(r) > radius:
            continue
        mult_d = int(np.sum(np.abs(dr - r) < _ROOT_MATCH))
        mult_n = int(np.sum(np.abs(nr - r) < _ROOT_MATCH)) if nr.size else 0
        if mult_d > mult_n:
            poles.append(complex(r))
    return poles


def _interior_points(n: int) -> np.ndarray:
    # Fibonacci spiral, equal-area, deterministic
    k = np.arange(n) + 0.5
    r = np.sqrt(k / n) * (1 - 1e-6)
    return r * np.exp(1j * np.pi * (3 - np.sqrt(5)) * k)


def validate_self_map(f: MapExpr, n_boundary: int = 1024, n_interior: int = 4096,
                      tol: float = TOL_VALIDATE) -> SelfMapValidation:
    """Never raises; returns an invalid verdict with a witness on failure."""
    if n_boundary < 64:
        raise ValueError("n_boundary must be at least 64")
    if as_blaschke(f) is not None:
        return SelfMapValidation("valid", 1.0, None, "exact")
    try:
        poles = closed_disk_poles(f)
    except TypeError as exc:
        return SelfMapValidation("invalid", float("nan"), None, "sampled", str(exc))
    if poles:
        p = poles[0]
        if abs(p) < 1 - EPS_BOUNDARY:
            w = DiskPoint(p)
        else:
            w = BoundaryPoint(float(np.angle(p)))
        return SelfMapValidation("invalid", float("inf"), w, "sampled",
                                 f"pole at {p:.6g} in the closed disk")
    t = 2 * np.pi * np.arange(n_boundary) / n_boundary
    with np.errstate(all="ignore"):
        bvals = np.abs(f.ev(np.exp(1j * t)))
    k = int(np.nanargmax(bvals))
    mb = float(bvals[k])
    if not mb <= 1 + tol:
        return SelfMapValidation("invalid", mb, BoundaryPoint(float(t[k])), "sampled",
                                 "|f| exceeds 1 on the unit circle")
    zi = _interior_points(n_interior)
    with np.errstate(all="ignore"):
        ivals = np.abs(f.ev(zi))
    bad = np.flatnonzero(~(ivals < 1))
    if bad.size:
        j = int(bad[np.argmax(ivals[bad])])
        return SelfMapValidation("invalid", mb, DiskPoint(zi[j]), "sampled",
                                 "|f| >= 1 inside the disk")
    return SelfMapValidation("valid", mb, None, "sampled")
