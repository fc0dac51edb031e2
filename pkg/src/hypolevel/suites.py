"""Named verification suites behind ``hypolevel verify``.

Each suite returns a JSON-ready dict ``{"suite", "seed", "passed", "checks"}``
with no timing data, so reruns with the same seed are byte-identical.
"""

from __future__ import annotations

import math
from typing import Callable, Dict

import numpy as np

from hypolevel.campaign import blaschke_pool, falsification_campaign, trial_seed
from hypolevel.convexity import boundary_points, check_h_convex
from hypolevel.dsl import Aut, parse, sup_derivative
from hypolevel.geodesic import (
    Arc,
    geodesic_through,
    orthogonality_residual,
    segment_point,
)
from hypolevel.hyp_core import MoebiusAutomorphism, hyp_distance
from hypolevel.level_set import (
    DMu,
    OmegaLambda,
    OriginNotInRegion,
    PhiKind,
    PhiMu,
    dmu_nonempty,
    extract_region,
    grad_u,
    is_starlike,
    omega_whole_disk,
    phi_disagreements,
    potential_u,
)
from hypolevel.proofs import proof_quantities_dmu, proof_quantities_omega

LAMBDAS = (1.0, 1.1, 1.5, 2.0, 5.0)
MUS = (-0.1, -0.5, -1.0, -2.0)
POOL_SIZE = 200


def _check(name: str, passed: bool, **values) -> dict:
    return {"name": name, "passed": bool(passed), **{k: _plain(v) for k, v in values.items()}}


def _plain(v):
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer, int)) and not isinstance(v, bool):
        return int(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def _result(name: str, seed: int, checks: list) -> dict:
    return {"suite": name, "seed": seed, "passed": all(c["passed"] for c in checks),
            "checks": checks}


def _slit_map():
    b = math.tanh(0.25)
    return b, parse(f"(z-{b!r})/(1-{b!r}*z)")


# ------------------------------------------------------------------ suites


def suite_theorem31(seed: int = 0, n_maps: int = POOL_SIZE) -> dict:
    pool = blaschke_pool(n_maps, seed)
    s = falsification_campaign(pool, [OmegaLambda(x) for x in LAMBDAS], seed=seed)
    t = s.totals()
    return _result("theorem31", seed, [
        _check("zero_violations", t["violations"] == 0, **t),
        _check("support_separation", t["support_failures"] == 0,
               support_checked=t["support_checked"]),
    ])


def suite_theorem41(seed: int = 0, n_maps: int = POOL_SIZE) -> dict:
    pool = blaschke_pool(n_maps, seed)
    s = falsification_campaign(pool, [DMu(m) for m in MUS], seed=seed)
    t = s.totals()
    return _result("theorem41", seed, [
        _check("zero_violations", t["violations"] == 0, **t),
        _check("support_separation", t["support_failures"] == 0,
               support_checked=t["support_checked"]),
    ])


def suite_counterexamples(seed: int = 0) -> dict:
    checks = []
    rep = check_h_convex(OmegaLambda(0.8), parse("aut(-0.5,0)"), 500, 64, 1e-9, seed)
    checks.append(_check("omega_0.8_automorphism", rep.violated,
                         witness=rep.witness.to_dict() if rep.witness else None))
    b, f = _slit_map()
    rep = check_h_convex(DMu(0.5), f, 500, 64, 1e-9, seed)
    ok = rep.violated and b < rep.witness.p.real < 1 and abs(rep.witness.p.imag) < 1e-6
    checks.append(_check("dmu_plus_slit", ok, b=b,
                         witness=rep.witness.to_dict() if rep.witness else None))
    # automorphisms with |f(0)| in [0.5, 0.9]: Omega_0.8 is nonempty and not h-convex
    rng = np.random.default_rng(trial_seed(seed, 0))
    found = 0
    n = 20
    for i in range(n):
        a = complex(rng.uniform(0.5, 0.9) * np.exp(2j * np.pi * rng.random()))
        f = Aut(a, float(rng.uniform(-math.pi, math.pi)))
        found += check_h_convex(OmegaLambda(0.8), f, 500, 64, 1e-9, trial_seed(seed, i + 1)).violated
    checks.append(_check("omega_0.8_family_detection", found == n, detected=found, trials=n))
    return _result("counterexamples", seed, checks)


def suite_closed_form(seed: int = 0) -> dict:
    checks = []
    worst = 0.0
    for a in (-0.5, 0.3 + 0.4j, 0.6j, -0.2 + 0.7j):
        f = Aut(complex(a), 0.0)
        z0 = -1 / complex(f(0j)).conjugate()
        for lam in (0.8, 1.0, 1.5, 2.0):
            r = extract_region(OmegaLambda(lam), f, 512)
            for c in r.contours:
                err = np.abs(np.abs(c - z0) ** 2 - (abs(z0) ** 2 - 1) / lam)
                worst = max(worst, float(err.max()))
    checks.append(_check("automorphism_circle", worst < 1e-6, max_error=worst))
    r = extract_region(OmegaLambda(1.5), parse("z^2"), 512)
    rad = max(float(np.max(np.abs(np.abs(c) - 2 ** -0.5))) for c in r.contours)
    checks.append(_check("z2_radius", len(r.contours) == 1 and rad < 1e-6, max_error=rad))
    f = parse("aut(-0.5,0)")
    pts = boundary_points(OmegaLambda(1.0), f, 64)
    err = max(abs(abs(z.value + 2) - math.sqrt(3)) for z in pts)
    checks.append(_check("omega1_geodesic_boundary", err < 1e-9, points=len(pts), max_error=err))
    checks.append(_check("dmu_nonempty_criterion",
                         dmu_nonempty(f, -0.5) and not dmu_nonempty(parse("z"), -0.5)))
    return _result("closed-form", seed, checks)


def suite_wholedisk(seed: int = 0) -> dict:
    checks = []
    for text, lam, expected in (("z^2", 2.0, True), ("z^2", 1.9, False), ("aut(-0.5,0)", 3.0, True)):
        f = parse(text)
        verdict = omega_whole_disk(f, lam)
        r = extract_region(OmegaLambda(lam), f, 512)
        grid_ok = r.out_count() == 0 if expected else r.out_count() >= 1
        checks.append(_check(f"{text}@{lam:g}", verdict == expected and grid_ok,
                             verdict=verdict, out_cells=r.out_count(),
                             sup_derivative=sup_derivative(f)))
    return _result("wholedisk", seed, checks)


def suite_second_variation(seed: int = 0) -> dict:
    checks = []
    q = proof_quantities_omega(parse("z^2"), 1.5, 2 ** -0.5)
    checks.append(_check("worked_case", abs(q.Phi + 0.2777778) < 1e-6
                         and abs(q.v2_analytic + 0.75) < 1e-6, Phi=q.Phi, v2=q.v2_analytic))
    pool = blaschke_pool(12, seed)
    configs = [(f, OmegaLambda(lam)) for f, lam in zip(pool[:6], (1.1, 1.5, 2.0, 1.2, 3.0, 1.5))]
    configs += [(f, DMu(mu)) for f, mu in zip(pool[6:], (-0.1, -0.2, -0.05, -0.1, -0.3, -0.15))]
    configs.append((parse("(0.5-z)/(1-0.5*z)"), DMu(-0.5)))
    n_pts = worst = 0
    all_neg = True
    used = 0
    for f, spec in configs:
        try:
            pts = boundary_points(spec, f, 8)
        except (ValueError, OriginNotInRegion):
            continue
        if not pts:
            continue
        used += 1
        for z in pts:
            if isinstance(spec, OmegaLambda):
                q = proof_quantities_omega(f, spec.lam, z)
                all_neg &= q.Phi < 0
            else:
                q = proof_quantities_dmu(f, spec.mu, z)
                all_neg &= q.beta < 0 and q.b > q.zeta
            all_neg &= q.v2_analytic < 0
            worst = max(worst, abs(q.v2_analytic - q.v2_numeric) / abs(q.v2_analytic))
            n_pts += 1
    checks.append(_check("analytic_vs_numeric", worst < 1e-4 and n_pts >= 50 and used >= 10,
                         max_rel_error=worst, points=n_pts, configurations=used))
    checks.append(_check("signs", all_neg))
    return _result("second-variation", seed, checks)


def _grad_fd(spec, f, z, h=1e-6):
    ux = (potential_u(spec, f, z + h) - potential_u(spec, f, z - h)) / (2 * h)
    uy = (potential_u(spec, f, z + 1j * h) - potential_u(spec, f, z - 1j * h)) / (2 * h)
    return ux + 1j * uy


def suite_gradient(seed: int = 0, n: int = 1000) -> dict:
    rng = np.random.default_rng(trial_seed(seed, 0))
    pool = blaschke_pool(20, seed)
    checks = []
    for spec in (OmegaLambda(1.5), DMu(-0.5), PhiMu(PhiKind.LOG_COSH_HALF, 0.5)):
        worst = 0.0
        for k in range(n):
            f = pool[k % len(pool)]
            z = complex(0.95 * math.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random()))
            if abs(z) < 1e-3 or abs(complex(f(z))) < 1e-3:
                continue  # the distance potential is not smooth at 0 or where f = 0
            g = complex(grad_u(spec, f, z))
            fd = complex(_grad_fd(spec, f, z))
            worst = max(worst, abs(g - fd) / max(abs(g), 1e-3))
        checks.append(_check(spec.to_dict()["family"], worst < 1e-6, max_rel_error=worst))
    return _result("gradient", seed, checks)


def suite_phi_unification(seed: int = 0) -> dict:
    pool = blaschke_pool(20, seed)
    checks = []
    for mu in (0.25, 0.5, 1.0):
        bad = sum(phi_disagreements(f, mu, 500, trial_seed(seed, i)) for i, f in enumerate(pool))
        checks.append(_check(f"mu={mu:g}", bad == 0, disagreements=bad, samples=500 * len(pool)))
    return _result("phi-unification", seed, checks)


def _random_disk(rng, n, rmax=0.99):
    return rmax * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))


def suite_geometry(seed: int = 0, n: int = 10_000) -> dict:
    rng = np.random.default_rng(trial_seed(seed, 0))
    z, w = _random_disk(rng, n), _random_disk(rng, n)
    a = _random_disk(rng, n, 0.9)
    th = rng.uniform(-math.pi, math.pi, n)
    worst_inv = 0.0
    for i in range(n):
        T = MoebiusAutomorphism(complex(a[i]), float(th[i]))
        worst_inv = max(worst_inv, abs(hyp_distance(T(z[i]), T(w[i])) - hyp_distance(z[i], w[i])))
    worst_orth, arcs, failing = 0.0, 0, 0
    for i in range(n):
        g = geodesic_through(z[i], w[i])
        if isinstance(g, Arc):
            arcs += 1
            res = abs(orthogonality_residual(g))
            failing += res >= 1e-10
            worst_orth = max(worst_orth, res)
    s = rng.random(n)
    p = segment_point(z, w, s)
    add = np.abs(hyp_distance(z, p) + hyp_distance(p, w) - hyp_distance(z, w))
    return _result("geometry", seed, [
        _check("isometry", worst_inv < 1e-12, max_error=worst_inv),
        _check("arc_orthogonality", failing == 0, max_residual=worst_orth, arcs=arcs,
               failing=failing),
        _check("betweenness", float(add.max()) < 1e-9, max_error=float(add.max())),
    ])


def suite_starlike(seed: int = 0, n_maps: int = POOL_SIZE) -> dict:
    pool = blaschke_pool(n_maps, seed)
    specs = [OmegaLambda(x) for x in LAMBDAS] + [DMu(m) for m in MUS]
    tested, failures = 0, []
    for i, f in enumerate(pool):
        for spec in specs:
            if isinstance(spec, DMu) and not dmu_nonempty(f, spec.mu):
                continue
            try:
                rep = is_starlike(spec, f, 720)
            except OriginNotInRegion:
                continue  # Omega_1 with f(0) = 0 is empty
            tested += 1
            if not rep.starlike:
                failures.append({"map": i, "spec": spec.to_dict(), **rep.to_dict()})
    return _result("starlike", seed, [_check("all_starlike", not failures, tested=tested,
                                             failures=failures[:10])])


SUITES: Dict[str, Callable[..., dict]] = {
    "theorem31": suite_theorem31,
    "theorem41": suite_theorem41,
    "counterexamples": suite_counterexamples,
    "closed-form": suite_closed_form,
    "wholedisk": suite_wholedisk,
    "second-variation": suite_second_variation,
    "gradient": suite_gradient,
    "phi-unification": suite_phi_unification,
    "geometry": suite_geometry,
    "starlike": suite_starlike,
}


def run_suite(name: str, seed: int = 0) -> dict:
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    return fn(seed=seed)
