import math

import numpy as np
import pytest

from hypolevel.convexity import (
    EmptyRegion,
    WholeDisk,
    ZeroGradient,
    boundary_points,
    check_h_convex,
    support_test,
)
from hypolevel.dsl import parse
from hypolevel.geodesic import orthogonal_geodesic
from hypolevel.level_set import DMu, OmegaLambda, grad_u, potential_u
from hypolevel.proofs import (
    EmptySet,
    HypothesisExcluded,
    NotOnBoundary,
    proof_quantities_dmu,
    proof_quantities_omega,
)

B = math.tanh(0.25)
SLIT = parse(f"(z-{B!r})/(1-{B!r}*z)")
ROT_AUT = parse("(0.5-z)/(1-0.5*z)")
MIXED = parse("blaschke(0.3; 0.5, -0.2+0.4i, 0.7i)")


def test_disk_region_has_no_violation():
    rep = check_h_convex(OmegaLambda(1.5), parse("z^2"), 500, 64, seed=3)
    assert rep.verdict == "no_violation_found" and rep.pairs_tested == 500
    assert rep.margin > 0


def test_lambda_below_one_violates():
    rep = check_h_convex(OmegaLambda(0.8), parse("aut(-0.5,0)"), 500, 64, seed=0)
    w = rep.witness
    assert rep.violated and w.u1 > 1e-8 and w.u2 > 1e-8 and w.up < -1e-9
    assert potential_u(OmegaLambda(0.8), parse("aut(-0.5,0)"), w.p) == pytest.approx(w.up)


def test_slit_violates_on_the_slit():
    rep = check_h_convex(DMu(0.5), SLIT, 500, 64, seed=1)
    assert rep.violated
    assert B < rep.witness.p.real < 1 and abs(rep.witness.p.imag) < 1e-6


def test_report_is_seed_deterministic():
    a = check_h_convex(OmegaLambda(1.1), MIXED, 200, 32, seed=5).to_dict()
    b = check_h_convex(OmegaLambda(1.1), MIXED, 200, 32, seed=5).to_dict()
    assert a == b


def test_empty_region():
    with pytest.raises(EmptyRegion):
        check_h_convex(DMu(-0.5), parse("z"), 50, 16)


def test_boundary_points_examples():
    pts = boundary_points(OmegaLambda(1.5), parse("z^2"), 8)
    assert len(pts) == 8
    assert max(abs(abs(p.value) - 2 ** -0.5) for p in pts) < 1e-9
    pts = boundary_points(OmegaLambda(1), parse("aut(-0.5,0)"), 32)
    assert pts and max(abs(abs(p.value + 2) - math.sqrt(3)) for p in pts) < 1e-9
    for p in boundary_points(DMu(-0.1), MIXED, 16):
        assert abs(potential_u(DMu(-0.1), MIXED, p.value)) <= 1e-10
    with pytest.raises(WholeDisk):
        boundary_points(OmegaLambda(2), parse("z^2"), 8)
    with pytest.raises(EmptyRegion):
        boundary_points(OmegaLambda(1), parse("z^3"), 8)


def test_support_examples():
    assert support_test(OmegaLambda(1.5), parse("z^2"), 2 ** -0.5, 0.1)
    f = parse("aut(-0.5,0)")
    for z in boundary_points(OmegaLambda(1), f, 16):
        assert not support_test(OmegaLambda(1), f, z, 0.1)
    zeta = boundary_points(DMu(-0.5), ROT_AUT, 1)[0]
    assert abs(zeta.value - 0.14854577854) < 1e-9
    assert support_test(DMu(-0.5), ROT_AUT, zeta, 0.1)


def test_zero_gradient():
    with pytest.raises(ZeroGradient):
        support_test(OmegaLambda(1.5), parse("z^2"), 0, 0.1)


# ------------------------------------------------------------ proof quantities


def test_worked_case():
    q = proof_quantities_omega(parse("z^2"), 1.5, 2 ** -0.5)
    assert q.b == pytest.approx(0.5)
    assert q.c0 == pytest.approx(-0.9428090, abs=1e-7)
    assert q.c1 == pytest.approx(-0.1111111, abs=1e-7)
    assert abs(abs(q.kappa.imag) - 1) < 1e-12 and abs(q.kappa.real) < 1e-12
    assert q.Phi == pytest.approx(-0.2777778, abs=1e-6)
    assert q.v2_analytic == pytest.approx(-0.75, abs=1e-6)
    assert q.v2_numeric == pytest.approx(-0.75, rel=1e-4)
    # tight case of the coefficient bound
    assert abs(q.c1) == pytest.approx(1 - abs(q.c0) ** 2)


def _omega_cases():
    cases = [(parse("aut(0.3+0.2i,1)"), 1.2), (parse("aut(0.3+0.2i,1)"), 1.5)]
    cases += [(MIXED, lam) for lam in (1, 1.1, 2)]
    return cases


@pytest.mark.parametrize("f,lam", _omega_cases())
def test_omega_invariants(f, lam):
    spec = OmegaLambda(lam)
    for z in boundary_points(spec, f, 6):
        q = proof_quantities_omega(f, lam, z)
        assert abs(q.c0) <= 1 + 1e-9
        assert abs(q.c1) <= 1 - abs(q.c0) ** 2 + 1e-9
        assert abs((q.A * q.kappa).real) < 1e-9 and (q.A * q.kappa).imag > 0
        assert abs(q.kappa ** 2 + q.A.conjugate() / q.A) < 1e-10
        assert abs(q.A - q.A_alt) < 1e-10
        assert q.Phi < 0 and q.v2_analytic < 0
        assert abs(q.v2_analytic - q.v2_numeric) < 1e-4 * abs(q.v2_analytic)
        # the extracted coefficients rebuild the jet of g
        b1 = -(1 - q.b ** 2) * q.c0
        b2 = -(1 - q.b ** 2) * (q.c1 + q.b * q.c0 ** 2)
        assert abs(b1 - q.b1) < 1e-10 and abs(b2 - q.b2) < 1e-10
        # the numeric direction is the supporting geodesic at zeta
        g = grad_u(spec, f, z.value)
        gamma = orthogonal_geodesic(z.value, g / abs(g))
        zr, rot = q.zeta, z.value / q.zeta
        p = rot * (zr + 1e-3 * q.kappa) / (1 + zr * 1e-3 * q.kappa)
        assert gamma.residual(p) < 1e-10 * max(1, getattr(gamma, "radius", 1))


def test_automorphism_coefficients():
    f = parse("aut(0.3+0.2i,1)")
    for z in boundary_points(OmegaLambda(1.5), f, 4):
        q = proof_quantities_omega(f, 1.5, z)
        assert abs(abs(q.c0) - 1) < 1e-12 and abs(q.c1) < 1e-12


def test_omega_preconditions():
    with pytest.raises(NotOnBoundary):
        proof_quantities_omega(parse("z^2"), 1.5, 0.5)
    with pytest.raises(HypothesisExcluded):
        proof_quantities_omega(parse("aut(-0.5,0)"), 1, -0.2679491924311228)
    with pytest.raises(ValueError):
        proof_quantities_omega(parse("z^2"), 0.9, 0.5)


def test_degenerate_normalization_flagged():
    # f(zeta) = 0 on the boundary when |zeta|^2 = (lam - 1)/lam
    f = parse("aut(0.5,0)")
    lam = 4 / 3
    q = proof_quantities_omega(f, lam, 0.5)
    assert q.degenerate and q.b == 0


def test_dmu_example():
    zeta = boundary_points(DMu(-0.5), ROT_AUT, 1)[0]
    q = proof_quantities_dmu(ROT_AUT, -0.5, zeta)
    a = -math.tanh(-0.25)
    assert q.b == pytest.approx(0.3797, abs=1e-4) and q.b > q.zeta
    assert q.b == pytest.approx((q.zeta + a) / (1 + a * q.zeta), abs=1e-9)
    # quoted as -1.9345 from the rounded zeta = 0.1485
    assert q.beta == pytest.approx(-1.9345, abs=2e-3) and q.beta < 0
    assert q.v2_analytic < 0


@pytest.mark.parametrize("f,mu", [(ROT_AUT, -0.5), (MIXED, -0.1), (parse("aut(0.6i,2)"), -1.0)])
def test_dmu_invariants(f, mu):
    for z in boundary_points(DMu(mu), f, 6):
        q = proof_quantities_dmu(f, mu, z)
        assert q.b > q.zeta and q.beta < 0 and abs(q.theta) < math.pi / 2
        assert q.p_at_0 == pytest.approx(q.beta * math.cos(q.theta) ** 2) and q.p_at_0 < 0
        assert q.p(0) == pytest.approx(q.p(2 * math.cos(q.theta)))
        assert abs(q.c0 + 1) > 0
        assert abs(q.A - q.A_grad) < 1e-10
        assert abs((q.A * q.kappa).real) < 1e-9 and (q.A * q.kappa).imag > 0
        assert q.v2_analytic < 0
        assert abs(q.v2_analytic - q.v2_numeric) < 1e-4 * abs(q.v2_analytic)


def test_dmu_preconditions():
    with pytest.raises(EmptySet):
        proof_quantities_dmu(parse("z"), -0.5, 0.5)
    with pytest.raises(ValueError):
        proof_quantities_dmu(ROT_AUT, 0.5, 0.5)
