import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypolevel.dsl import parse
from hypolevel.level_set import (
    BOUNDARY,
    IN,
    OUT,
    DMu,
    NonSmoothPoint,
    OmegaLambda,
    OriginNotInRegion,
    PhiKind,
    PhiMu,
    RegionSample,
    UnsupportedParameter,
    component_of_origin,
    dmu_nonempty,
    extract_region,
    grad_u,
    is_starlike,
    membership,
    omega_whole_disk,
    phi_equivalence_check,
    potential_u,
    radius_function,
    spec_from_dict,
    starlike_from_potential,
)

AUT = parse("(z+0.5)/(1+0.5*z)")


def test_potential_examples():
    assert potential_u(OmegaLambda(1.5), parse("z^2"), 0.5) == pytest.approx(0.1875)
    assert potential_u(DMu(-0.5), AUT, 0) == pytest.approx(0.5 - math.tanh(0.25))
    z = np.array([0.1, -0.4j, 0.7 + 0.2j])
    assert np.allclose(potential_u(OmegaLambda(1), parse("id"), z), 0, atol=1e-15)


def test_gradient_examples():
    assert grad_u(OmegaLambda(2), parse("z^2"), 0.5) == pytest.approx(-1.5)
    assert grad_u(OmegaLambda(1.7), parse("blaschke(0.3; 0, 0.5)"), 0) == 0


def _fd(spec, f, z, h=1e-6):
    return ((potential_u(spec, f, z + h) - potential_u(spec, f, z - h))
            + 1j * (potential_u(spec, f, z + 1j * h) - potential_u(spec, f, z - 1j * h))) / (2 * h)


def test_gradient_dmu_fd():
    z = -0.1485
    assert abs(grad_u(DMu(-0.5), AUT, z) - _fd(DMu(-0.5), AUT, z)) < 1e-6


@given(st.floats(0.05, 0.9), st.floats(0, 2 * math.pi),
       st.sampled_from([OmegaLambda(1.3), DMu(-0.7), DMu(-0.3, 0.2j, -0.1),
                        PhiMu(PhiKind.LOG_COSH_HALF, 0.4)]))
def test_gradient_matches_fd(r, t, spec):
    f = parse("blaschke(0.5; 0.3+0.1i, -0.4)")
    z = r * complex(math.cos(t), math.sin(t))
    g, fd = complex(grad_u(spec, f, z)), complex(_fd(spec, f, z))
    assert abs(g - fd) < 1e-6 * max(1, abs(g))


def test_gradient_nonsmooth_point():
    with pytest.raises(NonSmoothPoint):
        grad_u(DMu(-0.5), AUT, 0)


def test_membership_examples():
    assert membership(OmegaLambda(1), AUT, 0.5) == IN
    assert membership(OmegaLambda(1), AUT, -0.5) == OUT
    assert membership(OmegaLambda(1), parse("z^2"), 0) == BOUNDARY
    assert extract_region(OmegaLambda(1), parse("z^2"), 128).in_count() == 0


def test_extract_disk():
    r = extract_region(OmegaLambda(1.5), parse("z^2"), 256)
    assert len(r.contours) == 1
    assert np.max(np.abs(np.abs(r.contours[0]) - 2 ** -0.5)) < 1e-6
    assert np.max(np.abs(potential_u(r.spec, parse("z^2"), r.contours[0]))) <= 1e-9


def test_extract_geodesic_boundary():
    r = extract_region(OmegaLambda(1), parse("aut(-0.5,0)"), 256)
    v = np.concatenate(r.contours)
    assert np.max(np.abs(np.abs(v + 2) - math.sqrt(3))) < 1e-6


def test_extract_whole_disk():
    r = extract_region(OmegaLambda(2), parse("z^2"), 128)
    assert r.contours == [] and r.out_count() == 0


def test_component_of_origin():
    r = extract_region(OmegaLambda(1), parse("aut(-0.5,0)"), 128)
    assert np.array_equal(component_of_origin(r).bitmap, r.bitmap)
    whole = extract_region(OmegaLambda(2), parse("z^2"), 64)
    assert np.array_equal(component_of_origin(whole).bitmap, whole.bitmap)
    bm = np.zeros((64, 64), bool)
    bm[28:36, 28:36] = True
    bm[2:6, 2:6] = True
    synth = RegionSample(OmegaLambda(1.5), "z", 64, bm, [], True)
    kept = component_of_origin(synth).bitmap
    assert kept.sum() == 64 and not kept[2:6, 2:6].any()


def test_radius_function_examples():
    for t in (0, 1, 2.5):
        w = complex(math.cos(t), math.sin(t))
        assert radius_function(OmegaLambda(1.5), parse("z^2"), w) == pytest.approx(2 ** -0.5,
                                                                                   abs=1e-11)
    assert radius_function(OmegaLambda(2), parse("z^2"), 1) == pytest.approx(1 - 1e-9)
    b = math.tanh(0.25)
    slit = parse(f"(z-{b!r})/(1-{b!r}*z)")
    assert radius_function(DMu(0.5), slit, 1) == pytest.approx(b, abs=1e-9)


def test_starlike_examples():
    f = parse("blaschke(0.3; 0.4+0.2i, -0.6)")
    assert is_starlike(OmegaLambda(1.2), f).starlike
    assert is_starlike(DMu(-0.2), parse("aut(-0.7,0)")).starlike

    def annulus_sector(z):
        r, a = np.abs(z), np.angle(z)
        inner = 0.3 - r
        sector = np.minimum(np.minimum(r - 0.5, 0.8 - r), 0.5 - np.abs(a))
        return np.maximum(inner, sector)

    rep = starlike_from_potential(annulus_sector, 360)
    assert not rep.starlike and abs(rep.witness_angle) <= 0.5 and 0.5 < rep.witness_radius < 0.8


def test_origin_not_in_region():
    with pytest.raises(OriginNotInRegion):
        radius_function(DMu(-0.5), parse("z"), 1)


def test_dmu_nonempty_examples():
    assert dmu_nonempty(AUT, -0.5)
    assert not dmu_nonempty(parse("id"), -0.5)
    assert not dmu_nonempty(parse("aut(-0.9,0)"), -4)
    with pytest.raises(UnsupportedParameter):
        dmu_nonempty(AUT, 0.5)


def test_whole_disk_examples():
    assert omega_whole_disk(parse("z^2"), 2)
    assert not omega_whole_disk(parse("z^2"), 1.9)
    assert omega_whole_disk(parse("aut(-0.5,0)"), 3)
    assert not omega_whole_disk(parse("z/2"), 5)


def test_phi_equivalence_examples():
    assert phi_equivalence_check(parse("z^2"), 0.3466, 10_000)
    assert phi_equivalence_check(parse("blaschke(1; 0.2, 0.5i)"), 0.5, 10_000)
    assert phi_equivalence_check(parse("blaschke(1; 0.2, 0.5i)"), 0.0, 2_000)


def test_base_points_reduce_to_origin():
    f = parse("blaschke(0.2; 0.3, -0.1i)")
    z0, w0 = 0.2 - 0.1j, 0.3j
    spec = DMu(-0.4, z0, w0)
    T1 = lambda w: (w + z0) / (1 + np.conj(z0) * w)  # noqa: E731
    g = lambda w: (f(T1(w)) - w0) / (1 - np.conj(w0) * f(T1(w)))  # noqa: E731
    w = np.array([0.1, -0.5j, 0.3 + 0.3j])
    a = spec.a
    direct = (1 + a * np.abs(w)) * np.abs(g(w)) - np.abs(w) - a
    assert np.allclose(potential_u(spec, f, T1(w)), direct, atol=1e-13)


def test_spec_roundtrip():
    for s in (OmegaLambda(1.5), DMu(-0.5), DMu(-0.3, 0.1j, 0.2), PhiMu("log_cosh_half", 0.5)):
        assert spec_from_dict(s.to_dict()) == s
