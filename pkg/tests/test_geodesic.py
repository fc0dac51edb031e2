import math

import numpy as np
import pytest
from hypothesis import assume, example, given
from hypothesis import strategies as st

from hypolevel.geodesic import (
    Arc,
    CoincidentPoints,
    Diameter,
    geodesic_from_disk,
    geodesic_through,
    orthogonal_geodesic,
    orthogonality_residual,
    segment_point,
    segment_sample,
)
from hypolevel.hyp_core import hyp_distance

pts = st.builds(lambda r, t: r * complex(math.cos(t), math.sin(t)),
                st.floats(0, 0.95), st.floats(0, 2 * math.pi))


def test_through_examples():
    assert geodesic_through(0.5, -0.5) == Diameter(1)
    assert geodesic_through(0, 0.3j) == Diameter(1j)
    g = geodesic_through(0.5, 0.5j)
    assert isinstance(g, Arc)
    assert abs(g.center - (1.25 + 1.25j)) < 1e-12
    assert g.radius == pytest.approx(math.sqrt(2.125))


def test_coincident_points():
    with pytest.raises(CoincidentPoints):
        geodesic_through(0.2, 0.2)


def test_orthogonal_examples():
    assert orthogonal_geodesic(0, 1) == Diameter(1j)
    g = orthogonal_geodesic(0.5, 1)
    assert abs(g.center - 1.25) < 1e-12 and g.radius == pytest.approx(0.75)
    g = orthogonal_geodesic(0.5j, 1j)
    assert abs(g.center - 1.25j) < 1e-12 and g.radius == pytest.approx(0.75)


@given(pts, pts)
def test_geodesic_passes_through_both_points(z1, z2):
    assume(abs(z1 - z2) > 1e-3)
    g = geodesic_through(z1, z2)
    assert g.residual(z1) < 1e-9 * max(1, getattr(g, "radius", 1))
    assert g.residual(z2) < 1e-9 * max(1, getattr(g, "radius", 1))


@given(pts, st.floats(0, 2 * math.pi))
@example(5.4030230586813976e-11 + 8.414709848078965e-11j, 1.0)
def test_orthogonal_tangent(z, t):
    d = complex(math.cos(t), math.sin(t))
    g = orthogonal_geodesic(z, d)
    assert g.residual(z) < 1e-9 * max(1, getattr(g, "radius", 1))
    assert abs((g.tangent_at(z) * d.conjugate()).real) < 1e-8


def test_segment_examples():
    r = 0.6
    s = segment_sample(0, r, 3)
    assert s[1] == pytest.approx(math.tanh(math.atanh(r) / 2))
    s = segment_sample(0.5, -0.5, 5)
    assert np.allclose(s, -s[::-1])
    g = geodesic_through(0.5, 0.5j)
    s = segment_sample(0.5, 0.5j, 33)
    assert np.max(np.abs(np.abs(s - g.center) - g.radius)) < 1e-9


@given(pts, pts, st.floats(0, 1))
def test_segment_betweenness(z1, z2, s):
    assume(abs(z1 - z2) > 1e-6)
    p = segment_point(z1, z2, s)
    total = hyp_distance(z1, p) + hyp_distance(p, z2)
    assert abs(total - hyp_distance(z1, z2)) < 1e-9
    assert abs(hyp_distance(z1, p) - s * hyp_distance(z1, z2)) < 1e-8


def test_vectorized_segments_match_scalar():
    z1 = np.array([0.1, 0.5j])
    z2 = np.array([-0.3 + 0.2j, 0.4])
    s = segment_sample(z1, z2, 7)
    assert s.shape == (2, 7)
    assert np.allclose(s[1], segment_sample(0.5j, 0.4, 7))


def test_serialization_roundtrip():
    for g in (Diameter(1j), Arc(1.25 + 0.1j, 0.7)):
        assert geodesic_from_disk(g.to_dict()) == g


def test_orthogonality_residual_moderate_arcs():
    g = geodesic_through(0.5, 0.5j)
    assert abs(orthogonality_residual(g)) < 1e-12


def test_points_at_chords():
    g = orthogonal_geodesic(0.5, 1)
    p = g.points_at(0.5, [0.0, 0.01, -0.01])
    assert abs(p[0] - 0.5) < 1e-12
    assert np.allclose(np.abs(p[1:] - 0.5), 0.01)
