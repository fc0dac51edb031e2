import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypolevel.dsl import (
    ArityError,
    Aut,
    BinOp,
    Blaschke,
    Compose,
    Const,
    DomainError,
    EvalError,
    Jet2,
    MapSyntaxError,
    Pow,
    UnknownIdentifier,
    Var,
    as_blaschke,
    blaschke_boundary_derivative,
    eval_jet,
    load_map,
    parse,
    sup_derivative,
    unparse,
    validate_self_map,
)
from hypolevel.dsl.validate import closed_disk_poles
from hypolevel.hyp_core import BoundaryPoint, InvalidSelfMap

# ------------------------------------------------------------------- parser


def test_parse_power():
    assert parse("z^2") == Pow(Var(), 2)


def test_parse_aut():
    node = parse("aut(0.5, 0)")
    assert isinstance(node, Aut) and node.a == 0.5 and node.theta == 0


def test_parse_compose():
    node = parse("compose(blaschke(0;0.3,-0.2i), z^2)")
    assert isinstance(node, Compose)
    assert isinstance(node.outer, Blaschke) and node.outer.zeros == (0.3, -0.2j)
    assert parse(unparse(node)) == node


def test_complex_literal_folding():
    assert parse("0.3-0.2i") == Const(0.3 - 0.2j)
    assert parse("-0.5") == Const(-0.5)


@pytest.mark.parametrize("text,exc", [
    ("z^", MapSyntaxError),
    ("z + + ", MapSyntaxError),
    ("foo(z)", UnknownIdentifier),
    ("w", UnknownIdentifier),
    ("aut(0.5)", ArityError),
    ("compose(z)", ArityError),
    ("blaschke(0)", ArityError),
    ("aut(1.5, 0)", DomainError),
    ("blaschke(0; 2)", DomainError),
    ("blaschke(0.1i; 0.3)", DomainError),
])
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse(text)


def test_error_position():
    with pytest.raises(UnknownIdentifier) as info:
        parse("z +\n  foo")
    assert (info.value.line, info.value.column) == (2, 3)


reals = st.floats(-0.9, 0.9, allow_nan=False).map(lambda x: round(x, 6))
consts = st.builds(lambda a, b: Const(complex(a, b)), reals, reals)
leaves = st.one_of(st.just(Var()), consts,
                   st.builds(lambda a, t: Aut(complex(a, 0.0), t), reals, reals),
                   st.builds(lambda t, zs: Blaschke(t, tuple(complex(z) for z in zs)),
                             reals, st.lists(reals, min_size=1, max_size=3)))


def _extend(children):
    return st.one_of(
        st.builds(BinOp, st.sampled_from("+-*/"), children, children),
        st.builds(Pow, children, st.integers(-3, 4)),
        st.builds(Compose, children, children),
    )


exprs = st.recursive(leaves, _extend, max_leaves=6)


@given(exprs)
def test_unparse_roundtrip(node):
    text = unparse(node)
    again = parse(text)
    assert unparse(again) == text


# --------------------------------------------------------------------- jets


def test_jet_examples():
    assert eval_jet(parse("id"), 0.3).as_tuple() == pytest.approx((0.3, 1, 0))
    assert eval_jet(parse("z^2"), 0.5).as_tuple() == pytest.approx((0.25, 1, 2))
    j = eval_jet(parse("compose(aut(-0.5,0), id)"), 0)
    assert j.as_tuple() == pytest.approx((0.5, 0.75, -0.75))


smooth_maps = st.sampled_from([
    "z^3 - 0.2*z", "blaschke(0.4; 0.3, -0.5i, 0.2+0.1i)", "compose(aut(0.2i,1), z^2)",
    "(z-0.3)/(1-0.3*z)", "0.5*z^-2*z^3", "aut(0.6,0)*aut(-0.1i,2)",
])


@given(smooth_maps, st.floats(0.05, 0.8), st.floats(0, 2 * math.pi))
def test_jet_matches_finite_differences(text, r, t):
    f = parse(text)
    z = r * complex(math.cos(t), math.sin(t))
    j = eval_jet(f, z)
    h = 1e-4
    d1 = (f(z + h) - f(z - h)) / (2 * h)
    d2 = (f(z + h) - 2 * f(z) + f(z - h)) / h ** 2
    assert abs(j.d1 - d1) < 1e-6 * max(1, abs(d1))
    assert abs(j.d2 - d2) < 1e-4 * max(1, abs(d2))


def test_jet_division_by_zero():
    with pytest.raises(EvalError):
        Jet2.constant(1) / Jet2.constant(0)
    with pytest.raises(EvalError):
        parse("1/z")(0)


def test_vectorized_evaluation_matches_scalar():
    f = parse("blaschke(0.2; 0.5, 0.1i)")
    zs = np.array([0.1, -0.3j, 0.5 + 0.2j])
    assert np.allclose(f(zs), [complex(f(complex(z))) for z in zs])


# ----------------------------------------------------------------- blaschke


@pytest.mark.parametrize("text,degree", [
    ("z", 1), ("z^2", 2), ("aut(0.3, 1)", 1), ("-blaschke(0; 0.2, 0.4)", 2),
    ("aut(0.3,0)*z^2", 3), ("compose(z^2, aut(0.5, 0))", 2), ("(0.6+0.8i)*z", 1),
])
def test_blaschke_recognition(text, degree):
    f = parse(text)
    data = as_blaschke(f)
    assert data is not None and data.degree == degree
    zs = np.array([0.1 + 0.2j, -0.4, 0.3j])
    assert np.allclose(data(zs), f(zs), atol=1e-12)


@pytest.mark.parametrize("text", ["z/2", "z+0.1", "0.5*z^2"])
def test_non_blaschke(text):
    assert as_blaschke(parse(text)) is None


def test_boundary_derivative_examples():
    assert blaschke_boundary_derivative([0], BoundaryPoint(0.7)) == pytest.approx(1)
    assert blaschke_boundary_derivative([0, 0], BoundaryPoint(2.0)) == pytest.approx(2)
    assert blaschke_boundary_derivative([0.5], 1) == pytest.approx(3)


def test_boundary_derivative_matches_radial_limit():
    f = parse("aut(0.5,0)")
    r = 1 - 1e-6
    nu = (1 - abs(f(r)) ** 2) / (1 - r * r)
    assert nu == pytest.approx(3, rel=1e-5)


def test_sup_derivative_examples():
    assert sup_derivative(parse("z^2")) == pytest.approx(2)
    assert sup_derivative(parse("aut(-0.5,0)")) == pytest.approx(3)
    t = np.linspace(0, 2 * np.pi, 100_000, endpoint=False)
    brute = blaschke_boundary_derivative([0.3, -0.3], np.exp(1j * t)).max()
    s = sup_derivative(parse("blaschke(0; 0.3, -0.3)"))
    assert 2 <= s <= 2.86 and s >= brute - 1e-9


# --------------------------------------------------------------- validation


def test_validate_examples():
    v = validate_self_map(parse("blaschke(0; 0.3)"))
    assert v.valid and v.max_boundary_modulus == 1 and v.mode == "exact"
    v = validate_self_map(parse("z + 0.5"))
    assert not v.valid and abs(v.witness.value - 1) < 0.01
    v = validate_self_map(parse("z/2"))
    assert v.valid and v.max_boundary_modulus == pytest.approx(0.5)


def test_validate_poles_and_removable_singularities():
    assert closed_disk_poles(parse("1/(z-0.5)")) == [pytest.approx(0.5)]
    assert closed_disk_poles(parse("(z^2-0.25)/(z-0.5)/2")) == []
    assert not validate_self_map(parse("0.1/(z-0.5)")).valid


def test_load_map_raises_for_invalid():
    with pytest.raises(InvalidSelfMap, match="not a self-map"):
        load_map("z+0.5")


def test_real_literals_do_not_fold():
    assert parse("0 + 0") == BinOp("+", Const(0), Const(0))
    assert parse("-1 - 2i") == Const(-1 - 2j)
