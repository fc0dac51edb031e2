"""Expression trees for holomorphic self-maps of the disk.

Nodes are immutable and hashable; ``node(z)`` evaluates on a complex scalar,
a numpy array, or a :class:`Jet2`.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from hypolevel.dsl.jet import EvalError, Jet2

# precedence levels used by unparse
_P_SUM, _P_PROD, _P_UNARY, _P_POW, _P_ATOM = 1, 2, 3, 4, 5


def _fmt_real(x: float) -> str:
    return repr(float(x))


def format_complex(c: complex) -> str:
    """Render a constant so that the parser reads back the same value."""
    c = complex(c)
    re, im = c.real, c.imag
    if im == 0:
        s = _fmt_real(re)
        return s if not s.startswith("-") else f"({s})"
    if re == 0:
        return f"({_fmt_real(im)}i)"
    sign = "-" if str(im).startswith("-") else "+"
    return f"({_fmt_real(re)}{sign}{_fmt_real(abs(im))}i)"


def _scalar_out(x):
    return not isinstance(x, (np.ndarray, Jet2))


class MapExpr:
    """Base class of all expression nodes."""

    prec = _P_ATOM

    def __call__(self, z):
        if _scalar_out(z):
            z = complex(z)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = self.ev(z)
        val = out.f if isinstance(out, Jet2) else out
        if not np.all(np.isfinite(val)):
            raise EvalError(f"non-finite value evaluating {unparse(self)}")
        return out

    def ev(self, z):
        raise NotImplementedError

    def unparse(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.unparse()

    def children(self) -> tuple:
        return ()


def _wrap(node: MapExpr, min_prec: int) -> str:
    s = node.unparse()
    return f"({s})" if node.prec < min_prec else s


@dataclass(frozen=True)
class Var(MapExpr):
    def ev(self, z):
        return z

    def unparse(self):
        return "z"


@dataclass(frozen=True)
class Identity(MapExpr):
    def ev(self, z):
        return z

    def unparse(self):
        return "id"


@dataclass(frozen=True)
class Const(MapExpr):
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))

    def ev(self, z):
        if isinstance(z, Jet2):
            return Jet2.constant(self.value)
        if isinstance(z, np.ndarray):
            return np.full(z.shape, self.value, dtype=complex)
        return self.value

    def unparse(self):
        return format_complex(self.value)


@dataclass(frozen=True)
class Neg(MapExpr):
    arg: MapExpr
    prec = _P_UNARY

    def ev(self, z):
        return -self.arg.ev(z)

    def unparse(self):
        return "-" + _wrap(self.arg, _P_UNARY)

    def children(self):
        return (self.arg,)


_OPS = {
    "+": (_P_SUM, lambda a, b: a + b),
    "-": (_P_SUM, lambda a, b: a - b),
    "*": (_P_PROD, lambda a, b: a * b),
    "/": (_P_PROD, lambda a, b: a / b),
}


@dataclass(frozen=True)
class BinOp(MapExpr):
    op: str
    left: MapExpr
    right: MapExpr

    @property
    def prec(self):
        return _OPS[self.op][0]

    def ev(self, z):
        a = self.left.ev(z)
        b = self.right.ev(z)
        if self.op == "/" and not isinstance(b, (np.ndarray, Jet2)) and b == 0:
            raise EvalError("division by zero while evaluating map")
        return _OPS[self.op][1](a, b)

    def unparse(self):
        p = self.prec
        return f"{_wrap(self.left, p)} {self.op} {_wrap(self.right, p + 1)}"

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Pow(MapExpr):
    base: MapExpr
    exponent: int
    prec = _P_POW

    def ev(self, z):
        b = self.base.ev(z)
        if isinstance(b, Jet2):
            return b ** self.exponent
        if self.exponent < 0 and not isinstance(b, np.ndarray) and b == 0:
            raise EvalError("zero raised to a negative power")
        return b ** self.exponent

    def unparse(self):
        return f"{_wrap(self.base, _P_ATOM)}^{self.exponent}"

    def children(self):
        return (self.base,)


def _moebius_factor(z, a: complex):
    return (z - a) / (1 - a.conjugate() * z)


@dataclass(frozen=True)
class Blaschke(MapExpr):
    """``exp(i theta) * prod (z - a_k)/(1 - conj(a_k) z)``."""

    theta: float
    zeros: Tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "zeros", tuple(complex(a) for a in self.zeros))

    def ev(self, z):
        out = cmath.exp(1j * self.theta)
        for a in self.zeros:
            out = _moebius_factor(z, a) * out
        return out

    def unparse(self):
        zs = ", ".join(format_complex(a) for a in self.zeros)
        return f"blaschke({format_complex(self.theta)}; {zs})"


@dataclass(frozen=True)
class Aut(MapExpr):
    """``exp(i theta) (z - a)/(1 - conj(a) z)``."""

    a: complex
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "theta", float(self.theta))

    def ev(self, z):
        return cmath.exp(1j * self.theta) * _moebius_factor(z, self.a)

    def unparse(self):
        return f"aut({format_complex(self.a)}, {format_complex(self.theta)})"


@dataclass(frozen=True)
class Compose(MapExpr):
    """``outer o inner``."""

    outer: MapExpr
    inner: MapExpr

    def ev(self, z):
        return self.outer.ev(self.inner.ev(z))

    def unparse(self):
        return f"compose({self.outer.unparse()}, {self.inner.unparse()})"

    def children(self):
        return (self.outer, self.inner)


def unparse(node: MapExpr) -> str:
    return node.unparse()


def walk(node: MapExpr):
    yield node
    for ch in node.children():
        yield from walk(ch)


def eval_jet(f: MapExpr, z) -> Jet2:
    """Value, first and second derivative of ``f`` at ``z`` (scalar or array)."""
    if isinstance(z, np.ndarray):
        z = z.astype(complex)
    else:
        z = complex(getattr(z, "value", z))
    return f(Jet2.variable(z))
