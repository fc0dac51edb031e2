"""Second-order jets (value, first and second derivative) of complex maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class EvalError(ArithmeticError):
    """Evaluation hit a pole or otherwise produced a non-finite value."""


def _zero_check(g):
    if np.any(g == 0):
        raise EvalError("division by zero while evaluating map")


@dataclass(frozen=True)
class Jet2:
    """Truncated Taylor data ``(f, f', f'')`` at a point.

    The fields may be complex scalars or numpy arrays of matching shape, so a
    single Jet2 can carry the jets of many points at once.
    """

    f: complex
    d1: complex = 0j
    d2: complex = 0j

    @classmethod
    def variable(cls, z) -> "Jet2":
        return cls(z, np.ones_like(z) if isinstance(z, np.ndarray) else 1 + 0j,
                   np.zeros_like(z) if isinstance(z, np.ndarray) else 0j)

    @classmethod
    def constant(cls, c) -> "Jet2":
        return cls(c, 0j, 0j)

    @staticmethod
    def _lift(other) -> "Jet2":
        if isinstance(other, Jet2):
            return other
        return Jet2(other, 0j, 0j)

    def __add__(self, other):
        o = self._lift(other)
        return Jet2(self.f + o.f, self.d1 + o.d1, self.d2 + o.d2)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.f, -self.d1, -self.d2)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(self.f * other, self.d1 * other, self.d2 * other)
        a, b = self, other
        return Jet2(a.f * b.f,
                    a.d1 * b.f + a.f * b.d1,
                    a.d2 * b.f + 2 * a.d1 * b.d1 + a.f * b.d2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._lift(other)
        _zero_check(b.f)
        q = self.f / b.f
        q1 = (self.d1 - q * b.d1) / b.f
        q2 = (self.d2 - 2 * q1 * b.d1 - q * b.d2) / b.f
        return Jet2(q, q1, q2)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, n: int):
        n = int(n)
        if n == 0:
            return Jet2.constant(np.ones_like(self.f) if isinstance(self.f, np.ndarray) else 1 + 0j)
        if n == 1:
            return self
        if n < 0:
            return 1 / (self ** (-n))
        p2 = self.f ** (n - 2)
        p1 = p2 * self.f
        return Jet2(p1 * self.f,
                    n * p1 * self.d1,
                    n * (n - 1) * p2 * self.d1 ** 2 + n * p1 * self.d2)

    def compose_into(self, inner: "Jet2") -> "Jet2":
        """Chain rule: ``self`` is the jet of F at inner.f, result is the jet of F o inner."""
        return Jet2(self.f,
                    self.d1 * inner.d1,
                    self.d2 * inner.d1 ** 2 + self.d1 * inner.d2)

    def as_tuple(self):
        return (self.f, self.d1, self.d2)
