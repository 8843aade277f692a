"""Hyper-dual numbers: exact first and second derivatives in one evaluation.

A hyper-dual number ``a + b e1 + c e2 + d e1e2`` carries two nilpotent
units (``e1**2 == e2**2 == 0``) whose product survives.  Evaluating
``f(x + e1 + e2)`` yields ``f(x)``, ``f'(x)`` twice, and ``f''(x)`` in the
``e1e2`` slot; seeding ``e1``/``e2`` along different coordinates of a
multivariate function yields the mixed partial instead.  There is no step
size and hence no truncation error: derivatives are exact to roundoff.

Metric evaluators in this package are written against the generic math
helpers at the bottom of this module (``sin``, ``cosh``, ...) so the same
code runs on floats and on :class:`HyperDual` coordinates.
"""

from __future__ import annotations

import math

__all__ = [
    "HyperDual",
    "value",
    "scalar_derivatives",
    "partials",
    "sin",
    "cos",
    "tan",
    "exp",
    "log",
    "sqrt",
    "sinh",
    "cosh",
    "tanh",
    "power",
]


class HyperDual:
    """Second-order dual scalar ``re + e1*eps1 + e2*eps2 + e12*eps1*eps2``."""

    __slots__ = ("re", "e1", "e2", "e12")

    def __init__(self, re, e1=0.0, e2=0.0, e12=0.0):
        self.re = float(re)
        self.e1 = float(e1)
        self.e2 = float(e2)
        self.e12 = float(e12)

    def __repr__(self):
        return f"HyperDual({self.re}, {self.e1}, {self.e2}, {self.e12})"

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, HyperDual):
            return HyperDual(self.re + other.re, self.e1 + other.e1,
                             self.e2 + other.e2, self.e12 + other.e12)
        return HyperDual(self.re + other, self.e1, self.e2, self.e12)

    __radd__ = __add__

    def __neg__(self):
        return HyperDual(-self.re, -self.e1, -self.e2, -self.e12)

    def __sub__(self, other):
        return self + (-other if isinstance(other, HyperDual) else -float(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, HyperDual):
            return HyperDual(
                self.re * other.re,
                self.re * other.e1 + self.e1 * other.re,
                self.re * other.e2 + self.e2 * other.re,
                self.re * other.e12 + self.e12 * other.re
                + self.e1 * other.e2 + self.e2 * other.e1,
            )
        return HyperDual(self.re * other, self.e1 * other,
                         self.e2 * other, self.e12 * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, HyperDual):
            return self * other._reciprocal()
        return self * (1.0 / other)

    def __rtruediv__(self, other):
        return self._reciprocal() * other

    def _reciprocal(self):
        if self.re == 0.0:
            raise ZeroDivisionError("hyper-dual division by zero real part")
        inv = 1.0 / self.re
        return _chain(self, inv, -inv * inv, 2.0 * inv * inv * inv)

    def __pow__(self, exponent):
        if isinstance(exponent, HyperDual):
            # x**y = exp(y*log(x)); rare path, used by generic warpings
            return exp(log(self) * exponent)
        q = float(exponent)
        if q == 0.0:
            return HyperDual(1.0)
        a = self.re
        if a == 0.0 and q < 2.0:
            raise ZeroDivisionError("hyper-dual power at zero base")
        return _chain(self, a ** q, q * a ** (q - 1.0),
                      q * (q - 1.0) * a ** (q - 2.0))

    def __rpow__(self, base):
        return exp(self * math.log(base))

    # -- comparisons act on the real part ----------------------------------

    def __lt__(self, other):
        return self.re < _real(other)

    def __le__(self, other):
        return self.re <= _real(other)

    def __gt__(self, other):
        return self.re > _real(other)

    def __ge__(self, other):
        return self.re >= _real(other)

    def __float__(self):
        raise TypeError("refusing to silently truncate a HyperDual; "
                        "use hyperdual.value()")


def _real(x):
    return x.re if isinstance(x, HyperDual) else float(x)


def _chain(x: HyperDual, f, df, d2f) -> HyperDual:
    """Lift f through x given f(a), f'(a), f''(a) at a = x.re."""
    return HyperDual(
        f,
        df * x.e1,
        df * x.e2,
        df * x.e12 + d2f * x.e1 * x.e2,
    )


def value(x):
    """Real part of a float or HyperDual."""
    return _real(x)


def scalar_derivatives(f, t):
    """Return (f(t), f'(t), f''(t)) for a scalar function of one variable."""
    y = f(HyperDual(t, 1.0, 1.0, 0.0))
    if isinstance(y, HyperDual):
        return y.re, y.e1, y.e12
    return float(y), 0.0, 0.0


def partials(f, x, i, j):
    """Return (f, d_i f, d_j f, d_i d_j f) for f of a coordinate sequence."""
    seeded = [
        HyperDual(c, 1.0 if k == i else 0.0, 1.0 if k == j else 0.0, 0.0)
        for k, c in enumerate(x)
    ]
    y = f(seeded)
    if isinstance(y, HyperDual):
        return y.re, y.e1, y.e2, y.e12
    return float(y), 0.0, 0.0, 0.0


# -- generic math helpers (float or HyperDual argument) ---------------------

def sin(x):
    if isinstance(x, HyperDual):
        s, c = math.sin(x.re), math.cos(x.re)
        return _chain(x, s, c, -s)
    return math.sin(x)


def cos(x):
    if isinstance(x, HyperDual):
        s, c = math.sin(x.re), math.cos(x.re)
        return _chain(x, c, -s, -c)
    return math.cos(x)


def tan(x):
    return sin(x) / cos(x)


def exp(x):
    if isinstance(x, HyperDual):
        e = math.exp(x.re)
        return _chain(x, e, e, e)
    return math.exp(x)


def log(x):
    if isinstance(x, HyperDual):
        a = x.re
        return _chain(x, math.log(a), 1.0 / a, -1.0 / (a * a))
    return math.log(x)


def sqrt(x):
    if isinstance(x, HyperDual):
        r = math.sqrt(x.re)
        return _chain(x, r, 0.5 / r, -0.25 / (r * x.re))
    return math.sqrt(x)


def sinh(x):
    if isinstance(x, HyperDual):
        s, c = math.sinh(x.re), math.cosh(x.re)
        return _chain(x, s, c, s)
    return math.sinh(x)


def cosh(x):
    if isinstance(x, HyperDual):
        s, c = math.sinh(x.re), math.cosh(x.re)
        return _chain(x, c, s, c)
    return math.cosh(x)


def tanh(x):
    return sinh(x) / cosh(x)


def power(x, q):
    """x**q for float or HyperDual x and real exponent q."""
    if isinstance(x, HyperDual):
        return x ** q
    return float(x) ** q
