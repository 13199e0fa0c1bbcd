"""Truncated Taylor (jet) arithmetic in one variable.

A jet of order ``m`` stores the coefficients ``f(t0), f'(t0), f''(t0)/2!,
..., f^(m)(t0)/m!`` of a scalar function around an expansion point.  With
the 1/k! scaling, multiplication is a plain Cauchy product and every
elementary function propagates through the standard convolution
recurrences, so high-order derivatives of closed-form curves come out
exact to round-off instead of via finite differences.

Jets of different orders never mix silently: combining them raises
``JetOrderError``.  Lowering the order is always an explicit
``truncated`` call.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "JetError",
    "JetOrderError",
    "JetDomainError",
    "JetScalar",
    "JetVector",
]


class JetError(ArithmeticError):
    """Base class for jet arithmetic failures."""


class JetOrderError(JetError):
    """Mixed-order operands, or differentiating an order-0 jet."""


class JetDomainError(JetError):
    """Singular jet: division by a zero-constant-term jet, sqrt of a
    non-positive leading coefficient, and similar domain violations."""


class JetScalar:
    """Taylor coefficients of a scalar function, truncated at a fixed order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=float))
        if c.ndim != 1 or c.size == 0:
            raise ValueError("jet coefficients must form a non-empty 1-d array")
        if not np.all(np.isfinite(c)):
            raise ValueError("jet coefficients must be finite")
        self.coeffs = c

    @classmethod
    def constant(cls, value, order):
        c = np.zeros(order + 1)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, value, order):
        """Jet of ``s -> value + s``, the expansion of the parameter itself."""
        if order < 1:
            raise JetOrderError("a variable jet needs order >= 1")
        c = np.zeros(order + 1)
        c[0] = value
        c[1] = 1.0
        return cls(c)

    @property
    def order(self):
        return self.coeffs.size - 1

    @property
    def value(self):
        return float(self.coeffs[0])

    def derivative(self, k):
        """k-th derivative value at the expansion point (k! * coeffs[k])."""
        if not 0 <= k <= self.order:
            raise JetOrderError(f"derivative {k} beyond stored order {self.order}")
        return float(self.coeffs[k]) * math.factorial(k)

    def truncated(self, order):
        if order > self.order:
            raise JetOrderError(f"cannot extend order {self.order} to {order}")
        return JetScalar(self.coeffs[: order + 1])

    def differentiate(self):
        """Jet of the derivative; the order drops by one."""
        if self.order < 1:
            raise JetOrderError("cannot differentiate an order-0 jet")
        k = np.arange(1, self.order + 1)
        return JetScalar(self.coeffs[1:] * k)

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, JetScalar):
            if other.order != self.order:
                raise JetOrderError(
                    f"mixed jet orders {self.order} and {other.order}"
                )
            return other
        if isinstance(other, (int, float, np.integer, np.floating)):
            return JetScalar.constant(float(other), self.order)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return JetScalar(self.coeffs + o.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return JetScalar(-self.coeffs)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return JetScalar(self.coeffs - o.coeffs)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return JetScalar(o.coeffs - self.coeffs)

    def __mul__(self, other):
        if isinstance(other, JetVector):
            return NotImplemented
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return JetScalar(np.convolve(self.coeffs, o.coeffs)[: self.order + 1])

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.recip()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.recip()

    # -- elementary compositions --------------------------------------

    def recip(self):
        a = self.coeffs
        if a[0] == 0.0:
            raise JetDomainError("reciprocal of a jet with zero constant term")
        b = np.zeros_like(a)
        b[0] = 1.0 / a[0]
        for k in range(1, a.size):
            b[k] = -b[0] * np.dot(a[1 : k + 1], b[k - 1 :: -1])
        return JetScalar(b)

    def sqrt(self):
        a = self.coeffs
        if a[0] <= 0.0:
            raise JetDomainError("sqrt of a jet with non-positive constant term")
        b = np.zeros_like(a)
        b[0] = math.sqrt(a[0])
        for k in range(1, a.size):
            conv = np.dot(b[1:k], b[k - 1 : 0 : -1]) if k > 1 else 0.0
            b[k] = (a[k] - conv) / (2.0 * b[0])
        return JetScalar(b)

    def exp(self):
        a = self.coeffs
        b = np.zeros_like(a)
        b[0] = math.exp(a[0])
        j = np.arange(1, a.size)
        for k in range(1, a.size):
            b[k] = np.dot(j[:k] * a[1 : k + 1], b[k - 1 :: -1]) / k
        return JetScalar(b)

    def sin(self):
        return self._sincos()[0]

    def cos(self):
        return self._sincos()[1]

    def _sincos(self):
        a = self.coeffs
        s = np.zeros_like(a)
        c = np.zeros_like(a)
        s[0] = math.sin(a[0])
        c[0] = math.cos(a[0])
        j = np.arange(1, a.size)
        for k in range(1, a.size):
            ja = j[:k] * a[1 : k + 1]
            s[k] = np.dot(ja, c[k - 1 :: -1]) / k
            c[k] = -np.dot(ja, s[k - 1 :: -1]) / k
        return JetScalar(s), JetScalar(c)

    def powi(self, k):
        """Integer power, negative allowed when the constant term is nonzero."""
        if k < 0:
            return self.recip().powi(-k)
        out = JetScalar.constant(1.0, self.order)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __repr__(self):
        return f"JetScalar({self.coeffs.tolist()})"


class JetVector:
    """A fixed-dimension vector whose components are jets of one common order."""

    __slots__ = ("components",)

    def __init__(self, components):
        comps = tuple(components)
        if not comps:
            raise ValueError("empty jet vector")
        order = comps[0].order
        if any(c.order != order for c in comps):
            raise JetOrderError("jet vector components must share one order")
        self.components = comps

    @classmethod
    def constant(cls, values, order):
        return cls([JetScalar.constant(v, order) for v in np.asarray(values, dtype=float)])

    @property
    def dim(self):
        return len(self.components)

    @property
    def order(self):
        return self.components[0].order

    @property
    def value(self):
        return np.array([c.value for c in self.components])

    def derivative(self, k):
        return np.array([c.derivative(k) for c in self.components])

    def truncated(self, order):
        return JetVector([c.truncated(order) for c in self.components])

    def differentiate(self):
        return JetVector([c.differentiate() for c in self.components])

    def dot(self, other):
        if not isinstance(other, JetVector):
            raise TypeError("dot expects a JetVector")
        if other.dim != self.dim:
            raise ValueError("dimension mismatch in jet dot product")
        acc = self.components[0] * other.components[0]
        for a, b in zip(self.components[1:], other.components[1:]):
            acc = acc + a * b
        return acc

    def norm_sq(self):
        return self.dot(self)

    def __add__(self, other):
        if not isinstance(other, JetVector):
            return NotImplemented
        return JetVector([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        if not isinstance(other, JetVector):
            return NotImplemented
        return JetVector([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return JetVector([-c for c in self.components])

    def __mul__(self, scalar):
        if isinstance(scalar, (JetScalar, int, float, np.integer, np.floating)):
            return JetVector([c * scalar for c in self.components])
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        return f"JetVector(dim={self.dim}, order={self.order})"
