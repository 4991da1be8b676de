"""Forward-mode automatic differentiation with vector-valued dual numbers.

A :class:`Dual` carries a real value and its gradient with respect to every
input coordinate at once, so one pass through a map yields its full Jacobian.
Duals cooperate with numpy: object arrays of duals go through ``np.cross``,
``np.dot`` and the elementwise ufuncs used by the chart code.
"""
from __future__ import annotations

import numpy as np


class Dual:
    __slots__ = ("value", "grad")

    def __init__(self, value, grad):
        self.value = float(value)
        self.grad = grad

    def __repr__(self):
        return f"Dual({self.value!r}, {self.grad!r})"

    # arithmetic
    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.value + other.value, self.grad + other.grad)
        if _is_real(other):
            return Dual(self.value + other, self.grad)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.value - other.value, self.grad - other.grad)
        if _is_real(other):
            return Dual(self.value - other, self.grad)
        return NotImplemented

    def __rsub__(self, other):
        if _is_real(other):
            return Dual(other - self.value, -self.grad)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.value * other.value, self.value * other.grad + other.value * self.grad)
        if _is_real(other):
            return Dual(self.value * other, self.grad * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            v = self.value / other.value
            return Dual(v, (self.grad - v * other.grad) / other.value)
        if _is_real(other):
            return Dual(self.value / other, self.grad / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_real(other):
            v = other / self.value
            return Dual(v, -v / self.value * self.grad)
        return NotImplemented

    def __pow__(self, k):
        if not _is_real(k):
            return NotImplemented
        return Dual(self.value**k, k * self.value ** (k - 1) * self.grad)

    def __neg__(self):
        return Dual(-self.value, -self.grad)

    def __pos__(self):
        return self

    def __abs__(self):
        return self if self.value >= 0 else -self

    def __mod__(self, period):
        # derivative of x mod p is that of x away from the cut
        return Dual(self.value % period, self.grad)

    # comparisons look at the value only
    def __lt__(self, other):
        return self.value < _value(other)

    def __le__(self, other):
        return self.value <= _value(other)

    def __gt__(self, other):
        return self.value > _value(other)

    def __ge__(self, other):
        return self.value >= _value(other)

    # elementary functions; numpy calls these for object arrays
    def sqrt(self):
        r = np.sqrt(self.value)
        return Dual(r, self.grad / (2 * r))

    def sin(self):
        return Dual(np.sin(self.value), np.cos(self.value) * self.grad)

    def cos(self):
        return Dual(np.cos(self.value), -np.sin(self.value) * self.grad)

    def arctan2(self, other):
        return _arctan2(self, other)

    def __array_ufunc__(self, ufunc, method, *inputs, **kwargs):
        if method != "__call__" or kwargs:
            return NotImplemented
        if any(isinstance(x, np.ndarray) and x.ndim > 0 for x in inputs):
            boxed = [_box(x) if isinstance(x, Dual) else x for x in inputs]
            return np.frompyfunc(lambda *a: _apply(ufunc, a), ufunc.nin, 1)(*boxed)
        return _apply(ufunc, inputs)


def _is_real(x):
    return isinstance(x, (int, float, np.integer, np.floating)) and not isinstance(x, bool)


def _value(x):
    return x.value if isinstance(x, Dual) else x


def _box(x):
    out = np.empty((), dtype=object)
    out[()] = x
    return out


def _plain(x):
    # numpy scalars would hand the operation back to numpy
    if isinstance(x, np.ndarray):
        x = x.item()
    return float(x) if isinstance(x, np.generic) else x


def _lift(x, like):
    if isinstance(x, Dual):
        return x
    return Dual(float(np.asarray(x)), np.zeros_like(like.grad))


def _arctan2(y, x):
    some = y if isinstance(y, Dual) else x
    y, x = _lift(y, some), _lift(x, some)
    r2 = x.value**2 + y.value**2
    return Dual(np.arctan2(y.value, x.value), (x.value * y.grad - y.value * x.grad) / r2)


_BINARY = {
    np.add: lambda a, b: a + b,
    np.subtract: lambda a, b: a - b,
    np.multiply: lambda a, b: a * b,
    np.true_divide: lambda a, b: a / b,
    np.remainder: lambda a, b: a % b,
    np.power: lambda a, b: a**b,
    np.arctan2: _arctan2,
    np.greater: lambda a, b: _value(a) > _value(b),
    np.greater_equal: lambda a, b: _value(a) >= _value(b),
    np.less: lambda a, b: _value(a) < _value(b),
    np.less_equal: lambda a, b: _value(a) <= _value(b),
}

_UNARY = {
    np.negative: lambda a: -a,
    np.positive: lambda a: a,
    np.absolute: abs,
    np.sqrt: lambda a: a.sqrt() if isinstance(a, Dual) else np.sqrt(a),
    np.sin: lambda a: a.sin() if isinstance(a, Dual) else np.sin(a),
    np.cos: lambda a: a.cos() if isinstance(a, Dual) else np.cos(a),
    np.isfinite: lambda a: bool(np.isfinite(_value(a))),
}


def _apply(ufunc, args):
    if ufunc in _UNARY and len(args) == 1:
        return _UNARY[ufunc](_plain(args[0]))
    if ufunc in _BINARY and len(args) == 2:
        a, b = (_plain(x) for x in args)
        return _BINARY[ufunc](a, b)
    raise TypeError(f"dual numbers do not support {ufunc.__name__}")


def seed(x) -> np.ndarray:
    """Object array of duals with ``grad(x_i) = e_i``."""
    x = np.asarray(x, dtype=float)
    eye = np.eye(x.size)
    out = np.empty(x.size, dtype=object)
    for i, v in enumerate(x):
        out[i] = Dual(v, eye[i])
    return out


def dual_jacobian(fn, x) -> np.ndarray:
    """Jacobian of ``fn`` at ``x`` by one forward pass of dual numbers."""
    x = np.asarray(x, dtype=float)
    y = fn(seed(x))
    rows = []
    for v in np.atleast_1d(y):
        rows.append(v.grad if isinstance(v, Dual) else np.zeros(x.size))
    return np.array(rows, dtype=float)


def derivative(fn, x: float) -> float:
    """Derivative of a scalar function of one variable."""
    out = fn(Dual(x, np.ones(1)))
    return float(out.grad[0]) if isinstance(out, Dual) else 0.0
