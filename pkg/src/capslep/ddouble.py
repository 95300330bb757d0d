"""Double-double arithmetic.

A double-double is an unevaluated sum ``hi + lo`` of two binary64 numbers with
``|lo| <= ulp(hi)/2``, giving a 106-bit significand.

The free functions operate on ``(hi, lo)`` pairs and use only ``+ - * /`` so
they work unchanged on Python floats and on numpy arrays (elementwise).
:class:`DoubleDouble` wraps them as a scalar number type.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import numpy as np

__all__ = [
    "two_sum",
    "quick_two_sum",
    "two_prod",
    "dd_add",
    "dd_sub",
    "dd_mul",
    "dd_mul_d",
    "dd_div",
    "dd_sqrt",
    "dd_ratio",
    "DoubleDouble",
]

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def quick_two_sum(a, b):
    """``two_sum`` for ``|a| >= |b|``."""
    s = a + b
    e = b - (s - a)
    return s, e


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def dd_add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    t, f = two_sum(al, bl)
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


def dd_sub(ah, al, bh, bl):
    return dd_add(ah, al, -bh, -bl)


def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return quick_two_sum(p, e)


def dd_mul_d(ah, al, b):
    p, e = two_prod(ah, b)
    e = e + al * b
    return quick_two_sum(p, e)


def dd_div(ah, al, bh, bl):
    q1 = ah / bh
    rh, rl = dd_sub(ah, al, *dd_mul_d(bh, bl, q1))
    q2 = rh / bh
    rh, rl = dd_sub(rh, rl, *dd_mul_d(bh, bl, q2))
    q3 = rh / bh
    q1, q2 = quick_two_sum(q1, q2)
    return dd_add(q1, q2, q3, 0.0 * q3)


def dd_sqrt(ah, al):
    """Square root by one Newton step on the double estimate (``a >= 0``)."""
    if isinstance(ah, np.ndarray):
        x = np.sqrt(ah)
        safe = np.where(x > 0, x, 1.0)
    else:
        if ah <= 0.0:
            return 0.0, 0.0
        x = safe = math.sqrt(ah)
    ph, pl = two_prod(x, x)
    rh, rl = dd_sub(ah, al, ph, pl)
    corr = rh / (2.0 * safe)
    out = quick_two_sum(x, corr)
    if isinstance(ah, np.ndarray):
        zero = x == 0
        return np.where(zero, 0.0, out[0]), np.where(zero, 0.0, out[1])
    return out


def dd_ratio(p: int, q: int):
    """``p/q`` for integers, rounded to double-double."""
    ph, pl = _int_to_dd(p)
    qh, ql = _int_to_dd(q)
    return dd_div(ph, pl, qh, ql)


def _int_to_dd(n: int):
    hi = float(n)
    lo = float(n - int(hi))
    return quick_two_sum(hi, lo)


class DoubleDouble:
    """Scalar double-double number.

    >>> x = DoubleDouble(1) / 3
    >>> float(x * 3 - 1) == 0.0
    True
    """

    __slots__ = ("hi", "lo")

    def __init__(self, hi=0.0, lo=0.0):
        if isinstance(hi, DoubleDouble):
            self.hi, self.lo = hi.hi, hi.lo
            return
        if isinstance(hi, int) and not isinstance(hi, bool):
            h, l = _int_to_dd(hi)
            h, l = dd_add(h, l, float(lo), 0.0)
        elif isinstance(hi, Rational):
            h, l = dd_ratio(hi.numerator, hi.denominator)
            h, l = dd_add(h, l, float(lo), 0.0)
        else:
            h, l = two_sum(float(hi), float(lo))
        self.hi, self.lo = h, l

    @classmethod
    def _raw(cls, hi, lo):
        obj = cls.__new__(cls)
        obj.hi, obj.lo = float(hi), float(lo)
        return obj

    @staticmethod
    def _coerce(other):
        if isinstance(other, DoubleDouble):
            return other
        if isinstance(other, (int, float, Fraction)):
            return DoubleDouble(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._raw(*dd_add(self.hi, self.lo, o.hi, o.lo))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._raw(*dd_sub(self.hi, self.lo, o.hi, o.lo))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._raw(*dd_mul(self.hi, self.lo, o.hi, o.lo))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.hi == 0.0:
            raise ZeroDivisionError("double-double division by zero")
        return self._raw(*dd_div(self.hi, self.lo, o.hi, o.lo))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return self._raw(-self.hi, -self.lo)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.hi < 0 or (self.hi == 0 and self.lo < 0) else self

    def sqrt(self):
        if self.hi < 0:
            raise ValueError("square root of a negative double-double")
        return self._raw(*dd_sqrt(self.hi, self.lo))

    def _cmp(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self - o
        return (d.hi > 0) - (d.hi < 0)

    def __eq__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __hash__(self):
        return hash((self.hi, self.lo))

    def __float__(self):
        return self.hi + self.lo

    def to_fraction(self) -> Fraction:
        return Fraction(self.hi) + Fraction(self.lo)

    def __repr__(self):
        return f"DoubleDouble({self.hi!r}, {self.lo!r})"
