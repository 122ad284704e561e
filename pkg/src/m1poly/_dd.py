"""Double-double arithmetic from error-free transformations.

A value is a pair (hi, lo) with |lo| <= ulp(hi)/2. Every function works on
Python floats and elementwise on numpy arrays. Products use Veltkamp
splitting, so no fused multiply-add is needed.
"""
from __future__ import annotations

_SPLIT = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def split(a):
    c = _SPLIT * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def dd(a):
    return (a, 0.0 * a)


def add(x, y):
    s, e = two_sum(x[0], y[0])
    return quick_two_sum(s, e + x[1] + y[1])


def neg(x):
    return (-x[0], -x[1])


def sub(x, y):
    return add(x, neg(y))


def mul(x, y):
    p, e = two_prod(x[0], y[0])
    return quick_two_sum(p, e + x[0] * y[1] + x[1] * y[0])


def div(x, y):
    q1 = x[0] / y[0]
    r = sub(x, mul(y, dd(q1)))
    q2 = r[0] / y[0]
    r = sub(r, mul(y, dd(q2)))
    q3 = r[0] / y[0]
    q1, q2 = quick_two_sum(q1, q2)
    return add((q1, q2), dd(q3))


def value(x):
    return x[0] + x[1]
