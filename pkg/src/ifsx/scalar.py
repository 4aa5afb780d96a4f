"""Scalar helpers shared by exact and interval arithmetic.

Exact scalars are :class:`fractions.Fraction`. Interval scalars are
``mpmath.iv`` intervals (53-bit endpoints, outward rounded). Every certified
decision in the package is taken on rational bounds obtained through
:func:`lo` and :func:`hi`, so both modes feed the same comparison code.
"""
from __future__ import annotations

import contextlib
import math
from fractions import Fraction
from numbers import Rational

from mpmath import iv
from mpmath.libmp import finf, fninf, to_rational

EXACT = "exact"
INTERVAL = "interval"

Interval = type(iv.mpf(0))


def is_interval(x) -> bool:
    return isinstance(x, Interval)


def _mpf_to_fraction(raw) -> Fraction:
    if raw in (finf, fninf):
        raise OverflowError("unbounded interval endpoint")
    p, q = to_rational(raw)
    return Fraction(int(p), int(q))


def lo(x) -> Fraction:
    """Rational lower bound of a scalar."""
    if isinstance(x, Interval):
        return _mpf_to_fraction(x._mpi_[0])
    return Fraction(x)


def hi(x) -> Fraction:
    """Rational upper bound of a scalar."""
    if isinstance(x, Interval):
        return _mpf_to_fraction(x._mpi_[1])
    return Fraction(x)


def width(x) -> Fraction:
    return hi(x) - lo(x)


def midpoint(x) -> Fraction:
    if isinstance(x, Interval):
        return (lo(x) + hi(x)) / 2
    return Fraction(x)


def to_interval(x):
    """Enclose an int, Fraction, float, decimal string or interval."""
    if isinstance(x, Interval):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return iv.mpf(x)
    if isinstance(x, Rational):
        return iv.mpf(x.numerator) / x.denominator
    if isinstance(x, float):
        return iv.mpf(x)
    if isinstance(x, str):
        if "/" in x:
            return to_interval(Fraction(x))
        return iv.mpf(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an interval")


def interval_between(a: Fraction, b: Fraction):
    """Smallest 53-bit interval containing [a, b]."""
    return iv.mpf([to_interval(a).a, to_interval(b).b])


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, an integer literal or an int into a reduced Fraction.

    Floats and decimal strings are rejected: exact documents carry no
    rounding.
    """
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ValueError(f"not a rational literal: {text!r}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        if sep:
            p, q = int(num), int(den)
            if q == 0:
                raise ValueError
            return Fraction(p, q)
        return Fraction(int(s))
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def convert(x, mode: str):
    if mode == EXACT:
        if isinstance(x, Interval):
            raise TypeError("interval value in exact mode")
        if isinstance(x, float):
            raise TypeError("float value in exact mode")
        if isinstance(x, str):
            return parse_rational(x)
        return Fraction(x)
    return to_interval(x)


def is_zero(x) -> bool:
    """True only when x is certainly zero."""
    return lo(x) == 0 and hi(x) == 0


# -- square roots on rationals ------------------------------------------------

def sqrt_bounds(q: Fraction, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rational bounds on sqrt(q) with about ``bits`` relative bits.

    Exact (lower == upper) when q is the square of a rational.
    """
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative argument")
    if q == 0:
        return Fraction(0), Fraction(0)
    p, d = q.numerator, q.denominator
    rp, rd = math.isqrt(p), math.isqrt(d)
    if rp * rp == p and rd * rd == d:
        r = Fraction(rp, rd)
        return r, r
    shift = bits + max(0, (d.bit_length() - p.bit_length()) // 2 + 1)
    scale = 1 << shift
    floor_root = math.isqrt((p << (2 * shift)) // d)
    return Fraction(floor_root, scale), Fraction(floor_root + 1, scale)


def sqrt_lo(q) -> Fraction:
    if isinstance(q, Interval):
        return lo(iv.sqrt(iv.mpf([0, q.b]) if lo(q) < 0 else q))
    return sqrt_bounds(q)[0]


def sqrt_hi(q) -> Fraction:
    if isinstance(q, Interval):
        return hi(iv.sqrt(iv.mpf([0, q.b]) if lo(q) < 0 else q))
    return sqrt_bounds(q)[1]


def squared_norm(vec):
    total = 0
    for v in vec:
        total = total + v * v
    return total


def norm_lo(vec) -> Fraction:
    """Certified lower bound on the Euclidean norm."""
    if len(vec) == 1:
        v = vec[0]
        if isinstance(v, Interval):
            a, b = lo(v), hi(v)
            return max(a, -b, Fraction(0))
        return abs(Fraction(v))
    if any(isinstance(v, Interval) for v in vec):
        total = Fraction(0)
        for v in vec:
            a, b = lo(v), hi(v)
            m = max(a, -b, Fraction(0))
            total += m * m
        return sqrt_bounds(total)[0]
    return sqrt_bounds(squared_norm(vec))[0]


def norm_hi(vec) -> Fraction:
    """Certified upper bound on the Euclidean norm."""
    if len(vec) == 1:
        v = vec[0]
        return max(abs(lo(v)), abs(hi(v)))
    total = Fraction(0)
    for v in vec:
        m = max(abs(lo(v)), abs(hi(v)))
        total += m * m
    return sqrt_bounds(total)[1]


@contextlib.contextmanager
def interval_precision(bits: int):
    """Temporarily raise the working precision of ``mpmath.iv``."""
    saved = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = saved


def _pair(a, b):
    if isinstance(a, Interval) or isinstance(b, Interval):
        return to_interval(a), to_interval(b)
    return a, b


def add(a, b):
    a, b = _pair(a, b)
    return a + b


def sub(a, b):
    a, b = _pair(a, b)
    return a - b


def mul(a, b):
    a, b = _pair(a, b)
    return a * b
