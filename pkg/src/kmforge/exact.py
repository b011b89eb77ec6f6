"""Exact and rigorously enclosed arithmetic for codimension certificates.

``Log2(n)`` stands for the real number ``log2 n``.  When ``n`` is a power
of two it is an integer and everything is exact integer arithmetic;
otherwise comparisons use interval arithmetic (``mpmath.iv``) with
increasing precision until the enclosures separate.  No floating point
value is ever reported as a certified result.
"""
from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction
from numbers import Rational

import mpmath

__all__ = ["Log2", "f_iter", "F_iter", "le", "certified_le_f_iter", "ceil_f_iter_log2"]

_MAX_PREC = 1 << 14


@contextmanager
def _ivprec(prec: int):
    old = mpmath.iv.prec
    mpmath.iv.prec = prec
    try:
        yield
    finally:
        mpmath.iv.prec = old


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


class Log2:
    """The real number ``log2(n)`` for a positive integer ``n``."""

    __slots__ = ("n",)

    def __init__(self, n: int):
        n = int(n)
        if n < 1:
            raise ValueError("log2 needs a positive integer")
        self.n = n

    @property
    def is_integral(self) -> bool:
        return _is_pow2(self.n)

    @property
    def exact(self):
        """Integer value when ``n`` is a power of two, else ``None``."""
        return self.n.bit_length() - 1 if self.is_integral else None

    def interval(self, prec: int):
        with _ivprec(prec):
            return mpmath.iv.log(mpmath.iv.mpf(self.n)) / mpmath.iv.log(mpmath.iv.mpf(2))

    def __float__(self):
        return float(mpmath.log(self.n, 2))

    def __str__(self):
        e = self.exact
        return str(e) if e is not None else f"log2({self.n})"

    def __repr__(self):
        return f"Log2({self.n})"

    def __eq__(self, other):
        if isinstance(other, Log2):
            return self.n == other.n
        if isinstance(other, Rational):
            e = self.exact
            return e is not None and e == other
        return NotImplemented

    def __hash__(self):
        return hash(("log2", self.n))

    def __le__(self, other):
        return le(self, other)

    def __lt__(self, other):
        return le(self, other) and self != other

    def __ge__(self, other):
        return le(other, self)

    def __gt__(self, other):
        return le(other, self) and self != other


def f_iter(k: int, x):
    """``k``-fold iteration of ``x -> x (x + 1)``; exact for ints and Fractions."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if isinstance(x, Log2):
        if x.is_integral:
            x = x.exact
        else:
            raise TypeError("use certified_le_f_iter for non-integral log2 arguments")
    if x < 0:
        raise ValueError("x must be nonnegative")
    for _ in range(k):
        x = x * (x + 1)
    return x


def F_iter(k: int, x: int, n: int, max_bits: int | None = None) -> int:
    """``k``-fold iteration of ``x -> x * n ** (2 ** x)`` in exact integers.

    Raises ``OverflowError`` once a value would exceed ``max_bits`` bits.
    """
    if x < 1 or n < 1:
        raise ValueError("x and n must be positive")
    for _ in range(k):
        if n > 1:
            est = x.bit_length() + (n.bit_length()) * (1 << x if x < 64 else 1 << 64)
            if max_bits is not None and (x >= 64 or est > max_bits):
                raise OverflowError("value exceeds representable cap")
        x = x * n ** (2 ** x)
    return x


def _interval(value, prec):
    with _ivprec(prec):
        if isinstance(value, Log2):
            return value.interval(prec)
        if isinstance(value, Fraction):
            return mpmath.iv.mpf(value.numerator) / value.denominator
        return mpmath.iv.mpf(value)


def _exact(value):
    if isinstance(value, Log2):
        return value.exact
    if isinstance(value, Rational):
        return value
    raise TypeError(f"unsupported exact value {value!r}")


def _decide(lhs_fn, rhs_fn):
    prec = 64
    while prec <= _MAX_PREC:
        with _ivprec(prec):
            L, R = lhs_fn(prec), rhs_fn(prec)
            if L.b <= R.a:
                return True
            if L.a > R.b:
                return False
        prec *= 2
    raise ArithmeticError("could not separate enclosures; values may be equal")


def le(a, b) -> bool:
    """Exact ``a <= b`` for ints, Fractions and :class:`Log2` values."""
    ea, eb = _exact(a), _exact(b)
    if ea is not None and eb is not None:
        return ea <= eb
    if isinstance(a, Log2) and isinstance(b, Log2):
        return a.n <= b.n
    if isinstance(b, Log2) and isinstance(a, int):
        return (1 << a) <= b.n if a >= 0 else True
    if isinstance(a, Log2) and isinstance(b, int):
        return a.n <= (1 << b) if b >= 0 else False
    return _decide(lambda p: _interval(a, p), lambda p: _interval(b, p))


def _f_iter_interval(k, x, prec):
    with _ivprec(prec):
        v = _interval(x, prec)
        for _ in range(k):
            v = v * (v + 1)
        return v


def certified_le_f_iter(lhs, k: int, x) -> bool:
    """Exact ``lhs <= f^k(x)`` for int/Fraction/:class:`Log2` operands."""
    ex = _exact(x)
    if ex is not None:
        return le(lhs, f_iter(k, ex))
    if k == 0:
        return le(lhs, x)
    return _decide(lambda p: _interval(lhs, p), lambda p: _f_iter_interval(k, x, p))


def ceil_f_iter_log2(k: int, x) -> int:
    """Exact ``ceil(f^k(x))``."""
    ex = _exact(x)
    if ex is not None:
        v = f_iter(k, ex)
        return -((-v.numerator) // v.denominator) if isinstance(v, Fraction) else int(v)
    prec = 64
    while prec <= _MAX_PREC:
        with _ivprec(prec):
            v = _f_iter_interval(k, x, prec)
            lo, hi = int(mpmath.ceil(v.a)), int(mpmath.ceil(v.b))
            if lo == hi:
                return lo
        prec *= 2
    raise ArithmeticError("could not determine ceiling")
