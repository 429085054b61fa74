"""Exact arithmetic in the value group p^Q together with zero.

A value is stored through ``v = -log_p(value)``.  Multiplying values adds
their ``v``, so piecewise-monomial functions become piecewise-affine maps in
``v`` and every comparison reduces to exact rational arithmetic.  The value
0 is ``v = inf`` (``math.inf`` is used purely as a sentinel and never enters
arithmetic with a finite partner except through the guarded helpers here).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Union

from .errors import (
    DivisionByZero,
    KOutOfRange,
    NotPrime,
    SchemaError,
    ZeroInput,
    ZeroToNonpositivePower,
)

INF = math.inf

Rational = Union[int, Fraction]
VCoord = Union[Fraction, float]  # a Fraction, or INF


def as_rational(x) -> Fraction:
    """Parse ints, Fractions and strings like ``"-3/2"`` into a Fraction.

    Floats are rejected: nothing in this library is allowed to be inexact.
    """
    if isinstance(x, bool):
        raise SchemaError(f"not a rational: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(ch in s for ch in ".eE"):
            raise SchemaError(f"not an exact rational string: {x!r}")
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"not an exact rational string: {x!r}") from exc
    raise SchemaError(f"not a rational: {x!r}")


def as_vcoord(x) -> VCoord:
    """Like :func:`as_rational` but also accepts ``"inf"`` / ``INF``."""
    if isinstance(x, float) and x == INF:
        return INF
    if isinstance(x, str) and x.strip() == "inf":
        return INF
    return as_rational(x)


def fmt_rational(x: VCoord) -> str:
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Prime:
    """A residual characteristic; primality is checked on construction."""

    p: int

    def __post_init__(self):
        if isinstance(self.p, bool) or not isinstance(self.p, int) or not _is_prime(self.p):
            raise NotPrime(f"{self.p!r} is not a prime")

    def __int__(self) -> int:
        return self.p


def as_prime(p) -> int:
    """Return ``p`` as a plain int after checking it is prime."""
    if isinstance(p, Prime):
        return p.p
    return Prime(p).p


@total_ordering
@dataclass(frozen=True)
class LogValue:
    """An element of p^Q or 0, ordered by value (not by ``v``)."""

    v: VCoord

    def __post_init__(self):
        if self.v == -INF or (isinstance(self.v, float) and self.v != INF):
            raise SchemaError(f"bad log-value coordinate {self.v!r}")
        if not isinstance(self.v, float):
            object.__setattr__(self, "v", Fraction(self.v))

    # constructors
    @classmethod
    def zero(cls) -> LogValue:
        return cls(INF)

    @classmethod
    def one(cls) -> LogValue:
        return cls(Fraction(0))

    @classmethod
    def from_value_exp(cls, e: Rational) -> LogValue:
        """The value ``p**e``."""
        return cls(-Fraction(e))

    @classmethod
    def of(cls, x: Rational, p) -> LogValue:
        """The absolute value of the rational ``x``."""
        x = Fraction(x)
        return cls.zero() if x == 0 else cls(Fraction(padic_valuation(x, p)))

    @property
    def is_zero(self) -> bool:
        return self.v == INF

    # ordering is by value, hence reversed in v
    def __lt__(self, other: LogValue) -> bool:
        return self.v > other.v

    def __mul__(self, other: LogValue) -> LogValue:
        if self.is_zero or other.is_zero:
            return LogValue.zero()
        return LogValue(self.v + other.v)

    def __truediv__(self, other: LogValue) -> LogValue:
        if other.is_zero:
            raise DivisionByZero("division by the zero value")
        if self.is_zero:
            return LogValue.zero()
        return LogValue(self.v - other.v)

    def __pow__(self, q: Rational) -> LogValue:
        q = Fraction(q)
        if self.is_zero:
            if q <= 0:
                raise ZeroToNonpositivePower(f"0 ** {q}")
            return LogValue.zero()
        return LogValue(self.v * q)

    def to_json(self) -> dict:
        return {"v": fmt_rational(self.v)}

    @classmethod
    def from_json(cls, doc) -> LogValue:
        if isinstance(doc, dict):
            if set(doc) == {"v"}:
                return cls(as_vcoord(doc["v"]))
            if set(doc) == {"value_exp"}:
                return cls.from_value_exp(as_rational(doc["value_exp"]))
        raise SchemaError(f"bad scalar encoding: {doc!r}")

    def __repr__(self) -> str:
        return f"LogValue(v={fmt_rational(self.v)})"


def logval_arith(a: LogValue, b: LogValue, op: str, q: Rational | None = None):
    """Dispatcher over the value-group operations (``q`` only for ``pow``)."""
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a ** (1 if q is None else q)
    if op == "max":
        return max(a, b)
    if op == "min":
        return min(a, b)
    if op == "cmp":
        return (a > b) - (a < b)
    raise SchemaError(f"unknown operation {op!r}")


def _int_valuation(n: int, p: int) -> int:
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def padic_valuation(x: Rational, p) -> int:
    """v_p of a nonzero rational."""
    p = as_prime(p)
    x = Fraction(x)
    if x == 0:
        raise ZeroInput("the valuation of 0 is infinite")
    return _int_valuation(x.numerator, p) - _int_valuation(x.denominator, p)


def binomial_valuation(n: int, k: int, p) -> int:
    """v_p(C(n, k)) as the number of carries adding k and n-k in base p."""
    p = as_prime(p)
    if not 0 <= k <= n:
        raise KOutOfRange(f"k={k} outside [0, {n}]")
    a, b = k, n - k
    carry = carries = 0
    while a or b or carry:
        s = a % p + b % p + carry
        carry = 1 if s >= p else 0
        carries += carry
        a //= p
        b //= p
    return carries


def binomial_norm(n: int, k: int, p) -> LogValue:
    """|C(n, k)| as a LogValue (zero when k is outside [0, n])."""
    if not 0 <= k <= n:
        return LogValue.zero()
    return LogValue(Fraction(binomial_valuation(n, k, p)))


def is_power_of(n: int, p: int) -> bool:
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


def ilog(n: int, p: int) -> int:
    """Exponent e with p**e == n; callers guarantee n is a power of p."""
    e = 0
    while n > 1:
        n //= p
        e += 1
    return e
