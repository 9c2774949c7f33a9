"""Numeric kernel: Fibonacci table, golden mean, and the two scalar backends.

A scalar is either a :class:`fractions.Fraction` (exact backend) or a
``float`` (float backend).  Plain ``int`` values are promoted to the exact
backend.  Mixing a float with anything yields the float backend.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, float]

EXACT = "exact"
FLOAT = "float"
DEFAULT_EPS = 1e-12

# 2**-ENCLOSURE_BITS < 1e-30
ENCLOSURE_BITS = 110


class FibReachError(Exception):
    """Base class for library errors."""


class DomainError(FibReachError, ValueError):
    """An argument lies outside the domain of an operation."""


class ResourceError(FibReachError):
    """A requested enumeration exceeds the hard size cap."""


class _FibTable:
    """Grow-only cache of Fibonacci numbers with f_0 = f_1 = 1."""

    def __init__(self):
        self._values = [1, 1]
        self._lock = threading.Lock()

    def __call__(self, k: int) -> int:
        if k < -1:
            raise DomainError(f"Fibonacci index must be >= -1, got {k}")
        if k == -1:
            return 0
        values = self._values
        if k >= len(values):
            with self._lock:
                values = self._values
                if k >= len(values):
                    grown = list(values)
                    while len(grown) <= k:
                        grown.append(grown[-1] + grown[-2])
                    # rebinding keeps readers on a consistent list
                    self._values = grown
                    values = grown
        return values[k]


fib = _FibTable()
fib.__doc__ = "Return f_k (f_{-1} = 0, f_0 = f_1 = 1) as an exact integer."


@dataclass(frozen=True)
class Enclosure:
    """Closed rational interval [lo, hi] certified to contain an irrational."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty enclosure")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.mid)

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi


def sqrt_enclosure(n: int, bits: int = ENCLOSURE_BITS) -> Enclosure:
    """Enclose sqrt(n) for a non-negative integer n with width <= 2**-bits."""
    if n < 0:
        raise DomainError("square root of a negative number")
    scaled = n << (2 * bits)
    root = math.isqrt(scaled)
    denom = 1 << bits
    if root * root == scaled:
        value = Fraction(root, denom)
        return Enclosure(value, value)
    return Enclosure(Fraction(root, denom), Fraction(root + 1, denom))


GOLDEN_MEAN = (1 + math.sqrt(5)) / 2


def golden_mean(backend: str = FLOAT) -> float | Enclosure:
    """The golden mean, the positive root of q**2 = q + 1.

    The float backend returns the nearest double.  The exact backend returns
    an :class:`Enclosure` of width below 1e-30, since the value is irrational.
    """
    if backend == FLOAT:
        return GOLDEN_MEAN
    if backend != EXACT:
        raise ValueError(f"unknown backend {backend!r}")
    root5 = sqrt_enclosure(5)
    return Enclosure((1 + root5.lo) / 2, (1 + root5.hi) / 2)


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def backend_of(*values) -> str:
    """Float if any argument is a float, exact otherwise."""
    for v in values:
        if isinstance(v, float):
            return FLOAT
        if not is_exact(v):
            raise TypeError(f"unsupported scalar type {type(v).__name__}")
    return EXACT


def coerce(x, backend: str) -> Scalar:
    if backend == FLOAT:
        return float(x)
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(x)


def parse_scalar(text: str, backend: str = EXACT) -> Scalar:
    """Parse "p/q", an integer, or a decimal string such as "2.5".

    Decimal strings parse to exact rationals ("2.5" -> 5/2); the float
    backend converts the exact value to the nearest double.
    """
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse {text!r} as a rational number") from exc
    return coerce(value, backend)


def format_scalar(x) -> str:
    """Render exact values as "p/q" (or "p") and floats with 17 significant digits."""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(Fraction(x))


def exceeds_golden_mean(q) -> bool:
    """Decide q > golden mean exactly.

    Every double is a rational, and the golden mean is irrational, so the
    sign of q**2 - q - 1 (with q > 1) settles the question without rounding.
    """
    if isinstance(q, float):
        if not math.isfinite(q):
            return False
        q = Fraction(q)
    q = Fraction(q)
    return q > 1 and q * q - q - 1 > 0


def require_convergent(q) -> None:
    if not exceeds_golden_mean(q):
        raise DomainError(
            f"q = {format_scalar(q)} must exceed the golden mean "
            f"{GOLDEN_MEAN:.17g} for the weight series to converge"
        )
