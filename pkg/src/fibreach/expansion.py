"""Greedy digit expansion, word evaluation, and simulation of the control system.

The control system is

    x_0 = u_0,  x_1 = u_1 + u_0 / q,  x_{n+2} = u_{n+2} + x_{n+1} / q + x_n / q**2

with binary controls.  Its trajectory satisfies x_n = sum_k f_k q**-k u_{n-k},
so the reachable limits are the values of binary words under Fibonacci
weights.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .scalar import (
    DEFAULT_EPS,
    FLOAT,
    DomainError,
    backend_of,
    coerce,
    fib,
    require_convergent,
)
from .series import tail_sum

DEFAULT_DEPTH = 64


@dataclass(frozen=True, order=True)
class DigitWord:
    """A finite binary word; digit k carries weight f_{offset+k} / q**k."""

    digits: tuple[int, ...]
    offset: int = 0

    def __post_init__(self):
        if any(d not in (0, 1) for d in self.digits):
            raise ValueError("digits must be 0 or 1")
        if self.offset < 0:
            raise ValueError("offset must be >= 0")

    @classmethod
    def from_string(cls, text: str, offset: int = 0) -> "DigitWord":
        if set(text) - {"0", "1"}:
            raise ValueError(f"not a binary word: {text!r}")
        return cls(tuple(int(c) for c in text), offset)

    def __str__(self):
        return "".join(map(str, self.digits))

    def __len__(self):
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def reversed(self) -> "DigitWord":
        return DigitWord(self.digits[::-1], self.offset)


def as_word(u, offset: int = 0) -> DigitWord:
    if isinstance(u, DigitWord):
        return u
    if isinstance(u, str):
        return DigitWord.from_string(u, offset)
    return DigitWord(tuple(int(d) for d in u), offset)


class Status(str, enum.Enum):
    CONVERGED = "CONVERGED"
    DEPTH_LIMIT = "DEPTH_LIMIT"
    OVERFLOW = "OVERFLOW"


@dataclass(frozen=True)
class ExpansionTrace:
    """Remainders r_0..r_H and digits u_0..u_{H-1} of a greedy run.

    ``residual_bound`` is S(q, j+H) / q**H for a depth-limited run (an upper
    bound on the unexpanded mass), zero when the run converged, and the same
    bound for an overflowed run, where it is exceeded by r_H / q**H.
    """

    x: object
    q: object
    offset: int
    remainders: tuple
    digits: DigitWord
    residual_bound: object
    status: Status

    @property
    def depth(self) -> int:
        return len(self.digits)


def greedy_expand(x, q, j: int = 0, max_depth: int = DEFAULT_DEPTH,
                  eps: float = DEFAULT_EPS) -> ExpansionTrace:
    """Expand x in the offset-j Fibonacci-weighted system, greedily.

    Digit u_h is 1 exactly when f_{j+h} <= r_h <= S(q, j+h), and the
    remainder updates as r_{h+1} = q (r_h - u_h f_{j+h}).  The run stops
    when the remainder hits zero, when max_depth digits were produced, or
    when r_h > S(q, j+h), which no continuation can represent.

    In the float backend the comparisons are widened by eps * max(1, S) and
    remainders within that tolerance of zero are snapped to zero.  Float remainders lose roughly
    log10(q) digits per step, so deep float traces are only indicative.
    """
    require_convergent(q)
    if x < 0:
        raise DomainError("x must be >= 0")
    if j < 0 or max_depth < 1:
        raise DomainError("need j >= 0 and max_depth >= 1")
    backend = backend_of(x, q)
    x, q = coerce(x, backend), coerce(q, backend)

    # exact: S(q, j+h+1) = q (S(q, j+h) - f_{j+h}); float: closed form, since
    # the recursion amplifies rounding by q per step
    bound = tail_sum(q, j)
    r = x
    remainders = [r]
    digits = []
    status = Status.DEPTH_LIMIT
    for h in range(max_depth + 1):
        tol = eps * max(1.0, bound) if backend == FLOAT else 0
        if backend == FLOAT and abs(r) <= tol:
            r = 0.0
            remainders[-1] = r
        if r == 0:
            status = Status.CONVERGED
            break
        if r > bound + tol:
            status = Status.OVERFLOW
            break
        if h == max_depth:
            break
        weight = fib(j + h)
        u = 1 if r >= weight - tol else 0
        r = q * (r - u * weight)
        digits.append(u)
        remainders.append(r)
        bound = tail_sum(q, j + h + 1) if backend == FLOAT else q * (bound - weight)

    H = len(digits)
    if status == Status.CONVERGED:
        residual = 0 * q
    else:
        residual = tail_sum(q, j + H) / q**H
    return ExpansionTrace(x, q, j, tuple(remainders), DigitWord(tuple(digits), j),
                          residual, status)


def evaluate_word(u, q, offset: int = 0):
    """Sum of f_{j+k} q**-k u_k over the word.

    j is the word's own offset for a :class:`DigitWord`, else ``offset``.
    """
    require_convergent(q)
    word = as_word(u, offset)
    q = coerce(q, backend_of(q))
    total = 0 * q
    scale = 1 + 0 * q
    for k, d in enumerate(word.digits):
        if d:
            total += fib(word.offset + k) * scale
        scale /= q
    return total


def simulate_system(controls, q) -> list:
    """Run the recurrence on the controls and return x_0, ..., x_n."""
    word = as_word(controls)
    if not word.digits:
        raise DomainError("controls must be non-empty")
    if q == 0:
        raise DomainError("q must be non-zero")
    q = coerce(q, backend_of(q))
    u = word.digits
    xs = [u[0] + 0 * q]
    if len(u) > 1:
        xs.append(u[1] + u[0] / q)
    for n in range(2, len(u)):
        xs.append(u[n] + xs[-1] / q + xs[-2] / (q * q))
    return xs


def reconstruct_check(trace: ExpansionTrace):
    """Largest |x - partial sum up to h - r_{h+1} / q**(h+1)| over the trace.

    Each identity is multiplied through by q**(h+1), so the partial sum is
    accumulated in Horner form.  Exact traces are checked on integers
    (q = a/b, everything cleared of denominators) to skip gcd work.
    """
    if isinstance(trace.q, float):
        return _reconstruct_float(trace)
    q, x, j = trace.q, trace.x, trace.offset
    a, b = q.numerator, q.denominator
    xn, xd = x.numerator, x.denominator
    worst = abs(x - trace.remainders[0])
    horner = 0  # b**(h+1) * sum_{k<=h} f_{j+k} u_k q**(h+1-k)
    apow, bpow = 1, 1  # a**h, b**h
    for h, u in enumerate(trace.digits.digits):
        horner = a * (horner + u * fib(j + h) * bpow)
        apow *= a
        bpow *= b
        r = trace.remainders[h + 1]
        rn, rd = r.numerator, r.denominator
        gap = abs(rd * (xn * apow - xd * horner) - xd * bpow * rn)
        if gap:
            worst = max(worst, Fraction(gap, rd * xd * apow))
    return worst


def _reconstruct_float(trace: ExpansionTrace) -> float:
    q, x, j = trace.q, trace.x, trace.offset
    worst = abs(x - trace.remainders[0])
    scaled_x, horner, qpow = x, 0.0, 1.0
    for h, u in enumerate(trace.digits.digits):
        scaled_x *= q
        qpow *= q
        horner = q * (horner + u * fib(j + h))
        worst = max(worst, abs(scaled_x - horner - trace.remainders[h + 1]) / qpow)
    return worst


def words(n: int) -> Iterable[str]:
    """All binary words of length n in lexicographic order."""
    for i in range(2**n):
        yield format(i, f"0{n}b") if n else ""

