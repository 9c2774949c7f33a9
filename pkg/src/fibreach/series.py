"""Tail sums S(q, j), thresholds Q(j), and regime classification of q.

S(q, j) is the sum of f_{j+k} / q**k over k >= 0, the largest element of the
offset reachable set.  Q(j) is the greatest root of S(q, j+1) = q f_j, which
reduces to the quadratic f_j q**2 - f_{j+2} q - 2 f_j = 0.

The thresholds are *not* monotone: even-indexed values increase and
odd-indexed values decrease, both towards 1 + sqrt(5).  Classification
therefore works from the computed values and records anomalies instead of
assuming an ordering.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .scalar import (
    DEFAULT_EPS,
    EXACT,
    FLOAT,
    GOLDEN_MEAN,
    DomainError,
    Enclosure,
    backend_of,
    coerce,
    exceeds_golden_mean,
    fib,
    require_convergent,
    sqrt_enclosure,
)

DEFAULT_JMAX = 64

#: Limit of Q(j) as j grows, from f_{j+2}/f_j -> golden_mean**2.
THRESHOLD_LIMIT = 1 + math.sqrt(5)

#: The constant (phi**2 + sqrt(phi**2 + 1)) / 2 sometimes quoted as the
#: limit of Q(j).  It disagrees with the closed form of Q(j) and is kept only
#: for discrepancy reports; no decision is gated on it.
paper_q_limit = 0.5 * (GOLDEN_MEAN**2 + math.sqrt(GOLDEN_MEAN**2 + 1))


def tail_sum(q, j: int):
    """S(q, j) = (f_j q**2 + f_{j-1} q) / (q**2 - q - 1); exact for rational q."""
    require_convergent(q)
    if j < 0:
        raise DomainError(f"offset j must be >= 0, got {j}")
    q = coerce(q, backend_of(q))
    return (fib(j) * q * q + fib(j - 1) * q) / (q * q - q - 1)


def tail_sum_truncated(q, j: int, n_terms: int):
    """Partial sum of the first n_terms terms f_{j+k} / q**k."""
    require_convergent(q)
    if j < 0:
        raise DomainError(f"offset j must be >= 0, got {j}")
    if n_terms < 1:
        raise DomainError("n_terms must be >= 1")
    q = coerce(q, backend_of(q))
    total = 0 * q
    scale = 1 + 0 * q
    for k in range(n_terms):
        total += fib(j + k) * scale
        scale /= q
    return total


def tail_sum_recursion_check(q, j: int):
    """Defect S(q, j) - q (S(q, j-1) - f_{j-1}); identically zero in exact arithmetic."""
    if j < 1:
        raise DomainError("recursion check needs j >= 1")
    q = coerce(q, backend_of(q))
    return tail_sum(q, j) - q * (tail_sum(q, j - 1) - fib(j - 1))


def _threshold_coefficients(j: int) -> tuple[int, int]:
    if j < 0:
        raise DomainError(f"threshold index must be >= 0, got {j}")
    return fib(j), fib(j + 2)


def threshold_q(j: int, backend: str = FLOAT) -> float | Enclosure:
    """Q(j) = (f_{j+2} + sqrt(f_{j+2}**2 + 8 f_j**2)) / (2 f_j).

    Returns a float, or with ``backend="exact"`` a rational enclosure of
    width at most 1e-30.
    """
    a, b = _threshold_coefficients(j)
    root = sqrt_enclosure(b * b + 8 * a * a)
    enc = Enclosure((b + root.lo) / (2 * a), (b + root.hi) / (2 * a))
    if backend == EXACT:
        return enc
    if backend != FLOAT:
        raise ValueError(f"unknown backend {backend!r}")
    return float(enc.mid)


def at_most_threshold(q, j: int, eps: float = DEFAULT_EPS) -> bool:
    """Whether q <= Q(j).

    Rational q is decided exactly by the sign of f_j q**2 - f_{j+2} q - 2 f_j
    (the quadratic has one positive root).  Float q is compared against the
    rounded threshold with absolute tolerance eps, leaning towards inclusion.
    """
    if q <= 0:
        return True
    if isinstance(q, float):
        return q <= threshold_q(j) + eps
    a, b = _threshold_coefficients(j)
    return a * q * q - b * q - 2 * a <= 0


def lemma_applies(q, j: int, j_max: int = DEFAULT_JMAX, eps: float = DEFAULT_EPS) -> bool:
    """Whether q <= Q(h) for every h in [j, max(j, j_max) + 1].

    This is the hypothesis the interval-filling argument actually needs at
    every step of the greedy recursion.  Because the even subsequence of Q
    increases to its limit, checking a finite window is sufficient once it
    includes the first even index >= j.
    """
    return all(at_most_threshold(q, h, eps) for h in range(j, max(j, j_max) + 2))


class ThresholdSupremum(NamedTuple):
    sup: float
    argmax: int
    limit_estimate: float


def threshold_supremum(j_max: int = DEFAULT_JMAX) -> ThresholdSupremum:
    """Largest Q(j) over 0 <= j <= j_max, its index, and Q(j_max)."""
    if j_max < 0:
        raise DomainError("j_max must be >= 0")
    values = [threshold_q(j) for j in range(j_max + 1)]
    argmax = max(range(len(values)), key=values.__getitem__)
    return ThresholdSupremum(values[argmax], argmax, values[-1])


class Regime(str, enum.Enum):
    INVALID = "INVALID"
    CONNECTED = "CONNECTED"
    CANDIDATE_DECOMPOSITION = "CANDIDATE_DECOMPOSITION"
    DISCONNECTED = "DISCONNECTED"


@dataclass(frozen=True)
class RegimeReport:
    q: object
    regime: Regime
    j: int | None = None
    thresholds_used: tuple[tuple[int, float], ...] = ()
    notes: tuple[str, ...] = field(default=())


def classify_regime(q, j_max: int = DEFAULT_JMAX, eps: float = DEFAULT_EPS) -> RegimeReport:
    """Place q in one of the four regimes, using the minimal j with q <= Q(j)."""
    if j_max < 1:
        raise DomainError("j_max must be >= 1")
    if not exceeds_golden_mean(q):
        return RegimeReport(q, Regime.INVALID, notes=("q does not exceed the golden mean",))

    notes = []
    for j in range(j_max + 1):
        if at_most_threshold(q, j, eps):
            break
    else:
        sup = threshold_supremum(j_max)
        if float(q) < paper_q_limit:
            notes.append("below the quoted disconnection constant yet above every Q(j)")
        return RegimeReport(
            q, Regime.DISCONNECTED,
            thresholds_used=((sup.argmax, sup.sup),),
            notes=tuple(notes),
        )

    used = tuple((h, threshold_q(h)) for h in range(j + 1))
    for h in range(1, j + 1):
        if used[h][1] <= used[h - 1][1]:
            notes.append(f"paper regime interval (Q({h - 1}),Q({h})] empty for j={h}")
    if not lemma_applies(q, j, j_max, eps):
        bad = [h for h in range(j, j_max + 2) if not at_most_threshold(q, h, eps)]
        notes.append(
            f"q > Q(h) for h={bad[0]} >= j; paper theorem inapplicable at this q"
        )
    if float(q) >= paper_q_limit:
        notes.append(
            f"quoted limit {paper_q_limit:.10f} predicts total disconnection here; "
            "inconsistent with the computed thresholds"
        )
    regime = Regime.CONNECTED if j == 0 else Regime.CANDIDATE_DECOMPOSITION
    return RegimeReport(q, regime, j, used, tuple(notes))
