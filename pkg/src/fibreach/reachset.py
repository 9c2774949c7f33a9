"""Interval sets, the 2**j decomposition, the brute-force oracle, and membership.

Every point of the reachable set is P(u) + t / q**N where P(u) is the value of
a length-N prefix and t lies in the offset set of depth N, which sits inside
[0, S(q, N)].  Enumerating the 2**N prefixes therefore gives a nested family
of outer approximations.

For rational q = a/b all prefix values share the denominator a**(N-1) (times
the denominator of the candidate width), so the exact backend enumerates
integers rather than fractions.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple

import numpy as np

from .expansion import DEFAULT_DEPTH, DigitWord, Status, greedy_expand
from .scalar import (
    DEFAULT_EPS,
    EXACT,
    FLOAT,
    DomainError,
    ResourceError,
    backend_of,
    coerce,
    fib,
    format_scalar,
    require_convergent,
)
from .series import DEFAULT_JMAX, Regime, classify_regime, lemma_applies, tail_sum

MAX_DEPTH = 24
MAX_LEX_DEPTH = 16
_INT64_SAFE = 2**62


class Interval(NamedTuple):
    lo: object
    hi: object


def _as_array(values, exact: bool) -> np.ndarray:
    if exact:
        arr = np.empty(len(values), dtype=object)
        arr[:] = list(values)
        return arr
    return np.asarray(values, dtype=float)


@dataclass(frozen=True, eq=False)
class IntervalSet:
    """Sorted, pairwise-disjoint closed intervals with a positive gap between neighbours.

    ``lo`` and ``hi`` are float arrays (float backend) or object arrays of
    Fractions (exact backend).  Use :meth:`from_intervals` to build one from
    arbitrary intervals; touching or overlapping intervals merge.
    """

    lo: np.ndarray
    hi: np.ndarray

    @classmethod
    def from_intervals(cls, intervals, eps: float = 0.0) -> "IntervalSet":
        items = sorted((Interval(*iv) for iv in intervals), key=lambda iv: iv.lo)
        if any(iv.lo > iv.hi for iv in items):
            raise ValueError("interval with lo > hi")
        merged: list[list] = []
        for lo, hi in items:
            if merged and lo - merged[-1][1] <= eps:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        exact = all(not isinstance(v, float) for pair in merged for v in pair)
        return cls(_as_array([m[0] for m in merged], exact),
                   _as_array([m[1] for m in merged], exact))

    @property
    def exact(self) -> bool:
        return self.lo.dtype == object

    def __len__(self):
        return len(self.lo)

    def __iter__(self) -> Iterator[Interval]:
        return (Interval(lo, hi) for lo, hi in zip(self.lo.tolist(), self.hi.tolist()))

    def __getitem__(self, i) -> Interval:
        return Interval(self.lo[i].item() if not self.exact else self.lo[i],
                        self.hi[i].item() if not self.exact else self.hi[i])

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return list(self) == list(other)

    def __repr__(self):
        body = ", ".join(f"[{format_scalar(a)}, {format_scalar(b)}]" for a, b in list(self)[:4])
        more = ", ..." if len(self) > 4 else ""
        return f"IntervalSet({body}{more}; {len(self)} components)"

    @property
    def count(self) -> int:
        return len(self)

    @property
    def measure(self):
        return sum((self.hi - self.lo).tolist()) if len(self) else 0

    def gaps(self) -> list[Interval]:
        """Open gaps between consecutive components."""
        return [Interval(a, b) for a, b in zip(self.hi[:-1].tolist(), self.lo[1:].tolist())]

    def largest_gap(self):
        if len(self) < 2:
            return 0 * self[0].hi if len(self) else 0
        return max((self.lo[1:] - self.hi[:-1]).tolist())

    def _index(self, x) -> int:
        """Index of the last component with lo <= x, or -1."""
        lo, hi, i = 0, len(self), 0
        while lo < hi:
            mid = (lo + hi) // 2
            if self.lo[mid] <= x:
                lo = mid + 1
            else:
                hi = mid
        return lo - 1

    def contains(self, x, eps: float = 0.0) -> bool:
        if not eps:
            i = self._index(x)
            return i >= 0 and x <= self.hi[i]
        i = self._index(x + eps)
        return i >= 0 and x <= self.hi[i] + eps

    def gap_around(self, x) -> Interval | None:
        """The open gap (or unbounded complement piece) holding x, if x is outside."""
        i = self._index(x)
        if i >= 0 and x <= self.hi[i]:
            return None
        left = self[i].hi if i >= 0 else -math.inf
        right = self[i + 1].lo if i + 1 < len(self) else math.inf
        return Interval(left, right)

    def issubset(self, other: "IntervalSet", eps: float = 0.0) -> bool:
        for lo, hi in self:
            if not eps:
                i = other._index(lo)
                if i < 0 or hi > other.hi[i]:
                    return False
            else:
                i = other._index(lo + eps)
                if i < 0 or hi > other.hi[i] + eps:
                    return False
        return True

    def hausdorff(self, other: "IntervalSet") -> float:
        """Symmetric Hausdorff distance, computed in floating point."""
        if not len(self) or not len(other):
            raise ValueError("Hausdorff distance of an empty set")
        return max(_directed_hausdorff(self, other), _directed_hausdorff(other, self))

    def to_strings(self) -> list[list[str]]:
        return [[format_scalar(a), format_scalar(b)] for a, b in self]

    def to_float(self) -> "IntervalSet":
        return IntervalSet(self.lo.astype(float), self.hi.astype(float))


def _distance_to(points: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(lo, points, side="right") - 1
    left = np.where(idx >= 0, points - hi[np.clip(idx, 0, None)], np.inf)
    nxt = idx + 1
    right = np.where(nxt < len(lo), lo[np.clip(nxt, None, len(lo) - 1)] - points, np.inf)
    dist = np.minimum(np.maximum(left, 0.0), np.maximum(right, 0.0))
    inside = (idx >= 0) & (points <= hi[np.clip(idx, 0, None)])
    return np.where(inside, 0.0, dist)


def _directed_hausdorff(a: IntervalSet, b: IntervalSet) -> float:
    alo, ahi = a.lo.astype(float), a.hi.astype(float)
    blo, bhi = b.lo.astype(float), b.hi.astype(float)
    # distance to b peaks at a's endpoints or at midpoints of b's gaps
    mids = (bhi[:-1] + blo[1:]) / 2
    mids = mids[_distance_to(mids, alo, ahi) == 0.0]
    points = np.concatenate([alo, ahi, mids])
    return float(_distance_to(points, blo, bhi).max())


@dataclass(frozen=True)
class _PrefixGrid:
    """Values of all 2**n prefixes, in lexicographic order of the prefix.

    Exact grids hold integers; the true value is ``values / denom``.
    """

    q: object
    n: int
    values: np.ndarray
    width: object
    denom: int | None

    @property
    def exact(self) -> bool:
        return self.denom is not None

    def scalar(self, v):
        return Fraction(int(v), self.denom) if self.exact else float(v)

    def scale(self, x):
        return x * self.denom if self.exact else x

    def merge(self, eps: float = DEFAULT_EPS) -> IntervalSet:
        s = np.sort(self.values)
        tol = self.width if self.exact else self.width + eps
        breaks = np.flatnonzero(np.diff(s) > tol)
        starts = np.concatenate([[0], breaks + 1])
        ends = np.concatenate([breaks, [len(s) - 1]])
        lo, hi = s[starts], s[ends] + self.width
        if self.exact:
            return IntervalSet(_as_array([self.scalar(v) for v in lo], True),
                               _as_array([self.scalar(v) for v in hi], True))
        return IntervalSet(lo.astype(float), hi.astype(float))


def _prefix_grid(q, n: int) -> _PrefixGrid:
    if n > MAX_DEPTH:
        raise ResourceError(f"depth {n} exceeds the enumeration cap {MAX_DEPTH}")
    if n < 0:
        raise DomainError("depth must be >= 0")
    backend = backend_of(q)
    q = coerce(q, backend)
    width = tail_sum(q, n) / q**n
    if backend == FLOAT:
        weights = [fib(k) / q**k for k in range(n)]
        values = np.zeros(1)
        for w in weights:
            values = (values[:, None] + np.array([0.0, w])).ravel()
        return _PrefixGrid(q, n, values, width, None)

    a, b = q.numerator, q.denominator
    base = a ** max(n - 1, 0)
    denom = math.lcm(base, width.denominator)
    weights = [fib(k) * b**k * a ** (n - 1 - k) * (denom // base) for k in range(n)]
    width_int = width.numerator * (denom // width.denominator)
    dtype = np.int64 if sum(weights) + width_int < _INT64_SAFE else object
    values = np.zeros(1, dtype=dtype)
    for w in weights:
        values = (values[:, None] + np.array([0, w], dtype=dtype)).ravel()
    return _PrefixGrid(q, n, values, width_int, denom)


def _word(index: int, n: int) -> str:
    return format(index, f"0{n}b") if n else ""


@dataclass(frozen=True)
class Decomposition:
    """The 2**j candidate intervals [P(u), P(u) + S(q, j) / q**j].

    The candidate width is S(q, j) / q**j, i.e. the offset set at depth j
    rescaled by q**-j.  Displaying width S(q, j) instead would put the
    largest point above S(q, 0), the maximum of the whole set.
    """

    q: object
    j: int
    width: object
    merged: IntervalSet
    disjoint: bool
    separation_margins: tuple
    _grid: _PrefixGrid = field(repr=False)

    def candidates(self) -> Iterator[tuple[DigitWord, Interval]]:
        """Yield (prefix, interval) in lexicographic order of the prefix."""
        g = self._grid
        for i, v in enumerate(g.values):
            start = g.scalar(v)
            yield DigitWord.from_string(_word(i, self.j)), Interval(start, start + self.width)


def candidate_intervals(q, j: int, eps: float = DEFAULT_EPS) -> Decomposition:
    """Enumerate the level-j candidates, merge them and test disjointness."""
    require_convergent(q)
    grid = _prefix_grid(q, j)
    merged = grid.merge(eps)
    width = tail_sum(grid.q, j) / grid.q**j
    margins = tuple(separation_margin(grid.q, h) for h in range(j))
    return Decomposition(grid.q, j, width, merged, len(merged) == 2**j, margins, grid)


def separation_margin(q, h: int):
    """f_h / q**h - S(q, h+1) / q**(h+1); positive exactly when q > Q(h)."""
    require_convergent(q)
    q = coerce(q, backend_of(q))
    return fib(h) / q**h - tail_sum(q, h + 1) / q ** (h + 1)


def oracle_union(q, depth: int, eps: float = DEFAULT_EPS) -> IntervalSet:
    """Outer approximation of the reachable set from all 2**depth prefixes."""
    require_convergent(q)
    if depth < 1:
        raise DomainError("oracle depth must be >= 1")
    return _prefix_grid(q, depth).merge(eps)


class Verdict(str, enum.Enum):
    IN = "IN"
    OUT = "OUT"
    UNKNOWN = "UNKNOWN"


class MembershipResult(NamedTuple):
    verdict: Verdict
    certificate: dict


def _lemma_certificate(x, q, j_start: int, depth: int, j_max: int, eps: float):
    for j in range(j_start, min(depth, MAX_LEX_DEPTH) + 1):
        if not lemma_applies(q, j, j_max, eps):
            continue
        grid = _prefix_grid(q, j)
        order = np.argsort(grid.values, kind="stable")
        s = grid.values[order]
        key = min(math.floor(grid.scale(x)), _INT64_SAFE) if grid.exact else x + eps
        i = int(np.searchsorted(s, key, side="right")) - 1
        if i < 0:
            return None
        start = grid.scalar(s[i])
        width = tail_sum(q, j) / q**j
        if x <= start + width + (0 if grid.exact else eps):
            return {
                "method": "interval",
                "j": j,
                "prefix": _word(int(order[i]), j),
                "scaled": q**j * (x - start),
                "interval": [start, start + width],
            }
        return None
    return None


def membership(x, q, depth: int = 16, j_max: int = DEFAULT_JMAX,
               eps: float = DEFAULT_EPS) -> MembershipResult:
    """Decide whether x is reachable, with a certificate for IN and OUT.

    IN comes from a full-interval certificate (the level-j candidate holding
    x is filled because q <= Q(h) for all h >= j) or from a greedy expansion
    that terminates or leaves a residual below eps.  OUT comes from the
    depth-limited outer approximation.  Anything else is UNKNOWN.
    """
    require_convergent(q)
    backend = backend_of(x, q)
    x, q = coerce(x, backend), coerce(q, backend)
    if x < 0:
        return MembershipResult(Verdict.OUT, {"method": "negative"})

    report = classify_regime(q, j_max, eps)
    if report.regime in (Regime.CONNECTED, Regime.CANDIDATE_DECOMPOSITION):
        cert = _lemma_certificate(x, q, report.j, depth, j_max, eps)
        if cert is not None:
            return MembershipResult(Verdict.IN, cert)

    trace = greedy_expand(x, q, 0, DEFAULT_DEPTH, eps)
    if trace.status == Status.CONVERGED or (
        trace.status == Status.DEPTH_LIMIT and trace.residual_bound < eps
    ):
        return MembershipResult(Verdict.IN, {
            "method": "greedy",
            "digits": str(trace.digits),
            "status": trace.status.value,
            "residual_bound": trace.residual_bound,
        })

    outer = oracle_union(q, depth, eps)
    clearance = 0 if backend == EXACT else eps
    if not outer.contains(x, clearance):
        gap = outer.gap_around(x)
        return MembershipResult(Verdict.OUT, {"method": "oracle", "depth": depth,
                                              "gap": list(gap)})
    return MembershipResult(Verdict.UNKNOWN, {"method": "oracle", "depth": depth})


class LexCheck(NamedTuple):
    holds: bool
    h: int | None = None
    u: str | None = None
    v: str | None = None
    value_u: object = None
    value_v: object = None


def lex_monotone_check(q, depth: int, eps: float = DEFAULT_EPS) -> LexCheck:
    """Check that every completion of v exceeds every completion of u when u < v.

    For words of length ``depth`` this means value(v) > value(u) + S(q, N)/q**N
    for all lexicographic pairs u < v.  Pairs are grouped by the first index h
    where they differ: within each group it suffices to compare the largest
    u-value with the smallest v-value.  The first failing group (smallest h,
    then smallest common prefix) supplies the counterexample.
    """
    require_convergent(q)
    if not 1 <= depth <= MAX_LEX_DEPTH:
        raise ResourceError(f"depth must be in [1, {MAX_LEX_DEPTH}]")
    grid = _prefix_grid(q, depth)
    tol = 0 if grid.exact else eps
    for h in range(depth):
        block = grid.values.reshape(2**h, 2, 2 ** (depth - h - 1))
        u_side, v_side = block[:, 0, :], block[:, 1, :]
        u_arg = np.argmax(u_side, axis=1)
        v_arg = np.argmin(v_side, axis=1)
        rows = np.arange(2**h)
        u_max, v_min = u_side[rows, u_arg], v_side[rows, v_arg]
        bad = np.flatnonzero(~(v_min - u_max > grid.width + tol))
        if len(bad):
            p = int(bad[0])
            span = 2 ** (depth - h)
            ui = p * span + int(u_arg[p])
            vi = p * span + span // 2 + int(v_arg[p])
            return LexCheck(False, h, _word(ui, depth), _word(vi, depth),
                            grid.scalar(grid.values[ui]), grid.scalar(grid.values[vi]))
    return LexCheck(True)


@dataclass(frozen=True)
class GapReport:
    count: int
    gaps: list
    measure: object
    intervals: IntervalSet = field(repr=False)

    def hausdorff_to(self, other: IntervalSet) -> float:
        return self.intervals.hausdorff(other)


def gap_report(intervals: IntervalSet) -> GapReport:
    return GapReport(len(intervals), intervals.gaps(), intervals.measure, intervals)
