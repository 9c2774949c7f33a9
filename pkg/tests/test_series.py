import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fibreach import (
    DomainError,
    Regime,
    classify_regime,
    fib,
    golden_mean,
    paper_q_limit,
    tail_sum,
    tail_sum_recursion_check,
    tail_sum_truncated,
    threshold_q,
    threshold_supremum,
)
from fibreach.series import THRESHOLD_LIMIT, at_most_threshold, lemma_applies

from conftest import brute_tail, fib_loop


def quadratic_root(j):
    """Greatest root of f_j q^2 - f_{j+2} q - 2 f_j via numpy."""
    a, b = fib_loop(j), fib_loop(j + 2)
    return max(np.roots([a, -b, -2 * a]).real)


# --- tail sums -------------------------------------------------------------

def test_tail_sum_examples():
    assert tail_sum(2, 0) == 4
    assert tail_sum(3, 1) == Fraction(12, 5)
    assert tail_sum(2, 1) == 6
    assert abs(brute_tail(2.0, 0, 200) - 4) < 1e-12
    assert abs(brute_tail(3.0, 1, 200) - 2.4) < 1e-12


def test_tail_sum_below_golden_mean_is_rejected():
    with pytest.raises(DomainError):
        tail_sum(1.5, 0)
    with pytest.raises(DomainError):
        tail_sum(Fraction(8, 5), 3)


def test_tail_sum_float_backend():
    assert isinstance(tail_sum(2.5, 3), float)
    assert tail_sum(2.5, 3) == pytest.approx(brute_tail(2.5, 3, 300), rel=1e-13)


def test_truncated_examples():
    assert tail_sum_truncated(2, 0, 1) == 1
    assert tail_sum_truncated(2, 0, 3) == 2
    # the gap is S(2, 60) / 2^60 ~ 1.1e-5: terms decay like (phi/2)^k
    gap = tail_sum(2, 0) - tail_sum_truncated(2, 0, 60)
    assert gap == Fraction(4 * fib(60) + 2 * fib(59), 2**60)
    assert 1.13e-5 < gap < 1.14e-5


@pytest.mark.parametrize("q", [Fraction(17, 10), 2, Fraction(5, 2), 4, 9])
@pytest.mark.parametrize("j", [0, 1, 5, 12])
@pytest.mark.parametrize("n", [1, 7, 40])
def test_truncation_gap_equals_scaled_tail(q, j, n):
    # the gap is exactly S(q, j+n) / q^n, which also bounds it
    gap = tail_sum(q, j) - tail_sum_truncated(q, j, n)
    assert gap == tail_sum(q, j + n) / Fraction(q) ** n
    assert gap >= 0


def test_truncated_is_monotone_in_terms():
    prev = 0
    for n in range(1, 30):
        cur = tail_sum_truncated(Fraction(9, 4), 2, n)
        assert cur >= prev
        assert cur <= tail_sum(Fraction(9, 4), 2)
        prev = cur


def test_recursion_identity_examples():
    assert tail_sum_recursion_check(2, 1) == 0
    assert tail_sum_recursion_check(Fraction(7, 2), 5) == 0
    q = 2.000001
    assert abs(tail_sum_recursion_check(q, 30)) <= 1e-9 * tail_sum(q, 30)


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=Fraction(33, 20), max_value=50), st.integers(1, 40))
def test_recursion_identity_is_exact(q, j):
    assert tail_sum_recursion_check(q, j) == 0


def test_tail_sum_decreasing_in_q():
    grid = np.linspace(golden_mean() + 0.01, 10, 200)
    for j in (0, 1, 4, 9):
        values = [tail_sum(float(q), j) for q in grid]
        assert all(a > b for a, b in zip(values, values[1:]))


def test_fib_weight_below_tail_sum():
    rng = random.Random(3)
    for _ in range(200):
        q = rng.uniform(golden_mean() + 1e-3, 20)
        j = rng.randrange(0, 40)
        assert fib(j) <= tail_sum(q, j)


# --- thresholds ------------------------------------------------------------

@pytest.mark.parametrize("j,expected", [
    (0, 1 + math.sqrt(3)),
    (1, (3 + math.sqrt(17)) / 2),
    (2, (5 + math.sqrt(57)) / 4),
])
def test_threshold_closed_forms(j, expected):
    assert threshold_q(j) == pytest.approx(expected, abs=1e-12)
    assert threshold_q(j) == pytest.approx(quadratic_root(j), abs=1e-12)


def test_threshold_enclosure():
    for j in range(0, 40, 3):
        enc = threshold_q(j, "exact")
        assert enc.width <= Fraction(1, 10**30)
        a, b = fib(j), fib(j + 2)
        poly = lambda q: a * q * q - b * q - 2 * a
        assert poly(enc.lo) <= 0 <= poly(enc.hi)


def test_threshold_defining_equation():
    for j in range(33):
        q = threshold_q(j)
        lhs = tail_sum(q, j + 1)
        assert abs(lhs - q * fib(j)) <= 1e-9 * lhs
        assert q > golden_mean()


def test_at_most_threshold_exact_and_float():
    enc = threshold_q(0, "exact")
    assert at_most_threshold(enc.lo, 0)
    assert not at_most_threshold(enc.hi, 0)
    assert at_most_threshold(threshold_q(0), 0)
    assert not at_most_threshold(threshold_q(0) + 1e-9, 0)


def test_thresholds_alternate_towards_two_phi():
    values = [threshold_q(j) for j in range(30)]
    evens, odds = values[0::2], values[1::2]
    assert all(a < b for a, b in zip(evens, evens[1:]))
    assert all(a > b for a, b in zip(odds, odds[1:]))
    assert all(e < THRESHOLD_LIMIT < o for e, o in zip(evens, odds))


def test_threshold_supremum():
    sup = threshold_supremum(64)
    assert sup.argmax == 1
    assert sup.sup == pytest.approx(3.5615528128, abs=1e-10)
    assert sup.limit_estimate == pytest.approx(1 + math.sqrt(5), abs=1e-9)
    brute = max(quadratic_root(j) for j in range(65))
    assert sup.sup == pytest.approx(brute, abs=1e-12)


def test_paper_constant_disagrees():
    assert paper_q_limit == pytest.approx(2.2600735107, abs=1e-10)
    assert paper_q_limit < threshold_q(0)


def test_lemma_window():
    assert lemma_applies(3, 1)
    assert not lemma_applies(Fraction(34, 10), 1)
    assert lemma_applies(Fraction(34, 10), 0) is False
    assert lemma_applies(2, 0)


# --- regimes ---------------------------------------------------------------

@pytest.mark.parametrize("q,regime,j", [
    (2, Regime.CONNECTED, 0),
    (3, Regime.CANDIDATE_DECOMPOSITION, 1),
    (4, Regime.DISCONNECTED, None),
    (1.2, Regime.INVALID, None),
    (Fraction(3, 2), Regime.INVALID, None),
    (2.9, Regime.CANDIDATE_DECOMPOSITION, 1),
])
def test_classify_examples(q, regime, j):
    report = classify_regime(q, 64)
    assert report.regime == regime
    assert report.j == j


def test_classify_notes_inapplicable_theorem():
    report = classify_regime(Fraction(34, 10))
    assert report.j == 1
    assert any("inapplicable" in n for n in report.notes)
    assert not any("inapplicable" in n for n in classify_regime(3).notes)


def test_classify_at_threshold_boundaries():
    enc = threshold_q(0, "exact")
    assert classify_regime(enc.lo).regime == Regime.CONNECTED
    assert classify_regime(enc.hi).regime == Regime.CANDIDATE_DECOMPOSITION
    assert classify_regime(threshold_q(1, "exact").hi).regime == Regime.DISCONNECTED


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1.0, max_value=8.0))
def test_regimes_partition(q):
    report = classify_regime(q)
    phi = golden_mean()
    if q <= phi:
        assert report.regime == Regime.INVALID
    elif q <= threshold_q(0) + 1e-12:
        assert report.regime == Regime.CONNECTED
    elif q <= threshold_supremum().sup + 1e-12:
        assert report.regime == Regime.CANDIDATE_DECOMPOSITION
        assert q <= threshold_q(report.j) + 1e-12
        assert all(q > threshold_q(h) for h in range(report.j))
    else:
        assert report.regime == Regime.DISCONNECTED
