"""Exit criteria.  Each test records one PASS/FAIL line in the terminal summary."""
import contextlib
import io
import json
import math
import random
import time
from fractions import Fraction
from pathlib import Path

import pytest

from fibreach import (
    Status,
    Verdict,
    candidate_intervals,
    evaluate_word,
    fib,
    golden_mean,
    greedy_expand,
    lex_monotone_check,
    membership,
    oracle_union,
    reconstruct_check,
    separation_margin,
    simulate_system,
    tail_sum,
    tail_sum_recursion_check,
    tail_sum_truncated,
    threshold_q,
    threshold_supremum,
)
from fibreach.cli import main
from fibreach.series import at_most_threshold

from conftest import ACCEPTANCE_LINES

GOLDEN = Path(__file__).parent / "golden"
PHI_HI = golden_mean("exact").hi


@contextlib.contextmanager
def criterion(number, text):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        ACCEPTANCE_LINES.append(f"FAIL  {number:>2}. {text}")
        raise
    ACCEPTANCE_LINES.append(
        f"PASS  {number:>2}. {text} ({time.perf_counter() - start:.2f}s)"
    )


def rational_q(rng, lo, hi, den=1000):
    """Random rational in (lo, hi] on a grid of step 1/den."""
    k_lo = math.floor(lo * den) + 1
    return Fraction(rng.randrange(k_lo, math.floor(hi * den) + 1), den)


def test_01_closed_form_vs_series():
    with criterion(1, "closed-form tail sum vs 60-term series, 200 random (q, j)"):
        rng = random.Random(101)
        start = time.perf_counter()
        for _ in range(200):
            q = rational_q(rng, float(PHI_HI) + 0.05, 10)
            j = rng.randrange(17)
            gap = tail_sum(q, j) - tail_sum_truncated(q, j, 60)
            assert 0 <= gap <= tail_sum(q, j + 60) / q**60
        assert time.perf_counter() - start < 1.0


def test_02_recursion_identity():
    with criterion(2, "tail-sum recursion defect is exactly zero, 100 random rational q"):
        rng = random.Random(102)
        for _ in range(100):
            q = rational_q(rng, float(PHI_HI), 20, den=rng.choice([7, 100, 997]))
            assert tail_sum_recursion_check(q, rng.randrange(1, 33)) == 0


def test_03_threshold_defining_equation():
    with criterion(3, "S(Q(j), j+1) = Q(j) f_j to 1e-9 relative, j <= 32; Q(0), Q(1) closed forms"):
        for j in range(33):
            q = threshold_q(j)
            lhs = tail_sum(q, j + 1)
            assert abs(lhs - q * fib(j)) <= 1e-9 * lhs
        assert abs(threshold_q(0) - (1 + math.sqrt(3))) <= 1e-12
        assert abs(threshold_q(1) - (3 + math.sqrt(17)) / 2) <= 1e-12


def test_04_discrepancy_probe(capsys):
    with criterion(4, "Q(j) non-monotone, limit 1+sqrt(5), quoted constant flagged"):
        q0, q1, q2 = (threshold_q(j) for j in range(3))
        assert abs(q0 - 2.7320508) < 1e-7
        assert abs(q1 - 3.5615528) < 1e-7
        assert abs(q2 - 3.1374586) < 1e-7
        assert q0 < q1 and q2 < q1
        assert abs(threshold_supremum(64).limit_estimate - (1 + math.sqrt(5))) <= 1e-9
        assert main(["thresholds", "--jmax", "64"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert abs(float(report["result"]["paper_q_limit"]) - 2.2600735) < 1e-7
        assert any("paper_q_limit" in a and "inconsistent" in a for a in report["anomalies"])


def test_05_lemma_construction():
    with criterion(5, "greedy traces for q in {2, 5/2, Q(0)}: bounded, convergent, zero defect"):
        # Q(0) is irrational: use the largest double not above it, verified exactly
        q_top = Fraction(threshold_q(0))
        if not at_most_threshold(q_top, 0):
            q_top = Fraction(math.nextafter(threshold_q(0), 0))
        assert at_most_threshold(q_top, 0) and threshold_q(0) - q_top < 1e-15
        rng = random.Random(105)
        start = time.perf_counter()
        for q in (Fraction(2), Fraction(5, 2), q_top):
            top = tail_sum(q, 0)
            bounds = [tail_sum(q, h) for h in range(65)]
            residual = tail_sum(q, 64) / q**64
            for _ in range(500):
                x = top * Fraction(rng.randrange(10**9 + 1), 10**9)
                trace = greedy_expand(x, q, 0, 64)
                assert trace.status != Status.OVERFLOW
                assert all(0 <= r <= bounds[h] for h, r in enumerate(trace.remainders))
                assert abs(x - evaluate_word(trace.digits, q)) <= residual
                assert reconstruct_check(trace) == 0
        assert time.perf_counter() - start < 5.0


def test_06_closed_formula_equivalence():
    with criterion(6, "simulated trajectory equals word value on reversed controls, 1000 words"):
        rng = random.Random(106)
        for _ in range(1000):
            n = rng.randrange(1, 31)
            word = "".join(rng.choice("01") for _ in range(n))
            q = rational_q(rng, float(PHI_HI) + 0.05, 10)
            assert simulate_system(word, q)[-1] == evaluate_word(word[::-1], q)


def test_07_decomposition_at_three():
    with criterion(7, "q=3: [0,4/5] u [1,9/5] exactly, oracle depth 20 within 1e-5, membership"):
        start = time.perf_counter()
        dec = candidate_intervals(3, 1)
        assert [tuple(iv) for iv in dec.merged] == [(0, Fraction(4, 5)), (1, Fraction(9, 5))]
        assert dec.disjoint
        assert dec.merged.hausdorff(oracle_union(3, 20)) <= 1e-5
        assert membership(Fraction(9, 10), 3).verdict == Verdict.OUT
        assert membership(Fraction(1, 2), 3).verdict == Verdict.IN
        assert time.perf_counter() - start < 30.0


def test_08_connected_regime_sweep():
    with criterion(8, "20 q in (phi+0.05, Q(0)]: oracle depth 20 is [0, S(q,0)]"):
        lo, hi = golden_mean() + 0.05, threshold_q(0)
        for i in range(1, 21):
            q = lo + (hi - lo) * i / 20
            outer = oracle_union(q, 20)
            assert len(outer) == 1
            assert abs(outer.hi[0] - tail_sum(q, 0)) <= 1e-6


def test_09_disconnected_regime():
    with criterion(9, "q=4: 2^N components, lexicographic order holds, margins positive"):
        start = time.perf_counter()
        for n in (4, 8, 12, 16):
            assert len(oracle_union(4, n)) == 2**n
        assert lex_monotone_check(4, 12).holds
        assert all(separation_margin(4, h) > 0 for h in range(33))
        assert time.perf_counter() - start < 60.0


def test_10_monotonicity_failure_witness():
    with criterion(10, "q=2, N=4: counterexample (0111, 1000) with values (1.375, 1)"):
        res = lex_monotone_check(2, 4)
        assert not res.holds
        assert (res.u, res.v) == ("0111", "1000")
        assert (res.value_u, res.value_v) == (Fraction(11, 8), 1)


def _capture(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        assert main(argv) == 0
    return buf.getvalue()


GOLDEN_COMMANDS = {
    "thresholds.json": ["thresholds"],
    "decompose_q3.json": ["decompose", "--q", "3"],
    "scan_2.6_2.9_4.csv": ["scan", "--qmin", "2.6", "--qmax", "2.9", "--steps", "4"],
}


def test_11_cli_goldens():
    with criterion(11, "CLI envelopes byte-identical across runs, thread counts, and goldens"):
        for name, argv in GOLDEN_COMMANDS.items():
            first = _capture(argv)
            assert _capture(argv) == first
            assert first == (GOLDEN / name).read_text()
        scan = GOLDEN_COMMANDS["scan_2.6_2.9_4.csv"]
        single = _capture(scan + ["--threads", "1"])
        assert _capture(scan + ["--threads", "4"]) == single
