import math
from fractions import Fraction

import pytest


def fib_loop(k):
    """Independent Fibonacci with f_0 = f_1 = 1."""
    a, b = 1, 1
    for _ in range(k):
        a, b = b, a + b
    return a


def brute_word_value(word, q, offset=0):
    """Direct float sum over a word, no shared code with the package."""
    return sum(fib_loop(offset + k) / q**k for k, d in enumerate(word) if d == "1")


def brute_candidates(q, j):
    """All level-j candidates as float pairs, by direct enumeration."""
    width = brute_tail(q, j, 400) / q**j
    out = []
    for i in range(2**j):
        w = format(i, f"0{j}b") if j else ""
        start = brute_word_value(w, q)
        out.append((start, start + width))
    return out


def brute_tail(q, j, n):
    return sum(fib_loop(j + k) / q**k for k in range(n))


@pytest.fixture
def phi():
    return (1 + math.sqrt(5)) / 2


@pytest.fixture
def half():
    return Fraction(1, 2)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
