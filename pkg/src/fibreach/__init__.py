"""Reachable set of the Fibonacci-weighted binary control system."""
from .scalar import (
    DEFAULT_EPS,
    EXACT,
    FLOAT,
    GOLDEN_MEAN,
    DomainError,
    Enclosure,
    FibReachError,
    ResourceError,
    fib,
    format_scalar,
    golden_mean,
    parse_scalar,
)
from .series import (
    THRESHOLD_LIMIT,
    Regime,
    RegimeReport,
    classify_regime,
    lemma_applies,
    paper_q_limit,
    tail_sum,
    tail_sum_recursion_check,
    tail_sum_truncated,
    threshold_q,
    threshold_supremum,
)
from .expansion import (
    DigitWord,
    ExpansionTrace,
    Status,
    evaluate_word,
    greedy_expand,
    reconstruct_check,
    simulate_system,
)
from .reachset import (
    Decomposition,
    Interval,
    IntervalSet,
    Verdict,
    candidate_intervals,
    gap_report,
    lex_monotone_check,
    membership,
    oracle_union,
    separation_margin,
)

__version__ = "0.1.0"
