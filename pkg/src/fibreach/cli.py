"""Command-line front end.

Every command writes one JSON envelope (schema ``fibreach/1``) to stdout,
except ``thresholds --format csv`` and ``scan``, which write CSV.  Exit codes:
0 on success, 2 on domain or usage errors, 3 when an enumeration cap is hit.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from fractions import Fraction

from .expansion import evaluate_word, greedy_expand, reconstruct_check, simulate_system
from .reachset import (
    candidate_intervals,
    gap_report,
    membership,
    oracle_union,
)
from .scalar import (
    EXACT,
    FLOAT,
    GOLDEN_MEAN,
    DomainError,
    ResourceError,
    exceeds_golden_mean,
    format_scalar,
    parse_scalar,
)
from .series import (
    THRESHOLD_LIMIT,
    classify_regime,
    paper_q_limit,
    tail_sum,
    threshold_q,
    threshold_supremum,
)

SCHEMA = "fibreach/1"
SCAN_HEADER = ["q", "regime", "components", "measure", "largest_gap", "s_q0"]


def _jsonable(obj):
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float) and math.isinf(obj):
        return "inf" if obj > 0 else "-inf"
    if isinstance(obj, (float, Fraction)):
        return format_scalar(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _emit(command, parameters, backend, result, anomalies=()):
    envelope = {
        "schema": SCHEMA,
        "command": command,
        "parameters": parameters,
        "backend": backend,
        "result": result,
        "anomalies": list(anomalies),
    }
    sys.stdout.write(json.dumps(_jsonable(envelope), indent=2) + "\n")


def _csv_number(x) -> str:
    return repr(float(x))


def _parse(parser, text, backend, name):
    try:
        return parse_scalar(text, backend)
    except ValueError:
        parser.error(f"--{name}: cannot parse {text!r} as a number")


def _require_q(q):
    if not exceeds_golden_mean(q):
        raise DomainError(
            f"q = {format_scalar(q)} must exceed the golden mean {GOLDEN_MEAN:.17g}"
        )


def cmd_thresholds(args, parser):
    if args.jmax < 0:
        parser.error("--jmax must be >= 0")
    values = [threshold_q(j) for j in range(args.jmax + 1)]
    if args.format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["j", "Q"])
        for j, v in enumerate(values):
            writer.writerow([j, _csv_number(v)])
        sys.stdout.write(out.getvalue())
        return
    sup = threshold_supremum(args.jmax)
    anomalies = [
        f"Q({j}) < Q({j - 1}): thresholds are not monotone"
        for j in range(1, len(values)) if values[j] < values[j - 1]
    ]
    anomalies.append(
        f"paper_q_limit {paper_q_limit:.10f} is inconsistent with the computed "
        f"limit {THRESHOLD_LIMIT:.10f} of Q(j)"
    )
    result = {
        "thresholds": [{"j": j, "Q": v} for j, v in enumerate(values)],
        "supremum": sup.sup,
        "argmax": sup.argmax,
        "limit_estimate": sup.limit_estimate,
        "limit_closed_form": THRESHOLD_LIMIT,
        "paper_q_limit": paper_q_limit,
    }
    _emit("thresholds", {"jmax": args.jmax, "format": args.format}, FLOAT, result, anomalies)


def cmd_expand(args, parser):
    q = _parse(parser, args.q, args.backend, "q")
    x = _parse(parser, args.x, args.backend, "x")
    if x < 0:
        parser.error("--x must be >= 0")
    _require_q(q)
    trace = greedy_expand(x, q, args.j, args.depth)
    result = {
        "digits": str(trace.digits),
        "status": trace.status,
        "depth": trace.depth,
        "residual_bound": trace.residual_bound,
        "reconstruct_defect": reconstruct_check(trace),
    }
    if args.trace:
        digits = trace.digits.digits
        result["trace"] = [
            {"h": h, "u": digits[h] if h < len(digits) else None, "r": r}
            for h, r in enumerate(trace.remainders)
        ]
    params = {"q": args.q, "x": args.x, "j": args.j, "depth": args.depth,
              "backend": args.backend, "trace": args.trace}
    _emit("expand", params, args.backend, result)


def _oracle_payload(q, depth):
    outer = oracle_union(q, depth)
    report = gap_report(outer)
    return outer, {
        "depth": depth,
        "components": report.count,
        "gap_count": max(report.count - 1, 0),
        "measure": report.measure,
        "intervals": outer.to_strings(),
    }


def cmd_decompose(args, parser):
    q = _parse(parser, args.q, args.backend, "q")
    _require_q(q)
    report = classify_regime(q)
    anomalies = list(report.notes)
    if args.j == "auto":
        j = report.j
    else:
        try:
            j = int(args.j)
        except ValueError:
            parser.error("--j must be an integer or 'auto'")
        if j < 0:
            parser.error("--j must be >= 0")
    outer, oracle = _oracle_payload(q, args.depth)
    result = {"regime": report.regime, "j": j, "decomposition": None, "oracle": oracle}
    if j is not None:
        dec = candidate_intervals(q, j)
        result["decomposition"] = {
            "width": dec.width,
            "candidates": [
                {"prefix": str(w), "interval": list(iv)} for w, iv in dec.candidates()
            ],
            "merged": dec.merged.to_strings(),
            "disjoint": dec.disjoint,
            "separation_margins": list(dec.separation_margins),
        }
        oracle["hausdorff_to_decomposition"] = dec.merged.hausdorff(outer)
        if not dec.disjoint:
            anomalies.append(f"candidates at level {j} are not pairwise disjoint")
    params = {"q": args.q, "j": args.j, "depth": args.depth, "backend": args.backend}
    _emit("decompose", params, args.backend, result, anomalies)


def cmd_member(args, parser):
    q = _parse(parser, args.q, args.backend, "q")
    x = _parse(parser, args.x, args.backend, "x")
    _require_q(q)
    verdict, certificate = membership(x, q, args.depth)
    params = {"q": args.q, "x": args.x, "depth": args.depth, "backend": args.backend}
    _emit("member", params, args.backend, {"verdict": verdict, "certificate": certificate})


def cmd_simulate(args, parser):
    q = _parse(parser, args.q, args.backend, "q")
    if set(args.digits) - {"0", "1"} or not args.digits:
        parser.error("--digits must be a non-empty string of 0 and 1")
    if q == 0:
        raise DomainError("q must be non-zero")
    trajectory = simulate_system(args.digits, q)
    result = {"trajectory": trajectory}
    if exceeds_golden_mean(q):
        result["closed_form_final"] = evaluate_word(args.digits[::-1], q)
    params = {"q": args.q, "digits": args.digits, "backend": args.backend}
    _emit("simulate", params, args.backend, result)


def cmd_oracle(args, parser):
    q = _parse(parser, args.q, args.backend, "q")
    _require_q(q)
    _, payload = _oracle_payload(q, args.depth)
    params = {"q": args.q, "depth": args.depth, "backend": args.backend}
    _emit("oracle", params, args.backend, payload)


def scan_row(q, depth: int) -> list[str]:
    """One CSV row of the regime scan for a single q."""
    report = classify_regime(q)
    outer = oracle_union(q, depth)
    return [
        _csv_number(q),
        report.regime.value,
        str(len(outer)),
        _csv_number(outer.measure),
        _csv_number(outer.largest_gap()),
        _csv_number(tail_sum(q, 0)),
    ]


def cmd_scan(args, parser):
    if args.steps < 2:
        parser.error("--steps must be >= 2")
    qmin = _parse(parser, args.qmin, args.backend, "qmin")
    qmax = _parse(parser, args.qmax, args.backend, "qmax")
    if qmax <= qmin:
        parser.error("--qmax must exceed --qmin")
    grid = [qmin + (qmax - qmin) * i / (args.steps - 1) for i in range(args.steps)]
    kept = [q for q in grid if exceeds_golden_mean(q)]
    if len(kept) < len(grid):
        print(f"warning: dropped {len(grid) - len(kept)} grid points at or below "
              f"the golden mean", file=sys.stderr)
    with ThreadPoolExecutor(max_workers=max(args.threads, 1)) as pool:
        rows = list(pool.map(lambda q: scan_row(q, args.depth), kept))
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SCAN_HEADER)
    writer.writerows(rows)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(out.getvalue())
    else:
        sys.stdout.write(out.getvalue())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fibreach",
        description="Reachable set of the Fibonacci-weighted binary control system.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def backend_opt(p):
        p.add_argument("--backend", choices=[EXACT, FLOAT], default=EXACT)

    p = sub.add_parser("thresholds", help="tabulate Q(j) and its supremum")
    p.add_argument("--jmax", type=int, default=64)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("expand", help="greedy digit expansion of x")
    p.add_argument("--q", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--depth", type=int, default=64)
    backend_opt(p)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("decompose", help="interval decomposition and oracle comparison")
    p.add_argument("--q", required=True)
    p.add_argument("--j", default="auto")
    p.add_argument("--depth", type=int, default=16)
    backend_opt(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("member", help="membership of x in the reachable set")
    p.add_argument("--q", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--depth", type=int, default=16)
    backend_opt(p)
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("simulate", help="run the control system on a control word")
    p.add_argument("--q", required=True)
    p.add_argument("--digits", required=True)
    backend_opt(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("oracle", help="brute-force outer approximation")
    p.add_argument("--q", required=True)
    p.add_argument("--depth", type=int, default=16)
    backend_opt(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("scan", help="CSV regime scan over a q grid")
    p.add_argument("--qmin", required=True)
    p.add_argument("--qmax", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--depth", type=int, default=14)
    p.add_argument("--out")
    p.add_argument("--format", choices=["csv"], default="csv")
    p.add_argument("--threads", type=int, default=1)
    backend_opt(p)
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args, parser)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
