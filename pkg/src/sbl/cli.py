"""Command line front end.

Exit codes are part of the interface: 0 solved (or verified), 1 no
solution (or witness rejected), 2 guard abort, 3 invalid input, 4
enumeration budget exceeded.  Output on stdout is a single JSON document
(solve, verify, probe, gen without --out) or CSV (bench); everything
diagnostic goes to stderr.  SBL_BUDGET overrides the default point budget
when no --budget flag is given.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Optional, Sequence

from .core import (
    Box,
    BudgetExceeded,
    Ellipsoid,
    GUARD_ABORT,
    Instance,
    Interval,
    NO_SOLUTION,
    ParseError,
    Punctured,
    SOLVED,
    Verdict,
    parse_instance,
    parse_verdict,
    serialize_instance,
    serialize_verdict,
    verify_solution,
)
from .enumeration import DEFAULT_POINT_BUDGET
from .experiment import (
    BENCH_HEADER,
    ProbeConfig,
    SUITE_NAMES,
    bench,
    probe_avg_solver,
    probe_existence,
    report_json,
    sample_instance,
    trial_stream,
)
from .oracle import brute_force_solve, mitm_solve
from .reduction import lll_threshold
from .solve import (
    ThresholdUnmet,
    solve_gss_avg,
    solve_gss_interval,
    solve_gss_punctured,
    solve_sbp,
    solve_sbp_body,
    solve_sbp_lll,
)

__all__ = ["main"]

EXIT_SOLVED = 0
EXIT_NO_SOLUTION = 1
EXIT_GUARD_ABORT = 2
EXIT_INVALID = 3
EXIT_BUDGET = 4

_STATUS_EXIT = {SOLVED: 0, NO_SOLUTION: 1, GUARD_ABORT: 2}

BUDGET_ENV = "SBL_BUDGET"


class _Invalid(Exception):
    """User-facing configuration or input problem; maps to exit 3."""


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags, which collides with guard_abort
    def error(self, message):
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _budget(args) -> int:
    if args.budget is not None:
        if args.budget < 1:
            raise _Invalid("budget must be positive")
        return args.budget
    env = os.environ.get(BUDGET_ENV)
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise _Invalid(f"{BUDGET_ENV} must be an integer, got {env!r}")
        if value < 1:
            raise _Invalid(f"{BUDGET_ENV} must be positive")
        return value
    return DEFAULT_POINT_BUDGET


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise _Invalid(f"cannot read {path}: {e.strerror or e}")


def _symmetric_bound(coeffs) -> Optional[int]:
    """The d of a [-d, d] coefficient range, else None."""
    if isinstance(coeffs, Box):
        return coeffs.d
    if isinstance(coeffs, Interval) and coeffs.lo == -coeffs.hi and coeffs.hi >= 1:
        return coeffs.hi
    return None


def _emit(verdict: Verdict) -> int:
    print(serialize_verdict(verdict))
    return _STATUS_EXIT[verdict.status]


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def _solve_balancing(inst: Instance, engine: str, budget: int) -> Verdict:
    coeffs = inst.coeffs
    d = _symmetric_bound(coeffs)
    if engine == "auto":
        if isinstance(coeffs, Ellipsoid):
            engine = "body"
        elif isinstance(coeffs, Punctured):
            return solve_gss_punctured(inst.x, 0, coeffs.d, budget=budget)
        elif d is not None:
            engine = "lll" if len(inst.x) >= 2 and lll_threshold(inst.x, d) else "svp"
        else:
            engine = "mitm"
    if engine == "svp":
        if d is None:
            raise _Invalid("svp engine needs a symmetric [-d,d] coefficient range")
        return solve_sbp(inst.x, d, budget=budget)
    if engine == "lll":
        if d is None:
            raise _Invalid("lll engine needs a symmetric [-d,d] coefficient range")
        return solve_sbp_lll(inst.x, d)
    if engine == "body":
        if isinstance(coeffs, Ellipsoid):
            return solve_sbp_body(inst.x, coeffs, budget=budget)
        if d is not None:
            return solve_sbp_body(inst.x, Box(d), budget=budget)
        raise _Invalid("body engine needs a box or ellipsoid coefficient set")
    if engine == "mitm":
        if isinstance(coeffs, Ellipsoid):
            raise _Invalid("mitm engine does not handle ellipsoid bodies")
        return mitm_solve(inst, "balancing", budget)
    if engine == "brute":
        return brute_force_solve(inst, "balancing", budget)
    if engine == "avg":
        raise _Invalid("avg engine solves gss; use --mode gss")
    raise _Invalid(f"engine {engine} does not apply to balancing")


def _solve_gss(inst: Instance, engine: str, budget: int) -> Verdict:
    coeffs = inst.coeffs
    if engine == "auto":
        if isinstance(coeffs, Punctured):
            return solve_gss_punctured(inst.x, inst.tau, coeffs.d, budget=budget)
        if isinstance(coeffs, Interval):
            return solve_gss_interval(
                inst.x, inst.tau, coeffs.lo, coeffs.hi, budget=budget
            )
        if isinstance(coeffs, Box):
            return solve_gss_interval(
                inst.x, inst.tau, -coeffs.d, coeffs.d, budget=budget
            )
        # ellipsoid targets have no lattice route here; small cases only
        return brute_force_solve(inst, "gss", budget)
    if engine == "avg":
        if inst.m_bound is None:
            raise _Invalid("avg engine: m_bound required on the instance")
        if isinstance(coeffs, Punctured):
            return solve_gss_avg(
                inst.x, inst.tau, coeffs.d, inst.m_bound, "punctured",
                budget=budget,
            )
        d = _symmetric_bound(coeffs)
        if d is None:
            raise _Invalid(
                "avg engine needs a symmetric [-d,d] or punctured coefficient set"
            )
        return solve_gss_avg(
            inst.x, inst.tau, d, inst.m_bound, "interval", budget=budget
        )
    if engine == "mitm":
        if isinstance(coeffs, Ellipsoid):
            raise _Invalid("mitm engine does not handle ellipsoid bodies")
        return mitm_solve(inst, "gss", budget)
    if engine == "brute":
        return brute_force_solve(inst, "gss", budget)
    raise _Invalid(f"engine {engine} does not apply to gss")


def cmd_solve(args) -> int:
    budget = _budget(args)
    inst = parse_instance(_read(args.instance))
    mode = "sbp" if args.nonzero else args.mode
    if mode == "sbp":
        verdict = _solve_balancing(inst, args.engine, budget)
    else:
        verdict = _solve_gss(inst, args.engine, budget)
    return _emit(verdict)


# ---------------------------------------------------------------------------
# gen / verify
# ---------------------------------------------------------------------------

def cmd_gen(args) -> int:
    if not 0 <= args.seed < (1 << 64):
        raise _Invalid("seed must fit in 64 bits")
    rng = trial_stream(args.seed, 0)
    try:
        inst = sample_instance(args.n, args.M, args.d, args.tau, args.cset, rng)
    except ValueError as e:
        raise _Invalid(str(e))
    text = serialize_instance(inst) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_SOLVED


def cmd_verify(args) -> int:
    inst = parse_instance(_read(args.instance))
    text = _read(args.solution)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}")
    if isinstance(doc, list):
        witness = doc
    else:
        verdict = parse_verdict(text)
        if verdict.witness is None:
            print(serialize_verdict(Verdict.no_solution("no witness to verify")))
            return EXIT_NO_SOLUTION
        witness = list(verdict.witness)
    mode = "balancing" if args.mode == "sbp" else "gss"
    try:
        ok = verify_solution(inst, witness, mode)
    except ValueError as e:
        raise _Invalid(str(e))
    if ok:
        print(serialize_verdict(Verdict.solved(witness)))
        return EXIT_SOLVED
    print(serialize_verdict(Verdict.no_solution("witness rejected")))
    return EXIT_NO_SOLUTION


# ---------------------------------------------------------------------------
# probe / bench
# ---------------------------------------------------------------------------

def cmd_probe(args) -> int:
    budget = _budget(args)
    try:
        cfg = ProbeConfig(
            n=args.n,
            m_bound=args.M,
            d=args.d,
            trials=args.trials,
            seed=args.seed,
            tau=args.tau,
            cset=args.cset,
            solver=args.solver,
        )
    except ValueError as e:
        raise _Invalid(str(e))
    if args.kind == "existence":
        report = probe_existence(cfg, budget=budget)
    else:
        report = probe_avg_solver(cfg, budget=budget)
    print(report_json(report, include_timing=args.timing))
    return EXIT_SOLVED


def cmd_bench(args) -> int:
    budget = _budget(args)
    try:
        rows = bench(args.suite, seed=args.seed, budget=budget)
    except ValueError as e:
        raise _Invalid(str(e))
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(BENCH_HEADER)
    writer.writerows(rows)
    return EXIT_SOLVED


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(prog="sbl", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("instance", help="path to an instance JSON file")
    p.add_argument("--mode", choices=("sbp", "gss"), default="gss",
                   help="sbp demands a nonzero witness with c.x=0")
    p.add_argument("--engine",
                   choices=("auto", "svp", "lll", "mitm", "brute", "body", "avg"),
                   default="auto")
    p.add_argument("--budget", type=int, default=None,
                   help="enumeration point budget")
    p.add_argument("--nonzero", action="store_true",
                   help="force balancing semantics (reject c = 0)")
    p.set_defaults(run=cmd_solve)

    p = sub.add_parser("gen", help="sample a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--M", type=int, required=True,
                   help="entries drawn uniformly from [0, M-1]")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--tau", type=int, default=0)
    p.add_argument("--cset", choices=("interval", "punctured"),
                   default="interval")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(run=cmd_gen)

    p = sub.add_parser("verify", help="check a witness against an instance")
    p.add_argument("instance")
    p.add_argument("solution",
                   help="verdict JSON or a bare JSON list of coefficients")
    p.add_argument("--mode", choices=("sbp", "gss"), default="gss")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("probe", help="empirical frequency probes")
    p.add_argument("--kind", choices=("existence", "avg"), default="existence")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--tau", type=int, default=None,
                   help="fixed target; omitted means per-trial in [-100,100]")
    p.add_argument("--cset", choices=("interval", "punctured"),
                   default="interval")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--solver", choices=("mitm", "lattice", "both"),
                   default="mitm")
    p.add_argument("--timing", action="store_true",
                   help="include wall-clock fields in the report")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(run=cmd_probe)

    p = sub.add_parser("bench", help="benchmark suites as CSV")
    p.add_argument("--suite", required=True,
                   help="one of %s or a JSON suite file" % (", ".join(SUITE_NAMES)))
    p.add_argument("--seed", type=int, default=20240)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(run=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except _Invalid as e:
        print(f"sbl: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ParseError as e:
        print(f"sbl: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ThresholdUnmet as e:
        print(f"sbl: {e}", file=sys.stderr)
        return EXIT_INVALID
    except BudgetExceeded as e:
        print(f"sbl: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as e:
        print(f"sbl: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
