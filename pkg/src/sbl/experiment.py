"""Random instance sampling, empirical probes, and benchmark plumbing.

Randomness comes from SplitMix64, a 64-bit generator small enough to
reimplement in any language from its two-line description: the state
advances by the constant 0x9E3779B97F4A7C15 and the output is the state
scrambled by two xor-shift-multiply rounds (0xBF58476D1CE4E5B9 with shift
30, 0x94D049BB133111EB with shift 27, final shift 31).  Seed 0 produces
0xE220A8397B1DCDAF first, which tests pin down.  Bounded draws use
rejection sampling, so every value in [0, bound) is exactly equally
likely and streams are reproducible bit for bit.

Each trial of a probe owns its own stream, seeded by the (index+1)-th
output of an outer stream over the probe seed; trials are therefore
independent of ordering and can run in any schedule without changing the
report.  All reported frequencies are exact rationals; wall-clock numbers
are informational floats kept out of deterministic output.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .core import (
    GUARD_ABORT,
    SOLVED,
    Instance,
    Interval,
    Punctured,
    Verdict,
    verify_solution,
)
from .enumeration import DEFAULT_POINT_BUDGET
from .oracle import brute_force_solve, mitm_solve
from .solve import (
    solve_gss_avg,
    solve_gss_interval,
    solve_gss_punctured,
    solve_sbp,
)

__all__ = [
    "SplitMix64",
    "trial_stream",
    "sample_instance",
    "ProbeConfig",
    "ProbeReport",
    "probe_existence",
    "probe_avg_solver",
    "report_json",
    "BENCH_HEADER",
    "SUITE_NAMES",
    "bench",
]

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15

TAU_PROBE_RANGE = 100  # sampled tau lies in [-100, 100]


class SplitMix64:
    """The 64-bit SplitMix generator; deterministic and portable."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return (z ^ (z >> 31)) & _MASK

    def below(self, bound: int) -> int:
        """Uniform on [0, bound) by rejection; bound may exceed 2^64."""
        bound = int(bound)
        if bound <= 0:
            raise ValueError("bound must be positive")
        words = ((bound - 1).bit_length() + 63) // 64 if bound > 1 else 1
        space = 1 << (64 * words)
        limit = space - space % bound
        while True:
            u = 0
            for _ in range(words):
                u = (u << 64) | self.next_u64()
            if u < limit:
                return u % bound

    def span(self, lo: int, hi: int) -> int:
        """Uniform on the inclusive range [lo, hi]."""
        if lo > hi:
            raise ValueError("empty range")
        return lo + self.below(hi - lo + 1)


def trial_stream(seed: int, index: int) -> SplitMix64:
    """The per-trial generator: seeded by the (index+1)-th output of the
    outer stream, so trials never share state."""
    if index < 0:
        raise ValueError("index must be nonnegative")
    outer = SplitMix64(seed)
    s = 0
    for _ in range(index + 1):
        s = outer.next_u64()
    return SplitMix64(s)


def sample_instance(
    n: int,
    m_bound: int,
    d: int,
    tau: int,
    cset: str,
    rng: SplitMix64,
) -> Instance:
    """x uniform on [0, m_bound - 1]^n with the requested coefficient set."""
    if n < 1:
        raise ValueError("n must be positive")
    if m_bound < 1:
        raise ValueError("m_bound must be positive")
    if d < 1:
        raise ValueError("coefficient bound must be positive")
    if cset == "interval":
        coeffs = Interval(-d, d)
    elif cset == "punctured":
        coeffs = Punctured(d)
    else:
        raise ValueError(f"unknown coefficient set kind {cset!r}")
    x = tuple(rng.below(m_bound) for _ in range(n))
    return Instance(x, coeffs, tau=int(tau), m_bound=m_bound)


# ---------------------------------------------------------------------------
# probes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProbeConfig:
    """tau None means each trial draws its own target in the probe range."""

    n: int
    m_bound: int
    d: int
    trials: int
    seed: int
    tau: Optional[int] = None
    cset: str = "interval"
    solver: str = "mitm"

    def __post_init__(self):
        if self.n < 1 or self.m_bound < 1 or self.d < 1:
            raise ValueError("n, m_bound, d must be positive")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if not 0 <= self.seed < (1 << 64):
            raise ValueError("seed must fit in 64 bits")
        if self.cset not in ("interval", "punctured"):
            raise ValueError(f"unknown coefficient set kind {self.cset!r}")
        if self.solver not in ("mitm", "lattice", "both"):
            raise ValueError(f"unknown solver choice {self.solver!r}")


@dataclass(frozen=True)
class ProbeReport:
    """Exact frequencies over exactly cfg.trials samples; timings are
    wall-clock floats and carry no reproducibility promise."""

    config: ProbeConfig
    statuses: Tuple[str, ...]
    taus: Tuple[int, ...]
    existence_freq: Optional[Fraction] = None
    solver_success_freq: Optional[Fraction] = None
    guard_abort_freq: Optional[Fraction] = None
    outside_guarantee_regime: bool = False
    mean_wall: float = 0.0
    p50_wall: float = 0.0
    p90_wall: float = 0.0


def _percentile(samples, q: float) -> float:
    if not samples:
        return 0.0
    ordered = sorted(samples)
    idx = min(len(ordered) - 1, int(q * len(ordered)))
    return ordered[idx]


def _trial_tau(cfg: ProbeConfig, rng: SplitMix64) -> int:
    if cfg.tau is not None:
        return cfg.tau
    return rng.span(-TAU_PROBE_RANGE, TAU_PROBE_RANGE)


def _mode_for(tau: int) -> str:
    # tau 0 asks for a nonzero balancing witness, not the trivial c = 0
    return "balancing" if tau == 0 else "gss"


def _lattice_reference(inst: Instance, tau: int, d: int, cset: str,
                       budget: int, stats: Optional[dict] = None) -> Verdict:
    if cset == "punctured":
        return solve_gss_punctured(inst.x, tau, d, budget=budget, stats=stats)
    if tau == 0:
        return solve_sbp(inst.x, d, budget=budget, stats=stats)
    return solve_gss_interval(inst.x, tau, -d, d, budget=budget, stats=stats)


def probe_existence(
    cfg: ProbeConfig, budget: int = DEFAULT_POINT_BUDGET
) -> ProbeReport:
    """Fraction of sampled instances admitting a solution.

    The oracle is meet-in-the-middle by default; solver "lattice" swaps in
    the reduction-based solvers, and "both" runs the two and insists they
    agree on every trial.
    """
    statuses = []
    taus = []
    walls = []
    hits = 0
    for i in range(cfg.trials):
        rng = trial_stream(cfg.seed, i)
        tau = _trial_tau(cfg, rng)
        inst = sample_instance(cfg.n, cfg.m_bound, cfg.d, tau, cfg.cset, rng)
        mode = _mode_for(tau)
        t0 = time.perf_counter()
        if cfg.solver in ("mitm", "both"):
            v = mitm_solve(inst, mode)
        else:
            v = _lattice_reference(inst, tau, cfg.d, cfg.cset, budget)
        if cfg.solver == "both":
            w = _lattice_reference(inst, tau, cfg.d, cfg.cset, budget)
            if w.status != v.status:
                raise RuntimeError(
                    f"oracle disagreement on trial {i}: {v.status} vs {w.status}"
                )
        walls.append(time.perf_counter() - t0)
        statuses.append(v.status)
        taus.append(tau)
        if v.status == SOLVED:
            hits += 1
    return ProbeReport(
        config=cfg,
        statuses=tuple(statuses),
        taus=tuple(taus),
        existence_freq=Fraction(hits, cfg.trials),
        outside_guarantee_regime=cfg.m_bound < 4 ** cfg.n,
        mean_wall=sum(walls) / len(walls),
        p50_wall=_percentile(walls, 0.5),
        p90_wall=_percentile(walls, 0.9),
    )


def probe_avg_solver(
    cfg: ProbeConfig, budget: int = DEFAULT_POINT_BUDGET
) -> ProbeReport:
    """Agreement of the density-regime solver with meet-in-the-middle.

    A trial succeeds when the two statuses match, or when the solver
    returns Solved with a witness that verifies; an unverified witness
    never counts (it would fail the solver's own checks first).  Guard
    aborts are reported separately, and m_bound below 4^n flags the report
    as outside the regime where the enumeration radius provably covers
    every witness.
    """
    statuses = []
    taus = []
    walls = []
    agree = 0
    aborts = 0
    for i in range(cfg.trials):
        rng = trial_stream(cfg.seed, i)
        tau = _trial_tau(cfg, rng)
        inst = sample_instance(cfg.n, cfg.m_bound, cfg.d, tau, cfg.cset, rng)
        t0 = time.perf_counter()
        got = solve_gss_avg(
            inst.x, tau, cfg.d, cfg.m_bound, cfg.cset, budget=budget
        )
        walls.append(time.perf_counter() - t0)
        reference = mitm_solve(inst, _mode_for(tau))
        statuses.append(got.status)
        taus.append(tau)
        if got.status == GUARD_ABORT:
            aborts += 1
        ok = got.status == reference.status
        if got.status == SOLVED:
            ok = verify_solution(inst, got.witness, "gss")
        if ok:
            agree += 1
    return ProbeReport(
        config=cfg,
        statuses=tuple(statuses),
        taus=tuple(taus),
        solver_success_freq=Fraction(agree, cfg.trials),
        guard_abort_freq=Fraction(aborts, cfg.trials),
        outside_guarantee_regime=cfg.m_bound < 4 ** cfg.n,
        mean_wall=sum(walls) / len(walls),
        p50_wall=_percentile(walls, 0.5),
        p90_wall=_percentile(walls, 0.9),
    )


def report_json(report: ProbeReport, include_timing: bool = False) -> str:
    """Canonical JSON for a report: sorted keys, rationals as "p/q", big
    integers as decimal strings.  Timing fields only appear on request,
    keeping the default output reproducible byte for byte."""

    def frac(f: Optional[Fraction]):
        if f is None:
            return None
        return f"{f.numerator}/{f.denominator}"

    cfg = report.config
    doc = {
        "config": {
            "n": cfg.n,
            "m_bound": str(cfg.m_bound),
            "d": cfg.d,
            "trials": cfg.trials,
            "seed": str(cfg.seed),
            "tau": cfg.tau,
            "cset": cfg.cset,
            "solver": cfg.solver,
        },
        "statuses": list(report.statuses),
        "taus": list(report.taus),
        "existence_freq": frac(report.existence_freq),
        "solver_success_freq": frac(report.solver_success_freq),
        "guard_abort_freq": frac(report.guard_abort_freq),
        "outside_guarantee_regime": report.outside_guarantee_regime,
    }
    if include_timing:
        doc["mean_wall_s"] = report.mean_wall
        doc["p50_wall_s"] = report.p50_wall
        doc["p90_wall_s"] = report.p90_wall
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# benchmarks
# ---------------------------------------------------------------------------

BENCH_HEADER = (
    "solver", "n", "d", "M", "status", "wall_micros", "enumerated_points"
)

_SUITES = {
    "sbp-small": [
        {"n": n, "m_bound": 100, "d": d, "tau": 0, "cset": "interval",
         "solvers": ("brute", "mitm", "lattice")}
        for n in (3, 4, 5, 6) for d in (1, 2)
    ],
    "gss-small": [
        {"n": n, "m_bound": 100, "d": d, "tau": 17, "cset": cset,
         "solvers": ("mitm", "lattice")}
        for n in (3, 4, 5) for d in (1, 2)
        for cset in ("interval", "punctured")
    ],
    "avg-small": [
        {"n": n, "m_bound": 4 ** n, "d": 2, "tau": 5, "cset": "interval",
         "solvers": ("mitm", "avg")}
        for n in (4, 6, 8)
    ],
}

SUITE_NAMES = tuple(sorted(_SUITES))


def _bench_solve(solver: str, inst: Instance, run: dict, budget: int):
    stats: dict = {}
    tau = run["tau"]
    mode = _mode_for(tau)
    if solver == "brute":
        return brute_force_solve(inst, mode, budget), stats
    if solver == "mitm":
        return mitm_solve(inst, mode, budget), stats
    if solver == "lattice":
        v = _lattice_reference(inst, tau, run["d"], run["cset"], budget, stats)
        return v, stats
    if solver == "avg":
        v = solve_gss_avg(inst.x, tau, run["d"], run["m_bound"],
                          run["cset"], budget=budget, stats=stats)
        return v, stats
    raise ValueError(f"unknown bench solver {solver!r}")


def _load_suite(suite) -> list:
    if isinstance(suite, str) and suite in _SUITES:
        return _SUITES[suite]
    if isinstance(suite, (list, tuple)):
        runs = list(suite)
    else:
        if not (isinstance(suite, str) and os.path.exists(suite)):
            raise ValueError(f"unknown suite {suite!r}")
        with open(suite, "r", encoding="utf-8") as fh:
            runs = json.load(fh)
        if not isinstance(runs, list):
            raise ValueError("suite file must hold a list of runs")
    if not runs:
        raise ValueError("empty suite")
    out = []
    for entry in runs:
        run = {
            "n": int(entry["n"]),
            "m_bound": int(entry.get("m_bound", 100)),
            "d": int(entry["d"]),
            "tau": int(entry.get("tau", 0)),
            "cset": entry.get("cset", "interval"),
            "solvers": tuple(entry.get("solvers", ("mitm",))),
        }
        out.append(run)
    return out


def bench(suite, seed: int = 20240, budget: int = DEFAULT_POINT_BUDGET) -> list:
    """Rows of (solver, n, d, M, status, wall_micros, enumerated_points).

    suite is a built-in name, a path to a JSON list of run descriptors, or
    the list itself.  Instance columns are deterministic in the seed; wall
    times are informational only.
    """
    runs = _load_suite(suite)
    rows = []
    for idx, run in enumerate(runs):
        rng = trial_stream(seed, idx)
        tau = run["tau"]
        inst = sample_instance(
            run["n"], run["m_bound"], run["d"], tau, run["cset"], rng
        )
        for solver in run["solvers"]:
            t0 = time.perf_counter()
            verdict, stats = _bench_solve(solver, inst, run, budget)
            wall = time.perf_counter() - t0
            rows.append((
                solver,
                run["n"],
                run["d"],
                run["m_bound"],
                verdict.status,
                int(wall * 1_000_000),
                stats.get("ball_points", 0),
            ))
    return rows
