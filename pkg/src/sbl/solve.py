"""Balancing and generalized subset sum solvers.

Every solver here is a thin assembly of the same parts: build an embedding
or kernel lattice, run the exact enumerator in one of its guises, decode
the coefficients back out, and verify before returning.  Distances,
determinants, and guards are exact integers or rationals throughout, so a
Solved verdict is always accompanied by a checked witness and a NoSolution
verdict is a certificate, not a timeout.

The gap machinery: a decision at radius r accepts iff an oracle reports a
distance below r + 1.  Attainable sup distances on the shifted targets
fall on a fixed grid (integers, or integers plus one half) with nothing in
the open interval (r, r + 1), so acceptance pins the distance down to at
most r even when the oracle overstates it by a factor gamma < (r+1)/r.
The capped oracle realizes this with a single ball of radius r; rejection
reports r + 1, which is sound on grid lattices since the true distance
can only be the next grid value up.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Optional, Sequence, Tuple

from .core import (
    BudgetExceeded,
    Box,
    Instance,
    Interval,
    Punctured,
    Verdict,
    ceil_root,
    dot,
    gcd_vector,
    iroot,
    l2_sq,
    linf,
    verify_solution,
)
from .enumeration import (
    DEFAULT_POINT_BUDGET,
    BallQuery,
    _coords_of,
    _nearest_plane,
    cvp_inf,
    enum_ball,
    svp_gauge,
    svp_inf,
)
from .lattice import (
    GaugeBody,
    LatticeBasis,
    choose_params,
    embedding_basis,
    full_rank_completion,
    gauge_sq,
    interval_shift_target,
    kernel_basis,
    sign_pattern_target,
)
from .reduction import gram_schmidt, lll_reduce, lll_threshold

__all__ = [
    "SIGN_PATTERN_CAP",
    "INTEGER",
    "HALF_INTEGER",
    "ThresholdUnmet",
    "GapConfigError",
    "GapVerdict",
    "ApproxCvpOracle",
    "exact_cvp_oracle",
    "capped_cvp_oracle",
    "gap_decide",
    "check_minkowski",
    "solve_sbp",
    "solve_sbp_lll",
    "solve_sbp_body",
    "solve_gss_interval",
    "solve_gss_punctured",
    "solve_gss_avg",
    "cvp_via_gap_search",
]

# 2^n sign patterns; beyond this the loop alone is hopeless
SIGN_PATTERN_CAP = 24

INTEGER = "integer"
HALF_INTEGER = "half_integer"
_GRIDS = (INTEGER, HALF_INTEGER)


class ThresholdUnmet(ValueError):
    """The reduction guarantee does not apply at this coefficient bound."""


class GapConfigError(ValueError):
    """Oracle approximation factor too large for the requested radius."""


def _tally(stats: Optional[dict], key: str, amount: int) -> None:
    if stats is not None:
        stats[key] = stats.get(key, 0) + amount


# ---------------------------------------------------------------------------
# existence certificate
# ---------------------------------------------------------------------------

def check_minkowski(x: Sequence[int], d: int) -> bool:
    """One-sided existence certificate for balancing with |c_i| <= d.

    True iff |x|_2^2 / gcd^2 < (d+1)^(2(n-1)), an exact integer-free
    comparison of squares.  True guarantees a nonzero balanced c exists;
    False says nothing.
    """
    if d < 1:
        raise ValueError("coefficient bound must be positive")
    xs = tuple(int(v) for v in x)
    g = gcd_vector(xs)
    n = len(xs)
    return Fraction(l2_sq(xs), g * g) < Fraction(d + 1) ** (2 * (n - 1))


# ---------------------------------------------------------------------------
# balancing solvers
# ---------------------------------------------------------------------------

def solve_sbp(
    x: Sequence[int],
    d: int,
    budget: int = DEFAULT_POINT_BUDGET,
    stats: Optional[dict] = None,
) -> Verdict:
    """Decide balancing with coefficients in [-d, d] by one sup-norm
    shortest vector call on the embedding lattice.

    Any nonzero embedded vector of sup norm <= d has first coordinate
    zero and decodes to a balanced c; absence of one is a proof of
    NoSolution.
    """
    xs = tuple(int(v) for v in x)
    params = choose_params(xs, d, 0, "sbp")
    basis = embedding_basis(xs, params)
    res = svp_inf(basis, cap=d, budget=budget)
    _tally(stats, "ball_points", res.ball_count)
    if not res.found:
        return Verdict.no_solution("no nonzero lattice vector within the bound")
    v = res.witness
    assert v[0] == 0
    c = v[1:]
    assert verify_solution(Instance(xs, Box(d)), c, "balancing")
    return Verdict.solved(c)


def solve_sbp_lll(x: Sequence[int], d: int) -> Verdict:
    """Polynomial-time balancing when the bound clears the reduction
    threshold: the first reduced kernel vector already fits."""
    if d < 1:
        raise ValueError("coefficient bound must be positive")
    xs = tuple(int(v) for v in x)
    gcd_vector(xs)
    if len(xs) < 2 or not lll_threshold(xs, d):
        raise ThresholdUnmet(
            "bound below the reduction guarantee; use solve_sbp"
        )
    red = lll_reduce(kernel_basis(xs))
    c = red.rows[0]
    assert linf(c) <= d and dot(c, xs) == 0
    assert verify_solution(Instance(xs, Box(d)), c, "balancing")
    return Verdict.solved(c)


def solve_sbp_body(
    x: Sequence[int],
    body: GaugeBody,
    budget: int = DEFAULT_POINT_BUDGET,
    stats: Optional[dict] = None,
) -> Verdict:
    """Balancing over an arbitrary box or ellipsoid coefficient body.

    Completes the orthogonal lattice of x to full rank in a way that
    cannot add points inside the body, then takes one gauge-shortest
    vector call; gauge <= 1 is exactly membership.
    """
    xs = tuple(int(v) for v in x)
    basis, _q = full_rank_completion(xs, body)
    res = svp_gauge(basis, body, budget=budget)
    _tally(stats, "ball_points", res.ball_count)
    c = res.witness
    if gauge_sq(body, c) > 1:
        return Verdict.no_solution("shortest gauge vector lies outside the body")
    assert dot(c, xs) == 0
    assert body.contains(c)
    return Verdict.solved(c)


# ---------------------------------------------------------------------------
# the gap decision
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GapVerdict:
    """Outcome of one gap query; vector is present exactly on accept."""

    accept: bool
    reported_dist: Fraction
    threshold_r: Fraction
    vector: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True)
class ApproxCvpOracle:
    """A closest-vector oracle with a stated overestimation factor.

    solver(basis, target) returns (vector, reported) with
    |vector - target|_inf <= reported <= gamma * dist(target, L); the
    vector may be None when reported certifies a rejection on its own.
    """

    gamma: Fraction
    solver: Callable

    def __post_init__(self):
        object.__setattr__(self, "gamma", Fraction(self.gamma))
        if self.gamma < 1:
            raise ValueError("gamma must be at least 1")


def exact_cvp_oracle(budget: int = DEFAULT_POINT_BUDGET) -> ApproxCvpOracle:
    """The enumerator as a gamma = 1 oracle: exact distance, exact witness."""

    def solver(basis: LatticeBasis, target):
        res = cvp_inf(basis, target, budget=budget)
        return res.witness, res.dist

    return ApproxCvpOracle(Fraction(1), solver)


def capped_cvp_oracle(
    r,
    budget: int = DEFAULT_POINT_BUDGET,
    assume_reduced: bool = False,
    stats: Optional[dict] = None,
) -> ApproxCvpOracle:
    """A gamma = 1 oracle answering only up to radius r with a single ball.

    When nothing lies within r it reports r + 1 with no vector, which is a
    valid distance lower bound exactly when attainable distances skip the
    open interval (r, r + 1); use it only on grid-structured targets.
    """
    r = Fraction(r)
    if r < 0:
        raise ValueError("radius must be nonnegative")

    def solver(basis: LatticeBasis, target):
        res = cvp_inf(
            basis, target, cap=r, budget=budget, assume_reduced=assume_reduced
        )
        _tally(stats, "ball_points", res.ball_count)
        if res.found:
            return res.witness, res.dist
        return None, r + 1

    return ApproxCvpOracle(Fraction(1), solver)


def _on_grid(value: Fraction, grid: str) -> bool:
    if grid == INTEGER:
        return value.denominator == 1
    return value.denominator == 2


def gap_decide(
    oracle: ApproxCvpOracle,
    basis: LatticeBasis,
    target,
    r,
    grid: str,
) -> GapVerdict:
    """Accept iff the oracle reports a distance below r + 1.

    Requires gamma < (r+1)/r for r > 0 and attainable distances on the
    declared grid.  Acceptance then guarantees the oracle's vector lies
    within r (its true distance is below r + 1 and on the grid), and
    rejection guarantees the true distance exceeds r (it is at least
    reported / gamma >= (r+1)/gamma > r).
    """
    if grid not in _GRIDS:
        raise ValueError(f"unknown grid {grid!r}")
    r = Fraction(r)
    if r < 0:
        raise ValueError("radius must be nonnegative")
    if r > 0 and oracle.gamma * r >= r + 1:
        raise GapConfigError(
            f"gamma {oracle.gamma} breaks the gap at radius {r}; "
            f"need gamma < {Fraction(r + 1, 1) / r}"
        )
    vector, reported = oracle.solver(basis, target)
    reported = Fraction(reported)
    if reported >= r + 1:
        return GapVerdict(False, reported, r)
    assert vector is not None
    tgt = tuple(Fraction(t) for t in target)
    exact = max(
        (abs(Fraction(a) - b) for a, b in zip(vector, tgt)),
        default=Fraction(0),
    )
    assert exact <= reported
    assert _on_grid(exact, grid) and exact <= r
    return GapVerdict(True, reported, r, tuple(int(v) for v in vector))


# ---------------------------------------------------------------------------
# generalized subset sum, worst case
# ---------------------------------------------------------------------------

def solve_gss_interval(
    x: Sequence[int],
    tau: int,
    a: int,
    b: int,
    budget: int = DEFAULT_POINT_BUDGET,
    stats: Optional[dict] = None,
) -> Verdict:
    """c.x = tau with every c_i in [a, b], by one gap decision.

    The target centers every coefficient coordinate on the interval
    midpoint; radius (b-a)/2 covers exactly the admissible range, and the
    first coordinate forces the sum because alpha exceeds the radius.
    """
    if a > b:
        raise ValueError("interval requires a <= b")
    xs = tuple(int(v) for v in x)
    gcd_vector(xs)
    tau = int(tau)
    n = len(xs)
    inst = Instance(xs, Interval(a, b), tau=tau)
    if a == b:
        c = (a,) * n
        if dot(c, xs) == tau:
            return Verdict.solved(c)
        return Verdict.no_solution("constant interval misses the target sum")
    d = max(abs(a), abs(b))
    params = choose_params(xs, d, tau, "gss_worst")
    basis = embedding_basis(xs, params)
    target, r = interval_shift_target(tau, params.alpha, a, b, n)
    grid = INTEGER if (b - a) % 2 == 0 else HALF_INTEGER
    oracle = capped_cvp_oracle(r, budget=budget, stats=stats)
    gv = gap_decide(oracle, basis, target, r, grid)
    if not gv.accept:
        return Verdict.no_solution("gap decision rejected")
    c = gv.vector[1:]
    assert verify_solution(inst, c, "gss")
    return Verdict.solved(c)


def solve_gss_punctured(
    x: Sequence[int],
    tau: int,
    d: int,
    budget: int = DEFAULT_POINT_BUDGET,
    stats: Optional[dict] = None,
) -> Verdict:
    """c.x = tau with 1 <= |c_i| <= d, via one gap decision per sign
    pattern.

    Pattern s centers coordinate i on s_i (d+1)/2 with radius (d-1)/2, so
    a hit is exactly a coefficient vector of signs s.  Patterns run in
    lexicographic order with -1 before +1; the first acceptance wins.
    Realized accepted distances land on the integers for odd d and on
    integers plus one half for even d, which is what makes the radius
    decision exact.
    """
    if d < 1:
        raise ValueError("coefficient bound must be positive")
    xs = tuple(int(v) for v in x)
    gcd_vector(xs)
    tau = int(tau)
    n = len(xs)
    if n > SIGN_PATTERN_CAP:
        raise BudgetExceeded(
            f"{n} coordinates means 2^{n} sign patterns; cap is "
            f"2^{SIGN_PATTERN_CAP}"
        )
    inst = Instance(xs, Punctured(d), tau=tau)
    params = choose_params(xs, d, tau, "gss_worst")
    basis = lll_reduce(embedding_basis(xs, params))
    grid = INTEGER if d % 2 == 1 else HALF_INTEGER
    radius = Fraction(d - 1, 2)
    oracle = capped_cvp_oracle(
        radius, budget=budget, assume_reduced=True, stats=stats
    )
    for signs in product((-1, 1), repeat=n):
        target, r = sign_pattern_target(tau, params.alpha, d, signs)
        assert r == radius
        gv = gap_decide(oracle, basis, target, r, grid)
        _tally(stats, "patterns_tried", 1)
        if gv.accept:
            c = gv.vector[1:]
            assert all(v * s > 0 for v, s in zip(c, signs))
            assert verify_solution(inst, c, "gss")
            return Verdict.solved(c)
    return Verdict.no_solution("every sign pattern rejected")


# ---------------------------------------------------------------------------
# generalized subset sum, average-case parameters
# ---------------------------------------------------------------------------

def solve_gss_avg(
    x: Sequence[int],
    tau: int,
    d: int,
    m_bound: int,
    cset: str = "interval",
    budget: int = DEFAULT_POINT_BUDGET,
    stats: Optional[dict] = None,
) -> Verdict:
    """Density-regime solver: wrapper bound, short-vector guard, then one
    ball around the target.

    For m_bound above |C|^(2n) a solution is overwhelmingly unlikely and
    NoSolution is returned outright.  The guard aborts when the lattice
    has a sup-short nonzero vector (length at most M^(1/n)/4, tested as
    the integer inequality (4 lambda)^n <= M), since then the ball may
    hold too many points to list.  Otherwise every lattice point within
    sup distance d of the target decodes to a witness; the ball of
    squared radius (n+1) ceil(M^(1/n))^2 provably contains them all.
    """
    if d < 1:
        raise ValueError("coefficient bound must be positive")
    if m_bound < 1:
        raise ValueError("m_bound must be positive")
    if cset not in ("interval", "punctured"):
        raise ValueError(f"unknown coefficient set kind {cset!r}")
    xs = tuple(int(v) for v in x)
    gcd_vector(xs)
    tau = int(tau)
    n = len(xs)
    size = 2 * d + 1 if cset == "interval" else 2 * d
    if m_bound > size ** (2 * n):
        return Verdict.no_solution("modulus bound above squared coefficient count")
    coeffs = Interval(-d, d) if cset == "interval" else Punctured(d)
    inst = Instance(xs, coeffs, tau=tau, m_bound=m_bound)
    params = choose_params(xs, d, tau, "gss_avg", m_bound=m_bound)
    basis = lll_reduce(embedding_basis(xs, params))
    if stats is not None:
        stats["alpha"] = params.alpha
        stats["q"] = params.q
    guard_cap = iroot(m_bound, n) // 4
    if guard_cap >= 1:
        gres = svp_inf(basis, cap=guard_cap, budget=budget, assume_reduced=True)
        _tally(stats, "ball_points", gres.ball_count)
        if gres.found:
            assert (4 * gres.value) ** n <= m_bound
            return Verdict.guard_abort(
                f"nonzero lattice vector of sup norm {gres.value} within the guard"
            )
    radius = ceil_root(m_bound, n)
    target = tuple(Fraction(t) for t in params.target)
    ball = enum_ball(
        BallQuery(basis, target, Fraction(radius * radius * (n + 1))),
        budget=budget,
        assume_reduced=True,
    )
    _tally(stats, "ball_points", ball.count)
    for v in ball.points:
        if any(abs(a - t) > d for a, t in zip(v, params.target)):
            continue
        c = v[1:]
        if cset == "punctured" and any(vi == 0 for vi in c):
            continue
        assert v[0] == params.alpha * tau
        assert verify_solution(inst, c, "gss")
        return Verdict.solved(c)
    return Verdict.no_solution("no lattice point near the target decodes")


# ---------------------------------------------------------------------------
# gap oracle to approximate distances
# ---------------------------------------------------------------------------

def cvp_via_gap_search(
    basis: LatticeBasis,
    target,
    grid: str = INTEGER,
    r_max=None,
    oracle_factory: Optional[Callable] = None,
    budget: int = DEFAULT_POINT_BUDGET,
) -> Tuple[Tuple[int, ...], Fraction]:
    """Recover a closest vector from gap decisions alone by binary search
    over grid radii.

    oracle_factory(r) supplies the oracle probed at radius r; the default
    is the exact capped oracle, making the result an exact closest vector
    on grid-structured targets.  The search needs an accepting radius to
    start from; r_max defaults to the rounding bound of a nearest-plane
    walk, which always accepts.
    """
    if grid not in _GRIDS:
        raise ValueError(f"unknown grid {grid!r}")
    red = lll_reduce(basis)
    tgt = tuple(Fraction(t) for t in target)
    if oracle_factory is None:
        def oracle_factory(rr):
            return capped_cvp_oracle(rr, budget=budget, assume_reduced=True)
    base = Fraction(0) if grid == INTEGER else Fraction(1, 2)
    if r_max is None:
        gso = gram_schmidt(red)
        tau = _coords_of(red, tgt)
        v0 = _nearest_plane(red, gso, tau)
        d0 = max(
            (abs(Fraction(a) - b) for a, b in zip(v0, tgt)),
            default=Fraction(0),
        )
        if d0 > base:
            f = d0 - base
            steps = -((-f.numerator) // f.denominator)
        else:
            steps = 0
        r_max = base + steps
    r_max = Fraction(r_max)
    if r_max < base or (r_max - base).denominator != 1:
        raise ValueError("r_max must lie on the declared grid")
    hi = int(r_max - base)
    gv = gap_decide(oracle_factory(r_max), red, tgt, r_max, grid)
    if not gv.accept:
        raise ValueError("no lattice vector within r_max of the target")
    best = gv.vector
    lo = 0
    while lo < hi:
        mid = (lo + hi) // 2
        r = base + mid
        gv = gap_decide(oracle_factory(r), red, tgt, r, grid)
        if gv.accept:
            hi = mid
            best = gv.vector
        else:
            lo = mid + 1
    dist = max(
        (abs(Fraction(a) - b) for a, b in zip(best, tgt)),
        default=Fraction(0),
    )
    return tuple(best), dist
