"""Exact lattice point enumeration and the searches built on it.

enum_ball lists every lattice point inside a translated Euclidean ball by a
depth-first walk over Gram-Schmidt interval bounds of an LLL-reduced basis.
Each level bounds one coefficient by an exact rational quadratic predicate;
the integer range is located with an integer square root and then sharpened
by the predicate itself, so the listing is provably complete.  Points come
back sorted lexicographically, which fixes every downstream tie-break.

svp_inf and cvp_inf answer sup-norm questions through Euclidean balls: a
sup ball of radius d sits inside the Euclidean ball of radius d*sqrt(m), so
enumerating the latter and filtering exactly is complete.  Both support a
cap: a single ball decides "is there a vector within cap" and certifies the
answer, which is what the solvers need, while the uncapped forms grow the
radius geometrically from an exact lower bound until the answer appears.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .core import (
    BudgetExceeded,
    Box,
    Ellipsoid,
    dot,
    floor_sqrt_frac,
    is_positive_definite,
    l2_sq,
    linf,
    mat_solve,
)
from .lattice import GaugeBody, LatticeBasis, gauge_norm, gauge_sq
from .reduction import gram_schmidt, lll_reduce

__all__ = [
    "DEFAULT_POINT_BUDGET",
    "BallQuery",
    "EnumerationResult",
    "enum_ball",
    "SvpResult",
    "svp_inf",
    "CvpResult",
    "cvp_inf",
    "GaugeResult",
    "svp_gauge",
]

DEFAULT_POINT_BUDGET = 10_000_000


@dataclass(frozen=True)
class BallQuery:
    """A lattice, a rational center, and a squared radius."""

    basis: LatticeBasis
    center: Tuple[Fraction, ...]
    radius_sq: Fraction

    def __post_init__(self):
        object.__setattr__(
            self, "center", tuple(Fraction(c) for c in self.center)
        )
        object.__setattr__(self, "radius_sq", Fraction(self.radius_sq))
        if len(self.center) != self.basis.dim:
            raise ValueError("center dimension does not match the basis")
        if self.radius_sq < 0:
            raise ValueError("radius_sq must be nonnegative")


@dataclass(frozen=True)
class EnumerationResult:
    points: Tuple[Tuple[int, ...], ...]
    count: int


def _coords_of(basis: LatticeBasis, point) -> tuple:
    """Coordinates of a rational point in the row span, via the Gram system."""
    rows = basis.rows
    gram = [[dot(a, b) for b in rows] for a in rows]
    rhs = [dot(row, point) for row in rows]
    return mat_solve(gram, rhs)


def enum_ball(
    query: BallQuery,
    budget: int = DEFAULT_POINT_BUDGET,
    assume_reduced: bool = False,
) -> EnumerationResult:
    """All lattice points v with |v - center|_2^2 <= radius_sq.

    The basis may have rank below the ambient dimension; the center's
    component orthogonal to the span is then a fixed cost subtracted from
    the radius.  Raises BudgetExceeded rather than returning a truncated
    listing.
    """
    basis = query.basis
    rank = basis.rank
    center = query.center
    if rank == 0:
        inside = l2_sq(center) <= query.radius_sq
        pts = (tuple([0] * basis.dim),) if inside else ()
        return EnumerationResult(pts, len(pts))
    red = basis if (assume_reduced or rank < 2) else lll_reduce(basis)
    rows = red.rows
    m = red.dim
    gso = gram_schmidt(red)
    mu, bsq = gso.mu, gso.b_star_sq
    tau = _coords_of(red, center)
    proj = [Fraction(0)] * m
    for i in range(rank):
        t = tau[i]
        if t:
            row = rows[i]
            for j in range(m):
                proj[j] += t * row[j]
    orth_sq = sum((a - b) ** 2 for a, b in zip(center, proj))
    rem0 = query.radius_sq - orth_sq
    if rem0 < 0:
        return EnumerationResult((), 0)

    out: list = []
    cacc = [Fraction(0)] * rank  # cacc[i] = sum_{j > level} mu[j][i] * w_j
    acc = [0] * m  # running integer point

    def descend(level: int, rem: Fraction) -> None:
        b2 = bsq[level]
        e = tau[level] - cacc[level]
        span = floor_sqrt_frac(rem / b2)
        z = (e.numerator // e.denominator) - span - 1
        while True:
            diff = z - e
            contrib = b2 * diff * diff
            if contrib <= rem:
                if level == 0:
                    if len(out) >= budget:
                        raise BudgetExceeded(
                            f"ball holds more than {budget} points",
                            partial=len(out),
                        )
                    row = rows[0]
                    out.append(tuple(a + z * b for a, b in zip(acc, row)))
                else:
                    w = z - tau[level]
                    mrow = mu[level]
                    for i in range(level):
                        cacc[i] += mrow[i] * w
                    row = rows[level]
                    for i in range(m):
                        acc[i] += z * row[i]
                    descend(level - 1, rem - contrib)
                    for i in range(m):
                        acc[i] -= z * row[i]
                    for i in range(level):
                        cacc[i] -= mrow[i] * w
            elif diff > 0:
                break
            z += 1

    descend(rank - 1, rem0)
    out.sort()
    return EnumerationResult(tuple(out), len(out))


# ---------------------------------------------------------------------------
# sup-norm shortest vector
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SvpResult:
    """found is False only for capped searches, certifying value > cap."""

    found: bool
    value: Optional[int]
    witness: Optional[Tuple[int, ...]]
    ball_count: int
    start_radius_sq: Optional[Fraction] = None


def _min_sup_nonzero(points, bound_sq: Fraction):
    """Smallest sup norm among nonzero points not exceeding the bound, with
    the lexicographically least witness; None when no point qualifies."""
    best = None
    for p in points:
        if not any(p):
            continue
        s = linf(p)
        if Fraction(s * s) > bound_sq:
            continue
        key = (s, p)
        if best is None or key < best:
            best = key
    return best


def svp_inf(
    basis: LatticeBasis,
    eps: Optional[Fraction] = None,
    cap: Optional[int] = None,
    budget: int = DEFAULT_POINT_BUDGET,
    assume_reduced: bool = False,
) -> SvpResult:
    """Exact sup-norm shortest vector.

    With cap set, one ball of squared radius cap^2 * m decides whether the
    minimum is <= cap; found=False certifies it is larger.  Without a cap
    the search starts at the exact Euclidean minimum over sqrt(m), which
    never exceeds the sup-norm minimum, and grows the radius by (1 + eps)
    until the filter is nonempty; the first nonempty filter contains every
    vector of sup norm <= the current bound, so its minimum is exact.
    """
    if basis.rank == 0:
        raise ValueError("empty lattice")
    red = basis if assume_reduced else lll_reduce(basis)
    m = red.dim
    zero = (Fraction(0),) * m

    if cap is not None:
        if cap < 0:
            raise ValueError("cap must be nonnegative")
        cap_sq = Fraction(cap * cap)
        res = enum_ball(
            BallQuery(red, zero, cap_sq * m), budget, assume_reduced=True
        )
        best = _min_sup_nonzero(res.points, cap_sq)
        if best is None:
            return SvpResult(False, None, None, res.count)
        return SvpResult(True, best[0], best[1], res.count)

    if eps is None:
        eps = Fraction(1, m)
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    b1_sq = Fraction(l2_sq(red.rows[0]))
    ball = enum_ball(BallQuery(red, zero, b1_sq), budget, assume_reduced=True)
    lam2_sq = min(l2_sq(p) for p in ball.points if any(p))
    d_sq = Fraction(lam2_sq, m)
    start_sq = d_sq
    growth = (1 + eps) ** 2
    while True:
        res = enum_ball(
            BallQuery(red, zero, d_sq * m), budget, assume_reduced=True
        )
        best = _min_sup_nonzero(res.points, d_sq)
        if best is not None:
            value, witness = best
            # start radius never exceeds the sup minimum
            assert start_sq <= Fraction(value * value)
            return SvpResult(True, value, witness, res.count, start_sq)
        d_sq *= growth


# ---------------------------------------------------------------------------
# sup-norm closest vector
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CvpResult:
    """found is False only for capped searches, certifying dist > cap."""

    found: bool
    dist: Optional[Fraction]
    witness: Optional[Tuple[int, ...]]
    ball_count: int


def _sup_dist(point, center) -> Fraction:
    return max((abs(a - b) for a, b in zip(point, center)), default=Fraction(0))


def _min_sup_to(points, center, bound_sq: Fraction):
    best = None
    for p in points:
        s = _sup_dist(p, center)
        if s * s > bound_sq:
            continue
        key = (s, p)
        if best is None or key < best:
            best = key
    return best


def _nearest_plane(red: LatticeBasis, gso, tau) -> tuple:
    """Babai rounding in the Gram-Schmidt frame; a cheap upper bound."""
    rank = red.rank
    mu = gso.mu
    z = [0] * rank
    for i in range(rank - 1, -1, -1):
        c = tau[i]
        for j in range(i + 1, rank):
            c -= mu[j][i] * (z[j] - tau[j])
        half = c + Fraction(1, 2)
        z[i] = half.numerator // half.denominator
    point = [0] * red.dim
    for i in range(rank):
        if z[i]:
            row = red.rows[i]
            for j in range(red.dim):
                point[j] += z[i] * row[j]
    return tuple(point)


def cvp_inf(
    basis: LatticeBasis,
    target,
    cap: Optional[Fraction] = None,
    budget: int = DEFAULT_POINT_BUDGET,
    assume_reduced: bool = False,
) -> CvpResult:
    """Exact sup-norm closest vector to a rational target.

    With cap set, one ball decides whether some lattice vector lies within
    sup distance cap, returning the exact minimum and lexicographically
    least witness if so; found=False certifies the distance exceeds cap.
    Without a cap the radius grows from a Babai-derived start until a
    vector passes the sup filter; any nonempty filter contains the true
    closest vector, so the result is exact.
    """
    if basis.rank == 0:
        raise ValueError("empty lattice")
    red = basis if assume_reduced else lll_reduce(basis)
    m = red.dim
    tgt = tuple(Fraction(c) for c in target)
    if len(tgt) != m:
        raise ValueError("target dimension does not match the basis")

    if cap is not None:
        cap = Fraction(cap)
        if cap < 0:
            raise ValueError("cap must be nonnegative")
        res = enum_ball(
            BallQuery(red, tgt, cap * cap * m), budget, assume_reduced=True
        )
        best = _min_sup_to(res.points, tgt, cap * cap)
        if best is None:
            return CvpResult(False, None, None, res.count)
        return CvpResult(True, best[0], best[1], res.count)

    gso = gram_schmidt(red)
    tau = _coords_of(red, tgt)
    v0 = _nearest_plane(red, gso, tau)
    d0 = _sup_dist(v0, tgt)
    if d0 == 0:
        return CvpResult(True, Fraction(0), v0, 0)
    d_sq = d0 * d0 / m
    growth = (1 + Fraction(1, m)) ** 2
    while True:
        res = enum_ball(
            BallQuery(red, tgt, d_sq * m), budget, assume_reduced=True
        )
        best = _min_sup_to(res.points, tgt, d_sq)
        if best is not None:
            return CvpResult(True, best[0], best[1], res.count)
        d_sq *= growth


# ---------------------------------------------------------------------------
# shortest vector under a convex body gauge
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaugeResult:
    value: Fraction  # gauge for a box, squared gauge for an ellipsoid
    witness: Tuple[int, ...]
    ball_count: int


def _pd_lower_bound(ell: Ellipsoid) -> Fraction:
    """A positive rational strictly below the least eigenvalue of A,
    found by halving until A - mu*I is positive definite."""
    n = ell.dim
    mu = min(ell.a[i][i] for i in range(n))
    while True:
        shifted = [
            [ell.a[i][j] - (mu if i == j else 0) for j in range(n)]
            for i in range(n)
        ]
        if is_positive_definite(shifted):
            return mu
        mu /= 2


def svp_gauge(
    basis: LatticeBasis,
    body: GaugeBody,
    budget: int = DEFAULT_POINT_BUDGET,
) -> GaugeResult:
    """Nonzero lattice vector minimizing the body's gauge, exactly.

    A shortest Euclidean vector gives an upper bound g on the squared
    gauge; every vector of squared gauge <= g lies in a Euclidean ball
    whose radius comes from d*sqrt(m) (box) or the least eigenvalue of the
    form (ellipsoid), so one enumeration is complete.
    """
    if basis.rank == 0:
        raise ValueError("empty lattice")
    red = lll_reduce(basis)
    m = red.dim
    zero = (Fraction(0),) * m
    b1_sq = Fraction(l2_sq(red.rows[0]))
    ball = enum_ball(BallQuery(red, zero, b1_sq), budget, assume_reduced=True)
    u = min(
        (p for p in ball.points if any(p)),
        key=lambda p: (l2_sq(p), p),
    )
    g0 = gauge_sq(body, u)
    assert g0 > 0
    if isinstance(body, Box):
        radius_sq = Fraction(m * body.d * body.d) * g0
    else:
        radius_sq = g0 / _pd_lower_bound(body)
    res = enum_ball(
        BallQuery(red, zero, radius_sq), budget, assume_reduced=True
    )
    best = min(
        (p for p in res.points if any(p)),
        key=lambda p: (gauge_sq(body, p), p),
    )
    return GaugeResult(gauge_norm(body, best), best, res.count)
