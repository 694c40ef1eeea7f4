"""Lattice constructions behind the solvers.

kernel_basis extracts an integer basis of the rank n-1 lattice of integer
vectors orthogonal to x.  embedding_basis builds the scaled
(n+1)-dimensional lattice whose short or close vectors encode solutions,
with parameters chosen so that membership in a small box forces the first
coordinate to vanish.  Shifted targets for the closest-vector reductions
and gauge norms for convex coefficient bodies live here too.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple, Union

from .core import (
    Box,
    Ellipsoid,
    ceil_root,
    dot,
    gcd_vector,
    l2_sq,
    linf,
)

GaugeBody = Union[Box, Ellipsoid]


@dataclass(frozen=True)
class LatticeBasis:
    """Row-major integer basis.

    Construction checks the shape only.  Linear independence is enforced by
    the Gram-Schmidt and reduction entry points, which reject dependent rows
    with an exact test; everything built here is independent by
    construction.
    """

    rows: Tuple[Tuple[int, ...], ...]
    dim: int

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        if any(len(r) != self.dim for r in rows):
            raise ValueError("row length does not match dim")
        if len(rows) > self.dim:
            raise ValueError("more rows than the ambient dimension")

    @property
    def rank(self) -> int:
        return len(self.rows)


def _round_div(a: int, b: int) -> int:
    """Nearest integer to a/b for b > 0 (ties toward +inf)."""
    return (2 * a + b) // (2 * b)


def kernel_basis(x: Sequence[int]) -> LatticeBasis:
    """Basis of the integer vectors orthogonal to x, rank n-1.

    A unimodular row transform U is accumulated while the working copy of x
    is reduced, by centered division against the smallest nonzero entry,
    down to a single nonzero entry (the gcd up to sign).  The rows of U that
    map to zeroed entries are the kernel basis.
    """
    xs = tuple(int(v) for v in x)
    if not xs or all(v == 0 for v in xs):
        raise ValueError("zero vector")
    n = len(xs)
    y = list(xs)
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    while True:
        nz = [i for i in range(n) if y[i] != 0]
        if len(nz) == 1:
            break
        p = min(nz, key=lambda i: (abs(y[i]), i))
        if y[p] < 0:
            y[p] = -y[p]
            u[p] = [-a for a in u[p]]
        for j in nz:
            if j == p:
                continue
            q = _round_div(y[j], y[p])
            if q:
                y[j] -= q * y[p]
                u[j] = [a - q * b for a, b in zip(u[j], u[p])]
    pivot = next(i for i in range(n) if y[i] != 0)
    rows = tuple(tuple(u[i]) for i in range(n) if i != pivot)
    for r in rows:
        assert dot(r, xs) == 0
    return LatticeBasis(rows, n)


def kernel_det_sq(x: Sequence[int]) -> Fraction:
    """Squared determinant of the orthogonal lattice: |x|^2 / gcd(x)^2."""
    xs = tuple(int(v) for v in x)
    g = gcd_vector(xs)
    return Fraction(l2_sq(xs), g * g)


@dataclass(frozen=True)
class EmbeddingParams:
    """Scale alpha, modulus q, and the default target of the embedding."""

    alpha: int
    q: int
    target: Tuple[int, ...]


def choose_params(
    x: Sequence[int],
    d: int,
    tau: int = 0,
    mode: str = "sbp",
    m_bound=None,
) -> EmbeddingParams:
    """Embedding parameters for the given solving mode.

    sbp:        alpha = d+1, q = d*sum|x_i| + 1, zero target.
    gss_worst:  alpha = d+1, q = d*sum|x_i| + |tau| + 1, target alpha*tau.
    gss_avg:    alpha = max(d+1, ceil(m_bound**(1/n))),
                q = alpha*sum|x_i| + |tau| + 1, target alpha*tau.

    In every mode alpha exceeds d and q exceeds the largest |sum c_i x_i -
    tau| reachable with |c_i| <= d, which is what makes small vectors of the
    embedding decode to solutions.
    """
    xs = tuple(int(v) for v in x)
    if not xs or all(v == 0 for v in xs):
        raise ValueError("zero vector")
    if d < 1:
        raise ValueError("coefficient bound must be positive")
    sum_abs = sum(abs(v) for v in xs)
    tau = int(tau)
    if mode == "sbp":
        tau = 0
        alpha = d + 1
        q = d * sum_abs + 1
    elif mode == "gss_worst":
        alpha = d + 1
        q = d * sum_abs + abs(tau) + 1
    elif mode == "gss_avg":
        if m_bound is None:
            raise ValueError("m_bound required for gss_avg")
        m_bound = int(m_bound)
        if m_bound < 1:
            raise ValueError("m_bound must be positive")
        alpha = max(d + 1, ceil_root(m_bound, len(xs)))
        q = alpha * sum_abs + abs(tau) + 1
    else:
        raise ValueError(f"unknown mode {mode!r}")
    assert alpha > d and q > d * sum_abs + (0 if mode == "sbp" else abs(tau))
    target = (alpha * tau,) + (0,) * len(xs)
    return EmbeddingParams(alpha, q, target)


def embedding_basis(x: Sequence[int], params: EmbeddingParams) -> LatticeBasis:
    """Rows (alpha*q, 0) and (alpha*x_i, e_i): determinant alpha*q."""
    xs = tuple(int(v) for v in x)
    n = len(xs)
    rows = [(params.alpha * params.q,) + (0,) * n]
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rows.append((params.alpha * xs[i],) + tuple(e))
    return LatticeBasis(tuple(rows), n + 1)


def sign_pattern_target(
    tau: int, alpha: int, d: int, signs: Sequence[int]
) -> Tuple[Tuple[Fraction, ...], Fraction]:
    """Target for one sign pattern and the matching decision radius.

    Coordinates i >= 1 sit at s_i*(d+1)/2, the midpoint of the positive or
    negative coefficient range; the radius (d-1)/2 spans exactly that
    range.  Attainable sup distances then live on the integers for odd d
    and on Z + 1/2 for even d.
    """
    if d < 1:
        raise ValueError("coefficient bound must be positive")
    if any(s not in (-1, 1) for s in signs):
        raise ValueError("signs must be +-1")
    half = Fraction(d + 1, 2)
    target = (Fraction(alpha * tau),) + tuple(s * half for s in signs)
    return target, Fraction(d - 1, 2)


def interval_shift_target(
    tau: int, alpha: int, a: int, b: int, n: int
) -> Tuple[Tuple[Fraction, ...], Fraction]:
    """Target centered on the interval [a, b] and the radius (b-a)/2."""
    if a > b:
        raise ValueError("interval requires a <= b")
    if n < 1:
        raise ValueError("n must be positive")
    mid = Fraction(a + b, 2)
    target = (Fraction(alpha * tau),) + (mid,) * n
    return target, Fraction(b - a, 2)


def enclosing_box_radius(body: GaugeBody) -> int:
    """Minimal integer d with the body contained in [-d, d]^n."""
    if isinstance(body, (Box, Ellipsoid)):
        return body.bounding_box_radius()
    raise TypeError(f"unknown gauge body {body!r}")


def full_rank_completion(x: Sequence[int], body: GaugeBody):
    """Extend the orthogonal lattice of x to full rank.

    Adds the row q*e_i0 (i0 the first index with x_i0 != 0) with
    q = d*sum|x_i| + 1 for the minimal box radius d enclosing the body.
    Inside the body the added direction cannot participate, so the
    full-rank lattice and the orthogonal lattice meet the body in the same
    set.  Returns (basis, q).
    """
    xs = tuple(int(v) for v in x)
    if not xs or all(v == 0 for v in xs):
        raise ValueError("zero vector")
    d = enclosing_box_radius(body)
    q = d * sum(abs(v) for v in xs) + 1
    i0 = next(i for i in range(len(xs)) if xs[i] != 0)
    completion = [0] * len(xs)
    completion[i0] = q
    kb = kernel_basis(xs)
    rows = kb.rows + (tuple(completion),)
    return LatticeBasis(rows, len(xs)), q


def gauge_norm(body: GaugeBody, v: Sequence) -> Fraction:
    """Gauge of v for a box (sup norm over d); squared gauge for an
    ellipsoid (the quadratic form itself).  Zero exactly at v = 0."""
    if isinstance(body, Box):
        return Fraction(linf(v), body.d)
    if isinstance(body, Ellipsoid):
        return body.quad_form(v)
    raise TypeError(f"unknown gauge body {body!r}")


def gauge_sq(body: GaugeBody, v: Sequence) -> Fraction:
    """Squared gauge, uniform across body kinds; use for comparisons."""
    if isinstance(body, Box):
        m = linf(v)
        return Fraction(m * m, body.d * body.d)
    if isinstance(body, Ellipsoid):
        return body.quad_form(v)
    raise TypeError(f"unknown gauge body {body!r}")
