"""Ball enumeration and the sup-norm searches.

The enumerator is checked against a direct coefficient sweep: on a small
basis, walk all integer combinations in a crude box and keep those inside
the ball.  Both listings must agree exactly, order included.
"""

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from sbl.core import Box, BudgetExceeded, Ellipsoid, l2_sq, linf, mat_det
from sbl.enumeration import (
    BallQuery,
    CvpResult,
    SvpResult,
    cvp_inf,
    enum_ball,
    svp_gauge,
    svp_inf,
)
from sbl.lattice import LatticeBasis


def _basis(*rows):
    return LatticeBasis(tuple(tuple(r) for r in rows), len(rows[0]))


def _sweep(basis, span):
    """Every lattice point with coefficients in [-span, span]."""
    for coeffs in product(range(-span, span + 1), repeat=basis.rank):
        v = [0] * basis.dim
        for c, row in zip(coeffs, basis.rows):
            for i in range(basis.dim):
                v[i] += c * row[i]
        yield tuple(v)


def _brute_ball(basis, center, radius_sq, span):
    """Ball points found by a coefficient sweep; complete only when span
    covers the ball, so callers use it for one-sided checks."""
    pts = [
        p for p in _sweep(basis, span)
        if sum((Fraction(a) - Fraction(b)) ** 2
               for a, b in zip(p, center)) <= radius_sq
    ]
    return sorted(pts)


small_bases = (
    st.integers(2, 3)
    .flatmap(lambda m: st.lists(
        st.lists(st.integers(-6, 6), min_size=m, max_size=m),
        min_size=m, max_size=m))
    .filter(lambda rows: mat_det(rows) != 0)
    .map(lambda rows: _basis(*rows))
)


# ---------------------------------------------------------------------------
# enum_ball
# ---------------------------------------------------------------------------

def test_enum_ball_z2():
    res = enum_ball(BallQuery(_basis((1, 0), (0, 1)), (0, 0), 2))
    assert res.count == 9
    assert res.points[0] == (-1, -1)
    assert (0, 0) in res.points


def test_enum_ball_translated():
    res = enum_ball(BallQuery(_basis((1, 0), (0, 1)),
                              (Fraction(1, 2), Fraction(1, 2)), Fraction(1, 2)))
    assert set(res.points) == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_enum_ball_empty():
    res = enum_ball(BallQuery(_basis((5, 0), (0, 5)),
                              (Fraction(5, 2), Fraction(5, 2)), 1))
    assert res.count == 0


def test_enum_ball_lower_rank():
    # the line through (3, 4); center off the line pays the offset
    basis = LatticeBasis(((3, 4),), 2)
    res = enum_ball(BallQuery(basis, (3, 4), 0))
    assert res.points == ((3, 4),)
    res = enum_ball(BallQuery(basis, (0, 1), 1))
    assert res.points == ((0, 0),)
    res = enum_ball(BallQuery(basis, (0, 2), 1))
    assert res.count == 0


def test_enum_ball_rank_zero():
    basis = LatticeBasis((), 2)
    assert enum_ball(BallQuery(basis, (0, 0), 5)).points == ((0, 0),)
    assert enum_ball(BallQuery(basis, (3, 0), 5)).count == 0


def test_enum_ball_budget():
    basis = _basis((1, 0), (0, 1))
    with pytest.raises(BudgetExceeded):
        enum_ball(BallQuery(basis, (0, 0), 10**4), budget=10)


def test_enum_ball_rejects_bad_query():
    with pytest.raises(ValueError):
        BallQuery(_basis((1, 0), (0, 1)), (0, 0, 0), 1)
    with pytest.raises(ValueError):
        BallQuery(_basis((1, 0), (0, 1)), (0, 0), -1)


def test_enum_ball_equals_sweep_on_fixed_bases():
    """Full two-sided equality where the sweep provably covers the ball."""
    cases = [
        (_basis((1, 0), (0, 1)), (Fraction(1, 3), Fraction(-1, 2)), 9, 5),
        (_basis((2, 1), (1, 2)), (0, 0), 12, 6),
        (_basis((3, 1, 0), (0, 2, 1), (1, 0, 4)), (1, 1, 1), 6, 5),
    ]
    for basis, center, radius_sq, span in cases:
        res = enum_ball(BallQuery(basis, center, radius_sq))
        assert list(res.points) == _brute_ball(basis, center, radius_sq, span)


@given(small_bases,
       st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=2),
                min_size=2, max_size=3),
       st.integers(0, 16))
@settings(max_examples=30, deadline=None)
def test_enum_ball_sound_and_covers_sweep(basis, center, radius_sq):
    assume(len(center) == basis.dim)
    center = tuple(center)
    res = enum_ball(BallQuery(basis, center, radius_sq))
    pts = list(res.points)
    assert pts == sorted(pts)
    for p in pts:
        assert sum((Fraction(a) - b) ** 2 for a, b in zip(p, center)) <= radius_sq
    # completeness against the small-coefficient part of the lattice
    inside = set(_brute_ball(basis, center, radius_sq, 4))
    assert inside <= set(pts)


# ---------------------------------------------------------------------------
# sup-norm shortest vector
# ---------------------------------------------------------------------------

def test_svp_inf_z2():
    res = svp_inf(_basis((1, 0), (0, 1)))
    assert res.found and res.value == 1
    # ties on sup norm break toward the lexicographically least vector
    assert res.witness == (-1, -1)


def test_svp_inf_skewed():
    res = svp_inf(_basis((5, 0), (2, 3)))
    assert res.value == 3
    assert res.witness == (-3, 3)
    assert res.start_radius_sq is not None
    assert res.start_radius_sq <= res.value ** 2


def test_svp_inf_cap():
    basis = _basis((5, 0), (2, 3))
    miss = svp_inf(basis, cap=2)
    assert not miss.found and miss.value is None
    hit = svp_inf(basis, cap=3)
    assert hit.found and hit.value == 3


def test_svp_inf_rejects_empty():
    with pytest.raises(ValueError):
        svp_inf(LatticeBasis((), 2))


@given(small_bases)
@settings(max_examples=40, deadline=None)
def test_svp_inf_never_beaten_by_sweep(basis):
    res = svp_inf(basis)
    assert any(res.witness)
    assert linf(res.witness) == res.value
    for p in _sweep(basis, 3):
        if any(p):
            assert linf(p) >= res.value


# ---------------------------------------------------------------------------
# sup-norm closest vector
# ---------------------------------------------------------------------------

def test_cvp_inf_exact_hit():
    res = cvp_inf(_basis((1, 0), (0, 1)), (3, 4))
    assert res.found and res.dist == 0 and res.witness == (3, 4)


def test_cvp_inf_z2():
    res = cvp_inf(_basis((1, 0), (0, 1)), (Fraction(2, 5), Fraction(3, 5)))
    assert res.dist == Fraction(2, 5)
    assert res.witness == (0, 1)


def test_cvp_inf_cap():
    basis = _basis((1, 0), (0, 1))
    t = (Fraction(1, 2), Fraction(1, 2))
    miss = cvp_inf(basis, t, cap=Fraction(1, 4))
    assert not miss.found
    hit = cvp_inf(basis, t, cap=Fraction(1, 2))
    assert hit.found and hit.dist == Fraction(1, 2)
    assert hit.witness == (0, 0)  # lexicographically least of the four corners


@given(small_bases,
       st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3),
                min_size=2, max_size=3))
@settings(max_examples=40, deadline=None)
def test_cvp_inf_never_beaten_by_sweep(basis, target):
    assume(len(target) == basis.dim)
    target = tuple(target)
    res = cvp_inf(basis, target)
    assert res.found
    got = max(abs(Fraction(a) - b) for a, b in zip(res.witness, target))
    assert got == res.dist
    for p in _sweep(basis, 3):
        d = max(abs(Fraction(a) - b) for a, b in zip(p, target))
        assert d >= res.dist


# ---------------------------------------------------------------------------
# gauge search
# ---------------------------------------------------------------------------

def test_svp_gauge_box():
    res = svp_gauge(_basis((4, 0), (1, 3)), Box(2))
    assert res.value == Fraction(3, 2)
    assert res.witness == (-3, 3)


def test_svp_gauge_ellipsoid():
    e = Ellipsoid(((Fraction(1, 4), 0), (0, 1)))
    res = svp_gauge(_basis((4, 0), (1, 3)), e)
    assert res.value == 4  # squared gauge of (+-4, 0)
    assert res.witness == (-4, 0)


@given(small_bases, st.integers(1, 3))
@settings(max_examples=40, deadline=None)
def test_svp_gauge_box_agrees_with_svp_inf(basis, d):
    g = svp_gauge(basis, Box(d))
    s = svp_inf(basis)
    assert g.value == Fraction(s.value, d)
    assert linf(g.witness) == s.value
