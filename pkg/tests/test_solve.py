"""Lattice solver tests: worked instances frozen against the brute-force
oracle, the decode equivalence behind the embedding, and the gap decision
machinery including deliberately inflating oracles."""

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from sbl.core import (
    Box,
    BudgetExceeded,
    Ellipsoid,
    Instance,
    Interval,
    Punctured,
    dot,
    verify_solution,
)
from sbl.oracle import brute_force_solve
from sbl.lattice import (
    LatticeBasis,
    choose_params,
    embedding_basis,
    interval_shift_target,
)
from sbl.enumeration import BallQuery, cvp_inf, enum_ball
from sbl.solve import (
    ApproxCvpOracle,
    GapConfigError,
    HALF_INTEGER,
    INTEGER,
    SIGN_PATTERN_CAP,
    ThresholdUnmet,
    capped_cvp_oracle,
    check_minkowski,
    cvp_via_gap_search,
    exact_cvp_oracle,
    gap_decide,
    solve_gss_avg,
    solve_gss_interval,
    solve_gss_punctured,
    solve_sbp,
    solve_sbp_body,
    solve_sbp_lll,
)


def _z2():
    return LatticeBasis(((1, 0), (0, 1)), 2)


# ---------------------------------------------------------------------------
# existence certificate
# ---------------------------------------------------------------------------

def test_minkowski_examples():
    assert check_minkowski((1, 1, 2), 1)       # 6 < 16
    assert not check_minkowski((1, 2), 1)      # 5 > 4: no certificate
    assert check_minkowski((1, 2), 2)          # 5 < 9
    assert not check_minkowski((100, 203), 1)


def test_minkowski_rejects_bad_bound():
    with pytest.raises(ValueError):
        check_minkowski((1, 2), 0)


@given(st.lists(st.integers(-50, 50), min_size=2, max_size=5),
       st.integers(1, 3))
@settings(max_examples=60, deadline=None)
def test_minkowski_certificate_is_sound(x, d):
    assume(any(x))
    if check_minkowski(x, d):
        v = brute_force_solve(Instance(tuple(x), Box(d)), "balancing")
        assert v.status == "solved"


# ---------------------------------------------------------------------------
# balancing
# ---------------------------------------------------------------------------

def test_sbp_small_instances():
    v = solve_sbp((1, 2), 2)
    assert v.status == "solved"
    assert dot(v.witness, (1, 2)) == 0
    assert all(abs(c) <= 2 for c in v.witness) and any(v.witness)
    v = solve_sbp((3, 5, 8), 1)
    assert v.status == "solved"
    assert dot(v.witness, (3, 5, 8)) == 0


def test_sbp_no_solution():
    # c1 = -2 c2 forces |c1| = 2 beyond the bound
    assert solve_sbp((1, 2), 1).status == "no_solution"
    assert solve_sbp((1, 10), 3).status == "no_solution"


def test_sbp_agrees_with_oracle():
    for x, d in product(((1, 2), (2, 3), (5, 7, 11), (1, 4, 9, 16)), (1, 2)):
        got = solve_sbp(x, d)
        want = brute_force_solve(Instance(x, Box(d)), "balancing")
        assert got.status == want.status
        if got.status == "solved":
            assert dot(got.witness, x) == 0


def test_sbp_stats_counts_points():
    stats = {}
    solve_sbp((3, 5, 8), 1, stats=stats)
    assert stats["ball_points"] >= 1


def test_sbp_lll_fast_path():
    v = solve_sbp_lll((1, 2), 2)
    assert v.status == "solved"
    assert dot(v.witness, (1, 2)) == 0
    assert all(abs(c) <= 2 for c in v.witness)


def test_sbp_lll_threshold_unmet():
    with pytest.raises(ThresholdUnmet):
        solve_sbp_lll((1, 2), 1)


def test_sbp_body_box_matches_plain():
    a = solve_sbp_body((3, 5, 8), Box(1))
    b = solve_sbp((3, 5, 8), 1)
    assert a.status == b.status == "solved"
    assert dot(a.witness, (3, 5, 8)) == 0


def test_sbp_body_ellipsoid():
    # the kernel generator (3, -2) sits exactly on this boundary
    ell = Ellipsoid(((Fraction(1, 13), 0), (0, Fraction(1, 13))))
    v = solve_sbp_body((2, 3), ell)
    assert v.status == "solved"
    c = v.witness
    assert dot(c, (2, 3)) == 0 and any(c)
    assert ell.contains(c)


def test_sbp_body_ellipsoid_no_solution():
    # kernel of (2, 3) is generated by (-3, 2); a tight ball excludes it
    ell = Ellipsoid(((1, 0), (0, 1)))
    assert solve_sbp_body((2, 3), ell).status == "no_solution"


# ---------------------------------------------------------------------------
# decode equivalence: short embedded vectors are exactly the solutions
# ---------------------------------------------------------------------------

def _embedded_coeff_sets(x, tau, d):
    """Coefficient vectors read off lattice points near the shifted target
    versus the admissible vectors found by direct iteration."""
    params = choose_params(x, d, tau, "gss_worst")
    basis = embedding_basis(x, params)
    n = len(x)
    center = tuple(Fraction(t) for t in params.target)
    ball = enum_ball(BallQuery(basis, center, Fraction(d * d * (n + 1))))
    via_lattice = set()
    for v in ball.points:
        if any(abs(a - t) > d for a, t in zip(v, params.target)):
            continue
        assert v[0] == params.alpha * tau
        via_lattice.add(v[1:])
    direct = {
        c for c in product(range(-d, d + 1), repeat=n) if dot(c, x) == tau
    }
    return via_lattice, direct


@pytest.mark.parametrize(
    "x,tau,d",
    [
        ((2, 3), 7, 2),
        ((1, 2, 4), 5, 1),
        ((2, 4), 1, 3),
        ((3, 5, 8), 0, 2),
        ((1, 1, 1, 1), 2, 1),
    ],
)
def test_embedding_decodes_exactly(x, tau, d):
    via_lattice, direct = _embedded_coeff_sets(x, tau, d)
    assert via_lattice == direct


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=4),
       st.integers(-12, 12), st.integers(1, 2))
@settings(max_examples=40, deadline=None)
def test_embedding_decode_property(x, tau, d):
    assume(any(x))
    via_lattice, direct = _embedded_coeff_sets(tuple(x), tau, d)
    assert via_lattice == direct


# ---------------------------------------------------------------------------
# gap decisions
# ---------------------------------------------------------------------------

def test_gap_accepts_within_radius():
    gv = gap_decide(exact_cvp_oracle(), _z2(), (Fraction(3, 2), Fraction(0)),
                    Fraction(1, 2), HALF_INTEGER)
    assert gv.accept
    assert gv.reported_dist == Fraction(1, 2)
    assert gv.vector in ((1, 0), (2, 0))


def test_gap_rejects_beyond_radius():
    gv = gap_decide(capped_cvp_oracle(Fraction(0)), _z2(),
                    (Fraction(1, 2), Fraction(1, 2)), Fraction(0), INTEGER)
    assert not gv.accept
    assert gv.vector is None
    assert gv.reported_dist == Fraction(1)


def test_gap_radius_zero_exact_hit():
    gv = gap_decide(capped_cvp_oracle(Fraction(0)), _z2(),
                    (Fraction(2), Fraction(-3)), Fraction(0), INTEGER)
    assert gv.accept and gv.vector == (2, -3)
    assert gv.reported_dist == 0


def test_gap_config_error_when_gamma_breaks_the_gap():
    fat = ApproxCvpOracle(Fraction(2), lambda basis, target: (None, 99))
    with pytest.raises(GapConfigError):
        gap_decide(fat, _z2(), (Fraction(0), Fraction(0)), Fraction(3),
                   INTEGER)


def test_gap_wide_gamma_legal_at_radius_zero():
    fat = ApproxCvpOracle(Fraction(2), lambda basis, target: (None, 99))
    gv = gap_decide(fat, _z2(), (Fraction(1, 3), Fraction(0)), Fraction(0),
                    INTEGER)
    assert not gv.accept


def test_gap_rejects_unknown_grid():
    with pytest.raises(ValueError):
        gap_decide(exact_cvp_oracle(), _z2(), (Fraction(0), Fraction(0)),
                   Fraction(1), "thirds")


def test_gap_rejects_negative_radius():
    with pytest.raises(ValueError):
        gap_decide(exact_cvp_oracle(), _z2(), (Fraction(0), Fraction(0)),
                   Fraction(-1), INTEGER)


def _inflating_oracle(gamma):
    """Exact witness, inflated report: the worst case the contract allows."""
    gamma = Fraction(gamma)

    def solver(basis, target):
        res = cvp_inf(basis, target)
        return res.witness, gamma * res.dist

    return ApproxCvpOracle(gamma, solver)


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=3),
       st.integers(-10, 10), st.integers(1, 3))
@settings(max_examples=50, deadline=None)
def test_gap_decision_survives_inflation(x, tau, d):
    """An oracle that inflates its reports as far as the gap tolerates
    must still decide interval feasibility exactly."""
    assume(any(x))
    xs = tuple(x)
    n = len(xs)
    params = choose_params(xs, d, tau, "gss_worst")
    basis = embedding_basis(xs, params)
    target, r = interval_shift_target(tau, params.alpha, -d, d, n)
    grid = INTEGER  # b - a = 2d is even
    gamma = 1 + Fraction(1, 2 * r) if r > 0 else Fraction(1)
    gv = gap_decide(_inflating_oracle(gamma), basis, target, r, grid)
    want = brute_force_solve(
        Instance(xs, Interval(-d, d), tau=tau), "gss"
    )
    assert gv.accept == (want.status == "solved")
    if gv.accept:
        c = gv.vector[1:]
        assert dot(c, xs) == tau
        assert all(abs(v) <= d for v in c)


# ---------------------------------------------------------------------------
# generalized subset sum over an interval
# ---------------------------------------------------------------------------

def test_gss_interval_examples():
    v = solve_gss_interval((2, 3), 7, 0, 2)
    assert v.status == "solved"
    assert dot(v.witness, (2, 3)) == 7
    assert all(0 <= c <= 2 for c in v.witness)

    v = solve_gss_interval((1, 2, 4), 5, 0, 1)
    assert v.witness == (1, 0, 1)

    assert solve_gss_interval((2, 4), 1, -3, 3).status == "no_solution"


def test_gss_interval_constant_case():
    assert solve_gss_interval((2, 3), 10, 2, 2).witness == (2, 2)
    assert solve_gss_interval((2, 3), 9, 2, 2).status == "no_solution"


def test_gss_interval_rejects_swapped_bounds():
    with pytest.raises(ValueError):
        solve_gss_interval((1, 2), 0, 3, 1)


def test_gss_interval_witness_is_deterministic():
    a = solve_gss_interval((3, 5, 7), 15, 0, 3)
    b = solve_gss_interval((3, 5, 7), 15, 0, 3)
    assert a.witness == b.witness


def test_gss_interval_stats():
    stats = {}
    solve_gss_interval((2, 3), 7, 0, 2, stats=stats)
    assert stats["ball_points"] >= 1


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=4),
       st.integers(-15, 15), st.integers(-2, 1), st.integers(0, 2))
@settings(max_examples=50, deadline=None)
def test_gss_interval_agrees_with_oracle(x, tau, a, width):
    assume(any(x))
    xs = tuple(x)
    b = a + width
    got = solve_gss_interval(xs, tau, a, b)
    want = brute_force_solve(Instance(xs, Interval(a, b), tau=tau), "gss")
    assert got.status == want.status
    if got.status == "solved":
        assert verify_solution(Instance(xs, Interval(a, b), tau=tau),
                               got.witness, "gss")


# ---------------------------------------------------------------------------
# generalized subset sum with the origin punched out
# ---------------------------------------------------------------------------

def test_gss_punctured_examples():
    v = solve_gss_punctured((2, 3), 1, 1)
    assert v.witness == (-1, 1)

    v = solve_gss_punctured((1, 2), 9, 3)
    assert v.witness == (3, 3)

    assert solve_gss_punctured((2, 2), 3, 2).status == "no_solution"


def test_gss_punctured_first_accepting_pattern_wins():
    # x = (1, 1), tau = 0, d = 1: solutions (-1, 1) and (1, -1); the
    # pattern order (-1, -1), (-1, 1), (1, -1), (1, 1) fixes the witness
    v = solve_gss_punctured((1, 1), 0, 1)
    assert v.witness == (-1, 1)


def test_gss_punctured_rejects_bad_bound():
    with pytest.raises(ValueError):
        solve_gss_punctured((1, 2), 0, 0)


def test_gss_punctured_pattern_cap():
    n = SIGN_PATTERN_CAP + 1
    with pytest.raises(BudgetExceeded):
        solve_gss_punctured((1,) * n, 0, 1)


def test_gss_punctured_stats():
    stats = {}
    solve_gss_punctured((2, 3), 1, 1, stats=stats)
    assert stats["patterns_tried"] >= 1
    assert stats["ball_points"] >= 0


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=4),
       st.integers(-15, 15), st.integers(1, 3))
@settings(max_examples=50, deadline=None)
def test_gss_punctured_agrees_with_oracle(x, tau, d):
    assume(any(x))
    xs = tuple(x)
    got = solve_gss_punctured(xs, tau, d)
    inst = Instance(xs, Punctured(d), tau=tau)
    want = brute_force_solve(inst, "gss")
    assert got.status == want.status
    if got.status == "solved":
        assert verify_solution(inst, got.witness, "gss")


# ---------------------------------------------------------------------------
# density-regime solver
# ---------------------------------------------------------------------------

def test_gss_avg_worked_instance():
    stats = {}
    v = solve_gss_avg((7, 9), 2, 2, 16, stats=stats)
    assert v.witness == (-1, 1)
    assert stats["alpha"] == 4 and stats["q"] == 67


def test_gss_avg_guard_abort():
    # x = (8, 8) embeds (0, 1, -1), sup norm 1, inside the guard at M = 16
    v = solve_gss_avg((8, 8), 2, 2, 16)
    assert v.status == "guard_abort"


def test_gss_avg_large_bound_short_circuit():
    # interval alphabet has 3 values at d = 1; 3^4 = 81 < 100
    v = solve_gss_avg((3, 5), 1, 1, 100)
    assert v.status == "no_solution"
    v = solve_gss_avg((3, 5), 1, 1, 20, cset="punctured")
    assert v.status == "no_solution"  # 2^4 = 16 < 20


def test_gss_avg_punctured_filters_zero_coords():
    v = solve_gss_avg((7, 9), 2, 2, 16, cset="punctured")
    if v.status == "solved":
        assert all(c != 0 for c in v.witness)
        assert dot(v.witness, (7, 9)) == 2


def test_gss_avg_validation():
    with pytest.raises(ValueError):
        solve_gss_avg((1, 2), 0, 0, 16)
    with pytest.raises(ValueError):
        solve_gss_avg((1, 2), 0, 1, 0)
    with pytest.raises(ValueError):
        solve_gss_avg((1, 2), 0, 1, 16, cset="simplex")


@given(st.lists(st.integers(1, 30), min_size=2, max_size=3),
       st.integers(-8, 8), st.integers(1, 2))
@settings(max_examples=40, deadline=None)
def test_gss_avg_solutions_verify(x, tau, d):
    assume(any(x))
    xs = tuple(x)
    m_bound = 4 ** len(xs)
    v = solve_gss_avg(xs, tau, d, m_bound)
    if v.status == "solved":
        inst = Instance(xs, Interval(-d, d), tau=tau, m_bound=m_bound)
        assert verify_solution(inst, v.witness, "gss")
    elif v.status == "no_solution":
        want = brute_force_solve(
            Instance(xs, Interval(-d, d), tau=tau), "gss"
        )
        assert want.status == "no_solution"


# ---------------------------------------------------------------------------
# distance recovery from gap decisions
# ---------------------------------------------------------------------------

def test_gap_search_exact_hit():
    vec, dist = cvp_via_gap_search(_z2(), (Fraction(3), Fraction(-4)))
    assert vec == (3, -4) and dist == 0


def test_gap_search_half_grid():
    vec, dist = cvp_via_gap_search(
        _z2(), (Fraction(1, 2), Fraction(0)), grid=HALF_INTEGER
    )
    assert dist == Fraction(1, 2)
    assert vec in ((0, 0), (1, 0))


def test_gap_search_needs_grid_aligned_r_max():
    with pytest.raises(ValueError):
        cvp_via_gap_search(_z2(), (Fraction(0), Fraction(0)),
                           r_max=Fraction(3, 2))


def test_gap_search_rejects_unknown_grid():
    with pytest.raises(ValueError):
        cvp_via_gap_search(_z2(), (Fraction(0), Fraction(0)), grid="thirds")


def test_gap_search_fails_when_r_max_too_small():
    coarse = LatticeBasis(((3, 0), (0, 3)), 2)
    with pytest.raises(ValueError):
        cvp_via_gap_search(coarse, (Fraction(1), Fraction(1)),
                           r_max=Fraction(0))
    vec, dist = cvp_via_gap_search(coarse, (Fraction(1), Fraction(1)),
                                   r_max=Fraction(2))
    assert dist == 1 and vec == (0, 0)


@given(st.sampled_from([((2, 1), (0, 3)), ((3, 0), (1, 4)), ((2, 0), (0, 2))]),
       st.integers(-6, 6), st.integers(-6, 6))
@settings(max_examples=40, deadline=None)
def test_gap_search_matches_direct_cvp(rows, p, q):
    basis = LatticeBasis(rows, 2)
    target = (Fraction(p), Fraction(q))
    res = cvp_inf(basis, target)
    grid = INTEGER if res.dist.denominator == 1 else HALF_INTEGER
    vec, dist = cvp_via_gap_search(basis, target, grid=grid)
    assert dist == res.dist
    got = max(abs(Fraction(a) - b) for a, b in zip(vec, target))
    assert got == dist
