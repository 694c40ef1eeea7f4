"""Exact solvers for subset balancing and generalized subset sum.

Instances pair an integer vector x with a coefficient set (interval,
punctured interval, box, or ellipsoid) and optionally a target sum.  The
solvers reduce to shortest and closest vector searches on small integer
lattices and run entirely in exact arithmetic: a Solved verdict carries a
verified witness and a NoSolution verdict is a proof, not a timeout.
"""

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
from .enumeration import (
    BallQuery,
    CvpResult,
    EnumerationResult,
    GaugeResult,
    SvpResult,
    cvp_inf,
    enum_ball,
    svp_gauge,
    svp_inf,
)
from .experiment import (
    ProbeConfig,
    ProbeReport,
    SplitMix64,
    bench,
    probe_avg_solver,
    probe_existence,
    report_json,
    sample_instance,
    trial_stream,
)
from .lattice import (
    EmbeddingParams,
    LatticeBasis,
    choose_params,
    embedding_basis,
    kernel_basis,
    kernel_det_sq,
)
from .oracle import brute_force_solve, mitm_solve
from .reduction import gram_schmidt, lll_reduce, lll_threshold
from .solve import (
    ApproxCvpOracle,
    GapConfigError,
    GapVerdict,
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

__version__ = "0.1.0"

__all__ = [
    "Box",
    "BudgetExceeded",
    "Ellipsoid",
    "GUARD_ABORT",
    "Instance",
    "Interval",
    "NO_SOLUTION",
    "ParseError",
    "Punctured",
    "SOLVED",
    "Verdict",
    "parse_instance",
    "parse_verdict",
    "serialize_instance",
    "serialize_verdict",
    "verify_solution",
    "BallQuery",
    "CvpResult",
    "EnumerationResult",
    "GaugeResult",
    "SvpResult",
    "cvp_inf",
    "enum_ball",
    "svp_gauge",
    "svp_inf",
    "ProbeConfig",
    "ProbeReport",
    "SplitMix64",
    "bench",
    "probe_avg_solver",
    "probe_existence",
    "report_json",
    "sample_instance",
    "trial_stream",
    "EmbeddingParams",
    "LatticeBasis",
    "choose_params",
    "embedding_basis",
    "kernel_basis",
    "kernel_det_sq",
    "brute_force_solve",
    "mitm_solve",
    "gram_schmidt",
    "lll_reduce",
    "lll_threshold",
    "ApproxCvpOracle",
    "GapConfigError",
    "GapVerdict",
    "ThresholdUnmet",
    "capped_cvp_oracle",
    "check_minkowski",
    "cvp_via_gap_search",
    "exact_cvp_oracle",
    "gap_decide",
    "solve_gss_avg",
    "solve_gss_interval",
    "solve_gss_punctured",
    "solve_sbp",
    "solve_sbp_body",
    "solve_sbp_lll",
    "__version__",
]
