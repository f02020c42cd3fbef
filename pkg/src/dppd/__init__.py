"""Distributed proximal primal-dual optimization over time-varying digraphs.

N agents cooperatively minimize a sum of convex objectives over a shared
compact set under coupled inequality constraints, communicating through
doubly stochastic, jointly connected mixing matrices.  The package bundles
the solver, a subgradient comparator, the distributed dual-radius protocol,
graph-schedule generators, and independent verification oracles.
"""

from .baseline import BaselineTrace, csp_sg_round, run_csp_sg
from .dualbound import (
    DualBoundResult,
    SlaterError,
    assemble_bound,
    average_consensus_step,
    certify_negative,
    compute_dual_radius,
    find_slater,
    max_consensus_round,
)
from .functions import (
    Affine,
    Ball,
    Box,
    DomainError,
    NegLog,
    NonnegBall,
    Problem,
    ProblemBounds,
    Quadratic,
    Scaled,
    Sum,
    VectorConstraint,
    constant,
    estimate_bounds,
    local_lagrangian,
)
from .graphs import GraphSchedule, make_schedule, mix, validate_schedule
from .oracle import ReferenceSolution, brute_force_saddle, solve_example_family
from .proxops import (
    ProxError,
    ProxQuery,
    dual_prox_solve,
    prox_log_barrier,
    prox_quadratic,
    prox_solve,
)
from .scenarios import (
    ConfigError,
    Scenario,
    build_paper_example,
    load_scenario,
    paper_example_reference,
)
from .solver import (
    DppdConfig,
    RunTrace,
    StepsizeSchedule,
    SwarmState,
    dppd_round,
    rate_fit,
    run,
    running_eval_error,
)
from .traceio import read_trace, report_compare, write_trace

__version__ = "0.1.0"
