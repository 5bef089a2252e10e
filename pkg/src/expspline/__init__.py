"""Exponential cubic B-spline collocation solver for the 1D viscous Burgers equation."""

from .basis import BasisParams, BasisStencil, DomainError, eval_basis, make_basis, stencil
from .linalg import (
    SingularMatrixError,
    SingularPivotError,
    TridiagonalSystem,
    dense_solve,
    thomas_solve,
)
from .oracle import (
    ErrorReport,
    WaveParams,
    bessel_i,
    error_norms,
    exact_a,
    exact_b,
    exact_c,
    exact_d,
)
from .problems import problem_a, problem_b, problem_c, problem_d
from .solver import (
    CoefficientVector,
    Discretization,
    NodalState,
    ProblemSpec,
    Snapshot,
    SolverError,
    StepError,
    assemble_step,
    evaluate,
    fit_initial,
    nodal_state,
    run,
    step,
)

__version__ = "0.1.0"
