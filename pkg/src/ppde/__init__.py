"""Solvers for fourth-order pseudoparabolic Dirichlet problems on rectangles.

The package reduces the operator D1^2 D2^2 u + lower-order terms to a 2D
Volterra integral equation through an exact trace representation, solves
the Goursat problem by Picard iteration, and closes the remaining unknown
traces against the far-edge boundary data by least squares.  Boundary data
may be given classically (u on the four edges) or non-classically (corner
values and second-derivative edge traces); the two formulations convert
into each other exactly.
"""

from .dirichlet import (
    ClosureSystem,
    Diagnostics,
    DirichletProblem,
    Solution,
    assemble_closure_system,
    residual_report,
    solve_classical,
    solve_dirichlet,
)
from .expr import EvalDomainError, ParseError, differentiate, evaluate, parse, to_string
from .goursat import GoursatProblem, GoursatSolution, NonConvergenceError, solve_goursat
from .grid import (
    Grid1D,
    Grid2D,
    GridFn1D,
    GridFn2D,
    cumulative_integral,
    lp_norm,
    make_grid,
    mixed_norm,
    taylor_remainder_integral,
)
from .problem import (
    AgreementReport,
    BoundaryFn,
    ClassicalData,
    Coefficients,
    CompatibilityReport,
    NonClassicalData,
    apply_operator,
    boundary_values,
    check_agreement,
    check_compatibility,
    classical_to_nonclassical,
    eval_boundary,
    nonclassical_to_classical,
)
from .representation import (
    DerivativeField,
    TraceSet,
    extract_traces,
    reconstruct_field,
    reconstruct_u,
)
from .verify import (
    ConvergenceTable,
    ManufacturedCase,
    convergence_study,
    manufactured_problem,
    sobolev_norm,
)

__version__ = "0.1.0"
