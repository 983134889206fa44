"""q-Gauss-Newton nonlinear least squares built on Jackson q-derivatives."""
from .errors import (
    ExprSyntaxError,
    InvalidPointError,
    NumericalFailure,
    QDomainError,
    QGNError,
    SingularSystemError,
    UnknownIdentifierError,
    VariableIndexError,
)
from .exprparse import ParsedProblem, evaluate, parse, to_source, to_vector_field
from .linalg import descent_check, solve_gn_step
from .model import (
    ObjectiveValue,
    ResidualProblem,
    builtin_example1,
    builtin_example2,
    builtin_example3,
    evaluate_objective,
    get_problem,
    list_problems,
)
from .qcalc import (
    DilationParams,
    q_binomial,
    q_derivative,
    q_differential,
    q_factorial,
    q_gradient,
    q_jacobian,
    q_number,
    q_partial,
    q_poly_power,
    q_taylor_eval,
)
from .solver import (
    IterationRecord,
    SolveConfig,
    SolveResult,
    Status,
    gauss_newton,
    nelder_mead,
    q_gauss_newton,
)

__version__ = "0.1.0"
