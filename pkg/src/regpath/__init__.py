"""Exact piecewise-linear regularization paths.

l1-penalized coefficient paths for differentiable piecewise-quadratic losses
(squared error, Huber, squared hinge, Huberized squared hinge and custom
quadratic splines), total-variation penalized polynomial spline paths with
continuous knot search, and an independent proximal-gradient oracle for
validation.
"""

from .data import CLASSIFICATION, REGRESSION, Dataset
from .errors import (
    BudgetExceededError,
    ConvergenceError,
    DataError,
    KktViolationError,
    RegpathError,
    SingularGramError,
    SolverError,
)
from .l1path import (
    Breakpoint,
    KktReport,
    PathEvent,
    PathOptions,
    PathState,
    RegularizationPath,
    apply_event,
    coefficients_at,
    compute_direction,
    initialize,
    next_event,
    predict,
    solve_path,
    verify_kkt,
)
from .losses import (
    HUBER,
    HUBERIZED_SQUARED_HINGE,
    SQUARED_ERROR,
    SQUARED_HINGE,
    InvalidLossError,
    LossModel,
    custom_loss,
    generalized_residual,
    loss_curvature,
    loss_derivative,
    loss_value,
    make_loss,
    total_gradient,
)
from .oracle import OracleOptions, grid_check, numeric_gradient, solve_penalized
from .tvspline import (
    SplineModel,
    SplinePath,
    TvOptions,
    TvPathState,
    basis_row,
    find_next_knot,
    init_tv_path,
    lambda_candidates,
    lambda_remove,
    plus_power,
    solve_tv_path,
    spline_eval,
    total_variation,
    tv_step,
)

__version__ = "0.1.0"
