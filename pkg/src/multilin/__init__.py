"""Solvers for multilinear systems ``A x^(l-1) = b`` with strong M-tensor
coefficients: Jacobi / Gauss-Seidel / SOR splitting iterations accelerated
by restarted, relaxed, nonnegativity-safeguarded Anderson extrapolation,
plus a Newton baseline and structural verification tools.
"""

from .tensor import (
    M,
    NOT_Z,
    STRONG_M,
    Z,
    ConvergenceWarning,
    NonRealRootError,
    apply,
    classify,
    entrywise_root,
    gradient_slice,
    majorization,
    matrix_tensor_product,
    semi_symmetrize,
    spectral_radius_nonneg,
    unit_tensor,
)
from .splitting import (
    GAUSS_SEIDEL,
    JACOBI,
    NOT_REGULAR,
    REGULAR,
    SOR,
    WEAK_REGULAR,
    SingularSplittingError,
    Splitting,
    build_splitting,
    map_jacobian,
    residual,
    splitting_step,
    validate_splitting,
)
from .anderson import (
    AlphaSolution,
    AndersonWindow,
    InsufficientHistoryError,
    safeguard,
)
from .solver import (
    ACCELERATED,
    FALLBACK,
    PLAIN,
    IterationTrace,
    SingularJacobianError,
    SolverConfig,
    StepRecord,
    check_feasible_start,
    default_initial,
    solve,
    solve_newton,
)
from .problems import (
    BANDED,
    FAMILIES,
    RANDOM,
    SINE,
    banded_tensor,
    generate,
    random_tensor,
    rhs_and_start,
    sine_tensor,
)
from .io import (
    DEFAULT_MEMORY_BUDGET,
    TensorFormatError,
    load_tensor,
    save_tensor,
    save_trace,
)

__version__ = "0.1.0"
