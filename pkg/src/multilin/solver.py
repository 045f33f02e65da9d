"""Iteration drivers: splitting iteration with safeguarded Anderson
extrapolation, and a Newton baseline.

The main driver :func:`solve` runs the fixed-point map of a splitting.
With window depth ``m = 0`` it is the plain iteration ``z <- g(z)``.
With ``m >= 1`` every step evaluates the map once, extrapolates over the
window, and accepts the extrapolated point only when the safeguard holds,
blending it with the plain step through the relaxation weight ``theta``;
otherwise it falls back to the plain step for that iteration.

Iteration counting: the first map application (the seed step before any
history exists) is iteration 1; each later update increments the count by
one, so the count equals the number of map evaluations.  The residual
``||A z^(l-1) - b||`` is evaluated once per iteration, after the update.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .anderson import AndersonWindow, safeguard
from .splitting import build_splitting, residual, splitting_step, JACOBI
from .tensor import (
    NonRealRootError,
    STRONG_M,
    _as_tensor,
    _as_vector,
    apply,
    classify,
    gradient_slice,
    semi_symmetrize,
)

__all__ = [
    "ACCELERATED",
    "FALLBACK",
    "PLAIN",
    "SingularJacobianError",
    "SolverConfig",
    "StepRecord",
    "IterationTrace",
    "solve",
    "solve_newton",
    "default_initial",
    "check_feasible_start",
]

ACCELERATED = "accelerated"
FALLBACK = "fallback"
PLAIN = "plain"


class SingularJacobianError(np.linalg.LinAlgError):
    """Newton's Jacobian became singular along the path."""


@dataclass
class SolverConfig:
    """All knobs of the accelerated splitting driver.

    ``m = 0`` disables extrapolation entirely (plain splitting iteration);
    ``theta`` in [0, 1] blends the accepted extrapolated point with the
    plain step (``theta = 0`` reproduces the plain iteration); ``kappa_alpha``
    bounds the absolute coefficient sum in the safeguard.
    """

    m: int = 0
    theta: float = 1.0
    kind: str = JACOBI
    omega: float = 1.0
    kappa_alpha: float = 1000.0
    tol: float = 1e-11
    max_iter: int = 1000
    clear_on_fallback: bool = False
    check_initial_feasibility: bool = False

    def __post_init__(self):
        if self.m < 0:
            raise ValueError(f"window depth must be >= 0, got {self.m}")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError(f"theta must lie in [0, 1], got {self.theta}")
        if self.kappa_alpha < 1.0:
            raise ValueError(f"kappa_alpha must be >= 1, got {self.kappa_alpha}")
        if self.tol <= 0.0:
            raise ValueError(f"tolerance must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


@dataclass
class StepRecord:
    """One iteration: index, residual 2-norm, elapsed seconds, step kind.

    ``f_norm`` is the fixed-point residual ``||g(z_k) - z_k||``; it becomes
    available when the next iteration evaluates the map, so the final
    record's value is NaN unless a later step filled it.
    """

    k: int
    res: float
    elapsed_s: float
    step_kind: str
    f_norm: float = float("nan")


@dataclass
class IterationTrace:
    records: list[StepRecord] = field(default_factory=list)
    converged: bool = False
    final_x: np.ndarray | None = None

    @property
    def iterations(self):
        return len(self.records)

    @property
    def final_res(self):
        return self.records[-1].res if self.records else float("inf")


def solve(a, b, z0, cfg, theta_fn=None, callback=None):
    """Run the (accelerated) splitting iteration on ``A x^(l-1) = b``.

    Parameters
    ----------
    a : ndarray
        Coefficient tensor, expected to be a strong M-tensor with positive
        diagonal (verified when ``cfg.check_initial_feasibility`` is set,
        otherwise the caller's responsibility).
    b, z0 : ndarray
        Entrywise positive right-hand side and start vector.
    cfg : SolverConfig
    theta_fn : callable, optional
        Per-iteration relaxation ``k -> theta_k``; overrides ``cfg.theta``.
    callback : callable, optional
        Called as ``callback(k, z)`` after every update, e.g. to record
        iterates.

    Returns
    -------
    IterationTrace
        ``converged`` is False on hitting ``max_iter`` (not an error).
    """
    a = _as_tensor(a)
    n = a.shape[0]
    b = _as_vector(b, n)
    z = _as_vector(z0, n).copy()
    if np.any(b <= 0.0):
        raise ValueError("right-hand side must be entrywise positive")
    if np.any(z <= 0.0):
        raise ValueError("start vector must be entrywise positive")
    if cfg.check_initial_feasibility:
        if classify(a) != STRONG_M:
            raise ValueError("coefficient tensor is not a strong M-tensor")
        if not check_feasible_start(a, z, b):
            warnings.warn(
                "start violates 0 < A z0^(l-1) <= b; positivity of iterates "
                "is then not guaranteed by theory (the safeguard still "
                "enforces it in practice)",
                UserWarning,
                stacklevel=2,
            )

    s = build_splitting(a, cfg.kind, cfg.omega)
    window = AndersonWindow(cfg.m) if cfg.m >= 1 else None
    trace = IterationTrace()
    start = time.perf_counter()

    def record(k, z_new, kind):
        trace.records.append(
            StepRecord(
                k=k,
                res=residual(a, z_new, b),
                elapsed_s=time.perf_counter() - start,
                step_kind=kind,
            )
        )
        if callback is not None:
            callback(k, z_new)
        return trace.records[-1].res < cfg.tol

    for k in range(1, cfg.max_iter + 1):
        try:
            mu = splitting_step(s, b, z)
        except NonRealRootError as exc:
            raise NonRealRootError(
                f"map evaluation left the real domain at iteration {k}: {exc}"
            ) from exc

        if trace.records:
            trace.records[-1].f_norm = float(np.linalg.norm(mu - z))

        if window is None:
            z_new, kind = mu, PLAIN
        else:
            f = mu - z
            window.push(mu, f)
            if len(window) < 2:
                # Seed step (or first step after a window clear).
                z_new, kind = mu, PLAIN if k == 1 else FALLBACK
            else:
                sol = window.solve_alpha()
                y = window.combine(sol)
                if safeguard(y, sol, cfg.kappa_alpha):
                    theta = theta_fn(k - 1) if theta_fn else cfg.theta
                    z_new = theta * y + (1.0 - theta) * mu
                    kind = ACCELERATED
                else:
                    z_new = mu
                    kind = FALLBACK
                    if cfg.clear_on_fallback:
                        window.clear()

        z = z_new
        if record(k, z, kind):
            trace.converged = True
            break

    trace.final_x = z
    return trace


def solve_newton(a, b, z0, tol=1e-11, max_iter=100):
    """Newton's method on ``r(z) = A z^(l-1) - b``.

    The Jacobian of ``z -> A z^(l-1)`` is ``(l-1) *
    gradient_slice(semi_symmetrize(A), z)``.  Each iteration solves one
    dense linear system; convergence is quadratic near the solution.
    """
    a = _as_tensor(a)
    l, n = a.ndim, a.shape[0]
    b = _as_vector(b, n)
    z = _as_vector(z0, n).copy()
    a_bar = semi_symmetrize(a)

    trace = IterationTrace()
    start = time.perf_counter()
    for k in range(1, max_iter + 1):
        r = apply(a, z) - b
        jac = (l - 1) * gradient_slice(a_bar, z)
        try:
            step = np.linalg.solve(jac, r)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobianError(
                f"singular Jacobian at iteration {k}"
            ) from exc
        z = z - step
        trace.records.append(
            StepRecord(
                k=k,
                res=residual(a, z, b),
                elapsed_s=time.perf_counter() - start,
                step_kind=PLAIN,
            )
        )
        if trace.records[-1].res < tol:
            trace.converged = True
            break
    trace.final_x = z
    return trace


def default_initial(problem, n):
    """Conventional start vector per benchmark family.

    The all-ones vector for the random and banded families, ``e / n`` for
    the sine family (whose diagonal grows like ``n^2``).
    """
    from .problems import BANDED, RANDOM, SINE

    if problem in (RANDOM, BANDED):
        return np.ones(n)
    if problem == SINE:
        return np.ones(n) / n
    raise ValueError(f"unknown problem family {problem!r}")


def check_feasible_start(a, z0, b):
    """True iff ``0 < A z0^(l-1) <= b`` entrywise.

    Positivity of all iterates is guaranteed by theory under this
    condition.  It is a diagnostic only: the benchmark conventions violate
    it (e.g. the banded family at ``z0 = e``) and still converge with every
    iterate positive, so solvers warn rather than refuse.
    """
    w = apply(a, z0)
    return bool(np.all(w > 0.0) and np.all(w <= b))
