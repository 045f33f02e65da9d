"""Jacobi / Gauss-Seidel / SOR splittings and their fixed-point map.

A splitting ``A = E - F`` is stored as the pair ``(me, f_tensor)`` where
``me`` is the lower-triangular majorization matrix of ``E`` and
``f_tensor`` is ``F`` as a full tensor.  ``E`` itself is only materialized
on demand (:meth:`Splitting.e_tensor`); one iteration of the induced map

    g(x) = (me^-1 (F x^(l-1) + b))^[1/(l-1)]

is evaluated by a forward substitution, never by forming ``me^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .tensor import (
    _as_tensor,
    _as_vector,
    apply,
    entrywise_root,
    gradient_slice,
    majorization,
    matrix_tensor_product,
    semi_symmetrize,
    unit_tensor,
)

__all__ = [
    "JACOBI",
    "GAUSS_SEIDEL",
    "SOR",
    "REGULAR",
    "WEAK_REGULAR",
    "NOT_REGULAR",
    "SingularSplittingError",
    "Splitting",
    "build_splitting",
    "validate_splitting",
    "splitting_step",
    "residual",
    "map_jacobian",
]

JACOBI = "jacobi"
GAUSS_SEIDEL = "gs"
SOR = "sor"

REGULAR = "regular"
WEAK_REGULAR = "weak_regular"
NOT_REGULAR = "not_regular"

# Absorbs rounding in the F = E - A subtraction during sign checks.
_SIGN_TOL = -1e-13


class SingularSplittingError(ValueError):
    """The triangular factor has a zero or negative diagonal entry."""


@dataclass(eq=False)
class Splitting:
    """One splitting ``A = E - F`` of an order-``l`` tensor.

    Attributes
    ----------
    me : ndarray
        Lower-triangular majorization matrix of ``E``; its diagonal is
        strictly positive.
    f_tensor : ndarray
        ``F = E - A`` as a full tensor.
    kind : str
        One of ``JACOBI``, ``GAUSS_SEIDEL``, ``SOR``.
    omega : float
        Relaxation weight; only meaningful for ``SOR`` (1.0 otherwise).
    """

    me: np.ndarray
    f_tensor: np.ndarray
    kind: str
    omega: float = 1.0
    _f_bar: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if np.any(np.diag(self.me) <= 0.0):
            raise SingularSplittingError(
                "triangular factor must have a strictly positive diagonal"
            )

    @property
    def order(self):
        return self.f_tensor.ndim

    @property
    def dim(self):
        return self.f_tensor.shape[0]

    @property
    def f_bar(self):
        """Semi-symmetrized ``F``, computed lazily (used by Jacobian checks)."""
        if self._f_bar is None:
            self._f_bar = semi_symmetrize(self.f_tensor)
        return self._f_bar

    def e_tensor(self):
        """Materialize ``E = me . I_l`` as a full tensor."""
        return matrix_tensor_product(self.me, unit_tensor(self.order, self.dim))


def build_splitting(a, kind, omega=1.0):
    """Build the Jacobi, Gauss-Seidel or SOR splitting of ``a``.

    With ``D`` the diagonal and ``-L`` the strict lower triangle of the
    majorization matrix of ``a``, the triangular factor is ``D`` (Jacobi),
    ``D - L`` (Gauss-Seidel) or ``(1/omega) (D - omega L)`` (SOR with
    ``0 < omega <= 2``).  Requires a strictly positive diagonal, which
    holds for strong M-tensors.
    """
    a = _as_tensor(a)
    l, n = a.ndim, a.shape[0]
    m_a = majorization(a)
    d = np.diag(m_a).copy()
    if np.any(d <= 0.0):
        raise SingularSplittingError(
            "majorization diagonal must be strictly positive to split"
        )

    if kind == JACOBI:
        me = np.diag(d)
    elif kind == GAUSS_SEIDEL:
        me = np.tril(m_a)
    elif kind == SOR:
        if not 0.0 < omega <= 2.0:
            raise ValueError(f"omega must lie in (0, 2], got {omega}")
        me = np.tril(m_a, -1)
        me[np.diag_indices(n)] = d / omega
    else:
        raise ValueError(f"unknown splitting kind {kind!r}")

    # F = E - A without materializing E: E only occupies (i, j, ..., j).
    f = -a.copy()
    f[(slice(None),) + (np.arange(n),) * (l - 1)] += me
    return Splitting(me=me, f_tensor=f, kind=kind, omega=omega if kind == SOR else 1.0)


def validate_splitting(s):
    """Classify a splitting as regular, weak regular, or neither.

    Regular: ``me^-1 >= 0`` entrywise and ``F >= 0``.  Weak regular:
    ``me^-1 >= 0`` and ``me^-1 F >= 0``.  The inverse is formed explicitly
    because the definition constrains its sign pattern; entrywise checks
    use a -1e-13 floor.
    """
    try:
        me_inv = np.linalg.inv(s.me)
    except np.linalg.LinAlgError as exc:
        raise SingularSplittingError("triangular factor is singular") from exc
    if me_inv.min() < _SIGN_TOL:
        return NOT_REGULAR
    if s.f_tensor.min() >= _SIGN_TOL:
        return REGULAR
    if matrix_tensor_product(me_inv, s.f_tensor).min() >= _SIGN_TOL:
        return WEAK_REGULAR
    return NOT_REGULAR


def splitting_step(s, b, x):
    """One step of the splitting's fixed-point map.

    Computes ``w = F x^(l-1) + b``, solves ``me v = w`` by forward
    substitution and returns the entrywise ``(l-1)``-th root of ``v``.
    For ``x >= 0`` and a (weak) regular splitting the result is strictly
    positive; a :class:`multilin.tensor.NonRealRootError` signals that the
    iterate left that regime.
    """
    n = s.dim
    b = _as_vector(b, n)
    x = _as_vector(x, n)
    w = apply(s.f_tensor, x) + b
    v = scipy.linalg.solve_triangular(s.me, w, lower=True, check_finite=False)
    return entrywise_root(v, s.order - 1)


def residual(a, x, b):
    """2-norm of ``A x^(l-1) - b``, the stopping metric for all solvers."""
    return float(np.linalg.norm(apply(a, x) - b))


def map_jacobian(s, b, x):
    """Analytic Jacobian of the fixed-point map at ``x``.

    Evaluates ``g = splitting_step(s, b, x)`` and solves ``W G = S`` where
    ``W = gradient_slice(E, g)`` (``E`` is already semi-symmetric: its
    support ``(i, j, ..., j)`` is invariant under trailing-mode
    permutations) and ``S = gradient_slice(f_bar, x)``.  Intended as a
    verification utility, not a solver component; cross-checked against
    finite differences in the test suite.
    """
    g = splitting_step(s, b, x)
    w = gradient_slice(semi_symmetrize(s.e_tensor()), g)
    rhs = gradient_slice(s.f_bar, x)
    return np.linalg.solve(w, rhs)
