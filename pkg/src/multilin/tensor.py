"""Dense tensor primitives for multilinear systems ``A x^(l-1) = b``.

An order-``l``, dimension-``n`` tensor is stored as a C-ordered
:class:`numpy.ndarray` of shape ``(n,) * l``; vectors are shape ``(n,)``
and matrices shape ``(n, n)``.  All indices are 0-based in code; file
formats and printed diagnostics use 1-based indices (see :mod:`multilin.io`).

Every function here is pure: inputs are never modified and results are
freshly allocated, so tensors can be shared freely across threads.
"""

from __future__ import annotations

import itertools
import math
import warnings

import numpy as np

__all__ = [
    "NOT_Z",
    "Z",
    "M",
    "STRONG_M",
    "NonRealRootError",
    "ConvergenceWarning",
    "apply",
    "unit_tensor",
    "majorization",
    "matrix_tensor_product",
    "semi_symmetrize",
    "gradient_slice",
    "entrywise_root",
    "spectral_radius_nonneg",
    "classify",
]

# Tensor classes returned by classify().
NOT_Z = "not_z"  # some off-diagonal entry is positive
Z = "z"  # nonpositive off-diagonal, but eta < rho(B)
M = "m"  # eta == rho(B) within tolerance (boundary case)
STRONG_M = "strong_m"  # eta > rho(B): unique positive solution regime


class NonRealRootError(ArithmeticError):
    """An even entrywise root was requested of a negative entry.

    Raised by :func:`entrywise_root` when an iterate has left the
    nonnegative cone; solvers treat this as a hard failure.
    """


class ConvergenceWarning(UserWarning):
    """An iterative estimate stopped before reaching its tolerance."""


def _as_tensor(a):
    a = np.asarray(a, dtype=float)
    if a.ndim < 2:
        raise ValueError(f"tensor must have order >= 2, got order {a.ndim}")
    if len(set(a.shape)) != 1:
        raise ValueError(f"tensor must be cubical, got shape {a.shape}")
    return a


def _as_vector(x, n):
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise ValueError(f"expected vector of shape ({n},), got {x.shape}")
    return x


def _diag_index(l, n):
    return (np.arange(n),) * l


def apply(a, x):
    """Contract tensor ``a`` with ``l-1`` copies of vector ``x``.

    Returns the length-``n`` vector with entries
    ``sum_{i2..il} a[i, i2, ..., il] * x[i2] * ... * x[il]``.
    """
    a = _as_tensor(a)
    x = _as_vector(x, a.shape[0])
    v = a
    for _ in range(a.ndim - 1):
        v = v.dot(x)
    return v


def unit_tensor(l, n):
    """Order-``l`` identity: 1 where all indices coincide, 0 elsewhere."""
    if l < 2:
        raise ValueError(f"order must be >= 2, got {l}")
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    t = np.zeros((n,) * l)
    t[_diag_index(l, n)] = 1.0
    return t


def majorization(a):
    """The n-by-n matrix with ``M[i, j] = a[i, j, j, ..., j]``."""
    a = _as_tensor(a)
    n = a.shape[0]
    idx = np.arange(n)
    return a[(slice(None),) + (idx,) * (a.ndim - 1)].copy()


def matrix_tensor_product(m, b):
    """Contract matrix ``m`` into the first mode of tensor ``b``.

    ``c[j, i2, ..., ik] = sum_{j2} m[j, j2] * b[j2, i2, ..., ik]``.
    """
    m = np.asarray(m, dtype=float)
    b = _as_tensor(b)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[1] != b.shape[0]:
        raise ValueError(
            f"matrix columns ({m.shape[1]}) must match tensor dimension ({b.shape[0]})"
        )
    return np.tensordot(m, b, axes=(1, 0))


def semi_symmetrize(a):
    """Average ``a`` over all permutations of its trailing ``l-1`` modes.

    The result is symmetric in modes ``2..l`` and contracts identically:
    ``apply(semi_symmetrize(a), x) == apply(a, x)`` for every ``x``.
    """
    a = _as_tensor(a)
    l = a.ndim
    if l == 2:
        return a.copy()
    out = np.zeros_like(a)
    for perm in itertools.permutations(range(1, l)):
        out += a.transpose((0,) + perm)
    out /= math.factorial(l - 1)
    return out


def gradient_slice(a, x):
    """Contract all but the first two modes of ``a`` with ``x``.

    Returns the n-by-n matrix ``W[i, j] = sum_{i3..il} a[i, j, i3, ..., il]
    * x[i3] * ... * x[il]``.  For a semi-symmetric tensor this is the
    building block of the contraction map's Jacobian, and satisfies
    ``gradient_slice(semi_symmetrize(a), x) @ x == apply(a, x)``.
    For order 2 the tensor itself is returned, independent of ``x``.
    """
    a = _as_tensor(a)
    x = _as_vector(x, a.shape[0])
    w = a
    for _ in range(a.ndim - 2):
        w = w.dot(x)
    return w.copy() if w is a else w


def entrywise_root(y, p):
    """Entrywise real ``p``-th root of ``y``.

    For even ``p`` every entry must be nonnegative; a negative entry
    raises :class:`NonRealRootError`.  For odd ``p`` the signed real root
    is returned.  ``p == 1`` is the identity.
    """
    y = np.asarray(y, dtype=float)
    if p < 1:
        raise ValueError(f"root degree must be >= 1, got {p}")
    if p == 1:
        return y.copy()
    if p % 2 == 0:
        if np.any(y < 0.0):
            i = int(np.argmax(y < 0.0))
            raise NonRealRootError(
                f"negative entry {y[i]:.3e} at position {i} under even root {p}"
            )
        if p == 2:
            return np.sqrt(y)
        return y ** (1.0 / p)
    return np.sign(y) * np.abs(y) ** (1.0 / p)


def spectral_radius_nonneg(b, tol=1e-10, max_iter=1000):
    """Spectral radius of a nonnegative tensor by shifted power iteration.

    Iterates ``y <- ((B + I) y^(l-1))^[1/(l-1)]`` (the unit shift keeps the
    iteration well defined for reducible tensors) and brackets the radius by
    the Collatz-Wielandt ratios ``lambda_i = ((B + I) y^(l-1))_i / y_i^(l-1)``,
    which satisfy ``min_i lambda_i <= rho(B) + 1 <= max_i lambda_i`` for any
    positive ``y``.  Stops when ``max - min < tol``.

    On non-convergence the tightest upper bound seen is returned and a
    :class:`ConvergenceWarning` is issued; the bound is still valid, so
    callers comparing against a larger threshold can proceed.
    """
    b = _as_tensor(b)
    if np.any(b < 0.0):
        raise ValueError("tensor must be entrywise nonnegative")
    l, n = b.ndim, b.shape[0]

    shifted = b.copy()
    shifted[_diag_index(l, n)] += 1.0

    y = np.ones(n)
    hi_best = np.inf
    for _ in range(max_iter):
        w = apply(shifted, y)
        ratios = w / y ** (l - 1)
        lo, hi = ratios.min(), ratios.max()
        hi_best = min(hi_best, hi)
        if hi - lo < tol:
            return 0.5 * (hi + lo) - 1.0
        y = entrywise_root(w, l - 1)
        y /= y.max()
    warnings.warn(
        f"power iteration did not bracket the radius to {tol:.1e} in "
        f"{max_iter} iterations; returning an upper bound",
        ConvergenceWarning,
        stacklevel=2,
    )
    return hi_best - 1.0


def classify(a, tol=1e-8):
    """Classify ``a`` as one of ``NOT_Z``, ``Z``, ``M``, ``STRONG_M``.

    Decomposes ``a = eta * I - B`` with ``eta`` the maximum diagonal entry
    (the minimal shift making ``B`` nonnegative; any larger shift gives the
    same verdict since both sides move together) and compares ``eta``
    against the spectral radius of ``B``:  strong M if ``eta > rho + tol``,
    M if ``|eta - rho| <= tol``, otherwise plain Z.

    The radius estimate may stop at an upper bound for reducible ``B``;
    that only makes the strong-M verdict conservative, never wrong.
    """
    a = _as_tensor(a)
    l, n = a.ndim, a.shape[0]
    diag = _diag_index(l, n)

    off_max = a.copy()
    off_max[diag] = -np.inf
    if off_max.max(initial=-np.inf) > 0.0:
        return NOT_Z

    eta = float(a[diag].max())
    b = -a
    b[diag] += eta
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        rho = spectral_radius_nonneg(b, tol=0.01 * tol, max_iter=500)
    if eta > rho + tol:
        return STRONG_M
    if abs(eta - rho) <= tol:
        return M
    return Z
