"""Windowed Anderson extrapolation with a nonnegativity safeguard.

The window keeps the last ``m + 1`` map values ``g_i`` and residuals
``f_i = g_i - z_i`` of a fixed-point iteration.  Each step solves the
affine-constrained problem

    min || sum_i alpha_i f_i ||   s.t.  sum_i alpha_i = 1

through its unconstrained form ``min || f_last - F z ||`` over the
residual-difference matrix ``F`` (columns ``f_{i+1} - f_i``), mapping the
solution back by ``alpha_0 = z_0``, ``alpha_i = z_i - z_{i-1}``,
``alpha_m = 1 - z_{m-1}``, so the constraint holds by construction.  The
extrapolated point is accepted only if it is entrywise nonnegative and the
coefficients are not too large (:func:`safeguard`).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "InsufficientHistoryError",
    "AlphaSolution",
    "AndersonWindow",
    "safeguard",
]

# Columns whose pivot falls below this ratio of the leading pivot are
# treated as rank-deficient and dropped (their zeta entries stay 0).
_PIVOT_CUTOFF = 1e-12


class InsufficientHistoryError(RuntimeError):
    """The window holds fewer than two entries; no difference to work with."""


@dataclass
class AlphaSolution:
    """Mixing weights for one extrapolation step.

    ``alpha`` has length ``m_k + 1`` and sums to 1 by construction;
    ``zeta`` (length ``m_k``) is the unconstrained least-squares solution
    it was derived from.  ``rank_deficient`` flags that trailing pivots
    were dropped during the solve.
    """

    alpha: np.ndarray
    zeta: np.ndarray
    sum_abs_alpha: float
    rank_deficient: bool


class AndersonWindow:
    """Ring buffer of the last ``m + 1`` (map value, residual) pairs.

    Single-owner mutable state confined to one solver run;
    :meth:`solve_alpha` and :meth:`combine` are pure given a snapshot.
    """

    def __init__(self, m):
        if m < 1:
            raise ValueError(f"window depth must be >= 1, got {m}")
        self.m = m
        self._g = deque(maxlen=m + 1)
        self._f = deque(maxlen=m + 1)

    def __len__(self):
        return len(self._f)

    @property
    def hist_g(self):
        return list(self._g)

    @property
    def hist_f(self):
        return list(self._f)

    def push(self, g_val, f_val):
        """Append one (map value, residual) pair, evicting the oldest."""
        g_val = np.asarray(g_val, dtype=float)
        f_val = np.asarray(f_val, dtype=float)
        if g_val.shape != f_val.shape or g_val.ndim != 1:
            raise ValueError("map value and residual must be equal-length vectors")
        if self._g and g_val.shape != self._g[0].shape:
            raise ValueError("vector length changed mid-run")
        self._g.append(g_val)
        self._f.append(f_val)

    def clear(self):
        self._g.clear()
        self._f.clear()

    def solve_alpha(self):
        """Solve for the mixing weights of the current window.

        Uses QR with column pivoting on the residual-difference matrix;
        nearly collinear trailing columns (pivot ratio below 1e-12) are
        dropped, which fixes their ``zeta`` entries at 0 and degrades
        gracefully to the plain step.
        """
        depth = len(self._f)
        if depth < 2:
            raise InsufficientHistoryError(
                f"need at least 2 residuals to extrapolate, have {depth}"
            )
        m_k = depth - 1
        fs = np.column_stack(self._f)
        f_last = fs[:, -1]
        diffs = np.diff(fs, axis=1)

        q, r, piv = scipy.linalg.qr(diffs, mode="economic", pivoting=True)
        rdiag = np.abs(np.diag(r))
        if rdiag[0] == 0.0:
            rank = 0
        else:
            rank = int(np.sum(rdiag >= _PIVOT_CUTOFF * rdiag[0]))

        zeta_piv = np.zeros(m_k)
        if rank > 0:
            rhs = q[:, :rank].T @ f_last
            zeta_piv[:rank] = scipy.linalg.solve_triangular(
                r[:rank, :rank], rhs, lower=False, check_finite=False
            )
        zeta = np.zeros(m_k)
        zeta[piv] = zeta_piv

        alpha = np.empty(m_k + 1)
        alpha[0] = zeta[0]
        alpha[1:m_k] = zeta[1:] - zeta[:-1]
        alpha[m_k] = 1.0 - zeta[m_k - 1]
        return AlphaSolution(
            alpha=alpha,
            zeta=zeta,
            sum_abs_alpha=float(np.abs(alpha).sum()),
            rank_deficient=rank < m_k,
        )

    def combine(self, sol):
        """Extrapolated point ``sum_i alpha_i g_i`` over the window."""
        if len(sol.alpha) != len(self._g):
            raise ValueError(
                f"solution is stale: {len(sol.alpha)} weights for "
                f"{len(self._g)} stored map values"
            )
        gs = np.column_stack(self._g)
        return gs @ sol.alpha

    def combine_differences(self, sol):
        """Same point via ``g_last - G zeta`` over map-value differences.

        Algebraically identical to :meth:`combine`; kept as an independent
        route for cross-checking.
        """
        if len(sol.alpha) != len(self._g):
            raise ValueError("solution is stale")
        gs = np.column_stack(self._g)
        return gs[:, -1] - np.diff(gs, axis=1) @ sol.zeta


def safeguard(y, sol, kappa):
    """Accept the extrapolated point?

    True iff every entry of ``y`` is >= 0 (an exact zero is acceptable:
    the next map application restores strict positivity) and the absolute
    coefficient sum is at most ``kappa``.
    """
    return bool(np.all(y >= 0.0)) and sol.sum_abs_alpha <= kappa
