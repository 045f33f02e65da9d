"""Benchmark problem families: all order-3 strong M-tensors.

Three generators, each of the form ``A = s I - B`` with ``B >= 0`` and
``s`` exceeding the spectral radius of ``B``:

* ``random``: ``B`` has i.i.d. uniform [0, 1) entries and
  ``s = 2 max_i (B e^2)_i``, which dominates the radius of any nonnegative
  tensor.  Seeded and reproducible (see :func:`random_tensor`).
* ``banded``: diagonal 8 with three ``-1/3`` couplings per interior row;
  effectively tridiagonal and diagonally dominant.
* ``sine``: dense ``b[i, j, k] = |sin(i + j + k)|`` (1-based indices) with
  ``s = n^2``.

The conventional right-hand side for all families is the all-ones vector.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "RANDOM",
    "BANDED",
    "SINE",
    "FAMILIES",
    "random_tensor",
    "banded_tensor",
    "sine_tensor",
    "generate",
    "rhs_and_start",
]

RANDOM = "random"
BANDED = "banded"
SINE = "sine"
FAMILIES = (RANDOM, BANDED, SINE)


def random_tensor(n, seed):
    """Random strong M-tensor ``2 max_i(B e^2)_i * I - B``, B ~ U[0, 1).

    The stream is PCG64 (numpy's default generator) with 53-bit uniform
    doubles: a fixed seed reproduces the tensor bit for bit.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    b = rng.random((n, n, n))
    s = 2.0 * b.sum(axis=(1, 2)).max()
    a = -b
    a[np.arange(n), np.arange(n), np.arange(n)] += s
    return a


def banded_tensor(n):
    """Banded strong M-tensor: diagonal 8, three -1/3 couplings per row.

    Nonzeros: ``a[i,i,i] = 8`` for all ``i``; for 1-based ``i = 2..n-1``,
    ``a[i+1,i,i] = a[i,i-1,i] = a[i,i,i+1] = -1/3``.  Exactly
    ``n + 3 (n - 2)`` nonzeros.
    """
    if n < 3:
        raise ValueError(f"banded family needs n >= 3, got {n}")
    a = np.zeros((n, n, n))
    idx = np.arange(n)
    a[idx, idx, idx] = 8.0
    j = np.arange(1, n - 1)  # 0-based interior rows
    a[j + 1, j, j] = -1.0 / 3.0
    a[j, j - 1, j] = -1.0 / 3.0
    a[j, j, j + 1] = -1.0 / 3.0
    return a


def sine_tensor(n):
    """Dense strong M-tensor ``n^2 I - B`` with ``b[i,j,k] = |sin(i+j+k)|``.

    The sine argument uses 1-based indices.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    idx = np.arange(1, n + 1, dtype=float)
    a = -np.abs(np.sin(idx[:, None, None] + idx[None, :, None] + idx[None, None, :]))
    k = np.arange(n)
    a[k, k, k] += float(n) ** 2
    return a


def generate(problem, n, seed=0):
    """Build the named family's tensor at dimension ``n``."""
    if problem == RANDOM:
        return random_tensor(n, seed)
    if problem == BANDED:
        return banded_tensor(n)
    if problem == SINE:
        return sine_tensor(n)
    raise ValueError(f"unknown problem family {problem!r}")


def rhs_and_start(problem, n):
    """Conventional ``(b, z0)``: all-ones b, family-specific start."""
    from .solver import default_initial

    return np.ones(n), default_initial(problem, n)
