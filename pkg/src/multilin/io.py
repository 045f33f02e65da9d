"""Text formats: sparse-coordinate tensor files and trace CSVs.

Tensor files are line-oriented ASCII.  The first non-comment line is
``l n`` (order, dimension); every following line is one entry
``i1 i2 ... il value`` with 1-based indices.  ``#`` starts a comment;
unlisted entries are zero; listing an index tuple twice is an error.
Values survive a save/load round trip bit for bit (shortest-repr floats).
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "DEFAULT_MEMORY_BUDGET",
    "TensorFormatError",
    "load_tensor",
    "save_tensor",
    "save_trace",
]

# Dense storage cap: n = 600 at order 3 (8-byte entries), configurable.
DEFAULT_MEMORY_BUDGET = 600**3 * 8


class TensorFormatError(ValueError):
    """Malformed tensor file; the message carries the line number."""


def _strip(line):
    return line.split("#", 1)[0].strip()


def load_tensor(path, max_bytes=DEFAULT_MEMORY_BUDGET):
    """Parse a coordinate-format tensor file into a dense array."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()

    header = None
    header_no = 0
    for lineno, raw in enumerate(lines, start=1):
        text = _strip(raw)
        if text:
            header, header_no = text, lineno
            break
    if header is None:
        raise TensorFormatError(f"{path}: no header line 'l n' found")

    parts = header.split()
    if len(parts) != 2:
        raise TensorFormatError(
            f"{path}:{header_no}: header must be 'l n', got {header!r}"
        )
    try:
        l, n = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise TensorFormatError(f"{path}:{header_no}: non-integer header") from exc
    if l < 2 or n < 1:
        raise TensorFormatError(
            f"{path}:{header_no}: need order >= 2 and dimension >= 1, got l={l} n={n}"
        )
    nbytes = 8 * n**l
    if nbytes > max_bytes:
        raise TensorFormatError(
            f"{path}:{header_no}: dense size {nbytes} bytes exceeds the "
            f"{max_bytes}-byte budget"
        )

    a = np.zeros((n,) * l)
    seen = set()
    for lineno, raw in enumerate(lines, start=1):
        if lineno <= header_no:
            continue
        text = _strip(raw)
        if not text:
            continue
        parts = text.split()
        if len(parts) != l + 1:
            raise TensorFormatError(
                f"{path}:{lineno}: expected {l} indices and a value, "
                f"got {len(parts)} fields"
            )
        try:
            idx = tuple(int(p) for p in parts[:l])
            value = float(parts[l])
        except ValueError as exc:
            raise TensorFormatError(f"{path}:{lineno}: unparsable entry") from exc
        if any(not 1 <= i <= n for i in idx):
            raise TensorFormatError(
                f"{path}:{lineno}: index out of range 1..{n}: {idx}"
            )
        zero_based = tuple(i - 1 for i in idx)
        if zero_based in seen:
            raise TensorFormatError(f"{path}:{lineno}: duplicate entry {idx}")
        seen.add(zero_based)
        a[zero_based] = value
    return a


def save_tensor(a, path):
    """Write the nonzero entries of ``a`` in coordinate format."""
    a = np.asarray(a, dtype=float)
    l, n = a.ndim, a.shape[0]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{l} {n}\n")
        for idx in zip(*np.nonzero(a)):
            coords = " ".join(str(i + 1) for i in idx)
            fh.write(f"{coords} {float(a[idx])!r}\n")


def save_trace(trace, path):
    """Write a per-iteration CSV: ``iter,res,elapsed_s,step_kind``.

    Residuals use scientific notation at 6 digits; everything except
    ``elapsed_s`` is deterministic for a fixed run configuration.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("iter,res,elapsed_s,step_kind\n")
        for rec in trace.records:
            fh.write(f"{rec.k},{rec.res:.6e},{rec.elapsed_s:.6f},{rec.step_kind}\n")
