"""Dense GF(2) linear algebra on numpy uint8 arrays.

Row operations are XORs; every routine copies its input.
"""

from __future__ import annotations

import numpy as np


def as_bits(a) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) & 1).astype(np.uint8)


def rref(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    a = as_bits(m)
    if a.ndim != 2:
        raise ValueError("expected a 2D matrix")
    return rref_limited(a, a.shape[1])


def rank(m) -> int:
    a = as_bits(m)
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def nullspace(m) -> np.ndarray:
    """Basis (as rows) of {x : m x = 0}."""
    a = as_bits(m)
    cols = a.shape[1]
    r, pivots = rref(a)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, p in enumerate(pivots):
            if r[row, f]:
                basis[i, p] = 1
    return basis


def row_basis(m) -> np.ndarray:
    """Independent rows spanning the row space (the nonzero RREF rows)."""
    r, pivots = rref(m)
    return r[: len(pivots)]


class Solver:
    """Cached factorization for repeated solves of ``A x = b``.

    ``E A = R`` with R in reduced echelon form; a right-hand side is
    consistent iff ``E b`` vanishes below the rank.
    """

    def __init__(self, a) -> None:
        a = as_bits(a)
        m, n = a.shape
        aug = np.concatenate([a, np.eye(m, dtype=np.uint8)], axis=1)
        r, pivots = rref_limited(aug, n)
        self.shape = (m, n)
        self.pivots = pivots
        self.rank = len(pivots)
        self._e = r[:, n:].copy()
        self._pivot_rows = np.arange(self.rank)

    def transform(self, b) -> np.ndarray:
        b = as_bits(b)
        return (self._e.astype(np.int64) @ b.astype(np.int64) & 1).astype(np.uint8)

    def solve(self, b) -> np.ndarray | None:
        """A particular solution, or None when ``b`` is outside the column space."""
        eb = self.transform(b)
        if eb[self.rank :].any():
            return None
        x = np.zeros(self.shape[1], dtype=np.uint8)
        x[self.pivots] = eb[: self.rank]
        return x

    def contains(self, b) -> bool:
        return not self.transform(b)[self.rank :].any()


def rref_limited(m: np.ndarray, ncols: int) -> tuple[np.ndarray, list[int]]:
    """Like :func:`rref` but only pivots on the first ``ncols`` columns."""
    a = m.copy()
    rows = a.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if others.size:
            a[others] ^= a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def span_elements(gens) -> np.ndarray:
    """All 2^k sums of k rows; element i selects the rows set in the bits of i."""
    g = as_bits(gens)
    k, n = g.shape
    if k > 24:
        raise ValueError(f"span of dimension {k} is too large to enumerate")
    out = np.zeros((1 << k, n), dtype=np.uint8)
    for i in range(k):
        size = 1 << i
        out[size : 2 * size] = out[:size] ^ g[i]
    return out
