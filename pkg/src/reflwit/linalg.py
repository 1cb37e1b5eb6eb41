"""Small exact (Fraction) and float linear-algebra helpers."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .poly import is_exact_number, to_exact

FLOAT_RANK_RTOL = 1e-9


def is_exact_matrix(rows) -> bool:
    return all(is_exact_number(v) for r in rows for v in r)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (matrix, pivot columns)."""
    m = [[to_exact(v) for v in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank_exact(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def rank_float(rows: Sequence[Sequence], rtol: float = FLOAT_RANK_RTOL) -> int:
    a = np.asarray(rows, dtype=float)
    if a.size == 0:
        return 0
    scale = np.abs(a).max()
    if scale == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    return int((s > rtol * scale).sum())


def rank(rows: Sequence[Sequence]) -> int:
    return rank_exact(rows) if is_exact_matrix(rows) else rank_float(rows)


def nullspace_exact(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : A x = 0} as a list of vectors.

    Each vector has a 1 in one free coordinate; the result is then rescaled so
    its first nonzero entry is positive.
    """
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(normalize_sign(v))
    return basis


def nullspace_float(rows: Sequence[Sequence], ncols: int, rtol: float = FLOAT_RANK_RTOL) -> list[list[float]]:
    a = np.asarray(rows, dtype=float).reshape(-1, ncols)
    if a.size == 0:
        return [list(e) for e in np.eye(ncols)]
    _, s, vt = np.linalg.svd(a)
    scale = max(np.abs(a).max(), 1e-300)
    r = int((s > rtol * scale).sum())
    return [normalize_sign(list(v)) for v in vt[r:]]


def normalize_sign(v: list) -> list:
    for x in v:
        if x != 0:
            return v if x > 0 else [-y for y in v]
    return v


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple[tuple, ...]:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def matvec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def transpose(a: Sequence[Sequence]) -> tuple[tuple, ...]:
    return tuple(zip(*a))


def identity(n: int, exact: bool = True) -> tuple[tuple, ...]:
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))
