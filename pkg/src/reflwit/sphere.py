"""Seeded multistart minimization of homogeneous quotients on the unit sphere.

All starts are advanced together as one (S, k) batch: projected gradient
steps with per-start Armijo backtracking.  Start i is drawn from a generator
seeded with (seed, i), so results do not depend on scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateFlat, ShapeError
from .poly import Polynomial, is_exact_number

STARTS_PER_DIM = 64
MAX_ITER = 500
GTOL = 1e-10
ARMIJO = 1e-4


class CompiledPoly:
    """Float evaluation of a polynomial and its gradient on batches of points."""

    def __init__(self, poly: Polynomial):
        self.k = poly.nvars
        self.maxdeg = max(poly.degree(), 0)
        self.exps, self.coeffs = poly._arrays
        self.grad = [g._arrays for g in poly.gradient()]

    def powers(self, U: np.ndarray) -> list[np.ndarray]:
        ar = np.arange(self.maxdeg + 1)
        return [U[:, i:i + 1] ** ar for i in range(self.k)]

    @staticmethod
    def _eval(pw, exps, coeffs, S):
        if exps.shape[0] == 0:
            return np.zeros(S)
        mono = np.ones((S, exps.shape[0]))
        for i, p in enumerate(pw):
            mono *= p[:, exps[:, i]]
        return mono @ coeffs

    def value(self, U: np.ndarray, pw=None) -> np.ndarray:
        pw = self.powers(U) if pw is None else pw
        return self._eval(pw, self.exps, self.coeffs, U.shape[0])

    def value_grad(self, U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        pw = self.powers(U)
        v = self._eval(pw, self.exps, self.coeffs, U.shape[0])
        g = np.stack([self._eval(pw, e, c, U.shape[0]) for e, c in self.grad], axis=1)
        return v, g


class SphereQuotient:
    """u -> P(u) / (u^T G u)^d for P homogeneous of degree 2d; 0-homogeneous."""

    def __init__(self, poly: Polynomial, gram: np.ndarray | None = None):
        deg = poly.degree()
        if deg < 0:
            deg = 0
        if deg % 2:
            raise ShapeError("sphere quotients need even degree")
        self.d = deg // 2
        self.k = poly.nvars
        self.cp = CompiledPoly(poly)
        self.gram = np.eye(self.k) if gram is None else np.asarray(gram, dtype=float)

    def value(self, U: np.ndarray) -> np.ndarray:
        N = np.einsum("si,ij,sj->s", U, self.gram, U)
        return self.cp.value(U) / N ** self.d

    def value_grad(self, U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        GU = U @ self.gram
        N = np.einsum("si,si->s", U, GU)
        p, gp = self.cp.value_grad(U)
        Nd = N ** self.d
        val = p / Nd
        grad = gp / Nd[:, None] - (2 * self.d * p / (Nd * N))[:, None] * GU
        return val, grad


class WeightedSum:
    def __init__(self, parts: Sequence[tuple[float, object]]):
        self.parts = list(parts)

    def value(self, U):
        return sum(w * f.value(U) for w, f in self.parts)

    def value_grad(self, U):
        vals, grads = 0.0, 0.0
        for w, f in self.parts:
            v, g = f.value_grad(U)
            vals = vals + w * v
            grads = grads + w * g
        return vals, grads


def _normalize(U: np.ndarray) -> np.ndarray:
    return U / np.linalg.norm(U, axis=1, keepdims=True)


def start_points(k: int, count: int, seed: int) -> np.ndarray:
    return np.stack([np.random.default_rng([seed, i]).standard_normal(k) for i in range(count)])


def batch_descent(obj, U0: np.ndarray, max_iter: int = MAX_ITER, gtol: float = GTOL) -> tuple[np.ndarray, np.ndarray]:
    """Projected gradient descent of a 0-homogeneous objective from every row of U0.

    Trial steps are Barzilai-Borwein lengths, safeguarded by Armijo
    backtracking.  A start stops when its gradient norm drops below ``gtol``,
    when backtracking fails, or after three steps of relative decrease below
    1e-15.
    """
    U = _normalize(np.array(U0, dtype=float))
    S = U.shape[0]
    f, g = obj.value_grad(U)
    step = np.full(S, 0.1)
    done = np.zeros(S, dtype=bool)
    stall = np.zeros(S, dtype=int)
    for _ in range(max_iter):
        # the objective is 0-homogeneous, so its gradient is already tangent
        gn2 = np.einsum("si,si->s", g, g)
        done |= ~(gn2 > gtol * gtol)
        done |= stall >= 3
        idx = np.nonzero(~done)[0]
        if idx.size == 0:
            break
        t = step[idx].copy()
        Ua, fa, ga, gna = U[idx], f[idx], g[idx], gn2[idx]
        newU, newf = Ua.copy(), fa.copy()
        accepted = np.zeros(idx.size, dtype=bool)
        pending = np.arange(idx.size)
        for _bt in range(60):
            trial = _normalize(Ua[pending] - t[pending, None] * ga[pending])
            ft = obj.value(trial)
            ok = ft <= fa[pending] - ARMIJO * t[pending] * gna[pending]
            sel = pending[ok]
            newU[sel] = trial[ok]
            newf[sel] = ft[ok]
            accepted[sel] = True
            pending = pending[~ok]
            if pending.size == 0:
                break
            t[pending] *= 0.5
        done[idx[~accepted]] = True
        moved = idx[accepted]
        if moved.size == 0:
            continue
        sub = accepted
        small = (fa[sub] - newf[sub]) <= 1e-15 * (1.0 + np.abs(fa[sub]))
        stall[moved] = np.where(small, stall[moved] + 1, 0)
        s_vec = newU[sub] - Ua[sub]
        U[moved] = newU[sub]
        f_new, g_new = obj.value_grad(U[moved])
        y_vec = g_new - ga[sub]
        sy = np.einsum("si,si->s", s_vec, y_vec)
        ss = np.einsum("si,si->s", s_vec, s_vec)
        bb = np.where(sy > 0, ss / np.where(sy > 0, sy, 1.0), t[sub] * 2.0)
        step[moved] = np.clip(bb, 1e-12, 1e8)
        f[moved], g[moved] = f_new, g_new
    return f, U


@dataclass(frozen=True)
class SphereMin:
    value: float
    point: tuple[float, ...]

    def __iter__(self):
        return iter((self.value, self.point))


def _pick_best(values: np.ndarray, points: np.ndarray) -> int:
    best = values.min()
    ties = np.nonzero(values == best)[0]
    if ties.size == 1:
        return int(ties[0])
    return int(min(ties, key=lambda i: tuple(points[i])))


def _basis_array(basis, n: int) -> np.ndarray | None:
    if basis is None:
        return None
    B = np.asarray([[float(x) for x in row] for row in basis], dtype=float)
    if B.ndim != 2 or B.shape[0] != n:
        raise ShapeError(f"flat basis must have {n} rows")
    return B


def restrict(poly: Polynomial, basis) -> Polynomial:
    """F(B u) as a polynomial in the flat coordinates."""
    exact = poly.exact and all(is_exact_number(x) for row in basis for x in row)
    src = poly if exact else poly.to_float()
    return src.substitute_linear(basis)


def min_on_subspace(poly: Polynomial, basis=None, starts: int | None = None, seed: int = 0,
                    max_iter: int = MAX_ITER, gtol: float = GTOL) -> SphereMin:
    """Minimum of F(x)/|x|^(2d) over nonzero x in the column span of ``basis``.

    ``basis`` is an n x k matrix given by rows (None means the whole space).
    Returns the best value and the ambient unit point where it is attained.
    """
    n = poly.nvars
    B = _basis_array(basis, n)
    k = n if B is None else B.shape[1]
    if k == 0:
        raise DegenerateFlat("cannot minimize over the zero subspace")
    if poly.degree() % 2 and not poly.is_zero():
        raise ShapeError("minimization on the sphere needs an even-degree form")
    if poly.is_zero():
        x = np.eye(n)[0] if B is None else B[:, 0] / np.linalg.norm(B[:, 0])
        return SphereMin(0.0, tuple(float(v) for v in x))
    full = CompiledPoly(poly.to_float())
    if B is None:
        P, gram = poly.to_float(), np.eye(n)
    else:
        P, gram = restrict(poly, basis).to_float(), B.T @ B
    if k == 1:
        U = np.array([[1.0], [-1.0]])
    else:
        count = starts if starts is not None else STARTS_PER_DIM * k
        obj = SphereQuotient(P, gram)
        _, U = batch_descent(obj, start_points(k, count, seed), max_iter, gtol)
    X = U if B is None else U @ B.T
    X = _normalize(X)
    vals = full.value(X)
    i = _pick_best(vals, X)
    return SphereMin(float(vals[i]), tuple(float(v) for v in X[i]))


def local_minima(obj, k: int, starts: int, seed: int, max_iter: int = MAX_ITER,
                 gtol: float = GTOL, U0: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Final (values, unit points) of every start for a custom 0-homogeneous objective."""
    U0 = start_points(k, starts, seed) if U0 is None else U0
    return batch_descent(obj, U0, max_iter, gtol)


def evaluate_on_sphere(poly: Polynomial, points: np.ndarray) -> np.ndarray:
    """F(x)/|x|^(2d) for each row."""
    X = np.asarray(points, dtype=float)
    d = max(poly.degree(), 0) // 2
    return CompiledPoly(poly.to_float()).value(X) / np.einsum("si,si->s", X, X) ** d
