"""Sparse multivariate polynomials over Q (exact) or float64.

Terms are stored as ``{exponent tuple: coefficient}`` with no explicit
zeros.  Iteration is in descending graded-lexicographic order so that
printing and serialization are deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainMismatch, ShapeError

Exps = tuple[int, ...]


def _grlex_key(exps: Exps):
    return (sum(exps), exps)


def to_exact(x) -> Fraction:
    """Coerce an int/Fraction (or a numeric string like '3/4') to Fraction."""
    if isinstance(x, bool):
        raise DomainMismatch("booleans are not coefficients")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, np.integer):
        return Fraction(int(x))
    raise DomainMismatch(f"cannot use {x!r} as an exact coefficient")


def is_exact_number(x) -> bool:
    return isinstance(x, (int, Fraction, Rational, np.integer)) and not isinstance(x, bool)


class Polynomial:
    def __init__(self, nvars: int, terms: Mapping[Exps, object] | None = None, exact: bool = True):
        self.nvars = int(nvars)
        self.exact = bool(exact)
        clean: dict[Exps, object] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars:
                raise ShapeError(f"exponent {exps} does not match nvars={self.nvars}")
            if any(e < 0 for e in exps):
                raise ShapeError(f"negative exponent in {exps}")
            c = to_exact(c) if self.exact else float(c)
            if c != 0:
                clean[exps] = clean.get(exps, 0) + c
                if clean[exps] == 0:
                    del clean[exps]
        self._terms = clean

    @classmethod
    def _raw(cls, nvars: int, terms: dict, exact: bool) -> Polynomial:
        # trusted fast path: coefficients already in the right domain
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.exact = exact
        obj._terms = {e: c for e, c in terms.items() if c != 0}
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, exact: bool = True) -> Polynomial:
        return cls(nvars, {}, exact)

    @classmethod
    def constant(cls, c, nvars: int, exact: bool = True) -> Polynomial:
        return cls(nvars, {(0,) * nvars: c}, exact)

    @classmethod
    def var(cls, i: int, nvars: int, exact: bool = True) -> Polynomial:
        exps = [0] * nvars
        exps[i] = 1
        return cls(nvars, {tuple(exps): 1}, exact)

    @classmethod
    def linear_form(cls, coeffs: Sequence, exact: bool | None = None) -> Polynomial:
        n = len(coeffs)
        if exact is None:
            exact = all(is_exact_number(c) for c in coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            exps = [0] * n
            exps[i] = 1
            terms[tuple(exps)] = c
        return cls(n, terms, exact)

    @classmethod
    def norm_squared(cls, nvars: int, exact: bool = True) -> Polynomial:
        """The form x_1^2 + ... + x_n^2."""
        terms = {}
        for i in range(nvars):
            exps = [0] * nvars
            exps[i] = 2
            terms[tuple(exps)] = 1
        return cls(nvars, terms, exact)

    # -- basic accessors --------------------------------------------------

    def terms(self) -> list[tuple[Exps, object]]:
        """Terms in descending graded-lex order."""
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def coeff(self, exps: Sequence[int]):
        return self._terms.get(tuple(exps), Fraction(0) if self.exact else 0.0)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(e) for e in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def leading(self) -> tuple[Exps, object]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return self.terms()[0]

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self._terms), default=-1)

    def to_float(self) -> Polynomial:
        if not self.exact:
            return self
        return Polynomial(self.nvars, {e: float(c) for e, c in self._terms.items()}, exact=False)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ShapeError(f"nvars mismatch: {self.nvars} vs {other.nvars}")
            if other.exact != self.exact:
                raise DomainMismatch("cannot mix exact and float polynomials; convert with to_float()")
            return other
        if self.exact and not is_exact_number(other):
            raise DomainMismatch(f"float scalar {other!r} applied to an exact polynomial")
        return Polynomial.constant(other, self.nvars, self.exact)

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial._raw(self.nvars, out, self.exact)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._raw(self.nvars, {e: -c for e, c in self._terms.items()}, self.exact)

    def __sub__(self, other) -> Polynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return self._coerce(other) - self

    def scale(self, c) -> Polynomial:
        if self.exact:
            if not is_exact_number(c):
                raise DomainMismatch(f"float scalar {c!r} applied to an exact polynomial")
            c = to_exact(c)
        else:
            c = float(c)
        return Polynomial._raw(self.nvars, {e: v * c for e, v in self._terms.items()}, self.exact)

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            self._coerce(other)
            return self.scale(other)
        other = self._coerce(other)
        out: dict[Exps, object] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial._raw(self.nvars, out, self.exact)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = Polynomial.constant(1, self.nvars, self.exact)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return (self.nvars == other.nvars and self.exact == other.exact
                    and self._terms == other._terms)
        if isinstance(other, (int, float, Fraction)):
            return self == Polynomial.constant(other, self.nvars, self.exact and is_exact_number(other))
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.nvars, self.exact, frozenset(self._terms.items())))

    def almost_equal(self, other: Polynomial, tol: float = 1e-9) -> bool:
        a, b = self.to_float(), other.to_float()
        keys = set(a._terms) | set(b._terms)
        return all(abs(a._terms.get(k, 0.0) - b._terms.get(k, 0.0)) <= tol for k in keys)

    def exact_divide(self, other: Polynomial) -> Polynomial | None:
        """Quotient if ``other`` divides ``self`` exactly (grlex division), else None."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead_e, lead_c = other.leading()
        rem = self
        quot: dict[Exps, object] = {}
        while not rem.is_zero():
            e, c = rem.leading()
            if any(a < b for a, b in zip(e, lead_e)):
                return None
            qe = tuple(a - b for a, b in zip(e, lead_e))
            qc = c / lead_c
            quot[qe] = qc
            rem = rem - other * Polynomial(self.nvars, {qe: qc}, self.exact)
        return Polynomial(self.nvars, quot, self.exact)

    # -- calculus and substitution ---------------------------------------

    def evaluate(self, point: Sequence):
        if len(point) != self.nvars:
            raise ShapeError(f"point has length {len(point)}, expected {self.nvars}")
        exact_point = self.exact and all(is_exact_number(p) for p in point)
        if exact_point:
            point = [to_exact(p) for p in point]
            total = Fraction(0)
        else:
            point = [float(p) for p in point]
            total = 0.0
        for exps, c in self._terms.items():
            term = c if exact_point else float(c)
            for p, e in zip(point, exps):
                if e:
                    term *= p ** e
            total += term
        return total

    __call__ = evaluate

    def diff(self, i: int) -> Polynomial:
        out = {}
        for exps, c in self._terms.items():
            e = exps[i]
            if e:
                new = list(exps)
                new[i] = e - 1
                out[tuple(new)] = c * e
        return Polynomial._raw(self.nvars, out, self.exact)

    def gradient(self) -> list[Polynomial]:
        return [self.diff(i) for i in range(self.nvars)]

    def compose(self, polys: Sequence[Polynomial]) -> Polynomial:
        """Substitute ``polys[i]`` for the i-th variable."""
        if len(polys) != self.nvars:
            raise ShapeError(f"need {self.nvars} substitutions, got {len(polys)}")
        if not polys:
            raise ShapeError("cannot compose a polynomial in zero variables")
        target = polys[0]
        exact = self.exact and all(p.exact for p in polys)
        subs = [p if exact else p.to_float() for p in polys]
        if any(p.nvars != target.nvars for p in subs):
            raise ShapeError("substituted polynomials must share nvars")
        me = self if exact else self.to_float()
        cache: dict[tuple[int, int], Polynomial] = {}

        def power(i, e):
            if (i, e) not in cache:
                cache[(i, e)] = subs[i] ** e
            return cache[(i, e)]

        out: dict[Exps, object] = {}
        for exps, c in me._terms.items():
            term = Polynomial.constant(c, target.nvars, exact)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            for te, tc in term._terms.items():
                out[te] = out.get(te, 0) + tc
        return Polynomial._raw(target.nvars, out, exact)

    def substitute_linear(self, matrix: Sequence[Sequence]) -> Polynomial:
        """Return u -> F(M u) for an n x k matrix M (given as n rows)."""
        rows = [list(r) for r in matrix]
        if len(rows) != self.nvars:
            raise ShapeError(f"matrix has {len(rows)} rows, polynomial has {self.nvars} vars")
        k = len(rows[0]) if rows else 0
        if any(len(r) != k for r in rows):
            raise ShapeError("ragged matrix")
        if k == 0:
            raise ShapeError("substitution into zero variables")
        exact = self.exact and all(is_exact_number(v) for r in rows for v in r)
        forms = [Polynomial.linear_form(r, exact=exact) for r in rows]
        return self.compose(forms)

    # -- numeric evaluation ----------------------------------------------

    @cached_property
    def _arrays(self) -> tuple[np.ndarray, np.ndarray]:
        items = self.terms()
        if not items:
            return np.zeros((0, self.nvars), dtype=np.int64), np.zeros(0)
        exps = np.array([e for e, _ in items], dtype=np.int64).reshape(len(items), self.nvars)
        coeffs = np.array([float(c) for _, c in items])
        return exps, coeffs

    def eval_batch(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at each row of a (S, n) float array."""
        exps, coeffs = self._arrays
        pts = np.asarray(points, dtype=float)
        if exps.shape[0] == 0:
            return np.zeros(pts.shape[0])
        mono = np.prod(pts[:, None, :] ** exps[None, :, :], axis=2)
        return mono @ coeffs

    @cached_property
    def _grad_polys(self) -> list[Polynomial]:
        return [g.to_float() for g in self.gradient()]

    def grad_batch(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        cols = [g.eval_batch(pts) for g in self._grad_polys]
        return np.stack(cols, axis=1) if cols else np.zeros((pts.shape[0], 0))

    # -- text --------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps, c in self.terms():
            mono = "*".join(
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(exps) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        dom = "exact" if self.exact else "float"
        return f"Polynomial({self}, nvars={self.nvars}, {dom})"

    def dumps(self) -> str:
        """Serialize in the line-oriented polynomial file format."""
        dom = "exact" if self.exact else "float"
        lines = [f"nvars={self.nvars} domain={dom}"]
        for exps, c in self.terms():
            coeff = str(c) if self.exact else repr(float(c))
            lines.append(" ".join([coeff, *map(str, exps)]))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> Polynomial:
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if not lines:
            raise ValueError("empty polynomial file")
        header = dict(field.split("=", 1) for field in lines[0].split())
        try:
            nvars = int(header["nvars"])
            domain = header["domain"]
        except KeyError as exc:
            raise ValueError(f"bad header line {lines[0]!r}") from exc
        if domain not in ("exact", "float"):
            raise ValueError(f"unknown domain {domain!r}")
        exact = domain == "exact"
        terms: dict[Exps, object] = {}
        for ln in lines[1:]:
            fields = ln.split()
            if len(fields) != nvars + 1:
                raise ValueError(f"term line {ln!r} should have {nvars + 1} fields")
            exps = tuple(int(f) for f in fields[1:])
            c = Fraction(fields[0]) if exact else float(fields[0])
            terms[exps] = terms.get(exps, 0) + c
        return cls(nvars, terms, exact)


def read_polynomial(path) -> Polynomial:
    with open(path, encoding="utf-8") as fh:
        return Polynomial.loads(fh.read())


def write_polynomial(poly: Polynomial, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(poly.dumps())


class PolyMatrix:
    """A rows x cols grid of polynomials sharing nvars."""

    def __init__(self, rows: Iterable[Iterable[Polynomial]]):
        self.rows = [list(r) for r in rows]
        if not self.rows or not self.rows[0]:
            raise ShapeError("empty matrix")
        ncols = len(self.rows[0])
        if any(len(r) != ncols for r in self.rows):
            raise ShapeError("ragged polynomial matrix")
        nv = {p.nvars for r in self.rows for p in r}
        if len(nv) != 1:
            raise ShapeError("matrix entries must share nvars")
        self.nvars = nv.pop()

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> PolyMatrix:
        return PolyMatrix([[self.rows[i][j] for j in cols] for i in rows])

    def columns(self, cols: Sequence[int]) -> PolyMatrix:
        return self.submatrix(range(self.shape[0]), cols)

    def det(self) -> Polynomial:
        """Cofactor expansion along columns, memoized on the remaining row set."""
        n, m = self.shape
        if n != m:
            raise ShapeError(f"determinant of a non-square {n}x{m} matrix")
        memo: dict[tuple[int, ...], Polynomial] = {}
        proto = self.rows[0][0]

        def expand(rows: tuple[int, ...]) -> Polynomial:
            if not rows:
                return Polynomial.constant(1, self.nvars, proto.exact)
            if rows in memo:
                return memo[rows]
            col = n - len(rows)
            acc = Polynomial.zero(self.nvars, proto.exact)
            for pos, r in enumerate(rows):
                entry = self.rows[r][col]
                if entry.is_zero():
                    continue
                minor = expand(rows[:pos] + rows[pos + 1:])
                term = entry * minor
                acc = acc - term if pos % 2 else acc + term
            memo[rows] = acc
            return acc

        return expand(tuple(range(n)))

    def evaluate(self, point: Sequence) -> list[list]:
        return [[p.evaluate(point) for p in r] for r in self.rows]

    def substitute_linear(self, matrix) -> PolyMatrix:
        return PolyMatrix([[p.substitute_linear(matrix) for p in r] for r in self.rows])

    def __str__(self) -> str:
        return "\n".join("[ " + " | ".join(str(p) for p in r) + " ]" for r in self.rows)


def is_invariant(poly: Polynomial, generators: Iterable, tol: float = 1e-9) -> bool:
    """True iff F(g x) = F(x) for every generator (matrices or objects with ``.matrix``).

    Exact comparison when both the form and the generator are exact,
    otherwise coefficientwise within ``tol``.
    """
    for g in generators:
        m = getattr(g, "matrix", g)
        moved = poly.substitute_linear(m)
        if moved.exact and poly.exact:
            if moved != poly:
                return False
        elif not moved.almost_equal(poly, tol):
            return False
    return True
