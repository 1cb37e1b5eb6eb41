"""Root systems, reflections, group generation, orbits and arrangement flats."""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateInput, GroupTooLarge, MinorFactorizationUnknown, RankOutOfRange
from .linalg import (
    dot,
    identity,
    is_exact_matrix,
    matmul,
    matvec,
    normalize_sign,
    nullspace_exact,
    nullspace_float,
    rref,
)
from .poly import is_exact_number, to_exact

FLOAT_TOL = 1e-9
FAMILIES = ("Sym", "B", "D", "I2", "Custom")

_ALIASES = {"sym": "Sym", "s": "Sym", "b": "B", "c": "B", "d": "D", "i2": "I2", "custom": "Custom"}


def parse_family(name: str) -> str:
    try:
        return _ALIASES[name.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown root-system family {name!r}; expected one of {FAMILIES}") from None


def _unit(n: int, i: int) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


def _canon(v: Sequence, exact: bool) -> list:
    """Sign-normalized copy; float entries below 1e-12 are snapped to zero."""
    if not exact:
        v = [0.0 if abs(float(x)) < 1e-12 else float(x) for x in v]
    return normalize_sign(list(v))


def _vec_key(v: Sequence, exact: bool) -> tuple:
    if exact:
        return tuple(v)
    return tuple(round(float(x), 7) + 0.0 for x in v)


@dataclass(frozen=True)
class RootSystem:
    family: str
    rank: int
    positive_roots: tuple[tuple, ...]
    exact: bool = True
    param: int | None = None

    @property
    def label(self) -> str:
        if self.family == "I2":
            return f"I2({self.param})"
        return f"{self.family}({self.rank})"

    def roots(self) -> list[tuple]:
        return [*self.positive_roots, *(tuple(-x for x in a) for a in self.positive_roots)]

    def reflections(self) -> list[GroupElement]:
        return [reflection(a) for a in self.positive_roots]

    def check_closure(self) -> bool:
        """Every reflection maps every root to +/- a listed root."""
        keys = {_vec_key(a, self.exact) for a in self.positive_roots}
        for g in self.reflections():
            for a in self.positive_roots:
                img = _canon(g.apply(a), self.exact)
                if _vec_key(img, self.exact) not in keys:
                    return False
        return True

    def dumps(self) -> str:
        lines = [f"# family={self.family} rank={self.rank}"
                 + (f" m={self.param}" if self.param is not None else "")]
        for a in self.positive_roots:
            lines.append(" ".join(str(x) if self.exact else repr(float(x)) for x in a))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> RootSystem:
        roots = []
        for ln in text.splitlines():
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            fields = ln.split()
            try:
                roots.append([Fraction(f) for f in fields])
            except ValueError:
                roots.append([float(f) for f in fields])
        return build_root_system("Custom", len(roots[0]) if roots else 0, roots=roots)


@dataclass(frozen=True)
class GroupElement:
    matrix: tuple[tuple, ...]
    word_length: int | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.matrix)

    def apply(self, v: Sequence) -> tuple:
        return matvec(self.matrix, v)

    def __matmul__(self, other: GroupElement) -> GroupElement:
        return GroupElement(matmul(self.matrix, other.matrix))

    def is_orthogonal(self, tol: float = 1e-12) -> bool:
        prod = matmul(tuple(zip(*self.matrix)), self.matrix)
        exact = is_exact_matrix(self.matrix)
        for i, row in enumerate(prod):
            for j, v in enumerate(row):
                target = 1 if i == j else 0
                if exact and v != target:
                    return False
                if not exact and abs(v - target) > tol:
                    return False
        return True


def build_root_system(family: str, rank: int, roots: Iterable[Sequence] | None = None) -> RootSystem:
    """Positive roots of Sym(n), B(n), D(n), I2(m) or an explicit Custom list.

    For I2 the ``rank`` argument is the dihedral parameter m; the ambient
    dimension is 2.
    """
    family = parse_family(family)
    if family == "Custom":
        return _custom(roots or [])
    if family == "Sym":
        if rank < 2:
            raise RankOutOfRange("Sym(n) needs n >= 2")
        pos = [tuple(_unit(rank, i)[k] - _unit(rank, j)[k] for k in range(rank))
               for i, j in itertools.combinations(range(rank), 2)]
        return RootSystem("Sym", rank, tuple(pos))
    if family == "B":
        if rank < 1:
            raise RankOutOfRange("B(n) needs n >= 1")
        pos = [tuple(_unit(rank, i)) for i in range(rank)]
        pos += _pm_pairs(rank)
        return RootSystem("B", rank, tuple(pos))
    if family == "D":
        if rank < 3:
            raise RankOutOfRange("D(n) needs n >= 3")
        return RootSystem("D", rank, tuple(_pm_pairs(rank)))
    if family == "I2":
        m = rank
        if m < 2:
            raise RankOutOfRange("I2(m) needs m >= 2")
        return _dihedral(m)
    raise RankOutOfRange(f"unsupported family {family}")


def _pm_pairs(n: int) -> list[tuple]:
    out = []
    for i, j in itertools.combinations(range(n), 2):
        ei, ej = _unit(n, i), _unit(n, j)
        out.append(tuple(a - b for a, b in zip(ei, ej)))
        out.append(tuple(a + b for a, b in zip(ei, ej)))
    return out


def _dihedral(m: int) -> RootSystem:
    # mirrors are the lines at angles k*pi/m; roots are their normals
    if m == 2:
        pos = [(Fraction(0), Fraction(1)), (Fraction(1), Fraction(0))]
        return RootSystem("I2", 2, tuple(pos), exact=True, param=m)
    if m == 4:
        pos = [(Fraction(0), Fraction(1)), (Fraction(1), Fraction(-1)),
               (Fraction(1), Fraction(0)), (Fraction(1), Fraction(1))]
        return RootSystem("I2", 2, tuple(pos), exact=True, param=m)
    pos = []
    for k in range(m):
        th = k * math.pi / m
        pos.append(tuple(_canon([-math.sin(th), math.cos(th)], False)))
    return RootSystem("I2", 2, tuple(pos), exact=False, param=m)


def _custom(roots: Iterable[Sequence]) -> RootSystem:
    roots = [list(r) for r in roots]
    if not roots:
        raise DegenerateInput("a custom root system needs at least one root")
    n = len(roots[0])
    if any(len(r) != n for r in roots):
        raise DegenerateInput("roots must share a dimension")
    exact = is_exact_matrix(roots)
    pos: list[tuple] = []
    seen_dirs: list[list] = []
    for r in roots:
        r = [to_exact(x) for x in r] if exact else [float(x) for x in r]
        if all(x == 0 for x in r):
            raise DegenerateInput("zero vector is not a root")
        r = normalize_sign(r)
        # keep one representative per line through the origin
        if any(_parallel(r, s, exact) for s in seen_dirs):
            continue
        seen_dirs.append(r)
        pos.append(tuple(r))
    rs = RootSystem("Custom", n, tuple(pos), exact=exact)
    if not rs.check_closure():
        raise DegenerateInput("root list is not closed under its reflections")
    return rs


def _parallel(a: Sequence, b: Sequence, exact: bool) -> bool:
    rows = [list(a), list(b)]
    if exact:
        return len(rref(rows)[1]) < 2
    return np.linalg.matrix_rank(np.asarray(rows, dtype=float), tol=FLOAT_TOL) < 2


def reflection(root: Sequence) -> GroupElement:
    """Matrix of w -> w - 2 <w, v>/<v, v> v."""
    exact = all(is_exact_number(x) for x in root)
    v = [to_exact(x) for x in root] if exact else [float(x) for x in root]
    vv = dot(v, v)
    if vv == 0:
        raise DegenerateInput("reflection through the zero vector")
    n = len(v)
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    rows = tuple(
        tuple((one if i == j else zero) - 2 * v[i] * v[j] / vv for j in range(n)) for i in range(n)
    )
    return GroupElement(rows, word_length=1)


def _mat_key(m: tuple[tuple, ...], exact: bool) -> tuple:
    if exact:
        return m
    return tuple(round(float(x), 7) + 0.0 for row in m for x in row)


def generate_group(rs: RootSystem, cap: int = 200_000) -> tuple[GroupElement, ...]:
    """Breadth-first closure of the root reflections; identity comes first."""
    gens = rs.reflections()
    start = GroupElement(identity(rs.rank, rs.exact), word_length=0)
    seen = {_mat_key(start.matrix, rs.exact): start}
    queue = deque([start])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = GroupElement(matmul(s.matrix, g.matrix), word_length=g.word_length + 1)
            key = _mat_key(h.matrix, rs.exact)
            if key not in seen:
                if len(seen) >= cap:
                    raise GroupTooLarge(f"{rs.label}: more than {cap} elements")
                seen[key] = h
                queue.append(h)
    return tuple(seen.values())


def is_general(rs: RootSystem, point: Sequence) -> bool:
    """True iff the point lies on no root hyperplane."""
    exact = rs.exact and all(is_exact_number(x) for x in point)
    if exact:
        p = [to_exact(x) for x in point]
        return all(dot(p, a) != 0 for a in rs.positive_roots)
    p = [float(x) for x in point]
    pn = math.sqrt(dot(p, p))
    for a in rs.positive_roots:
        a = [float(x) for x in a]
        if abs(dot(p, a)) <= FLOAT_TOL * pn * math.sqrt(dot(a, a)):
            return False
    return True


def orbit(group: Sequence[GroupElement], point: Sequence) -> list[tuple]:
    exact = all(is_exact_number(x) for x in point) and is_exact_matrix(group[0].matrix)
    p = [to_exact(x) for x in point] if exact else [float(x) for x in point]
    seen: dict[tuple, tuple] = {}
    for g in group:
        img = g.apply(p)
        seen.setdefault(_vec_key(img, exact), img)
    return sorted(seen.values())


def root_orbits(rs: RootSystem, group: Sequence[GroupElement]) -> list[list[tuple]]:
    """Partition of the positive roots into classes under +/- W."""
    index = {_vec_key(a, rs.exact): i for i, a in enumerate(rs.positive_roots)}
    classes: list[list[tuple]] = []
    assigned: set[int] = set()
    for i, a in enumerate(rs.positive_roots):
        if i in assigned:
            continue
        members = set()
        for g in group:
            img = _canon(g.apply(a), rs.exact)
            j = index.get(_vec_key(img, rs.exact))
            if j is not None:
                members.add(j)
        assigned |= members
        classes.append([rs.positive_roots[j] for j in sorted(members)])
    return classes


@dataclass(frozen=True)
class Flat:
    """A linear subspace spanned by the columns of ``basis`` (n rows x k columns)."""

    basis: tuple[tuple, ...]
    defining_roots: tuple[tuple, ...] = ()
    exact: bool = True
    label: str = ""

    @property
    def ambient_dim(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis[0]) if self.basis else 0

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.dim

    def columns(self) -> list[tuple]:
        return [tuple(r[j] for r in self.basis) for j in range(self.dim)]

    def contains(self, point: Sequence) -> bool:
        if self.dim == 0:
            return all(x == 0 for x in point)
        cols = self.columns()
        rows = [list(c) for c in cols]
        if self.exact and all(is_exact_number(x) for x in point):
            return len(rref(rows + [list(point)])[1]) == len(rref(rows)[1])
        a = np.asarray(rows + [list(point)], dtype=float)
        return np.linalg.matrix_rank(a, tol=1e-9 * max(1.0, np.abs(a).max())) == self.dim


def _flat_from_columns(cols: Sequence[Sequence], n: int, roots=(), exact=True, label="") -> Flat:
    basis = tuple(tuple(c[i] for c in cols) for i in range(n)) if cols else tuple(() for _ in range(n))
    return Flat(basis, tuple(tuple(r) for r in roots), exact, label)


def hyperplane_flat(root: Sequence) -> Flat:
    """Basis of the hyperplane orthogonal to ``root``."""
    n = len(root)
    if all(x == 0 for x in root):
        raise DegenerateInput("zero root has no hyperplane")
    if all(is_exact_number(x) for x in root):
        cols = nullspace_exact([list(root)], n)
        return _flat_from_columns(cols, n, [root], True, _root_label(root))
    cols = nullspace_float([list(root)], n)
    return _flat_from_columns(cols, n, [root], False, _root_label(root))


def _root_label(root: Sequence) -> str:
    if all(is_exact_number(x) for x in root):
        return "perp(" + ",".join(str(x) for x in root) + ")"
    return "perp(" + ",".join(f"{float(x):.6g}" for x in root) + ")"


def flat_from_roots(roots: Sequence[Sequence], n: int) -> Flat:
    exact = is_exact_matrix(roots)
    cols = nullspace_exact([list(r) for r in roots], n) if exact else nullspace_float(roots, n)
    return _flat_from_columns(cols, n, roots, exact)


def _integer_partitions(total: int, parts: int, max_part: int | None = None):
    """Partitions of ``total`` into exactly ``parts`` positive parts, non-increasing."""
    if max_part is None:
        max_part = total
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(total - parts + 1, max_part), 0, -1):
        for rest in _integer_partitions(total - first, parts - 1, first):
            yield (first, *rest)


def _set_partitions(items: list[int], k: int):
    if k == 0:
        if not items:
            yield []
        return
    if len(items) < k:
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest, k - 1):
        yield [[first], *part]
    for part in _set_partitions(rest, k):
        for i in range(len(part)):
            yield [*part[:i], [first, *part[i]], *part[i + 1:]]


def _block_flat(n: int, blocks: Sequence[Sequence[int]], signs: dict[int, int] | None = None,
                label: str = "") -> Flat:
    cols = []
    for b in blocks:
        col = [Fraction(0)] * n
        for i in b:
            col[i] = Fraction((signs or {}).get(i, 1))
        cols.append(col)
    return _flat_from_columns(cols, n, (), True, label)


def enumerate_flats(family: str, rank: int, codim: int, up_to_symmetry: bool = True) -> list[Flat]:
    """Flats of the reflection arrangement of Sym(n) or B(n) of the given codimension.

    With ``up_to_symmetry`` one representative per W-orbit is returned, with
    block sizes sorted in decreasing order and all signs +.
    """
    family = parse_family(family)
    n = rank
    if family not in ("Sym", "B"):
        raise MinorFactorizationUnknown(
            f"flat enumeration is only available for Sym and B (got {family})")
    max_codim = n - 1 if family == "Sym" else n
    if not 1 <= codim <= max_codim:
        raise RankOutOfRange(f"codim must be in 1..{max_codim} for {family}({n})")
    k = n - codim
    out = []
    if family == "Sym":
        if up_to_symmetry:
            for sizes in _integer_partitions(n, k):
                blocks, start = [], 0
                for s in sizes:
                    blocks.append(range(start, start + s))
                    start += s
                out.append(_block_flat(n, blocks, label="blocks" + str(sizes)))
        else:
            for part in _set_partitions(list(range(n)), k):
                out.append(_block_flat(n, part, label=str([[i + 1 for i in b] for b in part])))
        return out
    # B(n): a zero block plus k nonzero blocks with common absolute value
    if up_to_symmetry:
        for zeros in range(n - k, -1, -1):
            for sizes in _integer_partitions(n - zeros, k):
                blocks, start = [], 0
                for s in sizes:
                    blocks.append(range(start, start + s))
                    start += s
                out.append(_block_flat(n, blocks, label=f"blocks{sizes} zeros={zeros}"))
        return out
    for zero_set in _subsets_with_size_at_most(n, n - k):
        rest = [i for i in range(n) if i not in zero_set]
        for part in _set_partitions(rest, k):
            free = [i for b in part for i in b[1:]]
            for signs in itertools.product((1, -1), repeat=len(free)):
                sign_map = dict(zip(free, signs))
                out.append(_block_flat(n, part, sign_map,
                                       label=f"zeros={sorted(i + 1 for i in zero_set)} blocks={part}"))
    return out


def _subsets_with_size_at_most(n: int, m: int):
    for size in range(m + 1):
        yield from itertools.combinations(range(n), size)


def arrangement_flats(rs: RootSystem) -> dict[int, list[Flat]]:
    """All flats of an exact root arrangement, keyed by dimension.

    Found by intersecting subsets of at most n root hyperplanes; works for any
    exact root system (used where no closed-form enumeration exists).
    """
    if not rs.exact:
        raise DegenerateInput("arrangement_flats needs exact roots")
    n = rs.rank
    seen: dict[tuple, Flat] = {}
    roots = list(rs.positive_roots)
    for size in range(1, n + 1):
        for combo in itertools.combinations(roots, size):
            red, piv = rref([list(r) for r in combo])
            if len(piv) < size:
                continue
            key = tuple(tuple(r) for r in red)
            if key not in seen:
                seen[key] = flat_from_roots(combo, n)
    by_dim: dict[int, list[Flat]] = {}
    for fl in seen.values():
        by_dim.setdefault(fl.dim, []).append(fl)
    return by_dim
