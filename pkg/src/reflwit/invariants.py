"""Basic invariants, the degree table, the Chevalley map and invariant decompositions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import NoCanonicalInvariants, NoFormsAtDegree, NoSolution, NotInvariant, RankOutOfRange
from .linalg import rref
from .poly import Polynomial, is_invariant
from .rootsys import RootSystem, build_root_system, parse_family


@dataclass(frozen=True, eq=False)
class InvariantBasis:
    family: str
    rank: int
    etas: tuple[Polynomial, ...]
    degrees: tuple[int, ...]
    root_system: RootSystem
    hypothesis_norm_in_first: int | None
    param: int | None = None

    @property
    def n(self) -> int:
        return len(self.etas)

    @property
    def label(self) -> str:
        return self.root_system.label

    @property
    def norm_hypothesis(self) -> bool:
        """|x|^2 lies in the algebra generated by the first n-1 invariants."""
        h = self.hypothesis_norm_in_first
        return h is not None and h <= self.n - 1

    def norm_in_first(self, j: int) -> bool:
        h = self.hypothesis_norm_in_first
        return h is not None and h <= j


def power_sum(n: int, k: int) -> Polynomial:
    terms = {}
    for i in range(n):
        e = [0] * n
        e[i] = k
        terms[tuple(e)] = 1
    return Polynomial(n, terms)


def _dihedral_invariant(m: int) -> Polynomial:
    # Re((x + i y)^m) = sum over even k of C(m, k) (-1)^(k/2) x^(m-k) y^k
    terms = {(m - k, k): math.comb(m, k) * (-1) ** (k // 2) for k in range(0, m + 1, 2)}
    return Polynomial(2, terms)


def basic_invariants(family: str, rank: int) -> InvariantBasis:
    """Canonical basic invariants: power sums for Sym and B, the D(n) set, or I2(m)."""
    family = parse_family(family)
    if family == "Custom":
        raise NoCanonicalInvariants("custom root systems need explicit invariants (use custom_basis)")
    rs = build_root_system(family, rank)
    n = rs.rank
    if family == "Sym":
        etas = [power_sum(n, k) for k in range(1, n + 1)]
    elif family == "B":
        etas = [power_sum(n, 2 * i) for i in range(1, n + 1)]
    elif family == "D":
        prod = Polynomial(n, {(1,) * n: 1})
        etas = [power_sum(n, 2 * i) for i in range(1, n)] + [prod]
    elif family == "I2":
        etas = [power_sum(2, 2), _dihedral_invariant(rank)]
    else:  # pragma: no cover - parse_family guards this
        raise RankOutOfRange(family)
    return _make_basis(family, rs, etas, param=rank if family == "I2" else None)


def custom_basis(rs: RootSystem, etas: Sequence[Polynomial], check: bool = True) -> InvariantBasis:
    """Wrap a user-supplied list of basic invariants for ``rs``."""
    if check:
        gens = rs.reflections()
        for eta in etas:
            if not is_invariant(eta, gens):
                raise NotInvariant(f"{eta} is not invariant under {rs.label}")
    return _make_basis(rs.family, rs, list(etas))


def _make_basis(family: str, rs: RootSystem, etas: list[Polynomial], param=None) -> InvariantBasis:
    etas = sorted(etas, key=lambda p: p.degree())
    degrees = tuple(p.degree() for p in etas)
    norm = Polynomial.norm_squared(rs.rank)
    first = None
    for j in range(1, len(etas) + 1):
        try:
            express_in_forms(norm, etas[:j])
        except NoSolution:
            continue
        first = j
        break
    return InvariantBasis(family, rs.rank, tuple(etas), degrees, rs, first, param)


# -- degree table ---------------------------------------------------------

@dataclass(frozen=True)
class DegreeRow:
    family: str
    degrees: tuple[int, ...]
    two_dn: int
    thmB_bound: int
    o_low: int
    o_high: int

    def format(self) -> str:
        return (f"degrees: {' '.join(map(str, self.degrees))} | 2dn: {self.two_dn}"
                f" | thmB-bound: {self.thmB_bound}")


_EXCEPTIONAL = {
    "E6": (2, 5, 6, 8, 9, 12),
    "E7": (2, 6, 8, 10, 12, 14, 18),
    "E8": (2, 8, 12, 14, 18, 20, 24, 30),
    "F4": (2, 6, 8, 12),
    "G2": (2, 6),
    "H3": (2, 6, 10),
    "H4": (2, 12, 20, 30),
}


def family_degrees(family: str, param: int | None = None) -> tuple[int, ...]:
    key = family.strip().upper().replace("_", "")
    if key in _EXCEPTIONAL:
        return _EXCEPTIONAL[key]
    if param is None:
        raise RankOutOfRange(f"{family} needs a rank/parameter")
    n = param
    if key == "A":
        if n < 1:
            raise RankOutOfRange("A_n needs n >= 1")
        return tuple(range(2, n + 2))
    if key in ("SYM", "S"):
        if n < 2:
            raise RankOutOfRange("Sym(n) needs n >= 2")
        return tuple(range(1, n + 1))
    if key in ("B", "C"):
        if n < 1:
            raise RankOutOfRange("B_n needs n >= 1")
        return tuple(range(2, 2 * n + 1, 2))
    if key == "D":
        if n < 3:
            raise RankOutOfRange("D_n needs n >= 3")
        return tuple(sorted([*range(2, 2 * n - 1, 2), n]))
    if key == "I2":
        if n < 2:
            raise RankOutOfRange("I2(m) needs m >= 2")
        return tuple(sorted((2, n)))
    raise RankOutOfRange(f"unknown family {family!r}")


def degree_row(label: str, degrees: Sequence[int]) -> DegreeRow:
    odd = [d for d in degrees if d % 2]
    o_low, o_high = (min(odd), max(odd)) if odd else (1, 1)
    two_dn = 2 * max(degrees)
    return DegreeRow(label, tuple(degrees), two_dn, max(two_dn, 2 * (o_low + o_high)), o_low, o_high)


def degree_table(family: str, param: int | None = None) -> DegreeRow:
    key = family.strip().upper().replace("_", "")
    if key in _EXCEPTIONAL:
        label = key
    elif key == "I2":
        label = f"I2({param})"
    else:
        label = f"{family}{'' if param is None else param}"
    return degree_row(label, family_degrees(family, param))


# closed-form rows of the reference degree table; checked against degree_row in tests
TABLE1 = (
    ("A_n", "2,3,...,n+1", "2(n+1)", "2(n+3), n odd; 2(n+4), n even"),
    ("B_n", "2,4,6,...,2n", "4n", "4n"),
    ("D_n", "2,4,6,...,2n-2,n", "4n-4", "4n, n odd; 4n-4, n even"),
    ("E_6", "2,5,6,8,9,12", "24", "28"),
    ("E_7", "2,6,8,10,12,14,18", "36", "36"),
    ("E_8", "2,8,12,14,18,20,24,30", "60", "60"),
    ("F_4", "2,6,8,12", "24", "24"),
    ("G_2", "2,6", "12", "12"),
    ("H_3", "2,6,10", "20", "20"),
    ("H_4", "2,12,20,30", "60", "60"),
    ("I_2(m)", "2,m", "2m", "4m, m odd; 2m, m even"),
)

# the same closed forms as callables of the family parameter
TABLE1_FORMULAS = {
    "A_n": (lambda n: 2 * (n + 1), lambda n: 2 * (n + 3) if n % 2 else 2 * (n + 4)),
    "B_n": (lambda n: 4 * n, lambda n: 4 * n),
    "D_n": (lambda n: 4 * n - 4, lambda n: 4 * n if n % 2 else 4 * n - 4),
    "I_2(m)": (lambda m: 2 * m, lambda m: 4 * m if m % 2 else 2 * m),
}


def table1_text() -> str:
    header = ("Root System", "Degrees d_i", "2d_n", "max(2d_n, 2(o_low+o_high))")
    rows = [header, *TABLE1]
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    lines = [" | ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    lines.insert(1, "-+-".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


# -- Chevalley map and decompositions ---------------------------------------

def chevalley_eval(basis: InvariantBasis, point: Sequence) -> tuple:
    return tuple(eta.evaluate(point) for eta in basis.etas)


def _exponent_tuples(weights: Sequence[int], total: int):
    """All a >= 0 with sum a_i * weights[i] == total, in lexicographic order."""
    if not weights:
        if total == 0:
            yield ()
        return
    w, rest = weights[0], weights[1:]
    for a in range(total // w, -1, -1):
        for tail in _exponent_tuples(rest, total - a * w):
            yield (a, *tail)


def express_in_forms(poly: Polynomial, forms: Sequence[Polynomial]) -> Polynomial:
    """Find H with poly = H(forms) by matching coefficients; raises NoSolution.

    ``poly`` and the forms must be exact and homogeneous.
    """
    if not poly.is_homogeneous():
        raise ValueError("express_in_forms needs a homogeneous polynomial")
    k = len(forms)
    if poly.is_zero():
        return Polynomial.zero(max(k, 1))
    deg = poly.degree()
    weights = [f.degree() for f in forms]
    if any(w <= 0 for w in weights):
        raise ValueError("generating forms must have positive degree")
    if k == 0:
        raise NoSolution("no generating forms")
    tuples = list(_exponent_tuples(weights, deg))
    if not tuples:
        raise NoSolution(f"degree {deg} is not a combination of degrees {weights}")
    cache: dict[tuple, Polynomial] = {}

    def product(a: tuple) -> Polynomial:
        if a not in cache:
            nz = [i for i, e in enumerate(a) if e]
            if not nz:
                cache[a] = Polynomial.constant(1, poly.nvars)
            else:
                i = nz[-1]
                prev = list(a)
                prev[i] -= 1
                cache[a] = product(tuple(prev)) * forms[i]
        return cache[a]

    cols = [product(a) for a in tuples]
    monos = sorted({e for c in cols for e in c._terms} | set(poly._terms))
    rows = [[c.coeff(m) for c in cols] + [poly.coeff(m)] for m in monos]
    red, pivots = rref(rows)
    if len(tuples) in pivots:
        raise NoSolution(f"{poly} is not in the subalgebra generated by the given forms")
    coeffs = {}
    for row, p in zip(red, pivots):
        if row[-1] != 0:
            coeffs[tuples[p]] = row[-1]
    return Polynomial(k, coeffs)


def express_in_invariants(poly: Polynomial, basis: InvariantBasis,
                          indices: Sequence[int] | None = None, check_invariance: bool = True) -> Polynomial:
    """H in len(indices) variables with poly = H(eta_i for i in indices).

    ``indices`` are 1-based, matching eta_1..eta_n; default is all of them.
    """
    if indices is None:
        indices = range(1, basis.n + 1)
    indices = list(indices)
    if check_invariance and not is_invariant(poly, basis.root_system.reflections()):
        raise NotInvariant(f"{poly} is not invariant under {basis.label}")
    return express_in_forms(poly, [basis.etas[i - 1] for i in indices])


def random_invariant_form(basis: InvariantBasis, degree: int, seed: int = 0) -> Polynomial:
    """sum_a c_a eta^a over all a with sum a_i d_i = degree, c_a ~ U[-1, 1].

    Coefficients are the sampled doubles converted exactly to rationals, so the
    result is exactly invariant.
    """
    tuples = list(_exponent_tuples(list(basis.degrees), degree))
    if not tuples:
        raise NoFormsAtDegree(f"no invariant forms of degree {degree} for {basis.label}")
    rng = np.random.default_rng(seed)
    coeffs = rng.uniform(-1.0, 1.0, size=len(tuples))
    h = Polynomial(basis.n, {a: Fraction(float(c)) for a, c in zip(tuples, coeffs)})
    return h.compose(list(basis.etas))


def all_invariant_tuples(basis: InvariantBasis, degree: int) -> list[tuple[int, ...]]:
    return list(_exponent_tuples(list(basis.degrees), degree))
