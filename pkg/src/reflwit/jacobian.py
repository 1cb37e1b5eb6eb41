"""Chevalley Jacobian, its root-product factorization and minor-rank checks."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import FactorizationFailed, LocusMismatch
from .invariants import InvariantBasis, basic_invariants
from .linalg import rank, rank_exact, rank_float
from .poly import Polynomial, PolyMatrix, is_exact_number
from .rootsys import RootSystem, arrangement_flats, generate_group, hyperplane_flat, is_general


def chevalley_jacobian(basis: InvariantBasis) -> PolyMatrix:
    """Entry (i, k) is d eta_k / d x_i; column k is grad eta_k."""
    grads = [eta.gradient() for eta in basis.etas]
    n = basis.rank
    return PolyMatrix([[grads[k][i] for k in range(basis.n)] for i in range(n)])


def root_product(rs: RootSystem) -> Polynomial:
    """Product of the linear forms <alpha, x> over the positive roots, as listed."""
    out = Polynomial.constant(1, rs.rank, rs.exact)
    for a in rs.positive_roots:
        out = out * Polynomial.linear_form(list(a), exact=rs.exact)
    return out


@dataclass
class FactorizationReport:
    det: Polynomial
    product: Polynomial
    lam: Fraction | float
    residual: Polynomial

    @property
    def ok(self) -> bool:
        return self.residual.is_zero() and self.lam != 0


def factorization_check(basis: InvariantBasis, rs: RootSystem | None = None) -> FactorizationReport:
    """Verify det J = lambda * prod l_alpha exactly, lambda from the leading coefficients."""
    rs = rs or basis.root_system
    det = chevalley_jacobian(basis).det()
    prod = root_product(rs)
    if not rs.exact:
        det, prod = det.to_float(), prod.to_float()
    if det.is_zero():
        raise FactorizationFailed(f"{basis.label}: Jacobian determinant vanishes identically")
    lead_e, lead_c = prod.leading()
    lam = det.coeff(lead_e) / lead_c
    residual = det - prod * lam
    report = FactorizationReport(det, prod, lam, residual)
    if rs.exact and not report.ok:
        raise FactorizationFailed(f"{basis.label}: residual {residual} is not zero")
    if not rs.exact and not residual.almost_equal(Polynomial.zero(det.nvars, False), 1e-9):
        raise FactorizationFailed(f"{basis.label}: residual exceeds 1e-9")
    return report


def minor_rank(basis: InvariantBasis, point: Sequence, j: int | None = None,
               jac: PolyMatrix | None = None) -> int:
    """Rank of the first j gradient columns at ``point`` (all columns if j is None)."""
    jac = jac or chevalley_jacobian(basis)
    j = basis.n if j is None else j
    vals = jac.columns(range(j)).evaluate(point)
    exact = all(is_exact_number(x) for x in point)
    return rank_exact(vals) if exact else rank_float(vals)


@dataclass
class MinorReport:
    label: str
    j: int
    tested_points: int = 0
    locus_points: int = 0
    general_points: int = 0
    full_rank_violations: list = field(default_factory=list)
    equivalence_failures: list = field(default_factory=list)
    support: str = ""
    mode: str = "exact"

    @property
    def ok(self) -> bool:
        return not self.equivalence_failures and not self.full_rank_violations


_SUPPORT = {
    "B": "proved (minor divisibility for B_n)",
    "Sym": "supported (type A by the argument used for B_n)",
    "D": "verified example for D(3); conjectural otherwise",
}


def minor_factorization_check(basis: InvariantBasis, rs: RootSystem | None = None, j: int = 1,
                              n_samples: int = 100, seed: int = 0) -> MinorReport:
    """Test rank(first j columns) <= j-1 <=> rank(J) <= j-1 on sampled points.

    Half of the samples are random rational points of arrangement flats (all
    dimensions, so both sides of the equivalence are exercised), half are
    random general points where J must have full rank.
    """
    rs = rs or basis.root_system
    jac = chevalley_jacobian(basis)
    support = _SUPPORT.get(basis.family, "conjectural")
    if basis.family == "D" and basis.rank != 3:
        support = "conjectural (D(n), n > 3)"
    report = MinorReport(basis.label, j, support=support, mode="exact" if rs.exact else "evidence")
    rng = random.Random(f"{seed}:{basis.label}:{j}")
    n = basis.rank

    if rs.exact:
        flats = [fl for dim, fls in sorted(arrangement_flats(rs).items()) for fl in fls if dim > 0]
    else:
        flats = [hyperplane_flat(a) for a in rs.positive_roots]

    def random_point_on(fl):
        cols = fl.columns()
        if rs.exact:
            coefs = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in cols]
            return tuple(sum((c * col[i] for c, col in zip(coefs, cols)), Fraction(0)) for i in range(n))
        coefs = [rng.uniform(-2, 2) for _ in cols]
        return tuple(sum(c * float(col[i]) for c, col in zip(coefs, cols)) for i in range(n))

    def random_general():
        while True:
            if rs.exact:
                p = tuple(Fraction(rng.randint(-20, 20), rng.randint(1, 7)) for _ in range(n))
            else:
                p = tuple(rng.uniform(-2, 2) for _ in range(n))
            if is_general(rs, p):
                return p

    n_locus = n_samples - n_samples // 2
    samples = [("locus", random_point_on(flats[i % len(flats)])) for i in range(n_locus)]
    samples += [("general", random_general()) for _ in range(n_samples // 2)]
    for kind, p in samples:
        vals = jac.evaluate(p)
        first = [row[:j] for row in vals]
        if rs.exact:
            r_full, r_first = rank_exact(vals), rank_exact(first)
        else:
            r_full, r_first = rank_float(vals), rank_float(first)
        report.tested_points += 1
        if kind == "locus":
            report.locus_points += 1
        else:
            report.general_points += 1
            if r_full < basis.n:
                report.full_rank_violations.append(p)
        if (r_full <= j - 1) != (r_first <= j - 1):
            report.equivalence_failures.append((p, r_first, r_full))
    return report


# parametric lines of the vanishing locus of the 2x2 minors of the first two
# columns of the D(3) Jacobian
D3_LOCUS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1))


@dataclass
class LocusReport:
    families: dict
    off_locus_point: tuple
    off_locus_minors: list
    ok: bool


def _all_minors(mat: PolyMatrix, size: int) -> list[Polynomial]:
    rows, cols = mat.shape
    return [mat.submatrix(r, c).det()
            for r in itertools.combinations(range(rows), size)
            for c in itertools.combinations(range(cols), size)]


def d3_locus_check(off_point: Sequence[int] = (1, 2, 3)) -> LocusReport:
    """Substitute each line t*v of the D(3) locus into every 2x2 minor.

    Both the minors of the first two columns and those of the whole Jacobian
    must vanish identically in t; at ``off_point`` some minor of the first two
    columns must not.
    """
    basis = basic_invariants("D", 3)
    jac = chevalley_jacobian(basis)
    first_two = _all_minors(jac.columns([0, 1]), 2)
    full = _all_minors(jac, 2)
    families = {}
    for v in D3_LOCUS:
        col = [[Fraction(x)] for x in v]
        residues = [m.substitute_linear(col) for m in first_two + full]
        families[v] = all(r.is_zero() for r in residues)
    off_vals = [m.evaluate([Fraction(x) for x in off_point]) for m in first_two]
    ok = all(families.values()) and any(v != 0 for v in off_vals)
    report = LocusReport(families, tuple(off_point), off_vals, ok)
    if not ok:
        raise LocusMismatch(f"D(3) locus check failed: {families}, off-locus minors {off_vals}")
    return report


def jacobian_rank_at(basis: InvariantBasis, point: Sequence) -> int:
    return rank(chevalley_jacobian(basis).evaluate(point))


def group_order_check(basis: InvariantBasis) -> tuple[int, int]:
    """(BFS group order, product of degrees)."""
    order = len(generate_group(basis.root_system))
    prod = 1
    for d in basis.degrees:
        prod *= d
    return order, prod
