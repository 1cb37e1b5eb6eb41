"""Nonnegativity tests on witness sets and the counterexample construction.

Every sphere minimum here is of the scale-invariant quotient F(x)/|x|^(2d).
A form is reported negative iff some minimum is below -NEG_TOL.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import (
    ConstructionFailed,
    DegenerateBasePoint,
    HypothesisViolated,
    LinearityViolated,
    MinorFactorizationUnknown,
    NoSolution,
    NotGeneral,
    NotInSparseForm,
    NotInvariant,
    PreconditionError,
    SearchFailed,
)
from .invariants import InvariantBasis, express_in_forms, express_in_invariants, random_invariant_form
from .jacobian import chevalley_jacobian
from .poly import Polynomial, PolyMatrix, is_exact_number, is_invariant, to_exact
from .rootsys import Flat, RootSystem, enumerate_flats, generate_group, hyperplane_flat, is_general, root_orbits
from .sphere import (
    SphereQuotient,
    WeightedSum,
    evaluate_on_sphere,
    local_minima,
    min_on_subspace,
    restrict,
    start_points,
)
from .sturm import binary_form_nonneg

NEG_TOL = 1e-8
AGREE_TOL = 1e-6

NONNEGATIVE = "nonnegative_within_tol"
EXACT_NONNEGATIVE = "exact_nonnegative"
NEGATIVE = "negative"
HYPOTHESIS_VIOLATED = "hypothesis_violated"


def fmt_number(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (int, np.integer)):
        return f"{int(x)}/1"
    return repr(float(x))


def fmt_point(p) -> str:
    return "(" + ", ".join(fmt_number(x) if isinstance(x, Fraction) else f"{float(x):.12g}" for x in p) + ")"


@dataclass
class FlatResult:
    label: str
    dim: int
    min_value: float
    argmin: tuple
    exact_nonneg: bool | None = None
    exact_min: Fraction | None = None


@dataclass
class Verdict:
    classification: str
    min_value: float | None = None
    argmin: tuple | None = None
    tolerance: float = NEG_TOL
    per_flat: list[FlatResult] = field(default_factory=list)
    exact: bool = False
    reason: str = ""
    heuristic: bool = False
    exact_min: Fraction | None = None

    @property
    def negative(self) -> bool:
        return self.classification == NEGATIVE

    def to_text(self) -> str:
        lines = [f"classification: {self.classification}"]
        if self.reason:
            lines.append(f"reason: {self.reason}")
        if self.min_value is not None:
            lines.append(f"min: {self.min_value!r}")
        if self.exact_min is not None:
            lines.append(f"min-exact: {fmt_number(self.exact_min)}")
        if self.argmin is not None:
            lines.append(f"argmin: {fmt_point(self.argmin)}")
        lines.append(f"tolerance: {self.tolerance!r}")
        lines.append(f"exact: {str(self.exact).lower()}")
        lines.append(f"heuristic: {str(self.heuristic).lower()}")
        for i, fr in enumerate(self.per_flat):
            extra = ""
            if fr.exact_min is not None:
                extra += f" exact-min={fmt_number(fr.exact_min)}"
            if fr.exact_nonneg is not None:
                extra += f" exact-nonneg={str(fr.exact_nonneg).lower()}"
            lines.append(f"flat[{i}]: {fr.label} dim={fr.dim} min={fr.min_value!r}"
                         f" argmin={fmt_point(fr.argmin)}{extra}")
        return "\n".join(lines) + "\n"


def _sqnorm(v: Sequence):
    return sum(x * x for x in v)


def minimize_on_flats(poly: Polynomial, flats: Sequence[Flat], seed: int = 0,
                      starts: int | None = None, exact_paths: bool = True) -> list[FlatResult]:
    """Sphere minimum of ``poly`` on each flat, with exact side results where cheap.

    One-dimensional flats give an exact rational minimum; two-dimensional
    flats get an exact Sturm nonnegativity decision.
    """
    deg = poly.degree()
    d = max(deg, 0) // 2
    out = []
    for fl in flats:
        sm = min_on_subspace(poly, fl.basis, starts=starts, seed=seed)
        res = FlatResult(fl.label or f"flat(dim={fl.dim})", fl.dim, sm.value, sm.point)
        if exact_paths and poly.exact and fl.exact:
            if fl.dim == 1:
                b = [r[0] for r in fl.basis]
                res.exact_min = poly.evaluate(b) / _sqnorm(b) ** d
                res.exact_nonneg = res.exact_min >= 0
            elif fl.dim == 2:
                res.exact_nonneg = binary_form_nonneg(restrict(poly, fl.basis))
        out.append(res)
    return out


def witness_flats(rs: RootSystem, group=None) -> list[Flat]:
    """One root hyperplane per class of roots under +/- W."""
    group = group if group is not None else generate_group(rs)
    return [hyperplane_flat(cls[0]) for cls in root_orbits(rs, group)]


def _classify(results: list[FlatResult], tol: float = NEG_TOL) -> Verdict:
    best = min(results, key=lambda r: (r.min_value, r.argmin))
    exact = all(r.exact_nonneg is not None for r in results)
    exact_min = None
    if all(r.exact_min is not None for r in results):
        exact_min = min(r.exact_min for r in results)
    if best.min_value < -tol:
        cls = NEGATIVE
    elif exact and all(r.exact_nonneg for r in results):
        cls = EXACT_NONNEGATIVE
    else:
        cls = NONNEGATIVE
    reason = ""
    if exact and not all(r.exact_nonneg for r in results) and cls != NEGATIVE:
        reason = "exact test found a negative value below the numeric tolerance"
        exact = False
    return Verdict(cls, best.min_value, best.argmin, tol, results, exact and cls != NONNEGATIVE,
                   reason, exact_min=exact_min)


def _check_invariant(poly: Polynomial, rs: RootSystem) -> None:
    if not is_invariant(poly, rs.reflections()):
        raise NotInvariant(f"form is not invariant under {rs.label}")


def hypothesis_reasons(basis: InvariantBasis, degree: int) -> list[str]:
    reasons = []
    two_dn = 2 * max(basis.degrees)
    if degree % 2:
        reasons.append(f"degree {degree} is odd")
    if degree >= two_dn:
        reasons.append(f"degree {degree} is not below 2d_n = {two_dn}")
    if not basis.norm_hypothesis:
        h = basis.hypothesis_norm_in_first
        where = "no prefix" if h is None else f"first {h} invariants"
        reasons.append(f"|x|^2 is not in the algebra of the first n-1 invariants ({where})")
    return reasons


def thmA_check(basis: InvariantBasis, poly: Polynomial, rs: RootSystem | None = None,
               seed: int = 0, starts: int | None = None) -> Verdict:
    """Decide nonnegativity of an invariant form of degree < 2d_n on the root hyperplanes."""
    rs = rs or basis.root_system
    if poly.nvars != rs.rank:
        raise PreconditionError(f"form has {poly.nvars} variables, root system lives in R^{rs.rank}")
    if not poly.is_homogeneous():
        raise PreconditionError("form must be homogeneous")
    _check_invariant(poly, rs)
    reasons = hypothesis_reasons(basis, poly.degree())
    if reasons:
        return Verdict(HYPOTHESIS_VIOLATED, reason="; ".join(reasons))
    return _classify(minimize_on_flats(poly, witness_flats(rs), seed, starts))


def witness_minimum(poly: Polynomial, rs: RootSystem, seed: int = 0, starts: int | None = None) -> Verdict:
    """Minimum over the union of root hyperplanes, without any hypothesis gate."""
    return _classify(minimize_on_flats(poly, witness_flats(rs), seed, starts))


def sphere_minimum(poly: Polynomial, seed: int = 0, starts: int | None = None) -> Verdict:
    sm = min_on_subspace(poly, None, starts=starts, seed=seed)
    cls = NEGATIVE if sm.value < -NEG_TOL else NONNEGATIVE
    fr = FlatResult("whole space", poly.nvars, sm.value, sm.point)
    return Verdict(cls, sm.value, sm.point, NEG_TOL, [fr])


# -- sphere vs witness property -------------------------------------------------

@dataclass
class PropertyReport:
    label: str
    degree: int
    trials: int
    seed: int
    deviations: list[float] = field(default_factory=list)
    sphere_mins: list[float] = field(default_factory=list)
    witness_mins: list[float] = field(default_factory=list)
    failures: list[int] = field(default_factory=list)

    @property
    def max_relative_deviation(self) -> float:
        return max(self.deviations, default=0.0)

    @property
    def ok(self) -> bool:
        return not self.failures


def _trial_seed(seed: int, trial: int) -> int:
    return int(np.random.SeedSequence([seed, trial]).generate_state(1)[0])


def sphere_vs_witness_property(basis: InvariantBasis, degree: int, trials: int = 50, seed: int = 0,
                               rs: RootSystem | None = None, starts: int | None = None) -> PropertyReport:
    """Compare full-sphere and witness-set minima of random invariant forms.

    The relative deviation recorded per trial is |sphere - witness| / (1 + |sphere|);
    a trial fails above AGREE_TOL.
    """
    rs = rs or basis.root_system
    reasons = hypothesis_reasons(basis, degree)
    if reasons:
        raise HypothesisViolated("; ".join(reasons))
    flats = witness_flats(rs)
    rep = PropertyReport(basis.label, degree, trials, seed)
    for t in range(trials):
        form = random_invariant_form(basis, degree, _trial_seed(seed, t))
        s = min_on_subspace(form, None, starts=starts, seed=seed).value
        w = min(r.min_value for r in minimize_on_flats(form, flats, seed, starts, exact_paths=False))
        dev = abs(s - w) / (1 + abs(s))
        rep.sphere_mins.append(s)
        rep.witness_mins.append(w)
        rep.deviations.append(dev)
        if dev > AGREE_TOL:
            rep.failures.append(t)
    return rep


# -- counterexamples beyond the degree bound -------------------------------------

@dataclass
class CounterexampleBundle:
    phi_bar: Polynomial
    phi: Polynomial
    mu: Fraction | float
    mu_exact: bool
    beta: int
    y: tuple
    y_unit: tuple[float, ...]
    p_list: list[Polynomial]
    value_at_y: Fraction | float
    witness_min: float

    def to_text(self) -> str:
        lines = [
            f"beta: {self.beta}",
            f"degree: {self.phi_bar.degree()}",
            f"mu: {fmt_number(self.mu)}",
            f"mu-exact: {str(self.mu_exact).lower()}",
            f"mu-float: {float(self.mu)!r}",
            f"y-direction: {fmt_point(self.y)}",
            f"y: {fmt_point(self.y_unit)}",
            f"phi_bar(y): {fmt_number(self.value_at_y)}",
            f"witness-min: {self.witness_min!r}",
            f"p-count: {len(self.p_list)}",
        ]
        lines += [f"p[{i}]: {p}" for i, p in enumerate(self.p_list)]
        return "\n".join(lines) + "\n"


def random_general_point(rs: RootSystem, basis: InvariantBasis, seed: int = 0, bound: int = 9) -> tuple:
    """Seeded small-integer W-general point at which no basic invariant vanishes."""
    rng = random.Random(f"general:{seed}")
    for _ in range(10_000):
        p = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(rs.rank))
        if is_general(rs, p) and all(eta.evaluate(p) != 0 for eta in basis.etas):
            return p
    raise SearchFailed("no general point found")


def thmB_construct(basis: InvariantBasis, y: Sequence, rs: RootSystem | None = None,
                   seed: int = 0, starts: int | None = None) -> CounterexampleBundle:
    """Invariant form of degree 2*beta, positive on the root hyperplanes, negative at y.

    ``y`` is a direction; it is normalized to the unit sphere.  With rational
    input every coefficient, and mu for two-dimensional groups, is exact.
    """
    rs = rs or basis.root_system
    n = rs.rank
    exact = all(is_exact_number(x) for x in y)
    v = [to_exact(x) for x in y] if exact else [float(x) for x in y]
    vv = _sqnorm(v)
    if vv == 0:
        raise DegenerateBasePoint("y must be nonzero")
    if not is_general(rs, v):
        raise NotGeneral(f"{fmt_point(v)} lies on a root hyperplane")
    vals = [eta.evaluate(v) for eta in basis.etas]
    if any(val == 0 for val in vals):
        raise DegenerateBasePoint("some basic invariant vanishes at y")
    degs = basis.degrees
    norm = Polynomial.norm_squared(n)
    etas = list(basis.etas)
    if not exact:
        norm = norm.to_float()
        etas = [e.to_float() for e in etas]

    def unit_value(val, deg):
        # value of a degree-`deg` form at v/|v|; deg is even on the exact path
        return val / vv ** (deg // 2) if exact else val / math.sqrt(vv) ** deg

    odd = [i for i, d in enumerate(degs) if d % 2]
    low = odd[0] if odd else None
    o_low = degs[odd[0]] if odd else 1
    o_high = degs[odd[-1]] if odd else 1
    beta = max(degs[-1], o_low + o_high)
    p_list = []
    for i, d in enumerate(degs):
        if d % 2 == 0:
            p = etas[i] - (norm ** (d // 2)) * unit_value(vals[i], d)
        else:
            dd = d + degs[low]
            p = etas[i] * etas[low] - (norm ** (dd // 2)) * unit_value(vals[i] * vals[low], dd)
        p_list.append(p)
    kept = [p for p in p_list if not p.is_zero()]
    if not kept:
        raise ConstructionFailed("all p_j vanish identically")
    top = max(p.degree() for p in kept)
    if top > beta:
        raise ConstructionFailed(f"p_j of degree {top} exceeds beta={beta}")
    phi = Polynomial.zero(n, exact)
    for p in kept:
        phi = phi + p * p * norm ** (beta - p.degree())

    flats = witness_flats(rs)
    results = minimize_on_flats(phi, flats, seed, starts)
    if exact and all(r.exact_min is not None for r in results):
        mu = min(r.exact_min for r in results)
        mu_exact = True
    else:
        mu_float = min(r.min_value for r in results)
        mu = Fraction(mu_float).limit_denominator(10 ** 12) if exact else mu_float
        mu_exact = False
    if not float(mu) > 0:
        raise ConstructionFailed(f"mu={float(mu)!r} is not positive on the root hyperplanes")
    phi_bar = phi - norm ** beta * (mu / 2)
    value_at_y = phi_bar.evaluate(v) / (vv ** beta if exact else math.sqrt(vv) ** (2 * beta))
    if exact and value_at_y != -mu / 2:
        raise ConstructionFailed(f"phi_bar(y)={value_at_y} differs from -mu/2")
    if not exact and abs(value_at_y + mu / 2) > 1e-9 * (1 + abs(mu)):
        raise ConstructionFailed(f"phi_bar(y)={value_at_y} differs from -mu/2")
    if phi_bar.degree() != 2 * beta:
        raise ConstructionFailed("phi_bar has the wrong degree")
    if not is_invariant(phi_bar, rs.reflections()):
        raise ConstructionFailed("phi_bar is not invariant")
    wmin = min(r.min_value for r in minimize_on_flats(phi_bar, flats, seed, starts, exact_paths=False))
    y_unit = tuple(float(x) / math.sqrt(float(vv)) for x in v)
    return CounterexampleBundle(phi_bar, phi, mu, mu_exact, beta, tuple(v), y_unit, p_list,
                                value_at_y, wmin)


# -- special point on the invariant curve -----------------------------------------

@dataclass
class SpecialPoint:
    point: tuple[float, ...]
    eta_n: float
    residual: float
    det: float
    angle: float
    nearest_root: tuple
    starts_converged: int

    def to_text(self) -> str:
        return "\n".join([
            f"x*: {fmt_point(self.point)}",
            f"eta_n(x*): {self.eta_n!r}",
            f"constraint-residual: {self.residual!r}",
            f"jacobian-det: {self.det!r}",
            f"min-root-angle: {self.angle!r}",
            f"nearest-root: {fmt_point(self.nearest_root)}",
            f"starts-converged: {self.starts_converged}",
        ]) + "\n"


PENALTY_WEIGHTS = (1e2, 1e4, 1e6, 1e8)


def special_point_on_curve(basis: InvariantBasis, y: Sequence, seed: int = 0, starts: int = 16) -> SpecialPoint:
    """Minimize eta_n on {eta_i = eta_i(y), i < n} by quadratic penalties.

    Each start is refined through the weight schedule and then projected back
    onto the constraints with Gauss-Newton steps.
    """
    if not basis.norm_hypothesis:
        raise HypothesisViolated("|x|^2 must lie in the algebra of the first n-1 invariants")
    yf = np.array([float(x) for x in y])
    ynorm = float(np.linalg.norm(yf))
    if ynorm == 0:
        raise PreconditionError("y must be nonzero")
    n = basis.rank
    etas = [e.to_float() for e in basis.etas]
    grads = [[g.to_float() for g in e.gradient()] for e in basis.etas]
    targets = np.array([e.evaluate(list(yf)) for e in etas[:-1]])

    def cons(x):
        return np.array([e.evaluate(list(x)) for e in etas[:-1]]) - targets

    def cons_jac(x):
        return np.array([[g.evaluate(list(x)) for g in gr] for gr in grads[:-1]])

    def obj(x, w):
        r = cons(x)
        return etas[-1].evaluate(list(x)) + w * float(r @ r)

    def obj_grad(x, w):
        gn = np.array([g.evaluate(list(x)) for g in grads[-1]])
        return gn + 2 * w * cons_jac(x).T @ cons(x)

    x0s = start_points(n, starts, seed)
    x0s = ynorm * x0s / np.linalg.norm(x0s, axis=1, keepdims=True)
    found = []
    for x in x0s:
        for w in PENALTY_WEIGHTS:
            res = minimize(obj, x, args=(w,), jac=obj_grad, method="BFGS", options={"gtol": 1e-12, "maxiter": 2000})
            x = res.x
        for _ in range(50):
            r = cons(x)
            if np.abs(r).max() < 1e-14 * max(1.0, ynorm):
                break
            J = cons_jac(x)
            x = x - J.T @ np.linalg.lstsq(J @ J.T, r, rcond=None)[0]
        resid = float(np.abs(cons(x)).max())
        if resid <= 1e-6 * ynorm:
            found.append((etas[-1].evaluate(list(x)), tuple(x), resid))
    if not found:
        raise SearchFailed("no start converged onto the invariant curve")
    found.sort()
    val, x, resid = found[0]
    jac = chevalley_jacobian(basis)
    det = float(np.linalg.det(np.array(jac.evaluate(list(x)), dtype=float)))
    xn = np.array(x)
    angles = []
    for a in basis.root_system.positive_roots:
        af = np.array([float(t) for t in a])
        angles.append((abs(xn @ af) / (np.linalg.norm(xn) * np.linalg.norm(af)), a))
    angle, root = min(angles, key=lambda t: t[0])
    return SpecialPoint(x, float(val), resid, det, float(angle), tuple(root), len(found))


# -- sign check on varieties cut out by minors ------------------------------------

def maximal_minors(forms: Sequence[Polynomial]) -> list[Polynomial]:
    """All maximal minors of the n x m matrix with columns grad g_1..grad g_m."""
    n = forms[0].nvars
    m = len(forms)
    grads = [f.gradient() for f in forms]
    mat = PolyMatrix([[grads[k][i] for k in range(m)] for i in range(n)])
    if m > n:
        raise PreconditionError("more gradient columns than variables")
    return [mat.submatrix(rows, range(m)).det() for rows in itertools.combinations(range(n), m)]


def ci_check(g_list: Sequence[Polynomial], j: int, poly: Polynomial,
             A: Polynomial | None = None, B: Polynomial | None = None,
             seed: int = 0, starts: int | None = None) -> Verdict:
    """Heuristic test of poly on the real variety of the maximal minors of grad g_1..grad g_{j+1}.

    Points of the variety are sampled by multistart minimization of the
    normalized sum of squared minors, and by penalized minimization of poly
    followed by a return to the variety.  Sampling may miss components, so
    the verdict is flagged heuristic.
    """
    if j < 1:
        raise PreconditionError("j >= 1 is required")
    if j + 1 > len(g_list):
        raise PreconditionError(f"need at least j+1 = {j + 1} forms")
    n = poly.nvars
    if poly.degree() % 2 or not poly.is_homogeneous():
        raise PreconditionError("poly must be a homogeneous form of even degree")
    g = list(g_list[: j + 1])
    try:
        express_in_forms(Polynomial.norm_squared(n), g[:j])
    except NoSolution:
        return Verdict(HYPOTHESIS_VIOLATED, reason=f"|x|^2 is not in R[g_1..g_{j}]", heuristic=True)
    if A is not None and B is not None:
        rebuilt = A.compose(g[:j]) + g[j] * B.compose(g[:j])
        if rebuilt != poly:
            raise NotInSparseForm("A(g) + g_{j+1} B(g) does not reproduce the form")
    else:
        try:
            H = express_in_forms(poly, g)
        except NoSolution as exc:
            raise NotInSparseForm(str(exc)) from None
        if H.degree_in(j) > 1:
            raise NotInSparseForm(f"form is not linear in g_{j + 1}")

    minors = [m for m in maximal_minors(g) if not m.is_zero()]
    if not minors:
        return Verdict(HYPOTHESIS_VIOLATED, reason="minors vanish identically", heuristic=True)
    resid_poly = Polynomial.zero(n)
    for m in minors:
        resid_poly = resid_poly + m * m
    resid = SphereQuotient(resid_poly.to_float())
    target = SphereQuotient(poly.to_float())
    count = starts if starts is not None else 64 * n

    _, U1 = local_minima(resid, n, count, seed)
    U = start_points(n, count, seed + 1)
    for w in (1e2, 1e4, 1e6):
        _, U = local_minima(WeightedSum([(1.0, target), (w, resid)]), n, count, seed, U0=U)
    _, U2 = local_minima(resid, n, count, seed, U0=U)
    pts = np.vstack([U1, U2])
    keep = resid.value(pts) <= 1e-8
    pts = pts[keep]
    if pts.shape[0] == 0:
        return Verdict(NONNEGATIVE, reason="no points of the minors variety were found", heuristic=True)
    vals = evaluate_on_sphere(poly, pts)
    i = int(np.argmin(vals))
    fr = FlatResult("minors variety samples", n, float(vals[i]), tuple(float(x) for x in pts[i]))
    cls = NEGATIVE if vals[i] < -NEG_TOL else NONNEGATIVE
    return Verdict(cls, float(vals[i]), fr.argmin, NEG_TOL, [fr], exact=False,
                   reason=f"{pts.shape[0]} variety points sampled", heuristic=True)


# -- flats of higher codimension --------------------------------------------------

def highcodim_check(basis: InvariantBasis, poly: Polynomial, j: int, rs: RootSystem | None = None,
                    seed: int = 0, starts: int | None = None) -> Verdict:
    """Test a form in R[eta_1..eta_j], linear in eta_j, on the (j-1)-dimensional flats."""
    rs = rs or basis.root_system
    if basis.family not in ("Sym", "B"):
        raise MinorFactorizationUnknown(f"minor factorization is not established for {basis.label}")
    if not 1 <= j <= basis.n:
        raise PreconditionError(f"j must be in 1..{basis.n}")
    _check_invariant(poly, rs)
    try:
        H = express_in_invariants(poly, basis, range(1, j + 1), check_invariance=False)
    except NoSolution:
        raise LinearityViolated(f"form is not in R[eta_1..eta_{j}]") from None
    if H.degree_in(j - 1) > 1:
        raise LinearityViolated(f"form is not linear in eta_{j}")
    if not basis.norm_in_first(j - 1):
        return Verdict(HYPOTHESIS_VIOLATED, reason=f"|x|^2 is not in R[eta_1..eta_{j - 1}]")
    if poly.degree() % 2:
        return Verdict(HYPOTHESIS_VIOLATED, reason="odd degree")
    flats = enumerate_flats(basis.family, basis.rank, basis.rank - j + 1)
    return _classify(minimize_on_flats(poly, flats, seed, starts))


# -- conjecture probe -------------------------------------------------------------

@dataclass
class ProbeReport:
    label: str
    j: int
    degree: int
    trials: int
    seed: int
    agreements: int = 0
    disagreements: list[dict] = field(default_factory=list)

    def to_text(self) -> str:
        lines = [f"group: {self.label}", f"j: {self.j}", f"degree: {self.degree}",
                 f"trials: {self.trials}", f"seed: {self.seed}", f"agreements: {self.agreements}",
                 f"disagreements: {len(self.disagreements)}"]
        for k, dis in enumerate(self.disagreements):
            lines.append(f"candidate[{k}]: trial={dis['trial']} sphere-min={dis['sphere_min']!r}"
                         f" flat-min={dis['flat_min']!r} sphere-argmin={fmt_point(dis['sphere_argmin'])}")
            lines += [f"candidate[{k}].form: {ln}" for ln in dis["form"].splitlines()]
        return "\n".join(lines) + "\n"


def conjecture_probe(basis: InvariantBasis, j: int, degree: int, trials: int = 50, seed: int = 0,
                     starts: int | None = None) -> ProbeReport:
    """Compare sphere and flat-union sign verdicts for random invariant forms.

    The flats are the intersections of n-j+1 independent root hyperplanes.
    Disagreements are reported as candidate counterexamples, never raised.
    """
    if degree % 2 or degree // 2 >= basis.degrees[j - 1]:
        raise PreconditionError(f"need even degree 2d with d < d_{j} = {basis.degrees[j - 1]}")
    if not basis.norm_in_first(j):
        raise HypothesisViolated(f"|x|^2 is not in R[eta_1..eta_{j}]")
    flats = enumerate_flats(basis.family, basis.rank, basis.rank - j + 1)
    rep = ProbeReport(basis.label, j, degree, trials, seed)
    for t in range(trials):
        form = random_invariant_form(basis, degree, _trial_seed(seed, t))
        sm = min_on_subspace(form, None, starts=starts, seed=seed)
        fm = min(r.min_value for r in minimize_on_flats(form, flats, seed, starts, exact_paths=False))
        if sm.value < -AGREE_TOL and fm >= -NEG_TOL:
            rep.disagreements.append({"trial": t, "sphere_min": sm.value, "flat_min": fm,
                                      "sphere_argmin": sm.point, "form": form.dumps()})
        else:
            rep.agreements += 1
    return rep
