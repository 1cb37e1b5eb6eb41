"""Command-line front end.

Every report starts with key: value header lines echoing the subcommand and
all defaults in effect, followed by the result lines.  Exit codes: 0 success
or nonnegative, 1 negative value found, 2 hypothesis or precondition failure
(including usage errors), 3 internal failure.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from fractions import Fraction
from typing import Sequence

from . import jacobian as jac
from . import witness as wit
from .errors import NoCanonicalInvariants, PreconditionError, ReflwitError
from .invariants import (
    InvariantBasis,
    basic_invariants,
    custom_basis,
    degree_row,
    degree_table,
    family_degrees,
    table1_text,
)
from .poly import Polynomial, read_polynomial, write_polynomial
from .rootsys import RootSystem, build_root_system, enumerate_flats
from .sphere import STARTS_PER_DIM

EXIT_OK, EXIT_NEGATIVE, EXIT_PRECONDITION, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(PreconditionError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors already; keep that but go through run()
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# -- argument helpers ----------------------------------------------------------

def parse_number(text: str):
    """'3', '-1/2', '0.25' -> Fraction; anything with roots or pi -> sympy expression."""
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        pass
    import sympy

    text = re.sub(r"√\s*(\d+(?:\.\d+)?|[A-Za-z_]\w*)", r"sqrt(\1)", text).replace("√", "sqrt")
    expr = sympy.sympify(text.replace("^", "**"))
    if not expr.is_real:
        raise UsageError(f"cannot read {text!r} as a real number")
    return expr


def parse_point(text: str) -> tuple:
    """A comma separated point; irrational entries sharing one factor reduce to a rational direction.

    "1/√5,2/√5" becomes (1, 2).  Directions that stay irrational come back as floats.
    """
    vals = [parse_number(t) for t in text.split(",") if t.strip()]
    if not vals:
        raise UsageError("empty point")
    if all(isinstance(v, Fraction) for v in vals):
        return tuple(vals)
    import sympy

    pivot = next((v for v in vals if v != 0), None)
    if pivot is None:
        return tuple(Fraction(0) for _ in vals)
    ratios = [sympy.nsimplify(sympy.simplify(sympy.sympify(v) / pivot)) for v in vals]
    if all(r.is_rational for r in ratios):
        sign = 1 if float(pivot) > 0 else -1
        return tuple(sign * Fraction(int(r.p), int(r.q)) for r in ratios)
    return tuple(float(v) for v in vals)


def _rank_of(args) -> int:
    if args.rank is None:
        raise UsageError("--rank is required (for I2 it is the parameter m)")
    return args.rank


def load_root_system(args) -> RootSystem:
    if getattr(args, "roots", None):
        with open(args.roots, encoding="utf-8") as fh:
            return RootSystem.loads(fh.read())
    if not args.family:
        raise UsageError("give --family/--rank or --roots")
    return build_root_system(args.family, _rank_of(args))


def load_basis(args) -> InvariantBasis:
    rs = load_root_system(args)
    files = getattr(args, "invariants", None)
    if files:
        return custom_basis(rs, [read_polynomial(f) for f in files])
    if rs.family == "Custom":
        raise NoCanonicalInvariants("custom root systems need --invariants")
    return basic_invariants(rs.family, rs.param if rs.family == "I2" else rs.rank)


def _starts_text(args) -> str:
    return str(args.starts) if args.starts is not None else f"{STARTS_PER_DIM}*dim (default)"


def header(lines: list, command: str, **fields) -> None:
    lines.append(f"command: {command}")
    for key, val in fields.items():
        lines.append(f"{key.replace('_', '-')}: {val}")


def _add_group(p, roots: bool = True, invariants: bool = True) -> None:
    p.add_argument("--family", help="Sym, B, D or I2")
    p.add_argument("--rank", type=int, help="rank n (for I2 the parameter m)")
    if roots:
        p.add_argument("--roots", help="custom root system file, one root per line")
    if invariants:
        p.add_argument("--invariants", nargs="+", metavar="FILE", help="basic invariant polynomial files")


def _add_search(p, seed=True) -> None:
    if seed:
        p.add_argument("--seed", type=int, default=0)
    p.add_argument("--starts", type=int, default=None, help="multistart count (default 64 per flat dimension)")


def _verdict_exit(v: wit.Verdict) -> int:
    if v.classification == wit.HYPOTHESIS_VIOLATED:
        return EXIT_PRECONDITION
    return EXIT_NEGATIVE if v.negative else EXIT_OK


# -- subcommands -----------------------------------------------------------------

_TABLE_KEYS = {"A": "A", "B": "B", "C": "B", "D": "D", "I2": "I2", "SYM": "Sym", "S": "Sym"}


def cmd_degrees(args, out) -> int:
    if not args.family:
        out.append(table1_text().rstrip("\n"))
        return EXIT_OK
    key = args.family.strip().upper().replace("_", "")
    header(out, "degrees", family=args.family, rank=args.rank if args.rank is not None else "-")
    if _TABLE_KEYS.get(key) == "Sym":
        n = _rank_of(args)
        out.append(f"ambient Sym({n}): " + degree_row(f"Sym({n})", family_degrees("Sym", n)).format())
        out.append(f"table A_{n - 1}: " + degree_table("A", n - 1).format())
        return EXIT_OK
    out.append(degree_table(args.family, args.rank).format())
    return EXIT_OK


def cmd_group_order(args, out) -> int:
    basis = load_basis(args)
    order, prod = jac.group_order_check(basis)
    header(out, "group-order", group=basis.label)
    out += [f"order: {order}", f"degree-product: {prod}", f"match: {str(order == prod).lower()}"]
    return EXIT_OK if order == prod else EXIT_INTERNAL


def cmd_jacobian_check(args, out) -> int:
    basis = load_basis(args)
    rep = jac.factorization_check(basis)
    header(out, "jacobian-check", group=basis.label)
    out += [f"det: {rep.det}", f"product: {rep.product}", f"lambda: {wit.fmt_number(rep.lam)}",
            f"residual: {rep.residual}", f"ok: {str(rep.ok).lower()}"]
    return EXIT_OK


def cmd_minor_check(args, out) -> int:
    basis = load_basis(args)
    js = [args.j] if args.j is not None else list(range(1, basis.n + 1))
    header(out, "minor-check", group=basis.label, seed=args.seed, samples=args.samples,
           j=" ".join(map(str, js)))
    ok = True
    for j in js:
        rep = jac.minor_factorization_check(basis, j=j, n_samples=args.samples, seed=args.seed)
        ok &= rep.ok
        out.append(f"j={j}: tested={rep.tested_points} locus={rep.locus_points} general={rep.general_points}"
                   f" equivalence-failures={len(rep.equivalence_failures)}"
                   f" full-rank-violations={len(rep.full_rank_violations)} mode={rep.mode}")
        out.append(f"j={j} support: {rep.support}")
        for p, r1, r2 in rep.equivalence_failures:
            out.append(f"j={j} failure: point={wit.fmt_point(p)} rank-first={r1} rank-full={r2}")
    out.append(f"ok: {str(ok).lower()}")
    return EXIT_OK if ok else EXIT_INTERNAL


def cmd_d3_locus(args, out) -> int:
    rep = jac.d3_locus_check()
    header(out, "d3-locus", off_point=wit.fmt_point(rep.off_locus_point))
    for v, ok in rep.families.items():
        out.append(f"family t*{wit.fmt_point(v)}: {'all minors vanish' if ok else 'nonzero minor'}")
    out.append("off-locus-minors: " + " ".join(wit.fmt_number(x) for x in rep.off_locus_minors))
    out.append(f"ok: {str(rep.ok).lower()}")
    return EXIT_OK


def _point_value(poly: Polynomial, point: Sequence):
    if poly.degree() % 2:
        raise PreconditionError("forms of odd degree take both signs; use an even-degree form")
    nn = sum(x * x for x in point)
    if nn == 0:
        raise PreconditionError("point must be nonzero")
    d = poly.degree() // 2
    if all(isinstance(x, Fraction) for x in point) and poly.exact:
        return poly.evaluate(point) / nn ** d
    return float(poly.to_float().evaluate([float(x) for x in point])) / float(nn) ** d


def cmd_check(args, out) -> int:
    basis = load_basis(args)
    poly = read_polynomial(args.poly)
    header(out, "check", group=basis.label, poly=args.poly, seed=args.seed, starts=_starts_text(args),
           tolerance=repr(wit.NEG_TOL), point=args.point or "-")
    if args.point:
        pt = parse_point(args.point)
        if len(pt) != poly.nvars:
            raise PreconditionError(f"point has {len(pt)} coordinates, form has {poly.nvars} variables")
        val = _point_value(poly, pt)
        out.append(f"value-at-point: {wit.fmt_number(val)}")
        if val < -wit.NEG_TOL:
            out.append(f"classification: {wit.NEGATIVE}")
            out.append(f"argmin: {wit.fmt_point(pt)}")
            return EXIT_NEGATIVE
    v = wit.thmA_check(basis, poly, seed=args.seed, starts=args.starts)
    out.append(v.to_text().rstrip("\n"))
    return _verdict_exit(v)


def cmd_minimize(args, out) -> int:
    poly = read_polynomial(args.poly)
    where = "witness" if args.on_witness else "sphere"
    if args.on_witness:
        rs = load_root_system(args)
        header(out, "minimize", group=rs.label, poly=args.poly, domain=where, seed=args.seed,
               starts=_starts_text(args), tolerance=repr(wit.NEG_TOL))
        if poly.nvars != rs.rank:
            raise PreconditionError(f"form has {poly.nvars} variables, root system lives in R^{rs.rank}")
        v = wit.witness_minimum(poly, rs, seed=args.seed, starts=args.starts)
    else:
        header(out, "minimize", poly=args.poly, domain=where, seed=args.seed,
               starts=_starts_text(args), tolerance=repr(wit.NEG_TOL))
        v = wit.sphere_minimum(poly, seed=args.seed, starts=args.starts)
    out.append(v.to_text().rstrip("\n"))
    return _verdict_exit(v)


def cmd_flats(args, out) -> int:
    n = _rank_of(args)
    flats = enumerate_flats(args.family, n, args.codim, up_to_symmetry=not args.all)
    header(out, "flats", family=args.family, rank=n, codim=args.codim,
           representatives="all" if args.all else "up to symmetry")
    out.append(f"count: {len(flats)}")
    for i, fl in enumerate(flats):
        cols = " ".join(wit.fmt_point(c) for c in fl.columns()) or "(origin)"
        out.append(f"flat[{i}]: {fl.label} dim={fl.dim} basis={cols}")
    return EXIT_OK


def cmd_counterexample(args, out) -> int:
    basis = load_basis(args)
    rs = basis.root_system
    if args.y:
        y = parse_point(args.y)
        source = args.y
    else:
        y = wit.random_general_point(rs, basis, args.seed)
        source = f"random general point (seed {args.seed})"
    if len(y) != rs.rank:
        raise PreconditionError(f"y has {len(y)} coordinates, expected {rs.rank}")
    header(out, "counterexample", group=basis.label, y_input=source, seed=args.seed,
           starts=_starts_text(args), out=args.out or "-")
    bundle = wit.thmB_construct(basis, y, seed=args.seed, starts=args.starts)
    out.append(bundle.to_text().rstrip("\n"))
    if args.out:
        write_polynomial(bundle.phi_bar, args.out)
    else:
        out += [f"phi_bar-file: {ln}" for ln in bundle.phi_bar.dumps().splitlines()]
    return EXIT_OK


def cmd_special_point(args, out) -> int:
    basis = load_basis(args)
    rs = basis.root_system
    y = parse_point(args.y) if args.y else wit.random_general_point(rs, basis, args.seed)
    header(out, "special-point", group=basis.label, y=wit.fmt_point(y), seed=args.seed, starts=args.starts,
           penalty_weights=" ".join(f"{w:g}" for w in wit.PENALTY_WEIGHTS))
    sp = wit.special_point_on_curve(basis, y, seed=args.seed, starts=args.starts)
    out.append(sp.to_text().rstrip("\n"))
    return EXIT_OK


def cmd_ci_check(args, out) -> int:
    g = [read_polynomial(f) for f in args.g]
    poly = read_polynomial(args.poly)
    A = read_polynomial(args.A) if args.A else None
    B = read_polynomial(args.B) if args.B else None
    header(out, "ci-check", g=" ".join(args.g), j=args.j, poly=args.poly, seed=args.seed,
           starts=_starts_text(args), tolerance=repr(wit.NEG_TOL))
    v = wit.ci_check(g, args.j, poly, A, B, seed=args.seed, starts=args.starts)
    out.append(v.to_text().rstrip("\n"))
    return _verdict_exit(v)


def cmd_highcodim_check(args, out) -> int:
    basis = load_basis(args)
    poly = read_polynomial(args.poly)
    header(out, "highcodim-check", group=basis.label, poly=args.poly, j=args.j, seed=args.seed,
           starts=_starts_text(args), tolerance=repr(wit.NEG_TOL))
    v = wit.highcodim_check(basis, poly, args.j, seed=args.seed, starts=args.starts)
    out.append(v.to_text().rstrip("\n"))
    return _verdict_exit(v)


def cmd_conjecture_probe(args, out) -> int:
    basis = load_basis(args)
    header(out, "conjecture-probe", starts=_starts_text(args), band=repr(wit.AGREE_TOL))
    rep = wit.conjecture_probe(basis, args.j, args.degree, trials=args.trials, seed=args.seed,
                               starts=args.starts)
    out.append(rep.to_text().rstrip("\n"))
    return EXIT_OK


def cmd_property_suite(args, out) -> int:
    basis = load_basis(args)
    header(out, "property-suite", group=basis.label, degree=args.degree, trials=args.trials,
           seed=args.seed, starts=_starts_text(args), band=repr(wit.AGREE_TOL))
    rep = wit.sphere_vs_witness_property(basis, args.degree, trials=args.trials, seed=args.seed,
                                         starts=args.starts)
    out.append(f"max-relative-deviation: {rep.max_relative_deviation!r}")
    out.append(f"min-sphere: {min(rep.sphere_mins, default=math.nan)!r}")
    out.append(f"failures: {len(rep.failures)}")
    for t in rep.failures:
        out.append(f"failure: trial={t} sphere={rep.sphere_mins[t]!r} witness={rep.witness_mins[t]!r}")
    out.append(f"ok: {str(rep.ok).lower()}")
    return EXIT_OK if rep.ok else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="reflwit", description="Witness sets for nonnegativity of reflection-invariant forms.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("degrees", help="degree table, or one family's row")
    p.add_argument("--family", help="A, B, D, E6..E8, F4, G2, H3, H4, I2 or Sym")
    p.add_argument("--rank", type=int)
    p.set_defaults(func=cmd_degrees)

    for name, func, helptext in (("group-order", cmd_group_order, "BFS group order vs product of degrees"),
                                 ("jacobian-check", cmd_jacobian_check, "det J = lambda * product of roots")):
        p = sub.add_parser(name, help=helptext)
        _add_group(p)
        p.set_defaults(func=func)

    p = sub.add_parser("minor-check", help="sampled minor factorization check")
    _add_group(p)
    p.add_argument("--j", type=int, default=None, help="column count (default: every j)")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_minor_check)

    p = sub.add_parser("d3-locus", help="rank-2 locus of the D(3) Jacobian")
    p.set_defaults(func=cmd_d3_locus)

    p = sub.add_parser("check", help="nonnegativity of an invariant form on the root hyperplanes")
    _add_group(p)
    p.add_argument("--poly", required=True)
    p.add_argument("--point", help="also evaluate at this point, e.g. '1,2' or '1/√5,2/√5'")
    _add_search(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("minimize", help="sphere minimum of a form (whole space or root hyperplanes)")
    _add_group(p, invariants=False)
    p.add_argument("--poly", required=True)
    p.add_argument("--on-witness", action="store_true", help="minimize over the root hyperplanes only")
    _add_search(p)
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("flats", help="canonical flats of given codimension (Sym, B)")
    p.add_argument("--family", required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--codim", type=int, required=True)
    p.add_argument("--all", action="store_true", help="every flat, not one per symmetry class")
    p.set_defaults(func=cmd_flats)

    p = sub.add_parser("counterexample", help="invariant form nonnegative on the hyperplanes, negative at y")
    _add_group(p)
    p.add_argument("--y", help="W-general direction (default: seeded random integer point)")
    p.add_argument("--out", help="write the form here in the polynomial file format")
    _add_search(p)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("special-point", help="minimize eta_n on the invariant curve through y")
    _add_group(p)
    p.add_argument("--y")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--starts", type=int, default=16)
    p.set_defaults(func=cmd_special_point)

    p = sub.add_parser("ci-check", help="heuristic test on the maximal-minors variety")
    p.add_argument("--g", nargs="+", required=True, metavar="FILE")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--poly", required=True)
    p.add_argument("--A")
    p.add_argument("--B")
    _add_search(p)
    p.set_defaults(func=cmd_ci_check)

    p = sub.add_parser("highcodim-check", help="test on flats of dimension j-1")
    _add_group(p)
    p.add_argument("--poly", required=True)
    p.add_argument("--j", type=int, required=True)
    _add_search(p)
    p.set_defaults(func=cmd_highcodim_check)

    p = sub.add_parser("conjecture-probe", help="sphere vs flat-union verdicts for random forms")
    _add_group(p)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--trials", type=int, default=50)
    _add_search(p)
    p.set_defaults(func=cmd_conjecture_probe)

    p = sub.add_parser("property-suite", help="sphere minimum vs witness minimum on random forms")
    _add_group(p)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--trials", type=int, default=50)
    _add_search(p)
    p.set_defaults(func=cmd_property_suite)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    out: list[str] = []
    try:
        args = build_parser().parse_args(argv)
        code = args.func(args, out)
    except PreconditionError as exc:
        code = EXIT_PRECONDITION
        out.append(f"error: {type(exc).__name__}: {exc}")
    except (OSError, ValueError) as exc:
        code = EXIT_PRECONDITION
        out.append(f"error: {type(exc).__name__}: {exc}")
    except ReflwitError as exc:
        code = EXIT_INTERNAL
        out.append(f"error: {type(exc).__name__}: {exc}")
    except Exception as exc:  # noqa: BLE001 - any other crash is an internal failure
        code = EXIT_INTERNAL
        out.append(f"error: internal: {type(exc).__name__}: {exc}")
    errors = [ln for ln in out if ln.startswith("error:")]
    report = [ln for ln in out if not ln.startswith("error:")]
    if report:
        stdout.write("\n".join(report) + "\n")
    if errors:
        stderr.write("\n".join(errors) + "\n")
    stdout.flush()
    return code


def main() -> None:
    sys.exit(run())
