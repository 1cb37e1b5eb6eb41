"""Acceptance criteria 1-10, each at its stated tolerance and time budget.

Every test records one PASS/FAIL line; conftest.py prints them at the end of
the session.  Run directly with ``python3 tests/test_acceptance.py`` as well.
"""

import io
import math
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from reflwit.cli import run
from reflwit.invariants import basic_invariants, custom_basis, random_invariant_form, table1_text
from reflwit.jacobian import d3_locus_check, factorization_check, minor_factorization_check
from reflwit.poly import Polynomial, is_invariant, write_polynomial
from reflwit.rootsys import build_root_system, generate_group
from reflwit.sphere import evaluate_on_sphere, min_on_subspace
from reflwit.sturm import binary_form_nonneg
from reflwit.witness import (
    HYPOTHESIS_VIOLATED,
    NEG_TOL,
    highcodim_check,
    random_general_point,
    sphere_vs_witness_property,
    thmA_check,
    thmB_construct,
    witness_minimum,
)

FIXTURE = Path(__file__).parent / "fixtures" / "table1.txt"
RESULTS: list[str] = []


@contextmanager
def criterion(k: int, budget: float):
    """Time the block, record a result line, and enforce the time budget."""
    info: dict = {}
    t0 = time.perf_counter()
    try:
        yield info
    except BaseException as exc:
        RESULTS.append(f"ACCEPTANCE {k}: FAIL ({type(exc).__name__}: {str(exc)[:120]})")
        raise
    elapsed = time.perf_counter() - t0
    ok = elapsed < budget
    detail = info.get("detail", "")
    RESULTS.append(f"ACCEPTANCE {k}: {'PASS' if ok else 'FAIL'} ({detail}; {elapsed:.2f}s / {budget:g}s)")
    assert ok, f"criterion {k} took {elapsed:.1f}s, budget {budget}s"


def check(cond: bool, msg: str) -> None:
    if not cond:
        raise AssertionError(msg)


def test_acceptance_1_degree_table():
    with criterion(1, 1.0) as info:
        text = table1_text()
        check(text == FIXTURE.read_text(encoding="utf-8"), "degree table differs from the fixture")
        info["detail"] = f"{len(text.splitlines()) - 2} rows byte-identical"


def test_acceptance_2_group_orders():
    cases = [("Sym", n, math.factorial(n)) for n in range(2, 6)]
    cases += [("B", n, 2 ** n * math.factorial(n)) for n in range(2, 5)]
    cases += [("D", 3, 24), ("D", 4, 192)]
    cases += [("I2", m, 2 * m) for m in range(2, 9)]
    with criterion(2, 30.0) as info:
        for family, rank, expected in cases:
            b = basic_invariants(family, rank)
            order = len(generate_group(b.root_system))
            check(order == expected == math.prod(b.degrees), f"{b.label}: order {order}, expected {expected}")
        info["detail"] = f"{len(cases)} groups"


def test_acceptance_3_jacobian_factorization():
    keys = [("Sym", 2), ("Sym", 3), ("Sym", 4), ("B", 2), ("B", 3), ("D", 3), ("D", 4)]
    with criterion(3, 30.0) as info:
        lams = {}
        for key in keys:
            rep = factorization_check(basic_invariants(*key))
            check(rep.residual.is_zero() and rep.lam != 0, f"{key}: nonzero residual or lambda = 0")
            lams[key] = rep.lam
        check(lams[("B", 2)] == -8, f"lambda B(2) = {lams[('B', 2)]}")
        check(lams[("Sym", 3)] == -6, f"lambda Sym(3) = {lams[('Sym', 3)]}")
        info["detail"] = "residual 0 for 7 groups, lambda B(2)=-8, Sym(3)=-6"


def test_acceptance_4_d3_locus():
    with criterion(4, 5.0) as info:
        rep = d3_locus_check((1, 2, 3))
        check(len(rep.families) == 7 and all(rep.families.values()), "a family fails to kill the minors")
        check(any(v != 0 for v in rep.off_locus_minors), "(1,2,3) annihilates every minor")
        check(rep.ok, "locus check reports failure")
        info["detail"] = "7 families annihilate all 2x2 minors, (1,2,3) does not"


PROPERTY_CASES = [("B", 2, (4, 6)), ("B", 3, (4, 6, 8, 10)), ("Sym", 3, (2, 4)),
                  ("Sym", 4, (2, 4, 6)), ("D", 3, (2, 4, 6))]


def test_acceptance_5_sphere_vs_witness():
    with criterion(5, 600.0) as info:
        worst = 0.0
        runs = 0
        for family, rank, degrees in PROPERTY_CASES:
            b = basic_invariants(family, rank)
            for d in degrees:
                rep = sphere_vs_witness_property(b, d, trials=50, seed=0)
                check(len(rep.deviations) == 50, "wrong trial count")
                worst = max(worst, rep.max_relative_deviation)
                check(rep.max_relative_deviation <= 1e-6,
                      f"{b.label} deg {d}: deviation {rep.max_relative_deviation:.3g}")
                runs += 1
        info["detail"] = f"{runs} (group, degree) pairs x 50 trials, max deviation {worst:.2e}"


def test_acceptance_6_counterexamples():
    with criterion(6, 120.0) as info:
        b2 = basic_invariants("B", 2)
        bundle = thmB_construct(b2, (1, 2))
        check(bundle.mu_exact and bundle.mu == Fraction(81, 2500), f"mu = {bundle.mu}")
        check(bundle.value_at_y == Fraction(-81, 5000), f"phi_bar(y) = {bundle.value_at_y}")
        w = witness_minimum(bundle.phi_bar, b2.root_system)
        check(w.min_value >= 81 / 5000 - 1e-8, f"witness minimum {w.min_value}")
        mins = []
        for family, rank in [("B", 3), ("Sym", 3), ("D", 3)]:
            b = basic_invariants(family, rank)
            y = random_general_point(b.root_system, b, seed=0)
            bun = thmB_construct(b, y)
            check(is_invariant(bun.phi_bar, b.root_system.reflections()), f"{b.label}: phi_bar not invariant")
            check(bun.value_at_y < 0, f"{b.label}: phi_bar(y) = {bun.value_at_y}")
            check(bun.witness_min >= -1e-9, f"{b.label}: witness minimum {bun.witness_min}")
            mins.append(f"{b.label} {float(bun.witness_min):.3g}")
        info["detail"] = "B(2) mu=81/2500 exact; " + ", ".join(mins)


def test_acceptance_7_hypothesis_gate(tmp_path):
    with criterion(7, 1.0) as info:
        rs = build_root_system("Custom", 2, roots=[(1, 0)])
        etas = [Polynomial(2, {(0, 1): 1}), Polynomial(2, {(2, 0): 1})]
        basis = custom_basis(rs, etas)
        f = Polynomial(2, {(2, 0): -1})
        verdict = thmA_check(basis, f, rs)
        check(verdict.classification == HYPOTHESIS_VIOLATED, f"library verdict {verdict.classification}")

        (tmp_path / "roots.txt").write_text("1 0\n-1 0\n")
        for i, e in enumerate(etas):
            write_polynomial(e, tmp_path / f"eta{i}.txt")
        write_polynomial(f, tmp_path / "f.txt")
        out, err = io.StringIO(), io.StringIO()
        code = run(["check", "--roots", str(tmp_path / "roots.txt"), "--invariants",
                    str(tmp_path / "eta0.txt"), str(tmp_path / "eta1.txt"), "--poly", str(tmp_path / "f.txt")],
                   stdout=out, stderr=err)
        check(code == 2, f"CLI exit code {code}")
        check("nonnegative" not in out.getvalue() and "classification: negative" not in out.getvalue(),
              "CLI emitted a sign verdict")
        info["detail"] = "library hypothesis_violated, CLI exit 2"


def _signs_agree(verdict_negative: bool, sphere_min: float, band: float = 1e-6) -> bool:
    if abs(sphere_min) <= band:
        return True
    return verdict_negative == (sphere_min < 0)


def test_acceptance_8_highcodim_consistency():
    b3 = basic_invariants("B", 3)
    with criterion(8, 300.0) as info:
        counts = {}
        for degree, j, trials in [(4, 2, 50), (6, 3, 25)]:
            negatives = 0
            for t in range(trials):
                form = random_invariant_form(b3, degree, seed=1000 * degree + t)
                verdict = highcodim_check(b3, form, j)
                sm = min_on_subspace(form, None, seed=t).value
                check(_signs_agree(verdict.negative, sm),
                      f"degree {degree} trial {t}: flats say {verdict.classification}, sphere min {sm:.3g}")
                negatives += verdict.negative
            counts[degree] = (trials, negatives)
        info["detail"] = ", ".join(f"deg {d}: {n} forms ({neg} negative)" for d, (n, neg) in counts.items())


def test_acceptance_9_minor_factorization():
    keys = [("B", 2), ("B", 3), ("Sym", 3), ("Sym", 4), ("D", 3)]
    with criterion(9, 120.0) as info:
        pairs = 0
        for key in keys:
            b = basic_invariants(*key)
            for j in range(1, b.n + 1):
                rep = minor_factorization_check(b, j=j, n_samples=100, seed=0)
                check(rep.tested_points >= 100, "too few samples")
                check(not rep.equivalence_failures, f"{b.label} j={j}: {rep.equivalence_failures[:2]}")
                pairs += 1
        info["detail"] = f"{pairs} (group, j) pairs, 100 samples each, 0 failures"


def _random_binary_form(rng: np.random.Generator) -> Polynomial:
    deg = int(rng.integers(1, 13))
    kind = rng.integers(0, 3) if deg % 2 == 0 else 0
    if kind == 0:
        coeffs = {(deg - i, i): Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5))) for i in range(deg + 1)}
        return Polynomial(2, coeffs)
    # a sum of squares shifted by a multiple of |x|^deg, so both signs occur
    half = deg // 2
    form = Polynomial.zero(2)
    for _ in range(2):
        sq = Polynomial(2, {(half - i, i): Fraction(int(rng.integers(-5, 6))) for i in range(half + 1)})
        form = form + sq * sq
    shift = Fraction(int(rng.integers(-20, 21)), 10)
    return form + Polynomial.norm_squared(2) ** half * shift


def _numeric_nonneg(form: Polynomial, seed: int) -> bool:
    if form.degree() % 2:
        return False
    theta = np.linspace(0.0, 2 * np.pi, 10_000, endpoint=False)
    grid = evaluate_on_sphere(form, np.column_stack([np.cos(theta), np.sin(theta)]))
    multi = min_on_subspace(form, None, seed=seed).value
    return min(float(grid.min()), multi) >= -NEG_TOL


def test_acceptance_10_sturm_vs_numeric():
    rng = np.random.default_rng(2024)
    with criterion(10, 60.0) as info:
        n_nonneg = 0
        for t in range(100):
            form = _random_binary_form(rng)
            exact = binary_form_nonneg(form)
            check(exact == _numeric_nonneg(form, t), f"form {t} ({form}): Sturm says {exact}")
            n_nonneg += exact
        info["detail"] = f"100 forms agree ({n_nonneg} nonnegative)"


if __name__ == "__main__":
    code = pytest.main([__file__, "-q"])
    print("\n".join(RESULTS))
    sys.exit(code)
