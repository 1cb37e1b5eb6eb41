"""Exact univariate tools and the binary-form nonnegativity decision.

Univariate polynomials are lists of Fractions, lowest degree first.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainMismatch, ShapeError
from .poly import Polynomial

UPoly = list[Fraction]


def trim(p: UPoly) -> UPoly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def deriv(p: UPoly) -> UPoly:
    return trim([k * c for k, c in enumerate(p)][1:])


def divmod_upoly(a: UPoly, b: UPoly) -> tuple[UPoly, UPoly]:
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            r[shift + i] -= c * bc
        r = trim(r)
    return trim(q), r


def monic(p: UPoly) -> UPoly:
    p = trim(p)
    return [c / p[-1] for c in p] if p else p


def gcd_upoly(a: UPoly, b: UPoly) -> UPoly:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_upoly(a, b)[1]
    return monic(a)


def squarefree_factors(p: UPoly) -> list[UPoly]:
    """Yun's algorithm: monic a_1, a_2, ... with p = lc * prod a_i^i."""
    p = monic(p)
    out: list[UPoly] = []
    if len(p) <= 1:
        return out
    dp = deriv(p)
    g = gcd_upoly(p, dp)
    c = divmod_upoly(p, g)[0]
    d = divmod_upoly(dp, g)[0]
    while len(c) > 1:
        dc = deriv(c)
        d = _sub(d, dc)
        a = gcd_upoly(c, d)
        out.append(a)
        c = divmod_upoly(c, a)[0]
        d = divmod_upoly(d, a)[0]
    return out


def sturm_chain(p: UPoly) -> list[UPoly]:
    chain = [trim(p), deriv(p)]
    while chain[-1]:
        r = divmod_upoly(chain[-2], chain[-1])[1]
        chain.append([-c for c in r])
    return [q for q in chain if q]


def _sign_changes(signs: list[int]) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: UPoly) -> int:
    """Number of distinct real roots (Sturm's theorem on (-inf, inf))."""
    p = trim(p)
    if len(p) <= 1:
        return 0
    chain = sturm_chain(p)
    at_pos = [1 if q[-1] > 0 else -1 for q in chain]
    at_neg = [(1 if q[-1] > 0 else -1) * (-1 if (len(q) - 1) % 2 else 1) for q in chain]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


def eval_upoly(p: UPoly, t) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * t + c
    return acc


def univariate_nonneg(p: UPoly) -> bool:
    """True iff p(t) >= 0 for every real t."""
    p = trim(p)
    if not p:
        return True
    if len(p) == 1:
        return p[0] > 0
    if (len(p) - 1) % 2 or p[-1] < 0:
        return False
    # sign changes of p happen exactly at real roots of odd multiplicity
    odd_part: UPoly = [Fraction(1)]
    for mult, factor in enumerate(squarefree_factors(p), start=1):
        if mult % 2:
            odd_part = _mul(odd_part, factor)
    return count_real_roots(odd_part) == 0


def _sub(a: UPoly, b: UPoly) -> UPoly:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return trim([x - y for x, y in zip(a, b)])


def _mul(a: UPoly, b: UPoly) -> UPoly:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def binary_form_nonneg(form: Polynomial) -> bool:
    """Exact decision of F(s, t) >= 0 on R^2 for a homogeneous binary form."""
    if form.nvars != 2:
        raise ShapeError("binary_form_nonneg needs a form in two variables")
    if not form.exact:
        raise DomainMismatch("binary_form_nonneg requires exact coefficients")
    if form.is_zero():
        return True
    if not form.is_homogeneous():
        raise ShapeError("binary_form_nonneg requires a homogeneous form")
    deg = form.degree()
    if deg % 2:
        return False
    # dehomogenize at s = 1; the point (0, 1) is checked separately
    f = [Fraction(0)] * (deg + 1)
    for (a, b), c in form.terms():
        f[b] += c
    if form.coeff((0, deg)) < 0:
        return False
    # f = F(1, t) may have lower degree than F; univariate_nonneg handles that
    return univariate_nonneg(f)
