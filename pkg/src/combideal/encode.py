"""Polynomial encodings of CSP instances and interpolation of finite maps."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

from .csp import Constraint, CspInstance
from .linalg import IncrementalSpan, solve
from .polyring import GRLEX, Polynomial, divide


def indicator_polynomial(v: int, t: int, var: int = 0, nvars: int = 1) -> Polynomial:
    """Lagrange polynomial that is 1 at ``v`` and 0 at the other points of {0..t-1}."""
    if not 0 <= v < t:
        raise ValueError(f"value {v} outside domain of size {t}")
    x = Polynomial.variable(var, nvars)
    p = Polynomial.constant(1, nvars)
    for b in range(t):
        if b != v:
            p = p * (x - b) * Fraction(1, v - b)
    return p


def domain_polynomial(var: int, t: int, nvars: int, values: Sequence[int] | None = None) -> Polynomial:
    """prod_{a} (x - a) over the domain (or over ``values`` for a restricted domain)."""
    if t < 1:
        raise ValueError("domain size must be positive")
    x = Polynomial.variable(var, nvars)
    p = Polynomial.constant(1, nvars)
    for a in range(t) if values is None else sorted(values):
        p = p * (x - a)
    return p


def domain_polynomials(nvars: int, t: int) -> list[Polynomial]:
    return [domain_polynomial(i, t, nvars) for i in range(nvars)]


def reduce_by_domain(f: Polynomial, t: int) -> Polynomial:
    """Remainder modulo the domain polynomials (degree < t in every variable).

    The domain polynomials have pairwise coprime leading monomials under any
    order, so this remainder is the canonical representative of ``f`` as a
    function on ``D^n``.
    """
    if f.is_zero() or all(e < t for exp in f.terms for e in exp):
        return f
    return divide(f, domain_polynomials(f.nvars, t), GRLEX)[1]


def _point_indicator(point: Sequence[int], positions: Sequence[int], t: int, nvars: int) -> Polynomial:
    p = Polynomial.constant(1, nvars)
    for a, i in zip(point, positions):
        p = p * indicator_polynomial(a, t, i, nvars)
    return p


def constraint_polynomial(tuples, positions: Sequence[int], t: int, nvars: int, reduced: bool = False) -> Polynomial:
    """prod_{v in R} (1 - prod_j delta_{v_j}(x_{i_j})).

    With ``reduced=True`` the result is replaced by its remainder modulo the
    domain polynomials, which is the same function on ``D^n`` and generates the
    same ideal once the domain polynomials are present.  It is computed
    directly as the sum of indicators of the scope points outside ``R``.
    """
    tuples = sorted(tuples)
    if not reduced:
        one = Polynomial.constant(1, nvars)
        p = one
        for v in tuples:
            p = p * (one - _point_indicator(v, positions, t, nvars))
        return p
    distinct = sorted(set(positions))
    where = {i: k for k, i in enumerate(distinct)}
    allowed = set()
    for v in tuples:
        point = [None] * len(distinct)
        ok = True
        for a, i in zip(v, positions):
            k = where[i]
            if point[k] is not None and point[k] != a:
                ok = False
                break
            point[k] = a
        if ok:
            allowed.add(tuple(point))
    p = Polynomial.zero(nvars)
    for point in itertools.product(range(t), repeat=len(distinct)):
        if point not in allowed:
            p = p + _point_indicator(point, distinct, t, nvars)
    return reduce_by_domain(p, t)


def constraint_generators(c: Constraint, p: CspInstance, reduced: bool = False) -> list[Polynomial]:
    """Product polynomial of ``c`` followed by one domain polynomial per scope variable."""
    idx = p.index()
    positions = [idx[v] for v in c.scope]
    t, n = p.domain_size, p.n
    gens = [constraint_polynomial(p.relations[c.relation].tuples, positions, t, n, reduced)]
    for i in dict.fromkeys(positions):
        gens.append(domain_polynomial(i, t, n))
    return gens


def instance_ideal(p: CspInstance, reduced: bool = False) -> list[Polynomial]:
    """Generators of I(P): domain polynomials by variable, then constraints, then pins."""
    t, n = p.domain_size, p.n
    idx = p.index()
    gens = domain_polynomials(n, t)
    seen = set(gens)
    for c in p.constraints:
        positions = [idx[v] for v in c.scope]
        g = constraint_polynomial(p.relations[c.relation].tuples, positions, t, n, reduced)
        if g not in seen:
            seen.add(g)
            gens.append(g)
    for v, a in p.pins:
        g = Polynomial.constant(1, n) - indicator_polynomial(a, t, idx[v], n)
        if g not in seen:
            seen.add(g)
            gens.append(g)
    return gens


def interpolate_map(
    points: Sequence[Sequence[int]],
    values: Sequence,
    t: int,
    variables: Sequence[int] | None = None,
    nvars: int | None = None,
) -> Polynomial:
    """Polynomial taking ``values[k]`` at ``points[k]``.

    The support is chosen greedily: monomials with every exponent below ``t``
    are scanned in increasing grlex order and kept when their value vector on
    the points is independent of those already kept.  The result is the unique
    interpolant on that support.
    """
    points = [tuple(pt) for pt in points]
    if len(set(points)) != len(points):
        raise ValueError("duplicate interpolation points")
    if len(points) != len(values):
        raise ValueError("need one value per point")
    ell = len(points[0]) if points else 0
    if variables is None:
        variables = list(range(ell))
    if nvars is None:
        nvars = max(variables, default=-1) + 1
    if not points:
        return Polynomial.zero(nvars)
    monos = sorted(itertools.product(range(t), repeat=ell), key=GRLEX.key)
    span = IncrementalSpan()
    support = []
    for m in monos:
        vec = {k: _mono_value(m, pt) for k, pt in enumerate(points)}
        if span.add(vec) is None:
            support.append(m)
            if len(support) == len(points):
                break
    a = [[_mono_value(m, pt) for m in support] for pt in points]
    coeffs = solve(a, [Fraction(v) for v in values])
    terms = {}
    for m, c in zip(support, coeffs):
        exp = [0] * nvars
        for i, e in zip(variables, m):
            exp[i] += e
        terms[tuple(exp)] = c
    return Polynomial(terms, nvars)


def _mono_value(m, pt) -> int:
    v = 1
    for e, a in zip(m, pt):
        v *= a**e
    return v


def variety_points(gens: Sequence[Polynomial], t: int) -> list[tuple[int, ...]]:
    """Points of D^n where every generator vanishes (brute force)."""
    if not gens:
        return []
    n = gens[0].nvars
    return [pt for pt in itertools.product(range(t), repeat=n) if all(g.evaluate(pt) == 0 for g in gens)]
