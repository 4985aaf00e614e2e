"""Buchberger's algorithm, normal forms and membership certificates.

Bases are reduced (monic, inter-reduced) and returned sorted by leading
monomial, smallest first.  A basis may be *truncated* at degree ``d``: S-pairs
whose lcm has total degree above ``d`` are never processed and generators of
degree above ``d`` are dropped from the result.  Under a degree-compatible
order (grlex) such a basis decides membership for polynomials of degree at
most ``d``; membership answers are always sound, and complete whenever the
truncated basis coincides with the degree-``d`` part of the full basis.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DegreeBoundError
from .polyring import (
    GRLEX,
    MonomialOrder,
    Polynomial,
    divide,
    monomial_divides,
    monomial_lcm,
    monomial_quotient,
    s_polynomial,
)


@dataclass
class GroebnerBasis:
    """Generators plus the order (and truncation degree) they are a basis for.

    When built with ``track=True`` by :func:`buchberger`, ``representations[i]``
    expresses ``generators[i]`` over ``inputs``:
    ``generators[i] == sum(r * g for r, g in zip(representations[i], inputs))``.
    """

    generators: list[Polynomial]
    order: MonomialOrder = GRLEX
    degree_bound: int | None = None
    inputs: list[Polynomial] | None = None
    representations: list[list[Polynomial]] | None = None
    stats: dict = field(default_factory=dict)

    @property
    def nvars(self) -> int:
        if self.generators:
            return self.generators[0].nvars
        if self.inputs:
            return self.inputs[0].nvars
        return 0

    def is_unit(self) -> bool:
        """True if the basis is {1}, i.e. the ideal is the whole ring."""
        return any(g.is_constant() and not g.is_zero() for g in self.generators)

    def leading_monomials(self) -> list[tuple[int, ...]]:
        return [g.leading_monomial(self.order) for g in self.generators]

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


def _reduce_tracked(f, f_rep, basis, reps, order):
    """Full reduction of ``f`` by ``basis``, updating its input representation."""
    qs, r = divide(f, basis, order)
    if f_rep is None:
        return r, None
    rep = list(f_rep)
    for q, g_rep in zip(qs, reps):
        if q:
            rep = [a - q * b for a, b in zip(rep, g_rep)]
    return r, rep


def _monic_tracked(f, rep, order):
    lc = f.leading_coefficient(order)
    if rep is None:
        return f.monic(order), None
    inv = 1 / lc
    return f.monic(order), [r.scale(inv) for r in rep]


def buchberger(
    generators: Sequence[Polynomial],
    order: MonomialOrder = GRLEX,
    degree_bound: int | None = None,
    track: bool = False,
    max_pairs: int | None = None,
) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``generators``.

    Pairs are processed by the normal strategy (smallest lcm first, ties by
    generator index).  Buchberger's coprime and chain criteria skip pairs
    known to reduce to zero.  ``max_pairs`` bounds the number of S-polynomial
    reductions and raises ``RuntimeError`` if exceeded.
    """
    inputs = [g for g in generators]
    if not inputs:
        raise ValueError("buchberger needs at least one generator")
    n = inputs[0].nvars
    if any(g.nvars != n for g in inputs):
        raise ValueError("generators live in different rings")
    key = order.key
    one = Polynomial.constant(1, n)
    zero = Polynomial.zero(n)
    m = len(inputs)

    G: list[Polynomial] = []
    reps: list[list[Polynomial]] | None = [] if track else None
    lms: list[tuple[int, ...]] = []
    alive: list[bool] = []
    pairs: list = []
    pending: set[tuple[int, int]] = set()
    stats = {"pairs_processed": 0, "pairs_skipped_degree": 0, "coprime": 0, "chain": 0}

    def unit_basis(rep):
        return GroebnerBasis(
            [one], order, degree_bound, inputs if track else None, [rep] if track else None, stats
        )

    def add(h, h_rep):
        h, h_rep = _monic_tracked(h, h_rep, order)
        idx = len(G)
        G.append(h)
        lms.append(h.leading_monomial(order))
        alive.append(True)
        if track:
            reps.append(h_rep)
        for i in range(idx):
            if not alive[i]:
                continue
            lcm = monomial_lcm(lms[i], lms[idx])
            heapq.heappush(pairs, (key(lcm), i, idx, lcm))
            pending.add((i, idx))
        return idx

    for j, g in enumerate(inputs):
        if g.is_zero():
            continue
        rep = None
        if track:
            rep = [zero] * m
            rep[j] = one
        if G:
            g, rep = _reduce_tracked(g, rep, G, reps, order)
            if g.is_zero():
                continue
        if g.is_constant():
            return unit_basis(_monic_tracked(g, rep, order)[1])
        add(g, rep)

    if not G:
        return GroebnerBasis([], order, degree_bound, inputs if track else None, [] if track else None, stats)

    processed = 0
    while pairs:
        _, i, j, lcm = heapq.heappop(pairs)
        pending.discard((i, j))
        if degree_bound is not None and sum(lcm) > degree_bound:
            stats["pairs_skipped_degree"] += 1
            continue
        if all(a == 0 or b == 0 for a, b in zip(lms[i], lms[j])):
            stats["coprime"] += 1
            continue
        if _chain_skips(i, j, lcm, lms, pending):
            stats["chain"] += 1
            continue
        processed += 1
        if max_pairs is not None and processed > max_pairs:
            raise RuntimeError(f"buchberger exceeded {max_pairs} pair reductions")
        s = s_polynomial(G[i], G[j], order)
        s_rep = None
        if track:
            ci, mi = G[i].leading_coefficient(order), monomial_quotient(lcm, lms[i])
            cj, mj = G[j].leading_coefficient(order), monomial_quotient(lcm, lms[j])
            s_rep = [a.mul_term(1 / ci, mi) - b.mul_term(1 / cj, mj) for a, b in zip(reps[i], reps[j])]
        r, r_rep = _reduce_tracked(s, s_rep, G, reps, order)
        if r.is_zero():
            continue
        if r.is_constant():
            stats["pairs_processed"] = processed
            return unit_basis(_monic_tracked(r, r_rep, order)[1])
        add(r, r_rep)
    stats["pairs_processed"] = processed

    gens, out_reps = _interreduce(G, reps, order)
    if degree_bound is not None:
        keep = [k for k, g in enumerate(gens) if g.degree() <= degree_bound]
        gens = [gens[k] for k in keep]
        if out_reps is not None:
            out_reps = [out_reps[k] for k in keep]
    return GroebnerBasis(gens, order, degree_bound, inputs if track else None, out_reps, stats)


def _chain_skips(i, j, lcm, lms, pending):
    for k in range(len(lms)):
        if k == i or k == j:
            continue
        if not monomial_divides(lms[k], lcm):
            continue
        if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
            continue
        return True
    return False


def _interreduce(G, reps, order):
    key = order.key
    lms = [g.leading_monomial(order) for g in G]
    idx = sorted(range(len(G)), key=lambda k: (key(lms[k]), k))
    minimal = []
    for k in idx:
        if any(monomial_divides(lms[q], lms[k]) for q in minimal):
            continue
        minimal.append(k)
    gens = [G[k] for k in minimal]
    out_reps = [reps[k] for k in minimal] if reps is not None else None
    for a in range(len(gens)):
        others = gens[:a] + gens[a + 1 :]
        other_reps = (out_reps[:a] + out_reps[a + 1 :]) if out_reps is not None else None
        # the leading monomial is irreducible (minimal basis), so only the tail moves
        rep_a = out_reps[a] if out_reps is not None else None
        if others:
            r, r_rep = _reduce_tracked(gens[a], rep_a, others, other_reps, order)
        else:
            r, r_rep = gens[a], rep_a
        r, r_rep = _monic_tracked(r, r_rep, order)
        gens[a] = r
        if out_reps is not None:
            out_reps[a] = r_rep
    return gens, out_reps


def _check_degree(f: Polynomial, gb: GroebnerBasis):
    if gb.degree_bound is not None and f.degree() > gb.degree_bound:
        raise DegreeBoundError(f.degree(), gb.degree_bound)


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Remainder of ``f`` on division by the basis."""
    if gb.is_unit():
        return Polynomial.zero(f.nvars)
    if not gb.generators:
        return f
    return divide(f, gb.generators, gb.order)[1]


def is_member(f: Polynomial, gb: GroebnerBasis) -> bool:
    """Decide ``f`` in the ideal; refuses polynomials above the truncation degree."""
    _check_degree(f, gb)
    return normal_form(f, gb).is_zero()


def certificate(f: Polynomial, gb: GroebnerBasis) -> list[tuple[Polynomial, Polynomial]] | None:
    """Cofactors over the basis generators with ``sum(c * g) == f``, or ``None``."""
    _check_degree(f, gb)
    if not gb.generators:
        return None if f else []
    qs, r = divide(f, gb.generators, gb.order)
    if r:
        return None
    return [(g, q) for g, q in zip(gb.generators, qs)]


def input_certificate(f: Polynomial, gb: GroebnerBasis) -> list[tuple[Polynomial, Polynomial]] | None:
    """Cofactors over the original inputs (needs a basis built with ``track=True``)."""
    if gb.representations is None or gb.inputs is None:
        raise ValueError("basis was built without tracking input representations")
    cert = certificate(f, gb)
    if cert is None:
        return None
    n = f.nvars
    total = [Polynomial.zero(n) for _ in gb.inputs]
    for (_, q), rep in zip(cert, gb.representations):
        if q:
            total = [t + q * r for t, r in zip(total, rep)]
    return list(zip(gb.inputs, total))


def failing_pairs(
    polys: Sequence[Polynomial], order: MonomialOrder = GRLEX, degree_bound: int | None = None
) -> list[tuple[int, int]]:
    """Pairs whose S-polynomial does not reduce to zero (no criteria applied)."""
    polys = [p for p in polys if p]
    bad = []
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            lcm = monomial_lcm(polys[i].leading_monomial(order), polys[j].leading_monomial(order))
            if degree_bound is not None and sum(lcm) > degree_bound:
                continue
            s = s_polynomial(polys[i], polys[j], order)
            if divide(s, polys, order)[1]:
                bad.append((i, j))
    return bad


def check_buchberger_criterion(
    polys: Sequence[Polynomial] | GroebnerBasis,
    order: MonomialOrder = GRLEX,
    degree_bound: int | None = None,
) -> bool:
    """Independent exhaustive S-pair audit."""
    if isinstance(polys, GroebnerBasis):
        order, degree_bound, polys = polys.order, polys.degree_bound, polys.generators
    return not failing_pairs(polys, order, degree_bound)


def is_reduced(gb: GroebnerBasis) -> bool:
    """Monic, and no term of any generator divisible by another's leading monomial."""
    lms = gb.leading_monomials()
    for a, g in enumerate(gb.generators):
        if g.leading_coefficient(gb.order) != 1:
            return False
        for b, lm in enumerate(lms):
            if a != b and any(monomial_divides(lm, e) for e in g.terms):
                return False
    return True


def reconstruct(cert: Sequence[tuple[Polynomial, Polynomial]], nvars: int) -> Polynomial:
    total = Polynomial.zero(nvars)
    for g, c in cert:
        total = total + g * c
    return total


__all__ = [
    "GroebnerBasis",
    "buchberger",
    "normal_form",
    "is_member",
    "certificate",
    "input_certificate",
    "check_buchberger_criterion",
    "failing_pairs",
    "is_reduced",
    "reconstruct",
]
