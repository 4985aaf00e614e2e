"""Membership for languages with the dual-discriminator polymorphism.

The pipeline works on a :class:`~combideal.csp.BinaryNetwork`:

1. binarize: replace each constraint by its pairwise projections (exact for
   majority-closed relations);
2. make the network path consistent.  For majority-closed networks strong
   3-consistency implies global consistency, so every pair relation is then
   the exact projection of the solution set and an empty relation means UNSAT;
3. eliminate permutation constraints ``x_j = pi(x_i)`` by substituting an
   interpolant of ``pi`` for ``x_j``; the composed constraints can expose new
   permutations, so steps 2 and 3 alternate until none is left;
4. emit restricted domain polynomials and one ``(x_i - a)(x_j - b)`` per
   two-fan pair.  These form a Groebner basis of the ideal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .csp import (
    BinaryNetwork,
    Constraint,
    CspInstance,
    OperationTable,
    Relation,
    check_polymorphism,
    dual_discriminator,
    path_consistency_network,
    to_network,
)
from .encode import domain_polynomial, interpolate_map
from .errors import EngineInapplicable
from .groebner import GroebnerBasis, normal_form
from .polyring import GRLEX, MonomialOrder, Polynomial


@dataclass(frozen=True)
class BinaryClassification:
    """One of Complete, Permutation, TwoFan, Empty or NotDualDisc.

    ``left``/``right`` are the projections of the relation.  ``pi`` maps left
    to right for permutations; ``a``/``b`` are the fan centres for two-fans,
    i.e. ``R = ({a} x right) | (left x {b})``.
    """

    kind: str
    left: frozenset = frozenset()
    right: frozenset = frozenset()
    pi: tuple = ()
    a: int | None = None
    b: int | None = None

    def pi_map(self) -> dict[int, int]:
        return dict(self.pi)


def classify_binary(r: Relation | set, t: int | None = None) -> BinaryClassification:
    """Classify a binary relation by exact structural match."""
    tuples = set(r.tuples) if isinstance(r, Relation) else set(r)
    if not tuples:
        return BinaryClassification("Empty")
    left = frozenset(a for a, _ in tuples)
    right = frozenset(b for _, b in tuples)
    if len(tuples) == len(left) * len(right):
        return BinaryClassification("Complete", left, right)
    if len(tuples) == len(left) == len(right):
        return BinaryClassification("Permutation", left, right, tuple(sorted(tuples)))
    for a in sorted(left):
        for b in sorted(right):
            fan = {(a, y) for y in right} | {(x, b) for x in left}
            if fan == tuples:
                return BinaryClassification("TwoFan", left, right, a=a, b=b)
    return BinaryClassification("NotDualDisc", left, right)


def binarize(p: CspInstance, witness: OperationTable) -> CspInstance:
    """Replace constraints of arity >= 3 by all their pairwise projections."""
    if not witness.is_majority():
        raise ValueError("binarization needs a majority operation")
    for r in p.used_relations():
        if not check_polymorphism(witness, r):
            raise ValueError(f"{witness.name or 'operation'} is not a polymorphism of {r.name}")
    out = CspInstance(p.domain_size, list(p.variables), {}, [], list(p.pins))
    for c in p.constraints:
        r = p.relations[c.relation]
        if r.arity <= 2:
            out.relations.setdefault(r.name, r)
            if c not in out.constraints:
                out.constraints.append(c)
            continue
        for i, j in itertools.combinations(range(r.arity), 2):
            pr = r.project((i, j), f"{r.name}_pr{i}{j}")
            out.relations.setdefault(pr.name, pr)
            nc = Constraint(pr.name, (c.scope[i], c.scope[j]))
            if nc not in out.constraints:
                out.constraints.append(nc)
    return out


@dataclass
class Elimination:
    """``variables[eliminated] = pi(variables[kept])`` in the pre-elimination network."""

    eliminated: str
    kept: str
    pi: dict[int, int]


@dataclass
class DualDiscResult:
    """Final network (None if UNSAT), transformed ``f0`` and the eliminations done."""

    network: BinaryNetwork | None
    f0: Polynomial | None
    eliminations: list[Elimination] = field(default_factory=list)
    classifications: dict = field(default_factory=dict)

    @property
    def satisfiable(self) -> bool:
        return self.network is not None


def _find_permutation(net: BinaryNetwork):
    for (i, j), r in sorted(net.rels.items()):
        cls = classify_binary(r)
        if cls.kind == "Permutation" and len(cls.left) > 1:
            return i, j, cls
    return None


def _eliminate(net: BinaryNetwork, f0: Polynomial | None, i: int, j: int, pi: dict[int, int]):
    """Remove variable ``j`` using ``x_j = pi(x_i)``."""
    n = len(net.variables)
    keep = [k for k in range(n) if k != j]
    new_index = {k: q for q, k in enumerate(keep)}
    domains = [set(net.domains[k]) for k in keep]
    # x_i must stay in the domain of pi, otherwise solutions would be gained
    domains[new_index[i]] &= {a for a in pi if pi[a] in net.domains[j]}
    rels: dict[tuple[int, int], set] = {}

    def put(u, v, r):
        if u > v:
            u, v, r = v, u, {(b, a) for a, b in r}
        key = (new_index[u], new_index[v])
        rels[key] = rels[key] & r if key in rels else set(r)

    for (u, v), r in net.rels.items():
        if j not in (u, v):
            put(u, v, r)
        elif {u, v} == {i, j}:
            continue
        else:
            k = v if u == j else u
            s = net.rel(j, k)
            put(i, k, {(a, c) for a in pi for c in net.domains[k] if (pi[a], c) in s})
    out = BinaryNetwork(net.domain_size, [net.variables[k] for k in keep], domains, rels)
    for key in list(out.rels):
        u, v = key
        out.rels[key] = {(a, b) for a, b in out.rels[key] if a in domains[u] and b in domains[v]}
    if f0 is None:
        return out, None
    m = len(keep)
    points = sorted(pi)
    p_of_xi = interpolate_map([(a,) for a in points], [pi[a] for a in points], net.domain_size, [new_index[i]], m)
    images = [p_of_xi if k == j else Polynomial.variable(new_index[k], m) for k in range(n)]
    return out, f0.substitute(images, m)


def eliminate_permutations_network(net: BinaryNetwork, f0: Polynomial | None = None, consistency: bool = False):
    """Eliminate permutation pairs until none is left.

    With ``consistency=True`` path consistency is re-established before each
    search, which is what the full pipeline needs.  Returns
    ``(network or None, f0', eliminations)``.
    """
    eliminations: list[Elimination] = []
    while True:
        if consistency:
            net = path_consistency_network(net)
            if net is None:
                return None, f0, eliminations
        found = _find_permutation(net)
        if found is None:
            return net, f0, eliminations
        # keys are (i, j) with i < j, so pi maps values of x_i to values of x_j
        i, j, cls = found
        pi = cls.pi_map()
        eliminations.append(Elimination(net.variables[j], net.variables[i], pi))
        net, f0 = _eliminate(net, f0, i, j, pi)


def eliminate_permutations(f0: Polynomial, p: CspInstance) -> tuple[Polynomial, CspInstance]:
    """Remove every permutation constraint of a binary instance.

    Each ``x_j = pi(x_i)`` deletes ``x_j``, composes its other constraints
    with ``pi`` and substitutes the interpolant of ``pi`` into ``f0``.
    """
    net = to_network(p)
    if f0.nvars != p.n:
        raise ValueError("polynomial ring does not match the instance")
    net, f1, _ = eliminate_permutations_network(net, f0)
    return f1, net.to_instance()


def run_pipeline(p: CspInstance, f0: Polynomial | None = None) -> DualDiscResult:
    """Binarize, make path consistent and remove permutations."""
    nabla = dual_discriminator(p.domain_size)
    try:
        q = binarize(p, nabla)
    except ValueError as exc:
        raise EngineInapplicable(str(exc)) from exc
    net = to_network(q)
    net, f1, elims = eliminate_permutations_network(net, f0, consistency=True)
    if net is None:
        return DualDiscResult(None, f1, elims)
    classes = {}
    for key, r in sorted(net.rels.items()):
        cls = classify_binary(r)
        if cls.kind == "NotDualDisc":
            raise EngineInapplicable(f"pair {key} is not complete, permutation or two-fan")
        classes[key] = cls
    return DualDiscResult(net, f1, elims, classes)


def network_groebner(net: BinaryNetwork | None, order: MonomialOrder = GRLEX) -> GroebnerBasis:
    """Explicit basis of a permutation-free, path-consistent network."""
    if net is None:
        return GroebnerBasis([Polynomial.constant(1, 0)], order)
    n = len(net.variables)
    if net.is_empty():
        return GroebnerBasis([Polynomial.constant(1, n)], order)
    gens = [domain_polynomial(i, net.domain_size, n, net.domains[i]) for i in range(n)]
    for (i, j), r in sorted(net.rels.items()):
        cls = classify_binary(r)
        if cls.kind == "Complete":
            continue
        if cls.kind == "TwoFan":
            xi, xj = Polynomial.variable(i, n), Polynomial.variable(j, n)
            gens.append((xi - cls.a) * (xj - cls.b))
            continue
        if cls.kind == "Permutation" and len(cls.left) == 1:
            continue
        raise EngineInapplicable(f"pair ({net.variables[i]}, {net.variables[j]}) is {cls.kind}")
    return GroebnerBasis(gens, order)


def dual_disc_groebner(p: CspInstance, order: MonomialOrder = GRLEX) -> GroebnerBasis:
    """Groebner basis of I(P) for a permutation-free instance.

    Constraints of arity >= 3 are binarized, then the instance is made path
    consistent; an unsatisfiable instance yields {1}.  A remaining
    permutation or unclassifiable pair makes the engine inapplicable.
    """
    if any(len(c.scope) > 2 for c in p.constraints):
        try:
            p = binarize(p, dual_discriminator(p.domain_size))
        except ValueError as exc:
            raise EngineInapplicable(str(exc)) from exc
    net = path_consistency_network(to_network(p))
    if net is None:
        return GroebnerBasis([Polynomial.constant(1, p.n)], order)
    if _find_permutation(net) is not None:
        raise EngineInapplicable("instance still has permutation constraints")
    return network_groebner(net, order)


def closure_violations(net: BinaryNetwork) -> list[tuple]:
    """Fan triples breaking the closure property of the emitted basis.

    Whenever ``(x_i - a)(x_j - b)`` and ``(x_i - c)(x_k - d)`` are emitted with
    ``a != c``, ``(x_j - b)(x_k - d)`` must be emitted too (up to orientation).
    """
    fans = {}
    for (i, j), r in net.rels.items():
        cls = classify_binary(r)
        if cls.kind == "TwoFan":
            fans[(i, j)] = (cls.a, cls.b)
            fans[(j, i)] = (cls.b, cls.a)
    bad = []
    for (i, j), (a, b) in fans.items():
        for (i2, k), (c, d) in fans.items():
            if i2 != i or k == j or a == c:
                continue
            if fans.get((j, k)) != (b, d):
                bad.append((i, j, k))
    return bad


def decide_dual_disc(f0: Polynomial, p: CspInstance) -> bool:
    """Membership of ``f0`` in I(P) via the explicit basis (any degree)."""
    res = run_pipeline(p, f0)
    if not res.satisfiable:
        return True
    gb = network_groebner(res.network)
    return normal_form(res.f0, gb).is_zero()


def recover_assignment(
    variables: Sequence[str], net_assignment: dict[str, int], eliminations: Sequence[Elimination]
) -> tuple[int, ...]:
    """Undo eliminations: fill eliminated variables from the kept ones."""
    values = dict(net_assignment)
    for e in reversed(eliminations):
        values[e.eliminated] = e.pi[values[e.kept]]
    return tuple(values[v] for v in variables)
