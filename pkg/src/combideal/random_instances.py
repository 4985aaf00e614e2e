"""Seeded random instances and polynomials for oracle comparisons."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .affine_modp import ModPSystem
from .csp import (
    DEFAULT_CAP,
    Constraint,
    CspInstance,
    OperationTable,
    Relation,
    affine_operation,
    dual_discriminator,
    enumerate_solutions,
    semilattice_from_order,
)
from .linalg import nullspace
from .polyring import Polynomial


@dataclass
class RandomConfig:
    n_min: int = 2
    n_max: int = 4
    domain_sizes: tuple[int, ...] = (2, 3)
    max_constraints: int = 4
    max_arity: int = 3
    degree: int = 3
    member_rate: float = 0.5
    pin_rate: float = 0.2


def close_under(op: OperationTable, tuples) -> frozenset:
    """Smallest superset of ``tuples`` closed under ``op`` componentwise."""
    closed = set(map(tuple, tuples))
    if op.name.startswith("affine_") and closed:
        return _affine_hull(closed, op.domain_size)
    frontier = set(closed)
    while frontier:
        new = set()
        pool = list(closed)
        for rows in itertools.product(pool, repeat=op.arity):
            if not any(r in frontier for r in rows):
                continue
            img = tuple(op.table[col] for col in zip(*rows))
            if img not in closed:
                new.add(img)
        closed |= new
        frontier = new
    return frozenset(closed)


def _affine_hull(tuples: set, p: int) -> frozenset:
    # coset r0 + span of differences; same set as the closure under x - y + z
    r0 = next(iter(tuples))
    span = {tuple(0 for _ in r0)}
    for tup in tuples:
        d = tuple((a - b) % p for a, b in zip(tup, r0))
        if d in span:
            continue
        span = {tuple((s + k * x) % p for s, x in zip(v, d)) for v in span for k in range(p)}
    return frozenset(tuple((a + b) % p for a, b in zip(v, r0)) for v in span)


def random_tuples(rng: random.Random, arity: int, t: int, k: int) -> set:
    space = list(itertools.product(range(t), repeat=arity))
    return set(rng.sample(space, min(k, len(space))))


def random_relation(rng: random.Random, name: str, arity: int, t: int, op: OperationTable | None = None) -> Relation:
    size = rng.randint(1, max(1, t**arity - 1))
    tuples = random_tuples(rng, arity, t, size)
    if op is not None:
        tuples = close_under(op, tuples)
    return Relation(name, arity, frozenset(tuples))


def _random_scope(rng, variables, arity):
    if arity <= len(variables):
        return tuple(rng.sample(variables, arity))
    return tuple(rng.choice(variables) for _ in range(arity))


def random_instance(
    rng: random.Random,
    t: int,
    n: int,
    op: OperationTable | None = None,
    config: RandomConfig | None = None,
) -> CspInstance:
    """Random instance; every relation is closed under ``op`` when given."""
    config = config or RandomConfig()
    variables = [f"x{i + 1}" for i in range(n)]
    relations: dict[str, Relation] = {}
    constraints = []
    for k in range(rng.randint(1, config.max_constraints)):
        arity = rng.randint(1, min(config.max_arity, max(n, 1)))
        r = random_relation(rng, f"R{k}", arity, t, op)
        relations[r.name] = r
        constraints.append(Constraint(r.name, _random_scope(rng, variables, arity)))
    pins = []
    if rng.random() < config.pin_rate:
        pins.append((rng.choice(variables), rng.randrange(t)))
    return CspInstance(t, variables, relations, constraints, pins)


def random_polynomial(rng: random.Random, nvars: int, degree: int, terms: int = 4, coeff_range: int = 3) -> Polynomial:
    monos = _monomials(nvars, degree)
    out = Polynomial.zero(nvars)
    for m in rng.sample(monos, min(terms, len(monos))):
        c = rng.randint(-coeff_range, coeff_range) or 1
        out = out + Polynomial.monomial(m, c)
    return out


def _monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    out = []
    for d in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def random_member(rng: random.Random, points, nvars: int, degree: int) -> Polynomial | None:
    """Random polynomial of degree <= ``degree`` vanishing on ``points``, or None if only 0 does."""
    monos = _monomials(nvars, degree)
    if not points:
        return random_polynomial(rng, nvars, degree)
    matrix = [[_value(m, pt) for m in monos] for pt in points]
    basis = nullspace(matrix, len(monos))
    if not basis:
        return None
    picks = rng.sample(basis, min(len(basis), rng.randint(1, 3)))
    coeffs = [Fraction(0)] * len(monos)
    for vec in picks:
        c = rng.randint(1, 3) * rng.choice((-1, 1))
        coeffs = [a + c * b for a, b in zip(coeffs, vec)]
    terms = {m: c for m, c in zip(monos, coeffs) if c}
    return Polynomial(terms, nvars) if terms else None


def _value(m, pt) -> int:
    v = 1
    for e, a in zip(m, pt):
        v *= a**e
    return v


def random_f0(rng: random.Random, p: CspInstance, config: RandomConfig | None = None, cap: int = DEFAULT_CAP) -> Polynomial:
    """Member with probability ``member_rate`` when one exists; otherwise a random polynomial."""
    config = config or RandomConfig()
    degree = rng.randint(1, config.degree)
    if rng.random() < config.member_rate:
        f = random_member(rng, enumerate_solutions(p, cap), p.n, degree)
        if f is not None:
            return f
    return random_polynomial(rng, p.n, degree)


FAMILIES = ("dualdisc", "modp", "semilattice", "buchberger")


def instance_for_engine(rng: random.Random, engine: str, config: RandomConfig | None = None) -> CspInstance:
    """Random instance from the language family an engine handles."""
    config = config or RandomConfig()
    if engine == "dualdisc":
        t = rng.choice((2, 3))
        n = rng.randint(config.n_min, 4)
        return random_instance(rng, t, n, dual_discriminator(t), config)
    if engine == "modp":
        t = rng.choice((2, 3, 5))
        n = rng.randint(config.n_min, 5 if t < 5 else 4)
        return random_instance(rng, t, n, affine_operation(t), config)
    if engine == "semilattice":
        t = rng.choice((2, 3))
        order = list(range(t))
        rng.shuffle(order)
        n = rng.randint(config.n_min, 3)
        return random_instance(rng, t, n, semilattice_from_order(order), config)
    t = rng.choice(config.domain_sizes)
    n = rng.randint(config.n_min, config.n_max if t == 2 else 3)
    return random_instance(rng, t, n, None, config)


def random_system(rng: random.Random, p: int, n: int, max_equations: int = 3) -> ModPSystem:
    eqs = []
    for _ in range(rng.randint(0, max_equations)):
        coeffs = tuple(rng.randrange(p) for _ in range(n))
        eqs.append((coeffs, rng.randrange(p)))
    return ModPSystem(p, [f"x{i + 1}" for i in range(n)], eqs)
