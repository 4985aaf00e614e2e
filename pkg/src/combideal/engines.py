"""Decision engines for f0 in I(P) and the dispatcher used by the CLI.

Every engine answers the same question; the oracle answers it by brute
force (I(P) is radical, so membership is vanishing on Sol(P)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .affine_modp import ModPSystem, decide_modp, instance_to_system
from .csp import (
    DEFAULT_CAP,
    Constraint,
    CspInstance,
    OperationTable,
    Relation,
    detect_special_polymorphism,
    enumerate_solutions,
)
from .dual_disc import decide_dual_disc
from .encode import instance_ideal
from .errors import DegreeBoundError, EngineInapplicable
from .groebner import buchberger, normal_form
from .polyring import GRLEX, Polynomial
from .reductions import search_witness

ENGINES = ("auto", "oracle", "buchberger", "dualdisc", "modp", "semilattice")


@dataclass
class EngineConfig:
    engine: str = "auto"
    degree_bound: int | None = None
    cap: int = DEFAULT_CAP
    witness: str = "search"  # or "oracle"
    semilattice_cap: int = 4


@dataclass
class Decision:
    member: bool
    engine: str
    witness: tuple[int, ...] | None = None
    details: dict = field(default_factory=dict)


# oracle


def oracle_member(f0: Polynomial, p: CspInstance, cap: int | None = DEFAULT_CAP) -> bool:
    return oracle_witness(f0, p, cap) is None


def oracle_witness(f0: Polynomial, p: CspInstance, cap: int | None = DEFAULT_CAP) -> tuple[int, ...] | None:
    for sol in enumerate_solutions(p, cap):
        if f0.evaluate(sol) != 0:
            return sol
    return None


# generic Buchberger


def decide_buchberger(f0: Polynomial, p: CspInstance, degree_bound: int | None = None) -> bool:
    """Normal form against a (possibly truncated) grlex basis of I(P); pins are encoded as ``1 - delta_a``."""
    if degree_bound is not None and f0.degree() > degree_bound:
        raise DegreeBoundError(f0.degree(), degree_bound)
    gens = instance_ideal(p, reduced=True)
    if not gens:
        return f0.is_zero()
    gb = buchberger(gens, GRLEX, degree_bound)
    return normal_form(f0, gb).is_zero()


# linear equations mod p


def decide_modp_instance(f0: Polynomial, p: CspInstance | ModPSystem, d: int | None = None) -> bool:
    if isinstance(p, ModPSystem):
        return decide_modp(f0, p, d)
    try:
        s = instance_to_system(p)
    except ValueError as exc:
        raise EngineInapplicable(str(exc)) from exc
    return decide_modp(f0, s, d)


# conservative semilattice -> Boolean


def order_of_semilattice(op: OperationTable) -> list[int]:
    """Total order (smallest first) with ``u <= v`` iff ``op(u, v) == u``."""
    t = op.domain_size
    below = {u: sum(op(u, v) == u for v in range(t)) for u in range(t)}
    return sorted(range(t), key=lambda u: -below[u])


def semilattice_embedding(
    f0: Polynomial, p: CspInstance, order: list[int]
) -> tuple[Polynomial, CspInstance]:
    """Boolean instance and polynomial equivalent to ``(f0, p)``.

    The value of rank ``r`` in ``order`` becomes the chain ``1^r 0^(t-1-r)``
    on ``t - 1`` bits, so ``x = order[0] + sum_j (order[j] - order[j-1]) * b_j``
    is linear in the bits and ``deg f0`` is preserved.
    """
    t = p.domain_size
    if sorted(order) != list(range(t)):
        raise ValueError("order must list every domain value once")
    rank = {a: r for r, a in enumerate(order)}
    w = t - 1

    def enc(a):
        return tuple(int(j < rank[a]) for j in range(w))

    bits = {v: [f"{v}__b{j + 1}" for j in range(w)] for v in p.variables}
    new_vars = [b for v in p.variables for b in bits[v]]
    relations: dict[str, Relation] = {}
    constraints: list[Constraint] = []
    if w >= 2:
        chain = Relation("chain__le", 2, frozenset({(0, 0), (0, 1), (1, 1)}))
        relations[chain.name] = chain
        for v in p.variables:
            for j in range(w - 1):
                constraints.append(Constraint(chain.name, (bits[v][j + 1], bits[v][j])))
    for c in p.constraints:
        r = p.relations[c.relation]
        name = f"{r.name}__bits"
        if name not in relations:
            tuples = frozenset(sum((enc(a) for a in tup), ()) for tup in r.tuples)
            relations[name] = Relation(name, r.arity * w, tuples)
        constraints.append(Constraint(name, tuple(b for v in c.scope for b in bits[v])))
    pins = [(b, e) for v, a in p.pins for b, e in zip(bits[v], enc(a))]
    if t == 1:
        # no bits; only an empty relation can matter
        if any(not p.relations[c.relation].tuples for c in p.constraints):
            relations["empty__"] = Relation("empty__", 0, frozenset())
            constraints = [Constraint("empty__", ())]
    q = CspInstance(2, new_vars, relations, constraints, pins)
    m = len(new_vars)
    pos = {b: i for i, b in enumerate(new_vars)}
    images = []
    for v in p.variables:
        x = Polynomial.constant(order[0], m)
        for j in range(w):
            step = order[j + 1] - order[j]
            if step:
                x = x + Polynomial.variable(pos[bits[v][j]], m) * step
        images.append(x)
    return f0.substitute(images, m), q


def decide_semilattice(
    f0: Polynomial, p: CspInstance, op: OperationTable | None = None, degree_bound: int | None = None
) -> bool:
    if op is None:
        op = detect_special_polymorphism(p.used_relations(), "semilattice", p.domain_size)
        if op is None:
            raise EngineInapplicable("no conservative semilattice polymorphism")
    f1, q = semilattice_embedding(f0, p, order_of_semilattice(op))
    return decide_buchberger(f1, q, degree_bound)


# dispatch


def select_engine(p: CspInstance, semilattice_cap: int = 4) -> str:
    """First applicable of dualdisc, modp, semilattice; buchberger otherwise."""
    gamma = p.used_relations()
    t = p.domain_size
    if detect_special_polymorphism(gamma, "dual_discriminator", t) is not None:
        return "dualdisc"
    if detect_special_polymorphism(gamma, "affine", t) is not None:
        return "modp"
    if detect_special_polymorphism(gamma, "semilattice", t, semilattice_cap) is not None:
        return "semilattice"
    return "buchberger"


def decider(name: str, config: EngineConfig) -> Callable[[Polynomial, CspInstance], bool]:
    if name == "oracle":
        return lambda f, q: oracle_member(f, q, config.cap)
    if name == "buchberger":
        return lambda f, q: decide_buchberger(f, q, config.degree_bound)
    if name == "dualdisc":
        return decide_dual_disc
    if name == "modp":
        return lambda f, q: decide_modp_instance(f, q, config.degree_bound)
    if name == "semilattice":
        return lambda f, q: decide_semilattice(f, q, None, config.degree_bound)
    raise ValueError(f"unknown engine {name!r}")


def verify_witness(f0: Polynomial, p: CspInstance, w) -> bool:
    return w is not None and len(w) == p.n and p.satisfies(w) and f0.evaluate(w) != 0


def decide(f0: Polynomial, p: CspInstance, config: EngineConfig | None = None) -> Decision:
    """Decide membership and attach a checked witness to a NOT_MEMBER answer."""
    config = config or EngineConfig()
    if f0.nvars != p.n:
        raise ValueError("polynomial ring does not match the instance variables")
    name = config.engine
    if name == "auto":
        name = select_engine(p, config.semilattice_cap)
    fn = decider(name, config)
    member = fn(f0, p)
    if member:
        return Decision(True, name)
    if config.witness == "oracle" or name == "oracle":
        w = oracle_witness(f0, p, config.cap)
    else:
        w = search_witness(f0, p, fn)
    if not verify_witness(f0, p, w):
        raise RuntimeError(f"engine {name} produced an invalid witness {w}")
    return Decision(False, name, w)
