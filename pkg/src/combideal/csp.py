"""CSP instances, the brute-force solution oracle, polymorphisms, consistency.

Domains are always ``{0, ..., t-1}``.  An instance stores named relations as
explicit tuple sets and constraints as (relation name, scope) pairs; ``pin v a``
lines are kept separately as ``pins`` since constant elimination treats them
specially.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import CapExceeded, ParseError

DEFAULT_CAP = 10**7


@dataclass(frozen=True)
class Relation:
    name: str
    arity: int
    tuples: frozenset

    def __post_init__(self):
        ts = frozenset(tuple(int(v) for v in t) for t in self.tuples)
        for t in ts:
            if len(t) != self.arity:
                raise ValueError(f"tuple {t} does not have arity {self.arity} in relation {self.name}")
        object.__setattr__(self, "tuples", ts)

    def check_domain(self, t: int):
        for tup in self.tuples:
            if any(not 0 <= v < t for v in tup):
                raise ValueError(f"tuple {tup} of {self.name} leaves domain of size {t}")

    def __contains__(self, tup):
        return tuple(tup) in self.tuples

    def __len__(self):
        return len(self.tuples)

    def sorted_tuples(self) -> list[tuple[int, ...]]:
        return sorted(self.tuples)

    def project(self, positions: Sequence[int], name: str | None = None) -> "Relation":
        return Relation(
            name or f"{self.name}_pr{''.join(map(str, positions))}",
            len(positions),
            frozenset(tuple(t[i] for i in positions) for t in self.tuples),
        )


@dataclass(frozen=True)
class Constraint:
    relation: str
    scope: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "scope", tuple(self.scope))


@dataclass
class CspInstance:
    """Variables, domain size, relation table, constraints and pins."""

    domain_size: int
    variables: list[str]
    relations: dict[str, Relation] = field(default_factory=dict)
    constraints: list[Constraint] = field(default_factory=list)
    pins: list[tuple[str, int]] = field(default_factory=list)

    def __post_init__(self):
        self.variables = list(self.variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        self.validate()

    def validate(self):
        known = set(self.variables)
        for r in self.relations.values():
            r.check_domain(self.domain_size)
        for c in self.constraints:
            if c.relation not in self.relations:
                raise ValueError(f"unknown relation {c.relation!r}")
            if len(c.scope) != self.relations[c.relation].arity:
                raise ValueError(f"scope {c.scope} does not match arity of {c.relation}")
            for v in c.scope:
                if v not in known:
                    raise ValueError(f"undeclared variable {v!r}")
        for v, a in self.pins:
            if v not in known:
                raise ValueError(f"undeclared variable {v!r}")
            if not 0 <= a < self.domain_size:
                raise ValueError(f"pin value {a} outside domain")

    @property
    def n(self) -> int:
        return len(self.variables)

    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.variables)}

    def relation_of(self, c: Constraint) -> Relation:
        return self.relations[c.relation]

    def used_relations(self) -> list[Relation]:
        names = []
        for c in self.constraints:
            if c.relation not in names:
                names.append(c.relation)
        return [self.relations[nm] for nm in names]

    def copy(self) -> "CspInstance":
        return CspInstance(
            self.domain_size, list(self.variables), dict(self.relations), list(self.constraints), list(self.pins)
        )

    def with_pin(self, var: str, value: int) -> "CspInstance":
        q = self.copy()
        q.pins.append((var, value))
        return q

    def without_pins(self) -> "CspInstance":
        """Pins turned into ordinary unary constant constraints."""
        q = CspInstance(self.domain_size, list(self.variables), dict(self.relations), list(self.constraints))
        for v, a in self.pins:
            name = f"const_{a}"
            q.relations.setdefault(name, Relation(name, 1, frozenset({(a,)})))
            q.constraints.append(Constraint(name, (v,)))
        return q

    def satisfies(self, assignment: Sequence[int]) -> bool:
        idx = self.index()
        if len(assignment) != self.n:
            return False
        if any(not 0 <= a < self.domain_size for a in assignment):
            return False
        for v, a in self.pins:
            if assignment[idx[v]] != a:
                return False
        for c in self.constraints:
            if tuple(assignment[idx[v]] for v in c.scope) not in self.relations[c.relation].tuples:
                return False
        return True


@dataclass(frozen=True)
class OperationTable:
    """A k-ary operation on ``{0..t-1}`` given by its full table."""

    arity: int
    domain_size: int
    table: dict = field(hash=False, compare=True)
    name: str = ""

    def __post_init__(self):
        expected = self.domain_size**self.arity
        if len(self.table) != expected:
            raise ValueError(f"operation table has {len(self.table)} entries, expected {expected}")

    @classmethod
    def from_function(cls, fn: Callable, arity: int, t: int, name: str = "") -> "OperationTable":
        return cls(arity, t, {args: fn(*args) for args in itertools.product(range(t), repeat=arity)}, name)

    def __call__(self, *args):
        return self.table[tuple(args)]

    def is_idempotent(self) -> bool:
        return all(self.table[(a,) * self.arity] == a for a in range(self.domain_size))

    def is_majority(self) -> bool:
        if self.arity != 3:
            return False
        t = self.domain_size
        return all(
            self(a, a, b) == a and self(a, b, a) == a and self(b, a, a) == a for a in range(t) for b in range(t)
        )


def dual_discriminator(t: int) -> OperationTable:
    """nabla(x, y, z) = y if y == z else x."""
    return OperationTable.from_function(lambda x, y, z: y if y == z else x, 3, t, "dual_discriminator")


def affine_operation(p: int) -> OperationTable:
    """x - y + z mod p."""
    return OperationTable.from_function(lambda x, y, z: (x - y + z) % p, 3, p, f"affine_{p}")


def semilattice_from_order(order: Sequence[int]) -> OperationTable:
    """Binary min with respect to the total order listed smallest first."""
    rank = {a: r for r, a in enumerate(order)}
    return OperationTable.from_function(
        lambda x, y: x if rank[x] <= rank[y] else y, 2, len(order), "semilattice:" + ",".join(map(str, order))
    )


def check_polymorphism(op: OperationTable, r: Relation) -> bool:
    """True iff ``r`` is closed under the componentwise action of ``op``."""
    tuples = r.tuples
    if not tuples or r.arity == 0:
        return True
    t, k = op.domain_size, op.arity
    rows = np.array(sorted(tuples), dtype=np.int64)
    weights = t ** np.arange(r.arity, dtype=np.int64)
    codes = np.sort(rows @ weights)
    table = np.zeros((t,) * k, dtype=np.int64)
    for args, v in op.table.items():
        table[args] = v
    m = len(rows)
    # fix the first argument, broadcast the others: m^(k-1) images per step
    grids = np.meshgrid(*([np.arange(m)] * (k - 1)), indexing="ij")
    rest = [rows[g.reshape(-1)] for g in grids]
    for i in range(m):
        first = np.broadcast_to(rows[i], rest[0].shape) if rest else rows[i][None, :]
        img = table[(first, *rest)]
        found = codes[np.searchsorted(codes, img @ weights).clip(max=m - 1)]
        if np.any(found != img @ weights):
            return False
    return True


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p**0.5) + 1))


def detect_special_polymorphism(
    gamma: Iterable[Relation], kind: str, t: int, semilattice_cap: int = 4
) -> OperationTable | None:
    """Witnessing operation for ``kind`` in {dual_discriminator, affine, semilattice}, or None."""
    gamma = list(gamma)
    if kind == "dual_discriminator":
        candidates = [dual_discriminator(t)]
    elif kind == "affine":
        candidates = [affine_operation(t)] if _is_prime(t) else []
    elif kind == "semilattice":
        if t > semilattice_cap:
            return None
        candidates = (semilattice_from_order(perm) for perm in itertools.permutations(range(t)))
    else:
        raise ValueError(f"unknown polymorphism kind {kind!r}")
    for op in candidates:
        if all(check_polymorphism(op, r) for r in gamma):
            return op
    return None


# solution enumeration


def _check_cap(p: CspInstance, cap: int | None):
    if cap is not None and p.domain_size**p.n > cap:
        raise CapExceeded(p.domain_size**p.n, cap)


def iter_solutions(p: CspInstance, cap: int | None = DEFAULT_CAP):
    """Yield satisfying assignments (tuples in variable order) lexicographically."""
    _check_cap(p, cap)
    idx = p.index()
    n, t = p.n, p.domain_size
    allowed = [set(range(t)) for _ in range(n)]
    for v, a in p.pins:
        allowed[idx[v]] &= {a}
    # a constraint is checked once its last scope variable is assigned
    checks: list[list[tuple[tuple[int, ...], frozenset]]] = [[] for _ in range(n)]
    for c in p.constraints:
        pos = tuple(idx[v] for v in c.scope)
        tuples = p.relations[c.relation].tuples
        if not pos:
            if () not in tuples:
                return
            continue
        if len(set(pos)) == 1:
            allowed[pos[0]] &= {tup[0] for tup in tuples if len(set(tup)) == 1}
            continue
        checks[max(pos)].append((pos, tuples))
    if n == 0:
        yield ()
        return
    domains = [sorted(s) for s in allowed]
    assignment = [0] * n

    def rec(i):
        for a in domains[i]:
            assignment[i] = a
            if all(tuple(assignment[j] for j in pos) in tuples for pos, tuples in checks[i]):
                if i + 1 == n:
                    yield tuple(assignment)
                else:
                    yield from rec(i + 1)

    yield from rec(0)


def enumerate_solutions(p: CspInstance, cap: int | None = DEFAULT_CAP) -> list[tuple[int, ...]]:
    """All solutions, sorted.  Refuses when ``t^n`` exceeds ``cap``."""
    return list(iter_solutions(p, cap))


def first_solution(p: CspInstance, cap: int | None = DEFAULT_CAP) -> tuple[int, ...] | None:
    return next(iter_solutions(p, cap), None)


# binary networks and consistency


@dataclass
class BinaryNetwork:
    """Unary domains plus one relation per unordered variable pair (i < j).

    Pairs absent from ``rels`` are unconstrained beyond the domains.
    """

    domain_size: int
    variables: list[str]
    domains: list[set]
    rels: dict[tuple[int, int], set] = field(default_factory=dict)

    def rel(self, i: int, j: int) -> set:
        """Allowed (value_i, value_j) pairs, with domains applied."""
        if i < j:
            r = self.rels.get((i, j))
            if r is None:
                return {(a, b) for a in self.domains[i] for b in self.domains[j]}
            return set(r)
        r = self.rels.get((j, i))
        if r is None:
            return {(a, b) for a in self.domains[i] for b in self.domains[j]}
        return {(a, b) for b, a in r}

    def is_empty(self) -> bool:
        return any(not d for d in self.domains) or any(not r for r in self.rels.values())

    def copy(self) -> "BinaryNetwork":
        return BinaryNetwork(
            self.domain_size,
            list(self.variables),
            [set(d) for d in self.domains],
            {k: set(v) for k, v in self.rels.items()},
        )

    def to_instance(self) -> CspInstance:
        t = self.domain_size
        p = CspInstance(t, list(self.variables))
        for i, d in enumerate(self.domains):
            if d != set(range(t)):
                name = f"dom_{self.variables[i]}"
                p.relations[name] = Relation(name, 1, frozenset((a,) for a in d))
                p.constraints.append(Constraint(name, (self.variables[i],)))
        for (i, j), r in sorted(self.rels.items()):
            name = f"rel_{self.variables[i]}_{self.variables[j]}"
            p.relations[name] = Relation(name, 2, frozenset(r))
            p.constraints.append(Constraint(name, (self.variables[i], self.variables[j])))
        return p


def to_network(p: CspInstance) -> BinaryNetwork:
    """Binary network of an instance whose constraints have arity <= 2."""
    t = p.domain_size
    idx = p.index()
    net = BinaryNetwork(t, list(p.variables), [set(range(t)) for _ in p.variables])
    for v, a in p.pins:
        net.domains[idx[v]] &= {a}
    for c in p.constraints:
        tuples = p.relations[c.relation].tuples
        if len(c.scope) == 0:
            if () not in tuples:
                net.domains = [set() for _ in net.domains]
            continue
        if len(c.scope) > 2:
            raise ValueError(f"constraint {c} is not binary")
        pos = [idx[v] for v in c.scope]
        if len(pos) == 1 or pos[0] == pos[1]:
            net.domains[pos[0]] &= {tup[0] for tup in tuples if len(set(tup)) == 1}
            continue
        i, j = pos
        r = set(tuples) if i < j else {(b, a) for a, b in tuples}
        key = (min(i, j), max(i, j))
        net.rels[key] = net.rels[key] & r if key in net.rels else r
    _apply_domains(net)
    return net


def _apply_domains(net: BinaryNetwork):
    for (i, j), r in net.rels.items():
        net.rels[(i, j)] = {(a, b) for a, b in r if a in net.domains[i] and b in net.domains[j]}


def arc_consistency_network(net: BinaryNetwork) -> BinaryNetwork | None:
    """AC-3 to fixpoint; None if some domain or relation empties."""
    net = net.copy()
    _apply_domains(net)
    arcs = sorted(net.rels)
    queue = list(arcs)
    queued = set(queue)
    incident: dict[int, list[tuple[int, int]]] = {}
    for i, j in arcs:
        incident.setdefault(i, []).append((i, j))
        incident.setdefault(j, []).append((i, j))
    while queue:
        i, j = queue.pop(0)
        queued.discard((i, j))
        r = net.rels[(i, j)]
        changed = []
        for var, pos in ((i, 0), (j, 1)):
            supported = {tup[pos] for tup in r}
            if not net.domains[var] <= supported:
                net.domains[var] &= supported
                changed.append(var)
        if not r or any(not net.domains[v] for v in (i, j)):
            return None
        for var in changed:
            for arc in incident[var]:
                net.rels[arc] = {
                    (a, b) for a, b in net.rels[arc] if a in net.domains[arc[0]] and b in net.domains[arc[1]]
                }
                if not net.rels[arc]:
                    return None
                if arc not in queued:
                    queue.append(arc)
                    queued.add(arc)
    if any(not d for d in net.domains):
        return None
    return net


def arc_consistency(p: CspInstance) -> CspInstance | None:
    """Arc-consistent equivalent of a binary instance, or None when UNSAT is detected."""
    net = arc_consistency_network(to_network(p))
    return None if net is None else net.to_instance()


def path_consistency_network(net: BinaryNetwork) -> BinaryNetwork | None:
    """Strong 3-consistency (PC-2 style fixpoint over all triples).

    All pairs become explicitly constrained.  Returns None on an empty
    relation.  For majority-closed networks the result is globally consistent,
    so each pair relation equals the projection of the solution set.
    """
    net = arc_consistency_network(net)
    if net is None:
        return None
    n = len(net.variables)
    R = {(i, j): net.rel(i, j) for i in range(n) for j in range(n) if i != j}
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(i + 1, n):
                rij = R[(i, j)]
                new = set()
                for a, b in rij:
                    ok = True
                    for k in range(n):
                        if k == i or k == j:
                            continue
                        rik, rkj = R[(i, k)], R[(k, j)]
                        if not any((a, c) in rik and (c, b) in rkj for c in net.domains[k]):
                            ok = False
                            break
                    if ok:
                        new.add((a, b))
                if new != rij:
                    if not new:
                        return None
                    changed = True
                    R[(i, j)] = new
                    R[(j, i)] = {(b, a) for a, b in new}
        for i in range(n):
            dom = {a for a in net.domains[i] if all(any(x == a for x, _ in R[(i, j)]) for j in range(n) if j != i)}
            if dom != net.domains[i]:
                if not dom:
                    return None
                net.domains[i] = dom
                changed = True
                for j in range(n):
                    if j != i:
                        R[(i, j)] = {(a, b) for a, b in R[(i, j)] if a in dom}
                        R[(j, i)] = {(b, a) for a, b in R[(i, j)]}
    out = BinaryNetwork(net.domain_size, list(net.variables), net.domains, {})
    for i in range(n):
        for j in range(i + 1, n):
            out.rels[(i, j)] = R[(i, j)]
    return out


# text format

_REL = re.compile(r"^relation\s+(\w+)\s+arity\s+(\d+)\s*\{(.*)\}\s*$")
_CON = re.compile(r"^constraint\s+(\w+)\s*\((.*)\)\s*$")
_TUPLE = re.compile(r"\(([^()]*)\)")


def parse_instance(text: str) -> CspInstance:
    """Parse the line-oriented instance format (``#`` starts a comment)."""
    t = None
    variables: list[str] = []
    relations: dict[str, Relation] = {}
    constraints: list[Constraint] = []
    pins: list[tuple[str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            head = line.split()[0]
            if head == "domain":
                t = int(line.split()[1])
                if t < 1:
                    raise ParseError("domain size must be positive")
            elif head == "vars":
                variables.extend(line.split()[1:])
            elif head == "relation":
                m = _REL.match(line)
                if not m:
                    raise ParseError("bad relation line")
                name, arity, body = m.group(1), int(m.group(2)), m.group(3)
                tuples = set()
                for tm in _TUPLE.finditer(body):
                    inner = tm.group(1).strip()
                    tuples.add(tuple(int(x) for x in inner.split(",")) if inner else ())
                if _TUPLE.sub("", body).strip():
                    raise ParseError("stray text in relation body")
                relations[name] = Relation(name, arity, frozenset(tuples))
            elif head == "constraint":
                m = _CON.match(line)
                if not m:
                    raise ParseError("bad constraint line")
                scope = tuple(s.strip() for s in m.group(2).split(",") if s.strip())
                constraints.append(Constraint(m.group(1), scope))
            elif head == "pin":
                parts = line.split()
                if len(parts) != 3:
                    raise ParseError("bad pin line")
                pins.append((parts[1], int(parts[2])))
            else:
                raise ParseError(f"unknown directive {head!r}")
        except (ValueError, IndexError) as exc:
            if isinstance(exc, ParseError):
                raise ParseError(f"line {lineno}: {exc}") from None
            raise ParseError(f"line {lineno}: {exc}") from exc
    if t is None:
        raise ParseError("missing domain line")
    try:
        return CspInstance(t, variables, relations, constraints, pins)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def format_instance(p: CspInstance) -> str:
    lines = [f"domain {p.domain_size}", "vars " + " ".join(p.variables)]
    for r in p.relations.values():
        body = " ".join("(" + ",".join(map(str, t)) + ")" for t in r.sorted_tuples())
        lines.append(f"relation {r.name} arity {r.arity} {{ {body} }}")
    for c in p.constraints:
        lines.append(f"constraint {c.relation} ({', '.join(c.scope)})")
    for v, a in p.pins:
        lines.append(f"pin {v} {a}")
    return "\n".join(lines) + "\n"
