"""Instance transformations that preserve the membership answer.

* constant elimination: pins are removed by merging pinned variables and
  multiplying ``f0`` by a selector polynomial;
* pp-definitions: each constraint over a defined relation is replaced by the
  body of its primitive-positive formula, with fresh existential variables;
* pp-interpretations: every variable over ``E`` becomes ``l`` variables over
  ``D`` and ``f0`` is composed with an interpolant of the encoding map;
* witness search by self-reduction with pins.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .csp import Constraint, CspInstance, Relation
from .encode import interpolate_map
from .errors import ParseError
from .polyring import Polynomial


# constant elimination


@dataclass
class ConstantElimination:
    """Result of :func:`eliminate_constants`.

    ``member_immediate`` is set when some variable carries two different pins:
    the instance has no solutions and every polynomial is a member.
    ``merged`` is ``f0`` after pinned variables are identified (``f0'``) and
    ``selector`` the factor ``prod_a prod_{b != a} (x_a - b)``.
    """

    member_immediate: bool
    fstar: Polynomial | None = None
    instance: CspInstance | None = None
    merged: Polynomial | None = None
    selector: Polynomial | None = None
    pinned_values: tuple[int, ...] = ()
    variable_map: dict[str, str] = field(default_factory=dict)


def eliminate_constants(f0: Polynomial, p: CspInstance) -> ConstantElimination:
    """Remove pins; ``f0`` is in I(P) iff ``fstar`` is in I(P*)."""
    if not p.pins:
        return ConstantElimination(False, f0, p.copy(), f0, Polynomial.constant(1, f0.nvars), (), {v: v for v in p.variables})
    pinned: dict[str, int] = {}
    for v, a in p.pins:
        if pinned.get(v, a) != a:
            return ConstantElimination(True)
        pinned[v] = a
    values = tuple(sorted(set(pinned.values())))
    fresh = {a: f"pin__{a}" for a in values}
    clash = set(fresh.values()) & set(p.variables)
    if clash:
        raise ValueError(f"variable names collide with fresh pin names: {sorted(clash)}")
    new_vars = [v for v in p.variables if v not in pinned] + [fresh[a] for a in values]
    vmap = {v: fresh[pinned[v]] if v in pinned else v for v in p.variables}
    constraints = [Constraint(c.relation, tuple(vmap[v] for v in c.scope)) for c in p.constraints]
    pstar = CspInstance(p.domain_size, new_vars, dict(p.relations), constraints)
    pos = {v: i for i, v in enumerate(new_vars)}
    n = len(new_vars)
    merged = f0.reorder([pos[vmap[v]] for v in p.variables], n)
    selector = Polynomial.constant(1, n)
    for a in values:
        x = Polynomial.variable(pos[fresh[a]], n)
        for b in range(p.domain_size):
            if b != a:
                selector = selector * (x - b)
    return ConstantElimination(False, selector * merged, pstar, merged, selector, values, vmap)


# pp-definitions


@dataclass(frozen=True)
class PPDefinition:
    """``target(params) := exists evars : atom & atom & ...``.

    Each atom is ``(relation_name, args)``; the relation name ``"="`` denotes
    equality of its two arguments.
    """

    target: str
    params: tuple[str, ...]
    evars: tuple[str, ...]
    atoms: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self):
        known = set(self.params) | set(self.evars)
        if len(known) != len(self.params) + len(self.evars):
            raise ValueError(f"repeated variable in definition of {self.target}")
        for rel, args in self.atoms:
            if rel == "=" and len(args) != 2:
                raise ValueError("equality atom needs two arguments")
            for a in args:
                if a not in known:
                    raise ValueError(f"unbound variable {a!r} in definition of {self.target}")

    @property
    def arity(self) -> int:
        return len(self.params)

    def defined_relation(self, gamma: Mapping[str, Relation], t: int) -> Relation:
        """The relation this formula defines, by brute force over D."""
        names = list(self.params) + list(self.evars)
        out = set()
        for values in itertools.product(range(t), repeat=len(names)):
            env = dict(zip(names, values))
            if all(_atom_holds(rel, args, env, gamma) for rel, args in self.atoms):
                out.add(tuple(env[v] for v in self.params))
        return Relation(self.target, self.arity, frozenset(out))


def _atom_holds(rel, args, env, gamma):
    if rel == "=":
        return env[args[0]] == env[args[1]]
    return tuple(env[a] for a in args) in gamma[rel].tuples


_DEF = re.compile(r"^\s*define\s+(\w+)\s*\(([^)]*)\)\s*:=\s*(.*)$")
_ATOM = re.compile(r"^(\w+)\s*\(([^)]*)\)$")


def parse_pp_definition(text: str) -> PPDefinition:
    """Parse ``define R(x,y) := exists u : S(x,u) & S(u,y) & x=x``."""
    m = _DEF.match(text.strip())
    if not m:
        raise ParseError(f"bad definition {text!r}")
    target = m.group(1)
    params = tuple(s.strip() for s in m.group(2).split(",") if s.strip())
    body = m.group(3).strip()
    evars: tuple[str, ...] = ()
    if body.startswith("exists"):
        if ":" not in body:
            raise ParseError("missing ':' after existential variables")
        head, body = body.split(":", 1)
        evars = tuple(v for v in re.split(r"[\s,]+", head[len("exists") :].strip()) if v)
    atoms = []
    for part in body.split("&"):
        part = part.strip()
        if not part:
            raise ParseError(f"empty conjunct in {text!r}")
        if "=" in part and "(" not in part:
            lhs, rhs = (s.strip() for s in part.split("=", 1))
            atoms.append(("=", (lhs, rhs)))
            continue
        am = _ATOM.match(part)
        if not am:
            raise ParseError(f"bad atom {part!r}")
        atoms.append((am.group(1), tuple(s.strip() for s in am.group(2).split(",") if s.strip())))
    try:
        return PPDefinition(target, params, evars, tuple(atoms))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def parse_pp_definitions(text: str) -> dict[str, PPDefinition]:
    defs = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            d = parse_pp_definition(line)
            defs[d.target] = d
    return defs


class _UnionFind:
    def __init__(self):
        self.parent: dict[str, str] = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b, rank):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        # keep the representative with the smaller rank (original variables first)
        if rank[rb] < rank[ra]:
            ra, rb = rb, ra
        self.parent[rb] = ra


def apply_pp_definition(
    p: CspInstance, defs: Mapping[str, PPDefinition], gamma: Mapping[str, Relation]
) -> tuple[CspInstance, dict[str, str]]:
    """Rewrite an instance over defined relations into one over ``gamma``.

    Returns the new instance and the renaming of original variables (equality
    atoms can identify two original variables).  A polynomial over the
    original variables is transported with :func:`rename_polynomial`.
    """
    order: list[str] = list(p.variables)
    atoms: list[tuple[str, tuple[str, ...]]] = []
    for ci, c in enumerate(p.constraints):
        d = defs.get(c.relation)
        if d is None:
            raise ValueError(f"no pp-definition for relation {c.relation!r}")
        if len(c.scope) != d.arity:
            raise ValueError(f"arity mismatch for {c.relation}")
        env = dict(zip(d.params, c.scope))
        for j, u in enumerate(d.evars):
            name = f"{u}__c{ci}__e{j}"
            if name in env.values() or name in p.variables:
                raise ValueError(f"fresh variable {name} collides with an existing name")
            env[u] = name
            order.append(name)
        for rel, args in d.atoms:
            if rel != "=" and rel not in gamma:
                raise ValueError(f"relation {rel!r} is not in the target language")
            atoms.append((rel, tuple(env[a] for a in args)))
    rank = {v: i for i, v in enumerate(order)}
    uf = _UnionFind()
    for v in order:
        uf.find(v)
    for rel, args in atoms:
        if rel == "=":
            uf.union(args[0], args[1], rank)
    new_vars = [v for v in order if uf.find(v) == v]
    constraints = []
    seen = set()
    for rel, args in atoms:
        if rel == "=":
            continue
        c = Constraint(rel, tuple(uf.find(a) for a in args))
        if c not in seen:
            seen.add(c)
            constraints.append(c)
    relations = {name: gamma[name] for name in dict.fromkeys(c.relation for c in constraints)}
    pins = [(uf.find(v), a) for v, a in p.pins]
    out = CspInstance(p.domain_size, new_vars, relations, constraints, pins)
    renaming = {v: uf.find(v) for v in p.variables}
    return out, renaming


def rename_polynomial(f: Polynomial, old_vars: Sequence[str], renaming: Mapping[str, str], new_vars: Sequence[str]) -> Polynomial:
    pos = {v: i for i, v in enumerate(new_vars)}
    return f.reorder([pos[renaming[v]] for v in old_vars], len(new_vars))


# pp-interpretations


@dataclass
class PPInterpretation:
    """An encoding of a language over ``E`` by ``l``-tuples over ``D``.

    ``carrier`` is ``F`` (arity ``l``), ``pi`` maps each tuple of ``F`` onto
    ``E``, and ``preimages[name]`` is the ``l*k``-ary preimage of each
    ``k``-ary relation on ``E``.  Optional ``*_formula`` entries express the
    carrier or a preimage as a conjunction of ``gamma`` atoms over tuple
    positions; when present, constraints are emitted in that form.
    """

    dim: int
    domain_size: int
    carrier: Relation
    pi: dict
    preimages: dict[str, Relation]
    gamma: dict[str, Relation] = field(default_factory=dict)
    carrier_formula: list[tuple[str, tuple[int, ...]]] | None = None
    preimage_formulas: dict[str, list[tuple[str, tuple[int, ...]]]] = field(default_factory=dict)

    @property
    def target_size(self) -> int:
        return len(set(self.pi.values()))

    def validate(self, delta: Mapping[str, Relation]) -> None:
        """Raise ``ValueError`` unless ``pi`` is onto and every preimage is exact."""
        if set(self.pi) != set(self.carrier.tuples):
            raise ValueError("pi must be defined exactly on the carrier")
        e_size = max(self.pi.values()) + 1
        if set(self.pi.values()) != set(range(e_size)):
            raise ValueError("pi is not onto {0..|E|-1}")
        F = self.carrier.sorted_tuples()
        for name, rel in delta.items():
            want = set()
            for us in itertools.product(F, repeat=rel.arity):
                if tuple(self.pi[u] for u in us) in rel.tuples:
                    want.add(tuple(x for u in us for x in u))
            got = self.preimages.get(name)
            if got is None or set(got.tuples) != want:
                raise ValueError(f"preimage of {name} does not match pi")
        if self.carrier_formula is not None:
            if _formula_relation(self.carrier_formula, self.dim, self.gamma, self.domain_size) != set(F):
                raise ValueError("carrier formula does not define the carrier")
        for name, formula in self.preimage_formulas.items():
            k = delta[name].arity
            defined = _formula_relation(formula, self.dim * k, self.gamma, self.domain_size)
            # the formula only needs to agree on F^k, the carrier constraints do the rest
            inside = {
                tup
                for tup in defined
                if all(tup[i * self.dim : (i + 1) * self.dim] in self.carrier.tuples for i in range(k))
            }
            if inside != set(self.preimages[name].tuples):
                raise ValueError(f"formula for the preimage of {name} is wrong on the carrier")

    def interpolant(self, variables: Sequence[int], nvars: int) -> Polynomial:
        F = self.carrier.sorted_tuples()
        return interpolate_map(F, [self.pi[u] for u in F], self.domain_size, variables, nvars)


def _formula_relation(formula, width, gamma, t):
    out = set()
    for tup in itertools.product(range(t), repeat=width):
        if all(tuple(tup[i] for i in pos) in gamma[rel].tuples for rel, pos in formula):
            out.add(tup)
    return out


def apply_pp_interpretation(
    f0: Polynomial, p: CspInstance, interp: PPInterpretation
) -> tuple[Polynomial, CspInstance]:
    """Rewrite an instance on ``E`` into one on ``D``; membership is preserved.

    Variable ``x`` becomes ``x__1 .. x__l``.  Pins ``x = e`` become the
    constraint "``(x__1..x__l)`` lies in ``pi^{-1}(e)``".
    """
    ell = interp.dim
    names = {v: [f"{v}__{k + 1}" for k in range(ell)] for v in p.variables}
    new_vars = [w for v in p.variables for w in names[v]]
    relations: dict[str, Relation] = {}
    constraints: list[Constraint] = []

    def emit(rel: Relation, scope):
        relations.setdefault(rel.name, rel)
        c = Constraint(rel.name, tuple(scope))
        if c not in constraints:
            constraints.append(c)

    for v in p.variables:
        if interp.carrier_formula is not None:
            for rel, pos in interp.carrier_formula:
                emit(interp.gamma[rel], [names[v][i] for i in pos])
        else:
            emit(interp.carrier, names[v])
    for c in p.constraints:
        scope = [w for v in c.scope for w in names[v]]
        formula = interp.preimage_formulas.get(c.relation)
        if formula is not None:
            for rel, pos in formula:
                emit(interp.gamma[rel], [scope[i] for i in pos])
        else:
            emit(interp.preimages[c.relation], scope)
    for v, e in p.pins:
        name = f"{interp.carrier.name}_at_{e}"
        rel = Relation(name, ell, frozenset(u for u, val in interp.pi.items() if val == e))
        emit(rel, names[v])
    out = CspInstance(interp.domain_size, new_vars, relations, constraints)
    n = len(new_vars)
    images = [interp.interpolant([new_vars.index(w) for w in names[v]], n) for v in p.variables]
    return f0.substitute(images, n), out


def order_interpretation() -> tuple[PPInterpretation, dict[str, Relation]]:
    """The chain 0<=1<=2 on E={0,1,2} encoded by pairs a<=b over D={0,1}.

    Returns the interpretation and the language ``{R_E}`` it interprets.
    """
    R_D = Relation("R_D", 2, frozenset({(0, 0), (0, 1), (1, 1)}))
    R_E = Relation("R_E", 2, frozenset((a, b) for a in range(3) for b in range(3) if a <= b))
    F = Relation("F", 2, frozenset({(0, 0), (0, 1), (1, 1)}))
    pi = {(0, 0): 0, (0, 1): 1, (1, 1): 2}
    pre = {
        (u + w)
        for u in F.tuples
        for w in F.tuples
        if pi[u] <= pi[w]
    }
    interp = PPInterpretation(
        dim=2,
        domain_size=2,
        carrier=F,
        pi=pi,
        preimages={"R_E": Relation("R_E_pre", 4, frozenset(pre))},
        gamma={"R_D": R_D},
        carrier_formula=[("R_D", (0, 1))],
        preimage_formulas={"R_E": [("R_D", (0, 2)), ("R_D", (1, 3))]},
    )
    return interp, {"R_E": R_E}


# witness search


def search_witness(
    f0: Polynomial,
    p: CspInstance,
    decide: Callable[[Polynomial, CspInstance], bool],
    counter: list | None = None,
) -> tuple[int, ...] | None:
    """Solution of ``p`` where ``f0`` does not vanish, or None when ``f0`` is a member.

    Variables are fixed one at a time by adding pins and asking ``decide``
    whether ``f0`` is still a non-member; at most ``|X|*|D| + 1`` calls.
    """
    calls = 0

    def ask(q):
        nonlocal calls
        calls += 1
        return decide(f0, q)

    try:
        if ask(p):
            return None
        current = p
        assignment = []
        for v in p.variables:
            for a in range(p.domain_size):
                q = current.with_pin(v, a)
                if a == p.domain_size - 1 or not ask(q):
                    # the last value must work if all others made f0 a member
                    current = q
                    assignment.append(a)
                    break
        return tuple(assignment)
    finally:
        if counter is not None:
            counter.append(calls)
