import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from combideal.csp import (
    Constraint,
    CspInstance,
    OperationTable,
    Relation,
    affine_operation,
    arc_consistency,
    arc_consistency_network,
    check_polymorphism,
    detect_special_polymorphism,
    dual_discriminator,
    enumerate_solutions,
    format_instance,
    parse_instance,
    path_consistency_network,
    semilattice_from_order,
    to_network,
)
from combideal.dual_disc import classify_binary
from combideal.errors import CapExceeded, ParseError
from combideal.random_instances import close_under, random_instance

LE2 = Relation("LE", 2, frozenset({(0, 0), (0, 1), (1, 1)}))
NAE = Relation("N", 3, frozenset(set(itertools.product((0, 1), repeat=3)) - {(0, 0, 0), (1, 1, 1)}))


def single(rel, scope, t=2, variables=None, pins=()):
    variables = variables or sorted(set(scope))
    return CspInstance(t, variables, {rel.name: rel}, [Constraint(rel.name, scope)], list(pins))


def test_enumerate_single_tuple():
    r = Relation("R", 2, frozenset({(0, 1)}))
    assert enumerate_solutions(single(r, ("x", "y"))) == [(0, 1)]


def test_enumerate_nae_has_six_solutions():
    assert len(enumerate_solutions(single(NAE, ("x", "y", "z")))) == 6


def test_conflicting_pins_have_no_solutions():
    p = CspInstance(2, ["x"], pins=[("x", 0), ("x", 1)])
    assert enumerate_solutions(p) == []


def test_enumeration_cap_names_the_cap():
    p = CspInstance(3, [f"v{i}" for i in range(5)])
    with pytest.raises(CapExceeded) as info:
        enumerate_solutions(p, cap=100)
    assert info.value.cap == 100 and info.value.size == 243


def test_polymorphism_examples():
    full = Relation("F", 2, frozenset(itertools.product(range(3), repeat=2)))
    assert check_polymorphism(dual_discriminator(3), full)
    assert check_polymorphism(dual_discriminator(2), LE2)
    assert check_polymorphism(affine_operation(2), Relation("X", 2, frozenset({(0, 1), (1, 0)})))
    assert not check_polymorphism(affine_operation(2), LE2)


def test_detect_examples():
    found = detect_special_polymorphism([LE2], "semilattice", 2)
    assert found is not None and all(check_polymorphism(found, r) for r in [LE2])
    xor = Relation("X", 2, frozenset({(0, 1), (1, 0)}))
    assert detect_special_polymorphism([xor], "affine", 2) is not None
    for kind in ("dual_discriminator", "affine", "semilattice"):
        assert detect_special_polymorphism([NAE], kind, 2) is None


def test_detect_semilattice_respects_cap():
    full = Relation("F", 1, frozenset((a,) for a in range(5)))
    assert detect_special_polymorphism([full], "semilattice", 5, semilattice_cap=4) is None


def test_majority_flags():
    assert dual_discriminator(3).is_majority()
    assert not affine_operation(3).is_majority()
    assert semilattice_from_order([2, 0, 1]).is_idempotent()


def test_arc_consistency_chain_with_pin():
    p = CspInstance(
        2, ["x", "y", "z"], {"LE": LE2}, [Constraint("LE", ("x", "y")), Constraint("LE", ("y", "z"))], [("z", 0)]
    )
    net = arc_consistency_network(to_network(p))
    assert net.domains == [{0}, {0}, {0}]
    assert enumerate_solutions(arc_consistency(p)) == enumerate_solutions(p)


def test_arc_consistency_unchanged_and_unsat():
    p = single(LE2, ("x", "y"))
    net = arc_consistency_network(to_network(p))
    assert net.domains == [{0, 1}, {0, 1}] and net.rels[(0, 1)] == set(LE2.tuples)
    q = CspInstance(2, ["x"], pins=[("x", 0), ("x", 1)])
    assert arc_consistency(q) is None


def test_parse_format_round_trip():
    text = """
    domain 3
    vars x y z
    relation R arity 2 { (0,1) (1,2) (2,2) }   # trailing comment
    constraint R (x, y)
    constraint R (y, z)
    pin z 2
    """
    p = parse_instance(text)
    assert p.domain_size == 3 and p.variables == ["x", "y", "z"] and p.pins == [("z", 2)]
    assert enumerate_solutions(p) == [(0, 1, 2), (1, 2, 2), (2, 2, 2)]
    assert parse_instance(format_instance(p)) == p


@pytest.mark.parametrize(
    "text",
    [
        "vars x",
        "domain 2\nvars x\nrelation R arity 2 { (0,1) }\nconstraint R (x)",
        "domain 2\nvars x\nconstraint S (x)",
        "domain 2\nvars x\nrelation R arity 1 { (3) }",
        "domain 2\nvars x\nfrobnicate",
        "domain two",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_instance(text)


@given(st.integers(0, 10**6))
def test_consistency_never_changes_solutions(seed):
    rng = random.Random(seed)
    t = rng.choice((2, 3))
    p = random_instance(rng, t, rng.randint(2, 4))
    p.constraints = [c for c in p.constraints if len(c.scope) <= 2]
    sols = enumerate_solutions(p)
    ac = arc_consistency(p)
    assert (ac is None and not sols) or (ac is not None and enumerate_solutions(ac) == sols)
    pc = path_consistency_network(to_network(p))
    if pc is None:
        assert not sols
    else:
        assert enumerate_solutions(pc.to_instance()) == sols


@given(st.integers(0, 10**6), st.integers(0, 2))
def test_idempotent_ops_preserve_singletons(seed, a):
    rng = random.Random(seed)
    k = rng.randint(1, 3)
    table = {args: rng.randrange(3) for args in itertools.product(range(3), repeat=k)}
    for x in range(3):
        table[(x,) * k] = x
    op = OperationTable(k, 3, table)
    assert op.is_idempotent()
    assert check_polymorphism(op, Relation("S", 2, frozenset({(a, a)})))


@given(st.integers(0, 10**6))
def test_nabla_closed_projections_are_classifiable(seed):
    rng = random.Random(seed)
    t = rng.choice((2, 3))
    nabla = dual_discriminator(t)
    space = list(itertools.product(range(t), repeat=3))
    r = Relation("R", 3, close_under(nabla, rng.sample(space, rng.randint(1, 6))))
    assert check_polymorphism(nabla, r)
    for i, j in itertools.combinations(range(3), 2):
        assert classify_binary(r.project((i, j))).kind in ("Complete", "Permutation", "TwoFan")


@given(st.integers(0, 10**6))
def test_solutions_satisfy(seed):
    rng = random.Random(seed)
    p = random_instance(rng, rng.choice((2, 3)), rng.randint(1, 4))
    sols = set(enumerate_solutions(p))
    for pt in itertools.product(range(p.domain_size), repeat=p.n):
        assert p.satisfies(pt) == (pt in sols)
