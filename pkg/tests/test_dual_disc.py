import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from combideal.csp import (
    Constraint,
    CspInstance,
    Relation,
    dual_discriminator,
    enumerate_solutions,
    path_consistency_network,
    to_network,
)
from combideal.dual_disc import (
    binarize,
    classify_binary,
    closure_violations,
    decide_dual_disc,
    dual_disc_groebner,
    eliminate_permutations,
    run_pipeline,
)
from combideal.encode import variety_points
from combideal.engines import oracle_member
from combideal.errors import EngineInapplicable
from combideal.groebner import check_buchberger_criterion
from combideal.polyring import Polynomial, parse_polynomial
from combideal.random_instances import random_f0

FAN = Relation("F", 2, frozenset({(0, 0), (0, 1), (1, 0)}))
SWAP = Relation("W", 2, frozenset({(0, 1), (1, 0)}))


def inst(t, variables, rels, scopes, pins=()):
    return CspInstance(t, variables, {r.name: r for r in rels}, [Constraint(n, s) for n, s in scopes], list(pins))


def test_classify_examples():
    assert classify_binary(Relation("C", 2, frozenset({(0, 0), (1, 0)}))).kind == "Complete"
    c = classify_binary(SWAP)
    assert c.kind == "Permutation" and c.pi_map() == {0: 1, 1: 0}
    c = classify_binary(FAN)
    assert (c.kind, c.a, c.b) == ("TwoFan", 0, 0)
    assert classify_binary(set()).kind == "Empty"
    odd = Relation("O", 2, frozenset({(0, 0), (1, 1), (2, 2), (0, 1)}))
    assert classify_binary(odd).kind == "NotDualDisc"


def test_binarize_examples():
    p = inst(2, ["x", "y"], [FAN], [("F", ("x", "y"))])
    assert binarize(p, dual_discriminator(2)).constraints == p.constraints
    one = Relation("T", 3, frozenset({(0, 1, 2)}))
    q = inst(3, ["x", "y", "z"], [one], [("T", ("x", "y", "z"))])
    b = binarize(q, dual_discriminator(3))
    assert len(b.constraints) == 3 and all(len(r.tuples) == 1 for r in b.relations.values())
    assert enumerate_solutions(b) == enumerate_solutions(q)


def test_binarize_rejects_non_majority():
    from combideal.csp import affine_operation

    p = inst(2, ["x", "y"], [FAN], [("F", ("x", "y"))])
    with pytest.raises(ValueError):
        binarize(p, affine_operation(2))


def test_swap_elimination():
    p = inst(2, ["x", "y"], [SWAP], [("W", ("x", "y"))])
    f1, q = eliminate_permutations(parse_polynomial("y", ["x", "y"]), p)
    assert q.variables == ["x"]
    assert f1 == parse_polynomial("1 - x", ["x"])


def test_chain_of_permutations():
    shift = Relation("S", 2, frozenset({(0, 1), (1, 2), (2, 0)}))
    p = inst(3, ["x", "y", "z"], [shift], [("S", ("x", "y")), ("S", ("y", "z"))])
    f = parse_polynomial("z - x - 2", ["x", "y", "z"])
    f1, q = eliminate_permutations(f, p)
    assert q.variables == ["x"]
    assert oracle_member(f1, q) == oracle_member(f, p)


def test_two_fan_basis():
    p = inst(2, ["x", "y"], [FAN], [("F", ("x", "y"))])
    gb = dual_disc_groebner(p)
    names = ["x", "y"]
    assert set(gb.generators) == {parse_polynomial(s, names) for s in ("x*y", "x^2 - x", "y^2 - y")}
    assert check_buchberger_criterion(gb)
    assert variety_points(gb.generators, 2) == enumerate_solutions(p)


def test_complete_only_basis():
    c = Relation("C", 2, frozenset({(0, 1), (0, 2), (2, 1), (2, 2)}))
    p = inst(3, ["x", "y"], [c], [("C", ("x", "y"))])
    gb = dual_disc_groebner(p)
    assert set(gb.generators) == {parse_polynomial(s, ["x", "y"]) for s in ("x^2 - 2*x", "y^2 - 3*y + 2")}


def test_unsat_gives_one():
    p = inst(2, ["x"], [], [], pins=[("x", 0), ("x", 1)])
    assert dual_disc_groebner(p).generators == [Polynomial.constant(1, 1)]


def test_not_dual_disc_rejected():
    odd = Relation("O", 2, frozenset({(0, 0), (1, 1), (2, 2), (0, 1)}))
    p = inst(3, ["x", "y"], [odd], [("O", ("x", "y"))])
    with pytest.raises(EngineInapplicable):
        run_pipeline(p)


def random_nabla_instance(seed):
    from combideal.random_instances import instance_for_engine

    return instance_for_engine(random.Random(seed), "dualdisc")


@given(st.integers(0, 10**6))
def test_pipeline_basis_properties(seed):
    p = random_nabla_instance(seed)
    res = run_pipeline(p)
    sols = enumerate_solutions(p)
    if res.network is None:
        assert not sols
        return
    from combideal.dual_disc import network_groebner

    gb = network_groebner(res.network)
    assert check_buchberger_criterion(gb)
    assert closure_violations(res.network) == []
    assert len(variety_points(gb.generators, p.domain_size)) == len(
        enumerate_solutions(res.network.to_instance())
    )


@given(st.integers(0, 10**6))
def test_permutation_free_basis_variety(seed):
    p = random_nabla_instance(seed)
    q = binarize(p, dual_discriminator(p.domain_size))
    net = path_consistency_network(to_network(q))
    try:
        gb = dual_disc_groebner(q)
    except EngineInapplicable:
        return
    assert check_buchberger_criterion(gb)
    assert variety_points(gb.generators, p.domain_size) == enumerate_solutions(p)
    assert net is not None or gb.is_unit()


@given(st.integers(0, 10**6))
def test_decision_matches_oracle(seed):
    rng = random.Random(seed)
    p = random_nabla_instance(seed)
    f = random_f0(rng, p)
    assert decide_dual_disc(f, p) == oracle_member(f, p)


@given(st.integers(0, 10**6))
def test_elimination_preserves_membership(seed):
    rng = random.Random(seed)
    t = rng.choice((2, 3))
    variables = [f"x{i}" for i in range(rng.randint(2, 4))]
    rels, scopes = {}, []
    for k in range(rng.randint(1, 4)):
        dom = rng.sample(range(t), rng.randint(1, t))
        img = rng.sample(range(t), len(dom))
        r = Relation(f"P{k}", 2, frozenset(zip(dom, img)))
        rels[r.name] = r
        scopes.append((r.name, tuple(rng.sample(variables, 2))))
    p = CspInstance(t, variables, rels, [Constraint(n, s) for n, s in scopes])
    f = random_f0(rng, p)
    f1, q = eliminate_permutations(f, p)
    assert oracle_member(f, p) == oracle_member(f1, q)
