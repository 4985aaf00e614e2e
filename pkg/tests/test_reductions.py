import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from combideal.csp import Constraint, CspInstance, Relation, enumerate_solutions
from combideal.engines import oracle_member
from combideal.errors import ParseError
from combideal.polyring import Polynomial, parse_polynomial
from combideal.random_instances import random_f0, random_instance
from combideal.reductions import (
    PPInterpretation,
    apply_pp_definition,
    apply_pp_interpretation,
    eliminate_constants,
    order_interpretation,
    parse_pp_definition,
    parse_pp_definitions,
    rename_polynomial,
    search_witness,
)

LE = Relation("S", 2, frozenset({(0, 0), (0, 1), (1, 1)}))


def test_conflicting_pins_member_immediately():
    p = CspInstance(2, ["x"], pins=[("x", 0), ("x", 1)])
    assert eliminate_constants(Polynomial.variable(0, 1), p).member_immediate


def test_no_pins_is_identity():
    p = CspInstance(2, ["x", "y"], {"S": LE}, [Constraint("S", ("x", "y"))])
    f = parse_polynomial("x*y + 1", ["x", "y"])
    res = eliminate_constants(f, p)
    assert res.fstar == f and res.instance == p


def test_single_pin_example():
    p = CspInstance(2, ["x", "y"], pins=[("y", 1)])
    f = parse_polynomial("x*y", ["x", "y"])
    res = eliminate_constants(f, p)
    assert res.instance.variables == ["x", "pin__1"] and not res.instance.pins
    assert res.fstar == parse_polynomial("p * (x*p)", ["x", "p"])
    assert res.fstar.degree() - res.merged.degree() == 1
    assert oracle_member(f, p) == oracle_member(res.fstar, res.instance)


def test_parse_pp_definition():
    d = parse_pp_definition("define R(x,y) := exists u : S(x,u) & S(u,y) & x=x")
    assert d.params == ("x", "y") and d.evars == ("u",)
    assert d.atoms == (("S", ("x", "u")), ("S", ("u", "y")), ("=", ("x", "x")))
    with pytest.raises(ParseError):
        parse_pp_definition("define R(x) := S(x,v)")


def test_plain_substitution():
    defs = parse_pp_definitions("define R(x,y) := S(y,x)")
    p = CspInstance(2, ["a", "b"], {"R": Relation("R", 2, frozenset())}, [Constraint("R", ("a", "b"))])
    q, ren = apply_pp_definition(p, defs, {"S": LE})
    assert q.constraints == [Constraint("S", ("b", "a"))] and ren == {"a": "a", "b": "b"}


def test_existential_composition():
    d = parse_pp_definition("define R(x,y) := exists u : S(x,u) & S(u,y)")
    R = d.defined_relation({"S": LE}, 2)
    p = CspInstance(2, ["a", "b", "c"], {"R": R}, [Constraint("R", ("a", "b")), Constraint("R", ("b", "c"))])
    q, ren = apply_pp_definition(p, {"R": d}, {"S": LE})
    assert q.variables == ["a", "b", "c", "u__c0__e0", "u__c1__e0"]
    proj = sorted({s[:3] for s in enumerate_solutions(q)})
    assert proj == enumerate_solutions(p)


def test_equality_definition_merges():
    d = parse_pp_definition("define EQ(x,y) := x=y")
    p = CspInstance(2, ["a", "b"], {"EQ": d.defined_relation({}, 2)}, [Constraint("EQ", ("a", "b"))])
    q, ren = apply_pp_definition(p, {"EQ": d}, {})
    assert q.variables == ["a"] and q.constraints == [] and ren == {"a": "a", "b": "a"}
    f = parse_polynomial("a - b", ["a", "b"])
    assert rename_polynomial(f, p.variables, ren, q.variables).is_zero()


def test_undefined_relation_rejected():
    p = CspInstance(2, ["a"], {"T": Relation("T", 1, frozenset({(0,)}))}, [Constraint("T", ("a",))])
    with pytest.raises(ValueError):
        apply_pp_definition(p, {}, {"S": LE})


def test_order_interpretation_constraints():
    interp, delta = order_interpretation()
    interp.validate(delta)
    p = CspInstance(3, ["x", "y", "z"], dict(delta), [Constraint("R_E", ("x", "y")), Constraint("R_E", ("y", "z"))])
    f0 = parse_polynomial("x - z", ["x", "y", "z"])
    f1, q = apply_pp_interpretation(f0, p, interp)
    assert q.variables == ["x__1", "x__2", "y__1", "y__2", "z__1", "z__2"]
    scopes = [c.scope for c in q.constraints]
    assert scopes == [
        ("x__1", "x__2"), ("y__1", "y__2"), ("z__1", "z__2"),
        ("x__1", "y__1"), ("x__2", "y__2"), ("y__1", "z__1"), ("y__2", "z__2"),
    ]
    assert all(c.relation == "R_D" for c in q.constraints)
    assert f1.degree() <= interp.dim * 3
    assert oracle_member(f0, p) == oracle_member(f1, q)


def test_identity_interpretation():
    F = Relation("F", 1, frozenset({(0,), (1,)}))
    interp = PPInterpretation(1, 2, F, {(0,): 0, (1,): 1}, {"S": Relation("S_pre", 2, LE.tuples)})
    interp.validate({"S": LE})
    p = CspInstance(2, ["a", "b"], {"S": LE}, [Constraint("S", ("a", "b"))])
    f1, q = apply_pp_interpretation(parse_polynomial("a", ["a", "b"]), p, interp)
    assert enumerate_solutions(q) == enumerate_solutions(p)
    assert f1 == Polynomial.variable(0, 2)


def test_search_witness_examples():
    p = CspInstance(2, ["x"])
    one = Polynomial.constant(1, 1)
    w = search_witness(one, p, oracle_member)
    assert p.satisfies(w)
    assert search_witness(Polynomial.variable(0, 1), p, oracle_member) == (1,)
    assert search_witness(parse_polynomial("x^2 - x", ["x"]), p, oracle_member) is None


@given(st.integers(0, 10**6))
def test_search_witness_is_valid_and_cheap(seed):
    rng = random.Random(seed)
    p = random_instance(rng, rng.choice((2, 3)), rng.randint(1, 3))
    f = random_f0(rng, p)
    calls = []
    w = search_witness(f, p, oracle_member, calls)
    if oracle_member(f, p):
        assert w is None
    else:
        assert p.satisfies(w) and f.evaluate(w) != 0
    assert calls[0] <= p.n * p.domain_size + 1


@given(st.integers(0, 10**6))
def test_eliminate_constants_preserves_membership(seed):
    rng = random.Random(seed)
    p = random_instance(rng, rng.choice((2, 3)), rng.randint(2, 4))
    for v in rng.sample(p.variables, rng.randint(1, 2)):
        p.pins.append((v, rng.randrange(p.domain_size)))
    f = random_f0(rng, p)
    res = eliminate_constants(f, p)
    if res.member_immediate:
        assert oracle_member(f, p)
        return
    assert not res.instance.pins
    assert oracle_member(f, p) == oracle_member(res.fstar, res.instance)
    growth = len(res.pinned_values) * (p.domain_size - 1)
    assert res.selector.degree() == growth
    if not res.merged.is_zero():
        assert res.fstar.degree() == res.merged.degree() + growth
    assert res.fstar.degree() <= max(f.degree(), 0) + growth
