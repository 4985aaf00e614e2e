import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from combideal.csp import Constraint, CspInstance, Relation, enumerate_solutions
from combideal.encode import (
    constraint_generators,
    constraint_polynomial,
    domain_polynomial,
    indicator_polynomial,
    instance_ideal,
    interpolate_map,
    reduce_by_domain,
    variety_points,
)
from combideal.polyring import Polynomial, parse_polynomial
from combideal.random_instances import random_instance


def X(text, names=("x",)):
    return parse_polynomial(text, list(names))


def test_indicator_examples():
    assert indicator_polynomial(1, 2) == X("x")
    assert indicator_polynomial(0, 2) == X("1 - x")
    d = indicator_polynomial(1, 3)
    assert d == X("-x^2 + 2*x")
    assert [d.evaluate((a,)) for a in range(3)] == [0, 1, 0]


def test_indicator_out_of_range():
    with pytest.raises(ValueError):
        indicator_polynomial(3, 3)


def test_domain_polynomial_examples():
    assert domain_polynomial(0, 2, 1) == X("x^2 - x")
    assert domain_polynomial(0, 3, 1) == X("x^3 - 3*x^2 + 2*x")
    f = domain_polynomial(0, 4, 1)
    assert [a for a in range(-3, 8) if f.evaluate((a,)) == 0] == [0, 1, 2, 3]


def test_constraint_generators_examples():
    empty = CspInstance(2, ["x", "y"], {"E": Relation("E", 2, frozenset())}, [Constraint("E", ("x", "y"))])
    assert constraint_generators(empty.constraints[0], empty)[0] == Polynomial.constant(1, 2)
    r = Relation("R", 2, frozenset({(0, 1)}))
    p = CspInstance(2, ["x", "y"], {"R": r}, [Constraint("R", ("x", "y"))])
    gens = constraint_generators(p.constraints[0], p)
    assert gens[0] == X("1 - (1 - x)*y", "xy")
    assert gens[1:] == [X("x^2 - x", "xy"), X("y^2 - y", "xy")]
    assert [pt for pt in itertools.product((0, 1), repeat=2) if gens[0].evaluate(pt) == 0] == [(0, 1)]
    full = CspInstance(2, ["x", "y"], {"F": Relation("F", 2, frozenset(itertools.product((0, 1), repeat=2)))},
                       [Constraint("F", ("x", "y"))])
    g = constraint_generators(full.constraints[0], full)[0]
    assert all(g.evaluate(pt) == 0 for pt in itertools.product((0, 1), repeat=2))


def test_instance_ideal_examples():
    p = CspInstance(2, ["x", "y"])
    assert instance_ideal(p) == [X("x^2 - x", "xy"), X("y^2 - y", "xy")]
    q = CspInstance(2, ["x"], pins=[("x", 1)])
    assert X("1 - x") in instance_ideal(q)
    r = CspInstance(2, ["x"], pins=[("x", 0), ("x", 1)])
    assert variety_points(instance_ideal(r), 2) == []


def test_interpolation_examples():
    assert interpolate_map([(0,), (1,)], [0, 1], 2) == X("x")
    f = interpolate_map([(0, 0), (0, 1), (1, 1)], [0, 1, 2], 2)
    assert f == X("x + y", "xy")
    assert interpolate_map([(1, 0)], [5], 2) == Polynomial.constant(5, 2)
    with pytest.raises(ValueError):
        interpolate_map([(0,), (0,)], [1, 2], 2)


@given(st.integers(0, 10**6), st.booleans())
def test_variety_equals_solutions(seed, reduced):
    rng = random.Random(seed)
    p = random_instance(rng, rng.choice((2, 3)), rng.randint(1, 3))
    gens = instance_ideal(p, reduced=reduced)
    sols = enumerate_solutions(p)
    assert variety_points(gens, p.domain_size) == sols
    assert all(g.evaluate(s) == 0 for g in gens for s in sols)


@given(st.integers(2, 4), st.integers(0, 10**6))
def test_indicators_partition_unity(t, seed):
    total = sum((indicator_polynomial(v, t) for v in range(t)), Polynomial.zero(1))
    assert total == Polynomial.constant(1, 1)


@given(st.integers(0, 10**6))
def test_reduced_constraint_polynomial_is_same_function(seed):
    rng = random.Random(seed)
    t = rng.choice((2, 3))
    space = list(itertools.product(range(t), repeat=2))
    tuples = rng.sample(space, rng.randint(0, len(space)))
    a = constraint_polynomial(tuples, [0, 1], t, 2)
    b = constraint_polynomial(tuples, [0, 1], t, 2, reduced=True)
    assert b == reduce_by_domain(a, t)
    for pt in space:
        assert (a.evaluate(pt) == 0) == (b.evaluate(pt) == 0) == (pt in tuples)


@given(st.integers(0, 10**6))
def test_interpolation_agrees_on_points(seed):
    rng = random.Random(seed)
    t, ell = rng.choice((2, 3)), rng.randint(1, 3)
    space = list(itertools.product(range(t), repeat=ell))
    pts = rng.sample(space, rng.randint(1, len(space)))
    vals = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in pts]
    f = interpolate_map(pts, vals, t)
    assert [f.evaluate(pt) for pt in pts] == vals
    assert all(e < t for exp in f.terms for e in exp)
