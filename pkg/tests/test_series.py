from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitri.catalog import circle_chain, dumbbell, ring, strut, theta, wheel
from unitri.diagram import ONE, ColorSet, Monomial
from unitri.generate import random_primitive
from unitri.lmo import modified_bernoulli, omega_series
from unitri.series import (DiagramSeries, SeriesError, add, exp, log, multiply, power,
                           primitive_part, scale)

COLORS = ("x", "y")
seeds = st.integers(min_value=0, max_value=10**9)


def mono(*ds):
    return Monomial(ds)


def series(terms, trunc=4, colors=COLORS):
    return DiagramSeries(terms, colors, trunc)


def rand_series(seed, trunc=4, with_one=True):
    """Random series with products and a constant term (not necessarily primitive)."""
    p = random_primitive(seed, trunc, COLORS, "allow", n_terms=3)
    q = random_primitive(seed + 1, trunc, COLORS, "allow", n_terms=2)
    s = add(p, multiply(p, q))
    if with_one:
        s = add(s, scale(Fraction(seed % 5 + 1, 3), DiagramSeries.one(COLORS, trunc)))
    return s


def test_add_and_scale_examples():
    s = rand_series(1)
    assert add(s, scale(-1, s)).is_zero()
    assert scale(0, s).is_zero()
    w0, w1 = mono(wheel(2, "x")), mono(theta())
    B = add(series({w0: 1}), series({w1: 1}))
    assert B.terms == {w0: 1, w1: 1}


def test_add_requires_matching_colors():
    with pytest.raises(SeriesError):
        add(series({}, colors=("x",)), series({}, colors=("y",)))
    with pytest.raises(SeriesError):
        multiply(series({}, colors=("x",)), series({}, colors=("y",)))


def test_trunc_is_min_of_operands():
    a, b = series({}, trunc=2), series({}, trunc=4)
    assert add(a, b).trunc == 2 and multiply(a, b).trunc == 2


def test_multiply_examples():
    s = rand_series(3)
    assert multiply(DiagramSeries.one(COLORS, 4), s) == s
    d = mono(dumbbell("x", "y"))
    sq = multiply(series({d: 1}), series({d: 1}))
    assert sq.terms == {mono(dumbbell("x", "y"), dumbbell("x", "y")): 1}
    u, v = theta(), strut("x", "y")
    lhs = multiply(series({ONE: 1, mono(u): 1}), series({ONE: 1, mono(v): 1}))
    assert lhs.terms == {ONE: 1, mono(u): 1, mono(v): 1, mono(u, v): 1}


def test_exp_examples():
    assert exp(series({})) == DiagramSeries.one(COLORS, 4)
    u = theta()
    r = Fraction(-2, 7)
    e = exp(series({mono(u): r}, trunc=3))
    assert e.terms == {ONE: 1, mono(u): r, mono(u, u): r * r / 2, mono(u, u, u): r ** 3 / 6}


def test_omega_at_degree_four():
    b2, b4 = modified_bernoulli(1), modified_bernoulli(2)
    om = omega_series(1, "x", 4)
    w2, w4 = wheel(2), wheel(4)
    assert om.terms == {ONE: 1, mono(w2): b2, mono(w4): b4, mono(w2, w2): b2 * b2 / 2}


def test_exp_and_log_preconditions():
    with pytest.raises(SeriesError):
        exp(series({ONE: 1}))
    with pytest.raises(SeriesError):
        exp(series({mono(theta(), theta()): 1}))
    with pytest.raises(SeriesError):
        log(series({ONE: 2}))
    with pytest.raises(SeriesError):
        power(series({ONE: 2}), -1)


def test_log_examples():
    assert log(DiagramSeries.one(COLORS, 4)).is_zero()
    u = mono(theta())
    lg = log(series({ONE: 1, u: 1}, trunc=4))
    assert lg.terms == {u: 1, mono(theta(), theta()): Fraction(-1, 2),
                        mono(*[theta()] * 3): Fraction(1, 3), mono(*[theta()] * 4): Fraction(-1, 4)}


def test_primitive_part_examples():
    assert primitive_part(DiagramSeries.one(COLORS, 4)).is_zero()
    s = DiagramSeries({mono(ring(2), ring(3)): 2, mono(ring(5)): 2}, (), 5)
    assert primitive_part(s).terms == {mono(ring(5)): 2}


def test_power_examples():
    s = rand_series(5)
    assert power(s, 0) == DiagramSeries.one(COLORS, 4)
    assert power(s, 3) == multiply(s, multiply(s, s))
    om, om2 = omega_series(1, "x", 4), omega_series(2, "x", 4)
    lhs = multiply(power(om, -1), om2)
    rhs = exp(DiagramSeries({mono(wheel(2 * m)): modified_bernoulli(m) * (Fraction(1, 4 ** m) - 1)
                             for m in (1, 2)}, ["x"], 4))
    assert lhs.terms == rhs.terms


def test_series_rejects_foreign_colors():
    from unitri.diagram import DiagramError
    with pytest.raises(DiagramError):
        DiagramSeries({mono(strut("x", "z")): 1}, COLORS, 2)


@settings(max_examples=60, deadline=None)
@given(seeds, seeds, seeds)
def test_ring_axioms(a, b, c):
    x, y, z = rand_series(a), rand_series(b), rand_series(c)
    assert multiply(x, multiply(y, z)) == multiply(multiply(x, y), z)
    assert multiply(x, add(y, z)) == add(multiply(x, y), multiply(x, z))
    assert multiply(x, y) == multiply(y, x)
    assert add(x, add(y, z)) == add(add(x, y), z)
    assert add(x, y) == add(y, x)


@settings(max_examples=60, deadline=None)
@given(seeds, seeds)
def test_exp_is_additive(a, b):
    p = random_primitive(a, 4, COLORS, "allow")
    q = random_primitive(b, 4, COLORS, "allow")
    assert exp(add(p, q)) == multiply(exp(p), exp(q))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_exp_log_inverse(a):
    p = random_primitive(a, 4, COLORS, "allow")
    assert log(exp(p)) == p
    g = exp(p)
    assert exp(log(g)) == g


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_group_law_for_negative_powers(a):
    p = random_primitive(a, 4, COLORS, "allow")
    assert power(exp(p), -1) == exp(scale(-1, p))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_primitive_part_of_exp_is_identity(a):
    p = random_primitive(a, 4, COLORS, "allow")
    assert primitive_part(exp(p)) == p


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(min_value=1, max_value=3))
def test_truncation_coherence(a, n):
    x, y = rand_series(a), rand_series(a + 7)
    assert multiply(x, y).truncate(n) == multiply(x.truncate(n), y.truncate(n))
    p = random_primitive(a, 4, COLORS, "allow")
    assert exp(p).truncate(n) == exp(p.truncate(n))
    one = DiagramSeries.one(COLORS, 4)
    z = rand_series(a, with_one=False)
    assert log(add(one, z)).truncate(n) == log(add(one, z).truncate(n))
