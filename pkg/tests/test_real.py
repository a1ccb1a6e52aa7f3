import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import exactreal
from exactreal import Context, DivisionByZero, Ordering, Real, compare, preset
from exactreal.bigfloat import BigFloat
from exactreal.dag import NodeKind
from exactreal.errorbound import EXACT
from exactreal.real import default_context, set_default_context

from exprgen import Generator, build, exact

rationals = st.fractions(max_denominator=10 ** 6).filter(lambda f: abs(f) < 10 ** 9)


@pytest.fixture
def ctx():
    return Context(preset('lgi'))


# Construction


def test_construct(ctx):
    assert Real(5, ctx).node.approx == BigFloat(5)
    assert Real(0.25, ctx).node.approx.to_fraction() == Fraction(1, 4)
    assert Real(True, ctx).node.approx == BigFloat(1)
    assert Real(BigFloat(3), ctx).node.approx == BigFloat(3)
    third = Real(1, ctx) / Real(3, ctx)
    assert third.node.kind is NodeKind.DIV
    assert Real(Fraction(1, 3), ctx).node.kind is NodeKind.DIV
    assert Real(Fraction(3, 4), ctx).node.kind is NodeKind.LEAF
    with pytest.raises(TypeError):
        Real('1', ctx)


def test_shared_child(ctx):
    a = Real(2, ctx)
    b = a + a
    assert b.node.children[0] is b.node.children[1]


def test_sqrt_filter(ctx):
    r = exactreal.sqrt(Real(2, ctx))
    assert r.node.kind is NodeKind.ROOT
    lo, hi = r.node.filter
    assert 1.4142135623 <= lo <= hi <= 1.4142135624
    assert lo <= 2 ** 0.5 <= hi


def test_building_is_lazy(ctx):
    two = Real(2, ctx)
    x = Real(1, ctx) / (two.sqrt() * two.sqrt() - two)
    assert ctx.counters.bigfloat_ops == 0
    assert ctx.counters.node_recomputations == 0
    with pytest.raises(DivisionByZero):
        x.sign()


def test_mixed_contexts():
    a, b = Real(1, Context()), Real(2, Context())
    with pytest.raises(ValueError):
        a + b
    with pytest.raises(ValueError):
        a.compare(b)
    with pytest.raises(ValueError):
        Real(a, Context())


def test_unsupported_operand(ctx):
    with pytest.raises(TypeError):
        Real(1, ctx) + 'x'
    with pytest.raises(TypeError):
        Real(1, ctx) < 'x'
    assert (Real(1, ctx) == 'x') is False


def test_unhashable(ctx):
    with pytest.raises(TypeError):
        hash(Real(1, ctx))


def test_default_context():
    ctx = Context(preset('lgd'))
    old = set_default_context(ctx)
    try:
        assert default_context() is ctx
        assert Real(1).context is ctx
        assert (Real(1) + 2).context is ctx
    finally:
        set_default_context(old)
    assert default_context() is old


# Decisions


def test_compare_examples(ctx):
    one, two, three, six = (Real(v, ctx) for v in (1, 2, 3, 6))
    assert compare(one / three + one / six, one / two) is Ordering.EQ
    assert (two.sqrt() * two.sqrt()).equals(two)
    assert Real(0, ctx).sign() == 0
    assert compare(one, two) is Ordering.LT
    assert two.compare(one) is Ordering.GT
    assert one.compare(one) is Ordering.EQ


def test_operators(ctx):
    x = Real(2, ctx).sqrt()
    assert 1 < x < 2
    assert x >= x and x <= x
    assert x != 1.5
    assert -x < 0
    assert +x is x
    assert 3 - x > 1 and 2 / x == x and 2 * x > 2 and x + 1 > 2
    assert bool(x) and not bool(x - x)
    assert exactreal.root(Real(27, ctx), 3) == 3


def test_filter_short_circuit(ctx):
    x = Real(3, ctx) * Real(5, ctx) - Real(7, ctx)
    assert x.sign() == 1
    assert ctx.counters.bigfloat_ops == 0
    assert ctx.counters.node_recomputations == 0


@settings(max_examples=200)
@given(rationals, rationals)
def test_compare_matches_rationals(a, b):
    ctx = Context(preset('def'))
    ra, rb = Real(a, ctx), Real(b, ctx)
    expected = (a > b) - (a < b)
    assert ra.compare(rb) == expected
    assert rb.compare(ra) == -expected
    assert (ra - rb).sign() == expected
    assert (ra == rb) == (a == b)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from(['def', 'lgi', 'lgd']))
def test_sign_matches_exact(seed, name):
    recipe = Generator(random.Random(seed), zero_rate=0.3).expr(5)
    value = exact(recipe)
    x = build(recipe, Context(preset(name)))
    assert x.sign() == (value > 0) - (value < 0)


# Approximation


def test_to_approx_examples(ctx):
    approx, _ = (Real(1, ctx) / Real(3, ctx)).to_approx(-20)
    assert abs(approx.to_fraction() - Fraction(1, 3)) <= Fraction(1, 2 ** 20)
    approx, err = Real(5, ctx).to_approx(-100)
    assert approx == BigFloat(5) and err is EXACT


def test_float_and_repr(ctx):
    third = Real(1, ctx) / Real(3, ctx)
    assert float(third) == 1 / 3
    assert float(Real(2, ctx).sqrt()) == 2 ** 0.5
    assert float(Real(0.5, ctx)) == 0.5
    assert repr(Real(0.5, ctx)) == 'Real(0.5)'
    assert repr(third).startswith('Real(~0.333')
