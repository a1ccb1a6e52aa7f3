import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from exactreal import Context
from exactreal.bigfloat import BigFloat
from exactreal.dag import (TIMESTAMP, Counters, NodeKind, collapse_to_bigfloat,
                           count_paths, exact_value, filter_sign, iter_nodes,
                           make_leaf, make_node)
from exactreal.errorbound import EXACT, LogIntError

from exprgen import Generator, build


def test_leaf():
    n = make_leaf(2)
    assert n.filter == (2.0, 2.0)
    assert n.error is EXACT
    assert n.is_leaf


def test_shared_children():
    a = make_leaf(1)
    n = make_node(NodeKind.ADD, a, a)
    assert n.children[0] is n.children[1]
    assert n.filter == (2.0, 2.0)
    assert len(iter_nodes(n)) == 2


def test_non_representable_filter():
    n = make_node(NodeKind.DIV, make_leaf(1), make_leaf(3))
    lo, hi = n.filter
    assert lo < hi
    assert Fraction(lo) < Fraction(1, 3) < Fraction(hi)


def test_arity_checks():
    a = make_leaf(1)
    with pytest.raises(ValueError):
        make_node(NodeKind.ADD, a)
    with pytest.raises(ValueError):
        make_node(NodeKind.NEG, a, a)
    with pytest.raises(ValueError):
        make_node(NodeKind.ROOT, a, k=1)
    with pytest.raises(ValueError):
        make_node(NodeKind.LEAF)


def test_filter_sign():
    assert filter_sign(make_leaf(1)) == 1
    assert filter_sign(make_leaf(-0.5)) == -1
    n = make_node(NodeKind.SUB, make_leaf(1), make_leaf(1))
    assert filter_sign(n) is None
    wide = make_leaf(1)
    wide.lo, wide.hi = -1.0, 1.0
    assert filter_sign(wide) is None
    wide.lo, wide.hi = -math.inf, math.inf
    assert filter_sign(wide) is None


def test_filter_overflow_is_unknown():
    big = make_leaf(BigFloat.pow2(2000))
    n = make_node(NodeKind.SUB, big, big)
    assert filter_sign(n) is None
    assert n.lo <= 0 <= n.hi


def test_root_filter():
    n = make_node(NodeKind.ROOT, make_leaf(2), k=2)
    lo, hi = n.filter
    assert hi - lo < 1e-12
    assert lo <= math.sqrt(2) <= hi


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_filter_encloses_value(seed):
    recipe = Generator(random.Random(seed)).expr(5)
    node = build(recipe, Context()).node
    value = exact_value(node)
    lo, hi = node.filter
    if not (math.isinf(lo) or math.isinf(hi)):
        assert Fraction(lo) <= value <= Fraction(hi)
    s = filter_sign(node)
    if s is not None:
        assert (value > 0) - (value < 0) == s


def test_collapse():
    n = make_node(NodeKind.ADD, make_leaf(2), make_leaf(3))
    n.approx, n.error = BigFloat(5), EXACT
    c = Counters()
    before = TIMESTAMP.current
    collapse_to_bigfloat(n, c)
    assert n.kind is NodeKind.LEAF and n.children == ()
    assert n.approx == BigFloat(5)
    assert TIMESTAMP.current > before
    assert c.collapses == 1


def test_collapse_zero():
    n = make_node(NodeKind.SUB, make_leaf(2), make_leaf(2))
    n.approx, n.error = BigFloat(0), EXACT
    collapse_to_bigfloat(n)
    assert n.is_leaf and n.approx.is_zero()
    assert n.filter == (0.0, 0.0)


def test_collapse_requires_exact():
    n = make_node(NodeKind.ADD, make_leaf(2), make_leaf(3))
    n.approx, n.error = BigFloat(5), LogIntError(-10)
    with pytest.raises(ValueError):
        collapse_to_bigfloat(n)


def test_iter_nodes_order():
    a = make_leaf(2)
    b = make_node(NodeKind.MUL, a, a)
    c = make_node(NodeKind.ADD, b, a)
    order = iter_nodes(c)
    assert order[-1] is c
    assert len(order) == 3
    pos = {id(n): i for i, n in enumerate(order)}
    for n in order:
        for ch in n.children:
            assert pos[id(ch)] < pos[id(n)]


@pytest.mark.parametrize('n', [0, 1, 5, 20])
def test_count_paths_squaring(n):
    x = make_leaf(3)
    for _ in range(n):
        x = make_node(NodeKind.MUL, x, x)
    assert count_paths(x) == 2 ** n
    assert len(iter_nodes(x)) == n + 1


def test_counters():
    c = Counters()
    c.node_recomputations = 4
    c.note_precision(100)
    c.note_precision(50)
    assert c.snapshot()['max_precision_bits'] == 100
    c.reset()
    assert all(v == 0 for v in c.snapshot().values())
