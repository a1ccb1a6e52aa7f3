"""Constructive separation bounds over expression DAGs.

The bound follows the BFMSS recurrences for the parameters ``u`` and ``l``
of every node, carried as base-2 logarithms in machine floats that are
rounded upward.  The algebraic degree bound is the product of root indices
over the *distinct* radical nodes below the root, so a square root shared by
both operands of a subtraction counts once.

If ``E != 0`` then ``|E| >= 1 / (u**(D-1) * l)``; :func:`compute_sep` returns
an integer ``s`` with ``E != 0  =>  |E| > 2**s``.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .bigfloat import BigFloat, DomainError
from .dag import TIMESTAMP, Node, NodeKind
from .errorbound import add_up, log2_sum_up, log2_upper

_NEG_INF = -math.inf


def _up(x: float) -> float:
    return math.nextafter(x, math.inf)


@dataclass(frozen=True)
class SepData:
    u_log: float
    l_log: float
    degree: int = 1


def _add(a: float, b: float) -> float:
    if a == _NEG_INF or b == _NEG_INF:
        return _NEG_INF
    return add_up(a, b)


def _log_sum(a: float, b: float) -> float:
    if a == _NEG_INF:
        return b
    if b == _NEG_INF:
        return a
    return log2_sum_up(a, b)


def leaf_data(value: BigFloat) -> SepData:
    """``u``/``l`` of a dyadic leaf ``n / 2**s`` taken as a quotient of integers."""
    if not value.sign:
        return SepData(_NEG_INF, 0.0)
    u = log2_upper(BigFloat(value.man))
    if value.exp >= 0:
        return SepData(add_up(u, float(value.exp)), 0.0)
    return SepData(u, float(-value.exp))


def bfmss_step(kind: NodeKind, children, index: int = 0,
               leaf: BigFloat = None) -> SepData:
    """One step of the log-scale BFMSS recurrence.

    ``degree`` of the result is the tree-style product of child degrees;
    :func:`compute_sep` replaces it by the DAG-aware count.
    """
    if kind is NodeKind.LEAF:
        return leaf_data(leaf)
    pairs = [(c.u_log, c.l_log) for c in children]
    u, l = _step(kind, pairs, index, None)
    deg = 1
    for c in children:
        deg *= c.degree
    if kind is NodeKind.ROOT:
        deg *= index
    return SepData(u, l, deg)


def _step(kind, kids, k, leaf):
    """``(u_log, l_log)`` of a node from those of its children."""
    if kind is NodeKind.LEAF:
        d = leaf_data(leaf)
        return d.u_log, d.l_log
    au, al = kids[0]
    if kind is NodeKind.NEG:
        return au, al
    if kind is NodeKind.ROOT:
        if au == _NEG_INF:
            return au, al
        if au >= al:
            return _up(add_up(au, _up((k - 1) * al)) / k), al
        return au, _up(add_up(al, _up((k - 1) * au)) / k)
    bu, bl = kids[1]
    if kind is NodeKind.MUL:
        return _add(au, bu), add_up(al, bl)
    if kind is NodeKind.ADD or kind is NodeKind.SUB:
        return _log_sum(_add(au, bl), _add(bu, al)), add_up(al, bl)
    if kind is NodeKind.DIV:
        if bu == _NEG_INF:
            raise DomainError('separation bound of a division by zero')
        return _add(au, bl), _add(al, bu)
    raise ValueError('unknown node kind {}'.format(kind))


def separation_exponent(data: SepData, degree: int) -> int:
    """Integer ``s`` with ``E != 0  =>  |E| > 2**s``."""
    if data.u_log == _NEG_INF:
        # u == 0 only for expressions that vanish identically
        return 0
    total = Fraction(data.l_log) + (degree - 1) * Fraction(data.u_log)
    return -math.ceil(total) - 1


_marks = itertools.count(1)


def sep_data(node: Node):
    """``(SepData, nodes_visited)`` for ``node`` with the DAG-aware degree."""
    done = next(_marks)
    degree = 1
    visited = 0
    root_kind = NodeKind.ROOT
    mul_kind = NodeKind.MUL
    stack = [node]
    while stack:
        n = stack[-1]
        if n.sep_mark == done:
            stack.pop()
            continue
        ready = True
        for c in n.children:
            if c.sep_mark != done:
                stack.append(c)
                ready = False
        if not ready:
            continue
        stack.pop()
        kind = n.kind
        if kind is mul_kind:
            (au, al), (bu, bl) = n.children[0].sep_ul, n.children[1].sep_ul
            n.sep_ul = (_add(au, bu), add_up(al, bl))
        else:
            n.sep_ul = _step(kind, [c.sep_ul for c in n.children], n.index,
                             n.approx)
        n.sep_mark = done
        visited += 1
        if kind is root_kind:
            # each distinct radical node contributes its index once
            degree *= n.index
    u, l = node.sep_ul
    return SepData(u, l, degree), visited


def compute_sep(node: Node, counters=None, use_cache: bool = True) -> int:
    """Separation exponent of ``node``, reusing a cached value while current."""
    if use_cache and node.sep_cache is not None:
        value, stamp = node.sep_cache
        if stamp == TIMESTAMP.current:
            return value
    data, visited = sep_data(node)
    value = separation_exponent(data, data.degree)
    if counters is not None:
        counters.sepbound_computations += 1
        counters.sepbound_nodes_traversed += visited
    node.sep_cache = (value, TIMESTAMP.current)
    return value
