"""Arithmetic expression DAG nodes, floating-point filters and counters.

Handles are plain references to :class:`Node` objects; reusing a node as the
child of several parents is what turns expression trees into DAGs.  Every
node carries an eagerly maintained machine-float interval (the filter) that
encloses its exact value.
"""

import enum
import math
import threading
from dataclasses import asdict, dataclass

from . import bigfloat as bf
from .bigfloat import BigFloat
from .errorbound import EXACT

_INF = math.inf
_SPLITTER = 134217729.0  # 2**27 + 1
_ROOT_SLACK = 2.0 ** -40


class NodeKind(enum.Enum):
    LEAF = 0
    NEG = 1
    ADD = 2
    SUB = 3
    MUL = 4
    DIV = 5
    ROOT = 6


ARITY = {
    NodeKind.LEAF: 0,
    NodeKind.NEG: 1,
    NodeKind.ROOT: 1,
    NodeKind.ADD: 2,
    NodeKind.SUB: 2,
    NodeKind.MUL: 2,
    NodeKind.DIV: 2,
}

# Marker for a stored error that has not been computed yet.
UNSET = None


class Node:
    __slots__ = ('kind', 'children', 'index', 'approx', 'error', 'lo', 'hi',
                 'sep_cache', 'init_done', 'depth', 'sep_mark', 'sep_ul',
                 '__weakref__')

    def __init__(self, kind, children=(), index=0):
        self.kind = kind
        self.children = children
        self.index = index
        self.approx = None
        self.error = UNSET
        self.sep_cache = None
        # scratch space of the separation-bound traversal
        self.sep_mark = 0
        self.sep_ul = None
        self.init_done = False
        self.depth = 1 + max((c.depth for c in children), default=0)

    @property
    def is_leaf(self) -> bool:
        return self.kind is NodeKind.LEAF

    @property
    def filter(self):
        return self.lo, self.hi

    def __repr__(self):
        if self.kind is NodeKind.LEAF:
            return 'Node(LEAF {!r})'.format(self.approx)
        return 'Node({} depth={})'.format(self.kind.name, self.depth)


# Global timestamp


class _Timestamp:
    def __init__(self):
        self._lock = threading.Lock()
        self._value = 0

    @property
    def current(self) -> int:
        return self._value

    def advance(self) -> int:
        with self._lock:
            self._value += 1
            return self._value


TIMESTAMP = _Timestamp()


@dataclass
class Counters:
    node_recomputations: int = 0
    sepbound_computations: int = 0
    sepbound_nodes_traversed: int = 0
    bigfloat_ops: int = 0
    collapses: int = 0
    max_precision_bits: int = 0

    def reset(self):
        for name in self.__dataclass_fields__:
            setattr(self, name, 0)

    def snapshot(self) -> dict:
        return asdict(self)

    def note_precision(self, bits: int):
        if bits > self.max_precision_bits:
            self.max_precision_bits = bits


# Construction


def make_leaf(value) -> Node:
    v = value if isinstance(value, BigFloat) else BigFloat(value)
    node = Node(NodeKind.LEAF)
    node.approx = v
    node.error = EXACT
    node.init_done = True
    node.lo, node.hi = v.float_bounds()
    return node


def make_node(kind: NodeKind, *children: Node, k: int = 2) -> Node:
    if kind is NodeKind.LEAF:
        raise ValueError('use make_leaf for leaves')
    if len(children) != ARITY[kind]:
        raise ValueError('{} takes {} operand(s), got {}'
                         .format(kind.name, ARITY[kind], len(children)))
    if kind is NodeKind.ROOT and k < 2:
        raise ValueError('root index must be at least 2, got {}'.format(k))
    node = Node(kind, tuple(children), k if kind is NodeKind.ROOT else 0)
    node.lo, node.hi = _filter(kind, children, node.index)
    return node


def collapse_to_bigfloat(node: Node, counters: Counters = None):
    """Replace an exactly known subgraph by a single leaf."""
    if node.error is not EXACT:
        raise ValueError('only nodes with an exact approximation can collapse')
    if node.kind is NodeKind.LEAF:
        return
    node.kind = NodeKind.LEAF
    node.children = ()
    node.index = 0
    node.init_done = True
    node.sep_cache = None
    lo, hi = node.approx.float_bounds()
    node.lo, node.hi = max(lo, node.lo), min(hi, node.hi)
    TIMESTAMP.advance()
    if counters is not None:
        counters.collapses += 1


def filter_sign(node: Node):
    """-1 or +1 when the filter interval excludes zero, else None."""
    lo, hi = node.lo, node.hi
    if lo > 0:
        return 1
    if hi < 0:
        return -1
    return None


def iter_nodes(root: Node):
    """Distinct nodes reachable from ``root``, children before parents."""
    seen = set()
    order = []
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for c in reversed(node.children):
            if id(c) not in seen:
                stack.append((c, False))
    return order


def count_paths(root: Node) -> int:
    """Number of distinct root-to-leaf paths."""
    paths = {}
    for node in iter_nodes(root):
        paths[id(node)] = (sum(paths[id(c)] for c in node.children)
                           if node.children else 1)
    return paths[id(root)]


# Filter interval arithmetic with outward rounding


def _down(x):
    return math.nextafter(x, -_INF)


def _up(x):
    return math.nextafter(x, _INF)


def _two_sum_err(a, b, s):
    bb = s - a
    return (a - (s - bb)) + (b - bb)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod_err(a, b, p):
    ahi, alo = _split(a)
    bhi, blo = _split(b)
    return alo * blo - (((p - ahi * bhi) - alo * bhi) - ahi * blo)


_MAX = 1.7976931348623157e308
_TINY = 5e-324


def _overflowed(p):
    return (_MAX, p) if p > 0 else (p, -_MAX)


def _sum_bounds(a, b):
    s = a + b
    if not math.isfinite(s):
        return _overflowed(s) if math.isfinite(a) and math.isfinite(b) else (s, s)
    e = _two_sum_err(a, b, s)
    return (_down(s) if e < 0 else s), (_up(s) if e > 0 else s)


def _prod_bounds(a, b):
    if not a or not b:
        return 0.0, 0.0
    p = a * b
    if not math.isfinite(p):
        return _overflowed(p) if math.isfinite(a) and math.isfinite(b) else (p, p)
    if abs(a) > 1e150 or abs(b) > 1e150 or abs(p) < 1e-290:
        return (_down(p), _up(p)) if p else (-_TINY, _TINY)
    e = _two_prod_err(a, b, p)
    return (_down(p) if e < 0 else p), (_up(p) if e > 0 else p)


def _root_bounds(x, k):
    if x == 0:
        return 0.0, 0.0
    if math.isinf(x):
        return x, x
    r = abs(x) ** (1.0 / k)
    lo, hi = _down(r * (1 - _ROOT_SLACK)), _up(r * (1 + _ROOT_SLACK))
    if k == 2:
        r = math.sqrt(x)
        p = r * r
        exact = p == x and 1e-140 < r < 1e140 and not _two_prod_err(r, r, p)
        lo, hi = (r, r) if exact else (_down(r), _up(r))
    if x < 0:
        return -hi, -lo
    return lo, hi


_WIDE = (-_INF, _INF)


def _filter(kind, children, k):
    a_lo, a_hi = children[0].lo, children[0].hi
    if kind is NodeKind.NEG:
        return -a_hi, -a_lo
    if kind is NodeKind.ROOT:
        if k % 2 == 0:
            if a_hi < 0:
                return _WIDE
            a_lo = max(a_lo, 0.0)
        lo, _ = _root_bounds(a_lo, k)
        _, hi = _root_bounds(a_hi, k)
        return _checked(lo, hi)
    b_lo, b_hi = children[1].lo, children[1].hi
    if kind is NodeKind.ADD:
        return _checked(_sum_bounds(a_lo, b_lo)[0], _sum_bounds(a_hi, b_hi)[1])
    if kind is NodeKind.SUB:
        return _checked(_sum_bounds(a_lo, -b_hi)[0], _sum_bounds(a_hi, -b_lo)[1])
    if kind is NodeKind.MUL:
        cands = [_prod_bounds(x, y) for x in (a_lo, a_hi) for y in (b_lo, b_hi)]
        return _checked(min(c[0] for c in cands), max(c[1] for c in cands))
    # DIV
    if b_lo <= 0 <= b_hi:
        return _WIDE
    qs = [x / y for x in (a_lo, a_hi) for y in (b_lo, b_hi)]
    return _checked(_down(min(qs)), _up(max(qs)))


def _checked(lo, hi):
    if math.isnan(lo) or math.isnan(hi) or lo > hi:
        return _WIDE
    return lo, hi


# Convenience for tests and benchmarks


def exact_value(node: Node):
    """Exact value of a root-free expression as a Fraction."""
    vals = {}
    for n in iter_nodes(node):
        if n.kind is NodeKind.LEAF:
            v = n.approx.to_fraction()
        else:
            xs = [vals[id(c)] for c in n.children]
            if n.kind is NodeKind.NEG:
                v = -xs[0]
            elif n.kind is NodeKind.ADD:
                v = xs[0] + xs[1]
            elif n.kind is NodeKind.SUB:
                v = xs[0] - xs[1]
            elif n.kind is NodeKind.MUL:
                v = xs[0] * xs[1]
            elif n.kind is NodeKind.DIV:
                v = xs[0] / xs[1]
            else:
                raise ValueError('exact_value does not handle roots')
        vals[id(n)] = v
    return vals[id(node)]


__all__ = ['Node', 'NodeKind', 'Counters', 'TIMESTAMP', 'make_leaf', 'make_node',
           'collapse_to_bigfloat', 'filter_sign', 'iter_nodes', 'count_paths',
           'exact_value', 'bf']
