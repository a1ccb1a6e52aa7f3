"""The :class:`Real` number type.

Arithmetic on :class:`Real` values only records operations in an expression
DAG; nothing is evaluated until a decision (sign, comparison) or an
approximation is requested.  Comparisons are exact.
"""

import enum
from fractions import Fraction

from . import evaluate
from .bigfloat import BigFloat
from .dag import Node, NodeKind, make_leaf, make_node
from .evaluate import Context


class Ordering(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


_default_context = Context()


def default_context() -> Context:
    return _default_context


def set_default_context(ctx: Context) -> Context:
    """Install ``ctx`` as the default and return the previous one."""
    global _default_context
    old, _default_context = _default_context, ctx
    return old


class Real:
    __slots__ = ('node', 'context')

    def __init__(self, value=0, context: Context = None):
        ctx = context if context is not None else _default_context
        if isinstance(value, Real):
            if context is not None and value.context is not context:
                raise ValueError('cannot move a Real to another context')
            self.node, self.context = value.node, value.context
            return
        if isinstance(value, Fraction) and value.denominator & (value.denominator - 1):
            # general rationals become a division of two integers
            node = make_node(NodeKind.DIV, make_leaf(value.numerator),
                             make_leaf(value.denominator))
        elif isinstance(value, (int, float, Fraction, BigFloat)):
            if isinstance(value, bool):
                value = int(value)
            node = make_leaf(value)
        else:
            raise TypeError('cannot build a Real from {!r}'.format(type(value).__name__))
        self.node, self.context = node, ctx

    @classmethod
    def _wrap(cls, node: Node, ctx: Context) -> 'Real':
        r = cls.__new__(cls)
        r.node, r.context = node, ctx
        return r

    def _coerce(self, other) -> 'Real':
        if isinstance(other, Real):
            if other.context is not self.context:
                raise ValueError('operands belong to different contexts')
            return other
        if isinstance(other, (int, float, Fraction, BigFloat)):
            return Real(other, self.context)
        return NotImplemented

    def _binary(self, other, kind, swap=False):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = (o, self) if swap else (self, o)
        return Real._wrap(make_node(kind, a.node, b.node), self.context)

    def __add__(self, other):
        return self._binary(other, NodeKind.ADD)

    def __radd__(self, other):
        return self._binary(other, NodeKind.ADD, swap=True)

    def __sub__(self, other):
        return self._binary(other, NodeKind.SUB)

    def __rsub__(self, other):
        return self._binary(other, NodeKind.SUB, swap=True)

    def __mul__(self, other):
        return self._binary(other, NodeKind.MUL)

    def __rmul__(self, other):
        return self._binary(other, NodeKind.MUL, swap=True)

    def __truediv__(self, other):
        return self._binary(other, NodeKind.DIV)

    def __rtruediv__(self, other):
        return self._binary(other, NodeKind.DIV, swap=True)

    def __neg__(self):
        return Real._wrap(make_node(NodeKind.NEG, self.node), self.context)

    def __pos__(self):
        return self

    def sqrt(self) -> 'Real':
        return self.root(2)

    def root(self, k: int) -> 'Real':
        """Real ``k``-th root; odd roots of negative values are allowed."""
        return Real._wrap(make_node(NodeKind.ROOT, self.node, k=k), self.context)

    # Decisions

    def sign(self) -> int:
        return evaluate.sign(self.node, self.context)

    def compare(self, other) -> Ordering:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError('cannot compare Real with {!r}'.format(type(other).__name__))
        if o.node is self.node:
            return Ordering.EQ
        return Ordering((self - o).sign())

    def equals(self, other) -> bool:
        return self.compare(other) is Ordering.EQ

    def __eq__(self, other):
        if self._coerce(other) is NotImplemented:
            return NotImplemented
        return self.compare(other) == 0

    def __ne__(self, other):
        if self._coerce(other) is NotImplemented:
            return NotImplemented
        return self.compare(other) != 0

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __bool__(self):
        return self.sign() != 0

    __hash__ = None

    # Approximations

    def to_approx(self, q: int):
        """``(BigFloat, error)`` within ``2**q`` of the value."""
        return evaluate.to_approx(self.node, q, self.context)

    def __float__(self) -> float:
        lo, hi = self.node.lo, self.node.hi
        if lo == hi:
            return lo
        value, _ = self.to_approx(-80)
        b = value.exponent if value.sign else 0
        if b - 80 > -1100:
            value, _ = self.to_approx(b - 80)
        return float(value.to_fraction())

    def __repr__(self):
        lo, hi = self.node.lo, self.node.hi
        if lo == hi:
            return 'Real({!r})'.format(lo)
        return 'Real(~{!r})'.format((lo + hi) / 2)


def sqrt(x) -> Real:
    return x.sqrt() if isinstance(x, Real) else Real(x).sqrt()


def root(x, k: int) -> Real:
    return x.root(k) if isinstance(x, Real) else Real(x).root(k)


def compare(a: Real, b) -> Ordering:
    return a.compare(b)


__all__ = ['Real', 'Ordering', 'sqrt', 'root', 'compare', 'default_context',
           'set_default_context']
