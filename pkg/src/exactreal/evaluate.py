"""Accuracy-driven evaluation of expression DAGs.

Evaluation has two phases.  A cheap bottom-up pass gives every node an
approximation at a fixed precision together with an error bound.  Sign
decisions then run a loop of top-down accuracy requests with growing
accuracy: a request ``q`` at a node guarantees ``|approx - value| <= 2**q``
by choosing accuracies for the children, recursing, and recomputing the
node at a precision fitted to the budget.  When the approximation still
cannot exclude zero at an accuracy below the separation bound, the value is
declared zero.

Three error terms appear in a multiplication or division (two propagated
child errors and the rounding error); each is given ``2**(q-2)``.
"""

import math
import sys
import threading
from dataclasses import dataclass, field, replace

from . import bigfloat as bf
from . import errorbound as eb
from .bigfloat import BigFloat, DomainError
from .dag import (Counters, Node, NodeKind, collapse_to_bigfloat, filter_sign,
                  iter_nodes)
from .errorbound import EXACT, Rep
from .sepbound import compute_sep


class DivisionByZero(DomainError):
    """A divisor was proven to be exactly zero."""

    def __init__(self, node: Node, message: str = 'division by zero'):
        super().__init__(message)
        self.node = node


@dataclass(frozen=True)
class StrategyConfig:
    store_rep: Rep = Rep.DIRECT
    init_rep: Rep = Rep.DIRECT
    sep_cache: bool = False
    exact_ceil_log2: bool = True
    q0: int = -26
    growth: int = 2
    init_precision_bits: int = 53

    def __post_init__(self):
        if self.q0 >= 0:
            raise ValueError('q0 must be negative, got {}'.format(self.q0))
        if self.growth < 2:
            raise ValueError('growth must be at least 2, got {}'.format(self.growth))
        if self.init_precision_bits < 2:
            raise ValueError('init_precision_bits must be at least 2')

    @property
    def label(self) -> str:
        for name, rep in STRATEGIES.items():
            if self.store_rep is rep and self.init_rep is rep:
                return name
        return '{}/{}'.format(self.store_rep.value, self.init_rep.value)


STRATEGIES = {
    'def': Rep.DIRECT,
    'lgi': Rep.LOG_INT,
    'lgd': Rep.LOG_FLOAT,
}


def preset(name: str, sep_cache: bool = False, exact_ceil_log2: bool = True,
           **kwargs) -> StrategyConfig:
    """One of the named strategies ``def``, ``lgi`` or ``lgd``."""
    try:
        rep = STRATEGIES[name]
    except KeyError:
        raise ValueError('unknown strategy {!r}; expected one of {}'
                         .format(name, ', '.join(STRATEGIES))) from None
    return StrategyConfig(store_rep=rep, init_rep=rep, sep_cache=sep_cache,
                          exact_ceil_log2=exact_ceil_log2, **kwargs)


@dataclass
class Context:
    """Strategy plus the counters of one family of expressions."""
    config: StrategyConfig = field(default_factory=StrategyConfig)
    counters: Counters = field(default_factory=Counters)

    def with_config(self, **changes) -> 'Context':
        return Context(replace(self.config, **changes), Counters())


# Deep DAGs are evaluated recursively on a worker thread with a large stack.

_DEEP = 150
_STACK = 1 << 30
_local = threading.local()


def _run(fn, node: Node, *args):
    if node.depth < _DEEP or getattr(_local, 'deep', False):
        return fn(node, *args)
    limit = 8 * node.depth + 2000
    if sys.getrecursionlimit() < limit:
        sys.setrecursionlimit(limit)
    box = {}

    def work():
        _local.deep = True
        try:
            box['value'] = fn(node, *args)
        except BaseException as exc:  # re-raised in the caller
            box['error'] = exc

    old = threading.stack_size(_STACK)
    try:
        t = threading.Thread(target=work, name='exactreal-eval')
        t.start()
    finally:
        threading.stack_size(old)
    t.join()
    if 'error' in box:
        raise box['error']
    return box['value']


# Helpers


def _op(kind: NodeKind, xs, prec, k, ctx: Context) -> bf.Rounded:
    ctx.counters.bigfloat_ops += 1
    if prec is not None:
        ctx.counters.note_precision(prec)
    if kind is NodeKind.NEG:
        return bf.neg(xs[0])
    if kind is NodeKind.ADD:
        return bf.add(xs[0], xs[1], prec)
    if kind is NodeKind.SUB:
        return bf.sub(xs[0], xs[1], prec)
    if kind is NodeKind.MUL:
        return bf.mul(xs[0], xs[1], prec)
    if kind is NodeKind.DIV:
        return bf.div(xs[0], xs[1], prec)
    return bf.root(xs[0], k, prec)


def _bits(x: BigFloat) -> int:
    return x.exponent if x.sign else -(1 << 62)


def _satisfied(err, q: int, cfg: StrategyConfig) -> bool:
    """The recomputation check."""
    if err is EXACT:
        return True
    if isinstance(err, eb.DirectError) and not cfg.exact_ceil_log2:
        # the lossy direction: ceil_log2 of the stored radius, then compare
        return eb.phi_hat(err, False) <= q
    return eb.leq_accuracy(err, q)


def _set_zero(node: Node, ctx: Context):
    node.approx = bf.ZERO
    node.error = EXACT
    collapse_to_bigfloat(node, ctx.counters)


def _finish(node: Node, value: BigFloat, err, ctx: Context):
    node.approx = value
    node.error = err
    if err is EXACT:
        collapse_to_bigfloat(node, ctx.counters)
        return
    # keep the filter consistent with what is now known
    lo, hi = node.lo, node.hi
    if not eb.covers_zero(value, err):
        if value.sign > 0 and lo < 0:
            node.lo = 0.0
        elif value.sign < 0 and hi > 0:
            node.hi = 0.0


# Bottom-up initialization


def init_bottom_up(node: Node, ctx: Context):
    """Give every reachable node an approximation and an error bound."""
    if node.init_done:
        return
    _run(_init, node, ctx)


def _init(root: Node, ctx: Context):
    for node in iter_nodes(root):
        if not node.init_done:
            _init_node(node, ctx)


def _child_error(c: Node, rep: Rep, cfg: StrategyConfig):
    return eb.convert(c.error, rep, cfg.exact_ceil_log2)


def _init_node(node: Node, ctx: Context):
    cfg = ctx.config
    rep = cfg.init_rep
    prec = cfg.init_precision_bits
    kind = node.kind
    kids = node.children
    if kind is NodeKind.DIV:
        _ensure_nonzero_divisor(kids[1], ctx)
    elif kind is NodeKind.ROOT:
        if _init_root_operand(node, ctx):
            return
    xs = [c.approx for c in kids]
    es = [_child_error(c, rep, cfg) for c in kids]
    if kind is NodeKind.MUL and any(c.error is EXACT and not c.approx.sign
                                    for c in kids):
        _finish_init(node, bf.ZERO, EXACT, ctx)
        return
    if kind is NodeKind.DIV and kids[0].error is EXACT and not xs[0].sign:
        _finish_init(node, bf.ZERO, EXACT, ctx)
        return
    r = _op(kind, xs, None if kind is NodeKind.NEG else prec, node.index, ctx)
    rnd = EXACT if r.exact else eb.from_exponent(r.error_exp, rep)
    if kind is NodeKind.NEG:
        err = es[0]
    elif kind is NodeKind.ADD or kind is NodeKind.SUB:
        err = eb.combine3(es[0], es[1], rnd)
    elif kind is NodeKind.MUL:
        x, y = xs
        ex, ey = es
        err = eb.combine_many([eb.scale_by(ey, x, cfg.exact_ceil_log2),
                               eb.scale_by(ex, y, cfg.exact_ceil_log2),
                               eb.product(ex, ey), rnd])
    elif kind is NodeKind.DIV:
        x, y = xs
        ex, ey = es
        lower = eb.lower_magnitude(y, kids[1].error)
        if ey is EXACT:
            prop = eb.divide_by(ex, lower)
        else:
            ratio = bf.div(abs(x), abs(y), eb.DIRECT_PRECISION, bf.UP).value
            prop = eb.divide_by(
                eb.combine(ex, eb.scale_by(ey, ratio, cfg.exact_ceil_log2)), lower)
        err = eb.combine(prop, rnd)
    else:
        k = node.index
        ex = es[0]
        if ex is EXACT:
            prop = EXACT
        else:
            lower = eb.lower_magnitude(xs[0], kids[0].error)
            s = bf.root(lower, k, eb.DIRECT_PRECISION, bf.DOWN).value
            denom = s
            for _ in range(k - 2):
                denom = bf.mul(denom, s, eb.DIRECT_PRECISION, bf.DOWN).value
            prop = eb.divide_by(ex, denom)
        err = eb.combine(prop, rnd)
    _finish_init(node, r.value, err, ctx)


def _finish_init(node: Node, value: BigFloat, err, ctx: Context):
    node.init_done = True
    err = eb.convert(err, ctx.config.store_rep, ctx.config.exact_ceil_log2)
    _finish(node, value, err, ctx)


def _ensure_nonzero_divisor(y: Node, ctx: Context):
    if y.error is EXACT:
        if not y.approx.sign:
            raise DivisionByZero(y)
        return
    if eb.covers_zero(y.approx, y.error) and _decide(y, ctx) == 0:
        raise DivisionByZero(y)


def _init_root_operand(node: Node, ctx: Context) -> bool:
    """Settle the operand sign of a root; True when ``node`` became zero."""
    x = node.children[0]
    if x.error is EXACT:
        s = x.approx.sign
    elif eb.covers_zero(x.approx, x.error):
        s = _decide(x, ctx)
    else:
        s = x.approx.sign
    if s == 0:
        node.init_done = True
        _set_zero(node, ctx)
        return True
    if s < 0 and node.index % 2 == 0:
        raise DomainError('even root of a negative number')
    return False


# Top-down accuracy requests


def request_accuracy(node: Node, q: int, ctx: Context):
    """Refine ``node`` until its error is at most ``2**q``."""
    init_bottom_up(node, ctx)
    _run(_refine, node, q, ctx)


def _upper_exp(c: Node, cfg: StrategyConfig) -> int:
    """``m`` with ``|value| <= 2**m`` for an initialized node."""
    x, err = c.approx, c.error
    if not x.sign:
        return eb.log_int_exponent(err, True)
    c_exp = bf.ceil_log2(x, cfg.exact_ceil_log2)
    if err is EXACT:
        return c_exp
    if eb.leq_accuracy(err, bf.floor_log2(x)):
        return c_exp + 1
    return max(c_exp, eb.log_int_exponent(err, True)) + 1


def _lower_exp(c: Node, ctx: Context, divisor: bool):
    """``L`` with ``|value| >= 2**L`` and error at most ``2**(L-1)``.

    Returns None when the value is zero (for root operands); a zero divisor
    raises :class:`DivisionByZero`.
    """
    if c.error is not EXACT and eb.covers_zero(c.approx, c.error):
        if _decide(c, ctx) == 0:
            if divisor:
                raise DivisionByZero(c)
            return None
    if c.error is EXACT:
        if not c.approx.sign:
            if divisor:
                raise DivisionByZero(c)
            return None
        return bf.floor_log2(c.approx)
    while True:
        f = bf.floor_log2(c.approx)
        if eb.leq_accuracy(c.error, f - 1):
            return f - 1
        _refine(c, f - 2, ctx)
        if c.error is EXACT:
            return _lower_exp(c, ctx, divisor)


def _refine(node: Node, q: int, ctx: Context) -> bool:
    """Ensure ``node.error <= 2**q``; True if the node was recomputed."""
    if node.kind is NodeKind.LEAF or _satisfied(node.error, q, ctx.config):
        return False
    cfg = ctx.config
    kind = node.kind
    kids = node.children
    if kind is NodeKind.NEG:
        _refine(kids[0], q, ctx)
        x = kids[0]
        ctx.counters.node_recomputations += 1
        err = eb.convert(x.error, cfg.store_rep, cfg.exact_ceil_log2)
        _finish(node, _op(kind, [x.approx], None, 0, ctx).value, err, ctx)
        return True
    if kind is NodeKind.ADD or kind is NodeKind.SUB:
        x, y = kids
        _refine(x, q - 2, ctx)
        _refine(y, q - 2, ctx)
        est = max(_bits(x.approx), _bits(y.approx)) + 1
    elif kind is NodeKind.MUL:
        x, y = kids
        if any(c.error is EXACT and not c.approx.sign for c in kids):
            ctx.counters.node_recomputations += 1
            _finish(node, bf.ZERO, EXACT, ctx)
            return True
        mx, my = _upper_exp(x, cfg), _upper_exp(y, cfg)
        _refine(x, min(q - 2 - my, mx), ctx)
        _refine(y, min(q - 2 - mx, my), ctx)
        if not x.approx.sign or not y.approx.sign:
            est = None
        else:
            est = _bits(x.approx) + _bits(y.approx)
    elif kind is NodeKind.DIV:
        x, y = kids
        ly = _lower_exp(y, ctx, True)
        if x.error is EXACT and not x.approx.sign:
            ctx.counters.node_recomputations += 1
            _finish(node, bf.ZERO, EXACT, ctx)
            return True
        mx = _upper_exp(x, cfg)
        _refine(x, q + ly - 3, ctx)
        _refine(y, min(q + 2 * ly - mx - 3, ly - 1), ctx)
        est = (_bits(x.approx) - _bits(y.approx) + 1) if x.approx.sign else None
    else:
        x = kids[0]
        k = node.index
        lx = _lower_exp(x, ctx, False)
        if lx is None:
            ctx.counters.node_recomputations += 1
            _set_zero(node, ctx)
            return True
        if x.approx.sign < 0 and k % 2 == 0:
            raise DomainError('even root of a negative number')
        _refine(x, min(q - 2 + (lx - 1) * (k - 1) // k, lx - 1), ctx)
        est = -(-_bits(x.approx) // k)
    ctx.counters.node_recomputations += 1
    xs = [c.approx for c in kids]
    if est is None:
        value, rounding_exact = bf.ZERO, True
    else:
        r = _op(kind, xs, max(2, est - (q - 2)), node.index, ctx)
        value, rounding_exact = r.value, r.exact
    if rounding_exact and all(c.error is EXACT for c in kids):
        err = EXACT
    else:
        err = eb.from_exponent(q, cfg.store_rep)
    _finish(node, value, err, ctx)
    if err is not EXACT and eb.covers_zero(value, err):
        _zero_check(node, q, ctx)
    return True


def _zero_check(node: Node, q: int, ctx: Context) -> bool:
    """Declare ``node`` zero when its error interval is inside the separation bound."""
    # |value| <= |approx| + 2**q <= 2**(q+1), and a nonzero value exceeds 2**sep
    if q + 1 <= compute_sep(node, ctx.counters, ctx.config.sep_cache):
        _set_zero(node, ctx)
        return True
    return False


# Sign determination


def _decide(node: Node, ctx: Context) -> int:
    """Sign of an initialized node by the accuracy loop."""
    if node.error is EXACT or not eb.covers_zero(node.approx, node.error):
        return node.approx.sign
    cfg = ctx.config
    q = cfg.q0
    while True:
        _refine(node, q, ctx)
        if node.error is EXACT or not eb.covers_zero(node.approx, node.error):
            return node.approx.sign
        sep = compute_sep(node, ctx.counters, cfg.sep_cache)
        if q + 1 <= sep:
            _set_zero(node, ctx)
            return 0
        # no accuracy beyond sep - 1 is ever needed to decide
        q = max(q * cfg.growth, sep - 1)


def sign(node: Node, ctx: Context) -> int:
    """Exact sign of the value of ``node``: -1, 0 or +1."""
    s = filter_sign(node)
    if s is not None:
        return s
    if node.lo == 0.0 == node.hi:
        return 0
    return _run(_sign_slow, node, ctx)


def _sign_slow(node: Node, ctx: Context) -> int:
    _init(node, ctx)
    return _decide(node, ctx)


def to_approx(node: Node, q: int, ctx: Context):
    """``(approx, error)`` with ``|approx - value| <= 2**q``."""
    request_accuracy(node, q, ctx)
    return node.approx, node.error


__all__ = ['StrategyConfig', 'Context', 'DivisionByZero', 'STRATEGIES', 'preset',
           'init_bottom_up', 'request_accuracy', 'sign', 'to_approx']
