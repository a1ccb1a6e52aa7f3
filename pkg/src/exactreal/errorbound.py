"""Error-bound representations and their combination rules.

Three carriers are supported for the radius ``r`` of an error interval
``[approx - r, approx + r]``:

* :class:`DirectError` keeps ``r`` itself in a short bigfloat,
* :class:`LogIntError` keeps an integer ``e`` with ``r = 2**e``,
* :class:`LogFloatError` keeps a machine float ``e`` with ``r <= 2**e``.

The singleton :data:`EXACT` stands for radius zero in every carrier.  All
operations round toward the pessimistic side so the denoted radius never
shrinks below the true one.
"""

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from . import bigfloat as bf
from .bigfloat import BigFloat, DomainError

DIRECT_PRECISION = 32

# Saturation limit standing in for a 64-bit machine integer.
LOG_INT_LIMIT = 1 << 62

_INF = math.inf


class Rep(enum.Enum):
    DIRECT = 'direct'
    LOG_INT = 'log_int'
    LOG_FLOAT = 'log_float'


class MixedRepresentationError(TypeError):
    """Two error bounds with different carriers were combined."""


class _Exact:
    __slots__ = ()
    rep = None

    def __repr__(self):
        return 'EXACT'

    def __reduce__(self):
        return 'EXACT'


EXACT = _Exact()


@dataclass(frozen=True)
class DirectError:
    radius: BigFloat
    rep = Rep.DIRECT

    def __post_init__(self):
        if self.radius.sign <= 0:
            raise ValueError('direct error radius must be positive; use EXACT')


@dataclass(frozen=True)
class LogIntError:
    exponent: int
    rep = Rep.LOG_INT

    def __post_init__(self):
        if abs(self.exponent) > LOG_INT_LIMIT:
            raise OverflowError('log-int error exponent out of range')


@dataclass(frozen=True)
class LogFloatError:
    exponent: float
    rep = Rep.LOG_FLOAT

    def __post_init__(self):
        if not math.isfinite(self.exponent):
            raise OverflowError('log-float error exponent is not finite')


# Rounding helpers for machine floats


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def add_up(a: float, b: float) -> float:
    s = a + b
    # two-sum residue tells whether s fell below the exact sum
    bb = s - a
    if (a - (s - bb)) + (b - bb) > 0:
        return _up(s)
    return s


def add_down(a: float, b: float) -> float:
    return -add_up(-a, -b)


def _top_bits(x: BigFloat):
    """52-bit integers ``lo <= |x| / 2**shift <= hi``."""
    if not x.sign:
        raise DomainError('log2 of zero')
    shift = max(0, x.man.bit_length() - 52)
    lo = x.man >> shift
    hi = lo + 1 if x.man & ((1 << shift) - 1) else lo
    return lo, hi, x.exp + shift


def log2_upper(x: BigFloat) -> float:
    """Float ``>= log2(|x|)``."""
    if x.sign and x.man == 1:
        return float(x.exp)
    _, hi, shift = _top_bits(x)
    return add_up(_up(_up(math.log2(hi))), float(shift))


def log2_lower(x: BigFloat) -> float:
    """Float ``<= log2(|x|)``."""
    if x.sign and x.man == 1:
        return float(x.exp)
    lo, _, shift = _top_bits(x)
    return add_down(_down(_down(math.log2(lo))), float(shift))


# Conversions Phi / Phi-hat


def phi(e_log: int) -> DirectError:
    """Lossless conversion of a logarithmic bound ``2**e_log`` to a radius."""
    return DirectError(BigFloat.pow2(e_log))


def phi_hat(e_dir, exact: bool) -> int:
    """``ceil(log2(radius))`` of a direct bound, exactly or via the stored exponent."""
    radius = e_dir.radius if isinstance(e_dir, DirectError) else e_dir
    if radius.sign <= 0:
        raise DomainError('phi_hat of a zero radius; use EXACT')
    return bf.ceil_log2(radius, exact)


def from_exponent(k: int, rep: Rep):
    """The bound ``2**k`` in carrier ``rep``."""
    if rep is Rep.LOG_INT:
        return LogIntError(k)
    if rep is Rep.LOG_FLOAT:
        return LogFloatError(float(k))
    return phi(k)


def from_radius(r: BigFloat, rep: Rep):
    """Smallest-effort bound ``>= r`` in carrier ``rep``."""
    if not r.sign:
        return EXACT
    if rep is Rep.DIRECT:
        return DirectError(bf.round_to(abs(r), DIRECT_PRECISION, bf.UP).value)
    if rep is Rep.LOG_INT:
        return LogIntError(bf.ceil_log2_exact(r))
    return LogFloatError(log2_upper(r))


def convert(e, rep: Rep, exact_ceil_log2: bool = True):
    """Re-express ``e`` in carrier ``rep`` without shrinking the radius."""
    if e is EXACT or e.rep is rep:
        return e
    if rep is Rep.DIRECT:
        return DirectError(radius_upper(e))
    if isinstance(e, DirectError):
        if rep is Rep.LOG_INT:
            return LogIntError(phi_hat(e, exact_ceil_log2))
        return LogFloatError(log2_upper(e.radius))
    if rep is Rep.LOG_INT:
        return LogIntError(math.ceil(e.exponent))
    return LogFloatError(float(e.exponent))


def log_int_exponent(e, exact: bool = True):
    """Integer ``k`` with radius ``<= 2**k``; None for EXACT."""
    if e is EXACT:
        return None
    if isinstance(e, LogIntError):
        return e.exponent
    if isinstance(e, LogFloatError):
        return math.ceil(e.exponent)
    return phi_hat(e, exact)


def radius_upper(e) -> BigFloat:
    """A bigfloat no smaller than the denoted radius."""
    if e is EXACT:
        return bf.ZERO
    if isinstance(e, DirectError):
        return e.radius
    if isinstance(e, LogIntError):
        return BigFloat.pow2(e.exponent)
    whole = math.floor(e.exponent)
    frac = _up(_up(2.0 ** (e.exponent - whole)))
    m = BigFloat(frac)
    return BigFloat.from_parts(1, m.man, m.exp + whole)


def radius_fraction(e) -> Fraction:
    """Exact radius for the direct and log-int carriers."""
    if e is EXACT:
        return Fraction(0)
    if isinstance(e, DirectError):
        return e.radius.to_fraction()
    if isinstance(e, LogIntError):
        return Fraction(2) ** e.exponent
    raise TypeError('log-float radii are irrational in general')


# Combination


def _check_same(*terms):
    rep = None
    for t in terms:
        if t is EXACT:
            continue
        if rep is None:
            rep = t.rep
        elif t.rep is not rep:
            raise MixedRepresentationError(
                'cannot combine {} with {}'.format(rep.value, t.rep.value))
    return rep


def _saturate(k: int) -> int:
    if abs(k) > LOG_INT_LIMIT:
        raise OverflowError('log-int error exponent saturated')
    return k


def _pow2_up(x: float) -> float:
    """Float ``>= 2**x``."""
    p = 2.0 ** x
    if x == math.floor(x) and p >= 2.2250738585072014e-308:
        return p
    return _up(p)


def log2_sum_up(a: float, b: float) -> float:
    hi, lo = (a, b) if a >= b else (b, a)
    cap = add_up(hi, 1.0)
    if hi == lo:
        return cap
    d = add_down(hi, -lo)
    t = _pow2_up(-d)
    s = add_up(1.0, t)
    c = add_up(hi, _up(_up(math.log2(s))))
    return min(c, cap)


def combine(a, b):
    """Bound on the sum of the radii of ``a`` and ``b``."""
    rep = _check_same(a, b)
    if a is EXACT:
        return b
    if b is EXACT:
        return a
    if rep is Rep.LOG_INT:
        return LogIntError(_saturate(max(a.exponent, b.exponent) + 1))
    if rep is Rep.LOG_FLOAT:
        return LogFloatError(log2_sum_up(a.exponent, b.exponent))
    return DirectError(bf.add(a.radius, b.radius, DIRECT_PRECISION, bf.UP).value)


def combine3(a, b, c):
    """Bound on the sum of three radii."""
    rep = _check_same(a, b, c)
    if rep is Rep.LOG_FLOAT:
        return combine_many([a, b, c])
    return combine(combine(a, b), c)


def combine_many(terms):
    """Bound on the sum of any number of radii."""
    rep = _check_same(*terms)
    live = [t for t in terms if t is not EXACT]
    if not live:
        return EXACT
    if len(live) == 1:
        return live[0]
    if rep is Rep.LOG_FLOAT:
        exps = [t.exponent for t in live]
        hi = max(exps)
        total = 0.0
        for x in exps:
            total = add_up(total, _pow2_up(add_up(x, -hi)))
        return LogFloatError(add_up(hi, _up(_up(math.log2(total)))))
    acc = live[0]
    for t in live[1:]:
        acc = combine(acc, t)
    return acc


def scale_pow2(e, k: int):
    """Bound on ``2**k`` times the radius."""
    if e is EXACT:
        return EXACT
    if isinstance(e, LogIntError):
        return LogIntError(_saturate(e.exponent + k))
    if isinstance(e, LogFloatError):
        return LogFloatError(add_up(e.exponent, float(k)))
    r = e.radius
    return DirectError(BigFloat.from_parts(1, r.man, r.exp + k))


def scale_by(e, x: BigFloat, exact_ceil_log2: bool = False):
    """Bound on ``|x|`` times the radius."""
    if e is EXACT or not x.sign:
        return EXACT
    if isinstance(e, LogIntError):
        return LogIntError(_saturate(e.exponent + bf.ceil_log2(x, exact_ceil_log2)))
    if isinstance(e, LogFloatError):
        return LogFloatError(add_up(e.exponent, log2_upper(x)))
    return DirectError(bf.mul(e.radius, abs(x), DIRECT_PRECISION, bf.UP).value)


def divide_by(e, lower: BigFloat):
    """Bound on the radius divided by any value of magnitude ``>= lower > 0``."""
    if lower.sign <= 0:
        raise DomainError('divisor lower bound must be positive')
    if e is EXACT:
        return EXACT
    if isinstance(e, LogIntError):
        return LogIntError(_saturate(e.exponent - bf.floor_log2(lower)))
    if isinstance(e, LogFloatError):
        return LogFloatError(add_up(e.exponent, -log2_lower(lower)))
    return DirectError(bf.div(e.radius, lower, DIRECT_PRECISION, bf.UP).value)


def product(a, b):
    """Bound on the product of two radii."""
    rep = _check_same(a, b)
    if a is EXACT or b is EXACT:
        return EXACT
    if rep is Rep.LOG_INT:
        return LogIntError(_saturate(a.exponent + b.exponent))
    if rep is Rep.LOG_FLOAT:
        return LogFloatError(add_up(a.exponent, b.exponent))
    return DirectError(bf.mul(a.radius, b.radius, DIRECT_PRECISION, bf.UP).value)


# Queries


def leq_accuracy(e, q: int) -> bool:
    """True iff the radius is guaranteed to be at most ``2**q``."""
    if e is EXACT:
        return True
    if isinstance(e, (LogIntError, LogFloatError)):
        return e.exponent <= q
    return bf.compare(e.radius, BigFloat.pow2(q)) <= 0


def covers_zero(approx: BigFloat, e) -> bool:
    """True iff zero lies in ``[approx - r, approx + r]``."""
    if not approx.sign:
        return True
    if e is EXACT:
        return False
    if isinstance(e, DirectError):
        return bf.compare_abs(approx, e.radius) <= 0
    c = bf.ceil_log2_exact(approx)
    if isinstance(e, LogIntError):
        return c <= e.exponent
    if c <= e.exponent:
        return True
    if c - 1 >= e.exponent:
        return False
    # log2|approx| lies in (c-1, c]; ambiguity is resolved toward covering
    return log2_lower(approx) <= e.exponent


def lower_magnitude(approx: BigFloat, e):
    """Bigfloat ``0 < L <= |value|``, or None if zero is not excluded."""
    if e is EXACT:
        return abs(approx) if approx.sign else None
    if covers_zero(approx, e):
        return None
    diff = bf.sub(abs(approx), radius_upper(e), DIRECT_PRECISION, bf.DOWN).value
    return diff if diff.sign > 0 else None


def upper_magnitude(approx: BigFloat, e) -> BigFloat:
    """Bigfloat ``>= |value|``."""
    if e is EXACT:
        return abs(approx)
    return bf.add(abs(approx), radius_upper(e), DIRECT_PRECISION, bf.UP).value
