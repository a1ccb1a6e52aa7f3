"""Arbitrary-precision binary floating-point numbers with directed rounding.

A :class:`BigFloat` stores ``sign * man * 2**exp`` with an odd integer
mantissa, so every stored value is exact.  The conventional normalized view
``m * 2**b`` with ``m`` in ``[0.5, 1)`` is exposed through
:attr:`BigFloat.exponent` and :attr:`BigFloat.mantissa`.

Arithmetic helpers return a :class:`Rounded` pair: the rounded value and the
exponent ``k`` of a bound ``2**k`` on the rounding error (``None`` when the
result is exact).
"""

import enum
import math
from fractions import Fraction
from typing import NamedTuple, Optional


class DomainError(ArithmeticError):
    """Raised for operations outside the domain of the real function."""


class RoundingMode(enum.Enum):
    TOWARD_NEGATIVE = 'toward_negative'
    TOWARD_POSITIVE = 'toward_positive'
    TO_NEAREST = 'to_nearest'
    AWAY_FROM_ZERO = 'away_from_zero'


NEAREST = RoundingMode.TO_NEAREST
UP = RoundingMode.TOWARD_POSITIVE
DOWN = RoundingMode.TOWARD_NEGATIVE
AWAY = RoundingMode.AWAY_FROM_ZERO


class BigFloat:
    __slots__ = ('sign', 'man', 'exp')

    def __init__(self, value=0):
        if isinstance(value, BigFloat):
            sign, man, exp = value.sign, value.man, value.exp
        elif isinstance(value, int):
            sign, man, exp = _sign(value), abs(value), 0
        elif isinstance(value, float):
            if not math.isfinite(value):
                raise ValueError('cannot convert {!r} to BigFloat'.format(value))
            num, den = value.as_integer_ratio()
            sign, man, exp = _sign(num), abs(num), -(den.bit_length() - 1)
        elif isinstance(value, Fraction):
            den = value.denominator
            if den & (den - 1):
                raise ValueError('{} is not a dyadic rational'.format(value))
            sign, man, exp = (_sign(value.numerator), abs(value.numerator),
                              -(den.bit_length() - 1))
        else:
            raise TypeError('cannot convert {!r} to BigFloat'
                            .format(type(value).__name__))
        _init(self, sign, man, exp)

    @classmethod
    def from_parts(cls, sign: int, man: int, exp: int) -> 'BigFloat':
        """Build ``sign * man * 2**exp``; ``man`` need not be odd."""
        self = cls.__new__(cls)
        _init(self, sign, man, exp)
        return self

    @classmethod
    def pow2(cls, k: int) -> 'BigFloat':
        return cls.from_parts(1, 1, k)

    @property
    def exponent(self) -> int:
        """Exponent ``b`` of the normalized form ``m * 2**b``, m in [0.5, 1)."""
        if not self.sign:
            raise DomainError('zero has no exponent')
        return self.man.bit_length() + self.exp

    @property
    def mantissa(self) -> Fraction:
        if not self.sign:
            return Fraction(0)
        return Fraction(self.sign * self.man, 1 << self.man.bit_length())

    @property
    def precision(self) -> int:
        """Number of significant bits actually stored."""
        return self.man.bit_length()

    def is_zero(self) -> bool:
        return not self.sign

    def to_fraction(self) -> Fraction:
        if self.exp >= 0:
            return Fraction(self.sign * (self.man << self.exp))
        return Fraction(self.sign * self.man, 1 << -self.exp)

    def float_bounds(self):
        """Machine floats ``lo <= self <= hi``, infinities on overflow."""
        if not self.sign:
            return 0.0, 0.0
        b = self.exponent
        if b > 1025:
            return ((math.inf, math.inf) if self.sign > 0 else (-math.inf, -math.inf))
        if b < -1080:
            tiny = math.ulp(0.0)
            return (0.0, tiny) if self.sign > 0 else (-tiny, 0.0)
        exact = self.to_fraction()
        try:
            f = float(exact)
        except OverflowError:
            f = math.copysign(math.inf, self.sign)
        if math.isinf(f):
            big = math.copysign(1.7976931348623157e308, self.sign)
            return (big, f) if self.sign > 0 else (f, big)
        back = Fraction(f)
        if back == exact:
            return f, f
        if back < exact:
            return f, math.nextafter(f, math.inf)
        return math.nextafter(f, -math.inf), f

    def __float__(self) -> float:
        lo, hi = self.float_bounds()
        return lo if lo == hi else (lo if math.isinf(hi) else hi)

    def __neg__(self) -> 'BigFloat':
        return BigFloat.from_parts(-self.sign, self.man, self.exp)

    def __abs__(self) -> 'BigFloat':
        return BigFloat.from_parts(abs(self.sign), self.man, self.exp)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, float, Fraction)):
            try:
                other = BigFloat(other)
            except ValueError:
                return False
        if not isinstance(other, BigFloat):
            return NotImplemented
        return (self.sign == other.sign and self.man == other.man
                and self.exp == other.exp)

    def __hash__(self):
        return hash(self.to_fraction())

    def __lt__(self, other: 'BigFloat') -> bool:
        return compare(self, _coerce(other)) < 0

    def __le__(self, other: 'BigFloat') -> bool:
        return compare(self, _coerce(other)) <= 0

    def __gt__(self, other: 'BigFloat') -> bool:
        return compare(self, _coerce(other)) > 0

    def __ge__(self, other: 'BigFloat') -> bool:
        return compare(self, _coerce(other)) >= 0

    def __repr__(self) -> str:
        if not self.sign:
            return 'BigFloat(0)'
        return 'BigFloat({}{}*2**{})'.format('-' if self.sign < 0 else '',
                                             self.man, self.exp)



class Rounded(NamedTuple):
    value: BigFloat
    error_exp: Optional[int]

    @property
    def exact(self) -> bool:
        return self.error_exp is None


def _sign(n) -> int:
    return (n > 0) - (n < 0)


def _init(self, sign, man, exp):
    if not man or not sign:
        self.sign, self.man, self.exp = 0, 0, 0
        return
    tz = (man & -man).bit_length() - 1
    self.sign = 1 if sign > 0 else -1
    self.man = man >> tz
    self.exp = exp + tz


def _coerce(x) -> BigFloat:
    return x if isinstance(x, BigFloat) else BigFloat(x)


ZERO = BigFloat(0)
ONE = BigFloat(1)


def compare(a: BigFloat, b: BigFloat) -> int:
    """Exact three-way comparison."""
    if a.sign != b.sign:
        return _sign(a.sign - b.sign)
    if not a.sign:
        return 0
    return a.sign * _cmp_abs(a, b)


def _cmp_abs(a: BigFloat, b: BigFloat) -> int:
    ea, eb = a.exponent, b.exponent
    if ea != eb:
        return _sign(ea - eb)
    e = min(a.exp, b.exp)
    return _sign((a.man << (a.exp - e)) - (b.man << (b.exp - e)))


def compare_abs(a: BigFloat, b: BigFloat) -> int:
    """Exact three-way comparison of ``|a|`` and ``|b|``."""
    if not a.sign or not b.sign:
        return _sign(abs(a.sign) - abs(b.sign))
    return _cmp_abs(a, b)


# Exponent extraction


def ceil_log2_inexact(x: BigFloat) -> int:
    """Stored exponent of ``|x|``; one too large when ``|x|`` is a power of two."""
    if not x.sign:
        raise DomainError('log2 of zero')
    return x.man.bit_length() + x.exp


def ceil_log2_exact(x: BigFloat) -> int:
    """Exactly ``ceil(log2(|x|))``."""
    if not x.sign:
        raise DomainError('log2 of zero')
    # the mantissa is kept odd, so it is exactly 0.5 iff the stored integer is 1
    if x.man == 1:
        return x.exp
    return x.man.bit_length() + x.exp


def floor_log2(x: BigFloat) -> int:
    """Exactly ``floor(log2(|x|))``."""
    if not x.sign:
        raise DomainError('log2 of zero')
    return x.man.bit_length() + x.exp - 1


def ceil_log2(x: BigFloat, exact: bool) -> int:
    return ceil_log2_exact(x) if exact else ceil_log2_inexact(x)


# Rounding core


def _round(sign: int, man: int, exp: int, prec: Optional[int],
           rnd: RoundingMode, sticky: bool = False) -> Rounded:
    """Round ``sign * (man + t) * 2**exp`` to ``prec`` bits.

    ``sticky`` marks a nonzero tail ``0 < t < 1``; callers then supply at
    least two bits beyond ``prec``.
    """
    if not man and not sticky:
        return Rounded(ZERO, None)
    n = man.bit_length()
    if prec is None or n <= prec:
        if sticky:
            raise AssertionError('sticky rounding needs guard bits')
        return Rounded(BigFloat.from_parts(sign, man, exp), None)
    shift = n - prec
    q = man >> shift
    rem = man & ((1 << shift) - 1)
    if not rem and not sticky:
        return Rounded(BigFloat.from_parts(sign, q, exp + shift), None)
    if rnd is NEAREST:
        half = 1 << (shift - 1)
        up = rem > half or (rem == half and (sticky or q & 1))
    elif rnd is AWAY:
        up = True
    elif rnd is UP:
        up = sign > 0
    else:
        up = sign < 0
    if up:
        q += 1
    return Rounded(BigFloat.from_parts(sign, q, exp + shift), exp + shift)


def round_to(x: BigFloat, prec: int, rnd: RoundingMode = NEAREST) -> Rounded:
    _check_prec(prec)
    return _round(x.sign, x.man, x.exp, prec, rnd)


def _check_prec(prec):
    if prec is not None and prec < 2:
        raise ValueError('precision must be at least 2 bits, got {}'.format(prec))


# Arithmetic


def neg(a: BigFloat, prec: Optional[int] = None,
        rnd: RoundingMode = NEAREST) -> Rounded:
    _check_prec(prec)
    return _round(-a.sign, a.man, a.exp, prec, rnd)


def add(a: BigFloat, b: BigFloat, prec: Optional[int] = None,
        rnd: RoundingMode = NEAREST) -> Rounded:
    """``a + b`` rounded to ``prec`` bits; exact when ``prec`` is None."""
    _check_prec(prec)
    if not b.sign:
        return _round(a.sign, a.man, a.exp, prec, rnd)
    if not a.sign:
        return _round(b.sign, b.man, b.exp, prec, rnd)
    ea = a.man.bit_length() + a.exp
    eb = b.man.bit_length() + b.exp
    if ea < eb:
        a, b, ea, eb = b, a, eb, ea
    if prec is not None:
        # |b| < 2**low and a is a multiple of 2**low: every value in
        # (a, a +- 2**low) rounds alike, so b may be replaced by a stand-in.
        low = min(a.exp, ea - prec - 2)
        if eb <= low:
            b = BigFloat.from_parts(b.sign, 1, low - 1)
    e = min(a.exp, b.exp)
    s = a.sign * (a.man << (a.exp - e)) + b.sign * (b.man << (b.exp - e))
    return _round(_sign(s), abs(s), e, prec, rnd)


def sub(a: BigFloat, b: BigFloat, prec: Optional[int] = None,
        rnd: RoundingMode = NEAREST) -> Rounded:
    return add(a, -b, prec, rnd)


def mul(a: BigFloat, b: BigFloat, prec: Optional[int] = None,
        rnd: RoundingMode = NEAREST) -> Rounded:
    _check_prec(prec)
    if prec is not None and rnd is NEAREST:
        # Operands far longer than needed are truncated to prec + 4 bits; the
        # truncation error stays below half an ulp of the result, so the
        # reported bound of one ulp remains valid.
        keep = prec + 4
        am, ae = _truncate(a.man, a.exp, keep)
        bm, be = _truncate(b.man, b.exp, keep)
        if am != a.man or bm != b.man:
            p = am * bm
            r = _round(a.sign * b.sign, p, ae + be, prec, rnd)
            if r.exact:
                r = Rounded(r.value, p.bit_length() + ae + be - prec)
            return r
    return _round(a.sign * b.sign, a.man * b.man, a.exp + b.exp, prec, rnd)


def _truncate(man: int, exp: int, keep: int):
    drop = man.bit_length() - keep
    if drop <= 0:
        return man, exp
    return man >> drop, exp + drop


def div(a: BigFloat, b: BigFloat, prec: int,
        rnd: RoundingMode = NEAREST) -> Rounded:
    _check_prec(prec)
    if not b.sign:
        raise DomainError('division by zero')
    if not a.sign:
        return Rounded(ZERO, None)
    shift = max(0, prec + 2 + b.man.bit_length() - a.man.bit_length())
    q, r = divmod(a.man << shift, b.man)
    return _round(a.sign * b.sign, q, a.exp - b.exp - shift, prec, rnd,
                  sticky=bool(r))


def sqrt(a: BigFloat, prec: int, rnd: RoundingMode = NEAREST) -> Rounded:
    return root(a, 2, prec, rnd)


def root(a: BigFloat, k: int, prec: int,
         rnd: RoundingMode = NEAREST) -> Rounded:
    """Real ``k``-th root; odd ``k`` accepts negative operands."""
    _check_prec(prec)
    if k < 2:
        raise ValueError('root index must be at least 2, got {}'.format(k))
    if not a.sign:
        return Rounded(ZERO, None)
    if a.sign < 0 and k % 2 == 0:
        raise DomainError('even root of a negative number')
    man, exp = a.man, a.exp
    r = exp % k
    man <<= r
    exp -= r
    # scale so the integer root carries at least prec + 2 bits
    need = k * (prec + 2) - man.bit_length()
    t = max(0, -(-need // k)) if need > 0 else 0
    man <<= k * t
    exp -= k * t
    rt = iroot(man, k)
    sticky = rt ** k != man
    return _round(a.sign, rt, exp // k, prec, rnd, sticky=sticky)


def iroot(n: int, k: int) -> int:
    """Floor of the real ``k``-th root of a non-negative integer."""
    if n < 0:
        raise DomainError('iroot of a negative integer')
    if n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


_OPS = {
    'add': add,
    'sub': sub,
    'mul': mul,
    'div': div,
}


def bf_arith(op: str, operands, prec: int, rnd: RoundingMode = NEAREST,
             k: int = 2) -> Rounded:
    """Dispatch ``op`` over ``operands`` at ``prec`` bits in direction ``rnd``."""
    if op in _OPS:
        a, b = operands
        return _OPS[op](a, b, prec, rnd)
    (a,) = operands
    if op == 'neg':
        return neg(a, prec, rnd)
    if op == 'sqrt':
        return root(a, 2, prec, rnd)
    if op == 'root_k':
        return root(a, k, prec, rnd)
    raise ValueError('unknown operation {!r}'.format(op))
