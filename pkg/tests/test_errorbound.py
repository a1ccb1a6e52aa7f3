import math
from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given, strategies as st

from exactreal import errorbound as eb
from exactreal.bigfloat import BigFloat, DomainError
from exactreal.errorbound import (EXACT, DirectError, LogFloatError, LogIntError,
                                  MixedRepresentationError, Rep)

_ctx = gmpy2.context(precision=4000)
# relative slack covering mpfr rounding at 4000 bits, far below float resolution
with gmpy2.context(_ctx):
    _SLACK = 1 - gmpy2.mpfr(2) ** -3900


@pytest.fixture(autouse=True, scope='module')
def wide_mpfr():
    # every mpfr sum and product in this module runs at 4000 bits
    with gmpy2.context(_ctx):
        yield


def pow2(f: float):
    return gmpy2.exp2(gmpy2.mpfr(f))


def at_least(lhs, rhs) -> bool:
    return lhs >= rhs * _SLACK


def d(x) -> DirectError:
    return DirectError(BigFloat(x))


radii = st.builds(lambda m, e: BigFloat.from_parts(1, m, e),
                  st.integers(1, 1 << 40), st.integers(-80, 20))
log_ints = st.integers(-400, 400).map(LogIntError)
log_floats = st.floats(-400, 400, allow_nan=False).map(LogFloatError)
directs = radii.map(DirectError)


def radius(e):
    """Radius at 4000 bits; exact for the direct and log-int carriers."""
    if isinstance(e, LogFloatError):
        return pow2(e.exponent)
    return gmpy2.mpfr(eb.radius_fraction(e), precision=4000)


def big(x: BigFloat):
    return gmpy2.mpfr(x.to_fraction(), precision=4000)


# Carriers


def test_carrier_validation():
    with pytest.raises(ValueError):
        DirectError(BigFloat(0))
    with pytest.raises(ValueError):
        DirectError(BigFloat(-1))
    with pytest.raises(OverflowError):
        LogIntError(eb.LOG_INT_LIMIT + 1)
    with pytest.raises(OverflowError):
        LogFloatError(math.inf)


# Phi and phi-hat


@pytest.mark.parametrize('e, value', [(-3, Fraction(1, 8)), (0, 1), (50, 2 ** 50)])
def test_phi_examples(e, value):
    r = eb.phi(e).radius
    assert r.to_fraction() == value
    assert r.mantissa == Fraction(1, 2) and r.exponent == e + 1


def test_phi_hat_examples():
    assert eb.phi_hat(d(0.125), True) == -3
    assert eb.phi_hat(d(0.125), False) == -2
    assert eb.phi_hat(d(0.75), True) == 0
    with pytest.raises(DomainError):
        eb.phi_hat(BigFloat(0), True)


@given(st.integers(-(1 << 20), 1 << 20))
def test_phi_round_trip(e):
    assert eb.phi_hat(eb.phi(e), True) == e
    assert eb.phi_hat(eb.phi(e), False) == e + 1


@given(st.sampled_from(list(Rep)), st.sampled_from(list(Rep)),
       st.integers(-200, 200), st.booleans())
def test_convert_never_shrinks(src, dst, k, exact):
    e = eb.from_exponent(k, src)
    c = eb.convert(e, dst, exact)
    assert c.rep is dst
    assert at_least(radius(c), radius(e))


def test_convert_exact_marker():
    for rep in Rep:
        assert eb.convert(EXACT, rep) is EXACT


# Combination


def test_combine_examples():
    assert eb.combine(LogIntError(-10), LogIntError(-10)) == LogIntError(-9)
    assert eb.radius_fraction(eb.combine(d(0.25), d(0.5))) == Fraction(3, 4)
    c = eb.combine(LogFloatError(-10.0), LogFloatError(-12.0)).exponent
    assert c <= -9
    assert -10 + math.log2(1.25) <= c < -9.6780
    assert at_least(pow2(c), pow2(-10) + pow2(-12))


def test_combine_exact_is_identity():
    for e in (LogIntError(3), LogFloatError(1.5), d(3)):
        assert eb.combine(EXACT, e) == e
        assert eb.combine(e, EXACT) == e
    assert eb.combine(EXACT, EXACT) is EXACT


def test_mixed_representations_rejected():
    with pytest.raises(MixedRepresentationError):
        eb.combine(LogIntError(1), LogFloatError(1.0))
    with pytest.raises(MixedRepresentationError):
        eb.combine3(d(1), LogIntError(1), EXACT)
    with pytest.raises(MixedRepresentationError):
        eb.product(d(1), LogIntError(1))


def test_log_int_overflow():
    with pytest.raises(OverflowError):
        eb.combine(LogIntError(eb.LOG_INT_LIMIT), LogIntError(0))
    with pytest.raises(OverflowError):
        eb.scale_pow2(LogIntError(eb.LOG_INT_LIMIT), 1)


def carriers():
    return st.one_of(
        st.tuples(log_ints, log_ints, log_ints),
        st.tuples(log_floats, log_floats, log_floats),
        st.tuples(directs, directs, directs))


@given(carriers())
def test_combine_sound(terms):
    a, b, c = terms
    assert at_least(radius(eb.combine(a, b)), radius(a) + radius(b))
    total = radius(a) + radius(b) + radius(c)
    assert at_least(radius(eb.combine3(a, b, c)), total)
    assert at_least(radius(eb.combine_many([a, EXACT, b, c])), total)


@given(log_floats, log_floats)
def test_log_float_tightness(a, b):
    c = eb.combine(a, b).exponent
    hi = max(a.exponent, b.exponent)
    # never worse than the log-int rule, up to the upward rounding of hi + 1
    assert c <= eb.add_up(hi, 1.0)
    assert eb.combine(a, a).exponent == eb.add_up(a.exponent, 1.0)


@given(st.integers(-100, 100), st.integers(1, 40))
def test_log_int_sequential_growth(e, m):
    acc = LogIntError(e)
    for _ in range(m):
        acc = eb.combine(acc, LogIntError(e))
    assert acc.exponent == e + m


@given(radii, st.integers(1, 64))
def test_direct_sum_of_equal_radii(r, m):
    acc = EXACT
    for _ in range(m):
        acc = eb.combine(acc, DirectError(r))
    total = eb.radius_fraction(acc)
    exact = m * r.to_fraction()
    assert exact <= total <= exact * (1 + Fraction(m, 1 << 31))


# Scaling


def test_scale_pow2_examples():
    assert eb.scale_pow2(LogIntError(-20), 5) == LogIntError(-15)
    assert eb.radius_fraction(eb.scale_pow2(d(0.25), 2)) == 1
    assert eb.scale_pow2(LogFloatError(-9.5), -3) == LogFloatError(-12.5)
    assert eb.scale_pow2(EXACT, 4) is EXACT


@given(st.one_of(log_ints, log_floats, directs),
       radii.map(lambda r: BigFloat.from_parts(-1, r.man, r.exp)))
def test_scale_by_and_divide_by_sound(e, x):
    mag = abs(big(x))
    assert at_least(radius(eb.scale_by(e, x)), radius(e) * mag)
    assert at_least(radius(eb.scale_by(e, x, True)), radius(e) * mag)
    assert at_least(radius(eb.divide_by(e, abs(x))), radius(e) / mag)


@given(carriers())
def test_product_sound(terms):
    a, b, _ = terms
    assert at_least(radius(eb.product(a, b)), radius(a) * radius(b))


def test_divide_by_needs_positive_bound():
    with pytest.raises(DomainError):
        eb.divide_by(LogIntError(0), BigFloat(0))


# Queries


def test_leq_accuracy_examples():
    assert eb.leq_accuracy(LogIntError(-12), -10)
    assert eb.leq_accuracy(d(0.125), -3)
    assert not eb.leq_accuracy(d(0.126953125), -3)
    assert not eb.leq_accuracy(LogFloatError(-9.5), -10)
    assert eb.leq_accuracy(EXACT, -10 ** 9)


def test_covers_zero_examples():
    assert not eb.covers_zero(BigFloat(1), LogIntError(-1))
    assert eb.covers_zero(BigFloat(0.25), LogIntError(-1))
    assert eb.covers_zero(BigFloat(0), EXACT)
    assert not eb.covers_zero(BigFloat(0.25), EXACT)
    assert eb.covers_zero(BigFloat(0.5), LogIntError(-1))
    assert eb.covers_zero(BigFloat(-0.5), d(0.5))


@given(radii, st.booleans(), st.one_of(log_ints, log_floats, directs))
def test_covers_zero_sound(r, negative, e):
    x = BigFloat.from_parts(-1 if negative else 1, r.man, r.exp)
    mag = abs(big(x))
    r = radius(e)
    if mag <= r:
        assert eb.covers_zero(x, e)
    if not eb.covers_zero(x, e):
        assert mag > r
        # None is allowed: it only withholds a lower bound
        low = eb.lower_magnitude(x, e)
        if low is not None:
            assert low.sign > 0 and at_least(mag - r, big(low))
    assert at_least(big(eb.upper_magnitude(x, e)), mag + r)


def test_lower_magnitude_far_from_zero():
    low = eb.lower_magnitude(BigFloat(3), LogIntError(0))
    assert low is not None and low.to_fraction() == 2
    assert eb.lower_magnitude(BigFloat(0.5), LogIntError(0)) is None


def test_log2_bounds():
    for v in (3, 5, 0.75, 2 ** 100 + 1, 7 * 2 ** -300):
        x = BigFloat(v)
        lo, hi = eb.log2_lower(x), eb.log2_upper(x)
        assert at_least(big(x), pow2(lo))
        assert at_least(pow2(hi), big(x))
