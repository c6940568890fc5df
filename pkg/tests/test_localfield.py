import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_henon.errors import DivisionByZero, NotIntegral, NotSquare, ParseError, PrecisionExhausted
from padic_henon.localfield import (
    BOTTOM,
    HalfLogNorm,
    PadicNumber,
    add,
    agrees,
    distance,
    div,
    is_square,
    mul,
    norm,
    parse_literal,
    parse_rational,
    random_padic,
    rational_reconstruction,
    reduce_mod,
    sqrt,
    sqrt_mod_prime,
    sub,
)


def Q(x, p=3, N=8):
    return PadicNumber.from_fraction(Fraction(x), p, N)


# parse_rational

def test_parse_factor_out_p():
    x = parse_rational(12, 1, 3, 4)
    assert (x.v, x.u) == (1, 4)


def test_parse_negative_valuation():
    x = parse_rational(1, 9, 3, 4)
    assert (x.v, x.u) == (-2, 1)


def test_parse_inverse_of_two_matches_brute_force():
    x = parse_rational(1, 2, 3, 2)
    inv = next(u for u in range(9) if 2 * u % 9 == 1)
    assert (x.v, x.u) == (0, inv) == (0, 5)


def test_parse_zero_denominator():
    with pytest.raises(DivisionByZero):
        parse_rational(1, 0, 3, 4)


def test_parse_zero_numerator():
    assert parse_rational(0, 7, 3, 4).is_zero


# arithmetic

def test_add_carries_into_valuation():
    s = add(Q(4), Q(2))
    assert (s.v, s.u) == (1, 2)


def test_mul_by_zero_absorbs():
    assert mul(Q(Fraction(5, 27)), PadicNumber.zero(3)).is_zero


def test_div_one_by_p():
    d = div(Q(1), Q(3))
    assert (d.v, d.u) == (-1, 1)


def test_div_by_zero():
    with pytest.raises(DivisionByZero):
        div(Q(1), PadicNumber.zero(3))


def test_cancellation_reduces_precision():
    x = Q(1, N=6)
    y = Q(1 + 3**4, N=6)
    d = sub(y, x)
    assert d.v == 4
    assert d.N == 2


def test_total_cancellation_raises():
    with pytest.raises(PrecisionExhausted):
        sub(Q(5), Q(5))
    assert sub(Q(5), Q(5), zero_ok=True).is_zero


def test_mixed_primes_rejected():
    with pytest.raises(ValueError):
        add(Q(1, 3), Q(1, 5))


# norm

def test_norm_values():
    assert norm(Q(12)).numerator == -2
    assert norm(Q(Fraction(1, 9))).numerator == 4
    assert norm(PadicNumber.zero(3)) == BOTTOM


def test_halflognorm_arithmetic():
    r = HalfLogNorm(3)
    assert (r * r).numerator == 6
    assert (r / r) == HalfLogNorm(0)
    assert HalfLogNorm(4).sqrt() == HalfLogNorm(2)
    assert BOTTOM < HalfLogNorm(-100)
    assert str(HalfLogNorm(3)) == "p^(3/2)"


# sqrt and squares

def test_sqrt_exact_square():
    r = sqrt(Q(Fraction(1, 9)))
    assert agrees(r, Q(Fraction(1, 3)))


def test_sqrt_seven_mod_nine():
    brute = {t for t in range(9) if t * t % 9 == 7}
    r = sqrt(Q(7))
    assert reduce_mod(r, 2) in brute
    assert reduce_mod(r, 2) == 4


def test_sqrt_nonresidue():
    with pytest.raises(NotSquare):
        sqrt(Q(2))


def test_sqrt_odd_valuation():
    with pytest.raises(NotSquare):
        sqrt(Q(3))


def test_is_square_examples():
    assert not is_square(Q(3))
    assert is_square(Q(Fraction(1, 9)))
    # 63 = 9 * 7 and 7 is a square mod 9
    assert is_square(Q(63))
    assert any(t * t % 9 == 7 for t in range(9))


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 41])
def test_sqrt_mod_prime(p):
    for a in range(1, p):
        if pow(a, (p - 1) // 2, p) == 1:
            r = sqrt_mod_prime(a, p)
            assert r * r % p == a
        else:
            with pytest.raises(NotSquare):
                sqrt_mod_prime(a, p)


# reduce_mod

def test_reduce_mod_examples():
    assert reduce_mod(Q(12), 1) == 0
    assert reduce_mod(Q(4), 2) == 4
    with pytest.raises(NotIntegral):
        reduce_mod(Q(Fraction(1, 3)), 1)


def test_reduce_mod_insufficient_precision():
    with pytest.raises(PrecisionExhausted):
        reduce_mod(Q(1, N=2), 3)


# literals and formatting

def test_literal_forms_agree():
    assert agrees(parse_literal("1+2*3+3^2", 3, 5), Q(16, N=5))
    assert agrees(parse_literal("2*p^-1 + 1", 3, 5), Q(Fraction(5, 3), N=5))
    assert agrees(parse_literal("-7/9", 3, 5), Q(Fraction(-7, 9), N=5))


@pytest.mark.parametrize("text,pos", [("1/x", 1), ("1+5*3", 2), ("2*5^2", 0), ("abc", 0)])
def test_literal_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as err:
        parse_literal(text, 3, 4)
    assert err.value.position == pos


def test_output_format():
    x = Q(Fraction(1, 3), N=4)
    assert str(x) == "3^-1 * (1 mod 3^4)"
    assert x.expansion() == "1*3^-1 + 0*3^0 + 0*3^1 + 0*3^2 + O(3^3)"


def test_dict_roundtrip():
    x = Q(Fraction(-22, 45), 5, 9)
    d = x.to_dict()
    assert d["rational"] == "-22/45"
    assert PadicNumber.from_dict(d) == x


def test_rational_reconstruction():
    assert rational_reconstruction(Q(Fraction(-22, 7), 5, 12)) == Fraction(-22, 7)


def test_distance_of_equal_values_is_bottom():
    assert distance(Q(7), Q(7)) == BOTTOM
    assert distance(Q(7), Q(16)) == HalfLogNorm.of_valuation(2)


# properties

primes = st.sampled_from([3, 5, 7])
nums = st.integers(-10**6, 10**6)
dens = st.integers(1, 500)


def _exact_mod(q: Fraction, p: int, k: int) -> int:
    return q.numerator * pow(q.denominator, -1, p**k) % p**k


@settings(max_examples=300, deadline=None)
@given(p=primes, a=nums, b=dens, c=nums, d=dens)
def test_rational_arithmetic_oracle(p, a, b, c, d):
    # denominators prime to p keep every result integral
    b, d = b * p + 1, d * p + 1
    x, y = Fraction(a, b), Fraction(c, d)
    k, N = 4, 30
    X, Y = Q(x, p, N), Q(y, p, N)
    for exact, got in ((x + y, lambda: X + Y), (x - y, lambda: X - Y), (x * y, lambda: X * Y)):
        if exact == 0:
            continue
        assert reduce_mod(got(), k) == _exact_mod(exact, p, k)


@settings(max_examples=300, deadline=None)
@given(p=primes, seed=st.integers(0, 2**32))
def test_mul_div_roundtrip(p, seed):
    rng = random.Random(seed)
    x = random_padic(rng, p, 10, -4, 4)
    y = random_padic(rng, p, 10, -4, 4)
    assert agrees(div(mul(x, y), y), x)
    assert norm(mul(x, y)) == norm(x) * norm(y)
