"""Floating-point style arithmetic in Q_p for odd primes p.

A nonzero element is stored as ``p**v * u + O(p**(v + N))`` where ``u`` is a
unit modulo ``p**N``.  ``N`` is the relative precision; ``v + N`` is the
absolute precision.  Every operation returns the largest precision it can
prove, so digits are never invented.  Zero is exact and has ``v = inf``.

Norms are carried as :class:`HalfLogNorm`, i.e. as ``p**(n/2)`` with an
integer ``n``, because square roots of norms show up in the filtration
radius of the Henon map.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .errors import DivisionByZero, NotIntegral, NotSquare, ParseError, PrecisionExhausted

INF = math.inf


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod_prime(a: int, p: int) -> int:
    """Tonelli-Shanks.  Returns some root of ``a`` mod ``p``; ``a`` must be a nonzero QR."""
    a %= p
    if legendre(a, p) != 1:
        raise NotSquare(f"{a} is not a quadratic residue mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


@total_ordering
@dataclass(frozen=True)
class HalfLogNorm:
    """The norm value ``p**(numerator/2)``; the zero norm has numerator ``-inf``."""

    numerator: int | float

    @classmethod
    def of_valuation(cls, v: int | float) -> HalfLogNorm:
        return cls(-2 * v) if v != INF else BOTTOM

    @classmethod
    def power(cls, e: int) -> HalfLogNorm:
        """The norm ``p**e``."""
        return cls(2 * e)

    @property
    def is_bottom(self) -> bool:
        return self.numerator == -INF

    def __lt__(self, other: HalfLogNorm) -> bool:
        return self.numerator < other.numerator

    def __mul__(self, other: HalfLogNorm) -> HalfLogNorm:
        return HalfLogNorm(self.numerator + other.numerator)

    def __truediv__(self, other: HalfLogNorm) -> HalfLogNorm:
        if other.is_bottom:
            raise DivisionByZero("division by the zero norm")
        return HalfLogNorm(self.numerator - other.numerator)

    def __pow__(self, e: int) -> HalfLogNorm:
        return HalfLogNorm(self.numerator * e)

    def sqrt(self) -> HalfLogNorm:
        if self.is_bottom:
            return self
        if self.numerator % 2:
            raise ValueError("square root of a half-integer norm exponent is not representable")
        return HalfLogNorm(self.numerator // 2)

    def value(self, p: int) -> float:
        return 0.0 if self.is_bottom else float(p) ** (self.numerator / 2)

    def exponent(self) -> Fraction | float:
        """log_p of the norm."""
        return -INF if self.is_bottom else Fraction(self.numerator, 2)

    def __str__(self) -> str:
        if self.is_bottom:
            return "0"
        e = self.exponent()
        return f"p^{e}" if e.denominator == 1 else f"p^({e})"


BOTTOM = HalfLogNorm(-INF)
ONE = HalfLogNorm(0)


@dataclass(frozen=True)
class PadicNumber:
    p: int
    v: int | float
    u: int
    N: int

    def __post_init__(self):
        if self.v == INF:
            if self.u != 0:
                raise ValueError("zero carries no unit")
            return
        if self.N < 1:
            raise PrecisionExhausted("relative precision below one digit")
        if not 1 <= self.u < self.p ** self.N or self.u % self.p == 0:
            raise ValueError(f"invalid unit {self.u} for p={self.p}, N={self.N}")

    # construction

    @classmethod
    def zero(cls, p: int) -> PadicNumber:
        return cls(p, INF, 0, 0)

    @classmethod
    def from_int(cls, n: int, p: int, N: int) -> PadicNumber:
        return parse_rational(n, 1, p, N)

    @classmethod
    def from_fraction(cls, q: Fraction | int, p: int, N: int) -> PadicNumber:
        q = Fraction(q)
        return parse_rational(q.numerator, q.denominator, p, N)

    # basic properties

    @property
    def is_zero(self) -> bool:
        return self.v == INF

    @property
    def abs_precision(self) -> int | float:
        return INF if self.is_zero else self.v + self.N

    @property
    def unit_residue(self) -> int:
        return self.u % self.p

    def is_integral(self) -> bool:
        return self.v >= 0

    def with_precision(self, N: int) -> PadicNumber:
        """Truncate to at most ``N`` relative digits."""
        if self.is_zero or N >= self.N:
            return self
        return PadicNumber(self.p, self.v, self.u % self.p ** N, N)

    def digits(self) -> list[int]:
        """The ``N`` base-p digits of the unit, least significant first."""
        out, u = [], self.u
        for _ in range(self.N):
            u, d = divmod(u, self.p)
            out.append(d)
        return out

    # operators

    def _coerce(self, other) -> PadicNumber:
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError(f"mixed primes {self.p} and {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicNumber.from_fraction(other, self.p, max(self.N, 1))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else sub(other, self)

    def __mul__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else div(self, other)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else div(other, self)

    def __neg__(self) -> PadicNumber:
        if self.is_zero:
            return self
        return PadicNumber(self.p, self.v, (-self.u) % self.p ** self.N, self.N)

    def __pow__(self, e: int) -> PadicNumber:
        if e < 0:
            return div(PadicNumber.from_int(1, self.p, self.N), self ** (-e))
        result = PadicNumber.from_int(1, self.p, max(self.N, 1))
        base = self
        while e:
            if e & 1:
                result = mul(result, base)
            e >>= 1
            if e:
                base = mul(base, base)
        return result

    # formatting

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return f"{self.p}^{self.v} * ({self.u} mod {self.p}^{self.N})"

    def expansion(self) -> str:
        """Digit expansion ``d0*p^v + d1*p^(v+1) + ... + O(p^(v+N))``."""
        if self.is_zero:
            return "0"
        terms = [f"{d}*{self.p}^{self.v + i}" for i, d in enumerate(self.digits())]
        return " + ".join(terms) + f" + O({self.p}^{self.abs_precision})"

    def to_dict(self) -> dict:
        if self.is_zero:
            return {"p": self.p, "v": None, "u": 0, "N": None, "str": "0", "expansion": "0"}
        d = {"p": self.p, "v": self.v, "u": self.u, "N": self.N,
             "str": str(self), "expansion": self.expansion()}
        q = rational_reconstruction(self)
        if q is not None:
            d["rational"] = str(q)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> PadicNumber:
        if d["v"] is None:
            return cls.zero(d["p"])
        return cls(d["p"], d["v"], d["u"], d["N"])


# arithmetic

def _check_same_prime(x: PadicNumber, y: PadicNumber) -> None:
    if x.p != y.p:
        raise ValueError(f"mixed primes {x.p} and {y.p}")


def add(x: PadicNumber, y: PadicNumber, zero_ok: bool = False) -> PadicNumber:
    """``x + y`` at the precision both operands support.

    A sum that vanishes at that precision raises PrecisionExhausted, or is
    returned as exact zero when ``zero_ok`` is set.
    """
    _check_same_prime(x, y)
    if x.is_zero:
        return y
    if y.is_zero:
        return x
    p = x.p
    target = min(x.abs_precision, y.abs_precision)
    m = min(x.v, y.v)
    width = target - m
    s = (x.u * p ** (x.v - m) + y.u * p ** (y.v - m)) % p ** width
    if s == 0:
        if zero_ok:
            return PadicNumber.zero(p)
        raise PrecisionExhausted(f"total cancellation: sum is O({p}^{target})")
    t = valuation(s, p)
    return PadicNumber(p, m + t, s // p ** t, width - t)


def sub(x: PadicNumber, y: PadicNumber, zero_ok: bool = False) -> PadicNumber:
    """``x - y``.  With ``zero_ok``, operands that agree at their common
    precision give exact zero instead of raising."""
    if zero_ok and agrees(x, y):
        return PadicNumber.zero(x.p)
    return add(x, -y)


def mul(x: PadicNumber, y: PadicNumber) -> PadicNumber:
    _check_same_prime(x, y)
    if x.is_zero or y.is_zero:
        return PadicNumber.zero(x.p)
    N = min(x.N, y.N)
    return PadicNumber(x.p, x.v + y.v, x.u * y.u % x.p ** N, N)


def div(x: PadicNumber, y: PadicNumber) -> PadicNumber:
    _check_same_prime(x, y)
    if y.is_zero:
        raise DivisionByZero("division by zero in Q_p")
    if x.is_zero:
        return x
    N = min(x.N, y.N)
    mod = x.p ** N
    return PadicNumber(x.p, x.v - y.v, x.u * pow(y.u, -1, mod) % mod, N)


def norm(x: PadicNumber) -> HalfLogNorm:
    return HalfLogNorm.of_valuation(x.v)


def agrees(x: PadicNumber, y: PadicNumber) -> bool:
    """True when ``x`` and ``y`` coincide at their common absolute precision."""
    _check_same_prime(x, y)
    target = min(x.abs_precision, y.abs_precision)
    if target == INF:
        return True
    m = min(x.v, y.v)
    if m >= target:
        return True
    p = x.p
    mod = p ** (target - m)

    def rep(z):
        return 0 if z.v >= target else z.u * p ** (z.v - m) % mod

    return rep(x) == rep(y)


def distance(x: PadicNumber, y: PadicNumber) -> HalfLogNorm:
    """``|x - y|``, or the zero norm when they agree at the available precision."""
    if agrees(x, y):
        return BOTTOM
    return norm(sub(x, y))


def is_square(x: PadicNumber) -> bool:
    if x.is_zero:
        return True
    return x.v % 2 == 0 and legendre(x.u, x.p) == 1


def sqrt(x: PadicNumber) -> PadicNumber:
    """Square root on the canonical branch (unit residue in ``1..(p-1)/2``)."""
    if x.is_zero:
        return x
    if x.v % 2:
        raise NotSquare(f"odd valuation {x.v}")
    p, N = x.p, x.N
    r = sqrt_mod_prime(x.u, p)
    r = min(r, p - r)
    k = 1
    while k < N:
        k = min(2 * k, N)
        mod = p ** k
        r = (r - (r * r - x.u) * pow(2 * r, -1, mod)) % mod
    return PadicNumber(p, x.v // 2, r, N)


def reduce_mod(x: PadicNumber, k: int) -> int:
    """The residue of an integral ``x`` in ``Z/p^k``."""
    if x.is_zero:
        return 0
    if x.v < 0:
        raise NotIntegral(f"valuation {x.v} < 0")
    if x.v >= k:
        return 0
    if x.abs_precision < k:
        raise PrecisionExhausted(f"need {k} digits, have {x.abs_precision}")
    mod = x.p ** k
    return x.u * x.p ** x.v % mod


def rational_reconstruction(x: PadicNumber) -> Fraction | None:
    """Small rational congruent to ``x`` at its precision, if one exists.

    Finds ``r/s`` with ``|r|, |s| <= sqrt(p^N / 2)``; returns None otherwise.
    """
    if x.is_zero:
        return Fraction(0)
    mod = x.p ** x.N
    bound = math.isqrt(mod // 2)
    r0, r1 = mod, x.u
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1) * Fraction(x.p) ** x.v


# parsing

def parse_rational(num: int, den: int, p: int, N: int) -> PadicNumber:
    if den == 0:
        raise DivisionByZero(f"{num}/0")
    if N < 1:
        raise ValueError("precision must be at least 1")
    if num == 0:
        return PadicNumber.zero(p)
    vn, vd = valuation(num, p), valuation(den, p)
    mod = p ** N
    un, ud = num // p ** vn, den // p ** vd
    return PadicNumber(p, vn - vd, un * pow(ud, -1, mod) % mod, N)


_RATIONAL = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+)\s*)?$")
_TERM = re.compile(r"\s*(\d+)?\s*(?:(\*)?\s*(p|\d+)\s*(?:\^\s*([+-]?\d+))?)?\s*$")


def _parse_digit_form(text: str, p: int) -> Fraction:
    total = Fraction(0)
    pos = 0
    for raw in text.split("+"):
        m = _TERM.match(raw)
        if not raw.strip() or m is None or (m.group(1) is None and m.group(3) is None):
            raise ParseError(f"malformed term {raw.strip()!r}", text, pos)
        digit, star, base, exp = m.groups()
        if digit is not None and base is not None and star is None:
            raise ParseError(f"missing '*' in term {raw.strip()!r}", text, pos)
        d = int(digit) if digit is not None else 1
        if not 0 <= d < p:
            raise ParseError(f"digit {d} outside [0, {p})", text, pos)
        if base is None:
            e = 0
        else:
            if base != "p" and int(base) != p:
                raise ParseError(f"base {base} does not match p={p}", text, pos)
            e = int(exp) if exp is not None else 1
        total += d * Fraction(p) ** e
        pos += len(raw) + 1
    return total


def parse_literal(text: str, p: int, N: int) -> PadicNumber:
    """Parse ``"num/den"``, an integer, or digit form ``"d0+d1*p+d2*p^2"``."""
    m = _RATIONAL.match(text)
    if m:
        num, den = int(m.group(1)), int(m.group(2) or 1)
        return parse_rational(num, den, p, N)
    if "/" in text:
        raise ParseError(f"malformed rational {text!r}", text, text.index("/"))
    q = _parse_digit_form(text, p)
    return parse_rational(q.numerator, q.denominator, p, N)


def random_padic(rng: random.Random, p: int, N: int, vmin: int = 0, vmax: int = 3,
                 zero_prob: float = 0.0) -> PadicNumber:
    """Random element with valuation uniform in ``[vmin, vmax]``."""
    if zero_prob and rng.random() < zero_prob:
        return PadicNumber.zero(p)
    v = rng.randint(vmin, vmax)
    mod = p ** N
    while True:
        u = rng.randrange(1, mod)
        if u % p:
            return PadicNumber(p, v, u, N)
