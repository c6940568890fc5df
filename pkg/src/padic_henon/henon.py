"""The Henon map ``(x, y) -> (a + b*y - x**2, x)`` over Q_p.

Parameter regions, the parameter involution and its linear conjugator, and
the filtration ``S_R``, ``S_R^+``, ``S_R^-`` used to certify escape.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PrecisionExhausted
from .localfield import (
    ONE,
    HalfLogNorm,
    PadicNumber,
    add,
    agrees,
    distance,
    norm,
    parse_literal,
    sub,
)


@dataclass(frozen=True)
class HenonParams:
    a: PadicNumber
    b: PadicNumber

    def __post_init__(self):
        if self.a.p != self.b.p:
            raise ValueError("a and b must share the prime")
        if self.b.is_zero:
            raise ValueError("b must be nonzero")

    @property
    def p(self) -> int:
        return self.a.p

    @classmethod
    def parse(cls, a: str | int | Fraction, b: str | int | Fraction, p: int, N: int = 20) -> HenonParams:
        def conv(t):
            if isinstance(t, str):
                return parse_literal(t, p, N)
            return PadicNumber.from_fraction(Fraction(t), p, N)
        return cls(conv(a), conv(b))

    def norm(self) -> HalfLogNorm:
        """``||(a, b)|| = max(|a|, |b|)``."""
        return max(norm(self.a), norm(self.b))


@dataclass(frozen=True)
class PlanePoint:
    x: PadicNumber
    y: PadicNumber

    def __post_init__(self):
        if self.x.p != self.y.p:
            raise ValueError("coordinates must share the prime")

    @property
    def p(self) -> int:
        return self.x.p

    @classmethod
    def parse(cls, x, y, p: int, N: int = 20) -> PlanePoint:
        def conv(t):
            if isinstance(t, str):
                return parse_literal(t, p, N)
            return PadicNumber.from_fraction(Fraction(t), p, N)
        return cls(conv(x), conv(y))

    def norm(self) -> HalfLogNorm:
        return max(norm(self.x), norm(self.y))

    def agrees(self, other: PlanePoint) -> bool:
        return agrees(self.x, other.x) and agrees(self.y, other.y)

    def distance(self, other: PlanePoint) -> HalfLogNorm:
        return max(distance(self.x, other.x), distance(self.y, other.y))

    def to_dict(self) -> dict:
        return {"x": self.x.to_dict(), "y": self.y.to_dict()}


class RegionTag(str, enum.Enum):
    I = "I"
    IIplus = "IIplus"
    IIminus = "IIminus"
    III = "III"


@dataclass(frozen=True)
class SectorFlags:
    in_SR: bool
    in_SRplus: bool
    in_SRminus: bool


def forward(params: HenonParams, pt: PlanePoint, zero_ok: bool = False) -> PlanePoint:
    """``(a + b*y - x^2, x)``.

    A coordinate that cancels completely raises PrecisionExhausted unless
    ``zero_ok`` is set, in which case it is taken to be exactly zero.
    """
    x, y = pt.x, pt.y
    s = add(params.a, params.b * y, zero_ok=zero_ok)
    return PlanePoint(sub(s, x * x, zero_ok=zero_ok), x)


def inverse(params: HenonParams, pt: PlanePoint, zero_ok: bool = False) -> PlanePoint:
    """``(y, (x - a + y^2)/b)``; ``zero_ok`` as for :func:`forward`."""
    x, y = pt.x, pt.y
    num = add(sub(x, params.a, zero_ok=zero_ok), y * y, zero_ok=zero_ok)
    return PlanePoint(y, num if num.is_zero else num / params.b)


def involution(params: HenonParams) -> HenonParams:
    """``(a, b) -> (a / b**2, 1 / b)``."""
    a, b = params.a, params.b
    return HenonParams(a / (b * b), 1 / b)


def lambda_conjugate(params: HenonParams, pt: PlanePoint) -> PlanePoint:
    """``(x, y) -> (-b*y, -b*x)``; conjugates the map for ``involution(params)``
    to the inverse map for ``params``."""
    b = params.b
    return PlanePoint(-(b * pt.y), -(b * pt.x))


def lambda_inverse(params: HenonParams, pt: PlanePoint) -> PlanePoint:
    b = params.b
    return PlanePoint(-(pt.y / b), -(pt.x / b))


def classify_region(params: HenonParams) -> RegionTag:
    na, nb = norm(params.a), norm(params.b)
    if na <= ONE and nb == ONE:
        return RegionTag.I
    if na <= ONE and nb < ONE:
        return RegionTag.IIplus
    if nb > ONE and na <= nb * nb:
        return RegionTag.IIminus
    return RegionTag.III


def classify_region_alt(params: HenonParams) -> RegionTag:
    """Same partition, read off from ``||(a,b)||`` and ``||iota(a,b)||``."""
    inner = params.norm() <= ONE
    inner_star = involution(params).norm() <= ONE
    return {
        (True, True): RegionTag.I,
        (True, False): RegionTag.IIplus,
        (False, True): RegionTag.IIminus,
        (False, False): RegionTag.III,
    }[(inner, inner_star)]


def filtration_radius(params: HenonParams) -> HalfLogNorm:
    """``R = max(1, |a|^(1/2), |b|)``."""
    return max(ONE, norm(params.a).sqrt(), norm(params.b))


def sector_of(params: HenonParams, pt: PlanePoint, R: HalfLogNorm | None = None) -> SectorFlags:
    R = filtration_radius(params) if R is None else R
    nx, ny = norm(pt.x), norm(pt.y)
    if max(nx, ny) <= R:
        return SectorFlags(True, False, False)
    return SectorFlags(False, nx >= ny, nx <= ny)


class Fate(str, enum.Enum):
    ESCAPES_FORWARD = "EscapesForward"
    ESCAPES_BACKWARD = "EscapesBackward"
    BOUNDED_FORWARD = "BoundedForward"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class FateCertificate:
    """Outcome of :func:`orbit_fate`.  ``step`` is the orbit index at which the
    filtration certificate fired (``max_iter`` when undetermined)."""

    fate: Fate
    step: int
    point: PlanePoint | None = None

    def to_dict(self) -> dict:
        return {"fate": self.fate.value, "step": self.step,
                "point": None if self.point is None else self.point.to_dict()}


@dataclass
class OrbitTrace:
    start: PlanePoint
    direction: int
    points: list[PlanePoint] = field(default_factory=list)
    norms: list[HalfLogNorm] = field(default_factory=list)
    certificate: FateCertificate | None = None
    exhausted: bool = False

    @property
    def steps(self) -> int:
        return len(self.points) - 1


def iterate(params: HenonParams, pt: PlanePoint, n: int, bound: HalfLogNorm | None = None,
            stop_on_escape: bool = True) -> OrbitTrace:
    """Apply ``forward`` (n > 0) or ``inverse`` (n < 0) ``|n|`` times.

    Stops early once a forward iterate lies in ``S_R^+`` (or a backward one in
    ``S_R^-``), which certifies escape, once the norm exceeds ``bound``, or
    once a coordinate has no significant digits left (``exhausted``).
    """
    step = forward if n >= 0 else inverse
    direction = 1 if n >= 0 else -1
    R = filtration_radius(params)
    trace = OrbitTrace(pt, direction, [pt], [pt.norm()])
    cur = pt
    for i in range(abs(n) + 1):
        if i:
            try:
                cur = step(params, cur)
            except PrecisionExhausted:
                trace.exhausted = True
                break
            trace.points.append(cur)
            trace.norms.append(cur.norm())
        if stop_on_escape:
            flags = sector_of(params, cur, R)
            if direction > 0 and flags.in_SRplus:
                trace.certificate = FateCertificate(Fate.ESCAPES_FORWARD, i, cur)
                break
            if direction < 0 and flags.in_SRminus:
                trace.certificate = FateCertificate(Fate.ESCAPES_BACKWARD, i, cur)
                break
        if bound is not None and trace.norms[-1] > bound:
            break
    return trace


def orbit_fate(params: HenonParams, pt: PlanePoint, max_iter: int = 200) -> FateCertificate:
    """Certify the fate of ``pt`` using the filtration.

    Forward and backward orbits are advanced in lockstep.  A forward iterate in
    ``S_R^+`` certifies forward escape, a backward iterate in ``S_R^-``
    certifies backward escape.  For ``||(a,b)|| <= 1`` the set ``S_R`` is
    forward invariant, so a forward iterate in ``S_R`` certifies a bounded
    forward orbit.  A direction stops once its coordinates run out of
    precision.  Anything else is reported as undetermined.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    R = filtration_radius(params)
    trapping = params.norm() <= ONE
    fwd = bwd = pt
    fwd_alive = bwd_alive = True
    for i in range(max_iter + 1):
        if i:
            if fwd_alive:
                try:
                    fwd = forward(params, fwd)
                except PrecisionExhausted:
                    fwd_alive = False
            if bwd_alive:
                try:
                    bwd = inverse(params, bwd)
                except PrecisionExhausted:
                    bwd_alive = False
            if not (fwd_alive or bwd_alive):
                break
        if fwd_alive:
            flags = sector_of(params, fwd, R)
            if flags.in_SRplus:
                return FateCertificate(Fate.ESCAPES_FORWARD, i, fwd)
            if trapping and flags.in_SR:
                return FateCertificate(Fate.BOUNDED_FORWARD, i, fwd)
        if bwd_alive and sector_of(params, bwd, R).in_SRminus:
            return FateCertificate(Fate.ESCAPES_BACKWARD, i, bwd)
    return FateCertificate(Fate.UNDETERMINED, max_iter, None)

