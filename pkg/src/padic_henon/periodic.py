"""Fixed points and 2-cycles of the Henon map by solving quadratics over Q_p."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .henon import HenonParams, PlanePoint, RegionTag, classify_region, forward
from .localfield import ONE, PadicNumber, agrees, is_square, norm, reduce_mod, sqrt, sub


class RootStatus(str, enum.Enum):
    TWO_ROOTS = "TwoRoots"
    DOUBLE_ROOT = "DoubleRoot"
    NO_ROOTS = "NoRoots"


@dataclass(frozen=True)
class QuadraticRoots:
    status: RootStatus
    roots: tuple[PadicNumber, ...] = ()
    discriminant: PadicNumber | None = None


def solve_monic_quadratic(c1: PadicNumber, c0: PadicNumber) -> QuadraticRoots:
    """Roots of ``x**2 + c1*x + c0`` in Q_p.

    Completes the square (2 is a unit for odd p).  The root built from the
    canonical square root of the discriminant comes first.  A discriminant
    that vanishes at the tracked precision is reported as a double root.
    """
    if c1.p != c0.p:
        raise ValueError("coefficients must share the prime")
    disc = sub(c1 * c1, 4 * c0, zero_ok=True)
    if disc.is_zero:
        return QuadraticRoots(RootStatus.DOUBLE_ROOT, (_half(-c1),), disc)
    if not is_square(disc):
        return QuadraticRoots(RootStatus.NO_ROOTS, (), disc)
    r = sqrt(disc)
    roots = (_half(sub(r, c1, zero_ok=True)), _half(sub(-r, c1, zero_ok=True)))
    return QuadraticRoots(RootStatus.TWO_ROOTS, roots, disc)


def _half(x: PadicNumber) -> PadicNumber:
    return x if x.is_zero else x / 2


def _b_minus_one(params: HenonParams) -> PadicNumber:
    return sub(params.b, PadicNumber.from_int(1, params.p, params.b.N), zero_ok=True)


def fixed_point_discriminant(params: HenonParams) -> PadicNumber:
    """``(b - 1)**2 + 4a``."""
    bm1 = _b_minus_one(params)
    return sub(bm1 * bm1, -4 * params.a, zero_ok=True)


def two_cycle_discriminant(params: HenonParams) -> PadicNumber:
    """``4a - 3(b - 1)**2``."""
    bm1 = _b_minus_one(params)
    return sub(4 * params.a, 3 * (bm1 * bm1), zero_ok=True)


def fixed_points(params: HenonParams) -> list[PlanePoint]:
    """Fixed points ``(alpha, alpha)`` with ``alpha**2 - (b-1)*alpha - a = 0``."""
    bm1 = _b_minus_one(params)
    res = solve_monic_quadratic(-bm1, -params.a)
    return [PlanePoint(r, r) for r in res.roots]


def two_cycle(params: HenonParams) -> tuple[PlanePoint, PlanePoint] | None:
    """The 2-cycle ``{(b1, b2), (b2, b1)}`` from ``x**2 + (b-1)x + (b-1)**2 - a``.

    None when ``4a - 3(b-1)**2`` is zero (the roots are then fixed points) or
    a non-square.
    """
    bm1 = _b_minus_one(params)
    res = solve_monic_quadratic(bm1, sub(bm1 * bm1, params.a, zero_ok=True))
    if res.status is not RootStatus.TWO_ROOTS:
        return None
    b1, b2 = res.roots
    return PlanePoint(b1, b2), PlanePoint(b2, b1)


def verify_periodic(params: HenonParams, pt: PlanePoint, period: int) -> bool:
    """``forward^period(pt)`` agrees with ``pt`` at the tracked precision."""
    q = pt
    for _ in range(period):
        q = forward(params, q)
    return q.agrees(pt)


@dataclass
class ExistenceReport:
    """Which sufficient conditions for fixed points / 2-cycles hold, and
    whether the solver output is consistent with them."""

    clauses: dict = field(default_factory=dict)
    fixed_point_count: int = 0
    has_two_cycle: bool = False
    consistent: bool = True

    def to_dict(self) -> dict:
        return {"clauses": self.clauses, "fixed_point_count": self.fixed_point_count,
                "has_two_cycle": self.has_two_cycle, "consistent": self.consistent}


def existence_report(params: HenonParams) -> ExistenceReport:
    p = params.p
    na, nb = norm(params.a), norm(params.b)
    region = classify_region(params)
    minus3_square = is_square(PadicNumber.from_int(-3, p, 4))
    # extra hypotheses of the 2-cycle parts of clauses (a) and (b)
    cycle_extra = p != 3 and minus3_square

    b_residue = reduce_mod(params.b, 1) if nb <= ONE else None
    clause_a = na < ONE and nb <= ONE and b_residue != 1
    clause_b = region is RegionTag.IIminus and na < nb * nb
    clause_c = region is RegionTag.III and is_square(params.a)

    fps = fixed_points(params)
    cyc = two_cycle(params)
    report = ExistenceReport(fixed_point_count=len(fps), has_two_cycle=cyc is not None)
    report.clauses = {
        "a": {"applies": clause_a, "two_cycle_hypotheses": clause_a and cycle_extra},
        "b": {"applies": clause_b, "two_cycle_hypotheses": clause_b and cycle_extra},
        "c": {"applies": clause_c, "two_cycle_hypotheses": clause_c},
    }
    for name in "abc":
        c = report.clauses[name]
        if c["applies"] and len(fps) != 2:
            report.consistent = False
        if c["two_cycle_hypotheses"] and cyc is None:
            report.consistent = False
    return report


def quadratic_residues_agree(params: HenonParams) -> bool:
    """Root counts match the square classes of both discriminants."""
    d1 = fixed_point_discriminant(params)
    d2 = two_cycle_discriminant(params)
    n_fp = len(fixed_points(params))
    expected_fp = 1 if d1.is_zero else (2 if is_square(d1) else 0)
    expected_cyc = (not d2.is_zero) and is_square(d2)
    return n_fp == expected_fp and (two_cycle(params) is not None) == expected_cyc


__all__ = [
    "QuadraticRoots", "RootStatus", "solve_monic_quadratic", "fixed_points", "two_cycle",
    "existence_report", "ExistenceReport", "verify_periodic", "fixed_point_discriminant",
    "two_cycle_discriminant", "quadratic_residues_agree", "agrees",
]
