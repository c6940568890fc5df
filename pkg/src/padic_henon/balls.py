"""Dynamics of the Henon map on residue balls of the unit polydisc.

For ``||(a, b)|| <= 1`` the map is nonexpanding on ``B_1(0,0)``, so it induces
a self-map of ``(Z/p^k)^2``.  A ball of radius ``p^-k`` is encoded by the
integer ``cx * p^k + cy``.
"""

from __future__ import annotations

import enum
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded, WrongRegion
from .henon import HenonParams, PlanePoint, RegionTag, classify_region, forward
from .localfield import BOTTOM, ONE, HalfLogNorm, random_padic, reduce_mod
from .periodic import two_cycle

DEFAULT_STATE_BUDGET = 2**24
_INDEX_LIMIT = 2**62


@dataclass(frozen=True, order=True)
class BallId:
    level: int
    cx: int
    cy: int

    def parent(self, p: int) -> BallId:
        m = p ** (self.level - 1)
        return BallId(self.level - 1, self.cx % m, self.cy % m)

    def contains(self, pt: PlanePoint) -> bool:
        return ball_of(pt, self.level) == self

    def __str__(self) -> str:
        return f"B[{self.level}]({self.cx},{self.cy})"


def ball_of(pt: PlanePoint, k: int) -> BallId:
    return BallId(k, reduce_mod(pt.x, k), reduce_mod(pt.y, k))


@dataclass(frozen=True)
class ReducedMap:
    """``(x, y) -> (a + b*y - x**2, x)`` on ``(Z/p^k)^2``."""

    p: int
    k: int
    a: int
    b: int
    budget: int = DEFAULT_STATE_BUDGET

    @property
    def modulus(self) -> int:
        return self.p**self.k

    @property
    def size(self) -> int:
        return self.modulus**2

    def __call__(self, x: int, y: int) -> tuple[int, int]:
        m = self.modulus
        return (self.a + self.b * y - x * x) % m, x

    def apply_index(self, idx: np.ndarray) -> np.ndarray:
        m = self.modulus
        x, y = np.divmod(idx, m)
        nx = (self.a + self.b * y - x * x) % m
        return nx * m + x

    def table(self) -> np.ndarray:
        """The full transition table; ``table[x*m + y]`` is the image index."""
        if self.size > self.budget:
            raise BudgetExceeded(f"{self.size} states exceed the budget of {self.budget}")
        return self.apply_index(np.arange(self.size, dtype=np.int64))

    def project(self, k: int) -> ReducedMap:
        m = self.p**k
        return ReducedMap(self.p, k, self.a % m, self.b % m, self.budget)

    def is_bijective(self) -> bool:
        counts = np.bincount(self.table(), minlength=self.size)
        return bool(np.all(counts == 1))


def _require_unit_ball(params: HenonParams) -> None:
    if params.norm() > ONE:
        raise WrongRegion(f"ball dynamics needs ||(a,b)|| <= 1, got region {classify_region(params).value}")


def reduce_map(params: HenonParams, k: int, budget: int = DEFAULT_STATE_BUDGET) -> ReducedMap:
    _require_unit_ball(params)
    if k < 1:
        raise ValueError("level must be at least 1")
    p = params.p
    if p ** (2 * k) >= _INDEX_LIMIT:
        raise BudgetExceeded(f"level {k} is too deep for 64-bit ball indices")
    return ReducedMap(p, k, reduce_mod(params.a, k), reduce_mod(params.b, k), budget)


# functional graphs -----------------------------------------------------------


def _doubling_steps(n: int) -> int:
    return max(1, int(n).bit_length())


def functional_graph_cycles(succ: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cycles of the functional graph ``i -> succ[i]`` on ``0..n-1``.

    Entries equal to ``-1`` mark edges leaving the graph; such nodes are never
    periodic.  Returns ``(nodes, labels)``: the periodic nodes in increasing
    order and, for each, the smallest node on its cycle.
    """
    n = len(succ)
    if n == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    # node n is an absorbing sink standing in for "left the graph"
    g = np.empty(n + 1, dtype=np.int64)
    g[:n] = np.where(succ < 0, n, succ)
    g[n] = n
    steps = _doubling_steps(n + 1)
    h = g
    for _ in range(steps):
        h = h[h]
    # after >= n+1 steps every orbit sits on its cycle
    on_cycle = np.zeros(n + 1, dtype=bool)
    on_cycle[h] = True
    on_cycle[n] = False
    nodes = np.flatnonzero(on_cycle)
    if len(nodes) == 0:
        return nodes, nodes
    pos = np.full(n + 1, -1, dtype=np.int64)
    pos[nodes] = np.arange(len(nodes))
    perm = pos[g[nodes]]
    labels = nodes.copy()
    jump = perm
    for _ in range(_doubling_steps(len(nodes))):
        labels = np.minimum(labels, labels[jump])
        jump = jump[jump]
    return nodes, labels


def brent(f, x0):
    """Brent's cycle finder.  Returns ``(mu, lam)``: tail length and period."""
    power = lam = 1
    tortoise, hare = x0, f(x0)
    while tortoise != hare:
        if power == lam:
            tortoise, power, lam = hare, power * 2, 0
        hare = f(hare)
        lam += 1
    tortoise = hare = x0
    for _ in range(lam):
        hare = f(hare)
    mu = 0
    while tortoise != hare:
        tortoise, hare = f(tortoise), f(hare)
        mu += 1
    return mu, lam


# cycle structure -------------------------------------------------------------


class Method(str, enum.Enum):
    AUTO = "auto"
    TABLE = "table"
    REFINE = "refine"


@dataclass
class CycleReport:
    level: int
    cycles: list[tuple[int, int]]
    periodic_count: int
    method: str
    periodic_nodes: np.ndarray = field(repr=False, default=None)
    cycle_labels: np.ndarray = field(repr=False, default=None)

    @property
    def max_period(self) -> int:
        return max((length for length, _ in self.cycles), default=0)

    P_k = max_period

    def histogram(self) -> str:
        return ";".join(f"{length}x{count}" for length, count in self.cycles)

    def period_of(self) -> dict[int, int]:
        """Map periodic node index to the length of its cycle."""
        sizes = Counter(self.cycle_labels.tolist())
        return {int(n): sizes[int(lab)] for n, lab in zip(self.periodic_nodes, self.cycle_labels)}

    def balls(self, p: int) -> list[BallId]:
        m = p**self.level
        return [BallId(self.level, int(i) // m, int(i) % m) for i in self.periodic_nodes]

    def to_dict(self) -> dict:
        return {"level": self.level, "P_k": self.max_period, "periodic_count": self.periodic_count,
                "cycles": [{"length": length, "count": count} for length, count in self.cycles],
                "method": self.method}


def _report(level: int, nodes: np.ndarray, labels: np.ndarray, method: str) -> CycleReport:
    sizes = Counter(Counter(labels.tolist()).values())
    cycles = sorted(sizes.items())
    return CycleReport(level, cycles, len(nodes), method, nodes, labels)


def _cycles_table(rmap: ReducedMap) -> CycleReport:
    nodes, labels = functional_graph_cycles(rmap.table())
    return _report(rmap.k, nodes, labels, Method.TABLE.value)


def _cycles_restricted(rmap: ReducedMap, candidates: np.ndarray) -> CycleReport:
    """Cycles among ``candidates`` (sorted indices); edges leaving the set are cut."""
    img = rmap.apply_index(candidates)
    pos = np.searchsorted(candidates, img)
    pos_c = np.minimum(pos, len(candidates) - 1)
    succ = np.where(candidates[pos_c] == img, pos_c, -1) if len(candidates) else pos
    local, labels = functional_graph_cycles(succ)
    return _report(rmap.k, candidates[local], candidates[labels], Method.REFINE.value)


def _children(p: int, k: int, parents: np.ndarray) -> np.ndarray:
    """Indices at level ``k`` of all children of level-``k-1`` balls."""
    m_old, m = p ** (k - 1), p**k
    px, py = np.divmod(parents, m_old)
    lifts = np.arange(p, dtype=np.int64) * m_old
    # pair every x-lift with every y-lift of the same parent
    xs = (px[:, None, None] + lifts[None, :, None]) * m
    ys = py[:, None, None] + lifts[None, None, :]
    return np.sort((xs + ys).reshape(-1))


def cycle_reports(params: HenonParams, kmax: int, method: Method | str = Method.AUTO,
                  budget: int = DEFAULT_STATE_BUDGET) -> list[CycleReport]:
    """Cycle reports for levels ``1..kmax``.

    The table route enumerates all ``p^(2k)`` balls.  The refinement route
    uses that periodic balls at level ``k`` lie inside periodic balls at level
    ``k-1``, so only children of the previous periodic set are searched.
    """
    method = Method(method)
    reports: list[CycleReport] = []
    for k in range(1, kmax + 1):
        rmap = reduce_map(params, k, budget)
        if method is Method.TABLE or k == 1:
            rep = _cycles_table(rmap)
        else:
            cand = _children(params.p, k, reports[-1].periodic_nodes)
            if len(cand) > budget:
                raise BudgetExceeded(f"{len(cand)} candidate balls exceed the budget of {budget}")
            rep = _cycles_restricted(rmap, cand)
        reports.append(rep)
    return reports


def cycle_structure(params: HenonParams, k: int, method: Method | str = Method.AUTO,
                    budget: int = DEFAULT_STATE_BUDGET) -> CycleReport:
    method = Method(method)
    if method is Method.TABLE:
        return _cycles_table(reduce_map(params, k, budget))
    return cycle_reports(params, k, method, budget)[-1]


def preperiodic_balls(params: HenonParams, k: int, budget: int = DEFAULT_STATE_BUDGET) -> list[BallId]:
    rep = cycle_structure(params, k, Method.TABLE, budget)
    m = params.p**k
    periodic = np.zeros(m * m, dtype=bool)
    periodic[rep.periodic_nodes] = True
    return [BallId(k, int(i) // m, int(i) % m) for i in np.flatnonzero(~periodic)]


# periodic-ball tree ----------------------------------------------------------


@dataclass
class TreeNode:
    ball: BallId
    period: int
    children: list[BallId] = field(default_factory=list)


@dataclass
class PeriodicBallTree:
    p: int
    kmax: int
    levels: dict[int, dict[BallId, TreeNode]]
    reports: list[CycleReport] = field(repr=False, default_factory=list)

    def child_counts(self, k: int) -> Counter:
        """Histogram of periodic-children counts for level-``k`` nodes."""
        return Counter(len(node.children) for node in self.levels[k].values())

    def coherent(self) -> bool:
        """Every child period is a multiple of its parent's, and every parent
        has a periodic child."""
        for k in range(1, self.kmax):
            for node in self.levels[k].values():
                if not node.children:
                    return False
                for c in node.children:
                    if self.levels[k + 1][c].period % node.period:
                        return False
        return True

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "levels": [
                {"k": k, "periodic_balls": len(nodes),
                 "children": {str(n): c for n, c in sorted(self.child_counts(k).items())} if k < self.kmax else {},
                 "cycles": [{"length": a, "count": b} for a, b in self.reports[k - 1].cycles]}
                for k, nodes in sorted(self.levels.items())
            ],
        }


def periodic_ball_tree(params: HenonParams, kmax: int, budget: int = DEFAULT_STATE_BUDGET) -> PeriodicBallTree:
    p = params.p
    reports = cycle_reports(params, kmax, Method.AUTO, budget)
    levels: dict[int, dict[BallId, TreeNode]] = {}
    for rep in reports:
        m = p**rep.level
        periods = rep.period_of()
        levels[rep.level] = {
            BallId(rep.level, i // m, i % m): TreeNode(BallId(rep.level, i // m, i % m), per)
            for i, per in sorted(periods.items())
        }
    for k in range(2, kmax + 1):
        for ball, node in levels[k].items():
            levels[k - 1][ball.parent(p)].children.append(ball)
    return PeriodicBallTree(p, kmax, levels, reports)


# Julia membership ------------------------------------------------------------


@dataclass(frozen=True)
class JuliaVerdict:
    """``member`` True means every containing ball up to ``level`` is periodic
    (a semi-decision); False means the level-``level`` ball is strictly
    preperiodic, a definitive witness of non-membership."""

    member: bool
    level: int
    periods: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        kind = "MemberUpTo" if self.member else "NonMemberWitness"
        return {"verdict": kind, "level": self.level, "periods": list(self.periods)}


def is_julia_member(params: HenonParams, pt: PlanePoint, kmax: int) -> JuliaVerdict:
    _require_unit_ball(params)
    if not (pt.x.is_integral and pt.y.is_integral):
        raise ValueError("point must lie in B_1(0,0)")
    periods = []
    for k in range(1, kmax + 1):
        rmap = reduce_map(params, k, budget=_INDEX_LIMIT)
        start = (reduce_mod(pt.x, k), reduce_mod(pt.y, k))
        mu, lam = brent(lambda z: rmap(*z), start)
        if mu:
            return JuliaVerdict(False, k, tuple(periods))
        periods.append(lam)
    return JuliaVerdict(True, kmax, tuple(periods))


# attractor analysis ----------------------------------------------------------


@dataclass(frozen=True)
class AttractorProfile:
    P: tuple[int, ...]
    verdict: str
    bound: int | None = None

    def to_dict(self) -> dict:
        return {"P_k": list(self.P), "verdict": self.verdict, "N": self.bound, "heuristic": True}


def attractor_profile(params: HenonParams, kmax: int, budget: int = DEFAULT_STATE_BUDGET) -> AttractorProfile:
    """Heuristic: ``InfiniteCandidate`` if ``P_k`` grows between the last two
    levels, otherwise ``FiniteCandidate(P_kmax)``."""
    if classify_region(params) is not RegionTag.IIplus:
        raise WrongRegion("attractor profile is defined for region IIplus")
    if kmax < 2:
        raise ValueError("kmax must be at least 2")
    P = tuple(r.max_period for r in cycle_reports(params, kmax, Method.AUTO, budget))
    if P[-1] > P[-2]:
        return AttractorProfile(P, "InfiniteCandidate")
    return AttractorProfile(P, "FiniteCandidate", P[-1])


@dataclass
class CycleConvergence:
    """``max_ratio[i]`` is the largest observed ``||phi^2(P) - Q_i|| / ||P - Q_i||``
    over orbit points ``P`` within ``1/p`` of the cycle point ``Q_i``."""

    cycle: tuple[PlanePoint, PlanePoint]
    samples: int
    converged: int
    max_ratio: tuple[HalfLogNorm, HalfLogNorm]
    entry_steps: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"samples": self.samples, "converged": self.converged,
                "max_ratio": [str(r) for r in self.max_ratio],
                "max_entry_step": max(self.entry_steps, default=0),
                "cycle": [pt.to_dict() for pt in self.cycle]}


def attracting_cycle_check(params: HenonParams, samples: int = 100, iters: int = 60,
                           seed: int = 0, starts: list[PlanePoint] | None = None) -> CycleConvergence:
    """Iterate sample starts and measure contraction towards the 2-cycle.

    A start counts as converged when its last iterate agrees with a cycle
    point at the working precision.
    """
    if classify_region(params) is not RegionTag.IIplus:
        raise WrongRegion("attracting cycle check is defined for region IIplus")
    cyc = two_cycle(params)
    if cyc is None:
        raise ValueError("these parameters have no 2-cycle")
    p, N = params.p, min(params.a.N, params.b.N)
    rng = random.Random(seed)
    if starts is None:
        starts = [PlanePoint(random_padic(rng, p, N, 0, 3, 0.05), random_padic(rng, p, N, 0, 3, 0.05))
                  for _ in range(samples)]
    near = HalfLogNorm.of_valuation(1)
    ratios = [BOTTOM, BOTTOM]
    converged = 0
    entries = []
    for start in starts:
        orbit = [start]
        for _ in range(iters):
            orbit.append(forward(params, orbit[-1]))
        dists = [[q.distance(c) for c in cyc] for q in orbit]
        entry = next((i for i, d in enumerate(dists) if min(d) <= near), None)
        if entry is None:
            continue
        entries.append(entry)
        for i in range(entry, iters - 1):
            for j in (0, 1):
                d0, d2 = dists[i][j], dists[i + 2][j]
                if d0 <= near and not d0.is_bottom:
                    ratios[j] = max(ratios[j], d2 / d0)
        if min(dists[-1]).is_bottom:
            converged += 1
    return CycleConvergence(cyc, len(starts), converged, tuple(ratios), entries)


# empirical measure -----------------------------------------------------------


@dataclass
class EmpiricalMeasure:
    level: int
    weights: dict[BallId, Fraction]
    steps: int
    transient_fraction: Fraction
    tv_to_uniform: Fraction

    def to_dict(self) -> dict:
        return {"level": self.level, "steps": self.steps,
                "weights": {str(b): str(w) for b, w in sorted(self.weights.items())},
                "transient_fraction": str(self.transient_fraction),
                "tv_to_uniform": float(self.tv_to_uniform)}


def empirical_measure(params: HenonParams, start: PlanePoint | tuple[int, int], n: int, k: int,
                      budget: int = DEFAULT_STATE_BUDGET) -> EmpiricalMeasure:
    """Orbit frequencies over the level-``k`` periodic balls.

    Orbit points ``1..n`` are computed exactly mod ``p^k``.  Visits to
    strictly preperiodic balls are reported as ``transient_fraction``; the
    weights are normalized over visits to periodic balls.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rmap = reduce_map(params, k, budget)
    rep = cycle_structure(params, k, Method.AUTO, budget)
    m = rmap.modulus
    if isinstance(start, PlanePoint):
        x, y = reduce_mod(start.x, k), reduce_mod(start.y, k)
    else:
        x, y = start[0] % m, start[1] % m
    periodic = set(rep.periodic_nodes.tolist())
    hits: Counter = Counter()
    transient = 0
    for _ in range(n):
        x, y = rmap(x, y)
        idx = x * m + y
        if idx in periodic:
            hits[idx] += 1
        else:
            transient += 1
    total = n - transient
    weights = {BallId(k, i // m, i % m): Fraction(hits[i], total) if total else Fraction(0)
               for i in sorted(periodic)}
    uniform = Fraction(1, len(periodic))
    tv = sum((abs(w - uniform) for w in weights.values()), Fraction(0)) / 2
    return EmpiricalMeasure(k, weights, n, Fraction(transient, n), tv)


def good_reduction_check(params: HenonParams, k: int, budget: int = DEFAULT_STATE_BUDGET) -> bool:
    """True iff the reduced map at level ``k`` is a bijection."""
    return reduce_map(params, k, budget).is_bijective()
