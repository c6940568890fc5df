"""Symbolic coding of the Henon map in region III when ``a`` is a square.

With ``a = gamma**2`` the set ``J`` sits inside the box ``S = I x I``,
``I = {|x| <= |gamma|}``, and every orbit in ``J`` is coded by the bisequence
of signs ``s_k`` with ``x_k`` in the open disc of radius ``|gamma|`` about
``s_k * gamma``.

Points are computed from the orbit recurrence.  Writing ``x_k`` for the
x-coordinate of the k-th iterate (so ``y_k = x_(k-1)``), the map reads
``x_(k+1) = a + b*x_(k-1) - x_k**2``, which is solved for ``x_k`` by taking
the square root on the branch selected by ``s_k``.  Sweeping this over a
window is a contraction with ratio ``max(1, |b|) / |gamma|``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .errors import AmbiguousSector, BranchUnavailable, NonConvergence, NotInJulia, NotSquare, WrongRegion
from .henon import HenonParams, PlanePoint, RegionTag, classify_region, forward, inverse
from .localfield import BOTTOM, HalfLogNorm, PadicNumber, agrees, is_square, norm, sqrt, sub

SYMBOLS = "+-"


def _sign(c: str) -> int:
    return 1 if c == "+" else -1


# words and windows -----------------------------------------------------------


def canonical_rotation(word: str) -> str:
    """Lexicographically least rotation, with ``+`` before ``-``."""
    _check_word(word)
    return min(word[i:] + word[:i] for i in range(len(word)))


def minimal_period(word: str) -> int:
    n = len(word)
    return next(d for d in range(1, n + 1) if n % d == 0 and word == word[d:] + word[:d])


def _check_word(word: str) -> None:
    if not word or any(c not in SYMBOLS for c in word):
        raise ValueError(f"a word is a nonempty string over '+-', got {word!r}")


@dataclass(frozen=True)
class SymbolWindow:
    """Finite window ``s_(-N) .. s_M`` or a cyclic word.

    ``symbols`` lists the window left to right; ``left`` is ``N``, the number
    of symbols before index 0.  For cyclic words ``left`` is 0 and ``s_k`` is
    ``symbols[k mod len]``.
    """

    symbols: str
    left: int = 0
    cyclic: bool = False

    def __post_init__(self):
        _check_word(self.symbols)
        if not 0 <= self.left < len(self.symbols) and not self.cyclic:
            raise ValueError("index 0 must lie inside the window")

    @classmethod
    def word(cls, w: str) -> SymbolWindow:
        return cls(w, 0, True)

    @classmethod
    def parse(cls, text: str) -> SymbolWindow:
        """``"left.right"`` (dot before index 0) or a bare cyclic word."""
        if "." not in text:
            return cls.word(text)
        left, right = text.split(".", 1)
        return cls(left + right, len(left), False)

    @property
    def N(self) -> int:
        return self.left

    @property
    def M(self) -> int:
        return len(self.symbols) - self.left - 1

    def at(self, k: int) -> str:
        if self.cyclic:
            return self.symbols[k % len(self.symbols)]
        if not -self.N <= k <= self.M:
            raise IndexError(k)
        return self.symbols[k + self.left]

    def shift(self) -> SymbolWindow:
        """The window of ``sigma(s)``, where ``sigma(s)_k = s_(k+1)``."""
        if self.cyclic:
            return SymbolWindow.word(self.symbols[1:] + self.symbols[0])
        if self.M < 1:
            raise ValueError("shifting needs a symbol at index 1")
        return SymbolWindow(self.symbols, self.left + 1, False)

    def __str__(self) -> str:
        if self.cyclic:
            return self.symbols
        return self.symbols[: self.left] + "." + self.symbols[self.left:]


# context ---------------------------------------------------------------------


@dataclass(frozen=True)
class HorseshoeContext:
    params: HenonParams
    gamma: PadicNumber
    precision: int

    @property
    def box(self) -> HalfLogNorm:
        """``|gamma|``, the radius of ``I``."""
        return norm(self.gamma)

    def delta(self, n: int) -> HalfLogNorm:
        """Vertical tube radius ``|gamma|**-n``."""
        return self.box ** (-n)

    def epsilon(self, n: int) -> HalfLogNorm:
        """Horizontal tube radius ``|b|**(n+1) / |gamma|**n``."""
        return norm(self.params.b) ** (n + 1) / self.box**n

    def in_box(self, pt: PlanePoint) -> bool:
        return pt.norm() <= self.box

    def to_dict(self) -> dict:
        return {"gamma": self.gamma.to_dict(), "box": str(self.box), "precision": self.precision}


def make_context(params: HenonParams, precision: int | None = None) -> HorseshoeContext:
    if classify_region(params) is not RegionTag.III:
        raise WrongRegion(f"horseshoe coding needs region III, got {classify_region(params).value}")
    if not is_square(params.a):
        raise NotSquare("a is not a square, so J is empty")
    prec = min(params.a.N, params.b.N) if precision is None else precision
    a = params.a.with_precision(min(prec, params.a.N))
    b = params.b.with_precision(min(prec, params.b.N))
    return HorseshoeContext(HenonParams(a, b), sqrt(a), prec)


def sector(ctx: HorseshoeContext, x: PadicNumber) -> str | None:
    """``'+'`` or ``'-'`` if ``x`` lies in the open disc about ``+gamma`` or
    ``-gamma``, otherwise None."""
    for s in SYMBOLS:
        d = sub(x, _sign(s) * ctx.gamma, zero_ok=True)
        if d.is_zero or norm(d) < ctx.box:
            return s
    return None


def branch_sqrt(ctx: HorseshoeContext, w: PadicNumber, sign: str | int) -> PadicNumber:
    """The square root of ``w`` in the open disc of radius ``|gamma|`` about
    ``sign * gamma``."""
    s = sign if isinstance(sign, str) else ("+" if sign > 0 else "-")
    if w.is_zero or norm(w) != ctx.box * ctx.box:
        raise BranchUnavailable("|w| must equal |gamma|^2")
    r = sqrt(w)
    for cand in (r, -r):
        if sector(ctx, cand) == s:
            return cand
    raise BranchUnavailable(f"no square root of w near {s}gamma")


# omega -----------------------------------------------------------------------


@dataclass(frozen=True)
class CodedPoint:
    """``point`` is within ``accuracy`` of ``omega(s)`` for every bisequence
    ``s`` extending ``window``."""

    point: PlanePoint
    window: SymbolWindow
    accuracy: HalfLogNorm
    sweeps: int = 0

    def to_dict(self) -> dict:
        return {"window": str(self.window), "point": self.point.to_dict(),
                "accuracy": str(self.accuracy), "sweeps": self.sweeps}


def _precision_floor(values) -> HalfLogNorm:
    return HalfLogNorm.of_valuation(min(v.abs_precision for v in values))


def _solve(ctx: HorseshoeContext, signs: list[str], cyclic: bool,
           left_bc: PadicNumber | None = None, right_bc: PadicNumber | None = None,
           max_sweeps: int | None = None) -> tuple[list[PadicNumber], int]:
    """Gauss-Seidel sweeps of the orbit recurrence over ``len(signs)`` unknowns."""
    a, b = ctx.params.a, ctx.params.b
    n = len(signs)
    xs = [_sign(s) * ctx.gamma for s in signs]
    budget = max_sweeps if max_sweeps is not None else 4 * n * ctx.precision + 8

    def nb(i):
        if cyclic:
            return xs[(i - 1) % n], xs[(i + 1) % n]
        lo = xs[i - 1] if i > 0 else left_bc
        hi = xs[i + 1] if i < n - 1 else right_bc
        return lo, hi

    for sweep in range(1, budget + 1):
        changed = False
        for i in range(n):
            lo, hi = nb(i)
            w = sub(a + b * lo, hi, zero_ok=True)
            new = branch_sqrt(ctx, w, signs[i])
            if not agrees(new, xs[i]) or new.N != xs[i].N:
                changed = True
            xs[i] = new
        if not changed:
            return xs, sweep
    raise NonConvergence(f"no convergence after {budget} sweeps")


def omega_periodic(ctx: HorseshoeContext, word: str | SymbolWindow,
                   target_accuracy: HalfLogNorm | None = None) -> CodedPoint:
    """``omega`` of the periodic bisequence ``...www.www...`` (index 0 at the
    first letter of ``w``)."""
    w = word.symbols if isinstance(word, SymbolWindow) else word
    _check_word(w)
    xs, sweeps = _solve(ctx, list(w), cyclic=True)
    # x_0 and x_(-1)
    pt = PlanePoint(xs[0], xs[-1])
    acc = _precision_floor([pt.x, pt.y])
    if target_accuracy is not None and acc > target_accuracy:
        raise NonConvergence(f"working precision only reaches {acc}")
    return CodedPoint(pt, SymbolWindow.word(w), acc, sweeps)


def window_error(ctx: HorseshoeContext, window: SymbolWindow, j: int) -> HalfLogNorm:
    """Bound on the error of ``x_j`` caused by the unseen symbols outside the
    window: ``max(delta_(M-j), epsilon_(N+j))``."""
    return max(ctx.delta(window.M - j), ctx.epsilon(window.N + j))


def omega_window(ctx: HorseshoeContext, window: SymbolWindow | str) -> CodedPoint:
    """Approximate ``omega(s)`` from the finite window of ``s``.

    Values just outside the window are clamped to ``s * gamma`` using the
    nearest in-window symbol.  The reported accuracy is the larger of the
    tube-radius bounds for ``x_0`` and ``y_0 = x_(-1)`` and the precision floor.
    """
    if isinstance(window, str):
        window = SymbolWindow.parse(window)
    if window.cyclic:
        return omega_periodic(ctx, window.symbols)
    signs = list(window.symbols)
    left_bc = _sign(signs[0]) * ctx.gamma
    right_bc = _sign(signs[-1]) * ctx.gamma
    xs, sweeps = _solve(ctx, signs, cyclic=False, left_bc=left_bc, right_bc=right_bc)
    x0 = xs[window.left]
    y0 = xs[window.left - 1] if window.left > 0 else left_bc
    acc = max(window_error(ctx, window, 0), window_error(ctx, window, -1), _precision_floor([x0, y0]))
    return CodedPoint(PlanePoint(x0, y0), window, acc, sweeps)


def backward_coded_point(ctx: HorseshoeContext, left: str, x0: PadicNumber | None = None) -> PlanePoint:
    """The point ``(x0, y)`` whose backward orbit follows ``left`` (read from
    ``s_(-1)`` outwards to ``s_(-n)``).  Its backward orbit stays in the box;
    for ``x0 = 0`` the forward orbit leaves it at once."""
    _check_word(left)
    x0 = PadicNumber.zero(ctx.params.p) if x0 is None else x0
    signs = list(reversed(left))  # s_(-n) .. s_(-1)
    xs, _ = _solve(ctx, signs, cyclic=False, left_bc=_sign(signs[0]) * ctx.gamma, right_bc=x0)
    return PlanePoint(x0, xs[-1])


def all_words(length: int) -> list[str]:
    return ["".join(t) for t in itertools.product(SYMBOLS, repeat=length)]


def periodic_points(ctx: HorseshoeContext, length: int,
                    target_accuracy: HalfLogNorm | None = None) -> list[CodedPoint]:
    """``omega(w)`` for all ``2**length`` words ``w``, i.e. every point of
    period dividing ``length``."""
    if length < 1:
        raise ValueError("length must be at least 1")
    return [omega_periodic(ctx, w, target_accuracy) for w in all_words(length)]


# coding ----------------------------------------------------------------------


def _classify(ctx: HorseshoeContext, x: PadicNumber, nxt: PlanePoint | None) -> str:
    s = sector(ctx, x)
    if s is not None:
        return s
    if nxt is not None and not ctx.in_box(nxt):
        raise NotInJulia("orbit leaves the box")
    raise AmbiguousSector("coordinate lies in neither disc about +-gamma")


def code_point(ctx: HorseshoeContext, pt: PlanePoint, N: int = 0, M: int = 0) -> SymbolWindow:
    """Read off ``s_(-N) .. s_M`` from the orbit of ``pt``.

    ``s_k`` is the sector of the x-coordinate of ``phi^k(pt)`` for ``k >= 0``
    and of the y-coordinate of ``phi^(k+1)(pt)`` for ``k < 0``.
    """
    params = ctx.params
    fwd = [pt]
    for _ in range(M + 1):
        if not ctx.in_box(fwd[-1]):
            raise NotInJulia("orbit leaves the box")
        fwd.append(forward(params, fwd[-1]))
    bwd = [pt]
    for _ in range(max(N - 1, 0) + 1):
        if not ctx.in_box(bwd[-1]):
            raise NotInJulia("backward orbit leaves the box")
        bwd.append(inverse(params, bwd[-1]))
    out = []
    for k in range(-N, 0):
        j = -(k + 1)
        out.append(_classify(ctx, bwd[j].y, bwd[j + 1]))
    for k in range(M + 1):
        out.append(_classify(ctx, fwd[k].x, fwd[k + 1]))
    return SymbolWindow("".join(out), N, False)


def conjugacy_bound(ctx: HorseshoeContext, window: SymbolWindow) -> HalfLogNorm:
    if window.cyclic:
        return BOTTOM
    return max(ctx.delta(window.M - 1), ctx.epsilon(window.N))


@dataclass(frozen=True)
class ConjugacyCheck:
    residual: HalfLogNorm
    bound: HalfLogNorm
    precision_floor: HalfLogNorm

    @property
    def ok(self) -> bool:
        return self.residual <= max(self.bound, self.precision_floor)

    def to_dict(self) -> dict:
        return {"residual": str(self.residual), "bound": str(self.bound),
                "precision_floor": str(self.precision_floor), "ok": self.ok}


def verify_conjugacy(ctx: HorseshoeContext, window: SymbolWindow | str) -> ConjugacyCheck:
    """Compare ``phi(omega(s))`` with ``omega(sigma(s))``, both computed independently."""
    if isinstance(window, str):
        window = SymbolWindow.parse(window)
    lhs = forward(ctx.params, omega_window(ctx, window).point)
    rhs = omega_window(ctx, window.shift()).point
    floor = _precision_floor([lhs.x, lhs.y, rhs.x, rhs.y])
    return ConjugacyCheck(lhs.distance(rhs), conjugacy_bound(ctx, window), floor)


def random_window(rng: random.Random, length: int, left: int | None = None) -> SymbolWindow:
    left = rng.randrange(length) if left is None else left
    return SymbolWindow("".join(rng.choice(SYMBOLS) for _ in range(length)), left, False)


__all__ = [
    "HorseshoeContext", "SymbolWindow", "CodedPoint", "ConjugacyCheck", "make_context", "branch_sqrt",
    "omega_periodic", "omega_window", "periodic_points", "code_point", "verify_conjugacy",
    "backward_coded_point", "canonical_rotation", "minimal_period", "all_words", "sector",
    "window_error", "conjugacy_bound", "random_window",
]
