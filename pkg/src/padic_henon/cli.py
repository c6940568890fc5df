"""Command-line interface: ``padic-henon [options] COMMAND [options]``.

Common options may be given before or after the command.  Output is a JSON
report by default; every library error exits with its own nonzero code.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import balls, horseshoe
from .errors import PadicHenonError, ParseError
from .henon import (
    PlanePoint,
    classify_region,
    filtration_radius,
    involution,
    iterate,
    orbit_fate,
)
from .localfield import HalfLogNorm, is_square, parse_literal
from .periodic import existence_report, fixed_points, two_cycle
from .reports import PUBLISHED_ROWS, Report, RunConfig, parse_rows, table_rows

INVALID_ARGUMENT_EXIT = 13

_COMMON = [
    (("--p",), dict(type=int, help="odd prime (default 3)")),
    (("--a",), dict(help="parameter a, rational or digit literal")),
    (("--b",), dict(help="parameter b, rational or digit literal")),
    (("--precision",), dict(type=int, help="relative p-adic precision (default 20)")),
    (("--k",), dict(type=int, help="ball level")),
    (("--kmax",), dict(type=int, help="largest ball level (default 6)")),
    (("--n",), dict(type=int, help="number of steps")),
    (("--max-iter",), dict(type=int, dest="max_iter", help="iteration cap (default 200)")),
    (("--threads",), dict(type=int, help="accepted for compatibility; work runs on one thread")),
    (("--state-budget",), dict(type=int, dest="state_budget", help="largest state count enumerated")),
    (("--seed",), dict(type=int, help="random seed (default 0)")),
    (("--format",), dict(choices=("json", "csv", "text"), help="output format (default json)")),
    (("--out",), dict(help="write the report here instead of stdout")),
]


def _add_common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    for flags, kw in _COMMON:
        kw = dict(kw)
        if suppress:
            kw["default"] = argparse.SUPPRESS
        parser.add_argument(*flags, **kw)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, suppress=True)

    parser = argparse.ArgumentParser(prog="padic-henon", description=__doc__.splitlines()[0])
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("classify", parents=[common], help="region, R, and the involution")

    p = sub.add_parser("orbit", parents=[common], help="iterate a point (negative --n iterates backward)")
    p.add_argument("--start", required=True, help="x,y")
    p.add_argument("--no-stop", action="store_true", help="do not stop at an escape certificate")

    p = sub.add_parser("fate", parents=[common], help="certified escape or boundedness")
    p.add_argument("--start", required=True, help="x,y")

    sub.add_parser("fixed", parents=[common], help="fixed points, 2-cycle and existence clauses")

    p = sub.add_parser("cycles", parents=[common], help="cycle structure of balls for levels 1..kmax")
    p.add_argument("--method", choices=[m.value for m in balls.Method], default="auto")
    p.add_argument("--tree", action="store_true", help="include periodic-ball child counts")

    p = sub.add_parser("julia", parents=[common], help="ball-periodicity membership test")
    p.add_argument("--start", required=True, help="x,y")

    p = sub.add_parser("measure", parents=[common], help="orbit frequencies on periodic balls")
    p.add_argument("--start", default="0,0", help="x,y (default 0,0)")

    p = sub.add_parser("attract", parents=[common], help="convergence to an attracting 2-cycle")
    p.add_argument("--samples", type=int, default=100)

    sub.add_parser("goodred", parents=[common], help="bijectivity of the reduced map for levels 1..kmax")

    p = sub.add_parser("table", parents=[common], help="CSV of P_k rows")
    p.add_argument("--published", action="store_true", help="the seven published rows")
    p.add_argument("--rows", default="", help="p,a,b,kmax;p,a,b,kmax;...")

    hs = sub.add_parser("horseshoe", help="region III coding")
    hsub = hs.add_subparsers(dest="action", required=True)
    h = hsub.add_parser("point", parents=[common], help="omega of a word or window")
    h.add_argument("--word", help="cyclic word such as +-- or window such as -+.+-")
    h = hsub.add_parser("code", parents=[common], help="symbols of a point's orbit")
    h.add_argument("--start", required=True, help="x,y")
    h.add_argument("--left", type=int, default=0, help="number of negative indices")
    h.add_argument("--right", type=int, default=5, help="largest nonnegative index")
    h = hsub.add_parser("periodic", parents=[common], help="all points of period dividing l")
    h.add_argument("--l", type=int, required=True, dest="length")
    h = hsub.add_parser("verify", parents=[common], help="phi(omega(s)) against omega(sigma(s))")
    h.add_argument("--word", required=True, help="cyclic word or window")
    return parser


def _config(ns: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    kw = {k: v for k, v in vars(ns).items() if k in fields and v is not None}
    return RunConfig(**kw)


def _point(text: str, cfg: RunConfig) -> PlanePoint:
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError(f"expected x,y but got {text!r}", text, 0)
    return PlanePoint(parse_literal(parts[0], cfg.p, cfg.precision),
                      parse_literal(parts[1], cfg.p, cfg.precision))


def _norm(h: HalfLogNorm) -> str:
    return str(h)


# commands --------------------------------------------------------------------


def cmd_classify(cfg, ns):
    params = cfg.params()
    star = involution(params)
    return {"region": classify_region(params).value, "R": _norm(filtration_radius(params)),
            "a_is_square": not params.a.is_zero and is_square(params.a),
            "involution": {"a": star.a.to_dict(), "b": star.b.to_dict(),
                           "region": classify_region(star).value}}


def cmd_orbit(cfg, ns):
    params = cfg.params()
    n = cfg.n if cfg.n is not None else 10
    trace = iterate(params, _point(ns.start, cfg), n, stop_on_escape=not ns.no_stop)
    return {"steps": trace.steps, "direction": trace.direction,
            "points": [q.to_dict() for q in trace.points], "norms": [_norm(h) for h in trace.norms],
            "certificate": None if trace.certificate is None else trace.certificate.to_dict(),
            "precision_exhausted": trace.exhausted}


def cmd_fate(cfg, ns):
    return orbit_fate(cfg.params(), _point(ns.start, cfg), cfg.max_iter).to_dict()


def cmd_fixed(cfg, ns):
    params = cfg.params()
    cyc = two_cycle(params)
    return {"fixed_points": [q.to_dict() for q in fixed_points(params)],
            "two_cycle": None if cyc is None else [q.to_dict() for q in cyc],
            "existence": existence_report(params).to_dict()}


def cmd_cycles(cfg, ns):
    params = cfg.params()
    kmax = cfg.k or cfg.kmax
    reps = balls.cycle_reports(params, kmax, ns.method, cfg.state_budget)
    out = {"levels": [r.to_dict() for r in reps], "P_k": [r.max_period for r in reps]}
    if kmax >= 2 and classify_region(params).value == "IIplus":
        out["attractor"] = balls.attractor_profile(params, kmax, cfg.state_budget).to_dict()
    if ns.tree:
        out["tree"] = balls.periodic_ball_tree(params, kmax, cfg.state_budget).to_dict()
    return out


def cmd_julia(cfg, ns):
    return balls.is_julia_member(cfg.params(), _point(ns.start, cfg), cfg.kmax).to_dict()


def cmd_measure(cfg, ns):
    k = cfg.k or 2
    n = cfg.n or 3000
    return balls.empirical_measure(cfg.params(), _point(ns.start, cfg), n, k, cfg.state_budget).to_dict()


def cmd_attract(cfg, ns):
    iters = min(cfg.max_iter, 60) if cfg.n is None else cfg.n
    return balls.attracting_cycle_check(cfg.params(), ns.samples, iters, cfg.seed).to_dict()


def cmd_goodred(cfg, ns):
    params = cfg.params()
    kmax = cfg.k or cfg.kmax
    return {"region": classify_region(params).value,
            "bijective": [balls.good_reduction_check(params, k, cfg.state_budget) for k in range(1, kmax + 1)]}


def cmd_table(cfg, ns):
    rows = list(PUBLISHED_ROWS) if ns.published else []
    rows += parse_rows(ns.rows)
    table = table_rows(rows, cfg.precision, cfg.state_budget)
    return {"rows": [dict(zip(("prime", "a", "b", "k", "P_k", "periodic_balls", "cycles"), r)) for r in table]}, table


def cmd_horseshoe(cfg, ns):
    ctx = horseshoe.make_context(cfg.params(), cfg.precision)
    head = {"context": ctx.to_dict()}
    if ns.action == "point":
        word = ns.word or "+"
        head["point"] = horseshoe.omega_window(ctx, word).to_dict()
    elif ns.action == "code":
        w = horseshoe.code_point(ctx, _point(ns.start, cfg), ns.left, ns.right)
        head["window"] = str(w)
    elif ns.action == "periodic":
        pts = horseshoe.periodic_points(ctx, ns.length)
        head["count"] = len(pts)
        head["points"] = [c.to_dict() for c in pts]
    else:
        head["check"] = horseshoe.verify_conjugacy(ctx, ns.word).to_dict()
    return head


COMMANDS = {
    "classify": cmd_classify, "orbit": cmd_orbit, "fate": cmd_fate, "fixed": cmd_fixed,
    "cycles": cmd_cycles, "julia": cmd_julia, "measure": cmd_measure, "attract": cmd_attract,
    "goodred": cmd_goodred, "table": cmd_table, "horseshoe": cmd_horseshoe,
}


def run(argv: list[str] | None = None) -> tuple[Report, int, RunConfig | None]:
    """Parse ``argv`` and execute; returns the report, exit code and config."""
    ns = build_parser().parse_args(argv)
    name = ns.command + (f" {ns.action}" if ns.command == "horseshoe" else "")
    start = time.perf_counter()
    try:
        cfg = _config(ns)
    except ValueError as exc:
        err = ParseError(str(exc))
        return Report(name, {}, error=_error(err)), err.exit_code, None
    report = Report(name, cfg.to_dict())
    code = 0
    try:
        out = COMMANDS[ns.command](cfg, ns)
        if isinstance(out, tuple):
            out, report.table = out
        report.result = out
    except PadicHenonError as exc:
        report.error, code = _error(exc), exc.exit_code
    except ValueError as exc:
        report.error = {"kind": "InvalidArgument", "message": str(exc), "exit_code": INVALID_ARGUMENT_EXIT}
        code = INVALID_ARGUMENT_EXIT
    report.duration_s = time.perf_counter() - start
    return report, code, cfg


def _error(exc: PadicHenonError) -> dict:
    d = {"kind": exc.kind, "message": str(exc), "exit_code": exc.exit_code}
    if isinstance(exc, ParseError) and exc.position is not None:
        d["position"] = exc.position
    return d


def main(argv: list[str] | None = None) -> int:
    report, code, cfg = run(argv)
    text = report.render(cfg.format if cfg else "json")
    if cfg is not None and cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if report.error is not None:
        print(f"{report.error['kind']}: {report.error['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
