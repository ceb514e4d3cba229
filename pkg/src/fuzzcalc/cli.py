"""Command-line front end: ``fuzzcalc {diff,derive,scan,fixtures,eval}``.

Exit status is 0 when the requested object exists, 2 when it provably does
not (difference or derivative missing, fixture failed) and 1 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from dataclasses import asdict, dataclass

from . import calculus as calc
from .analyzer import MAX_SAMPLES, ScanRequest, level_curves_csv, run_fixtures, scan
from .calculus import LimitParams, _jsonable
from .funcspec import eval_fuzzy, infer_arity, parse, parse_literal
from .fuzzy import DEFAULT_GRID_SIZE, AlphaGrid, gh_diff, h_diff, standard_diff

EXIT_OK, EXIT_USAGE, EXIT_MISSING = 0, 1, 2
GRID_ENV = "FUZZCALC_GRID"


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class CliConfig:
    grid_size: int = DEFAULT_GRID_SIZE
    params: LimitParams = LimitParams()
    output: str = "pretty"
    output_path: str | None = None

    @property
    def grid(self) -> AlphaGrid:
        return AlphaGrid.uniform(self.grid_size)

    def to_dict(self) -> dict:
        return {"grid_size": self.grid_size, "limit_params": asdict(self.params), "output": self.output}


def _default_grid() -> int:
    raw = os.environ.get(GRID_ENV)
    if raw is None:
        return DEFAULT_GRID_SIZE
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{GRID_ENV} must be an integer, got {raw!r}") from None


_PI = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)?)\*?pi(?:/(\d+\.?\d*))?$")


def real(text: str) -> float:
    """A float, or a multiple of pi such as ``pi/2``, ``-2pi`` or ``0.5*pi``."""
    s = text.strip().replace(" ", "")
    m = _PI.match(s)
    if m:
        coef = {"": 1.0, "+": 1.0, "-": -1.0}.get(m[1])
        value = (coef if coef is not None else float(m[1])) * math.pi
        return value / float(m[2]) if m[2] else value
    try:
        return float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def point(text: str) -> list[float]:
    return [real(part) for part in text.split(",")]


def interval(text: str) -> tuple[float, float]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    return real(lo), real(hi)


def box_axis(text: str) -> tuple[int, tuple[float, float]]:
    name, sep, rng = text.partition("=")
    m = re.fullmatch(r"\s*x(\d+)\s*", name)
    if not sep or not m or int(m[1]) < 1:
        raise argparse.ArgumentTypeError(f"expected xN=lo:hi, got {text!r}")
    return int(m[1]), interval(rng)


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    g = common.add_argument_group("numerics and output")
    g.add_argument("--grid", type=int, default=None, help=f"alpha levels (default {DEFAULT_GRID_SIZE} or ${GRID_ENV})")
    g.add_argument("--h0", type=float, default=LimitParams.h0, help="first step of the limit sequence")
    g.add_argument("--shrink", type=float, default=LimitParams.shrink, help="step ratio")
    g.add_argument("--iters", type=int, default=LimitParams.max_iters, help="maximum steps")
    g.add_argument("--tol", type=float, default=LimitParams.tol, help="convergence tolerance in dF")
    g.add_argument("--output", choices=("json", "csv", "pretty"), default="pretty")
    g.add_argument("--out", default=None, help="write to this file instead of stdout")

    parser = _ArgumentParser(prog="fuzzcalc", description="Fuzzy-number arithmetic and H/gH derivatives.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("diff", parents=[common], help="difference of two fuzzy literals")
    p.add_argument("kind", choices=("standard", "h", "gh"))
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("derive", parents=[common], help="H- or gH-derivative at a point")
    p.add_argument("mode", choices=("h", "gh"))
    p.add_argument("expr")
    p.add_argument("--at", type=point, action="append", required=True,
                   help="point, e.g. --at 0.5 or --at 1,2 (repeatable per coordinate)")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--var", type=int, default=None, help="partial derivative along x<var>")
    p.add_argument("--domain", type=interval, default=None,
                   help="lo:hi of the domain along the variable, for one-sided boundary limits")

    p = sub.add_parser("scan", parents=[common], help="classify a uniform grid of points")
    p.add_argument("expr")
    p.add_argument("--box", type=box_axis, action="append", required=True, help='e.g. "x1=-1:1" (repeatable)')
    p.add_argument("--samples", type=int, default=11, help=f"samples per axis, 2..{MAX_SAMPLES}")
    p.add_argument("--order", type=int, choices=(1, 2), default=1, help="2 also checks second order")
    p.add_argument("--no-gh", action="store_true", help="skip the gH classification")

    sub.add_parser("fixtures", parents=[common], help="run the built-in worked examples")

    p = sub.add_parser("eval", parents=[common], help="alpha-profile of an expression at points")
    p.add_argument("expr")
    p.add_argument("--at", type=point, action="append", required=True, help="point (repeatable)")
    return parser


def _config(ns) -> CliConfig:
    grid = ns.grid if ns.grid is not None else _default_grid()
    if grid < 2:
        raise UsageError("--grid must be at least 2")
    try:
        params = LimitParams(h0=ns.h0, shrink=ns.shrink, max_iters=ns.iters, tol=ns.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return CliConfig(grid, params, ns.output, ns.out)


def _profile_rows(name: str, num) -> list[list]:
    return [[name, repr(float(a)), repr(float(lo)), repr(float(up))]
            for a, lo, up in zip(num.levels, num.lower, num.upper)]


def _csv(header: list, rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _dump(payload: dict) -> str:
    return json.dumps(_jsonable(payload), indent=2) + "\n"


def cmd_diff(ns, cfg: CliConfig) -> tuple[str, int]:
    a, b = parse_literal(ns.a, cfg.grid), parse_literal(ns.b, cfg.grid)
    if ns.kind == "standard":
        value, ok, result = standard_diff(a, b), True, None
    else:
        cert = (h_diff if ns.kind == "h" else gh_diff)(a, b)
        value, ok, result = cert.witness, cert.exists, cert.to_dict()
    code = EXIT_OK if ok else EXIT_MISSING
    if cfg.output == "json":
        body = {"config": cfg.to_dict(), "command": "diff", "kind": ns.kind, "a": str(a), "b": str(b),
                "exists": ok, "value": value.to_dict() if value is not None else None}
        if result is not None:
            body["certificate"] = result
        return _dump(body), code
    if cfg.output == "csv":
        if ok:
            rows = _profile_rows("result", value)
        else:
            rows = [[name, repr(float(al)), repr(float(lo)), repr(float(up))]
                    for name, (lo_arr, up_arr) in cert.candidates.items()
                    for al, lo, up in zip(a.levels, lo_arr, up_arr)]
        return _csv(["candidate", "alpha", "lower", "upper"], rows), code
    if ok:
        return f"{value}\n", code
    v = cert.violation
    return f"not_exists: {v.condition} fails at alpha={v.level:g} (by {v.magnitude:.3g})\n", code


def _derive_result(ns, cfg: CliConfig):
    x = [c for chunk in ns.at for c in chunk]
    arity = len(x)
    if infer_arity(ns.expr) > arity:
        raise UsageError(f"expression uses x{infer_arity(ns.expr)} but --at gives {arity} coordinate(s)")
    e = parse(ns.expr, arity, cfg.grid)
    p = cfg.params
    if ns.order < 1:
        raise UsageError("--order must be at least 1")
    if ns.var is not None and not 1 <= ns.var <= arity:
        raise UsageError(f"--var must lie in 1..{arity}")
    if arity > 1 and ns.order > 1:
        raise UsageError("orders above 1 are supported for one variable only")
    if ns.mode == "gh":
        if ns.order != 1:
            raise UsageError("gH-derivatives are supported for order 1 only")
        if arity > 1 and ns.var is None:
            raise UsageError("--var is required for gH partials")
        return calc.gh_derivative_numeric(e, x if arity > 1 else x[0], p, ns.domain, var=ns.var or 1)
    if arity == 1:
        if ns.order == 1:
            return calc.classify_h(e, x[0], p, ns.domain)
        return calc.higher_h_derivative(e, x[0], ns.order, p, ns.domain)
    if ns.var is not None:
        return calc.partial_h_derivative(e, x, ns.var, p, domain=ns.domain)
    return calc.h_differentiable(e, x, p)


def cmd_derive(ns, cfg: CliConfig) -> tuple[str, int]:
    r = _derive_result(ns, cfg)
    code = EXIT_OK if r.differentiable else EXIT_MISSING
    x = [c for chunk in ns.at for c in chunk]
    if cfg.output == "json":
        return _dump({"config": cfg.to_dict(), "command": "derive", "mode": ns.mode, "expr": ns.expr,
                      "at": x, "order": ns.order, "var": ns.var, "result": r.to_dict()}), code
    values = ([(f"x{i}", q.value) for i, q in enumerate(r.partials, 1)]
              if isinstance(r, calc.GradientResult) else [("value", r.value)])
    if cfg.output == "csv":
        rows = [row for name, v in values if v is not None for row in _profile_rows(name, v)]
        return _csv(["component", "alpha", "lower", "upper"], rows), code
    if not r.differentiable:
        return f"not_differentiable: {r.reason}\n", code
    return "".join(f"{name}: {v}\n" for name, v in values) if len(values) > 1 else f"{values[0][1]}\n", code


def cmd_scan(ns, cfg: CliConfig) -> tuple[str, int]:
    axes = dict()
    for idx, rng in ns.box:
        if idx in axes:
            raise UsageError(f"x{idx} given twice in --box")
        axes[idx] = rng
    arity = max(axes)
    if sorted(axes) != list(range(1, arity + 1)):
        raise UsageError("--box must cover x1..xn without gaps")
    if infer_arity(ns.expr) > arity:
        raise UsageError(f"expression uses x{infer_arity(ns.expr)} but no --box is given for it")
    modes = {"H"} | (set() if ns.no_gh else {"GH"}) | ({"order2"} if ns.order == 2 else set())
    e = parse(ns.expr, arity, cfg.grid)
    req = ScanRequest(e, [axes[i] for i in range(1, arity + 1)], ns.samples, frozenset(modes),
                      cfg.params, expr_text=ns.expr)
    report = scan(req)
    if cfg.output == "json":
        body = report.to_dict()
        body["config"] = cfg.to_dict()
        return _dump(body), EXIT_OK
    if cfg.output == "csv":
        keys = [k for k in ("h", "gh", "order2") if k in report.points[0]]
        rows = []
        for pt in report.points:
            cells = [";".join(repr(v) for v in pt["x"])]
            for k in keys:
                v = pt[k]
                cells.append(v["verdict"] if "verdict" in v else
                             " ".join(f"{pair}:{state}" for pair, state in v.items()))
            rows.append(cells)
        return _csv(["x"] + keys, rows), EXIT_OK
    lines = [f"{ns.expr} on {' x '.join(f'[{lo:g}, {hi:g}]' for lo, hi in req.box)}, "
             f"{ns.samples} samples per axis"]
    for reg in report.regions:
        span = f"{reg['x_start']} .. {reg['x_end']}"
        lines.append(f"  {reg['mode']:<6} {reg['verdict']:<18} {span}")
        for side in ("lower_bracket", "upper_bracket"):
            if reg[side] is not None:
                lines.append(f"         {side.split('_')[0]} edge bracketed by {reg[side]}")
    if "order2" in modes and arity > 1:
        for pt in report.points:
            missing = [pair for pair, state in pt["order2"].items() if state != "exists"]
            if missing:
                lines.append(f"  order2 at {pt['x']}: missing {', '.join(missing)}")
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_fixtures(ns, cfg: CliConfig) -> tuple[str, int]:
    report = run_fixtures(cfg.grid_size, cfg.params)
    code = EXIT_OK if report.all_fixtures_pass else EXIT_MISSING
    if cfg.output == "json":
        body = report.to_dict()
        body["config"] = cfg.to_dict()
        return _dump(body), code
    if cfg.output == "csv":
        rows = [[f["name"], "pass" if f["passed"] else "fail", len(f["checks"])] for f in report.fixtures]
        return _csv(["fixture", "status", "checks"], rows), code
    width = max(len(f["name"]) for f in report.fixtures)
    lines = []
    for f in report.fixtures:
        lines.append(f"{'PASS' if f['passed'] else 'FAIL'}  {f['name']:<{width}}  {f['description']}")
        if f["error"]:
            lines.append(f"      error: {f['error']}")
        for ch in f["checks"]:
            if not ch["passed"]:
                lines.append(f"      {ch['check']}: expected {ch['expected']}, got {ch['computed']}")
    passed = sum(f["passed"] for f in report.fixtures)
    lines.append(f"{passed}/{len(report.fixtures)} fixtures passed (grid {cfg.grid_size}, tol {cfg.params.tol:g})")
    return "\n".join(lines) + "\n", code


def cmd_eval(ns, cfg: CliConfig) -> tuple[str, int]:
    arity = max(infer_arity(ns.expr), len(ns.at[0]))
    if any(len(x) != arity for x in ns.at):
        raise UsageError(f"every --at needs {arity} coordinate(s)")
    e = parse(ns.expr, arity, cfg.grid)
    if cfg.output == "csv":
        return level_curves_csv(e, ns.at), EXIT_OK
    values = [(x, eval_fuzzy(e, x)) for x in ns.at]
    if cfg.output == "json":
        return _dump({"config": cfg.to_dict(), "command": "eval", "expr": ns.expr,
                      "points": [{"x": x, "value": v.to_dict()} for x, v in values]}), EXIT_OK
    lines = []
    for x, v in values:
        lines.append(f"x = {', '.join(f'{c:g}' for c in x)}: {v}")
        lines.extend(f"  alpha={a:<6.4g} [{lo:.10g}, {up:.10g}]" for a, lo, up in zip(v.levels, v.lower, v.upper))
    return "\n".join(lines) + "\n", EXIT_OK


COMMANDS = {"diff": cmd_diff, "derive": cmd_derive, "scan": cmd_scan, "fixtures": cmd_fixtures, "eval": cmd_eval}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = _config(ns)
        text, code = COMMANDS[ns.command](ns, cfg)
    except (UsageError, ValueError, calc.UnsupportedFormError) as exc:
        print(f"fuzzcalc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
