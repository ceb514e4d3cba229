"""Domain scans, region summaries and the built-in worked-example fixtures."""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import calculus as calc
from .calculus import (DEFAULT_PARAMS, DerivativeResult, LimitParams, _jsonable, classify_h,
                       gh_derivative_numeric, h_derivative_numeric, h_derivative_symbolic,
                       h_differentiable, higher_h_derivative, level_derivative_check,
                       partial_h_derivative, second_partial_existence)
from .funcspec import FuzzyExpr, eval_fuzzy, parse
from .fuzzy import (EPS_VALID, AlphaGrid, DEFAULT_GRID_SIZE, add, dF, gh_diff, h_diff,
                    make_crisp, make_trapezoidal, make_triangular, scalar_mul, standard_diff,
                    zero)

MODES = frozenset({"H", "GH", "order2"})
MAX_ARITY = 3
MAX_SAMPLES = 33


@dataclass(frozen=True)
class ScanRequest:
    expr: FuzzyExpr
    box: tuple
    samples_per_axis: int = 11
    modes: frozenset = frozenset({"H", "GH"})
    limit_params: LimitParams = DEFAULT_PARAMS
    expr_text: str | None = None

    def __post_init__(self):
        box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "modes", frozenset(self.modes))
        if len(box) != self.expr.arity:
            raise ValueError(f"box has {len(box)} axes, expression arity is {self.expr.arity}")
        if self.expr.arity > MAX_ARITY:
            raise ValueError(f"scans support at most {MAX_ARITY} variables")
        for lo, hi in box:
            if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
                raise ValueError(f"invalid box axis [{lo}, {hi}]")
        if not 2 <= self.samples_per_axis <= MAX_SAMPLES:
            raise ValueError(f"samples_per_axis must lie in [2, {MAX_SAMPLES}]")
        if not self.modes <= MODES or not self.modes:
            raise ValueError(f"modes must be a nonempty subset of {sorted(MODES)}")

    def to_dict(self) -> dict:
        return {"expr": self.expr_text if self.expr_text is not None else str(self.expr),
                "arity": self.expr.arity, "box": [list(b) for b in self.box],
                "samples_per_axis": self.samples_per_axis, "modes": sorted(self.modes),
                "grid_size": len(self.expr.grid), "limit_params": asdict(self.limit_params)}


@dataclass
class DiffReport:
    request: dict
    points: list = field(default_factory=list)
    regions: list = field(default_factory=list)
    fixtures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return _jsonable({"request": self.request, "points": self.points,
                          "regions": self.regions, "fixtures": self.fixtures})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @property
    def all_fixtures_pass(self) -> bool:
        return all(f["passed"] for f in self.fixtures)

    def region_extent(self, mode: str = "h", verdict: str = calc.DIFFERENTIABLE) -> list[tuple]:
        return [(r["x_start"], r["x_end"]) for r in self.regions
                if r["mode"] == mode and r["verdict"] == verdict]


def _cuts(v) -> dict | None:
    if v is None:
        return None
    return {"alpha0": [float(v.lower[0]), float(v.upper[0])],
            "alpha1": [float(v.lower[-1]), float(v.upper[-1])]}


def _brief(r) -> dict:
    return {"verdict": r.verdict, "reason": r.reason}


def _classify_point(req: ScanRequest, x: tuple) -> dict:
    e, p = req.expr, req.limit_params
    rec = {"x": list(x)}
    if e.arity == 1:
        dom = req.box[0]
        h = g = None
        if "H" in req.modes:
            h = classify_h(e, x[0], p, dom)
            rec["h"] = dict(_brief(h), method=h.evidence.get("method"))
        if "GH" in req.modes:
            g = gh_derivative_numeric(e, x[0], p, dom)
            rec["gh"] = _brief(g)
        if "order2" in req.modes:
            rec["order2"] = _brief(higher_h_derivative(e, x[0], 2, p, dom))
        if h is not None and h.differentiable:
            rec["derivative_cuts"] = dict(_cuts(h.value), source="h")
        elif g is not None and g.differentiable:
            rec["derivative_cuts"] = dict(_cuts(g.value), source="gh")
        else:
            rec["derivative_cuts"] = None
        return rec

    if "H" in req.modes:
        grad = h_differentiable(e, x, p, req.box)
        rec["h"] = {"verdict": grad.verdict, "reason": grad.reason,
                    "partials": [dict(_brief(q), var=i, derivative_cuts=_cuts(q.value))
                                 for i, q in enumerate(grad.partials, 1)]}
        rec["derivative_cuts"] = {f"x{i}": _cuts(q.value) for i, q in enumerate(grad.partials, 1)}
    if "GH" in req.modes:
        parts = [gh_derivative_numeric(e, x, p, req.box[i - 1], var=i) for i in range(1, e.arity + 1)]
        ok = all(q.differentiable for q in parts)
        rec["gh"] = {"verdict": calc.DIFFERENTIABLE if ok else calc.NOT_DIFFERENTIABLE,
                     "reason": next((q.reason for q in parts if not q.differentiable), None),
                     "partials": [dict(_brief(q), var=i) for i, q in enumerate(parts, 1)]}
    if "order2" in req.modes:
        pairs = second_partial_existence(e, x, p, req.box)
        rec["order2"] = {f"{i},{j}": ("exists" if r.differentiable else "not_exists")
                         for (i, j), r in pairs.items()}
    return rec


def _segments(points: list, key: str) -> list[dict]:
    out = []
    verdicts = [pt[key]["verdict"] for pt in points]
    start = 0
    for k in range(1, len(points) + 1):
        if k == len(points) or verdicts[k] != verdicts[start]:
            seg = {"mode": key, "verdict": verdicts[start], "start": start, "end": k - 1,
                   "x_start": points[start]["x"], "x_end": points[k - 1]["x"],
                   "lower_bracket": [points[start - 1]["x"], points[start]["x"]] if start > 0 else None,
                   "upper_bracket": [points[k - 1]["x"], points[k]["x"]] if k < len(points) else None}
            if len(points[0]["x"]) == 1:
                for name in ("x_start", "x_end"):
                    seg[name] = seg[name][0]
                for name in ("lower_bracket", "upper_bracket"):
                    if seg[name] is not None:
                        seg[name] = [v[0] for v in seg[name]]
            out.append(seg)
            start = k
    return out


def scan(req: ScanRequest) -> DiffReport:
    """Classify every point of a uniform grid over the box.

    Points are visited in raster order (last axis fastest); regions are the
    maximal runs of equal verdicts in that order, each with the sample pairs
    that bracket its ends.
    """
    axes = [np.linspace(lo, hi, req.samples_per_axis) for lo, hi in req.box]
    points = []
    for idx, x in enumerate(itertools.product(*axes)):
        x = tuple(float(v) for v in x)
        try:
            rec = _classify_point(req, x)
        except (ValueError, ArithmeticError) as exc:
            raise type(exc)(f"at x={list(x)}: {exc}") from exc
        rec["index"] = idx
        points.append(rec)
    regions = []
    for key in ("h", "gh"):
        if points and key in points[0]:
            regions.extend(_segments(points, key))
    if req.expr.arity == 1 and "order2" in req.modes:
        regions.extend(_segments(points, "order2"))
    return DiffReport(request=req.to_dict(), points=points, regions=regions)


def level_curves_csv(e: FuzzyExpr, xs: Sequence, stream=None) -> str:
    """Rows ``x, alpha, lower, upper`` of the level functions at each point."""
    buf = stream if stream is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "alpha", "lower", "upper"])
    for x in xs:
        pt = tuple(x) if np.ndim(x) else (x,)
        f = eval_fuzzy(e, pt)
        label = ";".join(repr(float(v)) for v in pt)
        for a, lo, up in zip(f.levels, f.lower, f.upper):
            w.writerow([label, repr(float(a)), repr(float(lo)), repr(float(up))])
    return buf.getvalue() if stream is None else ""


# fixtures ----------------------------------------------------------------------

@dataclass
class _Ctx:
    grid: AlphaGrid
    params: LimitParams
    checks: list = field(default_factory=list)

    def parse(self, text: str, arity: int = 1) -> FuzzyExpr:
        return parse(text, arity, self.grid)

    def tfn(self, *p):
        return make_triangular(*p, grid=self.grid)

    def check(self, what: str, expected, computed, ok: bool):
        self.checks.append({"check": what, "expected": expected, "computed": computed,
                            "passed": bool(ok)})

    def derivative_is(self, what: str, res: DerivativeResult, expected, tol: float = 1e-5):
        if not res.differentiable:
            self.check(what, str(expected), f"{res.verdict} ({res.reason})", False)
            return
        d = dF(res.value, expected)
        self.check(what, str(expected), f"{res.value} (dF={d:.2e})", d <= tol)

    def fails(self, what: str, res, reasons=None):
        ok = not res.differentiable and (reasons is None or res.reason in reasons)
        want = "not_differentiable" + (f" ({'/'.join(reasons)})" if reasons else "")
        self.check(what, want, f"{res.verdict} ({res.reason})", ok)


def _fx_gh_crisp(c: _Ctx):
    cert = gh_diff(c.tfn(3, 4, 5), c.tfn(-3, -2, -1))
    six = make_crisp(6, c.grid)
    ok = cert.exists and dF(cert.witness, six) <= EPS_VALID
    c.check("gH difference of (3,4,5) and (-3,-2,-1)", "crisp(6)",
            str(cert.witness) if cert.exists else cert.verdict, ok)


def _fx_gh_missing(c: _Ctx):
    cert = gh_diff(c.tfn(0, 2, 4), make_trapezoidal(0, 1, 2, 3, c.grid))
    c.check("gH difference of (0,2,4) and (0,1,2,3)", "not_exists", cert.verdict, not cert.exists)
    lo, up = cert.candidates["case_i"]
    c.check("case (i) candidate at alpha=0", [0.0, 1.0], [float(lo[0]), float(up[0])],
            abs(lo[0]) <= EPS_VALID and abs(up[0] - 1) <= EPS_VALID)
    c.check("case (i) candidate at alpha=1 is reversed", [1.0, 0.0], [float(lo[-1]), float(up[-1])],
            abs(lo[-1] - 1) <= EPS_VALID and abs(up[-1]) <= EPS_VALID)


def _fx_h_difference(c: _Ctx):
    a, b = c.tfn(-1, 1, 3), c.tfn(-1, 0, 1)
    cert = h_diff(a, b)
    ok = cert.exists and dF(cert.witness, c.tfn(0, 1, 2)) <= EPS_VALID
    c.check("H difference of (-1,1,3) and (-1,0,1)", "tfn(0, 1, 2)",
            str(cert.witness) if cert.exists else cert.verdict, ok)
    self_diff = h_diff(a, a)
    c.check("a minus_H a", "crisp(0)", str(self_diff.witness),
            self_diff.exists and dF(self_diff.witness, zero(c.grid)) <= EPS_VALID)
    back = h_diff(add(a, b), b)
    c.check("(a + b) minus_H b", str(a), str(back.witness),
            back.exists and dF(back.witness, a) <= EPS_VALID)


def _fx_standard_difference(c: _Ctx):
    a = c.tfn(0, 1, 2)
    d = standard_diff(a, a)
    c.check("a minus a under interval difference", "tfn(-2, 0, 2)", str(d),
            dF(d, c.tfn(-2, 0, 2)) <= EPS_VALID)
    c.check("a minus a is not crisp zero", "dF > 0", f"dF={dF(d, zero(c.grid)):g}",
            dF(d, zero(c.grid)) > EPS_VALID)


def _fx_constant(c: _Ctx):
    e = c.parse("tfn(0,2,4)")
    for x0 in (-1.0, 0.0, 2.5):
        c.derivative_is(f"numeric H-derivative at x={x0}", h_derivative_numeric(e, x0, c.params), zero(c.grid))
        c.derivative_is(f"symbolic H-derivative at x={x0}", h_derivative_symbolic(e, x0, c.params), zero(c.grid))
        c.derivative_is(f"gH-derivative at x={x0}", gh_derivative_numeric(e, x0, c.params), zero(c.grid))


def _fx_linear(c: _Ctx):
    a = c.tfn(0, 2, 4)
    e = c.parse("tfn(0,2,4)*x1")
    for x0 in (0.5, 1.0, 3.0):
        r = h_derivative_numeric(e, x0, c.params)
        c.derivative_is(f"H-derivative at x={x0}", r, a)
        if r.differentiable:
            c.check(f"level functions at x={x0}", "pass", level_derivative_check(e, x0, r),
                    level_derivative_check(e, x0, r))
    for x0 in (-1.0, -0.3):
        c.fails(f"H at x={x0}", h_derivative_numeric(e, x0, c.params), [calc.FORWARD_MISSING])
        c.derivative_is(f"gH-derivative at x={x0}", gh_derivative_numeric(e, x0, c.params), a)
    c.fails("H at x=0", h_derivative_numeric(e, 0.0, c.params), [calc.BACKWARD_MISSING])
    c.derivative_is("gH-derivative at x=0", gh_derivative_numeric(e, 0.0, c.params), a)


def _fx_quadratic(c: _Ctx):
    a = c.tfn(0, 2, 4)
    e = c.parse("tfn(0,2,4)*x1^2")
    r = h_derivative_numeric(e, 0.5, c.params)
    c.derivative_is("H-derivative at x=0.5", r, a)
    c.check("level functions at x=0.5", "pass", r.differentiable and level_derivative_check(e, 0.5, r),
            r.differentiable and level_derivative_check(e, 0.5, r))
    r0 = h_derivative_numeric(e, 0.0, c.params, domain=(0.0, 1.0))
    c.derivative_is("one-sided H-derivative at x=0 on [0,1]", r0, zero(c.grid))
    c.fails("H at x=-0.5", h_derivative_numeric(e, -0.5, c.params), [calc.FORWARD_MISSING])
    c.derivative_is("gH-derivative at x=-0.5", gh_derivative_numeric(e, -0.5, c.params),
                    scalar_mul(-1.0, a))
    for x0 in (0.25, 1.0):
        c.derivative_is(f"symbolic H at x={x0}", h_derivative_symbolic(e, x0, c.params),
                        scalar_mul(2 * x0, a))
    bad = [x0 for x0 in np.linspace(-1, 1, 9)
           if not gh_derivative_numeric(e, x0, c.params, domain=(-1.0, 1.0)).differentiable]
    c.check("gH-differentiable on samples of [-1,1]", [], bad, not bad)


def _fx_sine(c: _Ctx):
    a = c.tfn(0, 2, 4)
    e = c.parse("tfn(0,2,4)*sin(x1)")
    dom = (0.0, math.pi)
    inside = np.linspace(0.1, math.pi / 2 - 0.1, 5)
    beyond = np.linspace(math.pi / 2 + 0.1, math.pi - 0.1, 5)
    for x0 in inside:
        c.derivative_is(f"H at x={x0:.3f}", classify_h(e, x0, c.params, dom), scalar_mul(math.cos(x0), a))
        c.fails(f"order-2 H at x={x0:.3f}", higher_h_derivative(e, x0, 2, c.params, dom))
    for x0 in beyond:
        c.fails(f"H at x={x0:.3f}", classify_h(e, x0, c.params, dom), [calc.FORWARD_MISSING])
        c.fails(f"numeric H at x={x0:.3f}", h_derivative_numeric(e, x0, c.params, dom))
    bad = [float(x0) for x0 in np.linspace(0, math.pi, 9)
           if not gh_derivative_numeric(e, x0, c.params, domain=dom).differentiable]
    c.check("gH-differentiable on samples of [0,pi]", [], bad, not bad)


def _fx_power(c: _Ctx):
    a = c.tfn(1, 2, 3)
    for n in (1, 2, 3, 4):
        e = c.parse(f"tfn(1,2,3)*x1^{n}")
        for x0 in (0.5, 1.0, 2.0):
            c.derivative_is(f"n={n}, H-derivative at x={x0}", h_derivative_symbolic(e, x0, c.params),
                            scalar_mul(n * x0 ** (n - 1), a))
            c.derivative_is(f"n={n}, numeric H-derivative at x={x0}", h_derivative_numeric(e, x0, c.params),
                            scalar_mul(n * x0 ** (n - 1), a))
            c.derivative_is(f"n={n}, order-{n} at x={x0}", higher_h_derivative(e, x0, n, c.params),
                            scalar_mul(math.factorial(n), a))
    e3 = c.parse("tfn(1,2,3)*x1^3")
    c.derivative_is("n=3, order-2 at x=0.5", higher_h_derivative(e3, 0.5, 2, c.params), scalar_mul(3.0, a))


def _fx_polynomial(c: _Ctx):
    text = "tfn(1,2,3)*x1^3 + tfn(0,1,2)*x1^2 + tfn(1,1.5,2)*x1 + tfn(0,1,3)"
    e = c.parse(text)
    coeffs = [c.tfn(1, 2, 3), c.tfn(0, 1, 2), c.tfn(1, 1.5, 2)]
    for x0 in (0.5, 1.5):
        first = add(add(scalar_mul(3 * x0 ** 2, coeffs[0]), scalar_mul(2 * x0, coeffs[1])), coeffs[2])
        c.derivative_is(f"H-derivative at x={x0}", h_derivative_numeric(e, x0, c.params), first)
        c.derivative_is(f"order-3 at x={x0}", higher_h_derivative(e, x0, 3, c.params), scalar_mul(6.0, coeffs[0]))


def _fx_exponential(c: _Ctx):
    a = c.tfn(0, 2, 4)
    e = c.parse("tfn(0,2,4)*exp(x1)")
    for x0 in (0.0, 0.5, 1.0):
        for k in (1, 2, 3, 4):
            c.derivative_is(f"order-{k} at x={x0}", higher_h_derivative(e, x0, k, c.params, (0.0, math.inf)),
                            scalar_mul(math.exp(x0), a))


def _fx_modelling(c: _Ctx):
    f1 = c.parse("tfn(0,2,4)*x1")
    f2 = c.parse("tfn(0,1,2)*(2*x1)")
    worst = 0.0
    for x in (1, 2, 3, 4, 5):
        v1, v2 = eval_fuzzy(f1, [x]), eval_fuzzy(f2, [x])
        worst = max(worst, float(np.max(np.abs(v1.lower - v2.lower))), float(np.max(np.abs(v1.upper - v2.upper))))
        al = c.grid.levels
        form = max(np.max(np.abs(v1.lower - 2 * al * x)), np.max(np.abs(v1.upper - (4 - 2 * al) * x)))
        worst = max(worst, float(form))
    c.check("level functions of both models agree for x=1..5", "<= 1e-12", f"{worst:.2e}", worst <= 1e-12)
    c.check("first model at x=2", "tfn(0, 4, 8)", str(eval_fuzzy(f1, [2])),
            dF(eval_fuzzy(f1, [2]), c.tfn(0, 4, 8)) <= EPS_VALID)
    narrow = eval_fuzzy(c.parse("tfn(1,2,3)*x1"), [1])
    c.check("narrower coefficient changes the spread", "tfn(1, 2, 3) != tfn(0, 2, 4)", str(narrow),
            dF(narrow, eval_fuzzy(f2, [1])) > EPS_VALID)


def _fx_sum_rule(c: _Ctx):
    f = c.parse("tfn(0,2,4)*x1^2")
    g = c.parse("tfn(1,2,3)*exp(x1)")
    fg = c.parse("tfn(0,2,4)*x1^2 + tfn(1,2,3)*exp(x1)")
    x0 = 0.7
    df_, dg_, dfg = (h_derivative_numeric(e, x0, c.params) for e in (f, g, fg))
    if df_.differentiable and dg_.differentiable:
        c.derivative_is("derivative of the sum", dfg, add(df_.value, dg_.value))
    else:
        c.check("summands differentiable", True, False, False)
    for lam in (3.0, -2.0):
        scaled = lambda x, lam=lam: scalar_mul(lam, eval_fuzzy(f, [x]))
        r = h_derivative_numeric(scaled, x0, c.params)
        if df_.differentiable:
            c.derivative_is(f"derivative of {lam} * f", r, scalar_mul(lam, df_.value))


_SAMPLES_2D = [(x1, x2) for x1 in (0.25, 1.0, 2.0) for x2 in (0.25, 1.0, 2.0)]
_CUBIC = "tfn(-1,1,3)*x1^3 + tfn(1,2,3)*x2^3 + tfn(-1,1,3)*(x1*x2)"
_CUBIC_REGROUPED = "tfn(-1,1,3)*(x1^3 + 2*x2^3) + tfn(-1,1,3)*(x1*x2)"
_CUBIC_SINGLE = "tfn(0,1,2)*(x1^3 + 2*x2^3 + x1*x2)"
_PROFIT = "tfn(1,2,4)*x1^2 + tfn(1,2,4)*x2^2 + tfn(1,3,5)"
_PROFIT_REWRITTEN = "tfn(0.5,1,2)*(2*x1^2 + 2*x2^2 + 2)"


def _first_order_all(c: _Ctx, e: FuzzyExpr, label: str):
    bad = []
    for x in _SAMPLES_2D:
        if not h_differentiable(e, x, c.params).differentiable:
            bad.append(list(x))
    c.check(f"{label}: partial H-derivatives exist on samples", [], bad, not bad)


def _second_order(c: _Ctx, e: FuzzyExpr, label: str, expect_mixed: bool, expect_pure: bool | None = None):
    wrong = []
    for x in _SAMPLES_2D:
        for (i, j), r in second_partial_existence(e, x, c.params).items():
            want = expect_mixed if i != j else expect_pure
            if want is not None and r.differentiable != want:
                wrong.append([list(x), [i, j]])
    what = "exist" if expect_mixed else "fail"
    c.check(f"{label}: mixed second partials {what} on samples", [], wrong, not wrong)


def _fx_cubic_levels(c: _Ctx):
    e = c.parse(_CUBIC, 2)
    al = c.grid.levels
    worst = 0.0
    for x1, x2 in _SAMPLES_2D:
        v = eval_fuzzy(e, [x1, x2])
        lo = (-1 + 2 * al) * x1 ** 3 + (1 + al) * x2 ** 3 + (-1 + 2 * al) * (x1 * x2)
        up = (3 - 2 * al) * x1 ** 3 + (3 - al) * x2 ** 3 + (3 - 2 * al) * (x1 * x2)
        worst = max(worst, float(np.max(np.abs(v.lower - lo))), float(np.max(np.abs(v.upper - up))))
    c.check("level functions match the closed forms", "<= 1e-12", f"{worst:.2e}", worst <= 1e-12)


def _fx_cubic_original(c: _Ctx):
    e = c.parse(_CUBIC, 2)
    for x in _SAMPLES_2D:
        for i in (1, 2):
            c.fails(f"partial along x{i} at {x}", partial_h_derivative(e, x, i, c.params), [calc.ZERO_PARTIAL])


def _fx_cubic_regrouped(c: _Ctx):
    e = c.parse(_CUBIC_REGROUPED, 2)
    _first_order_all(c, e, "regrouped")
    _second_order(c, e, "regrouped", expect_mixed=False)


def _fx_cubic_single(c: _Ctx):
    e = c.parse(_CUBIC_SINGLE, 2)
    _first_order_all(c, e, "single term")
    _second_order(c, e, "single term", expect_mixed=True, expect_pure=True)
    x = (1.0, 1.0)
    one = c.tfn(0, 1, 2)
    c.derivative_is("partial along x1 at (1,1)", partial_h_derivative(e, x, 1, c.params), scalar_mul(4.0, one))
    c.derivative_is("partial along x2 at (1,1)", partial_h_derivative(e, x, 2, c.params), scalar_mul(7.0, one))


def _fx_linear_regrouping(c: _Ctx):
    split = c.parse("tfn(0,1,2)*x1 + tfn(1,2,3)*x2", 2)
    joined = c.parse("tfn(0,1,2)*(x1 + 2*x2)", 2)
    for x in _SAMPLES_2D:
        c.fails(f"split form at {x}", h_differentiable(split, x, c.params), [calc.ZERO_PARTIAL])
    _first_order_all(c, joined, "joined")


def _fx_profit_original(c: _Ctx):
    e = c.parse(_PROFIT, 2)
    for x in _SAMPLES_2D:
        c.fails(f"original form at {x}", h_differentiable(e, x, c.params), [calc.ZERO_PARTIAL])


def _fx_profit_rewritten(c: _Ctx):
    e = c.parse(_PROFIT_REWRITTEN, 2)
    _first_order_all(c, e, "rewritten")
    _second_order(c, e, "rewritten", expect_mixed=True, expect_pure=True)


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    run: Callable[[_Ctx], None]


FIXTURES = (
    Fixture("gh_difference_crisp", "gH difference of two triangular numbers is crisp 6", _fx_gh_crisp),
    Fixture("gh_difference_missing", "gH difference of a triangular and a trapezoidal number fails", _fx_gh_missing),
    Fixture("h_difference", "H difference of nested triangular numbers and its identities", _fx_h_difference),
    Fixture("standard_difference", "interval difference of a number with itself is not zero", _fx_standard_difference),
    Fixture("constant_function", "constant fuzzy function has H-derivative zero", _fx_constant),
    Fixture("linear_function", "a*x: H-differentiable for x>0 only, gH everywhere", _fx_linear),
    Fixture("quadratic_function", "a*x^2: H on [0,1], gH on [-1,1]", _fx_quadratic),
    Fixture("sine_function", "a*sin(x): H on (0,pi/2), gH on [0,pi], order 2 fails", _fx_sine),
    Fixture("power_function", "a*x^n is n-times H-differentiable for x>0", _fx_power),
    Fixture("polynomial_function", "fuzzy polynomial is n-times H-differentiable for x>0", _fx_polynomial),
    Fixture("exponential_function", "a*exp(x) is n-times H-differentiable for x>=0", _fx_exponential),
    Fixture("modelling_equivalence", "two fuzzifications of 2x share their level functions", _fx_modelling),
    Fixture("sum_rule", "derivative of a sum and of a real multiple", _fx_sum_rule),
    Fixture("cubic_levels", "level functions of the two-variable cubic", _fx_cubic_levels),
    Fixture("cubic_original", "three-term cubic: zero partials block H-differentiability", _fx_cubic_original),
    Fixture("cubic_regrouped", "two-term cubic: first order exists, mixed second order fails", _fx_cubic_regrouped),
    Fixture("cubic_single_term", "single-term cubic: first and second order exist", _fx_cubic_single),
    Fixture("linear_regrouping", "x1, x2 split fails; single term x1+2x2 passes", _fx_linear_regrouping),
    Fixture("profit_original", "quadratic profit model with three terms fails", _fx_profit_original),
    Fixture("profit_rewritten", "single-term profit model passes to second order", _fx_profit_rewritten),
)


def run_fixtures(grid_size: int = DEFAULT_GRID_SIZE, params: LimitParams | None = None) -> DiffReport:
    """Run every built-in fixture; failures are recorded, never raised."""
    params = params or DEFAULT_PARAMS
    grid = AlphaGrid.uniform(grid_size)
    results = []
    for fx in FIXTURES:
        ctx = _Ctx(grid, params)
        try:
            fx.run(ctx)
            error = None
        except Exception as exc:  # recorded, not propagated
            error = f"{type(exc).__name__}: {exc}"
        passed = error is None and bool(ctx.checks) and all(ch["passed"] for ch in ctx.checks)
        results.append({"name": fx.name, "description": fx.description, "passed": passed,
                        "error": error, "checks": ctx.checks})
    request = {"fixtures": [f.name for f in FIXTURES], "grid_size": grid_size,
               "limit_params": asdict(params)}
    return DiffReport(request=request, fixtures=results)
