"""H-derivatives and gH-derivatives of fuzzy-valued functions.

Two routes are provided and kept independent of each other:

* a numeric limit engine, which forms the one-sided difference quotients on
  a geometric step sequence, certifies the existence of every H- or
  gH-difference it uses and extrapolates the quotients to ``h -> 0``;
* a symbolic analysis for expressions ``sum_j c_j * g_j(x)``, which decides
  term by term from the signs of ``g_j`` and its derivative.

The symbolic route defers to the numeric one wherever the sign test is
inconclusive (a zero value or a zero derivative at the point).
"""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .fuzzy import (FuzzyNumber, InvalidProfileError, add, gh_diff, h_diff, scalar_mul, zero)
from .funcspec import (Const, FuzzyExpr, crisp_derivative, derivative_expr, eval_crisp,
                       eval_fuzzy, variables)

H = "H"
GH = "GH"
DIFFERENTIABLE = "differentiable"
NOT_DIFFERENTIABLE = "not_differentiable"

FORWARD_MISSING = "forward_h_diff_missing"
BACKWARD_MISSING = "backward_h_diff_missing"
GH_MISSING = "gh_diff_missing"
NO_CONVERGENCE = "no_convergence"
ONE_SIDED_MISMATCH = "one_sided_mismatch"
ZERO_PARTIAL = "zero_partial"
NOT_CONTINUOUS = "partial_not_continuous"

ZERO_TOL = 1e-12
_SAFE = 2.0


class UnsupportedFormError(ValueError):
    pass


@dataclass(frozen=True)
class LimitParams:
    """Discretization of ``h -> 0``: steps ``h0 * shrink**k`` for ``k < max_iters``."""

    h0: float = 1e-2
    shrink: float = 0.5
    max_iters: int = 20
    tol: float = 1e-6

    def __post_init__(self):
        if not self.h0 > 0:
            raise ValueError("h0 must be positive")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie in (0, 1)")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError("max_iters must be a positive integer")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


DEFAULT_PARAMS = LimitParams()


@dataclass(frozen=True)
class DerivativeResult:
    mode: str
    verdict: str
    value: FuzzyNumber | None = None
    reason: str | None = None
    evidence: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if (self.verdict == DIFFERENTIABLE) != (self.value is not None):
            raise ValueError("a differentiable verdict needs a value, and only then")

    @property
    def differentiable(self) -> bool:
        return self.verdict == DIFFERENTIABLE

    def to_dict(self) -> dict:
        return {"mode": self.mode, "verdict": self.verdict,
                "value": self.value.to_dict() if self.value is not None else None,
                "reason": self.reason, "evidence": _jsonable(self.evidence)}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, FuzzyNumber):
        return obj.to_dict()
    return obj


# numeric limit engine ----------------------------------------------------------

def _dist(p: np.ndarray, q: np.ndarray) -> float:
    return float(np.max(np.abs(p - q)))


@dataclass
class _Side:
    exists: bool = True
    converged: bool = False
    limit: np.ndarray | None = None
    error: float = float("inf")
    grid: object = None
    steps: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"exists": self.exists, "converged": self.converged,
                "error_estimate": self.error if np.isfinite(self.error) else None,
                "steps": self.steps}


def _limit_along(step_diff: Callable, params: LimitParams) -> _Side:
    """Extrapolate difference quotients along ``h_k = h0 * shrink**k``.

    ``step_diff(h)`` returns the existence certificate of the difference at
    step ``h`` and the scalar to apply to its witness. Quotients enter a
    Neville table (one-sided errors carry every power of ``h``) and the
    table stops once its error estimate starts to grow. Once a difference
    fails to exist, the remaining steps are still checked and recorded but
    no longer extrapolated.
    """
    side = _Side()
    con = 1.0 / params.shrink
    prev_row = None
    for k in range(params.max_iters):
        h = params.h0 * params.shrink ** k
        cert, scale = step_diff(h)
        rec = {"h": h, "exists": cert.exists}
        if not cert.exists:
            rec["violation"] = cert.violation.to_dict()
            side.exists = False
            side.steps.append(rec)
            continue
        if not side.exists:
            side.steps.append(rec)
            continue
        q = scalar_mul(scale, cert.witness)
        side.grid = q.grid
        row = [np.stack([q.lower, q.upper])]
        stop = False
        if prev_row is None:
            side.limit = row[0]
        else:
            rec["dF_prev"] = _dist(row[0], prev_row[0])
            fac = 1.0
            for j in range(1, len(prev_row) + 1):
                fac *= con
                r = (fac * row[j - 1] - prev_row[j - 1]) / (fac - 1.0)
                row.append(r)
                err = max(_dist(r, row[j - 1]), _dist(r, prev_row[j - 1]))
                if err <= side.error:
                    side.limit, side.error = r, err
            rec["error_estimate"] = side.error
            stop = _dist(row[-1], prev_row[-1]) >= _SAFE * side.error
        side.steps.append(rec)
        prev_row = row
        if stop:
            break
    side.converged = side.exists and side.error <= params.tol
    return side


def _required_sides(x0: float, domain) -> tuple[bool, bool]:
    if domain is None:
        return True, True
    lo, hi = map(float, domain)
    if not lo < hi:
        raise ValueError(f"domain must satisfy lo < hi, got {domain}")
    span = 1e-12 * max(1.0, abs(lo), abs(hi))
    return x0 < hi - span, x0 > lo + span


def _numeric(f: Callable[[float], FuzzyNumber], x0: float, params: LimitParams,
             domain, mode: str) -> DerivativeResult:
    x0 = float(x0)
    need_fwd, need_bwd = _required_sides(x0, domain)
    fx0 = f(x0)
    if mode == H:
        fwd = lambda h: (h_diff(f(x0 + h), fx0), 1.0 / h)
        bwd = lambda h: (h_diff(fx0, f(x0 - h)), 1.0 / h)
        missing = {"forward": FORWARD_MISSING, "backward": BACKWARD_MISSING}
    else:
        fwd = lambda h: (gh_diff(f(x0 + h), fx0), 1.0 / h)
        bwd = lambda h: (gh_diff(f(x0 - h), fx0), -1.0 / h)
        missing = {"forward": GH_MISSING, "backward": GH_MISSING}
    sides = {}
    if need_fwd:
        sides["forward"] = _limit_along(fwd, params)
    if need_bwd:
        sides["backward"] = _limit_along(bwd, params)
    boundary = None if need_fwd and need_bwd else ("lower" if need_fwd else "upper")
    evidence = {"method": "numeric", "x0": x0, "params": asdict(params), "boundary": boundary,
                "sides": {name: s.to_dict() for name, s in sides.items()}}

    reason = next((missing[n] for n, s in sides.items() if not s.exists), None)
    if reason is None and not all(s.converged for s in sides.values()):
        reason = NO_CONVERGENCE
    if reason is None and len(sides) == 2:
        gap = _dist(sides["forward"].limit, sides["backward"].limit)
        evidence["one_sided_distance"] = gap
        if gap > params.tol:
            reason = ONE_SIDED_MISMATCH
    if reason is not None:
        return DerivativeResult(mode, NOT_DIFFERENTIABLE, None, reason, evidence)

    limit = np.mean([s.limit for s in sides.values()], axis=0)
    grid = next(iter(sides.values())).grid
    try:
        value = FuzzyNumber(grid, limit[0], limit[1])
    except InvalidProfileError as exc:
        evidence["invalid_limit"] = str(exc)
        return DerivativeResult(mode, NOT_DIFFERENTIABLE, None, NO_CONVERGENCE, evidence)
    return DerivativeResult(mode, DIFFERENTIABLE, value, None, evidence)


def _along(f, x0, var: int):
    """Reduce ``f`` to a function of one real along coordinate ``var``."""
    if isinstance(f, FuzzyExpr):
        if np.ndim(x0) == 0:
            x0 = (float(x0),)
        base = [float(v) for v in x0]
        if len(base) != f.arity:
            raise ValueError(f"expected a point with {f.arity} coordinates")

        def g(t):
            pt = list(base)
            pt[var - 1] = t
            return eval_fuzzy(f, pt)
        return g, base[var - 1]
    if np.ndim(x0) != 0:
        raise ValueError("a plain callable takes a scalar point")
    return f, float(x0)


def h_derivative_numeric(f, x0, params: LimitParams | None = None, domain=None,
                         var: int = 1) -> DerivativeResult:
    """H-derivative from the two one-sided quotient limits.

    ``f`` is a callable ``float -> FuzzyNumber`` or a :class:`FuzzyExpr`
    (then ``var`` selects the coordinate). At an endpoint of ``domain`` only
    the inward quotient is required. The reported value is the level-wise
    midpoint of the two one-sided limits.
    """
    g, t0 = _along(f, x0, var)
    return _numeric(g, t0, params or DEFAULT_PARAMS, domain, H)


def gh_derivative_numeric(f, x0, params: LimitParams | None = None, domain=None,
                          var: int = 1) -> DerivativeResult:
    """gH-derivative; quotients for negative steps use the swapped scalar rule."""
    g, t0 = _along(f, x0, var)
    return _numeric(g, t0, params or DEFAULT_PARAMS, domain, GH)


# symbolic analysis ---------------------------------------------------------------

def _term_analysis(e: FuzzyExpr, x: tuple, var: int) -> list[dict]:
    rows = []
    for j, t in enumerate(e.terms):
        row = {"term": j, "status": None, "g": None, "dg": None}
        if not variables(t.crisp):
            row["status"] = "constant"
        else:
            d = crisp_derivative(t.crisp, var)
            gv, dv = eval_crisp(t.crisp, x), eval_crisp(d, x)
            row.update(g=gv, dg=dv)
            if t.coeff.is_crisp:
                row["status"] = "crisp"
            elif d == Const(0.0):
                row["status"] = "zero_partial"
            elif abs(gv) <= ZERO_TOL or abs(dv) <= ZERO_TOL:
                row["status"] = "degenerate"
            elif gv * dv > 0:
                row["status"] = "increasing"
            else:
                row["status"] = "sign_fail"
        rows.append(row)
    return rows


def _symbolic(e: FuzzyExpr, x, var: int, params: LimitParams, domain,
              strict_zero: bool) -> DerivativeResult:
    x = tuple(float(v) for v in (x if np.ndim(x) else (x,)))
    if len(x) != e.arity:
        raise UnsupportedFormError(f"point has {len(x)} coordinates, expression arity is {e.arity}")
    if not 1 <= var <= e.arity:
        raise UnsupportedFormError(f"variable x{var} outside arity {e.arity}")
    evidence = {"method": "symbolic", "x": list(x), "var": var}
    if not e.depends_on(var):
        # constant along x_var: every difference is zero
        evidence["constant_along"] = True
        return DerivativeResult(H, DIFFERENTIABLE, zero(e.grid), None, evidence)
    rows = _term_analysis(e, x, var)
    evidence["terms"] = rows
    statuses = {r["status"] for r in rows}
    if "sign_fail" in statuses:
        return DerivativeResult(H, NOT_DIFFERENTIABLE, None, FORWARD_MISSING, evidence)
    if strict_zero and "zero_partial" in statuses:
        return DerivativeResult(H, NOT_DIFFERENTIABLE, None, ZERO_PARTIAL, evidence)
    if statuses & {"zero_partial", "degenerate"}:
        num = h_derivative_numeric(e, x, params, domain, var)
        merged = dict(num.evidence, deferred_from=evidence)
        return DerivativeResult(H, num.verdict, num.value, num.reason, merged)
    value = zero(e.grid)
    for r in rows:
        if r["status"] in ("increasing", "crisp"):
            value = add(value, scalar_mul(r["dg"], e.terms[r["term"]].coeff))
    return DerivativeResult(H, DIFFERENTIABLE, value, None, evidence)


def h_derivative_symbolic(e: FuzzyExpr, x0, params: LimitParams | None = None,
                          domain=None) -> DerivativeResult:
    """H-derivative of a one-variable expression from the term sign conditions.

    A term ``c * g`` with a non-crisp coefficient passes when ``g`` and
    ``g'`` are nonzero and share a sign; it then contributes ``c * g'``.
    Crisp coefficients and constant terms always pass. Any failing term
    makes the verdict negative; a zero value or zero derivative hands the
    point to the numeric engine.
    """
    if e.arity != 1:
        raise UnsupportedFormError("h_derivative_symbolic takes a one-variable expression")
    return _symbolic(e, x0, 1, params or DEFAULT_PARAMS, domain, strict_zero=False)


def partial_h_derivative(e: FuzzyExpr, x0, i: int, params: LimitParams | None = None,
                         method: str = "auto", domain=None) -> DerivativeResult:
    """Partial H-derivative along ``x_i``.

    ``method="auto"`` applies the per-term positivity test. Unlike the
    one-variable case, a term whose partial vanishes identically fails the
    test unless the whole expression is constant along ``x_i``.
    ``method="numeric"`` runs the limit engine along the coordinate.
    """
    params = params or DEFAULT_PARAMS
    if method == "numeric":
        return h_derivative_numeric(e, x0, params, domain, var=i)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    return _symbolic(e, x0, i, params, domain, strict_zero=True)


def higher_h_derivative(e: FuzzyExpr, x0, order: int, params: LimitParams | None = None,
                        domain=None) -> DerivativeResult:
    """Order-``k`` H-derivative, re-checking the sign conditions at each order."""
    if order < 1:
        raise ValueError("order must be at least 1")
    cur = e
    trail = []
    for k in range(1, order + 1):
        res = h_derivative_symbolic(cur, x0, params, domain)
        trail.append({"order": k, "verdict": res.verdict, "reason": res.reason,
                      "method": res.evidence.get("method")})
        if not res.differentiable:
            return DerivativeResult(H, NOT_DIFFERENTIABLE, None, res.reason,
                                    {"failed_order": k, "orders": trail, "last": res.evidence})
        cur = derivative_expr(cur, 1)
    return DerivativeResult(H, DIFFERENTIABLE, res.value, None,
                            {"order": order, "orders": trail, "last": res.evidence})


def second_partial_existence(e: FuzzyExpr, x0, params: LimitParams | None = None,
                             domain=None) -> dict[tuple[int, int], DerivativeResult]:
    """For each ordered pair ``(i, j)``: the H-derivative along ``x_j`` of ``df/dx_i``."""
    out = {}
    for i in range(1, e.arity + 1):
        dom_i = domain[i - 1] if domain is not None else None
        first = partial_h_derivative(e, x0, i, params, domain=dom_i)
        fi = derivative_expr(e, i)
        for j in range(1, e.arity + 1):
            dom_j = domain[j - 1] if domain is not None else None
            if not first.differentiable:
                out[(i, j)] = DerivativeResult(H, NOT_DIFFERENTIABLE, None, first.reason,
                                               {"first_order_failed": i})
            else:
                out[(i, j)] = partial_h_derivative(fi, x0, j, params, domain=dom_j)
    return out


@dataclass(frozen=True)
class GradientResult:
    verdict: str
    partials: tuple
    reason: str | None = None
    evidence: dict = field(default_factory=dict, repr=False)

    @property
    def differentiable(self) -> bool:
        return self.verdict == DIFFERENTIABLE

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "reason": self.reason,
                "partials": [p.to_dict() for p in self.partials],
                "evidence": _jsonable(self.evidence)}


def h_differentiable(e: FuzzyExpr, x0, params: LimitParams | None = None, box=None,
                     radius: float | None = None) -> GradientResult:
    """Multivariable H-differentiability at ``x0``.

    Every partial H-derivative must exist at ``x0`` and at the points of a
    ``3 x ... x 3`` stencil of half-width ``radius`` (clipped to ``box``),
    and the partials there must stay within ``10 * tol`` of each other in dF.
    The radius defaults to ``tol / 100`` so smooth partials clear the bound.
    """
    params = params or DEFAULT_PARAMS
    if radius is None:
        radius = params.tol / 100
    x0 = [float(v) for v in (x0 if np.ndim(x0) else (x0,))]
    n = e.arity
    doms = list(box) if box is not None else [None] * n
    partials = tuple(partial_h_derivative(e, x0, i, params, domain=doms[i - 1])
                     for i in range(1, n + 1))
    for i, p in enumerate(partials, 1):
        if not p.differentiable:
            return GradientResult(NOT_DIFFERENTIABLE, partials, p.reason, {"failed_var": i})
    offsets = []
    for k, v in enumerate(x0):
        opts = {v - radius, v, v + radius}
        if doms[k] is not None:
            opts = {min(max(o, doms[k][0]), doms[k][1]) for o in opts}
        offsets.append(sorted(opts))
    worst = 0.0
    for pt in itertools.product(*offsets):
        for i, p in enumerate(partials, 1):
            q = partial_h_derivative(e, pt, i, params, domain=doms[i - 1])
            if not q.differentiable:
                return GradientResult(NOT_DIFFERENTIABLE, partials, q.reason,
                                      {"failed_var": i, "neighbour": list(pt)})
            dev = _dist(np.stack([q.value.lower, q.value.upper]),
                        np.stack([p.value.lower, p.value.upper]))
            worst = max(worst, dev)
    evidence = {"stencil_radius": radius, "max_partial_deviation": worst}
    if worst > 10 * params.tol:
        return GradientResult(NOT_DIFFERENTIABLE, partials, NOT_CONTINUOUS, evidence)
    return GradientResult(DIFFERENTIABLE, partials, None, evidence)


def classify_h(e: FuzzyExpr, x0, params: LimitParams | None = None, domain=None,
               var: int | None = None) -> DerivativeResult:
    """Symbolic-first H verdict; negative symbolic verdicts are traced numerically.

    When the numeric engine confirms the failure its reason and step trace
    replace the symbolic ones; otherwise the symbolic verdict stands and the
    disagreement is kept in the evidence.
    """
    params = params or DEFAULT_PARAMS
    if var is None:
        res = h_derivative_symbolic(e, x0, params, domain)
        var = 1
    else:
        res = partial_h_derivative(e, x0, var, params, domain=domain)
    if res.differentiable or res.evidence.get("method") != "symbolic":
        return res
    num = h_derivative_numeric(e, x0, params, domain, var)
    if not num.differentiable:
        return DerivativeResult(H, NOT_DIFFERENTIABLE, None, num.reason,
                                dict(num.evidence, symbolic=res.evidence, symbolic_reason=res.reason))
    return DerivativeResult(H, NOT_DIFFERENTIABLE, None, res.reason,
                            dict(res.evidence, numeric_disagrees=True))


# level-function check ------------------------------------------------------------

def level_derivative_deviation(e: FuzzyExpr, x0, result: DerivativeResult,
                               step: float = 1e-6, var: int = 1) -> float:
    """Largest gap between central differences of the level functions and the cuts of ``result``."""
    if not result.differentiable:
        raise ValueError("level check needs a differentiable result")
    f, t0 = _along(e, x0, var)
    up, dn = f(t0 + step), f(t0 - step)
    dl = (up.lower - dn.lower) / (2 * step)
    du = (up.upper - dn.upper) / (2 * step)
    v = result.value
    if v.grid != up.grid:
        raise ValueError("result and expression use different alpha grids")
    return float(max(np.max(np.abs(dl - v.lower)), np.max(np.abs(du - v.upper))))


def level_derivative_check(e: FuzzyExpr, x0, result: DerivativeResult,
                           step: float = 1e-6, tol: float = 1e-4, var: int = 1) -> bool:
    """Do the cuts of the derivative match the derivatives of the level functions?"""
    return level_derivative_deviation(e, x0, result, step, var) <= tol
