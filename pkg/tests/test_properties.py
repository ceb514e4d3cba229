"""Randomized laws of the arithmetic, the differences and the derivative engines."""
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from fuzzcalc import (EPS_VALID, Interval, LimitParams, add, dF, gh_diff, h_diff,
                      hausdorff, make_triangular, scalar_mul, zero)
from fuzzcalc import calculus as calc
from fuzzcalc.funcspec import (Add, Const, Func, FuzzyExpr, FuzzyTerm, Mul, Neg, Pow, Sub, Var,
                               crisp_derivative, eval_crisp, eval_fuzzy, parse)
from fuzzcalc.fuzzy import profile_violation

from strategies import GRID, NUMERIC, PROPERTY, fuzzy_numbers, reals, scalars


def rel(a, b):
    return 1e-12 * max(1.0, abs(a), abs(b))


# arithmetic ---------------------------------------------------------------------

@PROPERTY
@given(fuzzy_numbers(), fuzzy_numbers(), scalars)
def test_results_stay_valid_fuzzy_numbers(a, b, lam):
    for r in (add(a, b), scalar_mul(lam, a), scalar_mul(lam, add(a, b))):
        assert profile_violation(r.levels, r.lower, r.upper) is None


@PROPERTY
@given(fuzzy_numbers(), fuzzy_numbers(), fuzzy_numbers())
def test_dF_is_a_metric(a, b, c):
    assert dF(a, b) >= 0
    assert dF(a, b) == dF(b, a)
    assert dF(a, a) == 0
    assert dF(a, c) <= dF(a, b) + dF(b, c) + rel(dF(a, c), dF(a, b) + dF(b, c))


@PROPERTY
@given(fuzzy_numbers(), fuzzy_numbers(), fuzzy_numbers(), fuzzy_numbers(), scalars)
def test_dF_translation_homogeneity_subadditivity(a, b, c, d, lam):
    base = dF(a, b)
    assert dF(add(a, c), add(b, c)) == pytest.approx(base, rel=1e-12, abs=1e-12 * 100)
    assert dF(scalar_mul(lam, a), scalar_mul(lam, b)) == pytest.approx(abs(lam) * base, rel=1e-12, abs=1e-10)
    lhs, rhs = dF(add(a, c), add(b, d)), base + dF(c, d)
    assert lhs <= rhs + rel(lhs, rhs) * 100


@PROPERTY
@given(fuzzy_numbers(), st.floats(0, 10), st.floats(0, 10), st.booleans())
def test_scalar_distributes_over_same_sign_sum(a, x, y, negative):
    if negative:
        x, y = -x, -y
    assert dF(scalar_mul(x + y, a), add(scalar_mul(x, a), scalar_mul(y, a))) <= 1e-10 * (1 + 50 * 20)


def test_scalar_distribution_fails_for_mixed_signs():
    a = make_triangular(0, 1, 2)
    lhs = scalar_mul(1 + (-1), a)
    rhs = add(scalar_mul(1, a), scalar_mul(-1, a))
    assert lhs == zero()
    assert dF(lhs, rhs) == pytest.approx(2.0)


@PROPERTY
@given(fuzzy_numbers(), fuzzy_numbers(), scalars, scalars)
def test_scalar_laws(a, b, lam, mu):
    assert dF(scalar_mul(lam, add(a, b)), add(scalar_mul(lam, a), scalar_mul(lam, b))) <= 1e-11 * 1000
    assert dF(scalar_mul(lam, scalar_mul(mu, a)), scalar_mul(lam * mu, a)) <= 1e-11 * 5000
    assert add(a, zero(a.grid)) == a


@PROPERTY
@given(st.tuples(reals, reals).map(sorted), st.tuples(reals, reals).map(sorted))
def test_hausdorff_matches_discretized_sup_inf(p, q):
    p, q = Interval(*p), Interval(*q)
    n = 401
    ps, qs = np.linspace(p.lower, p.upper, n), np.linspace(q.lower, q.upper, n)
    d = np.abs(ps[:, None] - qs[None, :])
    brute = max(d.min(axis=1).max(), d.min(axis=0).max())
    spacing = max(p.width, q.width) / (n - 1)
    assert abs(hausdorff(p, q) - brute) <= spacing + 1e-9


# differences --------------------------------------------------------------------

@PROPERTY
@given(fuzzy_numbers(), fuzzy_numbers())
def test_h_difference_reconstructs_and_implies_gh(b, c):
    a = add(b, c)
    cert = h_diff(a, b)
    assert cert.exists
    assert dF(add(cert.witness, b), a) <= EPS_VALID * 100
    g = gh_diff(a, b)
    assert g.exists and dF(g.witness, cert.witness) <= EPS_VALID


@PROPERTY
@given(fuzzy_numbers(), fuzzy_numbers())
def test_h_and_gh_agree_on_arbitrary_pairs(a, b):
    cert = h_diff(a, b)
    if cert.exists:
        g = gh_diff(a, b)
        assert g.exists and dF(g.witness, cert.witness) <= EPS_VALID


@PROPERTY
@given(fuzzy_numbers(), fuzzy_numbers())
def test_gh_case_ii_reconstructs_subtrahend(a, b):
    cert = gh_diff(a, b)
    if cert.exists and cert.case == "ii":
        assert dF(b, add(a, scalar_mul(-1, cert.witness))) <= EPS_VALID * 100
    if cert.exists and cert.case == "i":
        assert dF(a, add(b, cert.witness)) <= EPS_VALID * 100


# parser and symbolic derivatives -------------------------------------------------

leaves = st.one_of(st.builds(Const, st.floats(0, 5, allow_nan=False)),
                   st.builds(Var, st.integers(1, 2)))


def _extend(children):
    return st.one_of(
        st.builds(Neg, children),
        st.builds(Add, children, children),
        st.builds(Sub, children, children),
        st.builds(Mul, children, children),
        st.builds(Pow, children, st.integers(0, 3)),
        st.builds(Func, st.sampled_from(["sin", "cos", "exp"]), children),
    )


crisp_exprs = st.recursive(leaves, _extend, max_leaves=6)
coefficients = st.lists(st.integers(-8, 8), min_size=3, max_size=3).map(
    lambda p: make_triangular(*(sorted(v / 2 for v in p)), grid=GRID))


@PROPERTY
@given(st.lists(st.tuples(coefficients, crisp_exprs), min_size=1, max_size=3))
def test_print_parse_round_trip(terms):
    e = FuzzyExpr(2, tuple(FuzzyTerm(c, g) for c, g in terms))
    back = parse(str(e), 2, GRID)
    assert back.terms == e.terms


def _bounded(g, x):
    try:
        v = eval_crisp(g, x)
    except OverflowError:
        return False
    return math.isfinite(v) and abs(v) < 1e6


@PROPERTY
@given(crisp_exprs, st.integers(1, 2),
       st.lists(st.floats(-2, 2, allow_nan=False), min_size=2, max_size=2))
def test_crisp_derivative_matches_central_differences(g, i, x):
    assume(_bounded(g, x))
    d = crisp_derivative(g, i)
    h = 1e-6 * max(1.0, abs(x[i - 1]))
    up, dn = list(x), list(x)
    up[i - 1] += h
    dn[i - 1] -= h
    assume(_bounded(g, up) and _bounded(g, dn))
    fd = (eval_crisp(g, up) - eval_crisp(g, dn)) / (2 * h)
    exact = eval_crisp(d, x)
    scale = max(1.0, abs(exact), abs(eval_crisp(g, x)))
    assert abs(fd - exact) <= 1e-6 * scale


@PROPERTY
@given(st.lists(st.tuples(coefficients, crisp_exprs), min_size=1, max_size=3),
       st.lists(st.floats(-2, 2, allow_nan=False), min_size=2, max_size=2))
def test_level_functions_follow_the_swap_rule(terms, x):
    assume(all(_bounded(g, x) for _, g in terms))
    e = FuzzyExpr(2, tuple(FuzzyTerm(c, g) for c, g in terms))
    lo = np.zeros(len(GRID))
    up = np.zeros(len(GRID))
    for c, g in terms:
        v = eval_crisp(g, x)
        if v >= 0:
            lo += v * c.lower
            up += v * c.upper
        else:
            lo += v * c.upper
            up += v * c.lower
    f = eval_fuzzy(e, x)
    scale = 1e-12 * max(1.0, float(np.max(np.abs(lo))), float(np.max(np.abs(up))))
    assert np.max(np.abs(f.lower - lo)) <= scale * 10
    assert np.max(np.abs(f.upper - up)) <= scale * 10


# derivatives --------------------------------------------------------------------

FAST = LimitParams(h0=1e-2, shrink=0.5, max_iters=20, tol=1e-6)
unit_coeffs = st.lists(st.integers(0, 8), min_size=3, max_size=3).map(
    lambda p: make_triangular(*(sorted(v / 4 for v in p)), grid=GRID))


@st.composite
def positive_polynomials(draw):
    """Fuzzy polynomials sum c_k * (a_k x^k) with a_k > 0, increasing on x > 0."""
    n = draw(st.integers(1, 3))
    terms = []
    for _ in range(n):
        k = draw(st.integers(1, 4))
        a = draw(st.integers(1, 5)) / 2
        terms.append(FuzzyTerm(draw(unit_coeffs), Mul(Const(a), Pow(Var(1), k))))
    if draw(st.booleans()):
        terms.append(FuzzyTerm(draw(unit_coeffs), Const(1.0)))
    return FuzzyExpr(1, tuple(terms))


@NUMERIC
@given(positive_polynomials(), st.floats(0.1, 2.0))
def test_symbolic_and_numeric_derivatives_agree(e, x0):
    sym = calc.h_derivative_symbolic(e, x0, FAST)
    assert sym.differentiable
    num = calc.h_derivative_numeric(e, x0, FAST)
    assert num.differentiable
    assert dF(sym.value, num.value) <= 1e-5


@NUMERIC
@given(positive_polynomials(), st.floats(0.1, 2.0))
def test_level_functions_differentiate_to_the_cuts(e, x0):
    r = calc.h_derivative_symbolic(e, x0, FAST)
    assert calc.level_derivative_check(e, x0, r, step=1e-6, tol=1e-4)


@NUMERIC
@given(positive_polynomials(), positive_polynomials(), st.floats(0.1, 2.0), st.floats(-3, 3))
def test_sum_and_scalar_rules(f, g, x0, lam):
    both = FuzzyExpr(1, f.terms + g.terms)
    df_, dg_ = calc.h_derivative_numeric(f, x0, FAST), calc.h_derivative_numeric(g, x0, FAST)
    dfg = calc.h_derivative_numeric(both, x0, FAST)
    assert dF(dfg.value, add(df_.value, dg_.value)) <= 1e-5
    scaled = calc.h_derivative_numeric(lambda t: scalar_mul(lam, eval_fuzzy(f, [t])), x0, FAST)
    assert scaled.differentiable
    assert dF(scaled.value, scalar_mul(lam, df_.value)) <= 1e-5 * max(1.0, abs(lam))


single_terms = st.tuples(
    unit_coeffs,
    st.sampled_from(["x1", "x1^2", "x1^3", "sin(x1)", "cos(x1)", "exp(x1)", "-x1", "x1 - x1^3"]),
    st.floats(-3, 3),
)


@NUMERIC
@given(single_terms)
def test_h_differentiable_implies_gh_differentiable(case):
    c, body, x0 = case
    e = FuzzyExpr(1, (FuzzyTerm(c, parse(f"crisp(1)*({body})", 1, GRID).terms[0].crisp),))
    h = calc.h_derivative_numeric(e, x0, FAST)
    if h.differentiable:
        gh = calc.gh_derivative_numeric(e, x0, FAST)
        assert gh.differentiable
        assert dF(h.value, gh.value) <= FAST.tol * 10


# bodies with g * g' < 0 on the given interval
SIGN_FAIL = [("x1", (-3.0, -0.1)), ("-x1", (0.1, 3.0)), ("x1^3", (-3.0, -0.3)),
             ("x1^2", (-3.0, -0.1)), ("sin(x1)", (1.7, 3.0)), ("cos(x1)", (0.1, 1.4)),
             ("x1 - x1^3", (0.65, 0.95))]
failing_terms = st.sampled_from(SIGN_FAIL).flatmap(
    lambda bi: st.tuples(unit_coeffs, st.just(bi[0]), st.floats(*bi[1])))


@NUMERIC
@given(failing_terms)
def test_negative_certification(case):
    c, body, x0 = case
    assume(not c.is_crisp)
    e = FuzzyExpr(1, (FuzzyTerm(c, parse(f"crisp(1)*({body})", 1, GRID).terms[0].crisp),))
    sym = calc.h_derivative_symbolic(e, x0, FAST)
    statuses = [t["status"] for t in sym.evidence.get("terms", [])]
    assume("sign_fail" in statuses)
    assert not sym.differentiable
    # Below spread * |g'| * h the violation drops under EPS_VALID and the
    # difference legitimately exists to tolerance; keep every step resolvable.
    h_min = FAST.h0 * FAST.shrink ** (FAST.max_iters - 1)
    spread = float(c.upper[0] - c.lower[0])
    assume(spread * abs(sym.evidence["terms"][0]["dg"]) * h_min > 10 * EPS_VALID)
    num = calc.h_derivative_numeric(e, x0, FAST)
    assert num.reason in (calc.FORWARD_MISSING, calc.BACKWARD_MISSING)
    side = "forward" if num.reason == calc.FORWARD_MISSING else "backward"
    steps = num.evidence["sides"][side]["steps"]
    assert len(steps) == FAST.max_iters
    assert not any(s["exists"] for s in steps)
