import json
import math

import numpy as np
import pytest

from fuzzcalc import (EPS_VALID, AlphaGrid, FuzzyNumber, Interval, add, alpha_cut, dF, gh_diff,
                      h_diff, hausdorff, make_crisp, make_trapezoidal, make_triangular, membership,
                      scalar_mul, standard_diff, zero)
from fuzzcalc.fuzzy import (AlphaDomainError, InvalidProfileError, InvalidShapeError, make_shape,
                            profile_violation)


def tfn(*p, grid=None):
    return make_triangular(*p, grid=grid)


def close(a, b, tol=EPS_VALID):
    return dF(a, b) <= tol


# oracles -----------------------------------------------------------------------

def hausdorff_bruteforce(p, q, n=2001):
    """sup-inf distance between fine discretizations of two intervals."""
    ps = np.linspace(p.lower, p.upper, n)
    qs = np.linspace(q.lower, q.upper, n)
    d = np.abs(ps[:, None] - qs[None, :])
    return max(d.min(axis=1).max(), d.min(axis=0).max())


def triangular_membership(a1, a, a2, r):
    if r < a1 or r > a2:
        return 0.0
    if r <= a:
        return 1.0 if a == a1 else (r - a1) / (a - a1)
    return 1.0 if a2 == a else (a2 - r) / (a2 - a)


def cut_by_bisection(mu, alpha, lo, peak, hi):
    """Endpoints of {r : mu(r) >= alpha} found by bisection on each flank."""
    def edge(outside, inside):
        for _ in range(200):
            mid = 0.5 * (outside + inside)
            if mu(mid) >= alpha:
                inside = mid
            else:
                outside = mid
        return inside
    return edge(lo - 1.0, peak), edge(hi + 1.0, peak)


# grid and intervals -------------------------------------------------------------

def test_grid_validation():
    assert len(AlphaGrid.uniform()) == 101
    for bad in ([0.0, 0.5], [0.2, 1.0], [0.0, 0.5, 0.5, 1.0], [0.0, 0.7, 0.3, 1.0]):
        with pytest.raises(ValueError):
            AlphaGrid(bad)


def test_grid_union_contains_both():
    u = AlphaGrid.uniform(3).union(AlphaGrid.uniform(5))
    assert list(u.levels) == [0.0, 0.25, 0.5, 0.75, 1.0]


def test_interval_rejects_reversed_bounds():
    with pytest.raises(ValueError):
        Interval(1.0, 0.0)


@pytest.mark.parametrize("p, q, expected", [
    (Interval(0, 1), Interval(0, 1), 0.0),
    (Interval(0, 2), Interval(1, 5), 3.0),
    (Interval(3, 5), Interval(4, 4), 1.0),
])
def test_hausdorff_against_bruteforce(p, q, expected):
    assert hausdorff(p, q) == expected
    assert hausdorff_bruteforce(p, q) == pytest.approx(expected, abs=1e-9)


# constructors -------------------------------------------------------------------

def test_triangular_cuts():
    a = tfn(3, 4, 5)
    assert tuple(alpha_cut(a, 0)) == (3, 5)
    assert tuple(alpha_cut(a, 1)) == (4, 4)
    assert all(tuple(c) == (2, 2) for c in tfn(2, 2, 2).cuts)


def test_triangular_half_cut_matches_membership_inverse():
    lo, up = cut_by_bisection(lambda r: triangular_membership(-1, 1, 3, r), 0.5, -1, 1, 3)
    cut = alpha_cut(tfn(-1, 1, 3), 0.5)
    assert (cut.lower, cut.upper) == pytest.approx((lo, up), abs=1e-9)
    assert (cut.lower, cut.upper) == (0.0, 2.0)


@pytest.mark.parametrize("alpha", np.linspace(0, 1, 11))
def test_triangular_cuts_match_bisection_oracle(alpha):
    # the 0-cut is the closure of the support, so approach it from above
    level = max(alpha, 1e-13)
    lo, up = cut_by_bisection(lambda r: triangular_membership(-2, 0.5, 4, r), level, -2, 0.5, 4)
    cut = alpha_cut(tfn(-2, 0.5, 4), alpha)
    assert (cut.lower, cut.upper) == pytest.approx((lo, up), abs=1e-9)


def test_trapezoidal_cuts():
    b = make_trapezoidal(0, 1, 2, 3)
    assert tuple(alpha_cut(b, 0)) == (0, 3)
    assert tuple(alpha_cut(b, 1)) == (1, 2)
    assert tuple(alpha_cut(b, 0.5)) == (0.5, 2.5)
    assert all(tuple(c) == (1, 1) for c in make_trapezoidal(1, 1, 1, 1).cuts)


@pytest.mark.parametrize("args", [(1, 0, 2), (0, 3, 2)])
def test_triangular_rejects_bad_order(args):
    with pytest.raises(InvalidShapeError):
        tfn(*args)


def test_trapezoidal_rejects_bad_order():
    with pytest.raises(InvalidShapeError):
        make_trapezoidal(0, 2, 1, 3)


def test_profile_validation_reports_condition():
    g = AlphaGrid.uniform(3)
    with pytest.raises(InvalidProfileError, match="lower_le_upper"):
        FuzzyNumber(g, [0, 1, 2], [1, 1, 1])
    assert profile_violation(g.levels, np.array([0, 1, 0.5]), np.array([2, 2, 2])).condition == "lower_monotone"
    assert profile_violation(g.levels, np.array([0, 0, 0]), np.array([2, 3, 2])).level == 0.5


def test_shape_tags_and_str():
    assert str(tfn(0, 1, 2)) == "tfn(0, 1, 2)"
    assert str(make_trapezoidal(0, 1, 2, 3)) == "tpfn(0, 1, 2, 3)"
    assert str(make_crisp(6)) == "crisp(6)"
    g = AlphaGrid.uniform(3)
    odd = FuzzyNumber(g, [0, 0.1, 1], [3, 2.9, 1])
    assert odd.shape_tag.kind == "general"
    assert make_shape("triangular", [0, 1, 2]) == tfn(0, 1, 2)


def test_alpha_cut_interpolates_and_checks_domain():
    a = tfn(0, 2, 4)
    assert tuple(alpha_cut(a, 0.25)) == pytest.approx((0.5, 3.5))
    assert tuple(alpha_cut(tfn(0, 2, 4, grid=AlphaGrid.uniform(2)), 0.25)) == pytest.approx((0.5, 3.5))
    for bad in (-0.1, 1.1, math.nan):
        with pytest.raises(AlphaDomainError):
            alpha_cut(a, bad)


@pytest.mark.parametrize("f, r, expected", [
    (tfn(-1, 1, 3), 1.0, 1.0),
    (tfn(-1, 1, 3), 0.0, 0.5),
    (make_trapezoidal(0, 1, 2, 3), 2.5, 0.5),
    (make_trapezoidal(0, 1, 2, 3), 1.5, 1.0),
    (tfn(-1, 1, 3), 5.0, 0.0),
    (make_crisp(2), 2.0, 1.0),
    (make_crisp(2), 2.1, 0.0),
])
def test_membership(f, r, expected):
    assert membership(f, r) == pytest.approx(expected)


def test_membership_of_general_profile_is_sup_level():
    g = AlphaGrid.uniform(5)
    general = FuzzyNumber(g, [0, 0.2, 1, 1.5, 2], [4, 3.5, 3, 2.5, 2])
    assert general.shape_tag.kind == "general"
    assert membership(general, 1.0) == pytest.approx(0.5)
    assert membership(general, 2.0) == pytest.approx(1.0)
    assert membership(general, 3.75) == pytest.approx(0.125)
    assert membership(general, -1) == 0.0


# arithmetic ---------------------------------------------------------------------

def test_addition():
    assert close(add(tfn(0, 1, 2), tfn(-1, 0, 1)), tfn(-1, 1, 3))
    assert add(tfn(1, 2, 3), zero()) == tfn(1, 2, 3)
    assert close(tfn(1, 2, 3) + tfn(1, 2, 3), tfn(2, 4, 6))


def test_scalar_multiplication():
    assert close(scalar_mul(2, tfn(0, 1, 2)), tfn(0, 2, 4))
    assert close(scalar_mul(-1, tfn(1, 2, 3)), tfn(-3, -2, -1))
    assert scalar_mul(0, tfn(1, 2, 3)) == zero()
    assert close(-1 * tfn(1, 2, 3), tfn(-3, -2, -1))


def test_mixed_grids_resample_to_union():
    a = tfn(0, 1, 2, grid=AlphaGrid.uniform(3))
    b = tfn(0, 1, 2, grid=AlphaGrid.uniform(5))
    s = add(a, b)
    assert len(s.grid) == 5
    assert close(s, tfn(0, 2, 4, grid=AlphaGrid.uniform(5)))


def test_standard_difference():
    assert close(standard_diff(tfn(0, 1, 2), tfn(0, 1, 2)), tfn(-2, 0, 2))
    assert dF(standard_diff(tfn(0, 1, 2), tfn(0, 1, 2)), zero()) > 0
    assert close(standard_diff(make_crisp(5), make_crisp(3)), make_crisp(2))
    assert close(standard_diff(tfn(3, 4, 5), tfn(-3, -2, -1)), tfn(4, 6, 8))


def test_dF_examples():
    a, c = tfn(0, 1, 2), tfn(5, 7, 11)
    b = tfn(0, 2, 4)
    assert dF(a, a) == 0
    assert dF(a, b) == 2
    assert dF(add(a, c), add(b, c)) == pytest.approx(dF(a, b))


# differences --------------------------------------------------------------------

def test_h_difference_exists():
    cert = h_diff(tfn(-1, 1, 3), tfn(-1, 0, 1))
    assert cert.exists and close(cert.witness, tfn(0, 1, 2))
    same = h_diff(tfn(0, 1, 2), tfn(0, 1, 2))
    assert same.exists and close(same.witness, zero())


def test_h_difference_missing_reports_first_violation():
    cert = h_diff(tfn(-1, 0, 1), tfn(-2, 0, 2))
    assert not cert.exists and cert.witness is None
    assert cert.violation.condition == "lower_le_upper"
    assert cert.violation.level == 0.0


def test_gh_difference_crisp_six():
    cert = gh_diff(tfn(3, 4, 5), tfn(-3, -2, -1))
    assert cert.exists
    assert np.max(np.abs(cert.witness.lower - 6)) <= EPS_VALID
    assert np.max(np.abs(cert.witness.upper - 6)) <= EPS_VALID


def test_gh_difference_missing_with_both_cases_broken():
    cert = gh_diff(tfn(0, 2, 4), make_trapezoidal(0, 1, 2, 3))
    assert not cert.exists
    assert cert.violation.condition in ("case_i", "case_ii")
    lo, up = cert.candidates["case_i"]
    assert (lo[0], up[0]) == (0, 1)
    assert (lo[-1], up[-1]) == (1, 0)
    assert cert.case_violations["case_i"] is not None and cert.case_violations["case_ii"] is not None


def test_gh_difference_case_ii():
    a, b = tfn(0, 1, 2), tfn(-1, 1, 3)
    cert = gh_diff(a, b)
    assert cert.exists and cert.case == "ii"
    assert not h_diff(a, b).exists
    # case (ii): b = a - c
    assert close(b, add(a, scalar_mul(-1, cert.witness)))


def test_gh_difference_of_identical_operands():
    cert = gh_diff(tfn(1, 2, 3), tfn(1, 2, 3))
    assert cert.exists and cert.case == "both" and close(cert.witness, zero())


def test_certificate_invariant():
    cert = gh_diff(tfn(3, 4, 5), tfn(-3, -2, -1))
    with pytest.raises(ValueError):
        type(cert)(cert.operator, "exists", None, None)


# serialization ------------------------------------------------------------------

@pytest.mark.parametrize("f", [tfn(0, 1, 2), make_trapezoidal(0, 1, 2, 3), make_crisp(-2),
                               FuzzyNumber(AlphaGrid.uniform(3), [0, 0.1, 1], [3, 2.9, 1])])
def test_json_round_trip(f):
    data = json.loads(json.dumps(f.to_dict(include_cuts=False)))
    back = FuzzyNumber.from_dict(data)
    assert back == f and back.shape_tag == f.shape_tag
