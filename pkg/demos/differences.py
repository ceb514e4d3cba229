"""Hukuhara and generalized Hukuhara differences, with their existence certificates."""
from fuzzcalc import gh_diff, h_diff, make_trapezoidal, make_triangular

cert = h_diff(make_triangular(-1, 1, 3), make_triangular(-1, 0, 1))
print("H difference (-1,1,3) - (-1,0,1):", cert.witness)

cert = gh_diff(make_triangular(3, 4, 5), make_triangular(-3, -2, -1))
print("gH difference (3,4,5) - (-3,-2,-1):", cert.witness, f"(case {cert.case})")

cert = gh_diff(make_triangular(0, 2, 4), make_trapezoidal(0, 1, 2, 3))
print("gH difference (0,2,4) - (0,1,2,3) exists:", cert.exists)
lower, upper = cert.candidates["case_i"]
print(f"  case (i) candidate at alpha=0: [{lower[0]:g}, {upper[0]:g}]"
      f", at alpha=1: [{lower[-1]:g}, {upper[-1]:g}]")
for case, (alpha, kind, size) in cert.case_violations.items():
    print(f"  {case} breaks {kind} at alpha={alpha:g} by {size:.3g}")
