"""Alpha-cut arithmetic on triangular and trapezoidal fuzzy numbers."""
from fuzzcalc import add, alpha_cut, dF, make_trapezoidal, make_triangular, scalar_mul, standard_diff

a = make_triangular(0, 2, 4)
b = make_trapezoidal(0, 1, 2, 3)

print("a        =", a)
print("b        =", b)
print("a + b    =", add(a, b))
print("-2 * a   =", scalar_mul(-2, a))
print("a 0.5-cut:", alpha_cut(a, 0.5))

# The standard difference never cancels: a - a is a symmetric number around 0, not 0.
print("a - a    =", standard_diff(a, a))
print("dF(a, b) =", dF(a, b))

# Distributivity holds for same-sign scalars and breaks for mixed signs.
left, right = scalar_mul(3 + (-1), a), add(scalar_mul(3, a), scalar_mul(-1, a))
print(f"(3 + -1)a vs 3a + (-1)a: dF = {dF(left, right):g}")
