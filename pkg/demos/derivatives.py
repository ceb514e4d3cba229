"""Where fuzzy functions are H- and gH-differentiable, and why they fail elsewhere."""
import math

from fuzzcalc import LimitParams, ScanRequest, classify_h, gh_derivative_numeric, higher_h_derivative, parse, scan

f = parse("tfn(0,2,4)*x1^2")
for x in (0.5, -0.5):
    h, gh = classify_h(f, x), gh_derivative_numeric(f, x)
    print(f"x = {x:+}: H -> {h.value if h.differentiable else h.reason}, gH -> {gh.value}")

# At the left end of [0, 1] only the forward quotient is needed.
print("x = 0 on [0, 1]:", classify_h(f, 0.0, domain=(0.0, 1.0)).value)

g = parse("tfn(0,2,4)*sin(x1)")
print("sin, second order at 0.5:", higher_h_derivative(g, 0.5, 2).reason)

report = scan(ScanRequest(g, [(0.0, math.pi)], 33, frozenset({"H", "GH"}), LimitParams(), "tfn(0,2,4)*sin(x1)"))
for region in report.regions:
    if region["verdict"] == "differentiable":
        print(f"{region['mode']:>2}-differentiable on [{region['x_start']:.4f}, {region['x_end']:.4f}]")
