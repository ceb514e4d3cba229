"""Two fuzzifications of the same crisp model, and how regrouping changes differentiability."""
from fuzzcalc import dF, eval_fuzzy, h_differentiable, parse, second_partial_existence

f1, f2 = parse("tfn(0,2,4)*x1"), parse("tfn(0,1,2)*(2*x1)")
for x in (1, 3):
    v1, v2 = eval_fuzzy(f1, [x]), eval_fuzzy(f2, [x])
    print(f"x = {x}: {v1} and {v2}, dF = {dF(v1, v2):g}")

single = parse("tfn(-1,1,3)*(x1^3 + 2*x2^3 + x1*x2)", 2)
split = parse("tfn(-1,1,3)*x1^3 + tfn(1,2,3)*x2^3 + tfn(-1,1,3)*(x1*x2)", 2)
regrouped = parse("tfn(-1,1,3)*(x1^3 + 2*x2^3) + tfn(-1,1,3)*(x1*x2)", 2)

point = (1.0, 1.0)
for name, e in [("single term", single), ("split", split), ("regrouped", regrouped)]:
    grad = h_differentiable(e, point)
    seconds = {f"{i}{j}": r.differentiable for (i, j), r in second_partial_existence(e, point).items()}
    print(f"{name:>11}: gradient {grad.verdict}{'' if grad.reason is None else ' (' + grad.reason + ')'}"
          f", second partials {seconds}")
