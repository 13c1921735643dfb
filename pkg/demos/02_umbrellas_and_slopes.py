# Slopes are the weights where the umbrella changes shape.
#
#   python demos/02_umbrellas_and_slopes.py

from fractions import Fraction
from pathlib import Path

from bindmod import load_problem
from bindmod.umbrella import WeightL, compute_umbrella, critical_slopes, slopes_of_module

FIX = Path(__file__).resolve().parent.parent / "fixtures"

cols = [(1, 0), (0, 1), (3, 3)]

# scale the third column by 1/r and watch the faces avoiding 0
for r in [1, 3, 6, Fraction(13, 2), 10]:
    u = compute_umbrella(cols, WeightL({2}, r))
    print("r =", r, sorted(sorted(f) for f in u.maximal()))

print("jump at", critical_slopes(cols, {2}))

# 1-D: 2 and 3, scale the 3
print(critical_slopes([(2,), (3,)], {1}))

# slopes of a module depend on beta through which components are relevant
p = load_problem(FIX / "big_example_1.json")
print(slopes_of_module(p, {4}).to_json())
print(slopes_of_module(p.with_beta((1, 1)), {4}).to_json())
