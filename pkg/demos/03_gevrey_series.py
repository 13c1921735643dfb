# Rank, irregularity and truncated Gevrey solutions along y = 0 for
# A = (2 3 2 2).
#
#   python demos/03_gevrey_series.py

from fractions import Fraction
from pathlib import Path

from bindmod import load_problem
from bindmod.gevrey import gevrey_basis, verify_solution
from bindmod.irregularity import dim_irr_stalk, holonomic_rank_generic, multiplicity

FIX = Path(__file__).resolve().parent.parent / "fixtures"

p = load_problem(FIX / "gevrey_example.json")
c = p.components[0]
print("mu =", multiplicity(c, p.A).mu, " rank =", holonomic_rank_generic(p))

for s in [Fraction(6, 5), Fraction(3, 2), 4]:
    print("dim Irr_y at s =", s, "->", dim_irr_stalk(p, 1, s).total)

B = gevrey_basis(c, p.A, p.beta, 1, 6)
print(len(B.unknowns), "unknowns,", B.equations, "equations, dimension", B.dimension)
js = B.to_json(sorted(c.Jbar))
for rel in js["relations"]:
    print(" ", rel["unknown"], "=", rel["equals"] or 0)

# check the first solution and print a few of its terms
f = B.solution_series()[0]
print(verify_solution(f, c, p.A, B.beta, B).to_json())
for E in sorted(f, key=lambda e: (e[1], e[2], e[3]))[:5]:
    print(" ", [str(x) for x in E], f[E])
