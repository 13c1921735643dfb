# Regularity of a binomial D-module depends on beta.  This walks through
# two small problems and then splits parameter space of a bigger one.
#
#   python demos/01_regularity_and_strata.py

from pathlib import Path

from bindmod import load_problem
from bindmod.stratify import (classify, is_regular, nonregular_arrangement, relevant_components,
                              stratify_parameters)

FIX = Path(__file__).resolve().parent.parent / "fixtures"

p = load_problem(FIX / "counterexample1.json")
for c in p.components:
    cl = classify(c, p.A)
    print(c.label, "J =", c.J1, cl.kind, "krull", cl.krull_dim, "rank A_J", cl.rank_AJ)

# the non-regular set is a single line through the origin
print(nonregular_arrangement(p).to_json())

# (1,0) is off the line, (1,1) is on it and picks up I_2
for beta in [(1, 0), (1, 1)]:
    q = p.with_beta(beta)
    print(beta, is_regular(q).to_json(), [c.label for c in relevant_components(q)])

# a module whose only component has a homogeneous prime stays regular
# whatever beta is
p2 = load_problem(FIX / "counterexample2.json")
print([is_regular(p2.with_beta(b)).verdict for b in [(0,), (1,), ("7/3",), "generic"]])

# six strata, each with its own set of relevant components
p3 = load_problem(FIX / "big_example_2.json")
for st in stratify_parameters(p3):
    row = st.to_json()
    print(row["dim"], row["flat"], row["relevant"])
