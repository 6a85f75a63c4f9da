"""Hochschild cohomology of k[e]/(e^2), and what changes in characteristic 2."""
from hochcat.hochschild import HochschildSpec, hochschild_cohomology
from hochcat.linalg import GF, QQ
from hochcat.lincat import dual_numbers, from_algebra

for field in (QQ, GF(2), GF(3)):
    c = from_algebra(dual_numbers(field))
    r = hochschild_cohomology(HochschildSpec(c, n_max=4))
    print(f"over {field.name}:")
    for row in r.table():
        flag = "  (upper bound only)" if row["edge_caveat"] else ""
        print(f"  HH^{row['degree']} = {row['dim']}{flag}")

# Degree 4 is the edge of the computed window, so only degrees 0..3 are exact.
# Over Q and F_3 the table is 2,1,1,1. Over F_2 each degree has dimension 2.
