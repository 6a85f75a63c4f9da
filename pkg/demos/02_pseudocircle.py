"""The four-point pseudocircle behaves like a circle."""
from hochcat.corpus import pseudocircle
from hochcat.hochschild import hh_dims
from hochcat.sites import basis_category, order_complex_cohomology, space_analysis

x = pseudocircle()
a = space_analysis(x)
print("points:", x.points)
print("opens:", len(x.opens))
print("minimal basis:", a.basis_labels())

c = basis_category(x, set(x.minimal_basis().values()))
print("HH of the basis category:", hh_dims(c, 2))
print("cohomology of the order complex:", order_complex_cohomology(x.poset, 2))
