"""A presheaf of algebras on a poset: the bicomplex built from the
presheaf and the incidence category give the same cohomology."""
from hochcat.corpus import presheaf_pairs
from hochcat.hochschild import hh_dims
from hochcat.lincat import incidence_category
from hochcat.sites import gs_cohomology

for name, o in presheaf_pairs().items():
    gs = gs_cohomology(o, 2)
    inc = hh_dims(incidence_category(o.poset, o), 2)
    print(f"{name:24s} bicomplex {gs}  incidence {inc}  {'equal' if gs == inc else 'DIFFERENT'}")
