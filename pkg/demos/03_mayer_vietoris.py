"""Mayer-Vietoris for the pseudocircle covered by two contractible opens."""
from hochcat.corpus import pseudocircle
from hochcat.sites import mayer_vietoris

x = pseudocircle()
u, v = x.minimal_open("c"), x.minimal_open("d")
r = mayer_vietoris(x, u, v)
for name in ("X", "U", "V", "U∩V"):
    print(f"{name:4s}", [r.hc[name][n] for n in r.degrees])
print("connecting ranks:", r.connecting_ranks)
print("exact at every joint:", r.exact)
print("agrees with the direct computation:", r.matches_direct)

# U∩V = {a, b} is two points, so HC^0 is 2. The connecting map from
# degree 0 has rank 1, and that rank is the loop in HC^1(X).
