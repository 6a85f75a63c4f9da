"""First-order deformations of k[e]/(e^2): e*e = t is unobstructed, and
scaling the cocycle gives an inequivalent deformation."""
from hochcat.deform import (
    FirstOrderDeformation,
    deformation_equivalence,
    deformation_space,
    first_order_check,
    obstruction_square,
)
from hochcat.hochschild import Cochain, HochschildComplex, HochschildSpec
from hochcat.lincat import dual_numbers, from_algebra

c = from_algebra(dual_numbers())
hc = HochschildComplex(HochschildSpec(c, n_max=4))


def square_to(k):
    # phi(e, e) = k * 1
    return FirstOrderDeformation(c, Cochain(2, {(("*", "*", "*"), (1, 1)): {0: c.field(k)}}))


d1, d2 = square_to(1), square_to(2)
print("first order:", first_order_check(d1, hc))
ob = obstruction_square(d1, hc)
print("obstruction:", ob.status)
v = deformation_equivalence(d1, d2, hc)
print("e*e = t versus e*e = 2t equivalent:", v.equivalent)

sp = deformation_space(c, hc)
print(f"cocycles {sp.cocycle_dim}, coboundaries {sp.coboundary_dim}, classes {sp.classes}")
