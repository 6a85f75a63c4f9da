import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hochcat.corpus import categories, dg_categories
from hochcat.deform import (
    DeformationError,
    FirstOrderDeformation,
    associator_coefficients,
    deformation_equivalence,
    deformation_space,
    enumerate_deformations,
    first_order_check,
    gauge_variation,
    obstruction_square,
    random_cochain,
)
from hochcat.hochschild import Cochain, HochschildComplex, HochschildSpec, circle_square, hh_dims
from hochcat.linalg import QQ


@pytest.fixture(scope="module")
def pool():
    cats = categories()
    names = ("k[e]", "k[x]/x^3", "T2", "A2", "kronecker", "U(pseudocircle)")
    return {n: (cats[n], HochschildComplex(HochschildSpec(cats[n], n_max=4))) for n in names}


def _eps_squared(c, coeff=1):
    return Cochain(2, {(("*", "*", "*"), (1, 1)): {0: c.field(coeff)}})


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 100_000), name=st.sampled_from(["k[e]", "k[x]/x^3", "T2", "A2", "kronecker"]))
def test_first_order_verdicts_agree(pool, seed, name):
    c, hc = pool[name]
    rng = random.Random(seed)
    phi = random_cochain(c, 2, rng)
    v = first_order_check(FirstOrderDeformation(c, phi), hc)
    assert v.associative == v.cocycle
    assert (v.witness is None) == v.associative


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 100_000), name=st.sampled_from(["k[e]", "k[x]/x^3", "T2", "kronecker"]))
def test_t2_defect_is_the_circle_square(pool, seed, name):
    c, _ = pool[name]
    phi = random_cochain(c, 2, random.Random(seed))
    assert associator_coefficients(c, [phi], 2)[2] == circle_square(c, phi)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 100_000), name=st.sampled_from(["k[e]", "k[x]/x^3", "A2"]))
def test_coboundaries_are_gauge_trivial(pool, seed, name):
    c, hc = pool[name]
    psi = random_cochain(c, 1, random.Random(seed))
    phi = gauge_variation(c, psi)
    assert first_order_check(FirstOrderDeformation(c, phi), hc).associative
    zero = FirstOrderDeformation(c, Cochain(2, {}))
    v = deformation_equivalence(FirstOrderDeformation(c, phi), zero, hc)
    assert v.equivalent and v.gauge_verified


def test_class_count_equals_betti2(pool):
    for name, (c, hc) in pool.items():
        sp = deformation_space(c, hc)
        assert sp.classes == sp.betti2 == hh_dims(c, 2)[2], name
    sp = deformation_space(*pool["k[e]"])
    assert (sp.cocycle_dim, sp.coboundary_dim) == (4, 3)


def test_x_squared_equals_t(pool):
    c, hc = pool["k[e]"]
    ob = obstruction_square(FirstOrderDeformation(c, _eps_squared(c)), hc)
    assert ob.status == "unobstructed" and ob.closed
    assert ob.extension_verified and ob.defect_matches_square
    # k[x]/(x² - t) is associative to every order: nothing to correct
    coeffs = associator_coefficients(c, [_eps_squared(c)], 4)
    assert all(v.is_zero() for v in coeffs.values())


def test_scaling_gives_inequivalent_deformation(pool):
    c, hc = pool["k[e]"]
    v = deformation_equivalence(FirstOrderDeformation(c, _eps_squared(c)),
                                FirstOrderDeformation(c, _eps_squared(c, 2)), hc)
    assert not v.equivalent and v.psi is None


def test_non_cocycle_is_not_a_deformation(pool):
    c, hc = pool["k[x]/x^3"]
    # φ(x, x) = 1 alone breaks associativity at first order
    phi = Cochain(2, {(("*", "*", "*"), (1, 1)): {0: QQ.one}})
    v = first_order_check(FirstOrderDeformation(c, phi), hc)
    assert not v.associative and not v.cocycle
    assert obstruction_square(FirstOrderDeformation(c, phi), hc).status == "not a deformation"


def test_enumeration_follows_hh2(pool):
    c, hc = pool["kronecker"]
    ds = enumerate_deformations(c, hc)
    assert ds == []  # HH² = 0
    c, hc = pool["k[e]"]
    for d in enumerate_deformations(c, hc):
        assert obstruction_square(d, hc).status == "unobstructed"


def test_input_validation(pool):
    c, _ = pool["A2"]
    with pytest.raises(DeformationError):
        FirstOrderDeformation(c, Cochain(1, {}))
    with pytest.raises(DeformationError):
        FirstOrderDeformation(c, Cochain(2, {(("1", "0", "0"), (0, 0)): {0: QQ.one}}))
    with pytest.raises(DeformationError):
        FirstOrderDeformation(dg_categories()["koszul"], Cochain(2, {}))
    ke, _ = pool["k[e]"]
    with pytest.raises(DeformationError):
        obstruction_square(FirstOrderDeformation(ke, _eps_squared(ke)), HochschildComplex(HochschildSpec(ke, n_max=3)))
