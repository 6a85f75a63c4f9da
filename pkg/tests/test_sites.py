import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import order_complex_betti
from hochcat.acceptance import random_module_presheaf
from hochcat.corpus import presheaf_pairs, pseudocircle, random_poset, sierpinski, two_sierpinski
from hochcat.hochschild import hh_dims
from hochcat.linalg import QQ, Matrix, betti_numbers
from hochcat.lincat import dual_numbers, ground_algebra, incidence_category
from hochcat.poset import Poset
from hochcat.sites import (
    Cover,
    FiniteSpace,
    ModulePresheaf,
    PresheafError,
    RingPresheaf,
    SpaceError,
    basis_category,
    cech_descent,
    constant_sheaf,
    cover_closure,
    gs_bicomplex,
    gs_cohomology,
    hom_dim,
    inverse_limit,
    mayer_vietoris,
    order_complex_cohomology,
    presheaf_restrict,
    presheaf_right_extend,
    pullback_family,
    space_analysis,
    standard_complex,
    unit_map_is_iso,
)


def _dims(d, top):
    return tuple(d[n] for n in range(top + 1))


# ---------------------------------------------------------------- spaces


def test_opens_and_specialization_agree():
    x = pseudocircle()
    y = FiniteSpace("abcd", opens=x.opens)
    assert y.poset == x.poset
    assert x.minimal_open("c") == frozenset("abc")
    assert len(x.opens) == 7


def test_bad_topologies_are_refused():
    with pytest.raises(SpaceError):
        FiniteSpace("ab", opens=[[], ["a"], ["b"], ["a", "b"], ["c"]])
    with pytest.raises(SpaceError):
        FiniteSpace("abc", opens=[[], ["a", "b"], ["b", "c"], ["a", "b", "c"]])
    with pytest.raises(SpaceError):
        FiniteSpace("ab")


def test_minimal_basis_analysis():
    a = space_analysis(pseudocircle())
    assert a.basis_verified
    assert a.basis_labels() == ["{a,b,c}", "{a,b,d}", "{a}", "{b}"]
    assert len(a.components) == 1


def test_acyclic_opens_of_pseudocircle():
    x = pseudocircle()
    acyclic = set(x.acyclic_opens())
    assert frozenset(x.points) not in acyclic
    assert acyclic == {u for u in x.opens if u and u != frozenset(x.points)}


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 100_000), size=st.integers(1, 5))
def test_order_complex_matches_brute_force(seed, size):
    p = random_poset(random.Random(seed), size)
    assert _dims(order_complex_cohomology(p, 2), 2) == order_complex_betti(p.elements, p.leq, 2)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 100_000), size=st.integers(1, 4))
def test_standard_complex_of_constant_presheaf(seed, size):
    p = random_poset(random.Random(seed), size)
    cx = standard_complex(p, ModulePresheaf.constant(p), 3).complex
    assert cx.check_d_squared() == []
    assert tuple(betti_numbers(cx)[n][0] for n in range(3)) == order_complex_betti(p.elements, p.leq, 2)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 100_000), size=st.integers(1, 4))
def test_h0_of_standard_complex_is_the_limit(seed, size):
    rng = random.Random(seed)
    p = random_poset(rng, size)
    m = random_module_presheaf(rng, p)
    cx = standard_complex(p, m, 2).complex
    assert betti_numbers(cx)[0][0] == len(inverse_limit(p, m))


def test_constant_sheaf_on_disconnected_open():
    x = pseudocircle()
    o = constant_sheaf(x)
    assert o.algebras["{a,b}"].dim == 2
    assert o.algebras["{a,b,c}"].dim == 1
    assert o.violations() == []


def test_ring_presheaf_rejects_non_multiplicative_map():
    p = Poset.chain(["U", "V"])
    bad = RingPresheaf(p, {"U": ground_algebra(), "V": dual_numbers()},
                       {("U", "V"): Matrix.from_rows(QQ, [[1, 1]])})
    assert bad.violations()


def test_module_presheaf_functoriality():
    p = Poset.chain(["a", "b", "c"])
    m = ModulePresheaf(p, {"a": 1, "b": 1, "c": 1},
                       {("a", "b"): Matrix.from_rows(QQ, [[1]]), ("b", "c"): Matrix.from_rows(QQ, [[2]])})
    assert m.res("a", "c").to_rows() == [[2]]
    assert m.violations() == []


# ---------------------------------------------------------------- GS


def test_gs_total_complex_is_a_complex():
    for name, o in presheaf_pairs().items():
        assert gs_bicomplex(o, 3).complex.check_d_squared() == [], name


def test_gs_matches_incidence_hh():
    for name, o in presheaf_pairs().items():
        assert gs_cohomology(o, 2) == {n: d for n, d in hh_dims(incidence_category(o.poset, o), 2).items()}, name


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_gs_on_random_poset_with_dual_numbers(seed):
    p = random_poset(random.Random(seed), 3)
    o = RingPresheaf.constant(p, dual_numbers())
    assert gs_cohomology(o, 2) == hh_dims(incidence_category(p, o), 2)


# ---------------------------------------------------------------- bases and Mayer-Vietoris


def test_both_bases_give_the_circle():
    x = pseudocircle()
    minimal = basis_category(x, set(x.minimal_basis().values()))
    acyclic = basis_category(x, [u for u in x.acyclic_opens() if u != frozenset(x.points)])
    assert _dims(hh_dims(minimal, 2), 2) == _dims(hh_dims(acyclic, 2), 2) == (1, 1, 0)


def test_basis_must_be_open():
    x = pseudocircle()
    with pytest.raises(SpaceError):
        basis_category(x, ["c"])


def test_cover_closure_of_pseudocircle():
    x = pseudocircle()
    cl = cover_closure(Cover(x, [x.minimal_open("c"), x.minimal_open("d")]))
    assert sorted(cl.sets) == ["{a,b,c}", "{a,b,d}", "{a,b}"]
    assert cl.category.hom("{a,b}", "{a,b}").dim == 2


def test_cover_must_cover():
    x = pseudocircle()
    with pytest.raises(SpaceError):
        Cover(x, [x.minimal_open("c")])


def test_mayer_vietoris_pseudocircle():
    x = pseudocircle()
    r = mayer_vietoris(x, x.minimal_open("c"), x.minimal_open("d"))
    assert r.exact and r.matches_direct
    assert [r.hc["X"][n] for n in r.degrees] == [1, 1, 0]
    assert r.connecting_ranks[0] == 1
    assert r.as_dict()["basis_acyclicity"] == "verified"


def test_mayer_vietoris_split_and_degenerate():
    y = two_sierpinski()
    r = mayer_vietoris(y, "pq", "rs")
    assert r.exact and all(v == 0 for v in r.connecting_ranks.values())
    assert r.hc["U∩V"] == {n: 0 for n in r.degrees}
    s = sierpinski()
    d = mayer_vietoris(s, "ab", "ab")
    assert d.exact and d.hc["U"] == d.hc["X"]


def test_mayer_vietoris_refuses_non_acyclic_basis():
    x = pseudocircle()
    with pytest.raises(SpaceError):
        mayer_vietoris(x, x.minimal_open("c"), x.minimal_open("d"), basis=[frozenset(x.points)] + list(x.minimal_basis().values()))


# ---------------------------------------------------------------- descent


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_descent_resolves_pulled_back_presheaves(seed):
    rng = random.Random(seed)
    x = pseudocircle()
    pieces = [x.minimal_open("c"), x.minimal_open("d")]
    m = random_module_presheaf(rng, x.poset)
    r = cech_descent(x, pieces, pullback_family(m, x, pieces))
    assert r.exact_positive and r.h0_matches_limit
    assert r.h0_dims == m.dims
    assert unit_map_is_iso(m, x, pieces, r)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_restriction_is_left_adjoint_to_right_extension(seed):
    rng = random.Random(seed)
    x = pseudocircle()
    w = x.minimal_open(rng.choice("cd"))
    m = random_module_presheaf(rng, x.poset)
    g = random_module_presheaf(rng, x.poset.subposet(w))
    assert hom_dim(presheaf_restrict(m, w), g) == hom_dim(m, presheaf_right_extend(g, x.poset))


def test_restriction_needs_an_open():
    x = pseudocircle()
    with pytest.raises(PresheafError):
        presheaf_restrict(ModulePresheaf.constant(x.poset), "c")
