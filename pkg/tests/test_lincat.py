import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hochcat.corpus import categories, dg_categories, kronecker, random_category, random_poset
from hochcat.linalg import GF, QQ
from hochcat.lincat import (
    Algebra,
    CategoryError,
    FiniteCategory,
    FinLinCat,
    category_algebra,
    check_censoring,
    cohomology_category,
    dual_numbers,
    from_algebra,
    full_subcategory,
    incidence_category,
    linearize,
    opposite,
    plain_space,
    require_valid,
    same_structure,
    truncated_polynomial,
    validate_category,
)
from hochcat.poset import Poset, PosetError, set_label


# ---------------------------------------------------------------- posets


def test_poset_closure_and_covers():
    p = Poset("abc", [("a", "b"), ("b", "c")])
    assert p.leq("a", "c")
    assert p.covers() == [("a", "b"), ("b", "c")]
    assert p.strict_chains(2) == [("a", "b", "c")]
    assert len(p.weak_chains(1)) == 6
    assert p.minimal() == ["a"] and p.maximal() == ["c"]


def test_poset_rejects_cycles_and_unknowns():
    with pytest.raises(PosetError):
        Poset("ab", [("a", "b"), ("b", "a")])
    with pytest.raises(PosetError):
        Poset("ab", [("a", "z")])


def test_poset_components_and_down_sets():
    p = Poset("abcd", [("a", "b"), ("c", "d")])
    assert sorted(map(sorted, p.components())) == [["a", "b"], ["c", "d"]]
    assert p.is_down_set("a") and not p.is_down_set("b")
    assert set_label("ba") == "{a,b}"


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), size=st.integers(1, 5))
def test_random_poset_is_transitive(seed, size):
    p = random_poset(random.Random(seed), size)
    for x in p:
        for y in p:
            for z in p:
                if p.leq(x, y) and p.leq(y, z):
                    assert p.leq(x, z)


# ---------------------------------------------------------------- categories


@pytest.mark.parametrize("field", [QQ, GF(2), GF(3)], ids=lambda f: f.name)
def test_corpus_categories_are_valid(field):
    for name, c in {**categories(field), **dg_categories(field)}.items():
        assert validate_category(c) == [], name


def test_planted_associativity_defect_is_named():
    c = kronecker()
    c.comp["0", "1", "1"][0, 1] = {0: QQ.one}  # id1 ∘ y := x
    bad = validate_category(c)
    axioms = {v.axiom for v in bad}
    assert "left unit" in axioms or "associativity" in axioms
    assert any("y" in v.witness for v in bad)
    with pytest.raises(CategoryError):
        require_valid(c)


def test_non_associative_algebra_refused():
    table = {("1", "1"): {"1": 1}, ("1", "e"): {"e": 1}, ("e", "1"): {"e": 1}, ("e", "e"): {"1": 1, "e": 1}}
    a = Algebra.from_table(QQ, ["1", "e"], table, {"1": 1})
    from_algebra(a)  # two-dimensional, unital and commutative, so associative
    # (uu)v = vv = 0 but u(uv) = u
    skew = Algebra.from_table(QQ, ["1", "u", "v"],
                              {("1", "1"): {"1": 1}, ("1", "u"): {"u": 1}, ("u", "1"): {"u": 1},
                               ("1", "v"): {"v": 1}, ("v", "1"): {"v": 1}, ("u", "u"): {"v": 1},
                               ("u", "v"): {"1": 1}},
                              {"1": 1})
    with pytest.raises(CategoryError):
        from_algebra(skew)


def test_composition_outside_hom_is_reported():
    homs = {("A", "A"): plain_space(["1"])}
    c = FinLinCat(QQ, ["A"], homs, {("A", "A", "A"): {(0, 0): {0: QQ.one}}}, {"A": {}})
    assert any(v.axiom.startswith("identity") or "unit" in v.axiom for v in validate_category(c))


def test_censoring_checks():
    c = kronecker()
    assert check_censoring(c, c.relation) == []
    bad = check_censoring(c, [("0", "0"), ("1", "1")])
    assert any("outside" in v.detail for v in bad)
    a3 = categories()["A3"]
    rel = [(x, x) for x in "012"] + [("0", "1"), ("1", "2")]
    assert any("transitive" in v.detail for v in check_censoring(a3, rel))


def test_incidence_category_of_chain():
    p = Poset.chain(["0", "1", "2"])
    c = incidence_category(p)
    assert c.total_dim() == 6
    assert c.hom("2", "0").dim == 0
    assert validate_category(c) == []


def test_linearized_poset_matches_incidence():
    p = Poset("abc", [("a", "c"), ("b", "c")])
    lin = linearize(FiniteCategory.from_poset(p))
    inc = incidence_category(p)
    assert {k: v.dim for k, v in lin.homs.items()} == {k: v.dim for k, v in inc.homs.items()}


def test_opposite_is_an_involution():
    for name, c in {**categories(), **dg_categories()}.items():
        assert same_structure(opposite(opposite(c)), c), name
        assert validate_category(opposite(c)) == [], name


def test_koszul_sign_in_opposite():
    # Λ(u, v) with |u| = |v| = -1 is graded commutative, so it equals its opposite
    one = QQ.one
    table = {("1", x): {x: one} for x in ("1", "u", "v", "w")}
    table.update({(x, "1"): {x: one} for x in ("u", "v", "w")})
    table.update({("u", "v"): {"w": one}, ("v", "u"): {"w": -one}})
    c = from_algebra(Algebra.from_table(QQ, ["1", "u", "v", "w"], table, {"1": one}, degrees=(0, -1, -1, -2)))
    assert same_structure(opposite(c), c)
    flipped = dict(table)
    flipped[("v", "u")] = {"w": one}
    naive = from_algebra(Algebra.from_table(QQ, ["1", "u", "v", "w"], flipped, {"1": one}, degrees=(0, -1, -1, -2)))
    assert not same_structure(opposite(naive), naive)


def test_category_algebra_dimension_and_unit():
    c = kronecker()
    a = category_algebra(c)
    assert a.dim == 4
    c2 = from_algebra(a)
    assert validate_category(c2) == []


def test_full_subcategory():
    c = categories()["A3"]
    s = full_subcategory(c, ["0", "2"])
    assert s.objects == ("0", "2") and s.hom("0", "2").dim == 1
    with pytest.raises(CategoryError):
        full_subcategory(c, ["9"])


def test_cohomology_category_of_koszul_algebra():
    h = cohomology_category(dg_categories()["koszul"])
    sp = h.hom("*", "*")
    assert sorted(sp.degrees) == [-1, 0]
    assert validate_category(h) == []


def test_truncated_polynomial_structure():
    a = truncated_polynomial(4)
    assert a.mul({1: QQ.one}, {2: QQ.one}) == {3: QQ.one}
    assert a.mul({2: QQ.one}, {2: QQ.one}) == {}
    assert dual_numbers().is_commutative()


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_random_basis_changes_stay_valid(seed):
    rng = random.Random(seed)
    c = random_category(rng, QQ if seed % 2 else GF(5))
    assert c.total_dim() <= 6
    assert validate_category(c) == []
