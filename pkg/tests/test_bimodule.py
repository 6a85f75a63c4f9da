import random

import pytest

from hochcat.bimodule import (
    BimoduleError,
    ResourceLimitError,
    bar_resolution,
    diagonal_bimodule,
    dual_bimodule,
    ext_window,
    ext_window_reduced,
    module_hom,
    representable,
    restricted_diagonal,
    simple_module,
    truncate_by_relation,
    validate_bimodule,
)
from hochcat.corpus import categories, kronecker, random_invertible
from hochcat.hochschild import lambda_omega_check
from hochcat.linalg import GF, QQ
from hochcat.lincat import (
    ArrowCategorySpec,
    arrow_category,
    change_basis,
    from_algebra,
    truncated_polynomial,
    validate_category,
)


@pytest.fixture(scope="module")
def cats():
    return categories()


def test_diagonal_bimodules_are_valid(cats):
    for name, c in cats.items():
        if c.total_dim() > 8:
            continue
        m = diagonal_bimodule(c)
        assert validate_bimodule(m) == [], name
        assert m.is_diagonal_of(c)


def test_dual_bimodule_is_valid(cats):
    for name in ("k[e]", "T2", "A2", "kronecker"):
        assert validate_bimodule(dual_bimodule(cats[name])) == [], name


def test_planted_bimodule_defect(cats):
    c = cats["k[e]"]
    m = diagonal_bimodule(c)
    m.left_act["*", "*", "*"] = dict(m.left_act["*", "*", "*"])
    m.left_act["*", "*", "*"][1, 1] = {0: QQ.one}  # ε·ε := 1
    assert validate_bimodule(m)


@pytest.mark.parametrize("field", [QQ, GF(2), GF(3)], ids=lambda f: f.name)
def test_ext_of_simple_over_truncated_polynomials(field):
    # minimal resolutions of k over k[x]/(x^n) are periodic of rank one
    for n in (2, 3):
        c = from_algebra(truncated_polynomial(n, field))
        s = simple_module(c, "*")
        assert ext_window(s, s, 3) == {0: 1, 1: 1, 2: 1, 3: 1}
        assert ext_window_reduced(s, s, 3) == {0: 1, 1: 1, 2: 1, 3: 1}


def test_ext_between_simples_counts_arrows():
    c = kronecker()
    simples = {o: simple_module(c, o) for o in c.objects}
    ext1 = {(a, b): ext_window(simples[a], simples[b], 2)[1] for a in c.objects for b in c.objects}
    assert sum(ext1.values()) == 2
    assert all(ext_window(simples[a], simples[b], 2)[2] == 0 for a in c.objects for b in c.objects)


def test_representables_are_projective(cats):
    for name in ("A2", "A3", "kronecker", "k[e]"):
        c = cats[name]
        for o in c.objects:
            h = representable(c, o)
            for t in c.objects:
                e = ext_window(h, representable(c, t), 2)
                assert e[1] == e[2] == 0, (name, o, t)
                assert e[0] == c.hom(o, t).dim, (name, o, t)


def test_bar_resolution_is_exact(cats):
    for name in ("k[e]", "A2", "kronecker"):
        c = cats[name]
        for o in c.objects:
            assert bar_resolution(simple_module(c, o), 3).exact_interior(), (name, o)


def test_module_hom_degree_zero(cats):
    c = cats["k[e]"]
    s = simple_module(c, "*")
    h = representable(c, "*")
    assert module_hom(h, s).dims().get(0) == 1
    assert module_hom(s, h).dims().get(0) == 1  # the socle


def test_simple_module_needs_basis_identity(cats):
    c = cats["k[e]"]
    rng = random.Random(0)
    while True:
        m = random_invertible(rng, QQ, 2)
        d = change_basis(c, {("*", "*"): m})
        if len(d.identities["*"]) > 1:
            break
    with pytest.raises(BimoduleError):
        simple_module(d, "*")


def test_resource_cap_is_enforced(cats):
    c = cats["k[e]"]
    s = simple_module(c, "*")
    with pytest.raises(ResourceLimitError):
        bar_resolution(s, 6, max_dim=10)


def test_truncation_keeps_only_related_pairs(cats):
    c = cats["A2"]
    d = dual_bimodule(c)
    t = truncate_by_relation(d, c.relation)
    assert validate_bimodule(t) == []
    assert t.total_dim() == d.total_dim() - 1
    with pytest.raises(BimoduleError):
        truncate_by_relation(d, [("0", "0"), ("1", "1")])


def test_lambda_omega_on_diagonal(cats):
    for name in ("A2", "k[e]", "kronecker"):
        c = cats[name]
        r = lambda_omega_check(ArrowCategorySpec(c, c, diagonal_bimodule(c)))
        assert r["lambda_ok"] and r["omega_ok"], name


def test_lambda_omega_detects_restriction(cats):
    b = cats["A3"]
    a = arrow_category(ArrowCategorySpec(b, b, diagonal_bimodule(b)))
    assert validate_category(a) == []
    x = restricted_diagonal(b, ["0", "1"])
    r = lambda_omega_check(ArrowCategorySpec(x.left, b, x))
    assert not r["omega_ok"]
    assert all("2" in pair for kind, pair in r["failures"] if kind == "omega")
