"""Named example categories, spaces and presheaves used by tests, demos and
the ``suite`` command."""

from __future__ import annotations

import random
from typing import Callable, Dict, List, Tuple

from .linalg import QQ, Field, Matrix
from .lincat import (
    FinLinCat,
    change_basis,
    dual_numbers,
    exterior_algebra_graded,
    free_module_category,
    from_algebra,
    ground_algebra,
    group_algebra_cyclic,
    incidence_category,
    koszul_dg_algebra,
    matrix_algebra_upper,
    plain_space,
    product_algebra,
    truncated_polynomial,
)
from .poset import Poset, set_label
from .sites import FiniteSpace, RingPresheaf, basis_category, constant_sheaf


def kronecker(field: Field = QQ) -> FinLinCat:
    """Two objects with a two-dimensional hom between them."""
    one = field.one
    homs = {("0", "0"): plain_space(["id0"]), ("1", "1"): plain_space(["id1"]), ("0", "1"): plain_space(["x", "y"])}
    comp = {
        ("0", "0", "0"): {(0, 0): {0: one}},
        ("1", "1", "1"): {(0, 0): {0: one}},
        ("0", "1", "1"): {(0, j): {j: one} for j in range(2)},
        ("0", "0", "1"): {(j, 0): {j: one} for j in range(2)},
    }
    return FinLinCat(field, ["0", "1"], homs, comp, {"0": {0: one}, "1": {0: one}},
                     relation=[("0", "0"), ("1", "1"), ("0", "1")], name="kronecker")


def chain_category(n: int, field: Field = QQ) -> FinLinCat:
    c = incidence_category(Poset.chain([str(i) for i in range(n)]), field=field)
    c.name = f"A{n}"
    return c


def pseudocircle() -> FiniteSpace:
    """Points a, b open; c, d closed with U_c = {a,b,c}, U_d = {a,b,d}."""
    return FiniteSpace("abcd", specialization=[("a", "c"), ("b", "c"), ("a", "d"), ("b", "d")], name="pseudocircle")


def sierpinski() -> FiniteSpace:
    return FiniteSpace("ab", specialization=[("a", "b")], name="sierpinski")


def discrete(n: int = 2) -> FiniteSpace:
    return FiniteSpace([f"p{i}" for i in range(n)], specialization=[], name=f"discrete{n}")


def two_sierpinski() -> FiniteSpace:
    """Disjoint union of two Sierpiński spaces."""
    return FiniteSpace("pqrs", specialization=[("p", "q"), ("r", "s")], name="sierpinski+sierpinski")


SPACES: Dict[str, Callable[[], FiniteSpace]] = {
    "pseudocircle": pseudocircle,
    "sierpinski": sierpinski,
    "discrete2": discrete,
    "two-sierpinski": two_sierpinski,
}


def minimal_basis_category(x: FiniteSpace, field: Field = QQ) -> FinLinCat:
    c = basis_category(x, set(x.minimal_basis().values()), constant_sheaf(x, field))
    c.name = f"U({x.name})"
    return c


def nonconstant_two_chain(field: Field = QQ) -> RingPresheaf:
    """U < V with O(V) = k[ε], O(U) = k and the augmentation ε ↦ 0."""
    p = Poset.chain(["U", "V"])
    return RingPresheaf(p, {"U": ground_algebra(field), "V": dual_numbers(field)},
                        {("U", "V"): Matrix.from_rows(field, [[1, 0]])}, name="k<-k[e]")


def presheaf_pairs(field: Field = QQ) -> Dict[str, RingPresheaf]:
    """(poset, ring presheaf) pairs for GS comparisons."""
    x = pseudocircle()
    sheaf = constant_sheaf(x, field)
    basis_labels = sorted({set_label(u) for u in x.minimal_basis().values()})
    return {
        "point:k[e]": RingPresheaf(Poset(["*"]), {"*": dual_numbers(field)}, name="k[e]"),
        "two-chain:k": RingPresheaf.constant(Poset.chain(["U", "V"]), field=field),
        "two-chain:k<-k[e]": nonconstant_two_chain(field),
        "pseudocircle:k": sheaf.subpresheaf(basis_labels),
        "vee:k[e]": RingPresheaf.constant(Poset(["l", "r", "t"], [("l", "t"), ("r", "t")]), dual_numbers(field)),
    }


def categories(field: Field = QQ) -> Dict[str, FinLinCat]:
    """Ordinary corpus categories, keyed by a short name."""
    out = {
        "k": from_algebra(ground_algebra(field)),
        "k[e]": from_algebra(dual_numbers(field)),
        "k[x]/x^3": from_algebra(truncated_polynomial(3, field)),
        "T2": from_algebra(matrix_algebra_upper(2, field)),
        "kxk": from_algebra(product_algebra(2, field)),
        "kC2": from_algebra(group_algebra_cyclic(2, field)),
        "A2": chain_category(2, field),
        "A3": chain_category(3, field),
        "kronecker": kronecker(field),
        "U(pseudocircle)": minimal_basis_category(pseudocircle(), field),
        "U(sierpinski)": minimal_basis_category(sierpinski(), field),
        "two-chain:k<-k[e]": incidence_category(nonconstant_two_chain(field).poset, nonconstant_two_chain(field)),
        "free(k[e])": free_module_category(dual_numbers(field), (1, 2)),
    }
    for name, c in out.items():
        c.name = name
    return out


def dg_categories(field: Field = QQ) -> Dict[str, FinLinCat]:
    out = {
        "koszul": from_algebra(koszul_dg_algebra(field)),
        "exterior(-1)": from_algebra(exterior_algebra_graded(field, -1)),
    }
    for name, c in out.items():
        c.name = name
    return out


# Exact HH dimensions in degrees 0..3 with their source of truth.
KNOWN_HH: Dict[str, Tuple[Tuple[int, ...], str]] = {
    "k": ((1, 0, 0, 0), "trivial"),
    "k[e]": ((2, 1, 1, 1), "periodic resolution"),
    "k[x]/x^3": ((3, 2, 2, 2), "periodic resolution"),
    "T2": ((1, 0, 0, 0), "hereditary, directed quiver of type A2"),
    "kxk": ((2, 0, 0, 0), "separable"),
    "A2": ((1, 0, 0, 0), "contractible order complex"),
    "A3": ((1, 0, 0, 0), "contractible order complex"),
    "kronecker": ((1, 3, 0, 0), "hereditary path algebra, parallel-path count"),
    "U(pseudocircle)": ((1, 1, 0, 0), "order complex is a 4-cycle"),
    "U(sierpinski)": ((1, 0, 0, 0), "contractible order complex"),
}


def small_bases(field: Field = QQ) -> List[FinLinCat]:
    """Corpus categories with total dimension at most 6."""
    return [c for c in categories(field).values() if c.total_dim() <= 6]


def random_poset(rng: random.Random, size: int) -> Poset:
    els = [f"v{i}" for i in range(size)]
    rel = [(els[i], els[j]) for i in range(size) for j in range(i + 1, size) if rng.random() < 0.5]
    return Poset(els, rel)


def random_invertible(rng: random.Random, field: Field, n: int, bound: int = 2) -> Matrix:
    while True:
        m = Matrix.from_rows(field, [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)])
        if m.rank() == n:
            return m


def random_category(rng: random.Random, field: Field = QQ, max_total: int = 6) -> FinLinCat:
    """A random basis change of a small corpus category or of the incidence
    category of a random poset, total hom dimension at most ``max_total``."""
    while True:
        if rng.random() < 0.5:
            base = rng.choice(small_bases(field))
        else:
            base = incidence_category(random_poset(rng, rng.randint(1, 3)), field=field)
        if base.total_dim() <= max_total:
            break
    P = {k: random_invertible(rng, field, sp.dim) for k, sp in base.homs.items() if sp.dim > 1}
    c = change_basis(base, P)
    c.name = f"random({base.name or 'incidence'})"
    return c
