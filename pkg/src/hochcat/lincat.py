"""Finite linear and non-positively graded DG categories.

A :class:`FinLinCat` stores, for every ordered pair of objects ``(A, B)``,
a graded hom space ``hom(A, B)`` of morphisms ``A -> B`` and sparse
structure constants ``comp[(A, B, C)][(g, f)] = g∘f`` for basis elements
``f`` of ``hom(A, B)`` and ``g`` of ``hom(B, C)``.  Degrees are
cohomological and must be <= 0; differentials raise degree by one.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .linalg import QQ, Cohomology, ComplexRep, Field, Matrix, Vector, axpy, check_same_field, vscale
from .poset import Poset

Triple = Tuple[str, str, str]


class CategoryError(ValueError):
    """Malformed or axiom-violating category data."""


# ---------------------------------------------------------------- graded spaces


@dataclass(frozen=True, eq=True)
class GradedSpace:
    """Graded vector space with a basis, per-basis degrees and a differential.

    ``d[i]`` is the image of basis vector ``i``; it must live in degree
    ``degrees[i] + 1``.
    """

    labels: Tuple[str, ...] = ()
    degrees: Tuple[int, ...] = ()
    d: Mapping[int, Vector] = dc_field(default_factory=dict)

    def __post_init__(self):
        if len(self.labels) != len(self.degrees):
            raise CategoryError("labels and degrees differ in length")

    __hash__ = None

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise CategoryError(f"unknown basis label {label!r}") from None

    def of_degree(self, k: int) -> List[int]:
        return [i for i, g in enumerate(self.degrees) if g == k]

    def degree_range(self) -> Tuple[int, int]:
        if not self.degrees:
            return (0, 0)
        return (min(self.degrees), max(self.degrees))

    def apply_d(self, v: Vector, p) -> Vector:
        out: Vector = {}
        for i, x in v.items():
            img = self.d.get(i)
            if img:
                axpy(out, x, img, p)
        return out

    def has_differential(self) -> bool:
        return any(self.d.values())

    def as_complex(self, field: Field) -> Tuple[ComplexRep, Dict[int, List[int]]]:
        """The space as a complex; also returns basis indices per degree."""
        lo, hi = self.degree_range()
        idx = {k: self.of_degree(k) for k in range(lo, hi + 1)}
        pos = {i: j for k in idx for j, i in enumerate(idx[k])}
        diffs = []
        for k in range(lo, hi):
            cols = [{pos[t]: x for t, x in self.d.get(i, {}).items()} for i in idx[k]]
            diffs.append(Matrix(field, len(idx[k + 1]), len(idx[k]), cols))
        c = ComplexRep(field, lo, tuple(len(idx[k]) for k in range(lo, hi + 1)), tuple(diffs), True, True)
        return c, idx


ZERO_SPACE = GradedSpace()


def plain_space(labels: Sequence[str]) -> GradedSpace:
    """Degree-zero space with zero differential."""
    return GradedSpace(tuple(labels), (0,) * len(labels), {})


# ---------------------------------------------------------------- categories


class FinLinCat:
    """A finite linear (or non-positively graded DG) category."""

    def __init__(
        self,
        field: Field,
        objects: Iterable[str],
        homs: Mapping[Tuple[str, str], GradedSpace],
        composition: Mapping[Triple, Mapping[Tuple[int, int], Vector]],
        identities: Mapping[str, Vector],
        relation: Optional[Iterable[Tuple[str, str]]] = None,
        name: str = "",
    ):
        self.field = field
        self.objects: Tuple[str, ...] = tuple(sorted(set(objects)))
        obs = set(self.objects)
        self.homs: Dict[Tuple[str, str], GradedSpace] = {}
        for (a, b), sp in homs.items():
            if a not in obs or b not in obs:
                raise CategoryError(f"hom ({a}, {b}) mentions an unknown object")
            if sp.dim:
                self.homs[a, b] = sp
        self.comp: Dict[Triple, Dict[Tuple[int, int], Vector]] = {}
        for t, table in composition.items():
            clean = {k: dict(v) for k, v in table.items() if v}
            if clean:
                self.comp[t] = clean
        self.identities: Dict[str, Vector] = {a: dict(identities.get(a, {})) for a in self.objects}
        self.relation: Optional[FrozenSet[Tuple[str, str]]] = (
            frozenset(tuple(r) for r in relation) if relation is not None else None
        )
        self.name = name

    def __repr__(self):
        return f"FinLinCat({self.name or '?'}, objects={list(self.objects)}, dim={self.total_dim()})"

    def hom(self, a: str, b: str) -> GradedSpace:
        return self.homs.get((a, b), ZERO_SPACE)

    def total_dim(self) -> int:
        return sum(sp.dim for sp in self.homs.values())

    def is_ordinary(self) -> bool:
        return all(
            all(g == 0 for g in sp.degrees) and not sp.has_differential() for sp in self.homs.values()
        )

    def min_degree(self) -> int:
        return min((min(sp.degrees) for sp in self.homs.values() if sp.dim), default=0)

    def effective_relation(self) -> FrozenSet[Tuple[str, str]]:
        if self.relation is not None:
            return self.relation
        return frozenset(product(self.objects, self.objects))

    def compose_basis(self, a: str, b: str, c: str, gi: int, fi: int) -> Vector:
        """g∘f for basis f in hom(a, b), g in hom(b, c)."""
        return self.comp.get((a, b, c), {}).get((gi, fi), {})

    def compose(self, a: str, b: str, c: str, g: Vector, f: Vector) -> Vector:
        p = self.field.p
        table = self.comp.get((a, b, c))
        out: Vector = {}
        if not table:
            return out
        for gi, x in g.items():
            for fi, y in f.items():
                r = table.get((gi, fi))
                if r:
                    axpy(out, self.field.mul(x, y), r, p)
        return out

    def structure_signature(self):
        """Label-free data used to compare structure constants."""
        return (
            self.field,
            self.objects,
            {k: (v.degrees, {i: dict(x) for i, x in v.d.items() if x}) for k, v in self.homs.items()},
            self.comp,
            {a: v for a, v in self.identities.items() if v},
            self.relation,
        )


def same_structure(c1: FinLinCat, c2: FinLinCat, relation: bool = True) -> bool:
    s1, s2 = c1.structure_signature(), c2.structure_signature()
    if not relation:
        s1, s2 = s1[:-1], s2[:-1]
    return s1 == s2


# ---------------------------------------------------------------- validation


@dataclass(frozen=True)
class Violation:
    axiom: str
    detail: str
    witness: tuple = ()

    def __str__(self):
        return f"{self.axiom}: {self.detail}" + (f" {self.witness}" if self.witness else "")


def validate_category(c: FinLinCat, limit: int = 50) -> List[Violation]:
    """Every violated axiom, with witnessing basis elements (capped at
    ``limit`` entries).  An empty list means the category is valid."""
    out: List[Violation] = []
    f = c.field
    p = f.p
    obs = c.objects

    def add(v):
        if len(out) < limit:
            out.append(v)

    for (a, b), sp in c.homs.items():
        for i, g in enumerate(sp.degrees):
            if g > 0:
                add(Violation("grading", f"hom({a},{b}) has a basis element of positive degree", (sp.labels[i], g)))
            img = sp.d.get(i, {})
            for t in img:
                if not (0 <= t < sp.dim) or sp.degrees[t] != g + 1:
                    add(Violation("differential degree", f"d does not raise degree by one in hom({a},{b})", (sp.labels[i],)))
            dd = sp.apply_d(img, p)
            if dd:
                add(Violation("d squared", f"d∘d != 0 in hom({a},{b})", (sp.labels[i],)))
    for (a, b, cc), table in c.comp.items():
        hf, hg, hh = c.hom(a, b), c.hom(b, cc), c.hom(a, cc)
        for (gi, fi), v in table.items():
            if gi >= hg.dim or fi >= hf.dim or any(t >= hh.dim for t in v):
                add(Violation("composition", f"index out of range for objects ({a},{b},{cc})", (gi, fi)))
                continue
            deg = hg.degrees[gi] + hf.degrees[fi]
            if any(hh.degrees[t] != deg for t in v):
                add(Violation("composition degree", "g∘f not of degree |g|+|f|", (a, b, cc, hg.labels[gi], hf.labels[fi])))
    if out:
        return out
    # identities and unit laws
    for a in obs:
        ida = c.identities.get(a, {})
        end = c.hom(a, a)
        if any(end.degrees[t] != 0 for t in ida):
            add(Violation("identity", f"identity of {a} is not of degree 0", (a,)))
        if end.apply_d(ida, p):
            add(Violation("identity", f"identity of {a} is not closed", (a,)))
    for a, b in product(obs, obs):
        sp = c.hom(a, b)
        for i in range(sp.dim):
            e = {i: f.one}
            if c.compose(a, b, b, c.identities[b], e) != e:
                add(Violation("left unit", f"id_{b}∘f != f", (a, b, sp.labels[i])))
            if c.compose(a, a, b, e, c.identities[a]) != e:
                add(Violation("right unit", f"f∘id_{a} != f", (a, b, sp.labels[i])))
    # associativity: (h∘g)∘f = h∘(g∘f)
    for a, b, cc, d in product(obs, repeat=4):
        hf, hg, hh = c.hom(a, b), c.hom(b, cc), c.hom(cc, d)
        if not (hf.dim and hg.dim and hh.dim):
            continue
        for fi in range(hf.dim):
            for gi in range(hg.dim):
                gf = c.compose_basis(a, b, cc, gi, fi)
                for hi in range(hh.dim):
                    hg_ = c.compose_basis(b, cc, d, hi, gi)
                    left = c.compose(a, b, d, hg_, {fi: f.one})
                    right = c.compose(a, cc, d, {hi: f.one}, gf)
                    if left != right:
                        add(Violation("associativity", "(h∘g)∘f != h∘(g∘f)", (a, b, cc, d, hf.labels[fi], hg.labels[gi], hh.labels[hi])))
    # Leibniz: d(g∘f) = dg∘f + (-1)^|g| g∘df
    for a, b, cc in product(obs, repeat=3):
        hf, hg, hc = c.hom(a, b), c.hom(b, cc), c.hom(a, cc)
        if not (hf.dim and hg.dim) or not (hf.has_differential() or hg.has_differential() or hc.has_differential()):
            continue
        for fi in range(hf.dim):
            for gi in range(hg.dim):
                lhs = hc.apply_d(c.compose_basis(a, b, cc, gi, fi), p)
                rhs = c.compose(a, b, cc, hg.d.get(gi, {}), {fi: f.one})
                axpy(rhs, f.sign(hg.degrees[gi]), c.compose(a, b, cc, {gi: f.one}, hf.d.get(fi, {})), p)
                if lhs != rhs:
                    add(Violation("Leibniz", "d(g∘f) != dg∘f ± g∘df", (a, b, cc, hg.labels[gi], hf.labels[fi])))
    if c.relation is not None:
        out.extend(check_censoring(c, c.relation)[: max(0, limit - len(out))])
    return out


def check_censoring(c: FinLinCat, rel: Iterable[Tuple[str, str]]) -> List[Violation]:
    """Consistency of a censoring relation with the category."""
    rel = set(rel)
    out = []
    for (a, b) in rel:
        if a not in c.objects or b not in c.objects:
            out.append(Violation("censoring", "relation mentions an unknown object", (a, b)))
    for (a, b) in rel:
        for (b2, d) in rel:
            if b2 == b and (a, d) not in rel:
                out.append(Violation("censoring", "relation is not transitive", (a, b, d)))
    for a in c.objects:
        if c.identities.get(a) and (a, a) not in rel:
            out.append(Violation("censoring", "object with nonzero identity not related to itself", (a,)))
    for (a, b), sp in c.homs.items():
        if sp.dim and (a, b) not in rel:
            out.append(Violation("censoring", "nonzero hom outside the relation", (a, b)))
    return out


def require_valid(c: FinLinCat) -> FinLinCat:
    v = validate_category(c)
    if v:
        raise CategoryError("; ".join(str(x) for x in v[:5]))
    return c


# ---------------------------------------------------------------- algebras


@dataclass
class Algebra:
    """Finite-dimensional (possibly graded/DG) algebra by structure constants.

    ``mult[(i, j)]`` is ``e_i * e_j``.
    """

    field: Field
    labels: Tuple[str, ...]
    mult: Dict[Tuple[int, int], Vector]
    unit: Vector
    degrees: Optional[Tuple[int, ...]] = None
    differential: Dict[int, Vector] = dc_field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        self.labels = tuple(self.labels)
        if self.degrees is None:
            self.degrees = (0,) * len(self.labels)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def mul(self, x: Vector, y: Vector) -> Vector:
        p = self.field.p
        out: Vector = {}
        for i, a in x.items():
            for j, b in y.items():
                r = self.mult.get((i, j))
                if r:
                    axpy(out, self.field.mul(a, b), r, p)
        return out

    def is_commutative(self) -> bool:
        n = self.dim
        return all(self.mult.get((i, j), {}) == self.mult.get((j, i), {}) for i in range(n) for j in range(n))

    @classmethod
    def from_table(cls, field: Field, labels: Sequence[str], table: Mapping[Tuple[str, str], Mapping[str, object]],
                   unit: Mapping[str, object], name: str = "", degrees=None, differential=None) -> "Algebra":
        pos = {l: i for i, l in enumerate(labels)}
        mult = {}
        for (x, y), val in table.items():
            v = {pos[k]: field(c) for k, c in val.items() if field(c)}
            if v:
                mult[pos[x], pos[y]] = v
        u = {pos[k]: field(c) for k, c in unit.items() if field(c)}
        diff = {}
        for x, val in (differential or {}).items():
            v = {pos[k]: field(c) for k, c in val.items() if field(c)}
            if v:
                diff[pos[x]] = v
        return cls(field, tuple(labels), mult, u, tuple(degrees) if degrees else None, diff, name)


def ground_algebra(field: Field = QQ) -> Algebra:
    return Algebra(field, ("1",), {(0, 0): {0: field.one}}, {0: field.one}, name="k")


def truncated_polynomial(n: int, field: Field = QQ, var: str = "x") -> Algebra:
    """k[x]/(x^n) with basis 1, x, ..., x^{n-1}."""
    labels = ["1"] + [var if i == 1 else f"{var}^{i}" for i in range(1, n)]
    mult = {(i, j): {i + j: field.one} for i in range(n) for j in range(n) if i + j < n}
    return Algebra(field, labels, mult, {0: field.one}, name=f"k[{var}]/({var}^{n})")


def dual_numbers(field: Field = QQ) -> Algebra:
    a = truncated_polynomial(2, field, "e")
    a.name = "k[e]/(e^2)"
    return a


def matrix_algebra_upper(n: int, field: Field = QQ) -> Algebra:
    """Upper-triangular n x n matrices, basis E_ij for i <= j."""
    idx = [(i, j) for i in range(n) for j in range(n) if i <= j]
    pos = {e: k for k, e in enumerate(idx)}
    mult = {}
    for (i, j) in idx:
        for (k, l) in idx:
            if j == k:
                mult[pos[i, j], pos[k, l]] = {pos[i, l]: field.one}
    unit = {pos[i, i]: field.one for i in range(n)}
    return Algebra(field, [f"E{i}{j}" for i, j in idx], mult, unit, name=f"T{n}")


def product_algebra(n: int, field: Field = QQ) -> Algebra:
    """k x ... x k (n copies)."""
    mult = {(i, i): {i: field.one} for i in range(n)}
    return Algebra(field, [f"p{i}" for i in range(n)], mult, {i: field.one for i in range(n)}, name=f"k^{n}")


def group_algebra_cyclic(n: int, field: Field = QQ) -> Algebra:
    mult = {(i, j): {(i + j) % n: field.one} for i in range(n) for j in range(n)}
    return Algebra(field, [f"g{i}" for i in range(n)], mult, {0: field.one}, name=f"kC{n}")


def exterior_algebra_graded(field: Field = QQ, degree: int = -1) -> Algebra:
    """k[z]/(z^2) with |z| = degree (a graded algebra, zero differential)."""
    return Algebra(field, ("1", "z"), {(0, 0): {0: field.one}, (0, 1): {1: field.one}, (1, 0): {1: field.one}},
                   {0: field.one}, (0, degree), {}, name=f"Λ(z),|z|={degree}")


def koszul_dg_algebra(field: Field = QQ) -> Algebra:
    """k[y]/(y^2) ⊗ Λ(x), |x| = -1, dx = y; quasi-isomorphic to Λ(xy)."""
    one = field.one
    labels = ("1", "y", "x", "xy")
    # x and y commute (|y| = 0); x^2 = 0, y^2 = 0
    table = {
        ("1", "1"): {"1": one}, ("1", "y"): {"y": one}, ("1", "x"): {"x": one}, ("1", "xy"): {"xy": one},
        ("y", "1"): {"y": one}, ("x", "1"): {"x": one}, ("xy", "1"): {"xy": one},
        ("x", "y"): {"xy": one}, ("y", "x"): {"xy": one},
    }
    return Algebra.from_table(field, labels, table, {"1": one}, name="Koszul(y)", degrees=(0, 0, -1, -1),
                              differential={"x": {"y": one}})


def from_algebra(a: Algebra, obj: str = "*") -> FinLinCat:
    """One-object category whose endomorphisms reproduce ``a``."""
    sp = GradedSpace(a.labels, tuple(a.degrees), {i: dict(v) for i, v in a.differential.items() if v})
    comp = {(obj, obj, obj): {k: dict(v) for k, v in a.mult.items()}}
    c = FinLinCat(a.field, [obj], {(obj, obj): sp}, comp, {obj: dict(a.unit)}, name=a.name)
    bad = validate_category(c)
    if bad:
        raise CategoryError("algebra data is not a unital associative (DG) algebra: " + "; ".join(map(str, bad[:3])))
    return c


def algebra_of_object(c: FinLinCat, a: str) -> Algebra:
    sp = c.hom(a, a)
    return Algebra(c.field, sp.labels, dict(c.comp.get((a, a, a), {})), dict(c.identities[a]), sp.degrees,
                   dict(sp.d), name=f"End({a})")


# ---------------------------------------------------------------- constructors


def incidence_category(poset: Poset, presheaf=None, field: Field = None) -> FinLinCat:
    """hom(U, V) = O(U) if U <= V, else 0; g∘f = f · r_{UV}(g).

    ``presheaf`` is a ring presheaf on ``poset`` (constant ``k`` if omitted).
    """
    if presheaf is not None:
        field = check_same_field(presheaf.field, field or presheaf.field)
        if presheaf.poset != poset:
            raise CategoryError("presheaf lives on a different poset")
        bad = presheaf.violations()
        if bad:
            raise CategoryError("presheaf restrictions are not functorial unital algebra maps: " + "; ".join(bad[:3]))
    field = field or QQ

    def alg(u):
        return presheaf.algebras[u] if presheaf is not None else ground_algebra(field)

    def res(u, v) -> Matrix:
        if presheaf is not None:
            return presheaf.restriction(u, v)
        return Matrix.identity(field, 1)

    homs = {}
    for u, v in poset.pairs():
        a = alg(u)
        homs[u, v] = GradedSpace(a.labels, tuple(a.degrees), {})
    comp = {}
    for u, v, w in poset.weak_chains(2):
        au = alg(u)
        r = res(u, v)
        table = {}
        for gi in range(alg(v).dim):
            rg = r.cols[gi]
            for fi in range(au.dim):
                val = au.mul({fi: field.one}, rg)
                if val:
                    table[gi, fi] = val
        comp[u, v, w] = table
    ids = {u: dict(alg(u).unit) for u in poset.elements}
    return FinLinCat(field, poset.elements, homs, comp, ids, relation=poset.pairs(), name="incidence")


@dataclass
class FiniteCategory:
    """An ordinary finite category given by named morphisms."""

    objects: Tuple[str, ...]
    morphisms: Dict[str, Tuple[str, str]]
    composition: Dict[Tuple[str, str], str]  # (g, f) -> g∘f
    identities: Dict[str, str]

    @classmethod
    def from_poset(cls, poset: Poset) -> "FiniteCategory":
        mor = {f"{x}->{y}": (x, y) for x, y in poset.pairs()}
        comp = {}
        for x, y, z in poset.weak_chains(2):
            comp[f"{y}->{z}", f"{x}->{y}"] = f"{x}->{z}"
        return cls(poset.elements, mor, comp, {x: f"{x}->{x}" for x in poset.elements})


def linearize(fc: FiniteCategory, field: Field = QQ) -> FinLinCat:
    """k-linear hull: hom bases are the morphism sets, composition bilinear."""
    labels: Dict[Tuple[str, str], List[str]] = {}
    for m in sorted(fc.morphisms):
        labels.setdefault(fc.morphisms[m], []).append(m)
    pos = {m: labels[fc.morphisms[m]].index(m) for m in fc.morphisms}
    homs = {k: plain_space(v) for k, v in labels.items()}
    comp: Dict[Triple, Dict] = {}
    for (g, f), h in fc.composition.items():
        a, b = fc.morphisms[f]
        b2, c = fc.morphisms[g]
        if b != b2 or fc.morphisms[h] != (a, c):
            raise CategoryError(f"composition {g}∘{f} = {h} has mismatched ends")
        comp.setdefault((a, b, c), {})[pos[g], pos[f]] = {pos[h]: field.one}
    ids = {x: {pos[m]: field.one} for x, m in fc.identities.items()}
    return FinLinCat(field, fc.objects, homs, comp, ids, name="linearized")


def category_algebra(c: FinLinCat) -> Algebra:
    """Algebra on ⊕ hom(A, B) with g·f = g∘f when composable, else 0."""
    if not all(all(g == 0 for g in sp.degrees) and not sp.has_differential() for sp in c.homs.values()):
        raise CategoryError("category algebra is only defined here for ordinary categories")
    pairs = sorted(c.homs)
    offset = {}
    labels = []
    for pr in pairs:
        offset[pr] = len(labels)
        labels.extend(f"{pr[0]}->{pr[1]}:{l}" for l in c.homs[pr].labels)
    mult = {}
    for (a, b, cc), table in c.comp.items():
        for (gi, fi), v in table.items():
            mult[offset[b, cc] + gi, offset[a, b] + fi] = {offset[a, cc] + t: x for t, x in v.items()}
    unit = {}
    for a, v in c.identities.items():
        for t, x in v.items():
            unit[offset[a, a] + t] = x
    return Algebra(c.field, tuple(labels), mult, unit, name=f"alg({c.name})")


def opposite(c: FinLinCat) -> FinLinCat:
    """hom^op(A, B) = hom(B, A), g ∘^op f = (-1)^{|f||g|} f∘g."""
    f = c.field
    homs = {(b, a): sp for (a, b), sp in c.homs.items()}
    comp = {}
    for (a, b, cc), table in c.comp.items():
        # f∘g in c with g: a->b, f: b->cc becomes g ∘^op f for f: cc->b, g: b->a in c^op
        hg, hf = c.hom(a, b), c.hom(b, cc)
        new = {}
        for (fi, gi), v in table.items():
            s = f.sign(hg.degrees[gi] * hf.degrees[fi])
            new[gi, fi] = vscale(s, v, f.p)
        comp[cc, b, a] = new
    rel = None if c.relation is None else [(b, a) for a, b in c.relation]
    return FinLinCat(f, c.objects, homs, comp, c.identities, rel, name=f"{c.name}^op")


def full_subcategory(c: FinLinCat, objs: Iterable[str]) -> FinLinCat:
    objs = set(objs)
    unknown = objs - set(c.objects)
    if unknown:
        raise CategoryError(f"unknown objects {sorted(unknown)}")
    homs = {k: v for k, v in c.homs.items() if k[0] in objs and k[1] in objs}
    comp = {k: v for k, v in c.comp.items() if set(k) <= objs}
    rel = None if c.relation is None else [r for r in c.relation if r[0] in objs and r[1] in objs]
    return FinLinCat(c.field, objs, homs, comp, {a: c.identities[a] for a in objs}, rel, name=f"{c.name}|sub")


@dataclass
class ArrowCategorySpec:
    """Data for the arrow category (left <-X- right).

    ``bimodule`` has ``left`` category acting on targets and ``right``
    category acting on sources; its spaces ``X(B, A)`` become ``hom(B, A)``.
    """

    left: FinLinCat
    right: FinLinCat
    bimodule: object
    left_tag: str = "a"
    right_tag: str = "b"


def arrow_category(s: ArrowCategorySpec) -> FinLinCat:
    from .bimodule import validate_bimodule  # bimodule depends on this module

    X = s.bimodule
    bad = validate_bimodule(X)
    if bad:
        raise CategoryError("bimodule axioms fail: " + "; ".join(map(str, bad[:3])))
    A, B = s.left, s.right
    field = check_same_field(A.field, B.field, X.field)

    def la(o):
        return f"{s.left_tag}:{o}"

    def lb(o):
        return f"{s.right_tag}:{o}"

    homs = {}
    for (u, v), sp in A.homs.items():
        homs[la(u), la(v)] = sp
    for (u, v), sp in B.homs.items():
        homs[lb(u), lb(v)] = sp
    for (r, l), sp in X.spaces.items():
        homs[lb(r), la(l)] = sp
    comp = {}
    for (u, v, w), t in A.comp.items():
        comp[la(u), la(v), la(w)] = t
    for (u, v, w), t in B.comp.items():
        comp[lb(u), lb(v), lb(w)] = t
    # a∘x with x in X(r, l), a in A(l, l'): left action
    for (r, l, l2), t in X.left_act.items():
        comp[lb(r), la(l), la(l2)] = {(ai, xi): v for (ai, xi), v in t.items()}
    # x∘b with b in B(r', r), x in X(r, l): right action
    for (r2, r, l), t in X.right_act.items():
        comp[lb(r2), lb(r), la(l)] = {(xi, bi): v for (xi, bi), v in t.items()}
    ids = {la(o): v for o, v in A.identities.items()}
    ids.update({lb(o): v for o, v in B.identities.items()})
    rel = {(la(u), la(v)) for u, v in A.effective_relation()}
    rel |= {(lb(u), lb(v)) for u, v in B.effective_relation()}
    rel |= {(lb(r), la(l)) for r in B.objects for l in A.objects}
    objs = [la(o) for o in A.objects] + [lb(o) for o in B.objects]
    return FinLinCat(field, objs, homs, comp, ids, rel, name=f"({A.name}<-X-{B.name})")


def cohomology_category(c: FinLinCat) -> FinLinCat:
    """The graded category H*(c), composition induced on representatives."""
    f = c.field
    data = {}
    for (a, b), sp in c.homs.items():
        cx, idx = sp.as_complex(f)
        hs = {k: Cohomology(cx, k) for k in idx}
        data[a, b] = (sp, idx, hs)
    homs, reps_full, classify = {}, {}, {}
    for (a, b), (sp, idx, hs) in data.items():
        labels, degs, reps = [], [], []
        for k in sorted(hs):
            for j, r in enumerate(hs[k].reps):
                labels.append(f"[{k}:{j}]")
                degs.append(k)
                reps.append({idx[k][t]: x for t, x in r.items()})
        homs[a, b] = GradedSpace(tuple(labels), tuple(degs), {})
        reps_full[a, b] = reps

        def cls(v, idx=idx, hs=hs, degs=tuple(degs)):
            out = {}
            base = 0
            for k in sorted(hs):
                part = {}
                pos = {i: j for j, i in enumerate(idx[k])}
                for i, x in v.items():
                    if i in pos:
                        part[pos[i]] = x
                coords = hs[k].classify(part)
                for j, x in coords.items():
                    out[base + j] = x
                base += hs[k].betti
            return out

        classify[a, b] = cls
    comp = {}
    for (a, b, cc) in product(c.objects, repeat=3):
        if (a, b) not in reps_full or (b, cc) not in reps_full or (a, cc) not in classify:
            continue
        table = {}
        for gi, g in enumerate(reps_full[b, cc]):
            for fi, fv in enumerate(reps_full[a, b]):
                val = classify[a, cc](c.compose(a, b, cc, g, fv))
                if val:
                    table[gi, fi] = val
        comp[a, b, cc] = table
        # well-definedness: composing with a boundary gives a boundary
        _, idx_ab, hs_ab = data[a, b]
        for k, h in hs_ab.items():
            if k - 1 not in idx_ab:
                continue
            sp_ab = data[a, b][0]
            for i in idx_ab[k - 1]:
                bnd = sp_ab.d.get(i, {})
                for g in reps_full[b, cc]:
                    if classify[a, cc](c.compose(a, b, cc, g, bnd)):
                        raise CategoryError("induced composition is not well defined")
    ids = {}
    for a in c.objects:
        if (a, a) in classify and c.identities.get(a):
            ids[a] = classify[a, a](c.identities[a])
        else:
            ids[a] = {}
    homs = {k: v for k, v in homs.items() if v.dim}
    return FinLinCat(f, c.objects, homs, comp, ids, c.relation, name=f"H*({c.name})")


def free_module_category(a: Algebra, ranks: Sequence[int] = (1, 2)) -> FinLinCat:
    """Full subcategory of free right modules a^n; hom(a^m, a^n) = n x m matrices
    over a acting by left multiplication."""
    f = a.field
    objs = [f"A{n}" for n in ranks]
    homs, comp, ids = {}, {}, {}

    def basis(m, n):
        return [(i, j, e) for i in range(n) for j in range(m) for e in range(a.dim)]

    pos = {}
    for m, om in zip(ranks, objs):
        for n, on in zip(ranks, objs):
            b = basis(m, n)
            pos[om, on] = {x: k for k, x in enumerate(b)}
            homs[om, on] = plain_space([f"{i}{j}:{a.labels[e]}" for i, j, e in b])
    for (m, om), (n, on), (l, ol) in product(list(zip(ranks, objs)), repeat=3):
        table = {}
        for (i, j, e1), gi in pos[on, ol].items():
            for (j2, k, e2), fi in pos[om, on].items():
                if j != j2:
                    continue
                prod_ = a.mult.get((e1, e2), {})
                if prod_:
                    table[gi, fi] = {pos[om, ol][i, k, t]: x for t, x in prod_.items()}
        comp[om, on, ol] = table
    for n, on in zip(ranks, objs):
        v = {}
        for i in range(n):
            for t, x in a.unit.items():
                v[pos[on, on][i, i, t]] = x
        ids[on] = v
    return FinLinCat(f, objs, homs, comp, ids, name=f"free({a.name})")


def change_basis(c: FinLinCat, P: Mapping[Tuple[str, str], Matrix]) -> FinLinCat:
    """Re-express ``c`` in new hom bases; column j of ``P[(a, b)]`` gives new
    basis vector j in old coordinates.  Matrices must preserve degrees."""
    f = c.field
    p = f.p
    Pinv = {k: m.inverse() for k, m in P.items()}

    def old(k, j):
        return P[k].cols[j] if k in P else {j: f.one}

    def new(k, v):
        return Pinv[k].apply(v) if k in P else dict(v)

    homs = {}
    for k, sp in c.homs.items():
        d = {}
        for j in range(sp.dim):
            img = new(k, sp.apply_d(old(k, j), p))
            if img:
                d[j] = img
        homs[k] = GradedSpace(sp.labels, sp.degrees, d)
    comp = {}
    for (a, b, cc) in c.comp:
        hg, hf = c.hom(b, cc), c.hom(a, b)
        table = {}
        for gi in range(hg.dim):
            for fi in range(hf.dim):
                v = new((a, cc), c.compose(a, b, cc, old((b, cc), gi), old((a, b), fi)))
                if v:
                    table[gi, fi] = v
        comp[a, b, cc] = table
    ids = {a: new((a, a), v) for a, v in c.identities.items()}
    return FinLinCat(f, c.objects, homs, comp, ids, c.relation, name=f"{c.name}'")
