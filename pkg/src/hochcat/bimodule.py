"""Bimodules over finite linear categories, one-sided modules, and Ext.

A :class:`Bimodule` X over ``(left, right)`` stores a graded space
``X(r, l)`` for ``r`` an object of the right category and ``l`` an object of
the left category (``X`` is contravariant in ``r``, covariant in ``l``).

* left action: ``a·x`` for ``a`` in ``left(l, l2)``, ``x`` in ``X(r, l)``,
  stored as ``left_act[(r, l, l2)][(a, x)]``;
* right action: ``x·b`` for ``x`` in ``X(r, l)``, ``b`` in ``right(r2, r)``,
  stored as ``right_act[(r2, r, l)][(x, b)]``.

A one-sided (right) module over a category ``c`` is a bimodule over
``(ground_category, c)``; left modules are right modules over the opposite.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .linalg import (
    ComplexRep,
    Echelon,
    Field,
    Matrix,
    QQ,
    Vector,
    axpy,
    betti_numbers,
    check_same_field,
    vscale,
)
from .lincat import (
    CategoryError,
    FinLinCat,
    GradedSpace,
    Violation,
    ZERO_SPACE,
    check_censoring,
    from_algebra,
    ground_algebra,
    opposite,
    full_subcategory,
)

GROUND = "*"
DEFAULT_MAX_DIM = 20000


class BimoduleError(ValueError):
    pass


class ResourceLimitError(RuntimeError):
    """A configured dimension cap was exceeded."""

    def __init__(self, message, where=None, dim=None):
        super().__init__(message)
        self.where = where
        self.dim = dim


def ground_category(field: Field = QQ) -> FinLinCat:
    return from_algebra(ground_algebra(field), GROUND)


class Bimodule:
    def __init__(
        self,
        left: FinLinCat,
        right: FinLinCat,
        spaces: Mapping[Tuple[str, str], GradedSpace],
        left_act: Mapping[Tuple[str, str, str], Mapping[Tuple[int, int], Vector]],
        right_act: Mapping[Tuple[str, str, str], Mapping[Tuple[int, int], Vector]],
        name: str = "",
    ):
        self.field = check_same_field(left.field, right.field)
        self.left = left
        self.right = right
        self.spaces: Dict[Tuple[str, str], GradedSpace] = {k: v for k, v in spaces.items() if v.dim}
        for r, l in self.spaces:
            if r not in right.objects or l not in left.objects:
                raise BimoduleError(f"space X({r}, {l}) mentions an unknown object")
        self.left_act = {k: {i: dict(v) for i, v in t.items() if v} for k, t in left_act.items()}
        self.right_act = {k: {i: dict(v) for i, v in t.items() if v} for k, t in right_act.items()}
        self.left_act = {k: t for k, t in self.left_act.items() if t}
        self.right_act = {k: t for k, t in self.right_act.items() if t}
        self.name = name

    def __repr__(self):
        return f"Bimodule({self.name or '?'}, dim={self.total_dim()})"

    def space(self, r: str, l: str) -> GradedSpace:
        return self.spaces.get((r, l), ZERO_SPACE)

    def total_dim(self) -> int:
        return sum(s.dim for s in self.spaces.values())

    def degree_range(self) -> Tuple[int, int]:
        ds = [g for s in self.spaces.values() for g in s.degrees]
        return (min(ds), max(ds)) if ds else (0, 0)

    def has_differential(self) -> bool:
        return any(s.has_differential() for s in self.spaces.values())

    def is_ordinary(self) -> bool:
        return (
            self.left.is_ordinary()
            and self.right.is_ordinary()
            and all(all(g == 0 for g in s.degrees) for s in self.spaces.values())
            and not self.has_differential()
        )

    def act_left(self, r, l, l2, a: Vector, x: Vector) -> Vector:
        table = self.left_act.get((r, l, l2))
        out: Vector = {}
        if not table:
            return out
        f = self.field
        for ai, s in a.items():
            for xi, t in x.items():
                v = table.get((ai, xi))
                if v:
                    axpy(out, f.mul(s, t), v, f.p)
        return out

    def act_right(self, r2, r, l, x: Vector, b: Vector) -> Vector:
        table = self.right_act.get((r2, r, l))
        out: Vector = {}
        if not table:
            return out
        f = self.field
        for xi, s in x.items():
            for bi, t in b.items():
                v = table.get((xi, bi))
                if v:
                    axpy(out, f.mul(s, t), v, f.p)
        return out

    def is_diagonal_of(self, c: FinLinCat) -> bool:
        d = diagonal_bimodule(c)
        return (
            self.left is c
            and self.right is c
            or (
                self.left.structure_signature() == c.structure_signature()
                and self.right.structure_signature() == c.structure_signature()
            )
        ) and self._data() == d._data()

    def _data(self):
        return (
            {k: (v.degrees, {i: x for i, x in v.d.items() if x}) for k, v in self.spaces.items()},
            self.left_act,
            self.right_act,
        )

    # one-sided slices
    def column(self, l: str) -> "Bimodule":
        """The right module ``X(-, l)`` over the right category."""
        g = ground_category(self.field)
        spaces = {(r, GROUND): s for (r, ll), s in self.spaces.items() if ll == l}
        ract = {(r2, r, GROUND): t for (r2, r, ll), t in self.right_act.items() if ll == l}
        lact = {}
        for (r, GROUND_), s in spaces.items():
            lact[r, GROUND, GROUND] = {(0, i): {i: self.field.one} for i in range(s.dim)}
        return Bimodule(g, self.right, spaces, lact, ract, name=f"{self.name}(-,{l})")

    def row(self, r: str) -> "Bimodule":
        """The left module ``X(r, -)``, as a right module over ``left^op``."""
        f = self.field
        g = ground_category(f)
        lop = opposite(self.left)
        spaces = {(l, GROUND): s for (rr, l), s in self.spaces.items() if rr == r}
        ract = {}
        for (rr, l, l2), t in self.left_act.items():
            if rr != r:
                continue
            # x ·op a = (-1)^{|a||x|} a·x, a in left(l, l2) = left^op(l2, l)
            adeg = self.left.hom(l, l2).degrees
            xdeg = self.space(r, l).degrees
            ract[l2, l, GROUND] = {
                (xi, ai): vscale(f.sign(adeg[ai] * xdeg[xi]), v, f.p) for (ai, xi), v in t.items()
            }
        lact = {(l, GROUND, GROUND): {(0, i): {i: f.one} for i in range(s.dim)} for (l, _), s in spaces.items()}
        return Bimodule(g, lop, spaces, lact, ract, name=f"{self.name}({r},-)")


# ---------------------------------------------------------------- validation


def validate_bimodule(x: Bimodule, limit: int = 50) -> List[Violation]:
    """Action associativity, unit, compatibility and Leibniz violations."""
    out: List[Violation] = []
    f = x.field
    p = f.p
    A, B = x.left, x.right

    def add(v):
        if len(out) < limit:
            out.append(v)

    for (r, l), s in x.spaces.items():
        for i in range(s.dim):
            for t in s.d.get(i, {}):
                if s.degrees[t] != s.degrees[i] + 1:
                    add(Violation("differential degree", f"d does not raise degree in X({r},{l})", (s.labels[i],)))
            if s.apply_d(s.d.get(i, {}), p):
                add(Violation("d squared", f"d∘d != 0 in X({r},{l})", (s.labels[i],)))
    for (r, l, l2), t in x.left_act.items():
        ha, hx, hy = A.hom(l, l2), x.space(r, l), x.space(r, l2)
        for (ai, xi), v in t.items():
            if ai >= ha.dim or xi >= hx.dim or any(k >= hy.dim for k in v):
                add(Violation("left action", "index out of range", (r, l, l2, ai, xi)))
            elif any(hy.degrees[k] != ha.degrees[ai] + hx.degrees[xi] for k in v):
                add(Violation("left action degree", "a·x not of degree |a|+|x|", (r, l, l2, ha.labels[ai], hx.labels[xi])))
    for (r2, r, l), t in x.right_act.items():
        hb, hx, hy = B.hom(r2, r), x.space(r, l), x.space(r2, l)
        for (xi, bi), v in t.items():
            if bi >= hb.dim or xi >= hx.dim or any(k >= hy.dim for k in v):
                add(Violation("right action", "index out of range", (r2, r, l, xi, bi)))
            elif any(hy.degrees[k] != hb.degrees[bi] + hx.degrees[xi] for k in v):
                add(Violation("right action degree", "x·b not of degree |x|+|b|", (r2, r, l, hx.labels[xi], hb.labels[bi])))
    if out:
        return out
    for (r, l), s in x.spaces.items():
        for i in range(s.dim):
            e = {i: f.one}
            if x.act_left(r, l, l, A.identities[l], e) != e:
                add(Violation("left unit", "id·x != x", (r, l, s.labels[i])))
            if x.act_right(r, r, l, e, B.identities[r]) != e:
                add(Violation("right unit", "x·id != x", (r, l, s.labels[i])))
    # (a2 a1)·x = a2·(a1·x)
    for (r, l), s in x.spaces.items():
        for l1, l2 in product(A.objects, repeat=2):
            h1, h2 = A.hom(l, l1), A.hom(l1, l2)
            if not (h1.dim and h2.dim):
                continue
            for xi in range(s.dim):
                for a1 in range(h1.dim):
                    ax = x.act_left(r, l, l1, {a1: f.one}, {xi: f.one})
                    for a2 in range(h2.dim):
                        lhs = x.act_left(r, l, l2, A.compose_basis(l, l1, l2, a2, a1), {xi: f.one})
                        rhs = x.act_left(r, l1, l2, {a2: f.one}, ax)
                        if lhs != rhs:
                            add(Violation("left associativity", "(a2 a1)·x != a2·(a1·x)", (r, l, l1, l2, h2.labels[a2], h1.labels[a1], s.labels[xi])))
    # x·(b1 b2) = (x·b1)·b2
    for (r, l), s in x.spaces.items():
        for r1, r2 in product(B.objects, repeat=2):
            h1, h2 = B.hom(r1, r), B.hom(r2, r1)
            if not (h1.dim and h2.dim):
                continue
            for xi in range(s.dim):
                for b1 in range(h1.dim):
                    xb = x.act_right(r1, r, l, {xi: f.one}, {b1: f.one})
                    for b2 in range(h2.dim):
                        lhs = x.act_right(r2, r, l, {xi: f.one}, B.compose_basis(r2, r1, r, b1, b2))
                        rhs = x.act_right(r2, r1, l, xb, {b2: f.one})
                        if lhs != rhs:
                            add(Violation("right associativity", "x·(b1 b2) != (x·b1)·b2", (r2, r1, r, l, s.labels[xi])))
    # (a·x)·b = a·(x·b)
    for (r, l), s in x.spaces.items():
        for l2, r2 in product(A.objects, B.objects):
            ha, hb = A.hom(l, l2), B.hom(r2, r)
            if not (ha.dim and hb.dim):
                continue
            for xi in range(s.dim):
                for ai in range(ha.dim):
                    ax = x.act_left(r, l, l2, {ai: f.one}, {xi: f.one})
                    for bi in range(hb.dim):
                        lhs = x.act_right(r2, r, l2, ax, {bi: f.one})
                        rhs = x.act_left(r2, l, l2, {ai: f.one}, x.act_right(r2, r, l, {xi: f.one}, {bi: f.one}))
                        if lhs != rhs:
                            add(Violation("bimodule compatibility", "(a·x)·b != a·(x·b)", (r2, r, l, l2, ha.labels[ai], s.labels[xi], hb.labels[bi])))
    # Leibniz for both actions
    if x.has_differential() or not (A.is_ordinary() and B.is_ordinary()):
        for (r, l, l2), t in x.left_act.items():
            ha, hx, hy = A.hom(l, l2), x.space(r, l), x.space(r, l2)
            for ai in range(ha.dim):
                for xi in range(hx.dim):
                    lhs = hy.apply_d(x.act_left(r, l, l2, {ai: f.one}, {xi: f.one}), p)
                    rhs = x.act_left(r, l, l2, ha.d.get(ai, {}), {xi: f.one})
                    axpy(rhs, f.sign(ha.degrees[ai]), x.act_left(r, l, l2, {ai: f.one}, hx.d.get(xi, {})), p)
                    if lhs != rhs:
                        add(Violation("Leibniz (left)", "d(a·x) != da·x ± a·dx", (r, l, l2, ha.labels[ai], hx.labels[xi])))
        for (r2, r, l), t in x.right_act.items():
            hb, hx, hy = B.hom(r2, r), x.space(r, l), x.space(r2, l)
            for xi in range(hx.dim):
                for bi in range(hb.dim):
                    lhs = hy.apply_d(x.act_right(r2, r, l, {xi: f.one}, {bi: f.one}), p)
                    rhs = x.act_right(r2, r, l, hx.d.get(xi, {}), {bi: f.one})
                    axpy(rhs, f.sign(hx.degrees[xi]), x.act_right(r2, r, l, {xi: f.one}, hb.d.get(bi, {})), p)
                    if lhs != rhs:
                        add(Violation("Leibniz (right)", "d(x·b) != dx·b ± x·db", (r2, r, l, hx.labels[xi], hb.labels[bi])))
    return out


def require_valid_bimodule(x: Bimodule) -> Bimodule:
    bad = validate_bimodule(x)
    if bad:
        raise BimoduleError("; ".join(map(str, bad[:5])))
    return x


# ---------------------------------------------------------------- constructors


def diagonal_bimodule(c: FinLinCat) -> Bimodule:
    """X(A, A') = c(A, A') with both actions given by composition."""
    spaces = dict(c.homs)
    left = {}
    right = {}
    for (a, b, cc), t in c.comp.items():
        # left: g in c(b, cc) acting on x in X(a, b)
        left[a, b, cc] = t
        # right: x in X(b, cc) acted on by f in c(a, b)
        right[a, b, cc] = t
    return Bimodule(c, c, spaces, left, right, name=f"diag({c.name})")


def zero_bimodule(left: FinLinCat, right: FinLinCat) -> Bimodule:
    return Bimodule(left, right, {}, {}, {}, name="0")


def dual_bimodule(c: FinLinCat) -> Bimodule:
    """X(r, l) = c(l, r)^*, with (a·φ)(u) = φ(u∘a) and (φ·b)(u) = φ(b∘u).

    Defined for ordinary categories; it is supported on the transpose of the
    hom support, so it is typically nonzero off a censoring relation.
    """
    if not c.is_ordinary():
        raise BimoduleError("dual bimodule is only provided for ordinary categories")
    f = c.field
    spaces = {}
    for (l, r), s in c.homs.items():
        spaces[r, l] = GradedSpace(tuple(f"{x}*" for x in s.labels), s.degrees, {})
    left: Dict = {}
    right: Dict = {}
    # u∘a with a in c(l, l2), u in c(l2, r): contributes to (a·φ)(u) = φ(u∘a)
    for (l, l2, r), t in c.comp.items():
        for (ui, ai), v in t.items():
            # (a·e_k*)(e_u) = coefficient of e_k in u∘a
            for k, x in v.items():
                tab = left.setdefault((r, l, l2), {})
                axpy(tab.setdefault((ai, k), {}), x, {ui: f.one}, f.p)
    # b∘u with u in c(l, r2), b in c(r2, r): (e_k*·b)(e_u) = coefficient of e_k in b∘u
    for (l, r2, r), t in c.comp.items():
        for (bi, ui), v in t.items():
            for k, x in v.items():
                tab = right.setdefault((r2, r, l), {})
                axpy(tab.setdefault((k, bi), {}), x, {ui: f.one}, f.p)
    return Bimodule(c, c, spaces, left, right, name=f"dual({c.name})")


def truncate_by_relation(m: Bimodule, rel: Iterable[Tuple[str, str]]) -> Bimodule:
    """Sub-bimodule supported on pairs (source, target) in ``rel``."""
    rel = set(rel)
    bad = check_censoring(m.left, rel)
    if m.right is not m.left:
        bad += check_censoring(m.right, rel)
    if bad:
        raise BimoduleError("relation is not a censoring relation: " + "; ".join(map(str, bad[:3])))
    spaces = {k: s for k, s in m.spaces.items() if k in rel}
    left = {}
    for (r, l, l2), t in m.left_act.items():
        if (r, l) not in rel:
            continue
        if (r, l2) not in rel:
            if t:
                raise BimoduleError(f"truncation is not stable under the left action at {(r, l, l2)}")
            continue
        left[r, l, l2] = t
    right = {}
    for (r2, r, l), t in m.right_act.items():
        if (r, l) not in rel:
            continue
        if (r2, l) not in rel:
            if t:
                raise BimoduleError(f"truncation is not stable under the right action at {(r2, r, l)}")
            continue
        right[r2, r, l] = t
    return Bimodule(m.left, m.right, spaces, left, right, name=f"{m.name}|R")


def restricted_diagonal(b: FinLinCat, objs: Iterable[str]) -> Bimodule:
    """X(B, A) = b(B, A) for A in ``objs``: a bimodule over
    ``(full_subcategory(b, objs), b)``."""
    sub = full_subcategory(b, objs)
    keep = set(sub.objects)
    spaces = {(r, l): s for (r, l), s in b.homs.items() if l in keep}
    left = {(r, l, l2): t for (r, l, l2), t in b.comp.items() if l in keep and l2 in keep}
    right = {(r2, r, l): t for (r2, r, l), t in b.comp.items() if l in keep}
    return Bimodule(sub, b, spaces, left, right, name=f"{b.name}(-,j)")


# ---------------------------------------------------------------- one-sided modules

OneSidedModule = Bimodule


def right_module(c: FinLinCat, spaces: Mapping[str, GradedSpace],
                 action: Mapping[Tuple[str, str], Mapping[Tuple[int, int], Vector]], name: str = "") -> Bimodule:
    """Right module over ``c``: ``action[(r2, r)][(x, b)] = x·b`` in ``spaces[r2]``
    for ``b`` in ``c(r2, r)``."""
    f = c.field
    g = ground_category(f)
    sp = {(r, GROUND): s for r, s in spaces.items()}
    ract = {(r2, r, GROUND): t for (r2, r), t in action.items()}
    lact = {(r, GROUND, GROUND): {(0, i): {i: f.one} for i in range(s.dim)} for r, s in spaces.items()}
    return Bimodule(g, c, sp, lact, ract, name=name)


def representable(c: FinLinCat, obj: str) -> Bimodule:
    """The right module c(-, obj)."""
    if obj not in c.objects:
        raise CategoryError(f"unknown object {obj!r}")
    spaces = {r: s for (r, l), s in c.homs.items() if l == obj}
    act = {(r2, r): t for (r2, r, l), t in c.comp.items() if l == obj}
    return right_module(c, spaces, act, name=f"h_{obj}")


def simple_module(c: FinLinCat, obj: str) -> Bimodule:
    """One-dimensional module at ``obj`` killed by every non-identity basis
    element; requires the identity of ``obj`` to be a basis vector and the
    remaining endomorphisms to span a two-sided ideal of radical type."""
    f = c.field
    ida = c.identities[obj]
    if len(ida) != 1:
        raise BimoduleError("simple_module needs the identity to be a basis element")
    (j, _), = ida.items()
    s = GradedSpace(("s",), (0,), {})
    act = {(obj, obj): {(0, j): {0: f.one}}}
    return right_module(c, {obj: s}, act, name=f"S_{obj}")


def _module_base(x: Bimodule) -> FinLinCat:
    if x.left.objects != (GROUND,):
        raise BimoduleError("expected a one-sided (right) module")
    return x.right


def _mspace(x: Bimodule, r: str) -> GradedSpace:
    return x.space(r, GROUND)


def _mact(x: Bimodule, r2: str, r: str, xv: Vector, b: Vector) -> Vector:
    return x.act_right(r2, r, GROUND, xv, b)


# ---------------------------------------------------------------- module homs


@dataclass
class ModuleHom:
    """Graded space of module maps with its differential.

    ``basis[n]`` lists degree-n module maps as vectors indexed by
    ``(object, source basis, target basis)``.
    """

    complex: ComplexRep
    basis: Dict[int, List[Vector]]

    def dims(self) -> Dict[int, int]:
        return {n: len(b) for n, b in self.basis.items()}

    def cohomology_dims(self) -> Dict[int, int]:
        return {n: b for n, (b, _) in betti_numbers(self.complex).items()}


def _linear_maps_index(x: Bimodule, y: Bimodule, n: int, objs) -> List[Tuple[str, int, int]]:
    out = []
    for r in objs:
        sx, sy = _mspace(x, r), _mspace(y, r)
        for i in range(sx.dim):
            for j in range(sy.dim):
                if sy.degrees[j] == sx.degrees[i] + n:
                    out.append((r, i, j))
    return out


def equivariant_maps(x: Bimodule, y: Bimodule, n: int) -> List[Vector]:
    """Basis of degree-n right-module maps x -> y."""
    c = _module_base(x)
    if _module_base(y) is not c and _module_base(y).structure_signature() != c.structure_signature():
        raise BimoduleError("modules live over different categories")
    f = c.field
    p = f.p
    unknowns = _linear_maps_index(x, y, n, c.objects)
    upos = {u: k for k, u in enumerate(unknowns)}
    cols: List[Vector] = [{} for _ in unknowns]
    row = {}

    def rid(key):
        if key not in row:
            row[key] = len(row)
        return row[key]

    # constraint h_{r2}(x·b) - h_r(x)·b = 0 for basis x in x(r), b in c(r2, r)
    for (r2, r), hb in ((k, c.hom(*k)) for k in product(c.objects, repeat=2)):
        if not hb.dim:
            continue
        sx = _mspace(x, r)
        for xi in range(sx.dim):
            for bi in range(hb.dim):
                xb = _mact(x, r2, r, {xi: f.one}, {bi: f.one})
                for i2, coef in xb.items():
                    for j in range(_mspace(y, r2).dim):
                        u = upos.get((r2, i2, j))
                        if u is not None:
                            axpy(cols[u], coef, {rid((r2, r, xi, bi, j)): f.one}, p)
                for j in range(_mspace(y, r).dim):
                    u = upos.get((r, xi, j))
                    if u is None:
                        continue
                    yb = _mact(y, r2, r, {j: f.one}, {bi: f.one})
                    for t, coef in yb.items():
                        axpy(cols[u], f.neg(coef), {rid((r2, r, xi, bi, t)): f.one}, p)
    m = Matrix(f, len(row), len(unknowns), cols)
    ker = m.kernel()
    return [{unknowns[k]: v for k, v in z.items()} for z in ker]


def module_hom(x: Bimodule, y: Bimodule) -> ModuleHom:
    """Hom of right modules with differential h -> d∘h - (-1)^n h∘d."""
    c = _module_base(x)
    f = check_same_field(x.field, y.field)
    p = f.p
    xl, xh = x.degree_range()
    yl, yh = y.degree_range()
    lo, hi = yl - xh, yh - xl
    basis = {n: equivariant_maps(x, y, n) for n in range(lo, hi + 1)}
    diffs = []
    for n in range(lo, hi):
        ech = Echelon(f, track=True)
        for k, v in enumerate(basis[n + 1]):
            ech.add(v, k)
        cols = []
        for h in basis[n]:
            dh: Vector = {}
            for (r, i, j), a in h.items():
                sy = _mspace(y, r)
                for t, b in sy.d.get(j, {}).items():
                    axpy(dh, f.mul(a, b), {(r, i, t): f.one}, p)
            # - (-1)^n h∘d_x
            s = f.neg(f.sign(n))
            for r in c.objects:
                sx = _mspace(x, r)
                for i0 in range(sx.dim):
                    for i, b in sx.d.get(i0, {}).items():
                        for (rr, ii, j), a in h.items():
                            if rr == r and ii == i:
                                axpy(dh, f.mul(s, f.mul(a, b)), {(r, i0, j): f.one}, p)
            res, coords = ech.reduce(dh)
            if res:
                raise BimoduleError("differential of a module map is not a module map")
            cols.append(coords)
        diffs.append(Matrix(f, len(basis[n + 1]), len(basis[n]), cols))
    cx = ComplexRep(f, lo, tuple(len(basis[n]) for n in range(lo, hi + 1)), tuple(diffs), True, True)
    return ModuleHom(cx.validate(), basis)


# ---------------------------------------------------------------- bar resolution


def _weak_chains(c: FinLinCat, length: int) -> List[Tuple[str, ...]]:
    """Object chains (A_0, ..., A_length) with every hom(A_i, A_{i+1}) nonzero."""
    chains = [(a,) for a in c.objects]
    for _ in range(length):
        chains = [ch + (b,) for ch in chains for b in c.objects if c.hom(ch[-1], b).dim]
    return chains


@dataclass
class BarResolution:
    """Bar resolution of a right module, with augmentation.

    ``terms[p]`` is the right module in degree ``-p``; ``diffs[p]`` maps
    term p to term p-1 (as pointwise matrices per object) and
    ``augmentation`` maps term 0 to the module.
    """

    module: Bimodule
    terms: List[Bimodule]
    gens: List[List[Tuple]]
    diffs: List[Dict[str, Matrix]]
    augmentation: Dict[str, Matrix]

    def pointwise_complex(self, obj: str) -> ComplexRep:
        """Augmented complex at ``obj``: degrees -len..0 for terms, +1 for x."""
        f = self.module.field
        n = len(self.terms)
        dims = [_mspace(self.terms[p], obj).dim for p in reversed(range(n))] + [_mspace(self.module, obj).dim]
        mats = [self.diffs[p][obj] for p in reversed(range(1, n))] + [self.augmentation[obj]]
        return ComplexRep(f, -n + 1, tuple(dims), tuple(mats), False, True)

    def exact_interior(self) -> bool:
        """Exactness of the augmented complex at every object, away from the
        truncated end."""
        for obj in self.module.right.objects:
            bn = betti_numbers(self.pointwise_complex(obj).validate())
            if any(b for n, (b, ex) in bn.items() if ex):
                return False
        return True


def bar_resolution(x: Bimodule, length: int, max_dim: int = DEFAULT_MAX_DIM) -> BarResolution:
    """Terms ⊕ x(A_p) ⊗ c(A_{p-1}, A_p) ⊗ ... ⊗ c(A_0, A_1) ⊗ c(-, A_0) for
    p = 0..length, with the standard alternating bar differential."""
    c = _module_base(x)
    if not (c.is_ordinary() and x.is_ordinary()):
        raise BimoduleError("bar resolutions are provided for ordinary categories and modules")
    if length < 0:
        raise ValueError("length must be nonnegative")
    f = c.field
    p_ = f.p
    terms, gens_all, diffs = [], [], []
    index_all = []
    for p in range(length + 1):
        # generators: (chain A_0..A_p, x basis at A_p, b_p, ..., b_1)
        gens = []
        for ch in _weak_chains(c, p):
            sx = _mspace(x, ch[-1])
            ranges = [range(sx.dim)] + [range(c.hom(ch[i - 1], ch[i]).dim) for i in range(p, 0, -1)]
            for t in product(*ranges):
                gens.append((ch, t))
        # term value at object C: generator ⊗ c(C, A_0)
        index = {}
        spaces = {}
        for C in c.objects:
            labels = []
            for g, (ch, t) in enumerate(gens):
                for u in range(c.hom(C, ch[0]).dim):
                    index[C, g, u] = len(labels)
                    labels.append(f"{g}:{u}")
            if labels:
                spaces[C] = GradedSpace(tuple(labels), (0,) * len(labels), {})
        total = sum(s.dim for s in spaces.values())
        if total > max_dim:
            raise ResourceLimitError(f"bar term {p} has dimension {total} > cap {max_dim}", where=f"bar term {p}", dim=total)
        action = {}
        for C2, C in product(c.objects, repeat=2):
            hb = c.hom(C2, C)
            if not hb.dim or C not in spaces:
                continue
            tab = {}
            for g, (ch, t) in enumerate(gens):
                A0 = ch[0]
                for u in range(c.hom(C, A0).dim):
                    for bi in range(hb.dim):
                        v = c.compose_basis(C2, C, A0, u, bi)
                        if v:
                            tab[index[C, g, u], bi] = {index[C2, g, w]: a for w, a in v.items()}
            action[C2, C] = tab
        terms.append(right_module(c, spaces, action, name=f"B{p}"))
        gens_all.append(gens)
        index_all.append(index)
    gpos = [{g: k for k, g in enumerate(gs)} for gs in gens_all]

    def boundary(p: int, C: str, g: int, u: int) -> Vector:
        """d of generator g of term p tensored with u in c(C, A_0), in term p-1."""
        ch, t = gens_all[p][g]
        out: Vector = {}
        xi, bs = t[0], list(t[1:])  # bs = [b_p, ..., b_1]
        # factors list: [x, b_p, ..., b_1, u]; face j merges factors j and j+1
        for j in range(p + 1):
            s = f.sign(j)
            if j == 0:
                # x·b_p
                xv = _mact(x, ch[p - 1], ch[p], {xi: f.one}, {bs[0]: f.one})
                for xi2, a in xv.items():
                    key = (ch[:p], (xi2,) + tuple(bs[1:]))
                    axpy(out, f.mul(s, a), {index_all[p - 1][C, gpos[p - 1][key], u]: f.one}, p_)
            elif j < p:
                # b_{p-j+1} ∘ b_{p-j}, objects ch[p-j-1] -> ch[p-j] -> ch[p-j+1]
                k = p - j  # chain index of the dropped object
                a_obj, m_obj, z_obj = ch[k - 1], ch[k], ch[k + 1]
                v = c.compose_basis(a_obj, m_obj, z_obj, bs[j - 1], bs[j])
                for w, a in v.items():
                    nb = bs[: j - 1] + [w] + bs[j + 1:]
                    key = (ch[:k] + ch[k + 1:], (xi,) + tuple(nb))
                    axpy(out, f.mul(s, a), {index_all[p - 1][C, gpos[p - 1][key], u]: f.one}, p_)
            else:
                # b_1 ∘ u
                v = c.compose_basis(C, ch[0], ch[1], bs[-1], u)
                for w, a in v.items():
                    key = (ch[1:], (xi,) + tuple(bs[:-1]))
                    axpy(out, f.mul(s, a), {index_all[p - 1][C, gpos[p - 1][key], w]: f.one}, p_)
        return out

    for p in range(1, length + 1):
        d = {}
        for C in c.objects:
            src = _mspace(terms[p], C).dim
            tgt = _mspace(terms[p - 1], C).dim
            cols = [None] * src
            for (CC, g, u), k in index_all[p].items():
                if CC == C:
                    cols[k] = boundary(p, C, g, u)
            d[C] = Matrix(f, tgt, src, cols)
        diffs.append(d)
    diffs.insert(0, {})
    aug = {}
    for C in c.objects:
        src = _mspace(terms[0], C).dim
        cols = [None] * src
        for (CC, g, u), k in index_all[0].items():
            if CC == C:
                ch, t = gens_all[0][g]
                cols[k] = _mact(x, C, ch[0], {t[0]: f.one}, {u: f.one})
        aug[C] = Matrix(f, _mspace(x, C).dim, src, cols)
    return BarResolution(x, terms, gens_all, diffs, aug)


def _map_coords(ech: Echelon, v: Vector) -> Vector:
    res, coords = ech.reduce(v)
    if res:
        raise BimoduleError("map is not a module map")
    return coords


def ext_window(x: Bimodule, y: Bimodule, n_max: int, max_dim: int = DEFAULT_MAX_DIM,
               resolution_length: Optional[int] = None) -> Dict[int, int]:
    """``{n: dim Ext^n(x, y)}`` for 0 <= n <= n_max, as the cohomology of
    Hom(bar_resolution(x), y)."""
    length = n_max + 1 if resolution_length is None else resolution_length
    if length < n_max + 1:
        raise ValueError("resolution too short for the requested window")
    c = _module_base(x)
    if not y.is_ordinary():
        raise BimoduleError("Ext is provided for ordinary modules")
    f = c.field
    p_ = f.p
    bar = bar_resolution(x, length, max_dim)
    homs = [equivariant_maps(bar.terms[p], y, 0) for p in range(length + 1)]
    echs = []
    for hs in homs:
        e = Echelon(f, track=True)
        for k, h in enumerate(hs):
            e.add(h, k)
        echs.append(e)
    diffs = []
    for p in range(length):
        cols = []
        d = bar.diffs[p + 1]
        for h in homs[p]:
            # (h∘d)_C(e_k) = h_C(d_C e_k)
            hd: Vector = {}
            for C in c.objects:
                m = d[C]
                for k, col in enumerate(m.cols):
                    for i, a in col.items():
                        for (r, ii, j), b in h.items():
                            if r == C and ii == i:
                                axpy(hd, f.mul(a, b), {(C, k, j): f.one}, p_)
            cols.append(_map_coords(echs[p + 1], hd))
        diffs.append(Matrix(f, len(homs[p + 1]), len(homs[p]), cols))
    cx = ComplexRep(f, 0, tuple(len(h) for h in homs), tuple(diffs), True, False).validate()
    bn = betti_numbers(cx)
    return {n: bn[n][0] for n in range(n_max + 1)}


def ext_window_reduced(x: Bimodule, y: Bimodule, n_max: int, max_dim: int = DEFAULT_MAX_DIM) -> Dict[int, int]:
    """Ext dims via the Yoneda-reduced cobar complex
    C^p = ⊕ Hom(x(A_p) ⊗ c(A_{p-1}, A_p) ⊗ ... ⊗ c(A_0, A_1), y(A_0))."""
    c = _module_base(x)
    f = c.field
    p_ = f.p
    bases = []
    for p in range(n_max + 2):
        idx = []
        for ch in _weak_chains(c, p):
            sx, sy = _mspace(x, ch[-1]), _mspace(y, ch[0])
            ranges = [range(sx.dim)] + [range(c.hom(ch[i - 1], ch[i]).dim) for i in range(p, 0, -1)]
            for t in product(*ranges):
                for j in range(sy.dim):
                    idx.append((ch, t, j))
        if len(idx) > max_dim:
            raise ResourceLimitError(f"cochain space {p} has dimension {len(idx)}", where=f"C^{p}", dim=len(idx))
        bases.append(idx)
    pos = [{k: i for i, k in enumerate(b)} for b in bases]
    diffs = []
    for p in range(n_max + 1):
        # column for each target basis element (tensor t in degree p+1), gather contributions
        cols: List[Vector] = [{} for _ in bases[p]]
        for ch in _weak_chains(c, p + 1):
            sx = _mspace(x, ch[-1])
            ranges = [range(sx.dim)] + [range(c.hom(ch[i - 1], ch[i]).dim) for i in range(p + 1, 0, -1)]
            for t in product(*ranges):
                xi, bs = t[0], list(t[1:])
                q = p + 1
                faces: List[Tuple[object, Tuple, Tuple, object]] = []
                # face 0: x·b_q
                xv = _mact(x, ch[q - 1], ch[q], {xi: f.one}, {bs[0]: f.one})
                for xi2, a in xv.items():
                    faces.append((a, ch[:q], (xi2,) + tuple(bs[1:]), None))
                for j_ in range(1, q):
                    k = q - j_
                    v = c.compose_basis(ch[k - 1], ch[k], ch[k + 1], bs[j_ - 1], bs[j_])
                    for w, a in v.items():
                        nb = bs[: j_ - 1] + [w] + bs[j_ + 1:]
                        faces.append((f.mul(f.sign(j_), a), ch[:k] + ch[k + 1:], (xi,) + tuple(nb), None))
                faces.append((f.sign(q), ch[1:], (xi,) + tuple(bs[:-1]), bs[-1]))
                for coef, ch2, t2, last in faces:
                    sy = _mspace(y, ch2[0])
                    for jj in range(sy.dim):
                        src = pos[p].get((ch2, t2, jj))
                        if src is None:
                            continue
                        if last is None:
                            targets = {jj: f.one}
                        else:
                            targets = _mact(y, ch[0], ch[1], {jj: f.one}, {last: f.one})
                        for jt, a in targets.items():
                            tgt = pos[p + 1][(ch, t, jt)]
                            axpy(cols[src], f.mul(coef, a), {tgt: f.one}, p_)
        diffs.append(Matrix(f, len(bases[p + 1]), len(bases[p]), cols))
    cx = ComplexRep(f, 0, tuple(len(b) for b in bases), tuple(diffs), True, False).validate()
    bn = betti_numbers(cx)
    return {n: bn[n][0] for n in range(n_max + 1)}
