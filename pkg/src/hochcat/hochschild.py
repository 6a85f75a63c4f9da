"""Hochschild cochain complexes of finite linear and DG categories.

Conventions (fixed once, used everywhere):

* A cochain of column ``p`` assigns to a chain of objects ``(A_0, ..., A_p)``
  and arguments ``a_1, ..., a_p`` with ``a_k`` in ``hom(A_{p-k}, A_{p-k+1})``
  a value ``φ(a_1, ..., a_p)`` in ``M(A_0, A_p)``.  Arguments are listed in
  composition order, so ``a_1 ∘ ... ∘ a_p`` is a morphism ``A_0 -> A_p``.
* The internal degree ``q`` of a cochain is the degree shift of ``φ``; the
  total degree is ``n = p + q``.
* Horizontal differential::

      δφ(a_1..a_{p+1}) = (-1)^{|a_1| q} a_1·φ(a_2..a_{p+1})
                         + Σ_{i=1}^{p} (-1)^i φ(.., a_i a_{i+1}, ..)
                         + (-1)^{p+1} φ(a_1..a_p)·a_{p+1}

* Vertical differential ``d_v φ = (-1)^p (d_M φ - (-1)^q Σ_i ±φ(.., d a_i, ..))``
  with the Koszul sign ``(-1)^{|a_1|+...+|a_{i-1}|}``.  The bracketed map is
  the differential of the graded Hom complex and commutes with δ; the
  column sign makes ``d_v`` and ``(-1)^p δ`` anticommute.
* Total differential ``D = d_v + (-1)^p δ``.  For ordinary categories this
  gives ``D f = -[μ, f]`` with μ the composition 2-cochain.
* Pre-Lie product ``(f∘g)(a..) = Σ_i (-1)^{i(n-1)} f(a_1..a_i, g(..), ..)``,
  bracket ``[f, g] = f∘g - (-1)^{(m-1)(n-1)} g∘f``, cup product
  ``(f⌣g)(a..) = (-1)^{mn} f(a_1..a_m)·g(a_{m+1}..)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Dict, Iterable, List, Optional, Tuple

from .bimodule import (
    DEFAULT_MAX_DIM,
    Bimodule,
    ResourceLimitError,
    diagonal_bimodule,
    ext_window,
    validate_bimodule,
)
from .linalg import (
    Cohomology,
    ComplexRep,
    Matrix,
    Vector,
    axpy,
    betti_numbers,
    check_same_field,
    span_rank,
    vscale,
)
from .lincat import ArrowCategorySpec, FinLinCat, full_subcategory

Chain = Tuple[str, ...]
Key = Tuple[Chain, Tuple[int, ...], int]


class HochschildError(ValueError):
    pass


# ---------------------------------------------------------------- spec


@dataclass
class HochschildSpec:
    """What to build: category, coefficients (diagonal if omitted), window
    ``[lo, n_max]`` and options."""

    category: FinLinCat
    coefficients: Optional[Bimodule] = None
    n_max: int = 3
    censoring_aware: bool = True
    normalized: bool = False
    max_dim: int = DEFAULT_MAX_DIM

    def bimodule(self) -> Bimodule:
        if self.coefficients is None:
            self.coefficients = diagonal_bimodule(self.category)
        return self.coefficients

    def check(self):
        if self.n_max < 1:
            raise HochschildError("n_max must be at least 1")
        m = self.bimodule()
        c = self.category
        for side in (m.left, m.right):
            if side is not c and side.structure_signature() != c.structure_signature():
                raise HochschildError("coefficient bimodule is not over the given category")
        if self.normalized:
            for a in c.objects:
                ida = c.identities.get(a, {})
                if ida and c.hom(a, a).degrees[min(ida)] != 0:
                    raise HochschildError("identity must have degree 0")


# ---------------------------------------------------------------- cochains


@dataclass
class Cochain:
    """Hochschild cochain: ``values[(chain, args)]`` is a vector in ``M(A_0, A_p)``."""

    degree: int
    values: Dict[Tuple[Chain, Tuple[int, ...]], Vector] = dc_field(default_factory=dict)

    def clean(self) -> "Cochain":
        self.values = {k: v for k, v in self.values.items() if v}
        return self

    def is_zero(self) -> bool:
        return not any(self.values.values())

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        a = {k: v for k, v in self.values.items() if v}
        b = {k: v for k, v in other.values.items() if v}
        return self.degree == other.degree and a == b

    def add(self, other: "Cochain", p, a=1) -> "Cochain":
        if other.degree != self.degree:
            raise HochschildError("adding cochains of different degrees")
        out = {k: dict(v) for k, v in self.values.items()}
        for k, v in other.values.items():
            w = out.setdefault(k, {})
            axpy(w, a, v, p)
        return Cochain(self.degree, out).clean()

    def scale(self, a, p) -> "Cochain":
        return Cochain(self.degree, {k: vscale(a, v, p) for k, v in self.values.items()}).clean()

    def restrict(self, objs) -> "Cochain":
        objs = set(objs)
        return Cochain(self.degree, {k: v for k, v in self.values.items() if set(k[0]) <= objs})


# ---------------------------------------------------------------- complex


def _arg_slots(ch: Chain) -> List[Tuple[str, str]]:
    p = len(ch) - 1
    return [(ch[p - k], ch[p - k + 1]) for k in range(1, p + 1)]


class HochschildComplex:
    """The assembled complex; ``basis[n]`` lists keys ``(chain, args, j)``."""

    def __init__(self, spec: HochschildSpec):
        spec.check()
        self.spec = spec
        self.category = c = spec.category
        self.module = m = spec.bimodule()
        self.field = f = c.field
        mlo, mhi = m.degree_range()
        self.lo = min(0, mlo)
        self.n_max = spec.n_max
        self.max_column = spec.n_max + 1 - mlo
        rel = c.effective_relation()
        self.relation = rel
        self.aware = spec.censoring_aware
        # normalized complexes drop one identity basis index per object
        self.drop: Dict[str, Optional[int]] = {}
        for a in c.objects:
            ida = c.identities.get(a, {})
            self.drop[a] = min(ida) if (spec.normalized and ida) else None
        self.blocks: Dict[int, int] = {}
        self.basis: Dict[int, List[Key]] = {n: [] for n in range(self.lo, self.n_max + 1)}
        for p in range(0, self.max_column + 1):
            chains = self._chains(p)
            self.blocks[p] = len(chains)
            for ch in chains:
                sp_m = m.space(ch[0], ch[-1])
                if not sp_m.dim:
                    continue
                if self.aware and (ch[0], ch[-1]) not in rel:
                    continue
                slots = [self._slot_basis(s) for s in _arg_slots(ch)]
                for t in product(*slots):
                    adeg = sum(c.hom(*s).degrees[i] for s, i in zip(_arg_slots(ch), t))
                    for j in range(sp_m.dim):
                        n = p + sp_m.degrees[j] - adeg
                        if self.lo <= n <= self.n_max:
                            self.basis[n].append((ch, t, j))
        for n, b in self.basis.items():
            if len(b) > spec.max_dim:
                raise ResourceLimitError(
                    f"Hochschild cochain space in degree {n} has dimension {len(b)} > cap {spec.max_dim}",
                    where=f"C^{n}", dim=len(b))
        self.index = {n: {k: i for i, k in enumerate(b)} for n, b in self.basis.items()}
        diffs = tuple(self._differential(n) for n in range(self.lo, self.n_max))
        dims = tuple(len(self.basis[n]) for n in range(self.lo, self.n_max + 1))
        self.complex = ComplexRep(f, self.lo, dims, diffs, complete_below=True, complete_above=False)
        bad = self.complex.check_d_squared()
        if bad:
            raise HochschildError(f"internal error: D∘D != 0 in degrees {bad}")

    def __repr__(self):
        return f"HochschildComplex(dims={self.complex.dims}, lo={self.lo})"

    def _chains(self, p: int) -> List[Chain]:
        c = self.category
        if not self.aware:
            return list(product(c.objects, repeat=p + 1))
        chains = [(a,) for a in c.objects]
        for _ in range(p):
            chains = [ch + (b,) for ch in chains for b in c.objects if (ch[-1], b) in self.relation]
        return chains

    def _slot_basis(self, slot: Tuple[str, str]) -> List[int]:
        sp = self.category.hom(*slot)
        drop = self.drop.get(slot[0]) if slot[0] == slot[1] else None
        return [i for i in range(sp.dim) if i != drop]

    def _proj(self, slot: Tuple[str, str], v: Vector) -> Vector:
        """Coordinates of an argument vector in the (normalized) slot basis."""
        if slot[0] != slot[1]:
            return v
        j = self.drop.get(slot[0])
        if j is None or j not in v:
            return v
        f = self.field
        ida = self.category.identities[slot[0]]
        out = dict(v)
        vj = out.pop(j)
        ratio = f.mul(vj, f.inv(ida[j]))
        for i, x in ida.items():
            if i != j:
                axpy(out, f.neg(ratio), {i: x}, f.p)
        return out

    def _differential(self, n: int) -> Matrix:
        c, m, f = self.category, self.module, self.field
        p_ = f.p
        src_idx, tgt_idx = self.index[n], self.index[n + 1]
        cols: List[Vector] = [{} for _ in self.basis[n]]
        seen = set()
        for (ch, t, _j) in self.basis[n + 1]:
            if (ch, t) in seen:
                continue
            seen.add((ch, t))
            pt = len(ch) - 1
            slots = _arg_slots(ch)
            adeg = [c.hom(*s).degrees[i] for s, i in zip(slots, t)]
            contribs = []  # (coef, src_chain, src_args, kind, payload)
            # horizontal part from column pt-1
            if pt >= 1:
                p = pt - 1
                sgn = f.sign(p)
                # left action by a_1
                contribs.append((sgn, ch[:-1], t[1:], "left", (t[0], adeg[0], sum(adeg[1:]))))
                # inner merges
                for i in range(1, pt):
                    k = pt - i  # dropped chain position
                    w = c.compose_basis(ch[k - 1], ch[k], ch[k + 1], t[i - 1], t[i])
                    w = self._proj((ch[k - 1], ch[k + 1]), w)
                    for wi, x in w.items():
                        nt = t[: i - 1] + (wi,) + t[i + 1:]
                        contribs.append((f.mul(f.mul(sgn, f.sign(i)), x), ch[:k] + ch[k + 1:], nt, "id", None))
                # right action by a_{p+1}
                contribs.append((f.mul(sgn, f.sign(p + 1)), ch[1:], t[:-1], "right", t[-1]))
            # vertical part from column pt
            vs = f.sign(pt)
            contribs.append((vs, ch, t, "dM", None))
            for i in range(pt):
                sp = c.hom(*slots[i])
                da = sp.d.get(t[i])
                if not da:
                    continue
                da = self._proj(slots[i], da)
                ks = f.mul(vs, f.sign(sum(adeg[:i])))
                for wi, x in da.items():
                    nt = t[:i] + (wi,) + t[i + 1:]
                    contribs.append((f.mul(ks, x), ch, nt, "dA", None))
            for coef, sch, st, kind, payload in contribs:
                sp_src = m.space(sch[0], sch[-1])
                for j in range(sp_src.dim):
                    col = src_idx.get((sch, st, j))
                    if col is None:
                        continue
                    ej = {j: f.one}
                    if kind == "id":
                        img = ej
                        cf = coef
                    elif kind == "left":
                        a1, d1, drest = payload
                        q = n - (len(sch) - 1)
                        img = m.act_left(sch[0], ch[-2], ch[-1], {a1: f.one}, ej)
                        cf = f.mul(coef, f.sign(d1 * q))
                    elif kind == "right":
                        img = m.act_right(ch[0], ch[1], ch[-1], ej, {payload: f.one})
                        cf = coef
                    elif kind == "dM":
                        img = sp_src.d.get(j, {})
                        cf = coef
                    else:  # dA: - (-1)^q φ(.., d a_i, ..)
                        q = n - (len(sch) - 1)
                        img = ej
                        cf = f.neg(f.mul(coef, f.sign(q)))
                    for jt, x in img.items():
                        row = tgt_idx.get((ch, t, jt))
                        if row is not None:
                            axpy(cols[col], f.mul(cf, x), {row: f.one}, p_)
        return Matrix(f, len(self.basis[n + 1]), len(self.basis[n]), cols)

    # cochain conversion (unnormalized complexes)
    def to_cochain(self, n: int, v: Vector) -> Cochain:
        if self.spec.normalized:
            raise HochschildError("cochain conversion needs the unnormalized complex")
        vals: Dict = {}
        for i, x in v.items():
            ch, t, j = self.basis[n][i]
            vals.setdefault((ch, t), {})[j] = x
        return Cochain(n, vals)

    def to_vector(self, co: Cochain) -> Vector:
        idx = self.index[co.degree]
        out: Vector = {}
        for (ch, t), val in co.values.items():
            for j, x in val.items():
                k = idx.get((ch, t, j))
                if k is None:
                    if x:
                        raise HochschildError(f"cochain entry {(ch, t, j)} outside the complex basis")
                    continue
                out[k] = x
        return out

    def differential(self, co: Cochain) -> Cochain:
        if co.degree >= self.n_max:
            raise HochschildError("differential needs degree below the window top")
        return self.to_cochain(co.degree + 1, self.complex.d(co.degree).apply(self.to_vector(co)))


def hochschild_complex(spec: HochschildSpec) -> HochschildComplex:
    return HochschildComplex(spec)


@dataclass
class HHResult:
    """Betti numbers per degree; ``exact[n]`` is False at the window top,
    where the value is only an upper bound."""

    dims: Dict[int, int]
    exact: Dict[int, bool]
    representatives: Dict[int, List[Vector]]
    complex: HochschildComplex

    def exact_dims(self) -> Dict[int, int]:
        return {n: d for n, d in self.dims.items() if self.exact[n]}

    def table(self) -> List[dict]:
        return [{"degree": n, "dim": self.dims[n], "edge_caveat": not self.exact[n]} for n in sorted(self.dims)]

    def cohomology(self, n: int) -> Cohomology:
        return Cohomology(self.complex.complex, n)


def hochschild_cohomology(spec: HochschildSpec, representatives: bool = True) -> HHResult:
    hc = HochschildComplex(spec)
    cx = hc.complex
    if representatives:
        dims, exact, reps = {}, {}, {}
        for n in range(cx.lo, cx.hi + 1):
            h = Cohomology(cx, n)
            dims[n], exact[n], reps[n] = h.betti, h.exact, h.reps
    else:
        bn = betti_numbers(cx)
        dims = {n: b for n, (b, _) in bn.items()}
        exact = {n: e for n, (_, e) in bn.items()}
        reps = {}
    return HHResult(dims, exact, reps, hc)


def hh_dims(c: FinLinCat, top: int, coefficients: Optional[Bimodule] = None, normalized: bool = False,
            censoring_aware: bool = True, max_dim: int = DEFAULT_MAX_DIM) -> Dict[int, int]:
    """Exact HH dims in degrees ``lo..top``."""
    spec = HochschildSpec(c, coefficients, top + 1, censoring_aware, normalized, max_dim)
    r = hochschild_cohomology(spec, representatives=False)
    return {n: d for n, d in r.dims.items() if n <= top}


# ---------------------------------------------------------------- operations


def _require_ordinary(c: FinLinCat):
    if not c.is_ordinary():
        raise HochschildError("cup product and brackets are provided for ordinary categories only")


def composition_cochain(c: FinLinCat) -> Cochain:
    """μ(a_1, a_2) = a_1 ∘ a_2."""
    vals = {}
    for (a, b, cc), t in c.comp.items():
        for (gi, fi), v in t.items():
            vals[(a, b, cc), (gi, fi)] = dict(v)
    return Cochain(2, vals)


def unit_cochain(c: FinLinCat) -> Cochain:
    return Cochain(0, {((a,), ()): dict(v) for a, v in c.identities.items() if v})


def cup_product(c: FinLinCat, f: Cochain, g: Cochain) -> Cochain:
    _require_ordinary(c)
    fld = c.field
    m, n = f.degree, g.degree
    s = fld.sign(m * n)
    out: Dict = {}
    for (chF, tF), fv in f.values.items():
        for (chG, tG), gv in g.values.items():
            if chF[0] != chG[-1]:
                continue
            val = c.compose(chG[0], chG[-1], chF[-1], fv, gv)
            if val:
                axpy(out.setdefault((chG + chF[1:], tF + tG), {}), s, val, fld.p)
    return Cochain(m + n, out).clean()


def circle(c: FinLinCat, f: Cochain, g: Cochain) -> Cochain:
    """Pre-Lie product f∘g."""
    _require_ordinary(c)
    fld = c.field
    m, n = f.degree, g.degree
    out: Dict = {}
    if m == 0:
        return Cochain(m + n - 1, {})
    for (chF, tF), fv in f.values.items():
        for i in range(m):
            src, tgt = chF[m - i - 1], chF[m - i]
            s = fld.sign(i * (n - 1))
            for (chG, tG), gv in g.values.items():
                if chG[0] != src or chG[-1] != tgt:
                    continue
                x = gv.get(tF[i])
                if not x:
                    continue
                ch = chF[: m - i - 1] + chG + chF[m - i + 1:]
                t = tF[:i] + tG + tF[i + 1:]
                axpy(out.setdefault((ch, t), {}), fld.mul(s, x), fv, fld.p)
    return Cochain(m + n - 1, out).clean()


def circle_square(c: FinLinCat, f: Cochain) -> Cochain:
    return circle(c, f, f)


def gerstenhaber_bracket(c: FinLinCat, f: Cochain, g: Cochain) -> Cochain:
    m, n = f.degree, g.degree
    fg = circle(c, f, g)
    gf = circle(c, g, f)
    return fg.add(gf, c.field.p, c.field.neg(c.field.sign((m - 1) * (n - 1))))


def cochain_differential(c: FinLinCat, f: Cochain) -> Cochain:
    """D f = -[μ, f] computed through the bracket (ordinary categories)."""
    br = gerstenhaber_bracket(c, composition_cochain(c), f)
    return br.scale(c.field.neg(c.field.one), c.field.p)


# ---------------------------------------------------------------- center


def center_map(hc: HochschildComplex, n: int, v: Vector) -> Dict[str, Vector]:
    """σ: the column-0 components ``(φ_A)_A`` of a degree-n cochain vector."""
    out: Dict[str, Vector] = {}
    for i, x in v.items():
        ch, t, j = hc.basis[n][i]
        if len(ch) == 1:
            out.setdefault(ch[0], {})[j] = x
    return {a: w for a, w in out.items() if w}


def graded_center(c: FinLinCat, degree: int = 0) -> List[Dict[str, Vector]]:
    """Basis of tuples ``z_A`` in ``c(A, A)`` of the given degree with
    ``f∘z_A = (-1)^{|f| degree} z_B∘f`` for every basis ``f: A -> B``."""
    fld = c.field
    unknowns = [(a, i) for a in c.objects for i in c.hom(a, a).of_degree(degree)]
    upos = {u: k for k, u in enumerate(unknowns)}
    cols: List[Vector] = [{} for _ in unknowns]
    rows: Dict = {}

    def rid(k):
        return rows.setdefault(k, len(rows))

    for (a, b), sp in c.homs.items():
        for fi in range(sp.dim):
            s = fld.sign(sp.degrees[fi] * degree)
            for i in c.hom(a, a).of_degree(degree):
                v = c.compose_basis(a, a, b, fi, i)
                for t, x in v.items():
                    axpy(cols[upos[a, i]], x, {rid((a, b, fi, t)): fld.one}, fld.p)
            for i in c.hom(b, b).of_degree(degree):
                v = c.compose_basis(a, b, b, i, fi)
                for t, x in v.items():
                    axpy(cols[upos[b, i]], fld.neg(fld.mul(s, x)), {rid((a, b, fi, t)): fld.one}, fld.p)
    ker = Matrix(fld, len(rows), len(unknowns), cols).kernel()
    out = []
    for z in ker:
        tup: Dict[str, Vector] = {}
        for k, x in z.items():
            a, i = unknowns[k]
            tup.setdefault(a, {})[i] = x
        out.append(tup)
    return out


def is_central(c: FinLinCat, z: Dict[str, Vector], degree: int) -> bool:
    fld = c.field
    for (a, b), sp in c.homs.items():
        for fi in range(sp.dim):
            e = {fi: fld.one}
            lhs = c.compose(a, a, b, e, z.get(a, {}))
            rhs = vscale(fld.sign(sp.degrees[fi] * degree), c.compose(a, b, b, z.get(b, {}), e), fld.p)
            if lhs != rhs:
                return False
    return True


def tuple_product(c: FinLinCat, z: Dict[str, Vector], w: Dict[str, Vector]) -> Dict[str, Vector]:
    out = {a: c.compose(a, a, a, z.get(a, {}), w.get(a, {})) for a in c.objects}
    return {a: v for a, v in out.items() if v}


# ---------------------------------------------------------------- restriction


def restrict_bimodule(m: Bimodule, objs) -> Bimodule:
    objs = set(objs)
    a = full_subcategory(m.left, objs)
    b = a if m.right is m.left else full_subcategory(m.right, objs)
    spaces = {k: s for k, s in m.spaces.items() if set(k) <= objs}
    la = {k: t for k, t in m.left_act.items() if set(k) <= objs}
    ra = {k: t for k, t in m.right_act.items() if set(k) <= objs}
    return Bimodule(a, b, spaces, la, ra, name=f"{m.name}|sub")


@dataclass
class RestrictionMap:
    source: HochschildComplex
    target: HochschildComplex
    matrices: Dict[int, Matrix]

    def is_chain_map(self) -> bool:
        s, t = self.source.complex, self.target.complex
        for n in range(max(s.lo, t.lo), min(s.hi, t.hi)):
            if not (t.d(n) @ self.matrices[n] - self.matrices[n + 1] @ s.d(n)).is_zero():
                return False
        return True

    def induced(self, n: int) -> Matrix:
        hs, ht = Cohomology(self.source.complex, n), Cohomology(self.target.complex, n)
        cols = [ht.classify(self.matrices[n].apply(r)) for r in hs.reps]
        return Matrix(self.source.field, ht.betti, hs.betti, cols)

    def quasi_iso_report(self, degrees: Iterable[int]) -> Dict[int, dict]:
        out = {}
        for n in degrees:
            m = self.induced(n)
            out[n] = {"source": m.ncols, "target": m.nrows, "rank": m.rank(),
                      "iso": m.rank() == m.ncols == m.nrows}
        return out


def restriction_map(c: FinLinCat, objs, spec: Optional[HochschildSpec] = None) -> RestrictionMap:
    """Chain map C(c, M) -> C(c|objs, M|objs) keeping chains inside ``objs``."""
    objs = sorted(set(objs))
    if not objs:
        raise HochschildError("restriction to an empty set of objects")
    spec = spec or HochschildSpec(c)
    if spec.category is not c:
        raise HochschildError("spec is for a different category")
    src = HochschildComplex(spec)
    sub = full_subcategory(c, objs)
    tspec = HochschildSpec(sub, restrict_bimodule(spec.bimodule(), objs), spec.n_max,
                           spec.censoring_aware, spec.normalized, spec.max_dim)
    tgt = HochschildComplex(tspec)
    mats = {}
    for n in range(src.lo, src.n_max + 1):
        cols = []
        tidx = tgt.index.get(n, {})
        for key in src.basis[n]:
            k = tidx.get(key)
            cols.append({k: c.field.one} if k is not None else {})
        mats[n] = Matrix(c.field, len(tgt.basis.get(n, [])), len(src.basis[n]), cols)
    return RestrictionMap(src, tgt, mats)


# ---------------------------------------------------------------- λ / ω


def lambda_omega_check(s: ArrowCategorySpec, n_max: int = 2, max_dim: int = DEFAULT_MAX_DIM) -> dict:
    """Per-pair verdicts for λ: a(A, A') -> RHom_b(X(-,A), X(-,A')) and
    ω: b(B, B') -> RHom_{a^op}(X(B',-), X(B,-)), up to degree ``n_max``."""
    X = s.bimodule
    bad = validate_bimodule(X)
    if bad:
        raise HochschildError("bimodule axioms fail: " + "; ".join(map(str, bad[:3])))
    A, B = s.left, s.right
    fld = check_same_field(A.field, B.field)
    report = {"lambda": [], "omega": []}
    for (u, v) in sorted(A.effective_relation()):
        x, y = X.column(u), X.column(v)
        ext = ext_window(x, y, n_max, max_dim)
        maps = []
        for ai in range(A.hom(u, v).dim):
            h: Vector = {}
            for r in B.objects:
                for i in range(X.space(r, u).dim):
                    for j, c in X.act_left(r, u, v, {ai: fld.one}, {i: fld.one}).items():
                        h[r, i, j] = c
            maps.append(h)
        rk = span_rank(fld, maps)
        dim = A.hom(u, v).dim
        ok = rk == dim == ext[0] and all(ext[n] == 0 for n in range(1, n_max + 1))
        report["lambda"].append({"pair": [u, v], "hom_dim": dim, "image_rank": rk,
                                 "ext": [ext[n] for n in range(n_max + 1)], "quasi_iso": ok})
    for (u, v) in sorted(B.effective_relation()):
        x, y = X.row(v), X.row(u)
        ext = ext_window(x, y, n_max, max_dim)
        maps = []
        for bi in range(B.hom(u, v).dim):
            h = {}
            for l in A.objects:
                for i in range(X.space(v, l).dim):
                    for j, c in X.act_right(u, v, l, {i: fld.one}, {bi: fld.one}).items():
                        h[l, i, j] = c
            maps.append(h)
        rk = span_rank(fld, maps)
        dim = B.hom(u, v).dim
        ok = rk == dim == ext[0] and all(ext[n] == 0 for n in range(1, n_max + 1))
        report["omega"].append({"pair": [u, v], "hom_dim": dim, "image_rank": rk,
                                "ext": [ext[n] for n in range(n_max + 1)], "quasi_iso": ok})
    report["lambda_ok"] = all(r["quasi_iso"] for r in report["lambda"])
    report["omega_ok"] = all(r["quasi_iso"] for r in report["omega"])
    report["failures"] = [("lambda", tuple(r["pair"])) for r in report["lambda"] if not r["quasi_iso"]] + \
                         [("omega", tuple(r["pair"])) for r in report["omega"] if not r["quasi_iso"]]
    return report


# ---------------------------------------------------------------- comparison


@dataclass
class Comparison:
    degrees: List[int]
    left: Dict[int, int]
    right: Dict[int, int]
    caveats: Dict[int, bool]
    equal: bool

    def rows(self) -> List[dict]:
        return [{"degree": n, "left": self.left.get(n), "right": self.right.get(n),
                 "edge_caveat": self.caveats[n]} for n in self.degrees]

    def text(self, names=("left", "right")) -> str:
        w = max(len(names[0]), len(names[1]), 6)
        lines = [f"{'degree':>6} {names[0]:>{w}} {names[1]:>{w}}"]
        for r in self.rows():
            mark = "  (edge: upper bound)" if r["edge_caveat"] else ""
            lines.append(f"{r['degree']:>6} {r['left']!s:>{w}} {r['right']!s:>{w}}{mark}")
        lines.append("verdict: " + ("equal" if self.equal else "different"))
        return "\n".join(lines)


def compare_dims(a: HochschildSpec, b: HochschildSpec) -> Comparison:
    """Side-by-side Betti tables; the verdict uses exact degrees only."""
    check_same_field(a.category.field, b.category.field)
    ra = hochschild_cohomology(a, representatives=False)
    rb = hochschild_cohomology(b, representatives=False)
    degrees = sorted(set(ra.dims) | set(rb.dims))
    cav = {n: not (ra.exact.get(n, True) and rb.exact.get(n, True)) for n in degrees}
    equal = all(ra.dims.get(n, 0) == rb.dims.get(n, 0) for n in degrees if not cav[n])
    return Comparison(degrees, ra.dims, rb.dims, cav, equal)
