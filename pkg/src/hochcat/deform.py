"""First-order deformations of ordinary finite linear categories.

A deformation replaces composition μ by ``μ + tφ`` over ``k[t]/(t²)``;
extending to ``k[t]/(t³)`` means finding ψ with ``μ + tφ + t²ψ``
associative modulo ``t³``.  Everything here is checked twice: once by
expanding associators straight from multiplication tables, once through
the Hochschild complex.  With ``D f = -[μ, f]`` the second-order equation
``[μ, ψ] + φ∘φ = 0`` reads ``Dψ = φ∘φ``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .hochschild import (
    Cochain,
    HochschildComplex,
    HochschildSpec,
    circle_square,
)
from .linalg import Cohomology, Matrix, Vector, axpy, span_rank
from .lincat import FinLinCat

Slot = Tuple[Tuple[str, ...], Tuple[int, ...]]


class DeformationError(ValueError):
    pass


def _composable(c: FinLinCat, length: int) -> List[Tuple[str, ...]]:
    """Object chains whose consecutive homs and total hom are all nonzero."""
    out = [(a,) for a in c.objects]
    for _ in range(length):
        out = [ch + (b,) for ch in out for b in c.objects if c.hom(ch[-1], b).dim]
    return [ch for ch in out if c.hom(ch[0], ch[-1]).dim]


def _args(c: FinLinCat, ch: Tuple[str, ...]):
    p = len(ch) - 1
    dims = [c.hom(ch[p - k], ch[p - k + 1]).dim for k in range(1, p + 1)]
    out = [()]
    for d in dims:
        out = [t + (i,) for t in out for i in range(d)]
    return out


@dataclass
class FirstOrderDeformation:
    category: FinLinCat
    phi: Cochain

    def __post_init__(self):
        c = self.category
        if not c.is_ordinary():
            raise DeformationError("deformations are provided for ordinary categories")
        if self.phi.degree != 2:
            raise DeformationError("the deforming cochain must have degree 2")
        for (ch, t), v in self.phi.values.items():
            if not v:
                continue
            if len(ch) != 3 or len(t) != 2:
                raise DeformationError(f"entry {ch}{t} is not a 2-cochain entry")
            a, b, cc = ch
            if not (c.hom(b, cc).dim and c.hom(a, b).dim and c.hom(a, cc).dim):
                raise DeformationError(f"entry on {ch} lies outside the censoring relation")
            if t[0] >= c.hom(b, cc).dim or t[1] >= c.hom(a, b).dim or max(v) >= c.hom(a, cc).dim:
                raise DeformationError(f"entry {ch}{t} indexes past a hom basis")


def _eval2(c: FinLinCat, m: Optional[Cochain], a, b, cc, g: Vector, f: Vector) -> Vector:
    """Bilinear extension of a 2-cochain (composition when ``m`` is None)."""
    if m is None:
        return c.compose(a, b, cc, g, f)
    fld = c.field
    out: Vector = {}
    for gi, x in g.items():
        for fi, y in f.items():
            v = m.values.get(((a, b, cc), (gi, fi)))
            if v:
                axpy(out, fld.mul(x, y), v, fld.p)
    return out


def associator_coefficients(c: FinLinCat, terms: Sequence[Cochain], order: int) -> Dict[int, Cochain]:
    """Coefficients of ``t^N`` (``N <= order``) in the associator of
    ``μ + t·terms[0] + t²·terms[1] + ...``, expanded on basis triples."""
    fld = c.field
    series: List[Optional[Cochain]] = [None] + list(terms)
    out = {N: Cochain(3, {}) for N in range(order + 1)}
    for ch in _composable(c, 3):
        a0, a1, a2, a3 = ch
        if not (c.hom(a0, a2).dim and c.hom(a1, a3).dim):
            continue
        for t in _args(c, ch):
            h, g, f = ({t[0]: fld.one}, {t[1]: fld.one}, {t[2]: fld.one})
            for N in range(order + 1):
                acc: Vector = {}
                for i in range(min(N, len(series) - 1) + 1):
                    j = N - i
                    if j >= len(series):
                        continue
                    hg = _eval2(c, series[j], a1, a2, a3, h, g)
                    gf = _eval2(c, series[j], a0, a1, a2, g, f)
                    axpy(acc, fld.one, _eval2(c, series[i], a0, a1, a3, hg, f), fld.p)
                    axpy(acc, fld.neg(fld.one), _eval2(c, series[i], a0, a2, a3, h, gf), fld.p)
                if acc:
                    out[N].values[ch, t] = acc
    return out


@dataclass
class FirstOrderVerdict:
    associative: bool
    cocycle: bool
    witness: Optional[Tuple[Tuple[str, ...], Tuple[int, ...], Vector]]

    @property
    def consistent(self) -> bool:
        return self.associative == self.cocycle


def _complex(c: FinLinCat, top: int) -> HochschildComplex:
    return HochschildComplex(HochschildSpec(c, n_max=top))


def first_order_check(d: FirstOrderDeformation, hc: Optional[HochschildComplex] = None) -> FirstOrderVerdict:
    """Associativity of ``μ + tφ`` modulo ``t²`` by direct expansion, next to
    the cocycle test ``Dφ = 0`` in the Hochschild complex."""
    c = d.category
    defect = associator_coefficients(c, [d.phi], 1)[1]
    witness = None
    for key in sorted(defect.values):
        if defect.values[key]:
            witness = (key[0], key[1], defect.values[key])
            break
    hc = hc or _complex(c, 3)
    cocycle = hc.differential(d.phi).is_zero()
    return FirstOrderVerdict(witness is None, cocycle, witness)


@dataclass
class ObstructionVerdict:
    status: str  # "unobstructed", "obstructed" or "not a deformation"
    obstruction: Cochain
    closed: bool
    psi: Optional[Cochain]
    extension_verified: bool
    defect_matches_square: bool


def obstruction_square(d: FirstOrderDeformation, hc: Optional[HochschildComplex] = None) -> ObstructionVerdict:
    """o = φ∘φ; checks Do = 0 and solves Dψ = o.  A witness ψ is confirmed
    by expanding the associator of ``μ + tφ + t²ψ`` through order two."""
    c = d.category
    hc = hc or _complex(c, 4)
    if hc.n_max < 4:
        raise DeformationError("obstruction calculus needs a window through degree 4")
    o = circle_square(c, d.phi)
    direct_t2 = associator_coefficients(c, [d.phi], 2)[2]
    matches = direct_t2 == o
    if not hc.differential(d.phi).is_zero():
        return ObstructionVerdict("not a deformation", o, False, None, False, matches)
    closed = hc.differential(o).is_zero()
    h3 = Cohomology(hc.complex, 3)
    pre = h3.boundary_preimage(hc.to_vector(o))
    if pre is None:
        return ObstructionVerdict("obstructed", o, closed, None, False, matches)
    psi = hc.to_cochain(2, pre)
    coeffs = associator_coefficients(c, [d.phi, psi], 2)
    ok = all(coeffs[N].is_zero() for N in range(3))
    return ObstructionVerdict("unobstructed", o, closed, psi, ok, matches)


@dataclass
class EquivalenceVerdict:
    equivalent: bool
    psi: Optional[Cochain]
    gauge_verified: bool


def gauge_variation(c: FinLinCat, psi: Cochain) -> Cochain:
    """``(g, f) ↦ ψ(g∘f) - ψ(g)∘f - g∘ψ(f)``, from multiplication tables."""
    fld = c.field
    out: Dict = {}
    for ch in _composable(c, 2):
        a, b, cc = ch
        for t in _args(c, ch):
            g, f = {t[0]: fld.one}, {t[1]: fld.one}
            acc: Vector = {}
            gf = c.compose(a, b, cc, g, f)
            for k, x in gf.items():
                v = psi.values.get(((a, cc), (k,)))
                if v:
                    axpy(acc, x, v, fld.p)
            pg = psi.values.get(((b, cc), (t[0],)), {})
            pf = psi.values.get(((a, b), (t[1],)), {})
            if pg:
                axpy(acc, fld.neg(fld.one), c.compose(a, b, cc, pg, f), fld.p)
            if pf:
                axpy(acc, fld.neg(fld.one), c.compose(a, b, cc, g, pf), fld.p)
            if acc:
                out[ch, t] = acc
    return Cochain(2, out)


def deformation_equivalence(d1: FirstOrderDeformation, d2: FirstOrderDeformation,
                            hc: Optional[HochschildComplex] = None) -> EquivalenceVerdict:
    """Solve Dψ = φ1 - φ2; then ``T = id - tψ`` satisfies
    ``T(g ∘_1 f) = T(g) ∘_2 T(f)`` modulo ``t²``, checked directly."""
    c = d1.category
    if d2.category is not c and d2.category.structure_signature() != c.structure_signature():
        raise DeformationError("deformations of different categories")
    hc = hc or _complex(c, 3)
    diff = d1.phi.add(d2.phi, c.field.p, c.field.neg(c.field.one))
    pre = Cohomology(hc.complex, 2).boundary_preimage(hc.to_vector(diff))
    if pre is None:
        return EquivalenceVerdict(False, None, False)
    psi = hc.to_cochain(1, pre)
    return EquivalenceVerdict(True, psi, gauge_variation(c, psi) == diff)


@dataclass
class DeformationSpace:
    cocycle_dim: int
    coboundary_dim: int
    betti2: int
    representatives: List[Cochain]

    @property
    def classes(self) -> int:
        return self.cocycle_dim - self.coboundary_dim


def _slots2(c: FinLinCat) -> List[Tuple[Slot, int]]:
    return [((ch, t), j) for ch in _composable(c, 2) for t in _args(c, ch) for j in range(c.hom(ch[0], ch[-1]).dim)]


def _to_slot_vector(co: Cochain, pos: Dict) -> Vector:
    out: Vector = {}
    for key, v in co.values.items():
        for j, x in v.items():
            if x:
                out[pos[key, j]] = x
    return out


def deformation_space(c: FinLinCat, hc: Optional[HochschildComplex] = None) -> DeformationSpace:
    """First-order deformations modulo gauge, counted from multiplication
    tables alone, beside Betti₂ and HH² representatives from the complex."""
    fld = c.field
    slots = _slots2(c)
    pos = {s: i for i, s in enumerate(slots)}
    eq_rows: Dict = {}
    cols = []
    for (key, j) in slots:
        e = Cochain(2, {key: {j: fld.one}})
        t1 = associator_coefficients(c, [e], 1)[1]
        col: Vector = {}
        for k3, v in t1.values.items():
            for jj, x in v.items():
                r = eq_rows.setdefault((k3, jj), len(eq_rows))
                col[r] = x
        cols.append(col)
    z = len(slots) - Matrix(fld, len(eq_rows), len(slots), cols).rank()
    variations = []
    for ch in _composable(c, 1):
        for t in _args(c, ch):
            for j in range(c.hom(*ch).dim):
                variations.append(_to_slot_vector(gauge_variation(c, Cochain(1, {(ch, t): {j: fld.one}})), pos))
    b = span_rank(fld, variations)
    hc = hc or _complex(c, 3)
    h2 = Cohomology(hc.complex, 2)
    return DeformationSpace(z, b, h2.betti, [hc.to_cochain(2, r) for r in h2.reps])


def enumerate_deformations(c: FinLinCat, hc: Optional[HochschildComplex] = None) -> List[FirstOrderDeformation]:
    """One deformation per HH² basis class."""
    return [FirstOrderDeformation(c, r) for r in deformation_space(c, hc).representatives]


def random_cochain(c: FinLinCat, degree: int, rng: random.Random, density: float = 0.5, bound: int = 3) -> Cochain:
    """Random cochain with small integer entries on composable chains."""
    fld = c.field
    vals: Dict = {}
    for ch in _composable(c, degree):
        for t in _args(c, ch):
            v = {j: fld(rng.randint(-bound, bound)) for j in range(c.hom(ch[0], ch[-1]).dim)
                 if rng.random() < density}
            v = {j: x for j, x in v.items() if x}
            if v:
                vals[ch, t] = v
    return Cochain(degree, vals)
