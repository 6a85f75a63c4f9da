"""Exact linear algebra over Q and F_p.

Vectors are sparse dicts ``{index: value}`` with no stored zeros.  Rational
values are ``gmpy2.mpq``; prime-field values are ints in ``[0, p)``.
Matrices are stored column-sparse because every map in this package is
assembled one basis image at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import gmpy2
from gmpy2 import mpq

Vector = Dict[Hashable, object]


class FieldMismatchError(ValueError):
    """Raised when objects over different fields are combined."""


class ComplexError(ValueError):
    pass


class ExactnessError(ValueError):
    """A short sequence of complexes fails to be exact in some degree."""

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


# ---------------------------------------------------------------- fields


class Field:
    """The field of rationals (``p is None``) or the prime field F_p."""

    __slots__ = ("p",)

    def __init__(self, p: Optional[int] = None):
        if p is not None:
            p = int(p)
            if p < 2 or not gmpy2.is_prime(p):
                raise ValueError(f"modulus {p} is not prime")
        self.p = p

    @property
    def kind(self) -> str:
        return "rational" if self.p is None else "prime"

    @property
    def name(self) -> str:
        return "rational" if self.p is None else f"fp:{self.p}"

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    def __call__(self, x):
        """Convert ints, strings like ``'-3/4'``, Fractions or mpq."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.p is None:
            if isinstance(x, Fraction):
                return mpq(x.numerator, x.denominator)
            return mpq(x)
        if isinstance(x, (Fraction,)) or type(x).__name__ == "mpq":
            num, den = int(x.numerator), int(x.denominator)
            if den % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return num * pow(den, -1, self.p) % self.p
        return int(x) % self.p

    @property
    def zero(self):
        return mpq(0) if self.p is None else 0

    @property
    def one(self):
        return mpq(1) if self.p is None else 1

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else a * b % self.p

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a if self.p is None else pow(int(a), -1, self.p)

    def sign(self, e: int):
        """(-1)**e as a field element."""
        if e % 2 == 0:
            return self.one
        return self.neg(self.one)

    def fmt(self, a) -> str:
        if self.p is None:
            a = mpq(a)
            if a.denominator == 1:
                return str(a.numerator)
            return f"{a.numerator}/{a.denominator}"
        return str(int(a))


QQ = Field()


def GF(p: int) -> Field:
    return Field(p)


def field_from_name(name: str) -> Field:
    """Parse ``'rational'`` or ``'fp:<p>'``."""
    name = name.strip()
    if name in ("rational", "QQ", "Q"):
        return QQ
    if name.startswith("fp:"):
        return Field(int(name[3:]))
    raise ValueError(f"unknown scalar kind {name!r}")


def check_same_field(*fields: Field) -> Field:
    first = fields[0]
    for f in fields[1:]:
        if f != first:
            raise FieldMismatchError(f"scalar kinds differ: {first.name} vs {f.name}")
    return first


# ---------------------------------------------------------------- vectors


def axpy(y: Vector, a, x: Vector, p: Optional[int]) -> None:
    """In place ``y += a * x``; zero entries are removed."""
    if not a:
        return
    if p is None:
        for k, v in x.items():
            w = y.get(k)
            if w is None:
                y[k] = a * v
            else:
                w = w + a * v
                if w:
                    y[k] = w
                else:
                    del y[k]
    else:
        for k, v in x.items():
            w = (y.get(k, 0) + a * v) % p
            if w:
                y[k] = w
            else:
                y.pop(k, None)


def vscale(a, x: Vector, p: Optional[int]) -> Vector:
    if not a:
        return {}
    if p is None:
        return {k: a * v for k, v in x.items()}
    return {k: a * v % p for k, v in x.items()}


def vadd(x: Vector, y: Vector, p: Optional[int], a=1) -> Vector:
    out = dict(x)
    axpy(out, a, y, p)
    return out


# ---------------------------------------------------------------- echelon


class Echelon:
    """Incremental column echelon form with optional combination tracking.

    Each stored pivot vector has its smallest index as pivot and is scaled
    so that entry equals one.  ``combo`` records the stored vector as a
    combination of the tagged generators that were added.
    """

    def __init__(self, field: Field, track: bool = True):
        self.field = field
        self.track = track
        self.piv: Dict[Hashable, Tuple[Vector, Optional[Vector]]] = {}

    def __len__(self):
        return len(self.piv)

    def add(self, v: Vector, tag=None) -> Optional[Vector]:
        """Add ``v``; returns the kernel relation (tag combination) if ``v``
        was dependent, else ``None``."""
        p = self.field.p
        v = dict(v)
        combo = {tag: self.field.one} if self.track else None
        while v:
            r = min(v)
            hit = self.piv.get(r)
            if hit is None:
                inv = self.field.inv(v[r])
                w = vscale(inv, v, p)
                c = vscale(inv, combo, p) if combo is not None else None
                self.piv[r] = (w, c)
                return None
            c = v[r]
            w, wc = hit
            axpy(v, self.field.neg(c), w, p)
            if combo is not None:
                axpy(combo, self.field.neg(c), wc, p)
        return combo if combo is not None else {}

    def reduce(self, v: Vector) -> Tuple[Vector, Vector]:
        """Fully reduce ``v``; returns ``(residual, x)`` with
        ``v = residual + sum_tag x[tag] * generator[tag]``."""
        p = self.field.p
        v = dict(v)
        x: Vector = {}
        r = None
        while True:
            cand = [k for k in v if k in self.piv and (r is None or k > r)]
            if not cand:
                return v, x
            r = min(cand)
            c = v[r]
            w, wc = self.piv[r]
            axpy(v, self.field.neg(c), w, p)
            if wc is not None:
                axpy(x, c, wc, p)

    def contains(self, v: Vector) -> bool:
        return not self.reduce(v)[0]


# ---------------------------------------------------------------- matrices


class Matrix:
    """Column-sparse matrix; ``cols[j]`` is the image of basis vector j."""

    __slots__ = ("field", "nrows", "ncols", "cols", "_rank")

    def __init__(self, field: Field, nrows: int, ncols: int, cols: Optional[List[Vector]] = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative matrix shape")
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            cols = [{} for _ in range(ncols)]
        if len(cols) != ncols:
            raise ValueError(f"expected {ncols} columns, got {len(cols)}")
        self.cols = cols
        self._rank = None

    # construction
    @classmethod
    def zero(cls, field, nrows, ncols):
        return cls(field, nrows, ncols)

    @classmethod
    def identity(cls, field, n):
        return cls(field, n, n, [{j: field.one} for j in range(n)])

    @classmethod
    def from_rows(cls, field, rows: Sequence[Sequence], ncols: Optional[int] = None):
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        cols: List[Vector] = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for j, x in enumerate(row):
                x = field(x)
                if x:
                    cols[j][i] = x
        return cls(field, nrows, ncols, cols)

    @classmethod
    def from_columns(cls, field, nrows, columns: Sequence[Vector]):
        return cls(field, nrows, len(columns), [dict(c) for c in columns])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def to_rows(self) -> List[list]:
        rows = [[self.field.zero] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, x in col.items():
                rows[i][j] = x
        return rows

    def entry(self, i, j):
        return self.cols[j].get(i, self.field.zero)

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def is_zero(self) -> bool:
        return all(not c for c in self.cols)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.shape == other.shape
            and all(a == b for a, b in zip(self.cols, other.cols))
        )

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.nrows}x{self.ncols}, nnz={self.nnz()})"

    # arithmetic
    def apply(self, v: Vector) -> Vector:
        p = self.field.p
        out: Vector = {}
        for j, x in v.items():
            col = self.cols[j]
            if col:
                axpy(out, x, col, p)
        return out

    def __matmul__(self, other):
        if isinstance(other, dict):
            return self.apply(other)
        check_same_field(self.field, other.field)
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return Matrix(self.field, self.nrows, other.ncols, [self.apply(c) for c in other.cols])

    def _combine(self, other, a):
        check_same_field(self.field, other.field)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        p = self.field.p
        return Matrix(self.field, self.nrows, self.ncols, [vadd(x, y, p, a) for x, y in zip(self.cols, other.cols)])

    def __add__(self, other):
        return self._combine(other, self.field.one)

    def __sub__(self, other):
        return self._combine(other, self.field.neg(self.field.one))

    def __neg__(self):
        return self.scale(self.field.neg(self.field.one))

    def scale(self, a):
        p = self.field.p
        return Matrix(self.field, self.nrows, self.ncols, [vscale(a, c, p) for c in self.cols])

    def transpose(self) -> "Matrix":
        cols: List[Vector] = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, x in col.items():
                cols[i][j] = x
        return Matrix(self.field, self.ncols, self.nrows, cols)

    T = property(transpose)

    # elimination
    def echelon(self, track=True) -> Echelon:
        e = Echelon(self.field, track=track)
        for j, c in enumerate(self.cols):
            e.add(c, j)
        return e

    def rank(self) -> int:
        if self._rank is None:
            e = Echelon(self.field, track=False)
            for c in self.cols:
                e.add(c)
            self._rank = len(e)
        return self._rank

    def rank_kernel(self) -> Tuple[int, List[Vector]]:
        e = Echelon(self.field, track=True)
        kernel = []
        for j, c in enumerate(self.cols):
            rel = e.add(c, j)
            if rel is not None:
                kernel.append(rel)
        self._rank = len(e)
        return len(e), kernel

    def kernel(self) -> List[Vector]:
        return self.rank_kernel()[1]

    def solve(self, b: Vector) -> Optional[Vector]:
        """Some ``x`` with ``self @ x == b`` or ``None``."""
        e = self.echelon(track=True)
        res, x = e.reduce(b)
        return None if res else x

    def pivot_columns(self) -> List[int]:
        e = Echelon(self.field, track=False)
        out = []
        for j, c in enumerate(self.cols):
            if e.add(c) is None:
                out.append(j)
        return out

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse of non-square matrix")
        e = self.echelon(track=True)
        if len(e) != self.ncols:
            raise ZeroDivisionError("singular matrix")
        cols = []
        for i in range(self.nrows):
            res, x = e.reduce({i: self.field.one})
            cols.append(x)
        return Matrix(self.field, self.ncols, self.nrows, cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        rpos = {r: i for i, r in enumerate(rows)}
        out = []
        for j in cols:
            out.append({rpos[i]: x for i, x in self.cols[j].items() if i in rpos})
        return Matrix(self.field, len(rows), len(cols), out)

    def grid(self) -> str:
        """Plain text grid dump."""
        rows = [[self.field.fmt(x) for x in r] for r in self.to_rows()]
        width = max((len(s) for r in rows for s in r), default=1)
        head = f"# {self.nrows}x{self.ncols} over {self.field.name}"
        return "\n".join([head] + [" ".join(s.rjust(width) for s in r) for r in rows])


def hstack(mats: Sequence[Matrix]) -> Matrix:
    f = check_same_field(*[m.field for m in mats])
    n = mats[0].nrows
    cols = []
    for m in mats:
        if m.nrows != n:
            raise ValueError("row count mismatch")
        cols.extend(dict(c) for c in m.cols)
    return Matrix(f, n, len(cols), cols)


def vstack(mats: Sequence[Matrix]) -> Matrix:
    f = check_same_field(*[m.field for m in mats])
    n = mats[0].ncols
    cols: List[Vector] = [{} for _ in range(n)]
    off = 0
    for m in mats:
        if m.ncols != n:
            raise ValueError("column count mismatch")
        for j, c in enumerate(m.cols):
            for i, x in c.items():
                cols[j][i + off] = x
        off += m.nrows
    return Matrix(f, off, n, cols)


def block_diag(mats: Sequence[Matrix]) -> Matrix:
    f = check_same_field(*[m.field for m in mats])
    cols = []
    off = 0
    for m in mats:
        for c in m.cols:
            cols.append({i + off: x for i, x in c.items()})
        off += m.nrows
    return Matrix(f, off, len(cols), cols)


def matrix_rank_kernel(m: Matrix) -> Tuple[int, List[Vector]]:
    """Rank and a kernel basis of ``m``."""
    return m.rank_kernel()


def span_rank(field: Field, vectors: Iterable[Vector]) -> int:
    e = Echelon(field, track=False)
    for v in vectors:
        e.add(v)
    return len(e)


# ---------------------------------------------------------------- complexes


@dataclass(frozen=True)
class ComplexRep:
    """A bounded window ``[lo, hi]`` of a cochain complex.

    ``diffs[i]`` maps degree ``lo + i`` to ``lo + i + 1``.  Degrees outside
    the window count as zero only when the matching ``complete_*`` flag is
    set; otherwise cohomology at that edge is only an upper bound.
    """

    field: Field
    lo: int
    dims: Tuple[int, ...]
    diffs: Tuple[Matrix, ...]
    complete_below: bool = False
    complete_above: bool = False

    def __post_init__(self):
        if len(self.diffs) != max(len(self.dims) - 1, 0):
            raise ComplexError("need one differential between each pair of adjacent degrees")
        for i, d in enumerate(self.diffs):
            if d.shape != (self.dims[i + 1], self.dims[i]):
                raise ComplexError(
                    f"differential from degree {self.lo + i} has shape {d.shape}, "
                    f"expected {(self.dims[i + 1], self.dims[i])}"
                )
            check_same_field(self.field, d.field)

    @property
    def hi(self) -> int:
        return self.lo + len(self.dims) - 1

    def dim(self, n: int) -> int:
        if self.lo <= n <= self.hi:
            return self.dims[n - self.lo]
        return 0

    def d(self, n: int) -> Optional[Matrix]:
        """Differential out of degree ``n``; ``None`` if unknown."""
        if self.lo <= n < self.hi:
            return self.diffs[n - self.lo]
        if n < self.lo:
            return Matrix.zero(self.field, self.dim(n + 1), 0) if self.complete_below else None
        return Matrix.zero(self.field, 0, self.dim(n)) if self.complete_above else None

    def check_d_squared(self) -> List[int]:
        """Degrees n where ``d_{n+1} d_n`` fails to vanish."""
        bad = []
        for i in range(len(self.diffs) - 1):
            if not (self.diffs[i + 1] @ self.diffs[i]).is_zero():
                bad.append(self.lo + i)
        return bad

    def validate(self) -> "ComplexRep":
        bad = self.check_d_squared()
        if bad:
            raise ComplexError(f"d∘d != 0 starting in degrees {bad}")
        return self

    def euler_characteristic(self) -> int:
        return sum((-1) ** (self.lo + i) * n for i, n in enumerate(self.dims))

    def dump(self) -> str:
        lines = [f"# complex over {self.field.name}, degrees {self.lo}..{self.hi}"]
        for i, n in enumerate(self.dims):
            lines.append(f"C^{self.lo + i}: dim {n}")
        for i, d in enumerate(self.diffs):
            lines.append(f"d^{self.lo + i}:")
            lines.append(d.grid())
        return "\n".join(lines)


class Cohomology:
    """Cohomology of a complex in one degree with chosen representatives.

    ``classify(z)`` expresses a cocycle in the representative basis.
    """

    def __init__(self, c: ComplexRep, n: int):
        if not (c.lo <= n <= c.hi):
            raise ComplexError(f"degree {n} outside window [{c.lo}, {c.hi}]")
        self.complex = c
        self.degree = n
        f = c.field
        d_in = c.d(n - 1)
        d_out = c.d(n)
        self.exact = d_in is not None and d_out is not None
        dim = c.dim(n)
        self._ech = Echelon(f, track=True)
        img = d_in.cols if d_in is not None else []
        for j, col in enumerate(img):
            self._ech.add(col, ("b", j))
        self.boundary_rank = len(self._ech)
        if d_out is not None:
            _, zs = d_out.rank_kernel()
            self.cycles = [{i: x for i, x in z.items()} for z in zs]
        else:
            self.cycles = [{i: f.one} for i in range(dim)]
        self.reps: List[Vector] = []
        for z in self.cycles:
            if self._ech.add(z, ("r", len(self.reps))) is None:
                self.reps.append(z)
        self.betti = len(self.reps)
        self._d_out = d_out

    def is_cocycle(self, v: Vector) -> bool:
        return self._d_out is None or not self._d_out.apply(v)

    def classify(self, v: Vector) -> Vector:
        """Coordinates of the class of cocycle ``v`` in ``reps``."""
        if not self.is_cocycle(v):
            raise ValueError("vector is not a cocycle")
        res, x = self._ech.reduce(v)
        if res:
            raise ValueError("vector is not in the span of cocycles")
        return {k[1]: a for k, a in x.items() if k[0] == "r"}

    def boundary_preimage(self, v: Vector) -> Optional[Vector]:
        """``w`` with ``d w = v`` if ``v`` is a coboundary, else ``None``."""
        res, x = self._ech.reduce(v)
        if res or any(k[0] == "r" for k in x):
            return None
        return {k[1]: a for k, a in x.items()}


@dataclass
class CohomologyResult:
    degree: int
    betti: int
    exact: bool
    representatives: List[Vector]


def complex_cohomology(c: ComplexRep, n: int) -> CohomologyResult:
    """Betti number and representative cocycles in degree ``n``."""
    h = Cohomology(c, n)
    return CohomologyResult(n, h.betti, h.exact, h.reps)


def betti_numbers(c: ComplexRep) -> Dict[int, Tuple[int, bool]]:
    """``{n: (betti, exact)}`` over the window using ranks only."""
    ranks = [d.rank() for d in c.diffs]
    out = {}
    for i, dim in enumerate(c.dims):
        n = c.lo + i
        r_out = ranks[i] if i < len(ranks) else 0
        r_in = ranks[i - 1] if i > 0 else 0
        exact = (i > 0 or c.complete_below) and (i < len(ranks) or c.complete_above)
        out[n] = (dim - r_out - r_in, exact)
    return out


# ---------------------------------------------------------------- SES / LES


@dataclass(frozen=True)
class SesOfComplexes:
    """Degreewise short exact sequence ``0 -> A -> B -> C -> 0``."""

    A: ComplexRep
    B: ComplexRep
    C: ComplexRep
    i: Dict[int, Matrix]
    q: Dict[int, Matrix]

    def degrees(self):
        return range(self.B.lo, self.B.hi + 1)

    def validate(self) -> "SesOfComplexes":
        A, B, C = self.A, self.B, self.C
        if not (A.lo == B.lo == C.lo and A.hi == B.hi == C.hi):
            raise ExactnessError("complexes live on different windows")
        for n in self.degrees():
            i, q = self.i[n], self.q[n]
            if i.shape != (B.dim(n), A.dim(n)) or q.shape != (C.dim(n), B.dim(n)):
                raise ExactnessError(f"map shapes wrong in degree {n}", n)
            if i.rank() != A.dim(n):
                raise ExactnessError(f"A -> B not injective in degree {n}", n)
            if q.rank() != C.dim(n):
                raise ExactnessError(f"B -> C not surjective in degree {n}", n)
            if not (q @ i).is_zero():
                raise ExactnessError(f"q∘i != 0 in degree {n}", n)
            if B.dim(n) != A.dim(n) + C.dim(n):
                raise ExactnessError(f"not exact in the middle in degree {n}", n)
            if n < B.hi:
                if not (B.d(n) @ i - self.i[n + 1] @ A.d(n)).is_zero():
                    raise ExactnessError(f"i is not a chain map in degree {n}", n)
                if not (C.d(n) @ q - self.q[n + 1] @ B.d(n)).is_zero():
                    raise ExactnessError(f"q is not a chain map in degree {n}", n)
        return self


def _induced(field, src: Cohomology, dst: Cohomology, m: Matrix) -> Matrix:
    cols = [dst.classify(m.apply(r)) for r in src.reps]
    return Matrix(field, dst.betti, src.betti, cols)


@dataclass
class LongExactSequence:
    """Terms ``H^n(A) -> H^n(B) -> H^n(C) -> H^{n+1}(A)`` over exact degrees."""

    degrees: List[int]
    dims: Dict[str, Dict[int, int]]
    maps: Dict[Tuple[str, int], Matrix]
    joints: List[dict] = dc_field(default_factory=list)

    @property
    def exact(self) -> bool:
        return all(j["exact"] for j in self.joints)

    def sequence(self) -> List[Tuple[str, int, int]]:
        out = []
        for n in self.degrees:
            for name in ("A", "B", "C"):
                out.append((name, n, self.dims[name][n]))
        return out


def les_from_ses(s: SesOfComplexes) -> LongExactSequence:
    """Cohomology long exact sequence with connecting maps by the snake
    construction; exactness is checked at every joint by ranks."""
    s.validate()
    f = s.B.field
    H = {}
    degrees = []
    for n in s.degrees():
        hs = {name: Cohomology(getattr(s, name), n) for name in "ABC"}
        if all(h.exact for h in hs.values()):
            degrees.append(n)
            for name, h in hs.items():
                H[name, n] = h
    maps: Dict[Tuple[str, int], Matrix] = {}
    for n in degrees:
        maps["i", n] = _induced(f, H["A", n], H["B", n], s.i[n])
        maps["q", n] = _induced(f, H["B", n], H["C", n], s.q[n])
        if n + 1 in degrees:
            maps["delta", n] = _connecting(s, H["C", n], H["A", n + 1], n)
    # chain of terms in order with maps between them
    terms = []
    arrows = []
    for n in degrees:
        terms += [("A", n), ("B", n), ("C", n)]
        arrows += [maps["i", n], maps["q", n]]
        if ("delta", n) in maps:
            arrows.append(maps["delta", n])
        elif n != degrees[-1]:
            arrows.append(None)
    joints = []
    for k in range(1, len(terms) - 1):
        a_in, a_out = arrows[k - 1], arrows[k] if k < len(arrows) else None
        if a_in is None or a_out is None:
            continue
        name, n = terms[k]
        dim = H[name, n].betti
        comp_zero = (a_out @ a_in).is_zero()
        ok = comp_zero and a_out.rank() == dim - a_in.rank()
        joints.append({"term": f"H^{n}({name})", "degree": n, "composition_zero": comp_zero, "exact": ok})
    dims = {name: {n: H[name, n].betti for n in degrees} for name in "ABC"}
    return LongExactSequence(degrees, dims, maps, joints)


def _connecting(s: SesOfComplexes, hc: Cohomology, ha: Cohomology, n: int) -> Matrix:
    f = s.B.field
    q, i_next, dB = s.q[n], s.i[n + 1], s.B.d(n)
    cols = []
    for c in hc.reps:
        b = q.solve(c)
        db = dB.apply(b)
        a = i_next.solve(db)
        if a is None:
            raise ExactnessError(f"snake lift failed in degree {n}", n)
        cols.append(ha.classify(a))
    return Matrix(f, ha.betti, hc.betti, cols)
