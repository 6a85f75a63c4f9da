"""Test oracles that do not touch the package's linear algebra or complexes.

Only plain structure constants (dicts of ints/mpq) cross the boundary.
"""

from fractions import Fraction
from itertools import product


def _norm(x, p):
    if p is None:
        return Fraction(int(x.numerator), int(x.denominator)) if hasattr(x, "numerator") else Fraction(x)
    return int(x) % p


def rank(vectors, p=None):
    """Rank of a list of {index: value} dicts by elimination on sorted keys."""
    pivots = {}
    r = 0
    for v in vectors:
        v = {k: _norm(x, p) for k, x in v.items()}
        v = {k: x for k, x in v.items() if x}
        while v:
            k = min(v)
            if k not in pivots:
                inv = 1 / v[k] if p is None else pow(v[k], -1, p)
                pivots[k] = {i: (x * inv if p is None else x * inv % p) for i, x in v.items()}
                r += 1
                break
            c = v[k]
            for i, x in pivots[k].items():
                y = v.get(i, 0) - c * x
                if p is not None:
                    y %= p
                if y:
                    v[i] = y
                else:
                    v.pop(i, None)
    return r


def matrix_rank(rows, p=None):
    return rank([{j: x for j, x in enumerate(r) if x} for r in rows], p)


def algebra_hh(mult, dim, top, p=None):
    """dim HH^n(A) for n <= top from the full Hom(A^{⊗n}, A) complex.

    ``mult[(i, j)]`` is e_i e_j as {k: coefficient}; sign conventions do
    not affect the ranks, so the textbook coboundary is used.
    """
    def times(i, v, left):
        out = {}
        for j, x in v.items():
            for k, y in mult.get((i, j) if left else (j, i), {}).items():
                out[k] = out.get(k, 0) + _norm(x, p) * _norm(y, p)
        return out

    def coboundary(n, t, j):
        # image of the cochain sending e_t to e_j
        col = {}

        def put(s, vec, sign):
            for k, x in vec.items():
                key = (s, k)
                col[key] = col.get(key, 0) + sign * x

        for s in product(range(dim), repeat=n + 1):
            if s[1:] == t:
                put(s, times(s[0], {j: 1}, True), 1)
            for i in range(1, n + 1):
                merged = mult.get((s[i - 1], s[i]), {})
                for m, x in merged.items():
                    if s[:i - 1] + (m,) + s[i + 1:] == t:
                        put(s, {j: _norm(x, p)}, (-1) ** i)
            if s[:n] == t:
                put(s, times(s[n], {j: 1}, False), (-1) ** (n + 1))
        return col

    ranks = []
    for n in range(top + 1):
        cols = [coboundary(n, t, j) for t in product(range(dim), repeat=n) for j in range(dim)]
        ranks.append(rank(cols, p))
    return tuple(dim ** (n + 1) - ranks[n] - (ranks[n - 1] if n else 0) for n in range(top + 1))


def category_hh(c, top):
    """Oracle HH of an ordinary category through its category algebra."""
    from hochcat.lincat import category_algebra

    a = category_algebra(c)
    return algebra_hh(a.mult, a.dim, top, c.field.p)


def order_complex_betti(elements, leq, top):
    """Simplicial cohomology of the order complex by brute-force chains."""
    chains = {0: [(x,) for x in elements]}
    for k in range(1, top + 2):
        chains[k] = [c + (y,) for c in chains[k - 1] for y in elements if y != c[-1] and leq(c[-1], y)]
    ranks = []
    for k in range(top + 1):
        pos = {c: i for i, c in enumerate(chains[k + 1])}
        cols = []
        for c in chains[k]:
            col = {}
            for s in chains[k + 1]:
                for i in range(k + 2):
                    if s[:i] + s[i + 1:] == c:
                        col[pos[s]] = col.get(pos[s], 0) + (-1) ** i
            cols.append(col)
        ranks.append(rank(cols))
    return tuple(len(chains[k]) - ranks[k] - (ranks[k - 1] if k else 0) for k in range(top + 1))
