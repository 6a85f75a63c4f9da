"""Stand-alone oracle for HH of the dual numbers.

It shares no code with the rest of the package.  It uses the 2-periodic
bimodule resolution of A = k[ε]/(ε²) and plain Python rationals or
residues.

    ... -> A⊗A --u--> A⊗A --v--> A⊗A --mult--> A,
    v = ε⊗1 - 1⊗ε,  u = ε⊗1 + 1⊗ε  (alternating).

Applying Hom_{A^e}(-, A) identifies every term with A and turns v, u into
the maps a ↦ εa - aε = 0 and a ↦ εa + aε = 2εa.
"""

from fractions import Fraction


def _rank(rows, p=None):
    m = [list(r) for r in rows]
    if p is None:
        m = [[Fraction(x) for x in r] for r in m]
    else:
        m = [[x % p for x in r] for r in m]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col] if p is None else pow(m[rank][col], -1, p)
        m[rank] = [x * inv if p is None else x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                c = m[i][col]
                m[i] = [a - c * b if p is None else (a - c * b) % p for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def _left_eps():
    # basis (1, ε); matrix of a ↦ εa in columns
    return [[0, 0], [1, 0]]


def _induced(sign):
    # a ↦ εa + sign·aε; A is commutative so this is (1 + sign)·ε·a
    e = _left_eps()
    return [[(1 + sign) * e[i][j] for j in range(2)] for i in range(2)]


def dual_numbers_hh(top, p=None):
    """dim HH^n(k[ε]) for 0 <= n <= top over Q (p None) or F_p."""
    maps = [_induced(-1 if n % 2 == 0 else 1) for n in range(top + 1)]
    ranks = [_rank(m, p) for m in maps]
    out = []
    for n in range(top + 1):
        out.append(2 - ranks[n] - (ranks[n - 1] if n > 0 else 0))
    return tuple(out)
