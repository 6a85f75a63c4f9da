from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import matrix_rank
from hochcat.linalg import (
    GF,
    QQ,
    Cohomology,
    ComplexError,
    ComplexRep,
    Echelon,
    ExactnessError,
    Field,
    FieldMismatchError,
    Matrix,
    SesOfComplexes,
    betti_numbers,
    block_diag,
    field_from_name,
    hstack,
    les_from_ses,
    span_rank,
    vstack,
)

FIELDS = [QQ, GF(2), GF(3), GF(7)]


def small_matrices(max_rows=6, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r)))


def test_field_parsing_and_names():
    assert QQ("-3/4") == Fraction(-3, 4)
    assert QQ.fmt(QQ("6/8")) == "3/4"
    assert GF(5)("1/2") == 3
    assert field_from_name("fp:11") == GF(11)
    assert field_from_name("rational") is QQ
    assert GF(3).name == "fp:3"
    with pytest.raises(ValueError):
        Field(4)
    with pytest.raises(ValueError):
        field_from_name("reals")
    with pytest.raises(ZeroDivisionError):
        GF(3)("1/3")


def test_sign_and_inverse():
    f = GF(7)
    assert f.sign(3) == 6 and f.sign(4) == 1
    assert f.mul(f.inv(3), 3) == 1
    with pytest.raises(ZeroDivisionError):
        QQ.inv(QQ.zero)


@pytest.mark.parametrize("field", FIELDS, ids=lambda f: f.name)
@settings(max_examples=40, deadline=None)
@given(rows=small_matrices())
def test_rank_matches_oracle(field, rows):
    m = Matrix.from_rows(field, rows)
    assert m.rank() == matrix_rank(rows, field.p)
    assert m.transpose().rank() == m.rank()


@pytest.mark.parametrize("field", FIELDS, ids=lambda f: f.name)
@settings(max_examples=40, deadline=None)
@given(rows=small_matrices())
def test_kernel_basis(field, rows):
    m = Matrix.from_rows(field, rows)
    r, ker = m.rank_kernel()
    assert len(ker) == m.ncols - r
    for v in ker:
        assert m.apply(v) == {}
    assert span_rank(field, ker) == len(ker)


@settings(max_examples=40, deadline=None)
@given(rows=small_matrices(), coeffs=st.lists(st.integers(-2, 2), min_size=6, max_size=6))
def test_solve_finds_preimages(rows, coeffs):
    m = Matrix.from_rows(QQ, rows)
    x = {j: QQ(c) for j, c in enumerate(coeffs[:m.ncols]) if c}
    b = m.apply(x)
    y = m.solve(b)
    assert y is not None and m.apply(y) == b


def test_solve_reports_inconsistent_system():
    m = Matrix.from_rows(QQ, [[1, 0], [0, 0]])
    assert m.solve({1: QQ.one}) is None


@settings(max_examples=30, deadline=None)
@given(rows=small_matrices(4, 4))
def test_inverse_when_invertible(rows):
    n = min(len(rows), len(rows[0]))
    sq = [r[:n] for r in rows[:n]]
    m = Matrix.from_rows(QQ, sq)
    if m.rank() < n:
        return
    assert (m @ m.inverse()).to_rows() == Matrix.identity(QQ, n).to_rows()


def test_echelon_membership_and_stacking():
    e = Echelon(QQ)
    e.add({0: QQ.one, 1: QQ.one})
    assert e.contains({0: QQ(2), 1: QQ(2)})
    assert not e.contains({1: QQ.one})
    a = Matrix.from_rows(QQ, [[1, 2]])
    b = Matrix.from_rows(QQ, [[3, 4]])
    assert vstack([a, b]).to_rows() == [[1, 2], [3, 4]]
    assert hstack([a, b]).to_rows() == [[1, 2, 3, 4]]
    assert block_diag([a, b]).shape == (2, 4)


def test_field_mismatch_is_refused():
    with pytest.raises(FieldMismatchError):
        Matrix.from_rows(QQ, [[1]]) @ Matrix.from_rows(GF(2), [[1]])


def _circle():
    # simplicial circle: 3 vertices, 3 edges, coboundary C^0 -> C^1
    d0 = Matrix.from_rows(QQ, [[-1, 1, 0], [0, -1, 1], [-1, 0, 1]])
    return ComplexRep(QQ, 0, (3, 3), (d0,), True, True)


def test_circle_cohomology():
    c = _circle().validate()
    assert {n: b for n, (b, _) in betti_numbers(c).items()} == {0: 1, 1: 1}
    h1 = Cohomology(c, 1)
    assert h1.exact and h1.betti == 1
    rep = h1.reps[0]
    assert h1.classify(rep) == {0: QQ.one}
    assert c.euler_characteristic() == 0


def test_edge_degrees_are_flagged_inexact():
    c = ComplexRep(QQ, 0, (1, 1), (Matrix.zero(QQ, 1, 1),))
    assert betti_numbers(c)[1] == (1, False)
    assert betti_numbers(c)[0] == (1, False)


def test_d_squared_violation_detected():
    d = Matrix.from_rows(QQ, [[1]])
    c = ComplexRep(QQ, 0, (1, 1, 1), (d, d))
    assert c.check_d_squared() == [0]
    with pytest.raises(ComplexError):
        c.validate()
    with pytest.raises(ComplexError):
        ComplexRep(QQ, 0, (1, 2), (d,))


def test_long_exact_sequence_of_pair():
    # 0 -> relative -> circle -> point -> 0 on cochains, point = vertex 0
    c = _circle()
    a_d = Matrix.from_rows(QQ, [[1, 0], [-1, 1], [0, 1]])
    A = ComplexRep(QQ, 0, (2, 3), (a_d,), True, True)
    P = ComplexRep(QQ, 0, (1, 0), (Matrix.zero(QQ, 0, 1),), True, True)
    i = {0: Matrix.from_rows(QQ, [[0, 0], [1, 0], [0, 1]]), 1: Matrix.identity(QQ, 3)}
    q = {0: Matrix.from_rows(QQ, [[1, 0, 0]]), 1: Matrix.zero(QQ, 0, 3)}
    les = les_from_ses(SesOfComplexes(A, c, P, i, q))
    assert les.exact
    assert les.dims["A"] == {0: 0, 1: 1}


def test_ses_validation_rejects_non_injective():
    c = _circle()
    i = {0: Matrix.zero(QQ, 3, 3), 1: Matrix.identity(QQ, 3)}
    q = {0: Matrix.zero(QQ, 0, 3), 1: Matrix.zero(QQ, 0, 3)}
    zero = ComplexRep(QQ, 0, (0, 0), (Matrix.zero(QQ, 0, 0),), True, True)
    with pytest.raises(ExactnessError):
        les_from_ses(SesOfComplexes(c, c, zero, i, q))
