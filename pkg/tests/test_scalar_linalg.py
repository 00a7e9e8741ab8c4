from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncdg.errors import Inconsistent, NotInSubspace, ParseError
from ncdg.linalg import SubspaceBasis, nullspace, rank, solve_linear, to_dense
from ncdg.scalar import I, ONE, ZERO, Scalar, as_scalar, format_scalar, parse_scalar

from oracles import dense_nullspace, dense_rank, cf

fractions = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 10**6)
scalars = st.builds(Scalar, fractions, fractions)


@pytest.mark.parametrize(
    "text, re, im",
    [
        ("3", 3, 0),
        ("-3/4", Fraction(-3, 4), 0),
        ("1/2+3/4*i", Fraction(1, 2), Fraction(3, 4)),
        ("1-i", 1, -1),
        ("2/3*i", 0, Fraction(2, 3)),
        ("-i", 0, -1),
        ("5/1", 5, 0),
        ("123456789012345678901234567890", 123456789012345678901234567890, 0),
    ],
)
def test_parse_scalar(text, re, im):
    x = parse_scalar(text)
    assert (x.real, x.imag) == (Fraction(re), Fraction(im))


@pytest.mark.parametrize("text", ["", "1/0", "i*2", "1+", "abc", "1/2/3", "2i"])
def test_parse_scalar_rejects(text):
    with pytest.raises(ParseError):
        parse_scalar(text)


def test_parse_error_names_field():
    with pytest.raises(ParseError) as exc:
        parse_scalar("x", "unit[2]")
    assert exc.value.where == "unit[2]"
    assert "unit[2]" in str(exc.value)


@given(scalars)
def test_format_roundtrip(x):
    assert parse_scalar(format_scalar(x)) == x


@given(scalars, scalars, scalars)
def test_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert a - a == ZERO
    if a:
        assert a * a.inverse() == ONE


def test_units():
    assert I * I == -ONE
    assert as_scalar(2 + 3j) == Scalar(2, 3)
    assert format_scalar(Scalar(0, -1)) == "-1*i"


def test_solve_identity_system():
    sol = solve_linear([[1, 0], [0, 1]], [Scalar(2), I])
    assert sol.particular == (Scalar(2), I) and sol.unique


def test_solve_zero_matrix_inconsistent():
    with pytest.raises(Inconsistent):
        solve_linear([[0, 0]], [1])


def test_solve_reports_kernel():
    sol = solve_linear([[1, 1, 0]], [ONE])
    assert len(sol.kernel) == 2
    for k in sol.kernel:
        assert k[0] + k[1] == ZERO


small = st.integers(-3, 3)


@given(st.lists(st.lists(st.tuples(small, small), min_size=4, max_size=4), min_size=1, max_size=5))
def test_nullspace_matches_dense_oracle(rows):
    mat = [[Scalar(a, b) for a, b in r] for r in rows]
    sparse = [{j: x for j, x in enumerate(r) if x} for r in mat]
    ours = nullspace(sparse, 4)
    assert len(ours) == len(dense_nullspace(mat, 4))
    assert rank(sparse) == dense_rank(mat)
    for v in ours:
        dv = to_dense(v, 4)
        for r in mat:
            assert sum((a * b for a, b in zip(r, dv)), ZERO) == ZERO


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4), st.randoms(use_true_random=False))
def test_subspace_representation_is_canonical(vectors, r):
    a = SubspaceBasis.span([[Scalar(x) for x in v] for v in vectors], 3)
    shuffled = list(vectors)
    r.shuffle(shuffled)
    doubled = [[Scalar(2 * x) for x in v] for v in shuffled]
    b = SubspaceBasis.span(doubled, 3)
    assert a == b
    assert a.dim == dense_rank([[cf(x) for x in v] for v in vectors])


def test_subspace_coordinates():
    S = SubspaceBasis.span([[ONE, ONE, ZERO]], 3)
    assert S.coordinates((Scalar(5), Scalar(5), ZERO)) == (Scalar(5),)
    with pytest.raises(NotInSubspace):
        S.coordinates((ONE, ZERO, ZERO))
