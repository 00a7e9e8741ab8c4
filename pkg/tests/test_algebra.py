import copy
import json

import pytest

from ncdg.algebra import (
    Derivation,
    center,
    center_coordinates,
    derivation_involution,
    derivations,
    inner_derivation,
    inner_preimage,
    is_hermitian,
    is_in_center,
    lie_bracket,
)
from ncdg.errors import BadInvolution, NoUnit, NotADerivation, NotAssociative, ParseError
from ncdg.fleet import BUNDLED, bundled, bundled_path
from ncdg.forms import random_element
from ncdg.scalar import I, ONE, ZERO, Scalar
from ncdg.specfile import algebra_to_spec, dumps_algebra, load_algebra

from oracles import (
    PAULI,
    center_dim,
    commutator_matrix,
    derivation_dim,
    direct_sum_structure,
    inner_dim,
    matrix_to_coeffs,
    matrix_unit_structure,
)


def spec_of(name):
    return json.loads(bundled_path(name).read_text())


def random_derivation(A, rng):
    D = A.der
    return D.combine([Scalar(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(D.dim)])


# -- loading ----------------------------------------------------------------------------

def test_m2_spec_loads(M2):
    assert M2.dim == 4 and list(M2.labels) == ["e11", "e12", "e21", "e22"]
    assert M2.one().coeffs == (ONE, ZERO, ZERO, ONE)


def test_structure_matches_independent_matrix_units(M2, M3):
    for A, n in ((M2, 2), (M3, 3)):
        c = matrix_unit_structure(n)
        for i in range(A.dim):
            for j in range(A.dim):
                assert [x for x in A.structure[i][j]] == [Scalar(v) for v in c[i][j]]


def test_associativity_violation_is_reported():
    spec = spec_of("M2")
    # e11 e12 = e12; redirect it to e11 so that (e11 e12) e21 != e11 (e12 e21)
    spec["structure_constants"][0][1] = ["1", "0", "0", "0"]
    with pytest.raises(NotAssociative) as exc:
        load_algebra(spec)
    assert len(exc.value.indices) == 3


def test_missing_unit_is_reported():
    spec = spec_of("CC")
    spec["unit"] = ["1", "0"]
    with pytest.raises(NoUnit):
        load_algebra(spec)


def test_bad_involution_is_reported():
    spec = spec_of("M2")
    spec["involution"] = [["1" if i == j else "0" for j in range(4)] for i in range(4)]  # identity is not antimultiplicative
    with pytest.raises(BadInvolution):
        load_algebra(spec)


def test_malformed_scalar_names_field():
    spec = spec_of("M2")
    spec["unit"][2] = "1/0"
    with pytest.raises(ParseError) as exc:
        load_algebra(spec)
    assert exc.value.where == "unit[2]"


def test_invalid_json_names_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n "name": "x",\n oops\n}')
    with pytest.raises(ParseError, match="line 3"):
        load_algebra(p)


@pytest.mark.parametrize("name", BUNDLED)
def test_spec_roundtrip_is_bit_exact(name):
    A = bundled(name)
    text = dumps_algebra(A)
    assert dumps_algebra(load_algebra(json.loads(text))) == text
    assert algebra_to_spec(A) == spec_of(name)


def test_cc_is_commutative(CC):
    for i in range(2):
        for j in range(2):
            assert CC.basis(i) * CC.basis(j) == CC.basis(j) * CC.basis(i)


# -- center and derivations against the dense oracle -------------------------------------

@pytest.mark.parametrize("name", BUNDLED)
def test_center_and_derivation_dims_match_oracle(name):
    A = bundled(name)
    c = [[list(row) for row in plane] for plane in A.structure]
    assert center(A).dim == center_dim(c)
    assert len(derivations(A)) == derivation_dim(c)
    assert A.der.inner_subspace.dim == inner_dim(c)


def test_oracle_values_from_raw_matrices():
    m2 = matrix_unit_structure(2)
    m3 = matrix_unit_structure(3)
    assert (center_dim(m2), derivation_dim(m2), inner_dim(m2)) == (1, 3, 3)
    assert (center_dim(m3), derivation_dim(m3), inner_dim(m3)) == (1, 8, 8)
    cc = direct_sum_structure([[[1]]], [[[1]]])
    assert (center_dim(cc), derivation_dim(cc)) == (2, 0)
    m2c = direct_sum_structure(m2, [[[1]]])
    assert center_dim(m2c) == 2


def test_fleet_facts(M2, M3, CC):
    assert center(M2).dim == 1 and center(M2).contains(M2.unit)
    assert center(CC).dim == 2
    assert center(bundled("M2C")).dim == 2
    assert len(derivations(M2)) == 3 and len(derivations(M3)) == 8
    assert derivations(CC) == []
    assert M2.der.all_inner() and M3.der.all_inner()
    assert not bundled("crown").der.all_inner()
    assert not bundled("kronecker").der.all_inner()


@pytest.mark.parametrize("name", ["M2", "M3"])
def test_every_derivation_is_ad_of_traceless(name):
    A = bundled(name)
    n = {"M2": 2, "M3": 3}[name]
    for X in A.der.elements:
        x = inner_preimage(X)
        assert x is not None and inner_derivation(x) == X
        # the preimage is fixed only modulo the center; remove the trace part
        trace = sum((x.coeffs[a * n + a] for a in range(n)), ZERO)
        x0 = x - (trace / Scalar(n)) * A.one()
        assert sum((x0.coeffs[a * n + a] for a in range(n)), ZERO) == ZERO
        assert inner_derivation(x0) == X


# -- inner derivations and the bracket ---------------------------------------------------

def test_ad_unit_is_zero(M2):
    assert inner_derivation(M2.one()).is_zero()


def test_ad_e11_on_e12(M2):
    assert inner_derivation(M2.basis(0))(M2.basis(1)) == M2.basis(1)


def test_ad_central_is_zero():
    A = bundled("M2C")
    for z in center(A).vectors:
        assert inner_derivation(A.element(z)).is_zero()


def test_pauli_commutators_match_matrix_oracle(M2):
    s = {k: M2.element([Scalar(c.re, c.im) for c in matrix_to_coeffs(m)]) for k, m in PAULI.items()}
    for a in (1, 2, 3):
        for b in (1, 2, 3):
            expected = matrix_to_coeffs(commutator_matrix(PAULI[a], PAULI[b]))
            assert [Scalar(c.re, c.im) for c in expected] == list(s[a].commutator(s[b]).coeffs)


def test_bracket_self_is_zero(M2, rng):
    X = random_derivation(M2, rng)
    assert lie_bracket(X, X).is_zero()


def test_ad_is_lie_homomorphism(M2, rng):
    for _ in range(5):
        x, y = random_element(M2, rng), random_element(M2, rng)
        lhs = lie_bracket(inner_derivation(I * x), inner_derivation(I * y))
        assert lhs == inner_derivation(-x.commutator(y))


@pytest.mark.parametrize("name", ["M2", "M3", "T2", "crown", "kronecker"])
def test_jacobi_and_closure(name, rng):
    A = bundled(name)
    X, Y, Z = (random_derivation(A, rng) for _ in range(3))
    total = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) + lie_bracket(Z, lie_bracket(X, Y))
    assert total.is_zero()
    # the bracket of derivations is again a derivation
    Derivation(A, lie_bracket(X, Y).matrix, check=True)


def test_non_derivation_rejected(M2):
    with pytest.raises(NotADerivation):
        Derivation(M2, [[ONE if i == j else ZERO for j in range(4)] for i in range(4)])


# -- involution ----------------------------------------------------------------------------

def test_hermitian_ad_ih_is_real(M2, rng):
    for _ in range(5):
        x = random_element(M2, rng)
        h = x + x.star()
        assert is_hermitian(h)
        X = inner_derivation(I * h)
        assert derivation_involution(X) == X


@pytest.mark.parametrize("name", ["M2", "M3", "T2", "crown", "kronecker", "dual"])
def test_involution_laws(name, rng):
    A = bundled(name)
    X, Y = random_derivation(A, rng), random_derivation(A, rng)
    assert derivation_involution(derivation_involution(X)) == X
    assert derivation_involution(lie_bracket(X, Y)) == lie_bracket(derivation_involution(X), derivation_involution(Y))
    x = random_element(A, rng)
    # X*(x) = (X(x*))*
    assert derivation_involution(X)(x) == X(x.star()).star()


# -- center is stable, and central multiples --------------------------------------------------

@pytest.mark.parametrize("name", BUNDLED)
def test_center_stable_under_derivations(name):
    A = bundled(name)
    for X in A.der.elements:
        for z in center(A).vectors:
            assert is_in_center(A, X.apply(z))


@pytest.mark.parametrize("name", ["M2C", "dual", "CC"])
def test_central_multiple_bracket(name):
    A = bundled(name)
    D = A.der
    for z in center(A).vectors:
        Lz = A.left_matrix(z)
        for X in D.elements:
            for Y in D.elements:
                zY = Derivation(A, [[sum((Lz[r][k] * Y.matrix[k][c] for k in range(A.dim)), ZERO)
                                     for c in range(A.dim)] for r in range(A.dim)], check=False)
                Xz = A.left_matrix(X.apply(z))
                XzY = [[sum((Xz[r][k] * Y.matrix[k][c] for k in range(A.dim)), ZERO) for c in range(A.dim)] for r in range(A.dim)]
                zXY = [[sum((Lz[r][k] * lie_bracket(X, Y).matrix[k][c] for k in range(A.dim)), ZERO) for c in range(A.dim)] for r in range(A.dim)]
                expected = tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(XzY, zXY))
                assert lie_bracket(X, zY).matrix == expected
        assert center_coordinates(A, z) is not None


def test_deepcopy_of_spec_is_independent():
    spec = spec_of("M2")
    other = copy.deepcopy(spec)
    other["name"] = "renamed"
    assert load_algebra(other).name == "renamed" and load_algebra(spec).name == "M2"
