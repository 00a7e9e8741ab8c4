import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncdg.algebra import inner_derivation
from ncdg.errors import InvalidAlgebra, NotADerivation
from ncdg.fleet import BUNDLED, bundled
from ncdg.forms import d, random_element
from ncdg.linalg import transpose
from ncdg.modules import universal_one_forms_module
from ncdg.scalar import ONE, ZERO, Scalar
from ncdg.universal import (
    BimoduleDerivation,
    UniversalOneForm,
    UniversalTwoForm,
    d_u,
    d_u_one_form,
    omega1_basis,
    omega2_contains,
    one_form_involution,
    one_form_product,
    project_to_der,
    two_form_involution,
    universal_factor,
    universal_involution,
    universal_sign,
)

from oracles import dense_nullspace

seeds = st.integers(0, 10**6)


def random_one_form(A, rng):
    w = d_u(random_element(A, rng))
    return w.left(random_element(A, rng)) + d_u(random_element(A, rng)).right(random_element(A, rng))


def test_d_u_of_unit_is_zero(M2):
    assert not any(d_u(M2.one()).flat())


def test_d_u_of_e12(M2):
    w = d_u(M2.basis(1))
    expected = [[ZERO] * 4 for _ in range(4)]
    expected[0][1] += ONE  # e11 (x) e12
    expected[3][1] += ONE  # e22 (x) e12
    expected[1][0] -= ONE  # e12 (x) e11
    expected[1][3] -= ONE  # e12 (x) e22
    assert w.tensor == tuple(tuple(r) for r in expected)
    assert not any(w.multiply_out())


@given(seeds)
def test_d_u_is_linear(seed):
    import random

    A = bundled("M2")
    r = random.Random(seed)
    x, y = random_element(A, r), random_element(A, r)
    lam = Scalar(r.randint(-3, 3), r.randint(-3, 3))
    assert d_u(x + lam * y).tensor == (d_u(x) + lam * d_u(y)).tensor


def test_non_kernel_tensor_rejected(M2):
    t = [[ZERO] * 4 for _ in range(4)]
    t[0][0] = ONE
    with pytest.raises(InvalidAlgebra):
        UniversalOneForm(M2, t)


@pytest.mark.parametrize("name", BUNDLED)
def test_omega1_dimension(name):
    A = bundled(name)
    n = A.dim
    assert omega1_basis(A).dim == n * n - n
    mu = [[A.structure[i][j][k] for i in range(n) for j in range(n)] for k in range(n)]
    assert len(dense_nullspace(mu, n * n)) == n * n - n


@pytest.mark.parametrize("name", BUNDLED)
def test_universal_property_on_basis(name):
    A = bundled(name)
    for X in A.der.elements:
        for k in range(A.dim):
            assert universal_factor(X, d_u(A.basis(k))) == X.apply(A.basis_vector(k))


def test_zero_derivation_factors_to_zero(M2):
    from ncdg.algebra import Derivation

    zero = Derivation(M2, [[ZERO] * 4 for _ in range(4)])
    for v in omega1_basis(M2).vectors:
        assert not any(universal_factor(zero, UniversalOneForm.from_flat(M2, v)))


def test_factor_of_x_dy(M2, rng):
    X = M2.der.elements[1]
    for _ in range(5):
        x, y = random_element(M2, rng), random_element(M2, rng)
        assert universal_factor(X, d_u(y).left(x)) == M2.mul(x.coeffs, X.apply(y.coeffs))


def test_factor_rejects_non_derivation(M2):
    from ncdg.algebra import Derivation

    ident = Derivation(M2, [[ONE if i == j else ZERO for j in range(4)] for i in range(4)], check=False)
    with pytest.raises(NotADerivation):
        universal_factor(ident, d_u(M2.basis(1)))


def test_d_u_into_its_own_bimodule_factors_to_identity(M2, rng):
    M = universal_one_forms_module(M2)
    basis = omega1_basis(M2)
    cols = [basis.coordinates(d_u(M2.basis(k)).flat()) for k in range(M2.dim)]
    delta = BimoduleDerivation(M, transpose(cols))
    for _ in range(3):
        w = random_one_form(M2, rng)
        assert universal_factor(delta, w) == basis.coordinates(w.flat())


# -- involution ---------------------------------------------------------------------------

def test_involution_signs():
    assert [universal_sign(n) for n in (0, 1, 2, 3)] == [1, -1, -1, 1]


@pytest.mark.parametrize("name", ["M2", "T2", "kronecker"])
def test_involution_sign_on_elementary_tensors(name, rng):
    A = bundled(name)
    x, y, z = (random_element(A, rng) for _ in range(3))
    # (x (x) y)* = -y* (x) x*
    t1 = {(i, j): x.coeffs[i] * y.coeffs[j] for i in range(A.dim) for j in range(A.dim) if x.coeffs[i] * y.coeffs[j]}
    ys, xs = y.star().coeffs, x.star().coeffs
    expected = {(i, j): -ys[i] * xs[j] for i in range(A.dim) for j in range(A.dim) if ys[i] * xs[j]}
    assert universal_involution(A, 1, t1) == expected
    # (x (x) y (x) z)* = -z* (x) y* (x) x*
    t2 = {(i, j, k): x.coeffs[i] * y.coeffs[j] * z.coeffs[k] for i in range(A.dim) for j in range(A.dim)
          for k in range(A.dim) if x.coeffs[i] * y.coeffs[j] * z.coeffs[k]}
    zs = z.star().coeffs
    expected2 = {(i, j, k): -zs[i] * ys[j] * xs[k] for i in range(A.dim) for j in range(A.dim)
                 for k in range(A.dim) if zs[i] * ys[j] * xs[k]}
    assert universal_involution(A, 2, t2) == expected2


@pytest.mark.parametrize("name", ["M2", "M3", "CC", "T2"])
def test_involution_is_involutive_and_commutes_with_d_u(name, rng):
    A = bundled(name)
    for _ in range(3):
        w = random_one_form(A, rng)
        assert one_form_involution(one_form_involution(w)).tensor == w.tensor
        x = random_element(A, rng)
        assert one_form_involution(d_u(x)).tensor == d_u(x.star()).tensor
        t = one_form_product(w, random_one_form(A, rng))
        assert two_form_involution(two_form_involution(t)) == t


# -- degree two ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", ["M2", "CC", "T2"])
def test_degree_two_laws(name, rng):
    A = bundled(name)
    for _ in range(3):
        x, y = random_element(A, rng), random_element(A, rng)
        assert d_u_one_form(d_u(x)).is_zero()
        # d(x dy) = dx dy
        assert d_u_one_form(d_u(y).left(x)) == one_form_product(d_u(x), d_u(y))
        p = one_form_product(random_one_form(A, rng), random_one_form(A, rng))
        assert omega2_contains(A, p)
    assert not omega2_contains(A, UniversalTwoForm(A, {(0, 0, 0): ONE}, check=False))
    with pytest.raises(InvalidAlgebra):
        UniversalTwoForm(A, {(0, 0, 0): ONE})


# -- projection to derivation-based forms -----------------------------------------------------

@pytest.mark.parametrize("name", BUNDLED)
def test_projection_of_d_u_is_d(name, rng):
    A = bundled(name)
    for k in range(A.dim):
        assert project_to_der(d_u(A.basis(k))) == d(A.basis(k))
    x = random_element(A, rng)
    assert project_to_der(d_u(x)) == d(x)


def test_projection_is_bimodule_map(M2, rng):
    w = random_one_form(M2, rng)
    for i in range(M2.dim):
        for j in range(M2.dim):
            x, y = M2.basis(i), M2.basis(j)
            assert project_to_der(w.left(x).right(y)) == project_to_der(w).left(x).right(y)


def test_projection_of_product(M2, rng):
    x, y, z = (random_element(M2, rng) for _ in range(3))
    w1, w2 = d_u(y).left(x), d_u(z)
    assert project_to_der(one_form_product(w1, w2)) == project_to_der(w1) * project_to_der(w2)


def test_projection_kernel_on_cc(CC):
    assert omega1_basis(CC).dim == 2
    for v in omega1_basis(CC).vectors:
        assert project_to_der(UniversalOneForm.from_flat(CC, v)).is_zero()


def test_inner_derivation_factors(M2, rng):
    a = random_element(M2, rng)
    X = inner_derivation(a)
    w = d_u(random_element(M2, rng)).left(random_element(M2, rng))
    assert universal_factor(X, w) == project_to_der(w)(X).coeffs
