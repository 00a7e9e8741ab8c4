import random

import pytest

from ncdg.algebra import inner_derivation, lie_bracket
from ncdg.errors import CenterNotTrivial, Degenerate, NonUnique, NotCentral, NotNormalized, NotSymplectic, OuterDerivationsExist
from ncdg.fleet import bundled
from ncdg.forms import DerForm, d, differential, form_involution, random_element, random_form, zero_form
from ncdg.scalar import I, ONE, ZERO, Scalar
from ncdg.symplectic import (
    canonical_symplectic,
    canonical_theta,
    check_trace,
    hamiltonian,
    hamiltonian_bracket_table,
    is_closed,
    is_nondegenerate,
    is_real,
    is_symplectic,
    nondegeneracy_witness,
    poisson_bracket,
    poisson_table,
    search_nonclosed_nondegenerate,
    trace_form,
)

from oracles import PAULI, matrix_to_coeffs


def pauli(A, k):
    return A.element([Scalar(c.re, c.im) for c in matrix_to_coeffs(PAULI[k])])


@pytest.fixture(scope="module")
def omega2():
    return canonical_symplectic(bundled("M2"))


@pytest.fixture(scope="module")
def omega3():
    return canonical_symplectic(bundled("M3"))


def test_pauli_value(M2, omega2):
    s1, s2, s3 = (pauli(M2, k) for k in (1, 2, 3))
    X, Y = inner_derivation(I * s1), inner_derivation(I * s2)
    assert omega2(X, Y) == Scalar(-2) * s3


def test_hamiltonian_is_ad_ix(M2, M3, omega2, omega3, rng):
    for A, w in ((M2, omega2), (M3, omega3)):
        for _ in range(4):
            x = random_element(A, rng)
            h = x + x.star()
            assert hamiltonian(w, h) == inner_derivation(I * h)
            assert hamiltonian(w, x) == inner_derivation(I * x)
        assert hamiltonian(w, A.one()).is_zero()


def test_zero_form_is_degenerate(M2):
    zero = zero_form(M2, 2)
    with pytest.raises(Degenerate):
        hamiltonian(zero, M2.basis(1))
    assert not is_nondegenerate(zero)


def test_canonical_is_symplectic_and_real(omega2, omega3):
    for w in (omega2, omega3):
        assert is_closed(w) and is_nondegenerate(w) and is_symplectic(w)
        assert is_real(w) and form_involution(w) == w


def test_rank_deficient_form_has_witness(omega3):
    cut = DerForm(omega3.algebra, 2, {k: v for k, v in omega3.components.items() if 0 not in k})
    witness = nondegeneracy_witness(cut)
    assert witness is not None
    x = omega3.algebra.basis(witness[0])
    with pytest.raises((Degenerate, NonUnique)):
        hamiltonian(cut, x)


def test_theta_is_primitive(M2, M3):
    for A, n in ((M2, 2), (M3, 3)):
        tau = tuple(Scalar(1, 0) / n if k % (n + 1) == 0 else ZERO for k in range(n * n))
        assert trace_form(A) == tau
        assert differential(canonical_theta(A, tau)) == canonical_symplectic(A)


def test_unnormalized_trace_rejected(M2):
    with pytest.raises(NotNormalized):
        canonical_theta(M2, (ONE, ZERO, ZERO, ONE))


def test_noncentral_functional_rejected(M2):
    with pytest.raises(NotCentral):
        check_trace(M2, (ONE, ZERO, ZERO, ZERO))


def test_perturbed_form_not_symplectic(M2, omega2, rng):
    w = omega2 + random_form(M2, 2, rng)
    assert not is_closed(w)
    assert not is_symplectic(w)


def test_poisson_bracket_is_i_commutator(M2, M3, omega2, omega3, rng):
    for A, w in ((M2, omega2), (M3, omega3)):
        table = poisson_table(w)
        for _ in range(4):
            x, y = random_element(A, rng), random_element(A, rng)
            assert table(x, y) == I * x.commutator(y)
            assert poisson_bracket(w, x, x) == A.zero()
            assert poisson_bracket(w, x, A.one()) == A.zero()
        assert table.antisymmetry_violation() is None
        assert table.jacobi_violation() is None
        assert table.leibniz_violation() is None


def test_hamiltonian_is_lie_homomorphism(M2, omega2, rng):
    table = poisson_table(omega2)
    for _ in range(4):
        x, y = random_element(M2, rng), random_element(M2, rng)
        lhs = lie_bracket(hamiltonian(omega2, x), hamiltonian(omega2, y))
        assert lhs == hamiltonian(omega2, table(x, y))


def test_reality_of_bracket(M3, omega3, rng):
    table = poisson_table(omega3)
    x, y = random_element(M3, rng), random_element(M3, rng)
    h, k = x + x.star(), y + y.star()
    b = table(h, k)
    assert b.star() == b


def test_preconditions():
    with pytest.raises(CenterNotTrivial):
        canonical_symplectic(bundled("CC"))
    with pytest.raises(CenterNotTrivial):
        canonical_symplectic(bundled("M2C"))
    with pytest.raises(OuterDerivationsExist):
        canonical_symplectic(bundled("kronecker"))
    with pytest.raises(OuterDerivationsExist):
        canonical_symplectic(bundled("crown"))


def test_nonclosed_form_breaks_jacobi():
    A = bundled("kronecker")
    w = search_nonclosed_nondegenerate(A, random.Random(0))
    assert w is not None
    assert not is_closed(w) and is_nondegenerate(w)
    witness = hamiltonian_bracket_table(w).jacobi_violation()
    assert witness is not None
    x, y, z = (A.basis(i) for i in witness)
    t = hamiltonian_bracket_table(w)
    assert t(x, t(y, z)) + t(y, t(z, x)) + t(z, t(x, y)) != A.zero()
    with pytest.raises(NotSymplectic):
        poisson_table(w)


def test_dx_hamiltonian_pairing(M2, omega2, rng):
    # omega(X, Ham x) = X(x) = (dx)(X)
    x = random_element(M2, rng)
    H = hamiltonian(omega2, x)
    for X in M2.der.elements:
        assert omega2(X, H) == d(x)(X)
