import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncdg.algebra import inner_derivation, lie_bracket
from ncdg.errors import DegreeZero
from ncdg.fleet import bundled
from ncdg.forms import (
    DerForm,
    MinimalSpan,
    biduality_rank,
    d,
    differential,
    form_dimension,
    form_involution,
    form_product,
    function_form,
    interior_product,
    is_z_multilinear,
    lie_derivative,
    lie_derivative_by_action,
    minimal_membership,
    monomial,
    random_element,
    random_form,
    zero_form,
)
from ncdg.scalar import Scalar

from oracles import cf, differential_on_derivations, product_by_permutations

seeds = st.integers(0, 10**6)
degrees = st.integers(0, 3)


def random_derivation(A, rng):
    return A.der.combine([Scalar(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(A.der.dim)])


def cfv(v):
    return [cf(x) for x in v]


def evaluator(omega):
    def ev(args):
        if omega.degree == 0:
            return omega.value(())
        return omega(*args).coeffs
    return ev


# -- examples ---------------------------------------------------------------------------

def test_degree_zero_product_is_algebra_product(M2, rng):
    x, y = random_element(M2, rng), random_element(M2, rng)
    assert form_product(function_form(x), function_form(y)) == function_form(x * y)


def test_d_of_unit_is_zero(M2, M3):
    assert d(M2.one()).is_zero() and d(M3.one()).is_zero()


def test_interior_of_dx_is_action(M2, rng):
    x = random_element(M2, rng)
    for X in M2.der.elements:
        assert interior_product(X, d(x)) == function_form(X(x))


def test_interior_twice_is_zero(M3, rng):
    X = random_derivation(M3, rng)
    omega = random_form(M3, 3, rng)
    assert interior_product(X, interior_product(X, omega)).is_zero()


def test_interior_of_zero_form_raises(M2):
    with pytest.raises(DegreeZero):
        interior_product(0, function_form(M2.one()))


def test_lie_on_functions_is_action(M2, rng):
    x = random_element(M2, rng)
    X = random_derivation(M2, rng)
    assert lie_derivative(X, function_form(x)) == function_form(X(x))


def test_lie_commutator_on_two_form(M2, rng):
    X, Y = random_derivation(M2, rng), random_derivation(M2, rng)
    w = random_form(M2, 2, rng)
    lhs = lie_derivative(lie_bracket(X, Y), w)
    rhs = lie_derivative(X, lie_derivative(Y, w)) - lie_derivative(Y, lie_derivative(X, w))
    assert lhs == rhs


def test_involution_twice_and_hermitian_d(M2, rng):
    w = random_form(M2, 2, rng)
    assert form_involution(form_involution(w)) == w
    x = random_element(M2, rng)
    h = x + x.star()
    assert form_involution(d(h)) == d(h)


def test_dx_inside_minimal_with_certificate(M2, rng):
    for k in range(M2.dim):
        m = minimal_membership(d(M2.basis(k)))
        assert m.inside
        rebuilt = zero_form(M2, 1)
        for c, word in m.certificate:
            rebuilt = rebuilt + c * monomial(M2, word)
        assert rebuilt == d(M2.basis(k))


@pytest.mark.parametrize("name, top", [("M2", 3), ("M3", 3)])
def test_minimal_span_is_everything_for_matrix_algebras(name, top):
    A = bundled(name)
    for n in range(1, top + 1):
        S = MinimalSpan(A, n)
        assert S.is_full() and S.dim == form_dimension(A, n)


def test_certificate_for_random_form(M3, rng):
    w = random_form(M3, 2, rng)
    S = MinimalSpan(M3, 2)
    m = S.membership(w)
    assert m.inside
    rebuilt = zero_form(M3, 2)
    for c, word in m.certificate:
        rebuilt = rebuilt + c * monomial(M3, word)
    assert rebuilt == w


def test_cc_has_only_zero_forms(CC, rng):
    assert CC.der.dim == 0
    for n in (1, 2, 3):
        assert form_dimension(CC, n) == 0
        assert random_form(CC, n, rng).is_zero()
        assert d(random_element(CC, rng)).is_zero()


def test_minimal_span_strictly_smaller_somewhere():
    assert MinimalSpan(bundled("kronecker"), 1).dim < form_dimension(bundled("kronecker"), 1)


def test_biduality_rank():
    assert biduality_rank(bundled("M2")) == 3
    assert biduality_rank(bundled("M3")) == 8


# -- independent routes ---------------------------------------------------------------------

@pytest.mark.parametrize("name", ["M2", "M3", "T2", "kronecker"])
def test_product_matches_permutation_sum(name, rng):
    A = bundled(name)
    for a, b in ((1, 1), (1, 2), (2, 1), (0, 2)):
        if a + b > A.der.dim:
            continue
        alpha, beta = random_form(A, a, rng), random_form(A, b, rng)
        args = [random_derivation(A, rng) for _ in range(a + b)]
        ours = form_product(alpha, beta)(*args).coeffs
        oracle = product_by_permutations(evaluator(alpha), a, evaluator(beta), b, A.mul, args)
        assert cfv(ours) == oracle


@pytest.mark.parametrize("name", ["M2", "M3", "T2", "kronecker", "crown"])
def test_differential_matches_chevalley_eilenberg_on_arbitrary_derivations(name, rng):
    A = bundled(name)
    for n in range(0, min(3, A.der.dim)):
        omega = random_form(A, n, rng)
        args = [random_derivation(A, rng) for _ in range(n + 1)]
        ours = differential(omega)(*args).coeffs
        oracle = differential_on_derivations(evaluator(omega), n, args, lambda X, v: X.apply(v), lie_bracket)
        assert cfv(ours) == oracle


@pytest.mark.parametrize("name", ["M2", "M3", "crown", "kronecker", "M2C"])
def test_cartan_formula_against_action(name, rng):
    A = bundled(name)
    for n in range(0, min(4, A.der.dim + 1)):
        omega = random_form(A, n, rng)
        X = random_derivation(A, rng)
        assert lie_derivative(X, omega) == lie_derivative_by_action(X, omega)


def test_inner_derivation_acts_by_commutator_in_degree_zero(M2, rng):
    a, x = random_element(M2, rng), random_element(M2, rng)
    assert lie_derivative(inner_derivation(a), function_form(x)) == function_form(a.commutator(x))


# -- properties ------------------------------------------------------------------------------

def _pick(seed):
    r = random.Random(seed)
    return bundled(r.choice(["M2", "M3"])), r


@given(seeds, degrees)
def test_d_squared_zero(seed, n):
    A, r = _pick(seed)
    assert differential(differential(random_form(A, n, r))).is_zero()


@given(seeds, degrees, degrees)
def test_graded_leibniz(seed, a, b):
    A, r = _pick(seed)
    if a + b > 3:
        b = 3 - a
    alpha, beta = random_form(A, a, r), random_form(A, b, r)
    lhs = differential(form_product(alpha, beta))
    sign = Scalar(-1) ** a if a else Scalar(1)
    rhs = form_product(differential(alpha), beta) + sign * form_product(alpha, differential(beta))
    assert lhs == rhs


@given(seeds)
def test_interior_graded_leibniz_and_anticommutation(seed):
    A, r = _pick(seed)
    X, Y = random_derivation(A, r), random_derivation(A, r)
    alpha, beta = random_form(A, 1, r), random_form(A, 2, r)
    lhs = interior_product(X, form_product(alpha, beta))
    rhs = form_product(interior_product(X, alpha), beta) - form_product(alpha, interior_product(X, beta))
    assert lhs == rhs
    w = random_form(A, 3, r)
    assert (interior_product(X, interior_product(Y, w)) + interior_product(Y, interior_product(X, w))).is_zero()


@given(seeds)
def test_lie_interior_commutator(seed):
    A, r = _pick(seed)
    X, Y = random_derivation(A, r), random_derivation(A, r)
    w = random_form(A, r.randint(1, 3), r)
    lhs = lie_derivative(X, interior_product(Y, w)) - interior_product(Y, lie_derivative(X, w))
    assert lhs == interior_product(lie_bracket(X, Y), w)


@given(seeds)
def test_product_associative(seed):
    A, r = _pick(seed)
    a, b, c = random_form(A, 1, r), random_form(A, 1, r), random_form(A, r.randint(0, 1), r)
    assert form_product(form_product(a, b), c) == form_product(a, form_product(b, c))


@given(seeds, degrees, degrees)
def test_involution_laws(seed, a, b):
    A, r = _pick(seed)
    if a + b > 3:
        b = 3 - a
    alpha, beta = random_form(A, a, r), random_form(A, b, r)
    assert form_involution(form_involution(alpha)) == alpha
    assert form_involution(differential(alpha)) == differential(form_involution(alpha))
    sign = Scalar(-1) ** (a * b) if a * b else Scalar(1)
    assert form_involution(form_product(alpha, beta)) == sign * form_product(form_involution(beta), form_involution(alpha))


@pytest.mark.parametrize("name", ["M2C", "dual", "CC", "T2", "M2"])
def test_api_forms_are_z_multilinear(name, rng):
    A = bundled(name)
    for n in range(0, min(3, A.der.dim) + 1):
        w = random_form(A, n, rng)
        assert is_z_multilinear(w)
        assert is_z_multilinear(differential(w))


def test_form_equality_respects_degree(M2):
    assert DerForm(M2, 1, {}) != DerForm(M2, 2, {})
