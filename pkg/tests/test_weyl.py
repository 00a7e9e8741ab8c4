import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncdg.errors import DegreeExceeded, HbarDivisionFailure
from ncdg.scalar import I, ONE, Scalar
from ncdg.weyl import (
    HBAR,
    P,
    Q,
    UNIT,
    WeylElement,
    classical_bracket,
    classical_limit,
    commutator,
    divide_by_hbar,
    format_weyl,
    monomial_pairs,
    monomials,
    omega_ccr_eval,
    poly_mul,
    poly_sub,
    quantum_poisson,
    random_weyl,
    weyl_involution,
)

from oracles import cf, weyl_word_product

seeds = st.integers(0, 10**6)


def as_oracle(x):
    return {k: cf(v) for k, v in x.coeffs.items()}


def rnd(seed, n=3, degree=3):
    r = random.Random(seed)
    return [random_weyl(r, degree) for _ in range(n)]


def test_normal_order_examples():
    assert Q * P == WeylElement.monomial(1, 1)
    assert P * Q == Q * P - I * HBAR
    assert (Q * P) * Q == Q * (P * Q)
    assert commutator(Q, P) == I * HBAR


def test_involution_examples():
    assert weyl_involution(Q) == Q and weyl_involution(P) == P
    assert weyl_involution(Q * P) == Q * P - I * HBAR
    assert weyl_involution(I * Q) == -I * Q


def test_bracket_examples():
    assert quantum_poisson(Q, P) == -UNIT
    assert quantum_poisson(Q * Q, P) == Scalar(-2) * Q
    x = Q * Q + P
    assert quantum_poisson(x, x) == WeylElement()
    assert commutator(Q ** 2, P ** 2) == Scalar(0, 4) * HBAR * Q * P + Scalar(2) * HBAR * HBAR


def test_series_examples():
    assert omega_ccr_eval(Q, P, 1) == -UNIT
    assert omega_ccr_eval(Q ** 2, P ** 2, 4) == quantum_poisson(Q ** 2, P ** 2)
    assert omega_ccr_eval(Q ** 3, Q ** 3, 4) == WeylElement()


def test_series_degree_guard():
    with pytest.raises(DegreeExceeded):
        omega_ccr_eval(Q ** 3, P, 2)


def test_classical_limit_examples():
    assert classical_limit(Q * P - I * HBAR) == {(1, 1): ONE}
    lhs = classical_limit(quantum_poisson(Q ** 2, P ** 2))
    assert lhs == {(1, 1): Scalar(-4)}
    assert lhs == classical_bracket({(2, 0): ONE}, {(0, 2): ONE})
    assert classical_bracket({(1, 0): ONE}, {(0, 1): ONE}) == {(0, 0): Scalar(-1)}


def test_series_leading_term_is_dp_dq():
    # the n = 0 term at hbar = 0 is X(p) Y(q) - Y(p) X(q), the dp dq pairing of the classical fields
    for x, y in monomial_pairs(3):
        Xp, Xq = classical_limit(quantum_poisson(x, P)), classical_limit(quantum_poisson(x, Q))
        Yp, Yq = classical_limit(quantum_poisson(y, P)), classical_limit(quantum_poisson(y, Q))
        term0 = poly_sub(poly_mul(Xp, Yq), poly_mul(Yp, Xq))
        assert term0 == classical_bracket(classical_limit(x), classical_limit(y))


def test_divide_by_hbar_failure():
    with pytest.raises(HbarDivisionFailure):
        divide_by_hbar(Q + HBAR)


def test_monomial_enumeration():
    assert len(monomials(5)) == 21
    assert len(monomial_pairs(5)) == 441


def test_format():
    assert format_weyl(Q * P - I * HBAR) == "q*p + (-1*i)*hbar"
    assert format_weyl(WeylElement()) == "0"


# -- properties -----------------------------------------------------------------------------

@given(seeds)
def test_product_matches_word_rewriting(seed):
    x, y, _ = rnd(seed)
    assert as_oracle(x * y) == weyl_word_product(as_oracle(x), as_oracle(y))


@given(seeds)
def test_associative_and_distributive(seed):
    x, y, z = rnd(seed)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@given(seeds)
def test_involution_antihomomorphism(seed):
    x, y, _ = rnd(seed)
    assert weyl_involution(weyl_involution(x)) == x
    assert weyl_involution(x * y) == weyl_involution(y) * weyl_involution(x)


@given(seeds)
def test_bracket_laws(seed):
    x, y, z = rnd(seed, degree=2)
    b = lambda u, v: quantum_poisson(u, v)
    assert b(x, y) == -b(y, x)
    assert b(x, y * z) == b(x, y) * z + y * b(x, z)
    assert (b(x, b(y, z)) + b(y, b(z, x)) + b(z, b(x, y))).is_zero()


@given(seeds)
def test_series_equals_bracket_on_random_elements(seed):
    x, y, _ = rnd(seed, degree=4)
    assert omega_ccr_eval(x, y, 4) == quantum_poisson(x, y)


@given(seeds)
def test_classical_limit_intertwines_brackets(seed):
    x, y, _ = rnd(seed, degree=4)
    assert classical_limit(quantum_poisson(x, y)) == classical_bracket(classical_limit(x), classical_limit(y))
