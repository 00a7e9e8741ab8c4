"""The one-dimensional Weyl (CCR) algebra with hbar as a formal parameter.

Elements are normal-ordered polynomials ``sum c[m,n,k] hbar^k q^m p^n`` with every
``q`` to the left of every ``p``; the defining relation is ``[q, p] = i hbar``.
"""

from __future__ import annotations

import random
from math import comb, factorial

from .errors import DegreeExceeded, HbarDivisionFailure
from .scalar import I, ONE, ZERO, Scalar, as_scalar, format_scalar


def _clean(coeffs: dict) -> dict:
    return {key: c for key, c in coeffs.items() if c}


class WeylElement:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        acc = {}
        for (m, n, k), c in (coeffs or {}).items():
            if m < 0 or n < 0 or k < 0:
                raise ValueError(f"negative exponent in {(m, n, k)}")
            acc[(m, n, k)] = acc.get((m, n, k), ZERO) + as_scalar(c)
        self.coeffs = _clean(acc)

    @classmethod
    def scalar(cls, c) -> "WeylElement":
        return cls({(0, 0, 0): c})

    @classmethod
    def monomial(cls, m: int, n: int, k: int = 0, c=ONE) -> "WeylElement":
        return cls({(m, n, k): c})

    def degree(self) -> int:
        """Total degree in q and p (hbar not counted); -1 for zero."""
        return max((m + n for m, n, _ in self.coeffs), default=-1)

    def is_zero(self) -> bool:
        return not self.coeffs

    def hbar_slice(self, k: int) -> dict:
        """Coefficients of ``hbar^k`` as a map ``(m, n) -> Scalar``."""
        return {(m, n): c for (m, n, j), c in self.coeffs.items() if j == k}

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        acc = dict(self.coeffs)
        for key, c in other.coeffs.items():
            acc[key] = acc.get(key, ZERO) + c
        return WeylElement(acc)

    __radd__ = __add__

    def __neg__(self):
        return WeylElement({key: -c for key, c in self.coeffs.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, WeylElement):
            return weyl_multiply(self, other)
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return weyl_multiply(self, other)

    def __rmul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return weyl_multiply(other, self)

    def __pow__(self, e: int):
        out = WeylElement.scalar(ONE)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        return f"WeylElement({format_weyl(self)!r})"

    def __str__(self):
        return format_weyl(self)


def _coerce(x):
    if isinstance(x, WeylElement):
        return x
    try:
        return WeylElement.scalar(as_scalar(x))
    except (TypeError, ValueError):
        return None


Q = WeylElement.monomial(1, 0)
P = WeylElement.monomial(0, 1)
HBAR = WeylElement.monomial(0, 0, 1)
UNIT = WeylElement.scalar(ONE)


def _reorder(b: int, c: int):
    """``p^b q^c`` in normal order: yields ``(coefficient, hbar power, q power, p power)``."""
    for j in range(min(b, c) + 1):
        coeff = Scalar(factorial(j) * comb(b, j) * comb(c, j)) * (-I) ** j
        yield coeff, j, c - j, b - j


def weyl_multiply(a: WeylElement, b: WeylElement) -> WeylElement:
    acc = {}
    for (m1, n1, k1), c1 in a.coeffs.items():
        for (m2, n2, k2), c2 in b.coeffs.items():
            c12 = c1 * c2
            for coeff, j, qs, ps in _reorder(n1, m2):
                key = (m1 + qs, ps + n2, k1 + k2 + j)
                acc[key] = acc.get(key, ZERO) + c12 * coeff
    return WeylElement(acc)


def commutator(x: WeylElement, y: WeylElement) -> WeylElement:
    return x * y - y * x


def weyl_involution(a: WeylElement) -> WeylElement:
    """Antilinear antihomomorphism fixing q, p and hbar: ``(q^m p^n)* = p^n q^m``."""
    out = WeylElement()
    for (m, n, k), c in a.coeffs.items():
        out = out + WeylElement.monomial(0, n, k, c.conjugate()) * WeylElement.monomial(m, 0)
    return out


def divide_by_hbar(a: WeylElement, power: int = 1) -> WeylElement:
    acc = {}
    for (m, n, k), c in a.coeffs.items():
        if k < power:
            raise HbarDivisionFailure(f"term hbar^{k} q^{m} p^{n} is not divisible by hbar^{power}")
        acc[(m, n, k - power)] = c
    return WeylElement(acc)


def quantum_poisson(x: WeylElement, y: WeylElement) -> WeylElement:
    """``{x, y} = (i / hbar) [x, y]``."""
    return I * divide_by_hbar(commutator(x, y))


def hamiltonian_derivation(x: WeylElement):
    """``X_x = ad((i / hbar) x)``, returned as a callable."""
    return lambda u: quantum_poisson(x, u)


def _ad_right(u: WeylElement, g: WeylElement, times: int) -> WeylElement:
    """``[...[u, g], ..., g]`` with ``times`` brackets."""
    for _ in range(times):
        if u.is_zero():
            break
        u = commutator(u, g)
    return u


def omega_ccr_eval(x: WeylElement, y: WeylElement, max_degree: int) -> WeylElement:
    """Evaluate the series for the symplectic form on the Hamiltonian derivations of x and y.

    Term n contributes ``(1/(i hbar))^n / (n+1)! * (A_n(X_x) B_n(X_y) - A_n(X_y) B_n(X_x))``
    where ``A_n(X) = ad_p^n(X(p))`` and ``B_n(X) = ad_q^n(X(q))``; each iterated
    commutator lowers the degree, so only finitely many terms are nonzero.
    """
    for name, v in (("x", x), ("y", y)):
        if v.degree() > max_degree:
            raise DegreeExceeded(f"{name} has degree {v.degree()} > {max_degree}")
    Xx, Xy = hamiltonian_derivation(x), hamiltonian_derivation(y)
    xp, xq, yp, yq = Xx(P), Xx(Q), Xy(P), Xy(Q)
    total = WeylElement()
    n = 0
    while True:
        a_x, b_y = _ad_right(xp, P, n), _ad_right(yq, Q, n)
        a_y, b_x = _ad_right(yp, P, n), _ad_right(xq, Q, n)
        # once both products vanish they stay zero: ad of zero is zero
        if (a_x.is_zero() or b_y.is_zero()) and (a_y.is_zero() or b_x.is_zero()):
            break
        term = a_x * b_y - a_y * b_x
        # (1/(i hbar))^n = (-i)^n hbar^-n; each ad^n image is divisible by hbar^n
        total = total + (Scalar(1) / factorial(n + 1)) * (-I) ** n * divide_by_hbar(term, n)
        n += 1
    return total


# -- classical limit ------------------------------------------------------------------------

def classical_limit(a: WeylElement) -> dict:
    """The hbar^0 slice as a commutative polynomial ``(m, n) -> coefficient of q^m p^n``."""
    return a.hbar_slice(0)


def poly_mul(f: dict, g: dict) -> dict:
    acc = {}
    for (m1, n1), c1 in f.items():
        for (m2, n2), c2 in g.items():
            key = (m1 + m2, n1 + n2)
            acc[key] = acc.get(key, ZERO) + c1 * c2
    return _clean(acc)


def poly_sub(f: dict, g: dict) -> dict:
    acc = dict(f)
    for key, c in g.items():
        acc[key] = acc.get(key, ZERO) - c
    return _clean(acc)


def poly_dq(f: dict) -> dict:
    return _clean({(m - 1, n): c * m for (m, n), c in f.items() if m})


def poly_dp(f: dict) -> dict:
    return _clean({(m, n - 1): c * n for (m, n), c in f.items() if n})


def classical_bracket(f: dict, g: dict) -> dict:
    """``{f, g} = df/dp dg/dq - df/dq dg/dp``, the sign for which ``{q, p} = -1``."""
    return poly_sub(poly_mul(poly_dp(f), poly_dq(g)), poly_mul(poly_dq(f), poly_dp(g)))


# -- enumeration, sampling and formatting --------------------------------------------------

def monomials(max_degree: int) -> list:
    """All ``q^m p^n`` with ``m + n <= max_degree`` in graded lexicographic order."""
    return [
        WeylElement.monomial(m, d - m)
        for d in range(max_degree + 1)
        for m in range(d, -1, -1)
    ]


def monomial_pairs(max_degree: int) -> list:
    """All ordered pairs of monomials, each of total degree at most ``max_degree``."""
    mons = monomials(max_degree)
    return [(x, y) for x in mons for y in mons]


def random_weyl(rng: random.Random, max_degree: int, terms: int = 3, hbar_degree: int = 1) -> WeylElement:
    acc = {}
    for _ in range(terms):
        d = rng.randint(0, max_degree)
        m = rng.randint(0, d)
        key = (m, d - m, rng.randint(0, hbar_degree))
        acc[key] = Scalar(rng.randint(-3, 3), rng.randint(-3, 3))
    return WeylElement(acc)


def _fmt_term(parts: list) -> str:
    return "*".join(parts) if parts else "1"


def _powers(m: int, n: int, k: int) -> list:
    out = []
    for sym, e in (("hbar", k), ("q", m), ("p", n)):
        if e == 1:
            out.append(sym)
        elif e > 1:
            out.append(f"{sym}^{e}")
    return out


def format_weyl(a: WeylElement) -> str:
    if a.is_zero():
        return "0"
    terms = []
    for (m, n, k) in sorted(a.coeffs, key=lambda t: (-(t[0] + t[1]), -t[0], t[2])):
        c = a.coeffs[(m, n, k)]
        mon = _fmt_term(_powers(m, n, k))
        terms.append(mon if c == ONE else f"({format_scalar(c)})*{mon}")
    return " + ".join(terms)


def format_poly(f: dict) -> str:
    if not f:
        return "0"
    terms = []
    for (m, n) in sorted(f, key=lambda t: (-(t[0] + t[1]), -t[0])):
        c = f[(m, n)]
        mon = _fmt_term(_powers(m, n, 0))
        terms.append(mon if c == ONE else f"({format_scalar(c)})*{mon}")
    return " + ".join(terms)
