"""Alternating A-valued forms on Der(A) and their Cartan calculus.

A degree-n form is stored by its components on strictly increasing index
tuples of the canonical Der(A) basis, ``components[(a1, ..., an)] =
omega(X_a1, ..., X_an)``, zero components omitted.  Values are coefficient
tuples of the algebra.

Products use the shuffle convention without factorial normalisation::

    (alpha beta)(X_1..X_{a+b}) = sum over (a,b)-shuffles s of
        sgn(s) alpha(X_s(1)..X_s(a)) beta(X_s(a+1)..X_s(a+b))
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .algebra import Algebra, AlgebraElement, Derivation
from .errors import AlgebraMismatch, DegreeZero
from .linalg import Echelon, SubspaceBasis
from .scalar import ONE, ZERO, Scalar, as_scalar

DEFAULT_MAX_DEGREE = 4


def _sign_sorted(indices) -> tuple[int, tuple]:
    """Sign of the sorting permutation and the sorted tuple; sign 0 on repeats."""
    idx = list(indices)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
        if j > 0 and idx[j - 1] == idx[j]:
            return 0, ()
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return 0, ()
    return sign, tuple(idx)


def _insert_front(t: int, rest: tuple) -> tuple[int, tuple]:
    """Sort ``(t, *rest)`` for an already sorted ``rest``."""
    p = 0
    for r in rest:
        if r == t:
            return 0, ()
        if r > t:
            break
        p += 1
    return (-1 if p & 1 else 1), rest[:p] + (t,) + rest[p:]


def _acc(acc: list, c: Scalar, v: tuple) -> None:
    for k, x in enumerate(v):
        if x:
            acc[k] = acc[k] + c * x


def _shuffle_sign(S: tuple, n: int) -> int:
    # parity of the permutation listing S then its complement
    inv = sum(s - k for k, s in enumerate(S))
    return -1 if inv & 1 else 1


class DerForm:
    """An element of the degree-``degree`` part of the maximal derivation calculus."""

    __slots__ = ("algebra", "degree", "components")

    def __init__(self, algebra: Algebra, degree: int, components: dict):
        self.algebra = algebra
        self.degree = degree
        self.components = {k: tuple(v) for k, v in components.items() if any(v)}

    # -- evaluation ---------------------------------------------------------
    def value(self, indices) -> tuple:
        """``omega(X_i1, ..., X_in)`` on basis indices in any order."""
        sign, key = _sign_sorted(indices)
        if not sign:
            return self.algebra.zero_vector
        v = self.components.get(key)
        if v is None:
            return self.algebra.zero_vector
        return v if sign > 0 else tuple(-x for x in v)

    def __call__(self, *derivations) -> AlgebraElement:
        """Evaluate on arbitrary derivations (expanded multilinearly)."""
        if len(derivations) != self.degree:
            raise ValueError(f"form of degree {self.degree} takes {self.degree} arguments")
        D = self.algebra.der
        coords = [D.sparse_coords(X) if isinstance(X, Derivation) else dict(X) for X in derivations]
        acc = [ZERO] * self.algebra.dim

        def rec(k, idx, coef):
            if k == len(coords):
                _acc(acc, coef, self.value(idx))
                return
            for a, c in coords[k].items():
                rec(k + 1, idx + (a,), coef * c)

        rec(0, (), ONE)
        return AlgebraElement(self.algebra, tuple(acc))

    # -- vector-space and bimodule structure ---------------------------------
    def _same(self, other):
        if other.algebra is not self.algebra:
            raise AlgebraMismatch("forms over different algebras")
        if other.degree != self.degree:
            raise ValueError("forms of different degree")

    def __add__(self, other):
        self._same(other)
        comps = dict(self.components)
        for k, v in other.components.items():
            comps[k] = tuple(a + b for a, b in zip(comps[k], v)) if k in comps else v
        return DerForm(self.algebra, self.degree, comps)

    def __neg__(self):
        return DerForm(self.algebra, self.degree, {k: tuple(-x for x in v) for k, v in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        if isinstance(c, AlgebraElement):
            return self.left(c)
        c = as_scalar(c)
        return DerForm(self.algebra, self.degree, {k: tuple(c * x for x in v) for k, v in self.components.items()})

    def __mul__(self, other):
        if isinstance(other, DerForm):
            return form_product(self, other)
        if isinstance(other, AlgebraElement):
            return self.right(other)
        return as_scalar(other) * self

    def left(self, x: AlgebraElement) -> "DerForm":
        A = self.algebra
        return DerForm(A, self.degree, {k: A.mul(x.coeffs, v) for k, v in self.components.items()})

    def right(self, y: AlgebraElement) -> "DerForm":
        A = self.algebra
        return DerForm(A, self.degree, {k: A.mul(v, y.coeffs) for k, v in self.components.items()})

    def __eq__(self, other):
        if not isinstance(other, DerForm):
            return NotImplemented
        return (
            self.algebra is other.algebra
            and self.degree == other.degree
            and self.components == other.components
        )

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.components.items()))))

    def is_zero(self) -> bool:
        return not self.components

    def to_vector(self) -> dict:
        """Sparse coordinates in the (index tuple, algebra coordinate) basis."""
        n = self.algebra.dim
        pos = index_positions(self.algebra.der.dim, self.degree)
        out = {}
        for key, v in self.components.items():
            base = pos[key] * n
            for k, x in enumerate(v):
                if x:
                    out[base + k] = x
        return out

    def __repr__(self):
        return f"DerForm({self.algebra.name}, degree={self.degree}, nnz={len(self.components)})"


_POS_CACHE: dict = {}


def index_tuples(m: int, n: int) -> list[tuple]:
    return list(combinations(range(m), n))


def index_positions(m: int, n: int) -> dict:
    key = (m, n)
    pos = _POS_CACHE.get(key)
    if pos is None:
        pos = {t: i for i, t in enumerate(combinations(range(m), n))}
        _POS_CACHE[key] = pos
    return pos


def form_from_vector(A: Algebra, degree: int, vec: dict) -> DerForm:
    n = A.dim
    tuples = index_tuples(A.der.dim, degree)
    comps: dict = {}
    for idx, x in vec.items():
        t, k = divmod(idx, n)
        comps.setdefault(tuples[t], [ZERO] * n)[k] = x
    return DerForm(A, degree, comps)


def zero_form(A: Algebra, degree: int) -> DerForm:
    return DerForm(A, degree, {})


def function_form(x: AlgebraElement) -> DerForm:
    """``x`` as a 0-form."""
    return DerForm(x.algebra, 0, {(): x.coeffs})


def form_dimension(A: Algebra, degree: int) -> int:
    """Dimension of the space of all alternating components (C-multilinear)."""
    from math import comb

    return comb(A.der.dim, degree) * A.dim


# -- operations -----------------------------------------------------------------

def form_product(alpha: DerForm, beta: DerForm) -> DerForm:
    if alpha.algebra is not beta.algebra:
        raise AlgebraMismatch("forms over different algebras")
    A = alpha.algebra
    a, b = alpha.degree, beta.degree
    m = A.der.dim
    comps = {}
    if not alpha.components or not beta.components:
        return DerForm(A, a + b, {})
    shuffles = [(S, tuple(k for k in range(a + b) if k not in S), _shuffle_sign(S, a + b))
                for S in combinations(range(a + b), a)]
    ac, bc = alpha.components, beta.components
    for I in combinations(range(m), a + b):
        acc = None
        for S, C, sign in shuffles:
            u = ac.get(tuple(I[k] for k in S))
            if u is None:
                continue
            w = bc.get(tuple(I[k] for k in C))
            if w is None:
                continue
            p = A.mul(u, w)
            if acc is None:
                acc = [ZERO] * A.dim
            _acc(acc, ONE if sign > 0 else -ONE, p)
        if acc is not None:
            comps[I] = tuple(acc)
    return DerForm(A, a + b, comps)


def differential(omega: DerForm) -> DerForm:
    """Chevalley-Eilenberg differential evaluated on basis derivations.

    (d w)(X_0..X_n) = sum_k (-1)^k X_k w(..^k..)
                      + sum_{r<s} (-1)^(r+s) w([X_r, X_s], ..^r..^s..)
    """
    A = omega.algebra
    D = A.der
    n = omega.degree
    m = D.dim
    comps = omega.components
    out = {}
    if not comps:
        return DerForm(A, n + 1, {})
    minus = -ONE
    for I in combinations(range(m), n + 1):
        acc = [ZERO] * A.dim
        hit = False
        for k, ik in enumerate(I):
            v = comps.get(I[:k] + I[k + 1:])
            if v is not None:
                img = D.elements[ik].apply(v)
                _acc(acc, ONE if k % 2 == 0 else minus, img)
                hit = True
        for r in range(n + 1):
            for s in range(r + 1, n + 1):
                bracket = D.bracket[I[r]][I[s]]
                if not bracket:
                    continue
                rest = I[:r] + I[r + 1:s] + I[s + 1:]
                base = 1 if (r + s) % 2 == 0 else -1
                for t, f in bracket.items():
                    sign, key = _insert_front(t, rest)
                    if not sign:
                        continue
                    v = comps.get(key)
                    if v is not None:
                        _acc(acc, f if base * sign > 0 else -f, v)
                        hit = True
        if hit and any(acc):
            out[I] = tuple(acc)
    return DerForm(A, n + 1, out)


def d(x) -> DerForm:
    """Differential of an algebra element (as a 0-form) or of a form."""
    if isinstance(x, AlgebraElement):
        return differential(function_form(x))
    return differential(x)


def _der_coords(A: Algebra, X) -> dict:
    if isinstance(X, Derivation):
        if X.algebra is not A:
            raise AlgebraMismatch("derivation of a different algebra")
        return A.der.sparse_coords(X)
    if isinstance(X, int):
        return {X: ONE}
    return dict(X)


def interior_product(X, omega: DerForm) -> DerForm:
    """Contraction in the first slot: (i_X w)(X_1..X_{n-1}) = w(X, X_1..X_{n-1})."""
    if omega.degree == 0:
        raise DegreeZero("interior product of a 0-form")
    A = omega.algebra
    coords = _der_coords(A, X)
    n = omega.degree
    comps = {}
    for J in combinations(range(A.der.dim), n - 1):
        acc = None
        for a, c in coords.items():
            sign, key = _insert_front(a, J)
            if not sign:
                continue
            v = omega.components.get(key)
            if v is None:
                continue
            if acc is None:
                acc = [ZERO] * A.dim
            _acc(acc, c if sign > 0 else -c, v)
        if acc is not None:
            comps[J] = tuple(acc)
    return DerForm(A, n - 1, comps)


def lie_derivative(X, omega: DerForm) -> DerForm:
    """``L_X = d i_X + i_X d`` with ``i_X`` of a 0-form taken as 0."""
    out = interior_product(X, differential(omega))
    if omega.degree > 0:
        out = out + differential(interior_product(X, omega))
    return out


def lie_derivative_by_action(X, omega: DerForm) -> DerForm:
    """``(L_X w)(Y_1..Y_n) = X(w(Y_1..Y_n)) - sum_i w(Y_1.., [X, Y_i], ..Y_n)``.

    Computed from the action of Der(A) on forms, independently of d and i_X.
    """
    A = omega.algebra
    D = A.der
    n = omega.degree
    coords = _der_coords(A, X)
    comps = {}
    for I in combinations(range(D.dim), n):
        acc = [ZERO] * A.dim
        for a, c in coords.items():
            v = omega.components.get(I)
            if v is not None:
                _acc(acc, c, D.elements[a].apply(v))
            for pos, b in enumerate(I):
                for t, f in D.bracket[a][b].items():
                    _acc(acc, -c * f, omega.value(I[:pos] + (t,) + I[pos + 1:]))
        if any(acc):
            comps[I] = tuple(acc)
    return DerForm(A, n, comps)


def form_involution(omega: DerForm) -> DerForm:
    """``w*(X_1..X_n) = (w(X_1*, .., X_n*))*``."""
    A = omega.algebra
    D = A.der
    n = omega.degree
    comps = {}
    if not omega.components:
        return DerForm(A, n, {})
    for I in combinations(range(D.dim), n):
        acc = [ZERO] * A.dim
        hit = False

        def rec(k, idx, coef):
            nonlocal hit
            if k == n:
                sign, key = _sign_sorted(idx)
                if not sign:
                    return
                v = omega.components.get(key)
                if v is None:
                    return
                _acc(acc, (coef if sign > 0 else -coef).conjugate(), A.star(v))
                hit = True
                return
            for b, s in D.star[I[k]].items():
                rec(k + 1, idx + (b,), coef * s)

        rec(0, (), ONE)
        if hit and any(acc):
            comps[I] = tuple(acc)
    return DerForm(A, n, comps)


def z_multilinearity_violation(omega: DerForm):
    """First ``(center index, a, rest)`` where ``w(z X_a, ..) != z w(X_a, ..)``; None if none."""
    A = omega.algebra
    D = A.der
    n = omega.degree
    if n == 0:
        return None
    for c, z in enumerate(A.center_basis.vectors):
        action = D.center_action[c]
        for a in range(D.dim):
            for J in combinations(range(D.dim), n - 1):
                lhs = [ZERO] * A.dim
                for b, f in action[a].items():
                    sign, key = _insert_front(b, J)
                    if sign:
                        v = omega.components.get(key)
                        if v is not None:
                            _acc(lhs, f if sign > 0 else -f, v)
                sign, key = _insert_front(a, J)
                rhs = A.zero_vector
                if sign:
                    v = omega.components.get(key)
                    if v is not None:
                        rhs = A.mul(z, v) if sign > 0 else tuple(-x for x in A.mul(z, v))
                if tuple(lhs) != tuple(rhs):
                    return (c, a, J)
    return None


def is_z_multilinear(omega: DerForm) -> bool:
    return z_multilinearity_violation(omega) is None


# -- random forms ------------------------------------------------------------------

def random_scalar(rng: random.Random, bound: int = 2) -> Scalar:
    return Scalar(rng.randint(-bound, bound), rng.randint(-bound, bound))


def random_element(A: Algebra, rng: random.Random, density: float = 0.6) -> AlgebraElement:
    return A.element(
        [random_scalar(rng) if rng.random() < density else ZERO for _ in range(A.dim)]
    )


def random_form(A: Algebra, degree: int, rng: random.Random, density: float = 0.5) -> DerForm:
    """A seeded random form.

    With trivial center every component choice is Z(A)-multilinear; otherwise
    the form is drawn as a random combination of monomials ``x0 dx1 .. dxn``
    so it stays inside the Z(A)-multilinear forms.
    """
    D = A.der
    if degree > D.dim:
        return zero_form(A, degree)
    if A.has_trivial_center():
        comps = {}
        for I in combinations(range(D.dim), degree):
            if rng.random() < density:
                comps[I] = random_element(A, rng, density).coeffs
        return DerForm(A, degree, comps)
    out = zero_form(A, degree)
    for _ in range(3):
        term = function_form(random_element(A, rng))
        for _ in range(degree):
            term = form_product(term, d(random_element(A, rng)))
        out = out + term
    return out


# -- the minimal calculus ---------------------------------------------------------

@dataclass(frozen=True)
class Membership:
    inside: bool
    certificate: tuple  # ((coefficient, (x0, x1, .., xn) basis indices), ...)


class MinimalSpan:
    """Span of ``x0 dx1 .. dxn`` (basis ``x_i``) inside the degree-n forms.

    Built degree by degree as ``V_n = span(V_{n-1} . dA)``; every echelon row
    carries its expansion in the monomials so membership comes with a
    certificate.
    """

    def __init__(self, A: Algebra, degree: int):
        self.algebra = A
        self.degree = degree
        self._words: list[tuple] = []
        self._word_index: dict = {}
        ech, basis = self._build_level0()
        for level in range(1, degree + 1):
            ech, basis = self._extend(basis, level)
        self._echelon = ech
        self.dim = len(ech)

    def _word_col(self, word: tuple) -> int:
        col = self._word_index.get(word)
        if col is None:
            col = len(self._words)
            self._word_index[word] = col
            self._words.append(word)
        return col

    _OFFSET = 1 << 40  # provenance columns live above every form coordinate

    def _build_level0(self):
        A = self.algebra
        ech = Echelon()
        basis = []
        for i in range(A.dim):
            form = function_form(A.basis(i))
            prov = {(i,): ONE}
            self._insert(ech, basis, form, prov)
        return ech, basis

    def _insert(self, ech: Echelon, basis: list, form: DerForm, prov: dict) -> None:
        row = form.to_vector()
        if not row:
            return
        for word, c in prov.items():
            row[self._OFFSET + self._word_col(word)] = c
        reduced = ech.reduce(row)
        if reduced and min(reduced) < self._OFFSET:
            ech.insert(reduced)
            basis.append((form, prov))

    def _extend(self, basis, level):
        A = self.algebra
        ech = Echelon()
        new_basis = []
        dx = [d(A.basis(j)) for j in range(A.dim)]
        target = form_dimension(A, level)
        for form, prov in basis:
            for j in range(A.dim):
                if len(ech) >= target:
                    return ech, new_basis
                prod = form_product(form, dx[j])
                if prod.is_zero():
                    continue
                self._insert(ech, new_basis, prod, {w + (j,): c for w, c in prov.items()})
        return ech, new_basis

    def is_full(self) -> bool:
        return self.dim == form_dimension(self.algebra, self.degree)

    def membership(self, omega: DerForm) -> Membership:
        if omega.degree != self.degree or omega.algebra is not self.algebra:
            raise ValueError("form does not match this span")
        rem = self._echelon.reduce(omega.to_vector())
        if any(k < self._OFFSET for k in rem):
            return Membership(False, ())
        cert = tuple(
            (-c, self._words[k - self._OFFSET]) for k, c in sorted(rem.items())
        )
        return Membership(True, cert)

    def subspace(self) -> SubspaceBasis:
        n = form_dimension(self.algebra, self.degree)
        rows = [{k: v for k, v in r.items() if k < self._OFFSET} for r in self._echelon.rows()]
        return SubspaceBasis.span(rows, n)


def monomial(A: Algebra, word: Iterable[int]) -> DerForm:
    """``x0 dx1 .. dxn`` for basis indices ``word = (x0, .., xn)``."""
    word = tuple(word)
    out = function_form(A.basis(word[0]))
    for j in word[1:]:
        out = form_product(out, d(A.basis(j)))
    return out


def minimal_membership(omega: DerForm, span: MinimalSpan | None = None) -> Membership:
    if span is None:
        span = MinimalSpan(omega.algebra, omega.degree)
    return span.membership(omega)


def biduality_rank(A: Algebra) -> int:
    """Rank of the pairing between the degree-1 minimal span and Der(A)."""
    span = MinimalSpan(A, 1)
    forms = [form_from_vector(A, 1, {k: v for k, v in r.items() if k < span._OFFSET})
             for r in span._echelon.rows()]
    rows = []
    for a in range(A.der.dim):
        row = {}
        for w, f in enumerate(forms):
            v = f.value((a,))
            for k, x in enumerate(v):
                if x:
                    row[w * A.dim + k] = x
        rows.append(row)
    from .linalg import rank

    return rank(rows)
