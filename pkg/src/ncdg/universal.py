"""Universal first- and second-order differential forms.

One-forms are elements ``sum t[i][j] e_i (x) e_j`` of the kernel of the
product map ``A (x) A -> A``.  Two-forms ``Omega1 (x)_A Omega1`` are held in
their image under ``(x (x) y) (x)_A (u (x) v) -> x (x) yu (x) v`` inside
``A (x) A (x) A``; that image is exactly the set of tensors killed by both
partial products, so no quotient has to be computed.
"""

from __future__ import annotations

from dataclasses import dataclass
from .algebra import Algebra, AlgebraElement, Derivation
from .errors import AlgebraMismatch, InvalidAlgebra, NotADerivation, UnsupportedDegree
from .forms import DerForm
from .linalg import SubspaceBasis, nullspace, to_dense
from .scalar import ZERO, as_scalar


def _mu_rows(A: Algebra) -> list[dict]:
    """Rows of the product map on A (x) A in the flattened ``i*dim + j`` basis."""
    n = A.dim
    rows = [dict() for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k, c in A._table[i][j]:
                rows[k][i * n + j] = c
    return rows


def omega1_basis(A: Algebra) -> SubspaceBasis:
    """The kernel of the product map as a subspace of ``A (x) A``."""
    n = A.dim
    return SubspaceBasis.span(nullspace(_mu_rows(A), n * n), n * n)


def omega2_basis(A: Algebra) -> SubspaceBasis:
    """Tensors in ``A (x) A (x) A`` killed by multiplying either adjacent pair."""
    n = A.dim
    rows = []
    for r in range(n):
        for a in range(n):
            left = {}  # mu of the first two factors, third factor fixed to a
            right = {}  # mu of the last two factors, first factor fixed to a
            for i in range(n):
                for j in range(n):
                    c = dict(A._table[i][j]).get(r)
                    if c:
                        left[(i * n + j) * n + a] = c
                        right[(a * n + i) * n + j] = c
            rows.append(left)
            rows.append(right)
    return SubspaceBasis.span(nullspace([r for r in rows if r], n ** 3), n ** 3)


class UniversalOneForm:
    """An element of the universal one-forms, ``tensor[i][j]`` on ``e_i (x) e_j``."""

    __slots__ = ("algebra", "tensor")

    def __init__(self, algebra: Algebra, tensor, check: bool = True):
        n = algebra.dim
        self.algebra = algebra
        self.tensor = tuple(tuple(as_scalar(x) for x in row) for row in tensor)
        if len(self.tensor) != n or any(len(r) != n for r in self.tensor):
            raise ValueError(f"tensor must be {n}x{n}")
        if check and any(self.multiply_out()):
            raise InvalidAlgebra("tensor is not in the kernel of the product map")

    def multiply_out(self) -> tuple:
        """Image under ``x (x) y -> xy`` (zero for a valid one-form)."""
        A = self.algebra
        acc = [ZERO] * A.dim
        for i, row in enumerate(self.tensor):
            for j, c in enumerate(row):
                if c:
                    for k, f in A._table[i][j]:
                        acc[k] = acc[k] + c * f
        return tuple(acc)

    def flat(self) -> tuple:
        return tuple(x for r in self.tensor for x in r)

    @classmethod
    def from_flat(cls, A: Algebra, vec, check: bool = True) -> "UniversalOneForm":
        n = A.dim
        return cls(A, [vec[i * n:(i + 1) * n] for i in range(n)], check)

    def _same(self, other):
        if other.algebra is not self.algebra:
            raise AlgebraMismatch("one-forms over different algebras")

    def __add__(self, other):
        self._same(other)
        return UniversalOneForm(self.algebra, [[a + b for a, b in zip(r, s)] for r, s in zip(self.tensor, other.tensor)], False)

    def __neg__(self):
        return UniversalOneForm(self.algebra, [[-a for a in r] for r in self.tensor], False)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        if isinstance(c, AlgebraElement):
            return self.left(c)
        c = as_scalar(c)
        return UniversalOneForm(self.algebra, [[c * a for a in r] for r in self.tensor], False)

    def __mul__(self, other):
        if isinstance(other, UniversalOneForm):
            return one_form_product(self, other)
        if isinstance(other, AlgebraElement):
            return self.right(other)
        return as_scalar(other) * self

    def left(self, x: AlgebraElement) -> "UniversalOneForm":
        """``x . sum t_ij e_i (x) e_j = sum t_ij (x e_i) (x) e_j``."""
        A = self.algebra
        n = A.dim
        out = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            xe = A.mul(x.coeffs, A.basis_vector(i))
            for k, c in enumerate(xe):
                if c:
                    for j, t in enumerate(self.tensor[i]):
                        if t:
                            out[k][j] = out[k][j] + c * t
        return UniversalOneForm(A, out, False)

    def right(self, y: AlgebraElement) -> "UniversalOneForm":
        A = self.algebra
        n = A.dim
        out = [[ZERO] * n for _ in range(n)]
        for j in range(n):
            ey = A.mul(A.basis_vector(j), y.coeffs)
            for k, c in enumerate(ey):
                if c:
                    for i in range(n):
                        t = self.tensor[i][j]
                        if t:
                            out[i][k] = out[i][k] + c * t
        return UniversalOneForm(A, out, False)

    def __eq__(self, other):
        if not isinstance(other, UniversalOneForm):
            return NotImplemented
        return self.algebra is other.algebra and self.tensor == other.tensor

    def __hash__(self):
        return hash(self.tensor)

    def is_zero(self) -> bool:
        return not any(self.flat())

    def __repr__(self):
        return f"UniversalOneForm({self.algebra.name}, nnz={sum(1 for x in self.flat() if x)})"


class UniversalTwoForm:
    """Element of ``Omega1 (x)_A Omega1`` stored as a tensor in ``A (x) A (x) A``.

    ``tensor`` is a sparse dict ``{(i, j, k): Scalar}``.
    """

    __slots__ = ("algebra", "tensor")

    def __init__(self, algebra: Algebra, tensor: dict, check: bool = True):
        self.algebra = algebra
        self.tensor = {k: as_scalar(v) for k, v in tensor.items() if v}
        if check and not omega2_contains(algebra, self):
            raise InvalidAlgebra("tensor is not a universal two-form")

    def flat(self) -> tuple:
        n = self.algebra.dim
        return to_dense({(i * n + j) * n + k: c for (i, j, k), c in self.tensor.items()}, n ** 3)

    def __add__(self, other):
        if other.algebra is not self.algebra:
            raise AlgebraMismatch("two-forms over different algebras")
        out = dict(self.tensor)
        for k, v in other.tensor.items():
            out[k] = out.get(k, ZERO) + v
        return UniversalTwoForm(self.algebra, out, False)

    def __neg__(self):
        return UniversalTwoForm(self.algebra, {k: -v for k, v in self.tensor.items()}, False)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        c = as_scalar(c)
        return UniversalTwoForm(self.algebra, {k: c * v for k, v in self.tensor.items()}, False)

    def __eq__(self, other):
        if not isinstance(other, UniversalTwoForm):
            return NotImplemented
        return self.algebra is other.algebra and self.tensor == other.tensor

    def __hash__(self):
        return hash(tuple(sorted(self.tensor.items())))

    def is_zero(self) -> bool:
        return not self.tensor

    def __repr__(self):
        return f"UniversalTwoForm({self.algebra.name}, nnz={len(self.tensor)})"


def omega2_contains(A: Algebra, w: UniversalTwoForm) -> bool:
    # both partial products must vanish
    left: dict = {}
    right: dict = {}
    for (i, j, k), c in w.tensor.items():
        for r, f in A._table[i][j]:
            left[(r, k)] = left.get((r, k), ZERO) + c * f
        for r, f in A._table[j][k]:
            right[(i, r)] = right.get((i, r), ZERO) + c * f
    return not any(left.values()) and not any(right.values())


def d_u(x: AlgebraElement) -> UniversalOneForm:
    """``1 (x) x - x (x) 1``."""
    A = x.algebra
    n = A.dim
    one = A.unit
    t = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            v = one[i] * x.coeffs[j] - x.coeffs[i] * one[j]
            if v:
                t[i][j] = v
    return UniversalOneForm(A, t)


def one_form_product(w1: UniversalOneForm, w2: UniversalOneForm) -> UniversalTwoForm:
    """``w1 (x)_A w2`` in the three-fold tensor picture: contract the middle pair."""
    if w1.algebra is not w2.algebra:
        raise AlgebraMismatch("one-forms over different algebras")
    A = w1.algebra
    n = A.dim
    out: dict = {}
    for i in range(n):
        for j in range(n):
            a = w1.tensor[i][j]
            if not a:
                continue
            for k in range(n):
                for l in range(n):
                    b = w2.tensor[k][l]
                    if not b:
                        continue
                    for m, f in A._table[j][k]:
                        key = (i, m, l)
                        out[key] = out.get(key, ZERO) + a * b * f
    return UniversalTwoForm(A, out)


def d_u_one_form(w: UniversalOneForm) -> UniversalTwoForm:
    """Universal differential on one-forms: ``d(x (x) y) = 1(x)x(x)y - x(x)1(x)y + x(x)y(x)1``."""
    A = w.algebra
    n = A.dim
    out: dict = {}

    def add(key, c):
        out[key] = out.get(key, ZERO) + c

    for i in range(n):
        for j in range(n):
            c = w.tensor[i][j]
            if not c:
                continue
            for u, cu in enumerate(A.unit):
                if cu:
                    add((u, i, j), c * cu)
                    add((i, u, j), -c * cu)
                    add((i, j, u), c * cu)
    return UniversalTwoForm(A, out)


# -- universal factorization --------------------------------------------------------

@dataclass(frozen=True)
class BimoduleDerivation:
    """A linear map ``A -> M`` into an A-bimodule ``M``.

    ``matrix[r][k]`` is coordinate ``r`` of the image of ``e_k``; ``module``
    must offer ``dim``, ``act_left(x, m)`` and ``act_right(m, y)`` on
    coefficient tuples (see :class:`ncdg.modules.ModuleSpec`).
    """

    module: object
    matrix: tuple

    def __call__(self, x) -> tuple:
        coeffs = x.coeffs if isinstance(x, AlgebraElement) else x
        return tuple(
            sum((row[k] * c for k, c in enumerate(coeffs) if c and row[k]), ZERO)
            for row in self.matrix
        )


def _as_delta(A: Algebra, delta):
    """(apply, left, right, zero) for a derivation with values in A or in a bimodule."""
    if isinstance(delta, Derivation):
        if delta.algebra is not A:
            raise AlgebraMismatch("derivation of a different algebra")
        return delta.apply, A.mul, A.mul, A.zero_vector
    M = delta.module
    if M.kind != (1, 1):
        raise NotADerivation("target module must be an A-bimodule")
    return delta, M.act_left, M.act_right, (ZERO,) * M.dim


def check_leibniz(A: Algebra, delta) -> None:
    apply, left, right, _ = _as_delta(A, delta)
    images = [apply(A.basis_vector(k)) for k in range(A.dim)]
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = apply(A.mul(A.basis_vector(i), A.basis_vector(j)))
            r1 = left(A.basis_vector(i), images[j])
            r2 = right(images[i], A.basis_vector(j))
            if lhs != tuple(a + b for a, b in zip(r1, r2)):
                raise NotADerivation(f"Leibniz rule fails on basis pair ({i}, {j})")


def universal_factor(delta, w: UniversalOneForm, check: bool = True) -> tuple:
    """``j_delta(sum x_i (x) y_i) = sum x_i delta(y_i)``.

    ``delta`` is a :class:`Derivation` (values in A) or a
    :class:`BimoduleDerivation`; the result is a coefficient tuple in the target.
    """
    A = w.algebra
    if check:
        check_leibniz(A, delta)
    apply, left, _, zero = _as_delta(A, delta)
    acc = list(zero)
    images = {}
    for i in range(A.dim):
        for j in range(A.dim):
            c = w.tensor[i][j]
            if not c:
                continue
            if j not in images:
                images[j] = apply(A.basis_vector(j))
            v = left(A.basis_vector(i), images[j])
            for k, x in enumerate(v):
                if x:
                    acc[k] = acc[k] + c * x
    return tuple(acc)


# -- involution ---------------------------------------------------------------------

def universal_sign(n: int) -> int:
    return -1 if (n * (n + 1) // 2) % 2 else 1


def universal_involution(A: Algebra, n: int, tensor: dict) -> dict:
    """``(x_0 (x) .. (x) x_n)* = (-1)^(n(n+1)/2) x_n* (x) .. (x) x_0*`` on sparse tensors.

    ``tensor`` maps index tuples of length ``n + 1`` to scalars.
    """
    if n not in (0, 1, 2):
        raise UnsupportedDegree(f"universal involution is implemented for degrees 0..2, not {n}")
    stars = [A._star_cols[i] for i in range(A.dim)]
    sign = universal_sign(n)
    out: dict = {}

    def rec(pos, idx, coef, rev):
        if pos < 0:
            out[idx] = out.get(idx, ZERO) + coef
            return
        for k, s in stars[rev[pos]]:
            rec(pos - 1, idx + (k,), coef * s, rev)

    for key, c in tensor.items():
        if len(key) != n + 1:
            raise ValueError(f"tensor key {key} does not have {n + 1} factors")
        if c:
            rec(n, (), c.conjugate() if sign > 0 else -c.conjugate(), key)
    return {k: v for k, v in out.items() if v}


def one_form_involution(w: UniversalOneForm) -> UniversalOneForm:
    A = w.algebra
    n = A.dim
    sparse = {(i, j): c for i, r in enumerate(w.tensor) for j, c in enumerate(r) if c}
    out = universal_involution(A, 1, sparse)
    t = [[ZERO] * n for _ in range(n)]
    for (i, j), c in out.items():
        t[i][j] = c
    return UniversalOneForm(A, t)


def two_form_involution(w: UniversalTwoForm) -> UniversalTwoForm:
    return UniversalTwoForm(w.algebra, universal_involution(w.algebra, 2, w.tensor))


# -- projection onto derivation-based forms ------------------------------------------

def project_to_der(w) -> DerForm:
    """Canonical map to derivation-based forms, for degrees 1 and 2.

    ``a0 (x) a1 -> (X -> a0 X(a1))`` and
    ``a0 (x) a1 (x) a2 -> (X, Y -> a0 X(a1) Y(a2) - a0 Y(a1) X(a2))``.
    """
    A = w.algebra
    D = A.der
    mats = [X.apply for X in D.elements]
    if isinstance(w, UniversalOneForm):
        comps = {}
        for a in range(D.dim):
            acc = [ZERO] * A.dim
            for i, row in enumerate(w.tensor):
                for j, c in enumerate(row):
                    if c:
                        v = A.mul(A.basis_vector(i), mats[a](A.basis_vector(j)))
                        for k, x in enumerate(v):
                            if x:
                                acc[k] = acc[k] + c * x
            comps[(a,)] = tuple(acc)
        return DerForm(A, 1, comps)
    if isinstance(w, UniversalTwoForm):
        comps = {}
        images = [[mats[a](A.basis_vector(j)) for j in range(A.dim)] for a in range(D.dim)]
        for a in range(D.dim):
            for b in range(a + 1, D.dim):
                acc = [ZERO] * A.dim
                for (i, j, k), c in w.tensor.items():
                    t1 = A.mul(A.mul(A.basis_vector(i), images[a][j]), images[b][k])
                    t2 = A.mul(A.mul(A.basis_vector(i), images[b][j]), images[a][k])
                    for r in range(A.dim):
                        v = t1[r] - t2[r]
                        if v:
                            acc[r] = acc[r] + c * v
                comps[(a, b)] = tuple(acc)
        return DerForm(A, 2, comps)
    raise UnsupportedDegree("projection is implemented for universal one- and two-forms")
