"""Finite-dimensional unital *-algebras given by structure constants.

Conventions
-----------
* ``e_i e_j = sum_k c[i][j][k] e_k``.
* Elements are coefficient tuples of :class:`~ncdg.scalar.Scalar`.
* The involution is stored as a matrix ``J`` acting on conjugated
  coefficients: ``x* = J @ conj(x)``, so column ``j`` of ``J`` holds ``e_j*``.
* A derivation is a matrix ``X`` with ``X(e_j) = sum_k X[k][j] e_k``.
  Flattened (for linear solves) entry ``X[k][j]`` sits at index ``k*dim + j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import (
    AlgebraMismatch,
    BadInvolution,
    InvalidAlgebra,
    NoUnit,
    NotAssociative,
    Inconsistent,
)
from .linalg import (
    SubspaceBasis,
    flatten,
    mat_conj,
    mat_mul,
    mat_sub,
    nullspace,
    solve_sparse,
    to_dense,
    to_sparse,
    unflatten,
)
from .scalar import ONE, ZERO, Scalar, as_scalar


def _add(x, y):
    return tuple(a + b for a, b in zip(x, y))


def _sub(x, y):
    return tuple(a - b for a, b in zip(x, y))


def _scale(c, x):
    if not c:
        return (ZERO,) * len(x)
    return tuple(c * a if a else ZERO for a in x)


def _is_zero(x) -> bool:
    return not any(x)


class Algebra:
    """An associative unital *-algebra over the Gaussian rationals.

    Construction validates every axiom on all basis tuples unless
    ``validate=False`` (used internally for algebras built from already
    validated pieces).
    """

    def __init__(
        self,
        name: str,
        labels: Sequence[str],
        structure: Sequence,
        unit: Sequence,
        involution: Sequence,
        validate: bool = True,
    ):
        dim = len(labels)
        if dim == 0:
            raise InvalidAlgebra("algebra must have positive dimension")
        self.name = name
        self.dim = dim
        self.labels = tuple(labels)
        self.structure = tuple(
            tuple(tuple(as_scalar(c) for c in structure[i][j]) for j in range(dim))
            for i in range(dim)
        )
        self.unit = tuple(as_scalar(c) for c in unit)
        self.involution = tuple(tuple(as_scalar(c) for c in row) for row in involution)
        # sparse multiplication table: (i, j) -> ((k, c), ...)
        self._table = tuple(
            tuple(tuple((k, c) for k, c in enumerate(self.structure[i][j]) if c) for j in range(dim))
            for i in range(dim)
        )
        self._star_cols = tuple(
            tuple((k, self.involution[k][j]) for k in range(dim) if self.involution[k][j])
            for j in range(dim)
        )
        if validate:
            self._validate()

    def __repr__(self):
        return f"Algebra({self.name!r}, dim={self.dim})"

    # -- raw coefficient-tuple arithmetic -----------------------------------
    def mul(self, x, y) -> tuple:
        acc = [ZERO] * self.dim
        table = self._table
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = table[i]
            for j, yj in enumerate(y):
                if not yj:
                    continue
                c = xi * yj
                for k, s in row[j]:
                    acc[k] = acc[k] + c * s
        return tuple(acc)

    def commutator(self, x, y) -> tuple:
        return _sub(self.mul(x, y), self.mul(y, x))

    def star(self, x) -> tuple:
        acc = [ZERO] * self.dim
        for j, xj in enumerate(x):
            if xj:
                cj = xj.conjugate()
                for k, s in self._star_cols[j]:
                    acc[k] = acc[k] + s * cj
        return tuple(acc)

    def basis_vector(self, i: int) -> tuple:
        return tuple(ONE if k == i else ZERO for k in range(self.dim))

    @property
    def zero_vector(self) -> tuple:
        return (ZERO,) * self.dim

    def left_matrix(self, x) -> tuple:
        """Matrix of ``y -> x y`` on coefficient vectors."""
        cols = [self.mul(x, self.basis_vector(j)) for j in range(self.dim)]
        return tuple(zip(*cols))

    def right_matrix(self, x) -> tuple:
        """Matrix of ``y -> y x`` on coefficient vectors."""
        cols = [self.mul(self.basis_vector(j), x) for j in range(self.dim)]
        return tuple(zip(*cols))

    # -- element API ---------------------------------------------------------
    def element(self, coeffs) -> "AlgebraElement":
        coeffs = tuple(as_scalar(c) for c in coeffs)
        if len(coeffs) != self.dim:
            raise ValueError(f"expected {self.dim} coefficients, got {len(coeffs)}")
        return AlgebraElement(self, coeffs)

    def basis(self, i) -> "AlgebraElement":
        if isinstance(i, str):
            i = self.labels.index(i)
        return AlgebraElement(self, self.basis_vector(i))

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, self.unit)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, self.zero_vector)

    # -- validation ---------------------------------------------------------
    def _validate(self):
        n = self.dim
        if len(self.unit) != n or len(self.involution) != n or any(len(r) != n for r in self.involution):
            raise InvalidAlgebra("unit/involution dimensions do not match basis")
        e = [self.basis_vector(i) for i in range(n)]
        prods = [[self.mul(e[i], e[j]) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    lhs = self.mul(prods[i][j], e[k])
                    rhs = self.mul(e[i], prods[j][k])
                    if lhs != rhs:
                        raise NotAssociative(
                            f"(e{i} e{j}) e{k} != e{i} (e{j} e{k}) "
                            f"[{self.labels[i]}, {self.labels[j]}, {self.labels[k]}]",
                            (i, j, k),
                        )
        for i in range(n):
            if self.mul(self.unit, e[i]) != e[i] or self.mul(e[i], self.unit) != e[i]:
                raise NoUnit(f"unit does not act as identity on e{i} [{self.labels[i]}]", (i,))
        stars = [self.star(v) for v in e]
        for i in range(n):
            if self.star(stars[i]) != e[i]:
                raise BadInvolution(f"(e{i}*)* != e{i}", (i,))
            for j in range(n):
                if self.star(prods[i][j]) != self.mul(stars[j], stars[i]):
                    raise BadInvolution(f"(e{i} e{j})* != e{j}* e{i}*", (i, j))
        if self.star(self.unit) != self.unit:
            raise BadInvolution("1* != 1", ())

    # -- cached structure -----------------------------------------------------
    @cached_property
    def center_basis(self) -> SubspaceBasis:
        n = self.dim
        rows = []
        for j in range(n):
            for k in range(n):
                rows.append(
                    {i: d for i in range(n) if (d := self.structure[i][j][k] - self.structure[j][i][k])}
                )
        return SubspaceBasis.span(nullspace(rows, n), n)

    @cached_property
    def der(self) -> "DerivationBasis":
        return DerivationBasis(self)

    def has_trivial_center(self) -> bool:
        return self.center_basis.dim == 1


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    algebra: Algebra
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.algebra.dim:
            raise ValueError("coefficient length does not match algebra dimension")

    def _check(self, other):
        if other.algebra is not self.algebra:
            raise AlgebraMismatch("elements belong to different algebras")

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.algebra, _add(self.coeffs, other.coeffs))

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.algebra, _sub(self.coeffs, other.coeffs))

    def __neg__(self):
        return AlgebraElement(self.algebra, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return AlgebraElement(self.algebra, self.algebra.mul(self.coeffs, other.coeffs))
        if not isinstance(other, (int, Fraction, Scalar, complex, str)):
            return NotImplemented
        return AlgebraElement(self.algebra, _scale(as_scalar(other), self.coeffs))

    def __rmul__(self, other):
        if not isinstance(other, (int, Fraction, Scalar, complex, str)):
            return NotImplemented
        return AlgebraElement(self.algebra, _scale(as_scalar(other), self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra is other.algebra and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def star(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, self.algebra.star(self.coeffs))

    def commutator(self, other) -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.algebra, self.algebra.commutator(self.coeffs, other.coeffs))

    def __repr__(self):
        terms = [f"({c})*{lab}" for c, lab in zip(self.coeffs, self.algebra.labels) if c]
        return " + ".join(terms) if terms else "0"


def is_hermitian(x: AlgebraElement) -> bool:
    return x.star() == x


def commutator(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x.commutator(y)


# -- derivations --------------------------------------------------------------

class Derivation:
    """A linear endomorphism of ``A`` satisfying the Leibniz rule."""

    __slots__ = ("algebra", "matrix", "_cols")

    def __init__(self, algebra: Algebra, matrix, check: bool = True):
        self.algebra = algebra
        self.matrix = tuple(tuple(as_scalar(c) for c in row) for row in matrix)
        n = algebra.dim
        self._cols = tuple(
            tuple((k, self.matrix[k][j]) for k in range(n) if self.matrix[k][j]) for j in range(n)
        )
        if check:
            bad = leibniz_violation(algebra, self.matrix)
            if bad is not None:
                from .errors import NotADerivation

                raise NotADerivation(f"Leibniz rule fails on basis pair {bad}")

    def apply(self, x) -> tuple:
        acc = [ZERO] * self.algebra.dim
        for j, xj in enumerate(x):
            if xj:
                for k, c in self._cols[j]:
                    acc[k] = acc[k] + c * xj
        return tuple(acc)

    def __call__(self, x):
        if isinstance(x, AlgebraElement):
            return AlgebraElement(self.algebra, self.apply(x.coeffs))
        return self.apply(x)

    def _same(self, other):
        if other.algebra is not self.algebra:
            raise AlgebraMismatch("derivations of different algebras")

    def __add__(self, other):
        self._same(other)
        return Derivation(self.algebra, tuple(_add(r, s) for r, s in zip(self.matrix, other.matrix)), check=False)

    def __sub__(self, other):
        self._same(other)
        return Derivation(self.algebra, tuple(_sub(r, s) for r, s in zip(self.matrix, other.matrix)), check=False)

    def __neg__(self):
        return Derivation(self.algebra, tuple(tuple(-c for c in r) for r in self.matrix), check=False)

    def __rmul__(self, c):
        c = as_scalar(c)
        return Derivation(self.algebra, tuple(_scale(c, r) for r in self.matrix), check=False)

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.algebra is other.algebra and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def is_zero(self) -> bool:
        return not any(c for r in self.matrix for c in r)

    def flat(self) -> tuple:
        return flatten(self.matrix)

    def __repr__(self):
        return f"Derivation({self.algebra.name}, nnz={sum(1 for r in self.matrix for c in r if c)})"


def leibniz_violation(A: Algebra, matrix) -> tuple | None:
    """First basis pair ``(i, j)`` where ``X(e_i e_j) != X(e_i) e_j + e_i X(e_j)``."""
    n = A.dim
    X = Derivation(A, matrix, check=False)
    images = [X.apply(A.basis_vector(i)) for i in range(n)]
    for i in range(n):
        ei = A.basis_vector(i)
        for j in range(n):
            ej = A.basis_vector(j)
            lhs = X.apply(A.mul(ei, ej))
            rhs = _add(A.mul(images[i], ej), A.mul(ei, images[j]))
            if lhs != rhs:
                return (i, j)
    return None


def _leibniz_rows(A: Algebra) -> list[dict]:
    n = A.dim
    c = A.structure
    rows = []
    for i in range(n):
        for j in range(n):
            for m in range(n):
                row: dict = {}

                def add(idx, v):
                    w = row.get(idx, ZERO) + v
                    if w:
                        row[idx] = w
                    else:
                        row.pop(idx, None)

                for k in range(n):
                    if c[i][j][k]:
                        add(m * n + k, c[i][j][k])
                for l in range(n):
                    if c[l][j][m]:
                        add(l * n + i, -c[l][j][m])
                    if c[i][l][m]:
                        add(l * n + j, -c[i][l][m])
                if row:
                    rows.append(row)
    return rows


def inner_derivation(x: AlgebraElement) -> Derivation:
    """``ad(x): y -> xy - yx``."""
    A = x.algebra
    mat = mat_sub(A.left_matrix(x.coeffs), A.right_matrix(x.coeffs))
    D = Derivation(A, mat, check=False)
    assert leibniz_violation(A, D.matrix) is None
    return D


def lie_bracket(X: Derivation, Y: Derivation) -> Derivation:
    if X.algebra is not Y.algebra:
        raise AlgebraMismatch("derivations of different algebras")
    mat = mat_sub(mat_mul(X.matrix, Y.matrix), mat_mul(Y.matrix, X.matrix))
    return Derivation(X.algebra, mat, check=False)


def derivation_involution(X: Derivation) -> Derivation:
    """``X*(x) = (X(x*))*``; as a matrix ``J conj(X) conj(J)``."""
    J = X.algebra.involution
    mat = mat_mul(mat_mul(J, mat_conj(X.matrix)), mat_conj(J))
    return Derivation(X.algebra, mat, check=False)


def inner_preimage(X: Derivation) -> AlgebraElement | None:
    """Some ``x`` with ``ad(x) = X`` (free variables zero), or None if X is outer."""
    A = X.algebra
    n = A.dim
    rows, rhs = [], []
    for j in range(n):
        for k in range(n):
            rows.append({i: d for i in range(n) if (d := A.structure[i][j][k] - A.structure[j][i][k])})
            rhs.append(X.matrix[k][j])
    try:
        particular, _ = solve_sparse(rows, rhs, n)
    except Inconsistent:
        return None
    return AlgebraElement(A, to_dense(particular, n))


class DerivationBasis:
    """Canonical basis of Der(A) plus the structure data the calculus needs.

    * ``bracket[a][b]``: sparse coordinates of ``[X_a, X_b]``;
    * ``star[a]``: sparse coordinates of ``X_a*``;
    * ``center_action[c][a]``: sparse coordinates of ``z_c X_a`` for the
      center basis element ``z_c``.
    """

    def __init__(self, A: Algebra):
        self.algebra = A
        n = A.dim
        kernel = nullspace(_leibniz_rows(A), n * n)
        self.subspace = SubspaceBasis.span(kernel, n * n)
        self.elements = tuple(
            Derivation(A, unflatten(v, n, n), check=False) for v in self.subspace.vectors
        )
        for X in self.elements:
            assert leibniz_violation(A, X.matrix) is None
        self.dim = len(self.elements)
        self.bracket = tuple(
            tuple(self.sparse_coords(lie_bracket(X, Y)) for Y in self.elements) for X in self.elements
        )
        self.star = tuple(self.sparse_coords(derivation_involution(X)) for X in self.elements)
        self.center_action = tuple(
            tuple(self.sparse_coords(self._central_multiple(z, X)) for X in self.elements)
            for z in A.center_basis.vectors
        )

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, a) -> Derivation:
        return self.elements[a]

    def _central_multiple(self, z, X: Derivation) -> Derivation:
        return Derivation(self.algebra, mat_mul(self.algebra.left_matrix(z), X.matrix), check=False)

    def coords(self, X: Derivation) -> tuple:
        """Coordinates of X in the basis; NotInSubspace if X is not a derivation."""
        return self.subspace.coordinates(X.flat())

    def sparse_coords(self, X: Derivation) -> dict:
        return to_sparse(self.coords(X))

    def combine(self, coords) -> Derivation:
        n = self.algebra.dim
        if isinstance(coords, dict):
            coords = to_dense(coords, self.dim)
        acc = [ZERO] * (n * n)
        for c, v in zip(coords, self.subspace.vectors):
            if c:
                for i, x in enumerate(v):
                    if x:
                        acc[i] = acc[i] + c * x
        return Derivation(self.algebra, unflatten(acc, n, n), check=False)

    def structure_constants(self) -> tuple:
        """Dense ``f[a][b][c]`` with ``[X_a, X_b] = sum_c f[a][b][c] X_c``."""
        return tuple(tuple(to_dense(s, self.dim) for s in row) for row in self.bracket)

    @cached_property
    def inner_preimages(self) -> tuple | None:
        """``x_a`` with ``ad(x_a) = X_a`` for every basis derivation, or None."""
        pre = tuple(inner_preimage(X) for X in self.elements)
        return None if any(p is None for p in pre) else pre

    @cached_property
    def inner_subspace(self) -> SubspaceBasis:
        A = self.algebra
        return SubspaceBasis.span(
            (inner_derivation(A.basis(i)).flat() for i in range(A.dim)), A.dim * A.dim
        )

    def all_inner(self) -> bool:
        return self.inner_subspace.dim == self.dim


def center(A: Algebra) -> SubspaceBasis:
    return A.center_basis


def derivations(A: Algebra) -> list[Derivation]:
    return list(A.der.elements)


def is_in_center(A: Algebra, x) -> bool:
    coeffs = x.coeffs if isinstance(x, AlgebraElement) else x
    return A.center_basis.contains(coeffs)


def center_coordinates(A: Algebra, z) -> tuple:
    coeffs = z.coeffs if isinstance(z, AlgebraElement) else z
    return A.center_basis.coordinates(coeffs)


__all__ = [
    "Algebra",
    "AlgebraElement",
    "Derivation",
    "DerivationBasis",
    "center",
    "center_coordinates",
    "commutator",
    "derivation_involution",
    "derivations",
    "inner_derivation",
    "inner_preimage",
    "is_hermitian",
    "is_in_center",
    "leibniz_violation",
    "lie_bracket",
]

