"""Exact sparse linear algebra over the Gaussian rationals.

Rows and vectors are handled internally as sparse dicts ``{column: Scalar}``
with zeros never stored.  Elimination is Gauss-Jordan with lowest-index
pivoting, so the reduced echelon basis of a subspace is unique and two runs
always produce identical output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import Inconsistent, NotInSubspace
from .scalar import ONE, ZERO, Scalar, as_scalar

Sparse = dict  # {int: Scalar}


def to_sparse(vec: Sequence) -> Sparse:
    return {i: v if isinstance(v, Scalar) else as_scalar(v) for i, v in enumerate(vec) if v}


def to_dense(vec: Sparse, n: int) -> tuple:
    out = [ZERO] * n
    for i, v in vec.items():
        out[i] = v
    return tuple(out)


def axpy(y: Sparse, alpha: Scalar, x: Sparse) -> None:
    """In place ``y += alpha * x`` dropping cancelled entries."""
    for k, v in x.items():
        w = y.get(k)
        if w is None:
            y[k] = alpha * v
        else:
            w = w + alpha * v
            if w:
                y[k] = w
            else:
                del y[k]


class Echelon:
    """Incrementally maintained reduced row echelon form.

    Every stored row has a leading 1 at its pivot and zeros in all other
    pivot columns; the stored set is therefore the canonical RREF of the span
    of everything inserted so far.
    """

    def __init__(self):
        self._rows: dict[int, Sparse] = {}

    def __len__(self):
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def reduce(self, row: Sparse) -> Sparse:
        r = dict(row)
        for p in [c for c in r if c in self._rows]:
            c = r.get(p)
            if c:
                axpy(r, -c, self._rows[p])
        return r

    def insert(self, row: Sparse) -> bool:
        r = self.reduce(row)
        if not r:
            return False
        p = min(r)
        inv = r[p].inverse()
        if inv != ONE:
            r = {k: v * inv for k, v in r.items()}
        for q, other in self._rows.items():
            c = other.get(p)
            if c:
                axpy(other, -c, r)
        self._rows[p] = r
        return True

    def rows(self) -> list[Sparse]:
        return [self._rows[p] for p in sorted(self._rows)]


def rref(rows: Iterable[Sparse]) -> tuple[list[Sparse], list[int]]:
    ech = Echelon()
    for r in rows:
        ech.insert(r)
    return ech.rows(), ech.pivots


def rank(rows: Iterable[Sparse]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Iterable[Sparse], ncols: int) -> list[Sparse]:
    """Basis of ``{v : row . v = 0 for all rows}`` (free-variable basis)."""
    reduced, pivots = rref(rows)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = {f: ONE}
        for p, r in zip(pivots, reduced):
            c = r.get(f)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


@dataclass(frozen=True)
class LinearSolution:
    """Full solution set ``particular + span(kernel)`` of ``M x = b``."""

    particular: tuple
    kernel: tuple  # tuple of dense vectors

    @property
    def unique(self) -> bool:
        return not self.kernel


def solve_sparse(rows: Sequence[Sparse], rhs: Sequence[Scalar], ncols: int) -> tuple[Sparse, list[Sparse]]:
    """Solve a sparse system; raises Inconsistent when it has no solution."""
    aug = []
    for r, b in zip(rows, rhs):
        row = dict(r)
        if b:
            row[ncols] = b if isinstance(b, Scalar) else as_scalar(b)
        if row:
            aug.append(row)
    reduced, pivots = rref(aug)
    if pivots and pivots[-1] == ncols:
        raise Inconsistent("linear system has no solution")
    particular = {}
    for p, r in zip(pivots, reduced):
        c = r.get(ncols)
        if c:
            particular[p] = c
    kernel = nullspace(({k: v for k, v in r.items() if k != ncols} for r in reduced), ncols)
    return particular, kernel


def solve_linear(matrix: Sequence[Sequence], rhs: Sequence) -> LinearSolution:
    """Exact solve of ``matrix @ x = rhs``.

    Raises Inconsistent if there is no solution; otherwise the returned
    solution lists the particular solution with free variables set to zero
    and a canonical kernel basis (empty when the solution is unique).
    """
    if len(matrix) != len(rhs):
        raise ValueError("row count of matrix and rhs differ")
    ncols = len(matrix[0]) if matrix else 0
    rows = [to_sparse(r) for r in matrix]
    particular, kernel = solve_sparse(rows, [as_scalar(b) for b in rhs], ncols)
    kernel_rows, _ = rref(kernel)
    return LinearSolution(
        to_dense(particular, ncols), tuple(to_dense(k, ncols) for k in kernel_rows)
    )


@dataclass(frozen=True)
class SubspaceBasis:
    """A subspace of ``Scalar**ambient_dim`` stored as its reduced echelon basis."""

    ambient_dim: int
    vectors: tuple  # dense tuples, reduced row echelon form
    pivots: tuple

    @classmethod
    def span(cls, vectors: Iterable, ambient_dim: int) -> "SubspaceBasis":
        rows = [v if isinstance(v, dict) else to_sparse(v) for v in vectors]
        reduced, pivots = rref(rows)
        return cls(ambient_dim, tuple(to_dense(r, ambient_dim) for r in reduced), tuple(pivots))

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def coordinates(self, vec: Sequence) -> tuple:
        """Coordinates of ``vec`` in this basis; NotInSubspace if outside."""
        coords = tuple(vec[p] for p in self.pivots)
        recon = [ZERO] * self.ambient_dim
        for c, b in zip(coords, self.vectors):
            if c:
                for i, v in enumerate(b):
                    if v:
                        recon[i] = recon[i] + c * v
        if any(x != y for x, y in zip(recon, vec)):
            raise NotInSubspace("vector is not in the subspace")
        return coords

    def contains(self, vec: Sequence) -> bool:
        try:
            self.coordinates(vec)
        except NotInSubspace:
            return False
        return True


# -- small dense matrix helpers (tuples of row tuples) ------------------------

def identity(n: int) -> tuple:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def zero_matrix(rows: int, cols: int) -> tuple:
    return tuple((ZERO,) * cols for _ in range(rows))


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    if not a:
        return ()
    ncols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [ZERO] * ncols
        for k, v in enumerate(row):
            if v:
                for j, w in enumerate(b[k]):
                    if w:
                        acc[j] = acc[j] + v * w
        out.append(tuple(acc))
    return tuple(out)


def mat_vec(a: Sequence[Sequence], x: Sequence) -> tuple:
    out = []
    for row in a:
        acc = ZERO
        for v, w in zip(row, x):
            if v and w:
                acc = acc + v * w
        out.append(acc)
    return tuple(out)


def mat_add(a, b) -> tuple:
    return tuple(tuple(x + y if y else x for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_sub(a, b) -> tuple:
    return tuple(tuple(x - y if y else x for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_scale(c: Scalar, a) -> tuple:
    return tuple(tuple(c * x for x in r) for r in a)


def mat_conj(a) -> tuple:
    return tuple(tuple(x.conjugate() for x in r) for r in a)


def transpose(a) -> tuple:
    return tuple(zip(*a)) if a else ()


def is_zero_matrix(a) -> bool:
    return not any(x for r in a for x in r)


def flatten(a) -> tuple:
    return tuple(x for r in a for x in r)


def unflatten(v: Sequence, rows: int, cols: int) -> tuple:
    return tuple(tuple(v[r * cols:(r + 1) * cols]) for r in range(rows))
