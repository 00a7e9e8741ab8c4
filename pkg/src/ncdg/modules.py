"""Finite-dimensional modules of the four kinds ``(i, j)`` and their duals.

A module of kind ``(i, j)`` is an ``(A_i, A_j)``-bimodule where ``A_0`` is the
center and ``A_1`` the whole algebra.  Elements are coordinate tuples; the
left action of the ``k``-th basis element of ``A_i`` is the matrix
``left[k]`` (``m -> left[k] m``) and the right action of the ``k``-th basis
element of ``A_j`` is ``right[k]`` (``m -> m b = right[k] m``).  An optional
involution is stored as the matrix ``J`` of ``m* = J conj(m)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from .algebra import Algebra, AlgebraElement
from .errors import InvalidModule, NotInSubspace, ParseError
from .linalg import (
    SubspaceBasis,
    identity,
    mat_conj,
    mat_mul,
    mat_vec,
    nullspace,
    rank,
    to_dense,
    to_sparse,
    transpose,
)
from .scalar import ONE, ZERO, as_scalar, format_scalar, parse_scalar

KINDS = ((0, 0), (1, 0), (0, 1), (1, 1))


def dual_kind(kind: tuple) -> tuple:
    return (1 - kind[0], 1 - kind[1])


def ring_basis(A: Algebra, side: int) -> tuple:
    """Basis of ``A_side`` as coefficient vectors in A (center basis for 0)."""
    if side == 0:
        return tuple(A.center_basis.vectors)
    return tuple(A.basis_vector(k) for k in range(A.dim))


def ring_coordinates(A: Algebra, side: int, x) -> tuple:
    """Coordinates of ``x`` on the ``A_side`` basis."""
    if side == 0:
        return A.center_basis.coordinates(x)
    return tuple(x)


def _combine(mats: Sequence, coords: Sequence, n: int) -> tuple:
    acc = [[ZERO] * n for _ in range(n)]
    for c, M in zip(coords, mats):
        if c:
            for r in range(n):
                row = M[r]
                for s in range(n):
                    if row[s]:
                        acc[r][s] = acc[r][s] + c * row[s]
    return tuple(tuple(r) for r in acc)


@dataclass(eq=False)
class ModuleSpec:
    algebra: Algebra
    kind: tuple
    dim: int
    left: tuple
    right: tuple
    involution: tuple | None = None
    name: str = ""
    # extra structure filled in by constructors
    role: str = ""
    pairing: tuple | None = None  # for duals: maps Phi_r (A.dim x predual.dim)
    predual: "ModuleSpec | None" = None
    extra: dict = field(default_factory=dict)
    # objects of the categories are central; plain bimodules may opt out
    central: bool = True

    def __post_init__(self):
        self.kind = tuple(self.kind)
        if self.kind not in KINDS:
            raise InvalidModule(f"kind must be one of {KINDS}, got {self.kind}")
        if self.dim < 0:
            raise InvalidModule("dimension must be non-negative")
        norm = lambda mats: tuple(tuple(tuple(as_scalar(x) for x in r) for r in M) for M in mats)
        self.left = norm(self.left)
        self.right = norm(self.right)
        if self.involution is not None:
            self.involution = tuple(tuple(as_scalar(x) for x in r) for r in self.involution)
        A = self.algebra
        if len(self.left) != len(ring_basis(A, self.kind[0])):
            raise InvalidModule("wrong number of left action matrices")
        if len(self.right) != len(ring_basis(A, self.kind[1])):
            raise InvalidModule("wrong number of right action matrices")
        for M in self.left + self.right + ((self.involution,) if self.involution else ()):
            if len(M) != self.dim or any(len(r) != self.dim for r in M):
                raise InvalidModule(f"action matrices must be {self.dim}x{self.dim}")

    def __repr__(self):
        return f"ModuleSpec({self.name or '?'}, kind={self.kind}, dim={self.dim})"

    # -- actions on coordinate tuples -------------------------------------------
    def left_matrix(self, x) -> tuple:
        """Matrix of ``m -> x m`` for ``x`` in A_i given by its A-coefficients."""
        coords = ring_coordinates(self.algebra, self.kind[0], x)
        return _combine(self.left, coords, self.dim)

    def right_matrix(self, y) -> tuple:
        coords = ring_coordinates(self.algebra, self.kind[1], y)
        return _combine(self.right, coords, self.dim)

    def act_left(self, x, m) -> tuple:
        return mat_vec(self.left_matrix(_coeffs(x)), m)

    def act_right(self, m, y) -> tuple:
        return mat_vec(self.right_matrix(_coeffs(y)), m)

    def central_matrix(self, z) -> tuple:
        """Action of a central element through the underlying Z(A)-module structure."""
        z = _coeffs(z)
        if self.kind[0] == 1 or self.kind == (0, 0):
            return self.left_matrix(z)
        return self.right_matrix(z)

    def star(self, m) -> tuple:
        if self.involution is None:
            raise InvalidModule("module has no involution")
        return mat_vec(self.involution, tuple(x.conjugate() for x in m))

    def basis_vector(self, k: int) -> tuple:
        return tuple(ONE if i == k else ZERO for i in range(self.dim))

    def zero_vector(self) -> tuple:
        return (ZERO,) * self.dim

    # -- validation -----------------------------------------------------------------
    def violations(self) -> list:
        """List of ``(law, witness)`` for every failed module axiom."""
        A = self.algebra
        out = []
        n = self.dim
        ident = identity(n)
        for side, mats, name in ((self.kind[0], self.left, "left"), (self.kind[1], self.right, "right")):
            basis = ring_basis(A, side)
            unit = self.left_matrix(A.unit) if name == "left" else self.right_matrix(A.unit)
            if unit != ident:
                out.append((f"{name} unit", ()))
            for a, xa in enumerate(basis):
                for b, xb in enumerate(basis):
                    prod = A.mul(xa, xb)
                    if name == "left":
                        ok = mat_mul(mats[a], mats[b]) == self.left_matrix(prod)
                    else:
                        ok = mat_mul(mats[b], mats[a]) == self.right_matrix(prod)
                    if not ok:
                        out.append((f"{name} action", (a, b)))
        for a, L in enumerate(self.left):
            for b, R in enumerate(self.right):
                if mat_mul(L, R) != mat_mul(R, L):
                    out.append(("actions commute", (a, b)))
        # central elements act the same on both sides
        for c, z in enumerate(A.center_basis.vectors if self.central else ()):
            if self.left_matrix(z) != self.right_matrix(z):
                out.append(("central", (c,)))
        if self.involution is not None:
            if self.kind not in ((0, 0), (1, 1)):
                out.append(("involution kind", self.kind))
            else:
                J = self.involution
                if mat_mul(J, mat_conj(J)) != ident:
                    out.append(("involutive", ()))
                basis_i = ring_basis(A, self.kind[0])
                basis_j = ring_basis(A, self.kind[1])
                # (x m)* = m* x* and (m y)* = y* m*
                for a, x in enumerate(basis_i):
                    lhs = mat_mul(J, mat_conj(self.left_matrix(x)))
                    rhs = mat_mul(self.right_matrix(A.star(x)), J)
                    if lhs != rhs:
                        out.append(("involution left", (a,)))
                for b, y in enumerate(basis_j):
                    lhs = mat_mul(J, mat_conj(self.right_matrix(y)))
                    rhs = mat_mul(self.left_matrix(A.star(y)), J)
                    if lhs != rhs:
                        out.append(("involution right", (b,)))
        return out

    def validate(self) -> "ModuleSpec":
        bad = self.violations()
        if bad:
            law, witness = bad[0]
            raise InvalidModule(f"{self.name or 'module'}: {law} fails at {witness}")
        return self


def _coeffs(x):
    return x.coeffs if isinstance(x, AlgebraElement) else tuple(x)


# -- constructors ------------------------------------------------------------------------

def regular_module(A: Algebra, kind=(1, 1), with_involution: bool = True) -> ModuleSpec:
    """A itself with the structure of kind ``kind``."""
    kind = tuple(kind)
    left = tuple(A.left_matrix(x) for x in ring_basis(A, kind[0]))
    right = tuple(A.right_matrix(y) for y in ring_basis(A, kind[1]))
    inv = A.involution if with_involution and kind in ((0, 0), (1, 1)) else None
    return ModuleSpec(A, kind, A.dim, left, right, inv, name=f"{A.name}{list(kind)}", role="regular").validate()


def free_module(A: Algebra, rank_: int, kind=(1, 1)) -> ModuleSpec:
    """Direct sum of ``rank_`` copies of the regular module."""
    M = regular_module(A, kind)
    out = M
    for _ in range(rank_ - 1):
        out = direct_sum_module(out, M)
    return out


def subspace_module(
    A: Algebra,
    kind,
    basis: SubspaceBasis,
    left_fn: Callable,
    right_fn: Callable,
    star_fn: Callable | None = None,
    name: str = "",
) -> ModuleSpec:
    """Module structure on an invariant subspace of an ambient coordinate space.

    ``left_fn(x, v)``/``right_fn(v, y)`` act on ambient vectors; the result is
    expressed on the echelon basis of ``basis``.  Raises InvalidModule when the
    subspace is not invariant.
    """
    kind = tuple(kind)
    vecs = basis.vectors

    def matrix(fn) -> tuple:
        cols = []
        for v in vecs:
            try:
                cols.append(basis.coordinates(fn(v)))
            except NotInSubspace:
                raise InvalidModule("subspace is not invariant under the action") from None
        return transpose(cols) if cols else ()

    left = tuple(matrix(lambda v, x=x: left_fn(x, v)) for x in ring_basis(A, kind[0]))
    right = tuple(matrix(lambda v, y=y: right_fn(v, y)) for y in ring_basis(A, kind[1]))
    inv = None
    if star_fn is not None:
        # antilinear: column r holds the coordinates of (basis_r)*
        inv = matrix(star_fn)
    d = len(vecs)
    if d == 0:
        left = tuple(() for _ in left)
        right = tuple(() for _ in right)
        inv = () if star_fn is not None else None
    return ModuleSpec(A, kind, d, left, right, inv, name=name)


def derivation_module(A: Algebra) -> ModuleSpec:
    """Der(A) as a Z(A)-module with ``X* = J conj(X) conj(J)``."""
    D = A.der
    m = D.dim
    left = []
    for c in range(A.center_basis.dim):
        cols = [to_dense(D.center_action[c][a], m) for a in range(m)]
        left.append(transpose(cols) if cols else ())
    inv = transpose([to_dense(D.star[a], m) for a in range(m)]) if m else ()
    M = ModuleSpec(A, (0, 0), m, tuple(left), tuple(left), inv, name=f"Der({A.name})", role="der")
    return M.validate()


def forms_module(A: Algebra) -> ModuleSpec:
    """Degree-one derivation-based forms, the dual of Der(A)."""
    M = dual_module(derivation_module(A))
    M.name = f"Omega1Der({A.name})"
    M.role = "forms1"
    return M


def universal_one_forms_module(A: Algebra) -> ModuleSpec:
    """Kernel of the product map in ``A (x) A`` as a bimodule (with its involution)."""
    from .universal import UniversalOneForm, omega1_basis, one_form_involution

    basis = omega1_basis(A)

    def left(x, v):
        return UniversalOneForm.from_flat(A, v, check=False).left(A.element(x)).flat()

    def right(v, y):
        return UniversalOneForm.from_flat(A, v, check=False).right(A.element(y)).flat()

    def star(v):
        return one_form_involution(UniversalOneForm.from_flat(A, v)).flat()

    M = subspace_module(A, (1, 1), basis, left, right, star, name=f"Omega1u({A.name})")
    M.role = "universal1"
    # x du(y) and du(y) x differ for central x in general
    M.central = False
    return M.validate()


def minimal_one_forms_module(A: Algebra) -> ModuleSpec:
    """Span of the ``x dy`` inside the degree-one derivation-based forms."""
    from .forms import MinimalSpan, form_from_vector, form_involution

    span = MinimalSpan(A, 1)
    sub = span.subspace()
    N = sub.ambient_dim

    def as_form(v):
        return form_from_vector(A, 1, to_sparse(v))

    def left(x, v):
        return to_dense(as_form(v).left(A.element(x)).to_vector(), N)

    def right(v, y):
        return to_dense(as_form(v).right(A.element(y)).to_vector(), N)

    def star(v):
        return to_dense(form_involution(as_form(v)).to_vector(), N)

    M = subspace_module(A, (1, 1), sub, left, right, star, name=f"Omega1min({A.name})")
    M.role = "minimal1"
    return M.validate()


def direct_sum_module(M1: ModuleSpec, M2: ModuleSpec) -> ModuleSpec:
    if M1.algebra is not M2.algebra or M1.kind != M2.kind:
        raise InvalidModule("direct sum needs modules of the same kind over the same algebra")
    block = lambda P, Q: block_diagonal(P, Q, M1.dim, M2.dim)
    inv = None
    if M1.involution is not None and M2.involution is not None:
        inv = block(M1.involution, M2.involution)
    return ModuleSpec(
        M1.algebra,
        M1.kind,
        M1.dim + M2.dim,
        tuple(block(P, Q) for P, Q in zip(M1.left, M2.left)),
        tuple(block(P, Q) for P, Q in zip(M1.right, M2.right)),
        inv,
        name=f"{M1.name}+{M2.name}",
    )


def block_diagonal(P, Q, p: int, q: int) -> tuple:
    rows = []
    for r in range(p):
        rows.append(tuple(P[r]) + (ZERO,) * q)
    for r in range(q):
        rows.append((ZERO,) * p + tuple(Q[r]))
    return tuple(rows)


# -- Hom spaces and duality -------------------------------------------------------------

def hom_to_algebra(M: ModuleSpec) -> SubspaceBasis:
    """Morphisms ``M -> A`` in the category of ``M``, flattened row-major
    (``Phi[k][s]`` at ``k * M.dim + s``)."""
    A = M.algebra
    n, d = A.dim, M.dim
    rows = []

    def col(k, s):
        return k * d + s

    for side, mats in ((0, M.left), (1, M.right)):
        ring = ring_basis(A, M.kind[side])
        for a, x in enumerate(ring):
            act_M = mats[a]
            act_A = A.left_matrix(x) if side == 0 else A.right_matrix(x)
            # Phi act_M - act_A Phi = 0
            for k in range(n):
                for s in range(d):
                    row = {}
                    for t in range(d):
                        c = act_M[t][s]
                        if c:
                            row[col(k, t)] = row.get(col(k, t), ZERO) + c
                    for l in range(n):
                        c = act_A[k][l]
                        if c:
                            row[col(l, s)] = row.get(col(l, s), ZERO) - c
                    row = {kk: v for kk, v in row.items() if v}
                    if row:
                        rows.append(row)
    return SubspaceBasis.span(nullspace(rows, n * d), n * d)


def _unflat(v, n, d) -> tuple:
    return tuple(tuple(v[k * d:(k + 1) * d]) for k in range(n))


def dual_module(M: ModuleSpec) -> ModuleSpec:
    """``M' = Hom(M, A)`` with ``(a phi b)(m) = a phi(m) b``; kind ``(1-i, 1-j)``."""
    A = M.algebra
    n, d = A.dim, M.dim
    hom = hom_to_algebra(M)
    maps = tuple(_unflat(v, n, d) for v in hom.vectors)
    kind = dual_kind(M.kind)

    def left(x, v):
        return _flat(mat_mul(A.left_matrix(x), _unflat(v, n, d)))

    def right(v, y):
        return _flat(mat_mul(A.right_matrix(y), _unflat(v, n, d)))

    def star(v):
        # Phi* = J_A conj(Phi) conj(J_M)
        JM = mat_conj(M.involution)
        return _flat(mat_mul(mat_mul(A.involution, mat_conj(_unflat(v, n, d))), JM))

    star_fn = star if M.involution is not None else None
    D = subspace_module(A, kind, hom, left, right, star_fn, name=f"({M.name})'")
    D.pairing = maps
    D.predual = M
    D.extra["hom"] = hom
    return D.validate()


def _flat(mat) -> tuple:
    return tuple(x for r in mat for x in r)


def pair(Mdual: ModuleSpec, m, mprime) -> tuple:
    """``<m, m'> = m'(m)`` for ``m'`` given in dual coordinates."""
    A = Mdual.algebra
    acc = [ZERO] * A.dim
    for c, Phi in zip(mprime, Mdual.pairing):
        if c:
            v = mat_vec(Phi, m)
            for k, x in enumerate(v):
                if x:
                    acc[k] = acc[k] + c * x
    return tuple(acc)


def dual_coordinates(Mdual: ModuleSpec, Phi) -> tuple:
    """Coordinates of a morphism matrix ``Phi: M -> A`` in the dual basis."""
    return Mdual.extra["hom"].coordinates(_flat(Phi))


def canonical_bidual_map(M: ModuleSpec, Md: ModuleSpec | None = None, Mdd: ModuleSpec | None = None) -> tuple:
    """Matrix of ``m -> (m' -> <m, m'>)`` from M to its double dual.

    Returns ``(matrix, M', M'')``; pass ``Md``/``Mdd`` to reuse existing duals.
    """
    if Md is None:
        Md = dual_module(M)
    if Mdd is None:
        Mdd = dual_module(Md)
    A = M.algebra
    cols = []
    for s in range(M.dim):
        m = M.basis_vector(s)
        # evaluation at m as a map M' -> A: column r is <m, basis_r>
        ev = transpose([mat_vec(Phi, m) for Phi in Md.pairing]) if Md.dim else tuple(() for _ in range(A.dim))
        cols.append(dual_coordinates(Mdd, ev))
    return (transpose(cols) if cols else ()), Md, Mdd


def is_diagonal(M: ModuleSpec) -> bool:
    """Injectivity of the canonical map into the double dual."""
    if M.dim == 0:
        return True
    mat, _, Mdd = canonical_bidual_map(M)
    if Mdd.dim == 0:
        return False
    rows = [to_sparse(r) for r in transpose(mat)]
    return rank(rows) == M.dim


def morphism_space(M: ModuleSpec, N: ModuleSpec | None = None) -> list:
    """Basis of the morphisms ``M -> N`` of the module category (``N = M`` by default)."""
    if N is None:
        N = M
    if M.kind != N.kind or M.algebra is not N.algebra:
        raise InvalidModule("morphisms need modules of the same kind")
    p, d = N.dim, M.dim
    rows = []
    for mats_M, mats_N in ((M.left, N.left), (M.right, N.right)):
        for PM, PN in zip(mats_M, mats_N):
            # F PM - PN F = 0
            for k in range(p):
                for s in range(d):
                    row = {}
                    for t in range(d):
                        c = PM[t][s]
                        if c:
                            row[k * d + t] = row.get(k * d + t, ZERO) + c
                    for l in range(p):
                        c = PN[k][l]
                        if c:
                            row[l * d + s] = row.get(l * d + s, ZERO) - c
                    row = {kk: v for kk, v in row.items() if v}
                    if row:
                        rows.append(row)
    basis = SubspaceBasis.span(nullspace(rows, p * d), p * d)
    return [_unflat(v, p, d) for v in basis.vectors]


# -- tensor products ----------------------------------------------------------------------

@dataclass
class TensorQuotient:
    """``M1 (x)_{A_j} M2`` as the plain tensor product modulo the balancing relations."""

    module: ModuleSpec
    relations: list  # echelon rows of the relation span (sparse, plain tensor coordinates)
    pivots: tuple
    free: tuple  # plain coordinates used as quotient coordinates
    d1: int
    d2: int

    def reduce(self, v: dict) -> dict:
        r = dict(v)
        for p, row in zip(self.pivots, self.relations):
            c = r.get(p)
            if c:
                for k, x in row.items():
                    w = r.get(k, ZERO) - c * x
                    if w:
                        r[k] = w
                    else:
                        r.pop(k, None)
        return r

    def project(self, v) -> tuple:
        """Quotient coordinates of a plain tensor (dense or sparse)."""
        sparse = v if isinstance(v, dict) else to_sparse(v)
        r = self.reduce(sparse)
        return tuple(r.get(f, ZERO) for f in self.free)

    def lift(self, q) -> tuple:
        out = [ZERO] * (self.d1 * self.d2)
        for f, c in zip(self.free, q):
            out[f] = c
        return tuple(out)

    def in_relations(self, v) -> bool:
        sparse = v if isinstance(v, dict) else to_sparse(v)
        return not self.reduce(sparse)


def kron(P, Q) -> tuple:
    p, q = len(P), len(Q)
    out = []
    for a in range(p):
        for b in range(q):
            out.append(tuple(P[a][c] * Q[b][e] for c in range(p) for e in range(q)))
    return tuple(out)


def tensor_module(M1: ModuleSpec, M2: ModuleSpec) -> TensorQuotient:
    from .errors import KindMismatch

    if M1.algebra is not M2.algebra:
        raise InvalidModule("modules over different algebras")
    if M1.kind[1] != M2.kind[0]:
        raise KindMismatch(f"cannot tensor kind {M1.kind} with kind {M2.kind}")
    A = M1.algebra
    d1, d2 = M1.dim, M2.dim
    I1, I2 = identity(d1), identity(d2)
    rel_rows = []
    for R1, L2 in zip(M1.right, M2.left):
        # m1 a (x) m2 - m1 (x) a m2, for basis m1, m2
        diff = [tuple(x - y for x, y in zip(r, s)) for r, s in zip(kron(R1, I2), kron(I1, L2))]
        for col in transpose(diff) if diff else ():
            sp = to_sparse(col)
            if sp:
                rel_rows.append(sp)
    from .linalg import rref

    rows, pivots = rref(rel_rows)
    pivset = set(pivots)
    free = tuple(f for f in range(d1 * d2) if f not in pivset)
    tq = TensorQuotient(None, rows, tuple(pivots), free, d1, d2)

    def induced(P) -> tuple:
        cols = [tq.project(mat_vec(P, tq.lift(_unit_vector(len(free), i)))) for i in range(len(free))]
        return transpose(cols) if cols else ()

    left = tuple(induced(kron(L, I2)) for L in M1.left)
    right = tuple(induced(kron(I1, R)) for R in M2.right)
    if not free:
        left = tuple(() for _ in left)
        right = tuple(() for _ in right)
    kind = (M1.kind[0], M2.kind[1])
    tq.module = ModuleSpec(A, kind, len(free), left, right, name=f"{M1.name}(x){M2.name}", role="tensor").validate()
    return tq


def _unit_vector(n: int, i: int) -> tuple:
    return tuple(ONE if k == i else ZERO for k in range(n))


# -- module spec files ---------------------------------------------------------------------

def _parse_matrix(data, dim: int, where: str) -> tuple:
    if not isinstance(data, list) or len(data) != dim:
        raise ParseError(f"expected a {dim}x{dim} matrix", where)
    out = []
    for r, row in enumerate(data):
        if not isinstance(row, list) or len(row) != dim:
            raise ParseError(f"row {r} must have {dim} entries", where)
        out.append(tuple(parse_scalar(str(x), f"{where}[{r}][{c}]") for c, x in enumerate(row)))
    return tuple(out)


def load_module(A: Algebra, source) -> ModuleSpec:
    """Read a module spec: JSON with ``kind``, ``dim``, ``left_action``,
    ``right_action`` (lists of matrices of scalar strings) and optional
    ``involution``; ``{"builtin": "regular", "kind": [i, j]}``,
    ``{"builtin": "der"}`` and ``{"builtin": "forms1"}`` name the standard modules."""
    if isinstance(source, (str, Path)):
        try:
            data = json.loads(Path(source).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}") from None
    else:
        data = source
    if not isinstance(data, dict):
        raise ParseError("module spec must be a JSON object")
    builtin = data.get("builtin")
    if builtin is not None:
        if builtin == "regular":
            return regular_module(A, tuple(data.get("kind", (1, 1))))
        if builtin == "der":
            return derivation_module(A)
        if builtin == "forms1":
            return forms_module(A)
        raise ParseError(f"unknown builtin module {builtin!r}", "builtin")
    for key in ("kind", "dim", "left_action", "right_action"):
        if key not in data:
            raise ParseError("missing field", key)
    kind = tuple(data["kind"])
    dim = data["dim"]
    if not isinstance(dim, int) or dim <= 0:
        raise ParseError("must be a positive integer", "dim")
    left = tuple(_parse_matrix(m, dim, f"left_action[{k}]") for k, m in enumerate(data["left_action"]))
    right = tuple(_parse_matrix(m, dim, f"right_action[{k}]") for k, m in enumerate(data["right_action"]))
    inv = _parse_matrix(data["involution"], dim, "involution") if data.get("involution") else None
    return ModuleSpec(A, kind, dim, left, right, inv, name=data.get("name", "module")).validate()


def module_to_spec(M: ModuleSpec) -> dict:
    fmt = lambda mat: [[format_scalar(x) for x in r] for r in mat]
    out = {
        "name": M.name,
        "kind": list(M.kind),
        "dim": M.dim,
        "left_action": [fmt(m) for m in M.left],
        "right_action": [fmt(m) for m in M.right],
    }
    if M.involution is not None:
        out["involution"] = fmt(M.involution)
    return out


__all__ = [
    "KINDS",
    "ModuleSpec",
    "TensorQuotient",
    "canonical_bidual_map",
    "derivation_module",
    "direct_sum_module",
    "dual_kind",
    "dual_module",
    "forms_module",
    "free_module",
    "hom_to_algebra",
    "is_diagonal",
    "load_module",
    "minimal_one_forms_module",
    "module_to_spec",
    "morphism_space",
    "pair",
    "regular_module",
    "tensor_module",
    "universal_one_forms_module",
]
