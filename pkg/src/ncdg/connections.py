"""Connections on modules of kind ``(i, j)``: axioms, curvature, duals,
tensor products, conjugation and torsion of linear connections.

A connection stores one endomorphism matrix per basis derivation ``X_a``;
``nabla_X`` for a general derivation is the corresponding linear combination.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import Algebra, Derivation
from .errors import (
    InvalidConnection,
    KindMismatch,
    NoInvolution,
    NotInSubspace,
    QuotientNotPreserved,
    WrongModule,
)
from .forms import DerForm, differential
from .linalg import (
    identity,
    mat_add,
    mat_conj,
    mat_mul,
    mat_scale,
    mat_sub,
    mat_vec,
    to_dense,
    transpose,
)
from .modules import (
    ModuleSpec,
    TensorQuotient,
    block_diagonal,
    canonical_bidual_map,
    direct_sum_module,
    dual_coordinates,
    dual_module,
    kron,
    morphism_space,
    ring_basis,
    tensor_module,
)
from .scalar import ZERO, Scalar


def _der_coords(A: Algebra, X) -> dict:
    if isinstance(X, Derivation):
        return A.der.sparse_coords(X)
    if isinstance(X, int):
        return {X: Scalar(1)}
    return dict(X)


def _combine(mats, coords: dict, n: int) -> tuple:
    acc = [[ZERO] * n for _ in range(n)]
    for a, c in coords.items():
        if not c:
            continue
        M = mats[a]
        for r in range(n):
            for s in range(n):
                if M[r][s]:
                    acc[r][s] = acc[r][s] + c * M[r][s]
    return tuple(tuple(r) for r in acc)


@dataclass(eq=False)
class Connection:
    module: ModuleSpec
    nabla: tuple  # nabla[a]: matrix of nabla_{X_a}
    name: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        m = self.module.algebra.der.dim
        if len(self.nabla) != m:
            raise InvalidConnection(f"need {m} matrices, one per basis derivation")
        self.nabla = tuple(tuple(tuple(r) for r in M) for M in self.nabla)

    def along(self, X) -> tuple:
        """Matrix of ``nabla_X``."""
        return _combine(self.nabla, _der_coords(self.module.algebra, X), self.module.dim)

    def __call__(self, X, m) -> tuple:
        return mat_vec(self.along(X), m)

    def __eq__(self, other):
        if not isinstance(other, Connection):
            return NotImplemented
        return self.module is other.module and self.nabla == other.nabla

    def __hash__(self):
        return hash(self.nabla)

    def __add__(self, alpha):
        """Shift by a morphism-valued 1-form given as one matrix per basis derivation."""
        return Connection(self.module, tuple(mat_add(P, Q) for P, Q in zip(self.nabla, alpha)))

    def __sub__(self, other):
        if isinstance(other, Connection):
            return tuple(mat_sub(P, Q) for P, Q in zip(self.nabla, other.nabla))
        return Connection(self.module, tuple(mat_sub(P, Q) for P, Q in zip(self.nabla, other)))


# -- validation -------------------------------------------------------------------------

@dataclass(frozen=True)
class ConnectionReport:
    violations: tuple  # ((law, witness), ...)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.valid


def validate_connection(C: Connection) -> ConnectionReport:
    """Check Z(A)-linearity in X and the two-sided Leibniz rule on all basis data."""
    M = C.module
    A = M.algebra
    D = A.der
    bad = []
    # Z(A)-linearity: nabla_{z X_a} = z nabla_{X_a}
    for c, z in enumerate(A.center_basis.vectors):
        Z = M.central_matrix(z)
        for a in range(D.dim):
            lhs = C.along(D.center_action[c][a])
            rhs = mat_mul(Z, C.nabla[a])
            if lhs != rhs:
                bad.append(("Z-linearity", (c, a)))
    # nabla_X(a m b) = X(a) m b + a nabla_X(m) b + a m X(b).  The unit acts as the
    # identity, so it suffices to check a m (b = 1) and m b (a = 1) separately:
    # the two-sided rule then follows by applying one after the other.
    left_basis = ring_basis(A, M.kind[0])
    right_basis = ring_basis(A, M.kind[1])
    for a_idx in range(D.dim):
        X = D.elements[a_idx]
        N = C.nabla[a_idx]
        for i, x in enumerate(left_basis):
            L = M.left[i]
            if mat_mul(N, L) != mat_add(M.left_matrix(X.apply(x)), mat_mul(L, N)):
                bad.append(("Leibniz-left", (a_idx, i)))
        for j, y in enumerate(right_basis):
            R = M.right[j]
            if mat_mul(N, R) != mat_add(mat_mul(R, N), M.right_matrix(X.apply(y))):
                bad.append(("Leibniz-right", (a_idx, j)))
    return ConnectionReport(tuple(bad))


def check_connection(C: Connection) -> Connection:
    report = validate_connection(C)
    if not report.valid:
        law, witness = report.violations[0]
        raise InvalidConnection(f"{law} fails at {witness}")
    return C


# -- standard connections ------------------------------------------------------------------

def derivation_connection(M: ModuleSpec) -> Connection:
    """``nabla_X = X`` on a regular module (A, or a direct sum of copies of A)."""
    A = M.algebra
    if M.dim % A.dim:
        raise WrongModule("module is not a sum of copies of the algebra")
    copies = M.dim // A.dim
    mats = []
    for X in A.der.elements:
        P = X.matrix
        for _ in range(copies - 1):
            P = block_diagonal(P, X.matrix, len(P), A.dim)
        mats.append(P)
    return Connection(M, tuple(mats), name="derivation")


def bracket_connection(M: ModuleSpec, scale: Scalar = Scalar(1)) -> Connection:
    """``nabla_X(Y) = scale [X, Y]`` on Der(A) viewed as a Z(A)-module."""
    if M.role != "der":
        raise WrongModule("bracket connection lives on Der(A)")
    D = M.algebra.der
    mats = []
    for a in range(D.dim):
        cols = [to_dense(D.bracket[a][b], D.dim) for b in range(D.dim)]
        mats.append(mat_scale(scale, transpose(cols)) if cols else ())
    return Connection(M, tuple(mats), name=f"{scale}*bracket")


def zero_connection(M: ModuleSpec) -> Connection:
    n = M.dim
    z = tuple((ZERO,) * n for _ in range(n))
    return Connection(M, tuple(z for _ in range(M.algebra.der.dim)), name="zero")


def morphism_one_forms(M: ModuleSpec) -> list:
    """Basis of the Z(A)-linear maps ``Der(A) -> End(M)`` with values in morphisms.

    Each element is a tuple of matrices, one per basis derivation; adding one
    to a connection yields another connection.
    """
    from .linalg import nullspace

    A = M.algebra
    D = A.der
    ends = morphism_space(M)
    e, m = len(ends), D.dim
    if e == 0:
        return []
    # unknown coefficients u[a * e + k]: alpha(X_a) = sum_k u[a, k] ends[k]
    rows = []
    n = M.dim
    for c, z in enumerate(A.center_basis.vectors):
        Z = M.central_matrix(z)
        zend = [mat_mul(Z, E) for E in ends]
        for a in range(m):
            for r in range(n):
                for s in range(n):
                    row = {}
                    for b, f in D.center_action[c][a].items():
                        for k, E in enumerate(ends):
                            if E[r][s]:
                                row[b * e + k] = row.get(b * e + k, ZERO) + f * E[r][s]
                    for k, E in enumerate(zend):
                        if E[r][s]:
                            row[a * e + k] = row.get(a * e + k, ZERO) - E[r][s]
                    row = {key: v for key, v in row.items() if v}
                    if row:
                        rows.append(row)
    out = []
    for vec in nullspace(rows, e * m):
        mats = []
        for a in range(m):
            acc = tuple((ZERO,) * n for _ in range(n))
            for k in range(e):
                c = vec.get(a * e + k)
                if c:
                    acc = mat_add(acc, mat_scale(c, ends[k]))
            mats.append(acc)
        out.append(tuple(mats))
    return out


def random_connection(reference: Connection, rng: random.Random, terms: int = 3) -> Connection:
    """``reference`` plus a random combination of morphism-valued 1-forms."""
    basis = reference.extra.get("_one_forms")
    if basis is None:
        basis = morphism_one_forms(reference.module)
        reference.extra["_one_forms"] = basis
    C = reference
    if not basis:
        return Connection(reference.module, reference.nabla, name="random")
    for _ in range(terms):
        alpha = basis[rng.randrange(len(basis))]
        c = Scalar(rng.randint(-2, 2), rng.randint(-2, 2))
        C = C + tuple(mat_scale(c, P) for P in alpha)
    C.name = "random"
    return C


# -- curvature ----------------------------------------------------------------------------

def curvature(C: Connection, X, Y, check: bool = True) -> tuple:
    """``R_{X,Y} = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y]``."""
    if check:
        check_connection(C)
    A = C.module.algebra
    D = A.der
    cx, cy = _der_coords(A, X), _der_coords(A, Y)
    NX, NY = C.along(cx), C.along(cy)
    bracket: dict = {}
    for a, f in cx.items():
        for b, g in cy.items():
            for t, h in D.bracket[a][b].items():
                bracket[t] = bracket.get(t, ZERO) + f * g * h
    return mat_sub(mat_sub(mat_mul(NX, NY), mat_mul(NY, NX)), C.along(bracket))


def curvature_table(C: Connection) -> dict:
    """``R_{X_a, X_b}`` for all basis pairs ``a < b``."""
    check_connection(C)
    m = C.module.algebra.der.dim
    return {(a, b): curvature(C, a, b, check=False) for a in range(m) for b in range(a + 1, m)}


def is_flat(C: Connection) -> bool:
    return all(not any(x for r in R for x in r) for R in curvature_table(C).values())


# -- direct sums, duals, tensor products ----------------------------------------------------

def direct_sum_connection(C1: Connection, C2: Connection) -> Connection:
    M = direct_sum_module(C1.module, C2.module)
    mats = tuple(block_diagonal(P, Q, C1.module.dim, C2.module.dim) for P, Q in zip(C1.nabla, C2.nabla))
    return Connection(M, mats, name=f"{C1.name}+{C2.name}")


def dual_connection(C: Connection, dual: ModuleSpec | None = None) -> Connection:
    """``(nabla'_X phi)(m) = X(phi(m)) - phi(nabla_X m)`` on ``M' = Hom(M, A)``."""
    M = C.module
    if dual is None:
        dual = dual_module(M)
    elif dual.predual is not M:
        raise WrongModule("given dual module does not belong to this connection's module")
    A = M.algebra
    mats = []
    for a, X in enumerate(A.der.elements):
        cols = []
        for Phi in dual.pairing:
            image = mat_sub(mat_mul(X.matrix, Phi), mat_mul(Phi, C.nabla[a]))
            try:
                cols.append(dual_coordinates(dual, image))
            except NotInSubspace:
                raise InvalidConnection("dual connection leaves the dual module") from None
        mats.append(transpose(cols) if cols else ())
    return Connection(dual, tuple(mats), name=f"({C.name})'")


def dual_identity_residual(C: Connection, Cd: Connection, m, mprime, X) -> tuple:
    """``X<m, m'> - <nabla_X m, m'> - <m, nabla'_X m'>`` (zero for the dual connection)."""
    from .modules import pair

    A = C.module.algebra
    coords = _der_coords(A, X)
    Xder = A.der.combine(coords)
    lhs = Xder.apply(pair(Cd.module, m, mprime))
    r1 = pair(Cd.module, C(coords, m), mprime)
    r2 = pair(Cd.module, m, Cd(coords, mprime))
    return tuple(a - b - c for a, b, c in zip(lhs, r1, r2))


def bidual_extends(C: Connection) -> bool:
    """``nabla''`` restricted along the canonical map equals ``nabla``."""
    Cd = dual_connection(C)
    Cdd = dual_connection(Cd)
    iota, _, _ = canonical_bidual_map(C.module, Cd.module, Cdd.module)
    if not iota:
        return C.module.dim == 0
    for N, Ndd in zip(C.nabla, Cdd.nabla):
        if mat_mul(Ndd, iota) != mat_mul(iota, N):
            return False
    return True


@dataclass
class TensorConnection:
    connection: Connection
    quotient: TensorQuotient


def tensor_connection(C1: Connection, C2: Connection) -> TensorConnection:
    """``D_X = nabla1_X (x) id + id (x) nabla2_X`` passed to ``M1 (x)_{A_j} M2``."""
    M1, M2 = C1.module, C2.module
    if M1.kind[1] != M2.kind[0]:
        raise KindMismatch(f"cannot tensor kind {M1.kind} with kind {M2.kind}")
    tq = tensor_module(M1, M2)
    I1, I2 = identity(M1.dim), identity(M2.dim)
    mats = []
    for N1, N2 in zip(C1.nabla, C2.nabla):
        Dx = mat_add(kron(N1, I2), kron(I1, N2))
        # the relation span must be mapped into itself
        for row in tq.relations:
            dense = to_dense(row, M1.dim * M2.dim)
            if not tq.in_relations(mat_vec(Dx, dense)):
                raise QuotientNotPreserved("D_X does not preserve the balancing relations")
        cols = [tq.project(mat_vec(Dx, tq.lift(e))) for e in identity(len(tq.free))]
        mats.append(transpose(cols) if cols else ())
    return TensorConnection(Connection(tq.module, tuple(mats), name=f"{C1.name}(x){C2.name}"), tq)


# -- conjugation -----------------------------------------------------------------------------

def conjugate_connection(C: Connection) -> Connection:
    """``nabla*_X(m) = (nabla_{X*}(m*))*``."""
    M = C.module
    if M.involution is None:
        raise NoInvolution(f"{M.name} has no involution")
    D = M.algebra.der
    J = M.involution
    mats = []
    for a in range(D.dim):
        N = C.along(D.star[a])
        mats.append(mat_mul(mat_mul(J, mat_conj(N)), mat_conj(J)))
    return Connection(M, tuple(mats), name=f"({C.name})*")


def is_real_connection(C: Connection) -> bool:
    return conjugate_connection(C).nabla == C.nabla


# -- linear connections and torsion ------------------------------------------------------------

def form_of(M: ModuleSpec, coords) -> DerForm:
    """The 1-form for coordinates on the degree-one forms module."""
    A = M.algebra
    n, m = A.dim, A.der.dim
    acc = [[ZERO] * m for _ in range(n)]
    for c, Phi in zip(coords, M.pairing):
        if c:
            for k in range(n):
                for a in range(m):
                    if Phi[k][a]:
                        acc[k][a] = acc[k][a] + c * Phi[k][a]
    return DerForm(A, 1, {(a,): tuple(acc[k][a] for k in range(n)) for a in range(m)})


def form_coordinates(M: ModuleSpec, omega: DerForm) -> tuple:
    A = M.algebra
    n, m = A.dim, A.der.dim
    Phi = tuple(tuple(omega.value((a,))[k] for a in range(m)) for k in range(n))
    return dual_coordinates(M, Phi)


def lie_derivative_connection(M: ModuleSpec) -> Connection:
    """``nabla_X(omega) = L_X omega`` on the degree-one forms module."""
    from .forms import lie_derivative

    if M.role != "forms1":
        raise WrongModule("Lie-derivative connection lives on the degree-one forms")
    A = M.algebra
    mats = []
    for a in range(A.der.dim):
        cols = [form_coordinates(M, lie_derivative(a, form_of(M, e))) for e in identity(M.dim)]
        mats.append(transpose(cols) if cols else ())
    return Connection(M, tuple(mats), name="lie")


def torsion_form(C: Connection, omega) -> DerForm:
    """``(T omega)(X, Y) = d omega(X, Y) - nabla_X(omega)(Y) + nabla_Y(omega)(X)``."""
    M = C.module
    if M.role != "forms1":
        raise WrongModule("torsion_form needs a connection on the degree-one forms")
    A = M.algebra
    m = A.der.dim
    if isinstance(omega, DerForm):
        coords = form_coordinates(M, omega)
        form = omega
    else:
        coords = tuple(omega)
        form = form_of(M, coords)
    dw = differential(form)
    moved = [form_of(M, mat_vec(C.nabla[a], coords)) for a in range(m)]
    comps = {}
    for a in range(m):
        for b in range(a + 1, m):
            v = dw.value((a, b))
            p = moved[a].value((b,))
            q = moved[b].value((a,))
            comps[(a, b)] = tuple(x - y + z for x, y, z in zip(v, p, q))
    return DerForm(A, 2, comps)


def torsion_der(C: Connection, X, Y) -> Derivation:
    """``T(X, Y) = nabla_X(Y) - nabla_Y(X) - [X, Y]`` for a connection on Der(A)."""
    M = C.module
    if M.role != "der":
        raise WrongModule("torsion_der needs a connection on Der(A)")
    A = M.algebra
    D = A.der
    cx, cy = _der_coords(A, X), _der_coords(A, Y)
    vx, vy = to_dense(cx, D.dim), to_dense(cy, D.dim)
    t1 = C(cx, vy)
    t2 = C(cy, vx)
    br = [ZERO] * D.dim
    for a, f in cx.items():
        for b, g in cy.items():
            for t, h in D.bracket[a][b].items():
                br[t] = br[t] + f * g * h
    return D.combine(tuple(p - q - r for p, q, r in zip(t1, t2, br)))


def torsion_is_bimodule_map(C: Connection, omega: DerForm, x, y) -> bool:
    """``T(x omega y) = x T(omega) y`` for algebra elements ``x``, ``y``."""
    return torsion_form(C, omega.left(x).right(y)) == torsion_form(C, omega).left(x).right(y)


# -- connection spec files -------------------------------------------------------------------

def load_nabla(M: ModuleSpec, source) -> Connection:
    """Read ``{"nabla": [matrix per basis derivation]}`` or a builtin name.

    Builtins: ``{"builtin": "derivation"}`` (regular modules),
    ``{"builtin": "bracket"}`` (Der(A)), ``{"builtin": "lie"}`` (1-forms),
    ``{"builtin": "zero"}``.
    """
    import json
    from pathlib import Path

    from .errors import ParseError
    from .modules import _parse_matrix

    if isinstance(source, (str, Path)):
        try:
            data = json.loads(Path(source).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}") from None
    else:
        data = source
    if not isinstance(data, dict):
        raise ParseError("connection spec must be a JSON object")
    builtin = data.get("builtin")
    if builtin is not None:
        makers = {
            "derivation": derivation_connection,
            "bracket": bracket_connection,
            "lie": lie_derivative_connection,
            "zero": zero_connection,
        }
        if builtin not in makers:
            raise ParseError(f"unknown builtin connection {builtin!r}", "builtin")
        return makers[builtin](M)
    if "nabla" not in data:
        raise ParseError("missing field", "nabla")
    mats = tuple(_parse_matrix(m, M.dim, f"nabla[{a}]") for a, m in enumerate(data["nabla"]))
    return Connection(M, mats, name=data.get("name", "nabla"))
