"""Symplectic structures on derivation-based forms, Hamiltonians and Poisson brackets.

Only algebras with trivial center are handled: there every alternating
C-multilinear form is automatically Z(A)-multilinear and the Hamiltonian of
``x`` is the solution of an ordinary linear system over the Der(A) basis.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .algebra import Algebra, AlgebraElement, Derivation
from .errors import (
    CenterNotTrivial,
    Degenerate,
    Inconsistent,
    NonUnique,
    NotCentral,
    NotNormalized,
    NotSymplectic,
    OuterDerivationsExist,
)
from .forms import DerForm, differential, form_from_vector, form_involution, index_positions
from .linalg import nullspace, rank, solve_sparse, to_dense
from .scalar import I, ONE, ZERO, Scalar, as_scalar


def _require_two_form(omega: DerForm) -> None:
    if omega.degree != 2:
        raise ValueError(f"expected a 2-form, got degree {omega.degree}")
    if not omega.algebra.has_trivial_center():
        raise CenterNotTrivial(
            f"{omega.algebra.name}: nondegeneracy is only implemented for trivial center"
        )


def _pairing_rows(omega: DerForm) -> list[dict]:
    """Rows of ``h -> (omega(X_a, sum_b h_b X_b))_{a, k}``."""
    A = omega.algebra
    m = A.der.dim
    rows = []
    for a in range(m):
        for k in range(A.dim):
            row = {}
            for b in range(m):
                v = omega.value((a, b))[k]
                if v:
                    row[b] = v
            rows.append(row)
    return rows


def _rhs(A: Algebra, x) -> list:
    coeffs = x.coeffs if isinstance(x, AlgebraElement) else tuple(x)
    out = []
    for X in A.der.elements:
        out.extend(X.apply(coeffs))
    return out


def hamiltonian(omega: DerForm, x: AlgebraElement) -> Derivation:
    """The derivation ``H`` with ``omega(X, H) = X(x)`` for every derivation ``X``."""
    _require_two_form(omega)
    A = omega.algebra
    m = A.der.dim
    try:
        particular, kernel = solve_sparse(_pairing_rows(omega), _rhs(A, x), m)
    except Inconsistent:
        raise Degenerate(f"no Hamiltonian derivation for {x!r}", witness=x) from None
    if kernel:
        raise NonUnique(
            f"Hamiltonian of {x!r} is not unique", witness=A.der.combine(kernel[0])
        )
    return A.der.combine(particular)


def hamiltonian_map(omega: DerForm) -> tuple:
    """Hamiltonians of the algebra basis elements."""
    A = omega.algebra
    return tuple(hamiltonian(omega, A.basis(i)) for i in range(A.dim))


def nondegeneracy_witness(omega: DerForm):
    """``None`` if nondegenerate, else ``(basis index, "missing" | "not unique")``."""
    _require_two_form(omega)
    A = omega.algebra
    m = A.der.dim
    rows = _pairing_rows(omega)
    unique = rank(rows) == m
    for i in range(A.dim):
        try:
            solve_sparse(rows, _rhs(A, A.basis_vector(i)), m)
        except Inconsistent:
            return (i, "missing")
        if not unique:
            return (i, "not unique")
    return None


def is_nondegenerate(omega: DerForm) -> bool:
    return nondegeneracy_witness(omega) is None


def is_closed(omega: DerForm) -> bool:
    return differential(omega).is_zero()


def is_symplectic(omega: DerForm) -> bool:
    return is_closed(omega) and is_nondegenerate(omega)


def is_real(omega: DerForm) -> bool:
    return form_involution(omega) == omega


@dataclass(frozen=True)
class PoissonBracketTable:
    """``table[i][j]`` holds the coefficients of ``{e_i, e_j}``."""

    algebra: Algebra
    table: tuple

    def bracket(self, x, y) -> tuple:
        A = self.algebra
        xc = x.coeffs if isinstance(x, AlgebraElement) else x
        yc = y.coeffs if isinstance(y, AlgebraElement) else y
        acc = [ZERO] * A.dim
        for i, a in enumerate(xc):
            if not a:
                continue
            for j, b in enumerate(yc):
                if not b:
                    continue
                ab = a * b
                for k, v in enumerate(self.table[i][j]):
                    if v:
                        acc[k] = acc[k] + ab * v
        return tuple(acc)

    def __call__(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(self.algebra, self.bracket(x, y))

    def antisymmetry_violation(self):
        n = self.algebra.dim
        for i in range(n):
            for j in range(i, n):
                if any(a + b for a, b in zip(self.table[i][j], self.table[j][i])):
                    return (i, j)
        return None

    def leibniz_violation(self):
        """First ``(x, y, z)`` with ``{x, yz} != {x, y} z + y {x, z}``."""
        A = self.algebra
        n = A.dim
        e = A.basis_vector
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    lhs = self.bracket(e(x), A.mul(e(y), e(z)))
                    r1 = A.mul(self.table[x][y], e(z))
                    r2 = A.mul(e(y), self.table[x][z])
                    if any(l != p + q for l, p, q in zip(lhs, r1, r2)):
                        return (x, y, z)
        return None

    def jacobi_violation(self):
        """First basis triple with a nonzero cyclic sum, or None."""
        A = self.algebra
        n = A.dim
        e = A.basis_vector
        for x in range(n):
            for y in range(x + 1, n):
                for z in range(y + 1, n):
                    s1 = self.bracket(e(x), self.table[y][z])
                    s2 = self.bracket(e(y), self.table[z][x])
                    s3 = self.bracket(e(z), self.table[x][y])
                    if any(a + b + c for a, b, c in zip(s1, s2, s3)):
                        return (x, y, z)
        return None


def hamiltonian_bracket_table(omega: DerForm, hams: tuple | None = None) -> PoissonBracketTable:
    """``{x, y} = omega(Ham x, Ham y)`` for any nondegenerate ``omega`` (closed or not)."""
    A = omega.algebra
    if hams is None:
        hams = hamiltonian_map(omega)
    coords = [A.der.sparse_coords(H) for H in hams]
    table = tuple(tuple(omega(ci, cj).coeffs for cj in coords) for ci in coords)
    return PoissonBracketTable(A, table)


def poisson_table(omega: DerForm) -> PoissonBracketTable:
    if not is_closed(omega):
        raise NotSymplectic("2-form is not closed")
    try:
        return hamiltonian_bracket_table(omega)
    except (Degenerate, NonUnique) as exc:
        raise NotSymplectic(f"2-form is degenerate: {exc}") from None


def poisson_bracket(omega: DerForm, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return poisson_table(omega)(x, y)


# -- the canonical structure ---------------------------------------------------------

def _canonical_preimages(A: Algebra) -> tuple:
    """``y_a`` with ``X_a = ad(i y_a)`` for each basis derivation."""
    if not A.has_trivial_center():
        raise CenterNotTrivial(f"{A.name}: center has dimension {A.center_basis.dim}")
    pre = A.der.inner_preimages
    if pre is None:
        raise OuterDerivationsExist(f"{A.name}: not every derivation is inner")
    return tuple(-I * x for x in pre)


def canonical_symplectic(A: Algebra) -> DerForm:
    """``omega(ad(ix), ad(iy)) = i[x, y]``."""
    ys = _canonical_preimages(A)
    m = A.der.dim
    comps = {}
    for a in range(m):
        for b in range(a + 1, m):
            comps[(a, b)] = (I * ys[a].commutator(ys[b])).coeffs
    return DerForm(A, 2, comps)


def trace_form(A: Algebra) -> tuple:
    """``tau(x) = Tr(L_x) / dim A`` as values on the basis; central and normalized."""
    n = A.dim
    inv = Scalar(1) / n
    return tuple(
        sum((A.left_matrix(A.basis_vector(i))[k][k] for k in range(n)), ZERO) * inv
        for i in range(n)
    )


def _apply_linear_form(tau, x) -> Scalar:
    coeffs = x.coeffs if isinstance(x, AlgebraElement) else x
    return sum((t * c for t, c in zip(tau, coeffs) if t and c), ZERO)


def check_trace(A: Algebra, tau) -> None:
    tau = tuple(as_scalar(t) for t in tau)
    if len(tau) != A.dim:
        raise ValueError(f"linear form needs {A.dim} values")
    for i in range(A.dim):
        for j in range(i + 1, A.dim):
            e_i, e_j = A.basis_vector(i), A.basis_vector(j)
            if _apply_linear_form(tau, A.mul(e_i, e_j)) != _apply_linear_form(tau, A.mul(e_j, e_i)):
                raise NotCentral(f"tau(xy) != tau(yx) on basis pair ({i}, {j})")
    if _apply_linear_form(tau, A.unit) != ONE:
        raise NotNormalized(f"tau(1) = {_apply_linear_form(tau, A.unit)}")


def canonical_theta(A: Algebra, tau) -> DerForm:
    """``theta(ad(ix)) = x - tau(x) 1``."""
    tau = tuple(as_scalar(t) for t in tau)
    check_trace(A, tau)
    ys = _canonical_preimages(A)
    one = A.one()
    comps = {}
    for a, y in enumerate(ys):
        comps[(a,)] = (y - _apply_linear_form(tau, y) * one).coeffs
    return DerForm(A, 1, comps)


# -- searching for nondegenerate forms that are not closed ------------------------------

def antisymmetric_biderivations(A: Algebra) -> list[dict]:
    """Basis of antisymmetric maps ``B`` that are derivations in each argument.

    Coordinates are sparse over ``(x * dim + y) * dim + k`` (component k of
    ``B(e_x, e_y)``).
    """
    n = A.dim

    def idx(x, y, k):
        return (x * n + y) * n + k

    table = [[dict(A._table[i][j]) for j in range(n)] for i in range(n)]
    rows = []
    for x in range(n):
        for y in range(x, n):
            for k in range(n):
                rows.append({idx(x, y, k): ONE + ONE} if x == y else {idx(x, y, k): ONE, idx(y, x, k): ONE})
    # B(x, yz) = B(x, y) z + y B(x, z)
    for x in range(n):
        for y in range(n):
            for z in range(n):
                for k in range(n):
                    row = {}

                    def add(col, c):
                        v = row.get(col, ZERO) + c
                        if v:
                            row[col] = v
                        else:
                            row.pop(col, None)

                    for mid, c in table[y][z].items():
                        add(idx(x, mid, k), c)
                    for l in range(n):
                        c = table[l][z].get(k)
                        if c:
                            add(idx(x, y, l), -c)
                        c = table[y][l].get(k)
                        if c:
                            add(idx(x, z, l), -c)
                    if row:
                        rows.append(row)
    return nullspace(rows, n ** 3)


def form_with_hamiltonians(A: Algebra, hams) -> tuple:
    """Solve ``omega(X_a, hams[x]) = X_a(e_x)`` for 2-forms.

    Returns ``(particular, kernel)`` as sparse vectors over the flattened
    2-form coordinates; raises Inconsistent if no 2-form has these Hamiltonians.
    """
    D = A.der
    n, m = A.dim, D.dim
    pos = index_positions(m, 2)
    coords = [D.sparse_coords(H) for H in hams]
    rows, rhs = [], []
    for a in range(m):
        for x in range(n):
            img = D.elements[a].apply(A.basis_vector(x))
            for k in range(n):
                row = {}
                for b, c in coords[x].items():
                    if a == b:
                        continue
                    col = pos[(min(a, b), max(a, b))] * n + k
                    v = row.get(col, ZERO) + (c if a < b else -c)
                    if v:
                        row[col] = v
                    else:
                        row.pop(col, None)
                rows.append(row)
                rhs.append(img[k])
    return solve_sparse(rows, rhs, len(pos) * n)


def search_nonclosed_nondegenerate(
    A: Algebra, rng: random.Random, attempts: int = 20, jacobi_failure: bool = True
) -> DerForm | None:
    """Look for a nondegenerate 2-form with ``d omega != 0``.

    Draws random antisymmetric biderivations ``B``, uses ``x -> B(x, .)`` as the
    prospective Hamiltonian map, solves for compatible 2-forms and keeps the
    first random solution that is nondegenerate and not closed.  With
    ``jacobi_failure`` the bracket must also violate the Jacobi identity; this
    is a real restriction when the Hamiltonians do not span Der(A), because
    then ``d omega`` can be nonzero on non-Hamiltonian arguments only.
    """
    if not A.has_trivial_center():
        raise CenterNotTrivial(f"{A.name}: center has dimension {A.center_basis.dim}")
    n = A.dim
    basis = [to_dense(v, n ** 3) for v in antisymmetric_biderivations(A)]
    if not basis:
        return None
    for _ in range(attempts):
        coef = [Scalar(rng.randint(-3, 3), rng.randint(-1, 1)) for _ in basis]
        flat = [ZERO] * (n ** 3)
        for c, v in zip(coef, basis):
            if c:
                for i, x in enumerate(v):
                    if x:
                        flat[i] = flat[i] + c * x
        hams = []
        for x in range(n):
            mat = [[flat[(x * n + j) * n + k] for j in range(n)] for k in range(n)]
            hams.append(Derivation(A, mat, check=False))
        try:
            particular, kernel = form_with_hamiltonians(A, hams)
        except Inconsistent:
            continue
        vec = dict(particular)
        for kv in kernel:
            c = Scalar(rng.randint(-2, 2))
            if c:
                for i, x in kv.items():
                    vec[i] = vec.get(i, ZERO) + c * x
        omega = form_from_vector(A, 2, {i: x for i, x in vec.items() if x})
        if is_closed(omega) or not is_nondegenerate(omega):
            continue
        if jacobi_failure and hamiltonian_bracket_table(omega).jacobi_violation() is None:
            continue
        return omega
    return None
