"""Verification batteries behind ``ncdg run``.

Each suite evaluates a list of named laws on one algebra (or on the Weyl
algebra) and returns rows ``{law, status, witness, ref}`` sorted by law name.
Random sampling uses :class:`random.Random` seeded with the string
``"<seed>:<suite>:<algebra>"``; string seeding is specified by Python to hash
with SHA-512, so samples replay identically on every platform.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import (
    Algebra,
    AlgebraElement,
    Derivation,
    derivation_involution,
    inner_derivation,
    inner_preimage,
    leibniz_violation,
    lie_bracket,
)
from .errors import (
    CenterNotTrivial,
    InvalidAlgebra,
    NCDGError,
    NotInSubspace,
    OuterDerivationsExist,
    QuotientNotPreserved,
    UnknownSuite,
)
from .fleet import bundled
from .linalg import mat_mul, mat_scale
from .scalar import I, ONE, ZERO, Scalar, format_scalar

SUITES = ("algebra", "universal", "forms", "cartan", "symplectic", "connections", "torsion", "weyl")

# algebras each suite visits when no spec files are given
DEFAULT_ALGEBRAS = {
    "algebra": ("M2", "M3", "CC", "M2C", "T2"),
    "universal": ("M2", "M3", "CC", "M2C", "T2"),
    "forms": ("M2", "M3", "CC", "M2C", "T2"),
    "cartan": ("M2", "M3"),
    "symplectic": ("M2", "M3", "CC", "M2C", "T2", "kronecker"),
    "connections": ("M2",),
    "torsion": ("M2", "M3"),
    "weyl": (None,),
}

DEFAULT_FORMS_DEGREE = 3
DEFAULT_WEYL_DEGREE = 5

PASS, FAIL, UNSUPPORTED = "pass", "fail", "unsupported"


# -- serialization of witnesses ---------------------------------------------------------

def serialize(obj):
    """JSON-compatible, deterministic rendering of witnesses."""
    from .forms import DerForm
    from .weyl import WeylElement, format_weyl

    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Scalar):
        return format_scalar(obj)
    if isinstance(obj, AlgebraElement):
        return [format_scalar(c) for c in obj.coeffs]
    if isinstance(obj, WeylElement):
        return format_weyl(obj)
    if isinstance(obj, Derivation):
        return [[format_scalar(c) for c in row] for row in obj.matrix]
    if isinstance(obj, DerForm):
        return {
            "degree": obj.degree,
            "components": {",".join(map(str, k)): [format_scalar(c) for c in v]
                           for k, v in sorted(obj.components.items())},
        }
    if isinstance(obj, dict):
        return {str(k): serialize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [serialize(x) for x in obj]
    return str(obj)


# -- row bookkeeping --------------------------------------------------------------------

@dataclass
class Battery:
    rows: dict = field(default_factory=dict)

    def record(self, law: str, ref: str, status: str, witness=None) -> None:
        old = self.rows.get(law)
        if old is not None and old["status"] == FAIL:
            return  # keep the first counterexample
        if old is not None and status == PASS:
            return
        self.rows[law] = {"law": law, "status": status, "witness": serialize(witness), "ref": ref}

    def check(self, law: str, ref: str, witness) -> None:
        """``witness`` None means the law held; anything else is the counterexample."""
        self.record(law, ref, PASS if witness is None else FAIL, witness)

    def unsupported(self, law: str, ref: str, reason: str) -> None:
        self.record(law, ref, UNSUPPORTED, reason)

    def sorted_rows(self) -> list:
        return [self.rows[k] for k in sorted(self.rows)]


def first(pairs):
    """First witness ``w`` for which ``ok`` is false in an iterable of ``(ok, w)``."""
    for ok, w in pairs:
        if not ok:
            return w
    return None


# -- algebra ------------------------------------------------------------------------------

def algebra_suite(A: Algebra, rng: random.Random, opts: dict) -> Battery:
    ref = "algebra-core"
    b = Battery()
    try:
        A._validate()
        b.check("axioms", ref, None)
    except InvalidAlgebra as exc:
        b.check("axioms", ref, {"error": str(exc), "indices": list(exc.indices)})
    D = A.der
    n = A.dim
    b.check("derivation-leibniz", ref, first(
        (leibniz_violation(A, X.matrix) is None, a) for a, X in enumerate(D.elements)))
    b.check("derivation-bracket-closed", ref, first(
        (D.combine(D.bracket[x][y]) == lie_bracket(D.elements[x], D.elements[y]), (x, y))
        for x in range(D.dim) for y in range(D.dim)))

    def star_ok(a):
        S = derivation_involution(D.elements[a])
        return leibniz_violation(A, S.matrix) is None and derivation_involution(S) == D.elements[a]

    b.check("derivation-involution", ref, first((star_ok(a), a) for a in range(D.dim)))

    def in_center(v):
        try:
            A.center_basis.coordinates(v)
            return True
        except NotInSubspace:
            return False

    zs = A.center_basis.vectors
    b.check("center-stable", ref, first(
        (in_center(X.apply(z)), (a, c)) for a, X in enumerate(D.elements) for c, z in enumerate(zs)))
    b.check("center-commutant", ref, first(
        (not any(A.commutator(z, A.basis_vector(i))), (c, i)) for c, z in enumerate(zs) for i in range(n)))

    def central_bracket(X, Y, z):
        zY = Derivation(A, mat_mul(A.left_matrix(z), Y.matrix), check=False)
        lhs = lie_bracket(X, zY)
        rhs = Derivation(A, mat_mul(A.left_matrix(X.apply(z)), Y.matrix), check=False) + Derivation(
            A, mat_mul(A.left_matrix(z), lie_bracket(X, Y).matrix), check=False)
        return lhs == rhs

    b.check("central-multiple-bracket", ref, first(
        (central_bracket(X, Y, z), (x, y, c))
        for x, X in enumerate(D.elements) for y, Y in enumerate(D.elements) for c, z in enumerate(zs)))

    def preimage_ok(X):
        x = inner_preimage(X)
        return x is None or inner_derivation(x) == X

    b.check("inner-preimage", ref, first((preimage_ok(X), a) for a, X in enumerate(D.elements)))
    return b


def algebra_facts(A: Algebra) -> dict:
    D = A.der
    return {
        "dim": A.dim,
        "center_dim": A.center_basis.dim,
        "der_dim": D.dim,
        "inner_dim": D.inner_subspace.dim,
        "all_inner": D.all_inner(),
    }


# -- universal calculus --------------------------------------------------------------------

def universal_suite(A: Algebra, rng: random.Random, opts: dict) -> Battery:
    from .forms import d, random_element
    from .universal import (
        UniversalOneForm,
        d_u,
        one_form_involution,
        one_form_product,
        omega1_basis,
        project_to_der,
        two_form_involution,
        universal_factor,
        universal_involution,
    )

    ref = "universal-calculus"
    b = Battery()
    n = A.dim
    e = A.basis
    basis = omega1_basis(A)
    b.check("omega1-dimension", ref, None if basis.dim == n * n - n else {"dim": basis.dim, "expected": n * n - n})
    ones = [UniversalOneForm.from_flat(A, v) for v in basis.vectors]
    b.check("omega1-in-kernel", ref, first((not any(w.multiply_out()), k) for k, w in enumerate(ones)))
    du = [d_u(e(i)) for i in range(n)]
    b.check("universal-property", ref, first(
        (universal_factor(X, du[i]) == X.apply(A.basis_vector(i)), (a, i))
        for a, X in enumerate(A.der.elements) for i in range(n)))
    b.check("d_u-leibniz", ref, first(
        (d_u(e(i) * e(j)) == du[i].right(e(j)) + du[j].left(e(i)), (i, j)) for i in range(n) for j in range(n)))
    b.check("project-d_u-equals-d", ref, first((project_to_der(du[i]) == d(e(i)), i) for i in range(n)))

    samples = rng.sample(ones, min(3, len(ones)))
    b.check("project-bimodule-map", ref, first(
        (project_to_der(w.left(e(x)).right(e(y))) == project_to_der(w).left(e(x)).right(e(y)), (k, x, y))
        for k, w in enumerate(samples) for x in range(n) for y in range(n)))

    def sign_ok(deg):
        want = -1 if (deg * (deg + 1) // 2) % 2 else 1
        for key in [tuple(rng.randrange(n) for _ in range(deg + 1)) for _ in range(5)]:
            got = universal_involution(A, deg, {key: ONE})
            expect = {}
            # reversed tensor product of the starred basis elements
            acc = {(): ONE}
            for idx in reversed(key):
                nxt = {}
                for pre, c in acc.items():
                    for k, s in enumerate(A.star(A.basis_vector(idx))):
                        if s:
                            nxt[pre + (k,)] = nxt.get(pre + (k,), ZERO) + c * s
                acc = nxt
            expect = {k: (v if want > 0 else -v) for k, v in acc.items() if v}
            if got != expect:
                return key
        return None

    b.check("involution-sign-degree-1", ref, sign_ok(1))
    b.check("involution-sign-degree-2", ref, sign_ok(2))
    b.check("involution-involutive-degree-1", ref, first(
        (one_form_involution(one_form_involution(w)) == w, k) for k, w in enumerate(samples)))
    b.check("d_u-commutes-with-involution", ref, first(
        (one_form_involution(du[i]) == d_u(AlgebraElement(A, A.star(A.basis_vector(i)))), i) for i in range(n)))
    twos = []
    for _ in range(3):
        x, y, z = (random_element(A, rng) for _ in range(3))
        twos.append(one_form_product(d_u(x).left(z), d_u(y)))
    b.check("involution-involutive-degree-2", ref, first(
        (two_form_involution(two_form_involution(w)) == w, k) for k, w in enumerate(twos)))
    b.check("project-product", ref, first(
        (project_to_der(one_form_product(du[i], du[j])) == d(e(i)) * d(e(j)), (i, j))
        for i in range(n) for j in range(n) if rng.random() < 0.3 or n <= 4))
    return b


# -- derivation-based forms ------------------------------------------------------------------

def _sample_forms(A, rng, max_degree, per_degree):
    from .forms import random_form

    return [(deg, random_form(A, deg, rng)) for deg in range(max_degree + 1) for _ in range(per_degree)]


def forms_suite(A: Algebra, rng: random.Random, opts: dict) -> Battery:
    from .forms import (
        biduality_rank,
        differential,
        form_involution,
        form_product,
        z_multilinearity_violation,
    )

    ref = "der-forms"
    b = Battery()
    top = opts.get("max_degree") or DEFAULT_FORMS_DEGREE
    samples = _sample_forms(A, rng, top, opts.get("samples", 4))
    b.check("d-squared-zero", ref, first(
        (differential(differential(w)).is_zero(), (k, deg)) for k, (deg, w) in enumerate(samples)))
    pairs = [(samples[rng.randrange(len(samples))], samples[rng.randrange(len(samples))]) for _ in range(len(samples))]
    pairs = [(p, q) for p, q in pairs if p[0] + q[0] < top + 1]

    def leibniz(p, q):
        (a, x), (_, y) = p, q
        lhs = differential(form_product(x, y))
        rhs = form_product(differential(x), y)
        rest = form_product(x, differential(y))
        return lhs == (rhs + rest if a % 2 == 0 else rhs - rest)

    b.check("d-graded-leibniz", ref, first((leibniz(p, q), (p[0], q[0])) for p, q in pairs))
    triples = [(samples[rng.randrange(len(samples))][1] for _ in range(3)) for _ in range(len(samples))]
    b.check("product-associative", ref, first(
        (form_product(form_product(x, y), z) == form_product(x, form_product(y, z)), k)
        for k, (x, y, z) in enumerate(map(tuple, triples))))
    b.check("z-multilinear", ref, first(
        (z_multilinearity_violation(w) is None and z_multilinearity_violation(differential(w)) is None, k)
        for k, (_, w) in enumerate(samples)))
    b.check("involution-involutive", ref, first(
        (form_involution(form_involution(w)) == w, k) for k, (_, w) in enumerate(samples)))
    b.check("involution-commutes-with-d", ref, first(
        (form_involution(differential(w)) == differential(form_involution(w)), k)
        for k, (_, w) in enumerate(samples)))

    def product_star(p, q):
        (a, x), (c, y) = p, q
        lhs = form_involution(form_product(x, y))
        rhs = form_product(form_involution(y), form_involution(x))
        return lhs == (rhs if (a * c) % 2 == 0 else -rhs)

    b.check("involution-product-sign", ref, first((product_star(p, q), (p[0], q[0])) for p, q in pairs))
    r = biduality_rank(A)
    b.check("biduality-rank", ref, None if r == A.der.dim else {"rank": r, "der_dim": A.der.dim})
    return b


def cartan_suite(A: Algebra, rng: random.Random, opts: dict) -> Battery:
    from .forms import (
        d,
        differential,
        form_product,
        function_form,
        interior_product,
        lie_derivative,
        lie_derivative_by_action,
    )

    ref = "der-forms"
    b = Battery()
    D = A.der
    m = D.dim
    if m == 0:
        b.unsupported("cartan-identities", ref, "Der(A) = 0")
        return b
    top = opts.get("max_degree") or DEFAULT_FORMS_DEGREE
    samples = _sample_forms(A, rng, top, opts.get("samples", 4))
    pos = [(deg, w) for deg, w in samples if deg > 0]
    derivs = [(rng.randrange(m), rng.randrange(m)) for _ in range(len(samples))]

    def bracket(x, y):
        return D.bracket[x][y]

    b.check("interior-anticommute", ref, first(
        ((interior_product(x, interior_product(y, w)) + interior_product(y, interior_product(x, w))).is_zero(),
         (k, x, y)) for k, ((deg, w), (x, y)) in enumerate(zip(pos, derivs)) if deg >= 2))

    def interior_leibniz(p, q, x):
        (a, u), (_, v) = p, q
        if a + q[0] == 0:
            return True
        lhs = interior_product(x, form_product(u, v))
        t1 = form_product(interior_product(x, u), v) if a else None
        t2 = form_product(u, interior_product(x, v)) if q[0] else None
        rhs = None
        if t1 is not None:
            rhs = t1
        if t2 is not None:
            t2 = t2 if a % 2 == 0 else -t2
            rhs = t2 if rhs is None else rhs + t2
        return lhs == rhs

    pairs = [(samples[rng.randrange(len(samples))], samples[rng.randrange(len(samples))], rng.randrange(m))
             for _ in range(len(samples))]
    pairs = [(p, q, x) for p, q, x in pairs if p[0] + q[0] <= top]
    b.check("interior-graded-leibniz", ref, first(
        (interior_leibniz(p, q, x), (p[0], q[0], x)) for p, q, x in pairs))
    b.check("cartan-formula", ref, first(
        (lie_derivative(x, w) == lie_derivative_by_action(x, w), (k, x))
        for k, ((deg, w), (x, _)) in enumerate(zip(samples, derivs))))
    b.check("lie-interior-commutator", ref, first(
        (lie_derivative(x, interior_product(y, w)) - interior_product(y, lie_derivative(x, w))
         == interior_product(bracket(x, y), w), (k, x, y))
        for k, ((deg, w), (x, y)) in enumerate(zip(pos, derivs))))
    b.check("lie-commutator", ref, first(
        (lie_derivative(x, lie_derivative(y, w)) - lie_derivative(y, lie_derivative(x, w))
         == lie_derivative(bracket(x, y), w), (k, x, y))
        for k, ((deg, w), (x, y)) in enumerate(zip(samples, derivs))))
    b.check("lie-commutes-with-d", ref, first(
        (lie_derivative(x, differential(w)) == differential(lie_derivative(x, w)), (k, x))
        for k, ((deg, w), (x, _)) in enumerate(zip(samples, derivs)) if deg < top))
    b.check("lie-on-functions", ref, first(
        (lie_derivative(a, function_form(A.basis(i))) == function_form(AlgebraElement(A, X.apply(A.basis_vector(i)))),
         (a, i)) for a, X in enumerate(D.elements) for i in range(A.dim)))
    b.check("interior-of-differential", ref, first(
        (interior_product(a, d(A.basis(i))) == function_form(AlgebraElement(A, X.apply(A.basis_vector(i)))),
         (a, i)) for a, X in enumerate(D.elements) for i in range(A.dim)))
    return b


# -- symplectic ------------------------------------------------------------------------------

def symplectic_suite(A: Algebra, rng: random.Random, opts: dict) -> Battery:
    from .forms import differential
    from .symplectic import (
        canonical_symplectic,
        canonical_theta,
        hamiltonian,
        hamiltonian_bracket_table,
        is_closed,
        is_nondegenerate,
        is_real,
        poisson_table,
        search_nonclosed_nondegenerate,
        trace_form,
    )

    ref = "symplectic"
    b = Battery()
    laws = ("canonical-closed", "canonical-nondegenerate", "canonical-real", "hamiltonian-is-ad-ix",
            "bracket-is-i-commutator", "bracket-antisymmetric", "jacobi", "leibniz",
            "hamiltonian-homomorphism", "theta-primitive", "reality-bracket", "reality-hamiltonian")
    try:
        omega = canonical_symplectic(A)
    except (CenterNotTrivial, OuterDerivationsExist) as exc:
        for law in laws:
            b.unsupported(law, ref, f"{type(exc).__name__}: {exc}")
        omega = None
    if omega is not None:
        n = A.dim
        e = A.basis
        b.check("canonical-closed", ref, None if is_closed(omega) else "d omega != 0")
        b.check("canonical-nondegenerate", ref, None if is_nondegenerate(omega) else "degenerate")
        b.check("canonical-real", ref, None if is_real(omega) else "omega* != omega")
        hams = [hamiltonian(omega, e(i)) for i in range(n)]
        b.check("hamiltonian-is-ad-ix", ref, first(
            (H == inner_derivation(I * e(i)), i) for i, H in enumerate(hams)))
        table = poisson_table(omega)
        b.check("bracket-is-i-commutator", ref, first(
            (table(e(i), e(j)) == I * e(i).commutator(e(j)), (i, j)) for i in range(n) for j in range(n)))
        b.check("bracket-antisymmetric", ref, table.antisymmetry_violation())
        b.check("jacobi", ref, table.jacobi_violation())
        b.check("leibniz", ref, table.leibniz_violation())
        b.check("hamiltonian-homomorphism", ref, first(
            (lie_bracket(hams[i], hams[j]) == hamiltonian(omega, table(e(i), e(j))), (i, j))
            for i in range(n) for j in range(n)))
        theta = canonical_theta(A, trace_form(A))
        b.check("theta-primitive", ref, None if differential(theta) == omega else "d theta != omega")
        star = A.star
        b.check("reality-bracket", ref, first(
            (star(table.table[i][j]) == table.bracket(star(A.basis_vector(i)), star(A.basis_vector(j))),
             (i, j)) for i in range(n) for j in range(n)))
        b.check("reality-hamiltonian", ref, first(
            (hamiltonian(omega, AlgebraElement(A, star(A.basis_vector(i)))) == derivation_involution(hams[i]), i)
            for i in range(n)))
        # closed => Jacobi on the canonical form; the converse direction is probed below
        b.check("closed-implies-jacobi", ref, table.jacobi_violation())
    # negative path: a nondegenerate form that is not closed must break Jacobi
    if not A.has_trivial_center():
        b.unsupported("nonclosed-jacobi-witness", ref, f"CenterNotTrivial: center has dimension {A.center_basis.dim}")
    elif A.der.all_inner():
        b.unsupported("nonclosed-jacobi-witness", ref,
                      "every nondegenerate 2-form is a multiple of the canonical one, hence closed")
    else:
        w = search_nonclosed_nondegenerate(A, rng, attempts=opts.get("attempts", 20))
        if w is None:
            b.unsupported("nonclosed-jacobi-witness", ref, "no nondegenerate non-closed 2-form found")
        else:
            triple = hamiltonian_bracket_table(w).jacobi_violation()
            ok = (not is_closed(w)) and is_nondegenerate(w) and triple is not None
            if ok:
                b.record("nonclosed-jacobi-witness", ref, PASS, {"jacobi_triple": list(triple), "omega": w})
            else:
                b.check("nonclosed-jacobi-witness", ref, {"omega": w})
    return b


# -- connections -----------------------------------------------------------------------------

def _curvature_checks(C, kind_tag, b, ref, rng):
    from .connections import curvature
    from .modules import ring_basis

    M = C.module
    A = M.algebra
    D = A.der
    m = D.dim
    pairs = [(x, y) for x in range(m) for y in range(m) if x != y]
    pairs = rng.sample(pairs, min(4, len(pairs)))
    Rs = {(x, y): curvature(C, x, y, check=False) for x, y in pairs}

    def morphism(R):
        for i, _ in enumerate(ring_basis(A, M.kind[0])):
            if mat_mul(R, M.left[i]) != mat_mul(M.left[i], R):
                return False
        for j, _ in enumerate(ring_basis(A, M.kind[1])):
            if mat_mul(R, M.right[j]) != mat_mul(M.right[j], R):
                return False
        return True

    b.check(f"curvature-morphism{kind_tag}", ref, first((morphism(R), xy) for xy, R in Rs.items()))
    b.check(f"curvature-antisymmetric{kind_tag}", ref, first(
        (curvature(C, y, x, check=False) == mat_scale(-ONE, R), (x, y)) for (x, y), R in Rs.items()))

    def zlinear(x, y, R):
        for c, z in enumerate(A.center_basis.vectors):
            Z = M.central_matrix(z)
            zx = D.center_action[c][x]
            if curvature(C, zx, y, check=False) != mat_mul(Z, R):
                return False
            zy = D.center_action[c][y]
            if curvature(C, x, zy, check=False) != mat_mul(Z, R):
                return False
        return True

    b.check(f"curvature-z-bilinear{kind_tag}", ref, first((zlinear(x, y, R), (x, y)) for (x, y), R in Rs.items()))


def connections_suite(A: Algebra, rng: random.Random, opts: dict) -> Battery:
    from .connections import (
        bidual_extends,
        conjugate_connection,
        derivation_connection,
        dual_connection,
        dual_identity_residual,
        random_connection,
        tensor_connection,
        validate_connection,
    )
    from .modules import KINDS, dual_module, is_diagonal, regular_module

    ref = "connections"
    b = Battery()
    if A.der.dim == 0:
        b.unsupported("connection-laws", ref, "Der(A) = 0")
        return b
    count = opts.get("connections", 5)
    refs = {k: derivation_connection(regular_module(A, k)) for k in KINDS}
    fleet = {k: [random_connection(refs[k], rng) for _ in range(count)] for k in KINDS}
    for k in KINDS:
        tag = f"[{k[0]},{k[1]}]"
        M = refs[k].module
        Md = dual_module(M)
        diagonal = is_diagonal(M)
        for t, C in enumerate(fleet[k]):
            rep = validate_connection(C)
            b.check(f"axioms{tag}", ref, None if rep.valid else {"connection": t, "violations": rep.violations[:3]})
            _curvature_checks(C, tag, b, ref, rng)
            Cd = dual_connection(C, Md)
            rep = validate_connection(Cd)
            b.check(f"dual-axioms{tag}", ref, None if rep.valid else {"connection": t, "violations": rep.violations[:3]})
            triples = [(rng.randrange(M.dim), rng.randrange(Md.dim), rng.randrange(A.der.dim)) for _ in range(6)]
            b.check(f"dual-identity{tag}", ref, first(
                (not any(dual_identity_residual(C, Cd, M.basis_vector(i), Md.basis_vector(j), a)), (t, i, j, a))
                for i, j, a in triples))
            if diagonal:
                b.check(f"bidual-extends{tag}", ref, None if bidual_extends(C) else t)
            if M.involution is not None:
                Cs = conjugate_connection(C)
                b.check(f"conjugation-involutive{tag}", ref, None if conjugate_connection(Cs) == C else t)
                lhs = dual_connection(Cs, Md)
                rhs = conjugate_connection(Cd) if Md.involution is not None else None
                b.check(f"dual-commutes-with-conjugation{tag}", ref,
                        None if rhs is not None and lhs.nabla == rhs.nabla else t)
    # tensor products M(i,j) (x)_{A_j} M(j,l)
    for k1 in KINDS:
        for k2 in KINDS:
            if k1[1] != k2[0]:
                continue
            tag = f"[{k1[0]},{k1[1]}x{k2[0]},{k2[1]}]"
            C1 = fleet[k1][rng.randrange(count)]
            C2 = fleet[k2][rng.randrange(count)]
            try:
                T = tensor_connection(C1, C2)
            except QuotientNotPreserved as exc:
                b.check(f"tensor-quotient{tag}", ref, str(exc))
                continue
            b.check(f"tensor-quotient{tag}", ref, None)
            rep = validate_connection(T.connection)
            b.check(f"tensor-axioms{tag}", ref, None if rep.valid else rep.violations[:3])
    return b


def torsion_suite(A: Algebra, rng: random.Random, opts: dict) -> Battery:
    from .connections import (
        bracket_connection,
        dual_connection,
        form_of,
        is_flat,
        lie_derivative_connection,
        random_connection,
        torsion_der,
        torsion_form,
        torsion_is_bimodule_map,
        validate_connection,
    )
    from .modules import forms_module

    ref = "connections"
    b = Battery()
    D = A.der
    m = D.dim
    if m == 0:
        b.unsupported("torsion-laws", ref, "Der(A) = 0")
        return b
    F = forms_module(A)
    Dm = F.predual
    B = bracket_connection(Dm)
    H = bracket_connection(Dm, Scalar(1) / 2)
    L = lie_derivative_connection(F)
    for name, C in (("bracket", B), ("half-bracket", H), ("lie", L)):
        rep = validate_connection(C)
        b.check(f"axioms[{name}]", ref, None if rep.valid else rep.violations[:3])
    b.check("lie-is-dual-of-bracket", ref, None if dual_connection(B, F).nabla == L.nabla else "mismatch")
    b.check("bracket-connection-flat", ref, None if is_flat(B) else "curvature != 0")
    b.check("half-bracket-torsion-free", ref, first(
        (torsion_der(H, x, y).is_zero(), (x, y)) for x in range(m) for y in range(m)))
    b.check("bracket-torsion-is-bracket", ref, first(
        (torsion_der(B, x, y) == D.combine(D.bracket[x][y]), (x, y)) for x in range(m) for y in range(m)))
    count = opts.get("connections", 5)
    conns = [B, H] + [random_connection(H, rng) for _ in range(count)]
    for t, C in enumerate(conns):
        Cd = dual_connection(C, F)
        omega = form_of(F, tuple(
            Scalar(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(F.dim)))
        T = torsion_form(Cd, omega)
        b.check("torsion-duality", ref, first(
            (T.value((x, y)) == omega(D.sparse_coords(torsion_der(C, x, y))).coeffs, (t, x, y))
            for x in range(m) for y in range(x + 1, m)))
        xs = [rng.randrange(A.dim) for _ in range(2)]
        b.check("torsion-bimodule-map", ref, None if torsion_is_bimodule_map(
            Cd, omega, A.basis(xs[0]), A.basis(xs[1])) else (t, xs))
    return b


# -- Weyl algebra ------------------------------------------------------------------------------

def weyl_suite(_A, rng: random.Random, opts: dict) -> Battery:
    from .weyl import (
        P,
        Q,
        classical_bracket,
        classical_limit,
        commutator,
        monomial_pairs,
        omega_ccr_eval,
        quantum_poisson,
        random_weyl,
        weyl_involution,
    )

    ref = "weyl-ccr"
    b = Battery()
    top = opts.get("max_degree") or DEFAULT_WEYL_DEGREE
    samples = [random_weyl(rng, 3) for _ in range(opts.get("samples", 4) * 2)]
    triples = [tuple(samples[rng.randrange(len(samples))] for _ in range(3)) for _ in range(len(samples))]
    b.check("product-associative", ref, first(((x * y) * z == x * (y * z), (x, y, z)) for x, y, z in triples))
    b.check("product-distributive", ref, first(
        (x * (y + z) == x * y + x * z and (x + y) * z == x * z + y * z, (x, y, z)) for x, y, z in triples))
    b.check("commutator-divisible-by-hbar", ref, first(
        (not commutator(x, y).hbar_slice(0), (x, y)) for x, y, _ in triples))
    b.check("canonical-pair", ref, None if quantum_poisson(Q, P) == -1 else quantum_poisson(Q, P))
    b.check("involution-fixes-generators", ref, None if weyl_involution(Q) == Q and weyl_involution(P) == P else "q or p")
    b.check("involution-involutive", ref, first((weyl_involution(weyl_involution(x)) == x, x) for x in samples))
    b.check("involution-antihomomorphism", ref, first(
        (weyl_involution(x * y) == weyl_involution(y) * weyl_involution(x), (x, y)) for x, y, _ in triples))
    b.check("bracket-leibniz", ref, first(
        (quantum_poisson(x, y * z) == quantum_poisson(x, y) * z + y * quantum_poisson(x, z), (x, y, z))
        for x, y, z in triples))
    b.check("bracket-jacobi", ref, first(
        ((quantum_poisson(x, quantum_poisson(y, z)) + quantum_poisson(y, quantum_poisson(z, x))
          + quantum_poisson(z, quantum_poisson(x, y))).is_zero(), (x, y, z)) for x, y, z in triples))
    pairs = monomial_pairs(top)
    b.check(f"series-equals-bracket[deg<={top}]", ref, first(
        (omega_ccr_eval(x, y, top) == quantum_poisson(x, y), (x, y)) for x, y in pairs))
    b.check(f"classical-limit-bracket[deg<={top}]", ref, first(
        (classical_limit(quantum_poisson(x, y)) == classical_bracket(classical_limit(x), classical_limit(y)), (x, y))
        for x, y in pairs))
    return b


RUNNERS = {
    "algebra": algebra_suite,
    "universal": universal_suite,
    "forms": forms_suite,
    "cartan": cartan_suite,
    "symplectic": symplectic_suite,
    "connections": connections_suite,
    "torsion": torsion_suite,
    "weyl": weyl_suite,
}


def suite_names(name: str) -> tuple:
    if name == "all":
        return SUITES
    if name not in RUNNERS:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    return (name,)


def run_suite(name: str, algebras=None, seed: int = 0, opts: dict | None = None) -> list:
    """Run one suite (or ``all``) and return one report per (suite, algebra).

    ``algebras`` is a list of :class:`Algebra`; None means the bundled defaults.
    """
    opts = dict(opts or {})
    reports = []
    for suite in suite_names(name):
        targets = [None] if suite == "weyl" else (
            list(algebras) if algebras else [bundled(a) for a in DEFAULT_ALGEBRAS[suite]])
        for A in targets:
            label = "weyl" if A is None else A.name
            rng = random.Random(f"{seed}:{suite}:{label}")
            try:
                battery = RUNNERS[suite](A, rng, opts)
            except NCDGError as exc:
                battery = Battery()
                battery.check("suite-error", suite, {"error": type(exc).__name__, "message": str(exc)})
            report = {"suite": suite, "algebra": label, "seed": seed, "checks": battery.sorted_rows()}
            if A is not None and suite == "algebra":
                report["facts"] = algebra_facts(A)
            reports.append(report)
    return reports


def summarize(reports: list) -> dict:
    counts = {PASS: 0, FAIL: 0, UNSUPPORTED: 0}
    for r in reports:
        for row in r["checks"]:
            counts[row["status"]] += 1
    return counts

