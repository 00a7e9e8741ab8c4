"""Builders for the standard algebras and access to the bundled spec files."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from typing import Callable, Sequence

from .algebra import Algebra
from .scalar import ONE, ZERO
from .specfile import dumps_algebra, load_algebra


def matrix_unit_algebra(
    name: str,
    n: int,
    pairs: Sequence[tuple[int, int]],
    star: Callable[[int, int], tuple[int, int]],
) -> Algebra:
    """Subalgebra of M_n spanned by the matrix units ``e_ij`` for ``(i, j)`` in ``pairs``.

    ``pairs`` must contain the diagonal and be closed under composition;
    ``star`` sends ``(i, j)`` to the pair of ``e_ij*``.
    """
    pairs = list(pairs)
    index = {p: k for k, p in enumerate(pairs)}
    dim = len(pairs)
    c = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            if j == k:
                c[a][b][index[(i, l)]] = ONE
    unit = [ONE if i == j else ZERO for (i, j) in pairs]
    inv = [[ZERO] * dim for _ in range(dim)]
    for a, p in enumerate(pairs):
        inv[index[star(*p)]][a] = ONE
    labels = [f"e{i + 1}{j + 1}" for (i, j) in pairs]
    return Algebra(name, labels, c, unit, inv)


def matrix_algebra(n: int) -> Algebra:
    """M_n(C) with matrix-unit basis (row-major) and conjugate transpose."""
    pairs = [(i, j) for i in range(n) for j in range(n)]
    return matrix_unit_algebra(f"M{n}", n, pairs, lambda i, j: (j, i))


def upper_triangular(n: int) -> Algebra:
    """Upper-triangular n x n matrices; the involution reflects in the anti-diagonal."""
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    return matrix_unit_algebra(f"T{n}", n, pairs, lambda i, j: (n - 1 - j, n - 1 - i))


def crown_algebra() -> Algebra:
    """Incidence algebra of the crown poset a1, a2 < b1, b2.

    Trivial center and a one-dimensional space of outer derivations (the
    Hasse diagram is a 4-cycle).
    """
    flip = {0: 2, 1: 3, 2: 0, 3: 1}
    pairs = [(0, 0), (1, 1), (2, 2), (3, 3), (0, 2), (0, 3), (1, 2), (1, 3)]
    return matrix_unit_algebra("crown", 4, pairs, lambda i, j: (flip[j], flip[i]))


def scalars() -> Algebra:
    return Algebra("C", ["1"], [[[ONE]]], [ONE], [[ONE]])


def dual_numbers() -> Algebra:
    """C[eps]/(eps^2) with eps hermitian; commutative, one outer derivation."""
    c = [[[ONE, ZERO], [ZERO, ONE]], [[ZERO, ONE], [ZERO, ZERO]]]
    return Algebra("dual", ["1", "eps"], c, [ONE, ZERO], [[ONE, ZERO], [ZERO, ONE]])


def kronecker_algebra(arrows: int = 2) -> Algebra:
    """Path algebra of the quiver with two vertices and ``arrows`` parallel arrows.

    Basis e1, e2, a1..ak with e1 ak = ak = ak e2.  Trivial center, outer
    derivations (GL_k acting on the arrows) and, for k >= 2, antisymmetric
    biderivations failing the Jacobi identity.  The involution swaps e1 and e2
    and fixes every arrow.
    """
    dim = 2 + arrows
    c = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
    c[0][0][0] = ONE
    c[1][1][1] = ONE
    for i in range(arrows):
        c[0][2 + i][2 + i] = ONE
        c[2 + i][1][2 + i] = ONE
    inv = [[ZERO] * dim for _ in range(dim)]
    inv[1][0] = ONE
    inv[0][1] = ONE
    for i in range(arrows):
        inv[2 + i][2 + i] = ONE
    labels = ["e1", "e2"] + [f"a{i + 1}" for i in range(arrows)]
    return Algebra("kronecker", labels, c, [ONE, ONE] + [ZERO] * arrows, inv)


def direct_sum(A: Algebra, B: Algebra, name: str | None = None) -> Algebra:
    n, m = A.dim, B.dim
    dim = n + m
    c = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c[i][j][k] = A.structure[i][j][k]
    for i in range(m):
        for j in range(m):
            for k in range(m):
                c[n + i][n + j][n + k] = B.structure[i][j][k]
    inv = [[ZERO] * dim for _ in range(dim)]
    for i in range(n):
        for j in range(n):
            inv[i][j] = A.involution[i][j]
    for i in range(m):
        for j in range(m):
            inv[n + i][n + j] = B.involution[i][j]
    labels = [f"{lab}" for lab in A.labels] + [f"{lab}'" for lab in B.labels]
    return Algebra(name or f"{A.name}+{B.name}", labels, c, list(A.unit) + list(B.unit), inv)


BUILDERS: dict[str, Callable[[], Algebra]] = {
    "M2": lambda: matrix_algebra(2),
    "M3": lambda: matrix_algebra(3),
    "CC": lambda: direct_sum(scalars(), scalars(), "CC"),
    "M2C": lambda: direct_sum(matrix_algebra(2), scalars(), "M2C"),
    "T2": lambda: upper_triangular(2),
    "dual": dual_numbers,
    "crown": crown_algebra,
    "kronecker": kronecker_algebra,
}

BUNDLED = tuple(BUILDERS)


@lru_cache(maxsize=None)
def bundled(name: str) -> Algebra:
    """Load one of the bundled spec files (cached: algebras are immutable)."""
    if name not in BUILDERS:
        raise KeyError(f"unknown bundled algebra {name!r}; choose from {', '.join(BUNDLED)}")
    path = resources.files("ncdg") / "data" / "algebras" / f"{name}.json"
    with resources.as_file(path) as p:
        return load_algebra(p)


def bundled_path(name: str):
    return resources.files("ncdg") / "data" / "algebras" / f"{name}.json"


def write_bundled(directory) -> None:
    """Regenerate the bundled JSON files from the builders."""
    from pathlib import Path

    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    for name, build in BUILDERS.items():
        (out / f"{name}.json").write_text(dumps_algebra(build()), encoding="utf-8")
