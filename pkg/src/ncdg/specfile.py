"""JSON algebra spec files: loading, validation and bit-exact dumping."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .algebra import Algebra
from .errors import ParseError
from .scalar import format_scalar, parse_scalar

FIELDS = ("name", "dim", "basis_labels", "structure_constants", "unit", "involution")


def _scalars(values, where: str, shape: tuple):
    if len(shape) == 1:
        if not isinstance(values, list) or len(values) != shape[0]:
            raise ParseError(f"expected a list of {shape[0]} scalars", where)
        return [parse_scalar(v, f"{where}[{i}]") for i, v in enumerate(values)]
    if not isinstance(values, list) or len(values) != shape[0]:
        raise ParseError(f"expected a list of length {shape[0]}", where)
    return [_scalars(v, f"{where}[{i}]", shape[1:]) for i, v in enumerate(values)]


def load_algebra(spec: dict | str | Path) -> Algebra:
    """Build a validated :class:`Algebra` from a spec dict or a JSON file path.

    Raises ParseError for structural problems or malformed scalars, and the
    InvalidAlgebra subclasses (NotAssociative, NoUnit, BadInvolution) when an
    axiom fails; both name the offending field or basis indices.
    """
    if not isinstance(spec, dict):
        path = Path(spec)
        try:
            spec = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON at line {exc.lineno}: {exc.msg}", str(path)) from None
    missing = [f for f in FIELDS if f not in spec]
    if missing:
        raise ParseError(f"missing fields {missing}")
    dim = spec["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim <= 0:
        raise ParseError("dim must be a positive integer", "dim")
    labels = spec["basis_labels"]
    if not isinstance(labels, list) or len(labels) != dim or not all(isinstance(s, str) for s in labels):
        raise ParseError(f"expected {dim} string labels", "basis_labels")
    c = _scalars(spec["structure_constants"], "structure_constants", (dim, dim, dim))
    unit = _scalars(spec["unit"], "unit", (dim,))
    inv = _scalars(spec["involution"], "involution", (dim, dim))
    return Algebra(str(spec["name"]), labels, c, unit, inv)


def algebra_to_spec(A: Algebra) -> dict[str, Any]:
    return {
        "name": A.name,
        "dim": A.dim,
        "basis_labels": list(A.labels),
        "structure_constants": [
            [[format_scalar(x) for x in A.structure[i][j]] for j in range(A.dim)] for i in range(A.dim)
        ],
        "unit": [format_scalar(x) for x in A.unit],
        "involution": [[format_scalar(x) for x in row] for row in A.involution],
    }


def dumps_algebra(A: Algebra) -> str:
    return json.dumps(algebra_to_spec(A), indent=1) + "\n"
