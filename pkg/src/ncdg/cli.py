"""Command-line driver: ``ncdg run|describe|symplectic|connection|weyl``.

Reports go to stdout as JSON (sorted keys) or plain text; a one-line summary
with the elapsed time goes to stderr so that stdout is byte-reproducible.
Exit codes: 0 every check passed, 1 some check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from .errors import (
    InvalidAlgebra,
    InvalidConnection,
    InvalidModule,
    KindMismatch,
    NCDGError,
    ParseError,
    UnknownSuite,
    WrongModule,
)
from .fleet import BUILDERS, bundled
from .linalg import to_dense
from .scalar import format_scalar
from .specfile import load_algebra

INPUT_ERRORS = (ParseError, InvalidAlgebra, InvalidModule, UnknownSuite, KindMismatch, WrongModule, OSError)


def resolve_algebra(ref: str):
    """A bundled algebra name (``M2``, ``M3``, ``CC``, ...) or a path to a spec file."""
    if ref in BUILDERS and not Path(ref).exists():
        return bundled(ref)
    return load_algebra(ref)


def _fmt_vec(v) -> list:
    return [format_scalar(c) for c in v]


def _fmt_mat(m) -> list:
    return [_fmt_vec(r) for r in m]


def emit(payload: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=True) + "\n")
        return
    out.write(render_text(payload))


def render_text(payload: dict) -> str:
    lines = []
    if "reports" in payload:
        for rep in payload["reports"]:
            for row in rep["checks"]:
                w = "" if row["witness"] is None else " " + json.dumps(row["witness"], sort_keys=True)
                lines.append(f"{rep['suite']:<12} {rep['algebra']:<10} {row['status']:<11} {row['law']}{w}")
        s = payload["summary"]
        lines.append(f"pass {s['pass']}  fail {s['fail']}  unsupported {s['unsupported']}")
    else:
        for key in sorted(payload):
            lines.append(f"{key}: {json.dumps(payload[key], sort_keys=True)}")
    return "\n".join(lines) + "\n"


# -- subcommands -------------------------------------------------------------------------

def cmd_run(args) -> int:
    from .suites import run_suite, summarize

    algebras = [resolve_algebra(p) for p in args.specs] or None
    opts = {"max_degree": args.max_degree, "samples": args.samples, "connections": args.connections}
    start = time.perf_counter()
    reports = run_suite(args.suite, algebras, args.seed, opts)
    summary = summarize(reports)
    payload = {
        "seed": args.seed,
        "suite": args.suite,
        "max_degree": args.max_degree,
        "reports": reports,
        "summary": summary,
    }
    emit(payload, args.format)
    elapsed = time.perf_counter() - start
    print(
        f"suite {args.suite}: {summary['pass']} pass, {summary['fail']} fail, "
        f"{summary['unsupported']} unsupported in {elapsed:.2f}s",
        file=sys.stderr,
    )
    return 1 if summary["fail"] else 0


def describe_algebra(A) -> dict:
    D = A.der
    return {
        "name": A.name,
        "dim": A.dim,
        "basis": list(A.labels),
        "center_dim": A.center_basis.dim,
        "center_basis": [_fmt_vec(v) for v in A.center_basis.vectors],
        "der_dim": D.dim,
        "der_basis": [_fmt_mat(X.matrix) for X in D.elements],
        "der_structure_constants": [[_fmt_vec(v) for v in row] for row in D.structure_constants()],
        "inner_dim": D.inner_subspace.dim,
        "outer_dim": D.dim - D.inner_subspace.dim,
        "all_inner": D.all_inner(),
        "involution": "valid",  # loading checks antilinearity, antimultiplicativity and J J-bar = 1
    }


def cmd_describe(args) -> int:
    emit(describe_algebra(resolve_algebra(args.algebra)), args.format)
    return 0


def cmd_symplectic(args) -> int:
    from .suites import Battery, symplectic_suite, summarize
    from .symplectic import canonical_symplectic, hamiltonian_map, poisson_table

    A = resolve_algebra(args.algebra)
    payload = {"algebra": A.name}
    try:
        omega = canonical_symplectic(A)
        payload["omega"] = {",".join(map(str, k)): _fmt_vec(v) for k, v in sorted(omega.components.items())}
        payload["hamiltonians"] = [_fmt_vec(to_dense(A.der.sparse_coords(H), A.der.dim)) for H in hamiltonian_map(omega)]
        table = poisson_table(omega)
        payload["poisson"] = [[_fmt_vec(v) for v in row] for row in table.table]
    except NCDGError as exc:
        payload["omega"] = None
        payload["unsupported"] = f"{type(exc).__name__}: {exc}"
    code = 0
    if args.check:
        battery: Battery = symplectic_suite(A, random.Random(f"{args.seed}:symplectic:{A.name}"), {})
        report = {"suite": "symplectic", "algebra": A.name, "seed": args.seed, "checks": battery.sorted_rows()}
        payload["checks"] = report["checks"]
        code = 1 if summarize([report])["fail"] else 0
    emit(payload, args.format)
    return code


def cmd_connection(args) -> int:
    from .connections import (
        check_connection,
        curvature_table,
        dual_connection,
        load_nabla,
        torsion_der,
        torsion_form,
        validate_connection,
    )
    from .modules import load_module

    A = resolve_algebra(args.algebra)
    M = load_module(A, args.module)
    C = load_nabla(M, args.nabla)
    payload = {"algebra": A.name, "module": M.name, "kind": list(M.kind), "dim": M.dim}
    rep = validate_connection(C)
    payload["valid"] = rep.valid
    payload["violations"] = [[law, list(w)] for law, w in rep.violations]
    code = 0 if rep.valid else 1
    if rep.valid and args.action == "curvature":
        payload["curvature"] = {f"{a},{b}": _fmt_mat(R) for (a, b), R in curvature_table(C).items()}
    elif rep.valid and args.action == "dual":
        try:
            Cd = dual_connection(C)
            check_connection(Cd)
            payload["dual"] = {"kind": list(Cd.module.kind), "dim": Cd.module.dim,
                               "nabla": [_fmt_mat(N) for N in Cd.nabla]}
        except InvalidConnection as exc:
            payload["dual"] = {"error": str(exc)}
            code = 1
    elif rep.valid and args.action == "torsion":
        m = A.der.dim
        if M.role == "der":
            payload["torsion"] = {f"{a},{b}": _fmt_mat(torsion_der(C, a, b).matrix)
                                  for a in range(m) for b in range(a + 1, m)}
        elif M.role == "forms1":
            from .linalg import identity

            payload["torsion"] = [
                {",".join(map(str, k)): _fmt_vec(v) for k, v in sorted(torsion_form(C, e).components.items())}
                for e in identity(M.dim)
            ]
        else:
            raise WrongModule("torsion needs the builtin 'der' or 'forms1' module")
    emit(payload, args.format)
    return code


def cmd_weyl(args) -> int:
    from .weyl import format_weyl, monomial_pairs, omega_ccr_eval, quantum_poisson

    pairs = monomial_pairs(args.max_degree)
    if args.pairs == "random":
        rng = random.Random(f"{args.seed}:weyl-pairs")
        pairs = rng.sample(pairs, min(args.count, len(pairs)))
    rows = []
    fails = 0
    for x, y in pairs:
        series = omega_ccr_eval(x, y, args.max_degree)
        bracket = quantum_poisson(x, y)
        ok = series == bracket
        fails += not ok
        rows.append({"x": format_weyl(x), "y": format_weyl(y), "series": format_weyl(series),
                     "bracket": format_weyl(bracket), "match": ok})
    if args.format == "json":
        emit({"max_degree": args.max_degree, "rows": rows, "mismatches": fails}, "json")
    else:
        for r in rows:
            sys.stdout.write(f"{r['x']:<10} {r['y']:<10} {'ok' if r['match'] else 'MISMATCH':<8} {r['bracket']}\n")
    return 1 if fails else 0


# -- parser ----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncdg", description="Exact checks for derivation-based calculi.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--seed", type=int, default=0)

    r = sub.add_parser("run", help="run a verification suite")
    common(r)
    r.add_argument("--suite", default="all")
    r.add_argument("--max-degree", type=int, default=None,
                   help="top form degree (forms, cartan) or Weyl monomial degree (weyl)")
    r.add_argument("--samples", type=int, default=4, help="random samples per degree")
    r.add_argument("--connections", type=int, default=5, help="random connections per module kind")
    r.add_argument("specs", nargs="*", help="algebra spec files or bundled names")
    r.set_defaults(func=cmd_run)

    d = sub.add_parser("describe", help="dimensions, center and derivations of an algebra")
    common(d)
    d.add_argument("algebra")
    d.set_defaults(func=cmd_describe)

    s = sub.add_parser("symplectic", help="canonical symplectic form of an algebra")
    common(s)
    s.add_argument("algebra")
    s.add_argument("--check", action="store_true", help="also run the symplectic checks")
    s.set_defaults(func=cmd_symplectic)

    c = sub.add_parser("connection", help="validate and analyse a connection on a module")
    common(c)
    c.add_argument("algebra")
    c.add_argument("--module", required=True)
    c.add_argument("--nabla", required=True)
    act = c.add_mutually_exclusive_group()
    for name in ("check", "curvature", "dual", "torsion"):
        act.add_argument(f"--{name}", dest="action", action="store_const", const=name)
    c.set_defaults(func=cmd_connection, action="check")

    w = sub.add_parser("weyl", help="compare the series for omega with the quantum bracket")
    common(w)
    w.add_argument("--max-degree", type=int, default=4)
    w.add_argument("--pairs", choices=("all", "random"), default="all")
    w.add_argument("--count", type=int, default=10)
    w.set_defaults(func=cmd_weyl)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"ncdg: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
