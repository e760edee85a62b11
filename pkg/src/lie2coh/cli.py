"""Command-line driver: JSON documents in, plain-text reports out (plus an optional JSON sidecar).

Exit codes: 0 when every requested assertion passes, 1 on an assertion failure,
2 on unreadable or inconsistent input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import fixtures as algebra_fixtures
from . import vanest
from .cohomology import betti_report
from .exactla import DimensionMismatch, Matrix, format_rational, rank, to_rational
from .extensions import COMPONENTS, AxiomFailure, Cocycle2, NotACocycle, build_extension
from .grid import Cochain, DegreeTooLarge, Grid, GridOptions
from .homalg import (ComplexMap, DoubleComplex, FiniteComplex, HypothesisNotMet, NotAChainMap, NotAComplex,
                     NotADoubleComplex, below_diagonal_vanishing, cone_equivalence_audit, e1_page,
                     mapping_cone)
from .liecore import CrossedModuleLA, LieAlgebra, TwoVectorSpace, check_crossed_module
from .rep2 import Rep2, adjoint_coefficients, adjoint_rep, check_rep2

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DEFAULT_MAX_DEGREE = 6
DEFAULT_TOLERANCE = 1e-9


class ParseError(ValueError):
    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


# --- document reading ------------------------------------------------------------

def _get(doc: dict, key: str, where: str, default: Any = ...):
    if not isinstance(doc, dict):
        raise ParseError(where, "expected an object")
    if key not in doc:
        if default is ...:
            raise ParseError(f"{where}.{key}", "missing field")
        return default
    return doc[key]


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(where, f"expected an integer, got {value!r}")
    return value


def _rational(value, where: str) -> Fraction:
    try:
        return to_rational(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ParseError(where, f"expected a rational (integer or \"p/q\" string), got {value!r}") from None


def _triples(value, arity: int, bounds: Sequence[int], where: str) -> list:
    """Sparse entries [i_1, ..., i_arity, value] with each index below its bound."""
    if not isinstance(value, list):
        raise ParseError(where, "expected a list of sparse entries")
    out = []
    for n, t in enumerate(value):
        loc = f"{where}[{n}]"
        if not isinstance(t, list) or len(t) != arity + 1:
            raise ParseError(loc, f"expected {arity} indices followed by a value")
        idx = [_int(t[k], f"{loc}[{k}]") for k in range(arity)]
        for k, (i, b) in enumerate(zip(idx, bounds)):
            if not 0 <= i < b:
                raise ParseError(f"{loc}[{k}]", f"index {i} out of range 0..{b - 1}")
        out.append((*idx, _rational(t[arity], f"{loc}[{arity}]")))
    return out


def _sparse_matrix(entries, rows: int, cols: int, where: str) -> Matrix:
    data = [[Fraction(0)] * cols for _ in range(rows)]
    for i, j, v in _triples(entries, 2, (rows, cols), where):
        data[i][j] += v
    return Matrix.from_rows(data, cols) if rows else Matrix.zeros(0, cols)


def read_matrix(doc, where: str, shape: tuple | None = None) -> Matrix:
    """{"shape": [rows, cols], "entries": [[i, j, value], ...]}."""
    sh = _get(doc, "shape", where)
    if not isinstance(sh, list) or len(sh) != 2:
        raise ParseError(f"{where}.shape", "expected [rows, cols]")
    r, c = _int(sh[0], f"{where}.shape[0]"), _int(sh[1], f"{where}.shape[1]")
    if shape is not None and (r, c) != tuple(shape):
        raise ParseError(f"{where}.shape", f"expected shape {list(shape)}, got {[r, c]}")
    return _sparse_matrix(_get(doc, "entries", where, []), r, c, f"{where}.entries")


def _lie_algebra(doc, where: str) -> LieAlgebra:
    n = _int(_get(doc, "dim", where), f"{where}.dim")
    tr = _triples(_get(doc, "bracket", where, []), 3, (n, n, n), f"{where}.bracket")
    return LieAlgebra.from_triples(n, tr)


@dataclass
class RunOptions:
    max_degree: int = DEFAULT_MAX_DEGREE
    tolerance: float = DEFAULT_TOLERANCE


@dataclass
class ProjectDocument:
    name: str
    cm: CrossedModuleLA
    ts: TwoVectorSpace
    rep: Rep2
    options: RunOptions = field(default_factory=RunOptions)
    cocycle: dict | None = None


def parse_project(doc: dict, name: str = "document") -> ProjectDocument:
    g = _lie_algebra(_get(doc, "g", "$"), "$.g")
    h = _lie_algebra(_get(doc, "h", "$"), "$.h")
    mu = _sparse_matrix(_get(doc, "mu", "$", []), h.dim, g.dim, "$.mu")
    act = _triples(_get(doc, "act", "$", []), 3, (h.dim, g.dim, g.dim), "$.act")
    cm = CrossedModuleLA.build(g, h, mu, act)
    rep_doc = _get(doc, "rep", "$", "trivial")
    if rep_doc == "adjoint":
        ts = adjoint_coefficients(cm)
        if "coeffs" in doc:
            given = _coefficients(doc["coeffs"])
            if (given.dimW, given.dimV, given.phi) != (ts.dimW, ts.dimV, ts.phi):
                raise ParseError("$.coeffs", "adjoint representation requires coefficients mu: g -> h")
        rep = adjoint_rep(cm)
    else:
        ts = _coefficients(_get(doc, "coeffs", "$"))
        if rep_doc == "trivial":
            rep = Rep2.zero(cm, ts)
        elif isinstance(rep_doc, dict):
            W, V = ts.dimW, ts.dimV
            rep = Rep2.from_triples(
                cm, ts,
                _triples(_get(rep_doc, "rho01", "$.rep", []), 3, (h.dim, W, W), "$.rep.rho01"),
                _triples(_get(rep_doc, "rho00", "$.rep", []), 3, (h.dim, V, V), "$.rep.rho00"),
                _triples(_get(rep_doc, "rho1", "$.rep", []), 3, (g.dim, W, V), "$.rep.rho1"))
        else:
            raise ParseError("$.rep", "expected \"adjoint\", \"trivial\" or an object of sparse tensors")
    opts = _get(doc, "options", "$", {})
    options = RunOptions(_int(_get(opts, "max_degree", "$.options", DEFAULT_MAX_DEGREE), "$.options.max_degree"),
                         float(_get(opts, "tolerance", "$.options", DEFAULT_TOLERANCE)))
    cocycle = _get(doc, "cocycle", "$", None)
    return ProjectDocument(str(_get(doc, "name", "$", name)), cm, ts, rep, options, cocycle)


def _coefficients(doc) -> TwoVectorSpace:
    W = _int(_get(doc, "dimW", "$.coeffs"), "$.coeffs.dimW")
    V = _int(_get(doc, "dimV", "$.coeffs"), "$.coeffs.dimV")
    return TwoVectorSpace(W, V, _sparse_matrix(_get(doc, "phi", "$.coeffs", []), V, W, "$.coeffs.phi"))


def parse_cocycle(grid: Grid, doc) -> Cocycle2:
    """{"f": [...], "w0": [...], "a": [...], "w1": [...]}, dense coordinates; missing means zero."""
    names = ("f", "w0", "a", "w1")
    parts = []
    for key, idx in zip(names, COMPONENTS):
        dim = grid.space(idx.p, idx.q, idx.r).dim
        vals = _get(doc, key, "$.cocycle", None)
        if vals is None:
            vals = [0] * dim
        if not isinstance(vals, list) or len(vals) != dim:
            raise ParseError(f"$.cocycle.{key}", f"expected {dim} coordinates")
        parts.append(Cochain(idx, tuple(_rational(v, f"$.cocycle.{key}[{i}]") for i, v in enumerate(vals))))
    return Cocycle2(*parts)


def parse_complex(doc, where: str) -> FiniteComplex:
    """{"start": n0, "dims": [...], "d": [matrix, ...]} with d[i] from slot i to slot i+1."""
    dims = _get(doc, "dims", where)
    if not isinstance(dims, list):
        raise ParseError(f"{where}.dims", "expected a list")
    dims = [_int(v, f"{where}.dims[{i}]") for i, v in enumerate(dims)]
    ds = _get(doc, "d", where, [])
    if not isinstance(ds, list) or len(ds) != max(len(dims) - 1, 0):
        raise ParseError(f"{where}.d", f"expected {max(len(dims) - 1, 0)} differentials")
    maps = tuple(read_matrix(m, f"{where}.d[{i}]", (dims[i + 1], dims[i])) for i, m in enumerate(ds))
    start = _int(_get(doc, "start", where, 0), f"{where}.start")
    try:
        return FiniteComplex(tuple(dims), maps, start)
    except NotAComplex as e:
        raise ParseError(where, str(e)) from None


def _cell_key(key: str, where: str) -> tuple:
    try:
        p, q = (int(s) for s in key.split(","))
    except ValueError:
        raise ParseError(where, f"cell keys are \"p,q\", got {key!r}") from None
    return p, q


def parse_cone(doc) -> tuple:
    A = parse_complex(_get(doc, "source", "$"), "$.source")
    B = parse_complex(_get(doc, "target", "$"), "$.target")
    comps = {}
    for key, m in _get(doc, "map", "$", {}).items():
        n = _int(int(key) if isinstance(key, str) and key.lstrip("-").isdigit() else key, f"$.map.{key}")
        comps[n] = read_matrix(m, f"$.map.{key}", (B.dim(n), A.dim(n)))
    try:
        f = ComplexMap(A, B, comps)
    except NotAChainMap as e:
        raise ParseError("$.map", str(e)) from None
    k = _int(_get(doc, "k", "$", max(A.top, B.top)), "$.k")
    return f, k


def parse_double(doc) -> tuple:
    dims = _get(doc, "dims", "$")
    if not isinstance(dims, list) or not all(isinstance(c, list) for c in dims):
        raise ParseError("$.dims", "expected a list of columns, each a list of dimensions")
    dims = tuple(tuple(_int(v, f"$.dims[{p}][{q}]") for q, v in enumerate(col)) for p, col in enumerate(dims))

    def cell_dim(p, q):
        return dims[p][q] if 0 <= p < len(dims) and 0 <= q < len(dims[p]) else 0

    def maps(key, dp, dq):
        out = {}
        for cell, m in _get(doc, key, "$", {}).items():
            p, q = _cell_key(cell, f"$.{key}")
            out[(p, q)] = read_matrix(m, f"$.{key}.{cell}", (cell_dim(p + dp, q + dq), cell_dim(p, q)))
        return out

    commuting = _get(doc, "commuting", "$", True)
    if not isinstance(commuting, bool):
        raise ParseError("$.commuting", "expected true or false")
    try:
        dc = DoubleComplex(dims, maps("horizontal", 1, 0), maps("vertical", 0, 1), commuting)
    except NotADoubleComplex as e:
        raise ParseError("$", str(e)) from None
    return dc, _int(_get(doc, "k", "$", 0), "$.k")


# --- document writing ------------------------------------------------------------

def _q(x) -> str:
    return format_rational(Fraction(x))


def _sparse(entries) -> list:
    return [[*idx, _q(v)] for *idx, v in entries]


def write_matrix(m: Matrix) -> dict:
    return {"shape": [m.rows, m.cols],
            "entries": [[i, j, _q(m[i, j])] for i in range(m.rows) for j in range(m.cols) if m[i, j]]}


def project_to_json(name: str, cm: CrossedModuleLA, ts: TwoVectorSpace, rep: Rep2 | str,
                    options: RunOptions | None = None) -> dict:
    options = options or RunOptions()
    doc = {
        "name": name,
        "g": {"dim": cm.g.dim, "bracket": _sparse(cm.g.triples())},
        "h": {"dim": cm.h.dim, "bracket": _sparse(cm.h.triples())},
        "mu": [[i, j, _q(cm.mu[i, j])] for i in range(cm.mu.rows) for j in range(cm.mu.cols) if cm.mu[i, j]],
        "act": _sparse(cm.act_triples()),
        "coeffs": {"dimW": ts.dimW, "dimV": ts.dimV,
                   "phi": [[i, j, _q(ts.phi[i, j])] for i in range(ts.phi.rows)
                           for j in range(ts.phi.cols) if ts.phi[i, j]]},
        "options": {"max_degree": options.max_degree, "tolerance": options.tolerance},
    }
    if isinstance(rep, str):
        doc["rep"] = rep
    else:
        doc["rep"] = {k: _sparse(v) for k, v in rep.triples().items()}
    return doc


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# --- commands ---------------------------------------------------------------------

@dataclass
class Outcome:
    passed: bool
    lines: list
    data: dict


def _grid(p: ProjectDocument, top: int) -> Grid:
    return Grid(p.cm, p.ts, p.rep, GridOptions(max_degree=top))


def cmd_check(p: ProjectDocument, opts: RunOptions) -> Outcome:
    cmr = check_crossed_module(p.cm)
    rr = check_rep2(p.cm, p.ts, p.rep)
    lines = [f"document {p.name}", "crossed module:"] + ["  " + s for s in cmr.lines()]
    lines += ["representation:"] + ["  " + s for s in rr.lines()]
    ok = cmr.passed and rr.passed
    lines.append("check: " + ("pass" if ok else "FAIL"))
    return Outcome(ok, lines, {"crossed_module": cmr.lines(), "representation": rr.lines()})


def cmd_complex(p: ProjectDocument, opts: RunOptions) -> Outcome:
    grid = _grid(p, opts.max_degree)
    lines = [f"document {p.name}", "n  dim  rank(nabla_n)  components (p,q,r):dim"]
    rows = []
    for n in range(opts.max_degree + 1):
        r = rank(grid.nabla_matrix(n)) if n < opts.max_degree else None
        comps = " ".join(f"({i.p},{i.q},{i.r}):{grid.space(i.p, i.q, i.r).dim}" for i in grid.indices(n))
        lines.append(f"{n}  {grid.total_dim(n)}  {'-' if r is None else r}  {comps}")
        rows.append({"n": n, "dim": grid.total_dim(n), "rank": r})
    return Outcome(True, lines, {"degrees": rows})


def cmd_cohomology(p: ProjectDocument, opts: RunOptions) -> Outcome:
    grid = _grid(p, opts.max_degree + 1)
    rep = betti_report(grid, opts.max_degree)
    lines = [f"document {p.name}"] + rep.lines()
    lines.append("betti " + ",".join(str(b) for b in rep.betti))
    return Outcome(True, lines, {"betti": list(rep.betti)})


def cmd_nabla_squared(p: ProjectDocument, opts: RunOptions) -> Outcome:
    grid = _grid(p, opts.max_degree + 2)
    lines = [f"document {p.name}"]
    ok = True
    data = []
    for n in range(opts.max_degree + 1):
        sq = grid.nabla_matrix(n + 1) @ grid.nabla_matrix(n)
        zero = sq.is_zero()
        ok &= zero
        nz = sum(1 for v in sq.entries if v)
        lines.append(f"degree {n}: nabla^2 is {sq.rows}x{sq.cols}, "
                     + ("0 = 0" if zero else f"{nz} nonzero entries  FAIL"))
        data.append({"n": n, "shape": [sq.rows, sq.cols], "nonzero": nz})
    return Outcome(ok, lines, {"degrees": data})


def cmd_extend(p: ProjectDocument, opts: RunOptions) -> Outcome:
    if p.cocycle is None:
        raise ParseError("$.cocycle", "extend needs a cocycle block")
    grid = _grid(p, 3)
    z = parse_cocycle(grid, p.cocycle)
    try:
        ext = build_extension(grid, z)
    except (NotACocycle, AxiomFailure) as e:
        return Outcome(False, [f"document {p.name}", f"extend: FAIL ({e})"], {"error": str(e)})
    total = ext.total
    ts = TwoVectorSpace(0, 0, Matrix.zeros(0, 0))
    doc = project_to_json(f"{p.name}-extension", total, ts, "trivial", opts)
    cocheck = check_crossed_module(total)
    lines = [f"document {p.name}", f"extension g~ = {total.g.dim}, h~ = {total.h.dim}"]
    lines += ["  " + s for s in cocheck.lines()]
    lines.append("extension document:")
    lines += dumps(doc).rstrip("\n").split("\n")
    return Outcome(cocheck.passed, lines, {"extension": doc})


def cmd_cone(doc: dict, opts: RunOptions) -> Outcome:
    f, k = parse_cone(doc)
    cone = mapping_cone(f)
    audit = cone_equivalence_audit(f, k)
    betti = cone.betti_numbers()
    lines = ["cone betti " + " ".join(f"{n}:{b}" for n, b in sorted(betti.items())),
             f"k = {k}: cone acyclic through k: {audit.cone_vanishes}; "
             f"map iso through k and injective at k+1: {audit.induced_iso}",
             "conditions agree: " + ("pass" if audit.agree else "FAIL")]
    return Outcome(audit.agree, lines, {"cone_betti": {str(n): b for n, b in sorted(betti.items())},
                                        "cone_vanishes": audit.cone_vanishes,
                                        "induced_iso": audit.induced_iso})


def cmd_spectral(doc: dict, opts: RunOptions) -> Outcome:
    dc, k = parse_double(doc)
    page = e1_page(dc)
    lines = ["E1 page (p,q):dim " + " ".join(f"({p},{q}):{d}" for (p, q), d in sorted(page.dims.items()))]
    data = {"e1": {f"{p},{q}": d for (p, q), d in sorted(page.dims.items())}}
    try:
        rep = below_diagonal_vanishing(dc, k)
    except HypothesisNotMet as e:
        lines.append(f"below-diagonal hypothesis not met for k = {k}: {e}")
        data["hypothesis"] = False
        tot = dc.total_complex()
        betti = tot.betti_numbers()
        lines.append("total betti " + " ".join(f"{n}:{b}" for n, b in sorted(betti.items())))
        return Outcome(True, lines, data)
    start = dc.total_complex().start
    betti = {start + i: b for i, b in enumerate(rep.total_betti)}
    lines.append("total betti through k " + " ".join(f"{n}:{b}" for n, b in sorted(betti.items())))
    lines.append(f"vanishing through k = {k}: " + ("pass" if rep.holds else "FAIL"))
    data.update({"hypothesis": True, "total_betti": {str(n): b for n, b in sorted(betti.items())},
                 "holds": rep.holds})
    return Outcome(rep.holds, lines, data)


def cmd_vanest(fixture_name: str, opts: RunOptions, degree: int, convention: str) -> Outcome:
    fx = vanest.fixture(fixture_name)
    grid = vanest.derived_grid(fx)
    audit = vanest.audit_fixture(fx)
    lines = [f"fixture {fx.name}: " + ", ".join(f"{k} {'pass' if v else 'FAIL'}" for k, v in audit.items())]
    rep = vanest.commutation_report(fx, max_total_degree=degree, tolerance=opts.tolerance, grid=grid,
                                    convention=convention)
    lines += rep.lines()
    lines.append("per identity: " + ", ".join(f"{k} {v:.3e}" for k, v in rep.per_identity().items()))
    chain = vanest.chain_map_report(fx, max_source_degree=min(degree, 2), tolerance=opts.tolerance, grid=grid)
    lines += chain.lines()
    ok = all(audit.values()) and rep.passed and chain.passed
    lines.append("vanest: " + ("pass" if ok else "FAIL"))
    data = {"fixture": fx.name, "audit": audit, "convention": convention,
            "identities": [{"identity": r.identity, "shape": r.shape.as_list(), "cochains": r.cochains,
                            "max_deviation": r.max_deviation} for r in rep.rows],
            "chain_map": [{"source": r.source.as_list(), "target": r.target.as_list(),
                           "max_deviation": r.max_deviation} for r in chain.rows]}
    return Outcome(ok, lines, data)


PROJECT_COMMANDS = {"check": cmd_check, "complex": cmd_complex, "cohomology": cmd_cohomology,
                    "nabla-squared": cmd_nabla_squared, "extend": cmd_extend}
COMPLEX_COMMANDS = {"cone": cmd_cone, "spectral": cmd_spectral}
COMMANDS = tuple(PROJECT_COMMANDS) + tuple(COMPLEX_COMMANDS) + ("vanest",)


def _algebra_fixture(name: str) -> ProjectDocument:
    systems = algebra_fixtures.shipped_systems()
    if name not in systems:
        raise ParseError("--fixture", f"unknown algebra fixture {name!r}; choose from {sorted(systems)}")
    s = systems[name]
    return ProjectDocument(s.name, s.cm, s.ts, s.rep)


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise ParseError(path, f"cannot read file ({e.strerror})") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}:{e.lineno}:{e.colno}", e.msg) from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lie2coh", description=__doc__.split("\n")[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("document", nargs="?", help="JSON document (project, cone or double-complex)")
    ap.add_argument("--max-degree", type=int, default=None,
                    help=f"top degree (default {DEFAULT_MAX_DEGREE}; 2 for vanest)")
    ap.add_argument("--tolerance", type=float, default=None, help=f"float tolerance (default {DEFAULT_TOLERANCE:g})")
    ap.add_argument("--json-out", metavar="PATH", help="write a machine-readable report")
    ap.add_argument("--fixture", metavar="NAME", help="shipped fixture instead of a document")
    ap.add_argument("--signs", choices=vanest.CONVENTIONS, default=vanest.AS_DEFINED,
                    help="sign convention for the difference-map identities (vanest)")
    return ap


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        outcome = _dispatch(args)
    except (ParseError, DimensionMismatch, DegreeTooLarge, vanest.JetBudgetExceeded, ValueError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    out.write("\n".join(outcome.lines) + "\n")
    if args.json_out:
        payload = {"command": args.command, "passed": outcome.passed, "report": outcome.data}
        Path(args.json_out).write_text(dumps(payload))
    return EXIT_PASS if outcome.passed else EXIT_FAIL


def _dispatch(args) -> Outcome:
    if args.command == "vanest":
        if not args.fixture:
            raise ParseError("--fixture", "vanest needs --fixture (one of " + ", ".join(sorted(vanest.FIXTURES)) + ")")
        opts = RunOptions(tolerance=args.tolerance if args.tolerance is not None else DEFAULT_TOLERANCE)
        degree = args.max_degree if args.max_degree is not None else 2
        return cmd_vanest(args.fixture, opts, degree, args.signs)
    if args.command in COMPLEX_COMMANDS:
        if not args.document:
            raise ParseError(args.command, "a complex document is required")
        doc = _load_json(args.document)
        opts = RunOptions(args.max_degree if args.max_degree is not None else DEFAULT_MAX_DEGREE,
                          args.tolerance if args.tolerance is not None else DEFAULT_TOLERANCE)
        return COMPLEX_COMMANDS[args.command](doc, opts)
    if args.fixture and args.document:
        raise ParseError("arguments", "give either a document or --fixture, not both")
    if args.fixture:
        project = _algebra_fixture(args.fixture)
    elif args.document:
        project = parse_project(_load_json(args.document), Path(args.document).stem)
    else:
        raise ParseError(args.command, "a project document or --fixture is required")
    opts = RunOptions(
        args.max_degree if args.max_degree is not None else project.options.max_degree,
        args.tolerance if args.tolerance is not None else project.options.tolerance)
    if opts.max_degree < 0:
        raise ParseError("--max-degree", "must be non-negative")
    return PROJECT_COMMANDS[args.command](project, opts)


def main() -> None:
    sys.exit(run())
