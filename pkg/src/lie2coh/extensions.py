"""Extensions of a crossed module by W -> V built from degree-2 cocycles.

A degree-2 tuple (f, w0, a, w1) lives at grid indices (1,1,0), (0,2,0), (0,1,1)
and (0,0,2); the components at (2,0,0) and (1,0,1) are taken to be zero.  The
extension has g (+) W --> h (+) V with

    [(y,v), (y',v')] = ([y,y'], rho00(y) v' - rho00(y') v + H_TWIST_SIGN * w0(y,y'))
    [(x,w), (x',w')] = ([x,x'], rho01(mu x) w' - rho01(mu x') w + w1(x,x'))
    mu~(x, w)        = (mu x, phi w + f(x; 0))
    L~_(y,v) (x, w)  = (L_y x, rho01(y) w - rho1(x) v + ACTION_TERM_SIGN * a(y; x))
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cohomology import TotalCochain, is_cocycle
from .exactla import Matrix, kernel_basis, rank
from .grid import Cochain, Grid, GridIndex
from .liecore import (AxiomReport, AxiomResult, CrossedModuleLA, LieAlgebra, NerveVector,
                      check_crossed_module)

# Both signs are fixed by calibration against the total differential (see
# calibrate_signs).  With f and w1 entering positively, H_TWIST_SIGN = -1 and
# ACTION_TERM_SIGN = +1 is the only choice for which cocycles and valid
# extensions coincide on non-abelian fixtures.
ACTION_TERM_SIGN = 1
H_TWIST_SIGN = -1

F_INDEX = GridIndex(1, 1, 0)
W0_INDEX = GridIndex(0, 2, 0)
A_INDEX = GridIndex(0, 1, 1)
W1_INDEX = GridIndex(0, 0, 2)
COMPONENTS = (F_INDEX, W0_INDEX, A_INDEX, W1_INDEX)


class NotACocycle(ValueError):
    def __init__(self, components: Sequence):
        self.components = tuple(components)
        super().__init__("cocycle condition fails in components " + ", ".join(str(c) for c in self.components))


class AxiomFailure(RuntimeError):
    pass


class NotAnIsomorphism(ValueError):
    pass


@dataclass(frozen=True)
class Cocycle2:
    f: Cochain
    w0: Cochain
    a: Cochain
    w1: Cochain

    @classmethod
    def zero(cls, grid: Grid) -> "Cocycle2":
        return cls(*(Cochain(i, (Fraction(0),) * grid.space(i.p, i.q, i.r).dim) for i in COMPONENTS))

    def total(self, grid: Grid) -> TotalCochain:
        return TotalCochain.from_components(grid, 2, {c.index: c for c in (self.f, self.w0, self.a, self.w1)})

    @classmethod
    def from_total(cls, grid: Grid, t: TotalCochain) -> "Cocycle2":
        parts = t.components(grid)
        return cls(*(parts[i] for i in COMPONENTS))

    def dropped_components(self, grid: Grid, t: TotalCochain) -> list:
        parts = t.components(grid)
        return [i for i in (GridIndex(2, 0, 0), GridIndex(1, 0, 1)) if not parts[i].is_zero()]


@dataclass(frozen=True)
class ExtensionLA:
    total: CrossedModuleLA
    inject_g: Matrix   # W -> g (+) W
    project_g: Matrix  # g (+) W -> g
    inject_h: Matrix   # V -> h (+) V
    project_h: Matrix  # h (+) V -> h
    unit_defect: tuple = field(default=())  # values of f on unit arrows (0; y), one vector per y


def _split(v: Sequence, n: int) -> tuple:
    return list(v[:n]), list(v[n:])


def build_candidate(grid: Grid, z: Cocycle2, sign: int = ACTION_TERM_SIGN,
                    h_twist: int = H_TWIST_SIGN) -> ExtensionLA:
    """The extension structure read off z, without checking anything."""
    cm, ts, rep = grid.cm, grid.ts, grid.rep
    n, m, W, V = cm.g.dim, cm.h.dim, ts.dimW, ts.dimV
    eh = cm.h.basis

    def f_on(x, y):
        return grid.evaluate(z.f, [NerveVector.of([x], y)], [])

    def w0_on(y0, y1):
        return [h_twist * t for t in grid.evaluate(z.w0, [NerveVector.of([], y0), NerveVector.of([], y1)], [])]

    def a_on(y, x):
        return grid.evaluate(z.a, [NerveVector.of([], y)], [x])

    def w1_on(x0, x1):
        return grid.evaluate(z.w1, [], [x0, x1])

    def vec(i, dim):
        return [Fraction(int(k == i)) for k in range(dim)]

    # bracket on h (+) V
    H = m + V
    h_tr = []
    for i in range(H):
        for j in range(H):
            y0, v0 = _split(vec(i, H), m)
            y1, v1 = _split(vec(j, H), m)
            vv = [a + b - c + d for a, b, c, d in zip(
                [Fraction(0)] * V, rep.r00(y0).apply(v1), rep.r00(y1).apply(v0), w0_on(y0, y1))]
            h_tr += [(i, j, k, c) for k, c in enumerate(cm.h.br(y0, y1) + vv) if c]
    G_ = n + W
    g_tr = []
    for i in range(G_):
        for j in range(G_):
            x0, u0 = _split(vec(i, G_), n)
            x1, u1 = _split(vec(j, G_), n)
            ww = [b - c + d for b, c, d in zip(
                rep.r01(cm.mu_of(x0)).apply(u1), rep.r01(cm.mu_of(x1)).apply(u0), w1_on(x0, x1))]
            g_tr += [(i, j, k, c) for k, c in enumerate(cm.g.br(x0, x1) + ww) if c]
    mu_cols = []
    for i in range(G_):
        x, u = _split(vec(i, G_), n)
        vv = [a + b for a, b in zip(ts.phi.apply(u), f_on(x, [Fraction(0)] * m))]
        mu_cols.append(cm.mu_of(x) + vv)
    act_tr = []
    for i in range(H):
        y, v = _split(vec(i, H), m)
        for j in range(G_):
            x, u = _split(vec(j, G_), n)
            ww = [b - c + sign * d for b, c, d in zip(
                rep.r01(y).apply(u), rep.r1(x).apply(v), a_on(y, x))]
            act_tr += [(i, j, k, c) for k, c in enumerate(cm.L(y, x) + ww) if c]
    total = CrossedModuleLA.build(LieAlgebra.from_triples(G_, g_tr), LieAlgebra.from_triples(H, h_tr),
                                  Matrix.from_columns(mu_cols, H) if G_ else Matrix.zeros(H, 0), act_tr)
    inj_g = Matrix.from_columns([[Fraction(0)] * n + vec(k, W) for k in range(W)], G_) if W else Matrix.zeros(G_, 0)
    proj_g = Matrix.from_rows([vec(k, G_) for k in range(n)], G_) if n else Matrix.zeros(0, G_)
    inj_h = Matrix.from_columns([[Fraction(0)] * m + vec(k, V) for k in range(V)], H) if V else Matrix.zeros(H, 0)
    proj_h = Matrix.from_rows([vec(k, H) for k in range(m)], H) if m else Matrix.zeros(0, H)
    defect = tuple(tuple(f_on([Fraction(0)] * n, eh(y))) for y in range(m))
    return ExtensionLA(total, inj_g, proj_g, inj_h, proj_h, defect)


def extension_report(ext: ExtensionLA) -> AxiomReport:
    """Crossed-module axioms of the total structure plus unit normalization of f."""
    base = check_crossed_module(ext.total)
    bad = next((y for y, v in enumerate(ext.unit_defect) if any(v)), None)
    unit = AxiomResult("f vanishes on unit arrows", bad is None, None if bad is None else (bad,))
    return AxiomReport(base.results + (unit,))


def failing_components(grid: Grid, t: TotalCochain) -> list:
    image = TotalCochain(3, tuple(grid.nabla_matrix(2).apply(list(t.coords))))
    return [i for i, c in image.components(grid).items() if not c.is_zero()]


def build_extension(grid: Grid, z: Cocycle2) -> ExtensionLA:
    t = z.total(grid)
    if not is_cocycle(grid, t):
        raise NotACocycle([i.as_list() for i in failing_components(grid, t)])
    ext = build_candidate(grid, z)
    rep = extension_report(ext)
    if not rep.passed:
        raise AxiomFailure("; ".join(r.line() for r in rep.failures()))
    return ext


@dataclass(frozen=True)
class EquivalenceRecord:
    cocycle: bool
    axioms: bool

    @property
    def agree(self) -> bool:
        return self.cocycle == self.axioms


def equivalence_audit(grid: Grid, z: Cocycle2, sign: int = ACTION_TERM_SIGN,
                      h_twist: int = H_TWIST_SIGN) -> EquivalenceRecord:
    cocycle = is_cocycle(grid, z.total(grid))
    axioms = extension_report(build_candidate(grid, z, sign, h_twist)).passed
    return EquivalenceRecord(cocycle, axioms)


def normalized_cocycle_basis(grid: Grid) -> list:
    """Basis of degree-2 cocycles supported on the four extension components."""
    offsets = grid.offsets(2)
    cols = []
    for i in COMPONENTS:
        o = offsets[i]
        cols.extend(range(o, o + grid.space(i.p, i.q, i.r).dim))
    N = grid.nabla_matrix(2)
    sub = Matrix.from_rows([[N[r, c] for c in cols] for r in range(N.rows)], len(cols)) if N.rows else \
        Matrix.zeros(0, len(cols))
    out = []
    for v in kernel_basis(sub):
        full = [Fraction(0)] * grid.total_dim(2)
        for c, x in zip(cols, v):
            full[c] = x
        out.append(Cocycle2.from_total(grid, TotalCochain(2, tuple(full))))
    return out


def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-3, 3), rng.randint(1, 2))


def random_cochain(grid: Grid, index: GridIndex, rng: random.Random, density: float = 1.0) -> Cochain:
    d = grid.space(index.p, index.q, index.r).dim
    return Cochain(index, tuple(_random_rational(rng) if rng.random() < density else Fraction(0) for _ in range(d)))


def _add(a: Cochain, b: Cochain, s=1) -> Cochain:
    return Cochain(a.index, tuple(x + s * y for x, y in zip(a.coords, b.coords)))


def combine(zs: Sequence[Cocycle2], coeffs: Sequence) -> Cocycle2:
    out = zs[0]
    out = Cocycle2(*(Cochain(c.index, tuple(Fraction(0) for _ in c.coords)) for c in (out.f, out.w0, out.a, out.w1)))
    for z, k in zip(zs, coeffs):
        out = Cocycle2(_add(out.f, z.f, k), _add(out.w0, z.w0, k), _add(out.a, z.a, k), _add(out.w1, z.w1, k))
    return out


def sample_tuples(grid: Grid, count: int, rng: random.Random) -> list:
    """A mix of cocycles, single-component perturbations of cocycles, and random tuples."""
    basis = normalized_cocycle_basis(grid)
    zero = Cocycle2.zero(grid)
    out = []
    for k in range(count):
        kind = k % 4
        if basis:
            z = combine(basis, [_random_rational(rng) for _ in basis])
        else:
            z = zero
        if kind == 1:
            comp = rng.randrange(4)
            parts = [z.f, z.w0, z.a, z.w1]
            if parts[comp].coords:
                parts[comp] = _add(parts[comp], random_cochain(grid, COMPONENTS[comp], rng, density=0.3))
            z = Cocycle2(*parts)
        elif kind == 2:
            z = Cocycle2(*(random_cochain(grid, i, rng) for i in COMPONENTS))
        out.append(z)
    return out


def calibrate_signs(grids: Sequence[Grid], samples: int, seed: int) -> dict:
    """Audit disagreements for each (action sign, h-twist sign) on the same samples."""
    pools = [(g, sample_tuples(g, samples, random.Random(seed))) for g in grids]
    result = {}
    for s in (1, -1):
        for t in (1, -1):
            result[(s, t)] = sum(not equivalence_audit(g, z, s, t).agree for g, zs in pools for z in zs)
    return result


def coboundary_tuple(grid: Grid, c: Cochain, b: Cochain) -> Cocycle2:
    """The tuple nabla(c, b) of degree-1 components c at (0,1,0) and b at (0,0,1)."""
    t = TotalCochain.from_components(grid, 1, {c.index: c, b.index: b})
    image = TotalCochain(2, tuple(grid.nabla_matrix(1).apply(list(t.coords))))
    return Cocycle2.from_total(grid, image)


@dataclass(frozen=True)
class ExtensionIsomorphism:
    on_g: Matrix  # g (+) W -> g (+) W
    on_h: Matrix  # h (+) V -> h (+) V


def _first_mismatch(pairs):
    for label, lhs, rhs in pairs:
        if lhs != rhs:
            return label
    return None


def coboundary_isomorphism(grid: Grid, b: Cochain, c: Cochain, E1: ExtensionLA, E2: ExtensionLA) -> ExtensionIsomorphism:
    """(x,w) -> (x, w + b(x)) and (y,v) -> (y, v + c(y)) from E1 (cocycle z + nabla(c,b)) to E2 (cocycle z)."""
    cm, ts = grid.cm, grid.ts
    n, m, W, V = cm.g.dim, cm.h.dim, ts.dimW, ts.dimV
    G_, H = n + W, m + V
    cols_g = []
    for j in range(G_):
        e = [Fraction(int(k == j)) for k in range(G_)]
        x = e[:n]
        bx = grid.evaluate(b, [], [x])
        cols_g.append(x + [a + d for a, d in zip(e[n:], bx)])
    cols_h = []
    for j in range(H):
        e = [Fraction(int(k == j)) for k in range(H)]
        y = e[:m]
        cy = grid.evaluate(c, [NerveVector.of([], y)], [])
        cols_h.append(y + [a + d for a, d in zip(e[m:], cy)])
    Pg = Matrix.from_columns(cols_g, G_) if G_ else Matrix.zeros(0, 0)
    Ph = Matrix.from_columns(cols_h, H) if H else Matrix.zeros(0, 0)
    iso = ExtensionIsomorphism(Pg, Ph)
    bad = verify_isomorphism(iso, E1, E2)
    if bad is not None:
        raise NotAnIsomorphism(bad)
    return iso


def verify_isomorphism(iso: ExtensionIsomorphism, E1: ExtensionLA, E2: ExtensionLA) -> str | None:
    """First violated identity, or None when iso intertwines every structure map."""
    T1, T2 = E1.total, E2.total
    Pg, Ph = iso.on_g, iso.on_h
    if rank(Pg) != Pg.rows or rank(Ph) != Ph.rows:
        return "not invertible"
    eg, eh = T1.g.basis, T1.h.basis

    def checks():
        for j in range(T1.g.dim):
            yield (f"mu at g-basis {j}", Ph.apply(T1.mu_of(eg(j))), T2.mu_of(Pg.apply(eg(j))))
        for i in range(T1.g.dim):
            for j in range(T1.g.dim):
                yield (f"g-bracket at ({i},{j})", Pg.apply(T1.g.br(eg(i), eg(j))),
                       T2.g.br(Pg.apply(eg(i)), Pg.apply(eg(j))))
        for i in range(T1.h.dim):
            for j in range(T1.h.dim):
                yield (f"h-bracket at ({i},{j})", Ph.apply(T1.h.br(eh(i), eh(j))),
                       T2.h.br(Ph.apply(eh(i)), Ph.apply(eh(j))))
        for i in range(T1.h.dim):
            for j in range(T1.g.dim):
                yield (f"action at ({i},{j})", Pg.apply(T1.L(eh(i), eg(j))),
                       T2.L(Ph.apply(eh(i)), Pg.apply(eg(j))))
    return _first_mismatch(checks())
