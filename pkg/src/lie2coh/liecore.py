"""Lie algebras by structure constants, crossed modules, and the nerve chart.

Vectors are plain lists of Fractions.  A level-p nerve vector of a crossed
module g -> h is stored as (x_1, ..., x_p; y) with x_j in g and y in h; its
flat coordinates concatenate x_1, ..., x_p, y in that order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactla import DimensionMismatch, Matrix, to_rational, zero_vec


class IndexOutOfRange(IndexError):
    pass


def _tensor3(dim_a: int, dim_b: int, dim_c: int, triples=()) -> tuple:
    t = [[[Fraction(0)] * dim_c for _ in range(dim_b)] for _ in range(dim_a)]
    for i, j, k, v in triples:
        t[i][j][k] += to_rational(v)
    return tuple(tuple(tuple(row) for row in plane) for plane in t)


def _bilinear(t, u: Sequence, v: Sequence, dim_out: int) -> list:
    out = [Fraction(0)] * dim_out
    for i, a in enumerate(u):
        if not a:
            continue
        ti = t[i]
        for j, b in enumerate(v):
            if not b:
                continue
            ab = a * b
            for k, c in enumerate(ti[j]):
                if c:
                    out[k] += ab * c
    return out


@dataclass(frozen=True)
class LieAlgebra:
    dim: int
    bracket: tuple = field(repr=False)  # bracket[i][j][k]: [e_i, e_j] = sum_k c e_k

    @classmethod
    def from_triples(cls, dim: int, triples=(), antisymmetrize: bool = False) -> "LieAlgebra":
        """Sparse entries [i, j, k, value]; optionally fill in [e_j, e_i] = -[e_i, e_j]."""
        triples = list(triples)
        if antisymmetrize:
            triples = triples + [(j, i, k, -to_rational(v)) for i, j, k, v in triples]
        return cls(dim, _tensor3(dim, dim, dim, triples))

    @classmethod
    def abelian(cls, dim: int) -> "LieAlgebra":
        return cls(dim, _tensor3(dim, dim, dim))

    def br(self, u: Sequence, v: Sequence) -> list:
        return _bilinear(self.bracket, u, v, self.dim)

    def basis(self, i: int) -> list:
        return [Fraction(int(k == i)) for k in range(self.dim)]

    def triples(self) -> list:
        return [(i, j, k, c) for i in range(self.dim) for j in range(self.dim)
                for k in range(self.dim) if (c := self.bracket[i][j][k])]


@dataclass(frozen=True)
class TwoVectorSpace:
    """A two-term complex W --phi--> V; phi is dimV x dimW."""
    dimW: int
    dimV: int
    phi: Matrix

    def __post_init__(self):
        if (self.phi.rows, self.phi.cols) != (self.dimV, self.dimW):
            raise DimensionMismatch(
                f"phi must be {self.dimV}x{self.dimW}, got {self.phi.rows}x{self.phi.cols}")


@dataclass(frozen=True)
class CrossedModuleLA:
    g: LieAlgebra
    h: LieAlgebra
    mu: Matrix  # dim h x dim g
    act: tuple = field(repr=False)  # act[y][x][k]: L_{e_y} e_x = sum_k act e_k

    def __post_init__(self):
        if (self.mu.rows, self.mu.cols) != (self.h.dim, self.g.dim):
            raise DimensionMismatch(
                f"mu must be {self.h.dim}x{self.g.dim}, got {self.mu.rows}x{self.mu.cols}")
        if len(self.act) != self.h.dim or any(len(a) != self.g.dim for a in self.act) or any(
                len(b) != self.g.dim for a in self.act for b in a):
            raise DimensionMismatch("action tensor must be dim h x dim g x dim g")

    @classmethod
    def build(cls, g: LieAlgebra, h: LieAlgebra, mu: Matrix, act_triples=()) -> "CrossedModuleLA":
        return cls(g, h, mu, _tensor3(h.dim, g.dim, g.dim, act_triples))

    def L(self, y: Sequence, x: Sequence) -> list:
        return _bilinear(self.act, y, x, self.g.dim)

    def mu_of(self, x: Sequence) -> list:
        return self.mu.apply(x)

    def act_matrix(self, y: Sequence) -> Matrix:
        """Matrix of L_y acting on g."""
        cols = [self.L(y, self.g.basis(j)) for j in range(self.g.dim)]
        return Matrix.from_columns(cols, self.g.dim)

    def act_triples(self) -> list:
        return [(y, x, k, c) for y in range(self.h.dim) for x in range(self.g.dim)
                for k in range(self.g.dim) if (c := self.act[y][x][k])]

    def nerve_dim(self, p: int) -> int:
        return p * self.g.dim + self.h.dim


@dataclass(frozen=True)
class AxiomResult:
    name: str
    passed: bool
    witness: tuple | None = None

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        extra = "" if self.witness is None else f" at basis tuple {self.witness}"
        return f"{self.name}: {status}{extra}"


@dataclass(frozen=True)
class AxiomReport:
    results: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list:
        return [r for r in self.results if not r.passed]

    def __getitem__(self, name: str) -> AxiomResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def lines(self) -> list:
        return [r.line() for r in self.results]


def _first_violation(tuples, predicate):
    for t in tuples:
        if not predicate(*t):
            return t
    return None


def _jacobi_witness(alg: LieAlgebra):
    e = alg.basis
    n = alg.dim

    def ok(i, j, k):
        a = alg.br(e(i), alg.br(e(j), e(k)))
        b = alg.br(e(j), alg.br(e(k), e(i)))
        c = alg.br(e(k), alg.br(e(i), e(j)))
        return all(x + y + z == 0 for x, y, z in zip(a, b, c))

    def anti(i, j):
        return all(alg.bracket[i][j][k] == -alg.bracket[j][i][k] for k in range(n))

    w = _first_violation(itertools.product(range(n), repeat=2), anti)
    if w is not None:
        return w
    return _first_violation(itertools.product(range(n), repeat=3), ok)


def check_lie_algebra(alg: LieAlgebra, name: str = "Jacobi") -> AxiomResult:
    w = _jacobi_witness(alg)
    return AxiomResult(name, w is None, w)


def check_crossed_module(cm: CrossedModuleLA) -> AxiomReport:
    """Exhaustive check of every crossed-module axiom on basis tuples."""
    g, h = cm.g, cm.h
    eg, eh = g.basis, h.basis
    G, H = range(g.dim), range(h.dim)
    results = [check_lie_algebra(g, "g Jacobi"), check_lie_algebra(h, "h Jacobi")]

    def hom(y0, y1, x):
        # L_{[y0,y1]} x = L_{y0} L_{y1} x - L_{y1} L_{y0} x
        lhs = cm.L(h.br(eh(y0), eh(y1)), eg(x))
        a = cm.L(eh(y0), cm.L(eh(y1), eg(x)))
        b = cm.L(eh(y1), cm.L(eh(y0), eg(x)))
        return all(l == s - t for l, s, t in zip(lhs, a, b))

    def der(y, x0, x1):
        lhs = cm.L(eh(y), g.br(eg(x0), eg(x1)))
        a = g.br(cm.L(eh(y), eg(x0)), eg(x1))
        b = g.br(eg(x0), cm.L(eh(y), eg(x1)))
        return all(l == s + t for l, s, t in zip(lhs, a, b))

    def equivariance(y, x):
        return cm.mu_of(cm.L(eh(y), eg(x))) == h.br(eh(y), cm.mu_of(eg(x)))

    def peiffer(x0, x1):
        return cm.L(cm.mu_of(eg(x0)), eg(x1)) == g.br(eg(x0), eg(x1))

    checks = [
        ("action-homomorphism", itertools.product(H, H, G), hom),
        ("derivation", itertools.product(H, G, G), der),
        ("equivariance", itertools.product(H, G), equivariance),
        ("Peiffer", itertools.product(G, G), peiffer),
    ]
    for name, tuples, pred in checks:
        w = _first_violation(tuples, pred)
        results.append(AxiomResult(name, w is None, w))
    return AxiomReport(tuple(results))


def semidirect_bracket(cm: CrossedModuleLA, a: tuple, b: tuple) -> tuple:
    """Bracket on g (+) h: ([x0,x1] + L_{y0} x1 - L_{y1} x0, [y0,y1])."""
    (x0, y0), (x1, y1) = a, b
    for x in (x0, x1):
        if len(x) != cm.g.dim:
            raise DimensionMismatch("g-component has the wrong length")
    for y in (y0, y1):
        if len(y) != cm.h.dim:
            raise DimensionMismatch("h-component has the wrong length")
    bx = cm.g.br(x0, x1)
    l01 = cm.L(y0, x1)
    l10 = cm.L(y1, x0)
    x = [p + q - r for p, q, r in zip(bx, l01, l10)]
    return x, cm.h.br(y0, y1)


@dataclass(frozen=True)
class NerveVector:
    xs: tuple  # p vectors in g
    y: tuple   # vector in h

    @property
    def p(self) -> int:
        return len(self.xs)

    def flat(self) -> list:
        out = []
        for x in self.xs:
            out.extend(x)
        out.extend(self.y)
        return out

    @classmethod
    def of(cls, xs, y) -> "NerveVector":
        return cls(tuple(tuple(to_rational(v) for v in x) for x in xs), tuple(to_rational(v) for v in y))


def nerve_from_flat(cm: CrossedModuleLA, p: int, flat: Sequence) -> NerveVector:
    n = cm.g.dim
    if len(flat) != cm.nerve_dim(p):
        raise DimensionMismatch(f"level-{p} nerve needs {cm.nerve_dim(p)} coordinates")
    xs = tuple(tuple(flat[j * n:(j + 1) * n]) for j in range(p))
    return NerveVector(xs, tuple(flat[p * n:]))


def nerve_basis(cm: CrossedModuleLA, p: int, i: int) -> NerveVector:
    flat = [Fraction(int(k == i)) for k in range(cm.nerve_dim(p))]
    return nerve_from_flat(cm, p, flat)


def nerve_face(cm: CrossedModuleLA, p: int, k: int, v: NerveVector) -> NerveVector:
    """Face k of a level-p vector (x_1..x_p; y), 0 <= k <= p."""
    if p < 1 or not 0 <= k <= p:
        raise IndexOutOfRange(f"face {k} undefined at level {p}")
    if v.p != p:
        raise DimensionMismatch(f"expected a level-{p} vector, got level {v.p}")
    xs = list(v.xs)
    if k == 0:
        return NerveVector(tuple(xs[1:]), v.y)
    if k == p:
        shift = cm.mu_of(xs[-1])
        return NerveVector(tuple(xs[:-1]), tuple(a + b for a, b in zip(v.y, shift)))
    merged = tuple(a + b for a, b in zip(xs[k - 1], xs[k]))
    return NerveVector(tuple(xs[:k - 1]) + (merged,) + tuple(xs[k + 1:]), v.y)


def final_target(cm: CrossedModuleLA, v: NerveVector) -> list:
    total = zero_vec(cm.g.dim)
    for x in v.xs:
        total = [a + b for a, b in zip(total, x)]
    return [a + b for a, b in zip(v.y, cm.mu_of(total))]


def nerve_rows(cm: CrossedModuleLA, v: NerveVector) -> list:
    """Row-wise chart: arrow j is (x_j, y + mu(x_{j+1} + ... + x_p))."""
    rows = []
    y = list(v.y)
    for x in reversed(v.xs):
        rows.append((list(x), list(y)))
        y = [a + b for a, b in zip(y, cm.mu_of(x))]
    rows.reverse()
    return rows


def nerve_bracket(cm: CrossedModuleLA, p: int, v1: NerveVector, v2: NerveVector) -> NerveVector:
    if v1.p != p or v2.p != p:
        raise DimensionMismatch(f"both vectors must be at level {p}")
    if p == 0:
        return NerveVector((), tuple(cm.h.br(v1.y, v2.y)))
    r1, r2 = nerve_rows(cm, v1), nerve_rows(cm, v2)
    out = [semidirect_bracket(cm, a, b) for a, b in zip(r1, r2)]
    return NerveVector(tuple(tuple(x) for x, _ in out), tuple(out[-1][1]))


def nerve_bracket_matrix(cm: CrossedModuleLA, p: int) -> tuple:
    """Structure constants of gg_p on the flat basis, as a 3-tensor."""
    n = cm.nerve_dim(p)
    basis = [nerve_basis(cm, p, i) for i in range(n)]
    t = [[nerve_bracket(cm, p, basis[i], basis[j]).flat() for j in range(n)] for i in range(n)]
    return tuple(tuple(tuple(c) for c in row) for row in t)


def nerve_lie_algebra(cm: CrossedModuleLA, p: int) -> LieAlgebra:
    return LieAlgebra(cm.nerve_dim(p), nerve_bracket_matrix(cm, p))


def unit_crossed_module(h: LieAlgebra) -> CrossedModuleLA:
    """The unit 2-algebra 0 -> h."""
    return CrossedModuleLA.build(LieAlgebra.abelian(0), h, Matrix.zeros(h.dim, 0))


def identity_crossed_module(alg: LieAlgebra) -> CrossedModuleLA:
    """id: g -> g acting on itself by the adjoint action."""
    triples = alg.triples()
    return CrossedModuleLA.build(alg, alg, Matrix.identity(alg.dim), triples)


def aff1() -> LieAlgebra:
    """The 2-dimensional non-abelian algebra [e_1, e_2] = e_2 (0-indexed here)."""
    return LieAlgebra.from_triples(2, [(0, 1, 1, 1)], antisymmetrize=True)
