"""The triple grid C^{p,q}_r of a crossed module with 2-vector-space coefficients.

C^{p,q}_r = wedge^q gg_p* (x) wedge^r g* (x) W for r > 0 and wedge^q gg_p* (x) V
for r = 0.  A basis element is a triple (A, B, c): A a q-combo of the flat basis
of gg_p, B an r-combo of the basis of g, c a coefficient index.  Every map is
assembled as an exact matrix by evaluating its defining formula on the basis
tuples of the target space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .exactla import Matrix, alternating_expansion, block_matrix, enumerate_combos
from .liecore import (CrossedModuleLA, NerveVector, TwoVectorSpace, final_target, nerve_basis, nerve_bracket,
                      nerve_face)
from .rep2 import Rep2


class ArityMismatch(ValueError):
    pass


class DegreeTooLarge(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


@dataclass(frozen=True, order=True)
class GridIndex:
    p: int
    q: int
    r: int

    @property
    def degree(self) -> int:
        return self.p + self.q + self.r

    def as_list(self) -> list:
        return [self.p, self.q, self.r]


@dataclass(frozen=True)
class CochainSpace:
    index: GridIndex
    nerve_dim: int
    g_dim: int
    coeff_dim: int
    basis: tuple = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def position(self) -> dict:
        return {b: i for i, b in enumerate(self.basis)}


@dataclass(frozen=True)
class Cochain:
    index: GridIndex
    coords: tuple

    @classmethod
    def of(cls, index, coords) -> "Cochain":
        if not isinstance(index, GridIndex):
            index = GridIndex(*index)
        return cls(index, tuple(Fraction(c) for c in coords))

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass
class GridOptions:
    max_degree: int = 6
    # sign of delta' at r = 0 in the total differential: True uses (-1)^(p+q)
    signed_first_r: bool = True


class _RowAccumulator:
    """Collects the rows of a map matrix, one target basis tuple at a time."""

    def __init__(self, src: CochainSpace, tgt: CochainSpace):
        self.src, self.tgt = src, tgt
        self.rows = [dict() for _ in range(tgt.dim)]

    def add(self, target_rows: Sequence[int], xi_flats: Sequence[Sequence], zs: Sequence[Sequence],
            coef: Matrix | None = None, scalar=1):
        """rows[target] += scalar * coef . w(xi; z), read as linear forms in w."""
        if not scalar:
            return
        ex = alternating_expansion(xi_flats)
        if not ex:
            return
        ez = alternating_expansion(zs)
        if not ez:
            return
        pos = self.src.position
        ncoef = self.src.coeff_dim
        for A, a in ex.items():
            for B, b in ez.items():
                s = scalar * a * b
                if coef is None:
                    for c, t in enumerate(target_rows):
                        key = pos[(A, B, c)]
                        row = self.rows[t]
                        row[key] = row.get(key, 0) + s
                else:
                    for ci, t in enumerate(target_rows):
                        row = self.rows[t]
                        for c in range(ncoef):
                            m = coef[ci, c]
                            if m:
                                key = pos[(A, B, c)]
                                row[key] = row.get(key, 0) + s * m

    def matrix(self) -> Matrix:
        n = self.src.dim
        data = [Fraction(0)] * (self.tgt.dim * n)
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                data[i * n + j] = Fraction(v)
        return Matrix(self.tgt.dim, n, tuple(data))


def _drop(seq: Sequence, positions: Sequence[int]) -> list:
    skip = set(positions)
    return [v for i, v in enumerate(seq) if i not in skip]


class Grid:
    """All directional maps of the grid for one (crossed module, coefficients, representation)."""

    def __init__(self, cm: CrossedModuleLA, ts: TwoVectorSpace, rep: Rep2, options: GridOptions | None = None):
        self.cm, self.ts, self.rep = cm, ts, rep
        self.options = options or GridOptions()
        self._spaces: dict = {}
        self._maps: dict = {}

    # --- spaces -----------------------------------------------------------
    def space(self, p: int, q: int, r: int) -> CochainSpace:
        key = (p, q, r)
        if key not in self._spaces:
            nd = self.cm.nerve_dim(p)
            cd = self.ts.dimW if r > 0 else self.ts.dimV
            basis = tuple((A, B, c) for A in enumerate_combos(nd, q)
                          for B in enumerate_combos(self.cm.g.dim, r) for c in range(cd))
            self._spaces[key] = CochainSpace(GridIndex(p, q, r), nd, self.cm.g.dim, cd, basis)
        return self._spaces[key]

    def indices(self, n: int) -> list:
        return [GridIndex(p, q, n - p - q) for p in range(n + 1) for q in range(n + 1 - p)]

    def total_dim(self, n: int) -> int:
        return sum(self.space(i.p, i.q, i.r).dim for i in self.indices(n))

    # --- helpers ----------------------------------------------------------
    def _tuples(self, tgt: CochainSpace):
        """Yield (rows, Xi, Z) for each basis tuple of the target."""
        p = tgt.index.p
        cd = tgt.coeff_dim
        g = self.cm.g
        i = 0
        for A in enumerate_combos(tgt.nerve_dim, tgt.index.q):
            Xi = [nerve_basis(self.cm, p, a) for a in A]
            for B in enumerate_combos(g.dim, tgt.index.r):
                Z = [g.basis(b) for b in B]
                yield list(range(i, i + cd)), Xi, Z
                i += cd

    def _rho01_of(self, y: Sequence) -> Matrix:
        return self.rep.r01(y)

    def _rho00_of(self, y: Sequence) -> Matrix:
        return self.rep.r00(y)

    # --- evaluation -------------------------------------------------------
    def evaluate(self, c: Cochain, Xi: Sequence[NerveVector], Z: Sequence[Sequence]) -> list:
        sp = self.space(c.index.p, c.index.q, c.index.r)
        if len(Xi) != sp.index.q or len(Z) != sp.index.r or len(c.coords) != sp.dim:
            raise ArityMismatch(f"cochain at {sp.index.as_list()} evaluated on {len(Xi)} nerve and {len(Z)} g arguments")
        for v in Xi:
            if v.p != sp.index.p:
                raise ArityMismatch(f"nerve argument at level {v.p}, expected {sp.index.p}")
        out = [Fraction(0)] * sp.coeff_dim
        ex = alternating_expansion([v.flat() for v in Xi])
        ez = alternating_expansion(Z)
        pos = sp.position
        for A, a in ex.items():
            for B, b in ez.items():
                for k in range(sp.coeff_dim):
                    out[k] += a * b * c.coords[pos[(A, B, k)]]
        return out

    def apply(self, m: Matrix, c: Cochain, target: GridIndex) -> Cochain:
        return Cochain(target, tuple(m.apply(list(c.coords))))

    # --- p-direction ------------------------------------------------------
    def d_p_matrix(self, p: int, q: int, r: int) -> Matrix:
        key = ("p", p, q, r)
        if key in self._maps:
            return self._maps[key]
        src, tgt = self.space(p, q, r), self.space(p + 1, q, r)
        if q == 0:
            m = Matrix.identity(src.dim) if p % 2 == 1 else Matrix.zeros(tgt.dim, src.dim)
        else:
            acc = _RowAccumulator(src, tgt)
            for rows, Xi, Z in self._tuples(tgt):
                for k in range(p + 2):
                    faces = [nerve_face(self.cm, p + 1, k, v).flat() for v in Xi]
                    acc.add(rows, faces, Z, None, (-1) ** k)
            m = acc.matrix()
        self._maps[key] = m
        return m

    # --- q-direction ------------------------------------------------------
    def d_q_matrix(self, p: int, q: int, r: int) -> Matrix:
        key = ("q", p, q, r)
        if key in self._maps:
            return self._maps[key]
        cm = self.cm
        src, tgt = self.space(p, q, r), self.space(p, q + 1, r)
        acc = _RowAccumulator(src, tgt)
        for rows, Xi, Z in self._tuples(tgt):
            flats = [v.flat() for v in Xi]
            for j, xj in enumerate(Xi):
                y = final_target(cm, xj)
                if not any(y):
                    continue
                rest = flats[:j] + flats[j + 1:]
                sj = (-1) ** j
                if r == 0:
                    acc.add(rows, rest, Z, self._rho00_of(y), sj)
                else:
                    acc.add(rows, rest, Z, self._rho01_of(y), sj)
                    for k in range(r):
                        Zk = list(Z)
                        Zk[k] = cm.L(y, Z[k])
                        acc.add(rows, rest, Zk, None, -sj)
            for m_, n_ in itertools.combinations(range(q + 1), 2):
                br = nerve_bracket(cm, p, Xi[m_], Xi[n_]).flat()
                acc.add(rows, [br] + _drop(flats, (m_, n_)), Z, None, (-1) ** (m_ + n_))
        mat = acc.matrix()
        self._maps[key] = mat
        return mat

    # --- r-direction ------------------------------------------------------
    def d_r_matrix(self, p: int, q: int, r: int) -> Matrix:
        key = ("r", p, q, r)
        if key in self._maps:
            return self._maps[key]
        cm = self.cm
        src, tgt = self.space(p, q, r), self.space(p, q, r + 1)
        acc = _RowAccumulator(src, tgt)
        for rows, Xi, Z in self._tuples(tgt):
            flats = [v.flat() for v in Xi]
            if r == 0:
                acc.add(rows, flats, [], self.rep.r1(Z[0]), 1)
                continue
            for j, zj in enumerate(Z):
                R = self._rho01_of(cm.mu_of(zj))
                acc.add(rows, flats, Z[:j] + Z[j + 1:], R, (-1) ** j)
            for m_, n_ in itertools.combinations(range(r + 1), 2):
                br = cm.g.br(Z[m_], Z[n_])
                acc.add(rows, flats, [br] + _drop(Z, (m_, n_)), None, (-1) ** (m_ + n_))
        mat = acc.matrix()
        self._maps[key] = mat
        return mat

    # --- difference maps --------------------------------------------------
    def delta_k_matrix(self, p: int, q: int, r: int, k: int) -> Matrix:
        if not 1 <= k <= r:
            raise IndexOutOfRange(f"difference map {k} undefined for r = {r}")
        key = ("D", p, q, r, k)
        if key in self._maps:
            return self._maps[key]
        cm = self.cm
        src, tgt = self.space(p, q, r), self.space(p + 1, q + k, r - k)
        coef = self.ts.phi if k == r else None
        acc = _RowAccumulator(src, tgt)
        for rows, Xi, Z in self._tuples(tgt):
            faces = [nerve_face(cm, p + 1, 0, v).flat() for v in Xi]
            firsts = [list(v.xs[0]) for v in Xi]
            for a in itertools.combinations(range(q + k), k):
                acc.add(rows, _drop(faces, a), [firsts[i] for i in a] + list(Z), coef, (-1) ** sum(a))
        mat = acc.matrix()
        self._maps[key] = mat
        return mat

    # --- cochain-level wrappers --------------------------------------------
    def d_p(self, c: Cochain) -> Cochain:
        i = c.index
        return self.apply(self.d_p_matrix(i.p, i.q, i.r), c, GridIndex(i.p + 1, i.q, i.r))

    def d_q(self, c: Cochain) -> Cochain:
        i = c.index
        return self.apply(self.d_q_matrix(i.p, i.q, i.r), c, GridIndex(i.p, i.q + 1, i.r))

    def d_r(self, c: Cochain) -> Cochain:
        i = c.index
        return self.apply(self.d_r_matrix(i.p, i.q, i.r), c, GridIndex(i.p, i.q, i.r + 1))

    def delta_k(self, c: Cochain, k: int) -> Cochain:
        i = c.index
        return self.apply(self.delta_k_matrix(i.p, i.q, i.r, k), c, GridIndex(i.p + 1, i.q + k, i.r - k))

    # --- total differential -----------------------------------------------
    def nabla_blocks(self, n: int) -> dict:
        """{(source, target): signed block} for every nonzero family of the total differential."""
        if n > self.options.max_degree:
            raise DegreeTooLarge(f"degree {n} exceeds the configured maximum {self.options.max_degree}")
        blocks = {}
        for s in self.indices(n):
            p, q, r = s.p, s.q, s.r
            sign = (-1) ** (p + q)
            blocks[(s, GridIndex(p + 1, q, r))] = self.d_p_matrix(p, q, r)
            blocks[(s, GridIndex(p, q + 1, r))] = self.d_q_matrix(p, q, r).scale(sign)
            rs = sign if (r > 0 or self.options.signed_first_r) else 1
            blocks[(s, GridIndex(p, q, r + 1))] = self.d_r_matrix(p, q, r).scale(rs)
            for k in range(1, r + 1):
                blocks[(s, GridIndex(p + 1, q + k, r - k))] = self.delta_k_matrix(p, q, r, k)
        return blocks

    def nabla_matrix(self, n: int) -> Matrix:
        key = ("nabla", n, self.options.signed_first_r)
        if key in self._maps:
            return self._maps[key]
        srcs, tgts = self.indices(n), self.indices(n + 1)
        blocks = self.nabla_blocks(n)
        grid = [[blocks.get((s, t)) for s in srcs] for t in tgts]
        m = block_matrix(grid, [self.space(t.p, t.q, t.r).dim for t in tgts],
                         [self.space(s.p, s.q, s.r).dim for s in srcs])
        self._maps[key] = m
        return m

    def offsets(self, n: int) -> dict:
        out, o = {}, 0
        for i in self.indices(n):
            out[i] = o
            o += self.space(i.p, i.q, i.r).dim
        return out

    def split_total(self, n: int, vec: Sequence) -> dict:
        """Total-degree coordinates -> {GridIndex: Cochain}."""
        out = {}
        for i, o in self.offsets(n).items():
            d = self.space(i.p, i.q, i.r).dim
            out[i] = Cochain(i, tuple(Fraction(v) for v in vec[o:o + d]))
        return out

    def join_total(self, n: int, parts: dict) -> list:
        vec = [Fraction(0)] * self.total_dim(n)
        for i, o in self.offsets(n).items():
            c = parts.get(i)
            if c is not None:
                vec[o:o + len(c.coords)] = list(c.coords)
        return vec


def cochain_from_function(grid: Grid, index: GridIndex, fn) -> Cochain:
    """Coordinates of the cochain whose values on basis tuples are fn(Xi, Z)."""
    sp = grid.space(index.p, index.q, index.r)
    cm = grid.cm
    coords = []
    for A in enumerate_combos(sp.nerve_dim, index.q):
        Xi = [nerve_basis(cm, index.p, a) for a in A]
        for B in enumerate_combos(cm.g.dim, index.r):
            Z = [cm.g.basis(b) for b in B]
            coords.extend(Fraction(v) for v in fn(Xi, Z))
    return Cochain(index, tuple(coords))
