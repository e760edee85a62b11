"""Betti numbers and representatives for the total differential, plus a standalone
Chevalley-Eilenberg pipeline used as an independent oracle."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactla import Matrix, alternating_expansion, combo_index, enumerate_combos, kernel_basis, rank, solve
from .grid import DegreeTooLarge, Grid
from .liecore import LieAlgebra


class NotARepresentation(ValueError):
    pass


@dataclass(frozen=True)
class TotalCochain:
    """An element of the total space of degree n, in the block order of Grid.indices(n)."""
    degree: int
    coords: tuple

    def components(self, grid: Grid) -> dict:
        return grid.split_total(self.degree, self.coords)

    @classmethod
    def from_components(cls, grid: Grid, n: int, parts: dict) -> "TotalCochain":
        return cls(n, tuple(grid.join_total(n, parts)))

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True)
class BettiReport:
    degrees: tuple  # (n, dim C^n, rank of the outgoing map, dim H^n)

    @property
    def betti(self) -> tuple:
        return tuple(b for _, _, _, b in self.degrees)

    def lines(self) -> list:
        out = ["n  dim  rank  betti"]
        out += [f"{n}  {d}  {r}  {b}" for n, d, r, b in self.degrees]
        return out


def _nabla(grid: Grid, n: int) -> Matrix:
    if n < 0:
        return Matrix.zeros(grid.total_dim(0), 0)
    return grid.nabla_matrix(n)


def betti(grid: Grid, n: int) -> int:
    if n > grid.options.max_degree:
        raise DegreeTooLarge(f"degree {n} exceeds the configured maximum {grid.options.max_degree}")
    return grid.total_dim(n) - rank(_nabla(grid, n)) - (rank(_nabla(grid, n - 1)) if n > 0 else 0)


def betti_report(grid: Grid, top: int) -> BettiReport:
    rows = []
    prev = 0
    for n in range(top + 1):
        r = rank(_nabla(grid, n))
        d = grid.total_dim(n)
        rows.append((n, d, r, d - r - prev))
        prev = r
    return BettiReport(tuple(rows))


def cocycle_basis(grid: Grid, n: int) -> list:
    return [TotalCochain(n, tuple(v)) for v in kernel_basis(_nabla(grid, n))]


def is_cocycle(grid: Grid, c: TotalCochain) -> bool:
    return not any(_nabla(grid, c.degree).apply(list(c.coords)))


def is_coboundary(grid: Grid, c: TotalCochain) -> TotalCochain | None:
    """A preimage under the previous differential, or None."""
    if c.degree == 0:
        return TotalCochain(-1, ()) if c.is_zero() else None
    x = solve(_nabla(grid, c.degree - 1), list(c.coords))
    return None if x is None else TotalCochain(c.degree - 1, tuple(x))


def nabla_of(grid: Grid, c: TotalCochain) -> TotalCochain:
    return TotalCochain(c.degree + 1, tuple(_nabla(grid, c.degree).apply(list(c.coords))))


# --- plain Chevalley-Eilenberg complex -------------------------------------------

def _check_rep(alg: LieAlgebra, rep: Sequence[Matrix]):
    for a, b in itertools.product(range(alg.dim), repeat=2):
        lhs = Matrix.zeros(rep[0].rows, rep[0].cols) if rep else None
        for k, c in enumerate(alg.bracket[a][b]):
            if c:
                lhs = lhs + rep[k].scale(c)
        comm = rep[a] @ rep[b] - rep[b] @ rep[a]
        if lhs != comm:
            raise NotARepresentation(f"rho([e{a}, e{b}]) != [rho(e{a}), rho(e{b})]")


def ce_differential(alg: LieAlgebra, rep: Sequence[Matrix], dimV: int, q: int) -> Matrix:
    """Matrix of the CE differential wedge^q -> wedge^(q+1) on (combo, v) bases."""
    n = alg.dim
    src = combo_index(n, q)
    tgt = enumerate_combos(n, q + 1)
    rows = []
    for T in tgt:
        X = [alg.basis(i) for i in T]
        block = [[Fraction(0)] * (len(src) * dimV) for _ in range(dimV)]
        for j in range(q + 1):
            rest = X[:j] + X[j + 1:]
            R = rep[T[j]]
            for combo, a in alternating_expansion(rest).items():
                base = src[combo] * dimV
                for v in range(dimV):
                    for c in range(dimV):
                        if R[v, c]:
                            block[v][base + c] += (-1) ** j * a * R[v, c]
        for m_, k_ in itertools.combinations(range(q + 1), 2):
            br = alg.br(X[m_], X[k_])
            rest = [x for i, x in enumerate(X) if i not in (m_, k_)]
            for combo, a in alternating_expansion([br] + rest).items():
                base = src[combo] * dimV
                for v in range(dimV):
                    block[v][base + v] += (-1) ** (m_ + k_) * a
        rows.extend(block)
    return Matrix.from_rows(rows, len(src) * dimV) if rows else Matrix.zeros(0, len(src) * dimV)


def ce_cohomology(alg: LieAlgebra, rep: Sequence[Matrix] | None, dimV: int) -> BettiReport:
    if rep is None:
        rep = [Matrix.zeros(dimV, dimV) for _ in range(alg.dim)]
    if len(rep) != alg.dim:
        raise NotARepresentation("need one matrix per basis element")
    if alg.dim:
        _check_rep(alg, rep)
    ds = [ce_differential(alg, rep, dimV, q) for q in range(alg.dim + 1)]
    rows = []
    prev = 0
    for q, d in enumerate(ds):
        r = rank(d)
        dim = d.cols
        rows.append((q, dim, r, dim - r - prev))
        prev = r
    return BettiReport(tuple(rows))
