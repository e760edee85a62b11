"""Group-side cochains of a matrix Lie 2-group, differentiated into algebra-side
cochains with nilpotent jets.

Every smooth map of a fixture is written over an abstract commutative scalar
ring, so the same code runs on floats, Fractions and JetScalars.  Curves
exp(tau z) are only ever evaluated at tau = eps with eps^2 = 0, where they are
exactly unit + eps z.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .cohomology import is_cocycle
from .exactla import Matrix, enumerate_combos, permutation_sign, solve
from .extensions import Cocycle2
from .grid import ArityMismatch, Cochain, Grid, GridIndex, GridOptions, IndexOutOfRange
from .liecore import CrossedModuleLA, LieAlgebra, TwoVectorSpace, check_crossed_module
from .rep2 import Rep2, check_rep2, glphi_module


class SingularBase(ZeroDivisionError):
    pass


class UnsupportedShape(ValueError):
    pass


class JetBudgetExceeded(ValueError):
    pass


class NotAGroupCocycle(ValueError):
    pass


class RationalizationFailed(ValueError):
    pass


DEFAULT_JET_BUDGET = 5
DEFAULT_TOLERANCE = 1e-9


# --- jets ----------------------------------------------------------------------------

class JetScalar:
    """Truncated polynomial in square-free nilpotent generators; monomials are bitmasks."""
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def generator(cls, k: int, base=0, coef=1) -> "JetScalar":
        return cls({0: base, 1 << k: coef})

    @property
    def base(self):
        return self.terms.get(0, 0)

    def coefficient(self, generators: Sequence[int]):
        mask = 0
        for k in generators:
            mask |= 1 << k
        return self.terms.get(mask, 0)

    def coefficient_mask(self, mask: int):
        return self.terms.get(mask, 0)

    @staticmethod
    def _lift(x) -> "JetScalar":
        return x if isinstance(x, JetScalar) else JetScalar({0: x})

    def __add__(self, other):
        if not isinstance(other, JetScalar):
            t = dict(self.terms)
            t[0] = t.get(0, 0) + other
            return JetScalar(t)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return JetScalar(t)

    __radd__ = __add__

    def __neg__(self):
        return JetScalar({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, JetScalar):
            return JetScalar({m: c * other for m, c in self.terms.items()}) if other else JetScalar()
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                if m1 & m2 == 0:
                    m = m1 | m2
                    t[m] = t.get(m, 0) + c1 * c2
        return JetScalar(t)

    __rmul__ = __mul__

    def inverse(self) -> "JetScalar":
        b = self.base
        if b == 0:
            raise SingularBase("jet with zero base part is not invertible")
        nil = JetScalar({m: c / b for m, c in self.terms.items() if m})
        used = 0
        for m in nil.terms:
            used |= m
        out = JetScalar({0: 1})
        power = JetScalar({0: 1})
        for _ in range(bin(used).count("1")):
            power = power * (-nil)
            if not power.terms:
                break
            out = out + power
        return out * _inv_scalar(b)

    def __truediv__(self, other):
        if isinstance(other, JetScalar):
            return self * other.inverse()
        return JetScalar({m: c / other for m, c in self.terms.items()})

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __abs__(self):
        return abs(self.base)

    def __eq__(self, other):
        o = self._lift(other)
        keys = set(self.terms) | set(o.terms)
        return all(self.terms.get(k, 0) == o.terms.get(k, 0) for k in keys)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"JetScalar({self.terms})"


def _inv_scalar(x):
    if isinstance(x, JetScalar):
        return x.inverse()
    if x == 0:
        raise SingularBase("zero pivot")
    return Fraction(1) / x if isinstance(x, (int, Fraction)) else 1 / x


def _is_zero(x) -> bool:
    if isinstance(x, JetScalar):
        return not x.terms
    return x == 0


# --- ring-generic matrices (lists of rows) ----------------------------------------

def mat_identity(n: int) -> list:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_zeros(r: int, c: int) -> list:
    return [[0] * c for _ in range(r)]


def mat_mul(a: list, b: list) -> list:
    m = len(b[0]) if b else 0
    out = []
    for row in a:
        new = [0] * m
        for k, x in enumerate(row):
            if _is_zero(x):
                continue
            bk = b[k]
            for j in range(m):
                y = bk[j]
                if not _is_zero(y):
                    new[j] = new[j] + x * y
        out.append(new)
    return out


def mat_add(a: list, b: list) -> list:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: list, b: list) -> list:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(s, a: list) -> list:
    return [[s * x for x in row] for row in a]


def mat_vec(a: list, v: Sequence) -> list:
    out = []
    for row in a:
        acc = 0
        for x, y in zip(row, v):
            if not _is_zero(x) and not _is_zero(y):
                acc = acc + x * y
        out.append(acc)
    return out


def mat_inverse(a: list) -> list:
    """Gauss-Jordan with pivots of largest base magnitude; works over any field-like ring."""
    n = len(a)
    m = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(m[r][col]))
        if abs(m[piv][col]) == 0:
            raise SingularBase("matrix is singular at its base point")
        m[col], m[piv] = m[piv], m[col]
        inv = _inv_scalar(m[col][col])
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and not _is_zero(m[r][col]):
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def from_exact(m: Matrix) -> list:
    return [m.row(i) for i in range(m.rows)]


# --- groups and fixtures --------------------------------------------------------------

@dataclass(frozen=True)
class GroupChart:
    """A Lie group open in the affine space unit + span(basis), with a ring-generic law."""
    unit: tuple     # matrix (tuple of row tuples)
    basis: tuple    # Lie algebra basis, same shape as unit
    mul: Callable
    inv: Callable

    @property
    def dim(self) -> int:
        return len(self.basis)

    def unit_list(self) -> list:
        return [list(r) for r in self.unit]

    def tangent(self, coords: Sequence) -> list:
        rows, cols = len(self.unit), len(self.unit[0]) if self.unit else 0
        out = mat_zeros(rows, cols)
        for c, b in zip(coords, self.basis):
            if _is_zero(c):
                continue
            for i in range(rows):
                for j in range(cols):
                    if b[i][j]:
                        out[i][j] = out[i][j] + c * b[i][j]
        return out

    def exp1(self, eps, coords: Sequence) -> list:
        """unit + eps * z: the exponential curve at a nilpotent parameter."""
        return mat_add(self.unit_list(), mat_scale(eps, self.tangent(coords)))

    def support(self) -> list:
        """Matrix positions along which the group actually varies."""
        pos = set()
        for b in self.basis:
            for i, row in enumerate(b):
                for j, v in enumerate(row):
                    if v:
                        pos.add((i, j))
        return sorted(pos)

    def coords_of(self, elem: list) -> list:
        """Exact coordinates of elem - unit in the basis (rational input)."""
        n = len(self.basis)
        if n == 0:
            return []
        cols = [[Fraction(v) for row in b for v in row] for b in self.basis]
        d = [Fraction(e) - Fraction(u) for er, ur in zip(elem, self.unit) for e, u in zip(er, ur)]
        x = solve(Matrix.from_columns(cols, len(d)), d)
        if x is None:
            raise ValueError("element lies outside the chart span")
        return x


def matrix_group(unit_size: int, basis: Sequence) -> GroupChart:
    unit = tuple(tuple(1 if i == j else 0 for j in range(unit_size)) for i in range(unit_size))
    return GroupChart(unit, tuple(tuple(tuple(r) for r in b) for b in basis), mat_mul, mat_inverse)


@dataclass(frozen=True)
class MatrixLie2Group:
    """A crossed module of matrix Lie groups with a representation on W --phi--> V."""
    name: str
    G: GroupChart
    H: GroupChart
    i: Callable        # G -> H
    act: Callable      # (g, h) -> g^h
    rho01: Callable    # H -> GL(W)
    rho00: Callable    # H -> GL(V)
    rho1: Callable     # G -> Hom(V, W)
    dimW: int
    dimV: int
    phi: Matrix        # dimV x dimW

    # arrows of the groupoid, as pairs (g, h) in G x| H
    def arrow_mul(self, a: tuple, b: tuple) -> tuple:
        (g1, h1), (g2, h2) = a, b
        return self.G.mul(self.act(g1, h2), g2), self.H.mul(h1, h2)

    def prod_G(self, elems: Sequence) -> list:
        out = self.G.unit_list()
        for e in elems:
            out = self.G.mul(out, e)
        return out

    def prod_H(self, elems: Sequence) -> list:
        out = self.H.unit_list()
        for e in elems:
            out = self.H.mul(out, e)
        return out


# --- the nerve in the chart (g_1, ..., g_p; h) -----------------------------------------

@dataclass(frozen=True)
class Row:
    gs: tuple   # p elements of G
    h: object   # element of H

    @property
    def p(self) -> int:
        return len(self.gs)


def row_face(fx: MatrixLie2Group, k: int, row: Row) -> Row:
    """Face k of a row (g_0, ..., g_p; h), 0 <= k <= p + 1."""
    gs = list(row.gs)
    p = len(gs) - 1
    if not 0 <= k <= p + 1:
        raise IndexOutOfRange(f"face {k} undefined on a row with {len(gs)} entries")
    if k == 0:
        return Row(tuple(gs[1:]), row.h)
    if k == p + 1:
        return Row(tuple(gs[:-1]), fx.H.mul(row.h, fx.i(gs[-1])))
    merged = fx.G.mul(gs[k], gs[k - 1])
    return Row(tuple(gs[:k - 1]) + (merged,) + tuple(gs[k + 1:]), row.h)


def row_face_power(fx: MatrixLie2Group, row: Row, a: int) -> Row:
    for _ in range(a):
        row = row_face(fx, 0, row)
    return row


def t_p(fx: MatrixLie2Group, row: Row) -> list:
    """h i(g_p ... g_1)."""
    return fx.H.mul(row.h, fx.i(fx.prod_G(list(reversed(row.gs)))))


def row_arrows(fx: MatrixLie2Group, row: Row) -> list:
    """Arrow j is (g_j, h i(g_p ... g_{j+1}))."""
    out = []
    h = row.h
    for g in reversed(row.gs):
        out.append((g, h))
        h = fx.H.mul(h, fx.i(g))
    out.reverse()
    return out


def row_mul(fx: MatrixLie2Group, a: Row, b: Row) -> Row:
    """Group product of G_p, computed arrow by arrow in G x| H."""
    if a.p == 0:
        return Row((), fx.H.mul(a.h, b.h))
    prods = [fx.arrow_mul(x, y) for x, y in zip(row_arrows(fx, a), row_arrows(fx, b))]
    return Row(tuple(g for g, _ in prods), prods[-1][1])


def first_arrow(fx: MatrixLie2Group, row: Row) -> tuple:
    return row_arrows(fx, row)[0]


# --- group cochains -----------------------------------------------------------------

@dataclass(frozen=True)
class GroupCochain:
    """fn(rows, fs): rows is a list of q Rows at level p, fs a list of r elements of G."""
    index: GridIndex
    fn: Callable
    name: str = ""

    def __call__(self, rows: Sequence[Row], fs: Sequence) -> list:
        i = self.index
        if len(rows) != i.q or len(fs) != i.r or any(r.p != i.p for r in rows):
            raise ArityMismatch(f"cochain at {i.as_list()} got {len(rows)} rows and {len(fs)} group arguments")
        return self.fn(list(rows), list(fs))


def _out_dim(fx: MatrixLie2Group, r: int) -> int:
    return fx.dimW if r > 0 else fx.dimV


def zero_cochain(fx: MatrixLie2Group, index: GridIndex) -> GroupCochain:
    d = _out_dim(fx, index.r)
    return GroupCochain(index, lambda rows, fs: [0] * d, "zero")


def _vadd(u, v):
    return [a + b for a, b in zip(u, v)]


def _vscale(s, v):
    return [s * a for a in v]


def _twist_product(fx: MatrixLie2Group, rows: Sequence[Row]) -> list:
    return fx.prod_H([t_p(fx, r) for r in rows])


def _conj(fx: MatrixLie2Group, g, hs: Sequence):
    for h in hs:
        g = fx.act(g, h)
    return g


def gp_d_p(fx: MatrixLie2Group, c: GroupCochain) -> GroupCochain:
    p, q, r = c.index.p, c.index.q, c.index.r
    tgt = GridIndex(p + 1, q, r)
    d = _out_dim(fx, r)
    if q == 0:
        if p % 2 == 1:
            return GroupCochain(tgt, lambda rows, fs: c([], fs), f"d_p({c.name})")
        return GroupCochain(tgt, lambda rows, fs: [0] * d, f"d_p({c.name})")

    def fn(rows, fs):
        out = [0] * d
        first = c([row_face(fx, 0, x) for x in rows], fs)
        if r > 0:
            arrows = [first_arrow(fx, x) for x in rows]
            acc = arrows[0]
            for a in arrows[1:]:
                acc = fx.arrow_mul(acc, a)
            first = mat_vec(mat_inverse(fx.rho01(fx.i(acc[0]))), first)
        out = _vadd(out, first)
        for k in range(1, p + 2):
            out = _vadd(out, _vscale((-1) ** k, c([row_face(fx, k, x) for x in rows], fs)))
        return out

    return GroupCochain(tgt, fn, f"d_p({c.name})")


def gp_d_q(fx: MatrixLie2Group, c: GroupCochain) -> GroupCochain:
    p, q, r = c.index.p, c.index.q, c.index.r
    tgt = GridIndex(p, q + 1, r)

    def fn(rows, fs):
        if r == 0:
            out = mat_vec(fx.rho00(t_p(fx, rows[0])), c(rows[1:], fs))
        else:
            t0 = t_p(fx, rows[0])
            out = c(rows[1:], [fx.act(f, t0) for f in fs])
        for j in range(1, q + 1):
            merged = rows[:j - 1] + [row_mul(fx, rows[j - 1], rows[j])] + rows[j + 1:]
            out = _vadd(out, _vscale((-1) ** j, c(merged, fs)))
        last = c(rows[:q], fs)
        if r > 0:
            last = mat_vec(mat_inverse(fx.rho01(t_p(fx, rows[q]))), last)
        return _vadd(out, _vscale((-1) ** (q + 1), last))

    return GroupCochain(tgt, fn, f"d_q({c.name})")


def gp_delta_prime(fx: MatrixLie2Group, c: GroupCochain) -> GroupCochain:
    p, q, r = c.index.p, c.index.q, c.index.r
    if r != 0:
        raise ArityMismatch("delta' starts at r = 0")

    def fn(rows, fs):
        v = mat_vec(fx.rho1(fs[0]), c(rows, []))
        if q:
            v = mat_vec(mat_inverse(fx.rho01(_twist_product(fx, rows))), v)
        return v

    return GroupCochain(GridIndex(p, q, 1), fn, f"delta'({c.name})")


def gp_d_r(fx: MatrixLie2Group, c: GroupCochain) -> GroupCochain:
    p, q, r = c.index.p, c.index.q, c.index.r
    if r == 0:
        return gp_delta_prime(fx, c)

    def fn(rows, fs):
        T = [t_p(fx, x) for x in rows]
        g0 = _conj(fx, fs[0], T)
        out = mat_vec(fx.rho01(fx.i(g0)), c(rows, fs[1:]))
        for k in range(1, r + 1):
            merged = fs[:k - 1] + [fx.G.mul(fs[k - 1], fs[k])] + fs[k + 1:]
            out = _vadd(out, _vscale((-1) ** k, c(rows, merged)))
        return _vadd(out, _vscale((-1) ** (r + 1), c(rows, fs[:r])))

    return GroupCochain(GridIndex(p, q, r + 1), fn, f"d_r({c.name})")


def _c_tuple(fx: MatrixLie2Group, kind: str, rows: Sequence[Row], r: int) -> list:
    if kind == "11":
        return [rows[0].gs[0]]
    if kind == "r1":
        return [rows[0].gs[k] for k in reversed(range(r))]
    firsts = [first_arrow(fx, x) for x in rows[:r]]
    out = []
    for a in range(r):
        out.append(_conj(fx, firsts[a][0], [h for _, h in firsts[a + 1:r]]))
    return out


def gp_delta_ab(fx: MatrixLie2Group, c: GroupCochain, a: int, b: int) -> GroupCochain:
    """Difference map with a + b = r + 1, for (a, b) in {(1,1), (r,1), (1,r)}."""
    p, q, r = c.index.p, c.index.q, c.index.r
    if r == 0 or a + b != r + 1 or not (a == 1 or b == 1):
        raise UnsupportedShape(f"no formula for the difference map ({a},{b}) at r = {r}")
    kind = "11" if a == b == 1 else ("r1" if b == 1 else "1r")
    tgt = GridIndex(p + a, q + b, 0)
    phi = from_exact(fx.phi)

    def fn(rows, fs):
        inner = [row_face_power(fx, x, a) for x in rows]
        twist = fx.rho00(_twist_product(fx, inner))
        w = c(inner[b:], _c_tuple(fx, kind, rows, r))
        return mat_vec(twist, mat_vec(phi, w))

    return GroupCochain(tgt, fn, f"Delta_{a},{b}({c.name})")


def _c_odd_even(fx: MatrixLie2Group, fs: Sequence, arrow: tuple, r: int, n: int, even: bool) -> list:
    g11, h11 = arrow
    hi = fx.H.mul(h11, fx.i(g11))
    head = [fx.act(f, hi) for f in fs[:r - n - 1]]
    middle = [fx.act(f, h11) for f in fs[r - n - 1:r - 2]]
    last = g11 if even else fx.G.mul(fx.act(fs[r - 2], h11), g11)
    return head + [fx.G.inv(g11)] + middle + [last]


def gp_delta_11(fx: MatrixLie2Group, c: GroupCochain) -> GroupCochain:
    """First difference map; for r > 1 it carries the conjugated tuples c_{2n-1}, c_{2n}."""
    p, q, r = c.index.p, c.index.q, c.index.r
    if r == 1:
        return gp_delta_ab(fx, c, 1, 1)
    if r < 1:
        raise UnsupportedShape("the first difference map needs r >= 1")
    tgt = GridIndex(p + 1, q + 1, r - 1)

    def fn(rows, fs):
        inner = [row_face(fx, 0, x) for x in rows[1:]]
        arrows = [first_arrow(fx, x) for x in rows]
        g11, h11 = arrows[0]
        rest = arrows[1:]
        twisted_g11 = _conj(fx, g11, [h for _, h in rest])
        body = mat_vec(mat_inverse(fx.rho01(fx.i(twisted_g11))),
                       c(inner, [fx.act(f, h11) for f in fs] + [g11]))
        for n in range(1, r):
            s = (-1) ** (n + 1)
            odd = c(inner, _c_odd_even(fx, fs, arrows[0], r, n, False))
            even = c(inner, _c_odd_even(fx, fs, arrows[0], r, n, True))
            body = _vadd(body, _vscale(s, [x - y for x, y in zip(odd, even)]))
        if rest:
            acc = rest[0]
            for x in rest[1:]:
                acc = fx.arrow_mul(acc, x)
            body = mat_vec(mat_inverse(fx.rho01(fx.i(acc[0]))), body)
        return body

    return GroupCochain(tgt, fn, f"Delta_1,1({c.name})")


# --- the total differential in degrees <= 2 ---------------------------------------

def gp_nabla_pieces(fx: MatrixLie2Group, c: GroupCochain) -> list:
    """[(sign, image)] making up the total differential of one homogeneous cochain."""
    p, r = c.index.p, c.index.r
    s = (-1) ** p
    out = [(s, gp_d_p(fx, c)), (s * (-1) ** r, gp_d_q(fx, c)), (s, gp_d_r(fx, c))]
    if r >= 1:
        out.append((s, gp_delta_11(fx, c)))
    if r >= 2:
        out.append((s * (-1) ** ((r + 1) * (r + 2)), gp_delta_ab(fx, c, r, 1)))
        out.append((s * (-1) ** (2 * (2 * r + 1)), gp_delta_ab(fx, c, 1, r)))
    return out


def gp_nabla(fx: MatrixLie2Group, parts: Sequence[GroupCochain]) -> dict:
    """Total differential of a sum of homogeneous cochains, grouped by target index."""
    acc: dict = {}
    for c in parts:
        for sign, img in gp_nabla_pieces(fx, c):
            acc.setdefault(img.index, []).append((sign, img))
    out = {}
    for idx, terms in acc.items():
        d = _out_dim(fx, idx.r)

        def fn(rows, fs, terms=terms, d=d):
            v = [0] * d
            for sign, img in terms:
                v = _vadd(v, _vscale(sign, img(rows, fs)))
            return v

        out[idx] = GroupCochain(idx, fn, "nabla")
    return out


# --- the van Est map ---------------------------------------------------------------

def _nerve_exp(fx: MatrixLie2Group, p: int, flat: Sequence, eps) -> Row:
    n = fx.G.dim
    gs = tuple(fx.G.exp1(eps, flat[j * n:(j + 1) * n]) for j in range(p))
    return Row(gs, fx.H.exp1(eps, flat[p * n:]))


def _basis_flat(dim: int, i: int) -> list:
    return [1 if k == i else 0 for k in range(dim)]


def van_est_value(fx: MatrixLie2Group, c: GroupCochain, xi_flats: Sequence, zs: Sequence,
                  budget: int = DEFAULT_JET_BUDGET) -> list:
    """(Phi c)(xi; z) for explicit algebra arguments, via one generator per slot."""
    p, q, r = c.index.p, c.index.q, c.index.r
    if q + r > budget:
        raise JetBudgetExceeded(f"{q + r} differentiation slots exceed the jet budget {budget}")
    d = _out_dim(fx, r)
    top = (1 << (q + r)) - 1
    out = [0.0] * d
    for sigma in itertools.permutations(range(q)):
        ssign = permutation_sign(sigma)
        rows = [_nerve_exp(fx, p, xi_flats[sigma[k]], JetScalar.generator(k)) for k in range(q)]
        for rho in itertools.permutations(range(r)):
            sign = ssign * permutation_sign(rho)
            fs = [fx.G.exp1(JetScalar.generator(q + j), zs[rho[j]]) for j in range(r)]
            val = c(rows, fs)
            for k, v in enumerate(val):
                coef = v.coefficient_mask(top) if isinstance(v, JetScalar) else (v if top == 0 else 0)
                if coef:
                    out[k] += sign * float(coef)
    return out


def van_est(fx: MatrixLie2Group, c: GroupCochain, cm: CrossedModuleLA | None = None,
            budget: int = DEFAULT_JET_BUDGET) -> Cochain:
    """Coordinates of Phi c on the algebra-side grid basis (float entries)."""
    p, q, r = c.index.p, c.index.q, c.index.r
    if q + r > budget:
        raise JetBudgetExceeded(f"{q + r} differentiation slots exceed the jet budget {budget}")
    nd = fx.G.dim * p + fx.H.dim
    coords = []
    for A in enumerate_combos(nd, q):
        xis = [_basis_flat(nd, a) for a in A]
        for B in enumerate_combos(fx.G.dim, r):
            zs = [_basis_flat(fx.G.dim, b) for b in B]
            coords.extend(van_est_value(fx, c, xis, zs, budget))
    return Cochain(c.index, tuple(coords))


# --- derived Lie data ------------------------------------------------------------------

def _eps_coeff(m: list, mask: int) -> list:
    return [[(x.coefficient_mask(mask) if isinstance(x, JetScalar) else (x if mask == 0 else 0)) for x in row]
            for row in m]


def _tangent_coords(chart: GroupChart, m: list) -> list:
    n = len(chart.basis)
    if n == 0:
        return []
    cols = [[Fraction(v) for row in b for v in row] for b in chart.basis]
    x = solve(Matrix.from_columns(cols, len(cols[0])), [Fraction(v) for row in m for v in row])
    if x is None:
        raise ValueError("tangent vector lies outside the algebra span")
    return x


def _exact_jet(k: int):
    return JetScalar({0: Fraction(0), 1 << k: Fraction(1)})


def derived_lie_data(fx: MatrixLie2Group) -> tuple:
    """(crossed module, coefficients, representation) by exact jet differentiation."""
    G, H = fx.G, fx.H
    e0, e1 = _exact_jet(0), _exact_jet(1)

    def bracket(chart: GroupChart, a: int, b: int) -> list:
        x = chart.exp1(e0, _basis_flat(chart.dim, a))
        y = chart.exp1(e1, _basis_flat(chart.dim, b))
        comm = chart.mul(chart.mul(x, y), chart.mul(chart.inv(x), chart.inv(y)))
        return _tangent_coords(chart, _eps_coeff(comm, 3))

    def algebra(chart):
        tr = [(a, b, k, v) for a in range(chart.dim) for b in range(chart.dim)
              for k, v in enumerate(bracket(chart, a, b)) if v]
        return LieAlgebra.from_triples(chart.dim, tr)

    g, h = algebra(G), algebra(H)
    mu_cols = [_tangent_coords(H, _eps_coeff(fx.i(G.exp1(e0, _basis_flat(G.dim, a))), 1)) for a in range(G.dim)]
    mu = Matrix.from_columns(mu_cols, H.dim) if G.dim else Matrix.zeros(H.dim, 0)
    act = []
    for y in range(H.dim):
        for x in range(G.dim):
            m = fx.act(G.exp1(e0, _basis_flat(G.dim, x)), H.exp1(e1, _basis_flat(H.dim, y)))
            act += [(y, x, k, -v) for k, v in enumerate(_tangent_coords(G, _eps_coeff(m, 3))) if v]
    cm = CrossedModuleLA.build(g, h, mu, act)
    ts = TwoVectorSpace(fx.dimW, fx.dimV, fx.phi)

    def lin(fn, chart, a, rows, cols):
        m = _eps_coeff(fn(chart.exp1(e0, _basis_flat(chart.dim, a))), 1)
        return Matrix.from_rows([[Fraction(v) for v in row] for row in m], cols) if rows else Matrix.zeros(0, cols)

    rep = Rep2(tuple(lin(fx.rho01, H, a, fx.dimW, fx.dimW) for a in range(H.dim)),
               tuple(lin(fx.rho00, H, a, fx.dimV, fx.dimV) for a in range(H.dim)),
               tuple(lin(fx.rho1, G, a, fx.dimW, fx.dimV) for a in range(G.dim)),
               fx.dimW, fx.dimV)
    return cm, ts, rep


def derived_grid(fx: MatrixLie2Group, max_degree: int = 6) -> Grid:
    cm, ts, rep = derived_lie_data(fx)
    return Grid(cm, ts, rep, GridOptions(max_degree=max_degree))


def audit_fixture(fx: MatrixLie2Group, samples: int = 5, seed: int = 0, tol: float = 1e-12) -> dict:
    """Group axioms on sampled float points, plus the exact axioms of the derived algebra."""
    rng = random.Random(seed)
    worst = {"homomorphism": 0.0, "equivariance": 0.0, "Peiffer": 0.0, "action-homomorphism": 0.0,
             "rep-identities": 0.0}

    def dev(a, b):
        return max((abs(x - y) for ra, rb in zip(a, b) for x, y in zip(ra, rb)), default=0.0)

    for _ in range(samples):
        g1, g2 = sample_element(fx.G, rng), sample_element(fx.G, rng)
        h1, h2 = sample_element(fx.H, rng), sample_element(fx.H, rng)
        worst["homomorphism"] = max(worst["homomorphism"],
                                    dev(fx.i(fx.G.mul(g1, g2)), fx.H.mul(fx.i(g1), fx.i(g2))))
        worst["equivariance"] = max(worst["equivariance"],
                                    dev(fx.i(fx.act(g1, h1)), fx.H.mul(fx.H.mul(fx.H.inv(h1), fx.i(g1)), h1)))
        worst["Peiffer"] = max(worst["Peiffer"], dev(fx.act(g1, fx.i(g2)),
                                                   fx.G.mul(fx.G.mul(fx.G.inv(g2), g1), g2)))
        worst["action-homomorphism"] = max(worst["action-homomorphism"],
                                           dev(fx.act(g1, fx.H.mul(h1, h2)), fx.act(fx.act(g1, h1), h2)),
                                           dev(fx.act(fx.G.mul(g1, g2), h1),
                                               fx.G.mul(fx.act(g1, h1), fx.act(g2, h1))))
        phi = from_exact(fx.phi)
        r1 = fx.rho1(g1)
        checks = [
            dev(fx.rho00(fx.i(g1)), mat_add(mat_identity(fx.dimV), mat_mul(phi, r1))),
            dev(fx.rho01(fx.i(g1)), mat_add(mat_identity(fx.dimW), mat_mul(r1, phi))),
            dev(fx.rho1(fx.act(g1, h1)), mat_mul(mat_mul(mat_inverse(fx.rho01(h1)), r1), fx.rho00(h1))),
            dev(mat_mul(phi, fx.rho01(h1)), mat_mul(fx.rho00(h1), phi)),
            dev(fx.rho1(fx.G.mul(g1, g2)), mat_add(mat_add(r1, fx.rho1(g2)), mat_mul(mat_mul(r1, phi), fx.rho1(g2)))),
        ]
        worst["rep-identities"] = max(worst["rep-identities"], *checks) if checks else worst["rep-identities"]
    cm, ts, rep = derived_lie_data(fx)
    report = {k: v <= tol for k, v in worst.items()}
    report["derived crossed module"] = check_crossed_module(cm).passed
    report["derived representation"] = check_rep2(cm, ts, rep).passed
    return report


# --- fixtures ---------------------------------------------------------------------

def _unit_vector_matrix(n: int, i: int, j: int) -> list:
    m = [[0] * n for _ in range(n)]
    m[i][j] = 1
    return m


def abelian_fixture(n: int = 2) -> MatrixLie2Group:
    """G = H = (R^n, +) as unipotent matrices, i = id, trivial action, and a unipotent
    representation on W = V = R^2 with phi = id."""
    if not 1 <= n <= 3:
        raise ValueError("abelian fixture supports 1 <= n <= 3")
    weights = [1, 2, -1][:n]
    basis = [_unit_vector_matrix(n + 1, 0, k + 1) for k in range(n)]
    G = matrix_group(n + 1, basis)
    H = matrix_group(n + 1, basis)

    def lin(m):
        return sum((w * m[0][k + 1] for k, w in enumerate(weights)), 0)

    def uni(m):
        return [[1, lin(m)], [0, 1]]

    return MatrixLie2Group(
        name=f"abelian-{n}", G=G, H=H,
        i=lambda g: [list(r) for r in g],
        act=lambda g, h: [list(r) for r in g],
        rho01=uni, rho00=uni,
        rho1=lambda g: [[0, lin(g)], [0, 0]],
        dimW=2, dimV=2, phi=Matrix.identity(2))


def glphi_fixture(dimW: int = 1, dimV: int = 1, phi: Matrix | None = None) -> MatrixLie2Group:
    """GL(phi): Whitehead group A1 (.) A2 = A1 + A2 + A1 phi A2 over GL(phi)_0, tautological action."""
    phi = Matrix.identity(1) if phi is None and dimW == dimV == 1 else phi
    mod = glphi_module(TwoVectorSpace(dimW, dimV, phi))
    ph = from_exact(phi)
    W, V = dimW, dimV
    gbasis = []
    for k in range(W * V):
        m = [[0] * V for _ in range(W)]
        m[k // V][k % V] = 1
        gbasis.append(m)
    n = W + V

    def block(F, f):
        m = mat_zeros(n, n)
        for a in range(W):
            for b in range(W):
                m[a][b] = F[a][b]
        for a in range(V):
            for b in range(V):
                m[W + a][W + b] = f[a][b]
        return m

    hbasis = [block(from_exact(F), from_exact(f)) for F, f in mod.h_basis]

    def wmul(a, b):
        return mat_add(mat_add(a, b), mat_mul(mat_mul(a, ph), b))

    def winv(a):
        return mat_scale(-1, mat_mul(a, mat_inverse(mat_add(mat_identity(V), mat_mul(ph, a)))))

    G = GroupChart(tuple(tuple(0 for _ in range(V)) for _ in range(W)),
                   tuple(tuple(tuple(r) for r in b) for b in gbasis), wmul, winv)
    H = matrix_group(n, hbasis)

    def Fpart(h):
        return [row[:W] for row in h[:W]]

    def fpart(h):
        return [row[W:] for row in h[W:]]

    def i_map(a):
        return block(mat_add(mat_identity(W), mat_mul(a, ph)), mat_add(mat_identity(V), mat_mul(ph, a)))

    return MatrixLie2Group(
        name=f"glphi-{W}-{V}", G=G, H=H, i=i_map,
        act=lambda a, h: mat_mul(mat_mul(mat_inverse(Fpart(h)), a), fpart(h)),
        rho01=Fpart, rho00=fpart, rho1=lambda a: [list(r) for r in a],
        dimW=W, dimV=V, phi=phi)


def heisenberg_fixture() -> MatrixLie2Group:
    """G = H = 3x3 unitriangular matrices, i = id, conjugation action, trivial rep on R --id--> R."""
    basis = [_unit_vector_matrix(3, 0, 1), _unit_vector_matrix(3, 1, 2), _unit_vector_matrix(3, 0, 2)]
    G = matrix_group(3, basis)
    H = matrix_group(3, basis)
    one = lambda _m: [[1]]
    return MatrixLie2Group(
        name="heis", G=G, H=H, i=lambda g: [list(r) for r in g],
        act=lambda g, h: mat_mul(mat_mul(mat_inverse(h), g), h),
        rho01=one, rho00=one, rho1=lambda _g: [[0]],
        dimW=1, dimV=1, phi=Matrix.identity(1))


def unit_plane_fixture() -> MatrixLie2Group:
    """The unit 2-group of H = (R^2, +): G trivial, W = 0, V = R with trivial action."""
    G = matrix_group(1, [])
    H = matrix_group(3, [_unit_vector_matrix(3, 0, 1), _unit_vector_matrix(3, 0, 2)])
    return MatrixLie2Group(
        name="unit-R2", G=G, H=H, i=lambda g: mat_identity(3),
        act=lambda g, h: [list(r) for r in g],
        rho01=lambda h: [], rho00=lambda h: [[1]], rho1=lambda g: [],
        dimW=0, dimV=1, phi=Matrix.zeros(1, 0))


FIXTURES = {
    "abelian-1": lambda: abelian_fixture(1),
    "abelian-2": lambda: abelian_fixture(2),
    "abelian-3": lambda: abelian_fixture(3),
    "glphi-1-1": lambda: glphi_fixture(),
    "heis": heisenberg_fixture,
    "unit-R2": unit_plane_fixture,
}


def fixture(name: str) -> MatrixLie2Group:
    if name == "abelian-n":
        name = "abelian-2"
    try:
        return FIXTURES[name]()
    except KeyError:
        raise ValueError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None


# --- sampling and the polynomial cochain panel -----------------------------------

def sample_element(chart: GroupChart, rng: random.Random, scale: float = 0.5) -> list:
    return mat_add(chart.unit_list(), chart.tangent([rng.uniform(-scale, scale) for _ in range(chart.dim)]))


def sample_row(fx: MatrixLie2Group, p: int, rng: random.Random) -> Row:
    return Row(tuple(sample_element(fx.G, rng) for _ in range(p)), sample_element(fx.H, rng))


@dataclass(frozen=True)
class PolynomialCochain:
    """Normalized polynomial cochain: per output component, a product of one linear form per
    argument slot (each vanishing at the unit) times a polynomial in all variables."""
    index: GridIndex
    slot_forms: tuple   # [component][slot] -> tuple of (variable, coefficient)
    extra: tuple        # [component] -> tuple of (coefficient, tuple of variables)

    def as_cochain(self, fx: MatrixLie2Group) -> GroupCochain:
        Gs, Hs = fx.G.support(), fx.H.support()
        Gu, Hu = fx.G.unit, fx.H.unit

        def slot_vars(rows, fs):
            out = []
            for row in rows:
                v = []
                for g in row.gs:
                    v += [g[i][j] - Gu[i][j] for i, j in Gs]
                v += [row.h[i][j] - Hu[i][j] for i, j in Hs]
                out.append(v)
            for f in fs:
                out.append([f[i][j] - Gu[i][j] for i, j in Gs])
            return out

        forms, extra = self.slot_forms, self.extra

        def fn(rows, fs):
            slots = slot_vars(rows, fs)
            allv = [x for s in slots for x in s]
            out = []
            for comp in range(len(forms)):
                val = 1
                for s, form in zip(slots, forms[comp]):
                    acc = 0
                    for var, coef in form:
                        acc = acc + coef * s[var]
                    val = val * acc
                poly = 0
                for coef, mono in extra[comp]:
                    t = coef
                    for var in mono:
                        t = t * allv[var]
                    poly = poly + t
                out.append(val * poly)
            return out

        return GroupCochain(self.index, fn, "poly")


def slot_sizes(fx: MatrixLie2Group, index: GridIndex) -> list:
    row = len(fx.G.support()) * index.p + len(fx.H.support())
    return [row] * index.q + [len(fx.G.support())] * index.r


def random_polynomial_cochain(fx: MatrixLie2Group, index: GridIndex, rng: random.Random,
                              max_degree: int = 3) -> PolynomialCochain:
    sizes = slot_sizes(fx, index)
    nvars = sum(sizes)
    d = _out_dim(fx, index.r)
    nslots = len(sizes)
    free = max_degree - nslots
    forms, extra = [], []
    for _ in range(d):
        fs = []
        for size in sizes:
            form = tuple((v, c) for v in range(size) if (c := rng.randint(-2, 2)))
            if not form and size:
                form = ((rng.randrange(size), 1),)
            fs.append(form)
        forms.append(tuple(fs))
        terms = [(rng.choice([-2, -1, 1, 2]), ())]
        for deg in range(1, max(free, 0) + 1):
            for _ in range(2):
                if nvars:
                    terms.append((rng.randint(-2, 2), tuple(rng.randrange(nvars) for _ in range(deg))))
        extra.append(tuple(t for t in terms if t[0]))
    return PolynomialCochain(index, tuple(forms), tuple(extra))


# --- commutation identities ---------------------------------------------------------

IDENTITIES = ("delta'", "delta_(1)", "delta", "partial", "Delta_1,1", "Delta_r,1", "Delta_1,r")


def identity_shapes(max_total_degree: int = 2, max_r: int = 3) -> dict:
    """Source shapes (p, q, r) exercised for each identity."""
    low = [GridIndex(p, q, r) for n in range(max_total_degree + 1)
           for p in range(n + 1) for q in range(n + 1 - p) for r in [n - p - q]]
    return {
        "delta'": [s for s in low if s.r == 0],
        "delta_(1)": [s for s in low if s.r > 0],
        "delta": low,
        "partial": low,
        "Delta_1,1": [s for s in low if s.r >= 1],
        "Delta_r,1": [GridIndex(0, 0, r) for r in range(2, max_r + 1)] +
                     [s for s in low if s.r >= 2 and s.q + s.p > 0],
        "Delta_1,r": [GridIndex(0, 0, r) for r in range(2, max_r + 1)] +
                     [s for s in low if s.r >= 2 and s.q + s.p > 0],
    }


def _float_apply(m: Matrix, coords: Sequence) -> list:
    out = []
    for i in range(m.rows):
        acc = 0.0
        for j, x in enumerate(m.row(i)):
            if x:
                acc += float(x) * coords[j]
        out.append(acc)
    return out


# The algebra-side Delta_k feeds x^0 into the first slots and numbers the rows of Xi
# from 0, while the group-side Delta_{1,1} (r > 1) feeds g_11 into the last slot and the
# customary Delta_{1,r} sign numbers the rows from 1.  AS_DEFINED relates the maps
# exactly as defined; AS_STATED uses the customary uniform signs (+1 and (-1)^(r(r+1)/2)).
AS_DEFINED = "as-defined"
AS_STATED = "as-stated"
CONVENTIONS = (AS_DEFINED, AS_STATED)


def difference_sign(name: str, r: int, convention: str = AS_DEFINED) -> int:
    """Sign s with Phi(Delta_group omega) = s * Delta_algebra(Phi omega)."""
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown sign convention {convention!r}")
    if name == "Delta_1,1":
        return (-1) ** (r - 1) if convention == AS_DEFINED else 1
    if name == "Delta_1,r":
        return (-1) ** (r * (r - 1) // 2) if convention == AS_DEFINED else (-1) ** (r * (r + 1) // 2)
    return 1


def identity_sides(fx: MatrixLie2Group, grid: Grid, name: str, c: GroupCochain,
                   convention: str = AS_DEFINED) -> tuple:
    """(Phi(op_group c), sign * op_algebra(Phi c)) as float coordinate lists."""
    p, q, r = c.index.p, c.index.q, c.index.r
    pc = van_est(fx, c).coords
    if name == "delta'":
        lhs = van_est(fx, gp_delta_prime(fx, c)).coords
        rhs = _float_apply(grid.d_r_matrix(p, q, 0), pc)
    elif name == "delta_(1)":
        lhs = van_est(fx, gp_d_r(fx, c)).coords
        rhs = _float_apply(grid.d_r_matrix(p, q, r), pc)
    elif name == "delta":
        lhs = van_est(fx, gp_d_q(fx, c)).coords
        rhs = _float_apply(grid.d_q_matrix(p, q, r), pc)
    elif name == "partial":
        lhs = van_est(fx, gp_d_p(fx, c)).coords
        rhs = _float_apply(grid.d_p_matrix(p, q, r), pc)
    elif name == "Delta_1,1":
        lhs = van_est(fx, gp_delta_11(fx, c)).coords
        sgn = difference_sign(name, r, convention)
        rhs = [sgn * v for v in _float_apply(grid.delta_k_matrix(p, q, r, 1), pc)]
    elif name == "Delta_r,1":
        lhs = van_est(fx, gp_delta_ab(fx, c, r, 1)).coords
        rhs = [0.0] * len(lhs)
    elif name == "Delta_1,r":
        lhs = van_est(fx, gp_delta_ab(fx, c, 1, r)).coords
        sgn = difference_sign(name, r, convention)
        rhs = [sgn * v for v in _float_apply(grid.delta_k_matrix(p, q, r, r), pc)]
    else:
        raise ValueError(f"unknown identity {name!r}")
    return list(lhs), list(rhs)


@dataclass(frozen=True)
class IdentityRow:
    identity: str
    shape: GridIndex
    cochains: int
    max_deviation: float
    max_magnitude: float

    def passed(self, tol: float) -> bool:
        return self.max_deviation <= tol


@dataclass(frozen=True)
class CommutationReport:
    fixture: str
    tolerance: float
    rows: tuple
    convention: str = AS_DEFINED

    @property
    def passed(self) -> bool:
        return all(r.passed(self.tolerance) for r in self.rows)

    def per_identity(self) -> dict:
        out = {}
        for r in self.rows:
            out[r.identity] = max(out.get(r.identity, 0.0), r.max_deviation)
        return out

    def lines(self) -> list:
        out = [f"fixture {self.fixture}  tolerance {self.tolerance:.0e}  signs {self.convention}",
               "identity    shape      cochains  max-deviation  max-magnitude  status"]
        for r in self.rows:
            status = "pass" if r.passed(self.tolerance) else "FAIL"
            out.append(f"{r.identity:<11} {str(tuple(r.shape.as_list())):<10} {r.cochains:>8}  "
                       f"{r.max_deviation:13.3e}  {r.max_magnitude:13.3e}  {status}")
        return out


def commutation_report(fx: MatrixLie2Group, max_total_degree: int = 2, max_r: int = 3,
                       cochains_per_shape: int = 3, tolerance: float = DEFAULT_TOLERANCE,
                       seed: int = 0, identities: Sequence[str] = IDENTITIES,
                       grid: Grid | None = None, convention: str = AS_DEFINED) -> CommutationReport:
    grid = grid or derived_grid(fx)
    shapes = identity_shapes(max_total_degree, max_r)
    rows = []
    for name in identities:
        for shape in shapes[name]:
            rng = random.Random(f"{seed}-{fx.name}-{name}-{shape.as_list()}")
            panel = [zero_cochain(fx, shape)]
            panel += [random_polynomial_cochain(fx, shape, rng).as_cochain(fx) for _ in range(cochains_per_shape)]
            dev = mag = 0.0
            for c in panel:
                lhs, rhs = identity_sides(fx, grid, name, c, convention)
                dev = max([dev] + [abs(a - b) for a, b in zip(lhs, rhs)])
                mag = max([mag] + [abs(a) for a in lhs] + [abs(b) for b in rhs])
            rows.append(IdentityRow(name, shape, len(panel), dev, mag))
    return CommutationReport(fx.name, tolerance, tuple(rows), convention)


# --- the assembled chain map ---------------------------------------------------------

def vanest_degree_sign(index: GridIndex) -> int:
    """Sign making s * Phi intertwine the two total differentials."""
    p, q, r = index.p, index.q, index.r
    return (-1) ** (p * (p - 1) // 2 + q * (q - 1) // 2 + q * r)


@dataclass(frozen=True)
class ChainMapRow:
    source: GridIndex
    target: GridIndex
    max_deviation: float
    max_magnitude: float


@dataclass(frozen=True)
class ChainMapReport:
    fixture: str
    tolerance: float
    rows: tuple

    @property
    def passed(self) -> bool:
        return all(r.max_deviation <= self.tolerance for r in self.rows)

    def lines(self) -> list:
        out = [f"fixture {self.fixture}  chain map s*Phi, tolerance {self.tolerance:.0e}",
               "source     target     max-deviation  max-magnitude  status"]
        for r in self.rows:
            status = "pass" if r.max_deviation <= self.tolerance else "FAIL"
            out.append(f"{str(tuple(r.source.as_list())):<10} {str(tuple(r.target.as_list())):<10} "
                       f"{r.max_deviation:13.3e}  {r.max_magnitude:13.3e}  {status}")
        return out


def chain_map_report(fx: MatrixLie2Group, max_source_degree: int = 1, cochains_per_shape: int = 2,
                     tolerance: float = DEFAULT_TOLERANCE, seed: int = 0,
                     grid: Grid | None = None) -> ChainMapReport:
    """s * Phi applied after the group total differential versus before the algebra one."""
    grid = grid or derived_grid(fx)
    rows = []
    for n in range(max_source_degree + 1):
        blocks = grid.nabla_blocks(n)
        for src in grid.indices(n):
            rng = random.Random(f"{seed}-{fx.name}-chain-{src.as_list()}")
            panel = [random_polynomial_cochain(fx, src, rng).as_cochain(fx) for _ in range(cochains_per_shape)]
            per_target: dict = {}
            for c in panel:
                pc = [vanest_degree_sign(src) * v for v in van_est(fx, c).coords]
                images = gp_nabla(fx, [c])
                for tgt in grid.indices(n + 1):
                    if tgt in images:
                        lhs = [vanest_degree_sign(tgt) * v for v in van_est(fx, images[tgt]).coords]
                    else:
                        lhs = [0.0] * grid.space(tgt.p, tgt.q, tgt.r).dim
                    block = blocks.get((src, tgt))
                    rhs = _float_apply(block, pc) if block is not None else [0.0] * len(lhs)
                    dev, mag = per_target.get(tgt, (0.0, 0.0))
                    per_target[tgt] = (max([dev] + [abs(a - b) for a, b in zip(lhs, rhs)]),
                                       max([mag] + [abs(a) for a in lhs]))
            for tgt, (dev, mag) in sorted(per_target.items(), key=lambda kv: kv[0].as_list()):
                rows.append(ChainMapRow(src, tgt, dev, mag))
    return ChainMapReport(fx.name, tolerance, tuple(rows))


# --- linearization of a group 2-cocycle ---------------------------------------------

GROUP_COMPONENTS = (GridIndex(1, 1, 0), GridIndex(0, 2, 0), GridIndex(0, 1, 1), GridIndex(0, 0, 2))


def group_cocycle_defect(fx: MatrixLie2Group, parts: Sequence[GroupCochain], samples: int = 8,
                         seed: int = 0) -> float:
    """Largest value of the group-side total differential at sampled points."""
    rng = random.Random(seed)
    worst = 0.0
    for idx, c in sorted(gp_nabla(fx, parts).items(), key=lambda kv: kv[0].as_list()):
        for _ in range(samples):
            rows = [sample_row(fx, idx.p, rng) for _ in range(idx.q)]
            fs = [sample_element(fx.G, rng) for _ in range(idx.r)]
            worst = max([worst] + [abs(float(v)) for v in c(rows, fs)])
    return worst


def rationalize(x: float, tol: float = DEFAULT_TOLERANCE, max_den: int = 10 ** 4) -> Fraction:
    f = Fraction(x).limit_denominator(max_den)
    if abs(float(f) - x) > tol:
        raise RationalizationFailed(f"{x!r} is not within {tol} of a rational with denominator <= {max_den}")
    return f


def linearize_cocycle(fx: MatrixLie2Group, parts: Sequence[GroupCochain | None], grid: Grid | None = None,
                      tolerance: float = DEFAULT_TOLERANCE, samples: int = 8) -> Cocycle2:
    """Signed van Est image s * Phi of a group 2-cocycle (phi, omega0, alpha, omega1), see vanest_degree_sign."""
    grid = grid or derived_grid(fx)
    comps = [c if c is not None else zero_cochain(fx, idx) for c, idx in zip(parts, GROUP_COMPONENTS)]
    for c, idx in zip(comps, GROUP_COMPONENTS):
        if c.index != idx:
            raise ArityMismatch(f"component at {c.index.as_list()} where {idx.as_list()} was expected")
    defect = group_cocycle_defect(fx, comps, samples)
    if defect > tolerance:
        raise NotAGroupCocycle(f"group total differential reaches {defect:.3e}")
    exact = [Cochain(idx, tuple(rationalize(vanest_degree_sign(idx) * v, tolerance) for v in van_est(fx, c).coords))
             for c, idx in zip(comps, GROUP_COMPONENTS)]
    z = Cocycle2(*exact)
    if not is_cocycle(grid, z.total(grid)):
        raise NotAGroupCocycle("linearized tuple fails the algebra-side cocycle condition")
    return z


def bilinear_plane_cocycle(fx: MatrixLie2Group | None = None) -> list:
    """omega0(a, b) = a_1 b_2 on H = R^2, all other components zero."""
    fx = fx or unit_plane_fixture()
    w0 = GroupCochain(GridIndex(0, 2, 0), lambda rows, fs: [rows[0].h[0][1] * rows[1].h[0][2]], "a1*b2")
    return [None, w0, None, None]


# --- finite-difference oracle for the jet ring ---------------------------------------

def _random_scalar_function(rng: random.Random, nvars: int) -> Callable:
    """A random composition of ring operations (with one guarded division)."""
    terms = []
    for _ in range(rng.randint(1, 4)):
        coef = rng.uniform(-2, 2)
        mono = [rng.randrange(nvars) for _ in range(rng.randint(0, 3))]
        terms.append((coef, mono))
    den = [(rng.uniform(-0.5, 0.5), rng.randrange(nvars)) for _ in range(2)]

    def f(xs):
        num = 0
        for coef, mono in terms:
            t = coef
            for v in mono:
                t = t * xs[v]
            num = num + t
        d = 2
        for coef, v in den:
            d = d + coef * xs[v] * xs[v]
        return num / d

    return f


def jet_mixed_partial(f: Callable, point: Sequence[float], directions: Sequence[Sequence[float]]) -> float:
    """d/dt_k ... d/dt_1 f(point + sum t_j dir_j) at 0, by jets."""
    m = len(directions)
    xs = []
    for i, x0 in enumerate(point):
        terms = {0: x0}
        for j, d in enumerate(directions):
            if d[i]:
                terms[1 << j] = d[i]
        xs.append(JetScalar(terms))
    v = f(xs)
    return float(v.coefficient_mask((1 << m) - 1)) if isinstance(v, JetScalar) else 0.0


def fd_mixed_partial(f: Callable, point: Sequence[float], directions: Sequence[Sequence[float]],
                     step: float = 1e-4) -> float:
    """Central differences applied once per direction."""
    m = len(directions)
    total = 0.0
    for signs in itertools.product((1, -1), repeat=m):
        x = list(point)
        for s, d in zip(signs, directions):
            x = [a + s * step * b for a, b in zip(x, d)]
        total += math.prod(signs) * f(x)
    return total / (2 * step) ** m


@dataclass(frozen=True)
class JetOracleReport:
    samples: int
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def jet_oracle(samples: int = 500, seed: int = 0, tolerance: float = 1e-6, step: float = 1e-4) -> JetOracleReport:
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(samples):
        nvars = rng.randint(1, 3)
        f = _random_scalar_function(rng, nvars)
        point = [rng.uniform(-1, 1) for _ in range(nvars)]
        order = rng.randint(1, 2)
        dirs = [[rng.uniform(-1, 1) for _ in range(nvars)] for _ in range(order)]
        worst = max(worst, abs(jet_mixed_partial(f, point, dirs) - fd_mixed_partial(f, point, dirs, step)))
    return JetOracleReport(samples, worst, tolerance)
