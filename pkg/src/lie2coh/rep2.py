"""gl(phi), GL(phi)_1, and representations of crossed modules on W -> V."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactla import (DimensionMismatch, Matrix, alternating_expansion, enumerate_combos,
                      inverse, kernel_basis, solve)
from .liecore import AxiomReport, AxiomResult, CrossedModuleLA, LieAlgebra, TwoVectorSpace, _first_violation


class NotInvertible(ArithmeticError):
    pass


class SeriesNotTerminating(ArithmeticError):
    pass


def _combine(mats: Sequence[Matrix], coeffs: Sequence, rows: int, cols: int) -> Matrix:
    out = Matrix.zeros(rows, cols)
    for c, m in zip(coeffs, mats):
        if c:
            out = out + m.scale(c)
    return out


@dataclass(frozen=True)
class Rep2:
    """rho01[y]: End(W) and rho00[y]: End(V) per h-basis y; rho1[x]: Hom(V, W) per g-basis x."""
    rho01: tuple
    rho00: tuple
    rho1: tuple
    dimW: int
    dimV: int

    def r01(self, y: Sequence) -> Matrix:
        return _combine(self.rho01, y, self.dimW, self.dimW)

    def r00(self, y: Sequence) -> Matrix:
        return _combine(self.rho00, y, self.dimV, self.dimV)

    def r1(self, x: Sequence) -> Matrix:
        return _combine(self.rho1, x, self.dimW, self.dimV)

    @classmethod
    def zero(cls, cm: CrossedModuleLA, ts: TwoVectorSpace) -> "Rep2":
        return cls(tuple(Matrix.zeros(ts.dimW, ts.dimW) for _ in range(cm.h.dim)),
                   tuple(Matrix.zeros(ts.dimV, ts.dimV) for _ in range(cm.h.dim)),
                   tuple(Matrix.zeros(ts.dimW, ts.dimV) for _ in range(cm.g.dim)),
                   ts.dimW, ts.dimV)

    @classmethod
    def from_triples(cls, cm: CrossedModuleLA, ts: TwoVectorSpace, rho01=(), rho00=(), rho1=()) -> "Rep2":
        """Sparse entries [basis, row, col, value] for each of the three tensors."""
        def build(n, rows, cols, triples):
            data = [[[Fraction(0)] * cols for _ in range(rows)] for _ in range(n)]
            for b, i, j, v in triples:
                data[b][i][j] += Fraction(v)
            return tuple(Matrix.from_rows(d, cols) if rows else Matrix.zeros(0, cols) for d in data)
        return cls(build(cm.h.dim, ts.dimW, ts.dimW, rho01), build(cm.h.dim, ts.dimV, ts.dimV, rho00),
                   build(cm.g.dim, ts.dimW, ts.dimV, rho1), ts.dimW, ts.dimV)

    def triples(self) -> dict:
        def flat(mats):
            return [(b, i, j, m[i, j]) for b, m in enumerate(mats)
                    for i in range(m.rows) for j in range(m.cols) if m[i, j]]
        return {"rho01": flat(self.rho01), "rho00": flat(self.rho00), "rho1": flat(self.rho1)}


@dataclass(frozen=True)
class GLphiModule:
    """gl(phi) together with the chart used for its h-part."""
    cm: CrossedModuleLA
    ts: TwoVectorSpace
    h_basis: tuple  # each entry is the pair (F, f) of matrices

    def g_matrix(self, x: Sequence) -> Matrix:
        """Coordinates in g -> the dimW x dimV matrix they represent (row-major basis)."""
        return Matrix(self.ts.dimW, self.ts.dimV, tuple(Fraction(v) for v in x))

    def h_pair(self, y: Sequence) -> tuple:
        W, V = self.ts.dimW, self.ts.dimV
        F, f = Matrix.zeros(W, W), Matrix.zeros(V, V)
        for c, (Fb, fb) in zip(y, self.h_basis):
            if c:
                F, f = F + Fb.scale(c), f + fb.scale(c)
        return F, f


def glphi_module(ts: TwoVectorSpace) -> GLphiModule:
    W, V, phi = ts.dimW, ts.dimV, ts.phi
    # gl(phi)_0 is the kernel of (F, f) |-> phi F - f phi
    nF, nf = W * W, V * V
    cols = []
    for idx in range(nF + nf):
        F = Matrix(W, W, tuple(Fraction(int(k == idx)) for k in range(nF)))
        f = Matrix(V, V, tuple(Fraction(int(k + nF == idx)) for k in range(nf)))
        cols.append(list((phi @ F - f @ phi).entries))
    cond = Matrix.from_columns(cols, V * W)
    kb = kernel_basis(cond)
    h_basis = tuple((Matrix(W, W, tuple(v[:nF])), Matrix(V, V, tuple(v[nF:]))) for v in kb)
    hdim = len(h_basis)
    chart = Matrix.from_columns(kb, nF + nf)

    def h_coords(F: Matrix, f: Matrix) -> list:
        x = solve(chart, list(F.entries) + list(f.entries))
        if x is None:
            raise ValueError("pair does not intertwine phi")
        return x

    gdim = W * V

    def gmat(i):
        return Matrix(W, V, tuple(Fraction(int(k == i)) for k in range(gdim)))

    g_tr, h_tr, mu_cols, act_tr = [], [], [], []
    for i, j in itertools.product(range(gdim), repeat=2):
        A1, A2 = gmat(i), gmat(j)
        br = A1 @ phi @ A2 - A2 @ phi @ A1
        g_tr += [(i, j, k, v) for k, v in enumerate(br.entries) if v]
    for a, b in itertools.product(range(hdim), repeat=2):
        (F1, f1), (F2, f2) = h_basis[a], h_basis[b]
        c = h_coords(F1 @ F2 - F2 @ F1, f1 @ f2 - f2 @ f1)
        h_tr += [(a, b, k, v) for k, v in enumerate(c) if v]
    for i in range(gdim):
        A = gmat(i)
        mu_cols.append(h_coords(A @ phi, phi @ A))
    for a in range(hdim):
        F, f = h_basis[a]
        for i in range(gdim):
            A = gmat(i)
            act_tr += [(a, i, k, v) for k, v in enumerate((F @ A - A @ f).entries) if v]
    g = LieAlgebra.from_triples(gdim, g_tr)
    h = LieAlgebra.from_triples(hdim, h_tr)
    mu = Matrix.from_columns(mu_cols, hdim) if gdim else Matrix.zeros(hdim, 0)
    return GLphiModule(CrossedModuleLA.build(g, h, mu, act_tr), ts, h_basis)


def glphi_crossed_module(ts: TwoVectorSpace) -> CrossedModuleLA:
    return glphi_module(ts).cm


def tautological_rep(mod: GLphiModule) -> Rep2:
    """gl(phi) acting on W -> V by (F, f) and A themselves."""
    W, V = mod.ts.dimW, mod.ts.dimV
    gdim = W * V
    rho1 = tuple(Matrix(W, V, tuple(Fraction(int(k == i)) for k in range(gdim))) for i in range(gdim))
    return Rep2(tuple(F for F, _ in mod.h_basis), tuple(f for _, f in mod.h_basis), rho1, W, V)


def adjoint_rep(cm: CrossedModuleLA) -> Rep2:
    """Adjoint action on g --mu--> h: ad1(x)u = -L_u x, ad01(y) = L_y, ad00(y) = [y, .]."""
    n, m = cm.g.dim, cm.h.dim
    rho01 = tuple(cm.act_matrix(cm.h.basis(y)) for y in range(m))
    rho00 = tuple(Matrix.from_columns([cm.h.br(cm.h.basis(y), cm.h.basis(u)) for u in range(m)], m)
                  if m else Matrix.zeros(0, 0) for y in range(m))
    rho1 = tuple(Matrix.from_columns([[-c for c in cm.L(cm.h.basis(u), cm.g.basis(x))] for u in range(m)], n)
                 if m else Matrix.zeros(n, 0) for x in range(n))
    return Rep2(rho01, rho00, rho1, n, m)


def adjoint_coefficients(cm: CrossedModuleLA) -> TwoVectorSpace:
    return TwoVectorSpace(cm.g.dim, cm.h.dim, cm.mu)


def _commutator(a: Matrix, b: Matrix) -> Matrix:
    return a @ b - b @ a


def check_rep2(cm: CrossedModuleLA, ts: TwoVectorSpace, r: Rep2) -> AxiomReport:
    if (r.dimW, r.dimV) != (ts.dimW, ts.dimV) or len(r.rho01) != cm.h.dim or len(r.rho00) != cm.h.dim \
            or len(r.rho1) != cm.g.dim:
        raise DimensionMismatch("representation tensors do not match the crossed module and coefficients")
    phi = ts.phi
    eg, eh = cm.g.basis, cm.h.basis
    G, H = range(cm.g.dim), range(cm.h.dim)

    def rep_law(tensor_of):
        def ok(a, b):
            return tensor_of(cm.h.br(eh(a), eh(b))) == _commutator(tensor_of(eh(a)), tensor_of(eh(b)))
        return ok

    def intertwine(y):
        return phi @ r.r01(eh(y)) == r.r00(eh(y)) @ phi

    def rho1_hom(a, b):
        A, B = r.r1(eg(a)), r.r1(eg(b))
        return r.r1(cm.g.br(eg(a), eg(b))) == A @ phi @ B - B @ phi @ A

    def mu_V(x):
        return r.r00(cm.mu_of(eg(x))) == phi @ r.r1(eg(x))

    def mu_W(x):
        return r.r01(cm.mu_of(eg(x))) == r.r1(eg(x)) @ phi

    def act_rel(y, x):
        lhs = r.r1(cm.L(eh(y), eg(x)))
        return lhs == r.r01(eh(y)) @ r.r1(eg(x)) - r.r1(eg(x)) @ r.r00(eh(y))

    checks = [
        ("rho01 representation", itertools.product(H, H), rep_law(r.r01)),
        ("rho00 representation", itertools.product(H, H), rep_law(r.r00)),
        ("intertwining", ((y,) for y in H), intertwine),
        ("rho1 homomorphism", itertools.product(G, G), rho1_hom),
        ("rho00(mu x) = phi rho1(x)", ((x,) for x in G), mu_V),
        ("rho01(mu x) = rho1(x) phi", ((x,) for x in G), mu_W),
        ("rho1(L_y x) = rho01(y) rho1(x) - rho1(x) rho00(y)", itertools.product(H, G), act_rel),
    ]
    results = []
    for name, tuples, pred in checks:
        w = _first_violation(tuples, pred)
        results.append(AxiomResult(name, w is None, w))
    return AxiomReport(tuple(results))


def exterior_coeff_basis(dim_g: int, rr: int, dimW: int) -> list:
    """Basis of wedge^rr g* (x) W as (combo, w-index), lexicographic."""
    return [(c, w) for c in enumerate_combos(dim_g, rr) for w in range(dimW)]


def rep_q(ts: TwoVectorSpace, r: Rep2, cm: CrossedModuleLA, rr: int) -> tuple:
    """rho^(rr)(y) w(z) = rho01(y) w(z) - sum_k w(.., L_y z_k, ..), one matrix per h-basis y."""
    if rr < 1:
        raise ValueError("rr must be at least 1")
    basis = exterior_coeff_basis(cm.g.dim, rr, ts.dimW)
    index = {b: i for i, b in enumerate(basis)}
    n = len(basis)
    out = []
    for y in range(cm.h.dim):
        ey = cm.h.basis(y)
        R = r.r01(ey)
        Lcols = [cm.L(ey, cm.g.basis(j)) for j in range(cm.g.dim)]
        rows = [[Fraction(0)] * n for _ in range(n)]
        for ti, (combo, w) in enumerate(basis):
            # rho01 part: (R w(e_combo))_w = sum_c R[w, c] w(e_combo)_c
            for c in range(ts.dimW):
                if R[w, c]:
                    rows[ti][index[(combo, c)]] += R[w, c]
            for k in range(rr):
                vecs = [cm.g.basis(j) for j in combo]
                vecs[k] = Lcols[combo[k]]
                for sc, coef in alternating_expansion(vecs).items():
                    rows[ti][index[(sc, w)]] -= coef
        out.append(Matrix.from_rows(rows, n) if n else Matrix.zeros(0, 0))
    return tuple(out)


def rep_r(ts: TwoVectorSpace, r: Rep2, cm: CrossedModuleLA) -> tuple:
    """z |-> rho01(mu z), one End(W) matrix per g-basis z."""
    return tuple(r.r01(cm.mu_of(cm.g.basis(z))) for z in range(cm.g.dim))


def _check_shape(ts: TwoVectorSpace, A: Matrix):
    if (A.rows, A.cols) != (ts.dimW, ts.dimV):
        raise DimensionMismatch(f"element of GL(phi)_1 must be {ts.dimW}x{ts.dimV}")


def _require_invertible(ts: TwoVectorSpace, A: Matrix):
    if inverse(Matrix.identity(ts.dimV) + ts.phi @ A) is None or \
            inverse(Matrix.identity(ts.dimW) + A @ ts.phi) is None:
        raise NotInvertible("I + phi A is singular")


def glphi1_product(ts: TwoVectorSpace, A1: Matrix, A2: Matrix) -> Matrix:
    _check_shape(ts, A1)
    _check_shape(ts, A2)
    _require_invertible(ts, A1)
    _require_invertible(ts, A2)
    return A1 + A2 + A1 @ ts.phi @ A2


def glphi1_inverse(ts: TwoVectorSpace, A: Matrix) -> Matrix:
    _check_shape(ts, A)
    inv = inverse(Matrix.identity(ts.dimV) + ts.phi @ A)
    if inv is None:
        raise NotInvertible("I + phi A is singular")
    return -(A @ inv)


def exp_glphi1(ts: TwoVectorSpace, A: Matrix) -> Matrix:
    """sum_n (A phi)^n A / (n+1)!, exact; the series must terminate."""
    _check_shape(ts, A)
    Aphi = A @ ts.phi
    total = Matrix.zeros(ts.dimW, ts.dimV)
    term = A
    n = 0
    while not term.is_zero():
        if n > ts.dimW:
            raise SeriesNotTerminating("A phi is not nilpotent; the exact exponential would not terminate")
        total = total + term.scale(Fraction(1, math.factorial(n + 1)))
        term = Aphi @ term
        n += 1
    return total


def matrix_exp_nilpotent(M: Matrix) -> Matrix:
    """exp(M) for nilpotent M, exact."""
    n = M.rows
    total = Matrix.identity(n)
    term = Matrix.identity(n)
    k = 1
    while True:
        term = (term @ M).scale(Fraction(1, k))
        if term.is_zero():
            return total
        if k > n:
            raise SeriesNotTerminating("matrix is not nilpotent")
        total = total + term
        k += 1
