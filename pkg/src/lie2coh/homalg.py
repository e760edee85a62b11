"""Finite-dimensional homological algebra over Q: complexes, maps, cones,
double complexes and their column spectral sequence at the first page."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactla import Matrix, block_matrix, kernel_basis, rank, solve


class NotAChainMap(ValueError):
    pass


class NotAComplex(ValueError):
    pass


class NotADoubleComplex(ValueError):
    pass


class HypothesisNotMet(ValueError):
    pass


@dataclass(frozen=True)
class FiniteComplex:
    """Spaces in degrees start .. start+len(dims)-1; d[i] goes from slot i to slot i+1."""
    dims: tuple
    d: tuple
    start: int = 0

    def __post_init__(self):
        if len(self.d) != max(len(self.dims) - 1, 0):
            raise NotAComplex("need one differential between each pair of consecutive slots")
        for i, m in enumerate(self.d):
            if (m.rows, m.cols) != (self.dims[i + 1], self.dims[i]):
                raise NotAComplex(f"differential out of slot {i} has the wrong shape")
        for i in range(len(self.d) - 1):
            if not (self.d[i + 1] @ self.d[i]).is_zero():
                raise NotAComplex(f"d^2 != 0 out of degree {self.start + i}")

    @property
    def top(self) -> int:
        return self.start + len(self.dims) - 1

    def dim(self, n: int) -> int:
        i = n - self.start
        return self.dims[i] if 0 <= i < len(self.dims) else 0

    def diff(self, n: int) -> Matrix:
        """d: degree n -> n+1 (zero outside the support)."""
        i = n - self.start
        if 0 <= i < len(self.d):
            return self.d[i]
        return Matrix.zeros(self.dim(n + 1), self.dim(n))

    def betti(self, n: int) -> int:
        return self.dim(n) - rank(self.diff(n)) - rank(self.diff(n - 1))

    def betti_numbers(self) -> dict:
        return {n: self.betti(n) for n in range(self.start, self.top + 1)}


def complex_from_maps(maps: Sequence[Matrix], start: int = 0) -> FiniteComplex:
    dims = [maps[0].cols] + [m.rows for m in maps] if maps else []
    return FiniteComplex(tuple(dims), tuple(maps), start)


@dataclass(frozen=True)
class ComplexMap:
    source: FiniteComplex
    target: FiniteComplex
    components: dict  # degree -> Matrix

    def __post_init__(self):
        lo = min(self.source.start, self.target.start)
        hi = max(self.source.top, self.target.top)
        for n in range(lo - 1, hi + 1):
            lhs = self.target.diff(n) @ self.at(n)
            rhs = self.at(n + 1) @ self.source.diff(n)
            if lhs != rhs:
                raise NotAChainMap(f"map does not commute with differentials out of degree {n}")

    def at(self, n: int) -> Matrix:
        m = self.components.get(n)
        if m is None:
            return Matrix.zeros(self.target.dim(n), self.source.dim(n))
        return m


def identity_map(a: FiniteComplex) -> ComplexMap:
    return ComplexMap(a, a, {n: Matrix.identity(a.dim(n)) for n in range(a.start, a.top + 1)})


def mapping_cone(f: ComplexMap) -> FiniteComplex:
    """C^n = A^(n+1) (+) B^n with d = [[-d_A, 0], [f, d_B]]."""
    A, B = f.source, f.target
    lo = min(A.start - 1, B.start)
    hi = max(A.top - 1, B.top)
    dims = [A.dim(n + 1) + B.dim(n) for n in range(lo, hi + 1)]
    ds = []
    for n in range(lo, hi):
        blocks = [[-A.diff(n + 1), None], [f.at(n + 1), B.diff(n)]]
        ds.append(block_matrix(blocks, [A.dim(n + 2), B.dim(n + 1)], [A.dim(n + 1), B.dim(n)]))
    return FiniteComplex(tuple(dims), tuple(ds), lo)


def _span_rank(vectors: Sequence[Sequence], n: int) -> int:
    if not vectors:
        return 0
    return rank(Matrix.from_columns(list(vectors), n))


def _image_basis(m: Matrix) -> list:
    return [m.column(j) for j in range(m.cols)]


def induced_rank(f: ComplexMap, n: int) -> int:
    """Rank of H^n(A) -> H^n(B), by pushing a kernel basis forward modulo boundaries."""
    A, B = f.source, f.target
    dimB = B.dim(n)
    cycles = [f.at(n).apply(z) for z in kernel_basis(A.diff(n))] if A.dim(n) else []
    boundaries = _image_basis(B.diff(n - 1)) if B.dim(n - 1) else []
    return _span_rank(cycles + boundaries, dimB) - _span_rank(boundaries, dimB)


@dataclass(frozen=True)
class ConeAudit:
    k: int
    cone_vanishes: bool
    induced_iso: bool
    first_bad_degree: int | None

    @property
    def agree(self) -> bool:
        return self.cone_vanishes == self.induced_iso


def cone_equivalence_audit(f: ComplexMap, k: int) -> ConeAudit:
    """Compares H^n(cone) = 0 for n <= k with: induced map iso for n <= k, injective at k+1."""
    C = mapping_cone(f)
    A, B = f.source, f.target
    lo = C.start
    bad_cone = next((n for n in range(lo, k + 1) if C.betti(n)), None)
    ok = True
    first = None
    for n in range(min(A.start, B.start), k + 2):
        r = induced_rank(f, n)
        hA, hB = A.betti(n), B.betti(n)
        good = r == hA if n == k + 1 else (r == hA and r == hB)
        if not good:
            ok = False
            first = n
            break
    return ConeAudit(k, bad_cone is None, ok, bad_cone if bad_cone is not None else first)


@dataclass(frozen=True)
class DoubleComplex:
    """dims[p][q]; horizontal[p][q]: (p,q) -> (p+1,q); vertical[p][q]: (p,q) -> (p,q+1).

    With commuting=True the squares commute and the total differential is
    h + (-1)^p v; otherwise they anticommute and it is h + v.
    """
    dims: tuple
    horizontal: dict
    vertical: dict
    commuting: bool = True
    q_start: int = 0  # the stored row q sits in vertical degree q + q_start

    def __post_init__(self):
        P = len(self.dims)
        for p in range(P):
            for q in range(len(self.dims[p])):
                v, h = self.v(p, q), self.h(p, q)
                if not (self.v(p, q + 1) @ v).is_zero():
                    raise NotADoubleComplex(f"vertical d^2 != 0 at ({p},{q})")
                if not (self.h(p + 1, q) @ h).is_zero():
                    raise NotADoubleComplex(f"horizontal d^2 != 0 at ({p},{q})")
                a = self.v(p + 1, q) @ h
                b = self.h(p, q + 1) @ v
                if (a != b) if self.commuting else (a != -b):
                    raise NotADoubleComplex(f"square at ({p},{q}) fails the stored convention")

    def dim(self, p: int, q: int) -> int:
        if 0 <= p < len(self.dims) and 0 <= q < len(self.dims[p]):
            return self.dims[p][q]
        return 0

    def h(self, p: int, q: int) -> Matrix:
        m = self.horizontal.get((p, q))
        return m if m is not None else Matrix.zeros(self.dim(p + 1, q), self.dim(p, q))

    def v(self, p: int, q: int) -> Matrix:
        m = self.vertical.get((p, q))
        return m if m is not None else Matrix.zeros(self.dim(p, q + 1), self.dim(p, q))

    @property
    def max_total(self) -> int:
        return max((p + len(col) - 1 for p, col in enumerate(self.dims) if col), default=0)

    def column(self, p: int) -> FiniteComplex:
        Q = len(self.dims[p]) if p < len(self.dims) else 0
        return FiniteComplex(tuple(self.dim(p, q) for q in range(Q)),
                             tuple(self.v(p, q) for q in range(Q - 1)), self.q_start)

    def total_cells(self, n: int) -> list:
        return [(p, n - p) for p in range(n + 1) if self.dim(p, n - p)]

    def total_diff(self, n: int) -> Matrix:
        src, tgt = self.total_cells(n), self.total_cells(n + 1)
        blocks = []
        for (pt, qt) in tgt:
            row = []
            for (ps, qs) in src:
                if (pt, qt) == (ps + 1, qs):
                    row.append(self.h(ps, qs))
                elif (pt, qt) == (ps, qs + 1):
                    s = (-1) ** ps if self.commuting else 1
                    row.append(self.v(ps, qs).scale(s))
                else:
                    row.append(None)
            blocks.append(row)
        return block_matrix(blocks, [self.dim(*c) for c in tgt], [self.dim(*c) for c in src])

    def total_complex(self) -> FiniteComplex:
        N = self.max_total
        dims = tuple(sum(self.dim(*c) for c in self.total_cells(n)) for n in range(N + 1))
        return FiniteComplex(dims, tuple(self.total_diff(n) for n in range(N)), self.q_start)


def _cohomology_reps(d_in: Matrix, d_out: Matrix, n: int) -> tuple:
    """(representatives of H, basis of boundaries) at a node of dimension n."""
    boundaries = [d_in.column(j) for j in range(d_in.cols)] if d_in.cols else []
    bnd = []
    for b in boundaries:
        if _span_rank(bnd + [b], n) > len(bnd):
            bnd.append(b)
    reps = []
    for z in kernel_basis(d_out):
        if _span_rank(bnd + reps + [z], n) > len(bnd) + len(reps):
            reps.append(z)
    return reps, bnd


@dataclass(frozen=True)
class E1Page:
    dims: dict        # (p, q) -> dim H^q(column p)
    d1: dict = field(default_factory=dict)  # (p, q) -> matrix H^q(col p) -> H^q(col p+1)

    def vanishes_below(self, k: int) -> bool:
        return all(d == 0 for (p, q), d in self.dims.items() if p + q <= k)


def e1_page(dc: DoubleComplex) -> E1Page:
    dims, reps, bnds = {}, {}, {}
    for p in range(len(dc.dims)):
        for q in range(len(dc.dims[p])):
            r, b = _cohomology_reps(dc.v(p, q - 1), dc.v(p, q), dc.dim(p, q))
            dims[(p, q + dc.q_start)] = len(r)
            reps[(p, q + dc.q_start)], bnds[(p, q + dc.q_start)] = r, b
    d1 = {}
    for (p, q), r in reps.items():
        tr, tb = reps.get((p + 1, q), []), bnds.get((p + 1, q), [])
        n = dc.dim(p + 1, q - dc.q_start)
        cols = []
        for z in r:
            img = dc.h(p, q - dc.q_start).apply(z)
            if not tr and not tb:
                cols.append([])
                continue
            M = Matrix.from_columns(tr + tb, n)
            x = solve(M, img)
            cols.append(x[:len(tr)])
        d1[(p, q)] = Matrix.from_columns(cols, len(tr)) if cols else Matrix.zeros(len(tr), 0)
    return E1Page(dims, d1)


@dataclass(frozen=True)
class BelowDiagonalReport:
    k: int
    total_betti: tuple

    @property
    def holds(self) -> bool:
        return not any(self.total_betti)


def below_diagonal_vanishing(dc: DoubleComplex, k: int) -> BelowDiagonalReport:
    page = e1_page(dc)
    if not page.vanishes_below(k):
        bad = sorted(c for c, d in page.dims.items() if d and sum(c) <= k)
        raise HypothesisNotMet(f"first page is nonzero at {bad[0]}")
    tot = dc.total_complex()
    return BelowDiagonalReport(k, tuple(tot.betti(n) for n in range(tot.start, k + 1)))


def cone_double(A: DoubleComplex, B: DoubleComplex, phi: dict) -> DoubleComplex:
    """Columns are the cones of phi restricted to column p: C^{p,q} = A^{p,q+1} (+) B^{p,q}."""
    if A.q_start or B.q_start:
        raise NotADoubleComplex("inputs must start in vertical degree 0")
    if A.commuting != B.commuting:
        raise NotADoubleComplex("source and target use different sign conventions")
    P = max(len(A.dims), len(B.dims))

    def f(p, q):
        m = phi.get((p, q))
        return m if m is not None else Matrix.zeros(B.dim(p, q), A.dim(p, q))

    for p in range(P):
        for q in range(-1, max(len(A.dims[p]) if p < len(A.dims) else 0,
                               len(B.dims[p]) if p < len(B.dims) else 0) + 1):
            if B.v(p, q) @ f(p, q) != f(p, q + 1) @ A.v(p, q):
                raise NotADoubleComplex(f"map fails to commute with vertical differentials at ({p},{q})")
            if B.h(p, q) @ f(p, q) != f(p + 1, q) @ A.h(p, q):
                raise NotADoubleComplex(f"map fails to commute with horizontal differentials at ({p},{q})")
    dims, hor, ver = [], {}, {}
    for p in range(P):
        Q = max(len(A.dims[p]) - 1 if p < len(A.dims) else 0, len(B.dims[p]) if p < len(B.dims) else 0)
        lo = -1 if A.dim(p, 0) else 0
        col = []
        for q in range(lo, Q):
            col.append(A.dim(p, q + 1) + B.dim(p, q))
        dims.append((lo, col))
    lo_all = min((lo for lo, _ in dims), default=0)
    # shift so that the lowest cone degree sits at q = 0
    grid_dims = []
    for p, (lo, col) in enumerate(dims):
        grid_dims.append(tuple([0] * (lo - lo_all) + col))
    for p in range(P):
        for qq in range(len(grid_dims[p])):
            q = qq + lo_all
            rows = [A.dim(p, q + 2), B.dim(p, q + 1)]
            cs = [A.dim(p, q + 1), B.dim(p, q)]
            ver[(p, qq)] = block_matrix([[-A.v(p, q + 1), None], [f(p, q + 1), B.v(p, q)]], rows, cs)
            hr = [A.dim(p + 1, q + 1), B.dim(p + 1, q)]
            hor[(p, qq)] = block_matrix([[A.h(p, q + 1), None], [None, B.h(p, q)]], hr, cs)
    # trim maps whose target lies outside the stored grid
    grid_dims = tuple(grid_dims)
    ver = {k: m for k, m in ver.items() if m.rows == _dim(grid_dims, k[0], k[1] + 1)}
    hor = {k: m for k, m in hor.items() if m.rows == _dim(grid_dims, k[0] + 1, k[1])}
    return DoubleComplex(grid_dims, hor, ver, A.commuting, lo_all)


def _dim(dims, p, q):
    if 0 <= p < len(dims) and 0 <= q < len(dims[p]):
        return dims[p][q]
    return 0


def total_map(A: DoubleComplex, B: DoubleComplex, phi: dict) -> ComplexMap:
    """The map of total complexes induced by a map of double complexes."""
    TA, TB = A.total_complex(), B.total_complex()
    comps = {}
    for n in range(max(TA.top, TB.top) + 1):
        sa, sb = A.total_cells(n), B.total_cells(n)
        blocks = [[phi.get(c) if c == d and phi.get(c) is not None else None for c in sa] for d in sb]
        comps[n] = block_matrix(blocks, [B.dim(*c) for c in sb], [A.dim(*c) for c in sa])
    return ComplexMap(TA, TB, comps)


# --- random instances for audits ----------------------------------------------------

def _random_invertible(n: int, rng) -> Matrix:
    while True:
        m = Matrix.from_rows([[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)], n)
        if rank(m) == n:
            return m


def complex_with_cohomology(betti: Sequence[int], pairs: Sequence[int], rng, start: int = 0) -> FiniteComplex:
    """A complex with the given Betti numbers and pairs[n] cancelling pairs between n and n+1,
    written in a random basis."""
    L = len(betti)
    dims = [betti[n] + (pairs[n] if n < L - 1 else 0) + (pairs[n - 1] if n > 0 else 0) for n in range(L)]
    # standard basis per degree: [incoming pair targets | cohomology | outgoing pair sources]
    ds = []
    for n in range(L - 1):
        m = [[Fraction(0)] * dims[n] for _ in range(dims[n + 1])]
        src0 = (pairs[n - 1] if n > 0 else 0) + betti[n]
        for i in range(pairs[n]):
            m[i][src0 + i] = Fraction(1)
        ds.append(Matrix.from_rows(m, dims[n]) if dims[n + 1] else Matrix.zeros(0, dims[n]))
    P = [_random_invertible(d, rng) if d else Matrix.zeros(0, 0) for d in dims]
    Pinv = [_inverse_or_empty(p) for p in P]
    ds = [P[n + 1] @ ds[n] @ Pinv[n] for n in range(L - 1)]
    return FiniteComplex(tuple(dims), tuple(ds), start)


def _inverse_or_empty(p: Matrix) -> Matrix:
    from .exactla import inverse
    return inverse(p) if p.rows else p


def random_complex(length: int, max_dim: int, rng) -> FiniteComplex:
    while True:
        betti = [rng.randint(0, 2) for _ in range(length)]
        pairs = [rng.randint(0, 2) for _ in range(length - 1)]
        dims = [betti[n] + (pairs[n] if n < length - 1 else 0) + (pairs[n - 1] if n > 0 else 0)
                for n in range(length)]
        if max(dims) <= max_dim:
            return complex_with_cohomology(betti, pairs, rng)


def _maps_solving(unknown_shapes: list, equations) -> list:
    """Kernel basis of a linear system in the entries of several unknown matrices.

    equations(mats) must return a list of matrices that depend linearly on mats."""
    sizes = [r * c for r, c in unknown_shapes]
    total = sum(sizes)

    def unpack(vec):
        out, pos = [], 0
        for (r, c), s in zip(unknown_shapes, sizes):
            out.append(Matrix(r, c, tuple(vec[pos:pos + s])))
            pos += s
        return out

    cols = []
    for j in range(total):
        e = [Fraction(0)] * total
        e[j] = Fraction(1)
        col = []
        for m in equations(unpack(e)):
            col.extend(m.entries)
        cols.append(col)
    nrows = len(cols[0]) if cols else 0
    if total == 0:
        return []
    if nrows == 0:
        return [unpack([Fraction(int(i == j)) for i in range(total)]) for j in range(total)]
    system = Matrix.from_columns(cols, nrows)
    return [unpack(v) for v in kernel_basis(system)]


def _random_combination(basis: list, rng, shapes: list) -> list:
    out = [Matrix.zeros(r, c) for r, c in shapes]
    for b in basis:
        a = rng.randint(-1, 1)
        if a:
            out = [o + m.scale(a) for o, m in zip(out, b)]
    return out


def random_chain_map(A: FiniteComplex, B: FiniteComplex, rng) -> ComplexMap:
    degs = list(range(min(A.start, B.start), max(A.top, B.top) + 1))
    shapes = [(B.dim(n), A.dim(n)) for n in degs]

    def eqs(ms):
        comp = dict(zip(degs, ms))
        z = lambda n: comp.get(n, Matrix.zeros(B.dim(n), A.dim(n)))
        return [B.diff(n) @ z(n) - z(n + 1) @ A.diff(n) for n in degs[:-1]]

    ms = _random_combination(_maps_solving(shapes, eqs), rng, shapes)
    return ComplexMap(A, B, dict(zip(degs, ms)))


def random_chain_map_instance(rng, max_length: int = 5, max_dim: int = 6) -> ComplexMap:
    """Mixes unrelated complexes, self-maps and isomorphisms so both outcomes occur."""
    length = rng.randint(1, max_length)
    A = random_complex(length, max_dim, rng)
    kind = rng.randrange(3)
    if kind == 0:
        return random_chain_map(A, random_complex(length, max_dim, rng), rng)
    if kind == 1:
        return random_chain_map(A, A, rng)
    P = [_random_invertible(d, rng) if d else Matrix.zeros(0, 0) for d in A.dims]
    B = FiniteComplex(A.dims, tuple(P[n + 1] @ A.d[n] @ _inverse_or_empty(P[n]) for n in range(len(A.d))))
    return ComplexMap(A, B, dict(enumerate(P)))


def random_double_complex(columns: int, height: int, k: int, rng, max_dim: int = 4) -> DoubleComplex:
    """Columns exact at every (p, q) with p + q <= k, random commuting horizontals."""
    cols = []
    for p in range(columns):
        while True:
            betti = [0 if p + q <= k else rng.randint(0, 1) for q in range(height)]
            pairs = [rng.randint(0, 1) for _ in range(height - 1)]
            dims = [betti[q] + (pairs[q] if q < height - 1 else 0) + (pairs[q - 1] if q > 0 else 0)
                    for q in range(height)]
            if max(dims) <= max_dim:
                break
        cols.append(complex_with_cohomology(betti, pairs, rng))
    hor = {}
    prev = None
    for p in range(columns - 1):
        A, B = cols[p], cols[p + 1]
        shapes = [(B.dim(q), A.dim(q)) for q in range(height)]

        def eqs(ms, A=A, B=B, prev=prev):
            out = [B.diff(q) @ ms[q] - ms[q + 1] @ A.diff(q) for q in range(height - 1)]
            if prev is not None:
                out += [ms[q] @ prev[q] for q in range(height)]
            return out

        ms = _random_combination(_maps_solving(shapes, eqs), rng, shapes)
        for q in range(height):
            hor[(p, q)] = ms[q]
        prev = ms
    ver = {(p, q): cols[p].diff(q) for p in range(columns) for q in range(height - 1)}
    dims = tuple(tuple(c.dims) for c in cols)
    return DoubleComplex(dims, hor, ver, True)
