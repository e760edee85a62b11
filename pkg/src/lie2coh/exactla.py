"""Exact rational linear algebra over Q.

Scalars are ``fractions.Fraction``.  Matrices are small and dense; ranks and
kernels come from fraction-free (Bareiss) elimination on integer-cleared rows.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction


class CompositionNotZero(ValueError):
    """Raised when two maps that should compose to zero do not."""


class DimensionMismatch(ValueError):
    pass


def to_rational(value) -> Fraction:
    """Parse ints, Fractions and "p/q" / "p" strings into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as an exact rational")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple  # row-major Fractions

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch("ragged rows")
        return cls(len(rows), cols, tuple(to_rational(v) for r in rows for v in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        cols = len(columns)
        data = [Fraction(0)] * (rows * cols)
        for j, c in enumerate(columns):
            for i, v in enumerate(c):
                data[i * cols + j] = to_rational(v)
        return cls(rows, cols, tuple(data))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    def column(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows,
                      tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        out = []
        ocols = [other.column(j) for j in range(other.cols)]
        for i in range(self.rows):
            r = self.row(i)
            nz = [(k, v) for k, v in enumerate(r) if v]
            for c in ocols:
                out.append(sum((v * c[k] for k, v in nz), Fraction(0)))
        return Matrix(self.rows, other.cols, tuple(out))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, s) -> "Matrix":
        s = to_rational(s)
        return Matrix(self.rows, self.cols, tuple(s * a for a in self.entries))

    def apply(self, v: Sequence) -> list:
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} against {self.cols} columns")
        nz = [(k, x) for k, x in enumerate(v) if x]
        return [sum((self.entries[i * self.cols + k] * x for k, x in nz), Fraction(0)) for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not any(self.entries)

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch(f"shape {self.rows}x{self.cols} vs {other.rows}x{other.cols}")


def block_matrix(blocks: Sequence[Sequence["Matrix | None"]], row_dims: Sequence[int],
                 col_dims: Sequence[int]) -> Matrix:
    """Assemble a block matrix; ``None`` blocks are zero."""
    R, C = sum(row_dims), sum(col_dims)
    data = [Fraction(0)] * (R * C)
    r0 = 0
    for bi, rd in enumerate(row_dims):
        c0 = 0
        for bj, cd in enumerate(col_dims):
            b = blocks[bi][bj]
            if b is not None:
                if (b.rows, b.cols) != (rd, cd):
                    raise DimensionMismatch(f"block ({bi},{bj}) is {b.rows}x{b.cols}, expected {rd}x{cd}")
                for i in range(rd):
                    base = (r0 + i) * C + c0
                    data[base:base + cd] = b.entries[i * cd:(i + 1) * cd]
            c0 += cd
        r0 += rd
    return Matrix(R, C, tuple(data))


def _integer_rows(m: Matrix) -> list:
    """Clear denominators row by row; row scaling preserves rank and kernel."""
    out = []
    for i in range(m.rows):
        r = m.row(i)
        lcm = 1
        for v in r:
            lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
        out.append([int(v * lcm) for v in r])
    return out


def _bareiss_echelon(a: list, ncols: int) -> tuple:
    """Fraction-free row echelon form in place.  Returns (rows, pivot columns)."""
    nrows = len(a)
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, nrows):
            ai = a[i]
            f = ai[c]
            ar = a[r]
            for j in range(c + 1, ncols):
                # exact division is the Bareiss invariant
                ai[j] = (p * ai[j] - f * ar[j]) // prev
            ai[c] = 0
        # rows above r stay untouched; subsequent rows carry the determinant scale
        prev = p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    _, pivots = _bareiss_echelon(_integer_rows(m), m.cols)
    return len(pivots)


def kernel_basis(m: Matrix) -> list:
    """Rational basis of {v : m v = 0}; one vector per free column."""
    n = m.cols
    if m.rows == 0:
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    ech, pivots = _bareiss_echelon(_integer_rows(m), n)
    piv_rows = ech[:len(pivots)]
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for k in range(len(pivots) - 1, -1, -1):
            c = pivots[k]
            row = piv_rows[k]
            s = sum((row[j] * v[j] for j in range(c + 1, n) if row[j]), Fraction(0))
            v[c] = -s / row[c]
        basis.append(v)
    return basis


def solve(m: Matrix, b: Sequence) -> list | None:
    """One exact solution of m x = b, or None if the system is inconsistent."""
    aug = Matrix.from_rows([m.row(i) + [to_rational(b[i])] for i in range(m.rows)], m.cols + 1)
    n = m.cols
    ech, pivots = _bareiss_echelon(_integer_rows(aug), n + 1)
    if pivots and pivots[-1] == n:
        return None
    x = [Fraction(0)] * n
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        row = ech[k]
        s = sum((row[j] * x[j] for j in range(c + 1, n) if row[j]), Fraction(0))
        x[c] = (row[n] - s) / row[c]
    return x


def inverse(m: Matrix) -> Matrix | None:
    """Exact inverse, or None when singular."""
    if m.rows != m.cols:
        raise DimensionMismatch("inverse of a non-square matrix")
    n = m.rows
    cols = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        x = solve(m, e)
        if x is None:
            return None
        cols.append(x)
    return Matrix.from_columns(cols, n)


def quotient_dim(ambient_kernel: Matrix, image_of: Matrix) -> int:
    """dim ker(d_out) - rank(d_in), after checking d_out . d_in = 0."""
    if ambient_kernel.cols != image_of.rows:
        raise DimensionMismatch(
            f"outgoing map has {ambient_kernel.cols} columns, incoming map has {image_of.rows} rows")
    if not (ambient_kernel @ image_of).is_zero():
        raise CompositionNotZero("outgoing map composed with incoming map is nonzero")
    return ambient_kernel.cols - rank(ambient_kernel) - rank(image_of)


def enumerate_combos(n: int, k: int) -> list:
    return list(itertools.combinations(range(n), k))


def combo_index(n: int, k: int) -> dict:
    return {c: i for i, c in enumerate(itertools.combinations(range(n), k))}


def rank_mod_p(m: Matrix, prime: int) -> int:
    """Rank of the integer-cleared matrix over GF(prime)."""
    a = [[v % prime for v in r] for r in _integer_rows(m)]
    r = 0
    for c in range(m.cols):
        piv = next((i for i in range(r, m.rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, prime)
        for i in range(r + 1, m.rows):
            f = a[i][c] * inv % prime
            if f:
                a[i] = [(x - f * y) % prime for x, y in zip(a[i], a[r])]
        r += 1
        if r == m.rows:
            break
    return r


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_primes(count: int, rng: random.Random, low: int = 2 ** 30) -> list:
    primes = set()
    while len(primes) < count:
        c = rng.randrange(low, 2 * low) | 1
        if _is_probable_prime(c):
            primes.add(c)
    return sorted(primes)


def rank_cross_check(m: Matrix, rng: random.Random, count: int = 3) -> bool:
    """Exact rank agrees with the rank modulo ``count`` random primes above 2^30.

    A mod-p rank can drop below the rational rank only when p divides every
    maximal nonzero minor, which is vanishingly unlikely for random large p.
    """
    r = rank(m)
    return all(rank_mod_p(m, p) == r for p in random_primes(count, rng))


def vec_add(u: Sequence, v: Sequence) -> list:
    return [a + b for a, b in zip(u, v)]


def vec_scale(s, v: Sequence) -> list:
    return [s * a for a in v]


def zero_vec(n: int) -> list:
    return [Fraction(0)] * n


def unit_vec(n: int, i: int) -> list:
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


def stack_rows(mats: Iterable[Matrix], cols: int) -> Matrix:
    rows = []
    for m in mats:
        rows.extend(m.to_rows())
    return Matrix.from_rows(rows, cols) if rows else Matrix.zeros(0, cols)


def permutation_sign(seq: Sequence) -> int:
    """Sign of the permutation sorting a sequence of distinct keys."""
    s = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


def alternating_expansion(vectors: Sequence[Sequence]) -> dict:
    """Expand w(v_1, ..., v_k) for alternating multilinear w on basis combos.

    Returns {combo: coefficient} with w(v_1..v_k) = sum coefficient * w(e_combo).
    Only nonzero coordinates are visited, so sparse arguments are cheap.
    """
    supports = [[(i, a) for i, a in enumerate(v) if a] for v in vectors]
    out: dict = {}
    for choice in itertools.product(*supports):
        idx = [i for i, _ in choice]
        if len(set(idx)) != len(idx):
            continue
        coef = Fraction(1)
        for _, a in choice:
            coef *= a
        key = tuple(sorted(idx))
        out[key] = out.get(key, Fraction(0)) + permutation_sign(idx) * coef
    return {k: v for k, v in out.items() if v}
