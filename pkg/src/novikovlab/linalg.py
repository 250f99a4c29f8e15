"""Exact dense matrices over the rings of :mod:`novikovlab.rings`.

A map of free modules ``R^m -> R^n`` is an ``n x m`` matrix acting on column
vectors, so ``g o f`` is ``matrix(g) @ matrix(f)``.

Field elimination over GF(p) runs through the int64 kernels in
:mod:`novikovlab._kernels`; QQ and large primes use the generic Python path.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import DimensionError, RingMismatchError, UnsupportedRingError
from .rings import ZZ, LaurentPoly, RingTag


class Matrix:
    """Immutable dense matrix; ``entries`` is a tuple of row tuples."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: RingTag, rows: int, cols: int, entries=None):
        self.ring = ring
        self.rows = rows
        self.cols = cols
        if entries is None:
            z = ring.zero
            self.entries = tuple((z,) * cols for _ in range(rows))
            return
        entries = [list(r) for r in entries]
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise DimensionError(f"entries do not form a {rows}x{cols} array")
        self.entries = tuple(tuple(ring.coerce(x) for x in r) for r in entries)

    @classmethod
    def _raw(cls, ring, rows, cols, entries):
        m = cls.__new__(cls)
        m.ring, m.rows, m.cols, m.entries = ring, rows, cols, entries
        return m

    @classmethod
    def from_rows(cls, ring: RingTag, rows: Sequence[Sequence], cols: int | None = None) -> Matrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(ring, len(rows), cols, rows)

    @classmethod
    def zeros(cls, ring: RingTag, rows: int, cols: int) -> Matrix:
        return cls(ring, rows, cols)

    @classmethod
    def identity(cls, ring: RingTag, n: int) -> Matrix:
        z, o = ring.zero, ring.one
        return cls._raw(ring, n, n, tuple(tuple(o if i == j else z for j in range(n))
                                          for i in range(n)))

    @classmethod
    def scalar(cls, ring: RingTag, n: int, c) -> Matrix:
        return cls.identity(ring, n).scale(c)

    @classmethod
    def blocks(cls, ring: RingTag, grid, row_sizes: Sequence[int], col_sizes: Sequence[int]) -> Matrix:
        """Assemble a block matrix; ``None`` entries in ``grid`` are zero blocks."""
        z = ring.zero
        out = []
        for bi, rs in enumerate(row_sizes):
            part = [[z] * sum(col_sizes) for _ in range(rs)]
            off = 0
            for bj, cs in enumerate(col_sizes):
                blk = grid[bi][bj]
                if blk is not None:
                    if (blk.rows, blk.cols) != (rs, cs):
                        raise DimensionError(
                            f"block ({bi},{bj}) is {blk.rows}x{blk.cols}, expected {rs}x{cs}")
                    for i in range(rs):
                        part[i][off:off + cs] = blk.entries[i]
                off += cs
            out.extend(tuple(r) for r in part)
        return cls._raw(ring, sum(row_sizes), sum(col_sizes), tuple(out))

    # -- basic access ----------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> Matrix:
        return Matrix._raw(self.ring, r1 - r0, c1 - c0,
                           tuple(tuple(row[c0:c1]) for row in self.entries[r0:r1]))

    def column(self, j: int) -> list:
        return [row[j] for row in self.entries]

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(x) for row in self.entries for x in row)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.ring, self.rows, self.cols, self.entries) == (
            other.ring, other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.ring, self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self.entries)
        return f"Matrix({self.ring}, {self.rows}x{self.cols}, [{body}])"

    # -- arithmetic --------------------------------------------------------------
    def _same(self, other):
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def __add__(self, other: Matrix) -> Matrix:
        self._same(other)
        if self.shape != other.shape:
            raise DimensionError(f"{self.shape} + {other.shape}")
        add = self.ring.add
        return Matrix._raw(self.ring, self.rows, self.cols, tuple(
            tuple(add(a, b) for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)))

    def __neg__(self) -> Matrix:
        neg = self.ring.neg
        return Matrix._raw(self.ring, self.rows, self.cols,
                           tuple(tuple(neg(a) for a in r) for r in self.entries))

    def __sub__(self, other: Matrix) -> Matrix:
        return self + (-other)

    def scale(self, c) -> Matrix:
        R = self.ring
        c = R.coerce(c)
        return Matrix._raw(R, self.rows, self.cols,
                           tuple(tuple(R.mul(c, a) for a in r) for r in self.entries))

    def __matmul__(self, other: Matrix) -> Matrix:
        self._same(other)
        if self.cols != other.rows:
            raise DimensionError(f"{self.shape} @ {other.shape}")
        R = self.ring
        if R.kind == "Fp" and R.p < _kernels.MAX_KERNEL_PRIME and self.rows and other.cols:
            if self.cols == 0:
                return Matrix.zeros(R, self.rows, other.cols)
            prod = (self.to_numpy() @ other.to_numpy()) % R.p if R.p < 2**20 else \
                _objmatmul(self.entries, other.entries, R.p)
            return Matrix._raw(R, self.rows, other.cols, tuple(tuple(int(x) for x in r) for r in prod))
        zero = R.zero
        add, mul = R.add, R.mul
        cols_b = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = []
        for r in self.entries:
            row = []
            for c in cols_b:
                acc = zero
                for a, b in zip(r, c):
                    if not R.is_zero(a) and not R.is_zero(b):
                        acc = add(acc, mul(a, b))
                row.append(acc)
            out.append(tuple(row))
        return Matrix._raw(R, self.rows, other.cols, tuple(out))

    def apply(self, v: Sequence) -> tuple:
        """Image of the column vector ``v``."""
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} for a {self.shape} matrix")
        R = self.ring
        out = []
        for r in self.entries:
            acc = R.zero
            for a, b in zip(r, v):
                if not R.is_zero(a) and not R.is_zero(b):
                    acc = R.add(acc, R.mul(a, b))
            out.append(acc)
        return tuple(out)

    def transpose(self) -> Matrix:
        return Matrix._raw(self.ring, self.cols, self.rows,
                           tuple(zip(*self.entries)) if self.rows else ((),) * self.cols)

    T = property(transpose)

    def map(self, fn, ring: RingTag) -> Matrix:
        """Entrywise image under ``fn``, landing in ``ring``."""
        return Matrix(ring, self.rows, self.cols, [[fn(x) for x in r] for r in self.entries])

    def evaluate(self, value) -> Matrix:
        """Substitute ``z = value`` in a Laurent matrix."""
        if not self.ring.is_laurent:
            raise UnsupportedRingError("evaluate needs a Laurent matrix")
        base = self.ring.base
        return Matrix._raw(base, self.rows, self.cols,
                           tuple(tuple(x.evaluate(value) for x in r) for r in self.entries))

    def to_numpy(self) -> np.ndarray:
        if self.ring.kind == "Laurent":
            raise UnsupportedRingError("Laurent matrices have no int64 form")
        return np.array(self.entries, dtype=np.int64).reshape(self.rows, self.cols)


def _objmatmul(a, b, p):
    A = np.array(a, dtype=object)
    B = np.array(b, dtype=object)
    return (A @ B) % p


def _require_field(A: Matrix):
    if not A.ring.is_field:
        raise UnsupportedRingError(f"field elimination needs QQ or GF(p), got {A.ring}")


def _use_kernel(R: RingTag) -> bool:
    return R.kind == "Fp" and R.p < _kernels.MAX_KERNEL_PRIME


def _rref_generic(rows: list[list], R: RingTag):
    """In-place RREF over a field with the same pivot rule as the kernels."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = R.inv(rows[r][c])
        rows[r] = [R.mul(inv, x) for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def rref_field(A: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns over QQ or GF(p)."""
    _require_field(A)
    R = A.ring
    if _use_kernel(R) and A.rows and A.cols:
        r, piv, rank = _kernels.rref_mod_p(A.to_numpy(), R.p)
        return (Matrix._raw(R, A.rows, A.cols, tuple(tuple(int(x) for x in row) for row in r)),
                [int(c) for c in piv[:rank]])
    rows, piv = _rref_generic([list(r) for r in A.entries], R)
    return Matrix._raw(R, A.rows, A.cols, tuple(tuple(r) for r in rows)), piv


def rank_field(A: Matrix) -> int:
    _require_field(A)
    if A.rows == 0 or A.cols == 0:
        return 0
    if _use_kernel(A.ring):
        return _kernels.rref_mod_p(A.to_numpy(), A.ring.p)[2]
    return len(rref_field(A)[1])


def solve_field(A: Matrix, b: Sequence) -> tuple | None:
    """Some ``x`` with ``A x = b``, or ``None`` if the system is inconsistent.

    Free variables are set to zero, pivots chosen by smallest row index, so the
    answer is reproducible.
    """
    _require_field(A)
    R = A.ring
    if len(b) != A.rows:
        raise DimensionError(f"right-hand side of length {len(b)} for {A.rows} rows")
    b = [R.coerce(x) for x in b]
    if A.cols == 0:
        return () if all(x == 0 for x in b) else None
    aug = Matrix._raw(R, A.rows, A.cols + 1,
                      tuple(tuple(r) + (x,) for r, x in zip(A.entries, b)))
    red, piv = rref_field(aug)
    if piv and piv[-1] == A.cols:
        return None
    x = [R.zero] * A.cols
    for row, c in enumerate(piv):
        x[c] = red.entries[row][A.cols]
    return tuple(x)


def nullspace_field(A: Matrix) -> list[tuple]:
    """Basis of the kernel of ``A`` (free-column parametrisation)."""
    _require_field(A)
    R = A.ring
    if A.cols == 0:
        return []
    if A.rows == 0:
        return [tuple(Matrix.identity(R, A.cols).column(j)) for j in range(A.cols)]
    red, piv = rref_field(A)
    free = [c for c in range(A.cols) if c not in piv]
    basis = []
    for fc in free:
        v = [R.zero] * A.cols
        v[fc] = R.one
        for row, pc in enumerate(piv):
            v[pc] = R.neg(red.entries[row][fc])
        basis.append(tuple(v))
    return basis


# -- Laurent matrices -----------------------------------------------------------

def _bareiss(rows: list[list], R: RingTag, square: bool = False):
    """Fraction-free row echelon elimination (Bareiss) with column skipping.

    Returns ``(rank, sign, last_pivot)``; for square input of full rank
    ``sign * last_pivot`` is the determinant.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    prev = R.one
    sign = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if not R.is_zero(rows[i][c])), None)
        if piv is None:
            if square:
                return r, sign, R.zero
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        p = rows[r][c]
        for i in range(r + 1, nrows):
            a = rows[i][c]
            new = rows[i][:]
            for j in range(c + 1, ncols):
                num = R.sub(R.mul(p, rows[i][j]), R.mul(a, rows[r][j]))
                new[j] = R.div_exact(num, prev) if not R.is_zero(num) else R.zero
            new[c] = R.zero
            rows[i] = new
        prev = p
        r += 1
    return r, sign, prev


def rank_laurent_fraction(A: Matrix) -> int:
    """Rank of a Laurent matrix over the field of fractions of ``k[z, z^-1]``.

    Every minor is a Laurent polynomial and vanishes in ``k((z))`` or
    ``k((z^-1))`` only if it is the zero polynomial, so this is also the rank
    over both Novikov fields.
    """
    R = A.ring
    if not R.is_laurent:
        raise UnsupportedRingError(f"expected a Laurent matrix, got {R}")
    if not R.base.is_field:
        raise UnsupportedRingError("rank over fractions of Laurent(ZZ) is not supported; "
                                   "base-change to Laurent(QQ) explicitly")
    if A.rows == 0 or A.cols == 0:
        return 0
    return _bareiss([list(r) for r in A.entries], R)[0]


def _det_cofactor(m, R):
    n = len(m)
    if n == 0:
        return R.one
    if n == 1:
        return m[0][0]
    if n == 2:
        return R.sub(R.mul(m[0][0], m[1][1]), R.mul(m[0][1], m[1][0]))
    acc = R.zero
    for j in range(n):
        if R.is_zero(m[0][j]):
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = R.mul(m[0][j], _det_cofactor(minor, R))
        acc = R.add(acc, term) if j % 2 == 0 else R.sub(acc, term)
    return acc


def det(A: Matrix):
    """Determinant over any supported ring (cofactors up to 4x4, Bareiss beyond)."""
    if not A.is_square():
        raise DimensionError(f"determinant of a non-square {A.shape} matrix")
    R = A.ring
    if A.rows <= 4:
        return _det_cofactor([list(r) for r in A.entries], R)
    rank, sign, last = _bareiss([list(r) for r in A.entries], R, square=True)
    if rank < A.rows:
        return R.zero
    return last if sign == 1 else R.neg(last)


def det_laurent(A: Matrix) -> LaurentPoly:
    if not A.ring.is_laurent:
        raise UnsupportedRingError(f"expected a Laurent matrix, got {A.ring}")
    return det(A)


# -- Smith normal form ----------------------------------------------------------

@dataclass(frozen=True)
class SmithForm:
    """``U @ A @ V == S`` with ``U``, ``V`` unimodular and ``S`` diagonal."""

    U: Matrix
    S: Matrix
    V: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.S.entries[i][i] for i in range(min(self.S.rows, self.S.cols))]

    @property
    def invariant_factors(self) -> list[int]:
        """Nonzero diagonal entries, in divisibility order."""
        return [d for d in self.diagonal if d != 0]


def smith_normal_form(A: Matrix) -> SmithForm:
    """Smith normal form over ZZ with transforms.

    Pivot rule: the nonzero entry of least absolute value in the active block,
    first found scanning row by row.
    """
    if A.ring != ZZ:
        raise RingMismatchError(f"Smith normal form is implemented over ZZ, got {A.ring}")
    m, n = A.rows, A.cols
    a = [list(r) for r in A.entries]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for M in (a, V):
            for row in M:
                row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):  # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for M in (a, V):
            for row in M:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        while True:
            i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            best = None
            for i in range(t + 1, m):
                if a[i][t] and (best is None or abs(a[i][t]) < abs(a[best[0]][best[1]])):
                    best = (i, t)
            for j in range(t + 1, n):
                if a[t][j] and (best is None or abs(a[t][j]) < abs(a[best[0]][best[1]])):
                    best = (t, j)
            if best is not None:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % p), None)
            if bad is None:
                break
            # pull a non-multiple into row t; the next pass shrinks the pivot
            add_row(t, bad[0], 1)
            best = (t, t)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    return SmithForm(Matrix(ZZ, m, m, U), Matrix(ZZ, m, n, a), Matrix(ZZ, n, n, V))
