"""Reference computations that share no code with the package under test.

Everything here works on plain Python integers, ``itertools`` enumeration or
sympy, never on ``novikovlab`` arithmetic.
"""
from __future__ import annotations

import itertools
import math

import numpy as np
import sympy as sp
from sympy.polys.matrices import DomainMatrix

Z = sp.symbols("z")


def plain(M):
    """Matrix entries as nested lists of Python scalars (ints for ZZ / GF(p))."""
    return [list(r) for r in M.entries]


# -- brute-force cohomology over tiny prime fields ------------------------------------

def _all_vectors(p, r):
    if r == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(p), repeat=r)), dtype=np.int64)


def brute_cohomology_dims(p, ranks, diffs, lo, hi):
    """dim H^n by counting kernel and image vectors; ``diffs[n]`` is a list of rows."""
    out = {}
    for n in range(lo, hi + 1):
        r = ranks.get(n, 0)
        vecs = _all_vectors(p, r)
        d = np.array(diffs.get(n, []), dtype=np.int64).reshape(ranks.get(n + 1, 0), r)
        images = (vecs @ d.T) % p
        ker = int(np.sum(~images.any(axis=1))) if images.shape[1] else len(vecs)
        rp = ranks.get(n - 1, 0)
        dprev = np.array(diffs.get(n - 1, []), dtype=np.int64).reshape(r, rp)
        img = {tuple(row) for row in ((_all_vectors(p, rp) @ dprev.T) % p)}
        size = ker // len(img)
        out[n] = round(math.log(size, p)) if size > 1 else 0
    return out


# -- sympy views of Laurent matrices ------------------------------------------------------

def laurent_to_sympy(f):
    return sum(sp.Integer(int(c)) * Z**e if not hasattr(c, "denominator") or c.denominator == 1
               else sp.Rational(c.numerator, c.denominator) * Z**e for e, c in f.terms)


def sympy_rank_over_fractions(M, p=None):
    """Rank of a Laurent matrix over GF(p)(z) or QQ(z), after clearing z-powers."""
    if M.rows == 0 or M.cols == 0:
        return 0
    low = min((e for r in M.entries for f in r for e, _ in f.terms), default=0)
    K = (sp.GF(p) if p else sp.QQ).frac_field(Z)
    rows = [[K.from_sympy(sp.expand(laurent_to_sympy(f) * Z**(-low))) for f in r] for r in M.entries]
    return DomainMatrix(rows, (M.rows, M.cols), K).rank()


def sympy_det_zz(rows_int, shift_z=True):
    """``det(A - z I)`` as a sympy Poly over ZZ for an integer square matrix."""
    n = len(rows_int)
    A = sp.Matrix(n, n, lambda i, j: rows_int[i][j])
    return sp.Poly((A - Z * sp.eye(n)).det(), Z) if shift_z else sp.Poly(A.det(), Z)


# -- four finitely presented modules, by hand ------------------------------------------

# relation rows, and a membership test for their integer row span worked out by hand
MODULES = {
    "ZZ": ([], lambda v: v[0] == 0),
    "ZZ/4": ([[4]], lambda v: v[0] % 4 == 0),
    "ZZ+ZZ/4+ZZ/6": ([[0, 4, 0], [0, 0, 6]], lambda v: v[0] == 0 and v[1] % 4 == 0 and v[2] % 6 == 0),
    # x(2,1) + y(0,3) = (a,b)  <=>  a even and b - a/2 divisible by 3
    "coker[[2,1],[0,3]]": ([[2, 1], [0, 3]], lambda v: v[0] % 2 == 0 and (v[1] - v[0] // 2) % 3 == 0),
}
