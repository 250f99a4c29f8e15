"""Row reduction over GF(p) on int64 arrays.

Two interchangeable implementations of the same routine:

* ``rref_mod_p_numba``: explicit loops compiled with numba ``@njit``.
* ``rref_mod_p_numpy``: vectorised numpy row operations.

``rref_mod_p`` is bound to the numba version unless numba is missing or the
environment sets ``NOVIKOVLAB_NUMBA=0``.  Both expect ``p < 2**31`` so that
products of residues fit in int64.
"""
import os

import numpy as np

MAX_KERNEL_PRIME = 2**31

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("NOVIKOVLAB_NUMBA", "1") != "0"


def rref_mod_p_numpy(a, p):
    """Reduced row echelon form of ``a`` mod ``p``.

    Returns ``(r, pivots, rank)`` where ``pivots[:rank]`` are the pivot
    columns.  Pivots are taken at the first nonzero entry scanning rows
    downwards, columns left to right.
    """
    r = np.array(a, dtype=np.int64) % p
    rows, cols = r.shape
    pivots = np.full(min(rows, cols), -1, dtype=np.int64)
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.flatnonzero(r[rank:, c])
        if nz.size == 0:
            continue
        i = rank + int(nz[0])
        if i != rank:
            r[[rank, i]] = r[[i, rank]]
        inv = pow(int(r[rank, c]), -1, p)
        r[rank] = (r[rank] * inv) % p
        f = r[:, c].copy()
        f[rank] = 0
        r = (r - np.outer(f, r[rank]) % p) % p
        pivots[rank] = c
        rank += 1
    return r, pivots, rank


def _rref_loops(a, p):
    r = a.copy()
    rows, cols = r.shape
    for i in range(rows):
        for j in range(cols):
            r[i, j] = r[i, j] % p
    pivots = np.full(min(rows, cols), -1, dtype=np.int64)
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        piv = -1
        for i in range(rank, rows):
            if r[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(cols):
                tmp = r[rank, j]
                r[rank, j] = r[piv, j]
                r[piv, j] = tmp
        # inverse of the pivot by extended Euclid
        t, newt = 0, 1
        rr, newr = p, r[rank, c]
        while newr != 0:
            q = rr // newr
            t, newt = newt, t - q * newt
            rr, newr = newr, rr - q * newr
        inv = t % p
        for j in range(cols):
            r[rank, j] = (r[rank, j] * inv) % p
        for i in range(rows):
            if i != rank and r[i, c] != 0:
                f = r[i, c]
                for j in range(cols):
                    r[i, j] = (r[i, j] - f * r[rank, j]) % p
        pivots[rank] = c
        rank += 1
    return r, pivots, rank


_rref_jit = njit(cache=True)(_rref_loops) if HAVE_NUMBA else _rref_loops


def rref_mod_p_numba(a, p):
    a = np.ascontiguousarray(a, dtype=np.int64)
    if a.shape[0] == 0 or a.shape[1] == 0:
        return a.copy(), np.full(0, -1, dtype=np.int64), 0
    r, piv, rank = _rref_jit(a, np.int64(p))
    return r, piv, int(rank)


rref_mod_p = rref_mod_p_numba if USE_NUMBA else rref_mod_p_numpy


def nullspace_mod_p(a, p, rref=None):
    """Basis of ``{x : a x = 0}`` mod ``p`` as the columns of an int64 array."""
    a = np.asarray(a, dtype=np.int64)
    cols = a.shape[1]
    r, piv, rank = (rref or rref_mod_p)(a, p)
    pivset = [int(c) for c in piv[:rank]]
    free = [c for c in range(cols) if c not in set(pivset)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[fc, k] = 1
        for row, pc in enumerate(pivset):
            basis[pc, k] = (-r[row, fc]) % p
    return basis
