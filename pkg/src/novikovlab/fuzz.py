"""Seeded random complexes, endomorphisms and the property checks run on them.

A complex is assembled in a standard basis from *spheres* (a rank one module
with zero differential) and *disks* (``k --id--> k`` in degrees ``n, n+1``),
then every degree is changed by a random invertible matrix ``P_n`` whose
inverse is tracked alongside, so ``d^n = P_{n+1} d_std^n P_n^-1`` is exact over
ZZ as well.  Endomorphisms are built in the same basis:

* ``iso``: invertible blocks on spheres and on each disk family (unimodular
  over ZZ), no homotopy term.  A chain isomorphism with unit determinants.
* ``quasi_iso``: invertible sphere block, arbitrary disk blocks, plus
  ``ds + sd`` for a random ``s``.  Over ZZ the sphere block is unimodular.
* ``any``: every block arbitrary, plus a homotopy term.
"""
from __future__ import annotations

import math
import random

from .bicomplex import (DoubleComplexWindow, TotCocycle, compare_tot_with_torus, row_exact_at,
                        tot_layout, torus_bicomplex, totalise, validate_bicomplex)
from .complexes import ChainMap, CochainComplex, validate_chain_map, validate_complex
from .errors import DimensionError, UnsupportedRingError
from .linalg import Matrix, det, nullspace_field
from .novikov import mapping_torus, novikov_cohomology_field, novikov_verdict_int
from .rings import QQ, ZZ, RingTag, SeriesDir

MODES = ("iso", "quasi_iso", "any")


def _scalar(rng: random.Random, R: RingTag):
    if R.kind == "Fp":
        return rng.randrange(R.p)
    return R.coerce(rng.randint(-2, 2))


def _unit(rng, R):
    if R.kind == "Fp":
        return rng.randrange(1, R.p)
    if R.kind == "QQ":
        return R.coerce(rng.choice([1, -1, 2, -2]))
    return rng.choice([1, -1])


def _random_matrix(rng, R, rows, cols):
    return Matrix(R, rows, cols, [[_scalar(rng, R) for _ in range(cols)] for _ in range(rows)])


def _random_invertible(rng, R, n, steps=None):
    """``(P, P^-1)`` as a product of elementary matrices; unimodular over ZZ."""
    P = [[R.one if i == j else R.zero for j in range(n)] for i in range(n)]
    Q = [row[:] for row in P]
    for _ in range(steps if steps is not None else 3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            u = _unit(rng, R)
            ui = R.inv(u)
            # P <- P E, Q <- E^-1 Q with E scaling column/row i
            for row in P:
                row[i] = R.mul(row[i], u)
            Q[i] = [R.mul(ui, x) for x in Q[i]]
        else:
            c = _scalar(rng, R)
            # E = I + c e_ij: column j of P gets c * column i; row i of Q loses c * row j
            for row in P:
                row[j] = R.add(row[j], R.mul(c, row[i]))
            Q[i] = [R.sub(x, R.mul(c, y)) for x, y in zip(Q[i], Q[j])]
    return Matrix(R, n, n, P), Matrix(R, n, n, Q)


def _layout(rng, lo, hi, max_rank):
    """Numbers of spheres and disk bottoms per degree, keeping every rank <= max_rank."""
    spheres, disks = {}, {}
    for n in range(lo, hi + 1):
        room = max_rank - disks.get(n - 1, 0)
        a = rng.randint(0, max(0, room // 2)) if n < hi else 0
        s = rng.randint(0, max(0, room - a))
        spheres[n], disks[n] = s, a
    return spheres, disks


def _offsets(spheres, disks, n):
    """Standard basis of degree n: [spheres | disk bottoms a_n | disk tops a_{n-1}]."""
    s, a, b = spheres.get(n, 0), disks.get(n, 0), disks.get(n - 1, 0)
    return s, a, b


def fuzz_generate(seed: int, ring: RingTag, window=(-2, 2), max_rank: int = 3,
                  mode: str = "quasi_iso") -> tuple[CochainComplex, ChainMap]:
    """Deterministic random ``(C, h)`` with ``h`` an endo-chain-map of ``C``."""
    if ring.is_laurent:
        raise UnsupportedRingError("random complexes are generated over base rings only")
    if mode not in MODES:
        raise DimensionError(f"mode must be one of {MODES}")
    lo, hi = window
    if lo > hi or max_rank < 0:
        raise DimensionError("infeasible parameters: empty window or negative rank")
    R = ring
    rng = random.Random(f"{seed}:{ring}:{lo}:{hi}:{max_rank}:{mode}")
    if max_rank == 0:
        C = CochainComplex(R, {}, lo=lo, hi=hi)
        return C, ChainMap.zero(C, C)

    spheres, disks = _layout(rng, lo, hi, max_rank)
    rank = {n: sum(_offsets(spheres, disks, n)) for n in range(lo, hi + 1)}

    # standard differential: disk bottoms in degree n map onto disk tops in degree n+1
    d_std = {}
    for n in range(lo, hi):
        s, a, _ = _offsets(spheres, disks, n)
        s1, a1, b1 = _offsets(spheres, disks, n + 1)
        m = [[R.zero] * rank[n] for _ in range(rank[n + 1])]
        for k in range(a):
            m[s1 + a1 + k][s + k] = R.one
        d_std[n] = Matrix(R, rank[n + 1], rank[n], m)

    # standard endomorphism: sphere block M_n, disk block K_n acting on a_n and on b_{n+1}
    invertible = mode in ("iso", "quasi_iso")
    sphere_blocks, disk_blocks = {}, {}
    for n in range(lo, hi + 1):
        s, a, _ = _offsets(spheres, disks, n)
        sphere_blocks[n] = (_random_invertible(rng, R, s)[0] if invertible
                            else _random_matrix(rng, R, s, s))
        disk_blocks[n] = (_random_invertible(rng, R, a)[0] if mode == "iso"
                          else _random_matrix(rng, R, a, a))
    h_std = {}
    for n in range(lo, hi + 1):
        s, a, b = _offsets(spheres, disks, n)
        h_std[n] = Matrix.blocks(R, [[sphere_blocks[n], None, None],
                                     [None, disk_blocks[n], None],
                                     [None, None, disk_blocks.get(n - 1, Matrix(R, b, b))]],
                                 [s, a, b], [s, a, b])

    if mode != "iso":
        # null-homotopic correction d s + s d with s^n : C^n -> C^{n-1}
        s_map = {n: _random_matrix(rng, R, rank.get(n - 1, 0), rank[n]) for n in range(lo, hi + 1)}
        for n in range(lo, hi + 1):
            term = Matrix.zeros(R, rank[n], rank[n])
            if n - 1 >= lo:
                term = term + d_std[n - 1] @ s_map[n]
            if n + 1 <= hi:
                term = term + s_map[n + 1] @ d_std[n]
            h_std[n] = h_std[n] + term

    P = {n: _random_invertible(rng, R, rank[n]) for n in range(lo, hi + 1)}
    diff = {n: P[n + 1][0] @ d_std[n] @ P[n][1] for n in range(lo, hi)}
    C = CochainComplex(R, rank, diff, lo, hi)
    h = ChainMap(C, C, {n: P[n][0] @ h_std[n] @ P[n][1] for n in range(lo, hi + 1)})
    assert validate_complex(C), "generator produced d o d != 0"
    assert validate_chain_map(h), "generator produced a non-chain map"
    return C, h


# -- cocycles -----------------------------------------------------------------------

def _clear_denominators(v):
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return [int(x * den) for x in v]


def random_cocycle(rng: random.Random, D: DoubleComplexWindow, n: int, direction: str = "lt") -> TotCocycle:
    """Random element of the cocycles of the window in total degree ``n``.

    ``lt``: the kernel of the window's total differential (nothing is known to
    the right of ``p_hi``, and the support starts inside the window).
    ``rt``: additionally ``dh(x_{p_hi}) = 0``, since the support ends at
    ``p_hi``.  For torus windows that says the ``C^{s+1}`` part of
    ``x_{p_hi}`` vanishes; other windows get ``x_{p_hi} = 0``.
    Over ZZ the kernel is computed over QQ and scaled to integers.
    """
    R = D.ring
    lay = tot_layout(D, n)
    size = sum(r for *_, r in lay)
    if not size:
        return TotCocycle(n, {})
    F = QQ if R == ZZ else R
    if not F.is_field:
        raise UnsupportedRingError(f"cannot sample cocycles over {R}")
    tot = totalise(D)
    rows = [list(r) for r in tot.d(n).entries] if tot.rank(n + 1) else []
    if direction == "rt":
        p, q, off, r = lay[-1]
        if p == D.p_hi:
            kill = D.torus[0].rank(p + q + 1) if D.torus is not None else r
            for k in range(kill):
                rows.append([R.one if j == off + k else R.zero for j in range(size)])
    A = Matrix(F, len(rows), size, [[F.coerce(x) for x in row] for row in rows]) if rows else \
        Matrix(F, 0, size)
    basis = nullspace_field(A)
    v = [F.zero] * size
    for b in basis:
        c = _scalar(rng, F)
        v = [F.add(x, F.mul(c, y)) for x, y in zip(v, b)]
    if R == ZZ:
        v = _clear_denominators(v)
    return TotCocycle(n, {p: tuple(v[off:off + r]) for p, q, off, r in lay})


# -- property suite -------------------------------------------------------------------

def torus_checks(C: CochainComplex, h: ChainMap, window=(0, 3)) -> dict:
    """Laws and vanishing statements for one ``(C, h)``; each value is a bool.

    Over a field both Novikov cohomologies of the torus must vanish.  Over
    ZZ the negative verdict must not be non-acyclic, and if ``h`` is a
    degreewise unit-determinant isomorphism both verdicts must be acyclic.
    """
    out = {}
    T = mapping_torus(C, h, "z")
    out["torus_valid"] = bool(validate_complex(T))
    D = torus_bicomplex(C, h, *window)
    out["bicomplex_laws"] = bool(validate_bicomplex(D))
    out["identification"] = bool(compare_tot_with_torus(D, T))
    if C.ring.is_field:
        out["rows_exact"] = all(row_exact_at(D, p, q) for p, q in D.positions()
                                if D.p_lo < p < D.p_hi)
        for d in SeriesDir:
            out[f"novikov_{d.value}_zero"] = novikov_cohomology_field(T, d).is_zero()
    else:
        neg = novikov_verdict_int(T, SeriesDir.RT)
        out["novikov_rt_not_refuted"] = not neg.non_acyclic
        iso = all(abs(det(h[n])) == 1 for n in C.degrees())
        if iso:
            out["novikov_rt_acyclic"] = neg.acyclic
            out["novikov_lt_acyclic"] = novikov_verdict_int(T, SeriesDir.LT).acyclic
    return out
