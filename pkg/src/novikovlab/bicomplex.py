"""Finite windows onto double complexes, their totalisations and contractions.

A window covers columns ``p_lo..p_hi`` and rows ``q_lo..q_hi``; everything
outside is treated as zero by the matrices but *not* by the semantics of the
contraction routines, which only certify what is visible.

``dh(p, q)`` maps ``D^{p,q} -> D^{p+1,q}`` and ``dv(p, q)`` maps
``D^{p,q} -> D^{p,q+1}``; both are zero-sized when the target lies outside.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

from .complexes import OK, ChainMap, Check, CochainComplex, validate_chain_map
from .errors import ContractionError, DimensionError, UnsupportedRingError, ValidationError
from .linalg import Matrix, rank_field, solve_field
from .rings import RingTag


class TotChoice(enum.Enum):
    SUM = "sum"
    PROD = "prod"
    LT = "lt"
    RT = "rt"


class DoubleComplexWindow:
    def __init__(self, ring: RingTag, p_lo: int, p_hi: int, q_lo: int, q_hi: int,
                 rank: Mapping[tuple, int], dh: Mapping[tuple, Matrix] | None = None,
                 dv: Mapping[tuple, Matrix] | None = None):
        if p_lo > p_hi or q_lo > q_hi:
            raise DimensionError("empty window")
        self.ring = ring
        self.p_lo, self.p_hi, self.q_lo, self.q_hi = p_lo, p_hi, q_lo, q_hi
        self._rank = {}
        for (p, q), r in rank.items():
            if r and not self.inside(p, q):
                raise DimensionError(f"rank given at ({p},{q}) outside the window")
            if r:
                self._rank[(p, q)] = int(r)
        self._dh = self._store(dh or {}, 1, 0, "dh")
        self._dv = self._store(dv or {}, 0, 1, "dv")
        self.torus = None  # (C, h) when built by torus_bicomplex

    def _store(self, maps, dp, dq, name):
        out = {}
        for (p, q), m in maps.items():
            shape = (self.rank(p + dp, q + dq), self.rank(p, q))
            if m.shape != shape:
                raise DimensionError(f"{name}({p},{q}) has shape {m.shape}, expected {shape}")
            if m.rows and m.cols:
                out[(p, q)] = m
        return out

    def inside(self, p: int, q: int) -> bool:
        return self.p_lo <= p <= self.p_hi and self.q_lo <= q <= self.q_hi

    def rank(self, p: int, q: int) -> int:
        return self._rank.get((p, q), 0)

    def dh(self, p: int, q: int) -> Matrix:
        m = self._dh.get((p, q))
        return m if m is not None else Matrix.zeros(self.ring, self.rank(p + 1, q), self.rank(p, q))

    def dv(self, p: int, q: int) -> Matrix:
        m = self._dv.get((p, q))
        return m if m is not None else Matrix.zeros(self.ring, self.rank(p, q + 1), self.rank(p, q))

    def positions(self):
        return [(p, q) for p in range(self.p_lo, self.p_hi + 1) for q in range(self.q_lo, self.q_hi + 1)]

    @property
    def ranks(self) -> dict:
        return dict(self._rank)

    @property
    def dh_maps(self) -> dict:
        return dict(self._dh)

    @property
    def dv_maps(self) -> dict:
        return dict(self._dv)

    def zero_vector(self, p: int, q: int) -> tuple:
        return (self.ring.zero,) * self.rank(p, q)

    def with_maps(self, dh=None, dv=None) -> DoubleComplexWindow:
        """Copy with some maps replaced (used to build deliberately broken inputs)."""
        new_dh = dict(self._dh)
        new_dh.update(dh or {})
        new_dv = dict(self._dv)
        new_dv.update(dv or {})
        return DoubleComplexWindow(self.ring, self.p_lo, self.p_hi, self.q_lo, self.q_hi,
                                   self._rank, new_dh, new_dv)

    def __repr__(self):
        return (f"DoubleComplexWindow({self.ring}, p=[{self.p_lo},{self.p_hi}], "
                f"q=[{self.q_lo},{self.q_hi}])")


def validate_bicomplex(D: DoubleComplexWindow) -> Check:
    """The three double complex laws, wherever the composite is visible."""
    for p, q in D.positions():
        if D.rank(p, q) == 0:
            continue
        if D.rank(p + 2, q) and not (D.dh(p + 1, q) @ D.dh(p, q)).is_zero():
            return Check(False, (p, q), f"dh o dh != 0 at ({p},{q})")
        if D.rank(p, q + 2) and not (D.dv(p, q + 1) @ D.dv(p, q)).is_zero():
            return Check(False, (p, q), f"dv o dv != 0 at ({p},{q})")
        if D.rank(p + 1, q + 1):
            s = D.dh(p, q + 1) @ D.dv(p, q) + D.dv(p + 1, q) @ D.dh(p, q)
            if not s.is_zero():
                return Check(False, (p, q), f"square at ({p},{q}) does not anticommute")
    return OK


def from_columns(cols: Mapping[int, CochainComplex], dh: Mapping[tuple, Matrix]) -> DoubleComplexWindow:
    """Turn commuting columns into a double complex by twisting column ``p`` with ``(-1)^p``."""
    if not cols:
        raise DimensionError("at least one column is needed")
    ring = next(iter(cols.values())).ring
    p_lo, p_hi = min(cols), max(cols)
    q_lo = min(c.lo for c in cols.values())
    q_hi = max(c.hi for c in cols.values())
    empty = CochainComplex.zero(ring)
    col = lambda p: cols.get(p, empty)  # noqa: E731
    rank = {(p, q): col(p).rank(q) for p in range(p_lo, p_hi + 1) for q in range(q_lo, q_hi + 1)}
    dv = {}
    for p, C in cols.items():
        for n, m in C.diff.items():
            dv[(p, n)] = m.scale(-1) if p % 2 else m
    D = DoubleComplexWindow(ring, p_lo, p_hi, q_lo, q_hi, rank, dh, dv)
    for p in range(p_lo, p_hi):
        for q in range(q_lo, q_hi):
            lhs = D.dh(p, q + 1) @ col(p).d(q)
            rhs = col(p + 1).d(q) @ D.dh(p, q)
            if lhs != rhs:
                raise ValidationError(f"horizontal map does not commute with the columns at ({p},{q})",
                                      (p, q))
    validate_bicomplex(D).raise_if_failed()
    return D


def tot_layout(D: DoubleComplexWindow, n: int) -> list[tuple[int, int, int, int]]:
    """Summands of ``Tot^n``: ``(p, q, offset, rank)`` in increasing ``p``."""
    out = []
    off = 0
    for p in range(D.p_lo, D.p_hi + 1):
        q = n - p
        r = D.rank(p, q)
        if r:
            out.append((p, q, off, r))
            off += r
    return out


def totalise(D: DoubleComplexWindow, choice: TotChoice = TotChoice.SUM) -> CochainComplex:
    """Total complex of the window, ``d = dh + dv``.

    On a finite window all four totalisations agree; ``choice`` is recorded
    on the result as ``tot_choice`` for the reader's benefit.
    """
    choice = TotChoice(choice)
    R = D.ring
    n_lo, n_hi = D.p_lo + D.q_lo, D.p_hi + D.q_hi
    layouts = {n: tot_layout(D, n) for n in range(n_lo, n_hi + 2)}
    size = {n: sum(r for *_, r in lay) for n, lay in layouts.items()}
    diff = {}
    for n in range(n_lo, n_hi + 1):
        rows, cols = size[n + 1], size[n]
        if not rows or not cols:
            continue
        target = {(p, q): off for p, q, off, _ in layouts[n + 1]}
        grid = [[R.zero] * cols for _ in range(rows)]
        for p, q, off, r in layouts[n]:
            for blk, (tp, tq) in ((D.dv(p, q), (p, q + 1)), (D.dh(p, q), (p + 1, q))):
                if (tp, tq) not in target:
                    continue
                toff = target[(tp, tq)]
                for i, row in enumerate(blk.entries):
                    grid[toff + i][off:off + r] = row
        diff[n] = Matrix(R, rows, cols, grid)
    out = CochainComplex(R, {n: s for n, s in size.items() if n <= n_hi}, diff, n_lo, n_hi)
    out.tot_choice = choice
    return out


def torus_bicomplex(C: CochainComplex, h: ChainMap, p_lo: int, p_hi: int) -> DoubleComplexWindow:
    """The double complex ``D^{p,q} = C^{p+q+1} + C^{p+q}`` of a self map ``h``.

    ``dh(x, y) = (0, -x)`` and ``dv(x, y) = (-d x, h x + d y)``; every column is
    a shift of ``Cone(h)``.
    """
    if h.source != C or h.target != C:
        raise ValidationError("h must be a self map of C")
    validate_chain_map(h).raise_if_failed()
    R = C.ring
    q_lo, q_hi = C.lo - 1 - p_hi, C.hi - p_lo
    rank, dh, dv = {}, {}, {}
    for p in range(p_lo, p_hi + 1):
        for q in range(q_lo, q_hi + 1):
            s = p + q
            a, b = C.rank(s + 1), C.rank(s)
            if not a + b:
                continue
            rank[(p, q)] = a + b
            a2, b2 = C.rank(s + 2), C.rank(s + 1)
            dv[(p, q)] = Matrix.blocks(R, [[-C.d(s + 1), None], [h[s + 1], C.d(s)]], [a2, b2], [a, b])
            if p < p_hi:
                dh[(p, q)] = Matrix.blocks(R, [[None, None], [Matrix.scalar(R, a, -1), None]],
                                           [a2, b2], [a, b])
    D = DoubleComplexWindow(R, p_lo, p_hi, q_lo, q_hi, rank, dh, dv)
    D.torus = (C, h)
    return D


# -- exactness --------------------------------------------------------------------

def column_exact_at(D: DoubleComplexWindow, p: int, q: int) -> bool:
    _need_field(D)
    return D.rank(p, q) - rank_field(D.dv(p, q)) - rank_field(D.dv(p, q - 1)) == 0


def row_exact_at(D: DoubleComplexWindow, p: int, q: int) -> bool:
    _need_field(D)
    return D.rank(p, q) - rank_field(D.dh(p, q)) - rank_field(D.dh(p - 1, q)) == 0


def _need_field(D):
    if not D.ring.is_field:
        raise UnsupportedRingError(f"exactness by rank counting needs a field, got {D.ring}")


# -- cocycles and witnesses -------------------------------------------------------

@dataclass
class TotCocycle:
    """Components ``x_p`` in ``D^{p, n-p}``; absent columns are zero."""

    n: int
    terms: dict = field(default_factory=dict)

    def get(self, D: DoubleComplexWindow, p: int) -> tuple:
        v = self.terms.get(p)
        return tuple(v) if v is not None else D.zero_vector(p, self.n - p)


@dataclass
class Witness:
    """Cochains ``y_p`` in ``D^{p, n-p-1}`` with ``dv(y_p) + dh(y_{p-1}) = x_p`` on ``verified_range``."""

    n: int
    terms: dict
    verified_range: tuple
    direction: str

    def get(self, D: DoubleComplexWindow, p: int) -> tuple:
        v = self.terms.get(p)
        return tuple(v) if v is not None else D.zero_vector(p, self.n - p - 1)


def _sub(R, a, b):
    return tuple(R.sub(x, y) for x, y in zip(a, b))


def _add(R, a, b):
    return tuple(R.add(x, y) for x, y in zip(a, b))


def _is_zero(R, v):
    return all(R.is_zero(x) for x in v)


def cocycle_residual(D: DoubleComplexWindow, x: TotCocycle, i: int) -> tuple:
    """``dv(x_i) + dh(x_{i-1})`` in ``D^{i, n-i+1}``."""
    R, n = D.ring, x.n
    return _add(R, D.dv(i, n - i).apply(x.get(D, i)), D.dh(i - 1, n - i + 1).apply(x.get(D, i - 1)))


def check_cocycle(D: DoubleComplexWindow, x: TotCocycle, direction: str = "lt") -> Check:
    """The cocycle condition ``dv(x_i) + dh(x_{i-1}) = 0`` on the visible columns.

    For ``lt`` the window holds the start of the support, so every column is
    checked; for ``rt`` the left edge column needs ``x_{p_lo - 1}`` and is skipped.
    """
    for p, v in x.terms.items():
        if not D.p_lo <= p <= D.p_hi or len(v) != D.rank(p, x.n - p):
            raise DimensionError(f"cocycle term at column {p} does not fit the window")
    start = D.p_lo if direction == "lt" else D.p_lo + 1
    for i in range(start, D.p_hi + 1):
        if not _is_zero(D.ring, cocycle_residual(D, x, i)):
            return Check(False, i, f"cocycle condition fails at column {i}")
    return OK


def contract_lt(D: DoubleComplexWindow, x: TotCocycle) -> Witness:
    """Solve ``dv(y_i) = x_i - dh(y_{i-1})`` column by column, left to right.

    Needs exact columns and a field; ``y_{p_lo - 1}`` is zero because the
    cocycle's support starts inside the window.
    """
    _need_field(D)
    R, n = D.ring, x.n
    chk = check_cocycle(D, x, "lt")
    if not chk:
        raise ContractionError(chk.message, chk.where, "cocycle")
    y = {}
    prev = D.zero_vector(D.p_lo - 1, n - D.p_lo)
    for i in range(D.p_lo, D.p_hi + 1):
        q = n - i
        r = _sub(R, x.get(D, i), D.dh(i - 1, q).apply(prev))
        sol = solve_field(D.dv(i, q - 1), r)
        if sol is None:
            exact = column_exact_at(D, i, q)
            raise ContractionError(
                f"residual at column {i} is not in the image of dv"
                + ("" if exact else f"; column {i} is not exact at q={q}"),
                i, "cocycle" if exact else "column exactness")
        y[i] = sol
        prev = sol
    return Witness(n, y, (D.p_lo, D.p_hi), "lt")


def _torus_row_preimage(D, r, p, q):
    # dh(x, y) = (0, -x) on C^{s+1} + C^s, so (a, b) has preimage (-b, 0) iff a = 0
    C, _ = D.torus
    s = p + q  # target D^{p,q}: C^{s+1} + C^s; source D^{p-1,q}: C^s + C^{s-1}
    a_len = C.rank(s + 1)
    a, b = r[:a_len], r[a_len:]
    R = D.ring
    if not _is_zero(R, a):
        return None
    return tuple(R.neg(v) for v in b) + (R.zero,) * C.rank(s - 1)


def contract_rt(D: DoubleComplexWindow, x: TotCocycle) -> Witness:
    """Mirror of :func:`contract_lt`: solve ``dh(y_{i-1}) = x_i - dv(y_i)`` right to left.

    Torus windows use the closed-form row preimage and work over any ring;
    other windows need a field and exact rows.
    """
    torus = D.torus is not None
    if not torus:
        _need_field(D)
    R, n = D.ring, x.n
    chk = check_cocycle(D, x, "rt")
    if not chk:
        raise ContractionError(chk.message, chk.where, "cocycle")
    y = {}
    cur = D.zero_vector(D.p_hi, n - D.p_hi - 1)  # y_{p_hi} = 0
    for i in range(D.p_hi, D.p_lo, -1):
        q = n - i
        r = _sub(R, x.get(D, i), D.dv(i, q - 1).apply(cur))
        sol = _torus_row_preimage(D, r, i, q) if torus else solve_field(D.dh(i - 1, q), r)
        if sol is None:
            # at i = p_hi the residual is x_{p_hi}, and dh(x_{p_hi}) = 0 is part of being a cocycle
            exact = torus or i == D.p_hi or row_exact_at(D, i, q)
            reason = "cocycle" if exact else "row exactness"
            raise ContractionError(f"residual at column {i} is not in the image of dh", i, reason)
        y[i - 1] = sol
        cur = sol
    y[D.p_hi] = D.zero_vector(D.p_hi, n - D.p_hi - 1)
    return Witness(n, dict(sorted(y.items())), (D.p_lo + 1, D.p_hi), "rt")


def verify_witness(D: DoubleComplexWindow, x: TotCocycle, w: Witness) -> Check:
    """Re-check ``dv(y_i) + dh(y_{i-1}) = x_i`` on the verified range by matrix products."""
    R, n = D.ring, x.n
    lo, hi = w.verified_range
    for i in range(lo, hi + 1):
        q = n - i
        yi = Matrix(R, D.rank(i, q - 1), 1, [[v] for v in w.get(D, i)])
        yp = Matrix(R, D.rank(i - 1, q), 1, [[v] for v in w.get(D, i - 1)])
        lhs = D.dv(i, q - 1) @ yi + D.dh(i - 1, q) @ yp
        rhs = Matrix(R, D.rank(i, q), 1, [[v] for v in x.get(D, i)])
        if lhs != rhs:
            return Check(False, i, f"dv(y_{i}) + dh(y_{i - 1}) != x_{i}")
    return OK


# -- identification with the mapping torus ---------------------------------------

def compare_tot_with_torus(D: DoubleComplexWindow, T: CochainComplex) -> Check:
    """Block ``(p', p)`` of ``Tot D`` must be the ``z^{p'-p}`` coefficient of ``T``'s differential."""
    R = D.ring
    tot = totalise(D, TotChoice.SUM)
    width = D.p_hi - D.p_lo
    for n in range(T.lo, T.hi + 1):
        src, dst = tot_layout(D, n), tot_layout(D, n + 1)
        if any(r != T.rank(n) for *_, r in src) or any(r != T.rank(n + 1) for *_, r in dst):
            return Check(False, (n,), f"ranks of Tot^{n} do not match T^{n} column by column")
        dT = T.d(n)
        for row in dT.entries:
            for f in row:
                if any(abs(e) > width for e, _ in f.terms):
                    return Check(False, (n,), f"T's d^{n} has a z-power wider than the window")
        big = tot.d(n)
        for p, q, off, r in src:
            for tp, tq, toff, tr in dst:
                e = tp - p
                coeff = Matrix._raw(R, tr, r, tuple(tuple(f.coeff(e) for f in row) for row in dT.entries))
                block = big.submatrix(toff, toff + tr, off, off + r)
                if block != coeff:
                    return Check(False, (n, tp, p),
                                 f"block (column {tp} <- column {p}) of Tot^{n} differs from "
                                 f"the z^{e} coefficient of T's d^{n}")
    return OK


def check_tot_sum_is_torus(C: CochainComplex, h: ChainMap, window: tuple[int, int]) -> Check:
    from .novikov import mapping_torus

    p_lo, p_hi = window
    D = torus_bicomplex(C, h, p_lo, p_hi)
    return compare_tot_with_torus(D, mapping_torus(C, h, "z"))
