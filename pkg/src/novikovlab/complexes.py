"""Bounded cochain complexes of finitely generated free modules.

``C.d(n)`` is the matrix of ``d^n : C^n -> C^{n+1}``, of shape
``rank(n+1) x rank(n)``.  Shifts use ``C[k]^n = C^{n+k}`` with differential
``(-1)^k d``; cones use ``Cone(f)^n = X^{n+1} + Y^n`` with differential
``[[-d_X, 0], [f, d_Y]]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import DimensionError, RingMismatchError, UnsupportedRingError, ValidationError
from .linalg import Matrix, rank_field, smith_normal_form
from .rings import ZZ, LaurentPoly, RingTag


@dataclass(frozen=True)
class Check:
    """Outcome of a law check; truthy when the law holds."""

    ok: bool
    where: object = None
    message: str = "ok"

    def __bool__(self):
        return self.ok

    def raise_if_failed(self):
        if not self.ok:
            raise ValidationError(self.message, self.where)

    def to_json(self):
        out = {"ok": self.ok, "message": self.message}
        if self.where is not None:
            out["where"] = list(self.where) if isinstance(self.where, tuple) else self.where
        return out


OK = Check(True)


class CochainComplex:
    """Graded ranks plus differential matrices over a tagged ring.

    Only the shapes are checked on construction; the square-zero law is the
    job of :func:`validate_complex` so that broken inputs can be reported.
    """

    cone_of = None     # the ChainMap when built by cone()
    tot_choice = None  # the TotChoice when built by totalise()

    def __init__(self, ring: RingTag, ranks: Mapping[int, int], diff: Mapping[int, Matrix] | None = None,
                 lo: int | None = None, hi: int | None = None):
        support = [n for n, r in ranks.items() if r]
        if any(r < 0 for r in ranks.values()):
            raise DimensionError("ranks must be non-negative")
        if lo is None:
            lo = min(support) if support else 0
        if hi is None:
            hi = max(support) if support else lo
        if support and (min(support) < lo or max(support) > hi):
            raise DimensionError(f"nonzero ranks outside the declared bounds [{lo}, {hi}]")
        self.ring = ring
        self.lo, self.hi = lo, hi
        self.ranks = {n: int(r) for n, r in sorted(ranks.items()) if r}
        self.diff: dict[int, Matrix] = {}
        for n, m in sorted((diff or {}).items()):
            if m.ring != ring:
                raise RingMismatchError(f"differential d^{n} is over {m.ring}, complex over {ring}")
            if m.shape != (self.rank(n + 1), self.rank(n)):
                raise DimensionError(
                    f"d^{n} has shape {m.shape}, expected {(self.rank(n + 1), self.rank(n))}", )
            if m.rows and m.cols:
                self.diff[n] = m

    @classmethod
    def zero(cls, ring: RingTag) -> CochainComplex:
        return cls(ring, {})

    @classmethod
    def concentrated(cls, ring: RingTag, degree: int, rank: int = 1) -> CochainComplex:
        return cls(ring, {degree: rank})

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def d(self, n: int) -> Matrix:
        m = self.diff.get(n)
        if m is None:
            return Matrix.zeros(self.ring, self.rank(n + 1), self.rank(n))
        return m

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    @property
    def total_rank(self) -> int:
        return sum(self.ranks.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** (n % 2) * r for n, r in self.ranks.items())

    def __eq__(self, other):
        if not isinstance(other, CochainComplex):
            return NotImplemented
        return (self.ring == other.ring and self.ranks == other.ranks
                and (self.lo, self.hi) == (other.lo, other.hi)
                and all(self.d(n) == other.d(n) for n in set(self.diff) | set(other.diff)))

    def __hash__(self):
        return hash((self.ring, tuple(self.ranks.items())))

    def __repr__(self):
        return f"CochainComplex({self.ring}, ranks={self.ranks})"


class ChainMap:
    """Degreewise matrices ``comps[n] : source^n -> target^n``."""

    def __init__(self, source: CochainComplex, target: CochainComplex,
                 comps: Mapping[int, Matrix] | None = None):
        if source.ring != target.ring:
            raise RingMismatchError(f"chain map from {source.ring} to {target.ring}")
        self.source, self.target = source, target
        self.ring = source.ring
        self.comps: dict[int, Matrix] = {}
        for n, m in sorted((comps or {}).items()):
            if m.ring != self.ring:
                raise RingMismatchError(f"component {n} is over {m.ring}")
            if m.shape != (target.rank(n), source.rank(n)):
                raise DimensionError(
                    f"component {n} has shape {m.shape}, expected {(target.rank(n), source.rank(n))}")
            if m.rows and m.cols:
                self.comps[n] = m

    def __getitem__(self, n: int) -> Matrix:
        m = self.comps.get(n)
        if m is None:
            return Matrix.zeros(self.ring, self.target.rank(n), self.source.rank(n))
        return m

    @classmethod
    def identity(cls, C: CochainComplex) -> ChainMap:
        return cls(C, C, {n: Matrix.identity(C.ring, r) for n, r in C.ranks.items()})

    @classmethod
    def scalar(cls, C: CochainComplex, c) -> ChainMap:
        return cls(C, C, {n: Matrix.scalar(C.ring, r, c) for n, r in C.ranks.items()})

    @classmethod
    def zero(cls, source: CochainComplex, target: CochainComplex) -> ChainMap:
        return cls(source, target, {})

    def degrees(self) -> range:
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        return range(lo, hi + 1)

    def __add__(self, other: ChainMap) -> ChainMap:
        return ChainMap(self.source, self.target,
                        {n: self[n] + other[n] for n in self.degrees()})

    def __sub__(self, other: ChainMap) -> ChainMap:
        return ChainMap(self.source, self.target,
                        {n: self[n] - other[n] for n in self.degrees()})

    def __matmul__(self, other: ChainMap) -> ChainMap:
        """Composition ``self o other``."""
        return ChainMap(other.source, self.target,
                        {n: self[n] @ other[n] for n in other.degrees()})

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and all(self[n] == other[n] for n in self.degrees()))

    __hash__ = None

    def __repr__(self):
        return f"ChainMap({self.source!r} -> {self.target!r})"


def validate_complex(C: CochainComplex) -> Check:
    """Check ``d^{n+1} d^n = 0`` everywhere; names the first failing degree."""
    for n in range(C.lo - 1, C.hi + 1):
        if C.rank(n) and C.rank(n + 2) and not (C.d(n + 1) @ C.d(n)).is_zero():
            return Check(False, n, f"d^{n + 1} o d^{n} != 0 at degree {n}")
    return OK


def validate_chain_map(f: ChainMap) -> Check:
    for n in range(min(f.source.lo, f.target.lo) - 1, max(f.source.hi, f.target.hi) + 1):
        lhs = f.target.d(n) @ f[n]
        rhs = f[n + 1] @ f.source.d(n)
        if lhs != rhs:
            return Check(False, n, f"chain map does not commute with d^{n}")
    return OK


def shift(C: CochainComplex, k: int) -> CochainComplex:
    sign = -1 if k % 2 else 1
    ranks = {n - k: r for n, r in C.ranks.items()}
    diff = {n - k: (m.scale(sign) if sign < 0 else m) for n, m in C.diff.items()}
    return CochainComplex(C.ring, ranks, diff, C.lo - k, C.hi - k)


def cone(f: ChainMap) -> CochainComplex:
    X, Y = f.source, f.target
    R = f.ring
    lo, hi = min(X.lo - 1, Y.lo), max(X.hi - 1, Y.hi)
    ranks = {n: X.rank(n + 1) + Y.rank(n) for n in range(lo, hi + 1)}
    diff = {}
    for n in range(lo, hi):
        diff[n] = Matrix.blocks(R, [[-X.d(n + 1), None], [f[n + 1], Y.d(n)]],
                                [X.rank(n + 2), Y.rank(n + 1)], [X.rank(n + 1), Y.rank(n)])
    out = CochainComplex(R, ranks, diff, lo, hi)
    out.cone_of = f
    return out


def split_cone(B: CochainComplex, source_ranks: Mapping[int, int]) -> ChainMap:
    """Recover ``f`` from ``B = Cone(f)`` given the ranks of the source ``X``.

    ``B^n`` is read as ``X^{n+1} + Y^n``; the blocks of ``B``'s differential
    must have the cone shape ``[[-d_X, 0], [f, d_Y]]``.
    """
    R = B.ring
    xr = {n: r for n, r in source_ranks.items() if r}
    yr = {n: B.rank(n) - xr.get(n + 1, 0) for n in range(B.lo, B.hi + 1)}
    if any(r < 0 for r in yr.values()):
        raise ValidationError("source ranks exceed the ranks of the complex")
    dx, dy, comps = {}, {}, {}
    for n in range(B.lo - 1, B.hi + 1):
        a, b = xr.get(n + 1, 0), yr.get(n, 0)
        a2, b2 = xr.get(n + 2, 0), yr.get(n + 1, 0)
        m = B.d(n)
        upper_right = m.submatrix(0, a2, a, a + b)
        if not upper_right.is_zero():
            raise ValidationError(f"d^{n} is not of cone shape (upper right block)", n)
        dx[n + 1] = -m.submatrix(0, a2, 0, a)
        dy[n] = m.submatrix(a2, a2 + b2, a, a + b)
        comps[n + 1] = m.submatrix(a2, a2 + b2, 0, a)
    X = CochainComplex(R, xr, dx)
    Y = CochainComplex(R, yr, dy)
    f = ChainMap(X, Y, comps)
    validate_chain_map(f).raise_if_failed()
    return f


@dataclass(frozen=True)
class CohomologyGroup:
    """``ZZ^free_rank + sum ZZ/t`` over ZZ; over a field only ``free_rank`` (the dimension) is used."""

    free_rank: int
    torsion: tuple = ()

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = ([f"Z^{self.free_rank}"] if self.free_rank > 1 else
                 ["Z"] if self.free_rank == 1 else []) + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


@dataclass
class CohomologyReport:
    ring: RingTag
    groups: dict = field(default_factory=dict)

    @property
    def over_field(self) -> bool:
        return self.ring.is_field or (self.ring.is_laurent and self.ring.base.is_field)

    def dims(self) -> dict:
        return {n: g.free_rank for n, g in self.groups.items()}

    def __getitem__(self, n):
        return self.groups.get(n, CohomologyGroup(0))

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.groups.values())

    def to_json(self):
        out = {}
        for n, g in sorted(self.groups.items()):
            if self.over_field:
                out[str(n)] = {"dim": g.free_rank}
            else:
                out[str(n)] = {"free_rank": g.free_rank, "torsion": list(g.torsion)}
        return {"ring": str(self.ring), "degrees": out}


def cohomology_field(C: CochainComplex) -> CohomologyReport:
    if not C.ring.is_field:
        raise UnsupportedRingError(f"cohomology_field needs QQ or GF(p), got {C.ring}")
    ranks = {n: rank_field(C.d(n)) for n in range(C.lo - 1, C.hi + 1)}
    groups = {n: CohomologyGroup(C.rank(n) - ranks[n] - ranks[n - 1]) for n in C.degrees()}
    return CohomologyReport(C.ring, groups)


def cohomology_int(C: CochainComplex) -> CohomologyReport:
    """Cohomology over ZZ via Smith normal forms of the differentials.

    ``ker d^n`` is a direct summand, so the torsion of ``H^n`` is the torsion
    of ``coker d^{n-1}``: the invariant factors of ``d^{n-1}`` above 1.
    """
    if C.ring != ZZ:
        raise RingMismatchError(f"cohomology_int needs ZZ, got {C.ring}")
    factors = {n: smith_normal_form(C.d(n)).invariant_factors for n in range(C.lo - 1, C.hi + 1)}
    groups = {}
    for n in C.degrees():
        free = C.rank(n) - len(factors[n]) - len(factors[n - 1])
        groups[n] = CohomologyGroup(free, tuple(t for t in factors[n - 1] if t > 1))
    return CohomologyReport(ZZ, groups)


def cohomology(C: CochainComplex) -> CohomologyReport:
    return cohomology_int(C) if C.ring == ZZ else cohomology_field(C)


def is_quasi_iso(h: ChainMap) -> bool:
    """Whether ``h`` induces isomorphisms on cohomology (fields only)."""
    if not h.ring.is_field:
        raise UnsupportedRingError(f"quasi-isomorphism test is unsupported over {h.ring}")
    return cohomology_field(cone(h)).is_zero()


def coefficient_map(source: RingTag, target: RingTag):
    """The canonical entrywise ring map, or UnsupportedRingError."""
    if source == target:
        return lambda x: x
    if target.is_laurent:
        if source.is_laurent:
            inner = coefficient_map(source.base, target.base)
            return lambda f: LaurentPoly(target.base, [(e, inner(c)) for e, c in f.terms])
        inner = coefficient_map(source, target.base)
        return lambda c: LaurentPoly(target.base, {0: inner(c)})
    if source == ZZ and not target.is_laurent:
        return target.coerce
    raise UnsupportedRingError(f"no canonical map {source} -> {target}")


def base_change(C: CochainComplex, target: RingTag) -> CochainComplex:
    fn = coefficient_map(C.ring, target)
    out = CochainComplex(target, C.ranks, {n: m.map(fn, target) for n, m in C.diff.items()},
                         C.lo, C.hi)
    validate_complex(out).raise_if_failed()
    return out


def base_change_map(h: ChainMap, target: RingTag, source: CochainComplex | None = None,
                    dest: CochainComplex | None = None) -> ChainMap:
    fn = coefficient_map(h.ring, target)
    source = source or base_change(h.source, target)
    dest = dest or (source if h.target is h.source else base_change(h.target, target))
    return ChainMap(source, dest, {n: m.map(fn, target) for n, m in h.comps.items()})
