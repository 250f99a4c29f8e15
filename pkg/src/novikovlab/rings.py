"""Exact coefficient rings, Laurent polynomials and truncated Laurent series.

Scalars are plain Python values: ``int`` for ZZ, ``fractions.Fraction`` for
QQ and an ``int`` in ``[0, p)`` for GF(p).  A :class:`RingTag` knows how to
do arithmetic on them, so that matrix code can stay generic.

Laurent series never exist in full.  A :class:`SeriesWindow` stores the
coefficients on an exponent interval ``[lo, hi]`` and records which side of
the window is known:

* ``SeriesDir.LT`` (series in ``R((z))``): exactly zero below ``lo``,
  unknown above ``hi``.
* ``SeriesDir.RT`` (series in ``R((z^-1))``): exactly zero above ``hi``,
  unknown below ``lo``.

>>> f = LaurentPoly(ZZ, {0: 2, 1: -1})
>>> g = series_invert(f, SeriesDir.RT, 3)
>>> [g.coeff(e) for e in (-1, -2, -3)]
[-1, -2, -4]
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

from .errors import NotAUnitError, RingMismatchError, UnsupportedRingError, WindowError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class RingTag:
    """Names a coefficient ring: ZZ, QQ, GF(p) or the Laurent ring over one of them."""

    kind: str
    p: int = 0
    base: RingTag | None = None

    def __post_init__(self):
        if self.kind not in ("ZZ", "QQ", "Fp", "Laurent"):
            raise UnsupportedRingError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Fp" and not _is_prime(self.p):
            raise UnsupportedRingError(f"GF({self.p}): modulus is not prime")
        if self.kind == "Laurent":
            if self.base is None or self.base.kind == "Laurent":
                raise UnsupportedRingError("Laurent rings nest at most once")

    # -- classification ------------------------------------------------
    @property
    def is_laurent(self) -> bool:
        return self.kind == "Laurent"

    @property
    def is_field(self) -> bool:
        return self.kind in ("QQ", "Fp")

    @property
    def scalar_ring(self) -> RingTag:
        """The base ring of a Laurent tag, the tag itself otherwise."""
        return self.base if self.kind == "Laurent" else self

    def __str__(self):
        if self.kind == "Fp":
            return f"GF({self.p})"
        if self.kind == "Laurent":
            return f"Laurent({self.base})"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> RingTag:
        text = text.strip()
        if text.startswith("Laurent(") and text.endswith(")"):
            return Laurent(cls.parse(text[len("Laurent("):-1]))
        if text in ("ZZ", "QQ"):
            return cls(text)
        if text.startswith("GF(") and text.endswith(")"):
            return Fp(int(text[3:-1]))
        if text.startswith("F") and text[1:].isdigit():
            return Fp(int(text[1:]))
        raise UnsupportedRingError(f"cannot parse ring {text!r}")

    # -- elements --------------------------------------------------------
    @property
    def zero(self):
        if self.kind == "Laurent":
            return LaurentPoly(self.base)
        return Fraction(0) if self.kind == "QQ" else 0

    @property
    def one(self):
        if self.kind == "Laurent":
            return LaurentPoly(self.base, {0: 1})
        return Fraction(1) if self.kind == "QQ" else 1

    def coerce(self, x):
        """Map an int, Fraction, string or (for Laurent tags) poly into this ring."""
        k = self.kind
        if isinstance(x, str):
            return self.parse_element(x)
        if k == "ZZ":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise RingMismatchError(f"{x} is not an integer")
                return x.numerator
            if isinstance(x, bool) or not isinstance(x, int):
                raise RingMismatchError(f"cannot coerce {x!r} into ZZ")
            return x
        if k == "QQ":
            if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
                return Fraction(x)
            raise RingMismatchError(f"cannot coerce {x!r} into QQ")
        if k == "Fp":
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            if isinstance(x, bool) or not isinstance(x, int):
                raise RingMismatchError(f"cannot coerce {x!r} into {self}")
            return x % self.p
        if isinstance(x, LaurentPoly):
            if x.ring != self.base:
                raise RingMismatchError(f"polynomial over {x.ring} used in {self}")
            return x
        return LaurentPoly(self.base, {0: self.base.coerce(x)})

    def add(self, a, b):
        if self.kind == "Fp":
            return (a + b) % self.p
        return a + b

    def sub(self, a, b):
        if self.kind == "Fp":
            return (a - b) % self.p
        return a - b

    def mul(self, a, b):
        if self.kind == "Fp":
            return (a * b) % self.p
        return a * b

    def neg(self, a):
        if self.kind == "Fp":
            return (-a) % self.p
        return -a

    def is_zero(self, a) -> bool:
        if self.kind == "Laurent":
            return a.is_zero()
        return a == 0

    def is_unit(self, a) -> bool:
        """Unit test in a base ring; Laurent units are handled by :func:`novikov_unit`."""
        if self.kind == "ZZ":
            return a in (1, -1)
        if self.kind == "Laurent":
            return a.is_monomial() and self.base.is_unit(a.terms[0][1])
        return a != 0

    def inv(self, a):
        if not self.is_unit(a):
            raise NotAUnitError(f"{self.format(a)} is not a unit in {self}")
        if self.kind == "ZZ":
            return a
        if self.kind == "QQ":
            return 1 / a
        if self.kind == "Fp":
            return pow(a, -1, self.p)
        (e, c), = a.terms
        return LaurentPoly(self.base, {-e: self.base.inv(c)})

    def div_exact(self, a, b):
        """Exact quotient ``a / b``; raises if ``b`` does not divide ``a``."""
        if self.kind == "Laurent":
            return laurent_div_exact(a, b)
        if self.kind == "ZZ":
            q, r = divmod(a, b)
            if r:
                raise ArithmeticError(f"{b} does not divide {a}")
            return q
        return self.mul(a, self.inv(b))

    # -- text format ---------------------------------------------------------
    def parse_element(self, text: str):
        if self.kind == "Laurent":
            raise UnsupportedRingError("Laurent elements are written as [exp, scalar] pair lists")
        text = text.strip()
        if self.kind == "ZZ":
            return int(text)
        if self.kind == "QQ":
            return Fraction(text)
        v = int(text)
        if not 0 <= v < self.p:
            raise ValueError(f"{text!r} is not a canonical residue mod {self.p}")
        return v

    def format(self, a) -> str:
        return str(a)


ZZ = RingTag("ZZ")
QQ = RingTag("QQ")


def Fp(p: int) -> RingTag:
    return RingTag("Fp", p)


def Laurent(base: RingTag) -> RingTag:
    return RingTag("Laurent", base=base)


class LaurentPoly:
    """Sparse element of ``R[z, z^-1]``; immutable, no zero coefficient stored."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: RingTag, coeffs: Mapping[int, object] | Iterable = ()):
        if ring.is_laurent:
            raise UnsupportedRingError("coefficients of a Laurent polynomial live in a base ring")
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, object] = {}
        for e, c in items:
            c = ring.coerce(c)
            e = int(e)
            acc[e] = ring.add(acc[e], c) if e in acc else c
        self.ring = ring
        self.terms = tuple(sorted((e, c) for e, c in acc.items() if c != 0))

    @classmethod
    def _raw(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        return obj

    @classmethod
    def monomial(cls, ring: RingTag, exp: int, coeff=1) -> LaurentPoly:
        return cls(ring, {exp: coeff})

    @classmethod
    def from_pairs(cls, ring: RingTag, pairs) -> LaurentPoly:
        """Parse the ``[[exp, "scalar"], ...]`` text form (exponents strictly increasing)."""
        last = None
        out = []
        for e, s in pairs:
            e = int(e)
            if last is not None and e <= last:
                raise ValueError("Laurent pair list must have strictly increasing exponents")
            last = e
            out.append((e, ring.parse_element(s) if isinstance(s, str) else ring.coerce(s)))
        return cls(ring, out)

    def to_pairs(self) -> list:
        return [[e, str(c)] for e, c in self.terms]

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    @property
    def lo_deg(self) -> int:
        if not self.terms:
            raise ValueError("lo_deg of the zero polynomial")
        return self.terms[0][0]

    @property
    def hi_deg(self) -> int:
        if not self.terms:
            raise ValueError("hi_deg of the zero polynomial")
        return self.terms[-1][0]

    def coeff(self, e: int):
        for ee, c in self.terms:
            if ee == e:
                return c
        return self.ring.zero

    def as_dict(self) -> dict:
        return dict(self.terms)

    def _check(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly(self.ring, {0: other})
        if other.ring != self.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        other = self._check(other)
        acc = dict(self.terms)
        R = self.ring
        for e, c in other.terms:
            acc[e] = R.add(acc[e], c) if e in acc else c
        return LaurentPoly._raw(R, tuple(sorted((e, c) for e, c in acc.items() if c != 0)))

    __radd__ = __add__

    def __neg__(self):
        R = self.ring
        return LaurentPoly._raw(R, tuple((e, R.neg(c)) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        R = self.ring
        acc: dict[int, object] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                t = R.mul(c1, c2)
                acc[e] = R.add(acc[e], t) if e in acc else t
        return LaurentPoly._raw(R, tuple(sorted((e, c) for e, c in acc.items() if c != 0)))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers need series_invert")
        out = LaurentPoly(self.ring, {0: 1})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly(self.ring, {0: other})
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.terms))

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by ``z**k``."""
        return LaurentPoly._raw(self.ring, tuple((e + k, c) for e, c in self.terms))

    def reflect(self) -> LaurentPoly:
        """Substitute ``z -> z^-1``."""
        return LaurentPoly._raw(self.ring, tuple(sorted((-e, c) for e, c in self.terms)))

    def evaluate(self, value):
        """Value at ``z = value``; ``value`` must be a unit if negative exponents occur."""
        R = self.ring
        value = R.coerce(value)
        out = R.zero
        for e, c in self.terms:
            x = value if e >= 0 else R.inv(value)
            xe = pow(x, abs(e), R.p) if R.kind == "Fp" else x ** abs(e)
            out = R.add(out, R.mul(c, xe))
        return out

    def map_coeffs(self, target: RingTag) -> LaurentPoly:
        return LaurentPoly(target, [(e, target.coerce(c)) for e, c in self.terms])

    def __repr__(self):
        return f"LaurentPoly({self.ring}, {dict(self.terms)!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            mono = "" if e == 0 else ("z" if e == 1 else f"z^{e}")
            if mono and c == 1:
                s = mono
            elif mono and self.ring.kind != "Fp" and c == -1:
                s = "-" + mono
            else:
                s = f"{c}*{mono}" if mono else str(c)
            parts.append(s)
        out = parts[0]
        for s in parts[1:]:
            out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
        return out


def laurent_arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    if a.ring != b.ring:
        raise RingMismatchError(f"{a.ring} vs {b.ring}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def laurent_div_exact(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Quotient ``a / b`` in ``R[z, z^-1]``, raising ArithmeticError if inexact."""
    R = a.ring
    if b.is_zero():
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if a.is_zero():
        return a
    # z-powers are units: strip them and divide polynomials with nonzero constant term
    rem = dict((e - a.lo_deg, c) for e, c in a.terms)
    bl, bh = b.lo_deg, b.hi_deg
    bt = dict((e - bl, c) for e, c in b.terms)
    bdeg = bh - bl
    lead = bt[bdeg]
    quot = {}
    while rem:
        top = max(rem)
        if top < bdeg:
            raise ArithmeticError(f"{b} does not divide {a}")
        c = rem[top]
        if R.kind == "ZZ":
            q, r = divmod(c, lead)
            if r:
                raise ArithmeticError(f"{b} does not divide {a}")
        else:
            q = R.mul(c, R.inv(lead))
        s = top - bdeg
        quot[s] = q
        for e, bc in bt.items():
            k = e + s
            v = R.sub(rem.get(k, R.zero), R.mul(q, bc))
            if v == 0:
                rem.pop(k, None)
            else:
                rem[k] = v
    return LaurentPoly(R, quot).shift(a.lo_deg - bl)


class SeriesDir(enum.Enum):
    LT = "lt"   # R((z)): finite to the left
    RT = "rt"   # R((z^-1)): finite to the right

    @property
    def other(self) -> SeriesDir:
        return SeriesDir.RT if self is SeriesDir.LT else SeriesDir.LT


class UnitInfo(NamedTuple):
    unit: bool
    pivot_exp: int
    pivot_coeff: object


def novikov_unit(f: LaurentPoly, dir: SeriesDir) -> UnitInfo:
    """Decide whether ``f`` is invertible in ``R((z))`` (LT) or ``R((z^-1))`` (RT).

    The answer only depends on the lowest (LT) or highest (RT) coefficient.
    """
    if f.is_zero():
        raise NotAUnitError("zero is never a unit")
    e, c = f.terms[0] if dir is SeriesDir.LT else f.terms[-1]
    return UnitInfo(f.ring.is_unit(c), e, c)


class SeriesWindow:
    """Truncated representative of a Laurent series; see the module docstring."""

    __slots__ = ("ring", "dir", "lo", "hi", "values")

    def __init__(self, ring: RingTag, dir: SeriesDir, lo: int, hi: int, coeffs=None):
        if ring.is_laurent:
            raise UnsupportedRingError("series coefficients live in a base ring")
        if lo > hi:
            raise WindowError(f"empty window [{lo}, {hi}]")
        self.ring = ring
        self.dir = SeriesDir(dir)
        self.lo = lo
        self.hi = hi
        vals = [ring.zero] * (hi - lo + 1)
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs, lo)
            for e, c in items:
                if not lo <= e <= hi:
                    raise WindowError(f"coefficient at {e} lies outside [{lo}, {hi}]")
                vals[e - lo] = ring.coerce(c)
        self.values = tuple(vals)

    @classmethod
    def from_laurent(cls, f: LaurentPoly, dir: SeriesDir, lo: int | None = None,
                     hi: int | None = None) -> SeriesWindow:
        """Window onto an exactly known polynomial; the open side is zero-padded as asked.

        LT windows default to ``[lo_deg, hi_deg]``; pass a larger ``hi`` to
        expose more (zero) coefficients.  RT windows are symmetric.
        """
        if f.is_zero():
            lo = 0 if lo is None else lo
            hi = lo if hi is None else hi
        else:
            lo = f.lo_deg if lo is None else lo
            hi = f.hi_deg if hi is None else hi
        if not f.is_zero() and (f.lo_deg < lo or f.hi_deg > hi):
            raise WindowError("the window must contain the whole polynomial")
        return cls(f.ring, dir, lo, hi, dict(f.terms))

    def coeff(self, e: int):
        if self.lo <= e <= self.hi:
            return self.values[e - self.lo]
        if (self.dir is SeriesDir.LT and e < self.lo) or (self.dir is SeriesDir.RT and e > self.hi):
            return self.ring.zero
        raise WindowError(f"coefficient at {e} is not determined by window [{self.lo}, {self.hi}]")

    def items(self):
        return zip(range(self.lo, self.hi + 1), self.values)

    def restrict(self, lo: int, hi: int) -> SeriesWindow:
        """Narrow to ``[lo, hi]``; only the open side may be cut."""
        if self.dir is SeriesDir.LT and lo != self.lo and lo > self.lo:
            # cutting the closed side would forget known coefficients
            if any(c != 0 for c in self.values[: lo - self.lo]):
                raise WindowError("cannot drop nonzero coefficients from the closed side")
        if self.dir is SeriesDir.RT and hi < self.hi:
            if any(c != 0 for c in self.values[hi - self.lo + 1:]):
                raise WindowError("cannot drop nonzero coefficients from the closed side")
        return SeriesWindow(self.ring, self.dir, lo, hi,
                            {e: self.coeff(e) for e in range(lo, hi + 1)})

    def to_laurent(self) -> LaurentPoly:
        return LaurentPoly(self.ring, self.items())

    def reflect(self) -> SeriesWindow:
        """Substitute ``z -> z^-1``; swaps the direction."""
        return SeriesWindow(self.ring, self.dir.other, -self.hi, -self.lo,
                            {-e: c for e, c in self.items()})

    def map_coeffs(self, fn, ring: RingTag | None = None) -> SeriesWindow:
        ring = ring or self.ring
        return SeriesWindow(ring, self.dir, self.lo, self.hi, {e: fn(c) for e, c in self.items()})

    def __add__(self, other):
        return series_arith(self, other, "add")

    def __mul__(self, other):
        return series_arith(self, other, "mul")

    def __neg__(self):
        return self.map_coeffs(self.ring.neg)

    def __eq__(self, other):
        if not isinstance(other, SeriesWindow):
            return NotImplemented
        return (self.ring, self.dir, self.lo, self.hi, self.values) == (
            other.ring, other.dir, other.lo, other.hi, other.values)

    def __hash__(self):
        return hash((self.ring, self.dir, self.lo, self.hi, self.values))

    def __repr__(self):
        return (f"SeriesWindow({self.ring}, {self.dir.value}, [{self.lo}, {self.hi}], "
                f"{[str(c) for c in self.values]})")


def series_arith(a: SeriesWindow, b: SeriesWindow, op: str) -> SeriesWindow:
    """Add or multiply two windows; the result keeps only fully determined coefficients."""
    if a.dir is not b.dir:
        raise RingMismatchError("cannot combine R((z)) and R((z^-1)) windows")
    if a.ring != b.ring:
        raise RingMismatchError(f"{a.ring} vs {b.ring}")
    R = a.ring
    lt = a.dir is SeriesDir.LT
    if op == "add":
        lo, hi = (min(a.lo, b.lo), min(a.hi, b.hi)) if lt else (max(a.lo, b.lo), max(a.hi, b.hi))
        if lo > hi:
            raise WindowError("sum has an empty determined window")
        return SeriesWindow(R, a.dir, lo, hi,
                            {e: R.add(a.coeff(e), b.coeff(e)) for e in range(lo, hi + 1)})
    if op != "mul":
        raise ValueError(f"unknown op {op!r}")
    # only products of known coefficients may contribute inside the result window
    if lt:
        lo, hi = a.lo + b.lo, min(a.hi + b.lo, b.hi + a.lo)
    else:
        lo, hi = max(a.lo + b.hi, b.lo + a.hi), a.hi + b.hi
    if lo > hi:
        raise WindowError("product has an empty determined window")
    out = {}
    for e in range(lo, hi + 1):
        acc = R.zero
        i0, i1 = (a.lo, e - b.lo) if lt else (e - b.hi, a.hi)
        for i in range(i0, i1 + 1):
            ca = a.values[i - a.lo]
            if ca != 0:
                acc = R.add(acc, R.mul(ca, b.values[e - i - b.lo]))
        out[e] = acc
    return SeriesWindow(R, a.dir, lo, hi, out)


def series_invert(f: LaurentPoly, dir: SeriesDir, order: int) -> SeriesWindow:
    """Inverse of a Novikov unit on a window with ``order + 1`` coefficients.

    ``f = c z^v (1 - u)`` with ``u`` of positive valuation (LT), so the inverse
    is ``c^-1 z^-v sum_k u^k``; terms with ``k > order`` cannot reach the window.
    The RT case is the LT case after ``z -> z^-1``.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    info = novikov_unit(f, dir)
    if not info.unit:
        raise NotAUnitError(f"{f} is not a unit in the {dir.value} Novikov ring")
    if dir is SeriesDir.RT:
        return series_invert(f.reflect(), SeriesDir.LT, order).reflect()
    R = f.ring
    v, c = info.pivot_exp, info.pivot_coeff
    cinv = R.inv(c)
    u = LaurentPoly(R, {0: 1}) - f.shift(-v) * cinv
    total = {0: R.one}
    power = LaurentPoly(R, {0: 1})
    for _ in range(order):
        power = LaurentPoly(R, [(e, x) for e, x in (power * u).terms if e <= order])
        if power.is_zero():
            break
        for e, x in power.terms:
            total[e] = R.add(total.get(e, R.zero), x)
    return SeriesWindow(R, SeriesDir.LT, -v, -v + order,
                        {e - v: R.mul(cinv, x) for e, x in total.items()})
