from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from novikovlab.errors import NotAUnitError, RingMismatchError, UnsupportedRingError, WindowError
from novikovlab.rings import (QQ, ZZ, Fp, Laurent, LaurentPoly, RingTag, SeriesDir, SeriesWindow,
                              laurent_arith, laurent_div_exact, novikov_unit, series_arith,
                              series_invert)

LT, RT = SeriesDir.LT, SeriesDir.RT


def poly(ring, d):
    return LaurentPoly(ring, d)


# -- tags -------------------------------------------------------------------------

def test_ring_tags_parse_and_print():
    for text in ("ZZ", "QQ", "GF(7)", "Laurent(ZZ)", "Laurent(GF(2))"):
        assert str(RingTag.parse(text)) == text
    assert RingTag.parse("F5") == Fp(5)


def test_ring_tag_invariants():
    with pytest.raises(ValueError):
        Fp(6)
    with pytest.raises(ValueError):
        Fp(1)
    with pytest.raises(ValueError):
        Laurent(Laurent(ZZ))


def test_scalar_canonical_forms():
    assert QQ.coerce(Fraction(4, -6)) == Fraction(-2, 3)
    assert Fp(5).coerce(-1) == 4
    assert Fp(5).coerce(Fraction(1, 2)) == 3
    assert QQ.parse_element("2/4") == Fraction(1, 2)
    with pytest.raises(ValueError):
        Fp(5).parse_element("7")   # canonical residues only
    with pytest.raises(RingMismatchError):
        ZZ.coerce(Fraction(1, 2))


# -- Laurent polynomials -------------------------------------------------------------

def test_laurent_arith_examples():
    two_minus_z = poly(ZZ, {0: 2, 1: -1})
    z = poly(ZZ, {1: 1})
    assert laurent_arith(two_minus_z, z, "add") == poly(ZZ, {0: 2})
    assert laurent_arith(poly(ZZ, {0: 1, 1: -1}), poly(ZZ, {0: 1, 1: 1}), "mul") == poly(ZZ, {0: 1, 2: -1})
    # over F2 the cross term 2z vanishes
    F2 = Fp(2)
    assert laurent_arith(poly(F2, {0: 1, 1: 1}), poly(F2, {0: 1, 1: 1}), "mul") == poly(F2, {0: 1, 2: 1})


def test_laurent_ring_mismatch():
    with pytest.raises(RingMismatchError):
        laurent_arith(poly(ZZ, {0: 1}), poly(QQ, {0: 1}), "add")


def test_laurent_canonical_sparse_form():
    f = poly(ZZ, {0: 1, 3: 0, -2: 5})
    assert f.terms == ((-2, 5), (0, 1))
    assert (f - f).terms == ()
    assert (f - f).is_zero()
    with pytest.raises(ValueError):
        (f - f).lo_deg


def test_laurent_pairs_round_trip_and_order():
    f = poly(QQ, {-1: Fraction(1, 2), 2: 3})
    assert f.to_pairs() == [[-1, "1/2"], [2, "3"]]
    assert LaurentPoly.from_pairs(QQ, f.to_pairs()) == f
    with pytest.raises(ValueError):
        LaurentPoly.from_pairs(ZZ, [[1, "1"], [0, "2"]])


def test_laurent_exact_division():
    a = poly(ZZ, {0: 1, 2: -1})          # 1 - z^2
    b = poly(ZZ, {0: 1, 1: 1})           # 1 + z
    assert laurent_div_exact(a, b) == poly(ZZ, {0: 1, 1: -1})
    assert laurent_div_exact(a.shift(-3), b.shift(2)) == poly(ZZ, {-5: 1, -4: -1})
    with pytest.raises(ArithmeticError):
        laurent_div_exact(poly(ZZ, {0: 1}), poly(ZZ, {0: 2, 1: -1}))


def test_str_rendering():
    assert str(poly(ZZ, {0: 2, 1: -1})) == "2 - z"
    assert str(poly(ZZ, {-1: 1, 2: 3})) == "z^-1 + 3*z^2"


# -- unit criterion ----------------------------------------------------------------

def test_novikov_unit_examples():
    f = poly(ZZ, {0: 2, 1: -1})
    rt = novikov_unit(f, RT)
    assert (rt.unit, rt.pivot_exp, rt.pivot_coeff) == (True, 1, -1)
    lt = novikov_unit(f, LT)
    assert (lt.unit, lt.pivot_exp, lt.pivot_coeff) == (False, 0, 2)
    for ring in (ZZ, QQ, Fp(3)):
        for d in SeriesDir:
            assert novikov_unit(poly(ring, {1: 1}), d).unit
    with pytest.raises(NotAUnitError):
        novikov_unit(poly(ZZ, {}), LT)


small_int = st.integers(-4, 4)
polys_zz = st.dictionaries(st.integers(-3, 3), small_int, min_size=1, max_size=4).map(
    lambda d: poly(ZZ, d)).filter(lambda f: not f.is_zero())


@given(polys_zz)
def test_direction_symmetry(f):
    a = novikov_unit(f, LT)
    b = novikov_unit(f.reflect(), RT)
    assert a.unit == b.unit and a.pivot_coeff == b.pivot_coeff and a.pivot_exp == -b.pivot_exp


@given(st.sampled_from([QQ, Fp(2), Fp(5)]),
       st.dictionaries(st.integers(-3, 3), st.integers(-5, 5), min_size=1, max_size=4))
def test_unit_criterion_over_fields(ring, d):
    f = LaurentPoly(ring, d)
    if f.is_zero():
        return
    assert novikov_unit(f, LT).unit and novikov_unit(f, RT).unit


# -- series windows ----------------------------------------------------------------

def test_series_invert_examples():
    g = series_invert(poly(ZZ, {0: 2, 1: -1}), RT, 4)
    assert [g.coeff(e) for e in (-1, -2, -3, -4)] == [-1, -2, -4, -8]
    h = series_invert(poly(ZZ, {0: 1, 1: -1}), LT, 3)
    assert (h.lo, h.hi) == (0, 3) and h.to_laurent() == poly(ZZ, {0: 1, 1: 1, 2: 1, 3: 1})
    for order in (0, 3, 9):
        m = series_invert(poly(ZZ, {1: 1}), LT, order)
        assert m.to_laurent() == poly(ZZ, {-1: 1})


def test_series_invert_rejects_non_units():
    with pytest.raises(NotAUnitError):
        series_invert(poly(ZZ, {0: 2, 1: -1}), LT, 3)


def test_series_arith_examples():
    a = SeriesWindow(ZZ, LT, 0, 1, [1, 1])
    b = SeriesWindow(ZZ, LT, 0, 1, [0, 1])
    s = series_arith(a, b, "add")
    assert (s.lo, s.hi, s.values) == (0, 1, (1, 2))
    p = series_arith(SeriesWindow(ZZ, LT, 0, 3, [1, 1]), SeriesWindow(ZZ, LT, 0, 3, [1, -1]), "mul")
    assert (p.lo, p.hi) == (0, 3) and p.to_laurent() == poly(ZZ, {0: 1, 2: -1})
    q = series_arith(SeriesWindow(ZZ, RT, -2, -1, {-1: 1}), SeriesWindow(ZZ, RT, 0, 1, {1: 1}), "mul")
    assert (q.lo, q.hi) == (-1, 0) and q.values == (0, 1)


def test_series_errors():
    with pytest.raises(RingMismatchError):
        SeriesWindow(ZZ, LT, 0, 1) + SeriesWindow(ZZ, RT, 0, 1)
    with pytest.raises(WindowError):
        SeriesWindow(ZZ, LT, 1, 0)
    # the sum only knows what both summands know: here just the exponent 0
    s = series_arith(SeriesWindow(ZZ, LT, 0, 0, [1]), SeriesWindow(ZZ, LT, 5, 6, [1, 1]), "add")
    assert (s.lo, s.hi) == (0, 0)
    with pytest.raises(WindowError):
        s.coeff(5)
    w = SeriesWindow(ZZ, LT, 0, 2, [1, 2, 3])
    assert w.coeff(-5) == 0
    with pytest.raises(WindowError):
        w.coeff(3)
    with pytest.raises(UnsupportedRingError):
        SeriesWindow(Laurent(ZZ), LT, 0, 0)


def _convolve(a, b):
    """Plain dict convolution oracle."""
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return out


@given(polys_zz, st.sampled_from([LT, RT]), st.integers(0, 32))
def test_unit_soundness(f, d, order):
    if not novikov_unit(f, d).unit:
        return
    g = series_invert(f, d, order)
    assert g.hi - g.lo + 1 >= order
    # f is exact: expose it on a window as wide as g's
    if d is LT:
        fw = SeriesWindow.from_laurent(f, LT, f.lo_deg, max(f.hi_deg, f.lo_deg + order))
    else:
        fw = SeriesWindow.from_laurent(f, RT, min(f.lo_deg, f.hi_deg - order), f.hi_deg)
    prod = series_arith(fw, g, "mul")
    assert prod.hi - prod.lo + 1 == order + 1
    assert all(c == (1 if e == 0 else 0) for e, c in prod.items())
    # the same coefficients from a plain convolution of the known parts
    conv = _convolve(dict(f.terms), dict(g.items()))
    assert all(conv.get(e, 0) == c for e, c in prod.items())


@given(st.dictionaries(st.integers(-3, 3), small_int, max_size=4),
       st.dictionaries(st.integers(-3, 3), small_int, max_size=4))
def test_laurent_add_is_canonical_and_mul_matches_convolution(a, b):
    fa, fb = poly(ZZ, a), poly(ZZ, b)
    s = laurent_arith(fa, fb, "add")
    assert all(c != 0 for _, c in s.terms)
    conv = {e: c for e, c in _convolve(dict(fa.terms), dict(fb.terms)).items() if c}
    assert dict(laurent_arith(fa, fb, "mul").terms) == conv


@given(polys_zz, st.integers(-3, 3))
def test_evaluate_is_a_ring_map(f, c):
    g = poly(ZZ, {0: 1, 1: c})
    x = c if c in (1, -1) else 1
    assert (f * g).evaluate(x) == f.evaluate(x) * g.evaluate(x)


def test_series_reflect_swaps_direction():
    w = SeriesWindow(ZZ, LT, 0, 2, [1, 2, 3])
    r = w.reflect()
    assert r.dir is RT and (r.lo, r.hi) == (-2, 0) and r.coeff(-2) == 3
    assert r.reflect() == w
