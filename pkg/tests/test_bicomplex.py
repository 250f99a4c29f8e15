import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from novikovlab.bicomplex import (DoubleComplexWindow, TotChoice, TotCocycle, Witness,
                                  check_tot_sum_is_torus, column_exact_at, compare_tot_with_torus,
                                  contract_lt, contract_rt, from_columns, row_exact_at, torus_bicomplex,
                                  totalise, validate_bicomplex, verify_witness)
from novikovlab.complexes import ChainMap, CochainComplex, cohomology_field, is_quasi_iso
from novikovlab.errors import ContractionError, DimensionError, UnsupportedRingError, ValidationError
from novikovlab.fuzz import fuzz_generate, random_cocycle
from novikovlab.linalg import Matrix
from novikovlab.novikov import mapping_torus
from novikovlab.rings import QQ, ZZ, Fp

from oracles import plain

F2, F5 = Fp(2), Fp(5)


def point(R):
    return CochainComplex.concentrated(R, 0)


def times2(R=ZZ):
    k = point(R)
    return k, ChainMap.scalar(k, 2)


# -- from_columns ----------------------------------------------------------------------

def test_single_column_gets_its_sign():
    C = CochainComplex(QQ, {0: 1, 1: 1}, {0: Matrix.from_rows(QQ, [[3]])})
    for p, sign in ((0, 3), (1, -3)):
        D = from_columns({p: C}, {})
        assert D.dv(p, 0) == Matrix.from_rows(QQ, [[sign]])
        assert validate_bicomplex(D)


def test_two_columns_joined_by_identity_anticommute():
    C = CochainComplex(F5, {0: 1, 1: 1}, {0: Matrix.from_rows(F5, [[2]])})
    one = Matrix.identity(F5, 1)
    D = from_columns({0: C, 1: C}, {(0, 0): one, (0, 1): one})
    # by hand: dv(1,0) dh(0,0) = -2, dh(0,1) dv(0,0) = 2, sum 0
    assert (D.dv(1, 0) @ D.dh(0, 0) + D.dh(0, 1) @ D.dv(0, 0)).is_zero()
    assert validate_bicomplex(D)


def test_non_commuting_horizontal_map_names_the_square():
    C = CochainComplex(F5, {0: 1, 1: 1}, {0: Matrix.from_rows(F5, [[2]])})
    with pytest.raises(ValidationError) as exc:
        from_columns({0: C, 1: C}, {(0, 0): Matrix.identity(F5, 1), (0, 1): Matrix.scalar(F5, 1, 3)})
    assert exc.value.where == (0, 0)
    with pytest.raises(DimensionError):
        from_columns({}, {})


def test_window_shape_errors():
    with pytest.raises(DimensionError):
        DoubleComplexWindow(ZZ, 1, 0, 0, 0, {})
    with pytest.raises(DimensionError):
        DoubleComplexWindow(ZZ, 0, 0, 0, 0, {(3, 0): 1})


# -- totalise ----------------------------------------------------------------------------

def test_totalise_counterexample_window():
    C, h = times2()
    D = torus_bicomplex(C, h, 0, 4)
    # D^{p,-p} = D^{p,-p-1} = ZZ with dh = -id and dv = x2
    for p in range(5):
        assert D.rank(p, -p) == 1 and D.rank(p, -p - 1) == 1
        assert D.dv(p, -p - 1) == Matrix.from_rows(ZZ, [[2]])
        if p < 4:
            assert D.dh(p, -p - 1) == Matrix.from_rows(ZZ, [[-1]])
    tot = totalise(D)
    assert {n for n in tot.degrees() if tot.rank(n)} == {-1, 0}
    assert tot.rank(-1) == 5 and tot.rank(0) == 5
    expect = [[2 if i == j else -1 if i == j + 1 else 0 for j in range(5)] for i in range(5)]
    assert plain(tot.d(-1)) == expect


def test_totalise_single_column_and_choices():
    C = CochainComplex(QQ, {0: 1, 1: 1}, {0: Matrix.from_rows(QQ, [[3]])})
    D = from_columns({1: C}, {})
    tot = totalise(D)
    assert tot.rank(1) == 1 and tot.rank(2) == 1 and tot.d(1) == Matrix.from_rows(QQ, [[-3]])
    for choice in TotChoice:
        t = totalise(D, choice)
        assert t.tot_choice is choice and t == tot


def test_totalise_empty_window():
    D = DoubleComplexWindow(QQ, 0, 2, 0, 1, {})
    tot = totalise(D)
    assert tot.total_rank == 0 and cohomology_field(tot).is_zero()


# -- torus bicomplex -----------------------------------------------------------------------

def test_torus_of_zero_map_is_a_bicomplex():
    C, _ = fuzz_generate(4, ZZ, (-1, 1), 3, "any")
    D = torus_bicomplex(C, ChainMap.zero(C, C), -2, 2)
    assert validate_bicomplex(D)
    assert check_tot_sum_is_torus(C, ChainMap.zero(C, C), (0, 3))


def test_torus_rejects_invalid_map():
    C = CochainComplex(ZZ, {0: 1, 1: 1}, {0: Matrix.from_rows(ZZ, [[1]])})
    bad = ChainMap(C, C, {0: Matrix.from_rows(ZZ, [[1]]), 1: Matrix.from_rows(ZZ, [[0]])})
    with pytest.raises(ValidationError):
        torus_bicomplex(C, bad, 0, 2)


def test_acyclic_complex_with_identity_has_exact_columns():
    C = CochainComplex(F5, {0: 1, 1: 1}, {0: Matrix.from_rows(F5, [[1]])})
    D = torus_bicomplex(C, ChainMap.identity(C), 0, 3)
    assert all(column_exact_at(D, 1, q) for q in range(D.q_lo, D.q_hi + 1))


def test_identification_examples():
    C, h = times2()
    assert check_tot_sum_is_torus(C, h, (0, 3))
    D = torus_bicomplex(C, h, 0, 3)
    T = mapping_torus(C, h)
    # flip one sign of the horizontal map between columns 1 and 2
    chk = compare_tot_with_torus(D.with_maps(dh={(1, -2): D.dh(1, -2).scale(-1)}), T)
    assert not chk and chk.where == (-1, 2, 1)


# -- contractions ---------------------------------------------------------------------------

def test_contract_lt_single_exact_column():
    k = CochainComplex(QQ, {0: 1, 1: 1}, {0: Matrix.identity(QQ, 1)})
    D = from_columns({0: k}, {})
    w = contract_lt(D, TotCocycle(1, {0: (QQ.one,)}))
    assert w.terms == {0: (QQ.one,)} and verify_witness(D, TotCocycle(1, {0: (1,)}), w)


def test_contract_lt_identity_on_f2_needs_every_column():
    C = point(F2)
    D = torus_bicomplex(C, ChainMap.identity(C), 0, 6)
    x = TotCocycle(0, {0: (1,)})
    w = contract_lt(D, x)
    # D^{p,-p-1} = C^0 + C^-1 = F2; hand recursion: y_0 = 1, then y_p = y_{p-1}
    assert w.terms == {p: (1,) for p in range(7)}
    assert verify_witness(D, x, w)


def test_contract_zero_cocycle_gives_zero():
    C, h = times2(QQ)
    D = torus_bicomplex(C, h, 0, 4)
    for contract in (contract_lt, contract_rt):
        w = contract(D, TotCocycle(0, {}))
        assert all(not any(v) for v in w.terms.values())


def test_contract_rt_times2_over_zz():
    C, h = times2()
    D = torus_bicomplex(C, h, -5, 0)
    x = TotCocycle(0, {0: (1,)})
    w = contract_rt(D, x)
    assert w.verified_range == (-4, 0) and verify_witness(D, x, w)
    # inverse series of 2 - z in z^-1: y_{-k} = -2^(k-1)
    assert [w.terms[-k][0] for k in range(1, 6)] == [-(2 ** (k - 1)) for k in range(1, 6)]


def test_contract_lt_fails_over_qq_only_by_truncation():
    # over QQ the left inverse exists (1/2 - ...), over ZZ the lt side has no field
    C, h = times2()
    D = torus_bicomplex(C, h, 0, 4)
    with pytest.raises(UnsupportedRingError):
        contract_lt(D, TotCocycle(0, {0: (1,)}))
    Dq = torus_bicomplex(*times2(QQ), 0, 4)
    x = TotCocycle(0, {0: (QQ.one,)})
    w = contract_lt(Dq, x)
    assert verify_witness(Dq, x, w)
    assert [w.terms[p][0] for p in range(5)] == [QQ.coerce(2) ** -(p + 1) for p in range(5)]


def test_contract_rt_single_row():
    k = CochainComplex(F5, {0: 1})
    D = DoubleComplexWindow(F5, 0, 1, 0, 0, {(0, 0): 1, (1, 0): 1},
                            dh={(0, 0): Matrix.scalar(F5, 1, -1)})
    x = TotCocycle(1, {1: (1,)})
    w = contract_rt(D, x)
    assert w.terms[0] == (4,) and verify_witness(D, x, w)
    assert k.rank(0) == 1


def test_contract_reports_non_cocycles():
    C, h = times2(QQ)
    D = torus_bicomplex(C, h, 0, 3)
    bad = TotCocycle(-1, {1: (QQ.one,)})
    with pytest.raises(ContractionError) as exc:
        contract_lt(D, bad)
    assert exc.value.precondition == "cocycle"
    with pytest.raises(DimensionError):
        contract_lt(D, TotCocycle(0, {9: (1,)}))


def test_contract_lt_reports_non_exact_column():
    C = point(F5)
    D = torus_bicomplex(C, ChainMap.zero(C, C), 0, 2)
    # h = 0: the column at p = 0 has cohomology, so the generator cannot be cobounded
    x = TotCocycle(0, {0: (1,)})
    with pytest.raises(ContractionError) as exc:
        contract_lt(D, x)
    assert exc.value.precondition == "column exactness"


# -- properties -------------------------------------------------------------------------------

seeds = st.integers(0, 10**6)
# the torus differential has z-powers 0 and 1, so the window needs two columns
windows = st.tuples(st.integers(-3, 1), st.integers(1, 4)).map(lambda t: (t[0], t[0] + t[1]))


@given(seeds, st.sampled_from([F2, F5, ZZ, QQ]), st.sampled_from(["iso", "quasi_iso", "any"]), windows)
def test_torus_laws_and_identification(seed, ring, mode, window):
    C, h = fuzz_generate(seed, ring, (-2, 1), 3, mode)
    D = torus_bicomplex(C, h, *window)
    assert validate_bicomplex(D)
    assert compare_tot_with_torus(D, mapping_torus(C, h))


@given(seeds, st.sampled_from([F2, F5, QQ]), st.sampled_from(["quasi_iso", "any"]))
def test_rows_exact_and_quasi_iso_columns_exact(seed, ring, mode):
    C, h = fuzz_generate(seed, ring, (-2, 1), 3, mode)
    D = torus_bicomplex(C, h, 0, 3)
    for p, q in D.positions():
        if 0 < p < 3:
            assert row_exact_at(D, p, q)
            if mode == "quasi_iso":
                assert column_exact_at(D, p, q)
    if mode == "any" and not is_quasi_iso(h):
        assert not all(column_exact_at(D, 1, q) for q in range(D.q_lo, D.q_hi + 1))


def _numpy_check(D, x, w, p):
    """dv(y_i) + dh(y_{i-1}) = x_i on the verified range, with numpy int arithmetic."""
    lo, hi = w.verified_range
    for i in range(lo, hi + 1):
        q = x.n - i
        dv = np.array(plain(D.dv(i, q - 1)), dtype=object).reshape(D.rank(i, q), D.rank(i, q - 1))
        dh = np.array(plain(D.dh(i - 1, q)), dtype=object).reshape(D.rank(i, q), D.rank(i - 1, q))
        lhs = dv.dot(np.array(w.get(D, i), dtype=object)) + dh.dot(np.array(w.get(D, i - 1), dtype=object))
        rhs = np.array(x.get(D, i), dtype=object)
        if p:
            lhs, rhs = lhs % p, rhs % p
        if D.rank(i, q) and not (lhs == rhs).all():
            return False
    return True


@given(seeds, st.integers(-2, 2))
def test_contract_lt_quasi_iso_random_cocycles(seed, n):
    C, h = fuzz_generate(seed, F5, (-2, 1), 3, "quasi_iso")
    D = torus_bicomplex(C, h, 0, 5)
    x = random_cocycle(random.Random(seed), D, n, "lt")
    w = contract_lt(D, x)
    assert verify_witness(D, x, w) and _numpy_check(D, x, w, 5)


@given(seeds, st.sampled_from([ZZ, F2]), st.integers(-2, 2), st.sampled_from(["iso", "quasi_iso", "any"]))
def test_contract_rt_random_cocycles(seed, ring, n, mode):
    C, h = fuzz_generate(seed, ring, (-2, 1), 3, mode)
    D = torus_bicomplex(C, h, -5, 0)
    x = random_cocycle(random.Random(seed), D, n, "rt")
    w = contract_rt(D, x)
    assert verify_witness(D, x, w) and _numpy_check(D, x, w, ring.p if ring.kind == "Fp" else 0)


@given(seeds)
def test_witness_determinism(seed):
    C, h = fuzz_generate(seed, F5, (-1, 1), 3, "quasi_iso")
    D = torus_bicomplex(C, h, 0, 4)
    x = random_cocycle(random.Random(seed), D, 0, "lt")
    a, b = contract_lt(D, x), contract_lt(D, x)
    assert isinstance(a, Witness) and a == b
