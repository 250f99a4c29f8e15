import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from novikovlab.bicomplex import check_cocycle, torus_bicomplex
from novikovlab.complexes import ChainMap, CochainComplex, is_quasi_iso, validate_chain_map, validate_complex
from novikovlab.errors import DimensionError, UnsupportedRingError
from novikovlab.fuzz import fuzz_generate, random_cocycle, torus_checks
from novikovlab.linalg import det
from novikovlab.rings import QQ, ZZ, Fp, Laurent

seeds = st.integers(0, 10**6)
rings = st.sampled_from([ZZ, QQ, Fp(2), Fp(3), Fp(5)])
modes = st.sampled_from(["iso", "quasi_iso", "any"])


def test_generator_errors_and_edge_cases():
    with pytest.raises(UnsupportedRingError):
        fuzz_generate(1, Laurent(ZZ))
    with pytest.raises(DimensionError):
        fuzz_generate(1, ZZ, (2, 1))
    with pytest.raises(DimensionError):
        fuzz_generate(1, ZZ, max_rank=-1)
    with pytest.raises(DimensionError):
        fuzz_generate(1, ZZ, mode="sometimes")
    C, h = fuzz_generate(1, Fp(2), (-2, 2), 0)
    assert C.total_rank == 0 and all(m.is_zero() for m in h.comps.values())


@given(seeds, rings, modes)
def test_generator_is_deterministic_and_valid(seed, ring, mode):
    C, h = fuzz_generate(seed, ring, (-2, 2), 3, mode)
    C2, h2 = fuzz_generate(seed, ring, (-2, 2), 3, mode)
    assert C == C2 and h.comps == h2.comps
    assert validate_complex(C) and validate_chain_map(h)
    assert all(0 <= C.rank(n) <= 3 for n in range(-2, 3))
    assert C.lo >= -2 and C.hi <= 2


@given(seeds, rings)
def test_iso_mode_gives_invertible_maps(seed, ring):
    C, h = fuzz_generate(seed, ring, (-2, 2), 3, "iso")
    for n in C.degrees():
        if C.rank(n):
            dt = det(h[n])
            assert abs(dt) == 1 if ring == ZZ else dt != 0


@given(seeds, st.sampled_from([QQ, Fp(2), Fp(5)]))
def test_quasi_iso_mode_over_fields(seed, ring):
    C, h = fuzz_generate(seed, ring, (-2, 2), 3, "quasi_iso")
    assert is_quasi_iso(h)


def test_modes_differ_somewhere():
    # "any" must produce non-quasi-isomorphisms for some seeds
    hits = 0
    for seed in range(30):
        C, h = fuzz_generate(seed, Fp(2), (-1, 1), 3, "any")
        hits += not is_quasi_iso(h)
    assert hits > 0


@given(seeds, st.sampled_from([ZZ, QQ, Fp(2), Fp(5)]), st.integers(-2, 2), st.sampled_from(["lt", "rt"]))
def test_random_cocycles_are_cocycles(seed, ring, n, direction):
    C, h = fuzz_generate(seed, ring, (-1, 1), 3, "any")
    D = torus_bicomplex(C, h, 0, 3)
    x = random_cocycle(random.Random(seed), D, n, direction)
    assert check_cocycle(D, x, "lt" if direction == "lt" else "rt")
    if direction == "rt" and x.terms.get(3) is not None:
        # D^{3, n-3} = C^{n+1} + C^n and the C^{n+1} part is zero
        assert not any(x.terms[3][:C.rank(n + 1)])


@given(seeds, rings, modes)
def test_suite_passes(seed, ring, mode):
    C, h = fuzz_generate(seed, ring, (-2, 2), 3, mode)
    checks = torus_checks(C, h, (0, 3))
    assert checks and all(checks.values()), checks
    keys = set(checks)
    assert {"torus_valid", "bicomplex_laws", "identification"} <= keys
    if ring.is_field:
        assert {"rows_exact", "novikov_lt_zero", "novikov_rt_zero"} <= keys
    else:
        assert "novikov_rt_not_refuted" in keys
        if mode == "iso":
            assert {"novikov_rt_acyclic", "novikov_lt_acyclic"} <= keys


def test_suite_detects_a_non_acyclic_torus():
    # x2 on ZZ: the lt side is refuted, the rt side holds, and the checks say so
    k = CochainComplex.concentrated(ZZ, 0)
    checks = torus_checks(k, ChainMap.scalar(k, 2), (0, 3))
    assert checks["novikov_rt_not_refuted"] and "novikov_lt_acyclic" not in checks
