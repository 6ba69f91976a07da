import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from htype.clifford import (GeneratorSet, build_generators, heisenberg_generators, hurwitz_radon,
                            octonion_generators, validate_generators)
from htype.errors import AdmissibilityError

# j(u) = u1 j1 + ... + u7 j7 for the octonion generators, written out as a
# single table of signed u-indices (0 on the diagonal)
JU_TABLE = """
 0  1  2  3  4  5  6  7
-1  0  3 -2  5 -4 -7  6
-2 -3  0  1  6  7 -4 -5
-3  2 -1  0  7 -6  5 -4
-4 -5 -6 -7  0  1  2  3
-5  4 -7  6 -1  0 -3  2
-6  7  4 -5 -2  3  0 -1
-7 -6  5  4 -3 -2  1  0
"""


def table_generators():
    J = np.zeros((7, 8, 8), dtype=int)
    for i, row in enumerate(JU_TABLE.split("\n")[1:-1]):
        for k, e in enumerate(int(x) for x in row.split()):
            if e:
                J[abs(e) - 1, i, k] = np.sign(e)
    return J


def test_hurwitz_radon_values():
    assert [hurwitz_radon(n) for n in (1, 2, 4, 8, 16, 32, 64, 128, 256)] == [1, 2, 4, 8, 9, 10, 12, 16, 17]
    assert hurwitz_radon(6) == 2
    assert hurwitz_radon(24) == 8
    with pytest.raises(ValueError):
        hurwitz_radon(0)


def test_hurwitz_radon_decomposition_consistent():
    for n in range(1, 1025):
        a, k = 0, n
        while k % 2 == 0:
            k, a = k // 2, a + 1
        r, s = divmod(a, 4)
        assert k * 2 ** (4 * r + s) == n
        assert hurwitz_radon(n) == 8 * r + 2 ** s


def test_heisenberg_generator():
    g = build_generators(2, 1)
    assert g.J[0].tolist() == [[0, 1], [-1, 0]]
    assert heisenberg_generators().J.tolist() == g.J.tolist()


def test_admissibility_error_reports_both_numbers():
    with pytest.raises(AdmissibilityError) as exc:
        build_generators(2, 2)
    assert exc.value.m == 2 and exc.value.rho == 2
    assert "rho" in str(exc.value)


@pytest.mark.parametrize("n", range(2, 17, 2))
def test_all_constructed_sets_exact(n):
    for m in range(hurwitz_radon(n)):
        g = build_generators(n, m)
        rep = validate_generators(g, tol=0.0)
        assert rep.passed, rep.failed()
        assert rep.max_violation == 0.0


def test_odd_n_rejected():
    with pytest.raises(ValueError):
        build_generators(3, 1)


def test_construction_deterministic_and_prefix_stable():
    for n in (4, 8, 12, 16):
        full = build_generators(n, hurwitz_radon(n) - 1)
        for m in range(hurwitz_radon(n)):
            g = build_generators(n, m)
            assert np.array_equal(g.J, full.J[:m])
            assert np.array_equal(g.J, build_generators(n, m).J)


def test_generators_read_only():
    g = build_generators(4, 3)
    with pytest.raises(ValueError):
        g.J[0, 0, 0] = 5


def test_octonion_matches_table():
    assert np.array_equal(octonion_generators().J, table_generators())


def test_octonion_named_entries():
    J = octonion_generators().J
    j1, j7 = J[0], J[6]
    assert j1[0, 1] == 1 and j1[1, 0] == -1 and j1[6, 7] == -1 and j1[7, 6] == 1
    assert j7[0, 7] == 1 and j7[7, 0] == -1


def test_octonion_valid():
    rep = validate_generators(octonion_generators())
    assert rep.passed and rep.max_violation == 0.0


def test_sign_flip_still_valid():
    J = np.array(octonion_generators().J)
    J[0] = -J[0].T  # equals J[0] for skew matrices; flip its sign instead
    J[2] = -J[2]
    assert validate_generators(GeneratorSet(8, 7, J)).passed


def test_zeroed_entry_names_violation():
    J = np.array(octonion_generators().J)
    J[3, 0, 4] = 0
    rep = validate_generators(GeneratorSet(8, 7, J))
    assert not rep.passed
    assert "square_minus_identity" in rep.failed()
    assert "signed_permutation" in rep.failed()
    assert rep["square_minus_identity"].max_violation == 1.0


def test_loaded_tolerance():
    J = octonion_generators().J.astype(float)
    rep = validate_generators(GeneratorSet(8, 7, J + 1e-14, exact=False))
    assert rep["anti_commuting"].passed and rep["skew_symmetric"].passed
    rep = validate_generators(GeneratorSet(8, 7, J + 1e-9, exact=False))
    assert not rep.passed


def test_json_round_trip():
    g = build_generators(8, 5)
    doc = json.loads(g.dumps())
    assert set(doc) == {"n", "m", "matrices"}
    flat = [x for mat in doc["matrices"] for row in mat for x in row]
    assert all(type(x) is int for x in flat)
    back = GeneratorSet.from_json(doc)
    assert back.exact and np.array_equal(back.J, g.J)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 1), (4, 3), (8, 7), (8, 4), (16, 8), (12, 3)]),
       st.integers(0, 2**32 - 1))
def test_j_of_unit_u_squares_to_minus_identity(nm, seed):
    n, m = nm
    J = build_generators(n, m).J.astype(float)
    u = np.random.default_rng(seed).normal(size=m)
    u /= np.linalg.norm(u)
    ju = np.tensordot(u, J, axes=1)
    assert np.abs(ju @ ju + np.eye(n)).max() <= 1e-10
