import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from arclab import arcs, minor
from arclab.expsum import InstanceError, eval_at, parse_monomials

CUBES = parse_monomials("3,0:1;0,3:1")
XYZ = parse_monomials("1,1,1:1")
N_ONES = 50625  # frozen: exhaustive 5^8 scan (oracles.multilinear_count) for b = (1,...,1)


def test_symform_of_diagonal_cubic():
    sf = minor.SymForm.from_monomials(CUBES, 2, 3, 7)
    assert sf.is_symmetric()
    assert sf.tensor[0, 0, 0] == 6 and sf.tensor[1, 1, 1] == 6
    assert sf.tensor.sum() == 12


def test_psi_forms_examples():
    Psi = minor.psi_forms(CUBES, 2, 3, 5)
    expect = np.zeros((2, 2, 2), dtype=np.int64)
    expect[0, 0, 0] = expect[1, 1, 1] = 1  # 6 = 1 mod 5
    assert np.array_equal(Psi, expect)
    Psi = minor.psi_forms(XYZ, 3, 3, 7)
    assert Psi[0, 1, 2] == Psi[0, 2, 1] == 1
    assert Psi[0].sum() == 2 and minor.SymForm.from_monomials(XYZ, 3, 3, 7).is_symmetric()
    assert not minor.psi_forms((), 2, 3, 5).any()
    with pytest.raises(ValueError):
        minor.psi_forms(CUBES, 2, 3, 3)


@given(st.lists(st.tuples(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)),
                          st.integers(1, 6)), max_size=5))
def test_symform_recovers_form(mons):
    # sum_j c_j x_j1 x_j2 x_j3 / 3! reproduces the cubic part
    p = 7
    mons = [(e, c) for e, c in mons if sum(e) == 3]
    sf = minor.SymForm.from_monomials(mons, 3, 3, p)
    assert sf.is_symmetric()
    inv6 = pow(6, -1, p)
    for x in itertools.product(range(p), repeat=3):
        val = int(np.einsum("abc,a,b,c->", sf.tensor, x, x, x)) * inv6 % p
        assert val == eval_at(mons, x, p)


def test_count_system_examples():
    assert minor.count_system(CUBES, (0,) * 6, 2, 3, 2, 5) == 5 ** 8
    assert minor.count_system(CUBES, (1,) * 6, 2, 3, 2, 5) == N_ONES
    assert minor.count_system(CUBES, (1, 2, 3, 4, 0, 1), 2, 3, 2, 5) >= 1


def test_count_system_matches_direct_scan():
    Psi = minor.psi_forms(CUBES, 2, 3, 5)
    rng = np.random.default_rng(11)
    for b in [(1,) * 6] + rng.integers(0, 5, size=(3, 6)).tolist():
        w = minor.system_window(3, 2)
        assert minor.count_system(CUBES, b, 2, 3, 2, 5) == oracles.multilinear_count(Psi, b[:w], 2, 2, 5)


def test_counts_only_see_the_window():
    b = (1, 2, 3, 4, 0, 1)
    c = (1, 2, 3, 4, 4, 4)
    assert minor.system_window(3, 2) == 4
    assert minor.count_system(CUBES, b, 2, 3, 2, 5) == minor.count_system(CUBES, c, 2, 3, 2, 5)
    assert minor.count_Nalpha(CUBES, b, 2, 3, 2, 5) == minor.count_Nalpha(CUBES, c, 2, 3, 2, 5)


def test_nalpha_examples():
    assert minor.count_Nalpha(CUBES, (0,) * 6, 2, 3, 2, 5) == 5 ** 8
    assert minor.count_Nalpha(CUBES, (1,) * 6, 2, 3, 2, 5) == N_ONES


@settings(max_examples=15)
@given(st.lists(st.integers(0, 4), min_size=6, max_size=6))
def test_nalpha_equals_system(b):
    assert minor.count_Nalpha(CUBES, b, 2, 3, 2, 5) == minor.count_system(CUBES, b, 2, 3, 2, 5)


@given(st.lists(st.integers(0, 6), min_size=3, max_size=3))
def test_nalpha_equals_system_d1(b):
    assert minor.count_Nalpha(XYZ, b, 3, 3, 1, 7) == minor.count_system(XYZ, b, 3, 3, 1, 7)


def test_size_guard():
    with pytest.raises(arcs.EnumerationTooLarge):
        minor.count_system(CUBES, (1,) * 9, 2, 3, 3, 31)


def test_vg_examples():
    assert minor.vg_count((), 2, 5, k=3) == 5 ** 4
    x3 = parse_monomials("3:1")
    assert minor.vg_count(x3, 1, 5) == 2 * 5 - 1
    assert minor.vg_count(x3, 1, 5, r=2) == 2 * 25 - 1
    assert minor.vg_count_definitional(x3, 1, 5) == 9
    with pytest.raises(ValueError):
        minor.vg_count(x3, 1, 5, r=3)


def test_vg_quadratic_is_kernel():
    assert minor.vg_count(parse_monomials("2,0:1;0,2:1"), 2, 5) == 1
    assert minor.vg_count(parse_monomials("2,0:1;0,0:3"), 2, 5) == 5
    assert minor.vg_count(parse_monomials("1,1:1;1,0:2"), 2, 7) == 1


@settings(max_examples=25)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 2))
def test_vg_characterisation_matches_definition(seed, N):
    rng = np.random.default_rng(seed)
    G = minor.random_form(N, 3, 5, rng)
    assert minor.vg_count(G, N, 5) == minor.vg_count_definitional(G, N, 5)


def test_weyl_zero_form_is_equality():
    rep = minor.weyl_check((), 2, 5, k=3)
    assert rep.lhs == rep.rhs == 5 ** 8 and rep.passed


def test_weyl_x_cubed():
    rep = minor.weyl_check(parse_monomials("3:1"), 1, 5)
    direct = oracles.form_charsum(parse_monomials("3:1"), 1, 5)
    assert abs(rep.abs_S - abs(direct)) < 1e-9
    assert rep.rhs == 225 and rep.lhs <= 225 and rep.passed


@settings(max_examples=30)
@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([5, 7]), st.integers(1, 3))
def test_weyl_chain(seed, p, N):
    rng = np.random.default_rng(seed)
    G = minor.random_form(N, 3, p, rng)
    rep = minor.weyl_check(G, N, p)
    assert rep.passed
    assert abs(rep.abs_S - abs(oracles.form_charsum(G, N, p))) < 1e-6 * max(1.0, rep.abs_S)


def test_random_form_has_exact_degree():
    rng = np.random.default_rng(0)
    for _ in range(20):
        G = minor.random_form(3, 3, 5, rng, homogeneous=True)
        assert all(sum(e) == 3 for e, _ in G)


def test_minor_bound_range(curve5):
    with pytest.raises(ValueError):
        minor.minor_bound_check(curve5, 1)
    with pytest.raises(ValueError):
        minor.minor_bound_check(curve5, 4)


def test_minor_bound_skips_major_arcs(curve5, cl_5_6):
    rep = minor.minor_bound_check(curve5, 2, classification=cl_5_6)
    assert rep.details["n_points"] == int((cl_5_6.level > 2).sum()) == 15000
    assert rep.details["max_N"] == rep.details["max_ratio"] * 5 ** 6
    prefix = rep.details["argmax_prefix"]
    hits = cl_5_6.tails[(cl_5_6.tails[:, :4] == prefix).all(axis=1)]
    assert (cl_5_6.level[(cl_5_6.tails[:, :4] == prefix).all(axis=1)] > 2).any() and len(hits)


def test_minor_bound_top_level_is_vacuous(curve5, cl_5_6):
    # A_3 is all of F_5^6 when kd = 6
    rep = minor.minor_bound_check(curve5, 3, classification=cl_5_6)
    assert rep.details["vacuous"] and rep.details["max_ratio"] is None


def test_minor_bound_sampling_deterministic(curve5, cl_5_6):
    a = minor.minor_bound_check(curve5, 2, samples=200, seed=4, classification=cl_5_6)
    b = minor.minor_bound_check(curve5, 2, samples=200, seed=4, classification=cl_5_6, workers=4)
    assert a.details == b.details and a.details["sampled"]


def test_minor_exponent(curve5):
    assert minor.minor_exponent(curve5, 2) == 2 * 2 * 2 - 2 * 1
    assert minor.minor_exponent(curve5, 3) == 6


def test_dimv_fit_diagonal_cubic():
    res = minor.dimv_fit(CUBES, 2, 3, 5)
    assert (res["count_p"], res["count_p2"]) == (81, 2401)
    assert res["dim"] == 2 == res["bound"] and res["consistent"] and res["passed"]


def test_dimv_fit_rejects_singular_form():
    with pytest.raises(InstanceError):
        minor.dimv_fit(parse_monomials("2,1:1"), 2, 3, 5)
