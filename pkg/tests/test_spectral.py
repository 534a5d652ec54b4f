import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cesaro.matrices import build, identity_matrix, multiply_exact_block
from cesaro.spectral import (
    adjoint_eigen_coefficients,
    adjoint_eigen_residual,
    disk_grid,
    lp_bound,
    lp_bound_suite,
    lp_sharpness_ratio,
    m_p,
    operator_norm,
    point_spectrum_divergence_witness,
    sharpness_ratio,
)
from oracles import binomial_square_partial_norms, m_p_grid, sharpness_ratio_direct

SECTIONS = [2**k for k in range(4, 13)]


@pytest.fixture(scope="module")
def section_norms():
    return [operator_norm("cesaro", N).norm for N in SECTIONS]


@pytest.mark.parametrize("N", [1, 5, 40])
def test_diagonal_reciprocal_norm(N):
    assert operator_norm(build("diag_reciprocal", N)).norm == 1


def test_cesaro_1024_in_range(section_norms):
    v = section_norms[SECTIONS.index(1024)]
    assert 1.5 < v < 2.0


def test_norms_nondecreasing_and_below_two(section_norms):
    assert all(a <= b for a, b in zip(section_norms, section_norms[1:]))
    assert max(section_norms) <= 2 + 1e-9


def test_matrix_free_agrees_with_dense():
    for N in (16, 64):
        assert abs(operator_norm("cesaro", N).norm - operator_norm(build("cesaro", N)).norm) < 1e-10
        assert abs(operator_norm("cesaro_adjoint", N).norm - operator_norm("cesaro", N).norm) < 1e-10


def test_dense_norm_agrees_with_svd():
    a = build("cesaro", 50).to_numpy()
    assert abs(operator_norm(build("cesaro", 50)).norm - np.linalg.norm(a, 2)) < 1e-10


def test_i_minus_c_product_norm():
    N = 100
    x = identity_matrix(N) - build("cesaro", N)
    xt = build("custom", N, entries=[list(r) for r in zip(*x.entries)])
    d = multiply_exact_block(x, xt)
    assert operator_norm(d).norm == pytest.approx(99 / 100, abs=1e-15)


def test_non_convergence_reported_not_raised():
    est = operator_norm("cesaro", 512, tol=1e-300, maxit=3)
    assert not est.converged and est.iterations == 3


def test_operator_norm_errors():
    with pytest.raises(ValueError):
        operator_norm("cesaro")
    with pytest.raises(ValueError):
        operator_norm("hilbert", 8)
    with pytest.raises(TypeError):
        operator_norm(np.eye(3))


@pytest.mark.parametrize("a,frozen,floor", [(1.0, 1.4806321371774926, 1.0),
                                             (0.55, 1.8492420725178276, 1.7),
                                             (0.75, 1.6659085126901412, 1.28)])
def test_sharpness_family(a, frozen, floor):
    r = sharpness_ratio(a, 10**6)
    assert abs(r - frozen) < 1e-9
    assert abs(r - sharpness_ratio_direct(a, 10**6)) < 1e-9
    assert max(floor, 1 / a) <= r <= 2


def test_sharpness_rejects_small_exponent():
    with pytest.raises(ValueError):
        sharpness_ratio(0.5, 1000)


@pytest.mark.parametrize("N", [1024, 4096])
def test_section_norm_dominates_sharpness(N):
    assert operator_norm("cesaro", N).norm >= sharpness_ratio(0.55, N) - 1e-9


def test_eigen_residual_at_one():
    assert adjoint_eigen_residual(1, 50) == 0
    assert adjoint_eigen_residual(1.0, 50) == 0


@pytest.mark.parametrize("n", [1, 2, 5])
def test_finite_support_eigenvectors(n):
    lam = Fraction(1, n + 1)
    c = adjoint_eigen_coefficients(lam, n + 4)
    assert c[: n + 1] == [(-1) ** k * math.comb(n, k) for k in range(n + 1)] and c[n + 1:] == [0] * 3
    assert adjoint_eigen_residual(lam, n + 4) == 0


def test_half_residual_small_and_decreasing():
    rs = [adjoint_eigen_residual(0.5, N) for N in (10**3, 10**4, 10**5)]
    assert rs[-1] < 1e-3
    assert rs[0] >= rs[1] >= rs[2]


@pytest.mark.parametrize("lam", [0.5, 0.8, 0.9 + 0.3j])
def test_residual_nonincreasing(lam):
    rs = [adjoint_eigen_residual(lam, N) for N in (10, 100, 1000, 10**4, 10**5)]
    assert all(a >= b for a, b in zip(rs, rs[1:]))


@settings(max_examples=30)
@given(st.floats(0.05, 0.95), st.floats(0, 2 * math.pi))
def test_coefficients_match_generalized_binomial(r, phi):
    lam = 1 + r * complex(math.cos(phi), math.sin(phi))
    c = adjoint_eigen_coefficients(lam, 12)
    beta = (1 - lam) / lam
    direct = [(-1) ** k * math.prod(beta - j for j in range(k)) / math.factorial(k) for k in range(12)]
    assert np.max(np.abs(c - np.array(direct))) < 1e-12


def test_residual_rejects_outside_disk():
    with pytest.raises(ValueError):
        adjoint_eigen_residual(2.0, 10)
    with pytest.raises(ValueError):
        adjoint_eigen_residual(0.0, 10)


def test_disk_grid_shape():
    g = disk_grid(0.9, 25)
    assert len(g) == 25 and len(set(g)) == 25
    assert all(abs(1 - z) <= 0.9 + 1e-12 for z in g)
    assert max(abs(1 - z) for z in g) == pytest.approx(0.9)


def test_divergence_witness_n0():
    w = point_spectrum_divergence_witness(0, 10**4)
    assert abs(w[-1] - math.sqrt(10**4 + 1)) < 1e-9


def test_divergence_witness_n1():
    w = point_spectrum_divergence_witness(1, 1000)
    assert np.allclose(w, binomial_square_partial_norms(1, 1000), rtol=1e-13)
    assert w[-1] == pytest.approx(1000**1.5 / math.sqrt(3), rel=2e-3)


def test_divergence_witness_n2():
    w = point_spectrum_divergence_witness(2, 1000)
    assert np.allclose(w, binomial_square_partial_norms(2, 1000), rtol=1e-13)
    assert all(a < b for a, b in zip(w, w[1:]))
    assert w[-1] / w[0] > 1e3


def test_divergence_witness_rejects_negative():
    with pytest.raises(ValueError):
        point_spectrum_divergence_witness(-1, 10)


@pytest.mark.parametrize("p", [2.5, 3, 4, 6])
def test_m_p_against_grid(p):
    assert abs(m_p(p) - m_p_grid(p)) < 1e-10


def test_m_p_closed_forms():
    assert m_p(3) == pytest.approx(2 - math.sqrt(2), abs=1e-10)
    assert m_p(4) == pytest.approx(1 / 3, abs=1e-10)


def test_lp_bound_branches():
    assert lp_bound(2) == 1
    assert lp_bound(1.5) == 2
    assert lp_bound(2 + 1e-9) == pytest.approx(1, abs=1e-6)
    with pytest.raises(ValueError):
        lp_bound(1)


@pytest.mark.parametrize("p", [1.5, 2, 3, 4])
def test_lp_suites_pass(p):
    rep = lp_bound_suite(p, samples=1000)
    assert rep.passed
    assert rep.max_ratio_c <= rep.q
    assert rep.max_ratio_i_minus_c <= rep.bound * (1 + 1e-12)


def test_lp_suite_deterministic():
    a, b = lp_bound_suite(3, samples=50), lp_bound_suite(3, samples=50)
    assert a == b


def test_lp_suite_rejects_small_p():
    with pytest.raises(ValueError):
        lp_bound_suite(1.0)


@pytest.mark.parametrize("p", [1.5, 2, 3, 4])
def test_lp_sharpness_within_fifteen_percent(p):
    q = p / (p - 1)
    r = lp_sharpness_ratio(p)
    assert 0.85 * q <= r <= q
