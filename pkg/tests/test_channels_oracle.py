import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cvschmidt.bounds import conjectured_bound
from cvschmidt.channels_oracle import (
    DiagonalKrausChannel,
    FilterAction,
    FilterSpec,
    IdentityAction,
    QuadConfig,
    QuadratureError,
    ek_fidelity_derivative_form,
    ek_fidelity_gamma_form,
    filter_fidelity_closed,
    filter_moments,
    gaussian_moment,
    gaussian_moment_closed,
    optimal_ek_coefficients,
    optimal_ek_fidelity,
    prior_integral,
    quadrature_fidelity_oracle,
)
from cvschmidt.eigen import max_eigenvalue
from cvschmidt.params import DomainError, GainWidthParams

GOLDEN = (3 + math.sqrt(5)) / 8
POINTS = [(eta, lam) for eta in (0.5, 1.0, 2.0) for lam in (0.01, 0.1, 1.0)]


def perron(m):
    w, v = np.linalg.eigh(np.asarray(m, dtype=float))
    return np.abs(v[:, -1])


def test_ek_k1():
    for eta in (0.3, 1.0, 4.0):
        c = DiagonalKrausChannel([1.0], eta)
        assert ek_fidelity_gamma_form(c) == pytest.approx(1 / (1 + eta), rel=1e-15)
        assert ek_fidelity_derivative_form(c) == pytest.approx(1 / (1 + eta), rel=1e-15)
    assert optimal_ek_fidelity(1, 1.0) == 0.5


def test_ek_k2_perron_coefficients():
    c = DiagonalKrausChannel(perron([[1, 0.5], [0.5, 0.5]]), 1.0)
    assert ek_fidelity_gamma_form(c) == pytest.approx(GOLDEN, rel=1e-14)
    assert optimal_ek_fidelity(2, 1.0) == pytest.approx(GOLDEN, rel=1e-14)


def test_ek_basis_vectors_pick_diagonal():
    from math import comb

    eta = 1.0
    for n in range(5):
        a = np.zeros(5)
        a[n] = 1.0
        c = DiagonalKrausChannel(a, eta)
        # gamma_nn at x = 1/2 is C(2n, n) / 4^n
        want = comb(2 * n, n) / 4**n / (1 + eta)
        assert ek_fidelity_gamma_form(c) == pytest.approx(want, rel=1e-13)
        assert ek_fidelity_derivative_form(c) == pytest.approx(want, rel=1e-13)


@settings(max_examples=200, deadline=None)
@given(
    st.integers(1, 6).flatmap(lambda k: st.lists(st.floats(-1, 1), min_size=k, max_size=k)),
    st.floats(0.05, 20),
)
def test_two_forms_agree(coeffs, eta):
    a = np.array(coeffs)
    if np.linalg.norm(a) < 1e-3:
        a = np.ones_like(a)
    c = DiagonalKrausChannel(a / np.linalg.norm(a), eta)
    assert ek_fidelity_gamma_form(c) == pytest.approx(ek_fidelity_derivative_form(c), abs=1e-12)


def test_optimal_ek_k3_against_lapack():
    x = 0.5
    g = lambda n, m: math.comb(n + m, n) * x ** (n + m)  # noqa: E731  J = 0, kappa-free
    m = np.array([[g(n, mm) for mm in range(3)] for n in range(3)])
    assert optimal_ek_fidelity(3, 1.0) == pytest.approx(np.linalg.eigvalsh(m)[-1] / 2, rel=1e-13)


@pytest.mark.parametrize("eta", [0.5, 1.0, 2.0])
def test_optimal_ek_is_flat_prior_conjectured_bound(eta):
    for k in range(1, 7):
        assert optimal_ek_fidelity(k, eta) == pytest.approx(conjectured_bound(k, GainWidthParams(eta, 0.0)), rel=1e-13)
        c = DiagonalKrausChannel(optimal_ek_coefficients(k, eta), eta)
        assert ek_fidelity_gamma_form(c) == pytest.approx(optimal_ek_fidelity(k, eta), rel=1e-12)


def test_optimal_ek_domain():
    with pytest.raises(DomainError):
        optimal_ek_fidelity(0, 1.0)
    with pytest.raises(DomainError):
        optimal_ek_fidelity(2, 0.0)


def test_unit_norm_enforced():
    with pytest.raises(DomainError):
        DiagonalKrausChannel([1.0, 1.0], 1.0)
    with pytest.raises(DomainError):
        FilterSpec([0.6, 0.8], g=2.0, norm_N=1.0)


def test_filter_k1_attains_classical():
    for eta, lam in POINTS:
        f = FilterSpec.bound_attaining([1.0], lam)
        fid, ps = filter_fidelity_closed(f, GainWidthParams(eta, lam))
        assert fid == pytest.approx((1 + lam) / (1 + eta + lam), rel=1e-15)
        assert ps == pytest.approx(lam / (1 + lam), rel=1e-15)


def test_success_probability_example():
    f = FilterSpec([1.0], g=math.sqrt(2.0), norm_N=1.0)
    assert filter_fidelity_closed(f, GainWidthParams(1.0, 1.0))[1] == 0.5


@pytest.mark.parametrize("eta,lam", POINTS)
def test_perron_filter_attains_conjectured(eta, lam):
    from cvschmidt.gamma_kernel import SubmatrixSpec, build_submatrix
    from cvschmidt.params import kernel_from_gain_width

    p = GainWidthParams(eta, lam)
    kp = kernel_from_gain_width(p)
    for k in range(1, 9):
        a = perron(build_submatrix(SubmatrixSpec(0, tuple(range(k))), kp))
        f = FilterSpec.bound_attaining(a, lam)
        fid, ps = filter_fidelity_closed(f, p)
        assert fid == pytest.approx(conjectured_bound(k, p), abs=1e-10)
        assert ps == f.norm_N * lam / (1 + lam)
        # the general moment formula agrees and its P_s is the same number
        num, ps_m = filter_moments(f, p)
        assert num / ps_m == pytest.approx(fid, rel=1e-11)
        assert ps_m == pytest.approx(ps, rel=1e-13)


def test_bound_attaining_filter_is_physical():
    rng = np.random.default_rng(1)
    for k in range(1, 12):
        a = rng.uniform(0.01, 1, size=k)
        f = FilterSpec.bound_attaining(a / np.linalg.norm(a), 0.5)
        assert 0 < f.norm_N
        assert f.norm_N * f.max_gain_sq == pytest.approx(1.0, rel=1e-14)


def test_closed_form_requires_positive_lambda_and_matched_gain():
    f = FilterSpec.bound_attaining([1.0], 0.2)
    with pytest.raises(DomainError):
        filter_fidelity_closed(f, GainWidthParams(1.0, 0.0))
    with pytest.raises(DomainError):
        filter_fidelity_closed(f, GainWidthParams(1.0, 0.3))


@pytest.mark.parametrize("eta,lam", [(0.5, 0.01), (1.0, 0.1), (2.0, 1.0), (1.0, 5.0)])
def test_moment_identity(eta, lam):
    for m in range(11):
        assert gaussian_moment(m, eta, lam) == pytest.approx(gaussian_moment_closed(m, eta, lam), rel=1e-10)


@pytest.mark.parametrize("eta,lam", POINTS)
def test_oracle_matches_closed_form(eta, lam):
    rng = np.random.default_rng(int(eta * 100 + lam * 1000))
    p = GainWidthParams(eta, lam)
    for k in range(1, 7):
        a = rng.normal(size=k)
        f = FilterSpec.bound_attaining(a / np.linalg.norm(a), lam)
        _, ps, fid = quadrature_fidelity_oracle(FilterAction(f, eta), p)
        want_fid, want_ps = filter_fidelity_closed(f, p)
        assert fid == pytest.approx(want_fid, rel=1e-8)
        assert ps == pytest.approx(want_ps, rel=1e-8)


def test_oracle_polar_mode_agrees():
    p = GainWidthParams(1.5, 0.1)
    f = FilterSpec.bound_attaining(np.array([0.5, -0.5, 0.5, 0.5]), 0.1)
    radial = quadrature_fidelity_oracle(FilterAction(f, 1.5), p)
    polar = quadrature_fidelity_oracle(FilterAction(f, 1.5), p, QuadConfig(mode="polar"))
    np.testing.assert_allclose(polar, radial, rtol=1e-10)


def test_identity_unit_gain_fidelity_one():
    for lam in (0.01, 1.0):
        assert quadrature_fidelity_oracle(IdentityAction(1.0), GainWidthParams(1.0, lam))[2] == pytest.approx(1.0)


def test_identity_closed_form_off_unit_gain():
    # int p_lam e^{-c|a|^2} = lam / (lam + c)
    eta, lam = 2.0, 0.3
    c = (math.sqrt(eta) - 1) ** 2
    assert quadrature_fidelity_oracle(IdentityAction(eta), GainWidthParams(eta, lam))[2] == pytest.approx(
        lam / (lam + c), rel=1e-10
    )


def test_order_doubling_is_converged():
    p = GainWidthParams(1.0, 0.1)
    f = FilterSpec.bound_attaining(np.ones(5) / math.sqrt(5), 0.1)
    act = FilterAction(f, 1.0)
    a = quadrature_fidelity_oracle(act, p, QuadConfig(order=64))
    b = quadrature_fidelity_oracle(act, p, QuadConfig(order=128))
    np.testing.assert_allclose(a, b, rtol=1e-9)


def test_nonconvergence_raises():
    # an integrand with a kink at |a| = 1 defeats Gauss-Laguerre
    with pytest.raises(QuadratureError):
        prior_integral(lambda a: (np.abs(a) < 1).astype(float), 1.0, 0.0, QuadConfig(max_order=64))


def test_prior_needs_positive_lambda():
    with pytest.raises(DomainError):
        prior_integral(lambda a: np.ones(np.shape(a)), 0.0, 1.0)
