import math

import numpy as np
import pytest

from kdvsigma.curve import new_curve
from kdvsigma.periods import (
    alpha_integrals,
    beta_integrals,
    c_matrix,
    c_matrix_via_eta_omega,
    eta_prime,
    omega_dprime_off,
    omega_prime,
    period_data,
    tau_off,
)
from kdvsigma.structmat import build_K, build_M, build_W, invert

PI_I = math.pi * 1j


def random_curves(seed, count, gmax=6):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        g = rng.integers(1, gmax + 1)
        k = np.sort(rng.uniform(0.2, 5.0, g))
        if g > 1 and np.min(np.diff(k)) < 0.05:
            continue
        out.append(new_curve(k))
    return out


def test_alpha_integrals_genus1():
    first, second = alpha_integrals(new_curve([1]))
    assert first.to_array().tolist() == [[PI_I]]
    assert second.to_array().tolist() == [[PI_I]]


def test_alpha_integrals_genus2():
    first, second = alpha_integrals(new_curve([2, 1]))
    np.testing.assert_allclose(first.to_array(), np.diag([PI_I / 2, PI_I]))
    np.testing.assert_allclose(second.to_array(), np.diag([8 * PI_I, PI_I]))


def test_beta_integrals_offdiag_value():
    first, _ = beta_integrals(new_curve([2, 1]))
    # (1/k_1) log|(k_1-k_2)/(k_1+k_2)| = log(1/3)/2
    assert first[0, 1] == pytest.approx(math.log(1.0 / 3.0) / 2.0)
    assert first[0, 0] == 0 and first[1, 1] == 0  # divergent diagonal stored as zero


def test_beta_integrals_log_symmetry():
    first, _ = beta_integrals(new_curve([3.2, 1.1]))
    # the log factor is symmetric; the 1/k prefactor is not
    k = (3.2, 1.1)
    assert first[0, 1] * k[0] == pytest.approx(first[1, 0] * k[1])


def test_beta_second_kind_finite_sum():
    c = new_curve([2, 1])
    g = 2
    _, second = beta_integrals(c)
    ki, kj = 2.0, 1.0
    expect = sum(ki ** (2 * r) * kj ** (2 * g - 2 * r - 1) / (g - r - 0.5) for r in range(g))
    expect += ki ** (2 * g - 1) * math.log(abs(ki - kj) / (ki + kj))
    assert second[0, 1] == pytest.approx(expect)


def test_omega_prime_genus1():
    assert omega_prime(new_curve([1])).to_array().tolist() == [[PI_I]]
    np.testing.assert_allclose(omega_prime(new_curve([2])).to_array(), [[PI_I / 2]])


def test_omega_prime_definition():
    for c in random_curves(21, 15):
        W = build_W(c).to_array()
        om = omega_prime(c).to_array()
        diag = np.diag(PI_I / np.array(c.k))
        assert np.abs(W @ om - diag).max() <= 1e-12 * np.abs(diag).max() * max(1.0, np.abs(W).max())


def test_tau_off_values():
    t = tau_off(new_curve([2, 1]))
    assert t[0, 1] == pytest.approx(1j * math.log(3.0) / math.pi)
    assert t[0, 1] == t[1, 0]
    t2 = tau_off(new_curve([3, 1]))
    assert t2[0, 1] == pytest.approx(1j * math.log(2.0) / math.pi)


def test_tau_off_structure():
    for c in random_curves(22, 15):
        T = tau_off(c).to_array()
        g = c.genus
        assert np.abs(T - T.T).max() <= 1e-10
        assert np.abs(np.diag(T)).max() == 0.0
        assert np.abs(T.real).max() <= 1e-10
        if g > 1:
            off = T[~np.eye(g, dtype=bool)]
            assert np.all(off.imag > 0)


def test_eta_prime_genus1():
    assert eta_prime(new_curve([1])).to_array()[0, 0] == pytest.approx(PI_I)
    # for any single wavenumber the truncated derivative is 1 and P'(k^2) = 1
    for kv in (0.5, 2.0, 3.7):
        assert eta_prime(new_curve([kv])).to_array()[0, 0] == pytest.approx(PI_I / kv)


def test_c_matrix_genus1():
    np.testing.assert_allclose(c_matrix(new_curve([1])).to_array(), [[1.0]])
    np.testing.assert_allclose(c_matrix(new_curve([0.7])).to_array(), [[1.0]], atol=1e-14)


def test_c_gg_is_one():
    for c in random_curves(23, 20):
        C = c_matrix(c).to_array()
        assert abs(C[c.genus - 1, c.genus - 1] - 1.0) <= 1e-10


def test_c_matrix_two_routes_agree():
    for c in random_curves(24, 20):
        C1 = c_matrix(c).to_array()
        C2 = c_matrix_via_eta_omega(c).to_array()
        assert np.abs(C1 - C2).max() <= 1e-9 * max(1.0, np.abs(C1).max())


def test_coordinate_identity():
    # pi*i * omega'^{-1} u = K(1) t with u = M^{-1} t (the hierarchy map is t = M u)
    rng = np.random.default_rng(25)
    for c in random_curves(26, 15):
        g = c.genus
        om_inv = invert(omega_prime(c)).to_array()
        K1 = build_K(c, 1).to_array()
        Minv = invert(build_M(c)).to_array()
        for _ in range(20):
            t = rng.uniform(-1, 1, g)
            lhs = PI_I * (om_inv @ (Minv @ t))
            rhs = K1 @ t
            assert np.abs(lhs - rhs).max() <= 1e-10 * max(1.0, np.abs(rhs).max())


def test_omega_dprime_off_finite():
    arr = omega_dprime_off(new_curve([2, 1])).to_array()
    assert np.all(np.isfinite(arr))


def test_period_data_bundle():
    data = period_data(new_curve([2, 1]))
    assert data.diag_divergent
    assert data.C[1, 1] == pytest.approx(1.0)
    np.testing.assert_allclose(data.omega1.to_array(), omega_prime(new_curve([2, 1])).to_array())
