import numpy as np
import pytest

from kdvsigma import polynomial as poly


def test_from_roots_empty_is_one():
    p = poly.from_roots([])
    assert p.coeffs == (1.0 + 0j,)


def test_from_roots_single():
    p = poly.from_roots([1])
    assert p.coeffs == (-1.0 + 0j, 1.0 + 0j)


def test_from_roots_two():
    # (x-4)(x-1) = x^2 - 5x + 4, expanded by hand
    p = poly.from_roots([4, 1])
    assert p.coeffs == (4.0 + 0j, -5.0 + 0j, 1.0 + 0j)


def test_mul_identity():
    p = poly.from_roots([1])
    assert poly.mul(p, poly.ONE).coeffs == p.coeffs


def test_mul_square():
    p = poly.from_roots([1])
    assert poly.mul(p, p).coeffs == (1 + 0j, -2 + 0j, 1 + 0j)


def test_mul_x_p_squared():
    # x * (x^2-5x+4)^2 = x^5 - 10x^4 + 33x^3 - 40x^2 + 16x
    P = poly.from_roots([4, 1])
    f = poly.mul(poly.Polynomial((0, 1)), poly.mul(P, P))
    assert f.coeffs == (0j, 16 + 0j, -40 + 0j, 33 + 0j, -10 + 0j, 1 + 0j)


def test_derivative_constant():
    assert poly.derivative(poly.ONE).is_zero()


def test_derivative_quadratic():
    p = poly.Polynomial((4, -5, 1))
    assert poly.derivative(p).coeffs == (-5 + 0j, 2 + 0j)


def test_derivative_quintic():
    f = poly.Polynomial((0, 16, -40, 33, -10, 1))
    assert poly.derivative(f).coeffs == (16 + 0j, -80 + 0j, 99 + 0j, -40 + 0j, 5 + 0j)


@pytest.mark.parametrize("z,expected", [(4, 0), (1, 0)])
def test_eval_roots(z, expected):
    p = poly.Polynomial((4, -5, 1))
    assert poly.eval_poly(p, z) == expected


def test_eval_linear():
    p = poly.Polynomial((-5, 2))
    assert poly.eval_poly(p, 4) == 3
    assert poly.eval_poly(p, 1) == -3


def test_polynomial_part_drops_low_terms():
    # (x^3 - 2x^2 + x)/x^2 = x - 2 + 1/x -> polynomial part x - 2
    f = poly.Polynomial((0, 1, -2, 1))
    assert poly.polynomial_part_over_power(f, 2).coeffs == (-2 + 0j, 1 + 0j)


def test_polynomial_part_power_zero_is_identity():
    f = poly.Polynomial((3, 1, 2))
    assert poly.polynomial_part_over_power(f, 0).coeffs == f.coeffs


def test_polynomial_part_all_negative_powers():
    assert poly.polynomial_part_over_power(poly.ONE, 3).is_zero()


def test_from_roots_evaluates_to_zero_on_roots():
    # relative to the natural evaluation scale sum |c_j| |r|^j, which is
    # what Horner cancellation leaves behind
    rng = np.random.default_rng(7)
    for _ in range(30):
        n = rng.integers(1, 11)
        roots = rng.uniform(0.1, 10.0, n) * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
        p = poly.from_roots(roots)
        for r in roots:
            scale = sum(abs(c) * abs(r) ** j for j, c in enumerate(p.coeffs))
            assert abs(poly.eval_poly(p, r)) <= 1e-12 * scale


def test_product_rule():
    rng = np.random.default_rng(8)
    for _ in range(20):
        pc = rng.normal(size=rng.integers(1, 6)) + 1j * rng.normal(size=1)
        qc = rng.normal(size=rng.integers(1, 6)) + 1j * rng.normal(size=1)
        p = poly.Polynomial(tuple(pc))
        q = poly.Polynomial(tuple(qc))
        lhs = poly.derivative(poly.mul(p, q))
        rhs = poly.add(poly.mul(poly.derivative(p), q), poly.mul(p, poly.derivative(q)))
        n = max(len(lhs.coeffs), len(rhs.coeffs), 1)
        la = np.zeros(n, dtype=complex)
        ra = np.zeros(n, dtype=complex)
        la[: len(lhs.coeffs)] = lhs.coeffs
        ra[: len(rhs.coeffs)] = rhs.coeffs
        assert np.allclose(la, ra, rtol=0, atol=1e-12 * (1 + np.abs(la).max()))


def test_polynomial_part_remainder_identity():
    # f(x) - x^m (f/x^m)_+ must have degree < m, as exact coefficients
    rng = np.random.default_rng(9)
    for _ in range(20):
        coeffs = tuple(rng.normal(size=rng.integers(1, 9)))
        f = poly.Polynomial(coeffs)
        for m in range(0, len(coeffs) + 2):
            part = poly.polynomial_part_over_power(f, m)
            shifted = poly.mul(poly.Polynomial((0.0,) * m + (1.0,)), part) if not part.is_zero() else poly.ZERO
            rem = poly.add(f, poly.scale(shifted, -1))
            assert rem.degree < m or rem.is_zero()
            # and the high part is reproduced exactly
            for j, c in enumerate(f.coeffs):
                if j >= m:
                    assert shifted.coeffs[j] == c


def test_degree_additivity():
    rng = np.random.default_rng(10)
    for _ in range(20):
        p = poly.from_roots(rng.uniform(0.5, 2.0, rng.integers(1, 5)))
        q = poly.from_roots(rng.uniform(0.5, 2.0, rng.integers(1, 5)))
        assert poly.mul(p, q).degree == p.degree + q.degree
