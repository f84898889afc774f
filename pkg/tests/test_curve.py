import numpy as np
import pytest

from kdvsigma import polynomial as poly
from kdvsigma.curve import chi_table, new_curve
from kdvsigma.errors import DuplicateWavenumber, EmptyWavenumbers, NonPositiveWavenumber


def test_single_soliton_curve():
    c = new_curve([1])
    assert c.genus == 1
    assert c.a == (1.0,)
    assert c.P.coeffs == (-1 + 0j, 1 + 0j)
    assert c.f.coeffs == (0j, 1 + 0j, -2 + 0j, 1 + 0j)
    assert c.lam == (0j, 1 + 0j, -2 + 0j, 1 + 0j)


def test_two_soliton_curve():
    c = new_curve([2, 1])
    assert c.a == (4.0, 1.0)
    assert c.P.coeffs == (4 + 0j, -5 + 0j, 1 + 0j)
    assert c.mu == (4 + 0j, -5 + 0j)
    assert c.lam[4] == -10 + 0j
    assert c.lam[5] == 1 + 0j  # leading coefficient is 1 by construction


def test_unsorted_input_is_reordered():
    c = new_curve([1, 2])
    assert c.k == (2.0, 1.0)


def test_empty_rejected():
    with pytest.raises(EmptyWavenumbers):
        new_curve([])


def test_nonpositive_rejected():
    with pytest.raises(NonPositiveWavenumber):
        new_curve([2.0, -1.0])
    with pytest.raises(NonPositiveWavenumber):
        new_curve([0.0])


def test_duplicate_rejected():
    with pytest.raises(DuplicateWavenumber):
        new_curve([1, 1])
    with pytest.raises(DuplicateWavenumber):
        new_curve([3.0, 3.0 + 1e-14])


def test_lambda_invariants():
    rng = np.random.default_rng(3)
    for _ in range(20):
        g = rng.integers(1, 9)
        k = np.sort(rng.uniform(0.2, 5.0, g))
        if len(np.unique(np.round(k, 6))) < g:
            continue
        c = new_curve(k)
        assert c.lam[2 * g + 1] == 1.0
        assert c.lam[0] == 0.0
        assert abs(c.lam[1] - c.mu[0] ** 2) <= 1e-12 * abs(c.lam[1])
        # subleading coefficient is twice mu_{g-1} = -2 sum(a)
        expect = -2.0 * sum(c.a)
        assert abs(c.lam[2 * g] - expect) <= 1e-12 * max(1.0, abs(expect))
        assert all(abs(v) > 0 for v in c.Pprime_at_a)


def test_chi_table_genus1():
    c = new_curve([1])
    t = chi_table(c)
    assert t.chi == ((1 + 0j,),)


def test_chi_table_genus2():
    c = new_curve([2, 1])
    t = chi_table(c)
    # P/(x-4) = x-1 and P/(x-1) = x-4, by polynomial division
    assert t.chi[0] == (-1 + 0j, 1 + 0j)
    assert t.chi[1] == (-4 + 0j, 1 + 0j)


def test_chi_leading_coefficient_is_one():
    rng = np.random.default_rng(4)
    for _ in range(10):
        g = rng.integers(1, 9)
        k = np.sort(rng.uniform(0.3, 4.0, g))
        if len(np.unique(np.round(k, 6))) < g:
            continue
        t = chi_table(new_curve(k))
        for row in t.chi:
            assert row[-1] == 1.0


def test_chi_rows_reconstruct_P():
    rng = np.random.default_rng(5)
    for _ in range(20):
        g = rng.integers(1, 9)
        k = np.sort(rng.uniform(0.2, 5.0, g))
        if len(np.unique(np.round(k, 6))) < g:
            continue
        c = new_curve(k)
        t = chi_table(c)
        for i in range(g):
            prod = poly.mul(poly.Polynomial(t.chi[i]), poly.from_roots([c.a[i]]))
            assert prod.degree == c.P.degree
            # coefficient-wise, relative to the summands that form it
            for j, (pc, qc) in enumerate(zip(prod.coeffs, c.P.coeffs)):
                summand = abs(t.chi[i][j - 1]) if j >= 1 else 0.0
                summand += c.a[i] * abs(t.chi[i][j]) if j < g else 0.0
                assert abs(pc - qc) <= 1e-12 * max(1.0, summand)
        # the exact rows satisfy the identity with no error at all
        for i in range(g):
            row = t.exact_chi[i]
            prod_exact = [-c.exact_a[i] * row[0]] + [
                row[j - 1] - c.exact_a[i] * (row[j] if j < g else 0) for j in range(1, g + 1)
            ]
            assert prod_exact == list(c.exact_mu) + [1]
