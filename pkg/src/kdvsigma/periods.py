"""Period data of the degenerate curve in closed form.

Every cycle integral collapses to a rational/log expression in the
wavenumbers, so no contour integration happens here.  The a-cycle
integrals are diagonal; the b-cycle integrals have finite off-diagonal
entries and a logarithmically divergent diagonal, which is stored as 0
and advertised through the ``diag_divergent`` flag (downstream theta
regularization never reads the diagonal).

All logs are real logs of positive ratios: wavenumbers are real,
positive and distinct, so no branch choices arise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .curve import SolitonCurve, chi_table
from .structmat import ComplexMatrix, invert, matmul, w_inverse

PI_I = math.pi * 1j


def _eta_rational(c: SolitonCurve):
    """eta_i(k_j) / (pi*i) as exact rationals.

    The truncated part (f/x^(2i))_+ has coefficients lam[2i:], so its
    derivative at a_j is an exact rational polynomial evaluation, and
    k^(2i-3)/P'(k^2) is rational as well.
    """
    g = c.genus
    lam = c.exact_lam
    out = []
    for i in range(1, g + 1):
        dcoeffs = [j * lam[2 * i + j] for j in range(1, len(lam) - 2 * i)]
        row = []
        for j in range(g):
            kx = Fraction(c.k[j])
            val = Fraction(0)
            for d in reversed(dcoeffs):
                val = val * c.exact_a[j] + d
            row.append(kx ** (2 * i - 3) / c.exact_Pprime[j] * val)
        out.append(row)
    return out


@dataclass(frozen=True)
class PeriodData:
    omega1: ComplexMatrix       # first-kind a-cycle period matrix
    omega2_off: ComplexMatrix   # b-cycle first-kind periods, divergent diagonal zeroed
    tau_off: ComplexMatrix      # normalized period ratio, off-diagonal part
    eta1: ComplexMatrix         # second-kind a-cycle matrix (eta_i(k_j))
    C: ComplexMatrix            # constant shift matrix between the two wp normalizations
    diag_divergent: bool = True


def _log_ratio(ki: float, kj: float) -> float:
    # log |(k_i - k_j) / (k_i + k_j)|, negative for distinct positive k
    return math.log(abs(ki - kj) / (ki + kj))


def alpha_integrals(c: SolitonCurve):
    """A-cycle integrals of the dv and dv~ bases: both diagonal.

    Returns (diag(pi*i/k_i), diag(pi*i*k_i^(2g-1))).
    """
    g = c.genus
    first = np.diag([PI_I * float(1 / Fraction(kv)) for kv in c.k])
    second = np.diag([PI_I * float(Fraction(kv) ** (2 * g - 1)) for kv in c.k])
    return ComplexMatrix.from_array(first), ComplexMatrix.from_array(second)


def beta_integrals(c: SolitonCurve):
    """B-cycle integrals of the dv and dv~ bases.

    Off-diagonal entries are closed-form; the diagonal diverges and is
    stored as 0 (see PeriodData.diag_divergent).  The second-kind
    entries carry an additional finite double sum over even powers.
    """
    g = c.genus
    first = np.zeros((g, g), dtype=complex)
    second = np.zeros((g, g), dtype=complex)
    for i, ki in enumerate(c.k):
        for j, kj in enumerate(c.k):
            if i == j:
                continue
            lg = _log_ratio(ki, kj)
            first[i, j] = lg / ki
            tail = sum(
                ki ** (2 * r) * kj ** (2 * g - 2 * r - 1) / (g - r - 0.5)
                for r in range(g)
            )
            second[i, j] = tail + ki ** (2 * g - 1) * lg
    return ComplexMatrix.from_array(first), ComplexMatrix.from_array(second)


def omega_prime(c: SolitonCurve) -> ComplexMatrix:
    """First-kind a-cycle period matrix: W^{-1} diag(pi*i/k_i), via the
    closed-form inverse; entries are pi*i times an exact rational."""
    g = c.genus
    out = np.empty((g, g), dtype=complex)
    for j in range(g):
        r = 1 / (Fraction(c.k[j]) * c.exact_Pprime[j])
        out[:, j] = [PI_I * float(c.exact_a[j] ** i * r) for i in range(g)]
    return ComplexMatrix.from_array(out)


def omega_dprime_off(c: SolitonCurve) -> ComplexMatrix:
    """B-cycle counterpart of omega_prime with the divergent diagonal zeroed.

    Diagnostic only: downstream code consumes tau_off instead.
    """
    Winv = w_inverse(c).to_array()
    beta_first, _ = beta_integrals(c)
    return ComplexMatrix.from_array(Winv @ beta_first.to_array())


def tau_off(c: SolitonCurve) -> ComplexMatrix:
    """Off-diagonal part of the normalized period ratio.

    Entries (i/pi) log|(k_i + k_j)/(k_i - k_j)|: symmetric, purely
    imaginary with positive imaginary part.  Diagonal stored as 0,
    divergent.
    """
    g = c.genus
    t = np.zeros((g, g), dtype=complex)
    for i, ki in enumerate(c.k):
        for j, kj in enumerate(c.k):
            if i != j:
                t[i, j] = (1j / math.pi) * math.log((ki + kj) / abs(ki - kj))
    return ComplexMatrix.from_array(t)


def eta_prime(c: SolitonCurve) -> ComplexMatrix:
    """Second-kind matrix eta_i(k_j) from the truncated-polynomial derivative.

    eta_i(k) = pi*i*k^(2i-3) / P'(k^2) * d/dx[(f(x)/x^(2i))_+] at x = k^2.
    """
    rational = _eta_rational(c)
    return ComplexMatrix.from_array(
        np.array([[PI_I * float(v) for v in row] for row in rational])
    )


def c_matrix(c: SolitonCurve) -> ComplexMatrix:
    """Constant matrix C relating the two wp normalizations; C[g-1][g-1] = 1.

    Built from the second-kind matrix: C = B W with
    B[i][j] = (k_j / (pi*i)) eta_i(k_j).  The pi*i factors cancel, so C
    is assembled in exact rational arithmetic; the corner identity
    C[g-1][g-1] = 1 comes out exact.
    """
    g = c.genus
    rational = _eta_rational(c)
    chi = chi_table(c).exact_chi
    out = np.empty((g, g), dtype=complex)
    for i in range(g):
        for j in range(g):
            acc = Fraction(0)
            for l in range(g):
                acc += Fraction(c.k[l]) * rational[i][l] * chi[l][j]
            out[i, j] = float(acc)
    return ComplexMatrix.from_array(out)


def c_matrix_via_eta_omega(c: SolitonCurve) -> ComplexMatrix:
    """Second route to C: eta' omega'^{-1} with an elimination-based inverse.

    Kept as an independent code path so the closed-form route can be
    cross-checked.
    """
    return matmul(eta_prime(c), invert(omega_prime(c)))


def period_data(c: SolitonCurve) -> PeriodData:
    return PeriodData(
        omega1=omega_prime(c),
        omega2_off=omega_dprime_off(c),
        tau_off=tau_off(c),
        eta1=eta_prime(c),
        C=c_matrix(c),
    )
