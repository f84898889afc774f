"""Structural matrices of a soliton curve and small dense linear algebra.

The five matrices W, M, K(l), V and the diagonal of P'(a_i) tie the
curve data to its period matrices: W holds the quotient coefficients
chi row by row, M is the unit lower-triangular band matrix of the mu
coefficients, K(l) holds descending even powers of the wavenumbers
shifted by l, and V is the Vandermonde matrix in the branch points.

Identities kept by construction (and enforced in the test suite):
W = K(0) M, W V = diag(P'(a_i)), so the closed-form inverse of W is
V diag(1/P'(a_i)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .curve import SolitonCurve, chi_table
from .errors import DimensionMismatch, SingularMatrix

SINGULAR_RTOL = 1e-13


@dataclass(frozen=True)
class ComplexMatrix:
    """Immutable dense complex matrix (row-major)."""

    rows: int
    cols: int
    entries: tuple = field(repr=False)  # flattened row-major

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise DimensionMismatch(f"matrix dimensions must be positive: {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        object.__setattr__(self, "entries", tuple(complex(v) for v in self.entries))

    @classmethod
    def from_array(cls, arr) -> "ComplexMatrix":
        arr = np.atleast_2d(np.asarray(arr, dtype=complex))
        return cls(arr.shape[0], arr.shape[1], tuple(arr.ravel()))

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=complex).reshape(self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i * self.cols + j]


def identity(n: int) -> ComplexMatrix:
    return ComplexMatrix.from_array(np.eye(n, dtype=complex))


def build_W(c: SolitonCurve) -> ComplexMatrix:
    """Row i = ascending coefficients of the quotient pi_{i+1}; last column all ones."""
    return ComplexMatrix.from_array(np.array(chi_table(c).chi, dtype=complex))


def build_M(c: SolitonCurve) -> ComplexMatrix:
    """Unit lower-triangular band matrix: entry (r, c), r > c, is mu_{g-(r-c)}."""
    g = c.genus
    M = np.eye(g, dtype=complex)
    for r in range(g):
        for s in range(r):
            M[r, s] = c.mu[g - (r - s)]
    return ComplexMatrix.from_array(M)


def build_K(c: SolitonCurve, l: int) -> ComplexMatrix:
    """Row i = (k_i^(2g+l-2), k_i^(2g+l-4), ..., k_i^l).

    Powers are taken in exact rational arithmetic (the float wavenumber
    is an exact binary rational) and rounded once, so real wavenumbers
    produce exactly real, correctly rounded entries.
    """
    g = c.genus
    K = np.empty((g, g), dtype=complex)
    for i, kv in enumerate(c.k):
        kx = Fraction(kv)
        K[i, :] = [float(kx ** (2 * (g - j) + l)) for j in range(1, g + 1)]
    return ComplexMatrix.from_array(K)


def build_V(c: SolitonCurve) -> ComplexMatrix:
    """Vandermonde matrix in the branch points: entry (i, j) = a_j^i."""
    g = c.genus
    V = np.empty((g, g), dtype=complex)
    for j, av in enumerate(c.exact_a):
        V[:, j] = [float(av ** i) for i in range(g)]
    return ComplexMatrix.from_array(V)


def build_Pdiag(c: SolitonCurve) -> ComplexMatrix:
    """diag(P'(a_1), ..., P'(a_g))."""
    return ComplexMatrix.from_array(np.diag(np.array(c.Pprime_at_a, dtype=complex)))


def matmul(A: ComplexMatrix, B: ComplexMatrix) -> ComplexMatrix:
    if A.cols != B.rows:
        raise DimensionMismatch(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    return ComplexMatrix.from_array(A.to_array() @ B.to_array())


def solve(A: ComplexMatrix, B: ComplexMatrix) -> ComplexMatrix:
    """Solve A X = B by Gaussian elimination with partial pivoting.

    Raises SingularMatrix when the best available pivot falls below
    SINGULAR_RTOL times the largest initial row norm of A.
    """
    if A.rows != A.cols:
        raise DimensionMismatch(f"solve needs a square matrix, got {A.rows}x{A.cols}")
    if B.rows != A.rows:
        raise DimensionMismatch(f"right-hand side has {B.rows} rows, expected {A.rows}")
    n = A.rows
    a = A.to_array().copy()
    b = B.to_array().copy()
    row_norms = np.abs(a).sum(axis=1)
    threshold = SINGULAR_RTOL * float(row_norms.max())
    for col in range(n):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        if abs(a[piv, col]) < threshold:
            raise SingularMatrix(abs(a[piv, col]), threshold)
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            b[[col, piv]] = b[[piv, col]]
        for r in range(col + 1, n):
            factor = a[r, col] / a[col, col]
            a[r, col:] -= factor * a[col, col:]
            b[r, :] -= factor * b[col, :]
    x = np.zeros_like(b)
    for r in range(n - 1, -1, -1):
        x[r, :] = (b[r, :] - a[r, r + 1:] @ x[r + 1:, :]) / a[r, r]
    return ComplexMatrix.from_array(x)


def invert(A: ComplexMatrix) -> ComplexMatrix:
    return solve(A, identity(A.rows))


def w_factorization_error(c: SolitonCurve) -> float:
    """Max-norm discrepancy of W against the product K(0) M, relative to
    the largest entry of W.

    The product is taken in exact rational arithmetic and rounded once,
    so the result measures the identity itself rather than float64
    accumulation noise (the summands cancel through several orders of
    magnitude at genus 8).
    """
    g = c.genus
    chi = chi_table(c).exact_chi
    mu_ext = c.exact_mu + (Fraction(1),)
    worst = Fraction(0)
    scale = 0.0
    for i in range(g):
        kx = Fraction(c.k[i])
        for j in range(g):
            acc = Fraction(0)
            for l in range(j, g):
                # K(0)[i][l] = k_i^(2(g-l-1)), M[l][j] = mu_{g-(l-j)} below the diagonal
                m_entry = Fraction(1) if l == j else mu_ext[g - (l - j)]
                acc += kx ** (2 * (g - l - 1)) * m_entry
            diff = abs(Fraction(float(acc)) - chi[i][j])
            worst = max(worst, diff)
            scale = max(scale, abs(float(chi[i][j])))
    return float(worst) / max(scale, 1.0)


def w_inverse(c: SolitonCurve) -> ComplexMatrix:
    """Closed-form inverse of W: the Vandermonde V with column j scaled by 1/P'(a_j).

    Follows from the exact identity W V = diag(P'(a_i)); no elimination
    involved.  Entries a_j^i / P'(a_j) are formed as exact rationals
    and rounded once.
    """
    g = c.genus
    out = np.empty((g, g), dtype=complex)
    for j in range(g):
        av, pp = c.exact_a[j], c.exact_Pprime[j]
        out[:, j] = [float(av ** i / pp) for i in range(g)]
    return ComplexMatrix.from_array(out)
