"""Soliton curve data: the degenerate hyperelliptic curve y^2 = P(x)^2 x.

A curve is specified by g positive, pairwise distinct wavenumbers k_i
(stored strictly descending).  The branch points are a_i = k_i^2, the
monic polynomial P has roots a, and f = x P(x)^2 collects the affine
equation coefficients lambda_j.  Per-root quotients pi_i = P/(x - a_i)
are tabulated as the chi coefficient table used by the structural
matrices.

Float wavenumbers are exact binary rationals, so every derived
coefficient (a, mu, lambda, chi, P'(a_i)) is computed with exact
rational arithmetic and rounded once at the end.  The exact values are
kept on the curve; downstream builders use them to keep the structural
identities correct to the last unit even at genus 8 with coefficients
spanning ten orders of magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import polynomial as poly
from .errors import DuplicateWavenumber, EmptyWavenumbers, NonPositiveWavenumber

DUPLICATE_RTOL = 1e-12


def exact_from_roots(roots):
    """Ascending coefficients of the monic polynomial with the given
    rational roots, exactly."""
    coeffs = [Fraction(1)]
    for r in roots:
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for j, c in enumerate(coeffs):
            nxt[j + 1] += c
            nxt[j] -= r * c
        coeffs = nxt
    return coeffs


@dataclass(frozen=True)
class SolitonCurve:
    genus: int
    k: tuple            # wavenumbers, strictly descending
    a: tuple            # branch points a_i = k_i^2
    P: poly.Polynomial  # monic, roots a
    mu: tuple           # coefficients mu_0..mu_{g-1} of P
    f: poly.Polynomial  # x * P(x)^2
    lam: tuple          # coefficients lambda_0..lambda_{2g+1} of f
    Pprime_at_a: tuple  # P'(a_i)
    exact_a: tuple      # Fractions, the same data without rounding
    exact_mu: tuple
    exact_lam: tuple
    exact_Pprime: tuple


@dataclass(frozen=True)
class ChiTable:
    """chi[i][j] = coefficient of x^j in pi_{i+1}(x) = P(x)/(x - a_{i+1})."""

    genus: int
    chi: tuple        # float-complex rows
    exact_chi: tuple  # Fraction rows


def new_curve(k) -> SolitonCurve:
    """Build and validate a curve from wavenumbers.

    Input order is irrelevant (sorted descending internally).  Raises
    EmptyWavenumbers, NonPositiveWavenumber or DuplicateWavenumber on
    bad input; duplicates are judged relative to max(k).
    """
    k = [float(v) for v in k]
    if not k:
        raise EmptyWavenumbers()
    for i, v in enumerate(k):
        if not v > 0.0:
            raise NonPositiveWavenumber(i, v)
    ks = sorted(k, reverse=True)
    tol = DUPLICATE_RTOL * max(ks)
    for i in range(len(ks) - 1):
        if abs(ks[i] - ks[i + 1]) <= tol:
            raise DuplicateWavenumber(i, i + 1, ks[i])
    g = len(ks)

    kx = [Fraction(v) for v in ks]
    ax = [v * v for v in kx]
    Px = exact_from_roots(ax)
    mux = Px[:-1]
    # f = x P^2: square by convolution, then shift up one degree
    P2 = [Fraction(0)] * (2 * g + 1)
    for i, ci in enumerate(Px):
        for j, cj in enumerate(Px):
            P2[i + j] += ci * cj
    lamx = [Fraction(0)] + P2
    Ppx = []
    for j in range(g):
        prod = Fraction(1)
        for l in range(g):
            if l != j:
                prod *= ax[j] - ax[l]
        Ppx.append(prod)

    return SolitonCurve(
        genus=g,
        k=tuple(ks),
        a=tuple(float(v) for v in ax),
        P=poly.Polynomial(tuple(complex(float(v)) for v in Px)),
        mu=tuple(complex(float(v)) for v in mux),
        f=poly.Polynomial(tuple(complex(float(v)) for v in lamx)),
        lam=tuple(complex(float(v)) for v in lamx),
        Pprime_at_a=tuple(complex(float(v)) for v in Ppx),
        exact_a=tuple(ax),
        exact_mu=tuple(mux),
        exact_lam=tuple(lamx),
        exact_Pprime=tuple(Ppx),
    )


def chi_table(c: SolitonCurve) -> ChiTable:
    """Coefficients of every quotient pi_i = P/(x - a_i).

    Computed by the descending recursion chi[g-1] = 1,
    chi[j] = mu_{j+1} + a_i * chi[j+1] (synthetic division of the monic
    P by its root), exactly; cross-checked against the product identity
    pi_i(x) (x - a_i) = P(x), which must hold coefficient by
    coefficient in rational arithmetic.
    """
    g = c.genus
    mu_ext = c.exact_mu + (Fraction(1),)
    exact_rows = []
    for i in range(g):
        row = [Fraction(0)] * g
        row[g - 1] = Fraction(1)
        for j in range(g - 2, -1, -1):
            row[j] = mu_ext[j + 1] + c.exact_a[i] * row[j + 1]
        # exact product check: (x - a_i) * pi_i reproduces P
        prod = [Fraction(0)] * (g + 1)
        for j, v in enumerate(row):
            prod[j + 1] += v
            prod[j] -= c.exact_a[i] * v
        if prod != list(c.exact_mu) + [Fraction(1)]:
            raise AssertionError(f"chi recursion disagrees with synthetic division for root {i}")
        exact_rows.append(tuple(row))
    float_rows = tuple(tuple(complex(float(v)) for v in row) for row in exact_rows)
    return ChiTable(genus=g, chi=float_rows, exact_chi=tuple(exact_rows))
