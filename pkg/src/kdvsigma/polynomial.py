"""Dense univariate polynomials over the complex numbers.

Coefficients are stored ascending: ``coeffs[j]`` multiplies ``x**j``.
The zero polynomial is the empty tuple; otherwise the last stored
coefficient is nonzero.  Degrees here never exceed ~2g+1 for small
genus g, so everything is plain dense arithmetic with exact (threshold
zero) trailing-coefficient trimming.
"""

from __future__ import annotations

from dataclasses import dataclass


def _trim(coeffs):
    n = len(coeffs)
    while n > 0 and coeffs[n - 1] == 0:
        n -= 1
    return tuple(complex(c) for c in coeffs[:n])


@dataclass(frozen=True)
class Polynomial:
    """Immutable complex polynomial, ascending dense coefficients."""

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @property
    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __call__(self, z):
        return eval_poly(self, z)


ZERO = Polynomial(())
ONE = Polynomial((1.0,))


def from_roots(roots) -> Polynomial:
    """Monic polynomial with the given roots (with multiplicity).

    The empty list gives the constant polynomial 1.
    """
    coeffs = [1.0 + 0j]
    for r in roots:
        r = complex(r)
        # multiply by (x - r)
        nxt = [0j] * (len(coeffs) + 1)
        for j, c in enumerate(coeffs):
            nxt[j + 1] += c
            nxt[j] -= r * c
        coeffs = nxt
    return Polynomial(tuple(coeffs))


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    """Product of two polynomials (coefficient convolution)."""
    if p.is_zero() or q.is_zero():
        return ZERO
    out = [0j] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        for j, b in enumerate(q.coeffs):
            out[i + j] += a * b
    return Polynomial(tuple(out))


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    n = max(len(p.coeffs), len(q.coeffs))
    out = [0j] * n
    for i, a in enumerate(p.coeffs):
        out[i] += a
    for i, b in enumerate(q.coeffs):
        out[i] += b
    return Polynomial(tuple(out))


def scale(p: Polynomial, s) -> Polynomial:
    return Polynomial(tuple(s * c for c in p.coeffs))


def derivative(p: Polynomial) -> Polynomial:
    """Term-wise derivative."""
    if p.degree < 1:
        return ZERO
    return Polynomial(tuple(j * c for j, c in enumerate(p.coeffs) if j > 0))


def eval_poly(p: Polynomial, z) -> complex:
    """Horner evaluation of p at z."""
    acc = 0j
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return acc


def polynomial_part_over_power(f: Polynomial, m: int) -> Polynomial:
    """Polynomial part of the rational function f(x)/x**m.

    Drops every coefficient of f below degree m and shifts the rest
    down by m; the zero polynomial when deg f < m.
    """
    if m < 0:
        raise ValueError(f"power must be nonnegative, got {m}")
    return Polynomial(f.coeffs[m:])
