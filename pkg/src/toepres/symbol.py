"""Laurent polynomial symbols and their associated algebraic polynomials.

A symbol

    b(z) = b_{-m} z^{-m} + ... + b_0 + ... + b_k z^k,    b_{-m} b_k != 0,

defines a banded Toeplitz operator acting on square-summable Taylor
coefficients.  Everything downstream works with the polynomial
P(z, w) = z^m (b(z) - w) of degree m+k, so this module holds the coefficient
containers plus evaluation, differentiation, the map w -> P(., w), and the
deflation Q(z) = P(z, w0) / (z - t0) at a certified unimodular root t0.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import NotARootError, PoleError, SymbolFormatError

# Residual certificate shared with the root solver: t counts as a root of p
# when |p(t)| <= ROOT_RESIDUAL_FACTOR * degree * max_j |p_j|.
ROOT_RESIDUAL_FACTOR = 1e-8


@dataclass(frozen=True)
class LaurentSymbol:
    """Dense coefficients of a Laurent polynomial, index j <-> power j - m."""

    m: int
    k: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.m < 1 or self.k < 1:
            raise SymbolFormatError("m and k must both be >= 1")
        c = np.asarray(self.coeffs, dtype=complex).copy()
        if c.shape != (self.m + self.k + 1,):
            raise SymbolFormatError(
                f"need {self.m + self.k + 1} coefficients for m={self.m}, k={self.k}"
            )
        if c[0] == 0 or c[-1] == 0:
            raise SymbolFormatError("b_{-m} and b_k must be nonzero")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def coeff(self, n: int) -> complex:
        """Coefficient b_n for -m <= n <= k."""
        if not -self.m <= n <= self.k:
            return 0.0 + 0.0j
        return complex(self.coeffs[n + self.m])

    @property
    def analytic_part(self) -> np.ndarray:
        """Coefficients b_0..b_k."""
        return self.coeffs[self.m:]

    @property
    def principal_part(self) -> np.ndarray:
        """Coefficients b_{-1}..b_{-m} (powers of 1/z)."""
        return self.coeffs[self.m - 1:: -1]

    def eval(self, z):
        """b(z), accepting scalars or arrays, via Horner on both parts."""
        z = np.asarray(z, dtype=complex)
        if np.any(z == 0):
            raise PoleError("b has a pole at z = 0")
        u = 1.0 / z
        analytic = npoly.polyval(z, self.analytic_part)
        principal = u * npoly.polyval(u, self.principal_part)
        out = analytic + principal
        return complex(out) if out.ndim == 0 else out

    def eval_derivative(self, z):
        """b'(z) = sum_n n b_n z^{n-1}."""
        z = np.asarray(z, dtype=complex)
        if np.any(z == 0):
            raise PoleError("b' has a pole at z = 0")
        u = 1.0 / z
        dpos = self.analytic_part[1:] * np.arange(1, self.k + 1)
        dneg = self.principal_part * np.arange(1, self.m + 1)
        out = npoly.polyval(z, dpos) - u * u * npoly.polyval(u, dneg)
        return complex(out) if out.ndim == 0 else out

    def flip(self) -> "LaurentSymbol":
        """The reflected symbol z -> b(1/z); coefficient n becomes -n."""
        return LaurentSymbol(self.k, self.m, self.coeffs[::-1])

    def to_dict(self) -> dict:
        coeffs = {
            str(n - self.m): [float(c.real), float(c.imag)]
            for n, c in enumerate(self.coeffs)
            if c != 0
        }
        return {"m": self.m, "k": self.k, "coeffs": coeffs}


@dataclass(frozen=True)
class PolyCoeffs:
    """Coefficients p_0..p_degree of an ordinary polynomial, p[degree] != 0."""

    degree: int
    p: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.p, dtype=complex).copy()
        if arr.shape != (self.degree + 1,):
            raise ValueError("coefficient array does not match degree")
        if arr[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        arr.setflags(write=False)
        object.__setattr__(self, "p", arr)

    def eval(self, z):
        out = npoly.polyval(np.asarray(z, dtype=complex), self.p)
        return complex(out) if out.ndim == 0 else out

    def derivative_coeffs(self) -> np.ndarray:
        return self.p[1:] * np.arange(1, self.degree + 1)

    def residual_tolerance(self) -> float:
        return ROOT_RESIDUAL_FACTOR * self.degree * float(np.abs(self.p).max())


def p_coefficients(b: LaurentSymbol, w) -> PolyCoeffs:
    """Coefficients of P(z, w) = z^m (b(z) - w).

    p_j = b_{j-m} except p_m = b_0 - w; the leading coefficient is b_k.
    """
    p = np.array(b.coeffs, dtype=complex)
    p[b.m] -= w
    return PolyCoeffs(b.m + b.k, p)


def q_coefficients(p: PolyCoeffs, t0) -> PolyCoeffs:
    """Deflated polynomial Q(z) = P(z) / (z - t0) for a unimodular root t0.

    Synthetic division from the leading coefficient down:

        q_{d-1} = p_d,   q_{j-1} = p_j + t0 q_j,

    equivalently q_j = t0^{-j-1} sum_{i=j+1}^{d} p_i t0^i, so that
    Q(z) (z - t0) reproduces P exactly.  Raises NotARootError when the
    residual |P(t0)| exceeds the shared certificate.
    """
    t0 = complex(t0)
    resid = abs(p.eval(t0))
    if resid > p.residual_tolerance():
        raise NotARootError(
            f"t0 is not a root: |P(t0)| = {resid:.3e} exceeds "
            f"{p.residual_tolerance():.3e}"
        )
    d = p.degree
    q = np.zeros(d, dtype=complex)
    q[d - 1] = p.p[d]
    for j in range(d - 1, 0, -1):
        q[j - 1] = p.p[j] + t0 * q[j]
    return PolyCoeffs(d - 1, q)


def parse_symbol(obj: dict) -> LaurentSymbol:
    """Build a LaurentSymbol from the JSON schema

        {"m": int, "k": int, "coeffs": {"<n>": [re, im], ...}}

    Omitted exponents are zero; b_{-m} = 0 or b_k = 0 is rejected.
    """
    try:
        m = int(obj["m"])
        k = int(obj["k"])
        raw = obj["coeffs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SymbolFormatError(f"symbol JSON missing or malformed field: {exc}")
    if m < 1 or k < 1:
        raise SymbolFormatError("m and k must both be >= 1")
    coeffs = np.zeros(m + k + 1, dtype=complex)
    for key, val in raw.items():
        try:
            n = int(key)
            re, im = float(val[0]), float(val[1])
        except (TypeError, ValueError, IndexError):
            raise SymbolFormatError(f"bad coefficient entry {key!r}: {val!r}")
        if not -m <= n <= k:
            raise SymbolFormatError(f"exponent {n} outside [-{m}, {k}]")
        coeffs[n + m] = complex(re, im)
    if coeffs[0] == 0 or coeffs[-1] == 0:
        raise SymbolFormatError("b_{-m} and b_k must be nonzero")
    return LaurentSymbol(m, k, coeffs)


def load_symbol(path) -> LaurentSymbol:
    """Read a symbol JSON file; malformed JSON raises SymbolFormatError."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SymbolFormatError(f"invalid JSON in {path}: {exc}")
    return parse_symbol(obj)
