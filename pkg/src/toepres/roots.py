"""Polynomial root solving, root continuation in w, and first-order data.

The primary solver is Aberth-Ehrlich simultaneous iteration, which delivers
all roots with uniform residuals; a companion-matrix eigenvalue fallback
(np.roots) plus Newton polishing guarantees termination when the iteration
stalls.  Every returned root carries a certified residual |P(root)| checked
against the scale-aware tolerance of the coefficient container.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import ContinuationError, ExceptionalPointError, RootSolverError
from .symbol import LaurentSymbol, PolyCoeffs, p_coefficients

# Simplicity threshold: a derivative (or pairwise separation) below this is
# treated as a multiple-root configuration.
SINGULARITY_TOL = 1e-8

_ABERTH_MAX_ITER = 100
_NEWTON_POLISH = 3


@dataclass(frozen=True)
class RootSet:
    """All roots of one polynomial, in canonical order, with residuals.

    `w` tags the spectral parameter the polynomial came from when known.
    `paired_base` maps each root to the index of its ancestor in a base
    RootSet after continuation, and is None for a fresh solve.
    """

    roots: np.ndarray
    residuals: np.ndarray
    residual_tolerance: float
    w: Optional[complex] = None
    paired_base: Optional[np.ndarray] = None

    def __post_init__(self):
        for name in ("roots", "residuals"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self):
        return len(self.roots)

    def to_dict(self) -> dict:
        d = {
            "w": None if self.w is None else [self.w.real, self.w.imag],
            "roots": [[z.real, z.imag] for z in self.roots],
            "residuals": [float(r) for r in self.residuals],
            "residual_tolerance": self.residual_tolerance,
            "paired_base": None
            if self.paired_base is None
            else [int(i) for i in self.paired_base],
        }
        return d


@dataclass(frozen=True)
class PerturbationData:
    """First-order root movement z_j(w) ~ z_j(w0) + (w - w0)/b'(z_j(w0))."""

    w0: complex
    base_roots: np.ndarray
    derivative_at_roots: np.ndarray
    first_order_coeffs: np.ndarray


def _canonical_order(roots: np.ndarray) -> np.ndarray:
    """Deterministic ordering: argument, then modulus, ties by real part."""
    order = np.lexsort((roots.real, np.abs(roots), np.angle(roots)))
    return roots[order]


def _aberth(p: PolyCoeffs, max_iter: int) -> np.ndarray:
    d = p.degree
    dp = p.derivative_coeffs()
    # Scale-aware initial circle, perturbed off any coefficient symmetry.
    r0 = abs(p.p[0] / p.p[d]) ** (1.0 / d) if p.p[0] != 0 else 1.0
    r0 = max(r0, 1e-3)
    z = r0 * np.exp(1j * (2 * np.pi * np.arange(d) / d + 0.37))
    if d == 1:
        return np.array([-p.p[0] / p.p[1]])
    target = 0.01 * p.residual_tolerance()
    for _ in range(max_iter):
        pv = npoly.polyval(z, p.p)
        if np.abs(pv).max() <= target:
            break
        pd = npoly.polyval(z, dp)
        pd = np.where(np.abs(pd) < 1e-300, 1e-300, pd)
        newton = pv / pd
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = (1.0 / diff).sum(axis=1)
        denom = 1.0 - newton * s
        denom = np.where(np.abs(denom) < 1e-300, 1e-300, denom)
        step = newton / denom
        z = z - step
        if not np.all(np.isfinite(z)):
            raise FloatingPointError("aberth iterate diverged")
        if np.abs(step).max() < 1e-16 * (1.0 + np.abs(z).max()):
            break
    return z


def _companion_fallback(p: PolyCoeffs) -> np.ndarray:
    z = np.roots(p.p[::-1])
    dp = p.derivative_coeffs()
    for _ in range(_NEWTON_POLISH):
        pv = npoly.polyval(z, p.p)
        pd = npoly.polyval(z, dp)
        ok = np.abs(pd) > 1e-300
        z = np.where(ok, z - pv / np.where(ok, pd, 1.0), z)
    return z


def solve_roots(p: PolyCoeffs, w=None) -> RootSet:
    """All `degree` roots of p with certified residuals, canonically ordered.

    Raises RootSolverError (with the best residuals attached) if neither the
    simultaneous iteration nor the companion-matrix fallback certifies.
    """
    try:
        z = _aberth(p, _ABERTH_MAX_ITER)
        residuals = np.abs(npoly.polyval(z, p.p))
        if residuals.max() > p.residual_tolerance():
            raise FloatingPointError
    except FloatingPointError:
        z = _companion_fallback(p)
        residuals = np.abs(npoly.polyval(z, p.p))
        if residuals.max() > p.residual_tolerance():
            raise RootSolverError(
                f"root iteration failed to certify: worst residual "
                f"{residuals.max():.3e} > {p.residual_tolerance():.3e}",
                residuals=residuals,
            )
    z = _canonical_order(z)
    residuals = np.abs(npoly.polyval(z, p.p))
    return RootSet(
        roots=z,
        residuals=residuals,
        residual_tolerance=p.residual_tolerance(),
        w=w,
    )


def continue_roots(base: RootSet, p_new: PolyCoeffs, w=None) -> RootSet:
    """Roots of p_new matched one-to-one to the base roots.

    Each new root is assigned its nearest base root; the assignment must be
    a bijection and each displacement must stay below half the minimal base
    separation (which makes nearest-neighbor matching provably correct).
    Violations raise ContinuationError so the caller can halve the step.
    """
    fresh = solve_roots(p_new, w=w)
    if len(fresh) != len(base):
        raise ContinuationError("degree changed between base and continued set")
    dist = np.abs(fresh.roots[:, None] - base.roots[None, :])
    nearest = dist.argmin(axis=1)
    if len(set(nearest.tolist())) != len(base):
        raise ContinuationError(
            "ambiguous root matching (two roots share a nearest ancestor); "
            "reduce the continuation step"
        )
    if len(base) > 1:
        sep = np.abs(base.roots[:, None] - base.roots[None, :])
        np.fill_diagonal(sep, np.inf)
        min_sep = sep.min()
        moved = dist[np.arange(len(fresh)), nearest].max()
        if moved > 0.5 * min_sep:
            raise ContinuationError(
                f"displacement {moved:.3e} exceeds half the base separation "
                f"{min_sep:.3e}; reduce the continuation step"
            )
    return RootSet(
        roots=fresh.roots,
        residuals=fresh.residuals,
        residual_tolerance=fresh.residual_tolerance,
        w=w,
        paired_base=nearest,
    )


def _critical_values(b: LaurentSymbol) -> np.ndarray:
    """Values b(lambda) at the critical points b'(lambda) = 0.

    The critical points are the roots of z^{m+1} b'(z), whose coefficient of
    z^{n+m} is n * b_n (nonzero constant term, so no spurious origin root).
    """
    c = np.arange(-b.m, b.k + 1) * np.array(b.coeffs)
    rs = solve_roots(PolyCoeffs(b.m + b.k, c))
    lam = rs.roots[np.abs(rs.roots) > 1e-12]
    return np.asarray(b.eval(lam))


def perturbation_data(b: LaurentSymbol, w0) -> PerturbationData:
    """b'(z_j(w0)) and 1/b'(z_j(w0)) for every divisor root at w0.

    Fails when the divisor is not simple, i.e. w0 lies in or numerically
    near the exceptional set K.  A true multiple root splits into a cluster
    at distance ~sqrt(eps) in double precision, where |b'| is far above any
    fixed threshold, so membership is also checked against the critical
    values of b directly.
    """
    w0 = complex(w0)
    crit = _critical_values(b)
    if len(crit) and np.abs(crit - w0).min() <= SINGULARITY_TOL:
        raise ExceptionalPointError(
            f"w0 in or near exceptional set K: |w0 - K| = "
            f"{np.abs(crit - w0).min():.3e}"
        )
    rs = solve_roots(p_coefficients(b, w0), w=w0)
    derivs = np.asarray(b.eval_derivative(rs.roots))
    small = np.abs(derivs) < SINGULARITY_TOL
    if small.any():
        raise ExceptionalPointError(
            f"w0 in or near exceptional set K: |b'(z_j)| = "
            f"{np.abs(derivs)[small].min():.3e} at some divisor root"
        )
    return PerturbationData(
        w0=w0,
        base_roots=rs.roots,
        derivative_at_roots=derivs,
        first_order_coeffs=1.0 / derivs,
    )
