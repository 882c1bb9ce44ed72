"""Divisor partitions, resolvent-set membership, the spectral curve b(T),
distance to the spectrum, and the exceptional set of critical values.

Membership is decided by root counting: w lies in the resolvent set exactly
when no divisor root sits on the unit circle and exactly m sit inside.  The
winding number of b - w around zero is provided as an independent
cross-check utility (the two agree by the argument principle).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circle import refined_circle_min
from .roots import RootSet, solve_roots
from .symbol import LaurentSymbol, PolyCoeffs, p_coefficients

# Default half-width of the unimodular band.  Callers probing w very close
# to the spectrum should pass something smaller.
TAU_DEFAULT = 1e-6

# K points closer than this are merged; multiplicities of critical values
# are irrelevant downstream.
K_MERGE_TOL = 1e-8

LABEL_IN = -1
LABEL_UN = 0
LABEL_EXT = 1

_LABEL_NAMES = {LABEL_IN: "in", LABEL_UN: "un", LABEL_EXT: "ext"}


@dataclass(frozen=True)
class Divisor:
    """Roots of P(., w) labeled by position relative to the unit circle."""

    root_set: RootSet
    labels: np.ndarray
    tau: float

    def __post_init__(self):
        arr = np.asarray(self.labels)
        arr.setflags(write=False)
        object.__setattr__(self, "labels", arr)

    @property
    def in_roots(self) -> np.ndarray:
        return self.root_set.roots[self.labels == LABEL_IN]

    @property
    def un_roots(self) -> np.ndarray:
        return self.root_set.roots[self.labels == LABEL_UN]

    @property
    def ext_roots(self) -> np.ndarray:
        return self.root_set.roots[self.labels == LABEL_EXT]

    @property
    def counts(self) -> tuple:
        """(|Z_in|, |Z_un|, |Z_ext|)."""
        return (
            int((self.labels == LABEL_IN).sum()),
            int((self.labels == LABEL_UN).sum()),
            int((self.labels == LABEL_EXT).sum()),
        )

    def label_names(self):
        return [_LABEL_NAMES[int(l)] for l in self.labels]


@dataclass(frozen=True)
class SpectrumCurve:
    """Uniform angular samples of the essential-spectrum curve b(T)."""

    thetas: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        for name in ("thetas", "values"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def N(self) -> int:
        return len(self.thetas)


@dataclass(frozen=True)
class ExceptionalSet:
    """Critical points lambda (roots of z^{m+1} b'(z)) and values K = b(lambda).

    `values` is aligned with `lambdas`; `points` holds the K values with
    near-duplicates merged.
    """

    lambdas: np.ndarray
    values: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        for name in ("lambdas", "values", "points"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def distance(self, w) -> float:
        if len(self.points) == 0:
            return np.inf
        return float(np.abs(self.points - w).min())


def partition(b: LaurentSymbol, w, tau: float = TAU_DEFAULT) -> Divisor:
    """Label each root of P(z, w) against the tau-band around the circle.

    UN when ||z| - 1| <= tau, IN when |z| < 1 - tau, EXT when |z| > 1 + tau.
    """
    if not 0 < tau <= 0.1:
        raise ValueError("tau must lie in (0, 0.1]")
    rs = solve_roots(p_coefficients(b, w), w=complex(w))
    mod = np.abs(rs.roots)
    labels = np.where(
        np.abs(mod - 1.0) <= tau, LABEL_UN, np.where(mod < 1.0, LABEL_IN, LABEL_EXT)
    )
    return Divisor(root_set=rs, labels=labels.astype(np.int8), tau=tau)


def in_resolvent_set(b: LaurentSymbol, w, tau: float = TAU_DEFAULT) -> bool:
    """True iff the divisor has no unimodular roots and exactly m interior ones."""
    n_in, n_un, _ = partition(b, w, tau).counts
    return n_un == 0 and n_in == b.m


def spectrum_curve(b: LaurentSymbol, N: int = 2048) -> SpectrumCurve:
    """Sample b on N uniformly spaced circle points (N >= 512)."""
    if N < 512:
        raise ValueError("spectrum curve needs at least 512 samples")
    thetas = 2.0 * np.pi * np.arange(N) / N
    values = b.eval(np.exp(1j * thetas))
    return SpectrumCurve(thetas=thetas, values=values)


def curve_distance(b: LaurentSymbol, w, curve: SpectrumCurve, refine: bool = True) -> float:
    """min_t |b(t) - w| from coarse samples plus golden-section refinement.

    Every local minimum of the sampled distance is refined, so the result is
    stable under changing the coarse grid size.
    """
    w = complex(w)
    samples = np.abs(curve.values - w)
    if not refine:
        return float(samples.min())

    def f(theta):
        return abs(b.eval(np.exp(1j * theta)) - w)

    _, val = refined_circle_min(f, samples, curve.thetas)
    return val


def dist_to_spectrum(
    b: LaurentSymbol, w, curve: SpectrumCurve, tau: float = TAU_DEFAULT
) -> float:
    """Distance from w to the spectrum; 0 for w outside the resolvent set.

    For w in the resolvent set this equals min_t |b(t) - w|, because the
    spectral boundary is contained in the curve b(T) while b(T) lies inside
    the spectrum, so both distances coincide there.
    """
    if not in_resolvent_set(b, w, tau):
        return 0.0
    return curve_distance(b, w, curve)


def exceptional_set(b: LaurentSymbol) -> ExceptionalSet:
    """Critical values K = {b(lambda) : b'(lambda) = 0}.

    The critical points are the roots of z^{m+1} b'(z), a degree m+k
    polynomial with nonzero constant term (so no artificial root at the
    origin survives; any |lambda| ~ 0 root is discarded defensively).
    """
    # coefficient of z^{n+m} in z^{m+1} b'(z) is n * b_n
    c = np.arange(-b.m, b.k + 1) * np.array(b.coeffs)
    rs = solve_roots(PolyCoeffs(b.m + b.k, c))
    lambdas = rs.roots[np.abs(rs.roots) > 1e-12]
    values = np.asarray(b.eval(lambdas))
    points = _merge_close(values, K_MERGE_TOL)
    return ExceptionalSet(lambdas=lambdas, values=values, points=points)


def _merge_close(pts: np.ndarray, tol: float) -> np.ndarray:
    """Greedy merge of points closer than tol, deterministic order."""
    if len(pts) == 0:
        return pts
    order = np.lexsort((pts.imag, pts.real))
    kept = []
    for z in pts[order]:
        if all(abs(z - r) > tol for r in kept):
            kept.append(z)
    return np.array(kept)


def winding_number(b: LaurentSymbol, w, N: int = 4096) -> int:
    """Winding of b(T) - w around 0 by summed phase increments.

    Cross-check utility for the root-count membership test: w is in the
    resolvent set iff the winding is zero and the divisor has no unimodular
    roots.  Raises ValueError when the curve passes (numerically) through w.
    """
    vals = b.eval(np.exp(2j * np.pi * np.arange(N) / N)) - w
    if np.abs(vals).min() < 1e-12:
        raise ValueError("w lies on the sampled curve; winding undefined")
    args = np.angle(vals)
    d = np.diff(np.concatenate([args, args[:1]]))
    d = (d + np.pi) % (2.0 * np.pi) - np.pi
    return int(round(d.sum() / (2.0 * np.pi)))
