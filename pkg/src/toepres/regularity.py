"""Local-regularity classification at boundary points and the non-tangential
approach domains used for the weak linear-resolvent-growth bound.

At a boundary candidate w0 the divisor partition decides three conditions:

    (i)   exactly one unimodular root,
    (ii)  exactly m interior roots,
    (iii) exactly k exterior roots.

Any one of them makes the symbol locally regular at w0 and the resolvent
grows at most like 1/dist there.  Off the exceptional set K the roots are
simple and move at linear rate, and the domains

    G_j(w0) = { w : |Re[ conj(z_j) / b'(z_j) * (w - w0) ]| > C13 |w - w0| }

describe non-tangential approach regions where each perturbed unimodular
root leaves the circle at linear rate (the Stolz-angle mechanism).  The
working domain is their intersection with the ball and the resolvent set.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import ExceptionalPointError, NotOnCurveError
from .spectral import (
    TAU_DEFAULT,
    curve_distance,
    exceptional_set,
    in_resolvent_set,
    partition,
    spectrum_curve,
)
from .symbol import LaurentSymbol, p_coefficients, q_coefficients

K_MEMBERSHIP_TOL = 1e-8
DEFAULT_APERTURE = 1.0 / 12.0
DEFAULT_BALL_RADIUS = 0.25


@dataclass(frozen=True)
class RegularityReport:
    """Classification of a boundary point w0; classification is total."""

    w0: complex
    counts: Tuple[int, int, int]
    cond_i: bool
    cond_ii: bool
    cond_iii: bool
    q_dominance: Optional[Tuple[Tuple[complex, bool], ...]]
    in_K: bool
    dist_to_K: float
    relaxed_simplicity: bool
    boundary_candidate: bool

    @property
    def locally_regular(self) -> bool:
        return self.cond_i or self.cond_ii or self.cond_iii

    def to_dict(self) -> dict:
        n_in, n_un, n_ext = self.counts
        return {
            "w0": [self.w0.real, self.w0.imag],
            "counts": {"in": n_in, "un": n_un, "ext": n_ext},
            "cond_i": self.cond_i,
            "cond_ii": self.cond_ii,
            "cond_iii": self.cond_iii,
            "locally_regular": self.locally_regular,
            "q_dominance": None
            if self.q_dominance is None
            else [
                {"t0": [t.real, t.imag], "dominant": flag}
                for t, flag in self.q_dominance
            ],
            "in_K": self.in_K,
            "dist_to_K": self.dist_to_K,
            "relaxed_simplicity": self.relaxed_simplicity,
            "boundary_candidate": self.boundary_candidate,
        }


@dataclass(frozen=True)
class NonTangentialDomain:
    """Aperture data for the approach domain at w0.

    One entry per unimodular root: c_j = conj(z_j(w0)) / b'(z_j(w0)).
    Membership is strict on all three clauses.
    """

    w0: complex
    roots: np.ndarray
    entries: np.ndarray
    C13: float
    eps: float

    def __post_init__(self):
        for name in ("roots", "entries"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def _q_dominant(q: np.ndarray) -> bool:
    """|q_n| > sum_{j != n} |q_j| for some n (strict)."""
    mags = np.abs(q)
    total = mags.sum()
    return bool(np.any(mags > total - mags))


def classify(
    b: LaurentSymbol, w0, tau: float = TAU_DEFAULT, curve=None
) -> RegularityReport:
    """Full regularity report at w0.

    `boundary_candidate` records whether w0 sits within 10*tau of b(T);
    the condition flags are computed either way.  For each unimodular root
    t0 the deflation Q = P/(z - t0) is formed and the coefficient-dominance
    sufficient condition for Q != 0 on the circle is evaluated.
    """
    w0 = complex(w0)
    div = partition(b, w0, tau)
    n_in, n_un, n_ext = div.counts

    if curve is None:
        curve = spectrum_curve(b, 2048)
    gap = curve_distance(b, w0, curve)

    exc = exceptional_set(b)
    dist_k = exc.distance(w0)

    dominance = None
    if n_un > 0:
        p = p_coefficients(b, w0)
        entries = []
        for t0 in div.un_roots:
            q = q_coefficients(p, t0)
            entries.append((complex(t0), _q_dominant(q.p)))
        dominance = tuple(entries)

    near_circle = div.root_set.roots[np.abs(np.abs(div.root_set.roots) - 1) <= tau]
    inner = div.in_roots
    cluster = np.concatenate([near_circle, inner])
    if len(cluster) > 1:
        sep = np.abs(cluster[:, None] - cluster[None, :])
        np.fill_diagonal(sep, np.inf)
        relaxed = bool(sep.min() > K_MEMBERSHIP_TOL)
    else:
        relaxed = True

    return RegularityReport(
        w0=w0,
        counts=(n_in, n_un, n_ext),
        cond_i=(n_un == 1),
        cond_ii=(n_in == b.m),
        cond_iii=(n_ext == b.k),
        q_dominance=dominance,
        in_K=(dist_k <= K_MEMBERSHIP_TOL),
        dist_to_K=dist_k,
        relaxed_simplicity=relaxed,
        boundary_candidate=(gap <= 10.0 * tau),
    )


def build_domain(
    b: LaurentSymbol,
    w0,
    C13: float = DEFAULT_APERTURE,
    eps: float = DEFAULT_BALL_RADIUS,
    tau: float = TAU_DEFAULT,
) -> NonTangentialDomain:
    """Aperture entries c_j = conj(z_j)/b'(z_j) for each unimodular root.

    Requires w0 off the exceptional set (so the first-order coefficients
    exist) and at least one unimodular root (so the domain is anchored to
    the curve).
    """
    if C13 <= 0 or eps <= 0:
        raise ValueError("C13 and eps must be positive")
    w0 = complex(w0)
    exc = exceptional_set(b)
    if exc.distance(w0) <= K_MEMBERSHIP_TOL:
        raise ExceptionalPointError(
            f"w0 = {w0} lies in the exceptional set K; roots are not simple"
        )
    div = partition(b, w0, tau)
    un = div.un_roots
    if len(un) == 0:
        raise NotOnCurveError(f"w0 = {w0} has no unimodular divisor roots")
    derivs = np.asarray(b.eval_derivative(un))
    entries = np.conj(un) / derivs
    return NonTangentialDomain(w0=w0, roots=un, entries=entries, C13=C13, eps=eps)


def contains(
    dom: NonTangentialDomain, b: LaurentSymbol, w, tau: float = TAU_DEFAULT
) -> bool:
    """Strict membership of w in the non-tangential domain.

    All three clauses must hold: |w - w0| < eps, the aperture inequality
    |Re[c_j (w - w0)]| > C13 |w - w0| for every entry, and w in the
    resolvent set.  The aperture test runs first because it is the cheap
    one; the vertex w0 itself is excluded by strictness.
    """
    w = complex(w)
    dw = w - dom.w0
    r = abs(dw)
    if not r < dom.eps:
        return False
    if not np.all(np.abs((dom.entries * dw).real) > dom.C13 * r):
        return False
    return in_resolvent_set(b, w, tau)
