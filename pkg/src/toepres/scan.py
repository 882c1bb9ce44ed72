"""Ray and grid experiments near a boundary point: resolvent bounds against
distance to the spectrum, slope fits, and the three-petal example preset.

A scan walks points w = w0 + r*direction (or a square grid around w0),
records the certified bounds and their products with dist(w, spectrum), and
fits log-log slopes over the records that lie inside the non-tangential
domain.  Linear resolvent growth shows up as slope -1 with a bounded
product; the headline product uses the factorization upper bound, while the
probe lower bounds are reported to show the product is not trivially small.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .errors import ExceptionalPointError, InsufficientDataError
from .regularity import NonTangentialDomain, build_domain, contains
from .resolvent import DEFAULT_PROBES, DEFAULT_SEED, DEFAULT_TRUNCATION, estimate_norm
from .spectral import (
    TAU_DEFAULT,
    SpectrumCurve,
    curve_distance,
    dist_to_spectrum,
    exceptional_set,
    in_resolvent_set,
    spectrum_curve,
)
from .symbol import LaurentSymbol

THREADS_ENV = "TOEPRES_THREADS"

CSV_HEADER = "w_re,w_im,r,dist,in_omega_prime,lower,upper,product_lower,product_upper"


@dataclass(frozen=True)
class ScanRecord:
    """One probed point.  Records outside the resolvent set keep dist = 0,
    NaN bounds, and are excluded from every fit."""

    w: complex
    r: float
    dist: float
    in_resolvent: bool
    in_omega_prime: bool
    lower: float
    upper: float

    @property
    def product_lower(self) -> float:
        return self.lower * self.dist

    @property
    def product_upper(self) -> float:
        return self.upper * self.dist

    def csv_row(self) -> str:
        fields = [
            f"{self.w.real:.17g}",
            f"{self.w.imag:.17g}",
            f"{self.r:.17g}",
            f"{self.dist:.17g}",
            f"{1 if self.in_omega_prime else 0}",
            f"{self.lower:.17g}",
            f"{self.upper:.17g}",
            f"{self.product_lower:.17g}",
            f"{self.product_upper:.17g}",
        ]
        return ",".join(fields)


@dataclass(frozen=True)
class ScanReport:
    records: Tuple[ScanRecord, ...]
    slope_fit_lower: float
    slope_fit_upper: float
    product_max_over_min: float
    preset_name: str = ""

    def members(self):
        return [rec for rec in self.records if rec.in_omega_prime]

    def csv_text(self) -> str:
        lines = [CSV_HEADER]
        lines.extend(rec.csv_row() for rec in self.records)
        return "\n".join(lines) + "\n"

    def summary_dict(self) -> dict:
        return {
            "preset_name": self.preset_name,
            "n_records": len(self.records),
            "n_members": len(self.members()),
            "slope_fit_lower": self.slope_fit_lower,
            "slope_fit_upper": self.slope_fit_upper,
            "product_max_over_min": self.product_max_over_min,
        }


@dataclass(frozen=True)
class FlowerPreset:
    """The three-petal example: b(z) = 1/z + z^2 probed at the origin.

    The resolvent set contains three sectors with vertex 0:
    (pi/6, pi/2), (5pi/6, 7pi/6), (3pi/2, 11pi/6); `sectors_delta` are their
    delta-interior versions.  Angles are (lo, hi) pairs in radians.
    """

    symbol: LaurentSymbol
    w0: complex
    domain: NonTangentialDomain
    sectors: Tuple[Tuple[float, float], ...]
    sectors_delta: Tuple[Tuple[float, float], ...]
    delta: float
    C13: float
    eps: float


def flower_preset(
    C13: float = 1.0 / 12.0, eps: float = 0.25, delta: float = np.pi / 36.0
) -> FlowerPreset:
    """Configuration of the self-intersection experiment at the origin."""
    b = LaurentSymbol(1, 2, np.array([1.0, 0.0, 0.0, 1.0], dtype=complex))
    sectors = (
        (np.pi / 6, np.pi / 2),
        (5 * np.pi / 6, 7 * np.pi / 6),
        (3 * np.pi / 2, 11 * np.pi / 6),
    )
    sectors_delta = tuple((lo + delta, hi - delta) for lo, hi in sectors)
    dom = build_domain(b, 0.0, C13=C13, eps=eps)
    return FlowerPreset(
        symbol=b,
        w0=0.0 + 0.0j,
        domain=dom,
        sectors=sectors,
        sectors_delta=sectors_delta,
        delta=delta,
        C13=C13,
        eps=eps,
    )


def default_radii(r_max: float = 1e-1, r_min: float = 1e-4, per_decade: int = 8):
    """Log-spaced radii, decreasing; slope fits need scale-free spacing."""
    decades = np.log10(r_max / r_min)
    n = int(round(decades * per_decade)) + 1
    return np.logspace(np.log10(r_max), np.log10(r_min), n)


def _worker_count() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _eligible(records, tau):
    # Points closer to the spectrum than 10*tau have untrustworthy partitions.
    return [r for r in records if r.in_omega_prime and r.dist >= 10.0 * tau]


def _fit_slope(xs, ys) -> float:
    xs, ys = np.asarray(xs), np.asarray(ys)
    good = (xs > 0) & (ys > 0) & np.isfinite(xs) & np.isfinite(ys)
    if good.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(xs[good]), np.log(ys[good]), 1)[0])


def _assemble_report(records, tau, preset_name) -> ScanReport:
    eligible = _eligible(records, tau)
    if len(eligible) < 4:
        raise InsufficientDataError(
            f"insufficient data: only {len(eligible)} usable records inside "
            "the non-tangential domain (need 4)"
        )
    dists = [r.dist for r in eligible]
    slope_up = _fit_slope(dists, [r.upper for r in eligible])
    slope_lo = _fit_slope(dists, [r.lower for r in eligible])
    prods = np.array([r.product_upper for r in eligible])
    ratio = float(prods.max() / prods.min())
    return ScanReport(
        records=tuple(records),
        slope_fit_lower=slope_lo,
        slope_fit_upper=slope_up,
        product_max_over_min=ratio,
        preset_name=preset_name,
    )


def _scan_point(
    b, w, r, dom, curve, probes, N, tau, seed, estimate_nonmembers=True
) -> ScanRecord:
    member = contains(dom, b, w, tau)
    if not member:
        if not in_resolvent_set(b, w, tau):
            return ScanRecord(
                w=w, r=r, dist=0.0, in_resolvent=False, in_omega_prime=False,
                lower=float("nan"), upper=float("nan"),
            )
        if not estimate_nonmembers:
            return ScanRecord(
                w=w, r=r, dist=dist_to_spectrum(b, w, curve, tau),
                in_resolvent=True, in_omega_prime=False,
                lower=float("nan"), upper=float("nan"),
            )
    # Tangential in-resolvent records are estimated too when requested:
    # observational data, excluded from fits either way.
    dist = dist_to_spectrum(b, w, curve, tau)
    est = estimate_norm(b, w, probes=probes, N=N, seed=seed, tau=tau)
    return ScanRecord(
        w=w, r=r, dist=dist, in_resolvent=True, in_omega_prime=member,
        lower=est.lower, upper=est.upper,
    )


def _run_points(point_args):
    workers = _worker_count()
    if workers == 1:
        return [_scan_point(*args) for args in point_args]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda a: _scan_point(*a), point_args))


def _check_vertex(b, w0, curve, tau):
    exc = exceptional_set(b)
    if exc.distance(w0) <= 1e-8:
        raise ExceptionalPointError(f"w0 = {w0} lies in the exceptional set K")
    if curve_distance(b, w0, curve) > 10.0 * tau:
        raise ValueError(f"w0 = {w0} is not within 10*tau of the spectral curve")


def ray_scan(
    b: LaurentSymbol,
    w0,
    direction,
    radii,
    dom: NonTangentialDomain,
    probes: int = DEFAULT_PROBES,
    N: int = DEFAULT_TRUNCATION,
    tau: float = TAU_DEFAULT,
    seed: int = DEFAULT_SEED,
    curve: Optional[SpectrumCurve] = None,
    preset_name: str = "",
) -> ScanReport:
    """Scan w = w0 + r * direction for decreasing radii.

    The direction is normalized to unit modulus.  Slope fits and the product
    ratio run over records inside the approach domain with dist >= 10*tau;
    fewer than 4 such records raises InsufficientDataError.
    """
    w0 = complex(w0)
    direction = complex(direction)
    if direction == 0:
        raise ValueError("direction must be nonzero")
    direction /= abs(direction)
    radii = np.asarray(radii, dtype=float)
    if len(radii) == 0 or np.any(np.diff(radii) >= 0):
        raise ValueError("radii must be strictly decreasing")
    if radii[0] >= dom.eps:
        raise ValueError("all radii must be smaller than the domain radius eps")
    if curve is None:
        curve = spectrum_curve(b, 2048)
    _check_vertex(b, w0, curve, tau)
    args = [
        (b, w0 + r * direction, float(r), dom, curve, probes, N, tau, seed)
        for r in radii
    ]
    records = _run_points(args)
    return _assemble_report(records, tau, preset_name)


def grid_scan(
    b: LaurentSymbol,
    w0,
    eps: float,
    grid_n: int,
    dom: NonTangentialDomain,
    probes: int = DEFAULT_PROBES,
    N: int = DEFAULT_TRUNCATION,
    tau: float = TAU_DEFAULT,
    seed: int = DEFAULT_SEED,
    curve: Optional[SpectrumCurve] = None,
    preset_name: str = "",
) -> ScanReport:
    """Records on a grid_n x grid_n square grid covering B(w0, eps).

    Used for membership maps and product heatmaps; bounds are estimated only
    at points inside the approach domain (elsewhere NaN) to keep large grids
    affordable.
    """
    w0 = complex(w0)
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    if curve is None:
        curve = spectrum_curve(b, 2048)
    _check_vertex(b, w0, curve, tau)
    xs = np.linspace(w0.real - eps, w0.real + eps, grid_n)
    ys = np.linspace(w0.imag - eps, w0.imag + eps, grid_n)
    args = [
        (b, complex(x, y), abs(complex(x, y) - w0), dom, curve,
         probes, N, tau, seed, False)
        for y in ys
        for x in xs
    ]
    records = _run_points(args)
    return _assemble_report(records, tau, preset_name)
