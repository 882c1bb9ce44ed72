"""Unit-circle grids, FFT evaluation/analysis helpers and golden-section search.

Conventions used throughout the library: the M-point grid is
t_l = exp(2*pi*i*l/M).  Values of an analytic polynomial with coefficients
c_0..c_{D-1} on that grid are a zero-padded inverse FFT scaled by M, and
Fourier analysis of grid samples back to coefficients is a forward FFT
divided by M (index n holds the frequency-n coefficient mod M).
"""
import numpy as np

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def next_pow2(n):
    p = 1
    while p < n:
        p <<= 1
    return p


def circle_grid(M):
    return np.exp(2j * np.pi * np.arange(M) / M)


def poly_values(coeffs, M):
    """Values of sum_d c_d t^d on the M-point grid; requires M >= len(coeffs)."""
    if M < len(coeffs):
        raise ValueError("grid too small for the polynomial degree")
    padded = np.zeros(M, dtype=complex)
    padded[: len(coeffs)] = coeffs
    return np.fft.ifft(padded) * M


def riesz_project(values, keep=None):
    """Analytic-part coefficients 0..keep-1 of circle samples.

    Frequencies at and above M/2 are where the aliased negative frequencies
    live, so at most M/2 coefficients are trustworthy and `keep` is clipped
    there.
    """
    M = len(values)
    half = M // 2
    if keep is None or keep > half:
        keep = half
    return np.fft.fft(values)[:keep] / M


def golden_min(f, a, b, iters=80):
    """Golden-section minimum of a scalar function on [a, b].

    Returns (argmin, min).  Exact only for unimodal f; callers bracket a
    single basin before refining.
    """
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _local_minima_indices(vals):
    """Indices of cyclic local minima of a 1-D sample array."""
    less_prev = vals <= np.roll(vals, 1)
    less_next = vals <= np.roll(vals, -1)
    return np.nonzero(less_prev & less_next)[0]


def refined_circle_min(f, sample_vals, thetas):
    """Global minimum of f over the circle given coarse samples of f.

    Every local minimum of the samples is refined by golden-section search
    on its bracketing arc, which keeps the result stable under grid
    refinement even when several near-tied basins exist.  Returns
    (theta_min, f_min).
    """
    n = len(thetas)
    step = 2.0 * np.pi / n
    best_theta, best_val = None, np.inf
    for i in _local_minima_indices(np.asarray(sample_vals)):
        a, b = thetas[i] - step, thetas[i] + step
        th, val = golden_min(f, a, b)
        if val < best_val:
            best_theta, best_val = th, val
    # Guard: fall back to the raw samples if refinement somehow lost.
    i0 = int(np.argmin(sample_vals))
    if sample_vals[i0] < best_val:
        best_theta, best_val = thetas[i0], float(sample_vals[i0])
    return best_theta, best_val
