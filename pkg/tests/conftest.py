import numpy as np
import pytest

from toepres import LaurentSymbol, spectrum_curve


@pytest.fixture(scope="session")
def flower():
    """b(z) = 1/z + z^2: the three-petal symbol, m=1, k=2."""
    return LaurentSymbol(1, 2, np.array([1.0, 0.0, 0.0, 1.0], dtype=complex))


@pytest.fixture(scope="session")
def flower_curve(flower):
    return spectrum_curve(flower, 2048)


@pytest.fixture(scope="session")
def pentadiag():
    """An asymmetric m=2, k=3 symbol used for generic-degree checks."""
    coeffs = np.array([0.5 - 0.25j, -1.0, 0.3 + 0.1j, 0.0, 2.0, 0.7 + 0.4j], dtype=complex)
    return LaurentSymbol(2, 3, coeffs)


def sample_resolvent_points(b, curve, rng, count, min_dist, box=4.0):
    """Random resolvent-set points with a guaranteed gap to the curve."""
    from toepres import in_resolvent_set

    pts = []
    while len(pts) < count:
        w = complex(rng.uniform(-box, box), rng.uniform(-box, box))
        if np.abs(curve.values - w).min() < min_dist:
            continue
        if in_resolvent_set(b, w):
            pts.append(w)
    return pts
