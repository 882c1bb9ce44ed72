"""Numerical spectral analysis of banded Toeplitz operators with Laurent
polynomial symbols: divisor partitions, Wiener-Hopf factorization, local
regularity at boundary points, non-tangential approach domains, certified
two-sided resolvent-norm estimates, and growth scans."""

__version__ = "0.1.0"

from .errors import (
    ContinuationError,
    ExceptionalPointError,
    InsufficientDataError,
    MathDomainError,
    NotARootError,
    NotOnCurveError,
    PartialFractionError,
    PoleError,
    RootSolverError,
    SpectrumMembershipError,
    SymbolFormatError,
)
from .symbol import (
    LaurentSymbol,
    PolyCoeffs,
    load_symbol,
    p_coefficients,
    parse_symbol,
    q_coefficients,
)
from .roots import (
    PerturbationData,
    RootSet,
    continue_roots,
    perturbation_data,
    solve_roots,
)
from .spectral import (
    Divisor,
    ExceptionalSet,
    SpectrumCurve,
    curve_distance,
    dist_to_spectrum,
    exceptional_set,
    in_resolvent_set,
    partition,
    spectrum_curve,
    winding_number,
)
from .regularity import (
    NonTangentialDomain,
    RegularityReport,
    build_domain,
    classify,
    contains,
)
from .resolvent import (
    ProbeVector,
    ResolventEstimate,
    WienerHopfFactors,
    apply_resolvent,
    estimate_norm,
    factorize,
    finite_section_estimate,
    i_decomposition,
    krein_bound,
    p_plus_cauchy,
    random_probes,
    toeplitz_apply,
)
from .scan import (
    FlowerPreset,
    ScanRecord,
    ScanReport,
    default_radii,
    flower_preset,
    grid_scan,
    ray_scan,
)

__all__ = [name for name in dir() if not name.startswith("_")]
