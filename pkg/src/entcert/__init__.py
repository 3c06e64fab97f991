"""Plug-in entropy estimation with dimension-free, fully empirical error bounds."""

from .bounds import (
    BoundBreakdown,
    DegenerateConstructionError,
    birthday_no_collision,
    ckw_l1_radius,
    ct_bound,
    ct_rate_bound,
    dimfree_bound,
    expected_gap_bound,
    lambda_n,
    minimax_lower_value,
    minimax_upper,
    no_emp_construction,
    our_rate_bound,
    plug_in_risk_bound,
    sandwich_lower_bound,
    wy_bound,
)
from .certify import (
    CertificateError,
    EntropyCertificate,
    IngestError,
    certificate,
    certificate_best_alpha,
    emit_counts,
    ingest,
    plug_in_entropy,
)
from .dist_core import (
    DivergenceInfiniteError,
    EmpiricalMeasure,
    InvariantError,
    MixtureOfUniforms,
    Pmf,
    TwoLevel,
    Zeta,
    derive_rng,
    empirical_measure,
    entropy,
    kl_divergence,
    l1_distance,
    lp_norm,
    rearrange_decreasing,
    sample,
    sup_distance,
    tv_distance,
)
from .info_moments import (
    MomentProfile,
    OptimizationError,
    h_alpha,
    max_alpha_entropy_bounds,
    max_alpha_entropy_exact,
    phi_alpha,
    phi_alpha_max,
)

__version__ = "0.1.0"
