"""Isotonic regression with finite-sample, locally adaptive confidence bands.

Core pieces: an exact pool-adjacent-violators projection with oracle
cross-checks, the sliding-window norm and its contraction/NUNA property
checkers, data-adaptive confidence bands and error envelopes for noisy
monotone signals, Grenander estimation of monotone densities with a
finite-sample error band, and a reproducible simulation harness.
"""
from .bands import (
    Band,
    LipschitzWidth,
    NoiseEstimate,
    TARGET_ISO,
    TARGET_SIGNAL,
    adaptive_band,
    backbone_band_from_x,
    backbone_band_from_y,
    eps_iso,
    estimate_sigma,
    l2_risk_bound,
    lipschitz_width,
    theoretical_error_envelope,
)
from .density import (
    DensityBand,
    GrenanderEstimate,
    empirical_cdf,
    grenander_band,
    grenander_fit,
    sup_abs_error,
    uniform_order_stat_bound,
)
from .estimators import ConfidenceBand, GrenanderDensity, IsotonicRegression
from .exceptions import DegenerateFit, DegenerateSpacings, InvalidInput, IsobandError
from .isotonic import IsotonicFit, SlowProjection, minmax_iso, neighbor_average, pava, slow_projection
from .norms import (
    BUILTIN_NORMS,
    ContractionWitness,
    NormSpec,
    NunaViolation,
    PsiSpec,
    PsiValidation,
    build_counterexample,
    builtin_norm,
    check_contraction,
    check_nuna,
    check_seminorm_axioms,
    counterexample_from_nuna,
    default_contraction_pairs,
    default_nuna_samples,
    lp_norm,
    sliding_window_norm,
    sw_expectation_bounds,
    sw_subgaussian_threshold,
    validate_psi,
)
from .sim import (
    PiecewiseSignalSpec,
    SlopeReport,
    TrialResult,
    coverage_shrink_factor,
    log_width_slope,
    region_masks,
    run_trial,
    run_trials_grid,
    sample_signal,
    slope_experiment,
    write_region_summary_csv,
    write_trials_json,
)

__version__ = "0.1.0"

__all__ = [
    "Band",
    "BUILTIN_NORMS",
    "ConfidenceBand",
    "ContractionWitness",
    "DegenerateFit",
    "DegenerateSpacings",
    "DensityBand",
    "GrenanderDensity",
    "GrenanderEstimate",
    "InvalidInput",
    "IsobandError",
    "IsotonicFit",
    "IsotonicRegression",
    "LipschitzWidth",
    "NoiseEstimate",
    "NormSpec",
    "NunaViolation",
    "PiecewiseSignalSpec",
    "PsiSpec",
    "PsiValidation",
    "SlopeReport",
    "SlowProjection",
    "TARGET_ISO",
    "TARGET_SIGNAL",
    "TrialResult",
    "adaptive_band",
    "backbone_band_from_x",
    "backbone_band_from_y",
    "build_counterexample",
    "builtin_norm",
    "check_contraction",
    "check_nuna",
    "check_seminorm_axioms",
    "counterexample_from_nuna",
    "coverage_shrink_factor",
    "default_contraction_pairs",
    "default_nuna_samples",
    "empirical_cdf",
    "eps_iso",
    "estimate_sigma",
    "grenander_band",
    "grenander_fit",
    "l2_risk_bound",
    "lipschitz_width",
    "log_width_slope",
    "lp_norm",
    "minmax_iso",
    "neighbor_average",
    "pava",
    "region_masks",
    "run_trial",
    "run_trials_grid",
    "sample_signal",
    "sliding_window_norm",
    "slope_experiment",
    "slow_projection",
    "sup_abs_error",
    "sw_expectation_bounds",
    "sw_subgaussian_threshold",
    "theoretical_error_envelope",
    "uniform_order_stat_bound",
    "validate_psi",
    "write_region_summary_csv",
    "write_trials_json",
]
