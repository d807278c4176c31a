//! Strip bounds, continuation diagnostics, the dichotomy probe and causality
//! scans.

mod continuation;
mod dichotomy;
mod observable;
mod scans;
mod strip;
mod tails;

pub use continuation::{
    cauchy_riemann_residual, cauchy_riemann_study, complex_expectation, fixed_position_expectation,
    reflection_defect, ConvergenceStudy,
};
pub use dichotomy::{
    dichotomy_probe, expectation_series, expectation_series_with_eps, DichotomyReport, DichotomyVerdict,
    ExpectationSeries, ZeroReport, DEFAULT_ZERO_EPS, MAX_ISOLATED_RUN, MAX_ZERO_FRACTION, REALNESS_TOLERANCE,
};
pub use observable::{Observable, HERMITIAN_TOLERANCE};
pub use scans::{
    cone_lattice, cutoff_divergence, fit_exponential_rate, lattice_scan, norm_growth_scan, renormalized_expectation,
    spacetime_expectation, CutoffStudy, GrowthScan, ScanPoint, ScanQuantity, ScanReport,
};
pub use strip::{
    analytic_strip, sampled_bounds, spectral_bounds, AnalyticStrip, SpectrumDescriptor, StripBounds, StripVerdict,
};
pub use tails::{
    outside_probability, tails_probe, Interval, TailSample, TailsReport, LOCALIZATION_TOLERANCE, TAIL_NOISE_FLOOR,
};
