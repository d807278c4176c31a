//! Sampled expectation values `p_A(t)` and the zero-set dichotomy probe.

use rayon::prelude::*;
use serde::Serialize;

use super::observable::Observable;
use crate::error::{Error, Result};
use crate::evolution::{evolve, ComplexMass};
use crate::state::NormalizedState;

/// Largest tolerated `|Im p_A| / scale` for a selfadjoint observable.
pub const REALNESS_TOLERANCE: f64 = 1e-10;
/// Default relative zero threshold.
pub const DEFAULT_ZERO_EPS: f64 = 1e-9;
/// Longest run of below-threshold samples still counted as isolated zeros.
pub const MAX_ISOLATED_RUN: usize = 2;
/// Largest fraction of below-threshold samples compatible with isolated zeros.
pub const MAX_ZERO_FRACTION: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroReport {
    pub threshold: f64,
    pub below_count: usize,
    pub fraction_below: f64,
    /// Lengths of maximal runs of consecutive below-threshold samples.
    pub run_lengths: Vec<usize>,
}

/// `p_A(t) = ⟨ψ_t, A ψ_t⟩` sampled on a time grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpectationSeries {
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Largest `|Im p_A|` relative to the reference scale.
    pub max_relative_imag: f64,
    /// Reference magnitude for zero thresholds; `None` means `max |p_A|`.
    pub scale: Option<f64>,
    pub zero_report: ZeroReport,
}

impl ExpectationSeries {
    /// Wraps externally generated values; the zero threshold is relative to
    /// `max |value|`.
    pub fn synthetic(t_grid: Vec<f64>, values: Vec<f64>) -> Self {
        Self::assemble(t_grid, values, 0.0, None, DEFAULT_ZERO_EPS)
    }

    fn assemble(t_grid: Vec<f64>, values: Vec<f64>, max_relative_imag: f64, scale: Option<f64>, eps: f64) -> Self {
        let zero_report = zero_report(&values, scale, eps);
        ExpectationSeries {
            t_grid,
            values,
            max_relative_imag,
            scale,
            zero_report,
        }
    }

    pub fn reference_scale(&self) -> f64 {
        self.scale
            .unwrap_or_else(|| self.values.iter().fold(0.0, |m, v| m.max(v.abs())))
    }
}

fn zero_report(values: &[f64], scale: Option<f64>, eps: f64) -> ZeroReport {
    let reference = scale.unwrap_or_else(|| values.iter().fold(0.0, |m, v| m.max(v.abs())));
    let threshold = eps * reference;
    let mut runs = Vec::new();
    let mut current = 0usize;
    let mut below = 0usize;
    for v in values {
        if v.abs() <= threshold {
            below += 1;
            current += 1;
        } else if current > 0 {
            runs.push(current);
            current = 0;
        }
    }
    if current > 0 {
        runs.push(current);
    }
    ZeroReport {
        threshold,
        below_count: below,
        fraction_below: if values.is_empty() { 0.0 } else { below as f64 / values.len() as f64 },
        run_lengths: runs,
    }
}

/// Samples `p_A(t)` for a normalized initial state.
///
/// The reference scale for zero detection is `‖A‖ ⟨ψ₀, ψ₀⟩`.
pub fn expectation_series(
    state: &NormalizedState,
    observable: &Observable,
    cm: &ComplexMass,
    t_grid: &[f64],
) -> Result<ExpectationSeries> {
    expectation_series_with_eps(state, observable, cm, t_grid, DEFAULT_ZERO_EPS)
}

pub fn expectation_series_with_eps(
    state: &NormalizedState,
    observable: &Observable,
    cm: &ComplexMass,
    t_grid: &[f64],
    eps: f64,
) -> Result<ExpectationSeries> {
    if let Some(&t) = t_grid.iter().find(|&&t| !(t >= 0.0)) {
        return Err(Error::SemigroupDomain(t));
    }
    let scale = observable.norm_bound() * (1.0 + state.norm_residual);
    let raw: Vec<num_complex::Complex64> = t_grid
        .par_iter()
        .map(|&t| {
            let psi = evolve(&state.wavefunction, cm, t)?;
            observable.expectation(&psi, &state.grid)
        })
        .collect::<Result<_>>()?;
    let denom = scale.max(f64::MIN_POSITIVE);
    let max_relative_imag = raw.iter().fold(0.0, |m: f64, z| m.max(z.im.abs() / denom));
    if max_relative_imag > REALNESS_TOLERANCE {
        return Err(Error::NotSelfAdjoint(max_relative_imag));
    }
    let values = raw.iter().map(|z| z.re).collect();
    Ok(ExpectationSeries::assemble(
        t_grid.to_vec(),
        values,
        max_relative_imag,
        Some(scale),
        eps,
    ))
}

/// Classification of a sampled series against the dichotomy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DichotomyVerdict {
    /// Below-threshold samples, if any, are isolated.
    AlmostNeverZero,
    /// Every sample is below threshold.
    IdenticallyZero,
    /// Neither pattern; the series is inconsistent with a valid generator
    /// at this resolution.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DichotomyReport {
    pub verdict: DichotomyVerdict,
    pub threshold: f64,
    pub fraction_below: f64,
    pub longest_run: usize,
    pub recommendation: Option<String>,
}

/// Classifies a series with relative threshold `eps` (see [`DEFAULT_ZERO_EPS`]).
///
/// A sampled series cannot certify a measure-zero zero set; this checks
/// consistency with one branch or the other.
pub fn dichotomy_probe(series: &ExpectationSeries, eps: f64) -> DichotomyReport {
    let report = zero_report(&series.values, series.scale, eps);
    let n = series.values.len();
    let longest_run = report.run_lengths.iter().copied().max().unwrap_or(0);
    let verdict = if n > 0 && report.below_count == n {
        DichotomyVerdict::IdenticallyZero
    } else if longest_run <= MAX_ISOLATED_RUN && report.fraction_below <= MAX_ZERO_FRACTION {
        DichotomyVerdict::AlmostNeverZero
    } else {
        DichotomyVerdict::Inconclusive
    };
    let recommendation = (verdict == DichotomyVerdict::Inconclusive).then(|| {
        format!(
            "{} of {n} samples below {:.3e} (longest run {longest_run}); refine the velocity grid \
             and the time grid, and check that the generator satisfies the strip conditions",
            report.below_count, report.threshold
        )
    });
    DichotomyReport {
        verdict,
        threshold: report.threshold,
        fraction_below: report.fraction_below,
        longest_run,
        recommendation,
    }
}
