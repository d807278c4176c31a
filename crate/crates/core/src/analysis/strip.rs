//! Spectral conditions on a normal generator and the resulting strip of
//! analyticity for `p_A`.

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::evolution::ComplexMass;

/// The spectrum whose strip conditions are checked.
#[derive(Clone, Debug, PartialEq)]
pub enum SpectrumDescriptor {
    /// `σ(P0) = {(M - iΓ/2) u0 : u0 >= 1}`, handled in closed form.
    ClosedFormRay(ComplexMass),
    /// A finite set of sampled eigenvalues.
    SampledSet(Vec<Complex64>),
}

/// Outcome of checking the three strip conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StripVerdict {
    /// All conditions hold with finite ratio bounds.
    Valid,
    /// The conditions hold, but only through an empty-set sentinel.
    SentinelValid,
    /// Everything holds except that the half-width is exactly zero (stable limit).
    Degenerate,
    Invalid,
}

impl StripVerdict {
    pub fn admits_strip(&self) -> bool {
        !matches!(self, StripVerdict::Invalid)
    }
}

pub(crate) fn serialize_extended<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if *v > 0.0 {
        s.serialize_str("+inf")
    } else {
        s.serialize_str("-inf")
    }
}

/// `k0 = sup λ_y`, `k1 = sup_{λ_x<=0} (-λ_y/λ_x)`, `k2 = inf_{λ_x>=0} (-λ_y/λ_x)`
/// and the half-width `k = min(|k1|, k2)`.
///
/// Empty ratio sets are carried as `k1 = -∞`, `k2 = +∞`. Points with
/// `λ_x = 0` are left out of both ratio sets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StripBounds {
    #[serde(serialize_with = "serialize_extended")]
    pub k0: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub k1: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub k2: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub k: f64,
    pub k1_from_empty_set: bool,
    pub k2_from_empty_set: bool,
    /// `k0 < ∞`
    pub sup_imag_finite: bool,
    /// `k1 < 0`
    pub left_ratio_negative: bool,
    /// `k2 > 0`
    pub right_ratio_positive: bool,
    /// Number of points on the imaginary axis with `λ_y > 0`.
    pub axis_points_above: usize,
    pub verdict: StripVerdict,
    pub notes: Vec<String>,
}

fn half_width(k1: f64, k2: f64) -> f64 {
    k1.abs().min(k2)
}

fn assemble(
    k0: f64,
    k1: f64,
    k2: f64,
    k1_empty: bool,
    k2_empty: bool,
    axis_points_above: usize,
) -> StripBounds {
    let sup_imag_finite = k0 < f64::INFINITY;
    let left_ratio_negative = k1 < 0.0;
    let right_ratio_positive = k2 > 0.0;
    let k = half_width(k1, k2);
    let mut notes = Vec::new();
    if k1_empty {
        notes.push("no spectral points with λ_x <= 0: k1 = -∞ (sup over the empty set)".into());
    }
    if k2_empty {
        notes.push("no spectral points with λ_x >= 0: k2 = +∞ (inf over the empty set)".into());
    }
    if axis_points_above > 0 {
        notes.push(format!(
            "{axis_points_above} point(s) with λ_x = 0 and λ_y > 0: ratios undefined there"
        ));
    }
    let verdict = if axis_points_above > 0 || !sup_imag_finite || k1 > 0.0 || k2 < 0.0 {
        StripVerdict::Invalid
    } else if k1 == 0.0 || k2 == 0.0 {
        // k == 0 exactly: conditions fail only by the degenerate equality
        notes.push("half-width k = 0: the strip degenerates to the real axis".into());
        StripVerdict::Degenerate
    } else if k1_empty || k2_empty {
        StripVerdict::SentinelValid
    } else {
        StripVerdict::Valid
    };
    if k1_empty && k2_empty {
        notes.push("both ratio sets empty: half-width is unbounded".into());
    }
    StripBounds {
        k0,
        k1,
        k2,
        k,
        k1_from_empty_set: k1_empty,
        k2_from_empty_set: k2_empty,
        sup_imag_finite,
        left_ratio_negative,
        right_ratio_positive,
        axis_points_above,
        verdict,
        notes,
    }
}

/// Strip bounds for a sampled set, by direct sup/inf.
pub fn sampled_bounds(points: &[Complex64]) -> StripBounds {
    let mut k0 = f64::NEG_INFINITY;
    let mut k1 = f64::NEG_INFINITY;
    let mut k2 = f64::INFINITY;
    let (mut left, mut right, mut axis_above) = (false, false, 0usize);
    for p in points {
        k0 = k0.max(p.im);
        if p.re == 0.0 {
            if p.im > 0.0 {
                axis_above += 1;
            }
            continue;
        }
        let ratio = -p.im / p.re;
        if p.re < 0.0 {
            left = true;
            k1 = k1.max(ratio);
        } else {
            right = true;
            k2 = k2.min(ratio);
        }
    }
    assemble(k0, k1, k2, !left, !right, axis_above)
}

/// Computes the strip bounds; invalid spectra are reported through the
/// verdict rather than as errors.
pub fn spectral_bounds(spec: &SpectrumDescriptor) -> StripBounds {
    match spec {
        SpectrumDescriptor::ClosedFormRay(cm) => {
            // λ = (M - iΓ/2) u0: λ_x = M u0 > 0, λ_y = -Γ u0 / 2, maximal at u0 = 1.
            let k0 = -0.5 * cm.width;
            let k2 = cm.width / (2.0 * cm.mass);
            assemble(k0, f64::NEG_INFINITY, k2, true, false, 0)
        }
        SpectrumDescriptor::SampledSet(points) => sampled_bounds(points),
    }
}

/// The half-strip `{z = t + iy : t > 0, -k < y < k}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnalyticStrip {
    #[serde(serialize_with = "serialize_extended")]
    pub half_width: f64,
    pub degenerate: bool,
}

impl AnalyticStrip {
    /// `Re z > 0` and `|Im z| <= k`.
    pub fn contains_closed(&self, z: Complex64) -> bool {
        z.re > 0.0 && z.im.abs() <= self.half_width
    }

    /// `Re z > 0` and `|Im z| < k`.
    pub fn contains_open(&self, z: Complex64) -> bool {
        z.re > 0.0 && z.im.abs() < self.half_width
    }
}

pub fn analytic_strip(bounds: &StripBounds) -> Result<AnalyticStrip> {
    if !bounds.verdict.admits_strip() {
        return Err(Error::InvalidSpectrum(bounds.notes.join("; ").if_empty(
            "strip conditions violated (k0 infinite, k1 > 0 or k2 < 0)",
        )));
    }
    Ok(AnalyticStrip {
        half_width: bounds.k,
        degenerate: bounds.verdict == StripVerdict::Degenerate,
    })
}

trait IfEmpty {
    fn if_empty(self, fallback: &str) -> String;
}

impl IfEmpty for String {
    fn if_empty(self, fallback: &str) -> String {
        if self.is_empty() {
            fallback.to_string()
        } else {
            self
        }
    }
}
