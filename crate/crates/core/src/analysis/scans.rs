//! Spacetime scans of translated states.
//!
//! Points outside the forward cone are evaluated with unchecked translations
//! and flagged as such in every report row.

use std::fmt::Write as _;

use nalgebra::Vector3;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dichotomy::REALNESS_TOLERANCE;
use super::observable::Observable;
use crate::error::{Error, Result};
use crate::evolution::{translate, ComplexMass, TranslationMode};
use crate::kinematics::{classify_interval, FourVector, IntervalClass};
use crate::state::{norm_squared, QuadratureGrid, SpinWavefunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanQuantity {
    NormSquared,
    Expectation,
    RenormalizedExpectation,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanPoint {
    pub a: FourVector,
    pub class: IntervalClass,
    /// `true` when the translation lies in the forward cone and the checked
    /// operator was used.
    pub checked: bool,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub quantity: ScanQuantity,
    pub points: Vec<ScanPoint>,
    /// `false` as soon as any point needed an unchecked translation.
    pub checked_mode: bool,
    /// `‖f‖²` of the untranslated state on the same grid.
    pub reference_norm: f64,
}

impl ScanReport {
    fn from_points(quantity: ScanQuantity, points: Vec<ScanPoint>, reference_norm: f64) -> Self {
        let checked_mode = points.iter().all(|p| p.checked);
        ScanReport {
            quantity,
            points,
            checked_mode,
            reference_norm,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    pub fn forward_points(&self) -> impl Iterator<Item = &ScanPoint> {
        self.points.iter().filter(|p| p.class.is_forward())
    }

    pub fn spacelike_points(&self) -> impl Iterator<Item = &ScanPoint> {
        self.points.iter().filter(|p| p.class == IntervalClass::Spacelike)
    }

    /// Header `t,x,y,z,classification,checked,value`, reals in `{:.16e}`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y,z,classification,checked,value\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{},{},{:.16e}",
                p.a.t,
                p.a.x,
                p.a.y,
                p.a.z,
                p.class.as_str(),
                p.checked,
                p.value
            );
        }
        out
    }
}

fn translated(f: &SpinWavefunction, cm: &ComplexMass, a: &FourVector) -> Result<(SpinWavefunction, IntervalClass, bool)> {
    let class = classify_interval(a);
    let checked = class.is_forward();
    let mode = if checked {
        TranslationMode::Checked
    } else {
        TranslationMode::Unchecked
    };
    Ok((translate(f, cm, a, mode)?, class, checked))
}

fn real_part(z: Complex64, scale: f64) -> Result<f64> {
    let rel = z.im.abs() / scale.max(f64::MIN_POSITIVE);
    if rel > REALNESS_TOLERANCE {
        return Err(Error::NotSelfAdjoint(rel));
    }
    Ok(z.re)
}

/// `p_A(t, x⃗) = ⟨U(a) f, A U(a) f⟩`, any `a`.
pub fn spacetime_expectation(
    f: &SpinWavefunction,
    grid: &QuadratureGrid,
    observable: &Observable,
    cm: &ComplexMass,
    a: &FourVector,
) -> Result<f64> {
    let (g, _, _) = translated(f, cm, a)?;
    let norm = norm_squared(&g, grid);
    let value = observable.expectation(&g, grid)?;
    real_part(value, observable.norm_bound() * norm)
}

/// `⟨U(a) f, A U(a) f⟩ / ⟨U(a) f, U(a) f⟩`.
pub fn renormalized_expectation(
    f: &SpinWavefunction,
    grid: &QuadratureGrid,
    observable: &Observable,
    cm: &ComplexMass,
    a: &FourVector,
) -> Result<f64> {
    let (g, _, _) = translated(f, cm, a)?;
    // same arithmetic path for numerator and denominator, so A = 1 gives 1
    let denom = Observable::identity().expectation(&g, grid)?.re;
    if !(denom > 0.0 && denom.is_finite()) {
        return Err(Error::ZeroNorm);
    }
    let value = observable.expectation(&g, grid)?;
    real_part(value, observable.norm_bound() * denom).map(|v| v / denom)
}

/// Evaluates `quantity` at every lattice point, in lattice order.
pub fn lattice_scan(
    f: &SpinWavefunction,
    grid: &QuadratureGrid,
    observable: &Observable,
    cm: &ComplexMass,
    lattice: &[FourVector],
    quantity: ScanQuantity,
) -> Result<ScanReport> {
    let points = lattice
        .par_iter()
        .map(|a| {
            let class = classify_interval(a);
            let value = match quantity {
                ScanQuantity::NormSquared => {
                    let (g, _, _) = translated(f, cm, a)?;
                    norm_squared(&g, grid)
                }
                ScanQuantity::Expectation => spacetime_expectation(f, grid, observable, cm, a)?,
                ScanQuantity::RenormalizedExpectation => renormalized_expectation(f, grid, observable, cm, a)?,
            };
            Ok(ScanPoint {
                a: *a,
                class,
                checked: class.is_forward(),
                value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanReport::from_points(quantity, points, norm_squared(f, grid)))
}

/// Rectangular `t × x` lattice along a spatial direction.
pub fn cone_lattice(direction: &Vector3<f64>, t_values: &[f64], x_values: &[f64]) -> Result<Vec<FourVector>> {
    let n = unit(direction)?;
    Ok(t_values
        .iter()
        .flat_map(|&t| x_values.iter().map(move |&x| FourVector::from_parts(t, n * x)))
        .collect())
}

fn unit(direction: &Vector3<f64>) -> Result<Vector3<f64>> {
    let len = direction.norm();
    if !(len > 0.0 && len.is_finite()) {
        return Err(Error::param("direction", "must be a nonzero finite 3-vector"));
    }
    Ok(direction / len)
}

/// Least-squares slope of `ln y` against `x`.
pub fn fit_exponential_rate(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(_, &y)| y > 0.0 && y.is_finite())
        .map(|(&x, &y)| (x, y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthScan {
    pub report: ScanReport,
    pub direction: [f64; 3],
    pub t: f64,
    pub target_factor: f64,
    /// First `x` with `‖U(a)f‖² > target_factor · ‖f‖²`.
    pub first_exceedance: Option<f64>,
    /// Values strictly increase along the spacelike part of the ray.
    pub spacelike_monotone: bool,
    /// Fitted `d ln‖U(a)f‖² / dx` over the spacelike points.
    pub fitted_rate: Option<f64>,
}

/// `‖U((t, x n̂)) f‖²` for increasing `x`.
pub fn norm_growth_scan(
    f: &SpinWavefunction,
    grid: &QuadratureGrid,
    cm: &ComplexMass,
    direction: &Vector3<f64>,
    t: f64,
    x_values: &[f64],
    target_factor: f64,
) -> Result<GrowthScan> {
    if x_values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::param("x_values", "must be strictly increasing"));
    }
    let lattice = cone_lattice(direction, &[t], x_values)?;
    let report = lattice_scan(f, grid, &Observable::identity(), cm, &lattice, ScanQuantity::NormSquared)?;
    let target = target_factor * report.reference_norm;
    let first_exceedance = report
        .points
        .iter()
        .zip(x_values)
        .find(|(p, _)| p.value > target)
        .map(|(_, &x)| x);
    let (xs, ys): (Vec<f64>, Vec<f64>) = report
        .points
        .iter()
        .zip(x_values)
        .filter(|(p, _)| p.class == IntervalClass::Spacelike)
        .map(|(p, &x)| (x, p.value))
        .unzip();
    let spacelike_monotone = ys.windows(2).all(|w| w[1] > w[0]);
    let n = unit(direction)?;
    Ok(GrowthScan {
        fitted_rate: fit_exponential_rate(&xs, &ys),
        report,
        direction: [n.x, n.y, n.z],
        t,
        target_factor,
        first_exceedance,
        spacelike_monotone,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutoffStudy {
    pub u_max: Vec<f64>,
    /// `‖U(a)f‖²` at the fixed translation for each cutoff.
    pub values: Vec<f64>,
    /// Growth rate along the ray for each cutoff.
    pub rates: Vec<Option<f64>>,
    pub a: FourVector,
}

impl CutoffStudy {
    pub fn values_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] > w[0])
    }

    pub fn rates_increasing(&self) -> bool {
        self.rates
            .windows(2)
            .all(|w| matches!((w[0], w[1]), (Some(a), Some(b)) if b > a))
    }
}

/// Repeats the growth scan at several cutoffs with the same grid step count.
/// `a` is the last point of the ray.
pub fn cutoff_divergence(
    f: &SpinWavefunction,
    base: &QuadratureGrid,
    cm: &ComplexMass,
    direction: &Vector3<f64>,
    t: f64,
    x_values: &[f64],
    u_max_values: &[f64],
) -> Result<CutoffStudy> {
    let &x_end = x_values
        .last()
        .ok_or_else(|| Error::param("x_values", "must be nonempty"))?;
    let mut values = Vec::with_capacity(u_max_values.len());
    let mut rates = Vec::with_capacity(u_max_values.len());
    for &u_max in u_max_values {
        let mut spec = base.spec();
        spec.u_max = u_max;
        let grid = QuadratureGrid::new(spec)?;
        let scan = norm_growth_scan(f, &grid, cm, direction, t, x_values, 1.0)?;
        values.push(scan.report.points.last().map_or(0.0, |p| p.value));
        rates.push(scan.fitted_rate);
    }
    let n = unit(direction)?;
    Ok(CutoffStudy {
        u_max: u_max_values.to_vec(),
        values,
        rates,
        a: FourVector::from_parts(t, n * x_end),
    })
}
