//! Position-space tails of an initially localized state in the 1-D model.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::{evolve, ComplexMass};
use crate::state::{periodic_x_grid, position_density_1d, position_period, QuadratureGrid, SpinWavefunction};

/// Outside probability above this is reported as a tail.
pub const TAIL_NOISE_FLOOR: f64 = 1e-7;
/// Largest outside probability accepted for the initial state.
pub const LOCALIZATION_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::param("interval", format!("need finite lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailSample {
    pub t: f64,
    pub outside_probability: f64,
    pub total_probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailsReport {
    pub interval: Interval,
    pub initial_outside: f64,
    pub noise_floor: f64,
    pub samples: Vec<TailSample>,
    /// Every sampled `t > 0` shows outside probability above the floor.
    pub tails_everywhere: bool,
}

/// `∫_{x ∉ V} |ψ_t(x)|² dx` and `∫ |ψ_t|² dx`, summed over one period of
/// the discrete transform with `grid.len()` points.
pub fn outside_probability(f: &SpinWavefunction, grid: &QuadratureGrid, mass: f64, v: &Interval) -> Result<(f64, f64)> {
    let xs = periodic_x_grid(grid, mass, grid.len());
    let period = position_period(grid, mass);
    if v.hi - v.lo >= period {
        return Err(Error::param("interval", format!("V is wider than the position period {period}")));
    }
    let dx = period / xs.len() as f64;
    let density = position_density_1d(f, grid, &xs, mass)?;
    let mut outside = 0.0;
    let mut total = 0.0;
    for (x, d) in density {
        total += d * dx;
        if !v.contains(x) {
            outside += d * dx;
        }
    }
    Ok((outside, total))
}

/// Outside probability of `evolve(f0, t)` for each `t`.
pub fn tails_probe(
    f0: &SpinWavefunction,
    grid: &QuadratureGrid,
    cm: &ComplexMass,
    v: &Interval,
    t_values: &[f64],
) -> Result<TailsReport> {
    if let Some(&t) = t_values.iter().find(|&&t| !(t >= 0.0)) {
        return Err(Error::SemigroupDomain(t));
    }
    let (initial_outside, total) = outside_probability(f0, grid, cm.mass, v)?;
    if initial_outside > LOCALIZATION_TOLERANCE * total.max(1.0) {
        return Err(Error::NotLocalized(initial_outside));
    }
    let samples = t_values
        .iter()
        .map(|&t| {
            let psi = evolve(f0, cm, t)?;
            let (outside_probability, total_probability) = outside_probability(&psi, grid, cm.mass, v)?;
            Ok(TailSample {
                t,
                outside_probability,
                total_probability,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let tails_everywhere = samples
        .iter()
        .filter(|s| s.t > 0.0)
        .all(|s| s.outside_probability > TAIL_NOISE_FLOOR);
    Ok(TailsReport {
        interval: *v,
        initial_outside,
        noise_floor: TAIL_NOISE_FLOOR,
        samples,
        tails_everywhere,
    })
}
