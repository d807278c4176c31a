//! Experiment configuration. One strict JSON document per run.

use serde::{Deserialize, Serialize};

use crate::analysis::{Observable, ScanQuantity};
use crate::error::{Error, Result};
use crate::evolution::ComplexMass;
use crate::kinematics::Spin;
use crate::state::{GridSpec, QuadratureGrid, StateSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    SpectrumCheck,
    Evolve,
    Dichotomy,
    StripDiagnostics,
    ConeScan,
    GrowthScan,
    Tails,
    Selftest,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::SpectrumCheck,
        Experiment::Evolve,
        Experiment::Dichotomy,
        Experiment::StripDiagnostics,
        Experiment::ConeScan,
        Experiment::GrowthScan,
        Experiment::Tails,
        Experiment::Selftest,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Experiment::SpectrumCheck => "spectrum-check",
            Experiment::Evolve => "evolve",
            Experiment::Dichotomy => "dichotomy",
            Experiment::StripDiagnostics => "strip-diagnostics",
            Experiment::ConeScan => "cone-scan",
            Experiment::GrowthScan => "growth-scan",
            Experiment::Tails => "tails",
            Experiment::Selftest => "selftest",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.as_str() == name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObservableSpec {
    Identity,
    Zero,
    /// Indicator of `|u⃗| <= radius`, or of `|u⃗| > radius` when `complement`.
    VelocityIndicator {
        radius: f64,
        #[serde(default)]
        complement: bool,
    },
    /// `N(V)` for `V = [x_lo, x_hi]` in the 1-D model.
    PositionProjector { x_lo: f64, x_hi: f64 },
    /// Random Hermitian matrix on the grid nodes × spin components.
    RandomHermitian { seed: u64, scale: f64 },
}

/// Largest grid × spin dimension accepted for explicit matrices.
pub const MAX_MATRIX_DIM: usize = 4096;

impl ObservableSpec {
    pub fn build(&self, grid: &QuadratureGrid, spin: Spin, mass: f64) -> Result<Observable> {
        match self {
            ObservableSpec::Identity => Ok(Observable::identity()),
            ObservableSpec::Zero => Ok(Observable::zero()),
            ObservableSpec::VelocityIndicator { radius, complement } => {
                Observable::velocity_indicator(*radius, *complement)
            }
            ObservableSpec::PositionProjector { x_lo, x_hi } => Observable::position_projector(*x_lo, *x_hi, mass),
            ObservableSpec::RandomHermitian { seed, scale } => {
                let dim = grid.len() * spin.dim();
                if dim > MAX_MATRIX_DIM {
                    return Err(Error::param(
                        "observable",
                        format!("random_hermitian needs a {dim}x{dim} matrix, limit is {MAX_MATRIX_DIM}"),
                    ));
                }
                Ok(Observable::random_hermitian(dim, *scale, *seed))
            }
        }
    }
}

fn default_target() -> f64 {
    1e6
}

fn default_cr_steps() -> Vec<f64> {
    vec![1e-2, 5e-3, 2.5e-3]
}

fn default_quantity() -> ScanQuantity {
    ScanQuantity::NormSquared
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Schedule {
    /// `count` equally spaced times on `[start, end]`.
    TGrid { start: f64, end: f64, count: usize },
    Times { values: Vec<f64> },
    /// Points `(t, x n̂)` for the listed `x`; optional cutoff study.
    Ray {
        direction: [f64; 3],
        t: f64,
        x_values: Vec<f64>,
        #[serde(default = "default_target")]
        target_factor: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        u_max_values: Option<Vec<f64>>,
    },
    /// `t_values × x_values` along `direction`.
    Lattice {
        direction: [f64; 3],
        t_values: Vec<f64>,
        x_values: Vec<f64>,
        #[serde(default = "default_quantity")]
        quantity: ScanQuantity,
    },
    /// Points `re + i · frac · k` with `k` the strip half-width.
    Strip {
        re_values: Vec<f64>,
        im_fractions: Vec<f64>,
        #[serde(default = "default_cr_steps")]
        cr_steps: Vec<f64>,
    },
    /// Explicit spectrum samples `[re, im]` for spectrum-check.
    Spectrum { points: Vec<[f64; 2]> },
}

impl Schedule {
    pub fn times(&self) -> Option<Vec<f64>> {
        match self {
            Schedule::TGrid { start, end, count } => Some(match count {
                0 => Vec::new(),
                1 => vec![*start],
                n => (0..*n)
                    .map(|i| start + (end - start) * i as f64 / (*n - 1) as f64)
                    .collect(),
            }),
            Schedule::Times { values } => Some(values.clone()),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Schedule::TGrid { .. } => "t_grid",
            Schedule::Times { .. } => "times",
            Schedule::Ray { .. } => "ray",
            Schedule::Lattice { .. } => "lattice",
            Schedule::Strip { .. } => "strip",
            Schedule::Spectrum { .. } => "spectrum",
        }
    }
}

fn default_zero_eps() -> f64 {
    1e-9
}
fn default_contraction() -> f64 {
    1e-10
}
fn default_reflection() -> f64 {
    1e-12
}
fn default_cr_order() -> f64 {
    1.8
}
fn default_agreement() -> f64 {
    1e-12
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_zero_eps")]
    pub zero_eps: f64,
    /// Relative slack in `‖U(a)f‖ <= ‖f‖`.
    #[serde(default = "default_contraction")]
    pub contraction: f64,
    #[serde(default = "default_reflection")]
    pub reflection: f64,
    #[serde(default = "default_cr_order")]
    pub min_cr_order: f64,
    /// Closed-form vs sampled strip bounds.
    #[serde(default = "default_agreement")]
    pub bounds_agreement: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            zero_eps: default_zero_eps(),
            contraction: default_contraction(),
            reflection: default_reflection(),
            min_cr_order: default_cr_order(),
            bounds_agreement: default_agreement(),
        }
    }
}

fn default_spin() -> f64 {
    0.0
}

fn default_state() -> StateSpec {
    StateSpec::Gaussian {
        center: [0.0, 0.0, 0.3],
        width: 1.0,
        spin_weights: None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// Stem of the output files; defaults to the experiment name.
    #[serde(default)]
    pub name: Option<String>,
    pub complex_mass: ComplexMass,
    #[serde(default = "default_spin")]
    pub spin: f64,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default = "default_state")]
    pub state: StateSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observable: Option<ObservableSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Schedule>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn name(&self) -> &str {
        self.name.as_deref().unwrap_or(self.experiment.as_str())
    }

    pub fn spin(&self) -> Result<Spin> {
        Spin::from_f64(self.spin)
    }
}
