use num_complex::Complex64;

use super::grid::QuadratureGrid;
use super::wavefunction::{check_spins, SpinWavefunction};
use crate::error::{Error, Result};
use crate::summation::sum_complex;

/// Required accuracy of a freshly normalized state.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-8;

/// `⟨f, g⟩ = Σ_{j₃} ∫ d³u / (2 u0) conj(f) g` on the grid.
pub fn inner_product(f: &SpinWavefunction, g: &SpinWavefunction, grid: &QuadratureGrid) -> Result<Complex64> {
    check_spins(f, g)?;
    let (nodes, weights) = (grid.nodes(), grid.weights());
    Ok(sum_complex(grid.len(), |i| {
        let a = f.eval_all(&nodes[i]);
        let b = g.eval_all(&nodes[i]);
        let local = a.iter().zip(&b).fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y);
        local * weights[i]
    }))
}

/// `⟨f, f⟩`.
pub fn norm_squared(f: &SpinWavefunction, grid: &QuadratureGrid) -> f64 {
    let (nodes, weights) = (grid.nodes(), grid.weights());
    sum_complex(grid.len(), |i| {
        let local: f64 = f.eval_all(&nodes[i]).iter().map(|a| a.norm_sqr()).sum();
        Complex64::new(local * weights[i], 0.0)
    })
    .re
}

/// A wavefunction rescaled to unit norm on a particular grid.
#[derive(Clone, Debug)]
pub struct NormalizedState {
    pub wavefunction: SpinWavefunction,
    pub grid: QuadratureGrid,
    /// `|⟨f, f⟩ - 1|` measured after rescaling.
    pub norm_residual: f64,
}

pub fn normalize(f: &SpinWavefunction, grid: &QuadratureGrid) -> Result<NormalizedState> {
    let n2 = norm_squared(f, grid);
    if !(n2 > 0.0) || !n2.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let wavefunction = if n2 == 1.0 {
        f.clone()
    } else {
        f.scaled(Complex64::new(1.0 / n2.sqrt(), 0.0))
    };
    let norm_residual = (norm_squared(&wavefunction, grid) - 1.0).abs();
    debug_assert!(norm_residual <= NORMALIZATION_TOLERANCE);
    Ok(NormalizedState {
        wavefunction,
        grid: grid.clone(),
        norm_residual,
    })
}
