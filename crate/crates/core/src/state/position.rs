//! One-dimensional position representation of the reduced model.
//!
//! A velocity wavefunction on the `u_z` axis is mapped to a position
//! amplitude with the Newton–Wigner-type kernel
//!
//! ```text
//! ψ(x) = sqrt(M / 2π) ∫ du exp(i M u x) f(u) / sqrt(2 u0)
//! ```
//!
//! The `1/sqrt(2 u0)` factor absorbs the invariant measure and the `sqrt(M)`
//! factor accounts for `p = M u`, so that `∫ |ψ|² dx = ⟨f, f⟩`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::grid::{GridMode, QuadratureGrid};
use super::wavefunction::SpinWavefunction;
use crate::error::{Error, Result};
use crate::summation::sum_complex;

fn check_reduced(f: &SpinWavefunction, grid: &QuadratureGrid) -> Result<()> {
    if grid.mode() != GridMode::OneDReduced {
        return Err(Error::RequiresOneD);
    }
    if f.spin().twice() != 0 {
        return Err(Error::param("spin", "position densities are defined for j = 0 only"));
    }
    Ok(())
}

/// Velocity-node coefficients `h · f(u) / sqrt(2 u0) · sqrt(M / 2π)`.
pub(crate) fn position_coefficients(
    f: &SpinWavefunction,
    grid: &QuadratureGrid,
    mass: f64,
) -> Result<Vec<(f64, Complex64)>> {
    check_reduced(f, grid)?;
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::param("mass", format!("must be positive, got {mass}")));
    }
    let scale = (mass / (2.0 * PI)).sqrt();
    Ok(grid
        .nodes()
        .iter()
        .zip(grid.weights().iter().zip(grid.energies()))
        .map(|(u, (&w, &u0))| {
            // h / sqrt(2 u0) = w · sqrt(2 u0)
            let c = f.eval(u, 0) * (w * (2.0 * u0).sqrt() * scale);
            (mass * u.z, c)
        })
        .collect())
}

pub(crate) fn amplitude_at(coeffs: &[(f64, Complex64)], x: f64) -> Complex64 {
    sum_complex(coeffs.len(), |i| {
        let (k, c) = coeffs[i];
        c * Complex64::from_polar(1.0, k * x)
    })
}

/// Complex position amplitudes `ψ(x)` at the requested points.
pub fn position_amplitudes_1d(
    f: &SpinWavefunction,
    grid: &QuadratureGrid,
    xs: &[f64],
    mass: f64,
) -> Result<Vec<Complex64>> {
    let coeffs = position_coefficients(f, grid, mass)?;
    Ok(xs.iter().map(|&x| amplitude_at(&coeffs, x)).collect())
}

/// `(x, |ψ(x)|²)` for each requested point.
pub fn position_density_1d(
    f: &SpinWavefunction,
    grid: &QuadratureGrid,
    xs: &[f64],
    mass: f64,
) -> Result<Vec<(f64, f64)>> {
    let amps = position_amplitudes_1d(f, grid, xs, mass)?;
    Ok(xs.iter().zip(amps).map(|(&x, a)| (x, a.norm_sqr())).collect())
}

/// Length of the period of `ψ(x)` induced by the velocity spacing,
/// `2π / (M h)`.
pub fn position_period(grid: &QuadratureGrid, mass: f64) -> f64 {
    2.0 * PI / (mass * grid.step())
}

/// `points` equally spaced positions covering one period, centred on 0.
/// A trapezoid sum over these is exact for `∫ |ψ|²` whenever
/// `points >= grid.len()`.
pub fn periodic_x_grid(grid: &QuadratureGrid, mass: f64, points: usize) -> Vec<f64> {
    let period = position_period(grid, mass);
    let dx = period / points as f64;
    (0..points).map(|i| -period / 2.0 + i as f64 * dx).collect()
}

/// Trapezoid rule over sorted sample points.
pub fn trapezoid(samples: &[(f64, f64)]) -> f64 {
    samples
        .windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::Spin;
    use crate::state::{gaussian_packet, norm_squared};
    use nalgebra::Vector3;

    fn one() -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0)]
    }

    #[test]
    fn zero_state_has_zero_density() {
        let g = QuadratureGrid::one_d(8.0, 64).unwrap();
        let f = SpinWavefunction::zero(Spin::ZERO);
        let d = position_density_1d(&f, &g, &[-1.0, 0.0, 2.5], 1.0).unwrap();
        assert!(d.iter().all(|&(_, v)| v == 0.0));
    }

    #[test]
    fn symmetric_state_has_symmetric_density() {
        let g = QuadratureGrid::one_d(8.0, 64).unwrap();
        let f = gaussian_packet(Vector3::zeros(), 1.3, Spin::ZERO, &one()).unwrap();
        let xs: Vec<f64> = (0..50).map(|i| 0.1 * i as f64).collect();
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        let a = position_density_1d(&f, &g, &xs, 1.0).unwrap();
        let b = position_density_1d(&f, &g, &neg, 1.0).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert!((p.1 - q.1).abs() < 1e-10);
            assert!(p.1 >= 0.0);
        }
    }

    #[test]
    fn plancherel_total_mass() {
        // Two independent quadratures: velocity norm on the grid, and a
        // fine trapezoid over a wide position window.
        let g = QuadratureGrid::one_d(8.0, 128).unwrap();
        let f = gaussian_packet(Vector3::new(0.0, 0.0, 0.5), 1.0, Spin::ZERO, &one()).unwrap();
        let xs: Vec<f64> = (0..=2400).map(|i| -12.0 + 0.01 * i as f64).collect();
        let density = position_density_1d(&f, &g, &xs, 1.0).unwrap();
        let total = trapezoid(&density);
        let n2 = norm_squared(&f, &g);
        assert!((total - n2).abs() < 1e-4, "{total} vs {n2}");
    }

    #[test]
    fn periodic_window_is_exact() {
        let g = QuadratureGrid::one_d(6.0, 48).unwrap();
        let f = gaussian_packet(Vector3::new(0.0, 0.0, -1.0), 0.4, Spin::ZERO, &one()).unwrap();
        let xs = periodic_x_grid(&g, 2.0, 64);
        let dx = xs[1] - xs[0];
        let total: f64 = position_density_1d(&f, &g, &xs, 2.0).unwrap().iter().map(|p| p.1).sum::<f64>() * dx;
        assert!((total - norm_squared(&f, &g)).abs() < 1e-12);
    }

    #[test]
    fn rejects_three_d_and_spin() {
        let g3 = QuadratureGrid::three_d(4.0, 8).unwrap();
        let f = gaussian_packet(Vector3::zeros(), 1.0, Spin::ZERO, &one()).unwrap();
        assert_eq!(position_density_1d(&f, &g3, &[0.0], 1.0).unwrap_err(), Error::RequiresOneD);
        let g = QuadratureGrid::one_d(4.0, 8).unwrap();
        let half = gaussian_packet(Vector3::zeros(), 1.0, Spin::HALF, &[Complex64::new(1.0, 0.0); 2]).unwrap();
        assert!(position_density_1d(&half, &g, &[0.0], 1.0).is_err());
    }
}
