//! Continuation of `p_A` off the real time axis.
//!
//! `p_A(z) = ⟨e^{-iH z̄} ψ₀, A e^{-iH z} ψ₀⟩` is built from two complex-time
//! evolutions. On the real axis it reduces to `p_A(t)`; the reflection
//! identity `conj(p_A(z̄)) = p_A(z)` and centered Cauchy–Riemann residuals are
//! the numerical witnesses of analyticity.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::Serialize;

use super::observable::Observable;
use super::strip::AnalyticStrip;
use crate::error::{Error, Result};
use crate::evolution::{complex_time_evolve, ComplexMass};
use crate::kinematics::velocity_u0;
use crate::state::NormalizedState;

fn check_in_strip(strip: &AnalyticStrip, z: Complex64) -> Result<()> {
    if !strip.contains_closed(z) {
        return Err(Error::OutsideStrip {
            re: z.re,
            im: z.im,
            half_width: strip.half_width,
        });
    }
    Ok(())
}

/// `p_A(z)` for `z` in the closed strip with `Re z > 0`.
///
/// The operator multipliers stay bounded for `|Im z| <= k Re z`, so points
/// near the strip edge with `Re z < 1` can amplify the grid cutoff.
pub fn complex_expectation(
    state: &NormalizedState,
    observable: &Observable,
    cm: &ComplexMass,
    strip: &AnalyticStrip,
    z: Complex64,
) -> Result<Complex64> {
    check_in_strip(strip, z)?;
    raw_complex_expectation(state, observable, cm, z)
}

fn raw_complex_expectation(
    state: &NormalizedState,
    observable: &Observable,
    cm: &ComplexMass,
    z: Complex64,
) -> Result<Complex64> {
    let bra = complex_time_evolve(&state.wavefunction, cm, z.conj());
    let ket = complex_time_evolve(&state.wavefunction, cm, z);
    observable.bilinear(&bra, &ket, &state.grid)
}

/// `|conj(p_A(z̄)) - p_A(z)|`, relative to `max(|p_A(z)|, tiny)`.
pub fn reflection_defect(
    state: &NormalizedState,
    observable: &Observable,
    cm: &ComplexMass,
    strip: &AnalyticStrip,
    z: Complex64,
) -> Result<f64> {
    let p = complex_expectation(state, observable, cm, strip, z)?;
    let q = complex_expectation(state, observable, cm, strip, z.conj())?;
    Ok((q.conj() - p).norm() / p.norm().max(f64::MIN_POSITIVE))
}

/// Centered-difference Cauchy–Riemann residual at step `h`:
/// `|∂_y p - i ∂_t p|` with both derivatives at `O(h²)`.
pub fn cauchy_riemann_residual(
    state: &NormalizedState,
    observable: &Observable,
    cm: &ComplexMass,
    strip: &AnalyticStrip,
    z: Complex64,
    h: f64,
) -> Result<f64> {
    let eval = |w: Complex64| complex_expectation(state, observable, cm, strip, w);
    let dt = (eval(z + h)? - eval(z - h)?) / (2.0 * h);
    let dy = (eval(z + Complex64::new(0.0, h))? - eval(z - Complex64::new(0.0, h))?) / (2.0 * h);
    Ok((dy - Complex64::i() * dt).norm())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub steps: Vec<f64>,
    pub residuals: Vec<f64>,
    /// `log(r_i / r_{i+1}) / log(h_i / h_{i+1})` for consecutive steps.
    pub observed_orders: Vec<f64>,
}

impl ConvergenceStudy {
    pub fn min_order(&self) -> f64 {
        self.observed_orders.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn cauchy_riemann_study(
    state: &NormalizedState,
    observable: &Observable,
    cm: &ComplexMass,
    strip: &AnalyticStrip,
    z: Complex64,
    steps: &[f64],
) -> Result<ConvergenceStudy> {
    let residuals = steps
        .iter()
        .map(|&h| cauchy_riemann_residual(state, observable, cm, strip, z, h))
        .collect::<Result<Vec<_>>>()?;
    let observed_orders = steps
        .windows(2)
        .zip(residuals.windows(2))
        .map(|(h, r)| (r[0] / r[1]).ln() / (h[0] / h[1]).ln())
        .collect();
    Ok(ConvergenceStudy {
        steps: steps.to_vec(),
        residuals,
        observed_orders,
    })
}

/// `p_A(z, x⃗) = ⟨U(z̄, x⃗) f, A U(z, x⃗) f⟩` at a fixed spatial translation.
///
/// Admissible points satisfy `Re z > |x⃗|` and
/// `|Im z| <= Γ/(2M) (Re z - |x⃗|)`: the real-time strip argument shifted by
/// `|x⃗|`, with the half-width growing along the cone.
pub fn fixed_position_expectation(
    state: &NormalizedState,
    observable: &Observable,
    cm: &ComplexMass,
    x: &Vector3<f64>,
    z: Complex64,
) -> Result<Complex64> {
    let reach = x.norm();
    let slope = cm.width / (2.0 * cm.mass);
    let allowed = slope * (z.re - reach);
    if !(z.re > reach) || z.im.abs() > allowed {
        return Err(Error::OutsideStrip {
            re: z.re,
            im: z.im,
            half_width: allowed.max(0.0),
        });
    }
    let s = cm.sqrt_s();
    let x = *x;
    let shifted = |w: Complex64| {
        state.wavefunction.multiplied("U(z, x)", move |u| {
            // exp(-i √s (u0 w - u⃗·x⃗))
            let arg = s * (w * velocity_u0(u) - u.dot(&x));
            (-Complex64::i() * arg).exp()
        })
    };
    observable.bilinear(&shifted(z.conj()), &shifted(z), &state.grid)
}
