use std::fmt;
use std::sync::Arc;

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kinematics::Spin;

type EvalFn = dyn Fn(&Vector3<f64>) -> Vec<Complex64> + Send + Sync;

/// A lazily evaluable four-velocity wavefunction `(u⃗, j₃) ↦ f(u⃗, j₃)`.
///
/// Operators compose evaluation rules rather than resampling arrays, so
/// algebraic laws hold pointwise without interpolation error. Evaluation
/// returns all `2j+1` spin components at once, indexed by `k = j - j₃`.
#[derive(Clone)]
pub struct SpinWavefunction {
    spin: Spin,
    eval: Arc<EvalFn>,
    description: String,
}

impl SpinWavefunction {
    pub fn new<F>(spin: Spin, description: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&Vector3<f64>) -> Vec<Complex64> + Send + Sync + 'static,
    {
        SpinWavefunction {
            spin,
            eval: Arc::new(eval),
            description: description.into(),
        }
    }

    pub fn zero(spin: Spin) -> Self {
        let n = spin.dim();
        Self::new(spin, "zero", move |_| vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// All spin components at `u`.
    pub fn eval_all(&self, u: &Vector3<f64>) -> Vec<Complex64> {
        (self.eval)(u)
    }

    /// Component `k` (`j₃ = j - k`) at `u`.
    pub fn eval(&self, u: &Vector3<f64>, k: usize) -> Complex64 {
        self.eval_all(u)[k]
    }

    /// Pointwise product with a scalar multiplier shared by all spin components.
    pub fn multiplied<M>(&self, label: &str, multiplier: M) -> Self
    where
        M: Fn(&Vector3<f64>) -> Complex64 + Send + Sync + 'static,
    {
        let inner = self.eval.clone();
        let description = format!("{label}∘{}", self.description);
        Self::new(self.spin, description, move |u| {
            let m = multiplier(u);
            let mut amps = inner(u);
            for a in amps.iter_mut() {
                *a *= m;
            }
            amps
        })
    }

    pub fn scaled(&self, alpha: Complex64) -> Self {
        let inner = self.eval.clone();
        let description = format!("({alpha})·{}", self.description);
        Self::new(self.spin, description, move |u| {
            inner(u).into_iter().map(|a| a * alpha).collect()
        })
    }

    pub fn plus(&self, other: &SpinWavefunction) -> Result<Self> {
        check_spins(self, other)?;
        let (f, g) = (self.eval.clone(), other.eval.clone());
        let description = format!("{} + {}", self.description, other.description);
        Ok(Self::new(self.spin, description, move |u| {
            f(u).into_iter().zip(g(u)).map(|(a, b)| a + b).collect()
        }))
    }
}

impl fmt::Debug for SpinWavefunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpinWavefunction")
            .field("spin", &self.spin)
            .field("description", &self.description)
            .finish()
    }
}

pub(crate) fn check_spins(f: &SpinWavefunction, g: &SpinWavefunction) -> Result<()> {
    if f.spin != g.spin {
        return Err(Error::SpinMismatch {
            left: f.spin.twice(),
            right: g.spin.twice(),
        });
    }
    Ok(())
}

fn check_weights(spin: Spin, weights: &[Complex64]) -> Result<()> {
    if weights.len() != spin.dim() {
        return Err(Error::param(
            "spin_weights",
            format!("expected {} components for j = {spin}, got {}", spin.dim(), weights.len()),
        ));
    }
    if weights.iter().all(|w| w.norm() == 0.0) {
        return Err(Error::param("spin_weights", "all components are zero"));
    }
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::param("spin_weights", "non-finite component"));
    }
    Ok(())
}

/// `f(u⃗, j₃) = w[j₃] · exp(-|u⃗ - c|² / (2 width²))`.
pub fn gaussian_packet(
    center: Vector3<f64>,
    width: f64,
    spin: Spin,
    weights: &[Complex64],
) -> Result<SpinWavefunction> {
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::param("width", format!("must be positive, got {width}")));
    }
    check_weights(spin, weights)?;
    let weights = weights.to_vec();
    let inv = 1.0 / (2.0 * width * width);
    let description = format!(
        "gaussian(center=({}, {}, {}), width={width}, j={spin})",
        center.x, center.y, center.z
    );
    Ok(SpinWavefunction::new(spin, description, move |u| {
        let g = (-(u - center).norm_squared() * inv).exp();
        weights.iter().map(|w| w * g).collect()
    }))
}

/// Smooth compactly supported profile `exp(1 - 1/(1 - s²))` on `|s| < 1`.
pub fn bump(s: f64) -> f64 {
    let r = s * s;
    if r >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - r)).exp()
    }
}

/// Velocity-space bump: `w[j₃] · bump(|u⃗ - c| / radius)`, zero outside the ball.
pub fn velocity_bump(
    center: Vector3<f64>,
    radius: f64,
    spin: Spin,
    weights: &[Complex64],
) -> Result<SpinWavefunction> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::param("radius", format!("must be positive, got {radius}")));
    }
    check_weights(spin, weights)?;
    let weights = weights.to_vec();
    let description = format!(
        "velocity_bump(center=({}, {}, {}), radius={radius}, j={spin})",
        center.x, center.y, center.z
    );
    Ok(SpinWavefunction::new(spin, description, move |u| {
        let b = bump((u - center).norm() / radius);
        weights.iter().map(|w| w * b).collect()
    }))
}

/// Samples of the position profile used by [`position_bump_1d`].
const POSITION_SAMPLES: usize = 2048;

/// A spin-0 state on the `u_z` axis whose 1-D position amplitude is a
/// normalized bump supported on `[center - half_width, center + half_width]`.
///
/// The velocity amplitude is the inverse of the transform used by
/// [`super::position_density_1d`]:
/// `f(u) = sqrt(2 u0) · sqrt(M / 2π) ∫ exp(-i M u x) φ(x) dx`,
/// evaluated with a midpoint rule over the support.
pub fn position_bump_1d(center: f64, half_width: f64, mass: f64) -> Result<SpinWavefunction> {
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(Error::param("half_width", format!("must be positive, got {half_width}")));
    }
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::param("mass", format!("must be positive, got {mass}")));
    }
    let dx = 2.0 * half_width / POSITION_SAMPLES as f64;
    let xs: Vec<f64> = (0..POSITION_SAMPLES)
        .map(|i| center - half_width + (i as f64 + 0.5) * dx)
        .collect();
    let raw: Vec<f64> = xs.iter().map(|&x| bump((x - center) / half_width)).collect();
    let norm = (raw.iter().map(|v| v * v).sum::<f64>() * dx).sqrt();
    let profile: Vec<(f64, f64)> = xs.into_iter().zip(raw.into_iter().map(|v| v / norm)).collect();
    let prefactor = (mass / (2.0 * std::f64::consts::PI)).sqrt() * dx;
    let description = format!("position_bump(center={center}, half_width={half_width}, M={mass})");
    Ok(SpinWavefunction::new(Spin::ZERO, description, move |u| {
        let k = mass * u.z;
        let mut acc = Complex64::new(0.0, 0.0);
        for &(x, phi) in &profile {
            acc += Complex64::from_polar(phi, -k * x);
        }
        let u0 = (1.0 + u.norm_squared()).sqrt();
        vec![acc * prefactor * (2.0 * u0).sqrt()]
    }))
}
