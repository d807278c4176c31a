//! The complex-mass representation of the causal Poincaré semigroup.
//!
//! Every operator here is a lazy composition on [`SpinWavefunction`]:
//! evolution and translation are multiplications by closed-form factors, and
//! the Lorentz part re-evaluates the input at `Λ⁻¹u` and mixes spin components
//! with `D^j` of the Wigner rotation.

use std::fmt;

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{
    classify_interval, velocity_u0, wigner_d_unchecked, wigner_rotation, FourVector, LorentzTransform,
};
use crate::state::SpinWavefunction;

/// Mass and width of a quasistable state; `s_R = (M - iΓ/2)²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexMass {
    pub mass: f64,
    pub width: f64,
}

impl ComplexMass {
    pub fn new(mass: f64, width: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::param("complex_mass.mass", format!("must be positive, got {mass}")));
        }
        if !(width.is_finite() && width >= 0.0) {
            return Err(Error::param(
                "complex_mass.width",
                format!("must be non-negative, got {width}"),
            ));
        }
        Ok(ComplexMass { mass, width })
    }

    /// Stable particle of mass `m`.
    pub fn stable(mass: f64) -> Result<Self> {
        Self::new(mass, 0.0)
    }

    /// Principal square root of `s_R`: `M - iΓ/2`.
    pub fn sqrt_s(&self) -> Complex64 {
        Complex64::new(self.mass, -0.5 * self.width)
    }

    /// The pole position `s_R = (M - iΓ/2)²`.
    pub fn s_r(&self) -> Complex64 {
        let s = self.sqrt_s();
        s * s
    }

    pub fn is_stable(&self) -> bool {
        self.width == 0.0
    }
}

impl fmt::Display for ComplexMass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(M={}, Γ={})", self.mass, self.width)
    }
}

/// The spectrum of `P0`: `{(M - iΓ/2) u0 : u0 ∈ [1, ∞)}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumRay {
    pub cm: ComplexMass,
}

impl SpectrumRay {
    pub fn new(cm: ComplexMass) -> Self {
        SpectrumRay { cm }
    }

    pub fn point(&self, u0: f64) -> Complex64 {
        self.cm.sqrt_s() * u0
    }

    /// `count` points with `u0` log-spaced over `[1, u0_max]`.
    pub fn sample(&self, count: usize, u0_max: f64) -> Vec<Complex64> {
        let count = count.max(2);
        let top = u0_max.max(1.0).ln();
        (0..count)
            .map(|i| self.point((top * i as f64 / (count - 1) as f64).exp()))
            .collect()
    }
}

/// Whether translations are restricted to the forward cone.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TranslationMode {
    /// Reject translations outside `T₊`.
    #[default]
    Checked,
    /// Accept any translation. Only analysis scans use this, and they record it.
    Unchecked,
}

impl TranslationMode {
    pub fn is_checked(&self) -> bool {
        matches!(self, TranslationMode::Checked)
    }
}

/// `exp(-i √s u0 z)`.
pub fn semigroup_multiplier(sqrt_s: Complex64, u0: f64, z: Complex64) -> Complex64 {
    let w = sqrt_s * z;
    Complex64::from_polar((u0 * w.im).exp(), -u0 * w.re)
}

/// `exp(-i √s (u·a))`.
pub fn translation_multiplier(sqrt_s: Complex64, uvec: &Vector3<f64>, a: &FourVector) -> Complex64 {
    let phase = FourVector::velocity(uvec).dot(a);
    Complex64::from_polar((sqrt_s.im * phase).exp(), -sqrt_s.re * phase)
}

/// `P0 f = √s_R · u0 · f`.
pub fn apply_hamiltonian(f: &SpinWavefunction, cm: &ComplexMass) -> SpinWavefunction {
    let s = cm.sqrt_s();
    f.multiplied("P0", move |u| s * velocity_u0(u))
}

/// `e^{-i P0 t} f` for `t >= 0`.
pub fn evolve(f: &SpinWavefunction, cm: &ComplexMass, t: f64) -> Result<SpinWavefunction> {
    if !(t >= 0.0) {
        return Err(Error::SemigroupDomain(t));
    }
    Ok(complex_time_evolve(f, cm, Complex64::new(t, 0.0)))
}

/// `e^{-i P0 z} f` for complex `z`. Domain checks belong to the caller.
pub fn complex_time_evolve(f: &SpinWavefunction, cm: &ComplexMass, z: Complex64) -> SpinWavefunction {
    let s = cm.sqrt_s();
    f.multiplied(&format!("U(t={z})"), move |u| semigroup_multiplier(s, velocity_u0(u), z))
}

fn check_translation(a: &FourVector, mode: TranslationMode) -> Result<()> {
    if mode.is_checked() {
        let class = classify_interval(a);
        if !class.is_forward() {
            return Err(Error::CausalityDomain(class));
        }
    }
    Ok(())
}

/// `U(a) f`, multiplication by `exp(-i √s_R (u0 t - u⃗·x⃗))`.
pub fn translate(
    f: &SpinWavefunction,
    cm: &ComplexMass,
    a: &FourVector,
    mode: TranslationMode,
) -> Result<SpinWavefunction> {
    check_translation(a, mode)?;
    let s = cm.sqrt_s();
    let a = *a;
    let label = match mode {
        TranslationMode::Checked => format!("U(a={a})"),
        TranslationMode::Unchecked => format!("U(a={a}, unchecked)"),
    };
    Ok(f.multiplied(&label, move |u| translation_multiplier(s, u, &a)))
}

fn representation(
    f: &SpinWavefunction,
    sqrt_s: Complex64,
    lam: &LorentzTransform,
    a: &FourVector,
    label: String,
) -> SpinWavefunction {
    let spin = f.spin();
    let inner = f.clone();
    let lam = *lam;
    let lam_inv = lam.inverse();
    let a = *a;
    SpinWavefunction::new(spin, format!("{label}∘{}", f.description()), move |u| {
        let phase = translation_multiplier(sqrt_s, u, &a);
        let back = lam_inv.apply_velocity(u);
        let amps = inner.eval_all(&back);
        let mixed = if spin.twice() == 0 {
            amps
        } else {
            let w = wigner_rotation(&lam, &back);
            wigner_d_unchecked(spin, &w.spinor).apply(&amps)
        };
        mixed.into_iter().map(|z| z * phase).collect()
    })
}

/// `U(Λ, a) f` of the complex-mass representation:
///
/// ```text
/// (U(Λ,a) f)(u, ·) = exp(-i √s_R u·a) D^j(W(Λ, Λ⁻¹u)) f(Λ⁻¹u, ·)
/// ```
///
/// With this placement of the Wigner rotation the map is a representation:
/// `U(Λ₁,a₁) U(Λ₂,a₂) = U(Λ₁Λ₂, a₁ + Λ₁a₂)`.
pub fn poincare_transform(
    f: &SpinWavefunction,
    cm: &ComplexMass,
    lam: &LorentzTransform,
    a: &FourVector,
    mode: TranslationMode,
) -> Result<SpinWavefunction> {
    check_translation(a, mode)?;
    let label = match mode {
        TranslationMode::Checked => format!("U(Λ, a={a})"),
        TranslationMode::Unchecked => format!("U(Λ, a={a}, unchecked)"),
    };
    Ok(representation(f, cm.sqrt_s(), lam, a, label))
}

/// Unitary stable-particle representation with real mass `m`; defined for
/// every translation.
pub fn stable_transform(
    f: &SpinWavefunction,
    mass: f64,
    lam: &LorentzTransform,
    a: &FourVector,
) -> Result<SpinWavefunction> {
    let cm = ComplexMass::stable(mass)?;
    Ok(representation(f, cm.sqrt_s(), lam, a, format!("U_m(Λ, a={a})")))
}

/// Composition in the Poincaré group: `(Λ₁,a₁)(Λ₂,a₂) = (Λ₁Λ₂, a₁ + Λ₁a₂)`.
pub fn compose_elements(
    first: (&LorentzTransform, &FourVector),
    second: (&LorentzTransform, &FourVector),
) -> (LorentzTransform, FourVector) {
    let (l1, a1) = first;
    let (l2, a2) = second;
    (*l1 * *l2, *a1 + l1.apply(a2))
}
