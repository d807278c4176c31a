//! Wigner rotations and the spin-`j` representations of the rotation group.
//!
//! Phase convention: `D^j` is built from the action of `SU(2)` on degree-`2j`
//! homogeneous polynomials in `(x, y)`. With this choice `D^{1/2}` is the
//! spinor itself and `d^j(β)` for rotations about the y axis is real, matching
//! the usual Condon–Shortley tables. Spin components are indexed by
//! `k = j - j₃`, so index 0 is `j₃ = +j`.

use std::fmt;

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lorentz::LorentzTransform;
use super::spinor::SpinorMap;
use crate::error::{Error, Result};

/// Unitarity tolerance for spinors accepted by [`wigner_d`].
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

/// A spin `j`, stored as the non-negative integer `2j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spin(u32);

impl Spin {
    pub const ZERO: Spin = Spin(0);
    pub const HALF: Spin = Spin(1);

    pub fn from_twice(twice_j: u32) -> Self {
        Spin(twice_j)
    }

    /// Accepts `j` values that are non-negative multiples of one half.
    pub fn from_f64(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !(twice >= 0.0) || (twice - twice.round()).abs() > 1e-12 || twice > 200.0 {
            return Err(Error::param(
                "spin",
                format!("{j} is not a non-negative half-integer"),
            ));
        }
        Ok(Spin(twice.round() as u32))
    }

    pub fn twice(&self) -> u32 {
        self.0
    }

    pub fn value(&self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Number of spin components, `2j + 1`.
    pub fn dim(&self) -> usize {
        self.0 as usize + 1
    }

    /// `j₃` for component index `k`.
    pub fn projection(&self, k: usize) -> f64 {
        (self.0 as f64 - 2.0 * k as f64) / 2.0
    }

    /// Component index of `j₃`, if it is a valid projection.
    pub fn index_of(&self, j3: f64) -> Option<usize> {
        let k2 = self.0 as f64 - 2.0 * j3;
        let k = (k2 / 2.0).round();
        if (k2 - 2.0 * k).abs() < 1e-12 && k >= 0.0 && k <= self.0 as f64 {
            Some(k as usize)
        } else {
            None
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Little-group element `W(Λ, u) = L(Λu)⁻¹ Λ L(u)`.
#[derive(Clone, Copy, Debug)]
pub struct WignerRotation {
    /// 4×4 form, reconstructed from the spinor; fixes `(1, 0, 0, 0)`.
    pub rotation: LorentzTransform,
    /// The `SU(2)` element.
    pub spinor: SpinorMap,
}

/// Computes `W(Λ, u)` in the double cover.
pub fn wigner_rotation(lam: &LorentzTransform, uvec: &Vector3<f64>) -> WignerRotation {
    let image = lam.apply_velocity(uvec);
    let spinor = SpinorMap::standard_boost(&image).inverse()
        * *lam.spinor()
        * SpinorMap::standard_boost(uvec);
    WignerRotation {
        rotation: LorentzTransform::from_spinor(spinor),
        spinor,
    }
}

/// The `(2j+1)`-dimensional matrix `D^j(W)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerDMatrix {
    pub spin: Spin,
    pub d: DMatrix<Complex64>,
}

impl WignerDMatrix {
    pub fn identity(spin: Spin) -> Self {
        WignerDMatrix {
            spin,
            d: DMatrix::identity(spin.dim(), spin.dim()),
        }
    }

    /// `(D ψ)_k = Σ_k' D_{k k'} ψ_k'`.
    pub fn apply(&self, amplitudes: &[Complex64]) -> Vec<Complex64> {
        let n = self.spin.dim();
        debug_assert_eq!(amplitudes.len(), n);
        (0..n)
            .map(|row| {
                (0..n).fold(Complex64::new(0.0, 0.0), |acc, col| {
                    acc + self.d[(row, col)] * amplitudes[col]
                })
            })
            .collect()
    }

    pub fn unitarity_defect(&self) -> f64 {
        let n = self.spin.dim();
        let p = self.d.adjoint() * &self.d - DMatrix::<Complex64>::identity(n, n);
        p.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        0.0
    } else {
        factorial(n) / (factorial(k) * factorial(n - k))
    }
}

/// `D^j` of a unitary spinor.
pub fn wigner_d(spin: Spin, spinor: &SpinorMap) -> Result<WignerDMatrix> {
    let defect = spinor.unitarity_defect();
    if defect > UNITARITY_TOLERANCE {
        return Err(Error::NotUnitary(defect));
    }
    Ok(wigner_d_unchecked(spin, spinor))
}

/// [`wigner_d`] without the unitarity guard, for spinors that are unitary by
/// construction.
pub(crate) fn wigner_d_unchecked(spin: Spin, spinor: &SpinorMap) -> WignerDMatrix {
    let m = spinor.matrix();
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let tj = spin.twice();
    let n = spin.dim();
    let mut out = DMatrix::zeros(n, n);
    // Column k: basis monomial x^p y^q with p = j + j₃ = 2j - k, q = k.
    for col in 0..n as u32 {
        let (p, q) = (tj - col, col);
        for row in 0..n as u32 {
            let (pp, qp) = (tj - row, row);
            let prefactor = ((factorial(pp) * factorial(qp)) / (factorial(p) * factorial(q))).sqrt();
            let lo = pp.saturating_sub(q);
            let hi = p.min(pp);
            let mut sum = Complex64::new(0.0, 0.0);
            for s in lo..=hi {
                let coeff = binomial(p, s) * binomial(q, pp - s);
                sum += a.powu(s) * c.powu(p - s) * b.powu(pp - s) * d.powu(q + s - pp) * coeff;
            }
            out[(row as usize, col as usize)] = sum * prefactor;
        }
    }
    WignerDMatrix { spin, d: out }
}
