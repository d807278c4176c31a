//! `SL(2, C)` double cover of the proper orthochronous Lorentz group.
//!
//! A spacetime point is encoded as the Hermitian matrix
//! `X = t·1 + x·σx + y·σy + z·σz` and transformed as `X ↦ A X A†`.

use std::ops::Mul;

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `|det A - 1|`.
pub const DET_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Pauli matrices, `σ0 = 1`.
fn sigma(mu: usize) -> Matrix2<Complex64> {
    match mu {
        0 => Matrix2::new(ONE, ZERO, ZERO, ONE),
        1 => Matrix2::new(ZERO, ONE, ONE, ZERO),
        2 => Matrix2::new(ZERO, -I, I, ZERO),
        3 => Matrix2::new(ONE, ZERO, ZERO, -ONE),
        _ => unreachable!("Pauli index out of range"),
    }
}

/// `u0·1 + u⃗·σ`, the Hermitian image of a four-velocity.
fn hermitian_of(u0: f64, uvec: &Vector3<f64>) -> Matrix2<Complex64> {
    Matrix2::new(
        Complex64::new(u0 + uvec.z, 0.0),
        Complex64::new(uvec.x, -uvec.y),
        Complex64::new(uvec.x, uvec.y),
        Complex64::new(u0 - uvec.z, 0.0),
    )
}

/// A unit-determinant 2×2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinorMap {
    m: Matrix2<Complex64>,
}

impl SpinorMap {
    pub fn new(m: Matrix2<Complex64>) -> Result<Self> {
        let det = m.determinant();
        let dev = (det - ONE).norm();
        if dev > DET_TOLERANCE * m.norm_squared().max(1.0) {
            return Err(Error::param(
                "spinor",
                format!("determinant deviates from 1 by {dev:e}"),
            ));
        }
        Ok(SpinorMap { m })
    }

    pub fn identity() -> Self {
        SpinorMap { m: Matrix2::identity() }
    }

    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.m
    }

    /// `exp(-i θ n⃗·σ / 2)`: active rotation by `angle` about `axis`.
    pub fn rotation(axis: &Vector3<f64>, angle: f64) -> Self {
        let n = axis.normalize();
        let (s, c) = (angle / 2.0).sin_cos();
        let q = n * s;
        Self::from_quaternion(c, &q)
    }

    /// Unit quaternion `(w, v⃗)` mapped to `w·1 - i v⃗·σ`.
    pub(crate) fn from_quaternion(w: f64, v: &Vector3<f64>) -> Self {
        SpinorMap {
            m: Matrix2::new(
                Complex64::new(w, -v.z),
                Complex64::new(-v.y, -v.x),
                Complex64::new(v.y, -v.x),
                Complex64::new(w, v.z),
            ),
        }
    }

    /// Positive Hermitian square root of `u0·1 + u⃗·σ`, the lift of the
    /// standard boost taking the rest frame to four-velocity `u`.
    pub fn standard_boost(uvec: &Vector3<f64>) -> Self {
        let u0 = (1.0 + uvec.norm_squared()).sqrt();
        let scale = 1.0 / (2.0 * (u0 + 1.0)).sqrt();
        let h = hermitian_of(u0 + 1.0, uvec);
        SpinorMap { m: h * Complex64::new(scale, 0.0) }
    }

    /// Inverse of a unit-determinant matrix: `[[d, -b], [-c, a]]`.
    pub fn inverse(&self) -> Self {
        let m = &self.m;
        SpinorMap {
            m: Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]),
        }
    }

    pub fn adjoint(&self) -> Self {
        SpinorMap { m: self.m.adjoint() }
    }

    /// Max-entry deviation of `A†A` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.m.adjoint() * self.m - Matrix2::identity();
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// The Lorentz matrix `Λ^μ_ν = ½ tr(σ_μ A σ_ν A†)`.
    pub fn lorentz_matrix(&self) -> Matrix4<f64> {
        let adj = self.m.adjoint();
        let mut out = Matrix4::zeros();
        let images: Vec<Matrix2<Complex64>> = (0..4).map(|nu| self.m * sigma(nu) * adj).collect();
        for mu in 0..4 {
            let s = sigma(mu);
            for (nu, img) in images.iter().enumerate() {
                out[(mu, nu)] = 0.5 * (s * img).trace().re;
            }
        }
        out
    }

    /// Lifts a 3×3 rotation matrix to `SU(2)`, choosing the sign with a
    /// non-negative scalar quaternion part.
    pub fn from_rotation_matrix(r: &Matrix3<f64>) -> Self {
        // Shepperd's method.
        let trace = r.trace();
        let (w, x, y, z);
        if trace > 0.0 {
            let s = (trace + 1.0).sqrt() * 2.0;
            w = 0.25 * s;
            x = (r[(2, 1)] - r[(1, 2)]) / s;
            y = (r[(0, 2)] - r[(2, 0)]) / s;
            z = (r[(1, 0)] - r[(0, 1)]) / s;
        } else if r[(0, 0)] > r[(1, 1)] && r[(0, 0)] > r[(2, 2)] {
            let s = (1.0 + r[(0, 0)] - r[(1, 1)] - r[(2, 2)]).sqrt() * 2.0;
            w = (r[(2, 1)] - r[(1, 2)]) / s;
            x = 0.25 * s;
            y = (r[(0, 1)] + r[(1, 0)]) / s;
            z = (r[(0, 2)] + r[(2, 0)]) / s;
        } else if r[(1, 1)] > r[(2, 2)] {
            let s = (1.0 + r[(1, 1)] - r[(0, 0)] - r[(2, 2)]).sqrt() * 2.0;
            w = (r[(0, 2)] - r[(2, 0)]) / s;
            x = (r[(0, 1)] + r[(1, 0)]) / s;
            y = 0.25 * s;
            z = (r[(1, 2)] + r[(2, 1)]) / s;
        } else {
            let s = (1.0 + r[(2, 2)] - r[(0, 0)] - r[(1, 1)]).sqrt() * 2.0;
            w = (r[(1, 0)] - r[(0, 1)]) / s;
            x = (r[(0, 2)] + r[(2, 0)]) / s;
            y = (r[(1, 2)] + r[(2, 1)]) / s;
            z = 0.25 * s;
        }
        let sign = if w < 0.0 { -1.0 } else { 1.0 };
        let norm = (w * w + x * x + y * y + z * z).sqrt() * sign;
        Self::from_quaternion(w / norm, &(Vector3::new(x, y, z) / norm))
    }
}

impl Mul for SpinorMap {
    type Output = SpinorMap;
    fn mul(self, rhs: SpinorMap) -> SpinorMap {
        SpinorMap { m: self.m * rhs.m }
    }
}
