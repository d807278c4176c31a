use std::ops::Mul;

use nalgebra::{Matrix3, Matrix4, Vector3};
use rand::Rng;

use super::four_vector::{velocity_u0, FourVector};
use super::spinor::SpinorMap;
use crate::error::{Error, Result};

/// Base tolerance for `ΛᵀηΛ = η`, scaled by the squared largest entry.
pub const METRIC_TOLERANCE: f64 = 1e-12;

fn eta() -> Matrix4<f64> {
    Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, -1.0))
}

/// A proper orthochronous Lorentz transformation.
///
/// The 4×4 matrix is carried together with one of its two `SL(2, C)` lifts.
/// Constructors and composition track the lift, so a rotation by 2π keeps
/// the identity matrix but carries the spinor `-1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzTransform {
    lambda: Matrix4<f64>,
    spinor: SpinorMap,
}

impl LorentzTransform {
    pub fn identity() -> Self {
        LorentzTransform {
            lambda: Matrix4::identity(),
            spinor: SpinorMap::identity(),
        }
    }

    /// Validates a raw matrix and lifts it to the double cover.
    pub fn from_matrix(lambda: Matrix4<f64>) -> Result<Self> {
        let defect = metric_defect(&lambda);
        let scale = lambda.abs().max().powi(2).max(1.0);
        if defect > METRIC_TOLERANCE * scale {
            return Err(Error::NotProperOrthochronous(format!(
                "metric not preserved (deviation {defect:e})"
            )));
        }
        if lambda[(0, 0)] < 1.0 - METRIC_TOLERANCE * scale {
            return Err(Error::NotProperOrthochronous(format!(
                "Λ⁰₀ = {} < 1 reverses time",
                lambda[(0, 0)]
            )));
        }
        if lambda.determinant() <= 0.0 {
            return Err(Error::NotProperOrthochronous("det Λ = -1".into()));
        }
        // Polar decomposition Λ = L(w) R with w = Λ e0.
        let w = Vector3::new(lambda[(1, 0)], lambda[(2, 0)], lambda[(3, 0)]);
        let boost = Self::standard_boost(&w);
        let rot = boost.inverse().lambda * lambda;
        let block: Matrix3<f64> = rot.fixed_view::<3, 3>(1, 1).into_owned();
        let spinor = boost.spinor * SpinorMap::from_rotation_matrix(&block);
        Ok(LorentzTransform { lambda, spinor })
    }

    /// Builds the transform from its `SL(2, C)` lift.
    pub fn from_spinor(spinor: SpinorMap) -> Self {
        LorentzTransform {
            lambda: spinor.lorentz_matrix(),
            spinor,
        }
    }

    /// The symmetric pure boost `L(u)` with `L·(1,0,0,0) = (u0, u⃗)`.
    pub fn standard_boost(uvec: &Vector3<f64>) -> Self {
        let u0 = velocity_u0(uvec);
        let mut lambda = Matrix4::identity();
        lambda[(0, 0)] = u0;
        for i in 0..3 {
            lambda[(0, i + 1)] = uvec[i];
            lambda[(i + 1, 0)] = uvec[i];
            for j in 0..3 {
                lambda[(i + 1, j + 1)] += uvec[i] * uvec[j] / (1.0 + u0);
            }
        }
        LorentzTransform {
            lambda,
            spinor: SpinorMap::standard_boost(uvec),
        }
    }

    /// Boost along a unit direction with the given rapidity.
    pub fn boost_rapidity(direction: &Vector3<f64>, rapidity: f64) -> Self {
        Self::standard_boost(&(direction.normalize() * rapidity.sinh()))
    }

    /// Active rotation by `angle` about `axis`.
    pub fn rotation(axis: &Vector3<f64>, angle: f64) -> Self {
        Self::from_spinor(SpinorMap::rotation(axis, angle))
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.lambda
    }

    pub fn spinor(&self) -> &SpinorMap {
        &self.spinor
    }

    /// `Λ⁻¹ = η Λᵀ η`.
    pub fn inverse(&self) -> Self {
        let e = eta();
        LorentzTransform {
            lambda: e * self.lambda.transpose() * e,
            spinor: self.spinor.inverse(),
        }
    }

    pub fn apply(&self, a: &FourVector) -> FourVector {
        FourVector::from_vector4(&(self.lambda * a.to_vector4()))
    }

    /// Spatial part of `Λ(u0, u⃗)`.
    pub fn apply_velocity(&self, uvec: &Vector3<f64>) -> Vector3<f64> {
        self.apply(&FourVector::velocity(uvec)).spatial()
    }

    /// Max-entry deviation of `ΛᵀηΛ` from `η`.
    pub fn metric_defect(&self) -> f64 {
        metric_defect(&self.lambda)
    }
}

fn metric_defect(lambda: &Matrix4<f64>) -> f64 {
    let e = eta();
    (lambda.transpose() * e * lambda - e).abs().max()
}

impl Mul for LorentzTransform {
    type Output = LorentzTransform;
    fn mul(self, rhs: LorentzTransform) -> LorentzTransform {
        LorentzTransform {
            lambda: self.lambda * rhs.lambda,
            spinor: self.spinor * rhs.spinor,
        }
    }
}

/// Uniformly distributed unit vector.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Random rotation: uniform axis, angle in `[0, 2π)`.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> LorentzTransform {
    let axis = random_direction(rng);
    LorentzTransform::rotation(&axis, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Random boost with rapidity in `[0, max_rapidity]`.
pub fn random_boost<R: Rng + ?Sized>(rng: &mut R, max_rapidity: f64) -> LorentzTransform {
    let dir = random_direction(rng);
    LorentzTransform::boost_rapidity(&dir, rng.gen_range(0.0..=max_rapidity))
}

/// Product of a random boost and a random rotation.
pub fn random_transform<R: Rng + ?Sized>(rng: &mut R, max_rapidity: f64) -> LorentzTransform {
    random_boost(rng, max_rapidity) * random_rotation(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rest_frame_boost_is_identity() {
        let l = LorentzTransform::standard_boost(&Vector3::zeros());
        assert_eq!(*l.matrix(), Matrix4::identity());
    }

    #[test]
    fn z_boost_matches_rapidity() {
        let eta = 0.7_f64;
        let l = LorentzTransform::standard_boost(&Vector3::new(0.0, 0.0, eta.sinh()));
        assert!((l.matrix()[(0, 0)] - eta.cosh()).abs() < 1e-15);
        assert!((l.matrix()[(3, 3)] - eta.cosh()).abs() < 1e-14);
        assert!((l.matrix()[(0, 3)] - eta.sinh()).abs() < 1e-15);
        let e0 = l.apply(&FourVector::time(1.0));
        assert!((e0.t - eta.cosh()).abs() < 1e-15);
        assert!((e0.z - eta.sinh()).abs() < 1e-15);
        assert_eq!(e0.x, 0.0);
        assert_eq!(e0.y, 0.0);
    }

    #[test]
    fn boost_matrix_agrees_with_spinor() {
        let u = Vector3::new(1.5, -0.3, 2.2);
        let l = LorentzTransform::standard_boost(&u);
        let from_spinor = l.spinor().lorentz_matrix();
        assert!((l.matrix() - from_spinor).abs().max() < 1e-12);
        assert!((l.matrix() - l.matrix().transpose()).abs().max() == 0.0);
    }

    #[test]
    fn from_matrix_recovers_lift_up_to_sign() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let l = random_transform(&mut rng, 2.0);
            let lifted = LorentzTransform::from_matrix(*l.matrix()).unwrap();
            let a = l.spinor().matrix();
            let b = lifted.spinor().matrix();
            let d = (a - b).norm().min((a + b).norm());
            assert!(d < 1e-10, "lift mismatch {d}");
        }
    }

    #[test]
    fn rejects_parity_and_time_reversal() {
        let parity = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, -1.0));
        assert!(LorentzTransform::from_matrix(parity).is_err());
        let time_rev = Matrix4::from_diagonal(&nalgebra::Vector4::new(-1.0, 1.0, 1.0, 1.0));
        assert!(LorentzTransform::from_matrix(time_rev).is_err());
        let total = -Matrix4::<f64>::identity();
        assert!(LorentzTransform::from_matrix(total).is_err());
        let mut shear = Matrix4::identity();
        shear[(0, 1)] = 0.5;
        assert!(LorentzTransform::from_matrix(shear).is_err());
    }

    #[test]
    fn inverse_composes_to_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let l = random_transform(&mut rng, 1.5);
        let id = l * l.inverse();
        assert!((id.matrix() - Matrix4::identity()).abs().max() < 1e-12);
        assert!((id.spinor().matrix() - nalgebra::Matrix2::identity()).norm() < 1e-12);
    }
}
