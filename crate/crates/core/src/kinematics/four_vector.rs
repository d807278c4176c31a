use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Vector3, Vector4};
use serde::{Deserialize, Serialize};

/// Relative guard band used when deciding whether an interval sits on the
/// light cone. Scaled by `max(1, t² + |x|²)`.
pub const LIGHTLIKE_TOLERANCE: f64 = 1e-12;

/// A spacetime four-vector `(t, x, y, z)` with metric signature `(+, -, -, -)`
/// and units `c = 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FourVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FourVector {
    pub const ZERO: FourVector = FourVector {
        t: 0.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        FourVector { t, x, y, z }
    }

    /// Pure time translation `(t, 0, 0, 0)`.
    pub fn time(t: f64) -> Self {
        FourVector::new(t, 0.0, 0.0, 0.0)
    }

    pub fn from_parts(t: f64, spatial: Vector3<f64>) -> Self {
        FourVector::new(t, spatial.x, spatial.y, spatial.z)
    }

    /// The four-velocity `(u0, u)` with `u0 = sqrt(1 + |u|²)`.
    pub fn velocity(uvec: &Vector3<f64>) -> Self {
        FourVector::from_parts(velocity_u0(uvec), *uvec)
    }

    pub fn spatial(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn to_vector4(&self) -> Vector4<f64> {
        Vector4::new(self.t, self.x, self.y, self.z)
    }

    pub fn from_vector4(v: &Vector4<f64>) -> Self {
        FourVector::new(v[0], v[1], v[2], v[3])
    }

    /// Minkowski product `a·b = a0 b0 - a⃗·b⃗`.
    pub fn dot(&self, other: &FourVector) -> f64 {
        self.t * other.t - self.x * other.x - self.y * other.y - self.z * other.z
    }

    /// `a² = t² - x² - y² - z²`.
    pub fn minkowski_square(&self) -> f64 {
        self.dot(self)
    }

    fn euclidean_scale(&self) -> f64 {
        self.t * self.t + self.x * self.x + self.y * self.y + self.z * self.z
    }
}

/// `u0 = sqrt(1 + |u|²)`.
pub fn velocity_u0(uvec: &Vector3<f64>) -> f64 {
    (1.0 + uvec.norm_squared()).sqrt()
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, o: FourVector) -> FourVector {
        FourVector::new(self.t + o.t, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, o: FourVector) -> FourVector {
        FourVector::new(self.t - o.t, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector::new(-self.t, -self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, s: f64) -> FourVector {
        FourVector::new(self.t * s, self.x * s, self.y * s, self.z * s)
    }
}

impl fmt::Display for FourVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.t, self.x, self.y, self.z)
    }
}

/// Position of a translation relative to the forward light cone `T₊`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalClass {
    /// `a0 >= 0` and `a² >= 0` (closed cone, lightlike boundary included).
    InForwardCone,
    Spacelike,
    /// Timelike or lightlike with `a0 < 0`.
    PastPointing,
}

impl IntervalClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            IntervalClass::InForwardCone => "in_forward_cone",
            IntervalClass::Spacelike => "spacelike",
            IntervalClass::PastPointing => "past_pointing",
        }
    }

    pub fn is_forward(&self) -> bool {
        matches!(self, IntervalClass::InForwardCone)
    }
}

impl fmt::Display for IntervalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classifies `a` against the closed forward cone.
///
/// Intervals with `a²` slightly negative (within the lightlike guard band)
/// are promoted to the cone, so rounding from boosting a null vector does not
/// flip its classification.
pub fn classify_interval(a: &FourVector) -> IntervalClass {
    let guard = LIGHTLIKE_TOLERANCE * a.euclidean_scale().max(1.0);
    let square = a.minkowski_square();
    if square < -guard {
        IntervalClass::Spacelike
    } else if a.t >= -guard {
        IntervalClass::InForwardCone
    } else {
        IntervalClass::PastPointing
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_interval(&FourVector::new(1.0, 0.0, 0.0, 0.0)),
            IntervalClass::InForwardCone
        );
        assert_eq!(
            classify_interval(&FourVector::new(1.0, 0.0, 0.0, 1.0)),
            IntervalClass::InForwardCone
        );
        assert_eq!(
            classify_interval(&FourVector::new(1.0, 0.0, 0.0, 2.0)),
            IntervalClass::Spacelike
        );
        assert_eq!(
            classify_interval(&FourVector::new(-1.0, 0.0, 0.0, 0.0)),
            IntervalClass::PastPointing
        );
        assert_eq!(classify_interval(&FourVector::ZERO), IntervalClass::InForwardCone);
    }

    #[test]
    fn lightlike_guard_band_promotes() {
        let a = FourVector::new(1.0, 0.0, 0.0, 1.0 + 1e-14);
        assert!(a.minkowski_square() < 0.0);
        assert_eq!(classify_interval(&a), IntervalClass::InForwardCone);
        let b = FourVector::new(1.0, 0.0, 0.0, 1.0 + 1e-9);
        assert_eq!(classify_interval(&b), IntervalClass::Spacelike);
    }

    #[test]
    fn past_lightlike_is_past_pointing() {
        let a = FourVector::new(-2.0, 2.0, 0.0, 0.0);
        assert_eq!(classify_interval(&a), IntervalClass::PastPointing);
    }

    #[test]
    fn velocity_is_unit_timelike() {
        let u = FourVector::velocity(&Vector3::new(0.3, -2.0, 4.5));
        assert!((u.minkowski_square() - 1.0).abs() < 1e-13);
    }
}
