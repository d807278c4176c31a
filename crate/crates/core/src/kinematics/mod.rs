//! Lorentz-group and little-group machinery.

mod four_vector;
mod lorentz;
mod spinor;
mod wigner;

pub use four_vector::{classify_interval, velocity_u0, FourVector, IntervalClass, LIGHTLIKE_TOLERANCE};
pub use lorentz::{
    random_boost, random_direction, random_rotation, random_transform, LorentzTransform,
    METRIC_TOLERANCE,
};
pub use spinor::SpinorMap;
pub use wigner::{wigner_d, wigner_rotation, Spin, WignerDMatrix, WignerRotation, UNITARITY_TOLERANCE};
pub(crate) use wigner::wigner_d_unchecked;
