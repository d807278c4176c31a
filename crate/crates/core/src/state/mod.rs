//! Four-velocity wavefunctions, the invariant measure, and canonical states.

mod grid;
mod inner;
mod position;
mod spec;
mod wavefunction;

pub use grid::{GridMode, GridSpec, QuadratureGrid, DEFAULT_N, DEFAULT_N_3D_SCAN, DEFAULT_U_MAX};
pub use inner::{inner_product, norm_squared, normalize, NormalizedState, NORMALIZATION_TOLERANCE};
pub use position::{
    periodic_x_grid, position_amplitudes_1d, position_density_1d, position_period, trapezoid,
};
#[allow(unused_imports)]
pub(crate) use position::{amplitude_at, position_coefficients};
pub use spec::StateSpec;
pub use wavefunction::{bump, gaussian_packet, position_bump_1d, velocity_bump, SpinWavefunction};
