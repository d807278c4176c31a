pub mod analysis;
pub mod error;
pub mod evolution;
pub mod kinematics;
pub mod runner;
pub mod state;
pub mod summation;

pub use error::{Error, Result};
