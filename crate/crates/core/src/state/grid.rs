use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::velocity_u0;

pub const DEFAULT_U_MAX: f64 = 8.0;
pub const DEFAULT_N: usize = 64;
/// Points per axis used by 3-D lattice scans.
pub const DEFAULT_N_3D_SCAN: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridMode {
    /// Velocities restricted to the `u_z` axis, measure `du / (2 u0)`.
    OneDReduced,
    /// Full `d³u / (2 u0)` on the ball `|u| <= u_max`.
    ThreeD,
}

/// Reproducible description of a quadrature grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub mode: GridMode,
    #[serde(default = "default_u_max")]
    pub u_max: f64,
    #[serde(default = "default_n")]
    pub n: usize,
}

fn default_u_max() -> f64 {
    DEFAULT_U_MAX
}

fn default_n() -> usize {
    DEFAULT_N
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            mode: GridMode::OneDReduced,
            u_max: DEFAULT_U_MAX,
            n: DEFAULT_N,
        }
    }
}

/// Tensor-product midpoint rule for the invariant measure.
///
/// The `1/(2 u0)` factor is folded into the weights.
#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    spec: GridSpec,
    step: f64,
    nodes: Vec<Vector3<f64>>,
    weights: Vec<f64>,
    u0: Vec<f64>,
}

impl QuadratureGrid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        if !(spec.u_max.is_finite() && spec.u_max > 0.0) {
            return Err(Error::param("grid.u_max", format!("must be positive, got {}", spec.u_max)));
        }
        if spec.n == 0 {
            return Err(Error::param("grid.n", "must be at least 1"));
        }
        let step = 2.0 * spec.u_max / spec.n as f64;
        let axis: Vec<f64> = (0..spec.n)
            .map(|i| -spec.u_max + (i as f64 + 0.5) * step)
            .collect();
        let mut nodes = Vec::new();
        let cell = match spec.mode {
            GridMode::OneDReduced => {
                nodes.extend(axis.iter().map(|&u| Vector3::new(0.0, 0.0, u)));
                step
            }
            GridMode::ThreeD => {
                for &x in &axis {
                    for &y in &axis {
                        for &z in &axis {
                            let u = Vector3::new(x, y, z);
                            if u.norm() <= spec.u_max {
                                nodes.push(u);
                            }
                        }
                    }
                }
                step * step * step
            }
        };
        if nodes.is_empty() {
            return Err(Error::param("grid.n", "grid contains no nodes inside the cutoff ball"));
        }
        let u0: Vec<f64> = nodes.iter().map(velocity_u0).collect();
        let weights = u0.iter().map(|&u0| cell / (2.0 * u0)).collect();
        Ok(QuadratureGrid {
            spec,
            step,
            nodes,
            weights,
            u0,
        })
    }

    pub fn one_d(u_max: f64, n: usize) -> Result<Self> {
        Self::new(GridSpec {
            mode: GridMode::OneDReduced,
            u_max,
            n,
        })
    }

    pub fn three_d(u_max: f64, n: usize) -> Result<Self> {
        Self::new(GridSpec {
            mode: GridMode::ThreeD,
            u_max,
            n,
        })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn mode(&self) -> GridMode {
        self.spec.mode
    }

    pub fn u_max(&self) -> f64 {
        self.spec.u_max
    }

    /// Spacing of the midpoint lattice along each axis.
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vector3<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `u0` at each node.
    pub fn energies(&self) -> &[f64] {
        &self.u0
    }
}
