//! Bounded selfadjoint observables and their sesquilinear forms `⟨f, A g⟩`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::state::{
    amplitude_at, periodic_x_grid, position_coefficients, QuadratureGrid, SpinWavefunction,
};
use crate::summation::sum_complex;

/// Hermiticity tolerance for explicit grid matrices.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

type Multiplier = dyn Fn(&Vector3<f64>) -> f64 + Send + Sync;

/// A bounded selfadjoint operator on the velocity Hilbert space.
#[derive(Clone)]
pub enum Observable {
    /// Multiplication by a real function of `u⃗`, shared across spin components.
    VelocityMultiplier {
        label: String,
        multiplier: Arc<Multiplier>,
        /// `sup |a(u)|`
        bound: f64,
    },
    /// The 1-D position projector `N(V)` for `V = [x_lo, x_hi]`.
    ///
    /// Discretized on the `n`-point periodic position grid that is dual to
    /// an `n`-node reduced velocity grid. That transform is unitary, so the
    /// discrete projector is exactly idempotent.
    PositionProjector1D { x_lo: f64, x_hi: f64, mass: f64 },
    /// Hermitian matrix on `(node, spin)` pairs, flattened as
    /// `node * (2j+1) + k`, acting on `sqrt(w) f` so that it is selfadjoint
    /// for the weighted inner product.
    HermitianGridMatrix { matrix: DMatrix<Complex64> },
}

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::VelocityMultiplier { label, bound, .. } => {
                write!(f, "VelocityMultiplier({label}, bound={bound})")
            }
            Observable::PositionProjector1D { x_lo, x_hi, mass } => {
                write!(f, "PositionProjector1D([{x_lo}, {x_hi}], M={mass})")
            }
            Observable::HermitianGridMatrix { matrix } => {
                write!(f, "HermitianGridMatrix({}x{})", matrix.nrows(), matrix.ncols())
            }
        }
    }
}

impl Observable {
    pub fn velocity_multiplier<F>(label: impl Into<String>, bound: f64, multiplier: F) -> Self
    where
        F: Fn(&Vector3<f64>) -> f64 + Send + Sync + 'static,
    {
        Observable::VelocityMultiplier {
            label: label.into(),
            multiplier: Arc::new(multiplier),
            bound,
        }
    }

    pub fn identity() -> Self {
        Self::velocity_multiplier("identity", 1.0, |_| 1.0)
    }

    pub fn zero() -> Self {
        Self::velocity_multiplier("zero", 0.0, |_| 0.0)
    }

    /// Indicator of `|u⃗| < radius`, or of `|u⃗| >= radius` when `complement`.
    pub fn velocity_indicator(radius: f64, complement: bool) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::param("observable.radius", format!("must be positive, got {radius}")));
        }
        let label = if complement {
            format!("1[|u| >= {radius}]")
        } else {
            format!("1[|u| < {radius}]")
        };
        Ok(Self::velocity_multiplier(label, 1.0, move |u| {
            let inside = u.norm() < radius;
            if inside != complement {
                1.0
            } else {
                0.0
            }
        }))
    }

    pub fn position_projector(x_lo: f64, x_hi: f64, mass: f64) -> Result<Self> {
        if !(x_lo.is_finite() && x_hi.is_finite() && x_lo < x_hi) {
            return Err(Error::param("observable.interval", format!("need x_lo < x_hi, got [{x_lo}, {x_hi}]")));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::param("observable.mass", format!("must be positive, got {mass}")));
        }
        Ok(Observable::PositionProjector1D { x_lo, x_hi, mass })
    }

    pub fn hermitian_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::param("observable.matrix", "matrix must be square"));
        }
        let dev = (&matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if dev > HERMITIAN_TOLERANCE {
            return Err(Error::NotSelfAdjoint(dev));
        }
        Ok(Observable::HermitianGridMatrix { matrix })
    }

    /// A seeded random Hermitian matrix with entries of size `scale / dim`.
    pub fn random_hermitian(dim: usize, scale: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        let s = scale / dim.max(1) as f64;
        for i in 0..dim {
            m[(i, i)] = Complex64::new(rng.gen_range(-1.0..1.0) * s, 0.0);
            for j in i + 1..dim {
                let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * s;
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        Observable::HermitianGridMatrix { matrix: m }
    }

    /// Upper bound on the operator norm.
    pub fn norm_bound(&self) -> f64 {
        match self {
            Observable::VelocityMultiplier { bound, .. } => *bound,
            Observable::PositionProjector1D { .. } => 1.0,
            Observable::HermitianGridMatrix { matrix } => matrix.norm(),
        }
    }

    pub fn label(&self) -> String {
        format!("{self:?}")
    }

    /// `⟨f, A g⟩` on the grid.
    pub fn bilinear(&self, f: &SpinWavefunction, g: &SpinWavefunction, grid: &QuadratureGrid) -> Result<Complex64> {
        if f.spin() != g.spin() {
            return Err(Error::SpinMismatch {
                left: f.spin().twice(),
                right: g.spin().twice(),
            });
        }
        match self {
            Observable::VelocityMultiplier { multiplier, .. } => {
                let (nodes, weights) = (grid.nodes(), grid.weights());
                Ok(sum_complex(grid.len(), |i| {
                    let a = f.eval_all(&nodes[i]);
                    let b = g.eval_all(&nodes[i]);
                    let local = a.iter().zip(&b).fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y);
                    local * (weights[i] * multiplier(&nodes[i]))
                }))
            }
            Observable::PositionProjector1D { x_lo, x_hi, mass } => {
                let (xs, dx) = projector_nodes(grid, *mass, *x_lo, *x_hi);
                let cf = position_coefficients(f, grid, *mass)?;
                let cg = position_coefficients(g, grid, *mass)?;
                Ok(sum_complex(xs.len(), |i| {
                    amplitude_at(&cf, xs[i]).conj() * amplitude_at(&cg, xs[i])
                }) * dx)
            }
            Observable::HermitianGridMatrix { matrix } => {
                let dim = f.spin().dim();
                let size = grid.len() * dim;
                if matrix.nrows() != size {
                    return Err(Error::param(
                        "observable.matrix",
                        format!("matrix is {}x{} but the grid needs {size}", matrix.nrows(), matrix.ncols()),
                    ));
                }
                let sample = |w: &SpinWavefunction| -> Vec<Complex64> {
                    grid.nodes()
                        .iter()
                        .zip(grid.weights())
                        .flat_map(|(u, &wt)| {
                            let s = wt.sqrt();
                            w.eval_all(u).into_iter().map(move |z| z * s)
                        })
                        .collect()
                };
                let (vf, vg) = (sample(f), sample(g));
                Ok(sum_complex(size, |r| {
                    let row = matrix.row(r);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (c, z) in vg.iter().enumerate() {
                        acc += row[c] * z;
                    }
                    vf[r].conj() * acc
                }))
            }
        }
    }

    /// `⟨f, A f⟩`.
    pub fn expectation(&self, f: &SpinWavefunction, grid: &QuadratureGrid) -> Result<Complex64> {
        self.bilinear(f, f, grid)
    }

    /// `A g` as a lazily evaluable wavefunction. Explicit grid matrices have no
    /// off-grid extension and are rejected.
    pub fn apply(&self, g: &SpinWavefunction, grid: &QuadratureGrid) -> Result<SpinWavefunction> {
        match self {
            Observable::VelocityMultiplier { multiplier, label, .. } => {
                let m = multiplier.clone();
                Ok(g.multiplied(label, move |u| Complex64::new(m(u), 0.0)))
            }
            Observable::PositionProjector1D { x_lo, x_hi, mass } => {
                let (xs, dx) = projector_nodes(grid, *mass, *x_lo, *x_hi);
                let cg = position_coefficients(g, grid, *mass)?;
                let psi: Vec<(f64, Complex64)> = xs.iter().map(|&x| (x, amplitude_at(&cg, x))).collect();
                let mass = *mass;
                let scale = (mass / (2.0 * std::f64::consts::PI)).sqrt() * dx;
                let label = format!("N([{x_lo}, {x_hi}])∘{}", g.description());
                Ok(SpinWavefunction::new(g.spin(), label, move |u| {
                    let k = mass * u.z;
                    let mut acc = Complex64::new(0.0, 0.0);
                    for &(x, p) in &psi {
                        acc += p * Complex64::from_polar(1.0, -k * x);
                    }
                    let u0 = (1.0 + u.norm_squared()).sqrt();
                    vec![acc * scale * (2.0 * u0).sqrt()]
                }))
            }
            Observable::HermitianGridMatrix { .. } => Err(Error::param(
                "observable",
                "grid matrices act on sampled vectors only",
            )),
        }
    }
}

/// Periodic position nodes inside `[x_lo, x_hi]` and their spacing.
pub(crate) fn projector_nodes(grid: &QuadratureGrid, mass: f64, x_lo: f64, x_hi: f64) -> (Vec<f64>, f64) {
    let all = periodic_x_grid(grid, mass, grid.len());
    let dx = if all.len() > 1 { all[1] - all[0] } else { 0.0 };
    let inside = all.into_iter().filter(|&x| x >= x_lo && x <= x_hi).collect();
    (inside, dx)
}
