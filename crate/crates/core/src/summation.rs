//! Compensated, order-stable reductions.
//!
//! Sums are split into fixed-size chunks, each reduced with Neumaier's
//! algorithm, and the chunk totals are combined in index order. Chunk
//! boundaries do not depend on the thread count, so results are bit-for-bit
//! reproducible whether or not the reduction runs in parallel.

use num_complex::Complex64;
use rayon::prelude::*;

const CHUNK: usize = 2048;

#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn total(&self) -> Complex64 {
        Complex64::new(self.re.total(), self.im.total())
    }
}

/// `Σ_{i < n} term(i)` with compensated, deterministic reduction.
pub fn sum_complex<F>(n: usize, term: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync,
{
    let chunks: Vec<Complex64> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = ComplexSum::default();
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                acc.add(term(i));
            }
            acc.total()
        })
        .collect();
    let mut acc = ComplexSum::default();
    for z in chunks {
        acc.add(z);
    }
    acc.total()
}

/// Real counterpart of [`sum_complex`].
pub fn sum_real<F>(n: usize, term: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    sum_complex(n, |i| Complex64::new(term(i), 0.0)).re
}
