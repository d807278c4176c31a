//! Seeded randomized property suites for kinematics and evolution.

use std::fmt::Write as _;

use nalgebra::Vector3;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::evolution::{compose_elements, evolve, poincare_transform, translate, ComplexMass, TranslationMode};
use crate::kinematics::{
    random_direction, random_transform, wigner_d, wigner_rotation, FourVector, LorentzTransform, Spin,
};
use crate::state::{gaussian_packet, norm_squared, QuadratureGrid, SpinWavefunction};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelfCheck {
    pub check: &'static str,
    pub samples: usize,
    pub max_defect: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl SelfCheck {
    fn new(check: &'static str, samples: usize, max_defect: f64, tolerance: f64) -> Self {
        SelfCheck {
            check,
            samples,
            max_defect,
            tolerance,
            passed: max_defect <= tolerance,
        }
    }
}

pub fn checks_to_csv(checks: &[SelfCheck]) -> String {
    let mut out = String::from("check,samples,max_defect,tolerance,passed\n");
    for c in checks {
        let _ = writeln!(out, "{},{},{:.16e},{:.16e},{}", c.check, c.samples, c.max_defect, c.tolerance, c.passed);
    }
    out
}

pub(crate) fn forward_translation<R: Rng>(rng: &mut R, max_t: f64, lightlike: bool) -> FourVector {
    let t = rng.gen_range(0.0..max_t);
    let r = if lightlike { t } else { t * rng.gen_range(0.0..=1.0) };
    FourVector::from_parts(t, random_direction(rng) * r)
}

fn random_state<R: Rng>(rng: &mut R, spin: Spin) -> SpinWavefunction {
    let w: Vec<Complex64> = (0..spin.dim())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let c = Vector3::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
    gaussian_packet(c, rng.gen_range(0.6..1.2), spin, &w).expect("valid packet parameters")
}

fn velocity<R: Rng>(rng: &mut R, r: f64) -> Vector3<f64> {
    Vector3::new(rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r))
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)
}

/// Runs all suites with one generator, so results depend only on `seed`.
pub fn run_selftest(seed: u64) -> Vec<SelfCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cm = ComplexMass { mass: 1.0, width: 0.2 };
    let f0 = gaussian_packet(Vector3::zeros(), 2.0, Spin::ZERO, &[Complex64::new(1.0, 0.0)]).expect("valid packet");
    let mut checks = Vec::new();

    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (t1, t2) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
        let u = velocity(&mut rng, 3.0);
        let two = evolve(&evolve(&f0, &cm, t2).unwrap(), &cm, t1).unwrap().eval(&u, 0);
        let one = evolve(&f0, &cm, t1 + t2).unwrap().eval(&u, 0);
        worst = worst.max((two - one).norm() / f0.eval(&u, 0).norm());
    }
    checks.push(SelfCheck::new("evolve_additivity", 100, worst, 1e-14));

    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a1 = forward_translation(&mut rng, 1.0, false);
        let a2 = forward_translation(&mut rng, 1.0, false);
        let u = velocity(&mut rng, 3.0);
        let inner = translate(&f0, &cm, &a2, TranslationMode::Checked).unwrap();
        let two = translate(&inner, &cm, &a1, TranslationMode::Checked).unwrap().eval(&u, 0);
        let one = translate(&f0, &cm, &(a1 + a2), TranslationMode::Checked).unwrap().eval(&u, 0);
        worst = worst.max((two - one).norm() / f0.eval(&u, 0).norm());
    }
    checks.push(SelfCheck::new("translate_additivity", 100, worst, 1e-14));

    let mut worst = 0.0f64;
    for twice in 0..=3 {
        let spin = Spin::from_twice(twice);
        let f = random_state(&mut rng, spin);
        for _ in 0..50 {
            let (l1, a1) = (random_transform(&mut rng, 1.0), forward_translation(&mut rng, 2.0, false));
            let (l2, a2) = (random_transform(&mut rng, 1.0), forward_translation(&mut rng, 2.0, false));
            let (l12, a12) = compose_elements((&l1, &a1), (&l2, &a2));
            let inner = poincare_transform(&f, &cm, &l2, &a2, TranslationMode::Checked).unwrap();
            let lhs = poincare_transform(&inner, &cm, &l1, &a1, TranslationMode::Checked).unwrap();
            let rhs = poincare_transform(&f, &cm, &l12, &a12, TranslationMode::Checked).unwrap();
            for _ in 0..4 {
                let u = velocity(&mut rng, 2.0);
                worst = worst.max(max_diff(&lhs.eval_all(&u), &rhs.eval_all(&u)));
            }
        }
    }
    checks.push(SelfCheck::new("composition_law", 200, worst, 1e-10));

    let (mut cocycle, mut unitarity, mut homomorphism) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let l1 = random_transform(&mut rng, 1.5);
        let l2 = random_transform(&mut rng, 1.5);
        let u = velocity(&mut rng, 3.0);
        let w12 = wigner_rotation(&(l1 * l2), &u);
        let w1 = wigner_rotation(&l1, &l2.apply_velocity(&u));
        let w2 = wigner_rotation(&l2, &u);
        cocycle = cocycle.max((w12.spinor.matrix() - (w1.spinor * w2.spinor).matrix()).norm());
        for twice in 0..=3 {
            let spin = Spin::from_twice(twice);
            let (d1, d2, d12) = match (
                wigner_d(spin, &w1.spinor),
                wigner_d(spin, &w2.spinor),
                wigner_d(spin, &w12.spinor),
            ) {
                (Ok(a), Ok(b), Ok(c)) => (a, b, c),
                _ => {
                    unitarity = f64::INFINITY;
                    continue;
                }
            };
            unitarity = unitarity.max(d1.unitarity_defect()).max(d12.unitarity_defect());
            let dev = (&d12.d - &d1.d * &d2.d).iter().map(|z| z.norm()).fold(0.0, f64::max);
            homomorphism = homomorphism.max(dev);
        }
    }
    checks.push(SelfCheck::new("wigner_cocycle", 100, cocycle, 1e-10));
    checks.push(SelfCheck::new("wigner_d_unitarity", 400, unitarity, 1e-10));
    checks.push(SelfCheck::new("wigner_d_homomorphism", 400, homomorphism, 1e-10));

    let full_turn = LorentzTransform::rotation(&random_direction(&mut rng), std::f64::consts::TAU);
    let d = wigner_d(Spin::HALF, full_turn.spinor()).map(|d| d.d);
    let turn_defect = d.map_or(f64::INFINITY, |d| {
        (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| (d[(i, j)] + if i == j { 1.0 } else { 0.0 }).norm())
            .fold(0.0, f64::max)
    });
    checks.push(SelfCheck::new("two_pi_rotation_half_spin", 1, turn_defect, 1e-12));

    let grid = QuadratureGrid::three_d(8.0, 16).expect("valid grid");
    let mut contraction = 0.0f64;
    for _ in 0..5 {
        let f = random_state(&mut rng, Spin::ZERO);
        let n0 = norm_squared(&f, &grid).sqrt();
        for i in 0..40 {
            let a = forward_translation(&mut rng, 3.0, i < 4);
            let g = translate(&f, &cm, &a, TranslationMode::Checked).unwrap();
            contraction = contraction.max(norm_squared(&g, &grid).sqrt() / n0 - 1.0);
        }
    }
    checks.push(SelfCheck::new("forward_cone_contraction", 200, contraction.max(0.0), 1e-10));

    let f = random_state(&mut rng, Spin::ZERO);
    let n0 = norm_squared(&f, &grid).sqrt();
    let decay = [0.1, 1.0, 10.0]
        .iter()
        .map(|&t| {
            let n = norm_squared(&evolve(&f, &cm, t).unwrap(), &grid).sqrt();
            n / (n0 * (-cm.width * t / 2.0).exp()) - 1.0
        })
        .fold(0.0, f64::max);
    checks.push(SelfCheck::new("decay_bound", 3, decay.max(0.0), 1e-12));
    checks
}
