//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use nalgebra::Vector3;
use num_complex::Complex64;
use quasistable::analysis::{
    analytic_strip, cauchy_riemann_study, complex_expectation, cutoff_divergence, dichotomy_probe,
    expectation_series, norm_growth_scan, reflection_defect, sampled_bounds, spectral_bounds, tails_probe,
    DichotomyVerdict, ExpectationSeries, Interval, Observable, SpectrumDescriptor, DEFAULT_ZERO_EPS,
};
use quasistable::evolution::{
    compose_elements, evolve, poincare_transform, stable_transform, translate, ComplexMass, SpectrumRay,
    TranslationMode,
};
use quasistable::kinematics::{
    random_direction, random_transform, wigner_d, wigner_rotation, FourVector, LorentzTransform, Spin,
};
use quasistable::runner::{self, RunOptions};
use quasistable::state::{gaussian_packet, norm_squared, normalize, position_bump_1d, QuadratureGrid, SpinWavefunction};
use quasistable::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let e = start.elapsed();
    (e < limit, format!("{:.2}s (limit {}s)", e.as_secs_f64(), limit.as_secs()))
}

fn forward<R: Rng>(rng: &mut R, max_t: f64, lightlike: bool) -> FourVector {
    let t = rng.gen_range(0.0..max_t);
    let r = if lightlike { t } else { t * rng.gen_range(0.0..=1.0) };
    FourVector::from_parts(t, random_direction(rng) * r)
}

fn random_state<R: Rng>(rng: &mut R, spin: Spin) -> SpinWavefunction {
    let w: Vec<Complex64> = (0..spin.dim())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let c = Vector3::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
    gaussian_packet(c, rng.gen_range(0.6..1.2), spin, &w).unwrap()
}

fn velocity<R: Rng>(rng: &mut R, r: f64) -> Vector3<f64> {
    Vector3::new(rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r))
}

fn one() -> Vec<Complex64> {
    vec![Complex64::new(1.0, 0.0)]
}

fn strip_bounds() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut sentinel = true;
    for (m, g) in [(1.0, 0.2), (1.0, 2.0), (5.0, 0.5)] {
        let cm = ComplexMass::new(m, g).unwrap();
        let b = spectral_bounds(&SpectrumDescriptor::ClosedFormRay(cm));
        let s = sampled_bounds(&SpectrumRay::new(cm).sample(2000, 1e6));
        for v in [b.k0 + g / 2.0, b.k2 - g / (2.0 * m), s.k0 + g / 2.0, s.k2 - g / (2.0 * m)] {
            worst = worst.max(v.abs());
        }
        sentinel &= b.k1 == f64::NEG_INFINITY && b.k1_from_empty_set && s.k1 == f64::NEG_INFINITY && s.k1_from_empty_set;
    }
    let (fast, t) = within(Duration::from_secs(1), start);
    outcome(
        worst <= 1e-12 && sentinel && fast,
        format!("max |k - closed form| = {worst:.2e}, k1 sentinel = {sentinel}, {t}"),
    )
}

fn semigroup_laws() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cm = ComplexMass::new(1.0, 0.2).unwrap();
    let f = gaussian_packet(Vector3::zeros(), 2.0, Spin::ZERO, &one()).unwrap();
    let (mut ev, mut tr) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let (t1, t2) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0));
        let u = velocity(&mut rng, 3.0);
        let scale = f.eval(&u, 0).norm();
        let two = evolve(&evolve(&f, &cm, t2).unwrap(), &cm, t1).unwrap().eval(&u, 0);
        ev = ev.max((two - evolve(&f, &cm, t1 + t2).unwrap().eval(&u, 0)).norm() / scale);
        let (a1, a2) = (forward(&mut rng, 1.0, false), forward(&mut rng, 1.0, false));
        let inner = translate(&f, &cm, &a2, TranslationMode::Checked).unwrap();
        let two = translate(&inner, &cm, &a1, TranslationMode::Checked).unwrap().eval(&u, 0);
        let one = translate(&f, &cm, &(a1 + a2), TranslationMode::Checked).unwrap().eval(&u, 0);
        tr = tr.max((two - one).norm() / scale);
    }
    let mut comp = 0.0f64;
    let g = random_state(&mut rng, Spin::from_twice(1));
    for _ in 0..50 {
        let (l1, a1) = (random_transform(&mut rng, 1.0), forward(&mut rng, 2.0, false));
        let (l2, a2) = (random_transform(&mut rng, 1.0), forward(&mut rng, 2.0, false));
        let (l12, a12) = compose_elements((&l1, &a1), (&l2, &a2));
        let inner = poincare_transform(&g, &cm, &l2, &a2, TranslationMode::Checked).unwrap();
        let lhs = poincare_transform(&inner, &cm, &l1, &a1, TranslationMode::Checked).unwrap();
        let rhs = poincare_transform(&g, &cm, &l12, &a12, TranslationMode::Checked).unwrap();
        for _ in 0..10 {
            let u = velocity(&mut rng, 2.0);
            for (p, q) in lhs.eval_all(&u).iter().zip(rhs.eval_all(&u)) {
                comp = comp.max((p - q).norm());
            }
        }
    }
    let (fast, t) = within(Duration::from_secs(10), start);
    outcome(
        ev <= 1e-14 && tr <= 1e-14 && comp <= 1e-10 && fast,
        format!("evolve {ev:.2e}, translate {tr:.2e} (relative), composition {comp:.2e}, {t}"),
    )
}

fn contraction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cm = ComplexMass::new(1.0, 0.2).unwrap();
    let grid = QuadratureGrid::three_d(8.0, 16).unwrap();
    let mut worst = f64::NEG_INFINITY;
    let mut decay = f64::NEG_INFINITY;
    for s in 0..5 {
        let state = normalize(&random_state(&mut rng, Spin::from_twice(s % 3)), &grid).unwrap();
        let n0 = norm_squared(&state.wavefunction, &grid).sqrt();
        for i in 0..200 {
            let a = forward(&mut rng, 4.0, i < 20);
            let g = translate(&state.wavefunction, &cm, &a, TranslationMode::Checked).unwrap();
            worst = worst.max(norm_squared(&g, &grid).sqrt() / n0 - 1.0);
        }
        for t in [0.1, 1.0, 10.0] {
            let n = norm_squared(&evolve(&state.wavefunction, &cm, t).unwrap(), &grid).sqrt();
            decay = decay.max(n / (n0 * (-cm.width * t / 2.0).exp()) - 1.0);
        }
    }
    outcome(
        worst <= 1e-10 && decay <= 1e-12,
        format!("max ‖U(a)f‖/‖f‖ - 1 = {worst:.2e} over 1000 forward points, max decay excess {decay:.2e}"),
    )
}

fn stable_limit() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = gaussian_packet(Vector3::new(0.0, 0.0, 0.3), 0.7, Spin::ZERO, &one()).unwrap();
    let elements: Vec<(LorentzTransform, FourVector)> = (0..20)
        .map(|_| {
            let b = LorentzTransform::boost_rapidity(&Vector3::z(), rng.gen_range(-1.0..1.0));
            let r = LorentzTransform::rotation(&Vector3::z(), rng.gen_range(0.0..std::f64::consts::TAU));
            (b * r, FourVector::new(rng.gen_range(-3.0..3.0), 0.0, 0.0, rng.gen_range(-3.0..3.0)))
        })
        .collect();
    let drifts: Vec<f64> = [16, 32, 64]
        .iter()
        .map(|&n| {
            let grid = QuadratureGrid::one_d(8.0, n).unwrap();
            let n0 = norm_squared(&f, &grid);
            elements
                .iter()
                .map(|(l, a)| (norm_squared(&stable_transform(&f, 1.0, l, a).unwrap(), &grid) - n0).abs() / n0)
                .fold(0.0, f64::max)
        })
        .collect();
    let monotone = drifts.windows(2).all(|w| w[1] < w[0]);
    outcome(
        monotone && drifts[2] < 1e-6,
        format!("max relative drift n=16/32/64: {:.2e} / {:.2e} / {:.2e}", drifts[0], drifts[1], drifts[2]),
    )
}

fn wigner_machinery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut cocycle, mut unitary, mut hom) = (0.0f64, 0.0f64, 0.0f64);
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
            let d1 = wigner_d(spin, &w1.spinor).unwrap();
            let d2 = wigner_d(spin, &w2.spinor).unwrap();
            let d12 = wigner_d(spin, &w12.spinor).unwrap();
            unitary = unitary.max(d1.unitarity_defect()).max(d2.unitarity_defect()).max(d12.unitarity_defect());
            hom = hom.max((&d12.d - &d1.d * &d2.d).iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    let turn = LorentzTransform::rotation(&random_direction(&mut rng), std::f64::consts::TAU);
    let d = wigner_d(Spin::HALF, turn.spinor()).unwrap().d;
    let minus_one = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| (d[(i, j)] + if i == j { 1.0 } else { 0.0 }).norm())
        .fold(0.0, f64::max);
    outcome(
        cocycle <= 1e-10 && unitary <= 1e-10 && hom <= 1e-10 && minus_one <= 1e-12,
        format!("cocycle {cocycle:.2e}, unitarity {unitary:.2e}, homomorphism {hom:.2e}, D(2π)+1 {minus_one:.2e}"),
    )
}

fn analyticity() -> Outcome {
    let start = Instant::now();
    let cm = ComplexMass::new(1.0, 0.2).unwrap();
    let grid = QuadratureGrid::one_d(8.0, 64).unwrap();
    let f = gaussian_packet(Vector3::new(0.0, 0.0, 0.4), 1.0, Spin::ZERO, &one()).unwrap();
    let state = normalize(&f, &grid).unwrap();
    let a = Observable::position_projector(-0.5, 1.5, 1.0).unwrap();
    let strip = analytic_strip(&spectral_bounds(&SpectrumDescriptor::ClosedFormRay(cm))).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let z = Complex64::new(rng.gen_range(1.0..5.0), rng.gen_range(-0.999..0.999) * strip.half_width);
        worst = worst.max(reflection_defect(&state, &a, &cm, &strip, z).unwrap());
    }
    let study = cauchy_riemann_study(&state, &a, &cm, &strip, Complex64::new(2.0, 0.03), &[1e-2, 5e-3, 2.5e-3]).unwrap();
    let p = complex_expectation(&state, &a, &cm, &strip, Complex64::new(2.0, 0.0)).unwrap();
    let series = expectation_series(&state, &a, &cm, &[2.0]).unwrap();
    let real_axis = (p.re - series.values[0]).abs() + p.im.abs();
    let (fast, t) = within(Duration::from_secs(30), start);
    outcome(
        worst <= 1e-12 && study.min_order() >= 1.8 && real_axis <= 1e-12 && fast,
        format!(
            "reflection {worst:.2e}, CR residuals {:?}, orders {:?}, real-axis match {real_axis:.1e}, {t}",
            study.residuals.iter().map(|r| format!("{r:.2e}")).collect::<Vec<_>>(),
            study.observed_orders.iter().map(|o| format!("{o:.3}")).collect::<Vec<_>>()
        ),
    )
}

fn dichotomy() -> Outcome {
    let grid_t = |n: usize, end: f64| -> Vec<f64> { (0..n).map(|i| end * i as f64 / (n - 1) as f64).collect() };
    let t = grid_t(1000, 10.0);
    let osc = ExpectationSeries::synthetic(t.clone(), t.iter().map(|&t| (-t).exp() * t.cos().powi(2)).collect());
    let zero = ExpectationSeries::synthetic(t.clone(), vec![0.0; t.len()]);
    let t2 = grid_t(401, 2.0);
    let plateau = ExpectationSeries::synthetic(t2.clone(), t2.iter().map(|&t| (1.0 - t).max(0.0)).collect());
    let v_osc = dichotomy_probe(&osc, DEFAULT_ZERO_EPS).verdict;
    let v_zero = dichotomy_probe(&zero, DEFAULT_ZERO_EPS).verdict;
    let v_plat = dichotomy_probe(&plateau, DEFAULT_ZERO_EPS).verdict;
    let cm = ComplexMass::new(1.0, 0.2).unwrap();
    let grid = QuadratureGrid::one_d(8.0, 64).unwrap();
    let f = gaussian_packet(Vector3::new(0.0, 0.0, 0.4), 1.0, Spin::ZERO, &one()).unwrap();
    let state = normalize(&f, &grid).unwrap();
    let a = Observable::position_projector(-1.0, 1.0, 1.0).unwrap();
    let physical = expectation_series(&state, &a, &cm, &grid_t(2000, 20.0)).unwrap();
    let v_phys = dichotomy_probe(&physical, DEFAULT_ZERO_EPS).verdict;
    outcome(
        v_osc == DichotomyVerdict::AlmostNeverZero
            && v_zero == DichotomyVerdict::IdenticallyZero
            && v_plat == DichotomyVerdict::Inconclusive
            && v_phys == DichotomyVerdict::AlmostNeverZero,
        format!("e^-t cos^2 t: {v_osc:?}, zero: {v_zero:?}, plateau: {v_plat:?}, N([-1,1]) on Gaussian (2000 pts): {v_phys:?}"),
    )
}

fn causality_scans() -> Outcome {
    let cm = ComplexMass::new(1.0, 0.2).unwrap();
    let grid = QuadratureGrid::three_d(8.0, 24).unwrap();
    let f = gaussian_packet(Vector3::new(0.2, 0.0, 0.4), 1.0, Spin::ZERO, &one()).unwrap();
    let state = normalize(&f, &grid).unwrap();
    let xs = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0];
    let scan = norm_growth_scan(&state.wavefunction, &grid, &cm, &Vector3::x(), 2.0, &xs, 1e6).unwrap();
    let reference = scan.report.reference_norm;
    let forward_ok = scan.report.forward_points().all(|p| p.value <= reference * (1.0 + 1e-10));
    let cutoff = cutoff_divergence(&state.wavefunction, &grid, &cm, &Vector3::x(), 2.0, &xs, &[4.0, 8.0, 16.0]).unwrap();
    outcome(
        scan.spacelike_monotone
            && scan.first_exceedance.is_some()
            && forward_ok
            && cutoff.values_increasing()
            && cutoff.rates_increasing(),
        format!(
            "monotone {}, exceeds 1e6‖f‖² at x = {:?}, forward ≤ ‖f‖² {forward_ok}, rates at u_max 4/8/16: {:?}",
            scan.spacelike_monotone,
            scan.first_exceedance,
            cutoff.rates.iter().map(|r| r.map(|r| format!("{r:.3}"))).collect::<Vec<_>>()
        ),
    )
}

fn tails() -> Outcome {
    let start = Instant::now();
    let cm = ComplexMass::new(1.0, 0.2).unwrap();
    let grid = QuadratureGrid::one_d(110.0, 2048).unwrap();
    let f0 = position_bump_1d(0.0, 1.0, 1.0).unwrap();
    let v = Interval::new(-1.0, 1.0).unwrap();
    let report = tails_probe(&f0, &grid, &cm, &v, &[0.01, 0.05, 0.1]).unwrap();
    let rejected = matches!(tails_probe(&f0, &grid, &cm, &v, &[-0.01]), Err(Error::SemigroupDomain(_)));
    let all_above = report.samples.iter().all(|s| s.outside_probability > 1e-7);
    let (fast, t) = within(Duration::from_secs(60), start);
    outcome(
        report.initial_outside <= 1e-8 && all_above && rejected && fast,
        format!(
            "initial outside {:.2e}, outside at t=0.01/0.05/0.1: {:?}, t<0 rejected {rejected}, {t}",
            report.initial_outside,
            report.samples.iter().map(|s| format!("{:.2e}", s.outside_probability)).collect::<Vec<_>>()
        ),
    )
}

fn determinism() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut names: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    names.sort();
    let mut mismatched = Vec::new();
    for path in &names {
        let cfg = runner::validate(&std::fs::read_to_string(path).unwrap()).unwrap();
        let csv: Vec<Vec<u8>> = (0..2)
            .map(|_| {
                let out = tempfile::tempdir().unwrap();
                let options = RunOptions {
                    out_dir: Some(out.path().to_path_buf()),
                    threads: None,
                    deterministic: true,
                };
                runner::run(&cfg, &options).unwrap();
                std::fs::read(out.path().join(format!("{}.csv", cfg.name()))).unwrap()
            })
            .collect();
        if csv[0] != csv[1] {
            mismatched.push(path.file_name().unwrap().to_string_lossy().into_owned());
        }
    }
    outcome(
        mismatched.is_empty() && !names.is_empty(),
        format!("{} configs re-run under --deterministic, mismatched: {mismatched:?}", names.len()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("strip bounds", strip_bounds),
        ("semigroup laws", semigroup_laws),
        ("contraction", contraction),
        ("stable limit", stable_limit),
        ("Wigner machinery", wigner_machinery),
        ("analyticity diagnostics", analyticity),
        ("dichotomy probe", dichotomy),
        ("causality scans", causality_scans),
        ("tails probe", tails),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<24} {}  {}",
            i + 1,
            name,
            if result.passed { "PASS" } else { "FAIL" },
            result.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
