//! Batch experiments: config in, CSV + JSON summary + manifest out.

mod config;
mod selftest;
mod validate;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use nalgebra::Vector3;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

pub use config::{Experiment, ExperimentConfig, ObservableSpec, Schedule, Tolerances, MAX_MATRIX_DIM};
pub use selftest::{checks_to_csv, run_selftest, SelfCheck};
pub use validate::{validate, ConfigError, MAX_N_3D};

use crate::analysis::{
    analytic_strip, cauchy_riemann_study, complex_expectation, cutoff_divergence, dichotomy_probe,
    expectation_series_with_eps, lattice_scan, cone_lattice, norm_growth_scan, reflection_defect, sampled_bounds,
    spectral_bounds, tails_probe, DichotomyVerdict, Interval, Observable, ScanQuantity, SpectrumDescriptor,
};
use crate::error::Error;
use crate::evolution::{evolve, SpectrumRay};
use crate::state::{norm_squared, normalize, QuadratureGrid};

/// Environment variable that overrides the default output directory.
pub const OUT_DIR_ENV: &str = "QUASISTABLE_OUT";
pub const DEFAULT_OUT_DIR: &str = "out";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Explicit output directory; falls back to `$QUASISTABLE_OUT`, then `out`.
    pub out_dir: Option<PathBuf>,
    pub threads: Option<usize>,
    /// Run on a single worker thread. Reductions are compensated and ordered
    /// in every mode, so this only removes scheduling from the picture.
    pub deterministic: bool,
}

impl RunOptions {
    pub fn resolve_out_dir(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub artifact: &'static str,
    pub version: &'static str,
    pub experiment: &'static str,
    pub name: String,
    pub config: ExperimentConfig,
    pub deterministic: bool,
    pub threads: Option<usize>,
    pub started_unix_seconds: f64,
    pub elapsed_seconds: f64,
    pub outputs: Vec<String>,
    pub verdict: String,
    pub exit_code: i32,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    pub summary: Value,
    pub csv: String,
    pub exit_code: i32,
}

/// Result of one experiment before anything is written.
pub struct ExperimentOutput {
    pub csv: String,
    pub summary: Value,
    pub verdict: String,
    pub exit_code: i32,
}

fn fmt_real(out: &mut String, x: f64) {
    let _ = write!(out, "{x:.16e}");
}

fn csv_rows<const N: usize>(header: &str, rows: impl IntoIterator<Item = [f64; N]>) -> String {
    let mut out = format!("{header}\n");
    for row in rows {
        for (i, x) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            fmt_real(&mut out, *x);
        }
        out.push('\n');
    }
    out
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn schedule_times(cfg: &ExperimentConfig) -> crate::Result<Vec<f64>> {
    cfg.schedule
        .as_ref()
        .and_then(Schedule::times)
        .ok_or_else(|| Error::param("schedule", "a t_grid or times schedule is required"))
}

fn observable(cfg: &ExperimentConfig, grid: &QuadratureGrid) -> crate::Result<Observable> {
    match &cfg.observable {
        Some(spec) => spec.build(grid, cfg.spin()?, cfg.complex_mass.mass),
        None => Ok(Observable::identity()),
    }
}

fn spectrum_check(cfg: &ExperimentConfig) -> crate::Result<ExperimentOutput> {
    let cm = cfg.complex_mass;
    if let Some(Schedule::Spectrum { points }) = &cfg.schedule {
        let pts: Vec<Complex64> = points.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        let bounds = spectral_bounds(&SpectrumDescriptor::SampledSet(pts.clone()));
        let csv = csv_rows("lambda_re,lambda_im", pts.iter().map(|z| [z.re, z.im]));
        let verdict = to_value(&bounds.verdict).as_str().unwrap_or_default().to_string();
        return Ok(ExperimentOutput {
            csv,
            summary: json!({ "source": "sampled_set", "bounds": bounds }),
            verdict,
            exit_code: EXIT_OK,
        });
    }
    let cm = crate::evolution::ComplexMass::new(cm.mass, cm.width)?;
    let bounds = spectral_bounds(&SpectrumDescriptor::ClosedFormRay(cm));
    let samples = SpectrumRay::new(cm).sample(1000, 1e6);
    let sampled = sampled_bounds(&samples);
    let deviation = |a: f64, b: f64| {
        if a == b {
            0.0
        } else {
            (a - b).abs()
        }
    };
    let max_deviation = deviation(bounds.k0, sampled.k0)
        .max(deviation(bounds.k1, sampled.k1))
        .max(deviation(bounds.k2, sampled.k2));
    let agrees = max_deviation <= cfg.tolerances.bounds_agreement;
    let csv = csv_rows("lambda_re,lambda_im", samples.iter().map(|z| [z.re, z.im]));
    let verdict = to_value(&bounds.verdict).as_str().unwrap_or_default().to_string();
    Ok(ExperimentOutput {
        csv,
        summary: json!({
            "source": "closed_form_ray",
            "bounds": bounds,
            "sampled_bounds": sampled,
            "sample_u0_range": [1.0, 1e6],
            "sample_count": samples.len(),
            "max_deviation": max_deviation,
            "tolerance": cfg.tolerances.bounds_agreement,
            "closed_form_matches_samples": agrees,
        }),
        verdict,
        exit_code: EXIT_OK,
    })
}

fn evolve_experiment(cfg: &ExperimentConfig, grid: &QuadratureGrid) -> crate::Result<ExperimentOutput> {
    let times = schedule_times(cfg)?;
    if let Some(&t) = times.iter().find(|&&t| !(t >= 0.0)) {
        return Err(Error::SemigroupDomain(t));
    }
    let state = normalize(&cfg.state.build(cfg.spin()?, cfg.complex_mass.mass)?, grid)?;
    let a = observable(cfg, grid)?;
    let cm = cfg.complex_mass;
    let rows: Vec<[f64; 3]> = times
        .par_iter()
        .map(|&t| {
            let psi = evolve(&state.wavefunction, &cm, t)?;
            let n = norm_squared(&psi, grid);
            let p = a.expectation(&psi, grid)?;
            Ok([t, n, p.re])
        })
        .collect::<crate::Result<_>>()?;
    let n0 = norm_squared(&state.wavefunction, grid);
    let worst = rows
        .iter()
        .map(|r| r[1] / (n0 * (-cm.width * r[0]).exp()) - 1.0)
        .fold(0.0, f64::max);
    let holds = worst <= cfg.tolerances.contraction;
    Ok(ExperimentOutput {
        csv: csv_rows("t,norm_squared,expectation", rows),
        summary: json!({
            "initial_norm_squared": n0,
            "norm_residual": state.norm_residual,
            "observable": a.label(),
            "decay_bound_excess": worst,
            "decay_bound_holds": holds,
        }),
        verdict: if holds { "decay_bound_holds" } else { "decay_bound_violated" }.into(),
        exit_code: EXIT_OK,
    })
}

fn dichotomy_experiment(cfg: &ExperimentConfig, grid: &QuadratureGrid) -> crate::Result<ExperimentOutput> {
    let times = schedule_times(cfg)?;
    let state = normalize(&cfg.state.build(cfg.spin()?, cfg.complex_mass.mass)?, grid)?;
    let a = observable(cfg, grid)?;
    let series = expectation_series_with_eps(&state, &a, &cfg.complex_mass, &times, cfg.tolerances.zero_eps)?;
    let report = dichotomy_probe(&series, cfg.tolerances.zero_eps);
    let csv = csv_rows("t,value", series.t_grid.iter().zip(&series.values).map(|(&t, &v)| [t, v]));
    let verdict = to_value(&report.verdict).as_str().unwrap_or_default().to_string();
    Ok(ExperimentOutput {
        csv,
        summary: json!({
            "observable": a.label(),
            "report": report,
            "zero_report": series.zero_report,
            "reference_scale": series.reference_scale(),
            "max_relative_imag": series.max_relative_imag,
            "eps": cfg.tolerances.zero_eps,
        }),
        verdict,
        exit_code: if report.verdict == DichotomyVerdict::Inconclusive {
            EXIT_INCONCLUSIVE
        } else {
            EXIT_OK
        },
    })
}

fn strip_experiment(cfg: &ExperimentConfig, grid: &QuadratureGrid) -> crate::Result<ExperimentOutput> {
    let Some(Schedule::Strip { re_values, im_fractions, cr_steps }) = &cfg.schedule else {
        return Err(Error::param("schedule", "a strip schedule is required"));
    };
    let cm = cfg.complex_mass;
    let bounds = spectral_bounds(&SpectrumDescriptor::ClosedFormRay(cm));
    let strip = analytic_strip(&bounds)?;
    let k = strip.half_width;
    let state = normalize(&cfg.state.build(cfg.spin()?, cm.mass)?, grid)?;
    let a = observable(cfg, grid)?;
    let points: Vec<Complex64> = re_values
        .iter()
        .flat_map(|&re| im_fractions.iter().map(move |&fr| Complex64::new(re, fr * k)))
        .collect();
    let rows: Vec<[f64; 5]> = points
        .par_iter()
        .map(|&z| {
            let p = complex_expectation(&state, &a, &cm, &strip, z)?;
            let d = reflection_defect(&state, &a, &cm, &strip, z)?;
            Ok([z.re, z.im, p.re, p.im, d])
        })
        .collect::<crate::Result<_>>()?;
    let max_reflection = rows.iter().map(|r| r[4]).fold(0.0, f64::max);
    let h_max = cr_steps.iter().copied().fold(0.0, f64::max);
    let z_cr = Complex64::new(re_values[0], 0.25 * k);
    let study = if 0.25 * k + h_max <= k && h_max < re_values[0] {
        Some(cauchy_riemann_study(&state, &a, &cm, &strip, z_cr, cr_steps)?)
    } else {
        None
    };
    let min_order = study.as_ref().map(|s| s.min_order());
    let passed = max_reflection <= cfg.tolerances.reflection
        && min_order.is_none_or(|o| o >= cfg.tolerances.min_cr_order);
    Ok(ExperimentOutput {
        csv: csv_rows("re,im,p_re,p_im,reflection_defect", rows),
        summary: json!({
            "half_width": k,
            "observable": a.label(),
            "max_reflection_defect": max_reflection,
            "reflection_tolerance": cfg.tolerances.reflection,
            "cauchy_riemann_point": [z_cr.re, z_cr.im],
            "cauchy_riemann": study,
            "min_observed_order": min_order,
            "min_order_required": cfg.tolerances.min_cr_order,
            "passed": passed,
        }),
        verdict: if passed { "passed" } else { "failed" }.into(),
        exit_code: EXIT_OK,
    })
}

fn cone_experiment(cfg: &ExperimentConfig, grid: &QuadratureGrid) -> crate::Result<ExperimentOutput> {
    let Some(Schedule::Lattice { direction, t_values, x_values, quantity }) = &cfg.schedule else {
        return Err(Error::param("schedule", "a lattice schedule is required"));
    };
    let f = normalize(&cfg.state.build(cfg.spin()?, cfg.complex_mass.mass)?, grid)?;
    let a = observable(cfg, grid)?;
    let lattice = cone_lattice(&Vector3::from(*direction), t_values, x_values)?;
    let report = lattice_scan(&f.wavefunction, grid, &a, &cfg.complex_mass, &lattice, *quantity)?;
    let bound = match quantity {
        ScanQuantity::NormSquared => report.reference_norm,
        ScanQuantity::Expectation => a.norm_bound() * report.reference_norm,
        ScanQuantity::RenormalizedExpectation => a.norm_bound(),
    };
    let forward_max = report.forward_points().map(|p| p.value.abs()).fold(0.0, f64::max);
    let spacelike_max = report.spacelike_points().map(|p| p.value.abs()).fold(0.0, f64::max);
    let contraction = forward_max <= bound * (1.0 + cfg.tolerances.contraction);
    Ok(ExperimentOutput {
        csv: report.to_csv(),
        summary: json!({
            "quantity": report.quantity,
            "checked_mode": report.checked_mode,
            "reference_norm": report.reference_norm,
            "points": report.points.len(),
            "forward_points": report.forward_points().count(),
            "spacelike_points": report.spacelike_points().count(),
            "forward_max": forward_max,
            "forward_bound": bound,
            "spacelike_max": spacelike_max,
            "forward_bounded": contraction,
        }),
        verdict: if contraction { "forward_bounded" } else { "forward_bound_violated" }.into(),
        exit_code: EXIT_OK,
    })
}

fn growth_experiment(cfg: &ExperimentConfig, grid: &QuadratureGrid) -> crate::Result<ExperimentOutput> {
    let Some(Schedule::Ray { direction, t, x_values, target_factor, u_max_values }) = &cfg.schedule else {
        return Err(Error::param("schedule", "a ray schedule is required"));
    };
    let f = normalize(&cfg.state.build(cfg.spin()?, cfg.complex_mass.mass)?, grid)?;
    let dir = Vector3::from(*direction);
    let cm = cfg.complex_mass;
    let scan = norm_growth_scan(&f.wavefunction, grid, &cm, &dir, *t, x_values, *target_factor)?;
    let forward_ok = scan
        .report
        .forward_points()
        .all(|p| p.value <= scan.report.reference_norm * (1.0 + cfg.tolerances.contraction));
    let cutoff = match u_max_values {
        Some(us) => Some(cutoff_divergence(&f.wavefunction, grid, &cm, &dir, *t, x_values, us)?),
        None => None,
    };
    let blow_up = scan.first_exceedance.is_some() && scan.spacelike_monotone;
    let verdict = match (blow_up, forward_ok) {
        (true, true) => "spacelike_growth",
        (false, true) => "no_exceedance",
        _ => "forward_bound_violated",
    };
    Ok(ExperimentOutput {
        csv: scan.report.to_csv(),
        summary: json!({
            "direction": scan.direction,
            "t": scan.t,
            "target_factor": scan.target_factor,
            "reference_norm": scan.report.reference_norm,
            "first_exceedance": scan.first_exceedance,
            "spacelike_monotone": scan.spacelike_monotone,
            "fitted_rate": scan.fitted_rate,
            "forward_bounded": forward_ok,
            "checked_mode": scan.report.checked_mode,
            "cutoff_study": cutoff.as_ref().map(|c| json!({
                "study": c,
                "values_increasing": c.values_increasing(),
                "rates_increasing": c.rates_increasing(),
            })),
        }),
        verdict: verdict.into(),
        exit_code: EXIT_OK,
    })
}

fn tails_experiment(cfg: &ExperimentConfig, grid: &QuadratureGrid) -> crate::Result<ExperimentOutput> {
    let times = schedule_times(cfg)?;
    let Some(ObservableSpec::PositionProjector { x_lo, x_hi }) = cfg.observable else {
        return Err(Error::param("observable", "tails needs a position_projector observable for V"));
    };
    let v = Interval::new(x_lo, x_hi)?;
    let f0 = cfg.state.build(cfg.spin()?, cfg.complex_mass.mass)?;
    let report = tails_probe(&f0, grid, &cfg.complex_mass, &v, &times)?;
    let csv = csv_rows(
        "t,outside_probability,total_probability",
        report.samples.iter().map(|s| [s.t, s.outside_probability, s.total_probability]),
    );
    Ok(ExperimentOutput {
        csv,
        summary: to_value(&report),
        verdict: if report.tails_everywhere { "tails_present" } else { "tails_below_floor" }.into(),
        exit_code: EXIT_OK,
    })
}

fn selftest_experiment(cfg: &ExperimentConfig) -> ExperimentOutput {
    let checks = run_selftest(cfg.seed);
    let passed = checks.iter().all(|c| c.passed);
    ExperimentOutput {
        csv: checks_to_csv(&checks),
        summary: json!({ "seed": cfg.seed, "checks": checks, "passed": passed }),
        verdict: if passed { "passed" } else { "failed" }.into(),
        exit_code: if passed { EXIT_OK } else { EXIT_ERROR },
    }
}

/// Runs the experiment in memory.
pub fn execute(cfg: &ExperimentConfig) -> crate::Result<ExperimentOutput> {
    if cfg.experiment == Experiment::Selftest {
        return Ok(selftest_experiment(cfg));
    }
    if cfg.experiment == Experiment::SpectrumCheck {
        return spectrum_check(cfg);
    }
    let grid = QuadratureGrid::new(cfg.grid)?;
    match cfg.experiment {
        Experiment::Evolve => evolve_experiment(cfg, &grid),
        Experiment::Dichotomy => dichotomy_experiment(cfg, &grid),
        Experiment::StripDiagnostics => strip_experiment(cfg, &grid),
        Experiment::ConeScan => cone_experiment(cfg, &grid),
        Experiment::GrowthScan => growth_experiment(cfg, &grid),
        Experiment::Tails => tails_experiment(cfg, &grid),
        Experiment::SpectrumCheck | Experiment::Selftest => unreachable!("handled above"),
    }
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

/// Runs `cfg` and writes `<name>.csv`, `<name>.summary.json` and
/// `manifest.json` into the output directory.
pub fn run(cfg: &ExperimentConfig, options: &RunOptions) -> anyhow::Result<RunOutcome> {
    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0);
    let clock = Instant::now();
    let threads = if options.deterministic { Some(1) } else { options.threads };
    let output = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()?
            .install(|| execute(cfg))?,
        None => execute(cfg)?,
    };
    let out_dir = options.resolve_out_dir();
    fs::create_dir_all(&out_dir)?;
    let name = cfg.name().to_string();
    let csv_name = format!("{name}.csv");
    let summary_name = format!("{name}.summary.json");
    let summary = json!({
        "experiment": cfg.experiment.as_str(),
        "name": name,
        "complex_mass": cfg.complex_mass,
        "verdict": output.verdict,
        "tolerances": cfg.tolerances,
        "result": output.summary,
    });
    write_atomic(&out_dir.join(&csv_name), output.csv.as_bytes())?;
    write_atomic(&out_dir.join(&summary_name), serde_json::to_string_pretty(&summary)?.as_bytes())?;
    let manifest = RunManifest {
        artifact: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        experiment: cfg.experiment.as_str(),
        name,
        config: cfg.clone(),
        deterministic: options.deterministic,
        threads,
        started_unix_seconds: started,
        elapsed_seconds: clock.elapsed().as_secs_f64(),
        outputs: vec![csv_name, summary_name],
        verdict: output.verdict.clone(),
        exit_code: output.exit_code,
    };
    write_atomic(&out_dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?.as_bytes())?;
    Ok(RunOutcome {
        manifest,
        summary,
        csv: output.csv,
        exit_code: output.exit_code,
    })
}
