use pyo3::prelude::*;
use pyo3::types::{PyDict, PyModule};

fn with_module<F: FnOnce(&Bound<'_, PyModule>) -> PyResult<()>>(f: F) {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "pyquasistable")?;
        pyquasistable::pyquasistable(&m)?;
        f(&m)
    })
    .unwrap();
}

#[test]
fn bounds_and_classification() {
    with_module(|m| {
        let cm = m.getattr("ComplexMass")?.call1((1.0, 0.2))?;
        let b = m.getattr("spectral_bounds")?.call1((cm,))?.cast_into::<PyDict>()?;
        let k2: f64 = b.get_item("k2")?.unwrap().extract()?;
        assert!((k2 - 0.1).abs() < 1e-15);
        let k1: String = b.get_item("k1")?.unwrap().extract()?;
        assert_eq!(k1, "-inf");
        let c: String = m.getattr("classify_interval")?.call1((0.0, 1.0, 0.0, 0.0))?.extract()?;
        assert_eq!(c, "spacelike");
        Ok(())
    });
}

#[test]
fn invalid_mass_raises() {
    with_module(|m| {
        let err = m.getattr("ComplexMass")?.call1((1.0, -0.5)).unwrap_err();
        assert!(err.to_string().contains("complex_mass.width"));
        Ok(())
    });
}

#[test]
fn validate_and_probe() {
    with_module(|m| {
        let errors: Vec<String> = m
            .getattr("validate_config")?
            .call1((r#"{"experiment": "nope", "complex_mass": {"mass": 1, "width": 0}}"#,))?
            .extract()?;
        assert_eq!(errors.len(), 1);
        assert!(errors[0].contains("spectrum-check"));
        let report = m.getattr("dichotomy_probe")?.call1((vec![0.0, 1.0], vec![1.0, 0.5]))?;
        let verdict: String = report.get_item("verdict")?.extract()?;
        assert_eq!(verdict, "almost_never_zero");
        Ok(())
    });
}

#[test]
fn evolve_norms_decay() {
    with_module(|m| {
        let cm = m.getattr("ComplexMass")?.call1((1.0, 0.2))?;
        let norms: Vec<f64> = m.getattr("evolve_norms")?.call1((cm, vec![0.0, 2.0]))?.extract()?;
        assert!((norms[0] - 1.0).abs() < 1e-12 && norms[1] < (-0.2f64 * 2.0).exp());
        Ok(())
    });
}
