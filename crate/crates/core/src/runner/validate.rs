//! Schema and precondition checks that report every problem at once.

use std::fmt;

use serde::Serialize;
use serde_json::{Map, Value};

use super::config::{Experiment, ExperimentConfig, ObservableSpec, Schedule, MAX_MATRIX_DIM};
use crate::error::Error;
use crate::state::{GridMode, StateSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigError {
    /// Dotted key path, e.g. `complex_mass.width` or `schedule.values[3]`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

const TOP_KEYS: [&str; 10] = [
    "experiment",
    "name",
    "complex_mass",
    "spin",
    "grid",
    "state",
    "observable",
    "schedule",
    "tolerances",
    "seed",
];

/// Largest 3-D grid accepted (points per axis).
pub const MAX_N_3D: usize = 128;

#[derive(Default)]
struct Checker {
    errors: Vec<ConfigError>,
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

impl Checker {
    fn err(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.errors.push(ConfigError {
            path: path.into(),
            message: message.into(),
        });
    }

    /// Checks that `v` is an object with only `allowed` keys and all `required` ones.
    fn object<'a>(&mut self, path: &str, v: &'a Value, allowed: &[&str], required: &[&str]) -> Option<&'a Map<String, Value>> {
        let Some(map) = v.as_object() else {
            self.err(path, "expected an object");
            return None;
        };
        for key in map.keys() {
            if !allowed.contains(&key.as_str()) {
                self.err(join(path, key), format!("unknown key; expected one of {}", allowed.join(", ")));
            }
        }
        for key in required {
            if !map.contains_key(*key) {
                self.err(join(path, key), "missing required key");
            }
        }
        Some(map)
    }

    fn number(&mut self, map: &Map<String, Value>, path: &str, key: &str) -> Option<f64> {
        let v = map.get(key)?;
        match v.as_f64() {
            Some(x) if x.is_finite() => Some(x),
            _ => {
                self.err(join(path, key), "expected a finite number");
                None
            }
        }
    }

    fn positive(&mut self, map: &Map<String, Value>, path: &str, key: &str) -> Option<f64> {
        let x = self.number(map, path, key)?;
        if x <= 0.0 {
            self.err(join(path, key), format!("must be positive, got {x}"));
            return None;
        }
        Some(x)
    }

    fn integer(&mut self, map: &Map<String, Value>, path: &str, key: &str) -> Option<u64> {
        let v = map.get(key)?;
        let r = v.as_u64();
        if r.is_none() {
            self.err(join(path, key), "expected a non-negative integer");
        }
        r
    }

    fn boolean(&mut self, map: &Map<String, Value>, path: &str, key: &str) {
        if let Some(v) = map.get(key) {
            if !v.is_boolean() {
                self.err(join(path, key), "expected true or false");
            }
        }
    }

    fn string<'a>(&mut self, map: &'a Map<String, Value>, path: &str, key: &str) -> Option<&'a str> {
        let v = map.get(key)?;
        let r = v.as_str();
        if r.is_none() {
            self.err(join(path, key), "expected a string");
        }
        r
    }

    fn numbers(&mut self, map: &Map<String, Value>, path: &str, key: &str) -> Option<Vec<f64>> {
        let v = map.get(key)?;
        let p = join(path, key);
        let Some(items) = v.as_array() else {
            self.err(p, "expected an array of numbers");
            return None;
        };
        let mut out = Vec::with_capacity(items.len());
        let mut ok = true;
        for (i, item) in items.iter().enumerate() {
            match item.as_f64() {
                Some(x) if x.is_finite() => out.push(x),
                _ => {
                    self.err(format!("{p}[{i}]"), "expected a finite number");
                    ok = false;
                }
            }
        }
        ok.then_some(out)
    }

    fn nonempty(&mut self, map: &Map<String, Value>, path: &str, key: &str) -> Option<Vec<f64>> {
        let xs = self.numbers(map, path, key)?;
        if xs.is_empty() {
            self.err(join(path, key), "must not be empty");
            return None;
        }
        Some(xs)
    }

    fn vec3(&mut self, map: &Map<String, Value>, path: &str, key: &str) -> Option<[f64; 3]> {
        let xs = self.numbers(map, path, key)?;
        match <[f64; 3]>::try_from(xs) {
            Ok(a) => Some(a),
            Err(_) => {
                self.err(join(path, key), "expected exactly 3 numbers");
                None
            }
        }
    }

    fn pairs(&mut self, map: &Map<String, Value>, path: &str, key: &str) -> Option<usize> {
        let v = map.get(key)?;
        let p = join(path, key);
        let Some(items) = v.as_array() else {
            self.err(p, "expected an array of [re, im] pairs");
            return None;
        };
        for (i, item) in items.iter().enumerate() {
            let good = item
                .as_array()
                .is_some_and(|a| a.len() == 2 && a.iter().all(|x| x.as_f64().is_some_and(f64::is_finite)));
            if !good {
                self.err(format!("{p}[{i}]"), "expected [re, im] with finite numbers");
            }
        }
        Some(items.len())
    }

    fn times(&mut self, path: &str, key: &str, values: &[f64]) {
        for (i, &t) in values.iter().enumerate() {
            if t < 0.0 {
                self.err(format!("{}[{i}]", join(path, key)), Error::SemigroupDomain(t).to_string());
            }
        }
    }

    fn tag<'a>(&mut self, path: &str, v: &'a Value, tag: &str, kinds: &[&str]) -> Option<&'a str> {
        let map = v.as_object()?;
        let Some(kind) = map.get(tag) else {
            self.err(join(path, tag), format!("missing required key; expected one of {}", kinds.join(", ")));
            return None;
        };
        match kind.as_str() {
            Some(k) if kinds.contains(&k) => Some(k),
            _ => {
                self.err(join(path, tag), format!("unknown {tag} {kind}; expected one of {}", kinds.join(", ")));
                None
            }
        }
    }
}

fn check_complex_mass(c: &mut Checker, v: &Value) {
    let Some(m) = c.object("complex_mass", v, &["mass", "width"], &["mass", "width"]) else {
        return;
    };
    c.positive(m, "complex_mass", "mass");
    if let Some(w) = c.number(m, "complex_mass", "width") {
        if w < 0.0 {
            c.err("complex_mass.width", format!("must be non-negative, got {w}"));
        }
    }
}

fn check_grid(c: &mut Checker, v: &Value) {
    let Some(m) = c.object("grid", v, &["mode", "u_max", "n"], &["mode"]) else {
        return;
    };
    let mode = c.string(m, "grid", "mode");
    if let Some(mode) = mode {
        if !["one_d_reduced", "three_d"].contains(&mode) {
            c.err("grid.mode", format!("unknown mode {mode:?}; expected one_d_reduced or three_d"));
        }
    }
    c.positive(m, "grid", "u_max");
    if let Some(n) = c.integer(m, "grid", "n") {
        if n == 0 {
            c.err("grid.n", "must be at least 1");
        }
        if mode == Some("three_d") && n as usize > MAX_N_3D {
            c.err("grid.n", format!("3-D grids are limited to {MAX_N_3D} points per axis"));
        }
    }
}

fn check_state(c: &mut Checker, v: &Value, spin_dim: Option<usize>) {
    if !v.is_object() {
        c.err("state", "expected an object");
        return;
    }
    let Some(family) = c.tag("state", v, "family", &["gaussian", "velocity_bump", "position_bump"]) else {
        return;
    };
    let (allowed, required): (&[&str], &[&str]) = match family {
        "gaussian" => (&["family", "center", "width", "spin_weights"], &["center", "width"]),
        "velocity_bump" => (&["family", "center", "radius", "spin_weights"], &["center", "radius"]),
        _ => (&["family", "center", "half_width"], &["center", "half_width"]),
    };
    let Some(m) = c.object("state", v, allowed, required) else {
        return;
    };
    match family {
        "gaussian" => {
            c.vec3(m, "state", "center");
            c.positive(m, "state", "width");
        }
        "velocity_bump" => {
            c.vec3(m, "state", "center");
            c.positive(m, "state", "radius");
        }
        _ => {
            c.number(m, "state", "center");
            c.positive(m, "state", "half_width");
        }
    }
    if let (Some(n), Some(dim)) = (c.pairs(m, "state", "spin_weights"), spin_dim) {
        if n != dim {
            c.err("state.spin_weights", format!("expected {dim} entries (2j + 1), got {n}"));
        }
    }
}

fn check_observable(c: &mut Checker, v: &Value) {
    if !v.is_object() {
        c.err("observable", "expected an object");
        return;
    }
    let kinds = ["identity", "zero", "velocity_indicator", "position_projector", "random_hermitian"];
    let Some(kind) = c.tag("observable", v, "kind", &kinds) else {
        return;
    };
    let (allowed, required): (&[&str], &[&str]) = match kind {
        "velocity_indicator" => (&["kind", "radius", "complement"], &["radius"]),
        "position_projector" => (&["kind", "x_lo", "x_hi"], &["x_lo", "x_hi"]),
        "random_hermitian" => (&["kind", "seed", "scale"], &["seed", "scale"]),
        _ => (&["kind"], &[]),
    };
    let Some(m) = c.object("observable", v, allowed, required) else {
        return;
    };
    match kind {
        "velocity_indicator" => {
            c.positive(m, "observable", "radius");
            c.boolean(m, "observable", "complement");
        }
        "position_projector" => {
            if let (Some(lo), Some(hi)) = (c.number(m, "observable", "x_lo"), c.number(m, "observable", "x_hi")) {
                if lo >= hi {
                    c.err("observable.x_hi", format!("must exceed x_lo ({lo}), got {hi}"));
                }
            }
        }
        "random_hermitian" => {
            c.integer(m, "observable", "seed");
            c.positive(m, "observable", "scale");
        }
        _ => {}
    }
}

fn check_increasing(c: &mut Checker, path: &str, key: &str, xs: &[f64]) {
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        c.err(join(path, key), "must be strictly increasing");
    }
}

fn check_direction(c: &mut Checker, m: &Map<String, Value>) {
    if let Some(d) = c.vec3(m, "schedule", "direction") {
        if d.iter().all(|x| *x == 0.0) {
            c.err("schedule.direction", "must be nonzero");
        }
    }
}

fn check_schedule(c: &mut Checker, v: &Value) {
    if !v.is_object() {
        c.err("schedule", "expected an object");
        return;
    }
    let kinds = ["t_grid", "times", "ray", "lattice", "strip", "spectrum"];
    let Some(kind) = c.tag("schedule", v, "kind", &kinds) else {
        return;
    };
    let (allowed, required): (&[&str], &[&str]) = match kind {
        "t_grid" => (&["kind", "start", "end", "count"], &["start", "end", "count"]),
        "times" => (&["kind", "values"], &["values"]),
        "ray" => (
            &["kind", "direction", "t", "x_values", "target_factor", "u_max_values"],
            &["direction", "t", "x_values"],
        ),
        "lattice" => (&["kind", "direction", "t_values", "x_values", "quantity"], &["direction", "t_values", "x_values"]),
        "strip" => (&["kind", "re_values", "im_fractions", "cr_steps"], &["re_values", "im_fractions"]),
        _ => (&["kind", "points"], &["points"]),
    };
    let Some(m) = c.object("schedule", v, allowed, required) else {
        return;
    };
    let p = "schedule";
    match kind {
        "t_grid" => {
            let start = c.number(m, p, "start");
            let end = c.number(m, p, "end");
            if let Some(s) = start {
                c.times(p, "start", &[s]);
            }
            if let Some(e) = end {
                c.times(p, "end", &[e]);
            }
            if let (Some(s), Some(e)) = (start, end) {
                if e < s {
                    c.err("schedule.end", format!("must be >= start ({s}), got {e}"));
                }
            }
            if c.integer(m, p, "count") == Some(0) {
                c.err("schedule.count", "must be at least 1");
            }
        }
        "times" => {
            if let Some(ts) = c.nonempty(m, p, "values") {
                c.times(p, "values", &ts);
            }
        }
        "ray" => {
            check_direction(c, m);
            c.number(m, p, "t");
            if let Some(xs) = c.nonempty(m, p, "x_values") {
                check_increasing(c, p, "x_values", &xs);
            }
            c.positive(m, p, "target_factor");
            if let Some(us) = c.nonempty(m, p, "u_max_values") {
                check_increasing(c, p, "u_max_values", &us);
                if us.iter().any(|u| *u <= 0.0) {
                    c.err("schedule.u_max_values", "must be positive");
                }
            }
        }
        "lattice" => {
            check_direction(c, m);
            c.nonempty(m, p, "t_values");
            c.nonempty(m, p, "x_values");
            if let Some(q) = c.string(m, p, "quantity") {
                if !["norm_squared", "expectation", "renormalized_expectation"].contains(&q) {
                    c.err(
                        "schedule.quantity",
                        format!("unknown quantity {q:?}; expected norm_squared, expectation or renormalized_expectation"),
                    );
                }
            }
        }
        "strip" => {
            if let Some(re) = c.nonempty(m, p, "re_values") {
                if re.iter().any(|x| *x <= 0.0) {
                    c.err("schedule.re_values", "real parts must be positive");
                }
            }
            if let Some(fr) = c.nonempty(m, p, "im_fractions") {
                if fr.iter().any(|x| x.abs() > 1.0) {
                    c.err("schedule.im_fractions", "fractions of the half-width must lie in [-1, 1]");
                }
            }
            if let Some(h) = c.numbers(m, p, "cr_steps") {
                if h.len() < 2 || h.iter().any(|x| *x <= 0.0) {
                    c.err("schedule.cr_steps", "need at least two positive steps");
                }
            }
        }
        _ => {
            if c.pairs(m, p, "points") == Some(0) {
                c.err("schedule.points", "sampled spectra must be nonempty");
            }
        }
    }
}

fn check_tolerances(c: &mut Checker, v: &Value) {
    let keys = ["zero_eps", "contraction", "reflection", "min_cr_order", "bounds_agreement"];
    let Some(m) = c.object("tolerances", v, &keys, &[]) else {
        return;
    };
    for k in keys {
        c.positive(m, "tolerances", k);
    }
}

fn check_name(c: &mut Checker, map: &Map<String, Value>) {
    if let Some(name) = c.string(map, "", "name") {
        let ok = !name.is_empty()
            && name
                .chars()
                .all(|ch| ch.is_ascii_alphanumeric() || matches!(ch, '-' | '_' | '.'))
            && !name.starts_with('.');
        if !ok {
            c.err("name", "must be a non-empty file stem of [A-Za-z0-9._-], not starting with '.'");
        }
        if name == "manifest" {
            c.err("name", "\"manifest\" is reserved");
        }
    }
}

fn requirement(c: &mut Checker, cfg: &ExperimentConfig) {
    let exp = cfg.experiment;
    let name = exp.as_str();
    let schedule_kind = cfg.schedule.as_ref().map(Schedule::kind);
    let need = |c: &mut Checker, kinds: &[&str]| match schedule_kind {
        Some(k) if kinds.contains(&k) => {}
        Some(k) => c.err("schedule.kind", format!("{name} needs a schedule of kind {}, got {k}", kinds.join(" or "))),
        // reported by the presence pass
        None => {}
    };
    match exp {
        Experiment::Evolve | Experiment::Dichotomy | Experiment::Tails => need(c, &["t_grid", "times"]),
        Experiment::StripDiagnostics => need(c, &["strip"]),
        Experiment::ConeScan => need(c, &["lattice"]),
        Experiment::GrowthScan => need(c, &["ray"]),
        Experiment::SpectrumCheck => {
            if schedule_kind.is_some_and(|k| k != "spectrum") {
                need(c, &["spectrum"]);
            }
        }
        Experiment::Selftest => {}
    }
    if exp == Experiment::StripDiagnostics && cfg.complex_mass.width == 0.0 {
        c.err("complex_mass.width", "strip-diagnostics needs width > 0 (the strip is degenerate at width 0)");
    }
    let one_d = cfg.grid.mode == GridMode::OneDReduced;
    if let Some(ObservableSpec::PositionProjector { .. }) = cfg.observable {
        if !one_d {
            c.err("grid.mode", "position_projector needs grid.mode = one_d_reduced");
        }
        if cfg.spin != 0.0 {
            c.err("spin", "position_projector needs spin 0");
        }
    }
    if let Some(ObservableSpec::RandomHermitian { .. }) = cfg.observable {
        let per_axis = cfg.grid.n;
        let nodes = if one_d { per_axis } else { per_axis.saturating_pow(3) };
        let dim = nodes.saturating_mul((2.0 * cfg.spin) as usize + 1);
        if dim > MAX_MATRIX_DIM {
            c.err("observable", format!("random_hermitian on this grid needs dimension up to {dim}, limit {MAX_MATRIX_DIM}"));
        }
    }
    if let StateSpec::PositionBump { .. } = cfg.state {
        if !one_d {
            c.err("grid.mode", "position_bump needs grid.mode = one_d_reduced");
        }
        if cfg.spin != 0.0 {
            c.err("spin", "position_bump needs spin 0");
        }
    }
    if exp == Experiment::Tails {
        if !matches!(cfg.observable, Some(ObservableSpec::PositionProjector { .. }) | None) {
            c.err("observable.kind", "tails takes V from a position_projector observable");
        }
        if !matches!(cfg.state, StateSpec::PositionBump { .. }) {
            c.err("state.family", "tails needs a position_bump state");
        }
    }
}

fn check_presence(c: &mut Checker, exp: Experiment, map: &Map<String, Value>) {
    let name = exp.as_str();
    let schedule = match exp {
        Experiment::Evolve | Experiment::Dichotomy | Experiment::Tails => Some("t_grid or times"),
        Experiment::StripDiagnostics => Some("strip"),
        Experiment::ConeScan => Some("lattice"),
        Experiment::GrowthScan => Some("ray"),
        Experiment::SpectrumCheck | Experiment::Selftest => None,
    };
    if let Some(kinds) = schedule {
        if !map.contains_key("schedule") {
            c.err("schedule", format!("{name} needs a schedule of kind {kinds}"));
        }
    }
    let needs_observable = matches!(exp, Experiment::Dichotomy | Experiment::StripDiagnostics | Experiment::Tails);
    if needs_observable && !map.contains_key("observable") {
        c.err("observable", format!("{name} needs an observable"));
    }
}

/// Parses and checks a configuration, returning every error found.
pub fn validate(text: &str) -> std::result::Result<ExperimentConfig, Vec<ConfigError>> {
    let mut c = Checker::default();
    let value: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => {
            c.err("", format!("invalid JSON: {e}"));
            return Err(c.errors);
        }
    };
    let Some(map) = c.object("", &value, &TOP_KEYS, &["experiment", "complex_mass"]) else {
        return Err(c.errors);
    };
    if let Some(e) = c.string(map, "", "experiment") {
        if let Some(exp) = Experiment::parse(e) {
            check_presence(&mut c, exp, map);
        } else {
            let names: Vec<_> = Experiment::ALL.iter().map(Experiment::as_str).collect();
            c.err("experiment", format!("unknown experiment {e:?}; valid names: {}", names.join(", ")));
        }
    }
    check_name(&mut c, map);
    if let Some(v) = map.get("complex_mass") {
        check_complex_mass(&mut c, v);
    }
    let mut spin_dim = Some(1);
    if let Some(j) = c.number(map, "", "spin") {
        match crate::kinematics::Spin::from_f64(j) {
            Ok(s) => spin_dim = Some(s.dim()),
            Err(e) => {
                c.err("spin", e.to_string());
                spin_dim = None;
            }
        }
    }
    if let Some(v) = map.get("grid") {
        check_grid(&mut c, v);
    }
    if let Some(v) = map.get("state") {
        check_state(&mut c, v, spin_dim);
    }
    if let Some(v) = map.get("observable") {
        check_observable(&mut c, v);
    }
    if let Some(v) = map.get("schedule") {
        check_schedule(&mut c, v);
    }
    if let Some(v) = map.get("tolerances") {
        check_tolerances(&mut c, v);
    }
    c.integer(map, "", "seed");
    if !c.errors.is_empty() {
        return Err(c.errors);
    }
    let cfg: ExperimentConfig = match serde_json::from_value(value) {
        Ok(cfg) => cfg,
        Err(e) => {
            c.err("", e.to_string());
            return Err(c.errors);
        }
    };
    requirement(&mut c, &cfg);
    if c.errors.is_empty() {
        Ok(cfg)
    } else {
        Err(c.errors)
    }
}
