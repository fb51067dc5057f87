//! Run configuration: TOML with fixed sections, every key optional.
//!
//! ```toml
//! [run]        kind, seed, out
//! [model]      n, xi, a, b, c
//! [grid]       n_tan, l_tan, n_wall, h_wall
//! [scheme]     theta, p_margin
//! [tolerances] one threshold per reported check
//! [resolvent]  epsilon, q, q_tilde, lambda_min, lambda_max, n_lambda, args, smoothing_min, smoothing_max
//! [decay]      n_tan, l_tan, n_wall, h_wall, dt, t_start, t_end, widths, n_fit
//! [gn]         samples, k_max, m_max, scales
//! [picard]     data_size, horizon, dt, k_max, tolerance
//! [simulate]   data_size, horizon, dt, store_every
//! [invariants] instances, fields
//! ```
//!
//! Unknown keys are errors. Integers are accepted where floats are expected.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use qthalf_core::driver::exponent_setup;
use qthalf_core::fields::Grid;
use qthalf_core::linear::Sector;
use qthalf_core::tensor::ModelParams;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Invariants,
    ResolventSweep,
    DecayFit,
    GnCheck,
    Picard,
    Simulate,
}

impl Kind {
    pub const ALL: [Kind; 6] =
        [Kind::Invariants, Kind::ResolventSweep, Kind::DecayFit, Kind::GnCheck, Kind::Picard, Kind::Simulate];

    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Invariants => "invariants",
            Kind::ResolventSweep => "resolvent-sweep",
            Kind::DecayFit => "decay-fit",
            Kind::GnCheck => "gn-check",
            Kind::Picard => "picard",
            Kind::Simulate => "simulate",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Kind::ALL
            .iter()
            .find(|k| k.as_str() == s)
            .copied()
            .ok_or_else(|| format!("unknown experiment kind `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSection {
    pub kind: Kind,
    pub seed: u64,
    pub out: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSection {
    pub n: usize,
    pub xi: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSection {
    pub n_tan: usize,
    pub l_tan: f64,
    pub n_wall: usize,
    pub h_wall: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeSection {
    pub theta: f64,
    pub p_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub invariant_residual: f64,
    pub resolvent_slope: f64,
    pub smoothing_slope_slack: f64,
    pub decay_slope: f64,
    pub gn_variation: f64,
    pub gn_refinement: f64,
    pub picard_delta: f64,
    pub picard_residual: f64,
    pub solution_size: f64,
    pub energy_slack: f64,
    pub field_invariant: f64,
    pub divergence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolventSection {
    pub n_tan: usize,
    pub l_tan: f64,
    pub n_wall: usize,
    pub h_wall: f64,
    pub epsilon: f64,
    pub q: f64,
    pub q_tilde: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub n_lambda: usize,
    /// Arguments as fractions of the sector half-opening `π − ε`.
    pub args: Vec<f64>,
    pub smoothing_min: f64,
    pub smoothing_max: f64,
    pub n_smoothing: usize,
    /// Dilation widths of the smoothing data family.
    pub smoothing_widths: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecaySection {
    pub n_tan: usize,
    pub l_tan: f64,
    pub n_wall: usize,
    pub h_wall: f64,
    pub dt: f64,
    pub t_start: f64,
    /// Zero selects `0.1 (l_tan / 2π)²`.
    pub t_end: f64,
    pub widths: Vec<f64>,
    pub n_fit: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GnSection {
    pub n_tan: usize,
    pub l_tan: f64,
    pub n_wall: usize,
    pub h_wall: f64,
    pub samples: usize,
    pub k_max: usize,
    pub m_max: usize,
    pub scales: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardSection {
    pub data_size: f64,
    pub horizon: f64,
    pub dt: f64,
    pub k_max: usize,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateSection {
    pub data_size: f64,
    pub horizon: f64,
    pub dt: f64,
    pub store_every: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantSection {
    pub instances: usize,
    pub fields: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub run: RunSection,
    pub model: ModelSection,
    pub grid: GridSection,
    pub scheme: SchemeSection,
    pub tolerances: Tolerances,
    pub resolvent: ResolventSection,
    pub decay: DecaySection,
    pub gn: GnSection,
    pub picard: PicardSection,
    pub simulate: SimulateSection,
    pub invariants: InvariantSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            run: RunSection { kind: Kind::Invariants, seed: 42, out: "out".into() },
            model: ModelSection { n: 2, xi: 1.0, a: 0.5, b: 1.0, c: 1.0 },
            grid: GridSection { n_tan: 32, l_tan: 8.0, n_wall: 33, h_wall: 4.0 },
            scheme: SchemeSection { theta: 0.25, p_margin: 1.0 },
            tolerances: Tolerances {
                invariant_residual: 1e-12,
                resolvent_slope: 0.1,
                smoothing_slope_slack: 0.15,
                decay_slope: 0.15,
                gn_variation: 0.05,
                gn_refinement: 0.1,
                picard_delta: 0.5,
                picard_residual: 1e-8,
                solution_size: 1e-2,
                energy_slack: 1e-3,
                field_invariant: 1e-10,
                divergence: 1e-8,
            },
            resolvent: ResolventSection {
                n_tan: 256,
                l_tan: 32.0,
                n_wall: 129,
                h_wall: 16.0,
                epsilon: 0.7,
                q: 4.0,
                q_tilde: 2.0,
                lambda_min: 0.1,
                lambda_max: 100.0,
                n_lambda: 13,
                args: vec![0.0, 0.5, 0.9],
                smoothing_min: 1.0,
                smoothing_max: 100.0,
                n_smoothing: 7,
                smoothing_widths: (1..=8).map(|k| 0.25 * std::f64::consts::SQRT_2.powi(k)).collect(),
            },
            decay: DecaySection {
                n_tan: 128,
                l_tan: 64.0,
                n_wall: 129,
                h_wall: 64.0,
                dt: 0.05,
                t_start: 1.0,
                t_end: 0.0,
                widths: (0..6).map(|k| 2.0 * std::f64::consts::SQRT_2.powi(k)).collect(),
                n_fit: 12,
            },
            gn: GnSection {
                n_tan: 128,
                l_tan: 32.0,
                n_wall: 129,
                h_wall: 16.0,
                samples: 200,
                k_max: 4,
                m_max: 4,
                scales: vec![1.0, 1.25, 1.5],
            },
            picard: PicardSection { data_size: 1e-3, horizon: 1.0, dt: 0.02, k_max: 8, tolerance: 1e-10 },
            simulate: SimulateSection { data_size: 1e-3, horizon: 2.0, dt: 0.02, store_every: 1 },
            invariants: InvariantSection { instances: 1000, fields: 4 },
        }
    }
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::String(_) => "string",
        Value::Integer(_) => "integer",
        Value::Float(_) => "float",
        Value::Boolean(_) => "boolean",
        Value::Datetime(_) => "datetime",
        Value::Array(_) => "array",
        Value::Table(_) => "table",
    }
}

/// Check `given` against the shape of `default`, coercing integers to floats.
fn conform(path: &str, default: &Value, given: &Value, problems: &mut Vec<String>) -> Option<Value> {
    match (default, given) {
        (Value::Float(_), Value::Integer(i)) => Some(Value::Float(*i as f64)),
        (Value::Float(_), Value::Float(_))
        | (Value::String(_), Value::String(_))
        | (Value::Boolean(_), Value::Boolean(_)) => Some(given.clone()),
        (Value::Integer(_), Value::Integer(i)) => {
            if *i < 0 {
                problems.push(format!("`{path}` must be non-negative, found {i}"));
                None
            } else {
                Some(given.clone())
            }
        }
        (Value::Array(d), Value::Array(g)) => {
            let proto = d.first().cloned().unwrap_or(Value::Float(0.0));
            let mut out = Vec::with_capacity(g.len());
            for (i, item) in g.iter().enumerate() {
                out.push(conform(&format!("{path}[{i}]"), &proto, item, problems)?);
            }
            Some(Value::Array(out))
        }
        (Value::Table(d), Value::Table(g)) => {
            let mut merged = d.clone();
            for (key, val) in g {
                let sub = if path.is_empty() { key.clone() } else { format!("{path}.{key}") };
                match d.get(key) {
                    None => problems.push(format!("unknown key `{sub}`")),
                    Some(dv) => {
                        if let Some(v) = conform(&sub, dv, val, problems) {
                            merged.insert(key.clone(), v);
                        }
                    }
                }
            }
            Some(Value::Table(merged))
        }
        _ => {
            problems.push(format!("`{path}` expects {}, found {}", type_name(default), type_name(given)));
            None
        }
    }
}

impl RunConfig {
    /// Parse and validate, reporting every violation found.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let given: Table = text.parse().map_err(|e: toml::de::Error| CliError::Config(vec![e.message().to_string()]))?;
        let defaults = Value::try_from(RunConfig::default()).expect("defaults serialize");
        let mut problems = Vec::new();
        let merged = conform("", &defaults, &Value::Table(given), &mut problems);
        let config = match merged {
            Some(v) if problems.is_empty() => match v.try_into::<RunConfig>() {
                Ok(c) => c,
                Err(e) => {
                    problems.push(e.message().to_string());
                    return Err(CliError::Config(problems));
                }
            },
            _ => return Err(CliError::Config(problems)),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::parse(&text)
    }

    /// Canonical text: every key, fixed order.
    pub fn emit(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn model_params(&self) -> Result<ModelParams, CliError> {
        let m = &self.model;
        ModelParams::new(m.n, m.xi, m.a, m.b, m.c).map_err(|e| CliError::Config(vec![format!("model: {e}")]))
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        let g = &self.grid;
        Grid::new(self.model.n, g.n_tan, g.l_tan, g.n_wall, g.h_wall)
            .map_err(|e| CliError::Config(vec![format!("grid: {e}")]))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let mut problems = Vec::new();
        let params = self.model_params();
        if let Err(CliError::Config(p)) = &params {
            problems.extend(p.iter().cloned());
        }
        if let Err(CliError::Config(p)) = self.grid() {
            problems.extend(p);
        }
        if i64::try_from(self.run.seed).is_err() {
            problems.push(format!("run.seed = {} exceeds the largest TOML integer {}", self.run.seed, i64::MAX));
        }
        let theta = self.scheme.theta;
        if !(theta > 0.0 && theta < 0.5) {
            problems.push(format!(
                "scheme.theta = {theta} violates the integrability condition 0 < theta < 1/2"
            ));
        } else if let Err(e) = exponent_setup(self.model.n, theta, self.scheme.p_margin) {
            problems.push(format!("scheme: {e}"));
        }
        if let Ok(p) = &params {
            if let Err(e) = Sector::new(self.resolvent.epsilon, p) {
                problems.push(format!("resolvent.epsilon: {e}"));
            }
        }
        let mut positive = |name: &str, v: f64| {
            if !(v.is_finite() && v > 0.0) {
                problems.push(format!("`{name}` = {v} must be finite and positive"));
            }
        };
        let r = &self.resolvent;
        positive("resolvent.lambda_min", r.lambda_min);
        positive("resolvent.smoothing_min", r.smoothing_min);
        positive("resolvent.l_tan", r.l_tan);
        positive("resolvent.h_wall", r.h_wall);
        let d = &self.decay;
        positive("decay.l_tan", d.l_tan);
        positive("decay.h_wall", d.h_wall);
        positive("decay.dt", d.dt);
        positive("decay.t_start", d.t_start);
        positive("gn.l_tan", self.gn.l_tan);
        positive("gn.h_wall", self.gn.h_wall);
        let p = &self.picard;
        positive("picard.horizon", p.horizon);
        positive("picard.dt", p.dt);
        positive("picard.tolerance", p.tolerance);
        let s = &self.simulate;
        positive("simulate.horizon", s.horizon);
        positive("simulate.dt", s.dt);
        for (name, v) in [
            ("tolerances.invariant_residual", self.tolerances.invariant_residual),
            ("tolerances.resolvent_slope", self.tolerances.resolvent_slope),
            ("tolerances.decay_slope", self.tolerances.decay_slope),
            ("tolerances.gn_variation", self.tolerances.gn_variation),
            ("tolerances.picard_delta", self.tolerances.picard_delta),
        ] {
            positive(name, v);
        }
        if !(r.q_tilde > 1.0 && r.q_tilde < r.q) {
            problems.push(format!("resolvent exponents need 1 < q_tilde < q, found {} and {}", r.q_tilde, r.q));
        }
        if !(r.lambda_max > r.lambda_min && r.smoothing_max > r.smoothing_min) {
            problems.push("resolvent ranges must be increasing".into());
        }
        if r.n_lambda < 3 || r.n_smoothing < 3 {
            problems.push(format!("resolvent.n_lambda = {} and n_smoothing = {} need at least 3", r.n_lambda, r.n_smoothing));
        }
        if r.smoothing_widths.is_empty() || r.smoothing_widths.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            problems.push("resolvent.smoothing_widths must be non-empty and positive".into());
        }
        if let Err(e) = Grid::new(self.model.n, r.n_tan, r.l_tan.max(1e-12), r.n_wall, r.h_wall.max(1e-12)) {
            problems.push(format!("resolvent grid: {e}"));
        }
        if r.args.is_empty() || r.args.iter().any(|a| !(0.0..1.0).contains(a)) {
            problems.push("resolvent.args must be non-empty fractions in [0, 1)".into());
        }
        if d.widths.is_empty() || d.widths.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            problems.push("decay.widths must be non-empty and positive".into());
        }
        if !(d.t_end == 0.0 || d.t_end > d.t_start) {
            problems.push(format!("decay.t_end = {} must be 0 (automatic) or exceed t_start", d.t_end));
        }
        if d.n_fit < 3 {
            problems.push(format!("decay.n_fit = {} below 3", d.n_fit));
        }
        if let Err(e) = Grid::new(self.model.n, d.n_tan, d.l_tan.max(1e-12), d.n_wall, d.h_wall.max(1e-12)) {
            problems.push(format!("decay grid: {e}"));
        }
        let gn = &self.gn;
        if let Err(e) = Grid::new(self.model.n, gn.n_tan, gn.l_tan.max(1e-12), gn.n_wall, gn.h_wall.max(1e-12)) {
            problems.push(format!("gn grid: {e}"));
        }
        if self.gn.samples == 0 || self.gn.k_max == 0 || self.gn.m_max == 0 {
            problems.push("gn.samples, gn.k_max and gn.m_max must be positive".into());
        }
        if self.gn.scales.len() < 2 || self.gn.scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            problems.push("gn.scales needs at least two positive entries".into());
        }
        if p.k_max < 2 {
            problems.push(format!("picard.k_max = {} below 2", p.k_max));
        }
        if !(p.data_size >= 0.0 && s.data_size >= 0.0) {
            problems.push("data sizes must be non-negative".into());
        }
        if s.store_every == 0 {
            problems.push("simulate.store_every must be positive".into());
        }
        if self.invariants.instances == 0 {
            problems.push("invariants.instances must be positive".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(problems))
        }
    }
}
