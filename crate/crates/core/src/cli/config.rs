// Copyright 2026 Qubot Contributors
// SPDX-License-Identifier: Apache-2.0

//! Flat `key = value` run configuration.
//!
//! A document holds exactly one `[scenario]` section. Blank lines and text
//! after `#` are ignored. Values are numbers, booleans (`true`/`false`),
//! words, or lists: comma separated (`0.25, 0.5, 1`) or `lo:hi:n` for `n`
//! evenly spaced points. Later layers (command-line flags) replace keys of
//! earlier ones.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::channels::{recovery_rate, Environment, ModelParams};
use crate::error::Error;
use crate::experiments::{
    linspace, Execution, DEFAULT_BLOCH_POINTS, DEFAULT_SNAPSHOT_TIMES, DEFAULT_STABILIZATION_GAMMAS,
};
use crate::metrics::{EntropyBase, FidelityConvention, MetricOptions};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigError {
    Parse { line: usize, message: String },
    Validation { key: String, message: String },
}

impl ConfigError {
    fn invalid(key: &str, message: impl Into<String>) -> Self {
        ConfigError::Validation { key: key.to_string(), message: message.into() }
    }

    /// Offending key of a validation error.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::Validation { key, .. } => Some(key),
            ConfigError::Parse { .. } => None,
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
            ConfigError::Validation { key, message } => write!(f, "invalid `{key}`: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Transient,
    Stabilization,
    Sweep,
    Bloch,
    Photodissociation,
    Validate,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::Transient,
        Scenario::Stabilization,
        Scenario::Sweep,
        Scenario::Bloch,
        Scenario::Photodissociation,
        Scenario::Validate,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::Transient => "transient",
            Scenario::Stabilization => "stabilization",
            Scenario::Sweep => "sweep",
            Scenario::Bloch => "bloch",
            Scenario::Photodissociation => "photodissociation",
            Scenario::Validate => "validate",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::ALL.into_iter().find(|sc| sc.as_str() == s).ok_or_else(|| format!("unknown scenario `{s}`"))
    }
}

/// Time-series scenarios (transient, photodissociation).
#[derive(Debug, Clone, PartialEq)]
pub struct PointRun {
    pub params: ModelParams<f64>,
    pub t_end: f64,
    pub sample_dt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlochRun {
    pub params: ModelParams<f64>,
    pub snapshot_times: Vec<f64>,
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateRun {
    pub params: ModelParams<f64>,
    pub lifetime_s: f64,
    pub delta_hz: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRun {
    pub gamma_dephasing_grid: Vec<f64>,
    pub gamma_forget_grid: Vec<f64>,
    pub correction_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilizationRun {
    pub gamma_dephasing_values: Vec<f64>,
    pub gamma_forget_grid: Vec<f64>,
    pub correction_time: f64,
    pub t_end: f64,
    pub sample_dt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioConfig {
    Transient(PointRun),
    Stabilization(StabilizationRun),
    Sweep(SweepRun),
    Bloch(BlochRun),
    Photodissociation(PointRun),
    Validate(ValidateRun),
}

impl ScenarioConfig {
    pub fn scenario(&self) -> Scenario {
        match self {
            ScenarioConfig::Transient(_) => Scenario::Transient,
            ScenarioConfig::Stabilization(_) => Scenario::Stabilization,
            ScenarioConfig::Sweep(_) => Scenario::Sweep,
            ScenarioConfig::Bloch(_) => Scenario::Bloch,
            ScenarioConfig::Photodissociation(_) => Scenario::Photodissociation,
            ScenarioConfig::Validate(_) => Scenario::Validate,
        }
    }

    /// Model parameters of single-point scenarios.
    pub fn params(&self) -> Option<&ModelParams<f64>> {
        match self {
            ScenarioConfig::Transient(r) | ScenarioConfig::Photodissociation(r) => Some(&r.params),
            ScenarioConfig::Bloch(r) => Some(&r.params),
            ScenarioConfig::Validate(r) => Some(&r.params),
            ScenarioConfig::Sweep(_) | ScenarioConfig::Stabilization(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: ScenarioConfig,
    pub output_dir: PathBuf,
    pub emit_svg: bool,
    pub fidelity_convention: FidelityConvention,
    pub entropy_base: EntropyBase,
    pub execution: Execution,
}

impl RunConfig {
    pub fn metric_options(&self) -> MetricOptions {
        MetricOptions { entropy_base: self.entropy_base, fidelity: self.fidelity_convention }
    }

    /// `(key, value)` pairs that determine the data, in rendering order.
    pub fn data_entries(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let push_params = |out: &mut Vec<(&'static str, String)>, p: &ModelParams<f64>| {
            out.push(("gamma_dephasing", num(p.gamma_dephasing)));
            out.push(("gamma_forget", num(p.gamma_forget)));
            if recovery_rate(p.correction_time, p.gamma_forget).ok() != Some(p.recovery_rate) {
                out.push(("recovery_rate", num(p.recovery_rate)));
            }
            out.push(("correction_time", num(p.correction_time)));
            out.push(("delta", num(p.delta)));
            out.push(("environment", p.environment.as_str().to_string()));
        };
        match &self.scenario {
            ScenarioConfig::Transient(r) | ScenarioConfig::Photodissociation(r) => {
                push_params(&mut out, &r.params);
                out.push(("t_end", num(r.t_end)));
                out.push(("sample_dt", num(r.sample_dt)));
            }
            ScenarioConfig::Bloch(r) => {
                push_params(&mut out, &r.params);
                out.push(("snapshot_times", list(&r.snapshot_times)));
                out.push(("n_points", r.n_points.to_string()));
            }
            ScenarioConfig::Validate(r) => {
                push_params(&mut out, &r.params);
                out.push(("lifetime_s", num(r.lifetime_s)));
                out.push(("delta_hz", num(r.delta_hz)));
            }
            ScenarioConfig::Sweep(r) => {
                out.push(("gamma_dephasing_grid", list(&r.gamma_dephasing_grid)));
                out.push(("gamma_forget_grid", list(&r.gamma_forget_grid)));
                out.push(("correction_time", num(r.correction_time)));
            }
            ScenarioConfig::Stabilization(r) => {
                out.push(("gamma_dephasing_values", list(&r.gamma_dephasing_values)));
                out.push(("gamma_forget_grid", list(&r.gamma_forget_grid)));
                out.push(("correction_time", num(r.correction_time)));
                out.push(("t_end", num(r.t_end)));
                out.push(("sample_dt", num(r.sample_dt)));
            }
        }
        out.push(("fidelity_convention", self.fidelity_convention.as_str().to_string()));
        out.push(("entropy_base", self.entropy_base.as_str().to_string()));
        out
    }
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|x| num(*x)).collect::<Vec<_>>().join(", ")
}

/// Renders a document that parses back to `config`.
pub fn render(config: &RunConfig) -> String {
    let mut s = format!("[{}]\n", config.scenario.scenario());
    for (k, v) in config.data_entries() {
        s.push_str(&format!("{k} = {v}\n"));
    }
    s.push_str(&format!("output_dir = {}\n", config.output_dir.display()));
    s.push_str(&format!("emit_svg = {}\n", config.emit_svg));
    let execution = match config.execution {
        Execution::Serial => "serial",
        Execution::Parallel => "parallel",
    };
    s.push_str(&format!("execution = {execution}\n"));
    s
}

/// One configuration value with the line it came from (0 for flags).
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub value: String,
    pub line: usize,
}

/// Parsed but not yet validated document.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub scenario: Scenario,
    pub entries: BTreeMap<String, Entry>,
}

pub fn parse_document(text: &str) -> Result<Document, ConfigError> {
    let mut scenario: Option<Scenario> = None;
    let mut entries = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::Parse { line, message: "unterminated section header".into() })?
                .trim();
            if scenario.is_some() {
                return Err(ConfigError::Parse { line, message: "only one [scenario] section is allowed".into() });
            }
            scenario = Some(name.parse().map_err(|message| ConfigError::Parse { line, message })?);
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::Parse { line, message: format!("expected `key = value`, got `{content}`") })?;
        let key = key.trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_') {
            return Err(ConfigError::Parse { line, message: format!("malformed key `{key}`") });
        }
        if scenario.is_none() {
            return Err(ConfigError::Parse { line, message: "key before [scenario] section".into() });
        }
        if entries.insert(key.to_string(), Entry { value: value.trim().to_string(), line }).is_some() {
            return Err(ConfigError::Parse { line, message: format!("duplicate key `{key}`") });
        }
    }
    let scenario =
        scenario.ok_or_else(|| ConfigError::Parse { line: 0, message: "missing [scenario] section".into() })?;
    Ok(Document { scenario, entries })
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let doc = parse_document(text)?;
    build_config(doc.scenario, doc.entries)
}

/// Applies `overrides` on top of `entries`. Setting `gamma_forget` or
/// `correction_time` without `recovery_rate` drops an inherited `recovery_rate`
/// so that `r` is re-derived.
pub fn layer(entries: &mut BTreeMap<String, Entry>, overrides: &[(String, String)]) {
    let has_r = overrides.iter().any(|(k, _)| k == "recovery_rate");
    let resets_r = overrides.iter().any(|(k, _)| k == "gamma_forget" || k == "correction_time");
    if resets_r && !has_r {
        entries.remove("recovery_rate");
    }
    for (k, v) in overrides {
        entries.insert(k.clone(), Entry { value: v.clone(), line: 0 });
    }
}

struct Reader {
    entries: BTreeMap<String, Entry>,
}

impl Reader {
    fn take(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key).map(|e| e.value)
    }

    fn parsed<V: FromStr>(&mut self, key: &str, default: Option<V>) -> Result<V, ConfigError>
    where
        V::Err: fmt::Display,
    {
        match self.take(key) {
            Some(v) => v.parse().map_err(|e| ConfigError::invalid(key, format!("cannot parse `{v}`: {e}"))),
            None => default.ok_or_else(|| ConfigError::invalid(key, "required key is missing")),
        }
    }

    fn number(&mut self, key: &str, default: Option<f64>) -> Result<f64, ConfigError> {
        let x: f64 = self.parsed(key, default)?;
        if !x.is_finite() {
            return Err(ConfigError::invalid(key, format!("must be finite, got {x}")));
        }
        Ok(x)
    }

    fn positive(&mut self, key: &str, default: Option<f64>) -> Result<f64, ConfigError> {
        let x = self.number(key, default)?;
        if x <= 0.0 {
            return Err(ConfigError::invalid(key, format!("must be > 0, got {x}")));
        }
        Ok(x)
    }

    fn list(&mut self, key: &str, default: Vec<f64>) -> Result<Vec<f64>, ConfigError> {
        let Some(raw) = self.take(key) else { return Ok(default) };
        let values = parse_list(&raw).map_err(|m| ConfigError::invalid(key, m))?;
        if values.is_empty() {
            return Err(ConfigError::invalid(key, "list is empty"));
        }
        if let Some(bad) = values.iter().find(|x| !x.is_finite()) {
            return Err(ConfigError::invalid(key, format!("must be finite, got {bad}")));
        }
        Ok(values)
    }

    fn positive_list(&mut self, key: &str, default: Vec<f64>) -> Result<Vec<f64>, ConfigError> {
        let values = self.list(key, default)?;
        if let Some(bad) = values.iter().find(|x| **x <= 0.0) {
            return Err(ConfigError::invalid(key, format!("rates must be > 0, got {bad}")));
        }
        Ok(values)
    }

    fn params(&mut self) -> Result<ModelParams<f64>, ConfigError> {
        let gamma_dephasing = self.number("gamma_dephasing", None)?;
        let gamma_forget = self.number("gamma_forget", None)?;
        let correction_time = self.number("correction_time", Some(0.0))?;
        let delta = self.number("delta", Some(1.0))?;
        let environment: Environment = self.parsed("environment", Some(Environment::Dephasing))?;
        let explicit_r = match self.take("recovery_rate") {
            Some(v) => Some(
                v.parse::<f64>()
                    .map_err(|e| ConfigError::invalid("recovery_rate", format!("cannot parse `{v}`: {e}")))?,
            ),
            None => None,
        };
        let mut params =
            ModelParams { gamma_dephasing, gamma_forget, recovery_rate: 0.0, correction_time, delta, environment };
        ModelParams { recovery_rate: 0.0, ..params }.validate().map_err(from_model_error)?;
        params.recovery_rate = match explicit_r {
            Some(r) => r,
            None => recovery_rate(correction_time, gamma_forget).map_err(|e| match e {
                Error::ZeroForgetness => ConfigError::invalid("gamma_forget", "must be > 0 to derive recovery_rate"),
                other => from_model_error(other),
            })?,
        };
        params.validate().map_err(from_model_error)?;
        Ok(params)
    }

    fn finish(self, scenario: Scenario) -> Result<(), ConfigError> {
        match self.entries.into_iter().next() {
            None => Ok(()),
            Some((key, entry)) => {
                let origin = if entry.line == 0 { "command line".to_string() } else { format!("line {}", entry.line) };
                Err(ConfigError::invalid(&key, format!("unknown key for scenario {scenario} ({origin})")))
            }
        }
    }
}

fn from_model_error(e: Error) -> ConfigError {
    match e {
        Error::InvalidParameter { name, reason } => ConfigError::invalid(name, reason),
        Error::ZeroForgetness => ConfigError::invalid("gamma_forget", e.to_string()),
        other => ConfigError::invalid("params", other.to_string()),
    }
}

/// Comma list or `lo:hi:n`.
pub fn parse_list(raw: &str) -> Result<Vec<f64>, String> {
    let raw = raw.trim();
    if raw.contains(':') {
        let parts: Vec<_> = raw.split(':').map(str::trim).collect();
        let [lo, hi, n] = parts[..] else { return Err(format!("range must be `lo:hi:n`, got `{raw}`")) };
        let lo: f64 = lo.parse().map_err(|e| format!("bad range start `{lo}`: {e}"))?;
        let hi: f64 = hi.parse().map_err(|e| format!("bad range end `{hi}`: {e}"))?;
        let n: usize = n.parse().map_err(|e| format!("bad range count `{n}`: {e}"))?;
        return Ok(linspace(lo, hi, n));
    }
    if raw.is_empty() {
        return Ok(Vec::new());
    }
    raw.split(',').map(|s| s.trim().parse::<f64>().map_err(|e| format!("bad list item `{}`: {e}", s.trim()))).collect()
}

fn parse_execution(s: &str) -> Result<Execution, String> {
    match s {
        "serial" => Ok(Execution::Serial),
        "parallel" => Ok(Execution::Parallel),
        other => Err(format!("unknown execution `{other}` (serial|parallel)")),
    }
}

/// Validates layered entries for `scenario`.
pub fn build_config(scenario: Scenario, entries: BTreeMap<String, Entry>) -> Result<RunConfig, ConfigError> {
    let mut r = Reader { entries };
    let scenario_config = match scenario {
        Scenario::Transient | Scenario::Photodissociation => {
            let params = r.params()?;
            let run = PointRun {
                params,
                t_end: r.positive("t_end", Some(10.0))?,
                sample_dt: r.positive("sample_dt", Some(0.01))?,
            };
            if scenario == Scenario::Transient {
                ScenarioConfig::Transient(run)
            } else {
                if run.params.environment != Environment::Photodissociation {
                    return Err(ConfigError::invalid(
                        "environment",
                        "photodissociation scenario needs environment = photodissociation",
                    ));
                }
                ScenarioConfig::Photodissociation(run)
            }
        }
        Scenario::Bloch => {
            let params = r.params()?;
            let snapshot_times = r.list("snapshot_times", DEFAULT_SNAPSHOT_TIMES.to_vec())?;
            if snapshot_times[0] < 0.0 || snapshot_times.windows(2).any(|w| w[1] < w[0]) {
                return Err(ConfigError::invalid("snapshot_times", "times must be >= 0 and ascending"));
            }
            let n_points: usize = r.parsed("n_points", Some(DEFAULT_BLOCH_POINTS))?;
            if n_points == 0 {
                return Err(ConfigError::invalid("n_points", "must be at least 1"));
            }
            ScenarioConfig::Bloch(BlochRun { params, snapshot_times, n_points })
        }
        Scenario::Validate => {
            let params = r.params()?;
            ScenarioConfig::Validate(ValidateRun {
                params,
                lifetime_s: r.positive("lifetime_s", Some(200e-6))?,
                delta_hz: r.positive("delta_hz", Some(1e9))?,
            })
        }
        Scenario::Sweep => ScenarioConfig::Sweep(SweepRun {
            gamma_dephasing_grid: r.positive_list("gamma_dephasing_grid", linspace(0.05, 2.5, 50))?,
            gamma_forget_grid: r.positive_list("gamma_forget_grid", linspace(0.05, 2.5, 50))?,
            correction_time: nonnegative(&mut r, "correction_time")?,
        }),
        Scenario::Stabilization => ScenarioConfig::Stabilization(StabilizationRun {
            gamma_dephasing_values: r.positive_list("gamma_dephasing_values", DEFAULT_STABILIZATION_GAMMAS.to_vec())?,
            gamma_forget_grid: r.positive_list("gamma_forget_grid", linspace(0.5, 3.0, 26))?,
            correction_time: nonnegative(&mut r, "correction_time")?,
            t_end: r.positive("t_end", Some(100.0))?,
            sample_dt: r.positive("sample_dt", Some(0.01))?,
        }),
    };
    let config = RunConfig {
        scenario: scenario_config,
        output_dir: PathBuf::from(r.take("output_dir").unwrap_or_else(|| "out".into())),
        emit_svg: r.parsed("emit_svg", Some(false))?,
        fidelity_convention: r.parsed("fidelity_convention", Some(FidelityConvention::default()))?,
        entropy_base: r.parsed("entropy_base", Some(EntropyBase::default()))?,
        execution: match r.take("execution") {
            Some(v) => parse_execution(&v).map_err(|m| ConfigError::invalid("execution", m))?,
            None => Execution::default(),
        },
    };
    if let ScenarioConfig::Transient(run) | ScenarioConfig::Photodissociation(run) = &config.scenario {
        if run.sample_dt > run.t_end {
            return Err(ConfigError::invalid("sample_dt", "must not exceed t_end"));
        }
    }
    r.finish(scenario)?;
    Ok(config)
}

fn nonnegative(r: &mut Reader, key: &str) -> Result<f64, ConfigError> {
    let x = r.number(key, Some(0.0))?;
    if x < 0.0 {
        return Err(ConfigError::invalid(key, format!("must be >= 0, got {x}")));
    }
    Ok(x)
}
