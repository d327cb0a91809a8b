// Copyright 2026 Qubot Contributors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage, configuration and I/O errors, 2 for
//! numerical failures.

pub mod config;
pub mod output;
pub mod svg;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::channels::{hardware_feasibility, validate_operating_point};
use crate::error::Error;
use crate::experiments::{
    run_bloch_evolution, run_photodissociation, run_stabilization_sweep, run_steady_sweep, run_transient,
    StabilizationOptions, SteadyRecord,
};
use config::{build_config, layer, parse_document, ConfigError, RunConfig, Scenario, ScenarioConfig};
use output::{csv_document, json_sidecar, Cell};
use svg::{bloch_scatter, heatmap, line_chart, Series};

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Model(Error),
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) if e.is_numerical() => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "configuration error: {e}"),
            CliError::Model(e) if e.is_numerical() => write!(f, "numerical error: {e}"),
            CliError::Model(e) => write!(f, "validation error: {e}"),
            CliError::Io { path, source } => write!(f, "i/o error on {}: {source}", path.display()),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

#[derive(Debug, Parser)]
#[command(name = "qubot", version, about = "Lindblad simulation of a self-correcting two-spin logical qubit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Concurrence and entropy transients with the free-spin baseline.
    Transient(Flags),
    /// Stabilization time versus forgetness rate.
    Stabilization(Flags),
    /// Steady-state heatmaps over (Gamma, gamma).
    Sweep(Flags),
    /// Bloch-sphere snapshots of many initial states.
    Bloch(Flags),
    /// Singlet fidelity under the photodissociation environment.
    Photodissociation(Flags),
    /// Operating-point and hardware feasibility report.
    Validate(Flags),
}

impl Command {
    fn split(self) -> (Scenario, Flags) {
        match self {
            Command::Transient(f) => (Scenario::Transient, f),
            Command::Stabilization(f) => (Scenario::Stabilization, f),
            Command::Sweep(f) => (Scenario::Sweep, f),
            Command::Bloch(f) => (Scenario::Bloch, f),
            Command::Photodissociation(f) => (Scenario::Photodissociation, f),
            Command::Validate(f) => (Scenario::Validate, f),
        }
    }
}

/// Values override the configuration file. Keys are validated per scenario.
#[derive(Debug, Args)]
struct Flags {
    /// Configuration file with one [scenario] section.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (default `out`).
    #[arg(long, value_name = "DIR")]
    out: Option<String>,
    /// Also write SVG plots.
    #[arg(long)]
    svg: bool,
    #[arg(long, allow_hyphen_values = true, value_name = "RATE")]
    gamma_dephasing: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "RATE")]
    gamma_forget: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "RATE")]
    recovery_rate: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "TIME")]
    correction_time: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "GAP")]
    delta: Option<String>,
    /// dephasing | photodissociation
    #[arg(long)]
    environment: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "TIME")]
    t_end: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "TIME")]
    sample_dt: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "LIST")]
    snapshot_times: Option<String>,
    #[arg(long, value_name = "COUNT")]
    n_points: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "LIST")]
    gamma_dephasing_grid: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "LIST")]
    gamma_forget_grid: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "LIST")]
    gamma_dephasing_values: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "SECONDS")]
    lifetime_s: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_name = "HZ")]
    delta_hz: Option<String>,
    /// overlap | sqrt
    #[arg(long)]
    fidelity_convention: Option<String>,
    /// nats | bits
    #[arg(long)]
    entropy_base: Option<String>,
    /// parallel | serial
    #[arg(long)]
    execution: Option<String>,
}

impl Flags {
    fn overrides(&self) -> Vec<(String, String)> {
        let pairs = [
            ("output_dir", &self.out),
            ("gamma_dephasing", &self.gamma_dephasing),
            ("gamma_forget", &self.gamma_forget),
            ("recovery_rate", &self.recovery_rate),
            ("correction_time", &self.correction_time),
            ("delta", &self.delta),
            ("environment", &self.environment),
            ("t_end", &self.t_end),
            ("sample_dt", &self.sample_dt),
            ("snapshot_times", &self.snapshot_times),
            ("n_points", &self.n_points),
            ("gamma_dephasing_grid", &self.gamma_dephasing_grid),
            ("gamma_forget_grid", &self.gamma_forget_grid),
            ("gamma_dephasing_values", &self.gamma_dephasing_values),
            ("lifetime_s", &self.lifetime_s),
            ("delta_hz", &self.delta_hz),
            ("fidelity_convention", &self.fidelity_convention),
            ("entropy_base", &self.entropy_base),
            ("execution", &self.execution),
        ];
        let mut out: Vec<(String, String)> =
            pairs.into_iter().filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))).collect();
        if self.svg {
            out.push(("emit_svg".into(), "true".into()));
        }
        out
    }
}

/// Builds the run configuration from an optional file plus flag overrides.
pub fn resolve_config(
    scenario: Scenario,
    file_text: Option<&str>,
    overrides: &[(String, String)],
) -> Result<RunConfig, ConfigError> {
    let mut entries = match file_text {
        Some(text) => {
            let doc = parse_document(text)?;
            if doc.scenario != scenario {
                return Err(ConfigError::Validation {
                    key: "scenario".into(),
                    message: format!("file section is [{}] but the subcommand is {scenario}", doc.scenario),
                });
            }
            doc.entries
        }
        None => Default::default(),
    };
    layer(&mut entries, overrides);
    build_config(scenario, entries)
}

/// In-memory scenario output: named files plus an optional text report.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Rendered {
    pub files: Vec<(String, String)>,
    pub report: Option<String>,
    /// Per-point problems that did not abort the run.
    pub notes: Vec<String>,
}

/// Runs the scenario and renders its CSV (and SVG, if enabled) documents.
pub fn render_outputs(config: &RunConfig) -> Result<Rendered, Error> {
    let mut out = Rendered::default();
    let svg = config.emit_svg;
    let options = config.metric_options();
    match &config.scenario {
        ScenarioConfig::Transient(run) => {
            let r = run_transient(&run.params, run.t_end, run.sample_dt, options)?;
            let rows: Vec<Vec<Cell>> = r
                .samples
                .iter()
                .zip(&r.baseline)
                .map(|(s, &(_, c_free))| {
                    vec![
                        s.time.into(),
                        s.concurrence_ab.into(),
                        s.entropy_ab.into(),
                        s.entropy_loop.into(),
                        c_free.into(),
                    ]
                })
                .collect();
            out.files.push((
                "transient.csv".into(),
                csv_document(config, &["time", "C_qubot", "S_AB", "S_L", "C_free"], &rows),
            ));
            if svg {
                let col = |k: usize, label: &str| Series {
                    label: label.into(),
                    points: rows.iter().map(|r| (num(&r[0]), num(&r[k]))).collect(),
                };
                let series = [col(1, "C(AB) qubot"), col(2, "S(AB)"), col(3, "S(L)"), col(4, "C free spins")];
                let y = format!("concurrence, entropy [{}]", config.entropy_base);
                out.files.push(("transient.svg".into(), line_chart("Transients", "t [1/Delta]", &y, &series)));
            }
        }
        ScenarioConfig::Stabilization(run) => {
            let opts = StabilizationOptions { t_end: run.t_end, sample_dt: run.sample_dt, execution: config.execution };
            let curves = run_stabilization_sweep(
                &run.gamma_dephasing_values,
                &run.gamma_forget_grid,
                run.correction_time,
                &opts,
            )?;
            let mut rows = Vec::new();
            for c in &curves {
                for p in &c.points {
                    if p.t_o.is_none() {
                        out.notes.push(format!(
                            "Gamma={} gamma={}: not stabilized by t_end={}",
                            c.gamma_dephasing, p.gamma_forget, run.t_end
                        ));
                    }
                    rows.push(vec![
                        c.gamma_dephasing.into(),
                        p.gamma_forget.into(),
                        p.recovery_rate.into(),
                        p.c_infinity.into(),
                        p.t_o.into(),
                    ]);
                }
            }
            out.files.push((
                "stabilization.csv".into(),
                csv_document(config, &["Gamma", "gamma", "r", "C_inf", "t_o"], &rows),
            ));
            if svg {
                let series: Vec<Series> = curves
                    .iter()
                    .map(|c| Series {
                        label: format!("Gamma = {}", c.gamma_dephasing),
                        points: c.points.iter().map(|p| (p.gamma_forget, p.t_o.unwrap_or(f64::NAN))).collect(),
                    })
                    .collect();
                out.files.push((
                    "stabilization.svg".into(),
                    line_chart("Stabilization time", "gamma [Delta]", "t_o [1/Delta]", &series),
                ));
            }
        }
        ScenarioConfig::Sweep(run) => {
            let sweep = run_steady_sweep(
                &run.gamma_dephasing_grid,
                &run.gamma_forget_grid,
                run.correction_time,
                options,
                config.execution,
            )?;
            let mut rows = Vec::new();
            for (gd, gf, rec) in sweep.iter() {
                match rec {
                    Ok(r) => rows.push(vec![
                        gd.into(),
                        gf.into(),
                        r.concurrence.into(),
                        r.entropy_ab.into(),
                        r.entropy_loop.into(),
                        r.fidelity.into(),
                    ]),
                    Err(e) => {
                        out.notes.push(format!("Gamma={gd} gamma={gf}: {e}"));
                        rows.push(vec![
                            gd.into(),
                            gf.into(),
                            Cell::Missing,
                            Cell::Missing,
                            Cell::Missing,
                            Cell::Missing,
                        ]);
                    }
                }
            }
            out.files.push((
                "sweep.csv".into(),
                csv_document(config, &["Gamma", "gamma", "C_ss", "S_AB", "S_L", "F_ss"], &rows),
            ));
            if svg {
                let panels: [(&str, &str, Pick); 3] = [
                    ("sweep_C_AB.svg", "Steady-state C(AB)", |r| r.concurrence),
                    ("sweep_S_AB.svg", "Steady-state S(AB)", |r| r.entropy_ab),
                    ("sweep_S_L.svg", "Steady-state S(L)", |r| r.entropy_loop),
                ];
                for (name, title, pick) in panels {
                    let values: Vec<Vec<Option<f64>>> = sweep
                        .records
                        .iter()
                        .map(|row| row.iter().map(|r| r.as_ref().ok().map(pick)).collect())
                        .collect();
                    let doc = heatmap(
                        title,
                        "gamma [Delta]",
                        "Gamma [Delta]",
                        &sweep.gamma_forget_grid,
                        &sweep.gamma_dephasing_grid,
                        &values,
                        (0.0, 1.0),
                    );
                    out.files.push((name.into(), doc));
                }
            }
        }
        ScenarioConfig::Bloch(run) => {
            let snaps = run_bloch_evolution(&run.params, &run.snapshot_times, run.n_points, config.execution)?;
            let mut rows = Vec::new();
            for s in &snaps {
                for (k, p) in s.points.iter().enumerate() {
                    rows.push(vec![s.time.into(), Cell::Int(k), p[0].into(), p[1].into(), p[2].into()]);
                }
            }
            out.files.push(("bloch.csv".into(), csv_document(config, &["time", "point", "x", "y", "z"], &rows)));
            if svg {
                for (k, s) in snaps.iter().enumerate() {
                    let pts: Vec<(f64, f64)> = s.points.iter().map(|p| (p[0], p[2])).collect();
                    let title = format!("Bloch vectors at t = {} (x-z projection)", s.time);
                    out.files.push((format!("bloch_{k}.svg"), bloch_scatter(&title, "x", "z", &pts)));
                }
            }
        }
        ScenarioConfig::Photodissociation(run) => {
            let r = run_photodissociation(&run.params, run.t_end, run.sample_dt, config.fidelity_convention)?;
            let rows: Vec<Vec<Cell>> = (0..r.times.len())
                .map(|k| vec![r.times[k].into(), r.qubot_fidelity[k].into(), r.free_fidelity[k].into()])
                .collect();
            out.files
                .push(("photodissociation.csv".into(), csv_document(config, &["time", "F_qubot", "F_free"], &rows)));
            if svg {
                let series = [
                    Series {
                        label: "qubot".into(),
                        points: r.times.iter().copied().zip(r.qubot_fidelity.iter().copied()).collect(),
                    },
                    Series {
                        label: "free spins".into(),
                        points: r.times.iter().copied().zip(r.free_fidelity.iter().copied()).collect(),
                    },
                ];
                let y = format!("singlet fidelity [{}]", config.fidelity_convention);
                out.files.push((
                    "photodissociation.svg".into(),
                    line_chart("Photodissociation", "t [1/Delta]", &y, &series),
                ));
            }
        }
        ScenarioConfig::Validate(run) => {
            let report = validate_operating_point(&run.params);
            let hw = hardware_feasibility(run.lifetime_s, run.delta_hz);
            out.report = Some(format!("{report}{hw}\n"));
        }
    }
    Ok(out)
}

type Pick = fn(&SteadyRecord<f64>) -> f64;

fn num(c: &Cell) -> f64 {
    match c {
        Cell::Num(x) => *x,
        Cell::Int(k) => *k as f64,
        Cell::Missing => f64::NAN,
    }
}

/// Files written by [`execute`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outcome {
    pub written: Vec<PathBuf>,
    pub report: Option<String>,
    pub notes: Vec<String>,
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Runs the scenario and writes its files plus a JSON sidecar.
pub fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let rendered = render_outputs(config)?;
    let mut outcome = Outcome { written: Vec::new(), report: rendered.report, notes: rendered.notes };
    if rendered.files.is_empty() {
        return Ok(outcome);
    }
    let dir = &config.output_dir;
    fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
    let names: Vec<String> = rendered.files.iter().map(|(n, _)| n.clone()).collect();
    for (name, text) in &rendered.files {
        let path = dir.join(name);
        write_file(&path, text)?;
        outcome.written.push(path);
    }
    let sidecar = dir.join(format!("{}.json", config.scenario.scenario()));
    write_file(&sidecar, &json_sidecar(config, start.elapsed().as_secs_f64(), &names, &outcome.notes))?;
    outcome.written.push(sidecar);
    Ok(outcome)
}

fn run_command(command: Command) -> Result<Outcome, CliError> {
    let (scenario, flags) = command.split();
    let text = match &flags.config {
        Some(path) => Some(fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?),
        None => None,
    };
    let config = resolve_config(scenario, text.as_deref(), &flags.overrides())?;
    execute(&config)
}

/// Entry point: parses `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_command(cli.command) {
        Ok(outcome) => {
            if let Some(report) = &outcome.report {
                print!("{report}");
            }
            for note in &outcome.notes {
                eprintln!("note: {note}");
            }
            for path in &outcome.written {
                println!("wrote {}", path.display());
            }
            0
        }
        Err(e) => {
            eprintln!("qubot: {e}");
            e.exit_code()
        }
    }
}
