// Copyright 2026 Qubot Contributors
// SPDX-License-Identifier: Apache-2.0

//! Scenario runners: transients, stabilization times, steady-state sweeps,
//! Bloch-sphere evolution and the photodissociation environment.
//!
//! Grid points and initial states are independent work items. With
//! [`Execution::Parallel`] they run on the rayon pool; results are always
//! collected in grid order, so both modes return identical values.

use rayon::prelude::*;

use crate::channels::{qubot_generator, Environment, ModelParams};
use crate::dynamics::{evolve, evolve_free_spin, steady_state_nullspace, Schedule, Trajectory};
use crate::error::{Error, Result};
use crate::hilbert::{bloch_state, initial_qubot_state, loop_ground_state, partial_trace, singlet_state, Subsystem};
use crate::metrics::{
    bloch_distance, bloch_vector, composite_metrics, fidelity_to_singlet, logical_concurrence, stabilization_time,
    FidelityConvention, MetricOptions, MetricSample,
};
use crate::scalar::Real;

/// Default Bloch snapshot times, in units of Δ⁻¹.
pub const DEFAULT_SNAPSHOT_TIMES: [f64; 4] = [0.0, 0.4, 0.8, 2.0];
pub const DEFAULT_BLOCH_POINTS: usize = 200;
/// Default Γ values for the stabilization-time curves.
pub const DEFAULT_STABILIZATION_GAMMAS: [f64; 4] = [0.25, 0.5, 1.0, 2.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

fn map_items<I, O, F>(items: &[I], execution: Execution, f: F) -> Vec<O>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> O + Sync + Send,
{
    match execution {
        Execution::Serial => items.iter().map(f).collect(),
        Execution::Parallel => items.par_iter().map(f).collect(),
    }
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * T::of(k as f64) / T::of((n - 1) as f64)).collect(),
    }
}

/// Qubot observables and the free-spin baseline over time.
#[derive(Debug, Clone)]
pub struct TransientResult<T> {
    pub samples: Vec<MetricSample<T>>,
    /// `(t, C)` of the free spins.
    pub baseline: Vec<(T, T)>,
    pub qubot: Trajectory<T>,
    pub free_spin: Trajectory<T>,
}

pub fn run_transient<T: Real>(
    params: &ModelParams<T>,
    t_end: T,
    sample_dt: T,
    options: MetricOptions,
) -> Result<TransientResult<T>> {
    let qubot = evolve(&initial_qubot_state(), params, t_end, sample_dt)?;
    let free_spin = evolve_free_spin(&singlet_state(), params, t_end, sample_dt)?;
    let samples = qubot
        .times
        .iter()
        .zip(&qubot.states)
        .map(|(&t, rho)| composite_metrics(t, rho, options))
        .collect::<Result<Vec<_>>>()?;
    let baseline = free_spin
        .times
        .iter()
        .zip(&free_spin.states)
        .map(|(&t, rho)| Ok((t, logical_concurrence(rho)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TransientResult { samples, baseline, qubot, free_spin })
}

/// Integration window for stabilization-time runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilizationOptions<T> {
    pub t_end: T,
    pub sample_dt: T,
    pub execution: Execution,
}

impl<T: Real> Default for StabilizationOptions<T> {
    fn default() -> Self {
        Self { t_end: T::of(100.0), sample_dt: T::of(0.01), execution: Execution::Parallel }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilizationPoint<T> {
    pub gamma_forget: T,
    pub recovery_rate: T,
    pub c_infinity: T,
    /// `None` when the concurrence has not settled inside the window.
    pub t_o: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilizationCurve<T> {
    pub gamma_dephasing: T,
    pub points: Vec<StabilizationPoint<T>>,
}

/// Stabilization time of one operating point.
pub fn stabilization_point<T: Real>(
    params: &ModelParams<T>,
    options: &StabilizationOptions<T>,
) -> Result<StabilizationPoint<T>> {
    let l = qubot_generator(params)?.liouvillian()?;
    let steady = steady_state_nullspace(&l)?;
    let c_infinity = logical_concurrence(&partial_trace(&steady, Subsystem::Logical)?)?;
    let traj = evolve(&initial_qubot_state(), params, options.t_end, options.sample_dt)?;
    let series = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, rho)| Ok((t, logical_concurrence(&partial_trace(rho, Subsystem::Logical)?)?)))
        .collect::<Result<Vec<_>>>()?;
    let t_o = match stabilization_time(&series, c_infinity) {
        Ok(t) => Some(t),
        Err(Error::NotStabilized) => None,
        Err(e) => return Err(e),
    };
    Ok(StabilizationPoint { gamma_forget: params.gamma_forget, recovery_rate: params.recovery_rate, c_infinity, t_o })
}

/// One curve of `(γ, t_o)` per Γ, with `r = (t_c + 1/γ)⁻¹`.
pub fn run_stabilization_sweep<T: Real>(
    gamma_dephasing_values: &[T],
    gamma_forget_range: &[T],
    correction_time: T,
    options: &StabilizationOptions<T>,
) -> Result<Vec<StabilizationCurve<T>>> {
    if let Some(bad) = gamma_forget_range.iter().find(|g| !(**g > T::zero())) {
        return Err(Error::InvalidParameter {
            name: "gamma_forget_values",
            reason: format!("all rates must be > 0, got {bad}"),
        });
    }
    let mut jobs = Vec::with_capacity(gamma_dephasing_values.len() * gamma_forget_range.len());
    for &gd in gamma_dephasing_values {
        for &gf in gamma_forget_range {
            jobs.push(ModelParams::from_correction_time(gd, gf, correction_time)?);
        }
    }
    let results = map_items(&jobs, options.execution, |p| stabilization_point(p, options));
    let mut results = results.into_iter();
    gamma_dephasing_values
        .iter()
        .map(|&gd| {
            let points = results.by_ref().take(gamma_forget_range.len()).collect::<Result<Vec<_>>>()?;
            Ok(StabilizationCurve { gamma_dephasing: gd, points })
        })
        .collect()
}

/// Steady-state observables at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyRecord<T> {
    pub concurrence: T,
    pub entropy_ab: T,
    pub entropy_loop: T,
    pub fidelity: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<T> {
    pub gamma_dephasing_grid: Vec<T>,
    pub gamma_forget_grid: Vec<T>,
    /// `records[i][j]` belongs to `(gamma_dephasing_grid[i], gamma_forget_grid[j])`.
    pub records: Vec<Vec<Result<SteadyRecord<T>>>>,
}

impl<T: Real> SweepResult<T> {
    pub fn get(&self, i: usize, j: usize) -> &Result<SteadyRecord<T>> {
        &self.records[i][j]
    }

    /// `(Γ, γ, record)` in row-major grid order.
    pub fn iter(&self) -> impl Iterator<Item = (T, T, &Result<SteadyRecord<T>>)> {
        self.gamma_dephasing_grid
            .iter()
            .zip(&self.records)
            .flat_map(move |(&gd, row)| self.gamma_forget_grid.iter().zip(row).map(move |(&gf, rec)| (gd, gf, rec)))
    }
}

/// Steady-state record for one parameter set.
pub fn steady_record<T: Real>(params: &ModelParams<T>, options: MetricOptions) -> Result<SteadyRecord<T>> {
    let l = qubot_generator(params)?.liouvillian()?;
    let steady = steady_state_nullspace(&l)?;
    let m = composite_metrics(T::zero(), &steady, options)?;
    Ok(SteadyRecord {
        concurrence: m.concurrence_ab,
        entropy_ab: m.entropy_ab,
        entropy_loop: m.entropy_loop,
        fidelity: m.fidelity_singlet,
    })
}

pub fn run_steady_sweep<T: Real>(
    gamma_dephasing_grid: &[T],
    gamma_forget_grid: &[T],
    correction_time: T,
    options: MetricOptions,
    execution: Execution,
) -> Result<SweepResult<T>> {
    if gamma_dephasing_grid.is_empty() || gamma_forget_grid.is_empty() {
        return Err(Error::InvalidParameter { name: "grid", reason: "grids must be non-empty".into() });
    }
    for (name, grid) in [("gamma_dephasing_grid", gamma_dephasing_grid), ("gamma_forget_grid", gamma_forget_grid)] {
        if let Some(bad) = grid.iter().find(|g| !(**g > T::zero())) {
            return Err(Error::InvalidParameter { name, reason: format!("rates must be > 0, got {bad}") });
        }
    }
    let mut jobs = Vec::with_capacity(gamma_dephasing_grid.len() * gamma_forget_grid.len());
    for &gd in gamma_dephasing_grid {
        for &gf in gamma_forget_grid {
            jobs.push(ModelParams::from_correction_time(gd, gf, correction_time)?);
        }
    }
    let flat = map_items(&jobs, execution, |p| steady_record(p, options));
    let mut flat = flat.into_iter();
    let records =
        (0..gamma_dephasing_grid.len()).map(|_| flat.by_ref().take(gamma_forget_grid.len()).collect()).collect();
    Ok(SweepResult {
        gamma_dephasing_grid: gamma_dephasing_grid.to_vec(),
        gamma_forget_grid: gamma_forget_grid.to_vec(),
        records,
    })
}

/// Bloch vectors of all sampled initial states at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochSnapshot<T> {
    pub time: T,
    pub points: Vec<[T; 3]>,
}

impl<T: Real> BlochSnapshot<T> {
    /// Largest pairwise Euclidean distance.
    pub fn diameter(&self) -> T {
        let mut d = T::zero();
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                d = d.max(bloch_distance(a, b));
            }
        }
        d
    }

    pub fn centroid(&self) -> [T; 3] {
        let n = T::of(self.points.len().max(1) as f64);
        let mut c = [T::zero(); 3];
        for p in &self.points {
            for k in 0..3 {
                c[k] += p[k];
            }
        }
        c.map(|x| x / n)
    }
}

/// Golden-spiral point set: `(θ, φ)` of `n` quasi-uniform points on the sphere.
pub fn golden_spiral<T: Real>(n: usize) -> Vec<(T, T)> {
    let golden_angle = T::PI() * (T::of(3.0) - T::of(5.0).sqrt());
    let tau = T::PI() * T::of(2.0);
    (0..n)
        .map(|i| {
            let z = T::one() - T::of(2.0) * (T::of(i as f64) + T::of(0.5)) / T::of(n as f64);
            let theta = z.max(-T::one()).min(T::one()).acos();
            let phi = (golden_angle * T::of(i as f64)) % tau;
            (theta, phi)
        })
        .collect()
}

/// Evolves `n_points` pure logical states (loop in `|Φ₀⟩`) and records the
/// logical Bloch vectors at each snapshot time.
pub fn run_bloch_evolution<T: Real>(
    params: &ModelParams<T>,
    snapshot_times: &[T],
    n_points: usize,
    execution: Execution,
) -> Result<Vec<BlochSnapshot<T>>> {
    if n_points == 0 {
        return Err(Error::InvalidParameter { name: "n_points", reason: "need at least one point".into() });
    }
    let generator = qubot_generator(params)?;
    let schedule = Schedule::at_times(&generator.liouvillian()?, generator.rate_scale()?, snapshot_times)?;
    let starts = golden_spiral::<T>(n_points);
    let per_point = map_items(&starts, execution, |&(theta, phi)| -> Result<Vec<[T; 3]>> {
        let rho0 = bloch_state(theta, phi).tensor(&loop_ground_state());
        schedule.run(&rho0)?.iter().map(|rho| bloch_vector(&partial_trace(rho, Subsystem::Logical)?)).collect()
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(snapshot_times
        .iter()
        .enumerate()
        .map(|(k, &time)| BlochSnapshot { time, points: per_point.iter().map(|p| p[k]).collect() })
        .collect())
}

/// Singlet fidelity over time for the qubot and for free spins.
#[derive(Debug, Clone)]
pub struct PhotodissociationResult<T> {
    pub times: Vec<T>,
    pub qubot_fidelity: Vec<T>,
    pub free_fidelity: Vec<T>,
    pub qubot: Trajectory<T>,
    pub free_spin: Trajectory<T>,
}

pub fn run_photodissociation<T: Real>(
    params: &ModelParams<T>,
    t_end: T,
    sample_dt: T,
    convention: FidelityConvention,
) -> Result<PhotodissociationResult<T>> {
    if params.environment != Environment::Photodissociation {
        return Err(Error::InvalidParameter {
            name: "environment",
            reason: "photodissociation scenario needs environment = photodissociation".into(),
        });
    }
    let qubot = evolve(&initial_qubot_state(), params, t_end, sample_dt)?;
    let free_spin = evolve_free_spin(&singlet_state(), params, t_end, sample_dt)?;
    let qubot_fidelity = qubot
        .states
        .iter()
        .map(|rho| Ok(fidelity_to_singlet(&partial_trace(rho, Subsystem::Logical)?)?.select(convention)))
        .collect::<Result<Vec<_>>>()?;
    let free_fidelity = free_spin
        .states
        .iter()
        .map(|rho| Ok(fidelity_to_singlet(rho)?.select(convention)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PhotodissociationResult { times: qubot.times.clone(), qubot_fidelity, free_fidelity, qubot, free_spin })
}
