// Copyright 2026 Qubot Contributors
// SPDX-License-Identifier: Apache-2.0

//! Time integration of the master equation and steady states.
//!
//! Vectorization is column stacking, `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)`, so the
//! generator becomes
//!
//! ```text
//! L = −i(I ⊗ H − Hᵀ ⊗ I) + Σ_a [ conj(L_a) ⊗ L_a − ½ I ⊗ L_a†L_a − ½ (L_a†L_a)ᵀ ⊗ I ]
//! ```
//!
//! Integration is classical fixed-step RK4. Because the generator is linear
//! and time independent, one RK4 step is the fixed matrix obtained by
//! running the four stages on the identity; a sample interval is that matrix
//! raised to the number of substeps. The arithmetic is the same RK4
//! polynomial in `hL`, just evaluated once instead of per state.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::channels::{free_spin_generator, qubot_generator, Generator, JumpOperator, ModelParams};
use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, StateDefects};
use crate::linalg::{kron, solve_linear, ComplexMatrix};
use crate::scalar::{Cx, Real};

/// Largest allowed `h · rate_scale` for the internal RK4 step.
pub const STEP_PRODUCT: f64 = 0.01;

/// Sample spacing used while integrating towards a steady state.
pub const STEADY_CHECK_INTERVAL: f64 = 0.1;
/// Consecutive quiet samples required to declare convergence.
pub const STEADY_WINDOW: usize = 10;
/// Max-entry change between samples that counts as quiet.
pub const STEADY_CHANGE_TOL: f64 = 1e-12;
/// Integration horizon before giving up, in units of Δ⁻¹.
pub const STEADY_MAX_TIME: f64 = 1e4;

/// Matrix form of the master-equation generator acting on `vec(ρ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian<T> {
    matrix: ComplexMatrix<T>,
    dim: usize,
}

impl<T: Real> Liouvillian<T> {
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    /// Dimension of the underlying Hilbert space (the matrix is `dim² × dim²`).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `unvec(L vec(ρ))`.
    pub fn apply(&self, rho: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if rho.rows() != self.dim || rho.cols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rho.rows() });
        }
        let v = self.matrix.matvec(&rho.vectorize())?;
        Ok(ComplexMatrix::unvectorize(&v, self.dim))
    }
}

pub fn build_liouvillian<T: Real>(h: &ComplexMatrix<T>, jumps: &[JumpOperator<T>]) -> Result<Liouvillian<T>> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch { expected: h.rows(), found: h.cols() });
    }
    let n = h.rows();
    let id = ComplexMatrix::<T>::identity(n);
    let minus_i = Complex::new(T::zero(), -T::one());
    let mut l = (&kron(&id, h) - &kron(&h.transpose(), &id)).scale(minus_i);
    let half = T::of(0.5);
    for jump in jumps {
        let a = &jump.matrix;
        if a.rows() != n || a.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: a.rows() });
        }
        let ada = &a.adjoint() * a;
        let gain = kron(&a.conj(), a);
        let loss = &kron(&id, &ada) + &kron(&ada.transpose(), &id);
        l = &l + &(&gain - &loss.scale_real(half));
    }
    Ok(Liouvillian { matrix: l, dim: n })
}

impl<T: Real> Generator<T> {
    pub fn liouvillian(&self) -> Result<Liouvillian<T>> {
        build_liouvillian(&self.hamiltonian, &self.jumps)
    }
}

/// The one-step RK4 map `I + hL + (hL)²/2 + (hL)³/6 + (hL)⁴/24`, computed by
/// running the RK4 stages on the identity.
pub fn rk4_step_map<T: Real>(l: &Liouvillian<T>, h: T) -> ComplexMatrix<T> {
    let x = ComplexMatrix::<T>::identity(l.matrix.rows());
    let lm = &l.matrix;
    let half = h * T::of(0.5);
    let k1 = lm * &x;
    let k2 = lm * &(&x + &k1.scale_real(half));
    let k3 = lm * &(&x + &k2.scale_real(half));
    let k4 = lm * &(&x + &k3.scale_real(h));
    let two = T::of(2.0);
    let incr = &(&(&k1 + &k2.scale_real(two)) + &k3.scale_real(two)) + &k4;
    &x + &incr.scale_real(h / T::of(6.0))
}

fn matrix_power<T: Real>(m: &ComplexMatrix<T>, mut k: usize) -> ComplexMatrix<T> {
    let mut result = ComplexMatrix::identity(m.rows());
    let mut base = m.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    result
}

/// RK4 propagation over one fixed interval.
#[derive(Debug, Clone)]
pub struct Rk4Propagator<T> {
    interval: T,
    step: T,
    substeps: usize,
    map: ComplexMatrix<T>,
}

impl<T: Real> Rk4Propagator<T> {
    /// Picks the fewest equal substeps with `step · rate_scale ≤ 0.01`.
    pub fn new(l: &Liouvillian<T>, interval: T, rate_scale: T) -> Self {
        let raw = (interval * rate_scale / T::of(STEP_PRODUCT)).ceil().to_f64_lossy();
        let substeps = if interval > T::zero() { (raw as usize).max(1) } else { 0 };
        Self::with_substeps(l, interval, substeps)
    }

    pub fn with_substeps(l: &Liouvillian<T>, interval: T, substeps: usize) -> Self {
        if substeps == 0 {
            let n = l.matrix.rows();
            return Self { interval, step: T::zero(), substeps, map: ComplexMatrix::identity(n) };
        }
        let step = interval / T::of(substeps as f64);
        let one_step = rk4_step_map(l, step);
        Self { interval, step, substeps, map: matrix_power(&one_step, substeps) }
    }

    pub fn interval(&self) -> T {
        self.interval
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn substeps(&self) -> usize {
        self.substeps
    }

    pub fn propagate(&self, v: &[Cx<T>]) -> Vec<Cx<T>> {
        self.map.matvec(v).expect("propagator dimension")
    }
}

/// Sample times and the propagators connecting them, shared across initial states.
#[derive(Debug, Clone)]
pub struct Schedule<T> {
    times: Vec<T>,
    /// `links[i]` indexes the propagator from the previous sample (or t = 0) to `times[i]`.
    links: Vec<usize>,
    propagators: Vec<Rk4Propagator<T>>,
    dim: usize,
}

impl<T: Real> Schedule<T> {
    /// Samples at `k · sample_dt` up to `t_end`, plus `t_end` itself when it
    /// is not on the grid.
    pub fn uniform(l: &Liouvillian<T>, rate_scale: T, t_end: T, sample_dt: T) -> Result<Self> {
        if !(t_end > T::zero()) || !t_end.is_finite() {
            return Err(Error::InvalidParameter { name: "t_end", reason: format!("must be > 0, got {t_end}") });
        }
        if !(sample_dt > T::zero()) || !sample_dt.is_finite() {
            return Err(Error::InvalidParameter { name: "sample_dt", reason: format!("must be > 0, got {sample_dt}") });
        }
        let slack = T::of(1e-9);
        let full = (t_end / sample_dt + slack).floor().to_f64_lossy() as usize;
        let mut times: Vec<T> = (0..=full).map(|k| T::of(k as f64) * sample_dt).collect();
        let mut links = vec![0; full + 1];
        let mut propagators =
            vec![Rk4Propagator::with_substeps(l, T::zero(), 0), Rk4Propagator::new(l, sample_dt, rate_scale)];
        for link in links.iter_mut().skip(1) {
            *link = 1;
        }
        let last = *times.last().expect("non-empty");
        let rest = t_end - last;
        if rest > slack * sample_dt {
            propagators.push(Rk4Propagator::new(l, rest, rate_scale));
            times.push(t_end);
            links.push(2);
        }
        Ok(Self { times, links, propagators, dim: l.dim })
    }

    /// Samples exactly at `times` (ascending, ≥ 0), integrating from t = 0.
    pub fn at_times(l: &Liouvillian<T>, rate_scale: T, times: &[T]) -> Result<Self> {
        let mut prev = T::zero();
        let mut propagators = Vec::with_capacity(times.len());
        for &t in times {
            if !(t >= prev) || !t.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "snapshot_times",
                    reason: "times must be finite, non-negative and ascending".into(),
                });
            }
            propagators.push(Rk4Propagator::new(l, t - prev, rate_scale));
            prev = t;
        }
        Ok(Self { times: times.to_vec(), links: (0..times.len()).collect(), propagators, dim: l.dim })
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn propagators(&self) -> &[Rk4Propagator<T>] {
        &self.propagators
    }

    /// Integrates `rho0`, validating every sample.
    pub fn run(&self, rho0: &DensityMatrix<T>) -> Result<Vec<DensityMatrix<T>>> {
        if rho0.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rho0.dim() });
        }
        let mut v = rho0.vectorize();
        let mut states = Vec::with_capacity(self.times.len());
        for (&t, &link) in self.times.iter().zip(&self.links) {
            v = self.propagators[link].propagate(&v);
            states.push(checked_state(&v, self.dim, t)?);
        }
        Ok(states)
    }
}

fn checked_state<T: Real>(v: &[Cx<T>], dim: usize, time: T) -> Result<DensityMatrix<T>> {
    let m = ComplexMatrix::unvectorize(v, dim);
    let violated = |what: String| Error::InvariantViolated { time: time.to_f64_lossy(), what };
    if !m.is_finite() {
        return Err(violated("non-finite entries".into()));
    }
    if let Some(what) = StateDefects::of(&m)?.violation() {
        return Err(violated(what));
    }
    Ok(DensityMatrix::new_unchecked(m))
}

/// Time-ordered samples of an integrated state.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<DensityMatrix<T>>,
    pub params: ModelParams<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &DensityMatrix<T> {
        self.states.last().expect("trajectories always hold the initial sample")
    }

    /// Worst trace drift, Hermiticity defect and minimum eigenvalue over all samples.
    pub fn worst_defects(&self) -> StateDefects<T> {
        self.states.iter().map(|s| s.defects()).fold(
            StateDefects { trace_drift: T::zero(), hermitian_defect: T::zero(), min_eigenvalue: T::infinity() },
            |acc, d| StateDefects {
                trace_drift: acc.trace_drift.max(d.trace_drift),
                hermitian_defect: acc.hermitian_defect.max(d.hermitian_defect),
                min_eigenvalue: acc.min_eigenvalue.min(d.min_eigenvalue),
            },
        )
    }
}

/// Integrates an arbitrary generator sampled every `sample_dt` up to `t_end`.
pub fn evolve_generator<T: Real>(
    generator: &Generator<T>,
    rho0: &DensityMatrix<T>,
    params: &ModelParams<T>,
    t_end: T,
    sample_dt: T,
) -> Result<Trajectory<T>> {
    let l = generator.liouvillian()?;
    let schedule = Schedule::uniform(&l, generator.rate_scale()?, t_end, sample_dt)?;
    let states = schedule.run(rho0)?;
    Ok(Trajectory { times: schedule.times, states, params: *params })
}

/// Integrates the qubot master equation from `rho0` (dimension 4).
pub fn evolve<T: Real>(
    rho0: &DensityMatrix<T>,
    params: &ModelParams<T>,
    t_end: T,
    sample_dt: T,
) -> Result<Trajectory<T>> {
    evolve_generator(&qubot_generator(params)?, rho0, params, t_end, sample_dt)
}

/// Integrates the free-spin baseline from a logical state (dimension 2).
pub fn evolve_free_spin<T: Real>(
    rho0: &DensityMatrix<T>,
    params: &ModelParams<T>,
    t_end: T,
    sample_dt: T,
) -> Result<Trajectory<T>> {
    evolve_generator(&free_spin_generator(params)?, rho0, params, t_end, sample_dt)
}

/// Steady state from `L vec(ρ) = 0` with one row replaced by `tr ρ = 1`.
///
/// The replaced row is the first diagonal one; trace preservation makes the
/// diagonal rows linearly dependent, so this keeps the rank whenever the null
/// space is one-dimensional and otherwise leaves the system singular.
pub fn steady_state_nullspace<T: Real>(liouvillian: &Liouvillian<T>) -> Result<DensityMatrix<T>> {
    let n = liouvillian.dim;
    let nn = n * n;
    let mut system = liouvillian.matrix.clone();
    for j in 0..nn {
        system[(0, j)] = Cx::zero();
    }
    for i in 0..n {
        system[(0, i * n + i)] = Cx::one();
    }
    let mut rhs = vec![Cx::zero(); nn];
    rhs[0] = Cx::one();
    let v = match solve_linear(&system, &rhs) {
        Ok(v) => v,
        Err(Error::Singular { .. }) => return Err(Error::DegenerateSteadyState),
        Err(e) => return Err(e),
    };
    let residual = liouvillian.matrix.matvec(&v)?.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    if !(residual <= T::tol(1e-10)) {
        return Err(Error::SteadyStateResidual { residual: residual.to_f64_lossy() });
    }
    DensityMatrix::new(ComplexMatrix::unvectorize(&v, n))
}

/// Integrates until the state stops changing.
///
/// Samples every [`STEADY_CHECK_INTERVAL`]; converged once
/// [`STEADY_WINDOW`] consecutive samples each differ from their predecessor
/// by less than [`STEADY_CHANGE_TOL`] in max norm.
pub fn steady_state_by_integration<T: Real>(
    rho0: &DensityMatrix<T>,
    params: &ModelParams<T>,
) -> Result<DensityMatrix<T>> {
    if !(params.gamma_forget > T::zero()) || !(params.recovery_rate > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "gamma_forget",
            reason: "integration to a steady state needs gamma_forget > 0 and recovery_rate > 0".into(),
        });
    }
    let generator = qubot_generator(params)?;
    integrate_to_steady_state(&generator, rho0)
}

pub fn integrate_to_steady_state<T: Real>(
    generator: &Generator<T>,
    rho0: &DensityMatrix<T>,
) -> Result<DensityMatrix<T>> {
    let dim = generator.dim();
    if rho0.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: rho0.dim() });
    }
    let l = generator.liouvillian()?;
    let dt = T::of(STEADY_CHECK_INTERVAL);
    let prop = Rk4Propagator::new(&l, dt, generator.rate_scale()?);
    let tol = T::tol(STEADY_CHANGE_TOL);
    let max_samples = (STEADY_MAX_TIME / STEADY_CHECK_INTERVAL).round() as usize;

    let mut v = rho0.vectorize();
    let mut quiet = 0;
    for k in 1..=max_samples {
        let next = prop.propagate(&v);
        let change = next.iter().zip(&v).fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()));
        v = next;
        let time = T::of(k as f64) * dt;
        let state = checked_state(&v, dim, time)?;
        quiet = if change < tol { quiet + 1 } else { 0 };
        if quiet >= STEADY_WINDOW {
            return Ok(state);
        }
    }
    Err(Error::NoConvergence { time: STEADY_MAX_TIME })
}
