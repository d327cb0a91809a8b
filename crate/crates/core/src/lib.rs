// Copyright 2026 Qubot Contributors
// SPDX-License-Identifier: Apache-2.0

//! Lindblad simulation of the qubot: a two-spin logical qubit kept close to
//! the singlet by recovery and loop-reset (forgetness) channels while a
//! dephasing or photodissociation environment acts on it.
//!
//! The numerical modules are generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`, which is what the CLI and the
//! scenario runners use.

// NaN-rejecting checks are written as negated comparisons on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channels;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod hilbert;
pub mod linalg;
pub mod metrics;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

pub type CMatrix = linalg::ComplexMatrix<f64>;
pub type Density = hilbert::DensityMatrix<f64>;
pub type Params = channels::ModelParams<f64>;
pub type Jump = channels::JumpOperator<f64>;
pub type Liouvillian = dynamics::Liouvillian<f64>;
pub type Trajectory = dynamics::Trajectory<f64>;
pub type Sample = metrics::MetricSample<f64>;
pub type Sweep = experiments::SweepResult<f64>;

/// Version string echoed into every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
