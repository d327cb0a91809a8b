// Copyright 2026 Qubot Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Every failure the numerical core can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },
    #[error("linear system is singular (pivot {pivot:e})")]
    Singular { pivot: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("forgetness rate is zero; recovery rate is undefined")]
    ZeroForgetness,
    #[error("state invariant violated at t = {time}: {what}")]
    InvariantViolated { time: f64, what: String },
    #[error("steady state is degenerate (null space dimension > 1)")]
    DegenerateSteadyState,
    #[error("steady-state residual {residual:e} exceeds tolerance")]
    SteadyStateResidual { residual: f64 },
    #[error("integration did not converge by t = {time}")]
    NoConvergence { time: f64 },
    #[error("concurrence never stabilized within the series")]
    NotStabilized,
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::DegenerateSteadyState
                | Error::SteadyStateResidual { .. }
                | Error::InvariantViolated { .. }
                | Error::NotStabilized
                | Error::Singular { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
