// Copyright 2026 Qubot Contributors
// SPDX-License-Identifier: Apache-2.0

//! Entanglement, entropy, fidelity and Bloch-vector measures.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hilbert::{
    embed_logical_to_two_spin, ket_singlet, partial_trace, DensityMatrix, Subsystem, COMPOSITE_DIM, LOGICAL_DIM,
};
use crate::linalg::{hermitian_eig, psd_sqrt, ComplexMatrix};
use crate::scalar::Real;

/// Logarithm base for entropies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EntropyBase {
    /// Natural log. A qubit saturates at ln 2 ≈ 0.693.
    #[default]
    Nats,
    /// Log base 2. A qubit saturates at 1.
    Bits,
}

impl EntropyBase {
    pub fn as_str(&self) -> &'static str {
        match self {
            EntropyBase::Nats => "nats",
            EntropyBase::Bits => "bits",
        }
    }
}

impl FromStr for EntropyBase {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "nats" => Ok(EntropyBase::Nats),
            "bits" => Ok(EntropyBase::Bits),
            other => Err(format!("unknown entropy base `{other}` (expected nats or bits)")),
        }
    }
}

/// How fidelity to the singlet is reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FidelityConvention {
    /// `⟨s|ρ|s⟩`.
    #[default]
    Overlap,
    /// `√⟨s|ρ|s⟩`, the Uhlmann fidelity against a pure target.
    Sqrt,
}

impl FidelityConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            FidelityConvention::Overlap => "overlap",
            FidelityConvention::Sqrt => "sqrt",
        }
    }
}

impl FromStr for FidelityConvention {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "overlap" => Ok(FidelityConvention::Overlap),
            "sqrt" => Ok(FidelityConvention::Sqrt),
            other => Err(format!("unknown fidelity convention `{other}` (expected overlap or sqrt)")),
        }
    }
}

impl fmt::Display for FidelityConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for EntropyBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Both fidelity conventions for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingletFidelity<T> {
    pub overlap: T,
    pub sqrt_overlap: T,
}

impl<T: Real> SingletFidelity<T> {
    pub fn select(&self, convention: FidelityConvention) -> T {
        match convention {
            FidelityConvention::Overlap => self.overlap,
            FidelityConvention::Sqrt => self.sqrt_overlap,
        }
    }
}

/// `σ_y ⊗ σ_y`, which is real.
fn spin_flip<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_real(4, 4, &[0., 0., 0., -1., 0., 0., 1., 0., 0., 1., 0., 0., -1., 0., 0., 0.])
}

/// Wootters concurrence of a two-spin state.
///
/// Uses the Hermitian form: the `λᵢ` are square roots of the eigenvalues of
/// `√ρ ρ̃ √ρ` with `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn concurrence<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: rho.dim() });
    }
    let y = spin_flip::<T>();
    let tilde = &(&y * &rho.conj()) * &y;
    let root = psd_sqrt(rho.matrix())?;
    let r = (&(&root * &tilde) * &root).hermitian_part();
    let eig = hermitian_eig(&r)?;
    // Eigenvalues at roundoff level would otherwise be lifted to ~1e-8 by the square root.
    let floor = T::tol(1e-14) * eig.values.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let mut lambdas: Vec<T> = eig.values.iter().map(|&x| if x <= floor { T::zero() } else { x.sqrt() }).collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.max(T::zero()))
}

/// Concurrence of a logical state, `2|⟨0̄|ρ|1̄⟩|`.
///
/// Exact for every state supported on the antiparallel two-spin block.
pub fn concurrence_antiparallel<T: Real>(rho_logical: &DensityMatrix<T>) -> Result<T> {
    if rho_logical.dim() != LOGICAL_DIM {
        return Err(Error::DimensionMismatch { expected: LOGICAL_DIM, found: rho_logical.dim() });
    }
    Ok(T::of(2.0) * rho_logical[(0, 1)].norm())
}

/// Concurrence of a logical state through the two-spin embedding.
pub fn logical_concurrence<T: Real>(rho_logical: &DensityMatrix<T>) -> Result<T> {
    concurrence(&embed_logical_to_two_spin(rho_logical)?)
}

/// `S = −Σ λ log λ`, skipping eigenvalues below `1e-12`.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>, base: EntropyBase) -> Result<T> {
    let eig = hermitian_eig(&rho.hermitian_part())?;
    let cutoff = T::tol(1e-12);
    let nats = eig.values.iter().filter(|&&x| x > cutoff).fold(T::zero(), |acc, &x| acc - x * x.ln()).max(T::zero());
    Ok(match base {
        EntropyBase::Nats => nats,
        EntropyBase::Bits => nats / T::LN_2(),
    })
}

pub fn fidelity_to_singlet<T: Real>(rho_logical: &DensityMatrix<T>) -> Result<SingletFidelity<T>> {
    if rho_logical.dim() != LOGICAL_DIM {
        return Err(Error::DimensionMismatch { expected: LOGICAL_DIM, found: rho_logical.dim() });
    }
    let overlap = rho_logical.expectation_in(&ket_singlet()).max(T::zero());
    Ok(SingletFidelity { overlap, sqrt_overlap: overlap.sqrt() })
}

/// Logical Pauli expectations `(⟨X̄⟩, ⟨Ȳ⟩, ⟨Z̄⟩)` in the `{|0̄⟩, |1̄⟩}` basis.
pub fn bloch_vector<T: Real>(rho_logical: &DensityMatrix<T>) -> Result<[T; 3]> {
    if rho_logical.dim() != LOGICAL_DIM {
        return Err(Error::DimensionMismatch { expected: LOGICAL_DIM, found: rho_logical.dim() });
    }
    let two = T::of(2.0);
    let off = rho_logical[(1, 0)];
    Ok([two * off.re, two * off.im, rho_logical[(0, 0)].re - rho_logical[(1, 1)].re])
}

/// Relative stabilization threshold, `|C − C∞|/C∞ ≤ 10⁻³`.
pub const STABILIZATION_REL_TOL: f64 = 1e-3;
/// Below this `C∞` the criterion switches to `|C − C∞| ≤ 10⁻⁶`.
pub const STABILIZATION_ABS_TOL: f64 = 1e-6;

/// Earliest sample time from which the concurrence stays within 0.1% of `c_infinity`.
pub fn stabilization_time<T: Real>(series: &[(T, T)], c_infinity: T) -> Result<T> {
    if series.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::InvalidParameter { name: "concurrence_series", reason: "times must be increasing".into() });
    }
    let abs_tol = T::of(STABILIZATION_ABS_TOL);
    let within = |c: T| {
        if c_infinity < abs_tol {
            (c - c_infinity).abs() <= abs_tol
        } else {
            (c - c_infinity).abs() / c_infinity <= T::of(STABILIZATION_REL_TOL)
        }
    };
    let first_settled = series.iter().rposition(|&(_, c)| !within(c)).map_or(0, |i| i + 1);
    series.get(first_settled).map(|&(t, _)| t).ok_or(Error::NotStabilized)
}

/// Observables of a composite state at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSample<T> {
    pub time: T,
    pub concurrence_ab: T,
    pub entropy_ab: T,
    pub entropy_loop: T,
    pub fidelity_singlet: T,
}

/// Reporting conventions for entropies and fidelities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MetricOptions {
    pub entropy_base: EntropyBase,
    pub fidelity: FidelityConvention,
}

/// Logical-qubit and loop observables of a logical ⊗ loop state.
pub fn composite_metrics<T: Real>(time: T, rho: &DensityMatrix<T>, options: MetricOptions) -> Result<MetricSample<T>> {
    if rho.dim() != COMPOSITE_DIM {
        return Err(Error::DimensionMismatch { expected: COMPOSITE_DIM, found: rho.dim() });
    }
    let ab = partial_trace(rho, Subsystem::Logical)?;
    let l = partial_trace(rho, Subsystem::Loop)?;
    Ok(MetricSample {
        time,
        concurrence_ab: logical_concurrence(&ab)?,
        entropy_ab: von_neumann_entropy(&ab, options.entropy_base)?,
        entropy_loop: von_neumann_entropy(&l, options.entropy_base)?,
        fidelity_singlet: fidelity_to_singlet(&ab)?.select(options.fidelity),
    })
}

/// `‖v‖₂` for a Bloch vector.
pub fn bloch_norm<T: Real>(v: &[T; 3]) -> T {
    v.iter().fold(T::zero(), |a, x| a + *x * *x).sqrt()
}

pub fn bloch_distance<T: Real>(a: &[T; 3], b: &[T; 3]) -> T {
    bloch_norm(&[a[0] - b[0], a[1] - b[1], a[2] - b[2]])
}
