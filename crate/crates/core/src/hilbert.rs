// Copyright 2026 Qubot Contributors
// SPDX-License-Identifier: Apache-2.0

//! Composite Hilbert space of the logical qubit (AB) and the loop (L).
//!
//! Index convention: the logical qubit is the major factor and the loop the
//! minor one, so composite index `2·a + l` pairs logical state `a` with loop
//! state `l`. Every operator constructor in [`crate::channels`] relies on it.
//!
//! Logical basis: `|0̄⟩ = |↑↓⟩`, `|1̄⟩ = |↓↑⟩`. Loop basis: `|Φ₀⟩`, `|Φ₁⟩`.
//! The two-spin space used for concurrence is ordered `↑↑, ↑↓, ↓↑, ↓↓`.

use std::ops::Deref;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron, ComplexMatrix};
use crate::scalar::{re, Cx, Real};

pub const LOGICAL_DIM: usize = 2;
pub const LOOP_DIM: usize = 2;
pub const COMPOSITE_DIM: usize = LOGICAL_DIM * LOOP_DIM;

/// Which factor `partial_trace` keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    /// The logical qubit AB (traces out the loop).
    Logical,
    /// The loop L (traces out AB).
    Loop,
}

/// `|0̄⟩`.
pub fn ket_zero<T: Real>() -> Vec<Cx<T>> {
    vec![Complex::one(), Complex::zero()]
}

/// `|1̄⟩`.
pub fn ket_one<T: Real>() -> Vec<Cx<T>> {
    vec![Complex::zero(), Complex::one()]
}

/// `|s⟩ = (|0̄⟩ − |1̄⟩)/√2`.
pub fn ket_singlet<T: Real>() -> Vec<Cx<T>> {
    let h = T::FRAC_1_SQRT_2();
    vec![re(h), re(-h)]
}

/// `|t⟩ = (|0̄⟩ + |1̄⟩)/√2`.
pub fn ket_triplet<T: Real>() -> Vec<Cx<T>> {
    let h = T::FRAC_1_SQRT_2();
    vec![re(h), re(h)]
}

/// `|Φ₀⟩`.
pub fn loop_ground<T: Real>() -> Vec<Cx<T>> {
    ket_zero()
}

/// `|Φ₁⟩`.
pub fn loop_excited<T: Real>() -> Vec<Cx<T>> {
    ket_one()
}

/// `|a⟩ ⊗ |b⟩`.
pub fn kron_ket<T: Real>(a: &[Cx<T>], b: &[Cx<T>]) -> Vec<Cx<T>> {
    a.iter().flat_map(|x| b.iter().map(move |y| *x * *y)).collect()
}

/// A validated density matrix: unit trace, Hermitian, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
}

/// Worst-case deviations of a matrix from the density-matrix invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDefects<T> {
    pub trace_drift: T,
    pub hermitian_defect: T,
    pub min_eigenvalue: T,
}

impl<T: Real> StateDefects<T> {
    pub fn of(m: &ComplexMatrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
        }
        let trace = m.trace();
        let trace_drift = (trace - Cx::one()).norm();
        let hermitian_defect = m.hermitian_defect();
        let eig = hermitian_eig(&m.hermitian_part())?;
        let min_eigenvalue = eig.values.first().copied().unwrap_or(T::zero());
        Ok(Self { trace_drift, hermitian_defect, min_eigenvalue })
    }

    /// Describes the first violated invariant, if any.
    pub fn violation(&self) -> Option<String> {
        if !(self.trace_drift <= T::tol(1e-8)) {
            Some(format!("trace drift {:e}", self.trace_drift.to_f64_lossy()))
        } else if !(self.hermitian_defect <= T::tol(1e-10)) {
            Some(format!("hermiticity defect {:e}", self.hermitian_defect.to_f64_lossy()))
        } else if !(self.min_eigenvalue >= -T::tol(1e-8)) {
            Some(format!("negative eigenvalue {:e}", self.min_eigenvalue.to_f64_lossy()))
        } else {
            None
        }
    }
}

impl<T: Real> DensityMatrix<T> {
    /// Validates `matrix` against the density-matrix invariants.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        if !matrix.is_finite() {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        if let Some(v) = StateDefects::of(&matrix)?.violation() {
            return Err(Error::InvalidState(v));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn new_unchecked(matrix: ComplexMatrix<T>) -> Self {
        Self { matrix }
    }

    /// Pure state `|ψ⟩⟨ψ|`; `psi` is normalized first.
    pub fn pure(psi: &[Cx<T>]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt();
        if !(norm > T::zero()) {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let unit: Vec<_> = psi.iter().map(|z| *z / norm).collect();
        Self::new(ComplexMatrix::projector(&unit))
    }

    /// `I/n`.
    pub fn maximally_mixed(n: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(n).scale_real(T::one() / T::of(n as f64)) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn purity(&self) -> T {
        (&self.matrix * &self.matrix).trace().re
    }

    pub fn defects(&self) -> StateDefects<T> {
        StateDefects::of(&self.matrix).expect("density matrices are square")
    }

    /// `½‖a − b‖₁`.
    pub fn trace_distance(&self, other: &Self) -> Result<T> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let diff = (&self.matrix - &other.matrix).hermitian_part();
        let eig = hermitian_eig(&diff)?;
        Ok(eig.values.iter().map(|x| x.abs()).fold(T::zero(), |a, b| a + b) * T::of(0.5))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self { matrix: kron(&self.matrix, &other.matrix) }
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation_in(&self, psi: &[Cx<T>]) -> T {
        let rho_psi = self.matrix.matvec(psi).expect("state dimension");
        psi.iter().zip(&rho_psi).fold(Cx::zero(), |acc, (a, b)| acc + a.conj() * *b).re
    }
}

impl<T> Deref for DensityMatrix<T> {
    type Target = ComplexMatrix<T>;
    fn deref(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }
}

/// `|s⟩⟨s|` on the logical qubit.
pub fn singlet_state<T: Real>() -> DensityMatrix<T> {
    DensityMatrix::new_unchecked(ComplexMatrix::projector(&ket_singlet()))
}

/// `|t⟩⟨t|` on the logical qubit.
pub fn triplet_state<T: Real>() -> DensityMatrix<T> {
    DensityMatrix::new_unchecked(ComplexMatrix::projector(&ket_triplet()))
}

/// `|Φ₀⟩⟨Φ₀|` on the loop.
pub fn loop_ground_state<T: Real>() -> DensityMatrix<T> {
    DensityMatrix::new_unchecked(ComplexMatrix::projector(&loop_ground()))
}

/// Logical Bloch-sphere state `cos(θ/2)|0̄⟩ + e^{iφ} sin(θ/2)|1̄⟩`.
///
/// `+x̂` is the triplet, `−x̂` the singlet, the poles are `|0̄⟩` and `|1̄⟩`.
pub fn bloch_state<T: Real>(theta: T, phi: T) -> DensityMatrix<T> {
    let half = theta * T::of(0.5);
    let psi = [re(half.cos()), Complex::from_polar(half.sin(), phi)];
    DensityMatrix::new_unchecked(ComplexMatrix::projector(&psi))
}

/// `ρ(0) = |s⟩⟨s| ⊗ |Φ₀⟩⟨Φ₀|`.
pub fn initial_qubot_state<T: Real>() -> DensityMatrix<T> {
    singlet_state().tensor(&loop_ground_state())
}

/// Partial trace of a logical ⊗ loop state, keeping `keep`.
pub fn partial_trace<T: Real>(rho: &DensityMatrix<T>, keep: Subsystem) -> Result<DensityMatrix<T>> {
    Ok(DensityMatrix::new_unchecked(partial_trace_matrix(rho.matrix(), keep)?))
}

pub(crate) fn partial_trace_matrix<T: Real>(m: &ComplexMatrix<T>, keep: Subsystem) -> Result<ComplexMatrix<T>> {
    if m.rows() != COMPOSITE_DIM || m.cols() != COMPOSITE_DIM {
        return Err(Error::DimensionMismatch { expected: COMPOSITE_DIM, found: m.rows() });
    }
    let idx = |a: usize, l: usize| a * LOOP_DIM + l;
    Ok(match keep {
        Subsystem::Logical => ComplexMatrix::from_fn(LOGICAL_DIM, LOGICAL_DIM, |i, j| {
            (0..LOOP_DIM).fold(Cx::zero(), |acc, l| acc + m[(idx(i, l), idx(j, l))])
        }),
        Subsystem::Loop => ComplexMatrix::from_fn(LOOP_DIM, LOOP_DIM, |i, j| {
            (0..LOGICAL_DIM).fold(Cx::zero(), |acc, a| acc + m[(idx(a, i), idx(a, j))])
        }),
    })
}

/// Two-spin index of the logical basis states: `|0̄⟩ = |↑↓⟩ → 1`, `|1̄⟩ = |↓↑⟩ → 2`.
const ANTIPARALLEL: [usize; 2] = [1, 2];

/// Places a logical 2×2 state into the antiparallel block of the two-spin space.
pub fn embed_logical_to_two_spin<T: Real>(rho_logical: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    if rho_logical.dim() != LOGICAL_DIM {
        return Err(Error::DimensionMismatch { expected: LOGICAL_DIM, found: rho_logical.dim() });
    }
    let mut m = ComplexMatrix::zeros(4, 4);
    for (a, &ia) in ANTIPARALLEL.iter().enumerate() {
        for (b, &ib) in ANTIPARALLEL.iter().enumerate() {
            m[(ia, ib)] = rho_logical[(a, b)];
        }
    }
    Ok(DensityMatrix::new_unchecked(m))
}

/// Restriction of a two-spin operator to the antiparallel block; inverse of
/// [`embed_logical_to_two_spin`] on its image.
pub fn project_two_spin_to_logical<T: Real>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(2, 2, |a, b| m[(ANTIPARALLEL[a], ANTIPARALLEL[b])])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::testing::random_density;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type D = DensityMatrix<f64>;
    type M = ComplexMatrix<f64>;

    #[test]
    fn singlet_entries() {
        let s: D = singlet_state();
        let want = M::from_real(2, 2, &[0.5, -0.5, -0.5, 0.5]);
        assert!(s.max_abs_diff(&want) < 1e-15);
        assert!((s.trace().re - 1.0).abs() < 1e-15);
        assert!((s.purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn basis_vectors_are_orthonormal() {
        let s: Vec<Cx<f64>> = ket_singlet();
        let t: Vec<Cx<f64>> = ket_triplet();
        let dot = |a: &[Cx<f64>], b: &[Cx<f64>]| -> Cx<f64> {
            a.iter().zip(b).fold(Cx::zero(), |acc, (x, y)| acc + x.conj() * y)
        };
        assert!((dot(&s, &s).re - 1.0).abs() < 1e-15);
        assert!((dot(&t, &t).re - 1.0).abs() < 1e-15);
        assert!(dot(&s, &t).norm() < 1e-15);
    }

    #[test]
    fn bloch_state_cardinal_points() {
        let north: D = bloch_state(0.0, 0.0);
        assert!(north.max_abs_diff(&M::projector(&ket_zero())) < 1e-15);
        let minus_x: D = bloch_state(std::f64::consts::FRAC_PI_2, std::f64::consts::PI);
        assert!(minus_x.max_abs_diff(&singlet_state()) < 1e-15);
        let plus_x: D = bloch_state(std::f64::consts::FRAC_PI_2, 0.0);
        assert!(plus_x.max_abs_diff(&triplet_state()) < 1e-15);
    }

    #[test]
    fn initial_state_is_pure_product() {
        let r: D = initial_qubot_state();
        assert!((r.trace().re - 1.0).abs() < 1e-15);
        assert!((r.purity() - 1.0).abs() < 1e-15);
        let ab = partial_trace(&r, Subsystem::Logical).unwrap();
        assert!(ab.max_abs_diff(&singlet_state()) < 1e-15);
        let l = partial_trace(&r, Subsystem::Loop).unwrap();
        assert!(l.max_abs_diff(&loop_ground_state()) < 1e-15);
    }

    #[test]
    fn maximally_entangled_cut_gives_mixed_marginals() {
        // (|0̄Φ₀⟩ + |1̄Φ₁⟩)/√2
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [re(h), re(0.0), re(0.0), re(h)];
        let r = D::pure(&psi).unwrap();
        let half = D::maximally_mixed(2);
        for keep in [Subsystem::Logical, Subsystem::Loop] {
            assert!(partial_trace(&r, keep).unwrap().max_abs_diff(&half) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_preserves_trace_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let r = D::new(random_density(&mut rng, 4)).unwrap();
            for keep in [Subsystem::Logical, Subsystem::Loop] {
                let p = partial_trace(&r, keep).unwrap();
                assert!((p.trace().re - 1.0).abs() < 1e-12);
                D::new(p.into_matrix()).unwrap();
            }
        }
    }

    #[test]
    fn embedding_maps_singlet_to_two_spin_singlet() {
        let e = embed_logical_to_two_spin(&singlet_state::<f64>()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let two_spin_singlet = M::projector(&[re(0.0), re(h), re(-h), re(0.0)]);
        assert!(e.max_abs_diff(&two_spin_singlet) < 1e-15);
        let zero = embed_logical_to_two_spin(&D::pure(&ket_zero()).unwrap()).unwrap();
        let up_down = M::projector(&[re(0.0), re(1.0), re(0.0), re(0.0)]);
        assert_eq!(zero.matrix(), &up_down);
    }

    #[test]
    fn embedding_preserves_trace_and_inverts() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let r = D::new(random_density(&mut rng, 2)).unwrap();
            let e = embed_logical_to_two_spin(&r).unwrap();
            assert!((e.trace().re - 1.0).abs() < 1e-12);
            assert_eq!(&project_two_spin_to_logical(e.matrix()), r.matrix());
        }
    }

    #[test]
    fn rejects_invalid_states() {
        assert!(D::new(M::identity(2)).is_err());
        assert!(D::new(M::from_real(2, 2, &[1.5, 0.0, 0.0, -0.5])).is_err());
        assert!(D::new(M::from_real(2, 2, &[0.5, 0.3, 0.0, 0.5])).is_err());
    }

    proptest! {
        #[test]
        fn partial_trace_of_product_recovers_factor(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = D::new(random_density(&mut rng, 2)).unwrap();
            let b = D::new(random_density(&mut rng, 2)).unwrap();
            let ab = a.tensor(&b);
            prop_assert!(partial_trace(&ab, Subsystem::Logical).unwrap().max_abs_diff(&a) <= 1e-14);
            prop_assert!(partial_trace(&ab, Subsystem::Loop).unwrap().max_abs_diff(&b) <= 1e-14);
        }

        #[test]
        fn bloch_states_are_pure(theta in 0.0f64..std::f64::consts::PI, phi in 0.0f64..std::f64::consts::TAU) {
            let r = bloch_state(theta, phi);
            prop_assert!((r.purity() - 1.0).abs() <= 1e-12);
            prop_assert!(DensityMatrix::new(r.into_matrix()).is_ok());
        }
    }
}
