// Copyright 2026 Qubot Contributors
// SPDX-License-Identifier: Apache-2.0

//! Hamiltonian, jump operators and the Lindblad generator of the qubot.
//!
//! Rates are in units of the loop gap Δ and times in units of Δ⁻¹.

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hilbert::{
    ket_one, ket_singlet, ket_triplet, ket_zero, loop_excited, loop_ground, DensityMatrix, COMPOSITE_DIM, LOGICAL_DIM,
};
use crate::linalg::{hermitian_eig, kron, ComplexMatrix};
use crate::scalar::{re, Cx, Real};

/// The noise the logical qubit is exposed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Environment {
    Dephasing,
    Photodissociation,
}

impl Environment {
    pub fn as_str(&self) -> &'static str {
        match self {
            Environment::Dephasing => "dephasing",
            Environment::Photodissociation => "photodissociation",
        }
    }
}

impl std::str::FromStr for Environment {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "dephasing" => Ok(Environment::Dephasing),
            "photodissociation" => Ok(Environment::Photodissociation),
            other => Err(format!("unknown environment `{other}`")),
        }
    }
}

/// Rates of the qubot model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    /// Γ, decoherence rate of the environment.
    pub gamma_dephasing: T,
    /// γ, loop reset (forgetness) rate.
    pub gamma_forget: T,
    /// r, recovery rate.
    pub recovery_rate: T,
    /// t_c, correction time.
    pub correction_time: T,
    /// Δ, loop gap. 1 in normalized units.
    pub delta: T,
    pub environment: Environment,
}

impl<T: Real> ModelParams<T> {
    /// Dephasing model with `r = (t_c + 1/γ)⁻¹` and `Δ = 1`.
    pub fn from_correction_time(gamma_dephasing: T, gamma_forget: T, correction_time: T) -> Result<Self> {
        let params = Self {
            gamma_dephasing,
            gamma_forget,
            recovery_rate: recovery_rate(correction_time, gamma_forget)?,
            correction_time,
            delta: T::one(),
            environment: Environment::Dephasing,
        };
        params.validate()?;
        Ok(params)
    }

    /// Dephasing model with every rate given explicitly (`t_c = 0`, `Δ = 1`).
    pub fn with_rates(gamma_dephasing: T, gamma_forget: T, recovery_rate: T) -> Result<Self> {
        let params = Self {
            gamma_dephasing,
            gamma_forget,
            recovery_rate,
            correction_time: T::zero(),
            delta: T::one(),
            environment: Environment::Dephasing,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_environment(mut self, environment: Environment) -> Self {
        self.environment = environment;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("gamma_dephasing", self.gamma_dephasing),
            ("gamma_forget", self.gamma_forget),
            ("recovery_rate", self.recovery_rate),
            ("correction_time", self.correction_time),
        ];
        for (name, value) in checks {
            if !(value >= T::zero()) || !value.is_finite() {
                return Err(Error::InvalidParameter { name, reason: format!("must be finite and >= 0, got {value}") });
            }
        }
        if !(self.delta > T::zero()) || !self.delta.is_finite() {
            return Err(Error::InvalidParameter { name: "delta", reason: format!("must be > 0, got {}", self.delta) });
        }
        Ok(())
    }

    /// `Γ + γ + r + Δ`.
    pub fn rate_sum(&self) -> T {
        self.gamma_dephasing + self.gamma_forget + self.recovery_rate + self.delta
    }
}

/// `r = (t_c + 1/γ)⁻¹`.
pub fn recovery_rate<T: Real>(correction_time: T, gamma_forget: T) -> Result<T> {
    if gamma_forget == T::zero() {
        return Err(Error::ZeroForgetness);
    }
    if !(gamma_forget > T::zero()) || !(correction_time >= T::zero()) {
        return Err(Error::InvalidParameter {
            name: "gamma_forget",
            reason: format!("need gamma_forget > 0 and correction_time >= 0, got {gamma_forget}, {correction_time}"),
        });
    }
    Ok(T::one() / (correction_time + T::one() / gamma_forget))
}

/// Channel a jump operator belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpChannel {
    Dephasing,
    Recovery,
    Forgetness,
    Photodissociation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JumpOperator<T> {
    pub matrix: ComplexMatrix<T>,
    pub channel: JumpChannel,
}

impl<T: Real> JumpOperator<T> {
    fn new(matrix: ComplexMatrix<T>, channel: JumpChannel) -> Self {
        Self { matrix, channel }
    }

    /// `L†L`.
    pub fn decay_operator(&self) -> ComplexMatrix<T> {
        &self.matrix.adjoint() * &self.matrix
    }
}

fn identity2<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::identity(2)
}

fn rate_sqrt<T: Real>(name: &'static str, rate: T) -> Result<T> {
    if !(rate >= T::zero()) {
        return Err(Error::InvalidParameter { name, reason: format!("rate must be >= 0, got {rate}") });
    }
    Ok(rate.sqrt())
}

/// `H = 1 ⊗ (Δ/2) Z`.
pub fn loop_hamiltonian<T: Real>(delta: T) -> ComplexMatrix<T> {
    let half = delta * T::of(0.5);
    let z = ComplexMatrix::from_diagonal(&[re(half), re(-half)]);
    kron(&identity2(), &z)
}

/// `D₀ = √Γ |0̄⟩⟨0̄| ⊗ 1`, `D₁ = √Γ |1̄⟩⟨1̄| ⊗ 1`.
pub fn dephasing_jumps<T: Real>(gamma_dephasing: T) -> Result<[JumpOperator<T>; 2]> {
    let s = rate_sqrt("gamma_dephasing", gamma_dephasing)?;
    let d = |ket: Vec<Cx<T>>| {
        JumpOperator::new(kron(&ComplexMatrix::projector(&ket), &identity2()).scale_real(s), JumpChannel::Dephasing)
    };
    Ok([d(ket_zero()), d(ket_one())])
}

/// Loop bit flip `X = |Φ₀⟩⟨Φ₁| + |Φ₁⟩⟨Φ₀|`.
pub fn loop_bit_flip<T: Real>() -> ComplexMatrix<T> {
    &ComplexMatrix::outer(&loop_ground(), &loop_excited()) + &ComplexMatrix::outer(&loop_excited(), &loop_ground())
}

/// `R₀ = √r |s⟩⟨s| ⊗ 1`, `R₁ = √r |s⟩⟨t| ⊗ X`.
pub fn recovery_jumps<T: Real>(recovery_rate: T) -> Result<[JumpOperator<T>; 2]> {
    let s = rate_sqrt("recovery_rate", recovery_rate)?;
    let singlet = ket_singlet();
    let triplet = ket_triplet();
    let r0 = kron(&ComplexMatrix::projector(&singlet), &identity2()).scale_real(s);
    let r1 = kron(&ComplexMatrix::outer(&singlet, &triplet), &loop_bit_flip()).scale_real(s);
    Ok([JumpOperator::new(r0, JumpChannel::Recovery), JumpOperator::new(r1, JumpChannel::Recovery)])
}

/// `F = √γ 1 ⊗ |Φ₀⟩⟨Φ₁|`.
pub fn forgetness_jump<T: Real>(gamma_forget: T) -> Result<JumpOperator<T>> {
    let s = rate_sqrt("gamma_forget", gamma_forget)?;
    let lowering = ComplexMatrix::outer(&loop_ground(), &loop_excited());
    Ok(JumpOperator::new(kron(&identity2(), &lowering).scale_real(s), JumpChannel::Forgetness))
}

/// `P = √Γ |t⟩⟨s| ⊗ 1`.
pub fn photodissociation_jump<T: Real>(gamma_dephasing: T) -> Result<JumpOperator<T>> {
    let s = rate_sqrt("gamma_dephasing", gamma_dephasing)?;
    let decay = ComplexMatrix::outer(&ket_triplet(), &ket_singlet());
    Ok(JumpOperator::new(kron(&decay, &identity2()).scale_real(s), JumpChannel::Photodissociation))
}

/// A Hamiltonian together with its jump operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator<T> {
    pub hamiltonian: ComplexMatrix<T>,
    pub jumps: Vec<JumpOperator<T>>,
}

impl<T: Real> Generator<T> {
    pub fn dim(&self) -> usize {
        self.hamiltonian.rows()
    }

    /// Bound on the fastest rate in the generator:
    /// `(λmax(H) − λmin(H)) + Σ_a λmax(L_a†L_a)`.
    pub fn rate_scale(&self) -> Result<T> {
        let h = hermitian_eig(&self.hamiltonian)?;
        let spread = match (h.values.first(), h.values.last()) {
            (Some(lo), Some(hi)) => *hi - *lo,
            _ => T::zero(),
        };
        let mut total = spread;
        for jump in &self.jumps {
            let e = hermitian_eig(&jump.decay_operator().hermitian_part())?;
            total += e.values.last().copied().unwrap_or(T::zero()).max(T::zero());
        }
        Ok(total)
    }

    pub fn rhs(&self, rho: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        lindblad_rhs(&self.hamiltonian, &self.jumps, rho)
    }
}

/// Environment jumps acting on the composite space.
fn environment_jumps<T: Real>(params: &ModelParams<T>) -> Result<Vec<JumpOperator<T>>> {
    Ok(match params.environment {
        Environment::Dephasing => dephasing_jumps(params.gamma_dephasing)?.into(),
        Environment::Photodissociation => vec![photodissociation_jump(params.gamma_dephasing)?],
    })
}

/// Full qubot generator on the 4-dim logical ⊗ loop space.
pub fn qubot_generator<T: Real>(params: &ModelParams<T>) -> Result<Generator<T>> {
    params.validate()?;
    let mut jumps = environment_jumps(params)?;
    jumps.extend(recovery_jumps(params.recovery_rate)?);
    jumps.push(forgetness_jump(params.gamma_forget)?);
    Ok(Generator { hamiltonian: loop_hamiltonian(params.delta), jumps })
}

/// Bare logical qubit (no loop, no Hamiltonian) under the environment alone.
pub fn free_spin_generator<T: Real>(params: &ModelParams<T>) -> Result<Generator<T>> {
    params.validate()?;
    let g = rate_sqrt("gamma_dephasing", params.gamma_dephasing)?;
    let jumps = match params.environment {
        Environment::Dephasing => vec![
            JumpOperator::new(ComplexMatrix::projector(&ket_zero()).scale_real(g), JumpChannel::Dephasing),
            JumpOperator::new(ComplexMatrix::projector(&ket_one()).scale_real(g), JumpChannel::Dephasing),
        ],
        Environment::Photodissociation => vec![JumpOperator::new(
            ComplexMatrix::outer(&ket_triplet(), &ket_singlet()).scale_real(g),
            JumpChannel::Photodissociation,
        )],
    };
    Ok(Generator { hamiltonian: ComplexMatrix::zeros(LOGICAL_DIM, LOGICAL_DIM), jumps })
}

/// `ρ̇ = −i[H, ρ] + Σ_a (L_a ρ L_a† − ½ L_a†L_a ρ − ½ ρ L_a†L_a)`.
pub fn lindblad_rhs<T: Real>(
    h: &ComplexMatrix<T>,
    jumps: &[JumpOperator<T>],
    rho: &ComplexMatrix<T>,
) -> Result<ComplexMatrix<T>> {
    let n = rho.rows();
    let check = |m: &ComplexMatrix<T>| {
        if m.rows() != n || m.cols() != n {
            Err(Error::DimensionMismatch { expected: n, found: m.rows() })
        } else {
            Ok(())
        }
    };
    check(rho)?;
    check(h)?;
    let minus_i = Complex::new(T::zero(), -T::one());
    let mut out = h.commutator(rho)?.scale(minus_i);
    let half = T::of(0.5);
    for jump in jumps {
        check(&jump.matrix)?;
        let l = &jump.matrix;
        let ldag = l.adjoint();
        let ldl = &ldag * l;
        let sandwich = &(l * rho) * &ldag;
        let anti = &(&ldl * rho) + &(rho * &ldl);
        out = &out + &(&sandwich - &anti.scale_real(half));
    }
    Ok(out)
}

/// Discrete dephasing with error probability `p`: Kraus operators
/// `√(1−p) I`, `√p |0̄⟩⟨0̄|`, `√p |1̄⟩⟨1̄|`.
pub fn discrete_dephasing<T: Real>(rho: &DensityMatrix<T>, p: T) -> Result<DensityMatrix<T>> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::InvalidProbability(p.to_f64_lossy()));
    }
    if rho.dim() != LOGICAL_DIM {
        return Err(Error::DimensionMismatch { expected: LOGICAL_DIM, found: rho.dim() });
    }
    let kraus = [
        ComplexMatrix::identity(2).scale_real((T::one() - p).sqrt()),
        ComplexMatrix::projector(&ket_zero()).scale_real(p.sqrt()),
        ComplexMatrix::projector(&ket_one()).scale_real(p.sqrt()),
    ];
    let mut out = ComplexMatrix::zeros(2, 2);
    for k in &kraus {
        out = &out + &(&(k * rho.matrix()) * &k.adjoint());
    }
    Ok(DensityMatrix::new_unchecked(out))
}

/// One inequality of the operating-point check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Finding<T> {
    pub holds: bool,
    /// The two sides are equal to within rounding.
    pub marginal: bool,
    /// Signed slack, positive when the inequality is satisfied.
    pub margin: T,
}

impl<T: Real> Finding<T> {
    fn evaluate(lhs: T, rhs: T, strict: bool) -> Self {
        let margin = lhs - rhs;
        let scale = lhs.abs().max(rhs.abs()).max(T::one());
        let marginal = margin.abs() <= T::tol(1e-12) * scale;
        let holds = if marginal { !strict } else { margin > T::zero() };
        Self { holds, marginal, margin }
    }
}

/// Outcome of [`validate_operating_point`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport<T> {
    /// `γ > 5Γ`: high steady-state concurrence.
    pub protective: Finding<T>,
    /// `Δ ≥ 5Γ`: the gap allows a fast enough reset.
    pub feasible_gap: Finding<T>,
    /// `γ ≤ Δ`: reset cannot beat the erasure time `Δ⁻¹`.
    pub erasure_bound: Finding<T>,
}

pub fn validate_operating_point<T: Real>(params: &ModelParams<T>) -> ValidationReport<T> {
    let five = T::of(5.0);
    ValidationReport {
        protective: Finding::evaluate(params.gamma_forget, five * params.gamma_dephasing, true),
        feasible_gap: Finding::evaluate(params.delta, five * params.gamma_dephasing, false),
        erasure_bound: Finding::evaluate(params.delta, params.gamma_forget, false),
    }
}

impl<T: Real> fmt::Display for ValidationReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |f: &mut fmt::Formatter<'_>, name: &str, rule: &str, x: &Finding<T>| {
            writeln!(
                f,
                "{name}: {} ({rule}, margin {}{})",
                x.holds,
                x.margin,
                if x.marginal { ", marginal" } else { "" }
            )
        };
        line(f, "protective", "gamma_forget > 5 gamma_dephasing", &self.protective)?;
        line(f, "feasible", "delta >= 5 gamma_dephasing", &self.feasible_gap)?;
        line(f, "bounded", "gamma_forget <= delta", &self.erasure_bound)
    }
}

/// Hardware check in physical units: with `Γ ≤ τ⁻¹` the gap condition
/// becomes `Δ > 5τ⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardwareFeasibility {
    pub lifetime_s: f64,
    pub delta_hz: f64,
    /// `τ⁻¹`, the largest dephasing rate compatible with the lifetime.
    pub max_dephasing_hz: f64,
    /// `5τ⁻¹`.
    pub threshold_hz: f64,
    pub satisfied: bool,
}

pub fn hardware_feasibility(lifetime_s: f64, delta_hz: f64) -> HardwareFeasibility {
    let max_dephasing_hz = 1.0 / lifetime_s;
    let threshold_hz = 5.0 * max_dephasing_hz;
    HardwareFeasibility { lifetime_s, delta_hz, max_dephasing_hz, threshold_hz, satisfied: delta_hz > threshold_hz }
}

impl fmt::Display for HardwareFeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hardware: lifetime {:e} s gives gamma_dephasing <= {:e} Hz; delta {:e} Hz > 5/lifetime = {:e} Hz: {}",
            self.lifetime_s, self.max_dephasing_hz, self.delta_hz, self.threshold_hz, self.satisfied
        )
    }
}

/// Sum of `L†L` over a channel set, used to check channel completeness.
pub fn decay_sum<T: Real>(jumps: &[JumpOperator<T>]) -> ComplexMatrix<T> {
    let n = jumps.first().map_or(COMPOSITE_DIM, |j| j.matrix.rows());
    jumps.iter().fold(ComplexMatrix::zeros(n, n), |acc, j| &acc + &j.decay_operator())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{initial_qubot_state, kron_ket, singlet_state};
    use crate::linalg::testing::random_density;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type M = ComplexMatrix<f64>;

    fn is_zero_matrix(m: &M) -> bool {
        use num_traits::Zero;
        m.as_slice().iter().all(|z| z.is_zero())
    }

    fn apply(op: &M, v: &[Cx<f64>]) -> Vec<Cx<f64>> {
        op.matvec(v).unwrap()
    }

    fn close(a: &[Cx<f64>], b: &[Cx<f64>]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-14)
    }

    fn scaled(v: &[Cx<f64>], s: f64) -> Vec<Cx<f64>> {
        v.iter().map(|z| z * s).collect()
    }

    #[test]
    fn hamiltonian_is_loop_z() {
        let h = loop_hamiltonian(1.0);
        assert_eq!(h, M::from_diagonal(&[re(0.5), re(-0.5), re(0.5), re(-0.5)]));
        assert_eq!(h.hermitian_defect(), 0.0);
        let fixed = kron(&M::identity(2), &M::projector(&loop_ground()));
        assert!(h.commutator(&fixed).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn dephasing_jumps_zero_rate_and_completeness() {
        let zero = dephasing_jumps(0.0).unwrap();
        assert!(zero.iter().all(|j| is_zero_matrix(&j.matrix)));
        let one = dephasing_jumps(1.0).unwrap();
        assert!(decay_sum(&one).max_abs_diff(&M::identity(4)) < 1e-15);
    }

    #[test]
    fn recovery_jump_actions() {
        let r = 2.0;
        let [r0, r1] = recovery_jumps(r).unwrap();
        let t_phi0 = kron_ket(&ket_triplet(), &loop_ground());
        let s_phi1 = kron_ket(&ket_singlet(), &loop_excited());
        assert!(close(&apply(&r1.matrix, &t_phi0), &scaled(&s_phi1, r.sqrt())));
        for loop_state in [loop_ground(), loop_excited()] {
            let v = kron_ket(&ket_singlet(), &loop_state);
            assert!(close(&apply(&r0.matrix, &v), &scaled(&v, r.sqrt())));
        }
        let sum = decay_sum(&[r0, r1]);
        assert!(sum.max_abs_diff(&M::identity(4).scale_real(r)) < 1e-14);
    }

    #[test]
    fn forgetness_resets_loop() {
        let g = 1.5;
        let f = forgetness_jump(g).unwrap();
        for psi in [ket_zero(), ket_singlet(), ket_triplet()] {
            let up = kron_ket(&psi, &loop_excited());
            let down = kron_ket(&psi, &loop_ground());
            assert!(close(&apply(&f.matrix, &up), &scaled(&down, g.sqrt())));
            assert!(close(&apply(&f.matrix, &down), &[Cx::<f64>::new(0.0, 0.0); 4]));
        }
    }

    #[test]
    fn photodissociation_action() {
        let g = 0.7;
        let p = photodissociation_jump(g).unwrap();
        let s0 = kron_ket(&ket_singlet(), &loop_ground());
        let t0 = kron_ket(&ket_triplet(), &loop_ground());
        assert!(close(&apply(&p.matrix, &s0), &scaled(&t0, g.sqrt())));
        for l in [loop_ground(), loop_excited()] {
            let t = kron_ket(&ket_triplet(), &l);
            assert!(close(&apply(&p.matrix, &t), &[Cx::<f64>::new(0.0, 0.0); 4]));
        }
    }

    #[test]
    fn recovery_rate_relation() {
        assert_eq!(recovery_rate(0.0, 1.5).unwrap(), 1.5);
        assert_eq!(recovery_rate(1.0, 1.0).unwrap(), 0.5);
        for tc in [0.01, 0.5, 3.0] {
            assert!(recovery_rate(tc, 2.0).unwrap() < 2.0);
        }
        assert_eq!(recovery_rate(0.0, 0.0), Err(Error::ZeroForgetness));
        assert!(ModelParams::from_correction_time(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn params_reject_negative_rates() {
        let err = ModelParams::with_rates(-1.0, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "gamma_dephasing", .. }));
    }

    #[test]
    fn rhs_vanishes_for_diagonal_state_without_jumps() {
        let h = loop_hamiltonian(1.0);
        let rho = M::from_diagonal(&[re(0.1), re(0.2), re(0.3), re(0.4)]);
        assert!(lindblad_rhs(&h, &[], &rho).unwrap().max_abs() < 1e-16);
    }

    #[test]
    fn rhs_dephasing_rate_on_coherence() {
        let gen = Generator { hamiltonian: loop_hamiltonian(1.0), jumps: dephasing_jumps(1.0).unwrap().into() };
        let rho = initial_qubot_state::<f64>();
        let d = gen.rhs(rho.matrix()).unwrap();
        // (0̄Φ₀, 1̄Φ₀) coherence sits at composite indices (0, 2).
        assert!((d[(0, 2)] - rho[(0, 2)] * -1.0).norm() < 1e-15);
    }

    #[test]
    fn rhs_is_traceless_and_hermitian_for_full_model() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for env in [Environment::Dephasing, Environment::Photodissociation] {
            let p = ModelParams::with_rates(1.0, 1.5, 1.5).unwrap().with_environment(env);
            let gen = qubot_generator(&p).unwrap();
            for _ in 0..20 {
                let rho = random_density(&mut rng, 4);
                let d = gen.rhs(&rho).unwrap();
                assert!(d.trace().norm() <= 1e-12);
                assert!(d.hermitian_defect() <= 1e-12);
            }
        }
    }

    #[test]
    fn rhs_rejects_mismatched_dimensions() {
        let err = lindblad_rhs(&loop_hamiltonian(1.0), &[], &M::identity(2)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn decay_sums_are_psd_and_linear_in_rate() {
        type Make = fn(f64) -> Vec<JumpOperator<f64>>;
        let sets: [Make; 4] = [
            |g| dephasing_jumps(g).unwrap().into(),
            |r| recovery_jumps(r).unwrap().into(),
            |g| vec![forgetness_jump(g).unwrap()],
            |g| vec![photodissociation_jump(g).unwrap()],
        ];
        for make in sets {
            let one = decay_sum(&make(0.8));
            assert!(one.hermitian_defect() < 1e-15);
            assert!(hermitian_eig(&one).unwrap().values[0] >= -1e-15);
            assert!(decay_sum(&make(1.6)).max_abs_diff(&one.scale_real(2.0)) < 1e-14);
        }
    }

    #[test]
    fn discrete_dephasing_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rho = DensityMatrix::new(random_density(&mut rng, 2)).unwrap();
        assert!(discrete_dephasing(&rho, 0.0).unwrap().max_abs_diff(&rho) < 1e-15);
        let full = discrete_dephasing(&singlet_state::<f64>(), 1.0).unwrap();
        assert!(full.max_abs_diff(&DensityMatrix::maximally_mixed(2)) < 1e-15);
        assert_eq!(discrete_dephasing(&rho, 1.5), Err(Error::InvalidProbability(1.5)));
    }

    #[test]
    fn discrete_dephasing_matches_environment_traced_singlet() {
        let p = 0.3;
        let s = M::projector(&ket_singlet());
        let t = M::projector(&ket_triplet());
        let want = &s.scale_real(1.0 - p) + &(&s + &t).scale_real(p / 2.0);
        let got = discrete_dephasing(&singlet_state::<f64>(), p).unwrap();
        assert!(got.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn discrete_dephasing_is_cptp_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 0..=10 {
            let p = k as f64 / 10.0;
            let rho = DensityMatrix::new(random_density(&mut rng, 2)).unwrap();
            let out = discrete_dephasing(&rho, p).unwrap();
            assert!(DensityMatrix::new(out.into_matrix()).is_ok());
        }
    }

    #[test]
    fn validator_reference_point_is_not_protective() {
        let r = validate_operating_point(&ModelParams::with_rates(1.0, 1.5, 1.5).unwrap());
        assert!(!r.protective.holds);
        assert!(!r.feasible_gap.holds);
        assert!(!r.erasure_bound.holds);
    }

    #[test]
    fn validator_good_point() {
        let r = validate_operating_point(&ModelParams::<f64>::with_rates(0.1, 1.0, 1.0).unwrap());
        assert!(r.protective.holds && r.feasible_gap.holds && r.erasure_bound.holds);
        assert!(r.erasure_bound.marginal);
        assert!((r.protective.margin - 0.5).abs() < 1e-15);
    }

    #[test]
    fn validator_equality_is_marginal() {
        let r = validate_operating_point(&ModelParams::with_rates(0.2, 1.0, 1.0).unwrap());
        assert!(r.protective.marginal && !r.protective.holds);
        assert!(r.feasible_gap.marginal && r.feasible_gap.holds);
    }

    #[test]
    fn hardware_worked_example() {
        let h = hardware_feasibility(200e-6, 1e9);
        assert!((h.max_dephasing_hz - 5e3).abs() < 1e-9);
        assert!((h.threshold_hz - 25e3).abs() < 1e-9);
        assert!(h.satisfied);
        assert!(!hardware_feasibility(200e-6, 20e3).satisfied);
    }

    #[test]
    fn rate_scale_bounds_rate_sum() {
        let p = ModelParams::<f64>::with_rates(1.0, 1.5, 1.5).unwrap();
        let s = qubot_generator(&p).unwrap().rate_scale().unwrap();
        assert!(s >= p.rate_sum());
        assert!((s - (1.0 + 2.0 + 3.0 + 1.5)).abs() < 1e-12);
    }
}
