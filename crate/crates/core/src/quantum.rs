//! Minimal two-qubit quantum mechanics: pure states, rank-1 projectors,
//! partial traces, joint probabilities, and the Franson-interferometer
//! probability law in its normalized form.

use num_complex::Complex64;
use thiserror::Error;

const NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum QuantumError {
    #[error("state is not normalized: |ψ|² = {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    #[error("cannot build a direction from a near-zero vector")]
    ZeroVector,
    #[error("non-finite amplitude or component")]
    NonFinite,
}

/// Which side of the experiment an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    Alice,
    Bob,
}

/// Pure state of the two-qubit system, amplitudes ordered |00⟩,|01⟩,|10⟩,|11⟩
/// (first index Alice, second Bob).
#[derive(Debug, Clone, PartialEq)]
pub struct PureTwoQubitState {
    amps: [Complex64; 4],
}

impl PureTwoQubitState {
    /// Build a state from amplitudes, rejecting vectors whose squared norm
    /// deviates from 1 by more than 10⁻⁶; the accepted vector is rescaled to
    /// unit norm so downstream arithmetic sees an exactly normalized state.
    pub fn new(amps: [Complex64; 4]) -> Result<Self, QuantumError> {
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() {
            return Err(QuantumError::NonFinite);
        }
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(QuantumError::NotNormalized { norm_sq });
        }
        Ok(Self::rescaled(amps, norm_sq))
    }

    /// Normalize an arbitrary nonzero amplitude vector.
    pub fn normalized(amps: [Complex64; 4]) -> Result<Self, QuantumError> {
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() {
            return Err(QuantumError::NonFinite);
        }
        if norm_sq < 1e-24 {
            return Err(QuantumError::ZeroVector);
        }
        Ok(Self::rescaled(amps, norm_sq))
    }

    fn rescaled(mut amps: [Complex64; 4], norm_sq: f64) -> Self {
        let scale = 1.0 / norm_sq.sqrt();
        for a in &mut amps {
            *a *= scale;
        }
        Self { amps }
    }

    /// The singlet (|01⟩ - |10⟩)/√2.
    pub fn singlet() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            amps: [
                Complex64::ZERO,
                Complex64::new(s, 0.0),
                Complex64::new(-s, 0.0),
                Complex64::ZERO,
            ],
        }
    }

    /// The maximally entangled state (|00⟩ + |11⟩)/√2.
    pub fn phi_plus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            amps: [
                Complex64::new(s, 0.0),
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::new(s, 0.0),
            ],
        }
    }

    /// Product state α ⊗ β from single-qubit amplitude pairs.
    pub fn product(alice: [Complex64; 2], bob: [Complex64; 2]) -> Result<Self, QuantumError> {
        Self::normalized([
            alice[0] * bob[0],
            alice[0] * bob[1],
            alice[1] * bob[0],
            alice[1] * bob[1],
        ])
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Reduced density matrix of one subsystem, tracing out the other.
    pub fn partial_trace(&self, keep: Subsystem) -> LocalDensity {
        let a = &self.amps;
        let idx = |alice: usize, bob: usize| 2 * alice + bob;
        let mut m = [[Complex64::ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = match keep {
                    Subsystem::Alice => {
                        a[idx(i, 0)] * a[idx(j, 0)].conj() + a[idx(i, 1)] * a[idx(j, 1)].conj()
                    }
                    Subsystem::Bob => {
                        a[idx(0, i)] * a[idx(0, j)].conj() + a[idx(1, i)] * a[idx(1, j)].conj()
                    }
                };
            }
        }
        LocalDensity { m }
    }

    /// ⟨ψ| P ⊗ Q |ψ⟩ for rank-1 projectors on Alice's and Bob's qubits.
    #[allow(clippy::needless_range_loop)]
    pub fn joint_prob(&self, p_alice: &Projector, q_bob: &Projector) -> f64 {
        assert_eq!(
            p_alice.subsystem,
            Subsystem::Alice,
            "first projector must act on Alice"
        );
        assert_eq!(
            q_bob.subsystem,
            Subsystem::Bob,
            "second projector must act on Bob"
        );
        let p = p_alice.matrix();
        let q = q_bob.matrix();
        let idx = |alice: usize, bob: usize| 2 * alice + bob;
        let mut acc = Complex64::ZERO;
        for i in 0..2 {
            for k in 0..2 {
                let mut phi = Complex64::ZERO;
                for j in 0..2 {
                    for l in 0..2 {
                        phi += p[i][j] * q[k][l] * self.amps[idx(j, l)];
                    }
                }
                acc += self.amps[idx(i, k)].conj() * phi;
            }
        }
        acc.re
    }

    /// ⟨ψ| P ⊗ 1 |ψ⟩ (or 1 ⊗ P), i.e. Tr(P ρ) on the projector's side.
    pub fn local_prob(&self, p: &Projector) -> f64 {
        self.partial_trace(p.subsystem).expectation(p)
    }
}

/// Rank-1 projector on one qubit, parametrized by a unit Bloch vector:
/// P = (1 + a⃗·σ⃗)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projector {
    subsystem: Subsystem,
    bloch: [f64; 3],
}

impl Projector {
    /// Normalizes the given direction; rejects near-zero vectors.
    pub fn new(subsystem: Subsystem, bloch: [f64; 3]) -> Result<Self, QuantumError> {
        if bloch.iter().any(|c| !c.is_finite()) {
            return Err(QuantumError::NonFinite);
        }
        let norm = (bloch[0] * bloch[0] + bloch[1] * bloch[1] + bloch[2] * bloch[2]).sqrt();
        if norm < 1e-12 {
            return Err(QuantumError::ZeroVector);
        }
        Ok(Self {
            subsystem,
            bloch: [bloch[0] / norm, bloch[1] / norm, bloch[2] / norm],
        })
    }

    pub fn subsystem(&self) -> Subsystem {
        self.subsystem
    }

    pub fn bloch(&self) -> [f64; 3] {
        self.bloch
    }

    /// The complementary projector P⊥ = 1 - P (Bloch vector flipped).
    pub fn complement(&self) -> Self {
        Self {
            subsystem: self.subsystem,
            bloch: [-self.bloch[0], -self.bloch[1], -self.bloch[2]],
        }
    }

    /// 2×2 matrix (1 + a⃗·σ⃗)/2.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let [x, y, z] = self.bloch;
        [
            [
                Complex64::new(0.5 * (1.0 + z), 0.0),
                Complex64::new(0.5 * x, -0.5 * y),
            ],
            [
                Complex64::new(0.5 * x, 0.5 * y),
                Complex64::new(0.5 * (1.0 - z), 0.0),
            ],
        ]
    }
}

/// 2×2 reduced density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalDensity {
    m: [[Complex64; 2]; 2],
}

impl LocalDensity {
    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        (self.m[0][0] + self.m[1][1]).re
    }

    /// Tr(P ρ) for a projector on the same subsystem.
    #[allow(clippy::needless_range_loop)]
    pub fn expectation(&self, p: &Projector) -> f64 {
        let pm = p.matrix();
        let mut acc = Complex64::ZERO;
        for i in 0..2 {
            for j in 0..2 {
                acc += pm[i][j] * self.m[j][i];
            }
        }
        acc.re
    }

    /// Eigenvalues of the 2×2 Hermitian matrix, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let tr = self.trace();
        let det = (self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]).re;
        let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
        [0.5 * (tr - disc), 0.5 * (tr + disc)]
    }

    /// Largest deviation from Hermiticity, for invariant checks.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.m[0][1] - self.m[1][0].conj();
        d.norm()
            .max((self.m[0][0].im).abs())
            .max((self.m[1][1].im).abs())
    }
}

/// Analyzer phase settings of the two unbalanced interferometers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerSettings {
    pub delta_a: f64,
    pub delta_b: f64,
}

/// Joint probabilities of the four coincidence outcomes (++, +-, -+, --).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeTable {
    pub p_pp: f64,
    pub p_pm: f64,
    pub p_mp: f64,
    pub p_mm: f64,
}

impl OutcomeTable {
    pub fn sum(&self) -> f64 {
        self.p_pp + self.p_pm + self.p_mp + self.p_mm
    }

    /// Correlation function E = P(++) + P(--) - P(+-) - P(-+).
    pub fn correlation(&self) -> f64 {
        self.p_pp + self.p_mm - self.p_pm - self.p_mp
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.p_pp, self.p_pm, self.p_mp, self.p_mm]
    }

    pub fn min_entry(&self) -> f64 {
        self.entries().into_iter().fold(f64::INFINITY, f64::min)
    }
}

/// Coincidence probabilities of the Franson interferometer as a function of
/// the phase sum, normalized so the four outcomes sum to one and each
/// one-sided marginal is 1/2:
/// P(++) = P(--) = (1 + cos(δa+δb))/4, P(+-) = P(-+) = (1 - cos(δa+δb))/4.
pub fn franson_probs(settings: InterferometerSettings) -> OutcomeTable {
    let c = (settings.delta_a + settings.delta_b).cos();
    OutcomeTable {
        p_pp: 0.25 * (1.0 + c),
        p_pm: 0.25 * (1.0 - c),
        p_mp: 0.25 * (1.0 - c),
        p_mm: 0.25 * (1.0 + c),
    }
}

/// Effective post-selected two-qubit state of the Franson setup,
/// (|00⟩ + |11⟩)/√2. Together with [`franson_projector`] it reproduces
/// [`franson_probs`] through the projector calculus.
pub fn franson_effective_state() -> PureTwoQubitState {
    PureTwoQubitState::phi_plus()
}

/// Projector onto (|0⟩ + e^{-iδ}|1⟩)/√2, the "+" output port of an analyzer
/// set to phase δ; Bloch vector (cos δ, -sin δ, 0).
pub fn franson_projector(subsystem: Subsystem, delta: f64) -> Projector {
    Projector {
        subsystem,
        bloch: [delta.cos(), -delta.sin(), 0.0],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rejects_unnormalized() {
        let bad = [c(1.0), c(0.5), c(0.0), c(0.0)];
        assert!(matches!(
            PureTwoQubitState::new(bad),
            Err(QuantumError::NotNormalized { .. })
        ));
        let nearly = [c(1.0 + 1e-8), c(0.0), c(0.0), c(0.0)];
        assert!(PureTwoQubitState::new(nearly).is_ok());
    }

    #[test]
    fn singlet_marginal_is_maximally_mixed() {
        let rho = PureTwoQubitState::singlet().partial_trace(Subsystem::Alice);
        for i in 0..2 {
            for j in 0..2 {
                let expected = if i == j { 0.5 } else { 0.0 };
                assert!((rho.matrix()[i][j] - c(expected)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn product_state_marginal() {
        let st = PureTwoQubitState::product([c(1.0), c(0.0)], [c(0.0), c(1.0)]).unwrap();
        let rho = st.partial_trace(Subsystem::Alice);
        assert!((rho.matrix()[0][0].re - 1.0).abs() < 1e-12);
        assert!(rho.matrix()[1][1].norm() < 1e-12);
        let rho_b = st.partial_trace(Subsystem::Bob);
        assert!((rho_b.matrix()[1][1].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_superposition_marginal() {
        // √0.8|00⟩ + √0.2|11⟩ traced over Bob gives diag(0.8, 0.2).
        let st =
            PureTwoQubitState::new([c(0.8f64.sqrt()), c(0.0), c(0.0), c(0.2f64.sqrt())]).unwrap();
        let rho = st.partial_trace(Subsystem::Alice);
        assert!((rho.matrix()[0][0].re - 0.8).abs() < 1e-12);
        assert!((rho.matrix()[1][1].re - 0.2).abs() < 1e-12);
        assert!(rho.matrix()[0][1].norm() < 1e-12);
        let p0 = Projector::new(Subsystem::Alice, [0.0, 0.0, 1.0]).unwrap();
        assert!((st.local_prob(&p0) - 0.8).abs() < 1e-12);
    }

    #[test]
    fn singlet_joint_probabilities() {
        let st = PureTwoQubitState::singlet();
        let a = Projector::new(Subsystem::Alice, [0.3, -0.2, 0.93]).unwrap();
        let b_parallel = Projector::new(Subsystem::Bob, a.bloch()).unwrap();
        assert!(st.joint_prob(&a, &b_parallel).abs() < 1e-12);

        // ⟨P ⊗ Q⟩ = (1 - a⃗·b⃗)/4 on the singlet.
        let b = Projector::new(Subsystem::Bob, [0.5, 0.0, 3.0f64.sqrt() / 2.0]).unwrap();
        let a_z = Projector::new(Subsystem::Alice, [0.0, 0.0, 1.0]).unwrap();
        let dot = 3.0f64.sqrt() / 2.0;
        assert!((st.joint_prob(&a_z, &b) - 0.25 * (1.0 - dot)).abs() < 1e-12);
        let b_half = Projector::new(Subsystem::Bob, [0.75f64.sqrt(), 0.0, 0.5]).unwrap();
        assert!((st.joint_prob(&a_z, &b_half) - 0.125).abs() < 1e-12);
    }

    #[test]
    fn product_state_joint_factorizes() {
        let alpha = [c(0.6), c(0.8)];
        let beta = [Complex64::new(0.48, 0.36), c(0.8)];
        let st = PureTwoQubitState::product(alpha, beta).unwrap();
        let p = Projector::new(Subsystem::Alice, [0.1, 0.4, -0.9]).unwrap();
        let q = Projector::new(Subsystem::Bob, [-0.7, 0.2, 0.3]).unwrap();
        let joint = st.joint_prob(&p, &q);
        assert!((joint - st.local_prob(&p) * st.local_prob(&q)).abs() < 1e-12);
    }

    #[test]
    fn singlet_local_prob_is_half() {
        let st = PureTwoQubitState::singlet();
        for bloch in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.2, -0.5, 0.6]] {
            let p = Projector::new(Subsystem::Alice, bloch).unwrap();
            assert!((st.local_prob(&p) - 0.5).abs() < 1e-12);
            let q = Projector::new(Subsystem::Bob, bloch).unwrap();
            assert!((st.local_prob(&q) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn projector_is_idempotent_rank_one() {
        let p = Projector::new(Subsystem::Alice, [1.0, 2.0, -2.0]).unwrap();
        let m = p.matrix();
        let mut sq = [[Complex64::ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    sq[i][j] += m[i][k] * m[k][j];
                }
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                assert!((sq[i][j] - m[i][j]).norm() < 1e-12);
            }
        }
        assert!(((m[0][0] + m[1][1]).re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn franson_prob_anchors() {
        let t = franson_probs(InterferometerSettings {
            delta_a: 0.0,
            delta_b: 0.0,
        });
        assert_eq!(t.entries(), [0.5, 0.0, 0.0, 0.5]);
        let t = franson_probs(InterferometerSettings {
            delta_a: std::f64::consts::FRAC_PI_4,
            delta_b: std::f64::consts::FRAC_PI_4,
        });
        for p in t.entries() {
            assert!((p - 0.25).abs() < 1e-12);
        }
        let t = franson_probs(InterferometerSettings {
            delta_a: std::f64::consts::FRAC_PI_2,
            delta_b: std::f64::consts::FRAC_PI_2,
        });
        assert!(t.p_pp.abs() < 1e-12 && t.p_mm.abs() < 1e-12);
        assert!((t.p_pm - 0.5).abs() < 1e-12 && (t.p_mp - 0.5).abs() < 1e-12);
    }

    #[test]
    fn franson_bridge_matches_probability_law() {
        let st = franson_effective_state();
        for (da, db) in [
            (0.0, 0.0),
            (0.3, 1.1),
            (2.0, -0.7),
            (std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
        ] {
            let p = franson_projector(Subsystem::Alice, da);
            let q = franson_projector(Subsystem::Bob, db);
            let via_projectors = st.joint_prob(&p, &q);
            let law = franson_probs(InterferometerSettings {
                delta_a: da,
                delta_b: db,
            })
            .p_pp;
            assert!(
                (via_projectors - law).abs() < 1e-12,
                "δa={da}, δb={db}: {via_projectors} vs {law}"
            );
            assert!((st.local_prob(&p) - 0.5).abs() < 1e-12);
            assert!((st.local_prob(&q) - 0.5).abs() < 1e-12);
        }
    }
}
