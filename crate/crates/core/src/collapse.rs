//! Outcome probabilities of the ordering-dependent collapse test theory.
//!
//! In the ordinary before-after and after-before configurations the test
//! theory reproduces standard QM. When both measurements come first in their
//! own device's frame (before-before), each outcome is drawn from the local
//! state alone, so joint probabilities factorize into products of marginals.
//! When both come last (after-after), each side guesses what the other would
//! have done, weighting the four guess combinations by the standard joint
//! probabilities.
//!
//! All rules are restricted to rank-1 projectors on qubits; conditional
//! expectations with vanishing weight are defined as zero (the weight in
//! front of them already vanishes).

use crate::quantum::{OutcomeTable, Projector, PureTwoQubitState};
use crate::relativity::OrderingClass;

/// Joint (++) probability in a strictly ordered configuration
/// (`BeforeAfter` = Alice first, `AfterBefore` = Bob first), computed through
/// the conditional form ⟨Q⟩_{Pψ}⟨P⟩_ψ. The result coincides with the
/// standard value ⟨P ⊗ Q⟩_ψ.
///
/// Panics if `ordering` is not one of the two mixed configurations.
pub fn prob_ordered(
    state: &PureTwoQubitState,
    p_alice: &Projector,
    q_bob: &Projector,
    ordering: OrderingClass,
) -> f64 {
    let joint = state.joint_prob(p_alice, q_bob);
    let first = match ordering {
        OrderingClass::BeforeAfter => state.local_prob(p_alice),
        OrderingClass::AfterBefore => state.local_prob(q_bob),
        other => panic!("prob_ordered expects a mixed ordering, got {other:?}"),
    };
    if first <= 0.0 {
        // Zero-weight conditioning: the joint probability vanishes with it.
        return 0.0;
    }
    (joint / first) * first
}

/// Joint (++) probability in the before-before configuration:
/// ⟨P⟩_ψ ⟨Q⟩_ψ, each outcome drawn from its local state.
pub fn prob_before_before(
    state: &PureTwoQubitState,
    p_alice: &Projector,
    q_bob: &Projector,
) -> f64 {
    state.local_prob(p_alice) * state.local_prob(q_bob)
}

/// Joint (++) probability in the after-after configuration: the four-term
/// guess-weighted sum
///
/// ```text
/// Σ over (A,B) ∈ {P,P⊥}×{Q,Q⊥} of ⟨A ⊗ B⟩_ψ ⟨P⟩_{Bψ} ⟨Q⟩_{Aψ}
/// ```
///
/// with ⟨P⟩_{Qψ} ≡ ⟨P ⊗ Q⟩_ψ / ⟨Q⟩_ψ. Terms with vanishing leading weight
/// contribute zero.
pub fn prob_after_after(state: &PureTwoQubitState, p_alice: &Projector, q_bob: &Projector) -> f64 {
    let p_perp = p_alice.complement();
    let q_perp = q_bob.complement();
    let mut total = 0.0;
    for guess_a in [p_alice, &p_perp] {
        for guess_b in [q_bob, &q_perp] {
            let weight = state.joint_prob(guess_a, guess_b);
            if weight <= 0.0 {
                continue;
            }
            let outcome_a = conditional(state, p_alice, guess_b, state.local_prob(guess_b));
            let outcome_b = conditional_on_alice(state, guess_a, q_bob, state.local_prob(guess_a));
            total += weight * outcome_a * outcome_b;
        }
    }
    total
}

/// ⟨P⟩_{Bψ} with B on Bob's side: ⟨P ⊗ B⟩_ψ / ⟨B⟩_ψ, zero on zero weight.
fn conditional(
    state: &PureTwoQubitState,
    p_alice: &Projector,
    guess_b: &Projector,
    guess_prob: f64,
) -> f64 {
    if guess_prob <= 0.0 {
        0.0
    } else {
        state.joint_prob(p_alice, guess_b) / guess_prob
    }
}

/// ⟨Q⟩_{Aψ} with A on Alice's side.
fn conditional_on_alice(
    state: &PureTwoQubitState,
    guess_a: &Projector,
    q_bob: &Projector,
    guess_prob: f64,
) -> f64 {
    if guess_prob <= 0.0 {
        0.0
    } else {
        state.joint_prob(guess_a, q_bob) / guess_prob
    }
}

/// Full outcome table under the rule selected by the ordering class.
///
/// The remaining outcomes follow by the complement substitution
/// (e.g. P(+-) is the (++) formula with Q replaced by Q⊥). `Simultaneous`
/// and the two mixed classes use the standard QM rule.
pub fn outcome_table(
    state: &PureTwoQubitState,
    p_alice: &Projector,
    q_bob: &Projector,
    ordering: OrderingClass,
) -> OutcomeTable {
    let p_perp = p_alice.complement();
    let q_perp = q_bob.complement();
    let rule: &dyn Fn(&Projector, &Projector) -> f64 = match ordering {
        OrderingClass::BeforeBefore => &|p, q| prob_before_before(state, p, q),
        OrderingClass::AfterAfter => &|p, q| prob_after_after(state, p, q),
        OrderingClass::BeforeAfter | OrderingClass::AfterBefore | OrderingClass::Simultaneous => {
            &|p, q| state.joint_prob(p, q)
        }
    };
    OutcomeTable {
        p_pp: rule(p_alice, q_bob),
        p_pm: rule(p_alice, &q_perp),
        p_mp: rule(&p_perp, q_bob),
        p_mm: rule(&p_perp, &q_perp),
    }
}

/// Correlation function E(P, Q) = P(++) + P(--) - P(+-) - P(-+) under the
/// given ordering rule.
pub fn correlation(
    state: &PureTwoQubitState,
    p_alice: &Projector,
    q_bob: &Projector,
    ordering: OrderingClass,
) -> f64 {
    outcome_table(state, p_alice, q_bob, ordering).correlation()
}

/// After-after correlation computed through the σ-operator expansion
///
/// ```text
/// E = Σ over (A,B) of ⟨A ⊗ B⟩_ψ ⟨σ_P⟩_{Bψ} ⟨σ_Q⟩_{Aψ},  σ_P = P - P⊥
/// ```
///
/// This is an independent algebraic route to the same quantity as
/// `correlation(.., AfterAfter)`; the two are cross-checked in tests.
pub fn correlation_sigma_expansion(
    state: &PureTwoQubitState,
    p_alice: &Projector,
    q_bob: &Projector,
) -> f64 {
    let p_perp = p_alice.complement();
    let q_perp = q_bob.complement();
    let sigma_p = |guess_b: &Projector| {
        let w = state.local_prob(guess_b);
        if w <= 0.0 {
            0.0
        } else {
            (state.joint_prob(p_alice, guess_b) - state.joint_prob(&p_perp, guess_b)) / w
        }
    };
    let sigma_q = |guess_a: &Projector| {
        let w = state.local_prob(guess_a);
        if w <= 0.0 {
            0.0
        } else {
            (state.joint_prob(guess_a, q_bob) - state.joint_prob(guess_a, &q_perp)) / w
        }
    };
    let mut total = 0.0;
    for guess_a in [p_alice, &p_perp] {
        for guess_b in [q_bob, &q_perp] {
            let weight = state.joint_prob(guess_a, guess_b);
            if weight <= 0.0 {
                continue;
            }
            total += weight * sigma_p(guess_b) * sigma_q(guess_a);
        }
    }
    total
}

/// Closed form of the singlet after-after correlation: E(a⃗, b⃗) = -(a⃗·b⃗)³.
pub fn singlet_after_after_correlation(bloch_dot: f64) -> f64 {
    -bloch_dot.powi(3)
}
