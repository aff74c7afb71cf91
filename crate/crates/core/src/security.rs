//! Cheating advantage, the balancing construction, and the coin-flipping
//! lower bound.

use serde::{Deserialize, Serialize};

use crate::adversary::{bob_qutrit_cheat_prob, optimize_alice_qutrit};
use crate::error::{validation, Error, Result};
use crate::linalg::{helstrom_prob, PureState, STRUCTURAL_TOL};

pub const IDEAL_P_A: f64 = 0.75;
pub const IDEAL_P_B: f64 = 0.5;

/// Cheating probabilities of a ROT protocol and their ratios to the ideal
/// values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheatProfile {
    pub p_a_star: f64,
    pub p_b_star: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub gamma: f64,
    /// False when a probability sits below its ideal value, which no real
    /// protocol can achieve.
    pub admissible: bool,
}

impl CheatProfile {
    pub fn new(p_a_star: f64, p_b_star: f64) -> Result<Self> {
        for (name, p) in [("P_A*", p_a_star), ("P_B*", p_b_star)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(validation(format!("{name} = {p} outside [0, 1]")));
            }
        }
        let gamma_a = p_a_star / IDEAL_P_A;
        let gamma_b = p_b_star / IDEAL_P_B;
        Ok(Self {
            p_a_star,
            p_b_star,
            gamma_a,
            gamma_b,
            gamma: gamma_a.max(gamma_b),
            admissible: p_a_star >= IDEAL_P_A - STRUCTURAL_TOL && p_b_star >= IDEAL_P_B - STRUCTURAL_TOL,
        })
    }
}

/// Profile for the given cheating probabilities.
pub fn advantage(p_a: f64, p_b: f64) -> Result<CheatProfile> {
    CheatProfile::new(p_a, p_b)
}

/// Outcome of mixing two protocols with an ideal `z`-biased weak coin flip.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalanceResult {
    /// Probability of running the first (Alice-preferred) protocol.
    pub z_bias: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub gamma: f64,
    pub strict_improvement: bool,
}

impl BalanceResult {
    /// Probability of running the second (Bob-preferred) protocol.
    pub fn weight_second(&self) -> f64 {
        1.0 - self.z_bias
    }
}

/// Balances `alice_pref` (where Alice cheats at least as well) against
/// `bob_pref` (where Bob does) so both parties end with the same advantage.
/// The weak coin flip is taken at its ideal limit.
pub fn balance(alice_pref: &CheatProfile, bob_pref: &CheatProfile) -> Result<BalanceResult> {
    let (a1, b1) = (alice_pref.gamma_a, alice_pref.gamma_b);
    let (a2, b2) = (bob_pref.gamma_a, bob_pref.gamma_b);
    if a1 < a2 {
        return Err(Error::Precondition(format!(
            "Alice must prefer the first protocol: γ_A⁽¹⁾ = {a1} < γ_A⁽²⁾ = {a2}"
        )));
    }
    if b1 > b2 {
        return Err(Error::Precondition(format!(
            "Bob must prefer the second protocol: γ_B⁽¹⁾ = {b1} > γ_B⁽²⁾ = {b2}"
        )));
    }
    let denom = b2 - a2 + a1 - b1;
    if denom.abs() <= STRUCTURAL_TOL {
        return Err(Error::Precondition(
            "zero denominator: neither party has a preference".into(),
        ));
    }
    let z = (b2 - a2) / denom;
    if !(z > 0.0 && z < 1.0) {
        return Err(Error::Precondition(format!("bias z = {z} outside (0, 1)")));
    }
    let gamma = (a1 * b2 - b1 * a2) / denom;
    Ok(BalanceResult {
        z_bias: z,
        gamma_a: z * a1 + (1.0 - z) * a2,
        gamma_b: z * b1 + (1.0 - z) * b2,
        gamma,
        strict_improvement: a1 > a2 && b1 < b2,
    })
}

/// Smallest `γ ≥ 0` with `(b·γ)(½ + ½·a·γ) ≥ ½`, the positive root of
/// `a·b·γ² + b·γ − 1 = 0`.
pub fn kitaev_min_advantage(ideal_a: f64, ideal_b: f64) -> Result<f64> {
    for (name, p) in [("ideal_a", ideal_a), ("ideal_b", ideal_b)] {
        if !(p > 0.0 && p <= 1.0) {
            return Err(validation(format!("{name} = {p} outside (0, 1]")));
        }
    }
    // rationalized form avoids cancellation in -b + sqrt(...)
    let disc = ideal_b * ideal_b + 4.0 * ideal_a * ideal_b;
    Ok(2.0 / (ideal_b + disc.sqrt()))
}

/// Whether forcing probabilities respect `P_A · P_B ≥ ½`.
pub fn check_kitaev_product(p_a0: f64, p_b0: f64) -> bool {
    p_a0 * p_b0 >= 0.5 - STRUCTURAL_TOL
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

/// Every named value of the security landscape, recomputed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeadlineReport {
    pub protocol_1_gamma: f64,
    pub protocol_2_gamma: f64,
    pub theorem_1_gamma: f64,
    pub lemma_2_profile: CheatProfile,
    pub theorem_2_gamma: f64,
    pub theorem_3_bound: f64,
    pub interval: Interval,
}

/// Published figures the recomputation is checked against.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeadlineReference {
    pub protocol_1_gamma: f64,
    pub protocol_2_gamma: f64,
    pub theorem_1_gamma: f64,
    pub lemma_2_gamma_a: f64,
    pub lemma_2_gamma_b: f64,
    pub theorem_2_gamma: f64,
    pub theorem_3_bound: f64,
}

impl Default for HeadlineReference {
    fn default() -> Self {
        Self {
            protocol_1_gamma: 2.0,
            protocol_2_gamma: 4.0 / 3.0,
            theorem_1_gamma: 1.25,
            lemma_2_gamma_a: 1.138,
            lemma_2_gamma_b: 1.5,
            theorem_2_gamma: 1.239,
            theorem_3_bound: 1.097,
        }
    }
}

pub const HEADLINE_DRIFT_TOL: f64 = 1e-3;

fn cross_check(name: &str, got: f64, want: f64) -> Result<()> {
    if (got - want).abs() > HEADLINE_DRIFT_TOL {
        return Err(Error::Consistency(format!(
            "{name}: computed {got:.6}, reference {want:.6}"
        )));
    }
    Ok(())
}

/// Profile of the classical protocol: Bob announces `y` on a fair coin.
/// Alice learns `y` outright on HEADS and guesses otherwise; Bob knows the
/// coin and so the assertion.
pub fn bad_classical_profile() -> Result<CheatProfile> {
    let zero = PureState::basis(2, 0)?.density();
    let one = PureState::basis(2, 1)?.density();
    let announced = helstrom_prob(0.5, &zero, 0.5, &one)?;
    let withheld = helstrom_prob(0.5, &zero, 0.5, &zero)?;
    let p_a = 0.5 * announced + 0.5 * withheld;
    let p_b = helstrom_prob(0.5, &zero, 0.5, &one)?;
    CheatProfile::new(p_a, p_b)
}

/// Profile of the protocol where Bob sends `|y⟩`: Alice can always measure;
/// Bob receives nothing.
pub fn bad_qubit_profile() -> Result<CheatProfile> {
    let zero = PureState::basis(2, 0)?.density();
    let one = PureState::basis(2, 1)?.density();
    let p_a = helstrom_prob(0.5, &zero, 0.5, &one)?;
    let p_b = helstrom_prob(0.5, &zero, 0.5, &zero)?;
    CheatProfile::new(p_a, p_b)
}

/// Profile of the qutrit protocol with Alice's value from the optimizer.
pub fn qutrit_profile() -> Result<CheatProfile> {
    let (_, p_a) = optimize_alice_qutrit(1e-9)?;
    CheatProfile::new(p_a, bob_qutrit_cheat_prob()?)
}

pub fn reproduce_headline_table() -> Result<HeadlineReport> {
    reproduce_headline_table_against(&HeadlineReference::default())
}

/// Recomputes the table and fails with a consistency error if any value
/// drifts from `reference` by more than [`HEADLINE_DRIFT_TOL`].
pub fn reproduce_headline_table_against(reference: &HeadlineReference) -> Result<HeadlineReport> {
    let p1 = bad_classical_profile()?;
    let p2 = bad_qubit_profile()?;
    let p3 = qutrit_profile()?;
    let theorem_1 = balance(&p2, &p1)?;
    let theorem_2 = balance(&p2, &p3)?;
    let bound = kitaev_min_advantage(IDEAL_P_A, IDEAL_P_B)?;

    cross_check("protocol 1 γ", p1.gamma, reference.protocol_1_gamma)?;
    cross_check("protocol 2 γ", p2.gamma, reference.protocol_2_gamma)?;
    cross_check(
        "balanced bad protocols γ",
        theorem_1.gamma,
        reference.theorem_1_gamma,
    )?;
    cross_check("qutrit γ_A", p3.gamma_a, reference.lemma_2_gamma_a)?;
    cross_check("qutrit γ_B", p3.gamma_b, reference.lemma_2_gamma_b)?;
    cross_check("balanced qutrit γ", theorem_2.gamma, reference.theorem_2_gamma)?;
    cross_check("coin-flip bound", bound, reference.theorem_3_bound)?;
    let product = IDEAL_P_B * bound * (0.5 + 0.5 * IDEAL_P_A * bound);
    cross_check("coin-flip bound substitution", product, 0.5)?;
    if bound > theorem_2.gamma {
        return Err(Error::Consistency(format!(
            "lower bound {bound:.6} exceeds achievable {:.6}",
            theorem_2.gamma
        )));
    }

    Ok(HeadlineReport {
        protocol_1_gamma: p1.gamma,
        protocol_2_gamma: p2.gamma,
        theorem_1_gamma: theorem_1.gamma,
        lemma_2_profile: p3,
        theorem_2_gamma: theorem_2.gamma,
        theorem_3_bound: bound,
        interval: Interval {
            lower: bound,
            upper: theorem_2.gamma,
        },
    })
}
