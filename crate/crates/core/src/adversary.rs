//! Optimal cheating: analytic evaluators for each protocol and executable
//! strategies that replay them inside simulated runs.
//!
//! A cheating Alice in the qutrit protocol is reduced to preparing
//! `α|0⟩ + β|1⟩ + γ|2⟩` on Bob's qutrit; any purification she could keep is
//! unitarily equivalent to that state on her side, so the triple is the whole
//! strategy space.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{validation, Error, Result};
use crate::linalg::{
    helstrom_prob, helstrom_projectors, kron, measure, measure_pure, partial_trace, ComplexMatrix,
    DensityMatrix, PureState, Subsystem, STRUCTURAL_TOL,
};
use crate::protocols::{
    coin_result, qutrit_phi, qutrit_unitary, sequence_state, BitIndex, CoinResult, OtPair, Party, ProtocolId,
    SequenceConfig,
};
use crate::rng::{split_seed, PartyRng};
use crate::security::CheatProfile;

/// Amplitudes of the qutrit a cheating Alice sends instead of her half of
/// `|φ_a⟩`. Non-negative and on the unit sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTriple", deny_unknown_fields)]
pub struct AmplitudeTriple {
    alpha: f64,
    beta: f64,
    gamma_amp: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTriple {
    alpha: f64,
    beta: f64,
    gamma_amp: f64,
}

impl TryFrom<RawTriple> for AmplitudeTriple {
    type Error = Error;
    fn try_from(r: RawTriple) -> Result<Self> {
        AmplitudeTriple::new(r.alpha, r.beta, r.gamma_amp)
    }
}

impl AmplitudeTriple {
    pub fn new(alpha: f64, beta: f64, gamma_amp: f64) -> Result<Self> {
        if !(alpha >= 0.0 && beta >= 0.0 && gamma_amp >= 0.0) {
            return Err(validation("amplitudes must be non-negative"));
        }
        let norm2 = alpha * alpha + beta * beta + gamma_amp * gamma_amp;
        if (norm2 - 1.0).abs() > STRUCTURAL_TOL {
            return Err(validation(format!("α² + β² + γ² = {norm2}, not 1")));
        }
        Ok(Self {
            alpha,
            beta,
            gamma_amp,
        })
    }

    /// Point of the octant with polar angle `theta` (from the γ axis) and
    /// azimuth `phi` (from the α axis), both in `[0, π/2]`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let s = theta.sin();
        Self {
            alpha: (s * phi.cos()).max(0.0),
            beta: (s * phi.sin()).max(0.0),
            gamma_amp: theta.cos().max(0.0),
        }
    }

    /// `(½, ½, 1/√2)`
    pub fn optimal() -> Self {
        Self {
            alpha: 0.5,
            beta: 0.5,
            gamma_amp: std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma_amp(&self) -> f64 {
        self.gamma_amp
    }

    pub fn state(&self) -> PureState {
        PureState::from_real(&[self.alpha, self.beta, self.gamma_amp])
            .or_else(|_| {
                // from_angles output can sit a few ulps off the sphere
                let n = (self.alpha.powi(2) + self.beta.powi(2) + self.gamma_amp.powi(2)).sqrt();
                PureState::from_real(&[self.alpha / n, self.beta / n, self.gamma_amp / n])
            })
            .expect("unit vector")
    }

    /// `½ + ½(α + β)γ`
    pub fn closed_form_cheat_prob(&self) -> f64 {
        0.5 + 0.5 * (self.alpha + self.beta) * self.gamma_amp
    }
}

/// `|ψ_{x0x1}⟩` after Bob's unitary on the cheating qutrit.
pub fn alice_qutrit_state(t: &AmplitudeTriple, x0: u8, x1: u8) -> PureState {
    t.state().evolve(&qutrit_unitary(x0, x1)).expect("unitary")
}

/// `(ρ₀(p), ρ₁(p))`: Alice's qutrit averaged over the bit she does not
/// need, split by the value of `x_p`.
pub fn alice_qutrit_mixtures(t: &AmplitudeTriple, p: u8) -> Result<(DensityMatrix, DensityMatrix)> {
    let rho = |x0: u8, x1: u8| alice_qutrit_state(t, x0, x1).density();
    let encode = |target: u8, other: u8| if p == 0 { (target, other) } else { (other, target) };
    let mix = |target: u8| {
        let (a0, a1) = encode(target, 0);
        let (b0, b1) = encode(target, 1);
        DensityMatrix::mixture(&[(0.5, &rho(a0, a1)), (0.5, &rho(b0, b1))])
    };
    Ok((mix(0)?, mix(1)?))
}

/// Alice's optimal probability of learning `y` with the given triple, via
/// Helstrom discrimination for each value of the permutation bit.
pub fn alice_qutrit_cheat_prob(t: &AmplitudeTriple) -> Result<f64> {
    let mut total = 0.0;
    for p in 0..2u8 {
        let (rho0, rho1) = alice_qutrit_mixtures(t, p)?;
        total += 0.5 * helstrom_prob(0.5, &rho0, 0.5, &rho1)?;
    }
    Ok(total)
}

/// Grid size of the initial scan along each angle.
pub const OPTIMIZER_GRID: usize = 200;
const OPTIMIZER_MAX_ITERS: usize = 10_000;

fn reflect_into_box(x: f64) -> f64 {
    let mut x = x;
    // two reflections always suffice for a step no larger than the box
    for _ in 0..4 {
        if x < 0.0 {
            x = -x;
        } else if x > FRAC_PI_2 {
            x = 2.0 * FRAC_PI_2 - x;
        } else {
            break;
        }
    }
    x.clamp(0.0, FRAC_PI_2)
}

/// Maximizes [`alice_qutrit_cheat_prob`] over the octant: a 200×200 scan in
/// spherical angles, then Nelder–Mead on the angles (reflected at the box
/// walls) until the simplex is smaller than `tolerance`.
pub fn optimize_alice_qutrit(tolerance: f64) -> Result<(AmplitudeTriple, f64)> {
    if !(tolerance > 0.0 && tolerance <= 1e-3) {
        return Err(validation(format!("tolerance {tolerance} outside (0, 1e-3]")));
    }
    let objective =
        |x: [f64; 2]| -> Result<f64> { alice_qutrit_cheat_prob(&AmplitudeTriple::from_angles(x[0], x[1])) };

    let step = FRAC_PI_2 / (OPTIMIZER_GRID - 1) as f64;
    let mut best = ([0.0, 0.0], f64::NEG_INFINITY);
    for i in 0..OPTIMIZER_GRID {
        for j in 0..OPTIMIZER_GRID {
            let x = [i as f64 * step, j as f64 * step];
            let f = objective(x)?;
            if f > best.1 {
                best = (x, f);
            }
        }
    }

    // Nelder–Mead minimizing -f.
    let start = best.0;
    let mut simplex: Vec<([f64; 2], f64)> = Vec::with_capacity(3);
    for offset in [[0.0, 0.0], [step, 0.0], [0.0, step]] {
        let x = [
            reflect_into_box(start[0] + offset[0]),
            reflect_into_box(start[1] + offset[1]),
        ];
        simplex.push((x, -objective(x)?));
    }
    let size = |s: &[([f64; 2], f64)]| {
        s[1..]
            .iter()
            .map(|v| ((v.0[0] - s[0].0[0]).powi(2) + (v.0[1] - s[0].0[1]).powi(2)).sqrt())
            .fold(0.0, f64::max)
    };
    let point = |c: [f64; 2], d: [f64; 2], t: f64| {
        [
            reflect_into_box(c[0] + t * (d[0] - c[0])),
            reflect_into_box(c[1] + t * (d[1] - c[1])),
        ]
    };

    let mut iters = 0;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if size(&simplex) < tolerance {
            break;
        }
        if iters >= OPTIMIZER_MAX_ITERS {
            return Err(Error::Numeric(format!(
                "simplex did not shrink below {tolerance} in {OPTIMIZER_MAX_ITERS} iterations"
            )));
        }
        iters += 1;
        let centroid = [
            0.5 * (simplex[0].0[0] + simplex[1].0[0]),
            0.5 * (simplex[0].0[1] + simplex[1].0[1]),
        ];
        let worst = simplex[2];
        let xr = point(centroid, worst.0, -1.0);
        let fr = -objective(xr)?;
        if fr < simplex[0].1 {
            let xe = point(centroid, worst.0, -2.0);
            let fe = -objective(xe)?;
            simplex[2] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[1].1 {
            simplex[2] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let xc = point(centroid, xr, 0.5);
                (xc, -objective(xc)?)
            } else {
                let xc = point(centroid, worst.0, 0.5);
                (xc, -objective(xc)?)
            };
            if fc < worst.1.min(fr) {
                simplex[2] = (xc, fc);
            } else {
                let anchor = simplex[0].0;
                for v in simplex.iter_mut().skip(1) {
                    let x = point(anchor, v.0, 0.5);
                    *v = (x, -objective(x)?);
                }
            }
        }
    }
    let (x, f) = simplex[0];
    let value = (-f).max(best.1);
    let at = if -f >= best.1 { x } else { best.0 };
    Ok((AmplitudeTriple::from_angles(at[0], at[1]), value))
}

/// `(Tr_A|φ₀⟩⟨φ₀|, Tr_A|φ₁⟩⟨φ₁|)`: what Bob holds for each of Alice's choices.
pub fn bob_qutrit_reduced_states() -> Result<(DensityMatrix, DensityMatrix)> {
    let reduce = |c: u8| partial_trace(&qutrit_phi(c).density(), 3, 3, Subsystem::B);
    Ok((reduce(0)?, reduce(1)?))
}

/// Bob learns Alice's choice bit (and hence her assertion, since he picks
/// the permutation) by Helstrom discrimination of the reduced states.
pub fn bob_qutrit_cheat_prob() -> Result<f64> {
    let (rho0, rho1) = bob_qutrit_reduced_states()?;
    helstrom_prob(0.5, &rho0, 0.5, &rho1)
}

/// Mixtures Alice must distinguish once Bob declares `which` bit counts.
pub fn alice_sequence_mixtures(which: BitIndex) -> Result<(DensityMatrix, DensityMatrix)> {
    let mix = |value: u8| {
        let states: Vec<DensityMatrix> = [(0u8, 0u8), (0, 1), (1, 0), (1, 1)]
            .into_iter()
            .filter(|&(x0, x1)| which.pick(x0, x1) == value)
            .map(|(x0, x1)| sequence_state(x0, x1).density())
            .collect();
        DensityMatrix::mixture(&[(0.5, &states[0]), (0.5, &states[1])])
    };
    Ok((mix(0)?, mix(1)?))
}

pub fn alice_sequence_cheat_prob_for(which: BitIndex) -> Result<f64> {
    let (rho0, rho1) = alice_sequence_mixtures(which)?;
    helstrom_prob(0.5, &rho0, 0.5, &rho1)
}

/// Store every state, wait for Bob's declaration, then measure each one
/// individually with the Helstrom measurement. Independent of `N`.
pub fn alice_sequence_cheat_prob() -> Result<f64> {
    alice_sequence_cheat_prob_for(BitIndex::First)
}

/// A cheating probability that only holds as a limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitValue {
    pub value: f64,
    pub asymptotic: bool,
}

/// Bob's value in the sequential protocol, valid as `N → ∞` only. No
/// finite-`N` optimality is claimed.
pub fn bob_sequence_cheat_prob() -> LimitValue {
    LimitValue {
        value: 0.75,
        asymptotic: true,
    }
}

/// Forcing probabilities for outcome HEADS in the coin-flip reduction
/// built on a ROT with the given profile: `(½ + ½·P_A*, P_B*)`.
pub fn coin_forcing_probs(profile: &CheatProfile) -> (f64, f64) {
    (0.5 + 0.5 * profile.p_a_star, profile.p_b_star)
}

/// Strategy-specific parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "RawParams")]
pub enum StrategyParams {
    /// Send `α|0⟩ + β|1⟩ + γ|2⟩` and measure with the Helstrom measurement
    /// for the announced permutation.
    Amplitudes { alpha: f64, beta: f64, gamma_amp: f64 },
    /// Measure the received qutrit with the Helstrom measurement for
    /// Alice's choice bit.
    Helstrom,
    /// Keep all states of a sequential run and measure the first untested
    /// one after Bob's declaration.
    StoreAndMeasure { n_states: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ParamKind {
    Amplitudes,
    Helstrom,
    StoreAndMeasure,
}

// Flat form so that fields foreign to the chosen kind are rejected.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    kind: ParamKind,
    alpha: Option<f64>,
    beta: Option<f64>,
    gamma_amp: Option<f64>,
    n_states: Option<usize>,
}

impl TryFrom<RawParams> for StrategyParams {
    type Error = String;
    fn try_from(r: RawParams) -> std::result::Result<Self, String> {
        let amplitudes = [r.alpha, r.beta, r.gamma_amp];
        let any_amplitude = amplitudes.iter().any(Option::is_some);
        match r.kind {
            ParamKind::Amplitudes => match (amplitudes, r.n_states) {
                ([Some(alpha), Some(beta), Some(gamma_amp)], None) => Ok(StrategyParams::Amplitudes {
                    alpha,
                    beta,
                    gamma_amp,
                }),
                _ => Err("amplitudes needs exactly alpha, beta and gamma_amp".into()),
            },
            ParamKind::Helstrom if !any_amplitude && r.n_states.is_none() => Ok(StrategyParams::Helstrom),
            ParamKind::Helstrom => Err("helstrom takes no parameters".into()),
            ParamKind::StoreAndMeasure => match (any_amplitude, r.n_states) {
                (false, Some(n_states)) => Ok(StrategyParams::StoreAndMeasure { n_states }),
                _ => Err("store_and_measure needs exactly n_states".into()),
            },
        }
    }
}

/// A cheating party and what it does. For `coinflip_reduction` the ROT
/// subroutine is the qutrit protocol.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheatStrategy {
    pub party: StrategyParty,
    pub protocol: ProtocolId,
    pub parameters: StrategyParams,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyParty {
    Alice,
    Bob,
}

enum Plan {
    AliceQutrit(AmplitudeTriple),
    BobQutrit,
    AliceSequence(SequenceConfig),
    AliceCoinflip(AmplitudeTriple),
    BobCoinflip,
}

impl CheatStrategy {
    pub fn alice_qutrit(t: AmplitudeTriple) -> Self {
        Self {
            party: StrategyParty::Alice,
            protocol: ProtocolId::Qutrit,
            parameters: StrategyParams::Amplitudes {
                alpha: t.alpha,
                beta: t.beta,
                gamma_amp: t.gamma_amp,
            },
        }
    }

    pub fn bob_qutrit() -> Self {
        Self {
            party: StrategyParty::Bob,
            protocol: ProtocolId::Qutrit,
            parameters: StrategyParams::Helstrom,
        }
    }

    pub fn alice_sequence(n_states: usize) -> Self {
        Self {
            party: StrategyParty::Alice,
            protocol: ProtocolId::Sequence,
            parameters: StrategyParams::StoreAndMeasure { n_states },
        }
    }

    pub fn alice_coinflip(t: AmplitudeTriple) -> Self {
        Self {
            protocol: ProtocolId::CoinflipReduction,
            ..Self::alice_qutrit(t)
        }
    }

    pub fn bob_coinflip() -> Self {
        Self {
            protocol: ProtocolId::CoinflipReduction,
            ..Self::bob_qutrit()
        }
    }

    fn plan(&self) -> Result<Plan> {
        use StrategyParams::*;
        use StrategyParty::*;
        Ok(match (self.party, self.protocol, self.parameters) {
            (
                Alice,
                ProtocolId::Qutrit,
                Amplitudes {
                    alpha,
                    beta,
                    gamma_amp,
                },
            ) => Plan::AliceQutrit(AmplitudeTriple::new(alpha, beta, gamma_amp)?),
            (Bob, ProtocolId::Qutrit, Helstrom) => Plan::BobQutrit,
            (Alice, ProtocolId::Sequence, StoreAndMeasure { n_states }) => {
                Plan::AliceSequence(SequenceConfig::new(n_states)?)
            }
            (
                Alice,
                ProtocolId::CoinflipReduction,
                Amplitudes {
                    alpha,
                    beta,
                    gamma_amp,
                },
            ) => Plan::AliceCoinflip(AmplitudeTriple::new(alpha, beta, gamma_amp)?),
            (Bob, ProtocolId::CoinflipReduction, Helstrom) => Plan::BobCoinflip,
            (party, protocol, params) => {
                return Err(Error::Capability(format!(
                    "no {party:?} strategy for {protocol} with {params:?}"
                )))
            }
        })
    }

    /// Checks the strategy is one [`execute_cheat`] supports.
    pub fn validate(&self) -> Result<()> {
        self.plan().map(|_| ())
    }

    /// Analytic success probability of this strategy, where one is known.
    pub fn analytic_target(&self) -> Result<f64> {
        Ok(match self.plan()? {
            Plan::AliceQutrit(t) => alice_qutrit_cheat_prob(&t)?,
            Plan::BobQutrit => bob_qutrit_cheat_prob()?,
            Plan::AliceSequence(_) => alice_sequence_cheat_prob()?,
            Plan::AliceCoinflip(t) => 0.5 + 0.5 * alice_qutrit_cheat_prob(&t)?,
            Plan::BobCoinflip => bob_qutrit_cheat_prob()?,
        })
    }
}

type ProjectorPair = [ComplexMatrix; 2];

fn qutrit_guess_projectors(t: &AmplitudeTriple) -> Result<[ProjectorPair; 2]> {
    let for_p = |p: u8| -> Result<ProjectorPair> {
        let (rho0, rho1) = alice_qutrit_mixtures(t, p)?;
        let (pi0, pi1) = helstrom_projectors(0.5, &rho0, 0.5, &rho1)?;
        Ok([pi0, pi1])
    };
    Ok([for_p(0)?, for_p(1)?])
}

/// Bob's Helstrom measurement on his half, lifted to the joint space.
fn bob_lifted_projectors() -> Result<ProjectorPair> {
    let (rho0, rho1) = bob_qutrit_reduced_states()?;
    let (pi0, pi1) = helstrom_projectors(0.5, &rho0, 0.5, &rho1)?;
    let id3 = ComplexMatrix::identity(3)?;
    Ok([kron(&id3, &pi0)?, kron(&id3, &pi1)?])
}

fn sequence_guess_projectors() -> Result<[ProjectorPair; 2]> {
    let for_bit = |which: BitIndex| -> Result<ProjectorPair> {
        let (rho0, rho1) = alice_sequence_mixtures(which)?;
        let (pi0, pi1) = helstrom_projectors(0.5, &rho0, 0.5, &rho1)?;
        Ok([pi0, pi1])
    };
    Ok([for_bit(BitIndex::First)?, for_bit(BitIndex::Second)?])
}

enum Prepared {
    AliceQutrit(AmplitudeTriple, [ProjectorPair; 2]),
    BobQutrit(ProjectorPair),
    AliceSequence(SequenceConfig, [ProjectorPair; 2]),
    AliceCoinflip(AmplitudeTriple, [ProjectorPair; 2]),
    BobCoinflip(ProjectorPair),
}

/// A validated strategy with its measurements computed once, for
/// repeated runs.
pub struct PreparedCheat(Prepared);

impl CheatStrategy {
    pub fn prepare(&self) -> Result<PreparedCheat> {
        Ok(PreparedCheat(match self.plan()? {
            Plan::AliceQutrit(t) => Prepared::AliceQutrit(t, qutrit_guess_projectors(&t)?),
            Plan::BobQutrit => Prepared::BobQutrit(bob_lifted_projectors()?),
            Plan::AliceSequence(cfg) => Prepared::AliceSequence(cfg, sequence_guess_projectors()?),
            Plan::AliceCoinflip(t) => Prepared::AliceCoinflip(t, qutrit_guess_projectors(&t)?),
            Plan::BobCoinflip => Prepared::BobCoinflip(bob_lifted_projectors()?),
        }))
    }
}

/// Cheating Alice in one qutrit run: returns `(her guess of y, y)`.
fn alice_qutrit_attack(t: &AmplitudeTriple, guess: &[ProjectorPair; 2], seed: u64) -> Result<(u8, u8)> {
    let mut alice = PartyRng::new(seed, Party::Alice);
    let mut bob = PartyRng::new(seed, Party::Bob);
    let y = bob.bit();
    let z_dummy = bob.bit();
    let p = bob.bit();
    let pair = OtPair::new(y, z_dummy, p);
    let returned = t.state().evolve(&qutrit_unitary(pair.x0, pair.x1))?;
    let g = measure(&returned.density(), &guess[usize::from(pair.p)], alice.uniform())? as u8;
    Ok((g, y))
}

/// Cheating Bob in one qutrit run: returns `(his guess of the assert bit,
/// Alice's actual assert bit)`.
fn bob_qutrit_attack(lifted: &ProjectorPair, seed: u64) -> Result<(u8, u8)> {
    let mut alice = PartyRng::new(seed, Party::Alice);
    let mut bob = PartyRng::new(seed, Party::Bob);
    let choice = alice.bit();
    let (guess_choice, _collapsed) = measure_pure(&qutrit_phi(choice), lifted, bob.uniform())?;
    let _y = bob.bit();
    let _z_dummy = bob.bit();
    let p = bob.bit();
    // Alice's assertion depends only on her choice and the permutation,
    // whatever Bob did to the state.
    let assert_bit = u8::from(choice != p);
    let guess = u8::from(guess_choice as u8 != p);
    Ok((guess, assert_bit))
}

fn alice_sequence_attack(cfg: SequenceConfig, guess: &[ProjectorPair; 2], seed: u64) -> Result<bool> {
    let mut alice = PartyRng::new(seed, Party::Alice);
    let mut bob = PartyRng::new(seed, Party::Bob);
    let n = cfg.n_states();
    let pairs: Vec<(u8, u8)> = (0..n).map(|_| (bob.bit(), bob.bit())).collect();
    // Bob is honest, so the tested states always pass; only the choice of
    // test set matters here.
    let tested = alice.subset(n, cfg.test_size());
    let j = (0..n)
        .find(|j| tested.binary_search(j).is_err())
        .expect("config leaves untested states");
    let which = BitIndex::from_bit(bob.bit());
    let (x0, x1) = pairs[j];
    let projectors = &guess[which as usize];
    let g = measure(&sequence_state(x0, x1).density(), projectors, alice.uniform())? as u8;
    Ok(g == which.pick(x0, x1))
}

impl PreparedCheat {
    /// One simulated execution against honest counterparts; true when the
    /// cheater met its goal: Alice learns `y`, Bob guesses Alice's
    /// assertion, or the coin lands HEADS.
    pub fn run(&self, seed: u64) -> Result<bool> {
        match &self.0 {
            Prepared::AliceQutrit(t, guess) => {
                let (g, y) = alice_qutrit_attack(t, guess, seed)?;
                Ok(g == y)
            }
            Prepared::BobQutrit(lifted) => {
                let (guess, actual) = bob_qutrit_attack(lifted, seed)?;
                Ok(guess == actual)
            }
            Prepared::AliceSequence(cfg, guess) => alice_sequence_attack(*cfg, guess, seed),
            Prepared::AliceCoinflip(t, guess) => {
                let (g, y) = alice_qutrit_attack(t, guess, split_seed(seed, 0))?;
                let b = PartyRng::new(seed, Party::Bob).bit();
                let (a, g_hat) = if b == 1 { (1, None) } else { (0, Some(g)) };
                Ok(coin_result(a, b, y, g_hat) == CoinResult::Heads)
            }
            Prepared::BobCoinflip(lifted) => {
                // Bob sends his guess of the assert bit as the coin.
                let (guess, actual) = bob_qutrit_attack(lifted, split_seed(seed, 0))?;
                Ok(actual == guess)
            }
        }
    }
}

/// Prepares `strategy` and runs it once.
pub fn execute_cheat(strategy: &CheatStrategy, seed: u64) -> Result<bool> {
    strategy.prepare()?.run(seed)
}
