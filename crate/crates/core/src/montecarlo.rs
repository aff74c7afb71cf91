//! Seeded Monte-Carlo estimates. Trial `i` under master seed `s` always
//! runs with `split_seed(s, i)`, so results do not depend on how trials are
//! scheduled across threads.

use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversary::CheatStrategy;
use crate::error::{validation, Result};
use crate::protocols::{run_sequence_with_bob, RotOutcome, RotProtocol, SequenceBob, SequenceConfig};
use crate::rng::split_seed;

pub const MIN_COMPLETENESS_TRIALS: u64 = 1000;

/// Binomial summary of a batch of trials.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trials: u64,
    pub successes: u64,
    pub estimate: f64,
    pub sigma: f64,
    pub target: Option<f64>,
    pub z_score: Option<f64>,
}

impl TrialReport {
    pub fn from_counts(trials: u64, successes: u64, target: Option<f64>) -> Self {
        let estimate = successes as f64 / trials as f64;
        let sigma = (estimate * (1.0 - estimate) / trials as f64).sqrt();
        let z_score = target.map(|t| {
            if sigma > 0.0 {
                (estimate - t) / sigma
            } else if estimate == t {
                0.0
            } else {
                f64::INFINITY.copysign(estimate - t)
            }
        });
        Self {
            trials,
            successes,
            estimate,
            sigma,
            target,
            z_score,
        }
    }

    /// `|z| < k`; true when no target is set.
    pub fn within_sigma(&self, k: f64) -> bool {
        self.z_score.is_none_or(|z| z.abs() < k)
    }
}

/// Honest-run statistics for one ROT protocol.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompletenessReport {
    /// Fraction of outcomes where Alice asserts, against ½.
    pub assert_rate: TrialReport,
    /// Every asserting outcome had `ĝ = y`.
    pub conditional_correct: bool,
    pub aborts: u64,
}

#[derive(Clone, Copy, Default)]
struct Tally {
    outcomes: u64,
    asserted: u64,
    wrong: u64,
    aborts: u64,
}

impl Tally {
    fn add(mut self, o: &RotOutcome) -> Self {
        self.outcomes += 1;
        if o.aborted {
            self.aborts += 1;
        } else if o.asserted() {
            self.asserted += 1;
            if o.g_hat != Some(o.bob_bit) {
                self.wrong += 1;
            }
        }
        self
    }

    fn merge(self, other: Self) -> Self {
        Self {
            outcomes: self.outcomes + other.outcomes,
            asserted: self.asserted + other.asserted,
            wrong: self.wrong + other.wrong,
            aborts: self.aborts + other.aborts,
        }
    }
}

fn sequence_tally(cfg: SequenceConfig, trials: u64, seed: u64) -> Tally {
    let per_run = cfg.untested() as u64;
    let runs = trials.div_ceil(per_run);
    (0..runs)
        .into_par_iter()
        .map(|r| {
            let run = run_sequence_with_bob(cfg, split_seed(seed, r), SequenceBob::Honest);
            let take = per_run.min(trials - r * per_run) as usize;
            if run.aborted {
                // an aborted run forfeits all of its outcomes
                let mut t = Tally::default();
                for _ in 0..take {
                    t = t.add(&RotOutcome::abort());
                }
                t
            } else {
                run.outcomes[..take].iter().fold(Tally::default(), Tally::add)
            }
        })
        .reduce(Tally::default, Tally::merge)
}

/// Runs honest executions and measures how often Alice asserts. For the
/// sequential protocol `trials` counts ROT outcomes, gathered from as many
/// runs as needed.
pub fn estimate_completeness(protocol: &RotProtocol, trials: u64, seed: u64) -> Result<CompletenessReport> {
    if trials < MIN_COMPLETENESS_TRIALS {
        return Err(validation(format!(
            "completeness needs at least {MIN_COMPLETENESS_TRIALS} trials, got {trials}"
        )));
    }
    let tally = match protocol {
        RotProtocol::Sequence(cfg) => sequence_tally(*cfg, trials, seed),
        _ => (0..trials)
            .into_par_iter()
            .map(|i| Tally::default().add(&protocol.run(split_seed(seed, i)).1))
            .reduce(Tally::default, Tally::merge),
    };
    Ok(CompletenessReport {
        assert_rate: TrialReport::from_counts(tally.outcomes, tally.asserted, Some(0.5)),
        conditional_correct: tally.wrong == 0,
        aborts: tally.aborts,
    })
}

/// Successes of `strategy` over trial indices `range` under `seed`.
pub fn count_cheat_successes(strategy: &CheatStrategy, seed: u64, range: Range<u64>) -> Result<u64> {
    let prepared = strategy.prepare()?;
    range
        .into_par_iter()
        .map(|i| prepared.run(split_seed(seed, i)).map(u64::from))
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

pub fn estimate_cheat(
    strategy: &CheatStrategy,
    trials: u64,
    seed: u64,
    target: Option<f64>,
) -> Result<TrialReport> {
    if trials == 0 {
        return Err(validation("trials must be positive"));
    }
    let successes = count_cheat_successes(strategy, seed, 0..trials)?;
    Ok(TrialReport::from_counts(trials, successes, target))
}

/// Abort probability for a naive dishonest Bob: the corrupted index is
/// tested with probability `⌊√N⌋/N` and then always caught; a lie about a
/// tested state is caught with probability 5/6 averaged over the three
/// wrong announcements.
pub fn detection_target(cfg: SequenceConfig, dishonesty: SequenceBob) -> f64 {
    match dishonesty {
        SequenceBob::Honest => 0.0,
        SequenceBob::SendOrthogonal => cfg.test_size() as f64 / cfg.n_states() as f64,
        SequenceBob::AnnounceWrongState => 5.0 / 6.0,
    }
}

/// Abort frequency of the sequential protocol against `dishonesty`.
pub fn sequence_detection_experiment(
    n_states: usize,
    dishonesty: SequenceBob,
    trials: u64,
    seed: u64,
) -> Result<TrialReport> {
    let cfg = SequenceConfig::new(n_states)?;
    if trials == 0 {
        return Err(validation("trials must be positive"));
    }
    let aborts: u64 = (0..trials)
        .into_par_iter()
        .map(|i| u64::from(run_sequence_with_bob(cfg, split_seed(seed, i), dishonesty).aborted))
        .sum();
    Ok(TrialReport::from_counts(
        trials,
        aborts,
        Some(detection_target(cfg, dishonesty)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::AmplitudeTriple;

    #[test]
    fn report_arithmetic() {
        let r = TrialReport::from_counts(100, 25, Some(0.25));
        assert_eq!(r.estimate, 0.25);
        assert!((r.sigma - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
        assert_eq!(r.z_score, Some(0.0));
        let none = TrialReport::from_counts(10, 0, None);
        assert!(none.z_score.is_none());
        assert!(none.within_sigma(3.0));
        let zero = TrialReport::from_counts(10, 0, Some(0.0));
        assert_eq!(zero.z_score, Some(0.0));
    }

    #[test]
    fn completeness_needs_enough_trials() {
        assert!(estimate_completeness(&RotProtocol::Qutrit, 999, 1).is_err());
    }

    #[test]
    fn completeness_small_run() {
        let r = estimate_completeness(&RotProtocol::Qutrit, 2000, 42).unwrap();
        assert!(r.conditional_correct);
        assert_eq!(r.aborts, 0);
        assert!(r.assert_rate.within_sigma(5.0));
    }

    #[test]
    fn deterministic_and_block_additive() {
        let s = CheatStrategy::alice_qutrit(AmplitudeTriple::optimal());
        let a = estimate_cheat(&s, 600, 9, None).unwrap();
        let b = estimate_cheat(&s, 600, 9, None).unwrap();
        assert_eq!(a, b);
        let parts =
            count_cheat_successes(&s, 9, 0..250).unwrap() + count_cheat_successes(&s, 9, 250..600).unwrap();
        assert_eq!(parts, a.successes);
    }

    #[test]
    fn honest_bob_never_caught() {
        let r = sequence_detection_experiment(16, SequenceBob::Honest, 200, 3).unwrap();
        assert_eq!(r.successes, 0);
        assert_eq!(r.target, Some(0.0));
    }

    #[test]
    fn detection_targets() {
        let cfg = SequenceConfig::new(16).unwrap();
        assert_eq!(detection_target(cfg, SequenceBob::SendOrthogonal), 0.25);
        let cfg = SequenceConfig::new(100).unwrap();
        assert_eq!(detection_target(cfg, SequenceBob::SendOrthogonal), 0.1);
    }
}
