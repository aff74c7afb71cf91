//! Acceptance gate. Prints one PASS/FAIL line per criterion and fails if
//! any criterion fails.

mod common;

use std::time::{Duration, Instant};

use clap::Parser;
use common::*;
use rotlab::adversary::{
    alice_qutrit_cheat_prob, alice_sequence_cheat_prob, alice_sequence_cheat_prob_for,
    alice_sequence_mixtures, coin_forcing_probs, optimize_alice_qutrit, AmplitudeTriple, CheatStrategy,
};
use rotlab::cli::{execute, exit_code, RunConfig};
use rotlab::linalg::trace_norm;
use rotlab::montecarlo::{estimate_cheat, estimate_completeness, sequence_detection_experiment};
use rotlab::protocols::{run_sequence_with_bob, BitIndex, RotProtocol, SequenceBob, SequenceConfig};
use rotlab::security::{
    bad_classical_profile, bad_qubit_profile, balance, check_kitaev_product, kitaev_min_advantage,
    qutrit_profile, reproduce_headline_table_against, CheatProfile, HeadlineReference,
};
use rotlab::Error;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn close(name: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    ensure(
        (got - want).abs() <= tol,
        format!("{name} = {got:.15} differs from {want:.15} by more than {tol:e}"),
    )
}

fn run_verb(args: &[&str]) -> Result<Value, String> {
    let cfg = RunConfig::try_parse_from(std::iter::once("rotlab").chain(args.iter().copied()))
        .map_err(|e| e.to_string())?;
    execute(&cfg).map_err(|e| e.to_string())
}

fn field(v: &Value, key: &str) -> Result<f64, String> {
    v[key].as_f64().ok_or_else(|| format!("missing field {key}"))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let v = run_verb(&["analyze", "--protocol", "qutrit"])?;
    let elapsed = start.elapsed();
    let target = cos2_pi_8();
    close("optimizer P_A*", field(&v, "p_a_star")?, target, 1e-8)?;
    close(
        "closed form at (½,½,1/√2)",
        field(&v, "p_a_star_closed_form")?,
        target,
        1e-12,
    )?;
    close(
        "density path at (½,½,1/√2)",
        field(&v, "p_a_star_at_optimal_triple")?,
        target,
        1e-12,
    )?;
    close("P_B*", field(&v, "p_b_star")?, 0.75, 1e-12)?;
    close("γ", field(&v, "gamma")?, 1.5, 1e-12)?;
    ensure(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"))?;
    Ok(format!(
        "P_A* = {:.10}, P_B* = {:.10}, γ = {:.10}, {elapsed:.2?}",
        field(&v, "p_a_star")?,
        field(&v, "p_b_star")?,
        field(&v, "gamma")?
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let target = cos2_pi_8();
    let first = alice_sequence_cheat_prob().map_err(|e| e.to_string())?;
    let second = alice_sequence_cheat_prob_for(BitIndex::Second).map_err(|e| e.to_string())?;
    let (rho0, rho1) = alice_sequence_mixtures(BitIndex::First).map_err(|e| e.to_string())?;
    ensure(rho0.dim() == 4, "mixtures are not 4×4")?;
    let norm = trace_norm(&(rho0.matrix() - rho1.matrix())).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    close("first-bit P_A*", first, target, 1e-12)?;
    close("second-bit P_A*", second, target, 1e-12)?;
    close("½ + ¼‖ρ₀ − ρ₁‖₁", 0.5 + norm / 4.0, target, 1e-12)?;
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!(
        "P_A* = {first:.12} (both bits), ‖ρ₀ − ρ₁‖₁ = {norm:.12}, {elapsed:.2?}"
    ))
}

fn criterion_3() -> Outcome {
    let p1 = bad_classical_profile().map_err(|e| e.to_string())?;
    let p2 = bad_qubit_profile().map_err(|e| e.to_string())?;
    let r = balance(&p2, &p1).map_err(|e| e.to_string())?;
    close("γ", r.gamma, 1.25, 1e-12)?;
    close("weight on the classical protocol", r.weight_second(), 0.25, 1e-12)?;
    Ok(format!(
        "γ = {:.15}, z = {:.15} on the classical protocol ({:.15} on the qubit protocol)",
        r.gamma,
        r.weight_second(),
        r.z_bias
    ))
}

fn criterion_4() -> Outcome {
    let p2 = bad_qubit_profile().map_err(|e| e.to_string())?;
    let p3 = qutrit_profile().map_err(|e| e.to_string())?;
    let r = balance(&p2, &p3).map_err(|e| e.to_string())?;
    ensure(
        (1.2390..=1.2405).contains(&r.gamma),
        format!("γ = {} outside [1.2390, 1.2405]", r.gamma),
    )?;
    close("γ against printed 1.239", r.gamma, 1.239, 1e-3)?;
    Ok(format!("γ = {:.10}", r.gamma))
}

fn criterion_5() -> Outcome {
    let g = kitaev_min_advantage(0.75, 0.5).map_err(|e| e.to_string())?;
    close("bound", g, 2.0 / 3.0 * (7f64.sqrt() - 1.0), 1e-12)?;
    let v = run_verb(&["headline", "--output", "json"])?;
    let lower = v["interval"]["lower"].as_f64().ok_or("missing interval")?;
    let upper = v["interval"]["upper"].as_f64().ok_or("missing interval")?;
    close("interval lower", lower, 1.0972, 1e-3)?;
    close("interval upper", upper, 1.2398, 1e-3)?;
    close("interval lower against the bound", lower, g, 1e-12)?;
    let p2 = bad_qubit_profile().map_err(|e| e.to_string())?;
    let p3 = qutrit_profile().map_err(|e| e.to_string())?;
    let balanced = balance(&p2, &p3).map_err(|e| e.to_string())?;
    close(
        "interval upper against the balanced γ",
        upper,
        balanced.gamma,
        1e-12,
    )?;
    let drifted = HeadlineReference {
        theorem_3_bound: 1.099,
        ..HeadlineReference::default()
    };
    match reproduce_headline_table_against(&drifted) {
        Err(e @ Error::Consistency(_)) => ensure(exit_code(&e) == 2, "drift does not exit 2")?,
        other => return Err(format!("drift not detected: {other:?}")),
    }
    Ok(format!(
        "bound = {g:.12}, interval [{lower:.6}, {upper:.6}], drift exits 2"
    ))
}

const MC_TRIALS: u64 = 100_000;

fn criterion_6() -> Outcome {
    let (_, p_a) = optimize_alice_qutrit(1e-9).map_err(|e| e.to_string())?;
    let profile = CheatProfile::new(p_a, 0.75).map_err(|e| e.to_string())?;
    let (p_a0, p_b0) = coin_forcing_probs(&profile);
    close("P_A,0", p_a0, 0.926777, 1e-6)?;
    close("P_B,0", p_b0, 0.75, 1e-6)?;
    ensure(
        check_kitaev_product(p_a0, p_b0),
        "forcing pair violates the product bound",
    )?;
    let alice = estimate_cheat(
        &CheatStrategy::alice_coinflip(AmplitudeTriple::optimal()),
        MC_TRIALS,
        6001,
        Some(p_a0),
    )
    .map_err(|e| e.to_string())?;
    let bob = estimate_cheat(&CheatStrategy::bob_coinflip(), MC_TRIALS, 6002, Some(p_b0))
        .map_err(|e| e.to_string())?;
    for (who, r) in [("Alice", &alice), ("Bob", &bob)] {
        ensure(
            r.within_sigma(3.0),
            format!("{who} forcing estimate {r:?} outside 3σ"),
        )?;
    }
    Ok(format!(
        "({p_a0:.6}, {p_b0:.6}), product {:.6}; Monte-Carlo Alice {:.4} (z = {:+.2}), Bob {:.4} (z = {:+.2})",
        p_a0 * p_b0,
        alice.estimate,
        alice.z_score.unwrap_or(f64::NAN),
        bob.estimate,
        bob.z_score.unwrap_or(f64::NAN)
    ))
}

fn criterion_7() -> Outcome {
    let seq = SequenceConfig::new(100).map_err(|e| e.to_string())?;
    let mut detail = Vec::new();
    for (name, rot, seed) in [
        ("bad_classical", RotProtocol::BadClassical, 7001),
        ("bad_qubit", RotProtocol::BadQubit, 7002),
        ("qutrit", RotProtocol::Qutrit, 7003),
        ("sequence", RotProtocol::Sequence(seq), 7004),
    ] {
        let r = estimate_completeness(&rot, MC_TRIALS, seed).map_err(|e| e.to_string())?;
        ensure(r.assert_rate.within_sigma(3.0), format!("{name}: {r:?}"))?;
        ensure(
            r.conditional_correct,
            format!("{name}: an asserted output differs from y"),
        )?;
        ensure(r.aborts == 0, format!("{name}: {} aborts", r.aborts))?;
        detail.push(format!(
            "{name} z = {:+.2}",
            r.assert_rate.z_score.unwrap_or(f64::NAN)
        ));
    }
    let aborts = (0..1000u64)
        .filter(|&s| run_sequence_with_bob(seq, 7100 + s, SequenceBob::Honest).aborted)
        .count();
    ensure(aborts == 0, format!("{aborts} honest sequence runs aborted"))?;
    detail.push("0/1000 sequence aborts".into());
    Ok(detail.join(", "))
}

fn criterion_8() -> Outcome {
    let (grid, _, _) = grid_max_closed_form(0.001);
    let (_, opt) = optimize_alice_qutrit(1e-9).map_err(|e| e.to_string())?;
    close("optimizer vs grid", opt, grid, 1e-5)?;
    let mut rng = rng(8001);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let [a, b, g] = random_octant_point(&mut rng);
        let t = AmplitudeTriple::new(a, b, g).map_err(|e| e.to_string())?;
        let d = alice_qutrit_cheat_prob(&t).map_err(|e| e.to_string())? - t.closed_form_cheat_prob();
        worst = worst.max(d.abs());
    }
    ensure(worst < 1e-10, format!("density path deviates by {worst:e}"))?;
    Ok(format!(
        "|opt − grid| = {:.1e}, worst density/closed-form gap {worst:.1e}",
        (opt - grid).abs()
    ))
}

fn criterion_9() -> Outcome {
    let r = sequence_detection_experiment(100, SequenceBob::SendOrthogonal, 10_000, 9001)
        .map_err(|e| e.to_string())?;
    ensure(r.target == Some(0.1), "target is not 0.1")?;
    ensure(r.within_sigma(3.0), format!("{r:?}"))?;
    Ok(format!(
        "abort rate {:.4} (z = {:+.2})",
        r.estimate,
        r.z_score.unwrap_or(f64::NAN)
    ))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 9] = [
        ("qutrit cheating probabilities", criterion_1),
        ("sequential Alice trace norm", criterion_2),
        ("balanced bad protocols", criterion_3),
        ("balanced qutrit protocol", criterion_4),
        ("coin-flip bound and interval", criterion_5),
        ("coin forcing", criterion_6),
        ("completeness", criterion_7),
        ("oracle equivalence", criterion_8),
        ("detection experiment", criterion_9),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                println!("criterion {} FAIL  {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
