//! C ABI for `rotlab`.
//!
//! Every function returns a [`RotStatus`] and writes results through out
//! pointers. Strings handed to the caller are owned by the caller and must
//! be released with [`rot_string_free`]; transcripts with
//! [`rot_transcript_free`]. The message of the most recent failure on the
//! calling thread is available from [`rot_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rotlab::adversary::{alice_qutrit_cheat_prob, optimize_alice_qutrit, AmplitudeTriple};
use rotlab::cli::to_canonical_json;
use rotlab::protocols::{run_coinflip_reduction, ProtocolId, RotOutcome, RotProtocol, Transcript};
use rotlab::security::{advantage, balance, kitaev_min_advantage, reproduce_headline_table, CheatProfile};
use rotlab::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RotStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Dimension = 3,
    Validation = 4,
    Numeric = 5,
    Precondition = 6,
    Capability = 7,
    Consistency = 8,
    Panic = 9,
}

impl From<&Error> for RotStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Dimension(_) => RotStatus::Dimension,
            Error::Validation(_) => RotStatus::Validation,
            Error::Numeric(_) => RotStatus::Numeric,
            Error::Precondition(_) => RotStatus::Precondition,
            Error::Capability(_) => RotStatus::Capability,
            Error::Consistency(_) => RotStatus::Consistency,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

struct Failure(RotStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(RotStatus::from(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RotStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RotStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(format!("panic: {msg}"));
            RotStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(RotStatus::NullPointer, format!("{what} is null"))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(RotStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no NUL").into_raw()
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rot_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rot_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RotCheatProfile {
    pub p_a_star: f64,
    pub p_b_star: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub gamma: f64,
    pub admissible: bool,
}

impl From<CheatProfile> for RotCheatProfile {
    fn from(p: CheatProfile) -> Self {
        Self {
            p_a_star: p.p_a_star,
            p_b_star: p.p_b_star,
            gamma_a: p.gamma_a,
            gamma_b: p.gamma_b,
            gamma: p.gamma,
            admissible: p.admissible,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RotBalanceResult {
    pub z_bias: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub gamma: f64,
    pub strict_improvement: bool,
}

/// Cheating profile for probabilities `p_a`, `p_b`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rot_advantage(p_a: f64, p_b: f64, out: *mut RotCheatProfile) -> RotStatus {
    guard(|| write_out(out, advantage(p_a, p_b)?.into(), "out"))
}

/// Balances an Alice-preferred profile against a Bob-preferred one. Only
/// the cheating probabilities of the inputs are read.
///
/// # Safety
/// Input pointers must be valid for reads, `out` for writes.
#[no_mangle]
pub unsafe extern "C" fn rot_balance(
    alice_pref: *const RotCheatProfile,
    bob_pref: *const RotCheatProfile,
    out: *mut RotBalanceResult,
) -> RotStatus {
    guard(|| {
        let (a, b) = match (alice_pref.as_ref(), bob_pref.as_ref()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(null("profile")),
        };
        let r = balance(
            &advantage(a.p_a_star, a.p_b_star)?,
            &advantage(b.p_a_star, b.p_b_star)?,
        )?;
        write_out(
            out,
            RotBalanceResult {
                z_bias: r.z_bias,
                gamma_a: r.gamma_a,
                gamma_b: r.gamma_b,
                gamma: r.gamma,
                strict_improvement: r.strict_improvement,
            },
            "out",
        )
    })
}

/// Smallest advantage compatible with the coin-flipping bound.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rot_kitaev_min_advantage(ideal_a: f64, ideal_b: f64, out: *mut f64) -> RotStatus {
    guard(|| write_out(out, kitaev_min_advantage(ideal_a, ideal_b)?, "out"))
}

/// Alice's success probability in the qutrit protocol for amplitudes
/// `(alpha, beta, gamma_amp)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rot_alice_qutrit_cheat_prob(
    alpha: f64,
    beta: f64,
    gamma_amp: f64,
    out: *mut f64,
) -> RotStatus {
    guard(|| {
        let t = AmplitudeTriple::new(alpha, beta, gamma_amp)?;
        write_out(out, alice_qutrit_cheat_prob(&t)?, "out")
    })
}

/// Maximizes Alice's qutrit success probability; writes the maximizing
/// amplitudes to `triple[0..3]` and the value to `out`.
///
/// # Safety
/// `triple` must be valid for three writes and `out` for one.
#[no_mangle]
pub unsafe extern "C" fn rot_optimize_alice_qutrit(
    tolerance: f64,
    triple: *mut f64,
    out: *mut f64,
) -> RotStatus {
    guard(|| {
        if triple.is_null() {
            return Err(null("triple"));
        }
        let (t, p) = optimize_alice_qutrit(tolerance)?;
        write_out(out, p, "out")?;
        triple.write(t.alpha());
        triple.add(1).write(t.beta());
        triple.add(2).write(t.gamma_amp());
        Ok(())
    })
}

/// Headline report as canonical JSON. Free with [`rot_string_free`].
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rot_headline_json(out: *mut *mut c_char) -> RotStatus {
    guard(|| {
        let json = to_canonical_json(&reproduce_headline_table()?)?;
        write_out(out, into_c_string(json), "out")
    })
}

/// Honest ROT outcome; `g_hat` is -1 for NULL.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RotOutcomeC {
    pub g_hat: i8,
    pub assert_bit: u8,
    pub bob_bit: u8,
    pub aborted: bool,
}

impl From<RotOutcome> for RotOutcomeC {
    fn from(o: RotOutcome) -> Self {
        Self {
            g_hat: o.g_hat.map_or(-1, |g| g as i8),
            assert_bit: o.assert_bit,
            bob_bit: o.bob_bit,
            aborted: o.aborted,
        }
    }
}

/// Opaque transcript of one honest run.
pub struct RotTranscript {
    transcript: Transcript,
    outcome: Option<RotOutcome>,
}

/// Runs one honest execution of `protocol` (`bad_classical`, `bad_qubit`,
/// `qutrit`, `sequence`, or `coinflip_reduction` over the qutrit protocol).
/// `n_states` is read only for `sequence`.
///
/// # Safety
/// `protocol` must be a NUL-terminated string; `out` valid for writes.
/// Release the handle with [`rot_transcript_free`].
#[no_mangle]
pub unsafe extern "C" fn rot_transcript_run(
    protocol: *const c_char,
    seed: u64,
    n_states: usize,
    out: *mut *mut RotTranscript,
) -> RotStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let id: ProtocolId = read_str(protocol, "protocol")?.parse()?;
        let handle = if id == ProtocolId::CoinflipReduction {
            let (transcript, _) = run_coinflip_reduction(&RotProtocol::Qutrit, seed);
            RotTranscript {
                transcript,
                outcome: None,
            }
        } else {
            let (transcript, outcome) = RotProtocol::from_id(id, n_states)?.run(seed);
            RotTranscript {
                transcript,
                outcome: Some(outcome),
            }
        };
        out.write(Box::into_raw(Box::new(handle)));
        Ok(())
    })
}

/// Number of messages in the transcript.
///
/// # Safety
/// `handle` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rot_transcript_len(handle: *const RotTranscript, out: *mut usize) -> RotStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        write_out(out, h.transcript.messages().len(), "out")
    })
}

/// The transcript as JSON lines. Free with [`rot_string_free`].
///
/// # Safety
/// `handle` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rot_transcript_jsonl(
    handle: *const RotTranscript,
    out: *mut *mut c_char,
) -> RotStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        write_out(out, into_c_string(h.transcript.to_jsonl()), "out")
    })
}

/// ROT outcome of the run (the first one for `sequence`). Capability error
/// for coin-flip transcripts.
///
/// # Safety
/// `handle` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rot_transcript_outcome(
    handle: *const RotTranscript,
    out: *mut RotOutcomeC,
) -> RotStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        let o = h
            .outcome
            .ok_or_else(|| Failure(RotStatus::Capability, "coin-flip runs have no ROT outcome".into()))?;
        write_out(out, o.into(), "out")
    })
}

/// Releases a transcript handle. Null is ignored.
///
/// # Safety
/// `handle` must come from [`rot_transcript_run`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn rot_transcript_free(handle: *mut RotTranscript) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panics_become_status() {
        let s = guard(|| panic!("boom"));
        assert_eq!(s, RotStatus::Panic);
        let msg = unsafe { CStr::from_ptr(rot_last_error_message()) };
        assert!(msg.to_str().unwrap().contains("boom"));
    }

    #[test]
    fn error_mapping() {
        assert_eq!(
            RotStatus::from(&Error::Consistency(String::new())),
            RotStatus::Consistency
        );
        assert_eq!(
            RotStatus::from(&Error::Capability(String::new())),
            RotStatus::Capability
        );
    }
}
