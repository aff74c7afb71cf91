//! Honest executions of the Rabin OT protocols and the coin-flip reduction.
//!
//! Every run is a deterministic function of its seed. Alice and Bob draw
//! from separate streams (see [`crate::rng::PartyRng`]); the `*_with`
//! variants take the parties' choices explicitly so individual branches can
//! be forced.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{validation, Error, Result};
use crate::linalg::{born_probability, kron, measure, ComplexMatrix, PureState, C64, STRUCTURAL_TOL};
use crate::rng::{split_seed, PartyRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Party {
    #[serde(rename = "A")]
    Alice,
    #[serde(rename = "B")]
    Bob,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolId {
    BadClassical,
    BadQubit,
    Qutrit,
    Sequence,
    CoinflipReduction,
}

impl ProtocolId {
    pub fn name(self) -> &'static str {
        match self {
            ProtocolId::BadClassical => "bad_classical",
            ProtocolId::BadQubit => "bad_qubit",
            ProtocolId::Qutrit => "qutrit",
            ProtocolId::Sequence => "sequence",
            ProtocolId::CoinflipReduction => "coinflip_reduction",
        }
    }

    /// Message labels a transcript of this protocol may contain.
    pub fn vocabulary(self) -> &'static [&'static str] {
        match self {
            ProtocolId::BadClassical => &["announce"],
            ProtocolId::BadQubit => &["qubit"],
            ProtocolId::Qutrit => &["qutrit", "qutrit_return", "permutation"],
            ProtocolId::Sequence => &["state", "test_request", "test_announce", "abort", "declare"],
            ProtocolId::CoinflipReduction => &[
                "announce",
                "qubit",
                "qutrit",
                "qutrit_return",
                "permutation",
                "state",
                "test_request",
                "test_announce",
                "abort",
                "declare",
                "coin",
                "assert",
                "rot_output",
            ],
        }
    }
}

impl fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtocolId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "bad_classical" => ProtocolId::BadClassical,
            "bad_qubit" => ProtocolId::BadQubit,
            "qutrit" => ProtocolId::Qutrit,
            "sequence" => ProtocolId::Sequence,
            "coinflip_reduction" => ProtocolId::CoinflipReduction,
            other => return Err(validation(format!("unknown protocol '{other}'"))),
        })
    }
}

/// A transmitted quantum system: the full joint pure state, the local
/// dimensions, and which factors travel with the message.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumPayload {
    pub dims: Vec<usize>,
    pub sent: Vec<usize>,
    pub amplitudes: Vec<[f64; 2]>,
}

impl QuantumPayload {
    pub fn new(state: &PureState, dims: &[usize], sent: &[usize]) -> Self {
        Self {
            dims: dims.to_vec(),
            sent: sent.to_vec(),
            amplitudes: state.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn state(&self) -> Result<PureState> {
        PureState::new(self.amplitudes.iter().map(|&[re, im]| C64::new(re, im)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    Bits(Vec<u8>),
    Indices(Vec<usize>),
    Null,
    Quantum(QuantumPayload),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Message {
    pub sender: Party,
    pub label: String,
    pub payload: Payload,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonLine {
    index: usize,
    sender: Party,
    label: String,
    payload: Payload,
}

/// Ordered message log of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct Transcript {
    protocol: ProtocolId,
    messages: Vec<Message>,
}

impl Transcript {
    pub fn new(protocol: ProtocolId) -> Self {
        Self {
            protocol,
            messages: Vec::new(),
        }
    }

    pub fn protocol(&self) -> ProtocolId {
        self.protocol
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn labels(&self) -> Vec<&str> {
        self.messages.iter().map(|m| m.label.as_str()).collect()
    }

    pub fn push(&mut self, sender: Party, label: &str, payload: Payload) {
        debug_assert!(
            self.protocol.vocabulary().contains(&label),
            "label {label} not in {} vocabulary",
            self.protocol
        );
        self.messages.push(Message {
            sender,
            label: label.to_owned(),
            payload,
        });
    }

    fn extend_from(&mut self, other: Transcript) {
        for m in other.messages {
            self.push(m.sender, &m.label, m.payload);
        }
    }

    /// One JSON object per line: `{index, sender, label, payload}`.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for (index, m) in self.messages.iter().enumerate() {
            let line = JsonLine {
                index,
                sender: m.sender,
                label: m.label.clone(),
                payload: m.payload.clone(),
            };
            out.push_str(&serde_json::to_string(&line).expect("transcript serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(protocol: ProtocolId, text: &str) -> Result<Self> {
        let mut t = Transcript::new(protocol);
        for (expected, line) in text.lines().filter(|l| !l.trim().is_empty()).enumerate() {
            let parsed: JsonLine = serde_json::from_str(line)
                .map_err(|e| validation(format!("transcript line {expected}: {e}")))?;
            if parsed.index != expected {
                return Err(validation(format!(
                    "transcript index {} out of order (expected {expected})",
                    parsed.index
                )));
            }
            if !protocol.vocabulary().contains(&parsed.label.as_str()) {
                return Err(validation(format!("unknown label '{}'", parsed.label)));
            }
            t.messages.push(Message {
                sender: parsed.sender,
                label: parsed.label,
                payload: parsed.payload,
            });
        }
        Ok(t)
    }
}

/// Honest-party result of one Rabin OT instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotOutcome {
    /// Alice's output; `None` is NULL.
    pub g_hat: Option<u8>,
    /// 0 iff Alice asserts receipt.
    pub assert_bit: u8,
    /// Bob's data bit `y`.
    pub bob_bit: u8,
    pub aborted: bool,
}

impl RotOutcome {
    pub fn new(g_hat: Option<u8>, bob_bit: u8) -> Self {
        Self {
            g_hat,
            assert_bit: u8::from(g_hat.is_none()),
            bob_bit,
            aborted: false,
        }
    }

    pub fn abort() -> Self {
        Self {
            g_hat: None,
            assert_bit: 1,
            bob_bit: 0,
            aborted: true,
        }
    }

    pub fn asserted(&self) -> bool {
        self.assert_bit == 0
    }
}

/// Bob's 1-out-of-2 OT inputs derived from his data bit, a dummy bit and a
/// permutation bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OtPair {
    pub x0: u8,
    pub x1: u8,
    pub p: u8,
    pub z_dummy: u8,
    pub y: u8,
}

impl OtPair {
    pub fn new(y: u8, z_dummy: u8, p: u8) -> Self {
        let (x0, x1) = if p == 0 { (y, z_dummy) } else { (z_dummy, y) };
        Self {
            x0,
            x1,
            p,
            z_dummy,
            y,
        }
    }

    pub fn bit(&self, index: u8) -> u8 {
        if index == 0 {
            self.x0
        } else {
            self.x1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CoinResult {
    Heads,
    Tails,
    Abort,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoinOutcome {
    pub result: CoinResult,
    pub a: u8,
    pub b: u8,
}

/// Parameters of the sequential protocol: `n_states` prepared states, of
/// which `⌊√n⌋` are tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceConfig {
    n_states: usize,
    test_size: usize,
}

impl SequenceConfig {
    pub fn new(n_states: usize) -> Result<Self> {
        if n_states < 4 {
            return Err(validation(format!(
                "sequence needs at least 4 states, got {n_states}"
            )));
        }
        let test_size = isqrt(n_states);
        if test_size >= n_states {
            return Err(validation("every state would be tested"));
        }
        Ok(Self { n_states, test_size })
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn test_size(&self) -> usize {
        self.test_size
    }

    pub fn untested(&self) -> usize {
        self.n_states - self.test_size
    }
}

fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn bit_payload(b: u8) -> Payload {
    Payload::Bits(vec![b])
}

fn computational_projectors(dim: usize) -> Vec<ComplexMatrix> {
    (0..dim)
        .map(|k| PureState::basis(dim, k).expect("basis").projector())
        .collect()
}

// ---------------------------------------------------------------------------
// Classical ROT biased against Bob: Bob flips the coin and either announces y or NULL.

pub fn run_bad_classical(seed: u64) -> (Transcript, RotOutcome) {
    let mut bob = PartyRng::new(seed, Party::Bob);
    let y = bob.bit();
    let heads = bob.bit() == 0;
    run_bad_classical_with(y, heads)
}

pub fn run_bad_classical_with(y: u8, heads: bool) -> (Transcript, RotOutcome) {
    let mut t = Transcript::new(ProtocolId::BadClassical);
    if heads {
        t.push(Party::Bob, "announce", bit_payload(y));
        (t, RotOutcome::new(Some(y), y))
    } else {
        t.push(Party::Bob, "announce", Payload::Null);
        (t, RotOutcome::new(None, y))
    }
}

// ---------------------------------------------------------------------------
// Qubit ROT biased against Alice: Bob sends |y⟩, Alice's coin decides whether she measures.

pub fn run_bad_qubit(seed: u64) -> (Transcript, RotOutcome) {
    let mut bob = PartyRng::new(seed, Party::Bob);
    let mut alice = PartyRng::new(seed, Party::Alice);
    let y = bob.bit();
    let heads = alice.bit() == 0;
    let r = alice.uniform();
    run_bad_qubit_with(y, heads, r)
}

pub fn run_bad_qubit_with(y: u8, heads: bool, rand: f64) -> (Transcript, RotOutcome) {
    let mut t = Transcript::new(ProtocolId::BadQubit);
    let qubit = PureState::basis(2, usize::from(y)).expect("basis");
    t.push(
        Party::Bob,
        "qubit",
        Payload::Quantum(QuantumPayload::new(&qubit, &[2], &[0])),
    );
    let g_hat = if heads {
        let k = measure(&qubit.density(), &computational_projectors(2), rand)
            .expect("computational basis measurement");
        Some(k as u8)
    } else {
        None
    };
    (t, RotOutcome::new(g_hat, y))
}

// ---------------------------------------------------------------------------
// Qutrit ROT: the OT-to-ROT reduction instantiated with the qutrit OT.

/// `(|aa⟩ + |22⟩)/√2` on `A ⊗ B`, basis index `3·A + B`.
pub fn qutrit_phi(choice: u8) -> PureState {
    let mut amps = [0.0; 9];
    let a = usize::from(choice);
    amps[3 * a + a] = FRAC_1_SQRT_2;
    amps[8] = FRAC_1_SQRT_2;
    PureState::from_real(&amps).expect("normalized")
}

/// `diag((-1)^{x0}, (-1)^{x1}, 1)` acting on the qutrit.
pub fn qutrit_unitary(x0: u8, x1: u8) -> ComplexMatrix {
    let sign = |x: u8| if x == 0 { 1.0 } else { -1.0 };
    ComplexMatrix::diagonal(&[sign(x0), sign(x1), 1.0]).expect("3x3")
}

/// Bob's unitary lifted to the joint space (identity on Alice's half).
pub fn qutrit_joint_unitary(x0: u8, x1: u8) -> ComplexMatrix {
    kron(&ComplexMatrix::identity(3).expect("3x3"), &qutrit_unitary(x0, x1)).expect("9x9")
}

/// Alice's honest measurement `{|φ_a⟩⟨φ_a|, 1 − |φ_a⟩⟨φ_a|}`.
pub fn qutrit_alice_projectors(choice: u8) -> [ComplexMatrix; 2] {
    let pi0 = qutrit_phi(choice).projector();
    let pi1 = ComplexMatrix::identity(9)
        .expect("9x9")
        .try_sub(&pi0)
        .expect("9x9");
    [pi0, pi1]
}

/// `table[choice][outcome]` is the value of `x_choice` that an honest run
/// with that outcome implies. Built once from Born probabilities, which are
/// all 0 or 1 on honest states.
pub fn qutrit_decode_table() -> &'static [[u8; 2]; 2] {
    static TABLE: OnceLock<[[u8; 2]; 2]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [[u8::MAX; 2]; 2];
        for choice in 0..2u8 {
            let projectors = qutrit_alice_projectors(choice);
            for x_choice in 0..2u8 {
                for other in 0..2u8 {
                    let (x0, x1) = if choice == 0 {
                        (x_choice, other)
                    } else {
                        (other, x_choice)
                    };
                    let state = qutrit_phi(choice)
                        .evolve(&qutrit_joint_unitary(x0, x1))
                        .expect("unitary");
                    let p0 = born_probability(&projectors[0], &state.density()).expect("dims");
                    let outcome = if (p0 - 1.0).abs() < STRUCTURAL_TOL {
                        0
                    } else {
                        assert!(p0.abs() < STRUCTURAL_TOL, "honest outcome is not deterministic");
                        1
                    };
                    let slot = &mut table[usize::from(choice)][outcome];
                    assert!(*slot == u8::MAX || *slot == x_choice, "ambiguous decoding");
                    *slot = x_choice;
                }
            }
        }
        assert!(table.iter().flatten().all(|&v| v <= 1), "decode table incomplete");
        table
    })
}

/// All classical choices of one honest qutrit run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QutritInputs {
    /// Alice's OT choice bit.
    pub choice: u8,
    pub y: u8,
    pub z_dummy: u8,
    pub p: u8,
}

pub fn run_qutrit(seed: u64) -> (Transcript, RotOutcome) {
    let mut alice = PartyRng::new(seed, Party::Alice);
    let mut bob = PartyRng::new(seed, Party::Bob);
    let choice = alice.bit();
    let y = bob.bit();
    let z_dummy = bob.bit();
    let p = bob.bit();
    let r = alice.uniform();
    run_qutrit_with(
        QutritInputs {
            choice,
            y,
            z_dummy,
            p,
        },
        r,
    )
}

pub fn run_qutrit_with(inputs: QutritInputs, rand: f64) -> (Transcript, RotOutcome) {
    let mut t = Transcript::new(ProtocolId::Qutrit);
    let phi = qutrit_phi(inputs.choice);
    t.push(
        Party::Alice,
        "qutrit",
        Payload::Quantum(QuantumPayload::new(&phi, &[3, 3], &[1])),
    );

    let pair = OtPair::new(inputs.y, inputs.z_dummy, inputs.p);
    let returned = phi
        .evolve(&qutrit_joint_unitary(pair.x0, pair.x1))
        .expect("unitary");
    t.push(
        Party::Bob,
        "qutrit_return",
        Payload::Quantum(QuantumPayload::new(&returned, &[3, 3], &[1])),
    );

    let outcome = measure(&returned.density(), &qutrit_alice_projectors(inputs.choice), rand)
        .expect("honest measurement");
    let x_choice = qutrit_decode_table()[usize::from(inputs.choice)][outcome];

    t.push(Party::Bob, "permutation", bit_payload(pair.p));
    let g_hat = (inputs.choice == pair.p).then_some(x_choice);
    (t, RotOutcome::new(g_hat, inputs.y))
}

// ---------------------------------------------------------------------------
// Sequential ROT: a sequence of ROTs from BB84-like two-qubit states.

/// `Ψ_{x0x1}`: `|00⟩, |++⟩, |−−⟩, |11⟩` for `00, 01, 10, 11`.
pub fn sequence_state(x0: u8, x1: u8) -> PureState {
    let h = 0.5;
    let amps: [f64; 4] = match (x0, x1) {
        (0, 0) => [1.0, 0.0, 0.0, 0.0],
        (0, 1) => [h, h, h, h],
        (1, 0) => [h, -h, -h, h],
        _ => [0.0, 0.0, 0.0, 1.0],
    };
    PureState::from_real(&amps).expect("normalized")
}

/// Whether `Ψ_{x0x1}` is tested in the Hadamard basis.
pub fn sequence_uses_x_basis(x0: u8, x1: u8) -> bool {
    x0 != x1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Z,
    X,
}

fn qubit_basis(basis: Basis) -> [PureState; 2] {
    match basis {
        Basis::Z => [
            PureState::basis(2, 0).expect("basis"),
            PureState::basis(2, 1).expect("basis"),
        ],
        Basis::X => [
            PureState::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).expect("plus"),
            PureState::from_real(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).expect("minus"),
        ],
    }
}

/// Product measurement on two qubits; outcome index is `2·o₁ + o₂`.
pub fn two_qubit_projectors(first: Basis, second: Basis) -> Vec<ComplexMatrix> {
    let b1 = qubit_basis(first);
    let b2 = qubit_basis(second);
    let mut out = Vec::with_capacity(4);
    for u in &b1 {
        for v in &b2 {
            out.push(u.kron(v).expect("2x2").projector());
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BitIndex {
    First,
    Second,
}

impl BitIndex {
    pub fn from_bit(b: u8) -> Self {
        if b == 0 {
            BitIndex::First
        } else {
            BitIndex::Second
        }
    }

    pub fn pick(self, x0: u8, x1: u8) -> u8 {
        match self {
            BitIndex::First => x0,
            BitIndex::Second => x1,
        }
    }
}

/// What an honest Z⊗X outcome `(o₁, o₂)` on an untested state reveals.
/// `o₂ = 0` is `|+⟩`.
pub fn decode_untested(o1: u8, o2: u8) -> (BitIndex, u8) {
    match (o1, o2) {
        (0, 0) => (BitIndex::First, 0),
        (0, 1) => (BitIndex::Second, 0),
        (1, 0) => (BitIndex::Second, 1),
        _ => (BitIndex::First, 1),
    }
}

/// How Bob behaves in the sequential protocol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceBob {
    Honest,
    /// After the test set is known, lies about one tested state.
    AnnounceWrongState,
    /// Sends the state orthogonal to his (truthful) announcement at one
    /// uniformly chosen index.
    SendOrthogonal,
}

impl FromStr for SequenceBob {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "honest" => SequenceBob::Honest,
            "announce-wrong-state" => SequenceBob::AnnounceWrongState,
            "send-orthogonal" => SequenceBob::SendOrthogonal,
            other => return Err(validation(format!("unknown Bob variant '{other}'"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceRun {
    pub transcript: Transcript,
    /// One outcome per untested index, in index order; empty on abort.
    pub outcomes: Vec<RotOutcome>,
    pub aborted: bool,
}

/// Alice's consistency test for one index: does `outcome`, measured in the
/// basis matching the announced state, have nonzero probability under it?
pub fn sequence_test_consistent(announced: (u8, u8), outcome: usize) -> bool {
    let basis = if sequence_uses_x_basis(announced.0, announced.1) {
        Basis::X
    } else {
        Basis::Z
    };
    let projectors = two_qubit_projectors(basis, basis);
    let state = sequence_state(announced.0, announced.1).density();
    born_probability(&projectors[outcome], &state).expect("dims") > STRUCTURAL_TOL
}

pub fn run_sequence(cfg: SequenceConfig, seed: u64) -> (Transcript, Vec<RotOutcome>) {
    let run = run_sequence_with_bob(cfg, seed, SequenceBob::Honest);
    if run.aborted {
        (run.transcript, vec![RotOutcome::abort()])
    } else {
        (run.transcript, run.outcomes)
    }
}

pub fn run_sequence_with_bob(cfg: SequenceConfig, seed: u64, behaviour: SequenceBob) -> SequenceRun {
    let mut alice = PartyRng::new(seed, Party::Alice);
    let mut bob = PartyRng::new(seed, Party::Bob);
    let n = cfg.n_states;
    let mut t = Transcript::new(ProtocolId::Sequence);

    let pairs: Vec<(u8, u8)> = (0..n).map(|_| (bob.bit(), bob.bit())).collect();
    let corrupted = match behaviour {
        SequenceBob::SendOrthogonal => Some(bob.below(n)),
        _ => None,
    };
    let states: Vec<PureState> = pairs
        .iter()
        .enumerate()
        .map(|(j, &(x0, x1))| {
            if corrupted == Some(j) {
                // Ψ00 ⟂ Ψ11 and Ψ01 ⟂ Ψ10.
                sequence_state(1 - x0, 1 - x1)
            } else {
                sequence_state(x0, x1)
            }
        })
        .collect();
    for s in &states {
        t.push(
            Party::Bob,
            "state",
            Payload::Quantum(QuantumPayload::new(s, &[2, 2], &[0, 1])),
        );
    }

    let tested = alice.subset(n, cfg.test_size);
    t.push(Party::Alice, "test_request", Payload::Indices(tested.clone()));

    let mut announced: Vec<(u8, u8)> = tested.iter().map(|&j| pairs[j]).collect();
    if behaviour == SequenceBob::AnnounceWrongState {
        let victim = bob.below(announced.len());
        let truth = announced[victim];
        let code = (truth.0 << 1 | truth.1) as usize;
        let shift = 1 + bob.below(3);
        let lie = (code + shift) % 4;
        announced[victim] = ((lie >> 1) as u8, (lie & 1) as u8);
    }
    t.push(
        Party::Bob,
        "test_announce",
        Payload::Bits(announced.iter().flat_map(|&(a, b)| [a, b]).collect()),
    );

    let mut consistent = true;
    for (&j, &claim) in tested.iter().zip(&announced) {
        let basis = if sequence_uses_x_basis(claim.0, claim.1) {
            Basis::X
        } else {
            Basis::Z
        };
        let k = measure(
            &states[j].density(),
            &two_qubit_projectors(basis, basis),
            alice.uniform(),
        )
        .expect("test measurement");
        consistent &= sequence_test_consistent(claim, k);
    }
    if !consistent {
        t.push(Party::Alice, "abort", Payload::Null);
        return SequenceRun {
            transcript: t,
            outcomes: Vec::new(),
            aborted: true,
        };
    }

    let zx = two_qubit_projectors(Basis::Z, Basis::X);
    let untested: Vec<usize> = (0..n).filter(|j| tested.binary_search(j).is_err()).collect();
    let learned: Vec<(BitIndex, u8)> = untested
        .iter()
        .map(|&j| {
            let k = measure(&states[j].density(), &zx, alice.uniform()).expect("Z⊗X measurement");
            decode_untested((k >> 1) as u8, (k & 1) as u8)
        })
        .collect();

    let declared: Vec<u8> = untested.iter().map(|_| bob.bit()).collect();
    t.push(Party::Bob, "declare", Payload::Bits(declared.clone()));

    let outcomes = untested
        .iter()
        .zip(&learned)
        .zip(&declared)
        .map(|((&j, &(index, value)), &d)| {
            let which = BitIndex::from_bit(d);
            let y = which.pick(pairs[j].0, pairs[j].1);
            RotOutcome::new((index == which).then_some(value), y)
        })
        .collect();
    SequenceRun {
        transcript: t,
        outcomes,
        aborted: false,
    }
}

// ---------------------------------------------------------------------------
// Coin flip reduction: strong coin flipping from any ROT.

/// Which honest ROT executor to use as a single-shot subroutine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RotProtocol {
    BadClassical,
    BadQubit,
    Qutrit,
    /// The first untested outcome of a sequential run.
    Sequence(SequenceConfig),
}

impl RotProtocol {
    pub fn id(&self) -> ProtocolId {
        match self {
            RotProtocol::BadClassical => ProtocolId::BadClassical,
            RotProtocol::BadQubit => ProtocolId::BadQubit,
            RotProtocol::Qutrit => ProtocolId::Qutrit,
            RotProtocol::Sequence(_) => ProtocolId::Sequence,
        }
    }

    /// `n_states` is only consulted for the sequential protocol.
    pub fn from_id(id: ProtocolId, n_states: usize) -> Result<Self> {
        Ok(match id {
            ProtocolId::BadClassical => RotProtocol::BadClassical,
            ProtocolId::BadQubit => RotProtocol::BadQubit,
            ProtocolId::Qutrit => RotProtocol::Qutrit,
            ProtocolId::Sequence => RotProtocol::Sequence(SequenceConfig::new(n_states)?),
            ProtocolId::CoinflipReduction => return Err(validation("coin flipping is not a ROT protocol")),
        })
    }

    pub fn run(&self, seed: u64) -> (Transcript, RotOutcome) {
        match self {
            RotProtocol::BadClassical => run_bad_classical(seed),
            RotProtocol::BadQubit => run_bad_qubit(seed),
            RotProtocol::Qutrit => run_qutrit(seed),
            RotProtocol::Sequence(cfg) => {
                let (t, outcomes) = run_sequence(*cfg, seed);
                (t, outcomes[0])
            }
        }
    }
}

/// Bob's check on Alice's report. Asserting requires `ĝ = y`; not asserting
/// requires `ĝ = NULL`.
pub fn coin_report_consistent(a: u8, y: u8, g_hat: Option<u8>) -> bool {
    match a {
        0 => g_hat == Some(y),
        _ => g_hat.is_none(),
    }
}

/// Final coin of the reduction given Bob's bit and Alice's report.
pub fn coin_result(a: u8, b: u8, y: u8, g_hat: Option<u8>) -> CoinResult {
    if !coin_report_consistent(a, y, g_hat) {
        CoinResult::Abort
    } else if a == b {
        CoinResult::Heads
    } else {
        CoinResult::Tails
    }
}

pub fn run_coinflip_reduction(rot: &RotProtocol, seed: u64) -> (Transcript, CoinOutcome) {
    let (rot_transcript, rot_outcome) = rot.run(split_seed(seed, 0));
    let mut bob = PartyRng::new(seed, Party::Bob);
    let b = bob.bit();
    let mut t = Transcript::new(ProtocolId::CoinflipReduction);
    t.extend_from(rot_transcript);
    if rot_outcome.aborted {
        return (
            t,
            CoinOutcome {
                result: CoinResult::Abort,
                a: rot_outcome.assert_bit,
                b,
            },
        );
    }
    let (coin_t, outcome) = finish_coinflip(rot_outcome, b);
    t.extend_from(coin_t);
    (t, outcome)
}

/// The classical tail of the reduction once the ROT has produced `rot`.
pub fn finish_coinflip(rot: RotOutcome, b: u8) -> (Transcript, CoinOutcome) {
    let mut t = Transcript::new(ProtocolId::CoinflipReduction);
    let a = rot.assert_bit;
    t.push(Party::Bob, "coin", bit_payload(b));
    t.push(Party::Alice, "assert", bit_payload(a));
    t.push(
        Party::Alice,
        "rot_output",
        match rot.g_hat {
            Some(g) => bit_payload(g),
            None => Payload::Null,
        },
    );
    let result = coin_result(a, b, rot.bob_bit, rot.g_hat);
    (t, CoinOutcome { result, a, b })
}
