//! Security analysis toolkit for quantum Rabin oblivious transfer.
//!
//! - [`linalg`]: small dense complex matrices, density matrices, Helstrom
//!   discrimination and projective measurement.
//! - [`protocols`]: honest executions with JSONL transcripts.
//! - [`adversary`]: optimal cheating evaluators and executable attacks.
//! - [`security`]: cheating advantage, balancing and the coin-flip bound.
//! - [`montecarlo`]: seeded statistical estimates.
//! - [`cli`]: the `rotlab` command-line front end.

pub mod adversary;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod montecarlo;
pub mod protocols;
pub mod rng;
pub mod security;

pub use error::{Error, Result};
