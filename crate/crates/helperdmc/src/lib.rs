//! Capacity workbench for state-dependent discrete memoryless channels whose
//! IID state sequence is observed by a rate-limited helper that describes it
//! causally to the encoder (and, in some settings, to the decoder).
//!
//! The library provides:
//!
//! - an exact finite-alphabet probability engine (PMFs, joint tables,
//!   entropy / mutual information / KL, Markov-condition checks, robust
//!   typicality) — [`probcore`];
//! - the channel data model with JSON (de)serialization and the channel
//!   constructions the theory uses: meta-state reduction, super channels over
//!   strategy families, sum channels, full-CSI capacity — [`channels`];
//! - a certified-gap Blahut–Arimoto core plus evaluators for the four helper
//!   settings: full causal state at the encoder, symbol-by-symbol helper,
//!   message-cognizant helper, and decoder state information — [`helpercap`];
//! - three worked example channels with every claimed value executable —
//!   [`examples`];
//! - the block-Markov achievability machinery: joint construction, rate
//!   formula, feasible-rate picker, and a Monte Carlo encoder/decoder
//!   simulator with backward decoding — [`blockmarkov`];
//! - a duality-based capacity upper bound (output-distribution form) with a
//!   strategy classifier, closed-form class bounds, and a brute-force exact
//!   KL oracle — [`duality`];
//! - seeded random instance generators shared by the test suites and the
//!   reproduction harness — [`suites`], [`repro`].
//!
//! All rates and entropies are in bits (base-2 logs) throughout.

pub mod blockmarkov;
pub mod channels;
pub mod duality;
pub mod error;
pub mod examples;
pub mod helpercap;
pub mod probcore;
pub mod repro;
pub mod rng;
pub mod suites;

pub use error::{Error, Result};
