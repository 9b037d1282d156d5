//! Error taxonomy for the workbench.
//!
//! Variants are grouped by how the CLI maps them to exit codes: validation
//! and usage problems (exit 1), enumeration/search caps (exit 2). Reproduction
//! failures are a CLI-level condition (exit 3), not an error variant here.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad probabilities, alphabet mismatches, bad flags.
    #[error("validation error: {0}")]
    Validation(String),

    /// KL divergence is +infinity: p has mass where q has none. Signalled as
    /// a distinct error rather than a float so callers cannot silently
    /// propagate infinities.
    #[error("infinite divergence: p({symbol}) = {p} > 0 but q({symbol}) = 0")]
    InfiniteDivergence { symbol: String, p: f64 },

    /// An enumeration (helpers, strategies, strategy pairs) would exceed the
    /// configured cap. The operation refuses rather than subsampling.
    #[error("enumeration cap exceeded: {required} objects needed, cap is {cap}")]
    EnumCapExceeded { required: u128, cap: u64 },

    /// The simulator's decoder hypothesis space exceeds the configured cap.
    #[error("search cap exceeded: {required} decoder hypotheses, cap is {cap}")]
    SearchCapExceeded { required: u128, cap: u64 },

    /// A joint table would exceed the configured memory cap.
    #[error("joint table too large: {required} entries needed, cap is {cap}")]
    TableCapExceeded { required: u128, cap: u64 },

    /// Blahut–Arimoto failed to certify the tolerance within max_iter.
    #[error(
        "no convergence after {iterations} iterations: gap {gap:.3e} bits > tolerance {tol:.3e}"
    )]
    NoConvergence { iterations: u64, gap: f64, tol: f64 },

    /// The strict rate constraints admit no point (or the rate is zero).
    #[error("empty feasible rate region: {0}")]
    EmptyRateRegion(String),

    /// A claimed positivity witness does not actually separate output rows.
    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    /// A size parameter is outside the supported dense-construction range.
    #[error("unsupported size: {0}")]
    TooLarge(String),

    /// An operation that needs data got none (empty sequence, empty list).
    #[error("empty input: {0}")]
    EmptyInput(String),

    /// Unknown, duplicate, or overlapping axis names in a joint-table query.
    #[error("axis error: {0}")]
    Axis(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
