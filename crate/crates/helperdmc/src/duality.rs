//! Duality-based capacity upper bounds.
//!
//! For any channel and any output law `Q`, the capacity is at most
//! `max_u D(P(.|u) || Q)`. This module applies that bound to the indexed
//! two-word channel family (the `eta`-parameterized channel built by
//! `examples::build_example2`) when the encoder causally learns the first
//! state bit, using the reference output law
//!
//! `Q(a', d0, d1) = Bern(delta)(a') * 2^{-2 eta}`.
//!
//! Every causal encoding map for that setting is described by
//! `u = (a0, b0, c0, a1, b1, c1)`: on description bit `t` the encoder sends
//! address bit `a_t`, guess bit `b_t`, and payload word `c_t`. The module
//! provides:
//!
//! - [`exact_kl_for_strategy`]: the exact divergence by output enumeration
//!   (small `eta`);
//! - [`class_bound`]: a closed-form bound per strategy, valid for all
//!   `eta`, selected by the `(a0, a1, b0, b1)` pattern;
//! - [`duality_upper_bound`]: the final two-term bound
//!   `max{eta + 2^-eta - 1 + log2(1/(1-delta)), 3 eta/4 + log2(1/delta)}`;
//! - [`delta_optimized_bound`]: the bound minimized over `delta` on a grid;
//! - [`generic_duality_bound`]: the bound for an arbitrary DMC and output
//!   law.

use crate::channels::DmcChannel;
use crate::error::{Error, Result};
use crate::probcore::{kl_of_probs, Pmf};

/// Largest payload width for which exact output enumeration is allowed
/// (the output alphabet has `2^(1+2 eta)` letters).
pub const MAX_EXACT_ETA: usize = 6;

// ---------------------------------------------------------------------------
// Types

/// A causal encoding map for the two-word channel with a one-bit state
/// description: on description `t` send `(a_t, b_t, c_t)` with payload
/// words stored as little bit sets in `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrategyTwoWord {
    pub a0: u8,
    pub b0: u8,
    pub c0: u64,
    pub a1: u8,
    pub b1: u8,
    pub c1: u64,
}

impl StrategyTwoWord {
    /// The four-bit pattern that determines the strategy's bound class.
    pub fn pattern(&self) -> (u8, u8, u8, u8) {
        (self.a0, self.a1, self.b0, self.b1)
    }

    pub fn describe(&self) -> String {
        format!(
            "a0={} b0={} c0={:#x} a1={} b1={} c1={:#x}",
            self.a0, self.b0, self.c0, self.a1, self.b1, self.c1
        )
    }
}

/// Parameters of the duality evaluation: payload width and the reference
/// output law's address bias.
#[derive(Debug, Clone, Copy)]
pub struct DualityConfig {
    pub eta: usize,
    pub delta: f64,
}

impl DualityConfig {
    pub fn new(eta: usize, delta: f64) -> Result<Self> {
        if eta == 0 {
            return Err(Error::Validation("payload width must be at least 1".into()));
        }
        if !(delta > 0.0 && delta < 0.5) {
            return Err(Error::Validation(format!(
                "address bias must lie in (0, 1/2), got {delta}"
            )));
        }
        Ok(DualityConfig { eta, delta })
    }
}

// ---------------------------------------------------------------------------
// Exact divergence

/// Validate strategy fields against the payload width.
fn check_strategy(u: &StrategyTwoWord, eta: usize) -> Result<()> {
    let word_mask = if eta >= 64 { u64::MAX } else { (1u64 << eta) - 1 };
    if u.a0 > 1 || u.a1 > 1 || u.b0 > 1 || u.b1 > 1 {
        return Err(Error::Validation("strategy address/guess fields must be bits".into()));
    }
    if u.c0 & !word_mask != 0 || u.c1 & !word_mask != 0 {
        return Err(Error::Validation(format!(
            "strategy payload words exceed width {eta}"
        )));
    }
    Ok(())
}

/// Exact `D(P(.|u) || Q)` by summing over the full output alphabet.
/// Only available for `eta <= MAX_EXACT_ETA`.
pub fn exact_kl_for_strategy(u: &StrategyTwoWord, cfg: &DualityConfig) -> Result<f64> {
    let eta = cfg.eta;
    if eta > MAX_EXACT_ETA {
        return Err(Error::TooLarge(format!(
            "exact divergence enumerates 2^(1+2*{eta}) outputs; width capped at {MAX_EXACT_ETA}"
        )));
    }
    check_strategy(u, eta)?;
    let words = 1u64 << eta;
    let uniform_word = (words as f64).recip();
    let uniform_all = 0.5 * uniform_word * uniform_word;
    let mut kl = 0.0;
    for a_out in 0..2u8 {
        let q_cell = if a_out == 0 { 1.0 - cfg.delta } else { cfg.delta } * uniform_word * uniform_word;
        for d0 in 0..words {
            for d1 in 0..words {
                // Average the channel law over the four equiprobable states;
                // the description bit t equals the first state bit.
                let mut p = 0.0;
                for s0 in 0..2u8 {
                    for s1 in 0..2u8 {
                        let (a, b, c) = if s0 == 0 {
                            (u.a0, u.b0, u.c0)
                        } else {
                            (u.a1, u.b1, u.c1)
                        };
                        let s_at_a = if a == 0 { s0 } else { s1 };
                        let cond = if b == s_at_a {
                            // Matched guess: the address bit passes through,
                            // the addressed word carries the payload, the
                            // other word is uniform.
                            let pinned = if b == 0 { d0 } else { d1 };
                            if a_out == a && pinned == c {
                                uniform_word
                            } else {
                                0.0
                            }
                        } else {
                            uniform_all
                        };
                        p += 0.25 * cond;
                    }
                }
                if p > 0.0 {
                    kl += p * (p / q_cell).log2();
                }
            }
        }
    }
    Ok(kl.max(0.0))
}

// ---------------------------------------------------------------------------
// Closed-form class bounds

/// Closed-form divergence bound for a strategy, valid for every payload
/// width, selected by the `(a0, a1, b0, b1)` pattern. Payload words never
/// affect classification. Returns `(class_id, bound_bits)`.
///
/// Classes (with `L = log2(1/delta)` and `M = log2(1/(1-delta))`):
/// - `tight`: the guess matches for every state; the bound
///   `eta + 2^-eta - 1 + M` is attained with equality for every payload
///   choice;
/// - `uniform`: the guess never matches, the output is exactly uniform and
///   the divergence is `D(Bern(1/2) || Bern(delta)) <= L`, bounded by `L`;
/// - `quarter` / `half` / `three-quarter`: the guess matches with
///   probability 1/4, 1/2, 3/4; bounds `eta/4 + L`, `eta/2 + L`,
///   `3 eta/4 + L`.
pub fn class_bound(u: &StrategyTwoWord, cfg: &DualityConfig) -> Result<(String, f64)> {
    check_strategy(u, cfg.eta)?;
    let eta = cfg.eta as f64;
    let l = (1.0 / cfg.delta).log2();
    let m = (1.0 / (1.0 - cfg.delta)).log2();
    let (class, bound) = match u.pattern() {
        (0, 0, 0, 1) => ("tight", eta + 2f64.powi(-(cfg.eta as i32)) - 1.0 + m),
        (0, 0, 1, 0) => ("uniform", l),
        (0, 0, 0, 0) | (0, 0, 1, 1) | (1, 1, 0, 0) | (1, 1, 0, 1) | (1, 1, 1, 0)
        | (1, 1, 1, 1) => ("half", eta / 2.0 + l),
        (0, 1, 0, 0) | (0, 1, 0, 1) | (1, 0, 0, 1) | (1, 0, 1, 1) => {
            ("three-quarter", 3.0 * eta / 4.0 + l)
        }
        (0, 1, 1, 0) | (0, 1, 1, 1) | (1, 0, 0, 0) | (1, 0, 1, 0) => {
            ("quarter", eta / 4.0 + l)
        }
        other => {
            return Err(Error::Validation(format!(
                "strategy pattern {other:?} escaped the total classifier"
            )))
        }
    };
    Ok((class.to_string(), bound))
}

/// The final two-term upper bound on the one-bit-description capacity:
/// the tight class's value versus the best mismatch class,
/// `max{eta + 2^-eta - 1 + log2(1/(1-delta)), 3 eta/4 + log2(1/delta)}`.
pub fn duality_upper_bound(cfg: &DualityConfig) -> f64 {
    let eta = cfg.eta as f64;
    let tight = eta + 2f64.powi(-(cfg.eta as i32)) - 1.0 + (1.0 / (1.0 - cfg.delta)).log2();
    let mismatch = 3.0 * eta / 4.0 + (1.0 / cfg.delta).log2();
    tight.max(mismatch)
}

/// Minimize [`duality_upper_bound`] over the address bias on a geometric
/// grid `delta = 2^-e`, `e` stepping by 0.05 over (1, 40]. Returns
/// `(best_delta, best_bound)`.
pub fn delta_optimized_bound(eta: usize) -> Result<(f64, f64)> {
    if eta == 0 {
        return Err(Error::Validation("payload width must be at least 1".into()));
    }
    let mut best: Option<(f64, f64)> = None;
    let mut e = 1.05;
    while e <= 40.0 {
        let delta = 2f64.powf(-e);
        let cfg = DualityConfig::new(eta, delta)?;
        let bound = duality_upper_bound(&cfg);
        if best.map_or(true, |(_, b)| bound < b) {
            best = Some((delta, bound));
        }
        e += 0.05;
    }
    Ok(best.expect("grid is non-empty"))
}

/// The 64 canonical strategies: all 16 `(a0, a1, b0, b1)` patterns crossed
/// with payload words drawn from {word 0, word 1} for each description.
/// Sweeping this set covers every bound class and both payload-collision
/// cases.
pub fn canonical_strategies(eta: usize) -> Result<Vec<StrategyTwoWord>> {
    if eta == 0 {
        return Err(Error::Validation("payload width must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(64);
    for a0 in 0..2u8 {
        for a1 in 0..2u8 {
            for b0 in 0..2u8 {
                for b1 in 0..2u8 {
                    for c0 in 0..2u64 {
                        for c1 in 0..2u64 {
                            out.push(StrategyTwoWord {
                                a0,
                                b0,
                                c0,
                                a1,
                                b1,
                                c1,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Generic bound

/// `max_u D(P(.|u) || q)` for an arbitrary DMC: an upper bound on its
/// capacity for every output law `q`, tight when `q` is the
/// capacity-achieving output law. Errors if some row puts mass where `q`
/// has none.
pub fn generic_duality_bound(ch: &DmcChannel, q: &Pmf) -> Result<f64> {
    if q.len() != ch.n_out() {
        return Err(Error::Validation(format!(
            "output law has {} entries for {} channel outputs",
            q.len(),
            ch.n_out()
        )));
    }
    let mut best = f64::NEG_INFINITY;
    for i in 0..ch.n_in() {
        best = best.max(kl_of_probs(ch.row(i), q.probs())?);
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
