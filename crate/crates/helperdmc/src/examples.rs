//! Stock channels and their evaluators: three fixed state-dependent
//! channels that separate the helper-capacity notions, the causal
//! feedback-description scheme for the second channel, closed-form rate
//! bounds for its symbol-by-symbol helpers, and the reference block-Markov
//! spec built on top of it.
//!
//! Conventions, fixed once for all tuple alphabets:
//!
//! - channel 1: inputs and outputs are bit pairs `a|b`, states are bit
//!   pairs `s0|s1`, indexed `a*2+b` and `s0*2+s1`;
//! - channel 2: inputs `a|b|c` with payload word `c` of `eta` bits,
//!   indexed `a*2^(eta+1) + b*2^eta + c`; outputs `a'|d0|d1` indexed
//!   `a'*2^(2 eta) + d0*2^eta + d1` (address first, then word 0, word 1);
//! - channel 3: binary input, quaternary state, outputs are 4-bit strings
//!   indexed most-significant-bit first, so component `s` of output `y`
//!   is `(y >> (3-s)) & 1`.

use crate::blockmarkov::BlockMarkovSpec;
use crate::channels::{Channel, HelpAlphabet};
use crate::duality::{duality_upper_bound, DualityConfig};
use crate::error::{Error, Result};
use crate::helpercap::HelperMap;
use crate::probcore::{CondPmf, Pmf};
use crate::rng::StreamRng;

/// Widest payload for which the second channel fits a dense table
/// (`|X| * |Y| * |S| = 2^(3 eta + 5)` entries).
pub const EX2_MAX_DENSE_ETA: usize = 6;

/// Widest payload for which the reference block-Markov spec keeps its
/// dense joint table within budget.
pub const REFERENCE_BM_MAX_ETA: usize = 3;

fn bit_word(v: usize, width: usize) -> String {
    format!("{v:0width$b}")
}

fn pair_labels() -> Vec<String> {
    (0..4).map(|i| format!("{}|{}", i >> 1, i & 1)).collect()
}

// ---------------------------------------------------------------------------
// Channel 1: address-selected bit flip

/// Inputs `(A,B)`, states `(S0,S1)` uniform, output `(A, B xor S^(A))`:
/// the input's address bit selects which state bit corrupts the data bit.
pub fn build_example1() -> (Channel, HelpAlphabet) {
    let labels = pair_labels();
    let mut w = vec![vec![vec![0.0; 4]; 4]; 4];
    for s in 0..4usize {
        let (s0, s1) = (s >> 1, s & 1);
        for x in 0..4usize {
            let (a, b) = (x >> 1, x & 1);
            let s_a = if a == 0 { s0 } else { s1 };
            w[s][x][a * 2 + (b ^ s_a)] = 1.0;
        }
    }
    let ch = Channel::new(
        labels.clone(),
        labels.clone(),
        labels.clone(),
        Pmf::uniform(labels).expect("uniform state law"),
        w,
        None,
    )
    .expect("fixed table is a valid channel");
    (ch, HelpAlphabet::of_size(2).expect("binary description alphabet"))
}

// ---------------------------------------------------------------------------
// Channel 2: address-matched payload pipe

/// Parameters of the payload channel: the payload word width in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Example2Params {
    eta: usize,
}

impl Example2Params {
    pub fn new(eta: usize) -> Result<Self> {
        if eta == 0 {
            return Err(Error::Validation(
                "payload width must be at least 1 bit".into(),
            ));
        }
        Ok(Example2Params { eta })
    }

    pub fn eta(&self) -> usize {
        self.eta
    }
}

/// Inputs `(A, B, C)` with `C` an `eta`-bit word, states `(S0,S1)`
/// uniform, outputs `(A', D0, D1)`. When the guess matches
/// (`B = S^(A)`) the output carries the address and the payload:
/// `A' = A`, `D^(B) = C`, and the other word is uniform noise. When the
/// guess misses, the output is uniform over its whole alphabet.
pub fn build_example2(p: Example2Params) -> Result<(Channel, HelpAlphabet)> {
    let eta = p.eta();
    if eta > EX2_MAX_DENSE_ETA {
        return Err(Error::TooLarge(format!(
            "payload width {eta} needs a dense table of 2^{} entries; the dense \
             constructor caps at width {EX2_MAX_DENSE_ETA}",
            3 * eta + 5
        )));
    }
    let n_c = 1usize << eta;
    let n_x = 4 * n_c;
    let n_y = 2 * n_c * n_c;
    let x_labels: Vec<String> = (0..n_x)
        .map(|x| {
            format!(
                "{}|{}|{}",
                (x >> (eta + 1)) & 1,
                (x >> eta) & 1,
                bit_word(x & (n_c - 1), eta)
            )
        })
        .collect();
    let y_labels: Vec<String> = (0..n_y)
        .map(|y| {
            format!(
                "{}|{}|{}",
                (y >> (2 * eta)) & 1,
                bit_word((y >> eta) & (n_c - 1), eta),
                bit_word(y & (n_c - 1), eta)
            )
        })
        .collect();
    let s_labels: Vec<String> = (0..4).map(|s| format!("{}|{}", s >> 1, s & 1)).collect();
    let match_mass = 1.0 / n_c as f64;
    let miss_mass = 1.0 / n_y as f64;
    let mut w = vec![vec![vec![0.0; n_y]; n_x]; 4];
    for s in 0..4usize {
        let (s0, s1) = (s >> 1, s & 1);
        for x in 0..n_x {
            let a = (x >> (eta + 1)) & 1;
            let b = (x >> eta) & 1;
            let c = x & (n_c - 1);
            let s_a = if a == 0 { s0 } else { s1 };
            if b == s_a {
                for free in 0..n_c {
                    let (d0, d1) = if b == 0 { (c, free) } else { (free, c) };
                    w[s][x][(a << (2 * eta)) | (d0 << eta) | d1] = match_mass;
                }
            } else {
                for cell in w[s][x].iter_mut() {
                    *cell = miss_mass;
                }
            }
        }
    }
    let ch = Channel::new(
        x_labels,
        y_labels,
        s_labels.clone(),
        Pmf::uniform(s_labels).expect("uniform state law"),
        w,
        None,
    )?;
    Ok((ch, HelpAlphabet::of_size(2)?))
}

/// Run the feedback-description scheme on the payload channel for `n`
/// uses: the helper tracks `T_i = S_i^(T_{i-1})` starting from `T_0 = 0`,
/// the encoder sends `A_i = T_{i-1}`, `B_i = T_i`, and a fresh payload
/// word `C_i`; the receiver learns `T_i` from the next output's address
/// field and reads payload `i` out of word `T_i` of output `i`. Returns
/// `(decode errors, rate)` where the rate counts the `n-1` recoverable
/// payloads: `(n-1) * eta / n` bits per use.
pub fn simulate_ex2_causal_scheme(
    p: Example2Params,
    n: usize,
    seed: u64,
) -> Result<(u64, f64)> {
    if n == 0 {
        return Err(Error::Validation(
            "the scheme needs at least one channel use".into(),
        ));
    }
    let eta = p.eta();
    if eta >= 64 {
        return Err(Error::TooLarge(format!(
            "payload width {eta} exceeds the 63-bit word simulator"
        )));
    }
    let mask = (1u64 << eta) - 1;
    let rng = StreamRng::from_seed(seed);
    let states = rng.child_str("states");
    let payload = rng.child_str("payload");
    let noise = rng.child_str("noise");
    let mut t_prev = 0u64;
    let mut outputs: Vec<(u64, u64, u64)> = Vec::with_capacity(n);
    let mut sent: Vec<u64> = Vec::with_capacity(n);
    for i in 0..n {
        let sv = states.value_at(i as u64) & 3;
        let (s0, s1) = (sv >> 1, sv & 1);
        // Helper: describe the state bit the previous description addresses.
        let t = if t_prev == 0 { s0 } else { s1 };
        let a = t_prev;
        let b = t;
        let c = payload.value_at(i as u64) & mask;
        // By construction b equals the state bit at address a, so the
        // channel is always in its matched mode.
        debug_assert_eq!(b, if a == 0 { s0 } else { s1 });
        let free = noise.value_at(i as u64) & mask;
        let (d0, d1) = if b == 0 { (c, free) } else { (free, c) };
        outputs.push((a, d0, d1));
        sent.push(c);
        t_prev = t;
    }
    let mut errors = 0u64;
    for i in 0..n.saturating_sub(1) {
        // The next output's address field reveals this use's description.
        let t_i = outputs[i + 1].0;
        let (_, d0, d1) = outputs[i];
        let decoded = if t_i == 0 { d0 } else { d1 };
        if decoded != sent[i] {
            errors += 1;
        }
    }
    let rate = (n as f64 - 1.0) * eta as f64 / n as f64;
    Ok((errors, rate))
}

/// One symbol-by-symbol helper for the payload channel together with a
/// closed-form upper bound on the rate it can support, broken into the
/// intermediate quantities the bound is assembled from.
#[derive(Debug, Clone)]
pub struct Ex2BoundBreakdown {
    /// `xor` (parity of the state bits), `and` (their conjunction), or
    /// `s0` (the first state bit).
    pub helper_id: String,
    pub helper: HelperMap,
    pub bound_bits: f64,
    pub terms: Vec<(String, f64)>,
}

/// Closed-form rate bounds for the three canonical one-bit helpers of the
/// payload channel, exact at any width:
///
/// - parity helper: matching `B = S^(A)` succeeds with probability 1/2
///   whatever the encoder does, giving `(eta+2)/2 + 1`;
/// - conjunction helper: description 1 pins the state (probability 1/4,
///   worth `eta+2`); under description 0 the match probability is at most
///   2/3, giving `1 + (2/3)(eta+2)`;
/// - first-bit helper: bounded through the output-law comparison machinery
///   (address bias 1/4), taking the larger of the matched-strategy and
///   mismatched-strategy class bounds.
pub fn ex2_sbs_bounds(p: Example2Params) -> Vec<Ex2BoundBreakdown> {
    let eta = p.eta() as f64;
    let xor_terms = vec![
        ("P(E=1)".to_string(), 0.5),
        ("bits|E=1".to_string(), eta + 2.0),
        ("indicator-overhead".to_string(), 1.0),
    ];
    let xor = Ex2BoundBreakdown {
        helper_id: "xor".to_string(),
        helper: HelperMap::new(vec![0, 1, 1, 0], 2).expect("valid helper table"),
        bound_bits: 0.5 * (eta + 2.0) + 1.0,
        terms: xor_terms,
    };
    let bits_t0 = 1.0 + (2.0 / 3.0) * (eta + 2.0);
    let and_terms = vec![
        ("P(T=1)".to_string(), 0.25),
        ("bits|T=1".to_string(), eta + 2.0),
        ("P(E=1|T=0)".to_string(), 2.0 / 3.0),
        ("bits|T=0".to_string(), bits_t0),
    ];
    let and = Ex2BoundBreakdown {
        helper_id: "and".to_string(),
        helper: HelperMap::new(vec![0, 0, 0, 1], 2).expect("valid helper table"),
        bound_bits: 0.25 * (eta + 2.0) + 0.75 * bits_t0,
        terms: and_terms,
    };
    let delta = 0.25;
    let cfg = DualityConfig::new(p.eta(), delta).expect("valid comparison config");
    let tight = eta + 2f64.powi(-(p.eta() as i32)) - 1.0 + (1.0 / (1.0 - delta)).log2();
    let mismatch = 3.0 * eta / 4.0 + (1.0 / delta).log2();
    let s0 = Ex2BoundBreakdown {
        helper_id: "s0".to_string(),
        helper: HelperMap::new(vec![0, 0, 1, 1], 2).expect("valid helper table"),
        bound_bits: duality_upper_bound(&cfg),
        terms: vec![
            ("delta".to_string(), delta),
            ("matched-class-bound".to_string(), tight),
            ("mismatched-class-bound".to_string(), mismatch),
        ],
    };
    vec![xor, and, s0]
}

// ---------------------------------------------------------------------------
// Channel 3: state-addressed output component

/// Binary input, quaternary uniform state, output a 4-bit tuple whose
/// component at the state's index equals the input; the other three
/// components are fair coin flips.
pub fn build_example3() -> (Channel, HelpAlphabet) {
    let x_labels: Vec<String> = (0..2).map(|x| x.to_string()).collect();
    let s_labels: Vec<String> = (0..4).map(|s| s.to_string()).collect();
    let y_labels: Vec<String> = (0..16).map(|y| bit_word(y, 4)).collect();
    let mut w = vec![vec![vec![0.0; 16]; 2]; 4];
    for s in 0..4usize {
        for x in 0..2usize {
            for y in 0..16usize {
                if (y >> (3 - s)) & 1 == x {
                    w[s][x][y] = 0.125;
                }
            }
        }
    }
    let ch = Channel::new(
        x_labels,
        y_labels,
        s_labels.clone(),
        Pmf::uniform(s_labels).expect("uniform state law"),
        w,
        None,
    )
    .expect("fixed table is a valid channel");
    (ch, HelpAlphabet::of_size(2).expect("binary description alphabet"))
}

/// Helper splitting the state set into its lower and upper pairs.
pub fn ex3_pair_split_helper() -> HelperMap {
    HelperMap::new(vec![0, 0, 1, 1], 2).expect("valid helper table")
}

/// Helper isolating state 0 from the rest.
pub fn ex3_zero_split_helper() -> HelperMap {
    HelperMap::new(vec![0, 1, 1, 1], 2).expect("valid helper table")
}

/// Rate of the two-use scheme in which the two descriptions of a use pair
/// spell out the first use's state exactly (so its input bit is read off
/// the addressed output component) and the second use runs blind:
/// `(1 + 0.375 log2 1.5) / 2` bits per use.
pub fn ex3_two_letter_rate() -> f64 {
    0.5 + 0.1875 * 1.5f64.log2()
}

/// Monte Carlo check of the perfect-recovery half of the two-use scheme:
/// draw a state and an input bit, sample the channel, then recover the
/// input from the output component addressed by the state. Returns the
/// error count (always 0: that component is the input by construction).
pub fn ex3_odd_slot_recovery_errors(trials: u64, seed: u64) -> u64 {
    let rng = StreamRng::from_seed(seed);
    let mut errors = 0u64;
    for trial in 0..trials {
        let mut cur = rng.child_u64(trial).cursor();
        let s = (cur.next_u64() & 3) as usize;
        let x = (cur.next_u64() & 1) as usize;
        let mut y = 0usize;
        for comp in 0..4 {
            let bit = if comp == s {
                x
            } else {
                (cur.next_u64() & 1) as usize
            };
            y = (y << 1) | bit;
        }
        if (y >> (3 - s)) & 1 != x {
            errors += 1;
        }
    }
    errors
}

// ---------------------------------------------------------------------------
// Reference block-Markov spec

/// The stock block-Markov spec on the payload channel: `Z` is a uniform
/// bit, the helper describes the state bit addressed by `Z`, the codeword
/// symbol is `U = (Z, C)` with a fresh uniform payload word, the input
/// replays `A = Z`, `B = T`, `C`, and the bin description is `V = T`
/// verbatim. Its rate evaluates to exactly the payload width, with
/// components `(eta, eta+1, 1)`.
pub fn build_reference_bm_spec(p: Example2Params) -> Result<BlockMarkovSpec> {
    let eta = p.eta();
    if eta > REFERENCE_BM_MAX_ETA {
        return Err(Error::TooLarge(format!(
            "payload width {eta} pushes the joint table past its budget; the \
             reference spec caps at width {REFERENCE_BM_MAX_ETA}"
        )));
    }
    let (channel, t) = build_example2(p)?;
    let n_c = 1usize << eta;
    let z_labels: Vec<String> = (0..2).map(|z| z.to_string()).collect();
    let u_labels: Vec<String> = (0..2 * n_c)
        .map(|u| format!("{}|{}", u >> eta, bit_word(u & (n_c - 1), eta)))
        .collect();
    let v_labels = t.labels().to_vec();
    let p_z = Pmf::uniform(z_labels.clone())?;
    let h: Vec<Vec<usize>> = (0..4).map(|s| vec![s >> 1, s & 1]).collect();
    let u_rows: Vec<Vec<f64>> = (0..2)
        .map(|z| {
            (0..2 * n_c)
                .map(|u| {
                    if u >> eta == z {
                        1.0 / n_c as f64
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let p_u_given_z = CondPmf::new(z_labels.clone(), u_labels.clone(), u_rows)?;
    let f: Vec<Vec<usize>> = (0..2 * n_c)
        .map(|u| {
            let a = u >> eta;
            let c = u & (n_c - 1);
            (0..2).map(|tt| (a << (eta + 1)) | (tt << eta) | c).collect()
        })
        .collect();
    let p_v_given_t = CondPmf::deterministic(t.labels().to_vec(), v_labels.clone(), &[0, 1])?;
    BlockMarkovSpec::new(
        z_labels, u_labels, v_labels, p_z, h, p_u_given_z, f, p_v_given_t, channel, t,
    )
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockmarkov::{bm_joint, bm_rate};
    use crate::channels::sum_channel_capacity;
    use crate::helpercap::{
        best_sbs_helper, check_positive_capacity, decoder_csi_capacity,
        helper_to_both_capacity, mc_capacity, no_csi_capacity, sbs_helper_capacity,
        shannon_causal_capacity, BaConfig, EnumConfig,
    };
    use crate::channels::full_csi_capacity;

    fn ba() -> BaConfig {
        BaConfig::default()
    }

    fn enums() -> EnumConfig {
        EnumConfig::default()
    }

    // -- channel 1 ----------------------------------------------------------

    #[test]
    fn channel1_is_deterministic_with_the_stated_shape() {
        let (ch, t) = build_example1();
        assert_eq!((ch.n_x(), ch.n_y(), ch.n_s()), (4, 4, 4));
        assert_eq!(t.len(), 2);
        for s in 0..4 {
            assert!((ch.p_s().prob(s) - 0.25).abs() < 1e-15);
            for x in 0..4 {
                let row = ch.w_row(s, x);
                assert_eq!(row.iter().filter(|&&v| v == 1.0).count(), 1);
            }
        }
        // Spot value: x=(1,0), s=(0,1) flips the data bit via s1.
        let (ch, _) = build_example1();
        assert_eq!(ch.w_row(1, 2)[2 * 1 + 1], 1.0);
    }

    #[test]
    fn channel1_blind_capacity_is_one_bit() {
        let (ch, _) = build_example1();
        let rep = no_csi_capacity(&ch, &ba()).unwrap();
        assert!((rep.value_bits - 1.0).abs() < 1e-9, "got {}", rep.value_bits);
    }

    #[test]
    fn channel1_per_state_capacity_is_two_bits() {
        let (ch, _) = build_example1();
        let rep = full_csi_capacity(&ch, &ba()).unwrap();
        assert!((rep.value_bits - 2.0).abs() < 1e-9, "got {}", rep.value_bits);
        for (_, c) in &rep.components {
            assert!((c - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn channel1_state_cognizant_encoding_reaches_two_bits() {
        let (ch, _) = build_example1();
        let rep = shannon_causal_capacity(&ch, &ba(), &enums()).unwrap();
        assert!((rep.value_bits - 2.0).abs() < 1e-9, "got {}", rep.value_bits);
    }

    #[test]
    fn channel1_best_one_bit_helper_reaches_log2_3() {
        let (ch, t) = build_example1();
        let (helper, rep) = best_sbs_helper(&ch, t.len(), &ba(), &enums()).unwrap();
        assert!(
            (rep.value_bits - 3f64.log2()).abs() < 1e-9,
            "got {} via {}",
            rep.value_bits,
            helper.describe()
        );
        // The winning description splits the states by one address bit, so
        // one meta-state is a clean bit pipe and the other is pure noise.
        assert!(
            (rep.value_bits - sum_channel_capacity(&[1.0, 0.0]).unwrap()).abs() < 1e-9,
            "value must match the disjoint-support composition of a 1-bit and 0-bit channel"
        );
    }

    #[test]
    fn channel1_message_cognizant_capacity_is_two_bits() {
        let (ch, t) = build_example1();
        let rep = mc_capacity(&ch, t.len(), &ba(), &enums()).unwrap();
        assert!((rep.value_bits - 2.0).abs() < 1e-9, "got {}", rep.value_bits);
    }

    // -- channel 2 ----------------------------------------------------------

    #[test]
    fn channel2_dense_rows_follow_the_two_case_law() {
        let p = Example2Params::new(2).unwrap();
        let (ch, _) = build_example2(p).unwrap();
        assert_eq!((ch.n_x(), ch.n_y(), ch.n_s()), (16, 32, 4));
        // Matched row: s=(0,1), x=(a=1,b=1,c=2): b equals s1, so outputs
        // pin a'=1 and d1=c with d0 free.
        let x = (1 << 3) | (1 << 2) | 2;
        let row = ch.w_row(1, x);
        for d0 in 0..4usize {
            assert!((row[(1 << 4) | (d0 << 2) | 2] - 0.25).abs() < 1e-15);
        }
        assert_eq!(row.iter().filter(|&&v| v > 0.0).count(), 4);
        // Missed row: same x against s=(0,0) has b != s1 = 0, so uniform.
        let row = ch.w_row(0, x);
        for &v in row {
            assert!((v - 1.0 / 32.0).abs() < 1e-15);
        }
    }

    #[test]
    fn channel2_rejects_widths_past_the_dense_cap() {
        let p = Example2Params::new(EX2_MAX_DENSE_ETA + 1).unwrap();
        assert!(matches!(build_example2(p), Err(Error::TooLarge(_))));
        assert!(matches!(Example2Params::new(0), Err(Error::Validation(_))));
    }

    #[test]
    fn channel2_has_positive_helped_capacity_and_a_full_csi_floor() {
        let p = Example2Params::new(2).unwrap();
        let (ch, _) = build_example2(p).unwrap();
        let (positive, witness) = check_positive_capacity(&ch);
        assert!(positive);
        assert!(witness.is_some());
        let rep = full_csi_capacity(&ch, &ba()).unwrap();
        assert!(
            rep.value_bits >= 2.0 - 1e-9,
            "state-cognizant coding dominates the payload width, got {}",
            rep.value_bits
        );
    }

    #[test]
    fn channel2_scheme_is_error_free_at_the_advertised_rate() {
        let p = Example2Params::new(3).unwrap();
        let (errors, rate) = simulate_ex2_causal_scheme(p, 1000, 7).unwrap();
        assert_eq!(errors, 0, "the matched-mode scheme never errs");
        assert!((rate - 999.0 * 3.0 / 1000.0).abs() < 1e-15);
        let (_, rate1) = simulate_ex2_causal_scheme(p, 1, 7).unwrap();
        assert_eq!(rate1, 0.0, "a single use carries no recoverable payload");
    }

    #[test]
    fn channel2_helper_bounds_take_their_closed_form_values_at_width_12() {
        let p = Example2Params::new(12).unwrap();
        let bounds = ex2_sbs_bounds(p);
        assert_eq!(bounds.len(), 3);
        let by_id = |id: &str| bounds.iter().find(|b| b.helper_id == id).unwrap();
        assert!((by_id("xor").bound_bits - 8.0).abs() < 1e-12);
        assert!((by_id("and").bound_bits - 11.25).abs() < 1e-12);
        let s0 = by_id("s0");
        assert!(
            (s0.bound_bits - 11.415281585604069).abs() < 1e-6,
            "got {}",
            s0.bound_bits
        );
        for b in &bounds {
            assert!(b.bound_bits >= 0.0);
            assert!(b.bound_bits < 12.0, "each bound sits below the width");
        }
        let terms: Vec<&str> = by_id("and").terms.iter().map(|(k, _)| k.as_str()).collect();
        assert!(terms.contains(&"P(E=1|T=0)"));
    }

    #[test]
    fn channel2_bounds_dominate_the_conditioned_capacity_at_width_2() {
        let p = Example2Params::new(2).unwrap();
        let (ch, _) = build_example2(p).unwrap();
        for b in ex2_sbs_bounds(p) {
            let rep = helper_to_both_capacity(&ch, &b.helper, &ba()).unwrap();
            assert!(
                rep.value_bits <= b.bound_bits + 1e-9,
                "{}: conditioned capacity {} exceeds bound {}",
                b.helper_id,
                rep.value_bits,
                b.bound_bits
            );
        }
    }

    // -- channel 3 ----------------------------------------------------------

    #[test]
    fn channel3_rows_place_an_eighth_on_matching_components() {
        let (ch, t) = build_example3();
        assert_eq!((ch.n_x(), ch.n_y(), ch.n_s()), (2, 16, 4));
        assert_eq!(t.len(), 2);
        for s in 0..4 {
            for x in 0..2 {
                let row = ch.w_row(s, x);
                assert_eq!(row.iter().filter(|&&v| v > 0.0).count(), 8);
                for (y, &v) in row.iter().enumerate() {
                    let expected = if (y >> (3 - s)) & 1 == x { 0.125 } else { 0.0 };
                    assert_eq!(v, expected);
                }
            }
        }
    }

    #[test]
    fn channel3_conditioned_capacities_match_their_closed_forms() {
        let (ch, _) = build_example3();
        let pair = helper_to_both_capacity(&ch, &ex3_pair_split_helper(), &ba()).unwrap();
        assert!((pair.value_bits - 0.5).abs() < 1e-9, "got {}", pair.value_bits);
        let zero = helper_to_both_capacity(&ch, &ex3_zero_split_helper(), &ba()).unwrap();
        let zero_expected = 0.25 + 0.75 * (1.5 - 0.75 * 3f64.log2());
        assert!(
            (zero.value_bits - zero_expected).abs() < 1e-9,
            "got {}, want {}",
            zero.value_bits,
            zero_expected
        );
        assert!(pair.value_bits >= zero.value_bits);
        // Branch values behind the zero-isolating helper: a clean bit when
        // the state is pinned, the mixed three-state law otherwise.
        let comp: Vec<f64> = zero.components.iter().map(|(_, c)| *c).collect();
        assert!((comp[0] - 1.0).abs() < 1e-9);
        assert!((comp[1] - (1.5 - 0.75 * 3f64.log2())).abs() < 1e-9);
    }

    #[test]
    fn channel3_blind_capacity_matches_its_closed_form() {
        let (ch, _) = build_example3();
        let rep = no_csi_capacity(&ch, &ba()).unwrap();
        let expected = 0.375 * 1.5f64.log2();
        assert!(
            (rep.value_bits - expected).abs() < 1e-9,
            "got {}, want {}",
            rep.value_bits,
            expected
        );
    }

    #[test]
    fn channel3_encoder_only_descriptions_add_nothing() {
        // With the description shown to the encoder alone, every one-bit
        // helper collapses to the blind value: knowing which component
        // carries the input does not help the sender pick the input.
        let (ch, _) = build_example3();
        let blind = no_csi_capacity(&ch, &ba()).unwrap().value_bits;
        for helper in [ex3_pair_split_helper(), ex3_zero_split_helper()] {
            let rep = sbs_helper_capacity(&ch, &helper, &ba(), &enums()).unwrap();
            assert!(
                (rep.value_bits - blind).abs() < 1e-9,
                "{}: got {}, blind {}",
                helper.describe(),
                rep.value_bits,
                blind
            );
        }
    }

    #[test]
    fn channel3_receiver_side_state_is_worth_one_bit() {
        let (ch, _) = build_example3();
        let dec = decoder_csi_capacity(&ch, &ba()).unwrap();
        assert!((dec.value_bits - 1.0).abs() < 1e-9, "got {}", dec.value_bits);
        let full = full_csi_capacity(&ch, &ba()).unwrap();
        assert!((full.value_bits - 1.0).abs() < 1e-9, "got {}", full.value_bits);
    }

    #[test]
    fn channel3_two_use_rate_beats_the_single_letter_value() {
        let rate = ex3_two_letter_rate();
        assert!((rate - (1.0 + 0.375 * 1.5f64.log2()) / 2.0).abs() < 1e-15);
        assert!(rate > 0.5, "two uses beat the best one-bit description");
        assert_eq!(ex3_odd_slot_recovery_errors(1000, 3), 0);
    }

    // -- reference block-Markov spec ----------------------------------------

    #[test]
    fn reference_spec_components_are_exact_at_width_1() {
        let p = Example2Params::new(1).unwrap();
        let spec = build_reference_bm_spec(p).unwrap();
        let rep = bm_rate(&spec).unwrap();
        assert!((rep.i_u_y_given_vz - 1.0).abs() < 1e-9, "got {}", rep.i_u_y_given_vz);
        assert!((rep.i_uz_vy - 2.0).abs() < 1e-9, "got {}", rep.i_uz_vy);
        assert!((rep.i_v_t_given_y - 1.0).abs() < 1e-9, "got {}", rep.i_v_t_given_y);
        assert!((rep.rate_bits - 1.0).abs() < 1e-9);
    }

    #[test]
    fn reference_spec_joint_satisfies_the_scheme_markov_chains() {
        let p = Example2Params::new(1).unwrap();
        let spec = build_reference_bm_spec(p).unwrap();
        let joint = bm_joint(&spec).unwrap();
        assert!(joint.check_markov(&["V"], &["T"], &["Y"]).unwrap());
        assert!(joint.check_markov(&["U"], &["Z"], &["V"]).unwrap());
        assert!(joint
            .check_markov(&["V"], &["T"], &["U", "Z", "Y"])
            .unwrap());
    }

    #[test]
    fn reference_spec_rejects_widths_past_the_joint_budget() {
        let p = Example2Params::new(REFERENCE_BM_MAX_ETA + 1).unwrap();
        assert!(matches!(
            build_reference_bm_spec(p),
            Err(Error::TooLarge(_))
        ));
    }
}
