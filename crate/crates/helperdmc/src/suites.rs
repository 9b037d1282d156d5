//! Seeded random instance generators for the randomized verification
//! suites: small state-dependent channels with a controllable share of
//! input-blind states (for the positivity-equivalence suite) and random
//! block-Markov specs (for the rate-dominance suite).
//!
//! Generators are deterministic in `(seed, index)` and built so that sign
//! checks cannot land in numerical no-man's-land: a state either copies
//! one row across all inputs (exactly blind) or has every pair of rows
//! separated by at least 0.1 in total variation, and alive states keep
//! probability at least 0.05. A blind channel then scores exactly zero on
//! every capacity notion, while a distinguishing one clears the 1e-6
//! positivity threshold with orders of magnitude to spare.

use crate::blockmarkov::BlockMarkovSpec;
use crate::channels::{Channel, HelpAlphabet};
use crate::error::Result;
use crate::probcore::{CondPmf, Pmf};
use crate::rng::{Cursor, StreamRng};

/// Minimum pairwise row separation (total variation) within a
/// distinguishing state.
const MIN_ROW_SEPARATION: f64 = 0.1;

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Uniform pick from `lo..=hi`.
fn pick(cur: &mut Cursor, lo: usize, hi: usize) -> usize {
    lo + (cur.next_f64() * (hi - lo + 1) as f64) as usize
}

/// A strictly positive probability row: weights `floor + uniform`,
/// normalized. Larger floors keep every entry bounded away from zero.
fn positive_row(cur: &mut Cursor, n: usize, floor: f64) -> Vec<f64> {
    let mut row: Vec<f64> = (0..n).map(|_| floor + cur.next_f64()).collect();
    let total: f64 = row.iter().sum();
    for v in &mut row {
        *v /= total;
    }
    row
}

fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a
        .iter()
        .zip(b)
        .map(|(&pa, &pb)| (pa - pb).abs())
        .sum::<f64>()
}

/// Rows for one distinguishing state: redrawn until every pair of rows is
/// at least [`MIN_ROW_SEPARATION`] apart.
fn separated_rows(cur: &mut Cursor, n_x: usize, n_y: usize) -> Vec<Vec<f64>> {
    loop {
        let cand: Vec<Vec<f64>> = (0..n_x).map(|_| positive_row(cur, n_y, 0.02)).collect();
        let mut min_tv = f64::INFINITY;
        for i in 0..n_x {
            for j in (i + 1)..n_x {
                min_tv = min_tv.min(total_variation(&cand[i], &cand[j]));
            }
        }
        if min_tv >= MIN_ROW_SEPARATION {
            return cand;
        }
    }
}

/// Random channel with `|X|, |Y| in 2..=4` and `|S| in 1..=4`. Roughly 30%
/// of channels are input-blind in every state (exactly zero capacity under
/// every notion); the rest mix blind and distinguishing states, and a
/// quarter of multi-state channels carry one zero-probability state.
pub fn random_small_channel(seed: u64, idx: u64) -> Channel {
    let rng = StreamRng::from_seed(seed)
        .child_str("channel-suite")
        .child_u64(idx);
    let mut cur = rng.cursor();
    let n_x = pick(&mut cur, 2, 4);
    let n_y = pick(&mut cur, 2, 4);
    let n_s = pick(&mut cur, 1, 4);
    let mut p_s = positive_row(&mut cur, n_s, 0.25);
    if n_s > 1 && cur.next_f64() < 0.25 {
        let dead = pick(&mut cur, 0, n_s - 1);
        let alive_mass = 1.0 - p_s[dead];
        p_s[dead] = 0.0;
        for (i, v) in p_s.iter_mut().enumerate() {
            if i != dead {
                *v /= alive_mass;
            }
        }
    }
    let all_blind = cur.next_f64() < 0.3;
    let mut w = Vec::with_capacity(n_s);
    for _ in 0..n_s {
        let blind = all_blind || cur.next_f64() < 0.3;
        if blind {
            let row = positive_row(&mut cur, n_y, 0.02);
            w.push(vec![row; n_x]);
        } else {
            w.push(separated_rows(&mut cur, n_x, n_y));
        }
    }
    Channel::new(
        labels("x", n_x),
        labels("y", n_y),
        labels("s", n_s),
        Pmf::new(labels("s", n_s), p_s).expect("generated state law is normalized"),
        w,
        None,
    )
    .expect("generated channel is valid")
}

/// Random block-Markov spec with every auxiliary alphabet of size 1..=3,
/// channel alphabets of size 2..=3 (states 1..=3), a binary description
/// alphabet, random deterministic helper and input rules, and strictly
/// positive conditional laws.
pub fn random_bm_spec(seed: u64, idx: u64) -> Result<BlockMarkovSpec> {
    let rng = StreamRng::from_seed(seed)
        .child_str("bm-suite")
        .child_u64(idx);
    let mut cur = rng.cursor();
    let n_x = pick(&mut cur, 2, 3);
    let n_y = pick(&mut cur, 2, 3);
    let n_s = pick(&mut cur, 1, 3);
    let n_z = pick(&mut cur, 1, 3);
    let n_u = pick(&mut cur, 1, 3);
    let n_v = pick(&mut cur, 1, 3);
    let t_size = 2;
    let w: Vec<Vec<Vec<f64>>> = (0..n_s)
        .map(|_| (0..n_x).map(|_| positive_row(&mut cur, n_y, 0.02)).collect())
        .collect();
    let channel = Channel::new(
        labels("x", n_x),
        labels("y", n_y),
        labels("s", n_s),
        Pmf::new(labels("s", n_s), positive_row(&mut cur, n_s, 0.1))?,
        w,
        None,
    )?;
    let t = HelpAlphabet::of_size(t_size)?;
    let h: Vec<Vec<usize>> = (0..n_s)
        .map(|_| (0..n_z).map(|_| pick(&mut cur, 0, t_size - 1)).collect())
        .collect();
    let f: Vec<Vec<usize>> = (0..n_u)
        .map(|_| (0..t_size).map(|_| pick(&mut cur, 0, n_x - 1)).collect())
        .collect();
    let u_rows: Vec<Vec<f64>> = (0..n_z).map(|_| positive_row(&mut cur, n_u, 0.1)).collect();
    let v_rows: Vec<Vec<f64>> = (0..t_size)
        .map(|_| positive_row(&mut cur, n_v, 0.1))
        .collect();
    BlockMarkovSpec::new(
        labels("z", n_z),
        labels("u", n_u),
        labels("v", n_v),
        Pmf::new(labels("z", n_z), positive_row(&mut cur, n_z, 0.1))?,
        h,
        CondPmf::new(labels("z", n_z), labels("u", n_u), u_rows)?,
        f,
        CondPmf::new(t.labels().to_vec(), labels("v", n_v), v_rows)?,
        channel,
        t,
    )
}

// ---------------------------------------------------------------------------
