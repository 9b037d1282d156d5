//! Block-Markov coding with a causal helper: joint-distribution
//! specification, achievable-rate evaluation, and a Monte Carlo
//! codebook/encoding/backward-decoding simulator.
//!
//! A [`BlockMarkovSpec`] fixes the auxiliary chain
//!
//! `P(s,z,t,u,x,v,y) = P_S(s) P_Z(z) 1[t=h(s,z)] P_{U|Z}(u|z) 1[x=f(u,t)]
//!  P_{V|T}(v|t) W(y|x,s)`
//!
//! where `Z` carries the previous block's bin index, `T` is the causal
//! description computed by the helper from the state and `Z`, `U` is the
//! message-bearing codeword symbol, and `V` is the bin-coded description
//! the decoder reconstructs. The achievable rate of the scheme is
//!
//! `min{ I(U;Y|V,Z), I(U,Z;V,Y) - I(V;T|Y) }`.
//!
//! The simulator runs the scheme end to end: random codebooks, per-block
//! causal encoding, typicality-based bin selection, and backward decoding,
//! with every random draw tied to a counter-based seeded generator so runs
//! are reproducible and thread-count invariant.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channels::{Channel, HelpAlphabet};
use crate::error::{Error, Result};
use crate::helpercap::{
    build_positivity_helper, check_positive_capacity, mc_capacity, BaConfig, EnumConfig,
};
use crate::probcore::{CondPmf, JointTable, Pmf};
use crate::rng::StreamRng;

/// Default cap on dense joint-table entries.
pub const DEFAULT_JOINT_CAP: u64 = 1 << 24;

/// Default cap on decoder hypotheses per block.
pub const DEFAULT_SEARCH_CAP: u64 = 10_000_000;

// ---------------------------------------------------------------------------
// Spec

/// The full specification of a block-Markov scheme instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMarkovSpec {
    z_labels: Vec<String>,
    u_labels: Vec<String>,
    v_labels: Vec<String>,
    p_z: Pmf,
    /// `h[s][z] = t`: the helper's deterministic description rule.
    h: Vec<Vec<usize>>,
    p_u_given_z: CondPmf,
    /// `f[u][t] = x`: the encoder's deterministic input rule.
    f: Vec<Vec<usize>>,
    p_v_given_t: CondPmf,
    channel: Channel,
    t: HelpAlphabet,
}

impl BlockMarkovSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        z_labels: Vec<String>,
        u_labels: Vec<String>,
        v_labels: Vec<String>,
        p_z: Pmf,
        h: Vec<Vec<usize>>,
        p_u_given_z: CondPmf,
        f: Vec<Vec<usize>>,
        p_v_given_t: CondPmf,
        channel: Channel,
        t: HelpAlphabet,
    ) -> Result<Self> {
        if p_z.labels() != z_labels.as_slice() {
            return Err(Error::Validation(
                "z law alphabet does not match the z alphabet".into(),
            ));
        }
        if h.len() != channel.n_s() {
            return Err(Error::Validation(format!(
                "helper rule covers {} states, channel has {}",
                h.len(),
                channel.n_s()
            )));
        }
        for (s, row) in h.iter().enumerate() {
            if row.len() != z_labels.len() {
                return Err(Error::Validation(format!(
                    "helper rule row {s} covers {} z symbols, alphabet has {}",
                    row.len(),
                    z_labels.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= t.len()) {
                return Err(Error::Validation(format!(
                    "helper rule entry {bad} in row {s} exceeds description alphabet size {}",
                    t.len()
                )));
            }
        }
        if p_u_given_z.from_labels() != z_labels.as_slice()
            || p_u_given_z.to_labels() != u_labels.as_slice()
        {
            return Err(Error::Validation(
                "codeword symbol law must map the z alphabet to the u alphabet".into(),
            ));
        }
        if f.len() != u_labels.len() {
            return Err(Error::Validation(format!(
                "input rule covers {} codeword symbols, alphabet has {}",
                f.len(),
                u_labels.len()
            )));
        }
        for (u, row) in f.iter().enumerate() {
            if row.len() != t.len() {
                return Err(Error::Validation(format!(
                    "input rule row {u} covers {} descriptions, alphabet has {}",
                    row.len(),
                    t.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= channel.n_x()) {
                return Err(Error::Validation(format!(
                    "input rule entry {bad} in row {u} exceeds channel input alphabet size {}",
                    channel.n_x()
                )));
            }
        }
        if p_v_given_t.from_labels() != t.labels() || p_v_given_t.to_labels() != v_labels.as_slice()
        {
            return Err(Error::Validation(
                "bin-description law must map the description alphabet to the v alphabet".into(),
            ));
        }
        Ok(BlockMarkovSpec {
            z_labels,
            u_labels,
            v_labels,
            p_z,
            h,
            p_u_given_z,
            f,
            p_v_given_t,
            channel,
            t,
        })
    }

    pub fn channel(&self) -> &Channel {
        &self.channel
    }

    pub fn help_alphabet(&self) -> &HelpAlphabet {
        &self.t
    }

    pub fn z_labels(&self) -> &[String] {
        &self.z_labels
    }

    pub fn u_labels(&self) -> &[String] {
        &self.u_labels
    }

    pub fn v_labels(&self) -> &[String] {
        &self.v_labels
    }

    pub fn p_z(&self) -> &Pmf {
        &self.p_z
    }

    pub fn p_u_given_z(&self) -> &CondPmf {
        &self.p_u_given_z
    }

    pub fn p_v_given_t(&self) -> &CondPmf {
        &self.p_v_given_t
    }

    /// The helper's description on `(state, z)`.
    pub fn help(&self, s: usize, z: usize) -> usize {
        self.h[s][z]
    }

    /// The encoder's channel input on `(codeword symbol, description)`.
    pub fn input(&self, u: usize, t: usize) -> usize {
        self.f[u][t]
    }

    /// Parse a spec document. A string `channel` field is resolved as a
    /// path relative to `base_dir`; an inline object is parsed directly.
    pub fn from_json_str(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let doc: BmSpecDoc = serde_json::from_str(text)?;
        let channel = match &doc.channel {
            serde_json::Value::String(rel) => {
                let path = match base_dir {
                    Some(dir) => dir.join(rel),
                    None => Path::new(rel).to_path_buf(),
                };
                Channel::from_json_str(&std::fs::read_to_string(path)?)?
            }
            inline => Channel::from_json_str(&inline.to_string())?,
        };
        let BmSpecDoc {
            z,
            u,
            v,
            t,
            p_z,
            h,
            p_u_given_z,
            f,
            p_v_given_t,
            ..
        } = doc;
        let t_alphabet = HelpAlphabet::new(t.clone())?;
        BlockMarkovSpec::new(
            z.clone(),
            u.clone(),
            v.clone(),
            Pmf::new(z.clone(), p_z)?,
            h,
            CondPmf::new(z, u, p_u_given_z)?,
            f,
            CondPmf::new(t, v, p_v_given_t)?,
            channel,
            t_alphabet,
        )
    }

    /// Serialize with the channel inlined (self-contained document).
    pub fn to_json_string(&self) -> String {
        let doc = BmSpecDoc {
            channel: serde_json::from_str(&self.channel.to_json_string())
                .expect("channel document round-trips"),
            z: self.z_labels.clone(),
            u: self.u_labels.clone(),
            v: self.v_labels.clone(),
            t: self.t.labels().to_vec(),
            p_z: self.p_z.probs().to_vec(),
            h: self.h.clone(),
            p_u_given_z: (0..self.p_u_given_z.n_from())
                .map(|i| self.p_u_given_z.row(i).to_vec())
                .collect(),
            f: self.f.clone(),
            p_v_given_t: (0..self.p_v_given_t.n_from())
                .map(|i| self.p_v_given_t.row(i).to_vec())
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("spec document serializes")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct BmSpecDoc {
    channel: serde_json::Value,
    z: Vec<String>,
    u: Vec<String>,
    v: Vec<String>,
    t: Vec<String>,
    p_z: Vec<f64>,
    h: Vec<Vec<usize>>,
    p_u_given_z: Vec<Vec<f64>>,
    f: Vec<Vec<usize>>,
    p_v_given_t: Vec<Vec<f64>>,
}

// ---------------------------------------------------------------------------
// Joint table and rate

/// Dense joint over axes `(S, Z, T, U, X, V, Y)` factored exactly as the
/// scheme prescribes. Uses the default entry cap.
pub fn bm_joint(spec: &BlockMarkovSpec) -> Result<JointTable> {
    bm_joint_with_cap(spec, DEFAULT_JOINT_CAP)
}

/// [`bm_joint`] with an explicit entry cap; exceeding it reports the
/// required entry count.
pub fn bm_joint_with_cap(spec: &BlockMarkovSpec, cap: u64) -> Result<JointTable> {
    let ch = spec.channel();
    let dims = [
        ch.n_s(),
        spec.z_labels.len(),
        spec.t.len(),
        spec.u_labels.len(),
        ch.n_x(),
        spec.v_labels.len(),
        ch.n_y(),
    ];
    let required = dims.iter().fold(1u128, |acc, &d| acc * d as u128);
    if required > cap as u128 {
        return Err(Error::TableCapExceeded { required, cap });
    }
    let total = required as usize;
    let mut probs = vec![0.0; total];
    // Row-major with the last axis fastest; only cells consistent with the
    // deterministic rules t = h(s,z), x = f(u,t) carry mass.
    let stride_y = 1;
    let stride_v = dims[6];
    let stride_x = stride_v * dims[5];
    let stride_u = stride_x * dims[4];
    let stride_t = stride_u * dims[3];
    let stride_z = stride_t * dims[2];
    let stride_s = stride_z * dims[1];
    for s in 0..dims[0] {
        let ps = spec.channel.p_s().prob(s);
        if ps == 0.0 {
            continue;
        }
        for z in 0..dims[1] {
            let pz = spec.p_z.prob(z);
            if pz == 0.0 {
                continue;
            }
            let t = spec.help(s, z);
            for u in 0..dims[3] {
                let pu = spec.p_u_given_z.row(z)[u];
                if pu == 0.0 {
                    continue;
                }
                let x = spec.input(u, t);
                let w_row = ch.w_row(s, x);
                for v in 0..dims[5] {
                    let pv = spec.p_v_given_t.row(t)[v];
                    if pv == 0.0 {
                        continue;
                    }
                    let base = s * stride_s
                        + z * stride_z
                        + t * stride_t
                        + u * stride_u
                        + x * stride_x
                        + v * stride_v;
                    let mass = ps * pz * pu * pv;
                    for (y, &wy) in w_row.iter().enumerate() {
                        if wy > 0.0 {
                            probs[base + y * stride_y] += mass * wy;
                        }
                    }
                }
            }
        }
    }
    let axes = vec![
        ("S".to_string(), ch.s_labels().to_vec()),
        ("Z".to_string(), spec.z_labels.clone()),
        ("T".to_string(), spec.t.labels().to_vec()),
        ("U".to_string(), spec.u_labels.clone()),
        ("X".to_string(), ch.x_labels().to_vec()),
        ("V".to_string(), spec.v_labels.clone()),
        ("Y".to_string(), ch.y_labels().to_vec()),
    ];
    JointTable::new(axes, probs)
}

/// The achievable-rate evaluation: the scheme's rate and the three mutual
/// informations it is built from.
#[derive(Debug, Clone, Copy)]
pub struct BmRateReport {
    /// `min{ I(U;Y|V,Z), I(U,Z;V,Y) - I(V;T|Y) }` in bits per use.
    pub rate_bits: f64,
    pub i_u_y_given_vz: f64,
    pub i_uz_vy: f64,
    pub i_v_t_given_y: f64,
}

pub fn bm_rate(spec: &BlockMarkovSpec) -> Result<BmRateReport> {
    let joint = bm_joint(spec)?;
    bm_rate_from_joint(&joint)
}

fn bm_rate_from_joint(joint: &JointTable) -> Result<BmRateReport> {
    let i_u_y_given_vz = joint.conditional_mutual_information(&["U"], &["Y"], &["V", "Z"])?;
    let i_uz_vy = joint.mutual_information(&["U", "Z"], &["V", "Y"])?;
    let i_v_t_given_y = joint.conditional_mutual_information(&["V"], &["T"], &["Y"])?;
    Ok(BmRateReport {
        rate_bits: i_u_y_given_vz.min(i_uz_vy - i_v_t_given_y),
        i_u_y_given_vz,
        i_uz_vy,
        i_v_t_given_y,
    })
}

// ---------------------------------------------------------------------------
// Feasible rates

/// Operating rates for the simulator: message rate `r`, bin rate `r_v`,
/// and within-bin rate `r_tilde`, all in bits per use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateTuple {
    pub r: f64,
    pub r_v: f64,
    pub r_tilde: f64,
}

/// A rate point strictly inside the scheme's five constraints with
/// multiplicative slack `margin`:
///
/// - `r_tilde = (1-margin) * I(V;Y)` (0 when `I(V;Y)` vanishes; the
///   constraint `r_tilde < I(V;Y)` is then vacuous),
/// - `r = (1-margin) * min{ I(U;Y|V,Z), I(U,Z;V,Y) - I(V;T|Y) }`,
/// - `r_v` sits `margin` of the way into the interval
///   `( max{I(V;T|Y), I(V;T) - r_tilde}, I(U,Z;V,Y) - r )`
///   (the lower end generalizes the plain `I(V;T|Y)` threshold: when
///   `r_tilde` is throttled the bin rate must also cover the covering
///   constraint `r_v + r_tilde > I(V;T)`),
/// - when `I(V;T)` vanishes the description carries nothing and
///   `r_v = r_tilde = 0` with all description constraints vacuous.
///
/// Errors when the region is empty (zero rate, or no room for `r_v`).
pub fn bm_rate_feasible_region(spec: &BlockMarkovSpec, margin: f64) -> Result<RateTuple> {
    if !(margin > 0.0 && margin < 1.0) {
        return Err(Error::Validation(format!(
            "margin must lie in (0,1), got {margin}"
        )));
    }
    let joint = bm_joint(spec)?;
    let report = bm_rate_from_joint(&joint)?;
    let i_vy = joint.mutual_information(&["V"], &["Y"])?;
    let i_vt = joint.mutual_information(&["V"], &["T"])?;
    let min_term = report.rate_bits;
    if min_term <= 1e-12 {
        return Err(Error::EmptyRateRegion(format!(
            "achievable rate is zero (components {:.6}, {:.6}, {:.6})",
            report.i_u_y_given_vz, report.i_uz_vy, report.i_v_t_given_y
        )));
    }
    let r = (1.0 - margin) * min_term;
    if i_vt <= 1e-12 {
        // Degenerate description: nothing to bin.
        return Ok(RateTuple {
            r,
            r_v: 0.0,
            r_tilde: 0.0,
        });
    }
    let r_tilde = if i_vy <= 1e-12 {
        0.0
    } else {
        (1.0 - margin) * i_vy
    };
    let lo = report.i_v_t_given_y.max(i_vt - r_tilde);
    let hi = report.i_uz_vy - r;
    if hi <= lo {
        return Err(Error::EmptyRateRegion(format!(
            "no bin rate fits: need r_v in ({lo:.6}, {hi:.6})"
        )));
    }
    Ok(RateTuple {
        r,
        r_v: lo + margin * (hi - lo),
        r_tilde,
    })
}

// ---------------------------------------------------------------------------
// Robust-typicality checker for the simulator's hot loops

/// Scratch-buffer typicality checker over the cells of a joint table:
/// accepts exactly the tuples `probcore::is_jointly_typical` accepts, with
/// two exact shortcuts — early abort as soon as a zero-probability cell is
/// hit, and touched-cell bookkeeping so scratch resets cost O(distinct
/// cells) instead of O(table).
pub struct TypicalityChecker {
    probs: Vec<f64>,
    dims: Vec<usize>,
    positive_cells: usize,
    counts: Vec<u64>,
    touched: Vec<usize>,
}

impl TypicalityChecker {
    pub fn new(joint: &JointTable) -> Self {
        let probs = joint.probs().to_vec();
        let dims: Vec<usize> = joint.axes().iter().map(|a| a.labels.len()).collect();
        let positive_cells = probs.iter().filter(|&&p| p > 0.0).count();
        let counts = vec![0; probs.len()];
        TypicalityChecker {
            probs,
            dims,
            positive_cells,
            counts,
            touched: Vec::new(),
        }
    }

    /// Robust joint typicality of aligned sequences (one per axis, equal
    /// lengths): every cell count within `eps`-relative deviation of
    /// `n * p(cell)`, with zero-probability cells unvisited. For `eps < 1`
    /// this forces every positive cell to appear.
    pub fn is_typical(&mut self, seqs: &[&[usize]], eps: f64) -> bool {
        debug_assert_eq!(seqs.len(), self.dims.len());
        let n = seqs[0].len();
        debug_assert!(seqs.iter().all(|s| s.len() == n));
        for t in self.touched.drain(..) {
            self.counts[t] = 0;
        }
        for i in 0..n {
            let mut cell = 0usize;
            for (axis, seq) in seqs.iter().enumerate() {
                debug_assert!(seq[i] < self.dims[axis]);
                cell = cell * self.dims[axis] + seq[i];
            }
            if self.probs[cell] == 0.0 {
                // Zero-probability cell: reject regardless of eps.
                return false;
            }
            if self.counts[cell] == 0 {
                self.touched.push(cell);
            }
            self.counts[cell] += 1;
        }
        let nf = n as f64;
        for &cell in &self.touched {
            let dev = (self.counts[cell] as f64 / nf - self.probs[cell]).abs();
            if dev > eps * self.probs[cell] {
                return false;
            }
        }
        // Unvisited positive cells have |0 - p| <= eps*p only when eps >= 1.
        if eps < 1.0 && self.touched.len() < self.positive_cells {
            return false;
        }
        true
    }
}

// ---------------------------------------------------------------------------
// Simulator

/// How the final block delivers the last bin index to the decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LastBlockMode {
    /// The decoder is handed the last bin index (its vanishing-overhead
    /// transmission is routine and not part of the scheme under study).
    Genie,
    /// The last bin index is sent bit by bit with a repetition code over
    /// the two-strategy scheme from the positivity witness; repetitions
    /// are chosen so the Bhattacharyya bound puts the whole-index error
    /// under 1e-3.
    Coded,
}

/// Simulation shape: block length, block count, typicality parameter,
/// seed, last-block policy, and the decoder-hypothesis budget.
#[derive(Debug, Clone, Copy)]
pub struct SimConfig {
    pub n: usize,
    pub lambda: usize,
    pub eps: f64,
    pub seed: u64,
    pub last_block_mode: LastBlockMode,
    pub search_cap: u64,
}

impl SimConfig {
    pub fn new(n: usize, lambda: usize, eps: f64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("block length must be at least 1".into()));
        }
        if lambda < 2 {
            return Err(Error::Validation(format!(
                "block count must be at least 2, got {lambda}"
            )));
        }
        if !(eps > 0.0) {
            return Err(Error::Validation(format!(
                "typicality parameter must be positive, got {eps}"
            )));
        }
        Ok(SimConfig {
            n,
            lambda,
            eps,
            seed,
            last_block_mode: LastBlockMode::Genie,
            search_cap: DEFAULT_SEARCH_CAP,
        })
    }
}

/// Aggregate simulation outcome. A backward pass that finds no typical
/// triple aborts: that block counts one bin-decode failure, and it plus all
/// earlier (not-yet-decoded) blocks count as block and message errors.
#[derive(Debug, Clone, Copy, Default)]
pub struct SimReport {
    pub trials: u64,
    /// Data blocks per trial times trials: `(lambda - 1) * trials`.
    pub data_blocks: u64,
    /// Encoder fell back to bin 0 because no bin codeword was jointly
    /// typical with the block's description sequence.
    pub no_bin_index: u64,
    /// Decoded message index differed from the sent one.
    pub satellite_errors: u64,
    /// Decoded bin/within-bin index differed from the encoder's choice, or
    /// no typical triple existed at all.
    pub bin_decode_errors: u64,
    /// The final bin index was delivered wrong (coded last block only).
    pub last_block_errors: u64,
    pub block_errors: u64,
    pub message_errors: u64,
    pub block_error_rate: f64,
    pub message_error_rate: f64,
    /// `(lambda-1) * log2(messages) / total uses`.
    pub effective_rate_bits_per_use: f64,
    pub total_uses: u64,
}

/// Codebook sizes implied by rates at block length n.
fn codebook_sizes(rates: &RateTuple, n: usize) -> (usize, usize, usize) {
    let count = |rate: f64| -> usize {
        let raw = 2f64.powf(rate * n as f64);
        raw.round().max(1.0) as usize
    };
    let n_bins = count(rates.r_v);
    let n_in_bin = count(rates.r_tilde);
    let n_msgs = count(rates.r).max(2);
    (n_bins, n_in_bin, n_msgs)
}

/// Causal per-block encoder: consumes one state at a time, so the help and
/// input for position `i` are produced before any later state is seen.
pub struct BlockEncoder<'a> {
    spec: &'a BlockMarkovSpec,
    z_word: &'a [usize],
    u_word: &'a [usize],
    pos: usize,
}

impl<'a> BlockEncoder<'a> {
    pub fn new(spec: &'a BlockMarkovSpec, z_word: &'a [usize], u_word: &'a [usize]) -> Self {
        debug_assert_eq!(z_word.len(), u_word.len());
        BlockEncoder {
            spec,
            z_word,
            u_word,
            pos: 0,
        }
    }

    /// Feed the next state symbol; returns `(t, x)` for this position.
    pub fn step(&mut self, s: usize) -> (usize, usize) {
        let i = self.pos;
        self.pos += 1;
        let t = self.spec.help(s, self.z_word[i]);
        let x = self.spec.input(self.u_word[i], t);
        (t, x)
    }
}

/// Everything per-trial work needs, precomputed once per simulation.
struct SimContext<'a> {
    spec: &'a BlockMarkovSpec,
    cfg: SimConfig,
    n_bins: usize,
    n_in_bin: usize,
    n_msgs: usize,
    p_v: Vec<f64>,
    joint_vt: JointTable,
    joint_zy: JointTable,
    joint_zuvy: JointTable,
    coded_plan: Option<CodedLastBlock>,
}

/// Precomputed plan for the coded last block.
struct CodedLastBlock {
    /// `helper_table[s]` is the one-bit description sent for state `s`.
    helper_table: Vec<usize>,
    rule0: Vec<usize>,
    rule1: Vec<usize>,
    row0: Vec<f64>,
    row1: Vec<f64>,
    bits: usize,
    reps: usize,
}

fn build_coded_plan(spec: &BlockMarkovSpec, n_bins: usize) -> Result<Option<CodedLastBlock>> {
    let bits = if n_bins <= 1 {
        0
    } else {
        (usize::BITS - (n_bins - 1).leading_zeros()) as usize
    };
    if bits == 0 {
        return Ok(None);
    }
    // The plan keeps the helper's state->flag table and the two input
    // rules; each repetition realizes one use of the witness code.
    let ch = spec.channel();
    let (positive, witness) = check_positive_capacity(ch);
    if !positive {
        return Err(Error::Validation(
            "coded last block needs a channel with positive description-aided capacity".into(),
        ));
    }
    let w = witness.expect("positive verdict carries a witness");
    let (helper, (u1, u2)) = build_positivity_helper(ch, &w)?;
    let rule0 = u1.table().to_vec();
    let rule1 = u2.table().to_vec();
    let one_shot_row = |rule: &[usize]| -> Vec<f64> {
        let mut row = vec![0.0; ch.n_y()];
        for s in 0..ch.n_s() {
            let ps = ch.p_s().prob(s);
            if ps == 0.0 {
                continue;
            }
            let x = rule[helper.map(s)];
            for (y, &wy) in ch.w_row(s, x).iter().enumerate() {
                row[y] += ps * wy;
            }
        }
        row
    };
    let row0 = one_shot_row(&rule0);
    let row1 = one_shot_row(&rule1);
    let bc: f64 = row0
        .iter()
        .zip(&row1)
        .map(|(&a, &b)| (a * b).sqrt())
        .sum();
    if !(bc < 1.0) {
        return Err(Error::InvalidWitness(format!(
            "witness strategies have Bhattacharyya coefficient {bc}"
        )));
    }
    // Smallest repetition count with bits * bc^reps <= 1e-3.
    let target = 1e-3 / bits as f64;
    let reps = (target.ln() / bc.ln()).ceil().max(1.0) as usize;
    Ok(Some(CodedLastBlock {
        helper_table: helper.table().to_vec(),
        rule0,
        rule1,
        row0,
        row1,
        bits,
        reps,
    }))
}

/// One trial's tallies.
#[derive(Debug, Default, Clone, Copy)]
struct TrialOutcome {
    no_bin_index: u64,
    satellite_errors: u64,
    bin_decode_errors: u64,
    last_block_errors: u64,
    block_errors: u64,
    message_errors: u64,
    uses: u64,
}

fn run_trial(ctx: &SimContext<'_>, trial: u64) -> TrialOutcome {
    let spec = ctx.spec;
    let ch = spec.channel();
    let n = ctx.cfg.n;
    let lambda = ctx.cfg.lambda;
    let eps = ctx.cfg.eps;
    let rng = StreamRng::from_seed(ctx.cfg.seed).child_u64(trial);
    let cb_z = rng.child_str("codebook-z");
    let cb_v = rng.child_str("codebook-v");
    let cb_u = rng.child_str("codebook-u");
    let st_states = rng.child_str("states");
    let st_channel = rng.child_str("channel");
    let st_messages = rng.child_str("messages");
    let st_last = rng.child_str("last-block");

    // Materialized small codebooks; u codewords are generated on demand.
    let z_cb: Vec<Vec<usize>> = (0..ctx.n_bins)
        .map(|l| {
            (0..n)
                .map(|i| cb_z.sample_at(spec.p_z.probs(), (l * n + i) as u64))
                .collect()
        })
        .collect();
    let v_cb: Vec<Vec<usize>> = (0..ctx.n_bins * ctx.n_in_bin)
        .map(|idx| {
            (0..n)
                .map(|i| cb_v.sample_at(&ctx.p_v, (idx * n + i) as u64))
                .collect()
        })
        .collect();
    let u_word = |l: usize, m: usize, z_word: &[usize]| -> Vec<usize> {
        let base = ((l * ctx.n_msgs + m) * n) as u64;
        (0..n)
            .map(|i| cb_u.sample_at(spec.p_u_given_z.row(z_word[i]), base + i as u64))
            .collect()
    };

    let mut out = TrialOutcome::default();
    let mut check_vt = TypicalityChecker::new(&ctx.joint_vt);
    let mut check_zy = TypicalityChecker::new(&ctx.joint_zy);
    let mut check_zuvy = TypicalityChecker::new(&ctx.joint_zuvy);

    // Forward pass over the lambda-1 data blocks.
    let data_blocks = lambda - 1;
    let mut messages = Vec::with_capacity(data_blocks);
    let mut bin_of_block = vec![0usize; lambda]; // bin_of_block[0] = initial bin
    let mut k_of_block = vec![0usize; data_blocks + 1];
    let mut y_blocks: Vec<Vec<usize>> = Vec::with_capacity(data_blocks);
    for j in 1..=data_blocks {
        let m = lemire(st_messages.value_at(j as u64), ctx.n_msgs);
        messages.push(m);
        let l_prev = bin_of_block[j - 1];
        let z_word = &z_cb[l_prev];
        let u_seq = u_word(l_prev, m, z_word);
        let mut enc = BlockEncoder::new(spec, z_word, &u_seq);
        let mut t_seq = Vec::with_capacity(n);
        let mut y_seq = Vec::with_capacity(n);
        for i in 0..n {
            let idx = ((j - 1) * n + i) as u64;
            let s = st_states.sample_at(ch.p_s().probs(), idx);
            let (t, x) = enc.step(s);
            let y = st_channel.sample_at(ch.w_row(s, x), idx);
            t_seq.push(t);
            y_seq.push(y);
        }
        // Bin the description sequence: lexicographically first typical
        // (bin, within-bin) pair, else bin 0.
        let mut chosen: Option<(usize, usize)> = None;
        'bin_search: for l in 0..ctx.n_bins {
            for k in 0..ctx.n_in_bin {
                if check_vt.is_typical(&[&v_cb[l * ctx.n_in_bin + k], &t_seq], eps) {
                    chosen = Some((l, k));
                    break 'bin_search;
                }
            }
        }
        match chosen {
            Some((l, k)) => {
                bin_of_block[j] = l;
                k_of_block[j] = k;
            }
            None => {
                out.no_bin_index += 1;
                bin_of_block[j] = 0;
                k_of_block[j] = 0;
            }
        }
        y_blocks.push(y_seq);
        out.uses += n as u64;
    }

    // Last block: deliver the final bin index.
    let mut l_hat = bin_of_block[data_blocks];
    match ctx.cfg.last_block_mode {
        LastBlockMode::Genie => {
            // The index is handed over; the block still occupies n uses.
            out.uses += n as u64;
        }
        LastBlockMode::Coded => {
            if let Some(plan) = &ctx.coded_plan {
                let mut decoded = 0usize;
                let truth = bin_of_block[data_blocks];
                for bit in 0..plan.bits {
                    let sent = (truth >> bit) & 1;
                    let rule = if sent == 0 { &plan.rule0 } else { &plan.rule1 };
                    let mut ll0 = 0.0f64;
                    let mut ll1 = 0.0f64;
                    for rep in 0..plan.reps {
                        let idx = (bit * plan.reps + rep) as u64;
                        let s = st_last.sample_at(ch.p_s().probs(), 2 * idx);
                        let x = rule[plan.helper_table[s]];
                        let y = st_last.sample_at(ch.w_row(s, x), 2 * idx + 1);
                        ll0 += ln_or_neg_inf(plan.row0[y]);
                        ll1 += ln_or_neg_inf(plan.row1[y]);
                    }
                    if ll1 > ll0 {
                        decoded |= 1 << bit;
                    }
                }
                out.uses += (plan.bits * plan.reps) as u64;
                let decoded = decoded % ctx.n_bins.max(1);
                if decoded != truth {
                    out.last_block_errors += 1;
                }
                l_hat = decoded;
            } else {
                // Single bin: nothing to send.
            }
        }
    }

    // Backward pass.
    for j in (1..=data_blocks).rev() {
        let y_seq = &y_blocks[j - 1];
        let v_bin_base = l_hat * ctx.n_in_bin;
        let mut found: Option<(usize, usize, usize)> = None;
        'decode: for l_prev in 0..ctx.n_bins {
            let z_word = &z_cb[l_prev];
            // Pair typicality is implied by quadruple typicality, so this
            // filter never changes the accepted set, only skips work.
            if !check_zy.is_typical(&[z_word, y_seq], eps) {
                continue;
            }
            for m in 0..ctx.n_msgs {
                let u_seq = u_word(l_prev, m, z_word);
                for k in 0..ctx.n_in_bin {
                    if check_zuvy.is_typical(
                        &[z_word, &u_seq, &v_cb[v_bin_base + k], y_seq],
                        eps,
                    ) {
                        found = Some((l_prev, m, k));
                        break 'decode;
                    }
                }
            }
        }
        match found {
            Some((l_prev, m_hat, k_hat)) => {
                let truth = (bin_of_block[j - 1], messages[j - 1], k_of_block[j]);
                if (l_prev, m_hat, k_hat) != truth {
                    out.block_errors += 1;
                }
                if m_hat != truth.1 {
                    out.satellite_errors += 1;
                    out.message_errors += 1;
                }
                if l_prev != truth.0 || k_hat != truth.2 {
                    out.bin_decode_errors += 1;
                }
                l_hat = l_prev;
            }
            None => {
                // No typical triple: declare failure and abort the backward
                // pass; this and all earlier blocks count as errored.
                out.bin_decode_errors += 1;
                out.block_errors += j as u64;
                out.message_errors += j as u64;
                break;
            }
        }
    }
    out
}

fn lemire(v: u64, n: usize) -> usize {
    (((v as u128) * (n as u128)) >> 64) as usize
}

fn ln_or_neg_inf(p: f64) -> f64 {
    if p > 0.0 {
        p.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// Run the end-to-end scheme for `trials` independent trials. Each trial
/// draws fresh codebooks, messages, states, and channel noise from
/// `(cfg.seed, trial index)`; results are aggregated in trial order, so
/// any parallel schedule yields identical reports.
pub fn simulate_block_markov(
    spec: &BlockMarkovSpec,
    rates: &RateTuple,
    cfg: &SimConfig,
    trials: u64,
) -> Result<SimReport> {
    if rates.r < 0.0 || rates.r_v < 0.0 || rates.r_tilde < 0.0 {
        return Err(Error::Validation("rates must be nonnegative".into()));
    }
    if trials == 0 {
        return Err(Error::EmptyInput("trial count".into()));
    }
    let (n_bins, n_in_bin, n_msgs) = codebook_sizes(rates, cfg.n);
    let hypotheses = n_bins as u128 * n_in_bin as u128 * n_msgs as u128;
    if hypotheses > cfg.search_cap as u128 {
        return Err(Error::SearchCapExceeded {
            required: hypotheses,
            cap: cfg.search_cap,
        });
    }
    let joint = bm_joint(spec)?;
    let joint_vt = joint.marginal(&["V", "T"])?;
    let joint_zy = joint.marginal(&["Z", "Y"])?;
    let joint_zuvy = joint.marginal(&["Z", "U", "V", "Y"])?;
    let p_v = {
        let m = joint.marginal(&["V"])?;
        m.probs().to_vec()
    };
    let coded_plan = match cfg.last_block_mode {
        LastBlockMode::Coded => build_coded_plan(spec, n_bins)?,
        LastBlockMode::Genie => None,
    };
    let ctx = SimContext {
        spec,
        cfg: *cfg,
        n_bins,
        n_in_bin,
        n_msgs,
        p_v,
        joint_vt,
        joint_zy,
        joint_zuvy,
        coded_plan,
    };
    let outcomes: Vec<TrialOutcome> = {
        use rayon::prelude::*;
        (0..trials)
            .into_par_iter()
            .map(|trial| run_trial(&ctx, trial))
            .collect()
    };
    let mut report = SimReport {
        trials,
        data_blocks: trials * (cfg.lambda as u64 - 1),
        ..SimReport::default()
    };
    for o in &outcomes {
        report.no_bin_index += o.no_bin_index;
        report.satellite_errors += o.satellite_errors;
        report.bin_decode_errors += o.bin_decode_errors;
        report.last_block_errors += o.last_block_errors;
        report.block_errors += o.block_errors;
        report.message_errors += o.message_errors;
        report.total_uses += o.uses;
    }
    let blocks = report.data_blocks as f64;
    report.block_error_rate = report.block_errors as f64 / blocks;
    report.message_error_rate = report.message_errors as f64 / blocks;
    report.effective_rate_bits_per_use = if report.total_uses == 0 {
        0.0
    } else {
        (cfg.lambda as f64 - 1.0) * (ctx.n_msgs as f64).log2() * trials as f64
            / report.total_uses as f64
    };
    Ok(report)
}

/// Empirical success rate of the bin-covering step alone: draw a fresh
/// description sequence and bin codebook per trial and report the fraction
/// of trials where some bin codeword is jointly typical with it. Isolates
/// the covering behavior (success should approach 1 as `n` grows whenever
/// the total bin rate exceeds `I(V;T)` with margin).
pub fn bin_covering_success_rate(
    spec: &BlockMarkovSpec,
    total_bin_rate: f64,
    n: usize,
    eps: f64,
    seed: u64,
    trials: u64,
) -> Result<f64> {
    if n == 0 || trials == 0 {
        return Err(Error::EmptyInput("covering experiment shape".into()));
    }
    let joint = bm_joint(spec)?;
    let joint_vt = joint.marginal(&["V", "T"])?;
    let p_v = joint.marginal(&["V"])?.probs().to_vec();
    let p_t = joint.marginal(&["T"])?.probs().to_vec();
    let n_words = (2f64.powf(total_bin_rate * n as f64).round().max(1.0)) as usize;
    let rng = StreamRng::from_seed(seed);
    let mut successes = 0u64;
    let mut checker = TypicalityChecker::new(&joint_vt);
    for trial in 0..trials {
        let trng = rng.child_u64(trial);
        let st_t = trng.child_str("descriptions");
        let st_v = trng.child_str("codebook-v");
        let t_seq: Vec<usize> = (0..n).map(|i| st_t.sample_at(&p_t, i as u64)).collect();
        let mut hit = false;
        for w in 0..n_words {
            let v_word: Vec<usize> = (0..n)
                .map(|i| st_v.sample_at(&p_v, (w * n + i) as u64))
                .collect();
            if checker.is_typical(&[&v_word, &t_seq], eps) {
                hit = true;
                break;
            }
        }
        if hit {
            successes += 1;
        }
    }
    Ok(successes as f64 / trials as f64)
}

/// True iff the scheme's achievable rate is dominated by the
/// message-cognizant capacity of the underlying channel with the same
/// description alphabet (up to 1e-6 slack).
pub fn bm_rate_dominated_by_mc_capacity(spec: &BlockMarkovSpec) -> Result<bool> {
    let rate = bm_rate(spec)?.rate_bits;
    let mc = mc_capacity(
        spec.channel(),
        spec.help_alphabet().len(),
        &BaConfig::suite(),
        &EnumConfig::default(),
    )?
    .value_bits;
    Ok(rate <= mc + 1e-6)
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probcore::is_jointly_typical;

    fn labels(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    /// Binary channel with Y = X ⊕ S, S uniform.
    fn xor_channel() -> Channel {
        let mut w = vec![vec![vec![0.0; 2]; 2]; 2];
        for s in 0..2usize {
            for x in 0..2usize {
                w[s][x][x ^ s] = 1.0;
            }
        }
        Channel::new(
            labels("x", 2),
            labels("y", 2),
            labels("s", 2),
            Pmf::uniform(labels("s", 2)).unwrap(),
            w,
            None,
        )
        .unwrap()
    }

    /// Z and V singletons, helper reveals the state, input cancels it:
    /// the block-Markov machinery reduces to symbol-by-symbol coding.
    fn degenerate_spec() -> BlockMarkovSpec {
        let ch = xor_channel();
        BlockMarkovSpec::new(
            vec!["z".into()],
            labels("u", 2),
            vec!["v".into()],
            Pmf::point_mass(vec!["z".into()], 0).unwrap(),
            vec![vec![0], vec![1]],
            CondPmf::new(
                vec!["z".into()],
                labels("u", 2),
                vec![vec![0.5, 0.5]],
            )
            .unwrap(),
            vec![vec![0, 1], vec![1, 0]],
            CondPmf::new(labels("t", 2), vec!["v".into()], vec![vec![1.0], vec![1.0]])
                .unwrap(),
            ch,
            HelpAlphabet::new(labels("t", 2)).unwrap(),
        )
        .unwrap()
    }

    /// Noiseless bit pipe with a trivial state and degenerate Z, V.
    fn noiseless_spec() -> BlockMarkovSpec {
        let w = vec![vec![vec![1.0, 0.0], vec![0.0, 1.0]]];
        let ch = Channel::new(
            labels("x", 2),
            labels("y", 2),
            vec!["s".into()],
            Pmf::point_mass(vec!["s".into()], 0).unwrap(),
            w,
            None,
        )
        .unwrap();
        BlockMarkovSpec::new(
            vec!["z".into()],
            labels("u", 2),
            vec!["v".into()],
            Pmf::point_mass(vec!["z".into()], 0).unwrap(),
            vec![vec![0]],
            CondPmf::new(vec!["z".into()], labels("u", 2), vec![vec![0.5, 0.5]]).unwrap(),
            vec![vec![0, 0], vec![1, 1]],
            CondPmf::new(labels("t", 2), vec!["v".into()], vec![vec![1.0], vec![1.0]])
                .unwrap(),
            ch,
            HelpAlphabet::new(labels("t", 2)).unwrap(),
        )
        .unwrap()
    }

    /// Helper passes the state through; V is a noisy copy of T; the input
    /// cancels the state so Y reveals U cleanly.
    fn noisy_v_spec(flip: f64) -> BlockMarkovSpec {
        let ch = xor_channel();
        BlockMarkovSpec::new(
            vec!["z".into()],
            labels("u", 2),
            labels("v", 2),
            Pmf::point_mass(vec!["z".into()], 0).unwrap(),
            vec![vec![0], vec![1]],
            CondPmf::new(vec!["z".into()], labels("u", 2), vec![vec![0.5, 0.5]]).unwrap(),
            vec![vec![0, 1], vec![1, 0]],
            CondPmf::new(
                labels("t", 2),
                labels("v", 2),
                vec![vec![1.0 - flip, flip], vec![flip, 1.0 - flip]],
            )
            .unwrap(),
            ch,
            HelpAlphabet::new(labels("t", 2)).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn joint_of_degenerate_spec_reduces_to_symbol_by_symbol_form() {
        let spec = degenerate_spec();
        let joint = bm_joint(&spec).unwrap();
        let reduced = joint.marginal(&["S", "T", "U", "X", "Y"]).unwrap();
        // Direct product oracle: P_S(s) 1[t=s] P_U(u) 1[x=f(u,t)] W(y|x,s).
        let spec_ref = &spec;
        let mut expect = vec![0.0; 2 * 2 * 2 * 2 * 2];
        for s in 0..2 {
            for u in 0..2 {
                let t = s;
                let x = spec_ref.input(u, t);
                for y in 0..2 {
                    let p = 0.5 * 0.5 * spec_ref.channel().w_row(s, x)[y];
                    let idx = (((s * 2 + t) * 2 + u) * 2 + x) * 2 + y;
                    expect[idx] += p;
                }
            }
        }
        for (a, b) in reduced.probs().iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn joint_satisfies_the_scheme_markov_chains() {
        let spec = noisy_v_spec(0.25);
        let joint = bm_joint(&spec).unwrap();
        assert!(joint.check_markov(&["V"], &["T"], &["Y"]).unwrap());
        assert!(joint.check_markov(&["U"], &["Z"], &["V"]).unwrap());
        assert!(joint
            .check_markov(&["V"], &["T"], &["U", "Z", "Y"])
            .unwrap());
    }

    #[test]
    fn joint_cap_reports_required_entries() {
        let spec = degenerate_spec();
        match bm_joint_with_cap(&spec, 4) {
            Err(Error::TableCapExceeded { required, cap }) => {
                assert_eq!(required, 2 * 1 * 2 * 2 * 2 * 1 * 2);
                assert_eq!(cap, 4);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_rate_is_the_symbol_by_symbol_objective() {
        let spec = degenerate_spec();
        let rep = bm_rate(&spec).unwrap();
        let joint = bm_joint(&spec).unwrap();
        let i_uy = joint.mutual_information(&["U"], &["Y"]).unwrap();
        assert!((rep.rate_bits - i_uy).abs() < 1e-12);
        assert!((rep.rate_bits - 1.0).abs() < 1e-9, "state gets cancelled");
        assert!(rep.i_v_t_given_y.abs() < 1e-12);
    }

    #[test]
    fn rate_is_bounded_by_unconditional_dependence() {
        let spec = noisy_v_spec(0.25);
        let rep = bm_rate(&spec).unwrap();
        let joint = bm_joint(&spec).unwrap();
        let i_uz_y = joint.mutual_information(&["U", "Z"], &["Y"]).unwrap();
        assert!(rep.rate_bits <= i_uz_y + 1e-9);
    }

    #[test]
    fn feasible_region_of_noisy_v_spec_is_strictly_interior() {
        let spec = noisy_v_spec(0.25);
        let joint = bm_joint(&spec).unwrap();
        let rep = bm_rate(&spec).unwrap();
        let i_vy = joint.mutual_information(&["V"], &["Y"]).unwrap();
        let i_vt = joint.mutual_information(&["V"], &["T"]).unwrap();
        let rates = bm_rate_feasible_region(&spec, 0.3).unwrap();
        assert!(rates.r > 0.0 && rates.r < rep.rate_bits);
        assert!(rates.r_v > rep.i_v_t_given_y);
        assert!(rates.r_v + rates.r_tilde > i_vt);
        assert!(rates.r_tilde <= i_vy + 1e-12);
        assert!(rates.r + rates.r_v < rep.i_uz_vy);
    }

    #[test]
    fn feasible_region_of_degenerate_spec_has_zero_bin_rates() {
        let rates = bm_rate_feasible_region(&degenerate_spec(), 0.4).unwrap();
        assert_eq!(rates.r_v, 0.0);
        assert_eq!(rates.r_tilde, 0.0);
        assert!(rates.r > 0.0);
    }

    #[test]
    fn feasible_region_rejects_zero_rate_specs() {
        // Output independent of everything: rate is zero.
        let w = vec![vec![vec![0.5, 0.5], vec![0.5, 0.5]]];
        let ch = Channel::new(
            labels("x", 2),
            labels("y", 2),
            vec!["s".into()],
            Pmf::point_mass(vec!["s".into()], 0).unwrap(),
            w,
            None,
        )
        .unwrap();
        let spec = BlockMarkovSpec::new(
            vec!["z".into()],
            labels("u", 2),
            vec!["v".into()],
            Pmf::point_mass(vec!["z".into()], 0).unwrap(),
            vec![vec![0]],
            CondPmf::new(vec!["z".into()], labels("u", 2), vec![vec![0.5, 0.5]]).unwrap(),
            vec![vec![0, 0], vec![1, 1]],
            CondPmf::new(labels("t", 2), vec!["v".into()], vec![vec![1.0], vec![1.0]])
                .unwrap(),
            ch,
            HelpAlphabet::new(labels("t", 2)).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            bm_rate_feasible_region(&spec, 0.3),
            Err(Error::EmptyRateRegion(_))
        ));
    }

    #[test]
    fn typicality_checker_agrees_with_the_reference_on_random_tuples() {
        let spec = noisy_v_spec(0.25);
        let joint = bm_joint(&spec).unwrap();
        let pair = joint.marginal(&["V", "T"]).unwrap();
        let mut checker = TypicalityChecker::new(&pair);
        let rng = StreamRng::from_seed(7);
        for trial in 0..200u64 {
            let mut cur = rng.child_u64(trial).cursor();
            let n = 6 + (cur.next_f64() * 6.0) as usize;
            let a: Vec<usize> = (0..n).map(|_| (cur.next_f64() * 2.0) as usize).collect();
            let b: Vec<usize> = (0..n).map(|_| (cur.next_f64() * 2.0) as usize).collect();
            for eps in [0.2, 0.5, 1.5] {
                let fast = checker.is_typical(&[&a, &b], eps);
                let slow = is_jointly_typical(&[&a, &b], &pair, eps).unwrap();
                assert_eq!(fast, slow, "n={n} eps={eps} a={a:?} b={b:?}");
            }
        }
    }

    #[test]
    fn encoder_is_causal_under_future_state_perturbation() {
        let spec = noisy_v_spec(0.25);
        let n = 12;
        let z_word = vec![0usize; n];
        let u_word: Vec<usize> = (0..n).map(|i| i % 2).collect();
        let states_a: Vec<usize> = (0..n).map(|i| (i / 2) % 2).collect();
        let mut states_b = states_a.clone();
        for s in states_b.iter_mut().skip(7) {
            *s = 1 - *s;
        }
        let mut enc_a = BlockEncoder::new(&spec, &z_word, &u_word);
        let mut enc_b = BlockEncoder::new(&spec, &z_word, &u_word);
        for i in 0..7 {
            let (ta, xa) = enc_a.step(states_a[i]);
            let (tb, xb) = enc_b.step(states_b[i]);
            assert_eq!((ta, xa), (tb, xb), "prefix must not feel future states");
        }
    }

    #[test]
    fn noiseless_degenerate_simulation_is_error_free() {
        let spec = noiseless_spec();
        let rates = RateTuple {
            r: 0.25,
            r_v: 0.0,
            r_tilde: 0.0,
        };
        let mut cfg = SimConfig::new(24, 3, 1.0, 11).unwrap();
        cfg.search_cap = 1 << 20;
        let rep = simulate_block_markov(&spec, &rates, &cfg, 100).unwrap();
        assert_eq!(rep.message_errors, 0, "noiseless pipe below capacity");
        assert_eq!(rep.no_bin_index, 0);
        assert_eq!(rep.block_errors, 0);
        assert_eq!(rep.trials, 100);
        assert_eq!(rep.total_uses, 100 * 3 * 24);
        let expect_rate = 2.0 * (64f64).log2() / (3.0 * 24.0);
        assert!((rep.effective_rate_bits_per_use - expect_rate).abs() < 1e-12);
    }

    #[test]
    fn simulation_is_reproducible_for_a_fixed_seed() {
        let spec = noisy_v_spec(0.25);
        let rates = bm_rate_feasible_region(&spec, 0.5).unwrap();
        let mut cfg = SimConfig::new(10, 3, 1.5, 42).unwrap();
        cfg.search_cap = 1 << 24;
        let a = simulate_block_markov(&spec, &rates, &cfg, 20).unwrap();
        let b = simulate_block_markov(&spec, &rates, &cfg, 20).unwrap();
        assert_eq!(a.block_errors, b.block_errors);
        assert_eq!(a.message_errors, b.message_errors);
        assert_eq!(a.no_bin_index, b.no_bin_index);
        assert_eq!(a.bin_decode_errors, b.bin_decode_errors);
    }

    #[test]
    fn coded_last_block_delivers_the_bin_index() {
        let spec = noisy_v_spec(0.25);
        let rates = bm_rate_feasible_region(&spec, 0.5).unwrap();
        let mut cfg = SimConfig::new(10, 3, 1.5, 99).unwrap();
        cfg.search_cap = 1 << 24;
        cfg.last_block_mode = LastBlockMode::Coded;
        let rep = simulate_block_markov(&spec, &rates, &cfg, 30).unwrap();
        // The repetition code targets a 1e-3 whole-index error; 30 trials
        // should see none, and the coded block must consume extra uses.
        assert_eq!(rep.last_block_errors, 0);
        assert!(rep.total_uses > 30 * 3 * 10 - 30 * 10, "coded block replaces the genie block with real uses");
    }

    #[test]
    fn search_cap_is_enforced_with_the_required_count() {
        let spec = noisy_v_spec(0.25);
        let rates = RateTuple {
            r: 1.0,
            r_v: 1.0,
            r_tilde: 0.5,
        };
        let mut cfg = SimConfig::new(20, 3, 0.5, 1).unwrap();
        cfg.search_cap = 1000;
        match simulate_block_markov(&spec, &rates, &cfg, 1) {
            Err(Error::SearchCapExceeded { required, cap }) => {
                assert!(required > 1000);
                assert_eq!(cap, 1000);
            }
            other => panic!("expected search cap error, got {other:?}"),
        }
    }

    #[test]
    fn bin_covering_success_improves_with_block_length() {
        let spec = noisy_v_spec(0.25);
        // Total bin rate 0.5 comfortably exceeds I(V;T) = 1 - h(1/4).
        let s8 = bin_covering_success_rate(&spec, 0.5, 8, 0.35, 5, 200).unwrap();
        let s32 = bin_covering_success_rate(&spec, 0.5, 32, 0.35, 5, 200).unwrap();
        assert!(
            s32 >= s8,
            "covering should not degrade with n: s8={s8} s32={s32}"
        );
        assert!(s32 > 0.5, "long blocks should usually cover: s32={s32}");
    }

    #[test]
    fn dominance_by_message_cognizant_capacity_holds_on_stock_specs() {
        assert!(bm_rate_dominated_by_mc_capacity(&degenerate_spec()).unwrap());
        assert!(bm_rate_dominated_by_mc_capacity(&noisy_v_spec(0.25)).unwrap());
    }

    #[test]
    fn spec_json_round_trips_with_inline_channel() {
        let spec = noisy_v_spec(0.25);
        let text = spec.to_json_string();
        let back = BlockMarkovSpec::from_json_str(&text, None).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn spec_json_resolves_channel_paths_relative_to_the_document() {
        let dir = std::env::temp_dir().join("helperdmc-bm-spec-test");
        std::fs::create_dir_all(&dir).unwrap();
        let ch_path = dir.join("chan.json");
        std::fs::write(&ch_path, xor_channel().to_json_string()).unwrap();
        let spec = noisy_v_spec(0.25);
        let mut doc: serde_json::Value = serde_json::from_str(&spec.to_json_string()).unwrap();
        doc["channel"] = serde_json::Value::String("chan.json".into());
        let back = BlockMarkovSpec::from_json_str(&doc.to_string(), Some(&dir)).unwrap();
        assert_eq!(&spec, &back);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn spec_validation_rejects_inconsistent_tables() {
        let ch = xor_channel();
        // Helper rule entry out of range.
        let bad = BlockMarkovSpec::new(
            vec!["z".into()],
            labels("u", 2),
            vec!["v".into()],
            Pmf::point_mass(vec!["z".into()], 0).unwrap(),
            vec![vec![0], vec![2]],
            CondPmf::new(vec!["z".into()], labels("u", 2), vec![vec![0.5, 0.5]]).unwrap(),
            vec![vec![0, 1], vec![1, 0]],
            CondPmf::new(labels("t", 2), vec!["v".into()], vec![vec![1.0], vec![1.0]])
                .unwrap(),
            ch,
            HelpAlphabet::new(labels("t", 2)).unwrap(),
        );
        assert!(matches!(bad, Err(Error::Validation(_))));
    }
}
