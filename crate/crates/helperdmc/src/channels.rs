//! State-dependent channel data model, JSON (de)serialization, and the
//! channel constructions used throughout the workbench:
//!
//! - [`Channel`]: an SD-DMC `W(y|x,s)` with IID states `S ~ P_S`;
//! - [`DmcChannel`]: a plain state-free DMC (super channels, meta-state
//!   rows, per-state slices all end up here before capacity computation);
//! - [`reduce_to_meta_state_channel`]: treat the help `T = h(S)` as the
//!   channel's effective state;
//! - [`super_channel`]: the state-free channel from deterministic
//!   helper/input strategy pairs to outputs, averaging over states;
//! - [`sum_channel_capacity`]: capacity of a union of disjoint sub-channels;
//! - [`full_csi_capacity`]: state known at encoder and decoder, which
//!   decomposes exactly into per-state capacities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::helpercap::{blahut_arimoto, BaConfig, CapacityReport, HelperMap, McStrategy};
use crate::probcore::{Pmf, INPUT_MASS_TOL};

// ---------------------------------------------------------------------------
// Channel

/// A state-dependent discrete memoryless channel: transition tensor
/// `W(y|x,s)` stored state-major as `w[s][x][y]`, plus the state
/// distribution and (optionally) a declared help alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    x_labels: Vec<String>,
    y_labels: Vec<String>,
    s_labels: Vec<String>,
    p_s: Pmf,
    w: Vec<Vec<Vec<f64>>>,
    t_labels: Option<Vec<String>>,
}

impl Channel {
    pub fn new(
        x_labels: Vec<String>,
        y_labels: Vec<String>,
        s_labels: Vec<String>,
        p_s: Pmf,
        w: Vec<Vec<Vec<f64>>>,
        t_labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if x_labels.is_empty() || y_labels.is_empty() || s_labels.is_empty() {
            return Err(Error::EmptyInput("channel alphabet".into()));
        }
        if p_s.labels() != s_labels.as_slice() {
            return Err(Error::Validation(
                "state distribution alphabet does not match the state alphabet".into(),
            ));
        }
        if w.len() != s_labels.len() {
            return Err(Error::Validation(format!(
                "transition tensor has {} state slices for {} states",
                w.len(),
                s_labels.len()
            )));
        }
        for (s, slice) in w.iter().enumerate() {
            if slice.len() != x_labels.len() {
                return Err(Error::Validation(format!(
                    "state slice {s} has {} input rows for {} inputs",
                    slice.len(),
                    x_labels.len()
                )));
            }
            for (x, row) in slice.iter().enumerate() {
                if row.len() != y_labels.len() {
                    return Err(Error::Validation(format!(
                        "transition row (x={x}, s={s}) has {} entries for {} outputs",
                        row.len(),
                        y_labels.len()
                    )));
                }
                for (y, &p) in row.iter().enumerate() {
                    if !(p >= 0.0) {
                        return Err(Error::Validation(format!(
                            "transition entry (x={x}, s={s}, y={y}) is negative or NaN: {p}"
                        )));
                    }
                }
                let mass: f64 = row.iter().sum();
                if (mass - 1.0).abs() > INPUT_MASS_TOL {
                    return Err(Error::Validation(format!(
                        "transition row (x={x}, s={s}) has mass {mass}"
                    )));
                }
            }
        }
        if let Some(t) = &t_labels {
            if t.len() < 2 {
                return Err(Error::Validation(format!(
                    "help alphabet must have at least 2 symbols, got {}",
                    t.len()
                )));
            }
        }
        Ok(Channel {
            x_labels,
            y_labels,
            s_labels,
            p_s,
            w,
            t_labels,
        })
    }

    pub fn n_x(&self) -> usize {
        self.x_labels.len()
    }

    pub fn n_y(&self) -> usize {
        self.y_labels.len()
    }

    pub fn n_s(&self) -> usize {
        self.s_labels.len()
    }

    pub fn x_labels(&self) -> &[String] {
        &self.x_labels
    }

    pub fn y_labels(&self) -> &[String] {
        &self.y_labels
    }

    pub fn s_labels(&self) -> &[String] {
        &self.s_labels
    }

    pub fn p_s(&self) -> &Pmf {
        &self.p_s
    }

    pub fn t_labels(&self) -> Option<&[String]> {
        self.t_labels.as_deref()
    }

    /// Transition row W(·|x,s).
    pub fn w_row(&self, s: usize, x: usize) -> &[f64] {
        &self.w[s][x]
    }

    /// States with zero prior mass; their meta-reduction rows are
    /// placeholders and downstream optimizers skip them.
    pub fn unreachable_states(&self) -> Vec<bool> {
        self.p_s.probs().iter().map(|&p| p == 0.0).collect()
    }

    /// Parse and validate a channel spec document (JSON).
    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: ChannelDoc = serde_json::from_str(text)?;
        Channel::new(
            doc.x,
            doc.y,
            doc.s.clone(),
            Pmf::new(doc.s, doc.p_s)?,
            doc.w,
            doc.t,
        )
    }

    /// Serialize to the channel spec document format.
    pub fn to_json_string(&self) -> String {
        let doc = ChannelDoc {
            x: self.x_labels.clone(),
            y: self.y_labels.clone(),
            s: self.s_labels.clone(),
            t: self.t_labels.clone(),
            p_s: self.p_s.probs().to_vec(),
            w: self.w.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("channel document serializes")
    }
}

/// The on-disk channel spec schema: `w[s][x][y]` row-stochastic in `y`.
#[derive(Debug, Serialize, Deserialize)]
struct ChannelDoc {
    x: Vec<String>,
    y: Vec<String>,
    s: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    t: Option<Vec<String>>,
    p_s: Vec<f64>,
    w: Vec<Vec<Vec<f64>>>,
}

/// Parse and validate a channel spec document. Alias for
/// [`Channel::from_json_str`] matching the operation vocabulary.
pub fn validate_and_load(spec_text: &str) -> Result<Channel> {
    Channel::from_json_str(spec_text)
}

// ---------------------------------------------------------------------------
// HelpAlphabet

/// The helper's description alphabet; at least two symbols by standing
/// assumption (a helper that cannot distinguish anything is uninteresting
/// and breaks the description-rate accounting).
#[derive(Debug, Clone, PartialEq)]
pub struct HelpAlphabet {
    labels: Vec<String>,
}

impl HelpAlphabet {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::Validation(format!(
                "help alphabet must have at least 2 symbols, got {}",
                labels.len()
            )));
        }
        Ok(HelpAlphabet { labels })
    }

    /// Help alphabet {"0", "1", ..., k-1}.
    pub fn of_size(k: usize) -> Result<Self> {
        HelpAlphabet::new((0..k).map(|i| i.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Description rate log2 |T| in bits.
    pub fn description_rate(&self) -> f64 {
        (self.labels.len() as f64).log2()
    }
}

// ---------------------------------------------------------------------------
// DmcChannel

/// A plain discrete memoryless channel: `rows[i][j] = P(out j | in i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DmcChannel {
    in_labels: Vec<String>,
    out_labels: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl DmcChannel {
    pub fn new(in_labels: Vec<String>, out_labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if in_labels.is_empty() || out_labels.is_empty() {
            return Err(Error::EmptyInput("dmc alphabet".into()));
        }
        if rows.len() != in_labels.len() {
            return Err(Error::Validation(format!(
                "dmc has {} rows for {} inputs",
                rows.len(),
                in_labels.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != out_labels.len() {
                return Err(Error::Validation(format!(
                    "dmc row {i} has {} entries for {} outputs",
                    row.len(),
                    out_labels.len()
                )));
            }
            for (j, &p) in row.iter().enumerate() {
                if !(p >= 0.0) {
                    return Err(Error::Validation(format!(
                        "dmc entry ({i},{j}) is negative or NaN: {p}"
                    )));
                }
            }
            let mass: f64 = row.iter().sum();
            // Derived rows accumulate float error from state averaging.
            if (mass - 1.0).abs() > 1e-10 {
                return Err(Error::Validation(format!("dmc row {i} has mass {mass}")));
            }
        }
        Ok(DmcChannel {
            in_labels,
            out_labels,
            rows,
        })
    }

    pub fn n_in(&self) -> usize {
        self.in_labels.len()
    }

    pub fn n_out(&self) -> usize {
        self.out_labels.len()
    }

    pub fn in_labels(&self) -> &[String] {
        &self.in_labels
    }

    pub fn out_labels(&self) -> &[String] {
        &self.out_labels
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}

// ---------------------------------------------------------------------------
// Constructions

/// Treat `T = h(S)` as the channel's state: the reduced channel has state
/// alphabet T, state distribution equal to the pushforward of `P_S` under
/// `h`, and transitions `W̃(y|x,t) = Σ_s P(S=s|T=t) W(y|x,s)`.
///
/// Help symbols with zero mass get uniform placeholder rows; they are
/// reported by [`Channel::unreachable_states`] on the result and skipped by
/// the optimizers.
pub fn reduce_to_meta_state_channel(ch: &Channel, h: &HelperMap) -> Result<Channel> {
    if h.n_s() != ch.n_s() {
        return Err(Error::Validation(format!(
            "helper map covers {} states, channel has {}",
            h.n_s(),
            ch.n_s()
        )));
    }
    let k = h.t_size();
    let t_labels: Vec<String> = match ch.t_labels() {
        Some(t) if t.len() == k => t.to_vec(),
        _ => (0..k).map(|i| i.to_string()).collect(),
    };
    let mut p_t = vec![0.0; k];
    for s in 0..ch.n_s() {
        p_t[h.map(s)] += ch.p_s().prob(s);
    }
    let uniform_y = 1.0 / ch.n_y() as f64;
    let mut w = vec![vec![vec![0.0; ch.n_y()]; ch.n_x()]; k];
    for (t, w_t) in w.iter_mut().enumerate() {
        if p_t[t] == 0.0 {
            for row in w_t.iter_mut() {
                row.fill(uniform_y);
            }
            continue;
        }
        for s in 0..ch.n_s() {
            if h.map(s) != t || ch.p_s().prob(s) == 0.0 {
                continue;
            }
            let weight = ch.p_s().prob(s) / p_t[t];
            for x in 0..ch.n_x() {
                let src = ch.w_row(s, x);
                for y in 0..ch.n_y() {
                    w_t[x][y] += weight * src[y];
                }
            }
        }
    }
    // Pushforward masses are exact sums of input masses; renormalize the tiny
    // float drift so the Pmf invariant holds at input tolerance.
    let p_t_pmf = Pmf::with_tolerance(t_labels.clone(), p_t, 1e-9)?;
    Channel::new(
        ch.x_labels().to_vec(),
        ch.y_labels().to_vec(),
        t_labels,
        p_t_pmf,
        w,
        None,
    )
}

/// The state-free "super channel" from a family of deterministic
/// helper/input strategy pairs to outputs:
/// `W̃(y|u) = Σ_s P_S(s) · W(y | g_u(h_u(s)), s)`
/// where `h_u : S → T` is the pair's help rule and `g_u : T → X` its input
/// rule. Inputs are labeled `u0, u1, ...` in family order.
pub fn super_channel(ch: &Channel, family: &[McStrategy]) -> Result<DmcChannel> {
    if family.is_empty() {
        return Err(Error::EmptyInput("strategy family".into()));
    }
    let mut rows = Vec::with_capacity(family.len());
    for u in family {
        if u.help_rule.n_s() != ch.n_s() {
            return Err(Error::Validation(format!(
                "strategy help rule covers {} states, channel has {}",
                u.help_rule.n_s(),
                ch.n_s()
            )));
        }
        if u.input_rule.n_t() != u.help_rule.t_size() {
            return Err(Error::Validation(
                "strategy input rule domain does not match help rule codomain".into(),
            ));
        }
        if u.input_rule.max_x() >= ch.n_x() {
            return Err(Error::Validation(
                "strategy input rule targets an out-of-range channel input".into(),
            ));
        }
        let mut row = vec![0.0; ch.n_y()];
        for s in 0..ch.n_s() {
            let ps = ch.p_s().prob(s);
            if ps == 0.0 {
                continue;
            }
            let x = u.input_rule.map(u.help_rule.map(s));
            let src = ch.w_row(s, x);
            for y in 0..ch.n_y() {
                row[y] += ps * src[y];
            }
        }
        rows.push(row);
    }
    DmcChannel::new(
        (0..family.len()).map(|i| format!("u{i}")).collect(),
        ch.y_labels().to_vec(),
        rows,
    )
}

/// The state-averaged channel `Σ_s P_S(s) W(y|x,s)` governing the system
/// when nobody observes the state.
pub fn average_channel_of(ch: &Channel) -> Result<DmcChannel> {
    let mut rows = vec![vec![0.0; ch.n_y()]; ch.n_x()];
    for s in 0..ch.n_s() {
        let ps = ch.p_s().prob(s);
        if ps == 0.0 {
            continue;
        }
        for (x, row) in rows.iter_mut().enumerate() {
            let src = ch.w_row(s, x);
            for y in 0..ch.n_y() {
                row[y] += ps * src[y];
            }
        }
    }
    DmcChannel::new(ch.x_labels().to_vec(), ch.y_labels().to_vec(), rows)
}

/// Capacity of the sum (union) of disjoint sub-channels with capacities
/// `caps`: `log2( Σ_i 2^{C_i} )`.
pub fn sum_channel_capacity(caps: &[f64]) -> Result<f64> {
    if caps.is_empty() {
        return Err(Error::EmptyInput("sum channel capacity list".into()));
    }
    for &c in caps {
        if !(c >= 0.0) {
            return Err(Error::Validation(format!(
                "sum channel capacities must be nonnegative, got {c}"
            )));
        }
    }
    Ok(caps.iter().map(|&c| 2f64.powf(c)).sum::<f64>().log2())
}

/// Capacity with the state known at both encoder and decoder:
/// `Σ_s P_S(s) · C(W(·|·,s))`. The decomposition is exact because the input
/// law may be optimized separately for each state. The report lists each
/// per-state capacity in `components` and the induced input marginal
/// `Σ_s P_S(s) P*_{X|s}` as `input_pmf`.
pub fn full_csi_capacity(ch: &Channel, ba: &BaConfig) -> Result<CapacityReport> {
    let mut value = 0.0;
    let mut components = Vec::with_capacity(ch.n_s());
    let mut induced_x = vec![0.0; ch.n_x()];
    let mut iterations = 0u64;
    let mut final_gap: f64 = 0.0;
    for s in 0..ch.n_s() {
        let ps = ch.p_s().prob(s);
        if ps == 0.0 {
            components.push((ch.s_labels()[s].clone(), 0.0));
            continue;
        }
        let dmc = DmcChannel::new(
            ch.x_labels().to_vec(),
            ch.y_labels().to_vec(),
            (0..ch.n_x()).map(|x| ch.w_row(s, x).to_vec()).collect(),
        )?;
        let rep = blahut_arimoto(&dmc, ba)?;
        value += ps * rep.value_bits;
        iterations += rep.iterations;
        final_gap = final_gap.max(rep.final_gap);
        for x in 0..ch.n_x() {
            induced_x[x] += ps * rep.input_pmf.prob(x);
        }
        components.push((ch.s_labels()[s].clone(), rep.value_bits));
    }
    Ok(CapacityReport {
        value_bits: value.max(0.0),
        argmax_object: "per-state capacity-achieving input laws".into(),
        input_pmf: Pmf::with_tolerance(ch.x_labels().to_vec(), induced_x, 1e-9)?,
        iterations,
        final_gap,
        tolerance: ba.tol,
        components,
    })
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::helpercap::{HelperMap, InputRule};

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
            Some(labels("t", 2)),
        )
        .unwrap()
    }

    fn spec_json() -> String {
        xor_channel().to_json_string()
    }

    #[test]
    fn json_round_trip_preserves_the_channel() {
        let ch = xor_channel();
        let back = validate_and_load(&ch.to_json_string()).unwrap();
        assert_eq!(ch, back);
    }

    #[test]
    fn load_rejects_row_sum_violation_naming_the_indices() {
        let bad = spec_json().replace("1.0", "0.999");
        match validate_and_load(&bad) {
            Err(Error::Validation(msg)) => {
                assert!(
                    msg.contains("(x=0, s=0)"),
                    "error must name the offending (x,s) row: {msg}"
                );
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn load_rejects_negative_entries() {
        let mut ch = xor_channel();
        ch.w[0][0][0] = -0.25;
        ch.w[0][0][1] = 1.25;
        let text = ch.to_json_string();
        match validate_and_load(&text) {
            Err(Error::Validation(msg)) => assert!(msg.contains("negative")),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn load_rejects_alphabet_mismatch() {
        let bad = spec_json().replace("\"y1\"", "\"y1\", \"y2\"");
        assert!(validate_and_load(&bad).is_err());
    }

    #[test]
    fn load_rejects_undersized_help_alphabet() {
        let bad = spec_json().replace("\"t0\",\n    \"t1\"", "\"t0\"");
        match validate_and_load(&bad) {
            Err(Error::Validation(msg)) => assert!(msg.contains("at least 2")),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn identity_helper_reduction_relabels_only() {
        let ch = xor_channel();
        let h = HelperMap::new(vec![0, 1], 2).unwrap();
        let meta = reduce_to_meta_state_channel(&ch, &h).unwrap();
        assert_eq!(meta.n_s(), 2);
        for s in 0..2 {
            assert!((meta.p_s().prob(s) - 0.5).abs() < 1e-15);
            for x in 0..2 {
                assert_eq!(meta.w_row(s, x), ch.w_row(s, x));
            }
        }
    }

    #[test]
    fn constant_helper_reduction_averages_states_and_flags_unreachable() {
        let ch = xor_channel();
        let h = HelperMap::new(vec![0, 0], 2).unwrap();
        let meta = reduce_to_meta_state_channel(&ch, &h).unwrap();
        assert_eq!(meta.p_s().prob(0), 1.0);
        assert_eq!(meta.p_s().prob(1), 0.0);
        assert_eq!(meta.unreachable_states(), vec![false, true]);
        // Reachable row: average of the two state rows = uniform output.
        for x in 0..2 {
            for y in 0..2 {
                assert!((meta.w_row(0, x)[y] - 0.5).abs() < 1e-15);
            }
        }
        // Placeholder row is uniform.
        assert_eq!(meta.w_row(1, 0), &[0.5, 0.5]);
    }

    #[test]
    fn meta_reduction_rows_stay_stochastic() {
        let ch = xor_channel();
        for table in [[0usize, 0], [0, 1], [1, 0], [1, 1]] {
            let h = HelperMap::new(table.to_vec(), 2).unwrap();
            let meta = reduce_to_meta_state_channel(&ch, &h).unwrap();
            let unreachable = meta.unreachable_states();
            for t in 0..meta.n_s() {
                if unreachable[t] {
                    continue;
                }
                for x in 0..meta.n_x() {
                    let mass: f64 = meta.w_row(t, x).iter().sum();
                    assert!((mass - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn super_channel_single_state_blind_strategy_averages_the_output_law() {
        let ch = xor_channel();
        // Help rule constant, input constant x0: row = Σ_s P(s) W(·|x0,s).
        let fam = vec![McStrategy {
            help_rule: HelperMap::new(vec![0, 0], 2).unwrap(),
            input_rule: InputRule::new(vec![0, 0]).unwrap(),
        }];
        let dmc = super_channel(&ch, &fam).unwrap();
        assert_eq!(dmc.n_in(), 1);
        assert_eq!(dmc.row(0), &[0.5, 0.5]);
    }

    #[test]
    fn super_channel_state_cancelling_strategy_is_noiseless() {
        let ch = xor_channel();
        // Helper reveals s; input x = s cancels it: y = 0 always.
        let fam = vec![McStrategy {
            help_rule: HelperMap::new(vec![0, 1], 2).unwrap(),
            input_rule: InputRule::new(vec![0, 1]).unwrap(),
        }];
        let dmc = super_channel(&ch, &fam).unwrap();
        assert_eq!(dmc.row(0), &[1.0, 0.0]);
    }

    #[test]
    fn super_channel_rows_match_brute_force_state_sum() {
        // Random-ish fixed channel; verify the row formula cell by cell.
        let w = vec![
            vec![vec![0.2, 0.5, 0.3], vec![0.7, 0.1, 0.2]],
            vec![vec![0.4, 0.4, 0.2], vec![0.1, 0.8, 0.1]],
            vec![vec![0.3, 0.3, 0.4], vec![0.25, 0.5, 0.25]],
        ];
        let p_s = Pmf::new(labels("s", 3), vec![0.5, 0.3, 0.2]).unwrap();
        let ch = Channel::new(labels("x", 2), labels("y", 3), labels("s", 3), p_s, w, None)
            .unwrap();
        let fam = vec![
            McStrategy {
                help_rule: HelperMap::new(vec![0, 1, 1], 2).unwrap(),
                input_rule: InputRule::new(vec![1, 0]).unwrap(),
            },
            McStrategy {
                help_rule: HelperMap::new(vec![1, 0, 1], 2).unwrap(),
                input_rule: InputRule::new(vec![0, 0]).unwrap(),
            },
        ];
        let dmc = super_channel(&ch, &fam).unwrap();
        for (u, strat) in fam.iter().enumerate() {
            for y in 0..3 {
                let mut expect = 0.0;
                for s in 0..3 {
                    let x = strat.input_rule.map(strat.help_rule.map(s));
                    expect += ch.p_s().prob(s) * ch.w_row(s, x)[y];
                }
                assert!((dmc.row(u)[y] - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sum_channel_capacity_matches_closed_forms() {
        assert!((sum_channel_capacity(&[1.0, 0.0]).unwrap() - 3f64.log2()).abs() < 1e-15);
        assert_eq!(sum_channel_capacity(&[0.0]).unwrap(), 0.0);
        assert!((sum_channel_capacity(&[1.0, 1.0]).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sum_channel_capacity_rejects_empty_and_negative() {
        assert!(matches!(
            sum_channel_capacity(&[]),
            Err(Error::EmptyInput(_))
        ));
        assert!(matches!(
            sum_channel_capacity(&[0.5, -0.1]),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn sum_channel_capacity_is_monotone() {
        let base = sum_channel_capacity(&[0.5, 0.25]).unwrap();
        assert!(sum_channel_capacity(&[0.6, 0.25]).unwrap() > base);
        assert!(sum_channel_capacity(&[0.5, 0.35]).unwrap() > base);
    }

    #[test]
    fn full_csi_capacity_of_input_blind_channel_is_zero() {
        // W(y|x,s) independent of x for every s.
        let w = vec![
            vec![vec![0.3, 0.7], vec![0.3, 0.7]],
            vec![vec![0.9, 0.1], vec![0.9, 0.1]],
        ];
        let ch = Channel::new(
            labels("x", 2),
            labels("y", 2),
            labels("s", 2),
            Pmf::uniform(labels("s", 2)).unwrap(),
            w,
            None,
        )
        .unwrap();
        let rep = full_csi_capacity(&ch, &BaConfig::default()).unwrap();
        assert!(rep.value_bits.abs() < 1e-9, "value = {}", rep.value_bits);
    }

    #[test]
    fn full_csi_capacity_of_state_cancellable_channel_is_one_bit() {
        // Y = X ⊕ S: each per-state channel is a bijection, capacity 1.
        let rep = full_csi_capacity(&xor_channel(), &BaConfig::default()).unwrap();
        assert!((rep.value_bits - 1.0).abs() < 1e-9);
        assert_eq!(rep.components.len(), 2);
        for (_, c) in &rep.components {
            assert!((c - 1.0).abs() < 1e-9);
        }
    }
}
