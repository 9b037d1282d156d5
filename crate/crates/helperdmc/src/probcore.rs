//! Exact finite-alphabet probability engine.
//!
//! Everything downstream — capacity evaluators, the block-Markov rate
//! formula, the duality bounds — reduces to arithmetic on three value types:
//! [`Pmf`] (a distribution over a labeled alphabet), [`CondPmf`] (one row per
//! conditioning symbol), and [`JointTable`] (a dense multi-axis joint).
//! All quantities are in bits.
//!
//! Conventions:
//! - `0·log 0 := 0` in entropy sums; KL with `p(a) > 0, q(a) = 0` is the
//!   distinct error [`Error::InfiniteDivergence`], never a float infinity.
//! - Input distributions must sum to 1 within `1e-12`; derived joints get
//!   `1e-10` (dense products amplify rounding).
//! - Mutual informations are clamped to 0 when float cancellation leaves
//!   them within `1e-10` below zero.
//! - Typicality is robust typicality: every symbol frequency within a
//!   multiplicative `eps` of its probability, and frequency zero wherever
//!   the probability is zero.

use crate::error::{Error, Result};

/// Tolerance for input probability vectors summing to 1.
pub const INPUT_MASS_TOL: f64 = 1e-12;
/// Tolerance for derived joint tables summing to 1.
pub const JOINT_MASS_TOL: f64 = 1e-10;
/// Negative slack absorbed when clamping mutual informations at zero.
pub const MI_CLAMP: f64 = 1e-10;
/// Threshold under which a conditional mutual information certifies a
/// Markov chain.
pub const MARKOV_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Pmf

/// A probability mass function over an ordered, labeled alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    labels: Vec<String>,
    probs: Vec<f64>,
}

impl Pmf {
    /// Build from labels and probabilities, enforcing the input tolerance.
    pub fn new(labels: Vec<String>, probs: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(labels, probs, INPUT_MASS_TOL)
    }

    /// Build with an explicit mass tolerance (derived distributions pass
    /// [`JOINT_MASS_TOL`]).
    pub fn with_tolerance(labels: Vec<String>, probs: Vec<f64>, tol: f64) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyInput("pmf alphabet".into()));
        }
        if labels.len() != probs.len() {
            return Err(Error::Validation(format!(
                "pmf has {} labels but {} probabilities",
                labels.len(),
                probs.len()
            )));
        }
        check_unique(&labels, "pmf alphabet")?;
        for (i, &p) in probs.iter().enumerate() {
            if !(p >= 0.0) {
                return Err(Error::Validation(format!(
                    "pmf entry {} ('{}') is negative or NaN: {}",
                    i, labels[i], p
                )));
            }
        }
        let mass: f64 = probs.iter().sum();
        if (mass - 1.0).abs() > tol {
            return Err(Error::Validation(format!(
                "pmf mass {mass} deviates from 1 by more than {tol}"
            )));
        }
        Ok(Pmf { labels, probs })
    }

    /// Uniform distribution over the given labels.
    pub fn uniform(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyInput("pmf alphabet".into()));
        }
        let p = 1.0 / n as f64;
        Pmf::new(labels, vec![p; n])
    }

    /// Point mass on the symbol at `index`.
    pub fn point_mass(labels: Vec<String>, index: usize) -> Result<Self> {
        let n = labels.len();
        if index >= n {
            return Err(Error::Validation(format!(
                "point mass index {index} out of range for alphabet of size {n}"
            )));
        }
        let mut probs = vec![0.0; n];
        probs[index] = 1.0;
        Pmf::new(labels, probs)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Shannon entropy of a probability vector, in bits.
pub fn entropy_of_probs(probs: &[f64]) -> f64 {
    let mut h = 0.0;
    for &p in probs {
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    // Guard against -0.0 from a point mass.
    if h == 0.0 {
        0.0
    } else {
        h
    }
}

/// Shannon entropy H(p) in bits; lies in [0, log2 |alphabet|].
pub fn entropy(p: &Pmf) -> f64 {
    entropy_of_probs(p.probs())
}

/// KL divergence D(p || q) in bits over a shared alphabet.
///
/// Errors with [`Error::InfiniteDivergence`] when `p` has mass where `q`
/// does not, rather than returning a float infinity.
pub fn kl_divergence(p: &Pmf, q: &Pmf) -> Result<f64> {
    if p.labels() != q.labels() {
        return Err(Error::Validation(
            "kl divergence requires identical alphabets in identical order".into(),
        ));
    }
    kl_of_probs_labeled(p.probs(), q.probs(), p.labels())
}

fn kl_of_probs_labeled(p: &[f64], q: &[f64], labels: &[String]) -> Result<f64> {
    let mut d = 0.0;
    for i in 0..p.len() {
        if p[i] > 0.0 {
            if q[i] <= 0.0 {
                return Err(Error::InfiniteDivergence {
                    symbol: labels[i].clone(),
                    p: p[i],
                });
            }
            d += p[i] * (p[i] / q[i]).log2();
        }
    }
    Ok(d.max(0.0))
}

/// KL divergence on raw probability vectors (caller guarantees alignment);
/// the error message uses the flat index as the symbol name.
pub fn kl_of_probs(p: &[f64], q: &[f64]) -> Result<f64> {
    let mut d = 0.0;
    for i in 0..p.len() {
        if p[i] > 0.0 {
            if q[i] <= 0.0 {
                return Err(Error::InfiniteDivergence {
                    symbol: i.to_string(),
                    p: p[i],
                });
            }
            d += p[i] * (p[i] / q[i]).log2();
        }
    }
    Ok(d.max(0.0))
}

// ---------------------------------------------------------------------------
// CondPmf

/// A conditional PMF: one probability row over `to` per symbol of `from`.
#[derive(Debug, Clone, PartialEq)]
pub struct CondPmf {
    from_labels: Vec<String>,
    to_labels: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl CondPmf {
    pub fn new(
        from_labels: Vec<String>,
        to_labels: Vec<String>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if from_labels.is_empty() || to_labels.is_empty() {
            return Err(Error::EmptyInput("conditional pmf alphabet".into()));
        }
        check_unique(&from_labels, "conditional pmf source alphabet")?;
        check_unique(&to_labels, "conditional pmf target alphabet")?;
        if rows.len() != from_labels.len() {
            return Err(Error::Validation(format!(
                "conditional pmf has {} rows for {} source symbols",
                rows.len(),
                from_labels.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != to_labels.len() {
                return Err(Error::Validation(format!(
                    "row {i} has {} entries for {} target symbols",
                    row.len(),
                    to_labels.len()
                )));
            }
            for (j, &p) in row.iter().enumerate() {
                if !(p >= 0.0) {
                    return Err(Error::Validation(format!(
                        "conditional pmf entry ({i},{j}) is negative or NaN: {p}"
                    )));
                }
            }
            let mass: f64 = row.iter().sum();
            if (mass - 1.0).abs() > INPUT_MASS_TOL {
                return Err(Error::Validation(format!(
                    "conditional pmf row {i} has mass {mass}"
                )));
            }
        }
        Ok(CondPmf {
            from_labels,
            to_labels,
            rows,
        })
    }

    /// Deterministic conditional: row `i` is a point mass on `map[i]`.
    pub fn deterministic(
        from_labels: Vec<String>,
        to_labels: Vec<String>,
        map: &[usize],
    ) -> Result<Self> {
        if map.len() != from_labels.len() {
            return Err(Error::Validation(format!(
                "deterministic map has {} entries for {} source symbols",
                map.len(),
                from_labels.len()
            )));
        }
        let n_to = to_labels.len();
        let mut rows = Vec::with_capacity(map.len());
        for (i, &t) in map.iter().enumerate() {
            if t >= n_to {
                return Err(Error::Validation(format!(
                    "deterministic map sends source {i} to out-of-range target {t}"
                )));
            }
            let mut row = vec![0.0; n_to];
            row[t] = 1.0;
            rows.push(row);
        }
        CondPmf::new(from_labels, to_labels, rows)
    }

    pub fn is_deterministic(&self) -> bool {
        self.rows
            .iter()
            .all(|row| row.iter().all(|&p| p == 0.0 || p == 1.0))
    }

    pub fn from_labels(&self) -> &[String] {
        &self.from_labels
    }

    pub fn to_labels(&self) -> &[String] {
        &self.to_labels
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn n_from(&self) -> usize {
        self.from_labels.len()
    }

    pub fn n_to(&self) -> usize {
        self.to_labels.len()
    }
}

// ---------------------------------------------------------------------------
// JointTable

/// One named axis of a joint table.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub labels: Vec<String>,
}

/// A dense joint distribution over named axes, stored row-major with the
/// last axis varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    axes: Vec<Axis>,
    probs: Vec<f64>,
}

impl JointTable {
    pub fn new(axes: Vec<(String, Vec<String>)>, probs: Vec<f64>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::EmptyInput("joint table axes".into()));
        }
        let names: Vec<String> = axes.iter().map(|(n, _)| n.clone()).collect();
        check_unique(&names, "joint table axis names")?;
        let mut size = 1usize;
        for (name, labels) in &axes {
            if labels.is_empty() {
                return Err(Error::Validation(format!("axis '{name}' has no labels")));
            }
            check_unique(labels, &format!("axis '{name}' labels"))?;
            size = size.checked_mul(labels.len()).ok_or_else(|| {
                Error::Validation("joint table size overflows usize".into())
            })?;
        }
        if probs.len() != size {
            return Err(Error::Validation(format!(
                "joint table has {} entries; axes require {}",
                probs.len(),
                size
            )));
        }
        for (i, &p) in probs.iter().enumerate() {
            if !(p >= 0.0) {
                return Err(Error::Validation(format!(
                    "joint table entry {i} is negative or NaN: {p}"
                )));
            }
        }
        let mass: f64 = probs.iter().sum();
        if (mass - 1.0).abs() > JOINT_MASS_TOL {
            return Err(Error::Validation(format!(
                "joint table mass {mass} deviates from 1 by more than {JOINT_MASS_TOL}"
            )));
        }
        Ok(JointTable {
            axes: axes
                .into_iter()
                .map(|(name, labels)| Axis { name, labels })
                .collect(),
            probs,
        })
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn dims(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.labels.len()).collect()
    }

    fn axis_index(&self, name: &str) -> Result<usize> {
        self.axes
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::Axis(format!("unknown axis '{name}'")))
    }

    fn resolve_group(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(names.len());
        for &n in names {
            let i = self.axis_index(n)?;
            if out.contains(&i) {
                return Err(Error::Axis(format!("axis '{n}' repeated within a group")));
            }
            out.push(i);
        }
        Ok(out)
    }

    /// Row-major strides (last axis fastest).
    fn strides(&self) -> Vec<usize> {
        let dims = self.dims();
        let mut s = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * dims[i + 1];
        }
        s
    }

    /// Marginal probabilities over the axes `keep` (in the order given).
    fn marginal_probs(&self, keep: &[usize]) -> Vec<f64> {
        let dims = self.dims();
        let strides = self.strides();
        let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
        let out_size: usize = kept_dims.iter().product::<usize>().max(1);
        let mut out = vec![0.0; out_size];
        // Output strides over the kept axes, in the order given.
        let mut out_strides = vec![1usize; keep.len()];
        for i in (0..keep.len().saturating_sub(1)).rev() {
            out_strides[i] = out_strides[i + 1] * kept_dims[i + 1];
        }
        for (flat, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let mut o = 0usize;
            for (pos, &k) in keep.iter().enumerate() {
                let idx = (flat / strides[k]) % dims[k];
                o += idx * out_strides[pos];
            }
            out[o] += p;
        }
        out
    }

    /// Marginal joint table over the named axes, in the order given.
    pub fn marginal(&self, names: &[&str]) -> Result<JointTable> {
        let keep = self.resolve_group(names)?;
        if keep.is_empty() {
            return Err(Error::EmptyInput("marginal axis list".into()));
        }
        let probs = self.marginal_probs(&keep);
        let axes: Vec<(String, Vec<String>)> = keep
            .iter()
            .map(|&k| (self.axes[k].name.clone(), self.axes[k].labels.clone()))
            .collect();
        // Derived table: use the looser joint tolerance via direct build.
        Ok(JointTable {
            axes: axes
                .into_iter()
                .map(|(name, labels)| Axis { name, labels })
                .collect(),
            probs,
        })
    }

    /// Entropy of the marginal over the named group, in bits. An empty group
    /// has entropy 0.
    pub fn group_entropy(&self, names: &[&str]) -> Result<f64> {
        if names.is_empty() {
            return Ok(0.0);
        }
        let keep = self.resolve_group(names)?;
        Ok(entropy_of_probs(&self.marginal_probs(&keep)))
    }

    /// Mutual information I(A;B) in bits between two disjoint axis groups;
    /// remaining axes are marginalized out. Clamped to 0 within [`MI_CLAMP`].
    pub fn mutual_information(&self, group_a: &[&str], group_b: &[&str]) -> Result<f64> {
        self.conditional_mutual_information(group_a, group_b, &[])
    }

    /// Conditional mutual information I(A;B|C) = H(A,C) + H(B,C) − H(A,B,C)
    /// − H(C), groups pairwise disjoint; clamped to 0 within [`MI_CLAMP`].
    pub fn conditional_mutual_information(
        &self,
        group_a: &[&str],
        group_b: &[&str],
        group_c: &[&str],
    ) -> Result<f64> {
        if group_a.is_empty() || group_b.is_empty() {
            return Err(Error::Axis("mutual information groups must be nonempty".into()));
        }
        let a = self.resolve_group(group_a)?;
        let b = self.resolve_group(group_b)?;
        let c = self.resolve_group(group_c)?;
        for &i in &a {
            if b.contains(&i) || c.contains(&i) {
                return Err(Error::Axis(format!(
                    "axis '{}' appears in more than one group",
                    self.axes[i].name
                )));
            }
        }
        for &i in &b {
            if c.contains(&i) {
                return Err(Error::Axis(format!(
                    "axis '{}' appears in more than one group",
                    self.axes[i].name
                )));
            }
        }
        let h = |ids: &[usize]| -> f64 {
            if ids.is_empty() {
                0.0
            } else {
                entropy_of_probs(&self.marginal_probs(ids))
            }
        };
        let ac: Vec<usize> = a.iter().chain(c.iter()).copied().collect();
        let bc: Vec<usize> = b.iter().chain(c.iter()).copied().collect();
        let abc: Vec<usize> = a.iter().chain(b.iter()).chain(c.iter()).copied().collect();
        let v = h(&ac) + h(&bc) - h(&abc) - h(&c);
        Ok(v.max(0.0))
    }

    /// True iff A — B — C forms a Markov chain: I(A;C|B) ≤ [`MARKOV_TOL`].
    pub fn check_markov(&self, group_a: &[&str], group_b: &[&str], group_c: &[&str]) -> Result<bool> {
        let i = self.conditional_mutual_information(group_a, group_c, group_b)?;
        Ok(i <= MARKOV_TOL)
    }
}

// ---------------------------------------------------------------------------
// Typicality

/// Robust typicality of a single sequence (symbol indices into `p`'s
/// alphabet): every symbol frequency within `eps·p(a)` of `p(a)`, and
/// frequency 0 wherever `p(a) = 0`.
pub fn is_typical(seq: &[usize], p: &Pmf, eps: f64) -> Result<bool> {
    if seq.is_empty() {
        return Err(Error::EmptyInput("typicality check on empty sequence".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::Validation(format!("eps must be positive, got {eps}")));
    }
    let mut counts = vec![0u64; p.len()];
    for &a in seq {
        if a >= p.len() {
            return Err(Error::Validation(format!(
                "sequence symbol index {a} out of range for alphabet of size {}",
                p.len()
            )));
        }
        counts[a] += 1;
    }
    Ok(counts_typical(&counts, p.probs(), seq.len() as u64, eps))
}

/// Joint robust typicality of aligned sequences against a joint table.
/// `seqs[k][i]` is the index, on axis `k`'s alphabet, of the i-th symbol.
pub fn is_jointly_typical(seqs: &[&[usize]], j: &JointTable, eps: f64) -> Result<bool> {
    if seqs.len() != j.axes().len() {
        return Err(Error::Axis(format!(
            "{} sequences supplied for {} axes",
            seqs.len(),
            j.axes().len()
        )));
    }
    if !(eps > 0.0) {
        return Err(Error::Validation(format!("eps must be positive, got {eps}")));
    }
    let n = seqs.first().map(|s| s.len()).unwrap_or(0);
    if n == 0 {
        return Err(Error::EmptyInput("typicality check on empty sequence".into()));
    }
    for (k, s) in seqs.iter().enumerate() {
        if s.len() != n {
            return Err(Error::Validation(format!(
                "sequence for axis '{}' has length {} (expected {n})",
                j.axes()[k].name,
                s.len()
            )));
        }
    }
    let dims = j.dims();
    let strides = j.strides();
    let mut counts = vec![0u64; j.probs().len()];
    for i in 0..n {
        let mut cell = 0usize;
        for (k, s) in seqs.iter().enumerate() {
            let idx = s[i];
            if idx >= dims[k] {
                return Err(Error::Validation(format!(
                    "axis '{}' symbol index {idx} out of range ({} labels)",
                    j.axes()[k].name,
                    dims[k]
                )));
            }
            cell += idx * strides[k];
        }
        counts[cell] += 1;
    }
    Ok(counts_typical(&counts, j.probs(), n as u64, eps))
}

/// Shared frequency test: |count/n − p| ≤ eps·p per cell, count = 0 on p = 0.
pub fn counts_typical(counts: &[u64], probs: &[f64], n: u64, eps: f64) -> bool {
    let nf = n as f64;
    for (i, &p) in probs.iter().enumerate() {
        let freq = counts[i] as f64 / nf;
        if p == 0.0 {
            if counts[i] != 0 {
                return false;
            }
        } else if (freq - p).abs() > eps * p {
            return false;
        }
    }
    true
}

fn check_unique(labels: &[String], what: &str) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::Validation(format!("duplicate label '{l}' in {what}")));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
