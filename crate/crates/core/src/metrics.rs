//! External validation indices: ARI, AMI (max normalisation) and FMI.
//!
//! Labels of any ordered type are accepted; noise (`-1`) is treated as an
//! ordinary cluster id. Pair counts use 128-bit integers so the ARI ratio is
//! formed from exact integers before the final division.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Co-occurrence counts of true classes (rows) and predicted clusters (columns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    pub counts: Vec<Vec<u64>>,
    pub row_sums: Vec<u64>,
    pub col_sums: Vec<u64>,
    pub n: u64,
}

impl ContingencyTable {
    pub fn new<A: Copy + Ord, B: Copy + Ord>(truth: &[A], pred: &[B]) -> Result<Self> {
        if truth.len() != pred.len() {
            return Err(Error::LengthMismatch {
                left: truth.len(),
                right: pred.len(),
            });
        }
        if truth.len() < 2 {
            return Err(Error::TooFewPoints(truth.len()));
        }
        let rows = dense_ids(truth);
        let cols = dense_ids(pred);
        let r = rows.iter().max().map_or(0, |m| m + 1);
        let c = cols.iter().max().map_or(0, |m| m + 1);
        let mut counts = vec![vec![0u64; c]; r];
        for (&i, &j) in rows.iter().zip(&cols) {
            counts[i][j] += 1;
        }
        let row_sums = counts.iter().map(|row| row.iter().sum()).collect();
        let col_sums = (0..c).map(|j| counts.iter().map(|row| row[j]).sum()).collect();
        Ok(Self {
            counts,
            row_sums,
            col_sums,
            n: truth.len() as u64,
        })
    }

    /// True when the two partitions agree up to renaming.
    pub fn is_bijective(&self) -> bool {
        self.row_sums.len() == self.col_sums.len()
            && self
                .counts
                .iter()
                .all(|row| row.iter().filter(|&&v| v > 0).count() == 1)
    }

    fn pair_sums(&self) -> (u128, u128, u128, u128) {
        let index = self.counts.iter().flatten().map(|&v| comb2(v)).sum();
        let a = self.row_sums.iter().map(|&v| comb2(v)).sum();
        let b = self.col_sums.iter().map(|&v| comb2(v)).sum();
        (index, a, b, comb2(self.n))
    }
}

fn dense_ids<T: Copy + Ord>(labels: &[T]) -> Vec<usize> {
    let mut map: BTreeMap<T, usize> = BTreeMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect()
}

#[inline]
fn comb2(v: u64) -> u128 {
    let v = v as u128;
    v * v.saturating_sub(1) / 2
}

/// Adjusted Rand Index in `[-1, 1]`.
pub fn ari<A: Copy + Ord, B: Copy + Ord>(truth: &[A], pred: &[B]) -> Result<f64> {
    let t = ContingencyTable::new(truth, pred)?;
    Ok(ari_from_table(&t))
}

pub fn ari_from_table(t: &ContingencyTable) -> f64 {
    let (index, a, b, total) = t.pair_sums();
    // (index - a*b/total) / ((a+b)/2 - a*b/total), scaled by 2*total.
    let num = 2 * total as i128 * index as i128 - 2 * (a * b) as i128;
    let den = total as i128 * (a + b) as i128 - 2 * (a * b) as i128;
    if den == 0 {
        return if t.is_bijective() { 1.0 } else { 0.0 };
    }
    num as f64 / den as f64
}

/// Fowlkes-Mallows index: geometric mean of pair precision and recall.
pub fn fmi<A: Copy + Ord, B: Copy + Ord>(truth: &[A], pred: &[B]) -> Result<f64> {
    let t = ContingencyTable::new(truth, pred)?;
    let (tp, true_pairs, pred_pairs, _) = t.pair_sums();
    if tp == 0 || true_pairs == 0 || pred_pairs == 0 {
        return Ok(0.0);
    }
    Ok(tp as f64 / ((true_pairs as f64) * (pred_pairs as f64)).sqrt())
}

fn entropy(sums: &[u64], n: f64) -> f64 {
    sums.iter()
        .filter(|&&v| v > 0)
        .map(|&v| {
            let p = v as f64 / n;
            -p * p.ln()
        })
        .sum()
}

fn mutual_information(t: &ContingencyTable) -> f64 {
    let n = t.n as f64;
    let mut mi = 0.0;
    for (i, row) in t.counts.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let v = v as f64;
            mi += v / n * (n * v / (t.row_sums[i] as f64 * t.col_sums[j] as f64)).ln();
        }
    }
    mi
}

/// `E[MI]` under the hypergeometric model with the table's marginals.
pub fn expected_mutual_information(t: &ContingencyTable) -> f64 {
    let n = t.n as usize;
    let mut ln_fact = vec![0.0f64; n + 1];
    for k in 1..=n {
        ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
    }
    let nf = n as f64;
    let mut emi = 0.0;
    for &a in &t.row_sums {
        let a = a as usize;
        for &b in &t.col_sums {
            let b = b as usize;
            let lo = (a + b).saturating_sub(n).max(1);
            let hi = a.min(b);
            let fixed = ln_fact[a] + ln_fact[b] + ln_fact[n - a] + ln_fact[n - b] - ln_fact[n];
            for k in lo..=hi {
                let kf = k as f64;
                let term = kf / nf * (nf * kf / (a as f64 * b as f64)).ln();
                let ln_p = fixed - ln_fact[k] - ln_fact[a - k] - ln_fact[b - k] - ln_fact[n + k - a - b];
                emi += term * ln_p.exp();
            }
        }
    }
    emi
}

/// Adjusted Mutual Information with `max(H(U), H(V))` normalisation and
/// natural logarithms.
pub fn ami<A: Copy + Ord, B: Copy + Ord>(truth: &[A], pred: &[B]) -> Result<f64> {
    let t = ContingencyTable::new(truth, pred)?;
    Ok(ami_from_table(&t))
}

pub fn ami_from_table(t: &ContingencyTable) -> f64 {
    if t.is_bijective() {
        return 1.0;
    }
    let n = t.n as f64;
    let mi = mutual_information(t);
    let emi = expected_mutual_information(t);
    let h = entropy(&t.row_sums, n).max(entropy(&t.col_sums, n));
    let den = h - emi;
    if den == 0.0 {
        return 0.0;
    }
    (mi - emi) / den
}

/// The three indices at once.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Scores {
    pub ari: f64,
    pub ami: f64,
    pub fmi: f64,
}

pub fn score<A: Copy + Ord, B: Copy + Ord>(truth: &[A], pred: &[B]) -> Result<Scores> {
    let t = ContingencyTable::new(truth, pred)?;
    let (tp, true_pairs, pred_pairs, _) = t.pair_sums();
    let fmi = if tp == 0 || true_pairs == 0 || pred_pairs == 0 {
        0.0
    } else {
        tp as f64 / ((true_pairs as f64) * (pred_pairs as f64)).sqrt()
    };
    Ok(Scores {
        ari: ari_from_table(&t),
        ami: ami_from_table(&t),
        fmi,
    })
}
