use std::io::Write;

use serde::{Deserialize, Serialize};

/// Label given to points that belong to no cluster.
pub const NOISE: i32 = -1;

/// A hard partition (plus noise) produced by any of the algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ClusterAssignment {
    /// Cluster id per point, or [`NOISE`].
    pub labels: Vec<i32>,
    /// Seeds in the order they were used (patient zeros, DPC centres).
    pub centers_used: Vec<usize>,
    /// Points checked during propagation but never infected.
    pub immune_at_end: Vec<usize>,
    /// Points labelled by the final neighbourhood-vote step.
    pub fallback_assigned: Vec<usize>,
    /// Points infected per propagation round.
    pub round_sizes: Vec<usize>,
}

impl ClusterAssignment {
    pub fn from_labels(labels: Vec<i32>) -> Self {
        Self {
            labels,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn noise_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l == NOISE).count()
    }

    /// Distinct non-noise labels.
    pub fn cluster_count(&self) -> usize {
        let mut seen: Vec<i32> = self.labels.iter().copied().filter(|&l| l != NOISE).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// `index,label` rows with a header.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "index,label")?;
        for (i, l) in self.labels.iter().enumerate() {
            writeln!(w, "{i},{l}")?;
        }
        Ok(())
    }

    /// Reads the `index,label` format written by [`write_csv`](Self::write_csv).
    pub fn read_csv(text: &str) -> Result<Self, String> {
        let mut labels = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (k == 0 && line.starts_with("index")) {
                continue;
            }
            let (idx, lab) = line
                .split_once(',')
                .ok_or_else(|| format!("line {}: expected index,label", k + 1))?;
            let idx: usize = idx.trim().parse().map_err(|_| format!("line {}: bad index", k + 1))?;
            if idx != labels.len() {
                return Err(format!("line {}: index {idx} out of sequence", k + 1));
            }
            labels.push(lab.trim().parse().map_err(|_| format!("line {}: bad label", k + 1))?);
        }
        Ok(Self::from_labels(labels))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let a = ClusterAssignment::from_labels(vec![0, 0, NOISE, 2]);
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("index,label\n0,0\n"));
        assert_eq!(ClusterAssignment::read_csv(&text).unwrap().labels, a.labels);
        assert_eq!(a.cluster_count(), 2);
        assert_eq!(a.noise_count(), 1);
    }

    #[test]
    fn rejects_gaps() {
        assert!(ClusterAssignment::read_csv("index,label\n0,1\n2,1\n").is_err());
    }
}
