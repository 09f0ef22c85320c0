//! Sorted neighbour orders and the natural nearest neighbourhood (NNN) search.
//!
//! At round `r` every point adds its `r`-th nearest neighbour to its
//! k-nearest set and registers itself in that neighbour's reverse set. The
//! NNN of a point is the intersection of the two, i.e. the set of mutual
//! `r`-nearest neighbours. The exact search stops at the first round where no
//! NNN set is empty (the natural eigenvalue). The logarithmic search also
//! counts rounds in which the set of empty-NNN points did not change and stops
//! once that count reaches `ln r + ln n`, leaving isolated points with an
//! empty NNN.

use serde::{Deserialize, Serialize};

use crate::dataset::DistanceMatrix;
use crate::error::{Error, Result};

/// Per point, every other point sorted by ascending distance, ties by index.
#[derive(Debug, Clone)]
pub struct NeighborOrder {
    n: usize,
    /// `n` rows of `n - 1` indices.
    order: Vec<u32>,
    /// `rank[i * n + j]` is the 1-based position of `j` in row `i` (0 on the diagonal).
    rank: Vec<u32>,
}

impl NeighborOrder {
    pub fn build(dm: &DistanceMatrix) -> Self {
        use rayon::prelude::*;
        let n = dm.len();
        let w = n - 1;
        let mut order = vec![0u32; n * w];
        order.par_chunks_mut(w).enumerate().for_each(|(i, row)| {
            let d = dm.row(i);
            let mut idx: Vec<u32> = (0..n as u32).filter(|&j| j as usize != i).collect();
            idx.sort_by(|&a, &b| d[a as usize].total_cmp(&d[b as usize]).then(a.cmp(&b)));
            row.copy_from_slice(&idx);
        });
        let mut rank = vec![0u32; n * n];
        rank.par_chunks_mut(n).enumerate().for_each(|(i, r)| {
            for (pos, &j) in order[i * w..(i + 1) * w].iter().enumerate() {
                r[j as usize] = pos as u32 + 1;
            }
        });
        Self { n, order, rank }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn row(&self, i: usize) -> &[u32] {
        let w = self.n - 1;
        &self.order[i * w..(i + 1) * w]
    }

    /// `nn_r(i)`: the `r`-th nearest neighbour (1-based).
    pub fn kth(&self, i: usize, r: usize) -> usize {
        self.row(i)[r - 1] as usize
    }

    /// Position of `j` in the neighbour order of `i` (1-based); 0 when `i == j`.
    pub fn rank(&self, i: usize, j: usize) -> usize {
        self.rank[i * self.n + j] as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NnnMode {
    #[default]
    Exact,
    #[serde(alias = "log")]
    Logarithmic,
}

impl std::str::FromStr for NnnMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::Exact),
            "log" | "logarithmic" => Ok(Self::Logarithmic),
            other => Err(Error::InvalidParameter(format!("unknown NNN mode {other:?}"))),
        }
    }
}

/// Result of the NNN search.
#[derive(Debug, Clone, Serialize)]
pub struct NeighborhoodIndex {
    pub mode: NnnMode,
    /// Natural (or logarithmic natural) eigenvalue.
    pub lambda: usize,
    /// `NN_lambda(i)` in neighbour order.
    pub nn: Vec<Vec<usize>>,
    /// `RNN_lambda(i)`, ascending index.
    pub rnn: Vec<Vec<usize>>,
    /// `NNN(i) = NN_lambda(i) ∩ RNN_lambda(i)` in neighbour order.
    pub nnn: Vec<Vec<usize>>,
    /// Points whose NNN is empty (always empty in exact mode).
    pub empty_set_members: Vec<usize>,
    /// `|NNN_r^0(X)|` for `r = 1..=lambda`.
    pub empty_history: Vec<usize>,
}

impl NeighborhoodIndex {
    pub fn search(order: &NeighborOrder, mode: NnnMode) -> Self {
        let n = order.len();
        let mut nnn: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut empty = n;
        let mut unchanged_rounds = 0usize;
        let mut history = Vec::new();
        let ln_n = (n as f64).ln();
        let mut r = 0;

        while r < n - 1 {
            r += 1;
            for i in 0..n {
                let j = order.kth(i, r);
                // i and j are mutual once each sits within the other's first r
                // neighbours; a pair that closes in the same round for both
                // sides is recorded once, from the smaller index.
                let back = order.rank(j, i);
                if back < r || (back == r && i < j) {
                    if nnn[i].is_empty() {
                        empty -= 1;
                    }
                    if nnn[j].is_empty() {
                        empty -= 1;
                    }
                    nnn[i].push(j);
                    nnn[j].push(i);
                }
            }
            let prev = history.last().copied().unwrap_or(n);
            history.push(empty);
            // The empty set only shrinks, so equal size means equal set.
            if empty == prev {
                unchanged_rounds += 1;
            }
            if empty == 0 {
                break;
            }
            if mode == NnnMode::Logarithmic && unchanged_rounds as f64 >= (r as f64).ln() + ln_n {
                break;
            }
        }

        let lambda = r;
        for (i, set) in nnn.iter_mut().enumerate() {
            set.sort_by_key(|&j| order.rank(i, j));
        }
        let nn: Vec<Vec<usize>> = (0..n)
            .map(|i| order.row(i)[..lambda].iter().map(|&j| j as usize).collect())
            .collect();
        let mut rnn: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, set) in nn.iter().enumerate() {
            for &j in set {
                rnn[j].push(i);
            }
        }
        let empty_set_members = (0..n).filter(|&i| nnn[i].is_empty()).collect();

        Self {
            mode,
            lambda,
            nn,
            rnn,
            nnn,
            empty_set_members,
            empty_history: history,
        }
    }

    pub fn len(&self) -> usize {
        self.nnn.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nnn.is_empty()
    }

    pub fn is_outlier(&self, i: usize) -> Result<bool> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange { index: i, n: self.len() });
        }
        Ok(self.empty_set_members.binary_search(&i).is_ok())
    }

    /// JSON debug dump: eigenvalue, NNN sets and the empty-set history.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Dump<'a> {
            mode: NnnMode,
            lambda: usize,
            nnn: &'a [Vec<usize>],
            empty_set_members: &'a [usize],
            empty_history: &'a [usize],
        }
        serde_json::to_string_pretty(&Dump {
            mode: self.mode,
            lambda: self.lambda,
            nnn: &self.nnn,
            empty_set_members: &self.empty_set_members,
            empty_history: &self.empty_history,
        })
        .expect("plain data serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;

    fn line(xs: &[f64]) -> DistanceMatrix {
        Dataset::from_rows("t", xs.iter().map(|&x| vec![x]).collect(), None)
            .unwrap()
            .pairwise_distances()
    }

    #[test]
    fn order_on_a_line() {
        let order = NeighborOrder::build(&line(&[0.0, 1.0, 3.0]));
        assert_eq!(order.row(0), &[1, 2]);
        assert_eq!(order.row(1), &[0, 2]);
        assert_eq!(order.row(2), &[1, 0]);
        assert_eq!(order.rank(2, 0), 2);
    }

    #[test]
    fn ties_go_to_lower_index() {
        let order = NeighborOrder::build(&line(&[0.0, -1.0, 1.0]));
        assert_eq!(order.row(0), &[1, 2]);
    }

    #[test]
    fn three_points_need_two_rounds() {
        let idx = NeighborhoodIndex::search(&NeighborOrder::build(&line(&[0.0, 1.0, 3.0])), NnnMode::Exact);
        assert_eq!(idx.lambda, 2);
        assert_eq!(idx.empty_history, vec![1, 0]);
        assert_eq!(idx.nnn[0], vec![1, 2]);
        assert_eq!(idx.nnn[1], vec![0, 2]);
        assert_eq!(idx.nnn[2], vec![1, 0]);
    }

    #[test]
    fn two_points() {
        let idx = NeighborhoodIndex::search(&NeighborOrder::build(&line(&[0.0, 4.0])), NnnMode::Logarithmic);
        assert_eq!(idx.lambda, 1);
        assert_eq!(idx.nnn, vec![vec![1], vec![0]]);
        assert!(idx.empty_set_members.is_empty());
    }

    #[test]
    fn duplicates_are_first_neighbours() {
        let order = NeighborOrder::build(&line(&[5.0, 0.0, 5.0, 9.0]));
        assert_eq!(order.kth(0, 1), 2);
        assert_eq!(order.kth(2, 1), 0);
    }

    #[test]
    fn outlier_detection() {
        // 30 points on a 6x5 grid with spacing 0.1, plus one point 100 away.
        let mut rows: Vec<Vec<f64>> = (0..30).map(|k| vec![(k % 6) as f64 * 0.1, (k / 6) as f64 * 0.1]).collect();
        rows.push(vec![100.0, 100.0]);
        let dm = Dataset::from_rows("blob", rows, None).unwrap().pairwise_distances();
        let order = NeighborOrder::build(&dm);
        let log = NeighborhoodIndex::search(&order, NnnMode::Logarithmic);
        let exact = NeighborhoodIndex::search(&order, NnnMode::Exact);
        assert_eq!(log.empty_set_members, vec![30]);
        assert!(log.is_outlier(30).unwrap());
        assert!(!log.is_outlier(0).unwrap());
        assert!(log.lambda < exact.lambda);
        assert_eq!(exact.lambda, 30);
        assert!(!exact.is_outlier(30).unwrap());
        assert!(exact.is_outlier(31).is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("log".parse::<NnnMode>().unwrap(), NnnMode::Logarithmic);
        assert_eq!("exact".parse::<NnnMode>().unwrap(), NnnMode::Exact);
        assert!("fuzzy".parse::<NnnMode>().is_err());
    }
}
