//! Probabilistic propagation over natural nearest neighbourhoods.
//!
//! Clusters grow one round at a time. Each round starts from the densest
//! centre that is still unlabelled and not immune (the patient zero), which is
//! labelled unconditionally. Its NNN members are queued; every dequeued
//! candidate `y` is checked exactly once and infected with probability
//!
//! ```text
//! p_y = min(1, g * C * (p'_y + p''_y))
//! ```
//!
//! where `p'_y` is the ascending density rank of `y` among the points already
//! infected this round (with `y` included) divided by the size of that list,
//! `p''_y` is the same rank among `y` and the still-unchecked queued
//! candidates, and `g` is `boost_factor` for the first `boost_checks` checks
//! of the round and 1 afterwards. An infected point queues its own NNN; a
//! point that fails its check is immune for the rest of the run. When no
//! usable centre remains, unlabelled points take the cluster with the largest
//! density sum among their labelled NNN members, repeated until stable.
//!
//! # Random stream
//!
//! Each run uses `ChaCha8Rng::seed_from_u64(seed)` from `rand_chacha` 0.9
//! (the seed is expanded by `rand_core`'s PCG32-based `seed_from_u64`). One
//! uniform `f64` is drawn per check as `(next_u64 >> 11) * 2^-53`, and the
//! check succeeds when the draw is `< p_y`. Ensemble run `k` uses `seed + k`.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assignment::{ClusterAssignment, NOISE};
use crate::centers::CenterSelection;
use crate::density::{descending_density, DensityProfile};
use crate::error::{Error, Result};
use crate::metrics;
use crate::neighborhood::NeighborhoodIndex;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagationConfig {
    /// Scaling constant `C`.
    pub c: f64,
    /// Number of boosted checks at the start of each round; `None` uses the
    /// natural eigenvalue.
    pub boost_checks: Option<usize>,
    pub boost_factor: f64,
    pub seed: u64,
    pub runs: usize,
    /// Test hook: every check succeeds.
    #[serde(default)]
    pub always_infect: bool,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        Self {
            c: 0.6,
            boost_checks: None,
            boost_factor: 1.5,
            seed: 0,
            runs: 1,
            always_infect: false,
        }
    }
}

impl PropagationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidParameter(format!("C must be positive, got {}", self.c)));
        }
        if !(self.boost_factor >= 1.0 && self.boost_factor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "boost factor must be at least 1, got {}",
                self.boost_factor
            )));
        }
        if self.runs == 0 {
            return Err(Error::InvalidParameter("runs must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }
}

/// Counts over density positions `0..n` (Fenwick tree).
#[derive(Debug, Clone)]
struct RankCounter {
    tree: Vec<i32>,
    total: usize,
}

impl RankCounter {
    fn new(n: usize) -> Self {
        Self {
            tree: vec![0; n + 1],
            total: 0,
        }
    }

    fn add(&mut self, pos: usize, delta: i32) {
        self.total = (self.total as i64 + delta as i64) as usize;
        let mut i = pos + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Entries strictly below `pos`.
    fn below(&self, pos: usize) -> usize {
        let mut i = pos;
        let mut s = 0i32;
        while i > 0 {
            s += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        s as usize
    }
}

/// Infected set and unchecked frontier of the current round, indexed by
/// ascending density position.
#[derive(Debug, Clone)]
pub struct RoundState {
    position: Vec<usize>,
    infected: RankCounter,
    frontier: RankCounter,
}

impl RoundState {
    pub fn new(rho: &[f64]) -> Self {
        let n = rho.len();
        let mut position = vec![0; n];
        for (k, &i) in descending_density(rho).iter().rev().enumerate() {
            position[i] = k;
        }
        Self {
            position,
            infected: RankCounter::new(n),
            frontier: RankCounter::new(n),
        }
    }

    pub fn add_infected(&mut self, i: usize) {
        self.infected.add(self.position[i], 1);
    }

    pub fn remove_infected(&mut self, i: usize) {
        self.infected.add(self.position[i], -1);
    }

    pub fn push_frontier(&mut self, i: usize) {
        self.frontier.add(self.position[i], 1);
    }

    pub fn pop_frontier(&mut self, i: usize) {
        self.frontier.add(self.position[i], -1);
    }

    /// `(p', p'')` for candidate `y`, which must not be in either set.
    pub fn ranks(&self, y: usize) -> (f64, f64) {
        let pos = self.position[y];
        let p1 = (self.infected.below(pos) + 1) as f64 / (self.infected.total + 1) as f64;
        let p2 = (self.frontier.below(pos) + 1) as f64 / (self.frontier.total + 1) as f64;
        (p1, p2)
    }

    /// `min(1, g * C * (p' + p''))`.
    pub fn infection_probability(&self, y: usize, c: f64, g: f64) -> f64 {
        let (p1, p2) = self.ranks(y);
        (g * c * (p1 + p2)).min(1.0)
    }
}

/// Straight-from-the-definition rank probability: `y` ranked among
/// `infected ∪ {y}` and among `frontier ∪ {y}` under the strict density order.
pub fn rank_probability(rho: &[f64], y: usize, infected: &[usize], frontier: &[usize], c: f64, g: f64) -> f64 {
    let rank = |others: &[usize]| {
        let below = others
            .iter()
            .filter(|&&z| crate::density::density_cmp(rho, z, y).is_lt())
            .count();
        (below + 1) as f64 / (others.len() + 1) as f64
    };
    (g * c * (rank(infected) + rank(frontier))).min(1.0)
}

/// One propagation run followed by the final neighbourhood vote.
pub fn propagate(
    idx: &NeighborhoodIndex,
    profile: &DensityProfile,
    cens: &CenterSelection,
    cfg: &PropagationConfig,
) -> Result<ClusterAssignment> {
    cfg.validate()?;
    if cens.centers.is_empty() {
        return Err(Error::NoCenters);
    }
    let n = profile.len();
    let rho = &profile.rho;
    let boost_checks = cfg.boost_checks.unwrap_or(idx.lambda);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut remaining = cens.centers.clone();
    remaining.sort_by(|&a, &b| crate::density::density_cmp(rho, b, a));

    let mut labels = vec![NOISE; n];
    let mut immune = vec![false; n];
    let mut queued = vec![false; n];
    let mut state = RoundState::new(rho);
    let mut centers_used = Vec::new();
    let mut round_sizes = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut infected_this_round: Vec<usize> = Vec::new();

    while let Some(k) = remaining.iter().position(|&c| labels[c] == NOISE && !immune[c]) {
        let x = remaining.remove(k);
        let round = centers_used.len() as i32;
        centers_used.push(x);
        labels[x] = round;
        state.add_infected(x);
        infected_this_round.push(x);

        for &z in &idx.nnn[x] {
            if labels[z] == NOISE && !immune[z] && !queued[z] {
                queued[z] = true;
                queue.push_back(z);
                state.push_frontier(z);
            }
        }

        let mut checks = 0usize;
        while let Some(y) = queue.pop_front() {
            queued[y] = false;
            state.pop_frontier(y);
            let g = if checks < boost_checks { cfg.boost_factor } else { 1.0 };
            checks += 1;
            let p = state.infection_probability(y, cfg.c, g);
            let draw: f64 = rng.random();
            if cfg.always_infect || draw < p {
                labels[y] = round;
                state.add_infected(y);
                infected_this_round.push(y);
                for &z in &idx.nnn[y] {
                    if labels[z] == NOISE && !immune[z] && !queued[z] {
                        queued[z] = true;
                        queue.push_back(z);
                        state.push_frontier(z);
                    }
                }
            } else {
                immune[y] = true;
            }
        }

        round_sizes.push(infected_this_round.len());
        for z in infected_this_round.drain(..) {
            state.remove_infected(z);
        }
    }

    let partial = ClusterAssignment {
        labels,
        centers_used,
        immune_at_end: (0..n).filter(|&i| immune[i]).collect(),
        fallback_assigned: Vec::new(),
        round_sizes,
    };
    Ok(final_assign(idx, profile, partial))
}

/// Labels every unlabelled point with the cluster holding the largest density
/// sum among its labelled NNN members (ties to the smaller cluster id). Each
/// pass reads the labels as they stood at the start of the pass; passes repeat
/// until one assigns nothing. Whatever remains is noise.
pub fn final_assign(idx: &NeighborhoodIndex, profile: &DensityProfile, mut partial: ClusterAssignment) -> ClusterAssignment {
    let n = partial.labels.len();
    loop {
        let snapshot = partial.labels.clone();
        let mut assigned = 0;
        for x in 0..n {
            if snapshot[x] != NOISE {
                continue;
            }
            let mut sums: Vec<(i32, f64)> = Vec::new();
            for &z in &idx.nnn[x] {
                let l = snapshot[z];
                if l == NOISE {
                    continue;
                }
                match sums.iter_mut().find(|(c, _)| *c == l) {
                    Some((_, s)) => *s += profile.rho[z],
                    None => sums.push((l, profile.rho[z])),
                }
            }
            let best = sums
                .into_iter()
                .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));
            if let Some((label, _)) = best {
                partial.labels[x] = label;
                partial.fallback_assigned.push(x);
                assigned += 1;
            }
        }
        if assigned == 0 {
            break;
        }
    }
    partial.fallback_assigned.sort_unstable();
    partial
}

/// Mean, over points with a non-empty NNN, of the fraction of NNN members
/// carrying the same non-noise label. Used to rank runs without gold labels.
pub fn nnn_agreement(idx: &NeighborhoodIndex, labels: &[i32]) -> f64 {
    let mut total = 0.0;
    let mut count = 0usize;
    for (i, set) in idx.nnn.iter().enumerate() {
        if set.is_empty() {
            continue;
        }
        count += 1;
        if labels[i] == NOISE {
            continue;
        }
        let same = set.iter().filter(|&&j| labels[j] == labels[i]).count();
        total += same as f64 / set.len() as f64;
    }
    if count == 0 {
        0.0
    } else {
        total / count as f64
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub seed: u64,
    pub rounds: usize,
    pub noise: usize,
    pub clusters: usize,
    pub ari: Option<f64>,
    pub ami: Option<f64>,
    pub agreement: f64,
    #[serde(skip)]
    pub assignment: ClusterAssignment,
}

#[derive(Debug, Clone, Serialize)]
pub struct Ensemble {
    /// Index into `runs` of the selected run.
    pub best: usize,
    /// `"ari"` when gold labels were given, `"nnn_agreement"` otherwise.
    pub criterion: &'static str,
    pub runs: Vec<RunSummary>,
}

impl Ensemble {
    pub fn best_run(&self) -> &RunSummary {
        &self.runs[self.best]
    }
}

/// Runs seeds `seed..seed + runs` (in parallel) and keeps the best: highest
/// ARI then AMI against `gold` when given, otherwise the highest
/// [`nnn_agreement`]. Remaining ties go to the earliest seed.
pub fn run_ensemble(
    idx: &NeighborhoodIndex,
    profile: &DensityProfile,
    cens: &CenterSelection,
    cfg: &PropagationConfig,
    gold: Option<&[usize]>,
) -> Result<Ensemble> {
    cfg.validate()?;
    let runs: Vec<RunSummary> = (0..cfg.runs as u64)
        .into_par_iter()
        .map(|k| {
            let seed = cfg.seed.wrapping_add(k);
            let asg = propagate(idx, profile, cens, &cfg.with_seed(seed))?;
            let (ari, ami) = match gold {
                Some(g) => (
                    Some(metrics::ari(g, &asg.labels)?),
                    Some(metrics::ami(g, &asg.labels)?),
                ),
                None => (None, None),
            };
            Ok(RunSummary {
                seed,
                rounds: asg.centers_used.len(),
                noise: asg.noise_count(),
                clusters: asg.cluster_count(),
                ari,
                ami,
                agreement: nnn_agreement(idx, &asg.labels),
                assignment: asg,
            })
        })
        .collect::<Result<_>>()?;

    let key = |r: &RunSummary| match gold {
        Some(_) => (r.ari.unwrap_or(f64::NEG_INFINITY), r.ami.unwrap_or(f64::NEG_INFINITY)),
        None => (r.agreement, 0.0),
    };
    let mut best = 0;
    for (k, r) in runs.iter().enumerate().skip(1) {
        let (a, b) = (key(r), key(&runs[best]));
        if a.0 > b.0 || (a.0 == b.0 && a.1 > b.1) {
            best = k;
        }
    }
    Ok(Ensemble {
        best,
        criterion: if gold.is_some() { "ari" } else { "nnn_agreement" },
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centers;
    use crate::dataset::Dataset;
    use crate::neighborhood::{NeighborOrder, NnnMode};

    fn pipeline(ds: &Dataset) -> (NeighborhoodIndex, DensityProfile, CenterSelection) {
        let dm = ds.pairwise_distances();
        let idx = NeighborhoodIndex::search(&NeighborOrder::build(&dm), NnnMode::Exact);
        let profile = DensityProfile::from_nnn(&dm, &idx, false);
        let cens = centers::select(&profile, Default::default());
        (idx, profile, cens)
    }

    #[test]
    fn config_validation() {
        assert!(PropagationConfig::default().validate().is_ok());
        let bad = PropagationConfig {
            c: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = PropagationConfig {
            boost_factor: 0.5,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = PropagationConfig {
            runs: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn top_rank_probability() {
        let rho = [1.0, 2.0, 3.0, 9.0];
        let mut st = RoundState::new(&rho);
        st.add_infected(0);
        st.add_infected(1);
        st.push_frontier(2);
        assert_eq!(st.ranks(3), (1.0, 1.0));
        assert_eq!(st.infection_probability(3, 0.2, 1.5), 1.5 * 0.2 * 2.0);
        assert_eq!(st.infection_probability(3, 0.6, 1.0), 1.0);
    }

    #[test]
    fn lone_candidate_at_round_start() {
        let rho = [5.0, 1.0];
        let mut st = RoundState::new(&rho);
        st.add_infected(0);
        assert_eq!(st.ranks(1), (0.5, 1.0));
        let c = 0.4;
        let g = 1.5;
        assert_eq!(st.infection_probability(1, c, g), (g * c * (0.5 + 1.0)).min(1.0));
        assert_eq!(rank_probability(&rho, 1, &[0], &[], c, g), st.infection_probability(1, c, g));
    }

    #[test]
    fn rho_ties_break_by_index() {
        let rho = [2.0, 2.0, 2.0];
        let mut st = RoundState::new(&rho);
        st.add_infected(1);
        // 1 ranks above 0 and below 2.
        assert_eq!(st.ranks(0).0, 0.5);
        assert_eq!(st.ranks(2).0, 1.0);
        assert_eq!(rank_probability(&rho, 0, &[1], &[], 1.0, 1.0), (0.5f64 + 1.0).min(1.0));
    }

    #[test]
    fn final_vote_picks_largest_density_sum() {
        // x = 0 with NNN {1, 2, 3}: cluster 1 holds rho 3.1, cluster 2 holds 1.5 + 1.4.
        let idx = NeighborhoodIndex {
            mode: NnnMode::Exact,
            lambda: 3,
            nn: vec![vec![]; 5],
            rnn: vec![vec![]; 5],
            nnn: vec![vec![1, 2, 3], vec![0], vec![0], vec![0], vec![]],
            empty_set_members: vec![4],
            empty_history: vec![],
        };
        let profile = DensityProfile::complete(
            vec![0.1, 3.1, 1.5, 1.4, 0.0],
            vec![1.0; 5],
            vec![Some(1), None, Some(1), Some(1), Some(1)],
            None,
        );
        let partial = ClusterAssignment::from_labels(vec![NOISE, 1, 2, 2, NOISE]);
        let out = final_assign(&idx, &profile, partial);
        assert_eq!(out.labels, vec![1, 1, 2, 2, NOISE]);
        assert_eq!(out.fallback_assigned, vec![0]);
    }

    #[test]
    fn unanimous_neighbourhood_and_chained_passes() {
        let idx = NeighborhoodIndex {
            mode: NnnMode::Exact,
            lambda: 1,
            nn: vec![vec![]; 3],
            rnn: vec![vec![]; 3],
            nnn: vec![vec![1], vec![0, 2], vec![1]],
            empty_set_members: vec![],
            empty_history: vec![],
        };
        let profile = DensityProfile::complete(vec![1.0; 3], vec![1.0; 3], vec![Some(2), Some(2), None], None);
        let out = final_assign(&idx, &profile, ClusterAssignment::from_labels(vec![2, NOISE, NOISE]));
        assert_eq!(out.labels, vec![2, 2, 2]);
    }

    #[test]
    fn empty_centers_rejected() {
        let ds = Dataset::from_rows("t", vec![vec![0.0], vec![1.0], vec![5.0]], None).unwrap();
        let (idx, profile, mut cens) = pipeline(&ds);
        cens.centers.clear();
        assert!(matches!(
            propagate(&idx, &profile, &cens, &PropagationConfig::default()),
            Err(Error::NoCenters)
        ));
    }

    #[test]
    fn certain_infection_floods_component() {
        let rows: Vec<Vec<f64>> = (0..12).map(|k| vec![k as f64, (k * k % 5) as f64 * 0.1]).collect();
        let ds = Dataset::from_rows("t", rows, None).unwrap();
        let (idx, profile, cens) = pipeline(&ds);
        let cfg = PropagationConfig {
            always_infect: true,
            ..Default::default()
        };
        let asg = propagate(&idx, &profile, &cens, &cfg).unwrap();
        // NNN graph of a line is connected, so one round reaches everyone.
        assert_eq!(asg.round_sizes, vec![12]);
        assert!(asg.labels.iter().all(|&l| l == 0));
        assert!(asg.immune_at_end.is_empty());
    }

    #[test]
    fn same_seed_same_labels() {
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|k| {
                let t = k as f64 * 0.7;
                vec![t.cos() * (1.0 + k as f64 * 0.05), t.sin()]
            })
            .collect();
        let ds = Dataset::from_rows("t", rows, None).unwrap();
        let (idx, profile, cens) = pipeline(&ds);
        let cfg = PropagationConfig {
            seed: 11,
            ..Default::default()
        };
        let a = propagate(&idx, &profile, &cens, &cfg).unwrap();
        let b = propagate(&idx, &profile, &cens, &cfg).unwrap();
        assert_eq!(a, b);
        let ens = run_ensemble(&idx, &profile, &cens, &cfg, None).unwrap();
        assert_eq!(ens.runs.len(), 1);
        assert_eq!(ens.best_run().assignment, a);
    }
}
