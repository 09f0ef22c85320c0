//! Reference algorithms: classic density-peak clustering (no halo step),
//! Lloyd's K-means with random-point initialisation, and DBSCAN.

use std::collections::VecDeque;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assignment::{ClusterAssignment, NOISE};
use crate::dataset::{distance_percentile, Dataset, DistanceMatrix};
use crate::density::{self, descending_density, DensityProfile};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    Cutoff,
    #[default]
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DpcParams {
    /// `d_c` as a percentile (0-100) of all pairwise distances.
    pub d_c_percentile: f64,
    pub k: usize,
    pub kernel: Kernel,
}

impl DpcParams {
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.d_c_percentile > 0.0 && self.d_c_percentile < 100.0) {
            return Err(Error::InvalidParameter(format!(
                "d_c percentile must lie in (0, 100), got {}",
                self.d_c_percentile
            )));
        }
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if self.k > n {
            return Err(Error::TooManyClusters { k: self.k, n });
        }
        Ok(())
    }
}

/// Classic DPC: kernel density at the percentile cutoff, the `k` largest
/// `gamma` as centres, and every other point labelled like its nearest denser
/// neighbour.
pub fn dpc_cluster(dm: &DistanceMatrix, params: &DpcParams) -> Result<ClusterAssignment> {
    params.validate(dm.len())?;
    let d_c = distance_percentile(&dm.sorted_pair_distances(), params.d_c_percentile);
    if d_c <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "percentile {} gives a zero cutoff distance",
            params.d_c_percentile
        )));
    }
    let rho = match params.kernel {
        Kernel::Cutoff => density::rho_cutoff(dm, d_c)?,
        Kernel::Gaussian => density::rho_gaussian(dm, d_c)?,
    };
    let profile = DensityProfile::from_rho(dm, rho);
    Ok(dpc_assign(dm, &profile, params.k))
}

/// Centre choice and nearest-denser-neighbour labelling on a finished profile.
pub fn dpc_assign(dm: &DistanceMatrix, profile: &DensityProfile, k: usize) -> ClusterAssignment {
    let n = profile.len();
    let centers: Vec<usize> = profile.gamma_order().into_iter().take(k).collect();
    let mut labels = vec![NOISE; n];
    for (c, &i) in centers.iter().enumerate() {
        labels[i] = c as i32;
    }
    for i in descending_density(&profile.rho) {
        if labels[i] != NOISE {
            continue;
        }
        labels[i] = match profile.nhd[i] {
            Some(parent) => labels[parent],
            // Density peak not picked as a centre: join the closest centre.
            None => {
                let nearest = centers
                    .iter()
                    .enumerate()
                    .min_by(|a, b| dm.get(i, *a.1).total_cmp(&dm.get(i, *b.1)))
                    .map(|(c, _)| c)
                    .expect("k >= 1");
                nearest as i32
            }
        };
    }
    ClusterAssignment {
        labels,
        centers_used: centers,
        ..Default::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KmeansParams {
    pub k: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Independent initialisations; the lowest inertia wins.
    pub restarts: usize,
}

impl Default for KmeansParams {
    fn default() -> Self {
        Self {
            k: 2,
            max_iters: 300,
            seed: 0,
            restarts: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KmeansResult {
    pub assignment: ClusterAssignment,
    pub centroids: Vec<Vec<f64>>,
    pub inertia: f64,
    pub iterations: usize,
    /// Inertia after every assignment step of the winning restart.
    pub inertia_trace: Vec<f64>,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest_centroid(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, mu) in centroids.iter().enumerate() {
        let d = sq_dist(p, mu);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn lloyd(ds: &Dataset, k: usize, max_iters: usize, rng: &mut ChaCha8Rng) -> KmeansResult {
    let n = ds.len();
    let dim = ds.dim();
    let mut centroids: Vec<Vec<f64>> = sample(rng, n, k).into_iter().map(|i| ds.point(i).to_vec()).collect();
    let mut assign = vec![usize::MAX; n];
    let mut dist = vec![0.0; n];
    let mut trace = Vec::new();
    let mut iterations = 0;

    while iterations < max_iters {
        iterations += 1;
        let mut changed = false;
        for (i, p) in ds.points().enumerate() {
            let (c, d) = nearest_centroid(p, &centroids);
            if assign[i] != c {
                assign[i] = c;
                changed = true;
            }
            dist[i] = d;
        }
        trace.push(dist.iter().sum());
        if !changed {
            break;
        }

        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (i, p) in ds.points().enumerate() {
            counts[assign[i]] += 1;
            for (s, v) in sums[assign[i]].iter_mut().zip(p) {
                *s += v;
            }
        }
        let mut taken = vec![false; n];
        for c in 0..k {
            if counts[c] > 0 {
                for s in &mut sums[c] {
                    *s /= counts[c] as f64;
                }
                centroids[c] = std::mem::take(&mut sums[c]);
            } else {
                // Empty cluster: move it onto the worst-served point.
                let far = (0..n)
                    .filter(|&i| !taken[i])
                    .max_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(b.cmp(&a)))
                    .expect("k <= n leaves a free point");
                taken[far] = true;
                centroids[c] = ds.point(far).to_vec();
            }
        }
    }

    let inertia = *trace.last().unwrap_or(&0.0);
    KmeansResult {
        assignment: ClusterAssignment::from_labels(assign.iter().map(|&c| c as i32).collect()),
        centroids,
        inertia,
        iterations,
        inertia_trace: trace,
    }
}

pub fn kmeans_cluster(ds: &Dataset, params: &KmeansParams) -> Result<KmeansResult> {
    let n = ds.len();
    if params.k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if params.k > n {
        return Err(Error::TooManyClusters { k: params.k, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut best: Option<KmeansResult> = None;
    for _ in 0..params.restarts.max(1) {
        let run = lloyd(ds, params.k, params.max_iters.max(1), &mut rng);
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DbscanParams {
    pub eps: f64,
    /// Neighbours within `eps` (the point itself included) needed for a core point.
    pub min_pts: usize,
}

/// DBSCAN with `d <= eps` neighbourhoods, expanded in index order.
pub fn dbscan_cluster(dm: &DistanceMatrix, params: &DbscanParams) -> Result<ClusterAssignment> {
    if !(params.eps > 0.0 && params.eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {}", params.eps)));
    }
    if params.min_pts == 0 {
        return Err(Error::InvalidParameter("min_pts must be at least 1".into()));
    }
    let n = dm.len();
    let neighbours: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| dm.get(i, j) <= params.eps).collect())
        .collect();
    let core: Vec<bool> = neighbours.iter().map(|nb| nb.len() >= params.min_pts).collect();

    let mut labels = vec![NOISE; n];
    let mut next = 0i32;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if labels[start] != NOISE || !core[start] {
            continue;
        }
        labels[start] = next;
        queue.push_back(start);
        while let Some(p) = queue.pop_front() {
            for &q in &neighbours[p] {
                if labels[q] == NOISE {
                    labels[q] = next;
                    if core[q] {
                        queue.push_back(q);
                    }
                }
            }
        }
        next += 1;
    }
    Ok(ClusterAssignment::from_labels(labels))
}
