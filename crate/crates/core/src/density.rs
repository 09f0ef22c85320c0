//! Local density, separation and the `gamma` / `theta` centre scores.
//!
//! Densities are compared under a strict total order: higher `rho` wins, and
//! equal `rho` is resolved in favour of the higher point index. Exactly one
//! point (the maximum) has no denser neighbour.

use std::cmp::Ordering;
use std::io::Write;

use serde::Serialize;

use crate::dataset::DistanceMatrix;
use crate::error::{Error, Result};
use crate::neighborhood::NeighborhoodIndex;

/// `Ordering` of point `a` relative to `b` under the strict density order.
#[inline]
pub fn density_cmp(rho: &[f64], a: usize, b: usize) -> Ordering {
    rho[a].total_cmp(&rho[b]).then(a.cmp(&b))
}

/// Point indices sorted from densest to sparsest.
pub fn descending_density(rho: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..rho.len()).collect();
    idx.sort_by(|&a, &b| density_cmp(rho, b, a));
    idx
}

/// NNN kernel density together with the per-point bandwidth.
#[derive(Debug, Clone)]
pub struct NnnDensity {
    pub rho: Vec<f64>,
    /// Distance to the farthest NNN member (0 for empty neighbourhoods).
    pub sigma: Vec<f64>,
    /// Points whose NNN members all coincide with them (`sigma = 0`).
    pub zero_sigma: Vec<usize>,
}

/// `rho_i = sum over NNN(i) of exp(-(d_ij / sigma_i)^2)`.
///
/// Empty neighbourhoods give `rho = 0` unless `fallback_to_nn` is set, in
/// which case the `lambda` nearest neighbours stand in for the NNN.
pub fn rho_nnn(dm: &DistanceMatrix, idx: &NeighborhoodIndex, fallback_to_nn: bool) -> NnnDensity {
    let n = dm.len();
    let mut rho = vec![0.0; n];
    let mut sigma = vec![0.0; n];
    let mut zero_sigma = Vec::new();
    for i in 0..n {
        let members = if idx.nnn[i].is_empty() && fallback_to_nn {
            &idx.nn[i]
        } else {
            &idx.nnn[i]
        };
        if members.is_empty() {
            continue;
        }
        let s = members.iter().map(|&j| dm.get(i, j)).fold(0.0, f64::max);
        sigma[i] = s;
        if s == 0.0 {
            log::warn!("point {i}: all NNN members coincide with it; each contributes 1");
            zero_sigma.push(i);
            rho[i] = members.len() as f64;
            continue;
        }
        rho[i] = members
            .iter()
            .map(|&j| {
                let u = dm.get(i, j) / s;
                (-u * u).exp()
            })
            .sum();
    }
    NnnDensity { rho, sigma, zero_sigma }
}

fn check_cutoff(d_c: f64) -> Result<()> {
    if d_c > 0.0 && d_c.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("cutoff distance must be positive, got {d_c}")))
    }
}

/// Neighbour count within `d_c` (strictly closer).
pub fn rho_cutoff(dm: &DistanceMatrix, d_c: f64) -> Result<Vec<f64>> {
    check_cutoff(d_c)?;
    Ok((0..dm.len())
        .map(|i| {
            dm.row(i)
                .iter()
                .enumerate()
                .filter(|&(j, &d)| j != i && d < d_c)
                .count() as f64
        })
        .collect())
}

/// Gaussian kernel density with bandwidth `d_c`.
pub fn rho_gaussian(dm: &DistanceMatrix, d_c: f64) -> Result<Vec<f64>> {
    check_cutoff(d_c)?;
    Ok((0..dm.len())
        .map(|i| {
            dm.row(i)
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &d)| {
                    let u = d / d_c;
                    (-u * u).exp()
                })
                .sum()
        })
        .collect())
}

/// Distance to the nearest strictly denser point and that point's index.
/// The global maximum gets its largest distance and no parent.
pub fn delta_and_nhd(dm: &DistanceMatrix, rho: &[f64]) -> (Vec<f64>, Vec<Option<usize>>) {
    let n = dm.len();
    let order = descending_density(rho);
    let mut delta = vec![0.0; n];
    let mut nhd = vec![None; n];
    let top = order[0];
    delta[top] = dm.row(top).iter().copied().fold(0.0, f64::max);
    for (k, &i) in order.iter().enumerate().skip(1) {
        let row = dm.row(i);
        let mut best = order[0];
        for &j in &order[1..k] {
            let (dj, db) = (row[j], row[best]);
            if dj < db || (dj == db && j < best) {
                best = j;
            }
        }
        delta[i] = row[best];
        nhd[i] = Some(best);
    }
    (delta, nhd)
}

/// Per-point density statistics.
#[derive(Debug, Clone, Serialize)]
pub struct DensityProfile {
    pub rho: Vec<f64>,
    pub delta: Vec<f64>,
    pub gamma: Vec<f64>,
    /// `rho / delta`; `+inf` when `delta = 0`.
    pub theta: Vec<f64>,
    pub nhd: Vec<Option<usize>>,
    /// NNN bandwidths; absent for the cutoff and Gaussian kernels.
    pub sigma: Option<Vec<f64>>,
}

impl DensityProfile {
    /// Fills `gamma` and `theta` from `rho` and `delta`.
    pub fn complete(rho: Vec<f64>, delta: Vec<f64>, nhd: Vec<Option<usize>>, sigma: Option<Vec<f64>>) -> Self {
        let gamma = rho.iter().zip(&delta).map(|(r, d)| r * d).collect();
        let theta = rho
            .iter()
            .zip(&delta)
            .map(|(&r, &d)| if d > 0.0 { r / d } else { f64::INFINITY })
            .collect();
        Self {
            rho,
            delta,
            gamma,
            theta,
            nhd,
            sigma,
        }
    }

    /// Full NNN-kernel profile.
    pub fn from_nnn(dm: &DistanceMatrix, idx: &NeighborhoodIndex, fallback_to_nn: bool) -> Self {
        let dens = rho_nnn(dm, idx, fallback_to_nn);
        let (delta, nhd) = delta_and_nhd(dm, &dens.rho);
        Self::complete(dens.rho, delta, nhd, Some(dens.sigma))
    }

    pub fn from_rho(dm: &DistanceMatrix, rho: Vec<f64>) -> Self {
        let (delta, nhd) = delta_and_nhd(dm, &rho);
        Self::complete(rho, delta, nhd, None)
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    /// Strictly denser than `b`?
    pub fn denser(&self, a: usize, b: usize) -> bool {
        density_cmp(&self.rho, a, b) == Ordering::Greater
    }

    /// The unique point without a denser neighbour.
    pub fn peak(&self) -> usize {
        self.nhd
            .iter()
            .position(Option::is_none)
            .expect("profile always has a density maximum")
    }

    /// Indices by descending `gamma`, ties by ascending index.
    pub fn gamma_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.gamma[b].total_cmp(&self.gamma[a]).then(a.cmp(&b)));
        idx
    }

    /// CSV dump (`index,rho,delta,gamma,theta,nhd`) for decision graphs.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "index,rho,delta,gamma,theta,nhd")?;
        for i in 0..self.len() {
            let nhd = self.nhd[i].map(|j| j.to_string()).unwrap_or_default();
            writeln!(
                w,
                "{i},{:?},{:?},{:?},{:?},{nhd}",
                self.rho[i], self.delta[i], self.gamma[i], self.theta[i]
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;
    use crate::neighborhood::{NeighborOrder, NnnMode};

    fn line(xs: &[f64]) -> DistanceMatrix {
        Dataset::from_rows("t", xs.iter().map(|&x| vec![x]).collect(), None)
            .unwrap()
            .pairwise_distances()
    }

    #[test]
    fn cutoff_counts() {
        let dm = line(&[0.0, 1.0, 2.0]);
        assert_eq!(rho_cutoff(&dm, 1.5).unwrap(), vec![1.0, 2.0, 1.0]);
        assert_eq!(rho_cutoff(&dm, 0.5).unwrap(), vec![0.0; 3]);
        assert_eq!(rho_cutoff(&dm, 10.0).unwrap(), vec![2.0; 3]);
        // boundary distance contributes nothing
        assert_eq!(rho_cutoff(&dm, 1.0).unwrap(), vec![0.0; 3]);
        assert!(rho_cutoff(&dm, 0.0).is_err());
    }

    #[test]
    fn gaussian_point_values() {
        let dm = line(&[0.0, 2.0]);
        let rho = rho_gaussian(&dm, 2.0).unwrap();
        assert_eq!(rho, vec![(-1.0f64).exp(); 2]);
        let dup = line(&[1.0, 1.0]);
        assert_eq!(rho_gaussian(&dup, 0.3).unwrap(), vec![1.0, 1.0]);
        assert!(rho_gaussian(&dm, -1.0).is_err());
    }

    #[test]
    fn single_member_nnn_gives_inverse_e() {
        let dm = line(&[0.0, 1.0, 5.0, 7.0]);
        let idx = NeighborhoodIndex::search(&NeighborOrder::build(&dm), NnnMode::Exact);
        assert_eq!(idx.nnn[0], vec![1]);
        let dens = rho_nnn(&dm, &idx, false);
        assert_eq!(dens.rho[0], (-1.0f64).exp());
        assert_eq!(dens.sigma[0], 1.0);
    }

    #[test]
    fn empty_nnn_has_zero_density_unless_fallback() {
        let mut rows: Vec<Vec<f64>> = (0..30).map(|k| vec![(k % 6) as f64 * 0.1, (k / 6) as f64 * 0.1]).collect();
        rows.push(vec![100.0, 100.0]);
        let dm = Dataset::from_rows("t", rows, None).unwrap().pairwise_distances();
        let idx = NeighborhoodIndex::search(&NeighborOrder::build(&dm), NnnMode::Logarithmic);
        assert_eq!(idx.empty_set_members, vec![30]);
        assert_eq!(rho_nnn(&dm, &idx, false).rho[30], 0.0);
        assert!(rho_nnn(&dm, &idx, true).rho[30] > 0.0);
    }

    #[test]
    fn zero_sigma_counts_each_member_once() {
        let dm = line(&[0.0, 0.0, 10.0, 10.0]);
        let idx = NeighborhoodIndex::search(&NeighborOrder::build(&dm), NnnMode::Exact);
        let dens = rho_nnn(&dm, &idx, false);
        assert_eq!(dens.rho, vec![1.0; 4]);
        assert_eq!(dens.zero_sigma, vec![0, 1, 2, 3]);
    }

    #[test]
    fn two_point_delta() {
        let dm = line(&[0.0, 3.0]);
        let (delta, nhd) = delta_and_nhd(&dm, &[1.0, 2.0]);
        assert_eq!(delta, vec![3.0, 3.0]);
        assert_eq!(nhd, vec![Some(1), None]);
    }

    #[test]
    fn equal_density_chains_by_index() {
        // Unit square corners: 0=(0,0) 1=(1,0) 2=(0,1) 3=(1,1).
        let dm = Dataset::from_rows(
            "t",
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
            None,
        )
        .unwrap()
        .pairwise_distances();
        let (delta, nhd) = delta_and_nhd(&dm, &[1.0; 4]);
        // Denser than 2 is only 3; denser than 1 are {2, 3}; denser than 0 are {1, 2, 3}.
        assert_eq!(nhd, vec![Some(1), Some(3), Some(3), None]);
        assert_eq!(delta[3], 2f64.sqrt());
        assert_eq!(delta[0], 1.0);
        assert_eq!(delta[1], 1.0);
        assert_eq!(delta[2], 1.0);
    }

    #[test]
    fn gamma_theta_arithmetic() {
        let p = DensityProfile::complete(
            vec![2.0, 0.0, 3.0],
            vec![0.5, 7.0, 0.0],
            vec![Some(2), Some(2), None],
            None,
        );
        assert_eq!(p.gamma, vec![1.0, 0.0, 0.0]);
        assert_eq!(p.theta[0], 4.0);
        assert_eq!(p.theta[1], 0.0);
        assert!(p.theta[2].is_infinite());
    }

    #[test]
    fn csv_dump_has_header_and_rows() {
        let p = DensityProfile::complete(vec![1.0, 2.0], vec![1.0, 1.0], vec![Some(1), None], None);
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().count(), 3);
        assert!(s.lines().nth(2).unwrap().ends_with(','));
    }
}
