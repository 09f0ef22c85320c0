//! Automatic seed selection.
//!
//! Candidates are points whose `gamma` sits more than 1.65 spreads above the
//! mean `gamma`; the final centres are the candidates whose `theta` lies
//! within 1.96 spreads of the candidates' mean `theta`. Spreads are
//! population statistics, either the standard deviation (default) or the
//! variance.

use serde::{Deserialize, Serialize};

use crate::density::DensityProfile;
use crate::error::Error;

/// One-sided 95% normal quantile.
pub const CANDIDATE_Z: f64 = 1.65;
/// Two-sided 95% normal quantile.
pub const CENTER_Z: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpreadMode {
    #[default]
    #[serde(alias = "std")]
    StdDev,
    #[serde(alias = "var")]
    Variance,
}

impl std::str::FromStr for SpreadMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "std" | "std_dev" | "stddev" => Ok(Self::StdDev),
            "var" | "variance" => Ok(Self::Variance),
            other => Err(Error::InvalidParameter(format!("unknown spread mode {other:?}"))),
        }
    }
}

/// Population mean and spread of the finite values.
pub fn mean_and_spread(values: impl IntoIterator<Item = f64>, mode: SpreadMode) -> (f64, f64) {
    let vals: Vec<f64> = values.into_iter().filter(|v| v.is_finite()).collect();
    if vals.is_empty() {
        return (0.0, 0.0);
    }
    let m = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / m;
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / m;
    let spread = match mode {
        SpreadMode::StdDev => var.sqrt(),
        SpreadMode::Variance => var,
    };
    (mean, spread)
}

/// Per-candidate entry of the selection report.
#[derive(Debug, Clone, Serialize)]
pub struct CandidateReport {
    pub index: usize,
    pub gamma: f64,
    pub theta: f64,
    pub kept: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CenterSelection {
    /// Candidates in descending `gamma` order.
    pub candidates: Vec<usize>,
    /// Final centres in descending `gamma` order.
    pub centers: Vec<usize>,
    pub gamma_mean: f64,
    pub gamma_spread: f64,
    pub gamma_threshold: f64,
    pub theta_mean: f64,
    pub theta_spread: f64,
    pub theta_bound: f64,
    pub spread_mode: SpreadMode,
    /// Set when the filter left nothing and the `gamma` maximum was used.
    pub fallback: bool,
    pub report: Vec<CandidateReport>,
}

/// Thresholds applied by [`select_candidates_with`]; exposed so the multiplier can be varied.
#[derive(Debug, Clone, Copy)]
pub struct CandidateStats {
    pub mean: f64,
    pub spread: f64,
}

pub fn candidate_stats(profile: &DensityProfile, mode: SpreadMode) -> CandidateStats {
    let (mean, spread) = mean_and_spread(profile.gamma.iter().copied(), mode);
    CandidateStats { mean, spread }
}

/// `{i : gamma_i > mean + z * spread}` in descending `gamma` order.
pub fn select_candidates_with(profile: &DensityProfile, mode: SpreadMode, z: f64) -> Vec<usize> {
    let stats = candidate_stats(profile, mode);
    let threshold = stats.mean + z * stats.spread;
    profile
        .gamma_order()
        .into_iter()
        .filter(|&i| profile.gamma[i] > threshold)
        .collect()
}

pub fn select_candidates(profile: &DensityProfile, mode: SpreadMode) -> Vec<usize> {
    select_candidates_with(profile, mode, CANDIDATE_Z)
}

pub fn select_centers(profile: &DensityProfile, candidates: &[usize], mode: SpreadMode) -> CenterSelection {
    let stats = candidate_stats(profile, mode);
    let (theta_mean, theta_spread) = mean_and_spread(candidates.iter().map(|&i| profile.theta[i]), mode);
    let theta_bound = CENTER_Z * theta_spread;
    let keep = |i: usize| {
        let t = profile.theta[i];
        t.is_finite() && (t - theta_mean).abs() < theta_bound
    };
    let mut report: Vec<CandidateReport> = candidates
        .iter()
        .map(|&i| CandidateReport {
            index: i,
            gamma: profile.gamma[i],
            theta: profile.theta[i],
            kept: false,
        })
        .collect();

    let mut centers: Vec<usize> = if theta_spread == 0.0 {
        // Every finite candidate sits exactly on the mean.
        candidates.iter().copied().filter(|&i| profile.theta[i].is_finite()).collect()
    } else {
        candidates.iter().copied().filter(|&i| keep(i)).collect()
    };
    let fallback = centers.is_empty();
    if fallback {
        centers.push(profile.gamma_order()[0]);
        log::warn!("center filter left nothing; using the gamma maximum {}", centers[0]);
    }
    for r in &mut report {
        r.kept = centers.contains(&r.index);
    }
    CenterSelection {
        candidates: candidates.to_vec(),
        centers,
        gamma_mean: stats.mean,
        gamma_spread: stats.spread,
        gamma_threshold: stats.mean + CANDIDATE_Z * stats.spread,
        theta_mean,
        theta_spread,
        theta_bound,
        spread_mode: mode,
        fallback,
        report,
    }
}

/// Both stages in one call.
pub fn select(profile: &DensityProfile, mode: SpreadMode) -> CenterSelection {
    let candidates = select_candidates(profile, mode);
    select_centers(profile, &candidates, mode)
}

impl CenterSelection {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serialises")
    }
}
