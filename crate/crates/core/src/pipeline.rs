//! The deterministic front half of DPC-PPNNN (neighbourhoods, density,
//! centres), computed once and reused across propagation runs.

use serde::{Deserialize, Serialize};

use crate::assignment::ClusterAssignment;
use crate::centers::{self, CenterSelection, SpreadMode};
use crate::dataset::{Dataset, DistanceMatrix};
use crate::density::DensityProfile;
use crate::error::Result;
use crate::neighborhood::{NeighborOrder, NeighborhoodIndex, NnnMode};
use crate::propagation::{self, Ensemble, PropagationConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PpnnnOptions {
    pub nnn_mode: NnnMode,
    pub spread_mode: SpreadMode,
    /// Give empty-NNN points a density from their `lambda` nearest neighbours.
    pub density_fallback: bool,
}

#[derive(Debug, Clone)]
pub struct Prepared {
    pub distances: DistanceMatrix,
    pub index: NeighborhoodIndex,
    pub profile: DensityProfile,
    pub centers: CenterSelection,
}

impl Prepared {
    pub fn new(ds: &Dataset, opts: &PpnnnOptions) -> Self {
        Self::from_distances(ds.pairwise_distances(), opts)
    }

    pub fn from_distances(distances: DistanceMatrix, opts: &PpnnnOptions) -> Self {
        let order = NeighborOrder::build(&distances);
        let index = NeighborhoodIndex::search(&order, opts.nnn_mode);
        let profile = DensityProfile::from_nnn(&distances, &index, opts.density_fallback);
        let centers = centers::select(&profile, opts.spread_mode);
        Self {
            distances,
            index,
            profile,
            centers,
        }
    }

    pub fn run(&self, cfg: &PropagationConfig) -> Result<ClusterAssignment> {
        propagation::propagate(&self.index, &self.profile, &self.centers, cfg)
    }

    pub fn ensemble(&self, cfg: &PropagationConfig, gold: Option<&[usize]>) -> Result<Ensemble> {
        propagation::run_ensemble(&self.index, &self.profile, &self.centers, cfg, gold)
    }
}

/// One-shot DPC-PPNNN on a dataset.
pub fn dpc_ppnnn(ds: &Dataset, opts: &PpnnnOptions, cfg: &PropagationConfig) -> Result<ClusterAssignment> {
    Prepared::new(ds, opts).run(cfg)
}
