//! Density-peak clustering driven by natural nearest neighbourhoods.
//!
//! The pipeline is:
//!
//! 1. [`dataset`]: load and normalise points, build the dense distance matrix.
//! 2. [`neighborhood`]: sort neighbours and search for the (logarithmic)
//!    natural eigenvalue and the natural nearest neighbourhood of every point.
//! 3. [`density`]: local density `rho`, separation `delta` and the derived
//!    `gamma = rho * delta` and `theta = rho / delta` scores.
//! 4. [`centers`]: pick seeds with the two-stage `gamma`/`theta` filter.
//! 5. [`propagation`]: grow clusters from the seeds by stochastic,
//!    rank-weighted infection along NNN links.
//!
//! [`baselines`] holds classic DPC, Lloyd's K-means and DBSCAN, and
//! [`metrics`] the ARI / AMI / FMI external indices.

pub mod assignment;
pub mod baselines;
pub mod centers;
pub mod dataset;
pub mod density;
pub mod error;
pub mod metrics;
pub mod neighborhood;
pub mod pipeline;
pub mod propagation;

pub use assignment::{ClusterAssignment, NOISE};
pub use centers::{CenterSelection, SpreadMode};
pub use dataset::{Dataset, DistanceMatrix};
pub use density::DensityProfile;
pub use error::{Error, Result};
pub use neighborhood::{NeighborOrder, NeighborhoodIndex, NnnMode};
pub use propagation::PropagationConfig;
