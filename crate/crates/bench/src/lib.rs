//! Benchmark harness around `ppnnn-core`: dataset registry, synthetic
//! generators, parameter grids, report tables and SVG scatter plots.

pub mod bench;
pub mod error;
pub mod fetch;
pub mod plot;
pub mod registry;
pub mod synth;

pub use bench::{run_benchmark, Algorithm, Context, EvalReport, Outcome, RunSpec};
pub use error::{BenchError, Result};
